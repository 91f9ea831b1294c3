//! Automatic measurement of vowel duration in single-word CVC recordings.
//!
//! The library predicts a vowel onset/offset pair for an utterance by scoring
//! every admissible candidate pair with a learned linear model over a fixed
//! map of feature functions, and trains that model with a structured
//! Passive-Aggressive pass followed by direct loss minimization.
//!
//! The pipeline, bottom to top:
//!
//! * [`dsp`] — framing, spectra, MFCCs, pitch and voicing.
//! * [`features`] — the 16-dimensional per-frame acoustic feature matrix.
//! * [`classifier`] — optional frame-level phoneme-class scorer feeding the
//!   vowel/nasal feature columns.
//! * [`featfunc`] — the feature map `phi(x, t_b, t_e)` evaluated with prefix
//!   sums, plus duration priors.
//! * [`decode`] — the tolerant boundary loss, the exact argmax decoder and
//!   its loss-augmented variant.
//! * [`train`] — Passive-Aggressive initialization and direct loss
//!   minimization, packaged into a [`train::Model`].
//! * [`evalkit`] — deviation, hit-rate and correlation metrics against manual
//!   annotations.
//! * [`audio`], [`synth`], [`manifest`], [`model_io`], [`textgrid`] — file
//!   formats and corpus utilities shared with the `vowelseg` command line
//!   tool.

pub mod audio;
pub mod classifier;
pub mod decode;
pub mod dsp;
pub mod error;
pub mod evalkit;
pub mod featfunc;
pub mod features;
pub mod manifest;
mod math;
pub mod model_io;
pub mod synth;
pub mod textgrid;
pub mod train;

pub use error::{Error, Result};

#[cfg(doctest)]
mod booktests {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/signal-processing.md")]
    mod signal_processing {}
    #[doc = include_str!("../../../book/src/acoustic-features.md")]
    mod acoustic_features {}
    #[doc = include_str!("../../../book/src/feature-functions.md")]
    mod feature_functions {}
    #[doc = include_str!("../../../book/src/decoding.md")]
    mod decoding {}
    #[doc = include_str!("../../../book/src/training.md")]
    mod training {}
    #[doc = include_str!("../../../book/src/evaluation.md")]
    mod evaluation {}
    #[doc = include_str!("../../../book/src/file-formats.md")]
    mod file_formats {}
    #[doc = include_str!("../../../book/src/command-line.md")]
    mod command_line {}
}
