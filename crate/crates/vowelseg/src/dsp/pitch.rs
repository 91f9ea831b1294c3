//! Fundamental-frequency estimation and voicing detection.
//!
//! Per frame we take the normalized cross-correlation between the analysis
//! window and its lagged copy over the 60-400 Hz period range. The frame is
//! voiced when the best peak exceeds a fixed threshold; a small octave bias
//! steers ties between a period and its multiples toward the shorter lag.

use super::{FrameGrid, Waveform};

const F0_MIN: f64 = 60.0;
const F0_MAX: f64 = 400.0;
const VOICING_THRESHOLD: f64 = 0.45;
const OCTAVE_BIAS: f64 = 0.02;
const ENERGY_FLOOR: f64 = 1e-12;
const MIN_OVERLAP: usize = 64;

/// Per-frame pitch estimate; `f0` is 0 when the frame is unvoiced.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PitchFrame {
    pub f0: f64,
    pub voiced: bool,
}

impl PitchFrame {
    const UNVOICED: PitchFrame = PitchFrame { f0: 0.0, voiced: false };
}

/// Normalized correlation of `x[start..start+len]` against the window lagged
/// by `lag`, truncated at the end of the signal.
fn normalized_corr(x: &[f64], start: usize, len: usize, lag: usize) -> f64 {
    let avail = x.len().saturating_sub(start + lag);
    let m = len.min(avail);
    if m < MIN_OVERLAP {
        return 0.0;
    }
    let a = &x[start..start + m];
    let b = &x[start + lag..start + lag + m];
    let mut dot = 0.0;
    let mut ea = 0.0;
    let mut eb = 0.0;
    for (&p, &q) in a.iter().zip(b.iter()) {
        dot += p * q;
        ea += p * p;
        eb += q * q;
    }
    if ea < ENERGY_FLOOR || eb < ENERGY_FLOOR {
        return 0.0;
    }
    dot / (ea * eb).sqrt()
}

/// Pitch and voicing for every frame of the grid. Length equals `T`.
pub fn pitch_track(w: &Waveform, grid: &FrameGrid) -> Vec<PitchFrame> {
    let sr = w.sample_rate() as f64;
    let lag_min = (sr / F0_MAX).floor() as usize;
    let lag_max = (sr / F0_MIN).ceil() as usize;
    let len = grid.window_samples();
    let x = w.samples();

    (1..=grid.num_frames())
        .map(|t| {
            let start = grid.frame_start(t);
            let frame_energy: f64 = x[start..start + len].iter().map(|v| v * v).sum();
            if frame_energy < ENERGY_FLOOR {
                return PitchFrame::UNVOICED;
            }

            let corrs: Vec<f64> = (lag_min..=lag_max)
                .map(|lag| normalized_corr(x, start, len, lag))
                .collect();

            let mut best: Option<(usize, f64)> = None;
            for (i, &r) in corrs.iter().enumerate() {
                let lag = lag_min + i;
                let score = r - OCTAVE_BIAS * (lag as f64 / lag_min as f64).log2();
                if best.map_or(true, |(_, s)| score > s) {
                    best = Some((i, score));
                }
            }
            let (i, _) = best.unwrap();
            if corrs[i] < VOICING_THRESHOLD {
                return PitchFrame::UNVOICED;
            }

            // Parabolic refinement around the winning lag.
            let lag = (lag_min + i) as f64;
            let refined = if i > 0 && i + 1 < corrs.len() {
                let (rm, r0, rp) = (corrs[i - 1], corrs[i], corrs[i + 1]);
                let denom = rm - 2.0 * r0 + rp;
                if denom.abs() > 1e-12 {
                    lag + (0.5 * (rm - rp) / denom).clamp(-0.5, 0.5)
                } else {
                    lag
                }
            } else {
                lag
            };
            PitchFrame { f0: sr / refined, voiced: true }
        })
        .collect()
}
