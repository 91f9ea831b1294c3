//! Signal-processing front end: framing, spectra, MFCCs, pitch and voicing.
//!
//! Everything here is a pure function of the input waveform and the frame
//! grid, so results are bit-identical across runs and safe to compute from
//! multiple threads.

mod mfcc;
mod pitch;

use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::math::hamming;

pub use mfcc::{mfcc_sequence, MfccFrame, MFCC_DIM};
pub use pitch::{pitch_track, PitchFrame};

/// Floor added inside every log and geometric mean so that silence still
/// produces finite feature values.
pub const EPS_FLOOR: f64 = 1e-10;

/// A mono waveform with amplitudes in [-1, 1].
#[derive(Debug, Clone)]
pub struct Waveform {
    samples: Vec<f64>,
    sample_rate: u32,
}

impl Waveform {
    /// Validates sample range, finiteness and a sample rate of at least
    /// 8 kHz (below that the band above 3 kHz is degenerate).
    pub fn new(samples: Vec<f64>, sample_rate: u32) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidArgument("waveform is empty".into()));
        }
        if sample_rate < 8000 {
            return Err(Error::InvalidArgument(format!(
                "sample rate {sample_rate} Hz is below the 8000 Hz minimum"
            )));
        }
        for (i, &s) in samples.iter().enumerate() {
            if !s.is_finite() || s.abs() > 1.0 + 1e-9 {
                return Err(Error::InvalidArgument(format!(
                    "sample {i} out of range: {s}"
                )));
            }
        }
        Ok(Self { samples, sample_rate })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn sample_rate(&self) -> u32 {
        self.sample_rate
    }

    pub fn duration(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate as f64
    }
}

/// Hop and analysis-window lengths in seconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridParams {
    pub hop: f64,
    pub window: f64,
}

impl Default for GridParams {
    fn default() -> Self {
        Self { hop: 0.005, window: 0.025 }
    }
}

/// Frame layout over a waveform. Frames are 1-indexed; frame `t` covers
/// `[(t-1)*hop, (t-1)*hop + window)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameGrid {
    hop: f64,
    window: f64,
    hop_samples: usize,
    window_samples: usize,
    num_frames: usize,
}

impl FrameGrid {
    pub fn hop(&self) -> f64 {
        self.hop
    }

    pub fn window(&self) -> f64 {
        self.window
    }

    pub fn hop_samples(&self) -> usize {
        self.hop_samples
    }

    pub fn window_samples(&self) -> usize {
        self.window_samples
    }

    /// Total number of frames T.
    pub fn num_frames(&self) -> usize {
        self.num_frames
    }

    /// Start sample of 1-indexed frame `t`.
    pub fn frame_start(&self, t: usize) -> usize {
        (t - 1) * self.hop_samples
    }

    /// Anchor time of frame `t` in seconds (the window start).
    pub fn anchor_time(&self, t: usize) -> f64 {
        (t - 1) as f64 * self.hop
    }

    /// Nearest 1-indexed frame whose anchor matches time `s` seconds,
    /// clamped to the grid.
    pub fn nearest_frame(&self, s: f64) -> usize {
        let t = (s / self.hop).round() as i64 + 1;
        t.clamp(1, self.num_frames as i64) as usize
    }

    fn check_index(&self, t: usize) -> Result<()> {
        if t == 0 || t > self.num_frames {
            Err(Error::FrameIndexOutOfRange { index: t, num_frames: self.num_frames })
        } else {
            Ok(())
        }
    }
}

/// Lays a frame grid over the waveform: `T = floor((duration - window)/hop) + 1`.
pub fn frame_signal(w: &Waveform, params: GridParams) -> Result<FrameGrid> {
    if !(params.hop > 0.0 && params.window > 0.0) {
        return Err(Error::InvalidArgument("hop and window must be positive".into()));
    }
    let sr = w.sample_rate as f64;
    let hop_samples = (params.hop * sr).round() as usize;
    let window_samples = (params.window * sr).round() as usize;
    if hop_samples == 0 || window_samples == 0 {
        return Err(Error::InvalidArgument("hop and window too small for sample rate".into()));
    }
    if w.samples.len() < window_samples {
        return Err(Error::SignalTooShort { samples: w.samples.len(), window_samples });
    }
    let num_frames = (w.samples.len() - window_samples) / hop_samples + 1;
    Ok(FrameGrid {
        hop: params.hop,
        window: params.window,
        hop_samples,
        window_samples,
        num_frames,
    })
}

/// One-sided power spectrum of a single frame.
///
/// Bins are scaled so their plain sum equals the energy of the windowed
/// frame (Parseval), which keeps band energies directly comparable with
/// time-domain energies.
#[derive(Debug, Clone)]
pub struct PowerSpectrumFrame {
    bins: Vec<f64>,
    bin_width: f64,
}

impl PowerSpectrumFrame {
    pub fn from_bins(bins: Vec<f64>, bin_width: f64) -> Result<Self> {
        if bins.is_empty() || !(bin_width > 0.0) {
            return Err(Error::InvalidArgument("empty spectrum or bad bin width".into()));
        }
        for (i, &b) in bins.iter().enumerate() {
            if !b.is_finite() || b < 0.0 {
                return Err(Error::InvalidArgument(format!("bin {i} invalid: {b}")));
            }
        }
        Ok(Self { bins, bin_width })
    }

    pub fn bins(&self) -> &[f64] {
        &self.bins
    }

    pub fn bin_width(&self) -> f64 {
        self.bin_width
    }

    pub fn nyquist(&self) -> f64 {
        (self.bins.len() - 1) as f64 * self.bin_width
    }

    pub fn total_power(&self) -> f64 {
        self.bins.iter().sum()
    }

    pub fn max_power(&self) -> f64 {
        self.bins.iter().cloned().fold(0.0, f64::max)
    }
}

/// Reusable Hamming-window STFT over a fixed grid; plans the FFT once.
pub struct SpectrumAnalyzer {
    fft: Arc<dyn Fft<f64>>,
    window: Vec<f64>,
    nfft: usize,
}

impl SpectrumAnalyzer {
    pub fn new(grid: &FrameGrid) -> Self {
        let nfft = grid.window_samples.next_power_of_two();
        let fft = FftPlanner::new().plan_fft_forward(nfft);
        Self { fft, window: hamming(grid.window_samples), nfft }
    }

    /// Windowed power spectrum of frame `t`; DC through Nyquist.
    pub fn power_frame(&self, w: &Waveform, grid: &FrameGrid, t: usize) -> Result<PowerSpectrumFrame> {
        grid.check_index(t)?;
        let start = grid.frame_start(t);
        let frame = &w.samples[start..start + grid.window_samples];
        let mut buf = vec![Complex::new(0.0, 0.0); self.nfft];
        for (b, (&x, &win)) in buf.iter_mut().zip(frame.iter().zip(self.window.iter())) {
            *b = Complex::new(x * win, 0.0);
        }
        self.fft.process(&mut buf);
        let half = self.nfft / 2;
        let scale = 1.0 / self.nfft as f64;
        let mut bins = Vec::with_capacity(half + 1);
        for (k, c) in buf.iter().take(half + 1).enumerate() {
            let mut p = c.norm_sqr() * scale;
            if k != 0 && k != half {
                p *= 2.0;
            }
            bins.push(p);
        }
        let bin_width = w.sample_rate as f64 / self.nfft as f64;
        Ok(PowerSpectrumFrame { bins, bin_width })
    }
}

/// One-off STFT of frame `t`. Batch callers should reuse a
/// [`SpectrumAnalyzer`] instead.
pub fn stft_frame(w: &Waveform, grid: &FrameGrid, t: usize) -> Result<PowerSpectrumFrame> {
    SpectrumAnalyzer::new(grid).power_frame(w, grid, t)
}

/// Log power in the band `[lo, hi]` Hz: `ln(eps + sum of bins)`.
pub fn band_energy(p: &PowerSpectrumFrame, lo: f64, hi: f64) -> Result<f64> {
    if !(lo >= 0.0 && lo < hi && hi <= p.nyquist() + 1e-9) {
        return Err(Error::InvalidArgument(format!(
            "invalid band [{lo}, {hi}] for nyquist {}",
            p.nyquist()
        )));
    }
    let mut sum = 0.0;
    for (k, &b) in p.bins.iter().enumerate() {
        let f = k as f64 * p.bin_width;
        if f >= lo - 1e-9 && f <= hi + 1e-9 {
            sum += b;
        }
    }
    Ok((EPS_FLOOR + sum).ln())
}

/// Wiener entropy: log of the ratio of geometric to arithmetic mean of the
/// floored power bins. Zero for a flat spectrum, strongly negative for tonal
/// ones, and never positive.
pub fn wiener_entropy(p: &PowerSpectrumFrame) -> f64 {
    let n = p.bins.len() as f64;
    let mut log_sum = 0.0;
    let mut sum = 0.0;
    for &b in &p.bins {
        log_sum += (b + EPS_FLOOR).ln();
        sum += b + EPS_FLOOR;
    }
    let log_gm = log_sum / n;
    let log_am = (sum / n).ln();
    (log_gm - log_am).min(0.0)
}

/// Number of sign changes in the 5 ms window centered on the anchor of
/// frame `t`. Zero samples count as positive so that crossings that land
/// exactly on zero are still seen once.
pub fn zero_crossings(w: &Waveform, grid: &FrameGrid, t: usize) -> Result<usize> {
    grid.check_index(t)?;
    let zc_len = (0.005 * w.sample_rate as f64).round() as usize;
    let anchor = grid.frame_start(t);
    let lo = anchor.saturating_sub(zc_len / 2);
    let hi = (lo + zc_len).min(w.samples.len());
    let window = &w.samples[lo..hi];
    let sign = |x: f64| if x >= 0.0 { 1i8 } else { -1i8 };
    Ok(window.windows(2).filter(|p| sign(p[0]) != sign(p[1])).count())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn sine(freq: f64, dur: f64, sr: u32, amp: f64) -> Waveform {
        let n = (dur * sr as f64).round() as usize;
        let samples = (0..n)
            .map(|i| amp * (2.0 * PI * freq * i as f64 / sr as f64).sin())
            .collect();
        Waveform::new(samples, sr).unwrap()
    }

    fn noise(n: usize, seed: u64, amp: f64) -> Vec<f64> {
        // xorshift, enough for test signals
        let mut state = seed.max(1);
        (0..n)
            .map(|_| {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                amp * ((state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0)
            })
            .collect()
    }

    #[test]
    fn frame_count_examples() {
        let w = sine(440.0, 1.0, 16000, 0.5);
        let grid = frame_signal(&w, GridParams::default()).unwrap();
        assert_eq!(grid.num_frames(), 196);

        let w = sine(440.0, 0.025, 16000, 0.5);
        let grid = frame_signal(&w, GridParams::default()).unwrap();
        assert_eq!(grid.num_frames(), 1);

        let w = Waveform::new(vec![0.1; 384], 16000).unwrap();
        match frame_signal(&w, GridParams::default()) {
            Err(Error::SignalTooShort { .. }) => {}
            other => panic!("expected signal-too-short, got {other:?}"),
        }
    }

    #[test]
    fn waveform_validation() {
        assert!(Waveform::new(vec![], 16000).is_err());
        assert!(Waveform::new(vec![0.0], 4000).is_err());
        assert!(Waveform::new(vec![f64::NAN], 16000).is_err());
        assert!(Waveform::new(vec![1.5], 16000).is_err());
    }

    #[test]
    fn stft_peak_at_tone_frequency() {
        let w = sine(1000.0, 0.1, 16000, 0.5);
        let grid = frame_signal(&w, GridParams::default()).unwrap();
        let p = stft_frame(&w, &grid, 3).unwrap();
        let peak = p
            .bins()
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .unwrap()
            .0;
        let peak_hz = peak as f64 * p.bin_width();
        assert!((peak_hz - 1000.0).abs() <= p.bin_width(), "peak at {peak_hz} Hz");
    }

    #[test]
    fn stft_zero_frame_is_zero() {
        let w = Waveform::new(vec![0.0; 16000], 16000).unwrap();
        let grid = frame_signal(&w, GridParams::default()).unwrap();
        let p = stft_frame(&w, &grid, 10).unwrap();
        assert!(p.bins().iter().all(|&b| b == 0.0));
    }

    #[test]
    fn stft_index_out_of_range() {
        let w = sine(440.0, 0.1, 16000, 0.5);
        let grid = frame_signal(&w, GridParams::default()).unwrap();
        assert!(stft_frame(&w, &grid, 0).is_err());
        assert!(stft_frame(&w, &grid, grid.num_frames() + 1).is_err());
    }

    #[test]
    fn parseval_on_noise_frame() {
        let w = Waveform::new(noise(16000, 7, 0.8), 16000).unwrap();
        let grid = frame_signal(&w, GridParams::default()).unwrap();
        let win = hamming(grid.window_samples());
        for t in [1usize, 50, 196] {
            let p = stft_frame(&w, &grid, t).unwrap();
            let start = grid.frame_start(t);
            let time_energy: f64 = w.samples()[start..start + grid.window_samples()]
                .iter()
                .zip(win.iter())
                .map(|(x, h)| (x * h) * (x * h))
                .sum();
            let rel = (p.total_power() - time_energy).abs() / time_energy;
            assert!(rel < 1e-9, "frame {t}: relative error {rel}");
        }
    }

    #[test]
    fn band_energy_examples() {
        // All-zero frame: any band gives ln(eps).
        let w = Waveform::new(vec![0.0; 16000], 16000).unwrap();
        let grid = frame_signal(&w, GridParams::default()).unwrap();
        let p = stft_frame(&w, &grid, 1).unwrap();
        assert_eq!(band_energy(&p, 20.0, 300.0).unwrap(), EPS_FLOOR.ln());

        // Ideal 100 Hz tone spectrum (all power in the nearest bin): the low
        // band beats the high band by well over 20 natural-log units.
        let bin_width = 16000.0f64 / 512.0;
        let mut bins = vec![0.0; 257];
        bins[(100.0 / bin_width).round() as usize] = 64.0;
        let p = PowerSpectrumFrame::from_bins(bins, bin_width).unwrap();
        let lo = band_energy(&p, 20.0, 300.0).unwrap();
        let hi = band_energy(&p, 3000.0, p.nyquist()).unwrap();
        assert!(lo - hi >= 20.0, "separation only {}", lo - hi);

        // Through the 25 ms Hamming STFT the separation is capped by window
        // leakage at about 17.4; still a decisive margin.
        let w = sine(100.0, 0.1, 16000, 0.9);
        let grid = frame_signal(&w, GridParams::default()).unwrap();
        let p = stft_frame(&w, &grid, 5).unwrap();
        let lo = band_energy(&p, 20.0, 300.0).unwrap();
        let hi = band_energy(&p, 3000.0, p.nyquist()).unwrap();
        assert!(lo - hi >= 15.0, "separation only {}", lo - hi);

        // Full band equals total spectral power.
        let w = Waveform::new(noise(16000, 3, 0.5), 16000).unwrap();
        let grid = frame_signal(&w, GridParams::default()).unwrap();
        let p = stft_frame(&w, &grid, 7).unwrap();
        let full = band_energy(&p, 0.0, p.nyquist()).unwrap();
        let total = (EPS_FLOOR + p.total_power()).ln();
        assert!((full - total).abs() < 1e-9 * total.abs());

        assert!(band_energy(&p, 300.0, 20.0).is_err());
        assert!(band_energy(&p, 0.0, 1e6).is_err());
    }

    #[test]
    fn wiener_entropy_flat_and_spiked() {
        let flat = PowerSpectrumFrame::from_bins(vec![0.25; 128], 62.5).unwrap();
        assert!(wiener_entropy(&flat).abs() < 1e-12);

        let mut bins = vec![0.0; 64];
        bins[10] = 1.0;
        let spiked = PowerSpectrumFrame::from_bins(bins, 62.5).unwrap();
        assert!(wiener_entropy(&spiked) <= -5.0);
    }

    #[test]
    fn wiener_entropy_nonpositive_on_noise() {
        for seed in 1..50u64 {
            let bins: Vec<f64> = noise(129, seed, 0.5).iter().map(|x| x * x).collect();
            let p = PowerSpectrumFrame::from_bins(bins, 62.5).unwrap();
            assert!(wiener_entropy(&p) <= 1e-12);
        }
    }

    #[test]
    fn zero_crossing_examples() {
        // 1 kHz sine: two crossings per period, five periods in 5 ms.
        // A small phase offset keeps samples away from exact zeros.
        let sr = 16000;
        let samples: Vec<f64> = (0..16000)
            .map(|i| 0.5 * (2.0 * PI * 1000.0 * i as f64 / sr as f64 + 0.3).sin())
            .collect();
        let w = Waveform::new(samples, sr).unwrap();
        let grid = frame_signal(&w, GridParams::default()).unwrap();
        let zc = zero_crossings(&w, &grid, 50).unwrap();
        assert!((9..=11).contains(&zc), "got {zc}");

        // DC signal: none.
        let w = Waveform::new(vec![0.3; 16000], 16000).unwrap();
        let grid = frame_signal(&w, GridParams::default()).unwrap();
        assert_eq!(zero_crossings(&w, &grid, 30).unwrap(), 0);

        // White noise: about half the adjacent pairs flip sign.
        let w = Waveform::new(noise(16000, 11, 0.7), 16000).unwrap();
        let grid = frame_signal(&w, GridParams::default()).unwrap();
        let zc = zero_crossings(&w, &grid, 100).unwrap() as f64;
        let half = 40.0;
        assert!((zc - half).abs() <= 0.3 * half, "got {zc}");
    }

    #[test]
    fn determinism() {
        let w = Waveform::new(noise(8000, 5, 0.6), 16000).unwrap();
        let grid = frame_signal(&w, GridParams::default()).unwrap();
        let a = stft_frame(&w, &grid, 4).unwrap();
        let b = stft_frame(&w, &grid, 4).unwrap();
        assert_eq!(a.bins(), b.bins());
        let pa = pitch_track(&w, &grid);
        let pb = pitch_track(&w, &grid);
        assert_eq!(pa.len(), pb.len());
        for (x, y) in pa.iter().zip(pb.iter()) {
            assert_eq!(x.f0.to_bits(), y.f0.to_bits());
            assert_eq!(x.voiced, y.voiced);
        }
    }
}

