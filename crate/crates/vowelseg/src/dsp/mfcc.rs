//! 39-dimensional MFCC vectors: 13 statics (C0 carries log energy) plus
//! delta and delta-delta coefficients.

use std::f64::consts::PI;

use crate::error::Result;

use super::{FrameGrid, SpectrumAnalyzer, Waveform, EPS_FLOOR};

pub const MFCC_DIM: usize = 39;

const NUM_STATIC: usize = 13;
const NUM_FILTERS: usize = 26;
const DELTA_SPAN: usize = 2;

/// One 39-dimensional MFCC vector.
#[derive(Debug, Clone, PartialEq)]
pub struct MfccFrame {
    coeffs: [f64; MFCC_DIM],
}

impl MfccFrame {
    pub fn coeffs(&self) -> &[f64; MFCC_DIM] {
        &self.coeffs
    }

    /// Euclidean distance between two vectors.
    pub fn distance(&self, other: &MfccFrame) -> f64 {
        self.coeffs
            .iter()
            .zip(other.coeffs.iter())
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }
}

fn hz_to_mel(f: f64) -> f64 {
    2595.0 * (1.0 + f / 700.0).log10()
}

fn mel_to_hz(m: f64) -> f64 {
    700.0 * (10f64.powf(m / 2595.0) - 1.0)
}

/// Triangular filterbank over the one-sided bins, filters evenly spaced on
/// the mel scale between 0 Hz and Nyquist.
fn mel_filterbank(num_bins: usize, bin_width: f64, nyquist: f64) -> Vec<Vec<(usize, f64)>> {
    let mel_max = hz_to_mel(nyquist);
    let points: Vec<f64> = (0..NUM_FILTERS + 2)
        .map(|i| mel_to_hz(mel_max * i as f64 / (NUM_FILTERS + 1) as f64))
        .collect();
    let mut filters = Vec::with_capacity(NUM_FILTERS);
    for m in 0..NUM_FILTERS {
        let (lo, mid, hi) = (points[m], points[m + 1], points[m + 2]);
        let mut taps = Vec::new();
        for k in 0..num_bins {
            let f = k as f64 * bin_width;
            let weight = if f > lo && f <= mid {
                (f - lo) / (mid - lo)
            } else if f > mid && f < hi {
                (hi - f) / (hi - mid)
            } else {
                0.0
            };
            if weight > 0.0 {
                taps.push((k, weight));
            }
        }
        filters.push(taps);
    }
    filters
}

/// HTK-style regression deltas over +-2 frames with edge replication.
fn deltas(series: &[[f64; NUM_STATIC]]) -> Vec<[f64; NUM_STATIC]> {
    let t_max = series.len();
    let clamp = |i: i64| series[i.clamp(0, t_max as i64 - 1) as usize];
    let denom = 2.0 * (1..=DELTA_SPAN).map(|t| (t * t) as f64).sum::<f64>();
    (0..t_max)
        .map(|t| {
            let mut d = [0.0; NUM_STATIC];
            for theta in 1..=DELTA_SPAN as i64 {
                let ahead = clamp(t as i64 + theta);
                let behind = clamp(t as i64 - theta);
                for (k, slot) in d.iter_mut().enumerate() {
                    *slot += theta as f64 * (ahead[k] - behind[k]);
                }
            }
            for slot in d.iter_mut() {
                *slot /= denom;
            }
            d
        })
        .collect()
}

/// One 39-dim MFCC vector per frame of the grid.
pub fn mfcc_sequence(w: &Waveform, grid: &FrameGrid) -> Result<Vec<MfccFrame>> {
    let analyzer = SpectrumAnalyzer::new(grid);
    let win = crate::math::hamming(grid.window_samples());
    let mut filters: Option<Vec<Vec<(usize, f64)>>> = None;

    let mut statics: Vec<[f64; NUM_STATIC]> = Vec::with_capacity(grid.num_frames());
    for t in 1..=grid.num_frames() {
        let spec = analyzer.power_frame(w, grid, t)?;
        let filters = filters.get_or_insert_with(|| {
            mel_filterbank(spec.bins().len(), spec.bin_width(), spec.nyquist())
        });

        let start = grid.frame_start(t);
        let energy: f64 = w.samples()[start..start + grid.window_samples()]
            .iter()
            .zip(win.iter())
            .map(|(x, h)| (x * h) * (x * h))
            .sum();

        let log_mel: Vec<f64> = filters
            .iter()
            .map(|taps| {
                let acc: f64 = taps.iter().map(|&(k, wgt)| wgt * spec.bins()[k]).sum();
                (acc + EPS_FLOOR).ln()
            })
            .collect();

        // Orthonormal DCT-II; coefficient 0 is replaced by the log energy.
        let mut s = [0.0; NUM_STATIC];
        s[0] = (energy + EPS_FLOOR).ln();
        let norm = (2.0 / NUM_FILTERS as f64).sqrt();
        for (k, slot) in s.iter_mut().enumerate().skip(1) {
            *slot = norm
                * log_mel
                    .iter()
                    .enumerate()
                    .map(|(m, &v)| v * (PI * k as f64 * (m as f64 + 0.5) / NUM_FILTERS as f64).cos())
                    .sum::<f64>();
        }
        statics.push(s);
    }

    let d1 = deltas(&statics);
    let d2 = deltas(&d1);

    Ok(statics
        .iter()
        .zip(d1.iter().zip(d2.iter()))
        .map(|(s, (a, b))| {
            let mut coeffs = [0.0; MFCC_DIM];
            coeffs[..NUM_STATIC].copy_from_slice(s);
            coeffs[NUM_STATIC..2 * NUM_STATIC].copy_from_slice(a);
            coeffs[2 * NUM_STATIC..].copy_from_slice(b);
            MfccFrame { coeffs }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsp::{frame_signal, GridParams};
    use std::f64::consts::PI;

    fn tone(freq: f64, dur: f64, sr: u32) -> Waveform {
        let n = (dur * sr as f64).round() as usize;
        Waveform::new(
            (0..n)
                .map(|i| 0.5 * (2.0 * PI * freq * i as f64 / sr as f64).sin())
                .collect(),
            sr,
        )
        .unwrap()
    }

    #[test]
    fn one_vector_per_frame() {
        let w = tone(440.0, 0.3, 16000);
        let grid = frame_signal(&w, GridParams::default()).unwrap();
        let seq = mfcc_sequence(&w, &grid).unwrap();
        assert_eq!(seq.len(), grid.num_frames());
        assert!(seq.iter().all(|f| f.coeffs().iter().all(|c| c.is_finite())));
    }

    #[test]
    fn stationary_tone_is_constant_with_zero_deltas() {
        // 1 kHz at a 5 ms hop repeats its phase every frame, so interior
        // statics are constant and deltas vanish.
        let w = tone(1000.0, 0.3, 16000);
        let grid = frame_signal(&w, GridParams::default()).unwrap();
        let seq = mfcc_sequence(&w, &grid).unwrap();
        let mid = &seq[seq.len() / 2];
        for f in &seq[5..seq.len() - 5] {
            for k in 0..13 {
                assert!((f.coeffs()[k] - mid.coeffs()[k]).abs() < 1e-6);
            }
            for k in 13..39 {
                assert!(f.coeffs()[k].abs() < 1e-6);
            }
        }
    }

    #[test]
    fn distance_peaks_at_tone_change() {
        let sr = 16000u32;
        let half = 2400usize; // 0.15 s per tone
        let mut samples: Vec<f64> = (0..half)
            .map(|i| 0.5 * (2.0 * PI * 300.0 * i as f64 / sr as f64).sin())
            .collect();
        samples.extend((0..half).map(|i| 0.5 * (2.0 * PI * 2000.0 * i as f64 / sr as f64).sin()));
        let w = Waveform::new(samples, sr).unwrap();
        let grid = frame_signal(&w, GridParams::default()).unwrap();
        let seq = mfcc_sequence(&w, &grid).unwrap();

        let mut best = (0usize, f64::MIN);
        for t in 1..seq.len() - 1 {
            let d = seq[t - 1].distance(&seq[t + 1]);
            if d > best.1 {
                best = (t, d);
            }
        }
        // The frame whose window center sits on the change point (sample
        // 2400) is (2400 - 200)/80 + 1 = 28.5 in 1-indexed frames.
        let change_frame = (2400.0 - grid.window_samples() as f64 / 2.0) / grid.hop_samples() as f64 + 1.0;
        let got = (best.0 + 1) as f64;
        assert!(
            (got - change_frame).abs() <= 2.5,
            "peak at frame {got}, change at {change_frame}"
        );
    }
}
