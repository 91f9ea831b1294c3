//! Small numeric helpers shared across modules.

use std::f64::consts::PI;

/// Symmetric Hamming window of length `n`.
pub fn hamming(n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![1.0];
    }
    (0..n)
        .map(|i| 0.54 - 0.46 * (2.0 * PI * i as f64 / (n - 1) as f64).cos())
        .collect()
}

/// Lanczos approximation of ln Gamma(x) for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    // g = 7, n = 9 coefficients (Godfrey's table).
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_93,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_13,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_571_6e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        // Reflection keeps the approximation accurate near zero.
        return (PI / (PI * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = COEF[0];
    for (i, c) in COEF.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + 7.5;
    0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

/// Normal density at `x`.
pub fn normal_pdf(x: f64, mean: f64, variance: f64) -> f64 {
    debug_assert!(variance > 0.0);
    let d = x - mean;
    (-d * d / (2.0 * variance)).exp() / (2.0 * PI * variance).sqrt()
}

/// Gamma density at `x` with shape `k` and scale `theta`; zero for x <= 0.
pub fn gamma_pdf(x: f64, k: f64, theta: f64) -> f64 {
    debug_assert!(k > 0.0 && theta > 0.0);
    if x <= 0.0 {
        return 0.0;
    }
    ((k - 1.0) * x.ln() - x / theta - ln_gamma(k) - k * theta.ln()).exp()
}

/// FNV-1a over bytes; used for stable, platform-independent fingerprints.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_gamma_known_values() {
        // Gamma(0.5) = sqrt(pi), Gamma(1) = 1, Gamma(5) = 24.
        assert!((ln_gamma(0.5) - PI.sqrt().ln()).abs() < 1e-12);
        assert!(ln_gamma(1.0).abs() < 1e-12);
        assert!((ln_gamma(5.0) - 24.0f64.ln()).abs() < 1e-12);
        assert!((ln_gamma(10.5) - 1_133_278.388_948_904_7f64.ln()).abs() < 1e-10);
    }

    #[test]
    fn normal_pdf_mode() {
        let v = normal_pdf(3.0, 3.0, 4.0);
        assert!((v - 1.0 / (2.0 * PI * 4.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn gamma_pdf_matches_exponential_special_case() {
        // k = 1 reduces to Exp(1/theta).
        let theta = 2.5f64;
        for &x in &[0.1f64, 1.0, 4.0] {
            let want = (-x / theta).exp() / theta;
            assert!((gamma_pdf(x, 1.0, theta) - want).abs() < 1e-12);
        }
        assert_eq!(gamma_pdf(-1.0, 2.0, 1.0), 0.0);
    }

    #[test]
    fn hamming_endpoints() {
        let w = hamming(5);
        assert!((w[0] - 0.08).abs() < 1e-12);
        assert!((w[2] - 1.0).abs() < 1e-12);
        assert!((w[4] - 0.08).abs() < 1e-12);
    }

    #[test]
    fn fnv_is_stable() {
        assert_eq!(fnv1a(b""), 0xcbf2_9ce4_8422_2325);
        assert_eq!(fnv1a(b"a"), 0xaf63_dc4c_8601_ec8c);
    }
}
