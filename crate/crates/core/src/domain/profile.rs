use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// A real 1-periodic function of time given by a truncated Fourier series,
///
/// `g(t) = c0 + Σ_k a_k cos(2πkt) + b_k sin(2πkt)`, with `k = 1..`.
///
/// Periodicity is structural: every evaluation reduces to trigonometric
/// functions of `2πkt`, so derivatives and antiderivatives are exact.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FourierProfile {
    #[serde(default)]
    pub c0: f64,
    #[serde(default)]
    pub cos_coeffs: Vec<f64>,
    #[serde(default)]
    pub sin_coeffs: Vec<f64>,
}

impl FourierProfile {
    pub fn constant(c0: f64) -> Self {
        Self { c0, ..Self::default() }
    }

    pub fn new(c0: f64, cos_coeffs: Vec<f64>, sin_coeffs: Vec<f64>) -> Self {
        Self { c0, cos_coeffs, sin_coeffs }
    }

    /// Highest harmonic carrying a coefficient slot.
    pub fn harmonics(&self) -> usize {
        self.cos_coeffs.len().max(self.sin_coeffs.len())
    }

    pub fn is_zero(&self) -> bool {
        self.c0 == 0.0
            && self.cos_coeffs.iter().all(|&a| a == 0.0)
            && self.sin_coeffs.iter().all(|&b| b == 0.0)
    }

    /// True when the profile has no harmonic content.
    pub fn is_constant(&self) -> bool {
        self.cos_coeffs.iter().all(|&a| a == 0.0) && self.sin_coeffs.iter().all(|&b| b == 0.0)
    }

    fn cos_at(&self, k: usize) -> f64 {
        self.cos_coeffs.get(k - 1).copied().unwrap_or(0.0)
    }

    fn sin_at(&self, k: usize) -> f64 {
        self.sin_coeffs.get(k - 1).copied().unwrap_or(0.0)
    }

    pub fn eval(&self, t: f64) -> f64 {
        let mut acc = self.c0;
        for k in 1..=self.harmonics() {
            let (s, c) = (TAU * k as f64 * t).sin_cos();
            acc += self.cos_at(k) * c + self.sin_at(k) * s;
        }
        acc
    }

    pub fn derivative(&self, t: f64) -> f64 {
        let mut acc = 0.0;
        for k in 1..=self.harmonics() {
            let w = TAU * k as f64;
            let (s, c) = (w * t).sin_cos();
            acc += w * (self.sin_at(k) * c - self.cos_at(k) * s);
        }
        acc
    }

    /// The primitive `∫₀ᵗ g(s) ds`.
    pub fn antiderivative(&self, t: f64) -> f64 {
        let mut acc = self.c0 * t;
        for k in 1..=self.harmonics() {
            let w = TAU * k as f64;
            let (s, c) = (w * t).sin_cos();
            acc += (self.cos_at(k) * s + self.sin_at(k) * (1.0 - c)) / w;
        }
        acc
    }

    /// Exact product of two profiles, re-expanded by product-to-sum identities.
    pub fn product(&self, other: &FourierProfile) -> FourierProfile {
        let kmax = self.harmonics() + other.harmonics();
        let mut acc = HarmonicAccumulator::new(kmax);
        // index 0 carries the constant term; sin(0·) vanishes
        let lhs = self.terms();
        let rhs = other.terms();
        for &(j, aj, bj) in &lhs {
            for &(k, ak, bk) in &rhs {
                let (j, k) = (j as i64, k as i64);
                // cos j · cos k
                acc.add_cos(j - k, 0.5 * aj * ak);
                acc.add_cos(j + k, 0.5 * aj * ak);
                // sin j · sin k
                acc.add_cos(j - k, 0.5 * bj * bk);
                acc.add_cos(j + k, -0.5 * bj * bk);
                // sin j · cos k
                acc.add_sin(j + k, 0.5 * bj * ak);
                acc.add_sin(j - k, 0.5 * bj * ak);
                // cos j · sin k
                acc.add_sin(j + k, 0.5 * aj * bk);
                acc.add_sin(j - k, -0.5 * aj * bk);
            }
        }
        acc.finish()
    }

    pub fn square(&self) -> FourierProfile {
        self.product(self)
    }

    pub fn scaled(&self, factor: f64) -> FourierProfile {
        FourierProfile {
            c0: self.c0 * factor,
            cos_coeffs: self.cos_coeffs.iter().map(|a| a * factor).collect(),
            sin_coeffs: self.sin_coeffs.iter().map(|b| b * factor).collect(),
        }
    }

    /// `(k, a_k, b_k)` including the constant term as `k = 0` with the
    /// convention `cos(0) = 1`.
    fn terms(&self) -> Vec<(usize, f64, f64)> {
        let mut out = vec![(0, self.c0, 0.0)];
        for k in 1..=self.harmonics() {
            out.push((k, self.cos_at(k), self.sin_at(k)));
        }
        out
    }
}

struct HarmonicAccumulator {
    c0: f64,
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl HarmonicAccumulator {
    fn new(kmax: usize) -> Self {
        Self { c0: 0.0, cos: vec![0.0; kmax], sin: vec![0.0; kmax] }
    }

    fn add_cos(&mut self, k: i64, v: f64) {
        match k.unsigned_abs() as usize {
            0 => self.c0 += v,
            k => self.cos[k - 1] += v,
        }
    }

    fn add_sin(&mut self, k: i64, v: f64) {
        if k == 0 {
            return;
        }
        let sign = if k < 0 { -1.0 } else { 1.0 };
        self.sin[k.unsigned_abs() as usize - 1] += sign * v;
    }

    fn finish(mut self) -> FourierProfile {
        while self.cos.last() == Some(&0.0) {
            self.cos.pop();
        }
        while self.sin.last() == Some(&0.0) {
            self.sin.pop();
        }
        FourierProfile { c0: self.c0, cos_coeffs: self.cos, sin_coeffs: self.sin }
    }
}
