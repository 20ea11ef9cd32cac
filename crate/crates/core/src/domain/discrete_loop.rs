use crate::error::{Error, Result};
use nalgebra::Vector2;
use std::f64::consts::TAU;

pub const MIN_LOOP_SAMPLES: usize = 8;

/// A 1-periodic loop sampled on the uniform grid `t_i = i/n`.
///
/// Sample `n` is identified with sample `0` and never stored. A loop is a
/// configuration loop (`q` only) or a phase loop (`q` and `p`).
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteLoop {
    q: Vec<Vector2<f64>>,
    p: Option<Vec<Vector2<f64>>>,
}

impl DiscreteLoop {
    pub fn configuration(q: Vec<Vector2<f64>>) -> Result<Self> {
        check_len(q.len())?;
        Ok(Self { q, p: None })
    }

    pub fn phase(q: Vec<Vector2<f64>>, p: Vec<Vector2<f64>>) -> Result<Self> {
        check_len(q.len())?;
        if p.len() != q.len() {
            return Err(Error::LoopKind(format!(
                "{} position samples but {} momentum samples",
                q.len(),
                p.len()
            )));
        }
        Ok(Self { q, p: Some(p) })
    }

    /// Configuration loop `q(t_i)` sampled from a closure.
    pub fn sample(n: usize, f: impl Fn(f64) -> Vector2<f64>) -> Result<Self> {
        Self::configuration((0..n).map(|i| f(i as f64 / n as f64)).collect())
    }

    /// Phase loop `(q(t_i), p(t_i))` sampled from a closure.
    pub fn sample_phase(n: usize, f: impl Fn(f64) -> (Vector2<f64>, Vector2<f64>)) -> Result<Self> {
        let (q, p) = (0..n).map(|i| f(i as f64 / n as f64)).unzip();
        Self::phase(q, p)
    }

    /// The clockwise unit circle `(cos 2πt, −sin 2πt)`.
    pub fn clockwise_circle(n: usize) -> Result<Self> {
        Self::sample(n, |t| Vector2::new((TAU * t).cos(), -(TAU * t).sin()))
    }

    pub fn n(&self) -> usize {
        self.q.len()
    }

    pub fn is_phase(&self) -> bool {
        self.p.is_some()
    }

    pub fn q(&self) -> &[Vector2<f64>] {
        &self.q
    }

    pub fn p(&self) -> Option<&[Vector2<f64>]> {
        self.p.as_deref()
    }

    pub fn time(&self, i: usize) -> f64 {
        i as f64 / self.n() as f64
    }

    /// Index `i + offset` modulo `n`.
    pub fn wrap(&self, i: usize, offset: isize) -> usize {
        let n = self.n() as isize;
        (((i as isize + offset) % n + n) % n) as usize
    }

    pub fn require_configuration(&self) -> Result<()> {
        if self.is_phase() {
            Err(Error::LoopKind("expected a configuration loop, got a phase loop".into()))
        } else {
            Ok(())
        }
    }

    pub fn require_phase(&self) -> Result<&[Vector2<f64>]> {
        self.p().ok_or_else(|| Error::LoopKind("expected a phase loop, got a configuration loop".into()))
    }

    /// The configuration part of this loop.
    pub fn configuration_part(&self) -> DiscreteLoop {
        DiscreteLoop { q: self.q.clone(), p: None }
    }

    /// Flattened `[q₀, q₁, …]` or `[q₀, p₀, q₁, p₁, …]` coordinates.
    pub fn to_flat(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.n() * if self.is_phase() { 4 } else { 2 });
        for i in 0..self.n() {
            out.extend_from_slice(self.q[i].as_slice());
            if let Some(p) = &self.p {
                out.extend_from_slice(p[i].as_slice());
            }
        }
        out
    }

    /// Inverse of [`DiscreteLoop::to_flat`] with the same kind as `self`.
    pub fn with_flat(&self, flat: &[f64]) -> DiscreteLoop {
        let stride = if self.is_phase() { 4 } else { 2 };
        assert_eq!(flat.len(), stride * self.n());
        let q = flat.chunks(stride).map(|c| Vector2::new(c[0], c[1])).collect();
        let p = self
            .p
            .as_ref()
            .map(|_| flat.chunks(stride).map(|c| Vector2::new(c[2], c[3])).collect());
        DiscreteLoop { q, p }
    }
}

fn check_len(n: usize) -> Result<()> {
    if n < MIN_LOOP_SAMPLES {
        Err(Error::LoopTooShort { n, min: MIN_LOOP_SAMPLES })
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_short_loops() {
        let err = DiscreteLoop::configuration(vec![Vector2::zeros(); 7]).unwrap_err();
        assert!(matches!(err, Error::LoopTooShort { n: 7, min: 8 }));
        assert!(DiscreteLoop::configuration(vec![Vector2::zeros(); 8]).is_ok());
    }

    #[test]
    fn rejects_mismatched_phase() {
        let err = DiscreteLoop::phase(vec![Vector2::zeros(); 8], vec![Vector2::zeros(); 9]).unwrap_err();
        assert!(matches!(err, Error::LoopKind(_)));
    }

    #[test]
    fn wraps_indices() {
        let l = DiscreteLoop::clockwise_circle(8).unwrap();
        assert_eq!(l.wrap(0, -1), 7);
        assert_eq!(l.wrap(7, 1), 0);
        assert_eq!(l.wrap(3, 0), 3);
    }

    #[test]
    fn closure_is_structural() {
        let l = DiscreteLoop::clockwise_circle(16).unwrap();
        assert_eq!(l.n(), 16);
        assert_eq!(l.q()[0], Vector2::new(1.0, 0.0));
        assert_eq!(l.time(4), 0.25);
    }

    #[test]
    fn flat_roundtrip_phase() {
        let l = DiscreteLoop::sample_phase(8, |t| (Vector2::new(t, 2.0 * t), Vector2::new(-t, 1.0))).unwrap();
        let flat = l.to_flat();
        assert_eq!(flat.len(), 32);
        assert_eq!(l.with_flat(&flat), l);
    }
}
