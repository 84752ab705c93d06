//! Uniform angular-frequency axis shared by both photons.

use crate::error::{require_finite, Error, Result};

/// An odd-length uniform grid `center + (k − m)·spacing`, `m = (n − 1)/2`.
///
/// The centre frequency is always the middle point, and the detuning of
/// point `k` is computed from the integer offset `k − m`, so `ν` and `−ν`
/// are exact negatives of each other.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyGrid {
    center: f64,
    half_span: f64,
    n_points: usize,
}

impl FrequencyGrid {
    pub fn new(center: f64, half_span: f64, n_points: usize) -> Result<Self> {
        require_finite("center", center)?;
        if !(half_span.is_finite() && half_span > 0.0) {
            return Err(Error::NonPositiveSpan(half_span));
        }
        if n_points.is_multiple_of(2) {
            return Err(Error::EvenPointCount(n_points));
        }
        if n_points < 3 {
            return Err(Error::TooFewPoints(n_points));
        }
        Ok(Self {
            center,
            half_span,
            n_points,
        })
    }

    /// Grid of `n_points` covering `center ± span_sigmas·sigma`.
    pub fn around(center: f64, sigma: f64, span_sigmas: f64, n_points: usize) -> Result<Self> {
        Self::new(center, span_sigmas * sigma, n_points)
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn half_span(&self) -> f64 {
        self.half_span
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    /// Always false; a grid has at least three points.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_span / (self.n_points - 1) as f64
    }

    /// Index of the centre point.
    pub fn mid(&self) -> usize {
        (self.n_points - 1) / 2
    }

    /// Signed integer offset of point `k` from the centre.
    pub fn offset(&self, k: usize) -> i64 {
        k as i64 - self.mid() as i64
    }

    /// Detuning `ν_k = ω_k − Ω`.
    pub fn detuning(&self, k: usize) -> f64 {
        self.offset(k) as f64 * self.spacing()
    }

    /// Angular frequency `ω_k`.
    pub fn omega(&self, k: usize) -> f64 {
        self.center + self.detuning(k)
    }

    pub fn omegas(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.n_points).map(move |k| self.omega(k))
    }

    /// Nearest grid index to `omega`, clamped to the grid.
    pub fn nearest_index(&self, omega: f64) -> usize {
        let k = libm::round((omega - self.center) / self.spacing()) + self.mid() as f64;
        if k <= 0.0 {
            0
        } else if k >= (self.n_points - 1) as f64 {
            self.n_points - 1
        } else {
            k as usize
        }
    }

    /// Index of the point mirrored through the centre, `ν → −ν`.
    pub fn mirror(&self, k: usize) -> usize {
        self.n_points - 1 - k
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    #[test]
    fn three_point_grid() {
        let g = FrequencyGrid::new(0.0, 6.0, 3).unwrap();
        let pts: Vec<f64> = g.omegas().collect();
        assert_eq!(pts, [-6.0, 0.0, 6.0]);
        assert_eq!(g.spacing(), 6.0);
    }

    #[test]
    fn five_point_grid_off_zero() {
        let g = FrequencyGrid::new(10.0, 5.0, 5).unwrap();
        let pts: Vec<f64> = g.omegas().collect();
        assert_eq!(pts, [5.0, 7.5, 10.0, 12.5, 15.0]);
        assert_eq!(g.omega(g.mid()), 10.0);
    }

    #[test]
    fn rejects_even_count() {
        let err = FrequencyGrid::new(0.0, 6.0, 4).unwrap_err();
        assert_eq!(err, Error::EvenPointCount(4));
        assert!(alloc::format!("{err}").contains("odd point count required"));
    }

    #[test]
    fn rejects_bad_span_and_tiny_grids() {
        assert!(matches!(
            FrequencyGrid::new(0.0, 0.0, 5),
            Err(Error::NonPositiveSpan(_))
        ));
        assert!(matches!(
            FrequencyGrid::new(0.0, -1.0, 5),
            Err(Error::NonPositiveSpan(_))
        ));
        assert_eq!(FrequencyGrid::new(0.0, 1.0, 1), Err(Error::TooFewPoints(1)));
    }

    #[test]
    fn detuning_is_exactly_antisymmetric() {
        let g = FrequencyGrid::new(3.7, 1.3, 257).unwrap();
        for k in 0..g.len() {
            assert_eq!(g.detuning(k), -g.detuning(g.mirror(k)));
        }
        assert_eq!(g.detuning(g.mid()), 0.0);
    }

    #[test]
    fn nearest_index_clamps() {
        let g = FrequencyGrid::new(0.0, 2.0, 5).unwrap();
        assert_eq!(g.nearest_index(0.9), 3);
        assert_eq!(g.nearest_index(-100.0), 0);
        assert_eq!(g.nearest_index(100.0), 4);
    }
}
