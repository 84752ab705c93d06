//! Discretized two-photon spectral amplitudes `c[i,j] ≈ C(ω_i, ω_j)·Δω`.
//!
//! Every constructor normalizes to unit Frobenius norm, so probabilities
//! derived from a [`BiphotonSpectrum`] are finite sums that need no further
//! quadrature weights.

use alloc::vec::Vec;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::FrequencyGrid;
use crate::linalg;

/// Unit-norm complex amplitude matrix over `grid × grid`, row index = photon 1.
#[derive(Debug, Clone, PartialEq)]
pub struct BiphotonSpectrum {
    grid: FrequencyGrid,
    amps: Vec<Complex64>,
}

/// Exchange-symmetric and antisymmetric parts of a spectrum.
///
/// Each present part is renormalized; the weights are the squared norms of
/// the unnormalized parts `(c ± cᵀ)/2` and sum to one.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryParts {
    pub symmetric: Option<BiphotonSpectrum>,
    pub antisymmetric: Option<BiphotonSpectrum>,
    pub w_sym: f64,
    pub w_antisym: f64,
}

/// Parts with weight below this are reported empty.
const EMPTY_WEIGHT: f64 = 1e-24;

impl BiphotonSpectrum {
    /// Samples `f(ω₁, ω₂)` on the grid and normalizes.
    pub fn from_function<F>(grid: FrequencyGrid, mut f: F) -> Result<Self>
    where
        F: FnMut(f64, f64) -> Complex64,
    {
        let n = grid.len();
        let mut amps = Vec::with_capacity(n * n);
        for i in 0..n {
            let w1 = grid.omega(i);
            for j in 0..n {
                amps.push(f(w1, grid.omega(j)));
            }
        }
        Self::from_amplitudes(grid, amps)
    }

    /// Row-major amplitudes, normalized on construction.
    pub fn from_amplitudes(grid: FrequencyGrid, mut amps: Vec<Complex64>) -> Result<Self> {
        let n = grid.len();
        if amps.len() != n * n {
            return Err(Error::ShapeMismatch {
                expected: n * n,
                found: amps.len(),
            });
        }
        if let Some(pos) = amps.iter().position(|z| !z.is_finite()) {
            return Err(Error::NonFinite {
                row: pos / n,
                col: pos % n,
            });
        }
        let norm_sqr = linalg::frobenius_sqr(&amps);
        let norm = libm::sqrt(norm_sqr);
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::DegenerateSpectrum);
        }
        amps.iter_mut().for_each(|z| *z /= norm);
        Ok(Self { grid, amps })
    }

    /// Outer product `a ⊗ b` of two single-photon amplitude vectors.
    pub fn separable(grid: FrequencyGrid, a: &[Complex64], b: &[Complex64]) -> Result<Self> {
        let n = grid.len();
        if a.len() != n || b.len() != n {
            return Err(Error::ShapeMismatch {
                expected: n,
                found: if a.len() != n { a.len() } else { b.len() },
            });
        }
        let amps = a
            .iter()
            .flat_map(|ai| b.iter().map(move |bj| ai * bj))
            .collect();
        Self::from_amplitudes(grid, amps)
    }

    /// Takes already-normalized amplitudes produced by a norm-preserving map.
    fn with_amps(&self, amps: Vec<Complex64>) -> Self {
        Self {
            grid: self.grid,
            amps,
        }
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn dim(&self) -> usize {
        self.grid.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.amps[i * self.dim() + j]
    }

    pub fn norm_sqr(&self) -> f64 {
        linalg::frobenius_sqr(&self.amps)
    }

    /// Exchange of the two frequency arguments, `c'[i,j] = c[j,i]`.
    pub fn swap(&self) -> Self {
        let n = self.dim();
        let amps = (0..n * n).map(|k| self.get(k % n, k / n)).collect();
        self.with_amps(amps)
    }

    /// `Σ |(c − cᵀ)/2|²`, computed without allocating the parts.
    pub fn antisymmetric_weight(&self) -> f64 {
        let n = self.dim();
        let mut acc = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                acc += (self.get(i, j) - self.get(j, i)).norm_sqr();
            }
        }
        // Each unordered pair appears twice with |·/2|², giving a factor 1/2.
        0.5 * acc
    }

    pub fn symmetry_decompose(&self) -> SymmetryParts {
        let n = self.dim();
        let mut sym = Vec::with_capacity(n * n);
        let mut anti = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let (a, b) = (self.get(i, j), self.get(j, i));
                sym.push((a + b) * 0.5);
                anti.push((a - b) * 0.5);
            }
        }
        let w_sym = linalg::frobenius_sqr(&sym);
        let w_antisym = linalg::frobenius_sqr(&anti);
        let part = |amps: Vec<Complex64>, w: f64| {
            (w > EMPTY_WEIGHT)
                .then(|| Self::from_amplitudes(self.grid, amps).ok())
                .flatten()
        };
        let symmetric = part(sym, w_sym);
        let antisymmetric = part(anti, w_antisym);
        SymmetryParts {
            w_sym: if symmetric.is_some() { w_sym } else { 0.0 },
            w_antisym: if antisymmetric.is_some() {
                w_antisym
            } else {
                0.0
            },
            symmetric,
            antisymmetric,
        }
    }

    /// Multiplies by the propagation phase `exp(i(ω₁z₁ + ω₂z₂)/c)`.
    pub fn apply_path_delays(&self, z1: f64, z2: f64, c_light: f64) -> Self {
        let n = self.dim();
        let phase = |z: f64| -> Vec<Complex64> {
            self.grid
                .omegas()
                .map(|w| Complex64::cis(w * z / c_light))
                .collect()
        };
        let (p1, p2) = (phase(z1), phase(z2));
        let amps = (0..n * n)
            .map(|k| self.amps[k] * p1[k / n] * p2[k % n])
            .collect();
        self.with_amps(amps)
    }

    /// `V = Re Σ c*[i,j]·c[j,i]`, the overlap of the spectrum with its swap.
    pub fn exchange_overlap(&self) -> f64 {
        let n = self.dim();
        let mut v = 0.0;
        for i in 0..n {
            v += self.get(i, i).norm_sqr();
            for j in (i + 1)..n {
                v += 2.0 * (self.get(i, j).conj() * self.get(j, i)).re;
            }
        }
        v.clamp(-1.0, 1.0)
    }

    /// Fraction of the norm carried by the leading Schmidt mode:
    /// `σ₁² / ‖c‖²_F`, equal to one exactly for product spectra.
    pub fn separability_rank1_fraction(&self) -> f64 {
        let (sigma_sq, _, _) = linalg::leading_singular(&self.amps, self.dim());
        (sigma_sq / self.norm_sqr()).clamp(0.0, 1.0)
    }

    /// Leading Schmidt pair `(σ₁, u, v)` with `c ≈ σ₁·u⊗v̄` when rank one.
    pub fn leading_schmidt_pair(&self) -> (f64, Vec<Complex64>, Vec<Complex64>) {
        let (sigma_sq, u, v) = linalg::leading_singular(&self.amps, self.dim());
        (libm::sqrt(sigma_sq), u, v)
    }
}
