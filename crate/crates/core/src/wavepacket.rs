//! Time-domain two-photon wavepacket `C̃(t₁, t₂) = Σ c[i,j]·e^{−iω_i t₁}·e^{−iω_j t₂}`.
//!
//! The time axis is conjugate to the frequency grid: `n` points spaced by
//! `Δt = 2π/(n·Δω)`, centred on zero. With this choice the transform is an
//! unnormalized DFT and `Σ|C̃|² = n²·Σ|c|²`.

use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;

use crate::grid::FrequencyGrid;
use crate::linalg;
use crate::spectrum::BiphotonSpectrum;

#[derive(Debug, Clone, PartialEq)]
pub struct TimeWavepacket {
    times: Vec<f64>,
    dt: f64,
    values: Vec<Complex64>,
}

impl TimeWavepacket {
    /// Retarded times `z/c − t` of the axis.
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn dim(&self) -> usize {
        self.times.len()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn get(&self, a: usize, b: usize) -> Complex64 {
        self.values[a * self.dim() + b]
    }

    /// Normalization constant of the discrete transform, `n²·Δt²`.
    pub fn normalization(&self) -> f64 {
        let n = self.dim() as f64;
        n * n * self.dt * self.dt
    }

    /// `Σ|C̃|²·Δt² / (n²Δt²)`; equals the spectrum's `Σ|c|²`.
    pub fn parseval_norm(&self) -> f64 {
        linalg::frobenius_sqr(&self.values) * self.dt * self.dt / self.normalization()
    }
}

/// `(times, Δt)` of the axis conjugate to `grid`.
pub fn time_axis(grid: &FrequencyGrid) -> (Vec<f64>, f64) {
    let n = grid.len();
    let dt = 2.0 * PI / (n as f64 * grid.spacing());
    let times = (0..n).map(|a| grid.offset(a) as f64 * dt).collect();
    (times, dt)
}

/// Kernel `F[a,i] = e^{−iω_i t_a}`. The detuning part is reduced modulo `n`
/// in integers so the DFT orthogonality holds to rounding.
fn kernel(grid: &FrequencyGrid, times: &[f64]) -> Vec<Complex64> {
    let n = grid.len() as i64;
    let mut f = Vec::with_capacity((n * n) as usize);
    for (a, &t) in times.iter().enumerate() {
        let carrier = Complex64::cis(-grid.center() * t);
        let oa = grid.offset(a);
        for i in 0..n as usize {
            let k = (grid.offset(i) * oa).rem_euclid(n);
            f.push(carrier * Complex64::cis(-2.0 * PI * k as f64 / n as f64));
        }
    }
    f
}

/// Transform of a single-photon amplitude vector, `C̃(t_a) = Σ c_i e^{−iω_i t_a}`.
pub fn time_domain_1d(grid: &FrequencyGrid, amps: &[Complex64]) -> Vec<Complex64> {
    let (times, _) = time_axis(grid);
    let f = kernel(grid, &times);
    let n = grid.len();
    (0..n)
        .map(|a| {
            f[a * n..(a + 1) * n]
                .iter()
                .zip(amps)
                .map(|(k, c)| k * c)
                .sum()
        })
        .collect()
}

impl BiphotonSpectrum {
    /// Two-photon wavepacket on the conjugate time grid, `F·c·Fᵀ`.
    pub fn time_domain(&self) -> TimeWavepacket {
        let grid = *self.grid();
        let n = grid.len();
        let (times, dt) = time_axis(&grid);
        let f = kernel(&grid, &times);
        let mut f_t = Vec::with_capacity(n * n);
        for i in 0..n {
            for a in 0..n {
                f_t.push(f[a * n + i]);
            }
        }
        let left = linalg::matmul(&f, self.amplitudes(), n);
        let values = linalg::matmul(&left, &f_t, n);
        TimeWavepacket { times, dt, values }
    }
}
