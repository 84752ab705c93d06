//! Closed-form two-photon spectra and their analytic coincidence
//! probabilities: the Gaussian pair with an optional pump envelope, the
//! two-path (short/long signal arm) down-conversion source, the
//! infinitely narrow pump limit and the antisymmetric Bell pair.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_1_SQRT_2, PI};
use num_complex::Complex64;

use crate::error::{require_finite, require_positive, Error, Result};
use crate::grid::FrequencyGrid;
use crate::spectrum::BiphotonSpectrum;

/// Grids narrower than this many bandwidths on either side of the carrier
/// get a truncation warning.
pub const MIN_COVERAGE_SIGMAS: f64 = 4.0;

/// Pump sampling: at least this many grid points per pump bandwidth.
pub const PUMP_POINTS_PER_SIGMA: f64 = 1.5;

/// Advisory limits of the narrow-pump, long-delay regime of [`shih_reduced`].
pub const REDUCED_MAX_BETA: f64 = 0.1;
pub const REDUCED_MIN_SIGMA_DL: f64 = 5.0;

/// Non-fatal conditions noticed while building a model spectrum.
#[derive(Debug, Clone, PartialEq)]
pub enum Warning {
    /// The grid covers fewer than [`MIN_COVERAGE_SIGMAS`] bandwidths.
    GridTruncation { covered_sigmas: f64 },
    /// A requested frequency was moved to the nearest grid point.
    SnappedToGrid { requested: f64, actual: f64 },
    /// The pump bandwidth is sampled by fewer than [`PUMP_POINTS_PER_SIGMA`] points.
    PumpUnderResolved { spacing: f64, sigma_p: f64 },
    /// Parameters outside the regime where the reduced formula applies.
    OutsideReducedRegime { beta: f64, sigma_dl: f64 },
}

impl core::fmt::Display for Warning {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Warning::GridTruncation { covered_sigmas } => write!(
                f,
                "grid covers only {covered_sigmas:.3} bandwidths around the carrier"
            ),
            Warning::SnappedToGrid { requested, actual } => {
                write!(f, "frequency {requested} snapped to grid point {actual}")
            }
            Warning::PumpUnderResolved { spacing, sigma_p } => write!(
                f,
                "grid spacing {spacing} under-resolves pump bandwidth {sigma_p}"
            ),
            Warning::OutsideReducedRegime { beta, sigma_dl } => write!(
                f,
                "reduced formula used outside its regime (beta = {beta}, sigma*dL/c = {sigma_dl})"
            ),
        }
    }
}

/// A model spectrum and whatever warnings its construction raised.
#[derive(Debug, Clone, PartialEq)]
pub struct Modeled {
    pub spectrum: BiphotonSpectrum,
    pub warnings: Vec<Warning>,
}

/// Spectral envelope `g(ω₁ + ω₂)` set by the pump.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PumpEnvelope {
    Constant,
    /// `exp(−(ω₁ + ω₂ − 2Ω)²/(2σ_p²))`
    Gaussian {
        sigma_p: f64,
    },
}

impl PumpEnvelope {
    fn amplitude(&self, sum_detuning: f64) -> f64 {
        match *self {
            PumpEnvelope::Constant => 1.0,
            PumpEnvelope::Gaussian { sigma_p } => {
                libm::exp(-sum_detuning * sum_detuning / (2.0 * sigma_p * sigma_p))
            }
        }
    }
}

/// Two identical Gaussian single-photon spectra multiplied by a pump envelope.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPairModel {
    center: f64,
    sigma: f64,
    pump: PumpEnvelope,
}

impl GaussianPairModel {
    pub fn new(center: f64, sigma: f64, pump: PumpEnvelope) -> Result<Self> {
        if let PumpEnvelope::Gaussian { sigma_p } = pump {
            require_positive("sigma_p", sigma_p)?;
        }
        Ok(Self {
            center: require_finite("center", center)?,
            sigma: require_positive("sigma", sigma)?,
            pump,
        })
    }

    /// Gaussian pump with bandwidth `β·σ`.
    pub fn with_beta(center: f64, sigma: f64, beta: f64) -> Result<Self> {
        Self::new(
            center,
            sigma,
            PumpEnvelope::Gaussian {
                sigma_p: beta * sigma,
            },
        )
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn pump(&self) -> PumpEnvelope {
        self.pump
    }
}

/// Down-conversion source whose signal photon travels a coherent
/// superposition of a short path `L_s` and a long path `L_l`; the idler
/// travels `z₂`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShihModel {
    center: f64,
    sigma: f64,
    sigma_p: f64,
    l_short: f64,
    l_long: f64,
    z2: f64,
    c_light: f64,
}

impl ShihModel {
    pub fn new(
        center: f64,
        sigma: f64,
        sigma_p: f64,
        l_short: f64,
        l_long: f64,
        z2: f64,
        c_light: f64,
    ) -> Result<Self> {
        require_finite("l_short", l_short)?;
        require_finite("l_long", l_long)?;
        if l_long < l_short {
            return Err(Error::InvalidParameter {
                name: "l_long",
                value: l_long,
                reason: "long path must not be shorter than the short path",
            });
        }
        Ok(Self {
            center: require_positive("center", center)?,
            sigma: require_positive("sigma", sigma)?,
            sigma_p: require_positive("sigma_p", sigma_p)?,
            l_short,
            l_long,
            z2: require_finite("z2", z2)?,
            c_light: require_positive("c_light", c_light)?,
        })
    }

    /// Model with half path difference `ΔL` and mean delay `Δz = z₁ − z₂`,
    /// idler path fixed at zero.
    pub fn from_offsets(
        center: f64,
        sigma: f64,
        sigma_p: f64,
        delta_l: f64,
        dz: f64,
        c_light: f64,
    ) -> Result<Self> {
        Self::new(
            center,
            sigma,
            sigma_p,
            dz - delta_l,
            dz + delta_l,
            0.0,
            c_light,
        )
    }

    /// Same source and interferometer with the mean delay moved to `dz`.
    pub fn with_dz(&self, dz: f64) -> Self {
        let shift = dz - self.dz();
        Self {
            l_short: self.l_short + shift,
            l_long: self.l_long + shift,
            ..*self
        }
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn sigma_p(&self) -> f64 {
        self.sigma_p
    }

    pub fn c_light(&self) -> f64 {
        self.c_light
    }

    pub fn z2(&self) -> f64 {
        self.z2
    }

    /// `ΔL = (L_l − L_s)/2`.
    pub fn delta_l(&self) -> f64 {
        0.5 * (self.l_long - self.l_short)
    }

    /// Mean signal path `z₁ = (L_l + L_s)/2`.
    pub fn z1(&self) -> f64 {
        0.5 * (self.l_long + self.l_short)
    }

    pub fn dz(&self) -> f64 {
        self.z1() - self.z2
    }

    /// `β = σ_p/σ`.
    pub fn beta(&self) -> f64 {
        self.sigma_p / self.sigma
    }

    /// Carrier wavelength `λ = 2πc/Ω`.
    pub fn wavelength(&self) -> f64 {
        2.0 * PI * self.c_light / self.center
    }

    /// `4ΔL/λ`; odd integers give the anti-coalescence peak.
    pub fn phase_order(&self) -> f64 {
        4.0 * self.delta_l() / self.wavelength()
    }

    /// Grid centred on the carrier, spanning `±span_sigmas·σ` with at least
    /// `min_points` points and fine enough to resolve the pump envelope.
    pub fn resolving_grid(&self, span_sigmas: f64, min_points: usize) -> Result<FrequencyGrid> {
        pump_resolving_grid(
            self.center,
            self.sigma,
            self.sigma_p,
            span_sigmas,
            min_points,
        )
    }

    fn scaled(&self, length: f64) -> f64 {
        length * self.sigma / self.c_light
    }
}

/// Smallest odd grid over `center ± span_sigmas·σ` with at least `min_points`
/// points and spacing at most `σ_p/`[`PUMP_POINTS_PER_SIGMA`].
pub fn pump_resolving_grid(
    center: f64,
    sigma: f64,
    sigma_p: f64,
    span_sigmas: f64,
    min_points: usize,
) -> Result<FrequencyGrid> {
    require_positive("sigma_p", sigma_p)?;
    let half_span = require_positive("span", span_sigmas)? * require_positive("sigma", sigma)?;
    let needed = libm::ceil(2.0 * half_span * PUMP_POINTS_PER_SIGMA / sigma_p) as usize + 1;
    let mut n = needed.max(min_points).max(3);
    if n.is_multiple_of(2) {
        n += 1;
    }
    FrequencyGrid::new(center, half_span, n)
}

/// Truncation warning when the grid covers less than
/// [`MIN_COVERAGE_SIGMAS`] bandwidths on either side of `center`.
pub fn check_coverage(grid: &FrequencyGrid, center: f64, sigma: f64) -> Option<Warning> {
    let lo = grid.omega(0);
    let hi = grid.omega(grid.len() - 1);
    let covered = (hi - center).min(center - lo) / sigma;
    (covered < MIN_COVERAGE_SIGMAS).then_some(Warning::GridTruncation {
        covered_sigmas: covered,
    })
}

fn check_pump_sampling(grid: &FrequencyGrid, pump: PumpEnvelope) -> Option<Warning> {
    match pump {
        PumpEnvelope::Gaussian { sigma_p } if grid.spacing() * PUMP_POINTS_PER_SIGMA > sigma_p => {
            Some(Warning::PumpUnderResolved {
                spacing: grid.spacing(),
                sigma_p,
            })
        }
        _ => None,
    }
}

/// Pump amplitude as a function of `i + j`, for every index sum on the grid.
fn pump_by_index_sum(grid: &FrequencyGrid, center: f64, pump: PumpEnvelope) -> Vec<f64> {
    let n = grid.len();
    let offset = 2.0 * (grid.center() - center);
    (0..2 * n - 1)
        .map(|k| {
            let sum = offset + (k as i64 - 2 * grid.mid() as i64) as f64 * grid.spacing();
            pump.amplitude(sum)
        })
        .collect()
}

fn gaussian_profile(grid: &FrequencyGrid, center: f64, sigma: f64) -> Vec<f64> {
    let shift = grid.center() - center;
    (0..grid.len())
        .map(|k| {
            let nu = shift + grid.detuning(k);
            libm::exp(-nu * nu / (2.0 * sigma * sigma))
        })
        .collect()
}

/// `g(ω₁+ω₂)·exp(−[(ω₁−Ω)² + (ω₂−Ω)²]/(2σ²))`, normalized. Exchange-symmetric
/// for any pump envelope.
pub fn gaussian_pair_spectrum(m: &GaussianPairModel, grid: &FrequencyGrid) -> Result<Modeled> {
    let n = grid.len();
    let pump = pump_by_index_sum(grid, m.center, m.pump);
    let u = gaussian_profile(grid, m.center, m.sigma);
    let mut amps = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            amps.push(Complex64::new(pump[i + j] * (u[i] * u[j]), 0.0));
        }
    }
    let warnings = check_coverage(grid, m.center, m.sigma)
        .into_iter()
        .chain(check_pump_sampling(grid, m.pump))
        .collect();
    Ok(Modeled {
        spectrum: BiphotonSpectrum::from_amplitudes(*grid, amps)?,
        warnings,
    })
}

/// Coincidence probability of the Gaussian pair at relative delay `dz`:
/// `½(1 − exp(−(σΔz/c)²/2))`, independent of the pump envelope.
pub fn hom_dip_closed(sigma: f64, dz: f64, c_light: f64) -> f64 {
    let x = sigma * dz / c_light;
    -0.5 * libm::expm1(-0.5 * x * x)
}

/// `exp(−(ω₁+ω₂−2Ω)²/(2σ_p²))·exp(−[(ω₁−Ω)²+(ω₂−Ω)²]/(2σ²))
///  ·exp(i(ω₁z₁+ω₂z₂)/c)·cos(ω₁ΔL/c)`, normalized.
pub fn shih_spectrum(m: &ShihModel, grid: &FrequencyGrid) -> Result<Modeled> {
    let n = grid.len();
    let pump_env = PumpEnvelope::Gaussian { sigma_p: m.sigma_p };
    let pump = pump_by_index_sum(grid, m.center, pump_env);
    let u = gaussian_profile(grid, m.center, m.sigma);
    let c = m.c_light;
    let (z1, z2, dl) = (m.z1(), m.z2, m.delta_l());
    let row: Vec<Complex64> = grid
        .omegas()
        .zip(&u)
        .map(|(w, uk)| Complex64::cis(w * z1 / c) * (uk * libm::cos(w * dl / c)))
        .collect();
    let col: Vec<Complex64> = grid
        .omegas()
        .zip(&u)
        .map(|(w, uk)| Complex64::cis(w * z2 / c) * *uk)
        .collect();

    let mut amps = Vec::with_capacity(n * n);
    let mut envelope = 0.0;
    for i in 0..n {
        for j in 0..n {
            let p = pump[i + j];
            envelope += (p * u[i] * u[j]) * (p * u[i] * u[j]);
            amps.push(row[i] * col[j] * p);
        }
    }
    let norm: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
    if norm.is_nan() || norm <= 1e-24 * envelope {
        return Err(Error::DegenerateSpectrum);
    }
    let warnings = check_coverage(grid, m.center, m.sigma)
        .into_iter()
        .chain(check_pump_sampling(grid, pump_env))
        .collect();
    Ok(Modeled {
        spectrum: BiphotonSpectrum::from_amplitudes(*grid, amps)?,
        warnings,
    })
}

/// Norm factor `B` of the exact two-path formula, as written:
/// `½[1 + cos(4πΔL/λ)·exp(−¼·(1+β²)/(2+β²)·ΔL²(σ/c)²)]`.
pub fn shih_b_factor(m: &ShihModel) -> f64 {
    let beta2 = m.beta() * m.beta();
    let dl = m.scaled(m.delta_l());
    let phase = libm::cos(4.0 * PI * m.delta_l() / m.wavelength());
    0.5 * (1.0 + phase * libm::exp(-0.25 * (1.0 + beta2) / (2.0 + beta2) * dl * dl))
}

/// Norm factor of the two-path spectrum measured on a grid: the mean of
/// `cos²(ω₁ΔL/c)` under the unmodulated envelope `|g·u·u|²`. This is the
/// quantity the closed-form `B` stands for.
pub fn shih_norm_numeric(m: &ShihModel, grid: &FrequencyGrid) -> f64 {
    let n = grid.len();
    let pump = pump_by_index_sum(
        grid,
        m.center,
        PumpEnvelope::Gaussian { sigma_p: m.sigma_p },
    );
    let u = gaussian_profile(grid, m.center, m.sigma);
    let cos2: Vec<f64> = grid
        .omegas()
        .map(|w| {
            let c = libm::cos(w * m.delta_l() / m.c_light);
            c * c
        })
        .collect();
    let (mut weighted, mut total) = (0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            let e = pump[i + j] * u[i] * u[j];
            total += e * e;
            weighted += e * e * cos2[i];
        }
    }
    weighted / total
}

/// Coincidence probability of the two-path source at mean delay `dz`,
/// evaluated verbatim with [`shih_b_factor`].
pub fn shih_exact(m: &ShihModel, dz: f64) -> Result<f64> {
    let beta2 = m.beta() * m.beta();
    let dl = m.scaled(m.delta_l());
    let z = m.scaled(dz);
    let phase = libm::cos(4.0 * PI * m.delta_l() / m.wavelength());
    let b = shih_b_factor(m);
    if b.abs() < 1e-15 {
        return Err(Error::VanishingNormFactor(b));
    }
    let bracket = phase * libm::exp(-0.5 * (beta2 / (2.0 + beta2) * dl * dl + z * z))
        + 0.5 * libm::exp(-0.5 * (dl + z) * (dl + z))
        + 0.5 * libm::exp(-0.5 * (dl - z) * (dl - z));
    Ok(0.5 * (1.0 - bracket / (2.0 * b)))
}

/// The narrow-pump, long-path limit of [`shih_exact`].
pub fn shih_reduced(m: &ShihModel, dz: f64) -> f64 {
    let dl = m.scaled(m.delta_l());
    let z = m.scaled(dz);
    let phase = libm::cos(4.0 * PI * m.delta_l() / m.wavelength());
    0.5 * (1.0
        - phase * libm::exp(-0.5 * z * z)
        - 0.5 * libm::exp(-0.5 * (dl + z) * (dl + z))
        - 0.5 * libm::exp(-0.5 * (dl - z) * (dl - z)))
}

/// Advisory check that [`shih_reduced`] is being used where it applies.
pub fn reduced_regime_warnings(m: &ShihModel) -> Vec<Warning> {
    let sigma_dl = m.scaled(m.delta_l());
    let mut out = Vec::new();
    if m.beta() > REDUCED_MAX_BETA || sigma_dl < REDUCED_MIN_SIGMA_DL {
        out.push(Warning::OutsideReducedRegime {
            beta: m.beta(),
            sigma_dl,
        });
    }
    out
}

/// Symmetry class of the narrow-pump two-path spectrum, fixed by the parity
/// of `4ΔL/λ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    /// `4ΔL/λ` even: cosine profile, exchange-symmetric.
    Even,
    /// `4ΔL/λ` odd: sine profile, exchange-antisymmetric.
    Odd,
}

impl Parity {
    /// Parity of the nearest integer to `phase_order`.
    pub fn from_phase_order(phase_order: f64) -> Self {
        if libm::fmod(libm::round(phase_order), 2.0) == 0.0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// Infinitely narrow pump: support only on the anti-diagonal `ν₂ = −ν₁`
/// with amplitude `exp(−ν₁²/σ²)·cos(ν₁ΔL/c)` (even) or `·sin(ν₁ΔL/c)` (odd).
pub fn delta_pump_spectrum(
    sigma: f64,
    center: f64,
    delta_l: f64,
    parity: Parity,
    c_light: f64,
    grid: &FrequencyGrid,
) -> Result<Modeled> {
    require_positive("sigma", sigma)?;
    require_finite("delta_l", delta_l)?;
    require_positive("c_light", c_light)?;
    let scale = center.abs().max(grid.half_span());
    if (grid.center() - center).abs() > 1e-12 * scale {
        return Err(Error::GridNotCentered {
            grid_center: grid.center(),
            model_center: center,
        });
    }
    let n = grid.len();
    let mut amps = alloc::vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        let nu = grid.detuning(i);
        // Evaluate on |ν| and restore the sign so the (anti)symmetry is exact.
        let x = nu.abs() * delta_l / c_light;
        let envelope = libm::exp(-nu * nu / (sigma * sigma));
        let value = match parity {
            Parity::Even => envelope * libm::cos(x),
            Parity::Odd => {
                let s = envelope * libm::sin(x);
                if nu < 0.0 {
                    -s
                } else {
                    s
                }
            }
        };
        amps[i * n + grid.mirror(i)] = Complex64::new(value, 0.0);
    }
    let warnings = check_coverage(grid, center, sigma).into_iter().collect();
    Ok(Modeled {
        spectrum: BiphotonSpectrum::from_amplitudes(*grid, amps)?,
        warnings,
    })
}

/// `[δ(ω₁−ω_a)δ(ω₂−ω_b) − δ(ω₁−ω_b)δ(ω₂−ω_a)]/√2` on the nearest grid cells.
pub fn bell_antisymmetric_spectrum(
    omega_a: f64,
    omega_b: f64,
    grid: &FrequencyGrid,
) -> Result<Modeled> {
    require_finite("omega_a", omega_a)?;
    require_finite("omega_b", omega_b)?;
    let snap_tol = 1e-9 * grid.spacing();
    let mut warnings = Vec::new();
    let mut snap = |w: f64| {
        let k = grid.nearest_index(w);
        if (grid.omega(k) - w).abs() > snap_tol {
            warnings.push(Warning::SnappedToGrid {
                requested: w,
                actual: grid.omega(k),
            });
        }
        k
    };
    let a = snap(omega_a);
    let b = snap(omega_b);
    if a == b {
        return Err(Error::CoincidentFrequencies { index: a });
    }
    let n = grid.len();
    let mut amps = alloc::vec![Complex64::new(0.0, 0.0); n * n];
    amps[a * n + b] = Complex64::new(FRAC_1_SQRT_2, 0.0);
    amps[b * n + a] = Complex64::new(-FRAC_1_SQRT_2, 0.0);
    Ok(Modeled {
        spectrum: BiphotonSpectrum::from_amplitudes(*grid, amps)?,
        warnings,
    })
}

/// Coincidence probability of the Bell pair with signal and idler delayed
/// by `z₁` and `z₂`: `½(1 + cos((ω_a − ω_b)(z₁ − z₂)/c))`.
pub fn bell_closed(omega_a: f64, omega_b: f64, dz: f64, c_light: f64) -> f64 {
    0.5 * (1.0 + libm::cos((omega_a - omega_b) * dz / c_light))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::beamsplitter::{
        coincidence_probability, transform, trapping_fidelity, BeamSplitterParams, TwoPhotonState,
    };

    fn default_grid(center: f64, sigma: f64) -> FrequencyGrid {
        FrequencyGrid::around(center, sigma, 6.0, 257).unwrap()
    }

    /// Singular-value oracle independent of the power iteration.
    fn rank1_fraction_svd(s: &BiphotonSpectrum) -> f64 {
        let n = s.dim();
        let m = nalgebra::DMatrix::from_fn(n, n, |i, j| {
            let z = s.get(i, j);
            nalgebra::Complex::new(z.re, z.im)
        });
        let sv = m.singular_values();
        let total: f64 = sv.iter().map(|x| x * x).sum();
        sv.max() * sv.max() / total
    }

    #[test]
    fn constant_pump_is_unentangled() {
        let m = GaussianPairModel::new(3.0, 0.5, PumpEnvelope::Constant).unwrap();
        let built = gaussian_pair_spectrum(&m, &default_grid(3.0, 0.5)).unwrap();
        assert!(built.warnings.is_empty());
        assert!((built.spectrum.separability_rank1_fraction() - 1.0).abs() < 1e-12);
        assert!(built.spectrum.antisymmetric_weight() < 1e-12);
    }

    #[test]
    fn gaussian_pump_is_entangled() {
        let m = GaussianPairModel::with_beta(0.0, 1.0, 0.1).unwrap();
        let grid = FrequencyGrid::around(0.0, 1.0, 6.0, 129).unwrap();
        let s = gaussian_pair_spectrum(&m, &grid).unwrap().spectrum;
        let fraction = s.separability_rank1_fraction();
        assert!(fraction < 0.5, "rank-1 fraction {fraction}");
        assert!((fraction - rank1_fraction_svd(&s)).abs() < 1e-9);
    }

    #[test]
    fn zero_delay_coalesces_for_every_envelope() {
        for pump in [
            PumpEnvelope::Constant,
            PumpEnvelope::Gaussian { sigma_p: 0.05 },
            PumpEnvelope::Gaussian { sigma_p: 2.0 },
        ] {
            let m = GaussianPairModel::new(0.0, 1.0, pump).unwrap();
            let s = gaussian_pair_spectrum(&m, &default_grid(0.0, 1.0))
                .unwrap()
                .spectrum;
            assert!(coincidence_probability(&s, &BeamSplitterParams::balanced()) < 1e-12);
        }
    }

    #[test]
    fn narrow_grid_warns() {
        let m = GaussianPairModel::new(0.0, 1.0, PumpEnvelope::Constant).unwrap();
        let grid = FrequencyGrid::new(0.0, 3.0, 65).unwrap();
        let built = gaussian_pair_spectrum(&m, &grid).unwrap();
        assert_eq!(
            built.warnings,
            [Warning::GridTruncation {
                covered_sigmas: 3.0
            }]
        );
    }

    #[test]
    fn rejects_bad_model_parameters() {
        assert!(GaussianPairModel::new(0.0, 0.0, PumpEnvelope::Constant).is_err());
        assert!(
            GaussianPairModel::new(0.0, 1.0, PumpEnvelope::Gaussian { sigma_p: -1.0 }).is_err()
        );
        assert!(ShihModel::new(10.0, 1.0, 0.1, 2.0, 1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn dip_closed_form_values() {
        assert_eq!(hom_dip_closed(1.0, 0.0, 1.0), 0.0);
        assert!((hom_dip_closed(1.0, 20.0, 1.0) - 0.5).abs() < 1e-12);
        // mpmath, 40 digits
        assert!((hom_dip_closed(1.0, 1.0, 1.0) - 0.196_734_670_143_683_3).abs() < 1e-15);
        // only σΔz/c matters
        assert!(
            (hom_dip_closed(2.0e13, 3.0e8 * 0.5e-13, 3.0e8) - hom_dip_closed(1.0, 1.0, 1.0)).abs()
                < 1e-14
        );
    }

    #[test]
    fn collapsed_two_path_source_is_a_gaussian_pair() {
        let grid = default_grid(10.0, 1.0);
        let pair = GaussianPairModel::with_beta(10.0, 1.0, 0.5).unwrap();
        let reference = gaussian_pair_spectrum(&pair, &grid).unwrap().spectrum;

        let same = ShihModel::new(10.0, 1.0, 0.5, 0.0, 0.0, 0.0, 1.0).unwrap();
        let s = shih_spectrum(&same, &grid).unwrap().spectrum;
        for (a, b) in s.amplitudes().iter().zip(reference.amplitudes()) {
            assert!((a - b).norm() < 1e-14);
        }

        let delayed = ShihModel::new(10.0, 1.0, 0.5, 1.3, 1.3, -0.4, 1.0).unwrap();
        let s = shih_spectrum(&delayed, &grid).unwrap().spectrum;
        let oracle = reference.apply_path_delays(1.3, -0.4, 1.0);
        for (a, b) in s.amplitudes().iter().zip(oracle.amplitudes()) {
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn exact_formula_limits() {
        let m = ShihModel::from_offsets(20.0, 1.0, 0.1, 0.0, 0.0, 1.0).unwrap();
        assert_eq!(shih_exact(&m, 0.0).unwrap(), 0.0);
        assert_eq!(shih_b_factor(&m), 1.0);
        let far = ShihModel::from_offsets(20.0, 1.0, 0.1, 20.0, 0.0, 1.0).unwrap();
        assert!((shih_b_factor(&far) - 0.5).abs() < 1e-10);
    }

    #[test]
    fn reduced_formula_peak_and_dip() {
        let sigma_dl = 20.0;
        // 4ΔL/λ = 1001 → Ω = 2π·1001/(4ΔL)
        let odd = ShihModel::from_offsets(
            2.0 * PI * 1001.0 / (4.0 * sigma_dl),
            1.0,
            0.01,
            sigma_dl,
            0.0,
            1.0,
        )
        .unwrap();
        assert_eq!(Parity::from_phase_order(odd.phase_order()), Parity::Odd);
        assert!((shih_reduced(&odd, 0.0) - 1.0).abs() < 1e-12);
        let even = ShihModel::from_offsets(
            2.0 * PI * 1000.0 / (4.0 * sigma_dl),
            1.0,
            0.01,
            sigma_dl,
            0.0,
            1.0,
        )
        .unwrap();
        assert_eq!(Parity::from_phase_order(even.phase_order()), Parity::Even);
        assert!(shih_reduced(&even, 0.0).abs() < 1e-12);
        assert!(reduced_regime_warnings(&odd).is_empty());
        let wide = ShihModel::from_offsets(20.0, 1.0, 0.5, 1.0, 0.0, 1.0).unwrap();
        assert_eq!(reduced_regime_warnings(&wide).len(), 1);
    }

    #[test]
    fn reduced_tracks_exact_for_very_narrow_pump() {
        let omega = 2.0 * PI * 1001.0 / 80.0;
        let m = ShihModel::from_offsets(omega, 1.0, 0.001, 20.0, 0.0, 1.0).unwrap();
        for k in -30..=30 {
            let dz = k as f64;
            let diff = (shih_exact(&m, dz).unwrap() - shih_reduced(&m, dz)).abs();
            assert!(diff < 1e-4, "dz = {dz}: {diff}");
        }
    }

    #[test]
    fn numeric_norm_factor_limits() {
        let grid_for = |m: &ShihModel| m.resolving_grid(6.0, 257).unwrap();
        let m = ShihModel::from_offsets(30.0, 1.0, 0.5, 0.0, 0.0, 1.0).unwrap();
        assert!((shih_norm_numeric(&m, &grid_for(&m)) - 1.0).abs() < 1e-14);
        let far = ShihModel::from_offsets(30.0, 1.0, 0.5, 20.0, 0.0, 1.0).unwrap();
        assert!((shih_norm_numeric(&far, &grid_for(&far)) - 0.5).abs() < 1e-10);
    }

    #[test]
    fn resolving_grid_refines_for_narrow_pump() {
        let g = pump_resolving_grid(5.0, 1.0, 0.01, 4.0, 257).unwrap();
        assert!(g.spacing() * PUMP_POINTS_PER_SIGMA <= 0.01 + 1e-15);
        assert_eq!(g.len() % 2, 1);
        assert_eq!(g.center(), 5.0);
        let coarse = pump_resolving_grid(5.0, 1.0, 2.0, 6.0, 257).unwrap();
        assert_eq!(coarse.len(), 257);
    }

    #[test]
    fn delta_pump_parity_dichotomy() {
        let grid = default_grid(50.0, 1.0);
        let cos = delta_pump_spectrum(1.0, 50.0, 3.0, Parity::Even, 1.0, &grid)
            .unwrap()
            .spectrum;
        assert!(cos.antisymmetric_weight() < 1e-12);
        assert!(coincidence_probability(&cos, &BeamSplitterParams::balanced()) < 1e-12);

        let sin = delta_pump_spectrum(1.0, 50.0, 3.0, Parity::Odd, 1.0, &grid)
            .unwrap()
            .spectrum;
        assert!((sin.antisymmetric_weight() - 1.0).abs() < 1e-12);
        assert!(
            (coincidence_probability(&sin, &BeamSplitterParams::balanced()) - 1.0).abs() < 1e-12
        );
        assert!((trapping_fidelity(&sin) - 1.0).abs() < 1e-12);
        for k in 0..grid.len() {
            assert_eq!(sin.get(k, k).norm(), 0.0);
        }
        // support only on the anti-diagonal
        for i in 0..grid.len() {
            for j in 0..grid.len() {
                if j != grid.mirror(i) {
                    assert_eq!(cos.get(i, j).norm(), 0.0);
                }
            }
        }
    }

    #[test]
    fn delta_pump_errors() {
        let grid = default_grid(50.0, 1.0);
        assert_eq!(
            delta_pump_spectrum(1.0, 50.0, 0.0, Parity::Odd, 1.0, &grid).unwrap_err(),
            Error::DegenerateSpectrum
        );
        assert!(matches!(
            delta_pump_spectrum(1.0, 49.0, 1.0, Parity::Even, 1.0, &grid),
            Err(Error::GridNotCentered { .. })
        ));
    }

    #[test]
    fn bell_pair_is_trapped() {
        let grid = FrequencyGrid::new(0.0, 4.0, 9).unwrap();
        let built = bell_antisymmetric_spectrum(-2.0, 3.0, &grid).unwrap();
        assert!(built.warnings.is_empty());
        let s = built.spectrum;
        assert!((s.antisymmetric_weight() - 1.0).abs() < 1e-14);
        let out = transform(&s, &BeamSplitterParams::balanced());
        assert!((out.p_coinc - 1.0).abs() < 1e-12);
        // E = (c − cᵀ)/2 = c entrywise on the two cells
        assert!(out.state.distance(&TwoPhotonState::from(&s)) < 1e-12);
        assert!((s.get(2, 7).re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((s.get(7, 2).re + FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn bell_pair_snapping_and_collision() {
        let grid = FrequencyGrid::new(0.0, 4.0, 9).unwrap();
        let built = bell_antisymmetric_spectrum(-2.2, 3.0, &grid).unwrap();
        assert_eq!(
            built.warnings,
            [Warning::SnappedToGrid {
                requested: -2.2,
                actual: -2.0
            }]
        );
        assert_eq!(
            bell_antisymmetric_spectrum(1.0, 1.1, &grid).unwrap_err(),
            Error::CoincidentFrequencies { index: 5 }
        );
    }

    #[test]
    fn bell_closed_form_matches_delayed_pair() {
        let grid = FrequencyGrid::new(0.0, 4.0, 9).unwrap();
        let s = bell_antisymmetric_spectrum(-2.0, 3.0, &grid)
            .unwrap()
            .spectrum;
        for dz in [0.0, 0.3, 1.7, -2.5] {
            let d = s.apply_path_delays(dz, 0.0, 1.0);
            let p = coincidence_probability(&d, &BeamSplitterParams::balanced());
            assert!((p - bell_closed(-2.0, 3.0, dz, 1.0)).abs() < 1e-12);
            let common = s.apply_path_delays(dz, dz, 1.0);
            assert!(
                (coincidence_probability(&common, &BeamSplitterParams::balanced()) - 1.0).abs()
                    < 1e-12
            );
        }
    }
}
