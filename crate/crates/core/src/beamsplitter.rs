//! Lossless beam splitter acting on two-photon states.
//!
//! A creation operator entering port `k` at frequency `ω` maps to
//! `a_k†(ω) → Σ_m S[m][k]·a_m†(ω)`, with `S` the matrix of
//! [`BeamSplitterParams::matrix`]. Two-photon states are stored as
//! coefficient matrices of `a_1†a_1†`, `a_1†a_2†` and `a_2†a_2†`, and norms
//! of the same-port blocks use the bosonic kernel
//! `⟨0|a(ω_k)a(ω_l)a†(ω_i)a†(ω_j)|0⟩ = δ_ki δ_lj + δ_kj δ_li`.

use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_4;
use num_complex::Complex64;

use crate::error::{require_finite, Result};
use crate::grid::FrequencyGrid;
use crate::spectrum::BiphotonSpectrum;

pub type Mat2 = [[Complex64; 2]; 2];

/// Mixing angle `θ` and phases `φ_τ`, `φ_ρ` of the beam-splitter unitary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamSplitterParams {
    theta: f64,
    phi_tau: f64,
    phi_rho: f64,
}

impl BeamSplitterParams {
    pub fn new(theta: f64, phi_tau: f64, phi_rho: f64) -> Result<Self> {
        Ok(Self {
            theta: require_finite("theta", theta)?,
            phi_tau: require_finite("phi_tau", phi_tau)?,
            phi_rho: require_finite("phi_rho", phi_rho)?,
        })
    }

    /// 50/50 splitter, `θ = π/4` with zero phases.
    pub fn balanced() -> Self {
        Self {
            theta: FRAC_PI_4,
            phi_tau: 0.0,
            phi_rho: 0.0,
        }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi_tau(&self) -> f64 {
        self.phi_tau
    }

    pub fn phi_rho(&self) -> f64 {
        self.phi_rho
    }

    /// Total phase `φ = φ_τ + φ_ρ`.
    pub fn phi(&self) -> f64 {
        self.phi_tau + self.phi_rho
    }

    /// `[[e^{iφ_τ}cosθ, e^{iφ_ρ}sinθ], [−e^{−iφ_ρ}sinθ, e^{−iφ_τ}cosθ]]`.
    pub fn matrix(&self) -> Mat2 {
        let (s, c) = libm::sincos(self.theta);
        [
            [
                Complex64::cis(self.phi_tau) * c,
                Complex64::cis(self.phi_rho) * s,
            ],
            [
                -Complex64::cis(-self.phi_rho) * s,
                Complex64::cis(-self.phi_tau) * c,
            ],
        ]
    }

    /// Parameters of the inverse unitary: `S⁻¹(θ, φ_τ, φ_ρ) = S(−θ, −φ_τ, φ_ρ)`.
    pub fn inverse(&self) -> Self {
        Self {
            theta: -self.theta,
            phi_tau: -self.phi_tau,
            phi_rho: self.phi_rho,
        }
    }
}

/// A general two-photon state over one frequency grid.
///
/// `amp_12[i][j]` multiplies `a_1†(ω_i)a_2†(ω_j)`; `amp_11` and `amp_22`
/// multiply the same-port products and are only meaningful up to their
/// symmetric part.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoPhotonState {
    grid: FrequencyGrid,
    amp_11: Vec<Complex64>,
    amp_12: Vec<Complex64>,
    amp_22: Vec<Complex64>,
}

impl From<&BiphotonSpectrum> for TwoPhotonState {
    /// One photon in each input port, `Σ c[i,j]·a_1†(ω_i)a_2†(ω_j)|0⟩`.
    fn from(s: &BiphotonSpectrum) -> Self {
        let zeros = alloc::vec![Complex64::new(0.0, 0.0); s.amplitudes().len()];
        Self {
            grid: *s.grid(),
            amp_11: zeros.clone(),
            amp_12: s.amplitudes().to_vec(),
            amp_22: zeros,
        }
    }
}

fn transpose(a: &[Complex64], n: usize) -> impl Iterator<Item = Complex64> + '_ {
    (0..n * n).map(move |k| a[(k % n) * n + k / n])
}

/// `Σ A*[i,j]·(B[i,j] + B[j,i])`.
fn bosonic_inner(a: &[Complex64], b: &[Complex64], n: usize) -> Complex64 {
    a.iter()
        .zip(b.iter().zip(transpose(b, n)))
        .map(|(x, (y, yt))| x.conj() * (y + yt))
        .sum()
}

fn plain_inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

impl TwoPhotonState {
    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn amp_11(&self) -> &[Complex64] {
        &self.amp_11
    }

    pub fn amp_12(&self) -> &[Complex64] {
        &self.amp_12
    }

    pub fn amp_22(&self) -> &[Complex64] {
        &self.amp_22
    }

    /// Substitutes every creation operator through the splitter matrix.
    pub fn apply_beam_splitter(&self, p: &BeamSplitterParams) -> Self {
        let t = p.matrix();
        let n = self.grid.len();
        let a21 = |_: usize| Complex64::new(0.0, 0.0);
        let mut out11 = Vec::with_capacity(n * n);
        let mut out22 = Vec::with_capacity(n * n);
        let mut b12 = Vec::with_capacity(n * n);
        let mut b21 = Vec::with_capacity(n * n);
        for k in 0..n * n {
            let blocks = [[self.amp_11[k], self.amp_12[k]], [a21(k), self.amp_22[k]]];
            let out = |m: usize, q: usize| -> Complex64 {
                let mut acc = Complex64::new(0.0, 0.0);
                for (kk, row) in blocks.iter().enumerate() {
                    for (ll, blk) in row.iter().enumerate() {
                        acc += t[m][kk] * t[q][ll] * blk;
                    }
                }
                acc
            };
            out11.push(out(0, 0));
            b12.push(out(0, 1));
            b21.push(out(1, 0));
            out22.push(out(1, 1));
        }
        // a_2†(ω_i)a_1†(ω_j) = a_1†(ω_j)a_2†(ω_i)
        let amp_12 = b12
            .iter()
            .zip(transpose(&b21, n))
            .map(|(x, y)| x + y)
            .collect();
        Self {
            grid: self.grid,
            amp_11: out11,
            amp_12,
            amp_22: out22,
        }
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        let n = self.grid.len();
        bosonic_inner(&self.amp_11, &other.amp_11, n)
            + plain_inner(&self.amp_12, &other.amp_12)
            + bosonic_inner(&self.amp_22, &other.amp_22, n)
    }

    /// Probability that both photons leave through port 1.
    pub fn p_11(&self) -> f64 {
        bosonic_inner(&self.amp_11, &self.amp_11, self.grid.len()).re
    }

    pub fn p_22(&self) -> f64 {
        bosonic_inner(&self.amp_22, &self.amp_22, self.grid.len()).re
    }

    /// Click-click probability, one photon in each port.
    pub fn p_coinc(&self) -> f64 {
        plain_inner(&self.amp_12, &self.amp_12).re
    }

    /// `‖self − other‖`, comparing same-port blocks by their symmetric parts.
    pub fn distance(&self, other: &Self) -> f64 {
        let n = self.grid.len();
        let diff = |a: &[Complex64], b: &[Complex64]| -> Vec<Complex64> {
            a.iter().zip(b).map(|(x, y)| x - y).collect()
        };
        let d11 = diff(&self.amp_11, &other.amp_11);
        let d12 = diff(&self.amp_12, &other.amp_12);
        let d22 = diff(&self.amp_22, &other.amp_22);
        let sq = bosonic_inner(&d11, &d11, n).re
            + plain_inner(&d12, &d12).re
            + bosonic_inner(&d22, &d22, n).re;
        libm::sqrt(sq.max(0.0))
    }
}

/// Output state of the splitter, split into its three detection channels.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputDecomposition {
    pub state: TwoPhotonState,
    pub p_11: f64,
    pub p_22: f64,
    pub p_coinc: f64,
}

impl OutputDecomposition {
    pub fn amp_11(&self) -> &[Complex64] {
        self.state.amp_11()
    }

    pub fn amp_22(&self) -> &[Complex64] {
        self.state.amp_22()
    }

    pub fn amp_12(&self) -> &[Complex64] {
        self.state.amp_12()
    }

    pub fn total_probability(&self) -> f64 {
        self.p_11 + self.p_22 + self.p_coinc
    }
}

/// Propagates a one-photon-per-port input through the splitter.
pub fn transform(s: &BiphotonSpectrum, p: &BeamSplitterParams) -> OutputDecomposition {
    let state = TwoPhotonState::from(s).apply_beam_splitter(p);
    OutputDecomposition {
        p_11: state.p_11(),
        p_22: state.p_22(),
        p_coinc: state.p_coinc(),
        state,
    }
}

/// `Σ|c[i,j]cos²θ − c[j,i]sin²θ|²`, the click-click channel norm,
/// evaluated without materializing the output state.
pub fn coincidence_probability(s: &BiphotonSpectrum, p: &BeamSplitterParams) -> f64 {
    let (sn, cs) = libm::sincos(p.theta());
    let (t, r) = (cs * cs, sn * sn);
    let n = s.dim();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            acc += (s.get(i, j) * t - s.get(j, i) * r).norm_sqr();
        }
    }
    acc
}

/// `|⟨in|out⟩|²` for the given splitter.
pub fn input_fidelity(s: &BiphotonSpectrum, p: &BeamSplitterParams) -> f64 {
    let (sn, cs) = libm::sincos(p.theta());
    let (t, r) = (cs * cs, sn * sn);
    let n = s.dim();
    let mut overlap = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            let e = s.get(i, j) * t - s.get(j, i) * r;
            overlap += s.get(i, j).conj() * e;
        }
    }
    overlap.norm_sqr()
}

/// Overlap of the input with the 50/50 output; one exactly when the state
/// is left unchanged (trapped) by the balanced splitter.
pub fn trapping_fidelity(s: &BiphotonSpectrum) -> f64 {
    input_fidelity(s, &BeamSplitterParams::balanced())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use core::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_8, PI};
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn mat_close(a: &Mat2, b: &Mat2, tol: f64) -> bool {
        (0..2).all(|i| (0..2).all(|j| (a[i][j] - b[i][j]).norm() <= tol))
    }

    fn mul(a: &Mat2, b: &Mat2) -> Mat2 {
        let mut out = [[c(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        out
    }

    /// 2×2 inverse by the adjugate formula.
    fn inverse(a: &Mat2) -> Mat2 {
        let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
        [
            [a[1][1] / det, -a[0][1] / det],
            [-a[1][0] / det, a[0][0] / det],
        ]
    }

    const IDENTITY: Mat2 = [
        [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
        [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
    ];

    fn grid(n: usize) -> FrequencyGrid {
        FrequencyGrid::new(1.0, 1.0, n).unwrap()
    }

    fn spec(n: usize, raw: &[(f64, f64)]) -> BiphotonSpectrum {
        BiphotonSpectrum::from_amplitudes(grid(n), raw.iter().map(|&(a, b)| c(a, b)).collect())
            .unwrap()
    }

    fn random_spectrum() -> impl Strategy<Value = BiphotonSpectrum> {
        prop::sample::select(vec![3usize, 5, 9]).prop_flat_map(|n| {
            prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n * n)
                .prop_filter("non-zero", |v| {
                    v.iter().any(|&(a, b)| a.abs() + b.abs() > 1e-3)
                })
                .prop_map(move |raw| spec(n, &raw))
        })
    }

    fn random_params() -> impl Strategy<Value = BeamSplitterParams> {
        (-PI..PI, -PI..PI, -PI..PI).prop_map(|(t, a, b)| BeamSplitterParams::new(t, a, b).unwrap())
    }

    fn symmetric_3() -> BiphotonSpectrum {
        spec(
            3,
            &[
                (1.0, 0.0),
                (0.2, 1.0),
                (0.0, 0.5),
                (0.2, 1.0),
                (2.0, 0.0),
                (0.3, 0.0),
                (0.0, 0.5),
                (0.3, 0.0),
                (0.0, -1.0),
            ],
        )
    }

    fn antisymmetric_3() -> BiphotonSpectrum {
        spec(
            3,
            &[
                (0.0, 0.0),
                (1.0, 0.5),
                (0.0, 0.7),
                (-1.0, -0.5),
                (0.0, 0.0),
                (0.4, 0.0),
                (0.0, -0.7),
                (-0.4, 0.0),
                (0.0, 0.0),
            ],
        )
    }

    #[test]
    fn transparent_and_balanced_matrices() {
        let id = BeamSplitterParams::new(0.0, 0.0, 0.0).unwrap().matrix();
        assert!(mat_close(&id, &IDENTITY, 0.0));
        let m = BeamSplitterParams::balanced().matrix();
        let h = FRAC_1_SQRT_2;
        let expected = [[c(h, 0.0), c(h, 0.0)], [c(-h, 0.0), c(h, 0.0)]];
        assert!(mat_close(&m, &expected, 1e-15));
    }

    #[test]
    fn rejects_non_finite_angles() {
        assert!(BeamSplitterParams::new(f64::NAN, 0.0, 0.0).is_err());
        assert!(BeamSplitterParams::new(0.0, f64::INFINITY, 0.0).is_err());
    }

    #[test]
    fn inverse_parameters() {
        let zero = BeamSplitterParams::new(0.0, 0.0, 0.0).unwrap();
        assert_eq!(zero.inverse().theta(), 0.0);
        assert_eq!(zero.inverse().phi_tau(), 0.0);
        let p = BeamSplitterParams::new(FRAC_PI_4, 0.3, 0.7).unwrap();
        let q = p.inverse();
        assert_eq!(
            (q.theta(), q.phi_tau(), q.phi_rho()),
            (-FRAC_PI_4, -0.3, 0.7)
        );
        assert!(mat_close(&q.matrix(), &inverse(&p.matrix()), 1e-14));
    }

    #[test]
    fn balanced_symmetric_input_fully_coalesces() {
        let out = transform(&symmetric_3(), &BeamSplitterParams::balanced());
        assert!(out.p_coinc < 1e-30);
        assert!((out.p_11 - 0.5).abs() < 1e-12);
        assert!((out.p_22 - 0.5).abs() < 1e-12);
    }

    #[test]
    fn balanced_antisymmetric_input_never_coalesces() {
        let s = antisymmetric_3();
        let out = transform(&s, &BeamSplitterParams::balanced());
        assert!((out.p_coinc - 1.0).abs() < 1e-12);
        assert!(out.p_11 < 1e-30 && out.p_22 < 1e-30);
        assert!((coincidence_probability(&s, &BeamSplitterParams::balanced()) - 1.0).abs() < 1e-12);
        assert!((trapping_fidelity(&s) - 1.0).abs() < 1e-12);
        assert!(trapping_fidelity(&symmetric_3()) < 1e-12);
    }

    #[test]
    fn degenerate_single_cell_at_general_angle() {
        let mut raw = vec![(0.0, 0.0); 9];
        raw[4] = (1.0, 0.0);
        let s = spec(3, &raw);
        for theta in [0.0, FRAC_PI_8, FRAC_PI_4, 3.0 * FRAC_PI_8, 0.4, 1.1] {
            let p = BeamSplitterParams::new(theta, 0.2, -0.9).unwrap();
            let expected = libm::cos(2.0 * theta).powi(2);
            assert!((coincidence_probability(&s, &p) - expected).abs() < 1e-12);
            assert!((transform(&s, &p).p_coinc - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn explicit_channel_amplitudes() {
        let s = spec(
            3,
            &[
                (0.3, 0.1),
                (1.0, 0.0),
                (0.0, 0.2),
                (0.1, 0.0),
                (0.5, 0.5),
                (0.0, 0.0),
                (0.7, 0.0),
                (0.0, 0.1),
                (0.2, 0.0),
            ],
        );
        let p = BeamSplitterParams::new(0.6, 0.4, 1.3).unwrap();
        let out = transform(&s, &p);
        let (sn, cs) = (libm::sin(0.6), libm::cos(0.6));
        for i in 0..3 {
            for j in 0..3 {
                let k = i * 3 + j;
                let d1 = s.get(i, j) * Complex64::cis(p.phi()) * cs * sn;
                let d2 = -s.get(i, j) * Complex64::cis(-p.phi()) * cs * sn;
                let e = s.get(i, j) * cs * cs - s.get(j, i) * sn * sn;
                assert!((out.amp_11()[k] - d1).norm() < 1e-14);
                assert!((out.amp_22()[k] - d2).norm() < 1e-14);
                assert!((out.amp_12()[k] - e).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn transparent_splitter_leaves_input() {
        let s = antisymmetric_3();
        let p = BeamSplitterParams::new(0.0, 0.0, 0.0).unwrap();
        let out = transform(&s, &p);
        assert!((out.p_coinc - 1.0).abs() < 1e-15);
        assert!(out
            .amp_11()
            .iter()
            .chain(out.amp_22())
            .all(|z| z.norm() == 0.0));
        assert!(out.state.distance(&TwoPhotonState::from(&s)) < 1e-15);
        assert!((input_fidelity(&s, &p) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn mixed_symmetry_trapping_is_weight_squared() {
        let s = spec(
            3,
            &[
                (0.1, 0.0),
                (1.0, 0.3),
                (0.0, 0.2),
                (0.4, 0.0),
                (0.5, 0.5),
                (0.9, 0.0),
                (0.7, -0.2),
                (0.0, 0.1),
                (0.2, 0.0),
            ],
        );
        let w = s.symmetry_decompose().w_antisym;
        // brute force: build the 50/50 click-click matrix entrywise
        let n = 3;
        let mut overlap = c(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                let e = (s.get(i, j) - s.get(j, i)) * 0.5;
                overlap += s.get(i, j).conj() * e;
            }
        }
        assert!((trapping_fidelity(&s) - overlap.norm_sqr()).abs() < 1e-12);
        assert!((trapping_fidelity(&s) - w * w).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn matrix_is_unitary(p in random_params()) {
            let m = p.matrix();
            let adj = [[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]];
            prop_assert!(mat_close(&mul(&m, &adj), &IDENTITY, 1e-14));
            prop_assert!(mat_close(&mul(&p.inverse().matrix(), &m), &IDENTITY, 1e-14));
        }

        #[test]
        fn probability_is_conserved(s in random_spectrum(), p in random_params()) {
            let out = transform(&s, &p);
            prop_assert!((out.total_probability() - 1.0).abs() < 1e-10);
            for q in [out.p_11, out.p_22, out.p_coinc] {
                prop_assert!((-1e-12..=1.0 + 1e-12).contains(&q));
            }
            prop_assert!((coincidence_probability(&s, &p) - out.p_coinc).abs() < 1e-12);
        }

        #[test]
        fn balanced_coincidence_is_antisymmetric_weight(s in random_spectrum(), a in -PI..PI, b in -PI..PI) {
            let p = BeamSplitterParams::new(FRAC_PI_4, a, b).unwrap();
            let pc = coincidence_probability(&s, &p);
            // full-plane form: (1/4) Σ |c − cᵀ|²
            let n = s.dim();
            let mut full = 0.0;
            for i in 0..n {
                for j in 0..n {
                    full += (s.get(i, j) - s.get(j, i)).norm_sqr();
                }
            }
            prop_assert!((pc - 0.25 * full).abs() < 1e-12);
            prop_assert!((pc - s.antisymmetric_weight()).abs() < 1e-12);
            prop_assert!((pc - (1.0 - s.exchange_overlap()) / 2.0).abs() < 1e-12);
            prop_assert!((pc - coincidence_probability(&s, &BeamSplitterParams::balanced())).abs() < 1e-12);
            if pc < 1e-20 {
                let out = transform(&s, &p);
                prop_assert!((out.p_11 - 0.5).abs() < 1e-10);
            }
        }

        #[test]
        fn inverse_round_trip_restores_input(s in random_spectrum(), p in random_params()) {
            let input = TwoPhotonState::from(&s);
            let back = input.apply_beam_splitter(&p).apply_beam_splitter(&p.inverse());
            prop_assert!(back.distance(&input) < 1e-12);
            for (a, b) in back.amp_12().iter().zip(s.amplitudes()) {
                prop_assert!((a - b).norm() < 1e-12);
            }
        }
    }
}
