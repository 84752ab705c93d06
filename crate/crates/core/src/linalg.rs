//! Dense row-major complex matrix helpers.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

const MAX_POWER_ITERATIONS: usize = 20_000;

pub(crate) fn frobenius_sqr(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum()
}

/// `A·B` for square `n × n` row-major matrices.
pub(crate) fn matmul(a: &[Complex64], b: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        let row = &mut out[i * n..(i + 1) * n];
        for k in 0..n {
            let aik = a[i * n + k];
            if aik == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (o, bkj) in row.iter_mut().zip(&b[k * n..(k + 1) * n]) {
                *o += aik * bkj;
            }
        }
    }
    out
}

/// `y = A·x`.
fn apply(a: &[Complex64], x: &[Complex64], n: usize, y: &mut [Complex64]) {
    for (i, yi) in y.iter_mut().enumerate() {
        *yi = a[i * n..(i + 1) * n]
            .iter()
            .zip(x)
            .map(|(aij, xj)| aij * xj)
            .sum();
    }
}

/// `y = Aᴴ·x`.
fn apply_adjoint(a: &[Complex64], x: &[Complex64], n: usize, y: &mut [Complex64]) {
    y.iter_mut().for_each(|v| *v = Complex64::new(0.0, 0.0));
    for (i, xi) in x.iter().enumerate() {
        for (yj, aij) in y.iter_mut().zip(&a[i * n..(i + 1) * n]) {
            *yj += aij.conj() * xi;
        }
    }
}

fn normalize(v: &mut [Complex64]) -> f64 {
    let norm = libm::sqrt(frobenius_sqr(v));
    if norm > 0.0 {
        v.iter_mut().for_each(|z| *z /= norm);
    }
    norm
}

/// Largest singular triplet `(σ₁², u, v)` with `A·v = σ₁·u`, by power
/// iteration on `AᴴA` started from the heaviest row.
pub(crate) fn leading_singular(a: &[Complex64], n: usize) -> (f64, Vec<Complex64>, Vec<Complex64>) {
    let zero = Complex64::new(0.0, 0.0);
    let heaviest = (0..n)
        .map(|i| (i, frobenius_sqr(&a[i * n..(i + 1) * n])))
        .fold(
            (0, 0.0),
            |best, cur| if cur.1 > best.1 { cur } else { best },
        );
    if heaviest.1 == 0.0 {
        return (0.0, vec![zero; n], vec![zero; n]);
    }

    let mut v: Vec<Complex64> = a[heaviest.0 * n..(heaviest.0 + 1) * n]
        .iter()
        .map(|z| z.conj())
        .collect();
    normalize(&mut v);
    let mut u = vec![zero; n];
    let mut w = vec![zero; n];
    let mut lambda = 0.0;
    for _ in 0..MAX_POWER_ITERATIONS {
        apply(a, &v, n, &mut u);
        let next = frobenius_sqr(&u);
        apply_adjoint(a, &u, n, &mut w);
        core::mem::swap(&mut v, &mut w);
        normalize(&mut v);
        let converged = next - lambda <= 1e-15 * next;
        lambda = next;
        if converged {
            break;
        }
    }
    apply(a, &v, n, &mut u);
    let sigma_sq = frobenius_sqr(&u);
    normalize(&mut u);
    (sigma_sq, u, v)
}
