//! Arithmetic-progression extraction from a q-expansion and its twist-average
//! representation: the sub-series over `n ≡ n0 (mod M)` equals the average of
//! `M` additively twisted translates,
//!
//! ```text
//! g(z) = (1/M) Σ_{s mod M} e^{-2πi n0 s / M} · f(z + s/M),
//! ```
//!
//! which follows from character orthogonality over a full residue system.
//! The `1/φ(M)` normalization (and only the normalization) is also exposed
//! behind [`Normalization::TotientLiteral`] for comparison; it breaks for
//! composite moduli, which the verification demonstrates rather than hides.

use crate::forms::CuspForm;
use crate::qseries::QSeries;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SieveError {
    #[error("insufficient truncation: need order >= {required}, have {available}")]
    InsufficientTruncation { required: usize, available: usize },
    #[error("sample at height y = {y} too low: tail bound {bound:e} not certifiable below 1e-12")]
    TailNotCertifiable { y: f64, bound: f64 },
}

/// Which normalization the twist average uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// `1/M` over a full residue system — forced by character orthogonality.
    FullResidue,
    /// `1/φ(M)` — kept for comparison; wrong for composite `M`.
    TotientLiteral,
}

/// Keeps only the coefficients with index `≡ n0 (mod modulus)`; same
/// truncation as the input.
pub fn ap_extract(f: &CuspForm, n0: u64, modulus: u64) -> QSeries {
    assert!(modulus >= 1 && n0 >= 1);
    let target = n0 % modulus;
    let coeffs = f
        .series()
        .coeffs()
        .iter()
        .enumerate()
        .map(|(n, a)| {
            if n as u64 % modulus == target {
                a.clone()
            } else {
                BigRational::zero()
            }
        })
        .collect();
    QSeries::from_coeffs(coeffs)
}

pub fn euler_phi(mut m: u64) -> u64 {
    let mut phi = m;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            phi -= phi / p;
        }
        p += 1;
    }
    if m > 1 {
        phi -= phi / m;
    }
    phi
}

/// Truncated evaluation `Σ_{m=1..n} a(m) e^{2πimz}` by Horner in
/// `w = e^{2πiz}`.
fn eval_truncated(coeffs: &[f64], z: Complex64) -> Complex64 {
    let w = (Complex64::new(0.0, 2.0 * PI) * z).exp();
    let mut acc = Complex64::new(0.0, 0.0);
    for &a in coeffs.iter().rev() {
        acc = (acc + a) * w;
    }
    acc
}

/// Evaluates both sides of the twist-average identity at each sample point
/// and returns the maximum symmetric relative deviation
/// `|lhs - rhs| / (|lhs| + |rhs| + ε)`.
///
/// Every sample must sit high enough in the upper half-plane for the
/// truncation tail (from the growth constant) to certify below 1e-12.
pub fn twist_average_check(
    f: &CuspForm,
    n0: u64,
    modulus: u64,
    samples: &[Complex64],
    n: usize,
    norm: Normalization,
) -> Result<f64, SieveError> {
    assert!(modulus >= 1 && n0 >= 1);
    if f.trunc_order() < n {
        return Err(SieveError::InsufficientTruncation {
            required: n,
            available: f.trunc_order(),
        });
    }
    for z in samples {
        let bound = f.eval_tail_bound(n, z.im).unwrap_or(f64::INFINITY);
        if !(bound <= 1e-12) {
            return Err(SieveError::TailNotCertifiable { y: z.im, bound });
        }
    }
    let a: Vec<f64> = (1..=n).map(|m| f.coefficient_f64(m).unwrap()).collect();
    let target = n0 % modulus;
    let extracted: Vec<f64> = a
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            if (i + 1) as u64 % modulus == target {
                c
            } else {
                0.0
            }
        })
        .collect();
    let denom = match norm {
        Normalization::FullResidue => modulus as f64,
        Normalization::TotientLiteral => euler_phi(modulus) as f64,
    };
    let mut worst: f64 = 0.0;
    for &z in samples {
        let lhs = eval_truncated(&extracted, z);
        let mut rhs = Complex64::new(0.0, 0.0);
        for s in 0..modulus {
            let phase =
                Complex64::new(0.0, -2.0 * PI * (n0 as f64) * (s as f64) / modulus as f64).exp();
            let shifted = z + Complex64::new(s as f64 / modulus as f64, 0.0);
            rhs += phase * eval_truncated(&a, shifted);
        }
        rhs /= denom;
        let rel = (lhs - rhs).norm() / (lhs.norm() + rhs.norm() + 1e-300);
        worst = worst.max(rel);
    }
    Ok(worst)
}
