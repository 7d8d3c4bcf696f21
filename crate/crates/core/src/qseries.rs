//! Truncated q-expansion arithmetic over exact rationals.
//!
//! A [`QSeries`] stores the coefficients of `q^0 .. q^N` of a formal power
//! series. Arithmetic never extrapolates: the product of two series is only
//! known up to the smaller truncation order, and asking for a coefficient
//! beyond the truncation order is an error, not zero. Silent zero-padding is
//! the classic q-series bug and is ruled out at the type level here.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QSeriesError {
    /// Requested the coefficient of `q^index`, but the series is only known
    /// up to `q^trunc`.
    #[error("coefficient q^{index} requested beyond truncation order {trunc}")]
    CoefficientBeyondTruncation { index: usize, trunc: usize },
    /// An internal fixed-width integer convolution overflowed; the caller
    /// falls back to arbitrary precision.
    #[error("fixed-width integer convolution overflowed at q^{index}")]
    IntegerOverflow { index: usize },
}

/// A power series truncated at order `N`: coefficients of `q^0 .. q^N` are
/// known exactly, everything beyond is unknown.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QSeries {
    coeffs: Vec<BigRational>,
}

impl QSeries {
    /// Builds a series from the coefficients of `q^0 .. q^N`.
    ///
    /// Panics if `coeffs` is empty (a series must at least carry `q^0`).
    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        assert!(!coeffs.is_empty(), "a QSeries carries at least q^0");
        QSeries { coeffs }
    }

    pub fn from_integers(coeffs: Vec<i64>) -> Self {
        Self::from_coeffs(
            coeffs
                .into_iter()
                .map(|c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        )
    }

    /// The zero series truncated at `q^trunc`.
    pub fn zero(trunc: usize) -> Self {
        QSeries {
            coeffs: vec![BigRational::zero(); trunc + 1],
        }
    }

    /// The constant series 1 truncated at `q^trunc`.
    pub fn one(trunc: usize) -> Self {
        let mut s = Self::zero(trunc);
        s.coeffs[0] = BigRational::one();
        s
    }

    /// Truncation order `N`; coefficients beyond `q^N` are unknown.
    pub fn trunc_order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// The coefficient of `q^n`, or an error when `n` exceeds the truncation
    /// order. Unknown is not zero.
    pub fn coeff(&self, n: usize) -> Result<&BigRational, QSeriesError> {
        self.coeffs
            .get(n)
            .ok_or(QSeriesError::CoefficientBeyondTruncation {
                index: n,
                trunc: self.trunc_order(),
            })
    }

    /// All known coefficients, indexed by the exponent of `q`.
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Drops coefficients beyond `q^trunc`. Panics if the series is not
    /// known that far (truncating never invents data).
    pub fn truncated(&self, trunc: usize) -> Self {
        assert!(
            trunc <= self.trunc_order(),
            "cannot extend truncation order {} to {}",
            self.trunc_order(),
            trunc
        );
        QSeries {
            coeffs: self.coeffs[..=trunc].to_vec(),
        }
    }

    /// Truncated Cauchy product; the result is known up to the smaller of
    /// the two truncation orders.
    pub fn mul(&self, other: &QSeries) -> QSeries {
        let trunc = self.trunc_order().min(other.trunc_order());
        let mut out = vec![BigRational::zero(); trunc + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(trunc + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(trunc + 1 - i) {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        QSeries { coeffs: out }
    }

    pub fn add(&self, other: &QSeries) -> QSeries {
        let trunc = self.trunc_order().min(other.trunc_order());
        let coeffs = (0..=trunc)
            .map(|n| &self.coeffs[n] + &other.coeffs[n])
            .collect();
        QSeries { coeffs }
    }

    pub fn sub(&self, other: &QSeries) -> QSeries {
        let trunc = self.trunc_order().min(other.trunc_order());
        let coeffs = (0..=trunc)
            .map(|n| &self.coeffs[n] - &other.coeffs[n])
            .collect();
        QSeries { coeffs }
    }

    pub fn scale(&self, factor: &BigRational) -> QSeries {
        QSeries {
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    /// Multiplies by `q^k`. The known range shifts with the coefficients, so
    /// the truncation order grows to `N + k`.
    pub fn shift_up(&self, k: usize) -> QSeries {
        let mut coeffs = vec![BigRational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        QSeries { coeffs }
    }

    /// `e`-th power by binary exponentiation. Exact arithmetic makes this
    /// bit-identical to the `e`-fold repeated product. `e = 0` yields the
    /// constant series 1 at the same truncation order.
    pub fn pow(&self, e: u32) -> QSeries {
        let mut result = QSeries::one(self.trunc_order());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
}

/// The Euler product `∏_{n≥1} (1 - q^n)` truncated at `q^N`, built from the
/// pentagonal number theorem: the coefficient of `q^j` is `(-1)^k` when
/// `j = k(3k∓1)/2` is a generalized pentagonal number and 0 otherwise.
/// The sparse construction has only `O(√N)` nonzero writes.
pub fn eta_expansion(trunc: usize) -> QSeries {
    let mut coeffs = vec![BigRational::zero(); trunc + 1];
    for (j, sign) in pentagonal_terms(trunc) {
        coeffs[j] = BigRational::from_integer(BigInt::from(sign));
    }
    QSeries { coeffs }
}

/// Generalized pentagonal numbers `k(3k-1)/2` and `k(3k+1)/2` up to `trunc`,
/// with the sign `(-1)^k`.
fn pentagonal_terms(trunc: usize) -> Vec<(usize, i64)> {
    let mut terms = vec![(0usize, 1i64)];
    let mut k = 1usize;
    loop {
        let first = k * (3 * k - 1) / 2;
        if first > trunc {
            break;
        }
        let sign = if k % 2 == 0 { 1 } else { -1 };
        terms.push((first, sign));
        let second = k * (3 * k + 1) / 2;
        if second <= trunc {
            terms.push((second, sign));
        }
        k += 1;
    }
    terms
}

// ---------------------------------------------------------------------------
// Fixed-width integer fast path.
//
// Raising the (integer-coefficient) eta series to the 24th power at large
// truncation dominates the runtime of everything downstream. The dense
// rational product above allocates a BigRational per partial product, which
// is far too slow at N ~ 10^4, so the power ladder for integer series runs
// on checked i128 arithmetic and falls back to exact rationals only when a
// convolution would overflow.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub(crate) struct IntSeries {
    pub coeffs: Vec<i128>,
}

impl IntSeries {
    pub(crate) fn trunc_order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Dense checked convolution, truncated to the smaller input order.
    /// Chooses a sparse accumulation when one operand is mostly zeros.
    pub(crate) fn mul(&self, other: &IntSeries) -> Result<IntSeries, QSeriesError> {
        let trunc = self.trunc_order().min(other.trunc_order());
        let (sparse, dense) = if nonzeros(&self.coeffs) <= nonzeros(&other.coeffs) {
            (self, other)
        } else {
            (other, self)
        };
        if nonzeros(&sparse.coeffs) * 64 < trunc + 1 {
            return sparse_mul(sparse, dense, trunc);
        }
        let a = &self.coeffs[..=trunc.min(self.trunc_order())];
        let b = &other.coeffs;
        let convolve_at = |n: usize| -> Result<i128, QSeriesError> {
            let mut acc: i128 = 0;
            let lo = n.saturating_sub(b.len() - 1);
            for i in lo..=n.min(a.len() - 1) {
                let ai = a[i];
                if ai == 0 {
                    continue;
                }
                let prod = ai
                    .checked_mul(b[n - i])
                    .ok_or(QSeriesError::IntegerOverflow { index: n })?;
                acc = acc
                    .checked_add(prod)
                    .ok_or(QSeriesError::IntegerOverflow { index: n })?;
            }
            Ok(acc)
        };

        #[cfg(feature = "parallel")]
        let coeffs: Result<Vec<i128>, QSeriesError> =
            (0..=trunc).into_par_iter().map(convolve_at).collect();
        #[cfg(not(feature = "parallel"))]
        let coeffs: Result<Vec<i128>, QSeriesError> = (0..=trunc).map(convolve_at).collect();

        Ok(IntSeries { coeffs: coeffs? })
    }

    pub(crate) fn pow(&self, e: u32) -> Result<IntSeries, QSeriesError> {
        let mut result = IntSeries {
            coeffs: {
                let mut c = vec![0i128; self.coeffs.len()];
                c[0] = 1;
                c
            },
        };
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(result)
    }

    pub(crate) fn to_qseries(&self) -> QSeries {
        QSeries::from_coeffs(
            self.coeffs
                .iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        )
    }
}

fn nonzeros(coeffs: &[i128]) -> usize {
    coeffs.iter().filter(|&&c| c != 0).count()
}

fn sparse_mul(
    sparse: &IntSeries,
    dense: &IntSeries,
    trunc: usize,
) -> Result<IntSeries, QSeriesError> {
    let entries: Vec<(usize, i128)> = sparse
        .coeffs
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| (i, c))
        .collect();
    let mut out = vec![0i128; trunc + 1];
    for (i, v) in entries {
        if i > trunc {
            break;
        }
        for (j, &w) in dense.coeffs.iter().enumerate().take(trunc + 1 - i) {
            if w == 0 {
                continue;
            }
            let prod = v
                .checked_mul(w)
                .ok_or(QSeriesError::IntegerOverflow { index: i + j })?;
            out[i + j] = out[i + j]
                .checked_add(prod)
                .ok_or(QSeriesError::IntegerOverflow { index: i + j })?;
        }
    }
    Ok(IntSeries { coeffs: out })
}

/// Sparse integer eta expansion for the fast path.
pub(crate) fn eta_int(trunc: usize) -> IntSeries {
    let mut coeffs = vec![0i128; trunc + 1];
    for (j, sign) in pentagonal_terms(trunc) {
        coeffs[j] = sign as i128;
    }
    IntSeries { coeffs }
}

/// Exact-rational eta power for the arbitrary-precision fallback; result is
/// identical to `eta_expansion(trunc).pow(e)` by construction.
pub(crate) fn eta_pow_bigint(trunc: usize, e: u32) -> QSeries {
    eta_expansion(trunc).pow(e)
}

impl std::fmt::Display for QSeries {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let abs = c.abs();
            match n {
                0 => write!(f, "{abs}")?,
                1 => write!(f, "{abs}*q")?,
                _ => write!(f, "{abs}*q^{n}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.trunc_order() + 1)
    }
}
