//! Shifted coefficient products `c_n = a(n)·a(n+r)` and their sign
//! statistics. The non-vanishing and sign counts are the empirical witnesses
//! for the infinitude statements about these sequences; counts are reported
//! per `(form, r, M)` as CSV rows so growth in `M` can be charted.
//!
//! Zero testing is exact rational equality, never a tolerance.

use crate::forms::CuspForm;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ShiftedError {
    #[error("insufficient truncation: need order >= {required}, have {available}")]
    InsufficientTruncation { required: usize, available: usize },
}

/// The sequence `c_n = a(n)a(n+r)` for `n = 1..=M`, exact.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftedSeq {
    r: u64,
    source: String,
    values: Vec<BigRational>,
}

impl ShiftedSeq {
    pub fn shift(&self) -> u64 {
        self.r
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `c_n` for 1-based `n`.
    pub fn value(&self, n: usize) -> &BigRational {
        &self.values[n - 1]
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }
}

/// Builds `c_n = a(n)a(n+r)` for `n = 1..=m`; the form must be truncated to
/// at least `m + r`.
pub fn shifted_products(f: &CuspForm, r: u64, m: usize) -> Result<ShiftedSeq, ShiftedError> {
    let required = m + r as usize;
    if f.trunc_order() < required {
        return Err(ShiftedError::InsufficientTruncation {
            required,
            available: f.trunc_order(),
        });
    }
    let coeffs = f.series().coeffs();
    let values = (1..=m)
        .map(|n| &coeffs[n] * &coeffs[n + r as usize])
        .collect();
    Ok(ShiftedSeq {
        r,
        source: f.label().to_string(),
        values,
    })
}

/// Sign statistics of a shifted sequence. The four counts partition
/// `1..=M`; `first_sign_change` is the smallest `n` whose sign is opposite
/// to some earlier nonzero term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NonvanishingStats {
    pub count_zero: usize,
    pub count_nonzero: usize,
    pub count_positive: usize,
    pub count_negative: usize,
    pub first_sign_change: Option<usize>,
}

pub fn nonvanishing_stats(seq: &ShiftedSeq) -> NonvanishingStats {
    let mut stats = NonvanishingStats {
        count_zero: 0,
        count_nonzero: 0,
        count_positive: 0,
        count_negative: 0,
        first_sign_change: None,
    };
    let mut first_sign: i8 = 0;
    for (i, c) in seq.values.iter().enumerate() {
        if c.is_zero() {
            stats.count_zero += 1;
            continue;
        }
        stats.count_nonzero += 1;
        let sign: i8 = if c.is_positive() { 1 } else { -1 };
        if sign > 0 {
            stats.count_positive += 1;
        } else {
            stats.count_negative += 1;
        }
        if first_sign == 0 {
            first_sign = sign;
        } else if sign != first_sign && stats.first_sign_change.is_none() {
            stats.first_sign_change = Some(i + 1);
        }
    }
    stats
}

/// Whether `a(r+1) ≠ 0` — the hypothesis under which non-vanishing of the
/// shifted sequence of a normalized eigenform is automatic.
pub fn corollary_hypothesis(f: &CuspForm, r: u64) -> Result<bool, ShiftedError> {
    let idx = r as usize + 1;
    if f.trunc_order() < idx {
        return Err(ShiftedError::InsufficientTruncation {
            required: idx,
            available: f.trunc_order(),
        });
    }
    Ok(!f.coefficient(idx).unwrap().is_zero())
}

/// One CSV row of a scan over shifts.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow {
    pub form_id: String,
    pub weight: u64,
    pub r: u64,
    pub m: usize,
    pub stats: NonvanishingStats,
}

pub const SCAN_CSV_HEADER: &str =
    "form_id,k,r,M,count_zero,count_nonzero,count_positive,count_negative,first_sign_change";

impl ScanRow {
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.form_id,
            self.weight,
            self.r,
            self.m,
            self.stats.count_zero,
            self.stats.count_nonzero,
            self.stats.count_positive,
            self.stats.count_negative,
            self.stats
                .first_sign_change
                .map(|n| n.to_string())
                .unwrap_or_default(),
        )
    }
}

fn scan_one(f: &CuspForm, r: u64, m: usize) -> Result<ScanRow, ShiftedError> {
    let seq = shifted_products(f, r, m)?;
    Ok(ScanRow {
        form_id: f.label().to_string(),
        weight: f.weight(),
        r,
        m,
        stats: nonvanishing_stats(&seq),
    })
}

/// Scans shifts `r_lo..=r_hi`, one row per shift, ordered by `r`. Runs the
/// shifts in parallel when the `parallel` feature is enabled; output order
/// and content are identical either way.
pub fn scan_stats(
    f: &CuspForm,
    r_lo: u64,
    r_hi: u64,
    m: usize,
) -> Result<Vec<ScanRow>, ShiftedError> {
    #[cfg(feature = "parallel")]
    {
        (r_lo..=r_hi)
            .into_par_iter()
            .map(|r| scan_one(f, r, m))
            .collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        scan_stats_seq(f, r_lo, r_hi, m)
    }
}

/// Sequential fallback for [`scan_stats`]; always available, used by the
/// benchmark suite as the baseline.
pub fn scan_stats_seq(
    f: &CuspForm,
    r_lo: u64,
    r_hi: u64,
    m: usize,
) -> Result<Vec<ScanRow>, ShiftedError> {
    (r_lo..=r_hi).map(|r| scan_one(f, r, m)).collect()
}
