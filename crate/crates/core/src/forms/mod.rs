//! Classical modular forms at level one: Δ, the holomorphic Eisenstein
//! series E_k, the echelonized (Miller) basis of the cusp space S_k, Hecke
//! operators, and exact eigenform computation for spaces of dimension ≤ 2.
//!
//! Every construction is exact. A [`CuspForm`] carries its q-expansion over
//! big rationals together with a growth constant `C` such that
//! `|a(n)| ≤ C·n^{k/2}` for every stored coefficient; downstream tail bounds
//! (Dirichlet series, evaluation of the expansion in the upper half-plane)
//! are derived from that constant.

mod eigen;

pub use eigen::{eigenforms, EigenForm, QuadRat};

use crate::qseries::{eta_int, eta_pow_bigint, QSeries, QSeriesError};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormsError {
    #[error("weight must be an even integer >= 4, got {0}")]
    InvalidWeight(u64),
    #[error("insufficient truncation: need order >= {required}, have {available}")]
    InsufficientTruncation { required: usize, available: usize },
    #[error("a cusp form must have a(0) = 0")]
    NotCuspidal,
    #[error("exact eigenform computation supports dim S_k <= 2, got {0}")]
    UnsupportedDimension(usize),
    #[error("Hecke matrix is not diagonalizable over a real quadratic field")]
    UnsupportedEigenstructure,
    #[error("malformed form file: {0}")]
    Parse(String),
    #[error(transparent)]
    Series(#[from] QSeriesError),
}

/// A holomorphic cusp form given by its truncated q-expansion.
#[derive(Debug, Clone, PartialEq)]
pub struct CuspForm {
    label: String,
    weight: u64,
    level: u64,
    series: QSeries,
    growth_const: BigRational,
}

impl CuspForm {
    /// Wraps a q-expansion as a cusp form. Checks cuspidality at ∞ and
    /// derives the growth constant `C = 2·max_n |a(n)|/n^{k/2}` (the trivial
    /// Hecke-bound constant; the doubling is slack for use beyond the stored
    /// range, where the bound is heuristic).
    pub fn new(
        label: impl Into<String>,
        weight: u64,
        level: u64,
        series: QSeries,
    ) -> Result<Self, FormsError> {
        if weight < 4 || weight % 2 != 0 {
            return Err(FormsError::InvalidWeight(weight));
        }
        if !series.coeffs()[0].is_zero() {
            return Err(FormsError::NotCuspidal);
        }
        let half = (weight / 2) as u32;
        let mut max_ratio = BigRational::zero();
        for (n, a) in series.coeffs().iter().enumerate().skip(1) {
            if a.is_zero() {
                continue;
            }
            let ratio = a.abs() / BigRational::from_integer(BigInt::from(n).pow(half));
            if ratio > max_ratio {
                max_ratio = ratio;
            }
        }
        let growth_const = if max_ratio.is_zero() {
            BigRational::one()
        } else {
            max_ratio * BigRational::from_integer(BigInt::from(2))
        };
        debug_assert!(series.coeffs().iter().enumerate().skip(1).all(|(n, a)| {
            a.abs() <= &growth_const * BigRational::from_integer(BigInt::from(n).pow(half))
        }));
        Ok(CuspForm {
            label: label.into(),
            weight,
            level,
            series,
            growth_const,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn weight(&self) -> u64 {
        self.weight
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn series(&self) -> &QSeries {
        &self.series
    }

    pub fn trunc_order(&self) -> usize {
        self.series.trunc_order()
    }

    /// `a(n)`, exact. Asking beyond the truncation order is an error.
    pub fn coefficient(&self, n: usize) -> Result<&BigRational, QSeriesError> {
        self.series.coeff(n)
    }

    pub fn coefficient_f64(&self, n: usize) -> Result<f64, QSeriesError> {
        Ok(self.series.coeff(n)?.to_f64().unwrap_or(f64::NAN))
    }

    /// The constant `C` with `|a(n)| ≤ C·n^{k/2}` for all stored `n`.
    pub fn growth_const(&self) -> &BigRational {
        &self.growth_const
    }

    /// Upper bound on the dropped tail `Σ_{n>n_used} |a(n)| e^{-2πny}` when
    /// the expansion is evaluated at height `y`, from the growth constant.
    /// `None` when the geometric ratio fails to certify (`y` too small).
    pub fn eval_tail_bound(&self, n_used: usize, y: f64) -> Option<f64> {
        let k_half = self.weight as f64 / 2.0;
        let n1 = (n_used + 1) as f64;
        // Term ratio is ((n+1)/n)^{k/2} e^{-2πy}, decreasing in n; bound the
        // tail by a geometric series from the first dropped term.
        let ratio = ((n1 + 1.0) / n1).powf(k_half) * (-2.0 * std::f64::consts::PI * y).exp();
        if !(ratio < 1.0) {
            return None;
        }
        let c = self.growth_const.to_f64().unwrap_or(f64::INFINITY);
        let ln_first = c.ln() + k_half * n1.ln() - 2.0 * std::f64::consts::PI * n1 * y;
        Some(ln_first.exp() / (1.0 - ratio))
    }

    /// Serializes to the plain text format: a header
    /// `weight k level N trunc T` followed by one exact rational coefficient
    /// per line for `q^0 .. q^T`. Round-trips bit-exactly.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "weight {} level {} trunc {}\n",
            self.weight,
            self.level,
            self.trunc_order()
        );
        for c in self.series.coeffs() {
            out.push_str(&c.to_string());
            out.push('\n');
        }
        out
    }

    pub fn from_text(label: impl Into<String>, text: &str) -> Result<Self, FormsError> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| FormsError::Parse("empty file".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 6
            || fields[0] != "weight"
            || fields[2] != "level"
            || fields[4] != "trunc"
        {
            return Err(FormsError::Parse(format!("bad header: {header}")));
        }
        let weight: u64 = fields[1]
            .parse()
            .map_err(|_| FormsError::Parse(format!("bad weight: {}", fields[1])))?;
        let level: u64 = fields[3]
            .parse()
            .map_err(|_| FormsError::Parse(format!("bad level: {}", fields[3])))?;
        let trunc: usize = fields[5]
            .parse()
            .map_err(|_| FormsError::Parse(format!("bad trunc: {}", fields[5])))?;
        let mut coeffs = Vec::with_capacity(trunc + 1);
        for line in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let c: BigRational = line
                .parse()
                .map_err(|_| FormsError::Parse(format!("bad coefficient: {line}")))?;
            coeffs.push(c);
        }
        if coeffs.len() != trunc + 1 {
            return Err(FormsError::Parse(format!(
                "expected {} coefficients, found {}",
                trunc + 1,
                coeffs.len()
            )));
        }
        CuspForm::new(label, weight, level, QSeries::from_coeffs(coeffs))
    }
}

/// Ramanujan's Δ = q·∏_{n≥1}(1-q^n)^24, truncated at `q^trunc`, with the
/// tau values as coefficients. The 24th power runs on the fixed-width
/// integer ladder when the truncation is small enough for `i128` partial
/// sums, and on exact rationals otherwise.
pub fn delta_form(trunc: usize) -> Result<CuspForm, FormsError> {
    assert!(trunc >= 1, "delta needs truncation order >= 1");
    // Partial convolution sums stay within ~10^30 for orders up to a few
    // 10^4 (the intermediate eta powers grow like n^{7/2}); the checked
    // arithmetic would catch a violation and trigger the exact fallback.
    let eta24 = if trunc <= 30_000 {
        match eta_int(trunc - 1).pow(24) {
            Ok(fast) => fast.to_qseries(),
            Err(QSeriesError::IntegerOverflow { .. }) => eta_pow_bigint(trunc - 1, 24),
            Err(e) => return Err(e.into()),
        }
    } else {
        eta_pow_bigint(trunc - 1, 24)
    };
    CuspForm::new("delta", 12, 1, eta24.shift_up(1))
}

/// Exact Bernoulli numbers `B_0 .. B_n` (convention `B_1 = -1/2`) by the
/// standard recurrence `Σ_{j≤m} C(m+1, j) B_j = 0`.
pub fn bernoulli_numbers(n: usize) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = Vec::with_capacity(n + 1);
    b.push(BigRational::one());
    for m in 1..=n {
        let mut acc = BigRational::zero();
        for (j, bj) in b.iter().enumerate() {
            acc += BigRational::from_integer(binomial(m + 1, j)) * bj;
        }
        b.push(-acc / BigRational::from_integer(BigInt::from(m as u64 + 1)));
    }
    b
}

fn binomial(n: usize, k: usize) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from((n - i) as u64) / BigInt::from((i + 1) as u64);
    }
    acc
}

/// Normalized Eisenstein series `E_k = 1 - (2k/B_k) Σ σ_{k-1}(n) q^n` for
/// even `k ≥ 4`.
pub fn eisenstein_qexp(k: u64, trunc: usize) -> Result<QSeries, FormsError> {
    if k < 4 || k % 2 != 0 {
        return Err(FormsError::InvalidWeight(k));
    }
    let b = bernoulli_numbers(k as usize);
    let factor = BigRational::from_integer(BigInt::from(-2i64 * k as i64)) / &b[k as usize];
    // Divisor-power sums by sieving: d^(k-1) contributes to every multiple.
    let mut sigma = vec![BigInt::zero(); trunc + 1];
    for d in 1..=trunc {
        let dp = BigInt::from(d as u64).pow(k as u32 - 1);
        let mut m = d;
        while m <= trunc {
            sigma[m] += &dp;
            m += d;
        }
    }
    let mut coeffs = vec![BigRational::one()];
    coeffs.extend(
        sigma
            .into_iter()
            .skip(1)
            .map(|s| &factor * BigRational::from_integer(s)),
    );
    Ok(QSeries::from_coeffs(coeffs))
}

/// Dimension of the cusp space S_k(SL_2(Z)) for even weight.
pub fn dim_cusp_forms(k: u64) -> usize {
    if k % 2 != 0 || k < 12 {
        return 0;
    }
    let dim_mk = if k % 12 == 2 { k / 12 } else { k / 12 + 1 };
    (dim_mk - 1) as usize
}

/// Echelonized basis of S_k from the monomials Δ^i E_4^a E_6^b: element `i`
/// has coefficient 1 at `q^{i+1}` and 0 at `q^{j+1}` for other `j` below the
/// dimension. Empty when the space is trivial.
pub fn miller_basis(k: u64, trunc: usize) -> Result<Vec<QSeries>, FormsError> {
    if k % 2 != 0 {
        return Err(FormsError::InvalidWeight(k));
    }
    let dim = dim_cusp_forms(k);
    if dim == 0 {
        return Ok(Vec::new());
    }
    if trunc < dim {
        return Err(FormsError::InsufficientTruncation {
            required: dim,
            available: trunc,
        });
    }
    let e4 = eisenstein_qexp(4, trunc)?;
    let e6 = eisenstein_qexp(6, trunc)?;
    let delta = delta_form(trunc)?.series().clone();
    let mut basis = Vec::with_capacity(dim);
    for i in 1..=dim {
        let rem = k - 12 * i as u64;
        let (a, b) = if rem % 4 == 0 {
            (rem / 4, 0)
        } else {
            ((rem - 6) / 4, 1)
        };
        let mut g = delta.pow(i as u32);
        if a > 0 {
            g = g.mul(&e4.pow(a as u32));
        }
        if b > 0 {
            g = g.mul(&e6);
        }
        basis.push(g);
    }
    // The monomials are unitriangular in the leading coefficients; clear the
    // off-diagonal entries at q^1..q^dim.
    for i in (0..dim).rev() {
        let pivot = basis[i].coeff(i + 1).unwrap().clone();
        debug_assert!(pivot.is_one());
        for j in 0..dim {
            if j == i {
                continue;
            }
            let c = basis[j].coeff(i + 1).unwrap().clone();
            if !c.is_zero() {
                basis[j] = basis[j].sub(&basis[i].scale(&c));
            }
        }
    }
    Ok(basis)
}

/// Action of the Hecke operator T_m on a raw q-expansion of weight `k`:
/// coefficient `n` of the image is `Σ_{d | gcd(m,n)} d^{k-1} a(mn/d²)`.
pub(crate) fn hecke_qexp(series: &QSeries, k: u64, m: u64) -> Result<QSeries, FormsError> {
    assert!(m >= 1);
    let n_in = series.trunc_order();
    let n_out = n_in / m as usize;
    if n_out < 1 {
        return Err(FormsError::InsufficientTruncation {
            required: m as usize,
            available: n_in,
        });
    }
    let mut coeffs = vec![BigRational::zero(); n_out + 1];
    for (n, c) in coeffs.iter_mut().enumerate().skip(1) {
        let g = gcd(m, n as u64);
        let mut acc = BigRational::zero();
        for d in 1..=g {
            if g % d != 0 {
                continue;
            }
            let idx = (m * n as u64 / (d * d)) as usize;
            let dpow = BigRational::from_integer(BigInt::from(d).pow(k as u32 - 1));
            acc += dpow * series.coeff(idx)?;
        }
        *c = acc;
    }
    Ok(QSeries::from_coeffs(coeffs))
}

/// T_m applied to a cusp form. The output is exact with truncation order
/// `⌊N/m⌋`; when that is below 1 the input truncation is reported as
/// insufficient.
pub fn hecke_operator(f: &CuspForm, m: u64) -> Result<QSeries, FormsError> {
    hecke_qexp(f.series(), f.weight(), m)
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = b;
        b = a % b;
        a = t;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    /// Naive eta-product expansion oracle: Δ as q·∏(1-q^n)^24 by repeated
    /// dense multiplication, no pentagonal shortcut, no power ladder.
    fn naive_delta(trunc: usize) -> QSeries {
        let mut acc = QSeries::one(trunc - 1);
        for n in 1..trunc {
            let mut factor = QSeries::one(trunc - 1);
            factor = factor.sub(&QSeries::one(trunc - 1).shift_up(n).truncated(trunc - 1));
            for _ in 0..24 {
                acc = acc.mul(&factor);
            }
        }
        acc.shift_up(1)
    }

    #[test]
    fn tau_first_values_match_naive_expansion() {
        let delta = delta_form(12).unwrap();
        let oracle = naive_delta(12);
        for n in 1..=11 {
            assert_eq!(delta.coefficient(n).unwrap(), oracle.coeff(n).unwrap());
        }
        assert_eq!(delta.coefficient(1).unwrap(), &rat(1));
        assert_eq!(delta.coefficient(2).unwrap(), &rat(-24));
        assert_eq!(delta.coefficient(3).unwrap(), &rat(252));
        assert_eq!(delta.coefficient(6).unwrap(), &rat(-6048));
    }

    #[test]
    fn tau_is_multiplicative_at_six() {
        let delta = delta_form(6).unwrap();
        let t2 = delta.coefficient(2).unwrap();
        let t3 = delta.coefficient(3).unwrap();
        assert_eq!(delta.coefficient(6).unwrap(), &(t2 * t3));
    }

    #[test]
    fn hecke_multiplicativity_on_random_coprime_pairs() {
        let delta = delta_form(10_000).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut checked = 0;
        while checked < 100 {
            let m = rng.random_range(2u64..=100);
            let n = rng.random_range(2u64..=100);
            if gcd(m, n) != 1 || m * n > 10_000 {
                continue;
            }
            let lhs =
                delta.coefficient(m as usize).unwrap() * delta.coefficient(n as usize).unwrap();
            assert_eq!(&lhs, delta.coefficient((m * n) as usize).unwrap());
            checked += 1;
        }
    }

    #[test]
    fn deligne_scale_observed_for_tau_at_primes() {
        // |tau(p)| <= 2 p^{11/2}, i.e. tau(p)^2 <= 4 p^11, checked exactly.
        let delta = delta_form(1_000).unwrap();
        let sieve = {
            let mut is_prime = vec![true; 1001];
            is_prime[0] = false;
            is_prime[1] = false;
            for p in 2..=1000usize {
                if is_prime[p] {
                    for q in (p * p..=1000).step_by(p) {
                        is_prime[q] = false;
                    }
                }
            }
            is_prime
        };
        for p in 2..=1000usize {
            if !sieve[p] {
                continue;
            }
            let tau = delta.coefficient(p).unwrap().to_integer();
            let bound = BigInt::from(4) * BigInt::from(p as u64).pow(11);
            assert!(&tau * &tau <= bound, "Deligne-scale bound fails at p={p}");
        }
    }

    #[test]
    fn bernoulli_values() {
        let b = bernoulli_numbers(12);
        assert_eq!(b[0], rat(1));
        assert_eq!(b[1], BigRational::new(BigInt::from(-1), BigInt::from(2)));
        assert_eq!(b[2], BigRational::new(BigInt::from(1), BigInt::from(6)));
        assert_eq!(b[4], BigRational::new(BigInt::from(-1), BigInt::from(30)));
        assert_eq!(b[6], BigRational::new(BigInt::from(1), BigInt::from(42)));
        assert_eq!(
            b[12],
            BigRational::new(BigInt::from(-691), BigInt::from(2730))
        );
    }

    #[test]
    fn eisenstein_e4_and_e6() {
        // Divisor-sum oracle: sigma_3(1) = 1, sigma_3(2) = 9 and the
        // normalizations -2*4/B_4 = 240, -2*6/B_6 = -504.
        let e4 = eisenstein_qexp(4, 3).unwrap();
        assert_eq!(e4.coeff(0).unwrap(), &rat(1));
        assert_eq!(e4.coeff(1).unwrap(), &rat(240));
        assert_eq!(e4.coeff(2).unwrap(), &rat(240 * 9));
        assert_eq!(e4.coeff(3).unwrap(), &rat(240 * 28));
        let e6 = eisenstein_qexp(6, 2).unwrap();
        assert_eq!(e6.coeff(1).unwrap(), &rat(-504));
        assert_eq!(e6.coeff(2).unwrap(), &rat(-504 * 33));
        assert!(eisenstein_qexp(5, 2).is_err());
        assert!(eisenstein_qexp(2, 2).is_err());
    }

    #[test]
    fn cusp_dimensions() {
        for (k, d) in [
            (4, 0),
            (10, 0),
            (12, 1),
            (14, 0),
            (16, 1),
            (24, 2),
            (26, 1),
            (28, 2),
        ] {
            assert_eq!(dim_cusp_forms(k), d, "dim S_{k}");
        }
    }

    #[test]
    fn miller_basis_weight_12_is_delta() {
        let basis = miller_basis(12, 20).unwrap();
        assert_eq!(basis.len(), 1);
        assert_eq!(&basis[0], delta_form(20).unwrap().series());
    }

    #[test]
    fn miller_basis_empty_when_dim_zero() {
        assert!(miller_basis(10, 20).unwrap().is_empty());
        assert!(miller_basis(4, 20).unwrap().is_empty());
    }

    #[test]
    fn miller_basis_weight_24_is_echelonized() {
        let basis = miller_basis(24, 10).unwrap();
        assert_eq!(basis.len(), 2);
        assert_eq!(basis[0].coeff(1).unwrap(), &rat(1));
        assert_eq!(basis[0].coeff(2).unwrap(), &rat(0));
        assert_eq!(basis[1].coeff(1).unwrap(), &rat(0));
        assert_eq!(basis[1].coeff(2).unwrap(), &rat(1));
    }

    #[test]
    fn hecke_t2_on_delta_is_eigen() {
        let delta = delta_form(40).unwrap();
        let t2 = hecke_operator(&delta, 2).unwrap();
        let scaled = delta.series().truncated(20).scale(&rat(-24));
        assert_eq!(t2, scaled);
        assert_eq!(t2.coeff(1).unwrap(), &rat(-24));
    }

    #[test]
    fn hecke_is_linear_on_zero() {
        let zero = CuspForm::new("zero", 12, 1, QSeries::zero(30)).unwrap();
        let image = hecke_operator(&zero, 5).unwrap();
        assert!(image.is_zero());
    }

    #[test]
    fn hecke_operators_commute_on_delta() {
        let delta = delta_form(120).unwrap();
        let t2 = CuspForm::new("t2", 12, 1, hecke_operator(&delta, 2).unwrap()).unwrap();
        let t3 = CuspForm::new("t3", 12, 1, hecke_operator(&delta, 3).unwrap()).unwrap();
        let t2_then_t3 = hecke_operator(&t2, 3).unwrap().truncated(20);
        let t3_then_t2 = hecke_operator(&t3, 2).unwrap().truncated(20);
        assert_eq!(t2_then_t3, t3_then_t2);
    }

    #[test]
    fn hecke_insufficient_truncation_reports_requirement() {
        let delta = delta_form(3).unwrap();
        match hecke_operator(&delta, 5) {
            Err(FormsError::InsufficientTruncation {
                required,
                available,
            }) => {
                assert_eq!(required, 5);
                assert_eq!(available, 3);
            }
            other => panic!("expected truncation error, got {other:?}"),
        }
    }

    #[test]
    fn growth_constant_bounds_all_stored_coefficients() {
        let delta = delta_form(500).unwrap();
        let c = delta.growth_const().clone();
        for n in 1..=500usize {
            let bound = &c * BigRational::from_integer(BigInt::from(n).pow(6));
            assert!(delta.coefficient(n).unwrap().abs() <= bound);
        }
    }

    #[test]
    fn serialization_round_trips_bit_exactly() {
        let delta = delta_form(50).unwrap();
        let text = delta.to_text();
        let back = CuspForm::from_text("delta", &text).unwrap();
        assert_eq!(delta, back);
        assert_eq!(text, back.to_text());

        // Non-integral rational coefficients survive as well.
        let mut coeffs = vec![BigRational::zero(); 4];
        coeffs[1] = BigRational::new(BigInt::from(22), BigInt::from(7));
        coeffs[3] = BigRational::new(BigInt::from(-5), BigInt::from(3));
        let f = CuspForm::new("toy", 4, 1, QSeries::from_coeffs(coeffs)).unwrap();
        let back = CuspForm::from_text("toy", &f.to_text()).unwrap();
        assert_eq!(f, back);
    }

    #[test]
    fn non_cuspidal_series_rejected() {
        let e4 = eisenstein_qexp(4, 5).unwrap();
        assert!(matches!(
            CuspForm::new("e4", 4, 1, e4),
            Err(FormsError::NotCuspidal)
        ));
    }

    #[test]
    fn eval_tail_bound_shrinks_with_truncation() {
        let delta = delta_form(300).unwrap();
        let b100 = delta.eval_tail_bound(100, 0.5).unwrap();
        let b200 = delta.eval_tail_bound(200, 0.5).unwrap();
        assert!(b200 < b100);
        assert!(b200 < 1e-12);
    }
}
