//! Exact Hecke eigenforms. One-dimensional cusp spaces give rational
//! eigenforms directly; two-dimensional spaces are diagonalized over the
//! real quadratic field generated by the discriminant of the T_2
//! characteristic polynomial, so coefficients stay exact as `a + b√D`.

use super::{dim_cusp_forms, hecke_qexp, miller_basis, CuspForm, FormsError};
use crate::qseries::{QSeries, QSeriesError};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// An element `a + b√d` of a real quadratic field, with exact rational
/// `a`, `b`. Rational values carry `d = 0` and `b = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadRat {
    a: BigRational,
    b: BigRational,
    d: u64,
}

impl QuadRat {
    pub fn rational(a: BigRational) -> Self {
        QuadRat {
            a,
            b: BigRational::zero(),
            d: 0,
        }
    }

    /// `a + b√d`; `d` must be squarefree and ≥ 2 when `b ≠ 0`.
    pub fn new(a: BigRational, b: BigRational, d: u64) -> Self {
        if b.is_zero() {
            return QuadRat::rational(a);
        }
        debug_assert!(d >= 2);
        QuadRat { a, b, d }
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn irrational_part(&self) -> &BigRational {
        &self.b
    }

    pub fn discriminant(&self) -> u64 {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.d == 0
    }

    /// Galois conjugate `a - b√d`.
    pub fn conj(&self) -> Self {
        QuadRat::new(self.a.clone(), -self.b.clone(), self.d)
    }

    pub fn add(&self, other: &Self) -> Self {
        let d = self.join_disc(other);
        QuadRat::new(&self.a + &other.a, &self.b + &other.b, d)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let d = self.join_disc(other);
        QuadRat::new(&self.a - &other.a, &self.b - &other.b, d)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let d = self.join_disc(other);
        let disc = BigRational::from_integer(BigInt::from(d));
        QuadRat::new(
            &self.a * &other.a + (&self.b * &other.b) * &disc,
            &self.a * &other.b + &self.b * &other.a,
            d,
        )
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        QuadRat::new(&self.a * factor, &self.b * factor, self.d)
    }

    /// Multiplicative inverse via the conjugate; panics on zero.
    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        let disc = BigRational::from_integer(BigInt::from(self.d));
        let norm = &self.a * &self.a - (&self.b * &self.b) * &disc;
        assert!(
            !norm.is_zero(),
            "norm vanishes: discriminant not squarefree"
        );
        QuadRat::new(&self.a / &norm, -&self.b / &norm, self.d)
    }

    /// Real embedding with the positive square root.
    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        a + b * (self.d as f64).sqrt()
    }

    fn join_disc(&self, other: &Self) -> u64 {
        match (self.d, other.d) {
            (0, d) | (d, 0) => d,
            (d1, d2) => {
                assert_eq!(d1, d2, "mixed quadratic fields");
                d1
            }
        }
    }
}

impl std::fmt::Display for QuadRat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.d == 0 {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{} + {}*sqrt({})", self.a, self.b, self.d)
        }
    }
}

/// Writes `n = f²·d` with `d` squarefree; `n` must be non-negative.
fn squarefree_decompose(n: &BigInt) -> (BigInt, u64) {
    assert!(!n.is_negative());
    let mut rest = n
        .to_u128()
        .expect("discriminant too large for exact factoring");
    let mut square_part: u128 = 1;
    let mut d: u128 = 1;
    let mut p: u128 = 2;
    while p * p <= rest {
        if rest % p == 0 {
            let mut e = 0;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            for _ in 0..(e / 2) {
                square_part *= p;
            }
            if e % 2 == 1 {
                d *= p;
            }
        }
        p += 1;
    }
    d *= rest; // leftover prime
    (
        BigInt::from(square_part),
        u64::try_from(d).expect("squarefree part exceeds u64"),
    )
}

/// A normalized Hecke eigenform with exact coefficients in ℚ(√D).
///
/// `disc = 0` means the form is rational and convertible to a [`CuspForm`].
#[derive(Debug, Clone, PartialEq)]
pub struct EigenForm {
    label: String,
    weight: u64,
    level: u64,
    disc: u64,
    coeffs: Vec<QuadRat>,
    growth_const: f64,
}

impl EigenForm {
    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn weight(&self) -> u64 {
        self.weight
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn discriminant(&self) -> u64 {
        self.disc
    }

    pub fn trunc_order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coefficient(&self, n: usize) -> Result<&QuadRat, QSeriesError> {
        self.coeffs
            .get(n)
            .ok_or(QSeriesError::CoefficientBeyondTruncation {
                index: n,
                trunc: self.trunc_order(),
            })
    }

    pub fn is_rational(&self) -> bool {
        self.disc == 0
    }

    /// Observed constant with `|a(n)| ≤ C n^{k/2}` in the real embedding.
    pub fn growth_const(&self) -> f64 {
        self.growth_const
    }

    pub fn to_cusp_form(&self) -> Option<CuspForm> {
        if !self.is_rational() {
            return None;
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.rational_part().clone())
            .collect();
        CuspForm::new(
            self.label.clone(),
            self.weight,
            self.level,
            QSeries::from_coeffs(coeffs),
        )
        .ok()
    }

    /// Text serialization. Rational eigenforms use the plain cusp-form
    /// format; a quadratic form extends the header with its discriminant and
    /// writes the two components of each coefficient per line.
    pub fn to_text(&self) -> String {
        if let Some(f) = self.to_cusp_form() {
            return f.to_text();
        }
        let mut out = format!(
            "weight {} level {} trunc {} disc {}\n",
            self.weight,
            self.level,
            self.trunc_order(),
            self.disc
        );
        for c in &self.coeffs {
            out.push_str(&format!("{} {}\n", c.rational_part(), c.irrational_part()));
        }
        out
    }

    pub fn from_text(label: impl Into<String>, text: &str) -> Result<Self, FormsError> {
        let header = text
            .lines()
            .next()
            .ok_or_else(|| FormsError::Parse("empty file".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() == 6 {
            let f = CuspForm::from_text(label, text)?;
            return Ok(EigenForm::from_rational_series(
                f.label().to_string(),
                f.weight(),
                f.level(),
                f.series(),
            ));
        }
        if fields.len() != 8 || fields[6] != "disc" {
            return Err(FormsError::Parse(format!("bad header: {header}")));
        }
        let weight: u64 = fields[1]
            .parse()
            .map_err(|_| FormsError::Parse("bad weight".into()))?;
        let level: u64 = fields[3]
            .parse()
            .map_err(|_| FormsError::Parse("bad level".into()))?;
        let trunc: usize = fields[5]
            .parse()
            .map_err(|_| FormsError::Parse("bad trunc".into()))?;
        let disc: u64 = fields[7]
            .parse()
            .map_err(|_| FormsError::Parse("bad disc".into()))?;
        let mut coeffs = Vec::with_capacity(trunc + 1);
        for line in text.lines().skip(1) {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let a: BigRational = parts
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| FormsError::Parse(format!("bad coefficient line: {line}")))?;
            let b: BigRational = parts
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| FormsError::Parse(format!("bad coefficient line: {line}")))?;
            coeffs.push(QuadRat::new(a, b, disc));
        }
        if coeffs.len() != trunc + 1 {
            return Err(FormsError::Parse(format!(
                "expected {} coefficients, found {}",
                trunc + 1,
                coeffs.len()
            )));
        }
        Ok(EigenForm::assemble(
            label.into(),
            weight,
            level,
            disc,
            coeffs,
        ))
    }

    fn from_rational_series(label: String, weight: u64, level: u64, series: &QSeries) -> Self {
        let coeffs = series
            .coeffs()
            .iter()
            .map(|c| QuadRat::rational(c.clone()))
            .collect();
        EigenForm::assemble(label, weight, level, 0, coeffs)
    }

    fn assemble(label: String, weight: u64, level: u64, disc: u64, coeffs: Vec<QuadRat>) -> Self {
        let k_half = weight as f64 / 2.0;
        let mut growth: f64 = 0.0;
        for (n, c) in coeffs.iter().enumerate().skip(1) {
            let ratio = c.to_f64().abs() / (n as f64).powf(k_half);
            growth = growth.max(ratio);
        }
        EigenForm {
            label,
            weight,
            level,
            disc,
            coeffs,
            growth_const: if growth == 0.0 { 1.0 } else { 2.0 * growth },
        }
    }
}

/// Basis of normalized T_2-eigenforms of S_k(SL_2(Z)), exact. Spaces of
/// dimension 2 are diagonalized over ℚ(√D); higher dimensions are out of
/// scope for the exact mode and rejected.
pub fn eigenforms(k: u64, trunc: usize) -> Result<Vec<EigenForm>, FormsError> {
    let dim = dim_cusp_forms(k);
    if dim == 0 {
        return Ok(Vec::new());
    }
    if dim > 2 {
        return Err(FormsError::UnsupportedDimension(dim));
    }
    // T_2 needs coefficients out to twice the requested order of the matrix
    // entries; the matrix only needs entries up to q^dim.
    let work = trunc.max(2 * dim);
    let basis = miller_basis(k, work)?;
    if dim == 1 {
        let series = basis[0].truncated(trunc.min(basis[0].trunc_order()));
        return Ok(vec![EigenForm::from_rational_series(
            format!("k{k}e1"),
            k,
            1,
            &series,
        )]);
    }

    // Matrix of T_2 in the echelon basis: row i holds the coefficients of
    // T_2 g_i at q^1, q^2.
    let mut m = [
        [BigRational::zero(), BigRational::zero()],
        [BigRational::zero(), BigRational::zero()],
    ];
    for (i, g) in basis.iter().enumerate() {
        let image = hecke_qexp(g, k, 2)?;
        for j in 0..2 {
            m[i][j] = image.coeff(j + 1)?.clone();
        }
    }
    let tr = &m[0][0] + &m[1][1];
    let det = &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0];
    let disc_rat = &tr * &tr - BigRational::from_integer(BigInt::from(4)) * &det;
    if disc_rat.is_negative() {
        return Err(FormsError::UnsupportedEigenstructure);
    }
    // sqrt(p/q) = sqrt(pq)/q with pq = f^2 d, d squarefree.
    let p = disc_rat.numer().clone();
    let q = disc_rat.denom().clone();
    let (f, d) = squarefree_decompose(&(&p * &q));
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let root_coeff = BigRational::new(f, q) * &half; // (f/q)/2
    let base = &tr * &half;
    let mut lambdas = Vec::new();
    if d == 1 {
        // Perfect-square discriminant: two rational eigenvalues.
        lambdas.push(QuadRat::rational(&base + &root_coeff));
        lambdas.push(QuadRat::rational(&base - &root_coeff));
    } else {
        lambdas.push(QuadRat::new(base.clone(), root_coeff.clone(), d));
        lambdas.push(QuadRat::new(base, -root_coeff, d));
    }

    let mut out = Vec::with_capacity(2);
    for (idx, lambda) in lambdas.into_iter().enumerate() {
        let combo = eigenvector_combination(&m, &lambda)?;
        let mut coeffs = Vec::with_capacity(trunc + 1);
        for n in 0..=trunc {
            let g1 = QuadRat::rational(basis[0].coeff(n)?.clone());
            let g2 = QuadRat::rational(basis[1].coeff(n)?.clone());
            coeffs.push(combo.0.mul(&g1).add(&combo.1.mul(&g2)));
        }
        // Normalize a(1) = 1.
        let a1 = coeffs[1].clone();
        if a1.is_zero() {
            return Err(FormsError::UnsupportedEigenstructure);
        }
        let inv = a1.inv();
        let coeffs = coeffs.iter().map(|c| c.mul(&inv)).collect::<Vec<_>>();
        out.push(EigenForm::assemble(
            format!("k{k}e{}", idx + 1),
            k,
            1,
            if d == 1 { 0 } else { d },
            coeffs,
        ));
    }
    Ok(out)
}

/// Coefficients (u, v) with T_2 (u g_1 + v g_2) = λ (u g_1 + v g_2), for the
/// row-convention matrix `m` of T_2.
fn eigenvector_combination(
    m: &[[BigRational; 2]; 2],
    lambda: &QuadRat,
) -> Result<(QuadRat, QuadRat), FormsError> {
    let m00 = QuadRat::rational(m[0][0].clone());
    let m10 = QuadRat::rational(m[1][0].clone());
    let m11 = QuadRat::rational(m[1][1].clone());
    if !m[1][0].is_zero() {
        // u = 1, v = (λ - m00)/m10 from the first column of (row(u,v))·M = λ(u,v).
        let v = lambda.sub(&m00).mul(&m10.inv());
        return Ok((
            QuadRat::rational(BigRational::from_integer(BigInt::from(1))),
            v,
        ));
    }
    if !m[0][1].is_zero() {
        // Lower-triangular: g_2 is the λ = m11 eigenvector; the other one
        // mixes with coefficient m01/(m00 - m11).
        if lambda.sub(&m11).is_zero() {
            return Ok((
                QuadRat::rational(BigRational::zero()),
                QuadRat::rational(BigRational::from_integer(BigInt::from(1))),
            ));
        }
        let denom = m00.sub(&m11);
        if denom.is_zero() {
            return Err(FormsError::UnsupportedEigenstructure);
        }
        let m01 = QuadRat::rational(m[0][1].clone());
        let v = m01.mul(&denom.inv());
        return Ok((
            QuadRat::rational(BigRational::from_integer(BigInt::from(1))),
            v,
        ));
    }
    // Diagonal: the echelon basis is already eigen.
    if lambda.sub(&m00).is_zero() {
        Ok((
            QuadRat::rational(BigRational::from_integer(BigInt::from(1))),
            QuadRat::rational(BigRational::zero()),
        ))
    } else {
        Ok((
            QuadRat::rational(BigRational::zero()),
            QuadRat::rational(BigRational::from_integer(BigInt::from(1))),
        ))
    }
}
