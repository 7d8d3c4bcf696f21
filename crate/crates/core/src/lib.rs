//! Exact q-expansions of classical cusp forms, shifted coefficient products
//! `a(n)a(n+r)`, and the machinery needed to verify the analytic identities
//! that relate them.
//!
//! The crate is organized around one carrier type, [`qseries::QSeries`]
//! (truncated power series with exact rational coefficients), and the
//! verification layers built on top of it:
//!
//! - [`qseries`]: truncated q-expansion arithmetic over big rationals
//! - [`forms`]: level-1 modular forms (Δ, E_k, Miller basis, Hecke eigenforms)
//! - [`shifted`]: the sequences `c_n = a(n)a(n+r)` and their sign statistics
//! - [`specfun`]: complex Γ, Pochhammer, Gauss hypergeometric series, and the
//!   terminating correction polynomials
//! - [`dirichlet`]: truncated evaluation of the shifted Dirichlet series with
//!   tail bounds, and the unfolding (Mellin/Γ-factor) identity check
//! - [`relations`]: exact power-sum relations, Vandermonde nonvanishing, and
//!   the only-zero-solution engine over big rationals
//! - [`sieve`]: arithmetic-progression extraction via twist averaging
//! - [`eisenstein`]: the weight-zero real-analytic Eisenstein series at level
//!   one (K-Bessel Fourier expansion, direct coset sum, functional equation)
//!
//! All exact computations use arbitrary-precision rationals and are never
//! rounded; all analytic evaluation is binary64 with stated tolerances.
//! Every value is immutable after construction, so evaluation is safe to run
//! from multiple threads. With the `parallel` feature (default) the batch
//! entry points distribute work with rayon; without it they fall back to
//! equivalent sequential loops.

pub mod dirichlet;
pub mod eisenstein;
pub mod forms;
pub mod qseries;
pub mod relations;
pub mod shifted;
pub mod sieve;
pub mod specfun;

mod quadrature;

pub use num_bigint::BigInt;
pub use num_complex::Complex64;
pub use num_rational::BigRational;
