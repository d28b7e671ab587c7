//! Real hyperelliptic curves, their diagonal pencils of quadrics, and the
//! topology of the real moduli space of rank-2 bundles built from them.
//!
//! The pipeline runs in five stages:
//!
//! 1. [`curve`] models the curve by its Weierstrass configuration, computes the
//!    real locus and the parity of each real interval with respect to a real
//!    divisor, and normalizes the affine chart.
//! 2. [`pencil`] builds the diagonal pencil `(Q0, Q1)` and its real normal form,
//!    together with an explicit basis change that can be checked numerically.
//! 3. [`glreduce`] reduces the normal form to the combinatorial invariant
//!    `(s; n1, ..., n_{2l+1})` and, in genus two, looks up the diffeomorphism type.
//! 4. [`cohomology`] computes the total Stiefel-Whitney class of the real moduli
//!    space in the mod-2 cohomology of the real Grassmannian.
//! 5. [`numeric`] samples the real quadric intersection and checks that it is
//!    non-empty, smooth and connected.
//!
//! Exact computations are generic over [`Scalar`]; the aliases below fix the
//! usual concrete choices.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod cohomology;
pub mod curve;
pub mod error;
pub mod glreduce;
pub mod input;
pub mod numeric;
pub mod pencil;
pub mod pipeline;
pub mod scalar;
mod union_find;

pub use error::Error;
pub use scalar::{parse_rational, Scalar};

/// Arbitrary-precision rational, the default exact scalar.
pub type Rational = num_rational::BigRational;
/// Gaussian rational `a + bi` with `a, b` exact.
pub type Gaussian = num_complex::Complex<Rational>;

pub type WeierstrassSetQ = curve::WeierstrassSet<Rational>;
pub type RealDivisorQ = curve::RealDivisor<Rational>;
pub type DiagonalPencilQ = pencil::DiagonalPencil<Rational>;
pub type RealNormalFormQ = pencil::RealNormalForm<Rational>;
pub type LambdaConfigQ = glreduce::LambdaConfig<Rational>;

pub type WeierstrassSet64 = curve::WeierstrassSet<f64>;
pub type RealDivisor64 = curve::RealDivisor<f64>;
pub type DiagonalPencil64 = pencil::DiagonalPencil<f64>;
pub type RealNormalForm64 = pencil::RealNormalForm<f64>;

pub type BasisChange64 = pencil::BasisChange<f64>;
pub type BasisChange32 = pencil::BasisChange<f32>;
pub type QuadricPair64 = numeric::QuadricPair<f64>;
pub type QuadricPair32 = numeric::QuadricPair<f32>;
pub type SampleCloud64 = numeric::SampleCloud<f64>;
pub type SampleCloud32 = numeric::SampleCloud<f32>;
