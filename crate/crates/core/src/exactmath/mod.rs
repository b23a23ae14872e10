//! Exact arithmetic: rationals, sparse multivariate polynomials, monomial
//! orders, polynomial GCD over the integers and linear algebra over a field.
//!
//! Polynomials and matrices are generic over the coefficient scalar. The
//! exact instantiations used by the rest of the crate are [`QPoly`],
//! [`ZPoly`] and [`QMatrix`].

mod gcd;
mod modgcd;
pub(crate) use modgcd::{add_mod, inv_mod, mul_mod, primes, sub_mod};
mod matrix;
mod monomial;
mod parse;
mod poly;
mod rational;

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

pub use gcd::{content_z, exact_div, poly_gcd, poly_gcd_many};
pub use matrix::{kernel_basis, row_reduce, Matrix, RowReduced};
pub use monomial::{Monomial, TermOrder};
pub use parse::{parse_expr, Expr, ExprAlgebra};
pub use poly::{poly_arith, MultiPoly, PolyOp, Universe};
pub use rational::{
    format_rational, parse_rational, primitive_integer_vector, random_rational, rat, Integer, Rational,
};

/// Commutative ring with identity, closed under owned arithmetic.
pub trait Ring:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
}

impl<T> Ring for T where
    T: Clone
        + PartialEq
        + Debug
        + Zero
        + One
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Neg<Output = T>
{
}

/// A [`Ring`] in which every nonzero element is invertible.
pub trait Field: Ring + Div<Output = Self> {}

impl Field for Rational {}
impl Field for f64 {}
impl Field for f32 {}

/// Polynomial with rational coefficients.
pub type QPoly = MultiPoly<Rational>;
/// Polynomial with integer coefficients.
pub type ZPoly = MultiPoly<Integer>;
/// Dense matrix over the rationals.
pub type QMatrix = Matrix<Rational>;
