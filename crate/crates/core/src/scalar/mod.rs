//! Exact coefficient arithmetic.
//!
//! Two coefficient rings are used throughout the crate: the Gaussian rationals
//! ℚ(i) ([`GaussianRational`]) for invariant (constant-coefficient) forms, and
//! Laurent polynomials over ℚ(i) in declared function symbols ([`SymScalar`])
//! for pointwise symbolic computations. Forms and operators are generic over
//! [`Coefficient`]; exact linear algebra is generic over [`Field`].

mod gaussian;
mod symbolic;

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

pub use gaussian::GaussianRational;
pub use symbolic::{Derivative, FunctionSymbol, LaurentMonomial, Nonzeroness, SymScalar, Symbol, SymbolTable};

/// Complex conjugation, or the identity on real rings.
pub trait Conjugate {
    fn conj(&self) -> Self;
}

/// A coefficient ring that contains ℚ(i) and carries a conjugation.
pub trait Coefficient:
    Clone
    + PartialEq
    + Debug
    + Display
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Conjugate
    + Send
    + Sync
{
    /// Embeds a constant of ℚ(i).
    fn constant(c: GaussianRational) -> Self;

    /// The value as an element of ℚ(i), if it does not depend on any symbol.
    fn as_constant(&self) -> Option<GaussianRational>;
}

/// An exact field; the scalar type of [`crate::linalg::Matrix`].
pub trait Field:
    Clone
    + PartialEq
    + Debug
    + Display
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Conjugate
    + Send
    + Sync
{
    fn inverse(&self) -> Option<Self>;
}

impl Conjugate for BigRational {
    fn conj(&self) -> Self {
        self.clone()
    }
}

impl Field for BigRational {
    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }
}

/// `1/k!` as a constant.
pub fn inverse_factorial(k: usize) -> GaussianRational {
    let mut f = GaussianRational::one();
    for j in 2..=k {
        f = f * GaussianRational::integer(j as i64);
    }
    f.inv().expect("factorial is nonzero")
}

pub fn factorial(k: usize) -> GaussianRational {
    (2..=k).fold(GaussianRational::one(), |acc, j| acc * GaussianRational::integer(j as i64))
}
