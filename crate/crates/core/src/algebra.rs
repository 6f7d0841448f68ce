//! Minimal ring interfaces shared by scalars, jets, characters and q-series.

use crate::precision::PrecisionComplex;

pub trait Ring: Clone + Sized {
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn try_inverse(&self) -> Option<Self>;
}

/// A ring that is also a module over the complex numbers.
pub trait Algebra: Ring {
    fn scale(&self, c: &PrecisionComplex) -> Self;
    fn constant_like(&self, c: &PrecisionComplex) -> Self {
        self.one_like().scale(c)
    }
}

impl Ring for PrecisionComplex {
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn zero_like(&self) -> Self {
        PrecisionComplex::zero(self.prec())
    }
    fn one_like(&self) -> Self {
        PrecisionComplex::one(self.prec())
    }
    fn is_zero(&self) -> bool {
        PrecisionComplex::is_zero(self)
    }
    fn try_inverse(&self) -> Option<Self> {
        if PrecisionComplex::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
}

impl Algebra for PrecisionComplex {
    fn scale(&self, c: &PrecisionComplex) -> Self {
        self * c
    }
}
