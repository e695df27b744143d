//! Coefficient rings.
//!
//! Every grid, series and operator in the crate is generic over [`Coeff`].
//! Values in p-adic rings carry their prime and precision, so constants are
//! produced from an existing element (`one_like`, `from_int_like`) rather
//! than from a context-free `One::one()`.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::padic::Padic;

pub trait Coeff:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
{
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn from_rational_like(&self, q: &BigRational) -> Self;

    fn from_bigint_like(&self, n: &BigInt) -> Self {
        self.from_rational_like(&BigRational::from_integer(n.clone()))
    }

    fn from_int_like(&self, n: i64) -> Self {
        self.from_bigint_like(&BigInt::from(n))
    }

    /// Zero, either exactly or within the tracked precision.
    fn is_zero(&self) -> bool;

    /// Multiply by `p^e`; `e` may be negative.
    fn mul_p_power(&self, p: u32, e: i64) -> Self;

    fn div_int(&self, n: &BigInt) -> Result<Self>;

    /// The universal weight `w_n` of level `n` as an element of this ring.
    fn universal_weight(&self, n: u32) -> Result<Self> {
        let _ = n;
        Err(Error::Unsupported(
            "universal weights need Iwasawa series coefficients".into(),
        ))
    }
}

/// Rings that are algebras over the capped p-adic numbers.
pub trait PadicModule: Coeff {
    fn prime(&self) -> u32;

    fn scale(&self, c: &Padic) -> Self;

    fn embed(&self, c: &Padic) -> Self;

    /// Lower bound on the valuation; `None` for the exact zero.
    fn val_floor(&self) -> Option<i64>;

    /// Absolute precision; `None` when the value is exact.
    fn abs_prec(&self) -> Option<i64>;

    /// Forget every digit at or above `p^prec`.
    fn cap_prec(&self, prec: i64) -> Self;
}

impl Coeff for BigRational {
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }

    fn one_like(&self) -> Self {
        BigRational::one()
    }

    fn from_rational_like(&self, q: &BigRational) -> Self {
        q.clone()
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn mul_p_power(&self, p: u32, e: i64) -> Self {
        let pe = BigRational::from_integer(BigInt::from(p).pow(e.unsigned_abs() as u32));
        if e >= 0 {
            self * pe
        } else {
            self / pe
        }
    }

    fn div_int(&self, n: &BigInt) -> Result<Self> {
        if Zero::is_zero(n) {
            return Err(Error::DivisionByZero("rational div_int".into()));
        }
        Ok(self / BigRational::from_integer(n.clone()))
    }
}

/// p-adic valuation of a nonzero rational.
pub fn rational_valuation(q: &BigRational, p: u32) -> Option<i64> {
    if Zero::is_zero(q) {
        return None;
    }
    Some(crate::padic::bigint_valuation(q.numer(), p) as i64 - crate::padic::bigint_valuation(q.denom(), p) as i64)
}
