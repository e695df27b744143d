use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::{check_prime, Padic, DEFAULT_CAP};
use crate::error::{Error, Result};
use crate::ring::{Coeff, PadicModule};

/// An element of `Z_p` (degree 1) or of `Z_p[x]/(x^2 + c1 x + c0)` with the
/// quadratic irreducible modulo `p`.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct Unram {
    p: u32,
    /// `[c0, c1]` for `x^2 + c1 x + c0`; empty in degree 1.
    poly: Vec<i64>,
    coeffs: Vec<Padic>,
}

impl Unram {
    pub fn base(c: &Padic) -> Self {
        Unram { p: c.prime(), poly: Vec::new(), coeffs: vec![c.clone()] }
    }

    /// `a + b x` in the quadratic ring defined by `x^2 + c1 x + c0`.
    pub fn quadratic(p: u32, c0: i64, c1: i64, a: Padic, b: Padic) -> Result<Self> {
        check_prime(p)?;
        let pm = p as i64;
        for r in 0..pm {
            if (r * r + c1 * r + c0).rem_euclid(pm) == 0 {
                return Err(Error::Invalid(format!(
                    "x^2 + {c1}x + {c0} has the root {r} modulo {p}"
                )));
            }
        }
        if a.prime() != p || b.prime() != p {
            return Err(Error::PrimeMismatch(p, if a.prime() != p { a.prime() } else { b.prime() }));
        }
        Ok(Unram { p, poly: vec![c0, c1], coeffs: vec![a, b] })
    }

    /// The generator `x` of the quadratic ring.
    pub fn generator(p: u32, c0: i64, c1: i64, cap: u32) -> Result<Self> {
        Self::quadratic(p, c0, c1, Padic::zero(p, cap), Padic::one(p, cap))
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn coeffs(&self) -> &[Padic] {
        &self.coeffs
    }

    pub fn poly(&self) -> &[i64] {
        &self.poly
    }

    fn cap(&self) -> u32 {
        self.coeffs.iter().map(|c| c.cap()).max().unwrap_or(DEFAULT_CAP)
    }

    fn like(&self, coeffs: Vec<Padic>) -> Self {
        Unram { p: self.p, poly: self.poly.clone(), coeffs }
    }

    fn same_ring(&self, other: &Unram) {
        assert_eq!(self.p, other.p, "unramified values over different primes");
        assert_eq!(self.poly, other.poly, "unramified values in different rings");
    }

    pub fn to_base(&self) -> Option<Padic> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// The other root of the defining quadratic applied to `self`.
    fn algebraic_conj(&self) -> Unram {
        if self.degree() == 1 {
            return self.clone();
        }
        let c1 = self.coeffs[0].from_int_like(self.poly[1]);
        let a = self.coeffs[0].clone() - &(self.coeffs[1].clone() * &c1);
        self.like(vec![a, -self.coeffs[1].clone()])
    }

    pub fn inv(&self) -> Result<Unram> {
        if self.degree() == 1 {
            return Ok(self.like(vec![self.coeffs[0].inv()?]));
        }
        let z = self.algebraic_conj();
        let n = (self.clone() * &z)
            .to_base()
            .ok_or_else(|| Error::PrecisionExhausted("unramified inverse".into()))?;
        Ok(z.scale(&n.inv()?))
    }

    fn eval_poly(&self, r: &Unram) -> Unram {
        let c0 = r.one_like().scale(&Padic::from_int(self.p, self.poly[0], self.cap()));
        let c1 = Padic::from_int(self.p, self.poly[1], self.cap());
        r.clone() * r + &r.scale(&c1) + &c0
    }

    /// Frobenius: the root of the defining polynomial congruent to `x^p`,
    /// found by Newton iteration, substituted for `x`.
    pub fn frobenius(&self) -> Result<Unram> {
        if self.degree() == 1 {
            return Ok(self.clone());
        }
        let cap = self.cap();
        let x = Self::generator(self.p, self.poly[0], self.poly[1], cap)?;
        let mut r = x.pow(self.p as u64);
        let two = Padic::from_int(self.p, 2, cap);
        let c1 = x.one_like().scale(&Padic::from_int(self.p, self.poly[1], cap));
        let mut steps = 0;
        loop {
            let f = self.eval_poly(&r);
            if f.is_zero() {
                break;
            }
            let df = r.scale(&two) + &c1;
            let df_inv = df.inv().map_err(|_| Error::Hensel("derivative is not invertible".into()))?;
            if df_inv.coeffs.iter().any(|c| !c.is_exact_zero() && c.val() < 0) {
                return Err(Error::Hensel("defining polynomial is not separable modulo p".into()));
            }
            r = r - &(f * &df_inv);
            steps += 1;
            if steps > 64 + cap {
                return Err(Error::Hensel("Newton iteration did not converge".into()));
            }
        }
        Ok(self.like(vec![self.coeffs[0].clone(), Padic::zero(self.p, cap)]) + &r.scale(&self.coeffs[1]))
    }

    /// Product of the Frobenius conjugates.
    pub fn norm(&self) -> Result<Padic> {
        let prod = self.clone() * &self.frobenius()?;
        if self.degree() == 1 {
            return Ok(self.coeffs[0].clone());
        }
        prod.to_base()
            .ok_or_else(|| Error::PrecisionExhausted("norm did not land in the base".into()))
    }

    pub fn pow(&self, e: u64) -> Unram {
        let mut r = self.one_like();
        let mut b = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                r = r * &b;
            }
            e >>= 1;
            if e > 0 {
                b = b.clone() * &b;
            }
        }
        r
    }

    pub fn is_unit(&self) -> bool {
        match self.norm() {
            Ok(n) => n.is_unit(),
            Err(_) => false,
        }
    }
}

impl fmt::Debug for Unram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree() == 1 {
            return write!(f, "{}", self.coeffs[0]);
        }
        write!(f, "({}) + ({})x", self.coeffs[0], self.coeffs[1])
    }
}

impl<'a> Add<&'a Unram> for Unram {
    type Output = Unram;

    fn add(mut self, other: &'a Unram) -> Unram {
        self.same_ring(other);
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a = a.clone() + b;
        }
        self
    }
}

impl Add for Unram {
    type Output = Unram;

    fn add(self, other: Unram) -> Unram {
        self + &other
    }
}

impl Neg for Unram {
    type Output = Unram;

    fn neg(mut self) -> Unram {
        for c in self.coeffs.iter_mut() {
            *c = -c.clone();
        }
        self
    }
}

impl<'a> Sub<&'a Unram> for Unram {
    type Output = Unram;

    fn sub(self, other: &'a Unram) -> Unram {
        self + &(-other.clone())
    }
}

impl Sub for Unram {
    type Output = Unram;

    fn sub(self, other: Unram) -> Unram {
        self + &(-other)
    }
}

impl<'a> Mul<&'a Unram> for Unram {
    type Output = Unram;

    fn mul(self, other: &'a Unram) -> Unram {
        self.same_ring(other);
        if self.degree() == 1 {
            return self.like(vec![self.coeffs[0].clone() * &other.coeffs[0]]);
        }
        let (a0, a1) = (&self.coeffs[0], &self.coeffs[1]);
        let (b0, b1) = (&other.coeffs[0], &other.coeffs[1]);
        let hi = a1.clone() * b1;
        let lo = a0.clone() * b0;
        let mid = a0.clone() * b1 + &(a1.clone() * b0);
        // x^2 = -c1 x - c0
        let c0 = Padic::from_int(self.p, self.poly[0], hi.cap());
        let c1 = Padic::from_int(self.p, self.poly[1], hi.cap());
        let r0 = lo - &(hi.clone() * &c0);
        let r1 = mid - &(hi * &c1);
        self.like(vec![r0, r1])
    }
}

impl Mul for Unram {
    type Output = Unram;

    fn mul(self, other: Unram) -> Unram {
        self * &other
    }
}

impl Coeff for Unram {
    fn zero_like(&self) -> Self {
        self.like(vec![Padic::zero(self.p, self.cap()); self.degree()])
    }

    fn one_like(&self) -> Self {
        let mut z = self.zero_like();
        z.coeffs[0] = Padic::one(self.p, self.cap());
        z
    }

    fn from_rational_like(&self, q: &BigRational) -> Self {
        let mut z = self.zero_like();
        z.coeffs[0] = Padic::from_rational(self.p, q, self.cap());
        z
    }

    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn mul_p_power(&self, p: u32, e: i64) -> Self {
        self.like(self.coeffs.iter().map(|c| c.mul_p_power(p, e)).collect())
    }

    fn div_int(&self, n: &BigInt) -> Result<Self> {
        Ok(self.like(self.coeffs.iter().map(|c| c.div_int(n)).collect::<Result<Vec<_>>>()?))
    }
}

impl PadicModule for Unram {
    fn prime(&self) -> u32 {
        self.p
    }

    fn scale(&self, c: &Padic) -> Self {
        self.like(self.coeffs.iter().map(|a| a.clone() * c).collect())
    }

    fn embed(&self, c: &Padic) -> Self {
        let mut z = self.zero_like();
        z.coeffs[0] = c.clone();
        z
    }

    fn val_floor(&self) -> Option<i64> {
        self.coeffs.iter().filter(|c| !c.is_exact_zero()).map(|c| c.val()).min()
    }

    fn abs_prec(&self) -> Option<i64> {
        self.coeffs.iter().filter(|c| !c.is_exact_zero()).map(|c| c.prec()).min()
    }

    fn cap_prec(&self, prec: i64) -> Self {
        self.like(self.coeffs.iter().map(|c| c.truncate(prec)).collect())
    }
}
