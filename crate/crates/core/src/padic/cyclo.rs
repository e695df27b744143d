use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::Padic;
use crate::error::{Error, Result};
use crate::qexp::DirichletChar;
use crate::ring::{Coeff, PadicModule};

/// An element of `Z_p[ξ]` (or `Q_p(ξ)`) with `ξ` a primitive `p^level`-th
/// root of unity, in the power basis `1, ξ, ..., ξ^(φ-1)`.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct Cyclo {
    p: u32,
    level: u32,
    coeffs: Vec<Padic>,
}

pub fn totient_pow(p: u32, level: u32) -> usize {
    if level == 0 {
        1
    } else {
        (p as usize - 1) * (p as usize).pow(level - 1)
    }
}

impl Cyclo {
    pub fn zero(p: u32, level: u32, cap: u32) -> Self {
        Cyclo { p, level, coeffs: vec![Padic::zero(p, cap); totient_pow(p, level)] }
    }

    pub fn from_padic(level: u32, c: &Padic) -> Self {
        let mut z = Self::zero(c.prime(), level, c.cap());
        z.coeffs[0] = c.clone();
        z
    }

    pub fn from_coeffs(p: u32, level: u32, coeffs: Vec<Padic>) -> Result<Self> {
        if coeffs.len() != totient_pow(p, level) {
            return Err(Error::LevelMismatch(format!(
                "{} coordinates for level {level}",
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|c| c.prime() != p) {
            return Err(Error::PrimeMismatch(p, coeffs.iter().map(|c| c.prime()).find(|&q| q != p).unwrap()));
        }
        Ok(Cyclo { p, level, coeffs })
    }

    /// `ξ^a`.
    pub fn xi_pow(p: u32, level: u32, a: i64, cap: u32) -> Self {
        let order = (p as i64).pow(level);
        let a = a.rem_euclid(order) as usize;
        let mut v = vec![Padic::zero(p, cap); a + 1];
        v[a] = Padic::one(p, cap);
        Self::reduce(p, level, v)
    }

    pub fn xi(p: u32, level: u32, cap: u32) -> Self {
        Self::xi_pow(p, level, 1, cap)
    }

    fn reduce(p: u32, level: u32, mut v: Vec<Padic>) -> Self {
        let phi = totient_pow(p, level);
        if v.is_empty() {
            return Self::zero(p, level, super::DEFAULT_CAP);
        }
        let cap = v[0].cap();
        if level == 0 {
            let mut s = Padic::zero(p, cap);
            for c in v {
                s = s + &c;
            }
            return Cyclo { p, level, coeffs: vec![s] };
        }
        let step = (p as usize).pow(level - 1);
        for d in (phi..v.len()).rev() {
            if v[d].is_exact_zero() {
                continue;
            }
            let c = std::mem::replace(&mut v[d], Padic::zero(p, cap));
            for j in 0..(p as usize - 1) {
                let t = d - phi + j * step;
                v[t] = v[t].clone() - &c;
            }
        }
        v.resize(phi, Padic::zero(p, cap));
        Cyclo { p, level, coeffs: v }
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn coeffs(&self) -> &[Padic] {
        &self.coeffs
    }

    fn cap(&self) -> u32 {
        self.coeffs.iter().map(|c| c.cap()).max().unwrap_or(super::DEFAULT_CAP)
    }

    fn same_ring(&self, other: &Cyclo) {
        assert_eq!(self.p, other.p, "cyclotomic values over different primes");
        assert_eq!(self.level, other.level, "cyclotomic values of different levels");
    }

    /// The base coordinate when every other coordinate vanishes.
    pub fn to_base(&self) -> Option<Padic> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// The Galois conjugate `ξ ↦ ξ^b`.
    pub fn conj(&self, b: i64) -> Cyclo {
        let cap = self.cap();
        let mut acc = Self::zero(self.p, self.level, cap);
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_exact_zero() {
                continue;
            }
            acc = acc + &Self::xi_pow(self.p, self.level, b * i as i64, cap).scale(c);
        }
        acc
    }

    fn conjugate_units(&self) -> Vec<i64> {
        let order = (self.p as i64).pow(self.level);
        (2..order.max(2)).filter(|b| b % self.p as i64 != 0).collect()
    }

    /// Product of all Galois conjugates.
    pub fn norm(&self) -> Result<Padic> {
        let mut prod = self.clone();
        for b in self.conjugate_units() {
            prod = prod * &self.conj(b);
        }
        prod.to_base()
            .ok_or_else(|| Error::PrecisionExhausted("cyclotomic norm did not land in the base".into()))
    }

    pub fn inv(&self) -> Result<Cyclo> {
        let mut others = self.one_like();
        for b in self.conjugate_units() {
            others = others * &self.conj(b);
        }
        let n = (self.clone() * &others)
            .to_base()
            .ok_or_else(|| Error::PrecisionExhausted("cyclotomic norm did not land in the base".into()))?;
        Ok(others.scale(&n.inv()?))
    }

    pub fn pow(&self, e: u64) -> Cyclo {
        let mut r = self.one_like();
        for _ in 0..e {
            r = r * self;
        }
        r
    }

    /// Minimum valuation over the coordinates.
    pub fn coord_val(&self) -> Option<i64> {
        self.coeffs.iter().filter(|c| !c.is_exact_zero()).map(|c| c.val()).min()
    }
}

impl fmt::Debug for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclo[{}^{}](", self.p, self.level)?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl<'a> Add<&'a Cyclo> for Cyclo {
    type Output = Cyclo;

    fn add(mut self, other: &'a Cyclo) -> Cyclo {
        self.same_ring(other);
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a = a.clone() + b;
        }
        self
    }
}

impl Add for Cyclo {
    type Output = Cyclo;

    fn add(self, other: Cyclo) -> Cyclo {
        self + &other
    }
}

impl Neg for Cyclo {
    type Output = Cyclo;

    fn neg(mut self) -> Cyclo {
        for c in self.coeffs.iter_mut() {
            *c = -c.clone();
        }
        self
    }
}

impl<'a> Sub<&'a Cyclo> for Cyclo {
    type Output = Cyclo;

    fn sub(self, other: &'a Cyclo) -> Cyclo {
        self + &(-other.clone())
    }
}

impl Sub for Cyclo {
    type Output = Cyclo;

    fn sub(self, other: Cyclo) -> Cyclo {
        self + &(-other)
    }
}

impl<'a> Mul<&'a Cyclo> for Cyclo {
    type Output = Cyclo;

    fn mul(self, other: &'a Cyclo) -> Cyclo {
        self.same_ring(other);
        let n = self.coeffs.len();
        let cap = self.cap().max(other.cap());
        let mut v = vec![Padic::zero(self.p, cap); 2 * n - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_exact_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_exact_zero() {
                    continue;
                }
                v[i + j] = v[i + j].clone() + &(a.clone() * b);
            }
        }
        Cyclo::reduce(self.p, self.level, v)
    }
}

impl Mul for Cyclo {
    type Output = Cyclo;

    fn mul(self, other: Cyclo) -> Cyclo {
        self * &other
    }
}

impl Coeff for Cyclo {
    fn zero_like(&self) -> Self {
        Cyclo::zero(self.p, self.level, self.cap())
    }

    fn one_like(&self) -> Self {
        Cyclo::from_padic(self.level, &Padic::one(self.p, self.cap()))
    }

    fn from_rational_like(&self, q: &BigRational) -> Self {
        Cyclo::from_padic(self.level, &Padic::from_rational(self.p, q, self.cap()))
    }

    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn mul_p_power(&self, p: u32, e: i64) -> Self {
        Cyclo { coeffs: self.coeffs.iter().map(|c| c.mul_p_power(p, e)).collect(), ..self.clone() }
    }

    fn div_int(&self, n: &BigInt) -> Result<Self> {
        let coeffs = self.coeffs.iter().map(|c| c.div_int(n)).collect::<Result<Vec<_>>>()?;
        Ok(Cyclo { coeffs, ..self.clone() })
    }
}

impl PadicModule for Cyclo {
    fn prime(&self) -> u32 {
        self.p
    }

    fn scale(&self, c: &Padic) -> Self {
        Cyclo { coeffs: self.coeffs.iter().map(|a| a.clone() * c).collect(), ..self.clone() }
    }

    fn embed(&self, c: &Padic) -> Self {
        Cyclo::from_padic(self.level, c)
    }

    fn val_floor(&self) -> Option<i64> {
        self.coord_val()
    }

    fn abs_prec(&self) -> Option<i64> {
        self.coeffs.iter().filter(|c| !c.is_exact_zero()).map(|c| c.prec()).min()
    }

    fn cap_prec(&self, prec: i64) -> Self {
        Cyclo { coeffs: self.coeffs.iter().map(|c| c.truncate(prec)).collect(), ..self.clone() }
    }
}

/// `Σ_{a ∈ (Z/p^n)^×} χ(a) ξ^a` with `ξ` the generator of `xi`'s ring.
pub fn gauss_sum(chi: &DirichletChar, xi: &Cyclo) -> Result<Cyclo> {
    if chi.level() != xi.level() || chi.prime() != xi.prime() {
        return Err(Error::LevelMismatch(format!(
            "character mod {}^{} against ξ of level {}",
            chi.prime(),
            chi.level(),
            xi.level()
        )));
    }
    let order = (xi.p as i64).pow(xi.level);
    let mut acc = xi.zero_like();
    let mut power = xi.one_like();
    for a in 1..=order {
        power = power * xi;
        if a % xi.p as i64 == 0 {
            continue;
        }
        if let Some(v) = chi.value(a) {
            acc = acc + &(v * &power);
        }
    }
    Ok(acc)
}
