//! Truncated elements of the Iwasawa rings `Λ_n`.
//!
//! An [`IwasawaSeries`] of level `n` stores coefficients `c_0..=c_D` of a
//! series in `T` plus a tail floor `F`: every unstored coefficient satisfies
//! `v(c_d) >= F - floor(d / p^(n-1))`. The weighted floor
//! `v(c_d) + floor(d / p^(n-1))` is the quantity that controls membership in
//! `Λ_n` and convergence at points of the level-`n` disk.

mod character;
mod point;
mod univ;

pub use character::{eval_full_char, weight_map_k, AlgebraicChar, CharValue, FinitePart, WeightChar, WeightKind};
pub use point::WeightPoint;
pub use univ::{build_un, build_wn_prime, eval_univ_char, plan, Plan, UnivChar};

use std::cmp::min;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::padic::{bigint_valuation, check_prime, Padic, DEFAULT_CAP, INF};
use crate::ring::{Coeff, PadicModule};

pub(crate) fn sat_add(a: i64, b: i64) -> i64 {
    if a == INF || b == INF {
        INF
    } else {
        a + b
    }
}

#[derive(Clone, PartialEq)]
pub struct IwasawaSeries {
    p: u32,
    n: u32,
    coeffs: Vec<Padic>,
    tail: i64,
}

impl IwasawaSeries {
    pub fn new(p: u32, n: u32, coeffs: Vec<Padic>, tail: i64) -> Result<Self> {
        check_prime(p)?;
        if n == 0 {
            return Err(Error::Invalid("level must be at least 1".into()));
        }
        if coeffs.is_empty() {
            return Err(Error::Invalid("a series needs at least the constant coefficient".into()));
        }
        if let Some(c) = coeffs.iter().find(|c| c.prime() != p) {
            return Err(Error::PrimeMismatch(p, c.prime()));
        }
        Ok(IwasawaSeries { p, n, coeffs, tail })
    }

    pub fn constant(p: u32, n: u32, trunc: usize, c: &Padic) -> Self {
        let mut coeffs = vec![Padic::zero(p, c.cap()); trunc + 1];
        coeffs[0] = c.clone();
        IwasawaSeries { p, n, coeffs, tail: INF }
    }

    /// The variable `T`.
    pub fn t(p: u32, n: u32, trunc: usize, cap: u32) -> Self {
        let mut s = Self::constant(p, n, trunc, &Padic::zero(p, cap));
        if trunc >= 1 {
            s.coeffs[1] = Padic::one(p, cap);
        } else {
            s.tail = 1 - s.block(1);
        }
        s
    }

    /// `(1+T)^j` as an exact polynomial.
    pub fn one_plus_t_pow(p: u32, n: u32, trunc: usize, j: u64, cap: u32) -> Self {
        let mut s = Self::constant(p, n, trunc, &Padic::zero(p, cap));
        let mut tail = INF;
        let mut b = BigInt::from(1);
        for d in 0..=j {
            let c = Padic::from_bigint(p, &b, cap);
            if (d as usize) <= trunc {
                s.coeffs[d as usize] = c;
            } else if !c.is_exact_zero() {
                tail = tail.min(c.val() + s.block(d as usize));
            }
            b = b * BigInt::from(j - d) / BigInt::from(d + 1);
        }
        s.tail = tail;
        s
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn level(&self) -> u32 {
        self.n
    }

    /// `p^(n-1)`.
    pub fn block_size(&self) -> usize {
        (self.p as usize).pow(self.n - 1)
    }

    fn block(&self, d: usize) -> i64 {
        (d / self.block_size()) as i64
    }

    pub fn trunc(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Padic] {
        &self.coeffs
    }

    pub fn coeff(&self, d: usize) -> Option<&Padic> {
        self.coeffs.get(d)
    }

    pub fn tail(&self) -> i64 {
        self.tail
    }

    fn cap(&self) -> u32 {
        self.coeffs.iter().map(|c| c.cap()).max().unwrap_or(DEFAULT_CAP)
    }

    /// Lower bound on `v(c_d)`; `None` for an exact zero.
    pub fn floor(&self, d: usize) -> Option<i64> {
        let c = &self.coeffs[d];
        if c.is_exact_zero() {
            None
        } else {
            Some(c.val())
        }
    }

    pub fn floors(&self) -> Vec<Option<i64>> {
        (0..self.coeffs.len()).map(|d| self.floor(d)).collect()
    }

    fn weighted(&self, d: usize) -> i64 {
        match self.floor(d) {
            None => INF,
            Some(f) => f + self.block(d),
        }
    }

    /// Lower bound for the Gauss norm `min_d v(c_d) + floor(d/p^(n-1))`.
    pub fn norm_floor(&self) -> i64 {
        (0..self.coeffs.len()).map(|d| self.weighted(d)).min().unwrap_or(INF).min(self.tail)
    }

    /// Tail floor after dropping every stored degree above `d`.
    fn tail_after(&self, d: usize) -> i64 {
        let mut t = self.tail;
        for e in (d + 1)..self.coeffs.len() {
            t = t.min(self.weighted(e));
        }
        t
    }

    pub fn truncate_to(&self, trunc: usize) -> Self {
        if trunc >= self.trunc() {
            return self.clone();
        }
        IwasawaSeries {
            p: self.p,
            n: self.n,
            coeffs: self.coeffs[..=trunc].to_vec(),
            tail: self.tail_after(trunc),
        }
    }

    /// Check `v(c_d) + floor(d/p^(n-1)) >= e` at every stored degree and in
    /// the tail.
    pub fn certify_membership(&self, e: i64) -> Result<()> {
        for d in 0..self.coeffs.len() {
            if self.weighted(d) < e {
                return Err(Error::Certificate(format!(
                    "degree {d}: weighted floor {} below {e}",
                    self.weighted(d)
                )));
            }
        }
        if self.tail < e {
            return Err(Error::Certificate(format!("tail floor {} below {e}", self.tail)));
        }
        Ok(())
    }

    /// Fold an extra error term of Gauss norm at least `f` into the stored
    /// precisions and the tail.
    pub fn absorb_error(&self, f: i64) -> Self {
        if f == INF {
            return self.clone();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(d, c)| {
                let cap = f - self.block(d);
                if c.is_exact_zero() {
                    Padic::inexact_zero(self.p, c.cap(), cap)
                } else {
                    c.truncate(cap)
                }
            })
            .collect();
        IwasawaSeries { p: self.p, n: self.n, coeffs, tail: self.tail.min(f) }
    }

    fn same_ring(&self, other: &Self) {
        assert_eq!(self.p, other.p, "series over different primes");
        assert_eq!(self.n, other.n, "series of different levels");
    }

    pub fn pow(&self, e: u64) -> Self {
        let mut r = self.one_like();
        for _ in 0..e {
            r = r * self;
        }
        r
    }

    /// Approximate equality: the difference vanishes at every stored degree.
    pub fn approx_eq(&self, other: &Self) -> bool {
        (self.clone() - other).is_zero()
    }
}

impl fmt::Debug for IwasawaSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Λ[{}; n={}](", self.p, self.n)?;
        let mut first = true;
        for (d, c) in self.coeffs.iter().enumerate() {
            if c.is_exact_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})T^{d}")?;
        }
        if self.tail != INF {
            write!(f, " + tail≥{}", self.tail)?;
        }
        write!(f, ")")
    }
}

impl<'a> Add<&'a IwasawaSeries> for IwasawaSeries {
    type Output = IwasawaSeries;

    fn add(self, other: &'a IwasawaSeries) -> IwasawaSeries {
        self.same_ring(other);
        let d = min(self.trunc(), other.trunc());
        let tail = self.tail_after(d).min(other.tail_after(d));
        let coeffs = (0..=d).map(|i| self.coeffs[i].clone() + &other.coeffs[i]).collect();
        IwasawaSeries { p: self.p, n: self.n, coeffs, tail }
    }
}

impl Add for IwasawaSeries {
    type Output = IwasawaSeries;

    fn add(self, other: IwasawaSeries) -> IwasawaSeries {
        self + &other
    }
}

impl Neg for IwasawaSeries {
    type Output = IwasawaSeries;

    fn neg(self) -> IwasawaSeries {
        IwasawaSeries { coeffs: self.coeffs.into_iter().map(|c| -c).collect(), ..self }
    }
}

impl<'a> Sub<&'a IwasawaSeries> for IwasawaSeries {
    type Output = IwasawaSeries;

    fn sub(self, other: &'a IwasawaSeries) -> IwasawaSeries {
        self + &(-other.clone())
    }
}

impl Sub for IwasawaSeries {
    type Output = IwasawaSeries;

    fn sub(self, other: IwasawaSeries) -> IwasawaSeries {
        self + &(-other)
    }
}

impl<'a> Mul<&'a IwasawaSeries> for IwasawaSeries {
    type Output = IwasawaSeries;

    fn mul(self, other: &'a IwasawaSeries) -> IwasawaSeries {
        self.same_ring(other);
        let d = min(self.trunc(), other.trunc());
        let cap = self.cap().max(other.cap());
        let mut coeffs = vec![Padic::zero(self.p, cap); d + 1];
        for i in 0..=d {
            let a = &self.coeffs[i];
            if a.is_exact_zero() {
                continue;
            }
            for j in 0..=(d - i) {
                let b = &other.coeffs[j];
                if b.is_exact_zero() {
                    continue;
                }
                coeffs[i + j] = coeffs[i + j].clone() + &(a.clone() * b);
            }
        }
        // the dropped part of the product of the stored polynomials
        let wa: Vec<i64> = (0..=d).map(|i| self.weighted(i)).collect();
        let wb: Vec<i64> = (0..=d).map(|j| other.weighted(j)).collect();
        let mut suffix = vec![INF; d + 2];
        for j in (0..=d).rev() {
            suffix[j] = suffix[j + 1].min(wb[j]);
        }
        let mut dropped = INF;
        for (i, &w) in wa.iter().enumerate() {
            if i >= 1 {
                dropped = dropped.min(sat_add(w, suffix[d + 1 - i]));
            }
        }
        let norm_a = wa.iter().copied().min().unwrap_or(INF);
        let norm_b = wb.iter().copied().min().unwrap_or(INF);
        let ta = self.tail_after(d);
        let tb = other.tail_after(d);
        let tail = dropped
            .min(sat_add(norm_a, tb))
            .min(sat_add(ta, norm_b))
            .min(sat_add(ta, tb));
        IwasawaSeries { p: self.p, n: self.n, coeffs, tail }
    }
}

impl Mul for IwasawaSeries {
    type Output = IwasawaSeries;

    fn mul(self, other: IwasawaSeries) -> IwasawaSeries {
        self * &other
    }
}

impl Coeff for IwasawaSeries {
    fn zero_like(&self) -> Self {
        IwasawaSeries::constant(self.p, self.n, self.trunc(), &Padic::zero(self.p, self.cap()))
    }

    fn one_like(&self) -> Self {
        IwasawaSeries::constant(self.p, self.n, self.trunc(), &Padic::one(self.p, self.cap()))
    }

    fn from_rational_like(&self, q: &BigRational) -> Self {
        IwasawaSeries::constant(self.p, self.n, self.trunc(), &Padic::from_rational(self.p, q, self.cap()))
    }

    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn mul_p_power(&self, p: u32, e: i64) -> Self {
        IwasawaSeries {
            coeffs: self.coeffs.iter().map(|c| c.mul_p_power(p, e)).collect(),
            tail: sat_add(self.tail, e),
            ..self.clone()
        }
    }

    fn div_int(&self, m: &BigInt) -> Result<Self> {
        let v = bigint_valuation(m, self.p) as i64;
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            coeffs.push(match c.div_int(m) {
                Ok(x) => x,
                Err(Error::PrecisionExhausted(_)) => Padic::inexact_zero(self.p, c.cap(), c.prec() - v),
                Err(e) => return Err(e),
            });
        }
        Ok(IwasawaSeries { coeffs, tail: sat_add(self.tail, -v), ..self.clone() })
    }

    fn universal_weight(&self, n: u32) -> Result<Self> {
        if n != self.n {
            return Err(Error::LevelMismatch(format!(
                "weight of level {n} in a ring of level {}",
                self.n
            )));
        }
        build_wn_prime(self.p, self.n, self.trunc(), self.cap())
    }
}

impl PadicModule for IwasawaSeries {
    fn prime(&self) -> u32 {
        self.p
    }

    fn scale(&self, c: &Padic) -> Self {
        let tail = if c.is_exact_zero() { INF } else { sat_add(self.tail, c.val()) };
        IwasawaSeries { coeffs: self.coeffs.iter().map(|a| a.clone() * c).collect(), tail, ..self.clone() }
    }

    fn embed(&self, c: &Padic) -> Self {
        IwasawaSeries::constant(self.p, self.n, self.trunc(), c)
    }

    fn val_floor(&self) -> Option<i64> {
        let f = self.norm_floor();
        if f == INF {
            None
        } else {
            Some(f)
        }
    }

    fn abs_prec(&self) -> Option<i64> {
        let mut best = self.tail;
        for (d, c) in self.coeffs.iter().enumerate() {
            if !c.is_exact_zero() {
                best = best.min(c.prec() + self.block(d));
            }
        }
        if best == INF {
            None
        } else {
            Some(best)
        }
    }

    fn cap_prec(&self, prec: i64) -> Self {
        self.absorb_error(prec)
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    deg: usize,
    coeff: Padic,
}

#[derive(Serialize, Deserialize)]
struct SeriesJson {
    p: u32,
    n: u32,
    trunc: usize,
    coeffs: Vec<TermJson>,
    floors: Vec<Option<i64>>,
    tail: Option<i64>,
}

impl Serialize for IwasawaSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SeriesJson {
            p: self.p,
            n: self.n,
            trunc: self.trunc(),
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_exact_zero())
                .map(|(deg, c)| TermJson { deg, coeff: c.clone() })
                .collect(),
            floors: self.floors(),
            tail: if self.tail == INF { None } else { Some(self.tail) },
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for IwasawaSeries {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = SeriesJson::deserialize(d)?;
        let mut coeffs = vec![Padic::zero(j.p, DEFAULT_CAP); j.trunc + 1];
        for t in j.coeffs {
            if t.deg > j.trunc {
                return Err(D::Error::custom(format!("degree {} above trunc {}", t.deg, j.trunc)));
            }
            coeffs[t.deg] = t.coeff;
        }
        let s = IwasawaSeries::new(j.p, j.n, coeffs, j.tail.unwrap_or(INF)).map_err(D::Error::custom)?;
        if j.floors != s.floors() {
            return Err(D::Error::custom("floors do not match the coefficients"));
        }
        Ok(s)
    }
}
