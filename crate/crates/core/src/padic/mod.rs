//! Capped-precision p-adic numbers.
//!
//! A [`Padic`] is `unit * p^val + O(p^prec)` with `unit` a residue modulo
//! `p^(prec - val)` coprime to `p`. Two zero shapes exist: the exact zero
//! (`val = prec = INF`) and the inexact zero `O(p^prec)` with `unit = 0` and
//! `val = prec`.
//!
//! Arithmetic is interval style. Nothing is rounded to a global cap: sums
//! keep the smaller absolute precision, products and quotients keep the
//! smaller relative precision. The `cap` field only sets the relative
//! precision of constants built from an existing value.

mod cyclo;
mod funcs;
mod unramified;

pub use cyclo::{gauss_sum, Cyclo};
pub use funcs::{binom_general, binomial, factorial_valuation, padic_exp, padic_log1p, teichmuller, teichmuller_residue};
pub use unramified::Unram;

use std::cmp::{max, min, Ordering};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ring::{Coeff, PadicModule};

pub const INF: i64 = i64::MAX;

pub const DEFAULT_CAP: u32 = 20;

pub fn check_prime(p: u32) -> Result<()> {
    if p < 3 || !is_prime(p) {
        return Err(Error::BadPrime(p));
    }
    Ok(())
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn pow_p(p: u32, e: i64) -> BigInt {
    debug_assert!(e >= 0);
    BigInt::from(p).pow(e as u32)
}

pub fn u64_valuation(mut n: u64, p: u32) -> u32 {
    if n == 0 {
        return u32::MAX;
    }
    let p = p as u64;
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

pub fn bigint_valuation(n: &BigInt, p: u32) -> u32 {
    if n.is_zero() {
        return u32::MAX;
    }
    let pb = BigInt::from(p);
    let mut m = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = m.div_rem(&pb);
        if !r.is_zero() {
            return v;
        }
        m = q;
        v += 1;
    }
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    if m.is_one() {
        return Some(BigInt::zero());
    }
    let g = a.extended_gcd(m);
    if !g.gcd.is_one() {
        return None;
    }
    Some(g.x.mod_floor(m))
}

#[derive(Clone)]
pub struct Padic {
    p: u32,
    cap: u32,
    val: i64,
    unit: BigInt,
    prec: i64,
}

impl Padic {
    pub fn zero(p: u32, cap: u32) -> Self {
        Padic { p, cap, val: INF, unit: BigInt::zero(), prec: INF }
    }

    /// `O(p^prec)`.
    pub fn inexact_zero(p: u32, cap: u32, prec: i64) -> Self {
        Padic { p, cap, val: prec, unit: BigInt::zero(), prec }
    }

    pub fn one(p: u32, cap: u32) -> Self {
        Self::from_int(p, 1, cap)
    }

    /// An integer known to `cap` significant digits. Zero is exact.
    pub fn from_bigint(p: u32, n: &BigInt, cap: u32) -> Self {
        if n.is_zero() {
            return Self::zero(p, cap);
        }
        let v = bigint_valuation(n, p) as i64;
        Self::build(p, cap, n.clone(), 0, v + cap as i64)
    }

    pub fn from_int(p: u32, n: i64, cap: u32) -> Self {
        Self::from_bigint(p, &BigInt::from(n), cap)
    }

    pub fn from_rational(p: u32, q: &BigRational, cap: u32) -> Self {
        if Zero::is_zero(q) {
            return Self::zero(p, cap);
        }
        let vn = bigint_valuation(q.numer(), p) as i64;
        let vd = bigint_valuation(q.denom(), p) as i64;
        let num = q.numer() / pow_p(p, vn);
        let den = q.denom() / pow_p(p, vd);
        let modulus = pow_p(p, cap as i64);
        let inv = mod_inverse(&den, &modulus).expect("denominator coprime to p");
        let unit = (num * inv).mod_floor(&modulus);
        Padic { p, cap, val: vn - vd, unit, prec: vn - vd + cap as i64 }
    }

    /// Build from raw parts, reducing `unit` modulo `p^(prec - val)`.
    pub fn new(p: u32, val: i64, unit: BigInt, prec: i64) -> Result<Self> {
        check_prime(p)?;
        if unit.is_zero() {
            if val == INF && prec == INF {
                return Ok(Self::zero(p, DEFAULT_CAP));
            }
            if val != prec {
                return Err(Error::Invalid("a zero unit needs val = prec".into()));
            }
            return Ok(Self::inexact_zero(p, DEFAULT_CAP, prec));
        }
        if prec <= val || prec == INF {
            return Err(Error::Invalid("prec must exceed val for a nonzero value".into()));
        }
        if (&unit % BigInt::from(p)).is_zero() {
            return Err(Error::Invalid("unit is divisible by p".into()));
        }
        let rel = prec - val;
        let unit = unit.mod_floor(&pow_p(p, rel));
        Ok(Padic { p, cap: rel.clamp(1, u32::MAX as i64) as u32, val, unit, prec })
    }

    /// The value `x * p^base`, known modulo `p^prec`.
    fn build(p: u32, cap: u32, x: BigInt, base: i64, prec: i64) -> Self {
        debug_assert!(prec != INF);
        if prec <= base {
            return Self::inexact_zero(p, cap, prec);
        }
        let modulus = pow_p(p, prec - base);
        let x = x.mod_floor(&modulus);
        if x.is_zero() {
            return Self::inexact_zero(p, cap, prec);
        }
        let v = bigint_valuation(&x, p) as i64;
        let unit = if v == 0 { x } else { x / pow_p(p, v) };
        Padic { p, cap, val: base + v, unit, prec }
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn with_cap(mut self, cap: u32) -> Self {
        self.cap = cap;
        self
    }

    /// Valuation; for the inexact zero this is its precision and for the
    /// exact zero it is [`INF`].
    pub fn val(&self) -> i64 {
        self.val
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn unit(&self) -> &BigInt {
        &self.unit
    }

    pub fn rel_prec(&self) -> i64 {
        if self.is_exact_zero() {
            INF
        } else {
            self.prec - self.val
        }
    }

    pub fn is_exact_zero(&self) -> bool {
        self.prec == INF
    }

    pub fn is_zero(&self) -> bool {
        self.unit.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        !self.is_zero() && self.val == 0
    }

    fn same_prime(&self, other: &Padic) {
        assert_eq!(self.p, other.p, "p-adic values over different primes");
    }

    /// Equal within the precision of both operands.
    pub fn approx_eq(&self, other: &Padic) -> bool {
        (self.clone() - other).is_zero()
    }

    /// Truncate to absolute precision `prec` (never increases precision).
    pub fn truncate(&self, prec: i64) -> Padic {
        if prec >= self.prec {
            return self.clone();
        }
        if self.is_zero() || prec <= self.val {
            return Self::inexact_zero(self.p, self.cap, prec);
        }
        let unit = self.unit.mod_floor(&pow_p(self.p, prec - self.val));
        Padic { p: self.p, cap: self.cap, val: self.val, unit, prec }
    }

    /// The integer `n` with `0 <= n < p^prec` congruent to `self`; needs
    /// `val >= 0`.
    pub fn residue(&self) -> Result<BigInt> {
        if self.is_exact_zero() {
            return Ok(BigInt::zero());
        }
        if self.val < 0 {
            return Err(Error::Invalid("residue of a non-integral value".into()));
        }
        if self.is_zero() {
            return Ok(BigInt::zero());
        }
        Ok(&self.unit * pow_p(self.p, self.val))
    }

    /// Residue modulo `p^k` as a `u64`.
    pub fn residue_mod(&self, k: u32) -> Result<u64> {
        if self.prec < k as i64 {
            return Err(Error::PrecisionExhausted(format!("residue modulo p^{k}")));
        }
        let r = self.residue()? % pow_p(self.p, k as i64);
        Ok(r.to_u64().expect("small residue"))
    }

    pub fn inv(&self) -> Result<Padic> {
        if self.is_zero() {
            return Err(Error::DivisionByZero(format!("inverse of {self}")));
        }
        let rel = self.prec - self.val;
        let unit = mod_inverse(&self.unit, &pow_p(self.p, rel)).expect("unit coprime to p");
        Ok(Padic { p: self.p, cap: self.cap, val: -self.val, unit, prec: rel - self.val })
    }

    pub fn checked_div(&self, other: &Padic) -> Result<Padic> {
        Ok(self.clone() * &other.inv()?)
    }

    pub fn pow(&self, e: u64) -> Padic {
        let mut result = self.one_like();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * &base;
            }
        }
        result
    }

    /// Multiply by an exactly known integer.
    pub fn mul_int(&self, n: i64) -> Padic {
        if n == 0 {
            return self.zero_like();
        }
        if self.is_exact_zero() {
            return self.clone();
        }
        let v = u64_valuation(n.unsigned_abs(), self.p) as i64;
        if self.is_zero() {
            return Padic::inexact_zero(self.p, self.cap, self.prec + v);
        }
        Padic::build(self.p, self.cap, &self.unit * BigInt::from(n), self.val, self.prec + v)
    }

    /// Rational value when the value is represented exactly by its digits.
    pub fn to_rational(&self) -> BigRational {
        if self.is_zero() {
            return BigRational::zero();
        }
        let u = BigRational::from_integer(self.unit.clone());
        let pv = BigRational::from_integer(pow_p(self.p, self.val.abs()));
        if self.val >= 0 {
            u * pv
        } else {
            u / pv
        }
    }

    /// The unit digits read as a signed integer in `(-p^r/2, p^r/2]`.
    pub fn balanced_integer(&self) -> Option<BigInt> {
        if self.val < 0 {
            return None;
        }
        let r = self.residue().ok()?;
        if self.is_exact_zero() {
            return Some(r);
        }
        let m = pow_p(self.p, self.prec);
        if &r * 2 > m {
            Some(r - m)
        } else {
            Some(r)
        }
    }
}

impl PartialEq for Padic {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.val == other.val && self.prec == other.prec && self.unit == other.unit
    }
}

impl Eq for Padic {}

impl fmt::Debug for Padic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Padic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_exact_zero() {
            return write!(f, "0");
        }
        if self.is_zero() {
            return write!(f, "O({}^{})", self.p, self.prec);
        }
        write!(f, "{}*{}^{} + O({}^{})", self.unit, self.p, self.val, self.p, self.prec)
    }
}

impl<'a> Add<&'a Padic> for Padic {
    type Output = Padic;

    fn add(self, other: &'a Padic) -> Padic {
        self.same_prime(other);
        let cap = max(self.cap, other.cap);
        if self.is_exact_zero() {
            return other.clone().with_cap(cap);
        }
        if other.is_exact_zero() {
            return self.with_cap(cap);
        }
        let prec = min(self.prec, other.prec);
        let base = min(self.val, other.val);
        if base >= prec {
            return Padic::inexact_zero(self.p, cap, prec);
        }
        let x = &self.unit * pow_p(self.p, self.val - base) + &other.unit * pow_p(self.p, other.val - base);
        Padic::build(self.p, cap, x, base, prec)
    }
}

impl Add for Padic {
    type Output = Padic;

    fn add(self, other: Padic) -> Padic {
        self + &other
    }
}

impl Neg for Padic {
    type Output = Padic;

    fn neg(self) -> Padic {
        if self.is_zero() {
            return self;
        }
        let m = pow_p(self.p, self.prec - self.val);
        let unit = &m - &self.unit;
        Padic { unit, ..self }
    }
}

impl<'a> Sub<&'a Padic> for Padic {
    type Output = Padic;

    fn sub(self, other: &'a Padic) -> Padic {
        self + &(-other.clone())
    }
}

impl Sub for Padic {
    type Output = Padic;

    fn sub(self, other: Padic) -> Padic {
        self + &(-other)
    }
}

impl<'a> Mul<&'a Padic> for Padic {
    type Output = Padic;

    fn mul(self, other: &'a Padic) -> Padic {
        self.same_prime(other);
        let cap = max(self.cap, other.cap);
        if self.is_exact_zero() || other.is_exact_zero() {
            return Padic::zero(self.p, cap);
        }
        let val = self.val + other.val;
        let prec = min(self.val + other.prec, other.val + self.prec);
        if self.is_zero() || other.is_zero() {
            return Padic::inexact_zero(self.p, cap, prec);
        }
        Padic::build(self.p, cap, &self.unit * &other.unit, val, prec)
    }
}

impl Mul for Padic {
    type Output = Padic;

    fn mul(self, other: Padic) -> Padic {
        self * &other
    }
}

impl PartialOrd for Padic {
    fn partial_cmp(&self, _other: &Self) -> Option<Ordering> {
        None
    }
}

impl Coeff for Padic {
    fn zero_like(&self) -> Self {
        Padic::zero(self.p, self.cap)
    }

    fn one_like(&self) -> Self {
        Padic::one(self.p, self.cap)
    }

    fn from_rational_like(&self, q: &BigRational) -> Self {
        Padic::from_rational(self.p, q, self.cap)
    }

    fn from_bigint_like(&self, n: &BigInt) -> Self {
        Padic::from_bigint(self.p, n, self.cap)
    }

    fn is_zero(&self) -> bool {
        Padic::is_zero(self)
    }

    fn mul_p_power(&self, p: u32, e: i64) -> Self {
        assert_eq!(p, self.p, "p-adic values over different primes");
        if self.is_exact_zero() {
            return self.clone();
        }
        Padic { val: self.val + e, prec: self.prec + e, ..self.clone() }
    }

    fn div_int(&self, n: &BigInt) -> Result<Self> {
        if n.is_zero() {
            return Err(Error::DivisionByZero("div_int".into()));
        }
        if self.is_exact_zero() {
            return Ok(self.clone());
        }
        let v = bigint_valuation(n, self.p) as i64;
        if self.is_zero() {
            if self.prec - v < 0 && self.prec >= 0 {
                return Err(Error::PrecisionExhausted(format!(
                    "dividing O({}^{}) by {n}",
                    self.p, self.prec
                )));
            }
            return Ok(Padic::inexact_zero(self.p, self.cap, self.prec - v));
        }
        let rel = self.prec - self.val;
        let m = pow_p(self.p, rel);
        let n_unit = (n / pow_p(self.p, v)).mod_floor(&m);
        let inv = mod_inverse(&n_unit, &m).expect("coprime");
        let unit = (&self.unit * inv).mod_floor(&m);
        Ok(Padic { p: self.p, cap: self.cap, val: self.val - v, unit, prec: self.prec - v })
    }
}

impl PadicModule for Padic {
    fn prime(&self) -> u32 {
        self.p
    }

    fn scale(&self, c: &Padic) -> Self {
        self.clone() * c
    }

    fn embed(&self, c: &Padic) -> Self {
        c.clone()
    }

    fn val_floor(&self) -> Option<i64> {
        if self.is_exact_zero() {
            None
        } else {
            Some(self.val)
        }
    }

    fn abs_prec(&self) -> Option<i64> {
        if self.is_exact_zero() {
            None
        } else {
            Some(self.prec)
        }
    }

    fn cap_prec(&self, prec: i64) -> Self {
        self.truncate(prec)
    }
}

#[derive(Serialize, Deserialize)]
struct PadicJson {
    p: u32,
    val: Option<i64>,
    unit: String,
    prec: Option<i64>,
}

impl Serialize for Padic {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let exact = self.is_exact_zero();
        PadicJson {
            p: self.p,
            val: if exact { None } else { Some(self.val) },
            unit: self.unit.to_string(),
            prec: if exact { None } else { Some(self.prec) },
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Padic {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = PadicJson::deserialize(d)?;
        let unit: BigInt = j.unit.parse().map_err(|_| D::Error::custom("unit is not a decimal integer"))?;
        if unit.is_negative() {
            return Err(D::Error::custom("unit must be non-negative"));
        }
        let val = j.val.unwrap_or(INF);
        let prec = j.prec.unwrap_or(INF);
        Padic::new(j.p, val, unit, prec).map_err(D::Error::custom)
    }
}
