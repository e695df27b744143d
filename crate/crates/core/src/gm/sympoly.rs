use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::padic::binomial;

/// A polynomial in `A, B, M` over `Z`, stored as exponent triples.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SymPoly {
    terms: BTreeMap<[u32; 3], BigInt>,
}

impl SymPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        let mut s = Self::zero();
        s.push([0, 0, 0], c.into());
        s
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn a() -> Self {
        Self::monomial([1, 0, 0], 1)
    }

    pub fn b() -> Self {
        Self::monomial([0, 1, 0], 1)
    }

    pub fn m() -> Self {
        Self::monomial([0, 0, 1], 1)
    }

    pub fn monomial(exps: [u32; 3], c: impl Into<BigInt>) -> Self {
        let mut s = Self::zero();
        s.push(exps, c.into());
        s
    }

    fn push(&mut self, e: [u32; 3], c: BigInt) {
        if c.is_zero() {
            return;
        }
        let v = self.terms.remove(&e).unwrap_or_default() + c;
        if !v.is_zero() {
            self.terms.insert(e, v);
        }
    }

    pub fn terms(&self) -> &BTreeMap<[u32; 3], BigInt> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        let mut out = Self::zero();
        for (e, v) in &self.terms {
            out.push(*e, v * c);
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval(&self, a: &BigInt, b: &BigInt, m: &BigInt) -> BigInt {
        let mut total = BigInt::zero();
        for (e, c) in &self.terms {
            total += c * a.pow(e[0]) * b.pow(e[1]) * m.pow(e[2]);
        }
        total
    }

    /// `(M + c)(M + c - 1) ... (M + c - r + 1)`.
    pub fn falling_m(c: i64, r: u32) -> Self {
        let mut acc = Self::one();
        for l in 0..r as i64 {
            acc = &acc * &(Self::m() + Self::constant(c - l));
        }
        acc
    }
}

impl Add for SymPoly {
    type Output = SymPoly;
    fn add(mut self, rhs: SymPoly) -> SymPoly {
        for (e, c) in rhs.terms {
            self.push(e, c);
        }
        self
    }
}

impl Sub for SymPoly {
    type Output = SymPoly;
    fn sub(self, rhs: SymPoly) -> SymPoly {
        self + (-rhs)
    }
}

impl Neg for SymPoly {
    type Output = SymPoly;
    fn neg(self) -> SymPoly {
        SymPoly { terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect() }
    }
}

impl Mul for &SymPoly {
    type Output = SymPoly;
    fn mul(self, rhs: &SymPoly) -> SymPoly {
        let mut out = SymPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.push([e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2]], c1 * c2);
            }
        }
        out
    }
}

impl Mul for SymPoly {
    type Output = SymPoly;
    fn mul(self, rhs: SymPoly) -> SymPoly {
        &self * &rhs
    }
}

impl fmt::Display for SymPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.abs();
            let vars: Vec<String> = ["A", "B", "M"]
                .iter()
                .zip(e)
                .filter(|(_, &k)| k > 0)
                .map(|(v, &k)| if k == 1 { v.to_string() } else { format!("{v}^{k}") })
                .collect();
            if vars.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{mag}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

fn sign(e: u32) -> BigInt {
    if e.is_multiple_of(2) {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

fn factorial(k: u32) -> BigInt {
    (1..=k as u64).fold(BigInt::one(), |acc, j| acc * j)
}

/// `k! binom(M + c, r)` as a polynomial in `M`, for `r <= k`.
fn scaled_binom_m(c: i64, r: u32, k: u32) -> SymPoly {
    SymPoly::falling_m(c, r).scale(&(factorial(k) / factorial(r)))
}

/// `Σ_{j<=i} Σ_{k<=j} binom(i,j) binom(j,k) binom(M+j,k) k! (-1)^(i-j) A^k B^j`.
pub fn binom_lemma_lhs(i: u32) -> SymPoly {
    let mut out = SymPoly::zero();
    for j in 0..=i {
        for k in 0..=j {
            let c = binomial(i as i64, j as i64) * binomial(j as i64, k as i64) * sign(i - j);
            let mono = SymPoly::monomial([k, j, 0], c);
            out = out + &scaled_binom_m(j as i64, k, k) * &mono;
        }
    }
    out
}

/// `(-1)^i Σ_{k<=i} binom(i,k) (-AB)^k k! Σ_{j<=k} binom(M+k,k-j) binom(i-k,j) (1-B)^(i-k-j) (-B)^j`.
pub fn binom_lemma_rhs(i: u32) -> SymPoly {
    let one_minus_b = SymPoly::one() - SymPoly::b();
    let mut out = SymPoly::zero();
    for k in 0..=i {
        let outer = SymPoly::monomial([k, k, 0], binomial(i as i64, k as i64) * sign(k));
        let mut inner = SymPoly::zero();
        for j in 0..=k.min(i - k) {
            let c = binomial((i - k) as i64, j as i64) * sign(j);
            let t = &(&scaled_binom_m(k as i64, k - j, k) * &one_minus_b.pow(i - k - j))
                * &SymPoly::monomial([0, j, 0], c);
            inner = inner + t;
        }
        out = out + &outer * &inner;
    }
    out.scale(&sign(i))
}

/// Both sides of the identity evaluated at integers, with every binomial
/// computed directly as an integer.
pub fn binom_lemma_numeric(i: u32, a: &BigInt, b: &BigInt, m: i64) -> (BigInt, BigInt) {
    let fact = |k: u32| factorial(k);
    let mut lhs = BigInt::zero();
    for j in 0..=i {
        for k in 0..=j {
            lhs += binomial(i as i64, j as i64)
                * binomial(j as i64, k as i64)
                * binomial(m + j as i64, k as i64)
                * fact(k)
                * sign(i - j)
                * a.pow(k)
                * b.pow(j);
        }
    }
    let one_minus_b = BigInt::one() - b;
    let mut rhs = BigInt::zero();
    for k in 0..=i {
        let mut inner = BigInt::zero();
        for j in 0..=k.min(i - k) {
            inner += binomial(m + k as i64, (k - j) as i64)
                * binomial((i - k) as i64, j as i64)
                * one_minus_b.pow(i - k - j)
                * sign(j)
                * b.pow(j);
        }
        rhs += binomial(i as i64, k as i64) * sign(k) * (a * b).pow(k) * fact(k) * inner;
    }
    (lhs, rhs * sign(i))
}
