use num_rational::BigRational;
use num_bigint::BigInt;

use super::IwasawaSeries;
use crate::error::{Error, Result};
use crate::padic::{check_prime, factorial_valuation, padic_exp, u64_valuation, Padic, INF};
use crate::ring::{Coeff, PadicModule};

/// Cutoffs for a computation targeting `prec` digits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Plan {
    /// T-degree truncation `D`.
    pub trunc: usize,
    /// Inner series cutoff `I`.
    pub terms: u32,
    /// Extra digits lost to the negative valuations of `binom(w'_n, i)`.
    pub guard: u32,
    /// Relative precision of constants.
    pub cap: u32,
}

fn ceil_log(p: u64, d: u64) -> i64 {
    let mut k = 0;
    let mut t = 1u64;
    while t < d {
        t = t.saturating_mul(p);
        k += 1;
    }
    k
}

/// `min_{d > trunc} floor(d / P) - v(d)`: the tail floor of `log(1+T)`.
fn log_tail_floor(p: u32, n: u32, trunc: usize) -> i64 {
    let block = (p as u64).pow(n - 1);
    let mut best = INF;
    let mut d = trunc as u64 + 1;
    loop {
        let w = (d / block) as i64 - u64_valuation(d, p) as i64;
        best = best.min(w);
        if d >= block && (d / block) as i64 - ceil_log(p as u64, d) > best {
            return best;
        }
        d += 1;
    }
}

/// Term `i` of the inner sum has Gauss norm at least
/// `i (v(x) - n + 1) - (i - 1)/(p - 1)`, because `binom(w'_n, i)` has norm at
/// least `-i (n - 1) - v(i!)`.
fn inner_tail_floor(p: u32, n: u32, terms: u32, vx: i64) -> i64 {
    let i = terms as i64 + 1;
    let num = i * (vx - n as i64 + 1) * (p as i64 - 1) - (i - 1);
    let den = p as i64 - 1;
    num.div_euclid(den) + if num.rem_euclid(den) == 0 { 0 } else { 1 }
}

impl Plan {
    /// The same plan with another truncation degree; the cap follows.
    pub fn with_trunc(self, p: u32, trunc: usize) -> Plan {
        let old = ceil_log(p as u64, self.trunc as u64 + 1) as u32;
        let new = ceil_log(p as u64, trunc as u64 + 1) as u32;
        Plan { trunc, cap: self.cap - 2 * old + 2 * new, ..self }
    }

    /// The same plan with another inner cutoff; guard and cap follow.
    pub fn with_terms(self, p: u32, n: u32, terms: u32) -> Plan {
        let guard = terms * (n - 1) + factorial_valuation(terms as u64, p) as u32 + 2;
        Plan { terms, guard, cap: self.cap - self.guard + guard, ..self }
    }
}

pub fn plan(p: u32, n: u32, prec: u32) -> Plan {
    let prec = prec.max(1) as i64;
    let pm = p as i64;
    let terms = (((prec - 1) * (pm - 1) + pm - 3) / (pm - 2)).max(1) as u32;
    let guard = terms * (n - 1) + factorial_valuation(terms as u64, p) as u32 + 2;
    let block = (p as usize).pow(n - 1);
    let mut trunc = 4 * block;
    while log_tail_floor(p, n, trunc) - 1 < prec + guard as i64 {
        trunc += block;
    }
    let cap = prec as u32 + guard + 2 * ceil_log(p as u64, trunc as u64 + 1) as u32 + 2;
    Plan { trunc, terms, guard, cap }
}

/// `log(1+T)` of level `n`, certified in `p^(2-n) Λ_n`.
pub fn build_un(p: u32, n: u32, trunc: usize, cap: u32) -> Result<IwasawaSeries> {
    check_prime(p)?;
    if n == 0 {
        return Err(Error::Invalid("level must be at least 1".into()));
    }
    let block = (p as usize).pow(n - 1);
    if trunc < block {
        return Err(Error::Invalid(format!("truncation {trunc} below p^(n-1) = {block}")));
    }
    let mut coeffs = vec![Padic::zero(p, cap); trunc + 1];
    for (d, c) in coeffs.iter_mut().enumerate().skip(1) {
        let sign = if d % 2 == 1 { 1 } else { -1 };
        *c = Padic::from_rational(p, &BigRational::new(BigInt::from(sign), BigInt::from(d)), cap);
    }
    let s = IwasawaSeries::new(p, n, coeffs, log_tail_floor(p, n, trunc))?;
    s.certify_membership(2 - n as i64)?;
    Ok(s)
}

/// `p^(-1) log(1+T)`, certified in `p^(1-n) Λ_n`.
pub fn build_wn_prime(p: u32, n: u32, trunc: usize, cap: u32) -> Result<IwasawaSeries> {
    let s = build_un(p, n, trunc, cap)?.mul_p_power(p, -1);
    s.certify_membership(1 - n as i64)?;
    Ok(s)
}

/// The universal character of level `n` on `1 + pZ_p`, with its cached
/// binomial table.
#[derive(Clone, Debug)]
pub struct UnivChar {
    p: u32,
    n: u32,
    plan: Plan,
    w_prime: IwasawaSeries,
    binoms: Vec<IwasawaSeries>,
    centers: Vec<Padic>,
}

impl UnivChar {
    /// Build with the default plan, widening the truncation until every
    /// `binom(w'_n, i)` has a tail floor above `prec`.
    pub fn new(p: u32, n: u32, prec: u32) -> Result<Self> {
        Self::configured(p, n, prec, None, None)
    }

    /// Like [`UnivChar::new`] with caller-supplied `D` and `I`. A supplied
    /// `D` is used as is; the tail floors of the binomials record what it
    /// certifies.
    pub fn configured(p: u32, n: u32, prec: u32, trunc: Option<usize>, terms: Option<u32>) -> Result<Self> {
        check_prime(p)?;
        if n == 0 {
            return Err(Error::Invalid("level must be at least 1".into()));
        }
        let mut pl = plan(p, n, prec);
        if let Some(t) = terms {
            pl = pl.with_terms(p, n, t.max(1));
        }
        if let Some(d) = trunc {
            return Self::with_plan(p, n, pl.with_trunc(p, d));
        }
        let block = (p as usize).pow(n - 1);
        loop {
            let u = Self::with_plan(p, n, pl)?;
            let worst = u.binoms.iter().map(|b| b.tail()).min().unwrap_or(INF);
            let deficit = prec as i64 + 1 - worst;
            if deficit <= 0 {
                return Ok(u);
            }
            pl = pl.with_trunc(p, pl.trunc + 2 * block * deficit as usize);
        }
    }

    pub fn with_plan(p: u32, n: u32, plan: Plan) -> Result<Self> {
        let w_prime = build_wn_prime(p, n, plan.trunc, plan.cap)?;
        let mut binoms = Vec::with_capacity(plan.terms as usize + 1);
        let mut falling = w_prime.one_like();
        let mut fact = BigInt::from(1);
        for i in 0..=plan.terms {
            if i > 0 {
                falling = falling * &(w_prime.clone() - &w_prime.from_int_like(i as i64 - 1));
                fact *= i;
            }
            binoms.push(falling.div_int(&fact)?);
        }
        let block = (p as i64).pow(n - 1);
        let mut centers = Vec::with_capacity(block as usize);
        for j in 0..block {
            centers.push(padic_exp(&Padic::from_int(p, j * p as i64, plan.cap))?);
        }
        Ok(UnivChar { p, n, plan, w_prime, binoms, centers })
    }

    pub fn plan(&self) -> Plan {
        self.plan
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn level(&self) -> u32 {
        self.n
    }

    pub fn w_prime(&self) -> &IwasawaSeries {
        &self.w_prime
    }

    /// `binom(w'_n, i)` for `i <= I`.
    pub fn binom(&self, i: usize) -> Option<&IwasawaSeries> {
        self.binoms.get(i)
    }

    /// `exp(jp)` for `0 <= j < p^(n-1)`.
    pub fn center(&self, j: usize) -> &Padic {
        &self.centers[j]
    }

    fn check_beta(&self, beta: &Padic) -> Result<()> {
        if beta.prime() != self.p {
            return Err(Error::PrimeMismatch(self.p, beta.prime()));
        }
        let one = beta.one_like();
        let d = beta.clone() - &one;
        if !beta.is_unit() || d.val() < 1 {
            return Err(Error::Invalid(format!("{beta} is not in 1 + pZ_p")));
        }
        if beta.prec() < self.n as i64 {
            return Err(Error::PrecisionExhausted("locating the disk of β".into()));
        }
        Ok(())
    }

    /// Which indicator `1_{exp(jp) + p^n Z_p}` fires at `beta`, for every `j`.
    pub fn indicators(&self, beta: &Padic) -> Result<Vec<bool>> {
        self.check_beta(beta)?;
        Ok(self
            .centers
            .iter()
            .map(|c| {
                let d = beta.clone() - c;
                d.val() >= self.n as i64
            })
            .collect())
    }

    pub fn disk_index(&self, beta: &Padic) -> Result<usize> {
        let ind = self.indicators(beta)?;
        let hits: Vec<usize> = ind.iter().enumerate().filter(|(_, &b)| b).map(|(j, _)| j).collect();
        match hits.as_slice() {
            [j] => Ok(*j),
            _ => Err(Error::Certificate(format!("{} indicators fire at {beta}", hits.len()))),
        }
    }

    fn offset(&self, beta: &Padic) -> Result<(usize, Padic)> {
        let j = self.disk_index(beta)?;
        let c = &self.centers[j];
        let x = (beta.clone() - c).checked_div(c)?;
        Ok((j, x))
    }

    /// `binom(w'_n, i) x^i` for the disk containing `beta`.
    pub fn inner_term(&self, beta: &Padic, i: usize) -> Result<IwasawaSeries> {
        let (_, x) = self.offset(beta)?;
        let b = self
            .binoms
            .get(i)
            .ok_or_else(|| Error::Invalid(format!("term {i} beyond the cutoff {}", self.plan.terms)))?;
        Ok(b.scale(&x.pow(i as u64)))
    }

    pub fn eval(&self, beta: &Padic) -> Result<IwasawaSeries> {
        let (j, x) = self.offset(beta)?;
        let mut acc = self.binoms[0].clone();
        let mut xi = x.one_like();
        for b in &self.binoms[1..] {
            xi = xi * &x;
            if xi.is_exact_zero() {
                break;
            }
            acc = acc + &b.scale(&xi);
        }
        let err = if x.is_exact_zero() {
            INF
        } else {
            inner_tail_floor(self.p, self.n, self.plan.terms, x.val())
        };
        let shift = IwasawaSeries::one_plus_t_pow(self.p, self.n, self.plan.trunc, j as u64, self.plan.cap);
        Ok((shift * &acc).absorb_error(err))
    }
}

/// The universal character of level `n` at `beta`.
pub fn eval_univ_char(p: u32, n: u32, beta: &Padic, prec: u32) -> Result<IwasawaSeries> {
    UnivChar::new(p, n, prec)?.eval(beta)
}
