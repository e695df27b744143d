use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{check_prime, pow_p, Padic};
use crate::error::{Error, Result};
use crate::ring::Coeff;

/// Legendre's formula for `v_p(h!)`.
pub fn factorial_valuation(h: u64, p: u32) -> u64 {
    let p = p as u64;
    let mut total = 0;
    let mut q = h / p;
    while q > 0 {
        total += q;
        q /= p;
    }
    total
}

fn require_small(x: &Padic, what: &str) -> Result<()> {
    check_prime(x.prime())?;
    if !x.is_exact_zero() && x.val() < 1 {
        return Err(Error::Divergent(format!("{what}: argument has valuation {} < 1", x.val())));
    }
    Ok(())
}

/// `exp(x)` for `v(x) >= 1`.
pub fn padic_exp(x: &Padic) -> Result<Padic> {
    require_small(x, "exp")?;
    let one = x.one_like();
    if x.is_exact_zero() {
        return Ok(one);
    }
    let n = x.prec();
    if x.is_zero() {
        return Ok(one.truncate(n) + x);
    }
    let v = x.val();
    let p = x.prime() as i64;
    let mut sum = one.truncate(n);
    let mut power = x.clone();
    let mut fact = BigInt::one();
    let mut k: i64 = 1;
    // term k has valuation >= k*v - (k-1)/(p-1), increasing in k
    while k * v * (p - 1) - (k - 1) < n * (p - 1) {
        fact *= k;
        sum = sum + &power.div_int(&fact)?;
        k += 1;
        power = power * x;
    }
    Ok(sum.truncate(n))
}

/// `log(1+x)` for `v(x) >= 1`.
pub fn padic_log1p(x: &Padic) -> Result<Padic> {
    require_small(x, "log1p")?;
    if x.is_exact_zero() {
        return Ok(x.clone());
    }
    let n = x.prec();
    if x.is_zero() {
        return Ok(x.clone());
    }
    let v = x.val();
    let p = x.prime() as i64;
    let mut sum = x.zero_like();
    let mut power = x.clone();
    let mut k: i64 = 1;
    loop {
        let mut log_k = 0;
        let mut t = p;
        while t <= k {
            log_k += 1;
            t *= p;
        }
        if k * v - log_k >= n {
            break;
        }
        let term = power.div_int(&BigInt::from(k))?;
        sum = if k % 2 == 1 { sum + &term } else { sum - &term };
        k += 1;
        power = power * x;
    }
    Ok(sum.truncate(n))
}

/// The Teichmüller representative of `a` modulo `p^prec`.
pub fn teichmuller(p: u32, a: i64, prec: u32) -> Result<Padic> {
    check_prime(p)?;
    if a.rem_euclid(p as i64) == 0 {
        return Err(Error::NotUnit(format!("{a} mod {p}")));
    }
    let m = pow_p(p, prec as i64);
    let e = BigInt::from(p);
    let mut t = BigInt::from(a).mod_floor(&m);
    for _ in 0..prec {
        t = t.modpow(&e, &m);
    }
    Ok(Padic::from_bigint(p, &t, prec).truncate(prec as i64))
}

/// Residue class `s` in `1..p` with `teichmuller(s) = x / <x>`.
pub fn teichmuller_residue(x: &Padic) -> Result<u64> {
    if !x.is_unit() {
        return Err(Error::NotUnit(x.to_string()));
    }
    x.residue_mod(1)
}

/// `x (x-1) ... (x-i+1) / i!`.
pub fn binom_general<C: Coeff>(x: &C, i: u32) -> Result<C> {
    let mut num = x.one_like();
    let mut fact = BigInt::one();
    for j in 0..i {
        num = num * &(x.clone() - &x.from_int_like(j as i64));
        fact *= j + 1;
    }
    if fact.is_one() {
        return Ok(num);
    }
    num.div_int(&fact).map_err(|e| match e {
        Error::PrecisionExhausted(_) => Error::PrecisionExhausted(format!("binom(x, {i})")),
        other => other,
    })
}

/// Binomial coefficient `binom(n, k)` for any integer `n`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 {
        return BigInt::zero();
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for j in 0..k {
        num *= n - j;
        den *= j + 1;
    }
    num / den
}
