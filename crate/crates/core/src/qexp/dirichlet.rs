use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::padic::{check_prime, teichmuller, Cyclo, Padic};
use crate::ring::PadicModule;

/// The smallest primitive root modulo `p^2`; it generates `(Z/p^k)^×` for
/// every `k`.
pub fn primitive_root(p: u32) -> u64 {
    let p = p as u64;
    let m = p * p;
    let phi = p * (p - 1);
    let mut prime_factors = vec![p];
    let mut r = p - 1;
    let mut d = 2;
    while d * d <= r {
        if r.is_multiple_of(d) {
            prime_factors.push(d);
            while r.is_multiple_of(d) {
                r /= d;
            }
        }
        d += 1;
    }
    if r > 1 {
        prime_factors.push(r);
    }
    let pow = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        b %= m;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % m;
            }
            b = b * b % m;
            e >>= 1;
        }
        acc
    };
    (2..m)
        .find(|&g| g % p != 0 && prime_factors.iter().all(|&q| pow(g, phi / q) != 1))
        .expect("primitive roots exist modulo p^2")
}

/// A Dirichlet character modulo `p^level` with values in `Z_p[ξ]`,
/// `ξ` primitive of order `p^level`. With `g` the primitive root above,
/// `χ(g) = ω(g)^a · ξ^(p b)`.
#[derive(Clone, Debug)]
pub struct DirichletChar {
    p: u32,
    level: u32,
    a: i64,
    b: i64,
    cap: u32,
    table: Vec<Option<Cyclo>>,
}

impl PartialEq for DirichletChar {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.level == other.level && self.a == other.a && self.b == other.b
    }
}

impl DirichletChar {
    pub fn new(p: u32, level: u32, a: i64, b: i64, cap: u32) -> Result<Self> {
        check_prime(p)?;
        if level == 0 {
            return Err(Error::Invalid("modulus must be a positive power of p".into()));
        }
        let pm = p as i64;
        let a = a.rem_euclid(pm - 1);
        let b = b.rem_euclid(pm.pow(level - 1));
        let modulus = (p as u64).pow(level);
        let g = primitive_root(p);
        let omega_g = teichmuller(p, g as i64, cap)?;
        let omega_a = omega_g.pow(a as u64);
        let xi_pb = Cyclo::xi_pow(p, level, pm * b, cap);
        let step = xi_pb.embed(&omega_a) * &xi_pb;
        let mut table = vec![None; modulus as usize];
        let phi = (p as u64 - 1) * (p as u64).pow(level - 1);
        let mut r = 1u64;
        let mut v = Cyclo::from_padic(level, &Padic::one(p, cap));
        for _ in 0..phi {
            table[r as usize] = Some(v.clone());
            r = r * g % modulus;
            v = v * &step;
        }
        Ok(DirichletChar { p, level, a, b, cap, table })
    }

    pub fn trivial(p: u32, level: u32, cap: u32) -> Result<Self> {
        Self::new(p, level, 0, 0, cap)
    }

    /// The quadratic character modulo `p`.
    pub fn quadratic(p: u32, cap: u32) -> Result<Self> {
        Self::new(p, 1, (p as i64 - 1) / 2, 0, cap)
    }

    /// Every character modulo `p^level`.
    pub fn all(p: u32, level: u32, cap: u32) -> Result<Vec<Self>> {
        let mut out = Vec::new();
        for a in 0..(p as i64 - 1) {
            for b in 0..(p as i64).pow(level - 1) {
                out.push(Self::new(p, level, a, b, cap)?);
            }
        }
        Ok(out)
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn params(&self) -> (i64, i64) {
        (self.a, self.b)
    }

    pub fn modulus(&self) -> u64 {
        (self.p as u64).pow(self.level)
    }

    /// `χ(n)`, `None` when `p | n`.
    pub fn value(&self, n: i64) -> Option<Cyclo> {
        let r = n.rem_euclid(self.modulus() as i64) as usize;
        self.table[r].clone()
    }

    pub fn inverse(&self) -> Self {
        Self::new(self.p, self.level, -self.a, -self.b, self.cap).expect("parameters already validated")
    }

    /// Conductor `p^level` exactly.
    pub fn is_primitive(&self) -> bool {
        if self.level == 1 {
            self.a != 0
        } else {
            self.b % self.p as i64 != 0
        }
    }
}

#[derive(Serialize, Deserialize)]
struct CharJson {
    p: u32,
    level: u32,
    a: i64,
    b: i64,
}

impl Serialize for DirichletChar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CharJson { p: self.p, level: self.level, a: self.a, b: self.b }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for DirichletChar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = CharJson::deserialize(d)?;
        DirichletChar::new(j.p, j.level, j.a, j.b, crate::padic::DEFAULT_CAP).map_err(D::Error::custom)
    }
}
