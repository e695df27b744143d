//! Disk projectors, the universal iterate of the Gauss–Manin connection and
//! its supporting identities.

mod certificate;
mod sympoly;

pub use certificate::{pdiviter_bound, pdiviter_certificate, CertificateEntry, MonomialSample, PdiviterReport};
pub use sympoly::{binom_lemma_lhs, binom_lemma_numeric, binom_lemma_rhs, SymPoly};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::iwasawa::{plan, IwasawaSeries, Plan, UnivChar, WeightKind, WeightPoint};
use crate::padic::{binom_general, factorial_valuation, padic_exp, teichmuller, Padic, INF};
use crate::qexp::NearlyForm;
use crate::ring::{Coeff, PadicModule};

/// Keep `a_ν (1+q)^ν` exactly when `ν ≡ gamma (mod p^n)`.
pub fn nabla_disk<C: Coeff>(f: &NearlyForm<C>, gamma: i64) -> Result<NearlyForm<C>> {
    let p = f.prime() as i64;
    if gamma.rem_euclid(p) == 0 {
        return Err(Error::NotUnit(format!("γ = {gamma} modulo {p}")));
    }
    let modulus = (p as u64).pow(f.level());
    Ok(f.project_residue(gamma.rem_euclid(modulus as i64) as u64, modulus))
}

/// `⊕_j W^{k+2j}`: forms indexed by their weight offset `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedNearly<C> {
    base: NearlyForm<C>,
    pieces: BTreeMap<u32, NearlyForm<C>>,
    error_floor: i64,
}

impl<C: Coeff> GradedNearly<C> {
    /// The zero element with the weight tag, level, basis and window of
    /// `template`.
    pub fn zero(template: &NearlyForm<C>) -> Self {
        GradedNearly { base: template.empty_like(), pieces: BTreeMap::new(), error_floor: INF }
    }

    pub fn from_form(f: NearlyForm<C>) -> Self {
        let mut g = Self::zero(&f);
        g.pieces.insert(0, f);
        g
    }

    pub fn base(&self) -> &NearlyForm<C> {
        &self.base
    }

    pub fn piece(&self, j: u32) -> Option<&NearlyForm<C>> {
        self.pieces.get(&j)
    }

    pub fn pieces(&self) -> &BTreeMap<u32, NearlyForm<C>> {
        &self.pieces
    }

    /// Every coefficient not stored is only known to have valuation at
    /// least this floor.
    pub fn error_floor(&self) -> i64 {
        self.error_floor
    }

    pub fn with_error_floor(mut self, f: i64) -> Self {
        self.error_floor = self.error_floor.min(f);
        self
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        out.error_floor = out.error_floor.min(other.error_floor);
        for (&j, f) in &other.pieces {
            let v = match out.pieces.remove(&j) {
                Some(old) => old.add(f)?,
                None => f.clone(),
            };
            out.pieces.insert(j, v);
        }
        Ok(out)
    }

    pub fn scale(&self, s: &C) -> Self {
        GradedNearly {
            base: self.base.clone(),
            pieces: self.pieces.iter().map(|(&j, f)| (j, f.scale(s))).collect(),
            error_floor: self.error_floor,
        }
    }

    /// `X ↦ ∇X / γ - X`, raising offsets by one on the first summand.
    pub fn step(&self, gamma_inv: &C) -> Result<Self> {
        let mut out = GradedNearly { base: self.base.clone(), pieces: BTreeMap::new(), error_floor: self.error_floor };
        for (&j, f) in &self.pieces {
            let up = f.nabla()?.scale(gamma_inv);
            out = out.add(&GradedNearly::single(&self.base, j + 1, up))?;
            out = out.add(&GradedNearly::single(&self.base, j, f.neg()))?;
        }
        Ok(out)
    }

    fn single(base: &NearlyForm<C>, j: u32, f: NearlyForm<C>) -> Self {
        let mut g = GradedNearly { base: base.clone(), pieces: BTreeMap::new(), error_floor: INF };
        g.pieces.insert(j, f);
        g
    }

    /// Zero within precision.
    pub fn is_zero(&self) -> bool {
        self.pieces.values().all(|f| f.is_zero())
    }

    /// Highest filtration index over all offsets.
    pub fn filtration_degree(&self) -> Option<u32> {
        self.pieces.values().filter_map(|f| f.filtration_degree()).max()
    }

    /// Sum of all offsets as a single grid over `(m, ν)`.
    pub fn collapse(&self) -> BTreeMap<(u32, u64), C> {
        let mut out: BTreeMap<(u32, u64), C> = BTreeMap::new();
        for f in self.pieces.values() {
            for (&k, c) in f.grid() {
                let v = match out.remove(&k) {
                    Some(old) => old + c,
                    None => c.clone(),
                };
                out.insert(k, v);
            }
        }
        out
    }
}

impl<C: PadicModule> GradedNearly<C> {
    /// Lower bound for the valuation of every coefficient (`None` if all are
    /// exactly zero).
    pub fn val_floor(&self) -> Option<i64> {
        self.pieces
            .values()
            .flat_map(|f| f.grid().values())
            .filter_map(|c| c.val_floor())
            .min()
    }

    /// Lower bound for the valuation of the collapsed grid, where pieces of
    /// different offsets with the same `(m, ν)` are summed.
    pub fn collapsed_val_floor(&self) -> Option<i64> {
        self.collapse().values().filter_map(|c| c.val_floor()).min()
    }
}

impl GradedNearly<Padic> {
    /// `s ⊗ self` with `s` an Iwasawa series.
    pub fn tensor(&self, s: &IwasawaSeries) -> GradedNearly<IwasawaSeries> {
        let lift = |f: &NearlyForm<Padic>| f.map_coeffs(|c| s.scale(c));
        GradedNearly {
            base: lift(&self.base),
            pieces: self.pieces.iter().map(|(&j, f)| (j, lift(f))).collect(),
            error_floor: if s.norm_floor() == INF || self.error_floor == INF {
                INF
            } else {
                self.error_floor + s.norm_floor()
            },
        }
    }
}

impl GradedNearly<IwasawaSeries> {
    /// Substitute a point for the exponent variable.
    pub fn specialize<R: PadicModule>(&self, pt: &WeightPoint<R>) -> Result<GradedNearly<R>> {
        let floor = self.error_floor;
        let conv = |f: &NearlyForm<IwasawaSeries>| -> Result<NearlyForm<R>> {
            let mut grid = BTreeMap::new();
            for (&key, c) in f.grid() {
                let v = c.specialize(pt)?;
                grid.insert(key, if floor == INF { v } else { v.cap_prec(floor) });
            }
            Ok(f.with_grid(grid))
        };
        let mut pieces = BTreeMap::new();
        for (&j, f) in &self.pieces {
            pieces.insert(j, conv(f)?);
        }
        Ok(GradedNearly { base: conv(&self.base)?, pieces, error_floor: floor })
    }
}

/// One representative `γ = ω(s) exp(jp)` of `(Z/p^n)^×` and `s(γ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExponentEntry {
    pub residue: u64,
    pub gamma: Padic,
    pub value: IwasawaSeries,
}

/// Serializable description of an exponent: `class` for the universal
/// exponent on the component `ω^class`, or `m` for a classical integer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentSpec {
    pub p: u32,
    pub n: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<i64>,
}

/// The exponent `s` of the universal iterate: a table `γ ↦ s(γ)` over the
/// representatives of `(Z/p^n)^×` and the handle `w'_n`.
#[derive(Clone, Debug)]
pub struct UnivExponent {
    p: u32,
    n: u32,
    class: i64,
    classical: Option<i64>,
    univ: UnivChar,
    w_prime: IwasawaSeries,
    table: Vec<ExponentEntry>,
}

impl UnivExponent {
    /// The universal exponent on the component `ω^class`.
    pub fn universal(p: u32, n: u32, class: i64, prec: u32) -> Result<Self> {
        Self::universal_from(UnivChar::new(p, n, prec)?, class)
    }

    /// The universal exponent built on a given character, so that its plan
    /// can be chosen by the caller.
    pub fn universal_from(univ: UnivChar, class: i64) -> Result<Self> {
        let (p, n) = (univ.prime(), univ.level());
        let w_prime = univ.w_prime().clone();
        Self::build(p, n, class.rem_euclid(p as i64 - 1), None, univ, w_prime)
    }

    /// The classical exponent `m` (constant series).
    pub fn classical(p: u32, n: u32, m: i64, prec: u32) -> Result<Self> {
        Self::classical_from(UnivChar::new(p, n, prec)?, m)
    }

    pub fn classical_from(univ: UnivChar, m: i64) -> Result<Self> {
        if m < 0 {
            return Err(Error::Invalid("classical exponents are natural numbers".into()));
        }
        let (p, n) = (univ.prime(), univ.level());
        let pl = univ.plan();
        let w_prime = IwasawaSeries::constant(p, n, pl.trunc, &Padic::from_int(p, m, pl.cap));
        Self::build(p, n, m.rem_euclid(p as i64 - 1), Some(m), univ, w_prime)
    }

    pub fn from_spec(spec: &ExponentSpec, prec: u32) -> Result<Self> {
        Self::from_spec_with(spec, UnivChar::new(spec.p, spec.n, prec)?)
    }

    pub fn from_spec_with(spec: &ExponentSpec, univ: UnivChar) -> Result<Self> {
        if (univ.prime(), univ.level()) != (spec.p, spec.n) {
            return Err(Error::LevelMismatch("exponent and character disagree on (p, n)".into()));
        }
        match (spec.class, spec.m) {
            (Some(a), None) => Self::universal_from(univ, a),
            (None, Some(m)) => Self::classical_from(univ, m),
            _ => Err(Error::Invalid("an exponent needs exactly one of class or m".into())),
        }
    }

    pub fn spec(&self) -> ExponentSpec {
        match self.classical {
            Some(m) => ExponentSpec { p: self.p, n: self.n, class: None, m: Some(m) },
            None => ExponentSpec { p: self.p, n: self.n, class: Some(self.class), m: None },
        }
    }

    fn build(p: u32, n: u32, class: i64, classical: Option<i64>, univ: UnivChar, w_prime: IwasawaSeries) -> Result<Self> {
        let pl = univ.plan();
        let modulus = (p as u64).pow(n);
        let block = (p as u64).pow(n - 1);
        let mut table = Vec::new();
        for s in 1..p as i64 {
            let omega = teichmuller(p, s, pl.cap)?;
            for j in 0..block {
                let e = padic_exp(&Padic::from_int(p, j as i64 * p as i64, pl.cap))?;
                let gamma = omega.clone() * &e;
                let residue = gamma.residue_mod(n)? % modulus;
                let value = match classical {
                    Some(m) => IwasawaSeries::constant(p, n, pl.trunc, &gamma.pow(m as u64)),
                    None => IwasawaSeries::one_plus_t_pow(p, n, pl.trunc, j, pl.cap).scale(&omega.pow(class as u64)),
                };
                table.push(ExponentEntry { residue, gamma, value });
            }
        }
        table.sort_by_key(|e| e.residue);
        Ok(UnivExponent { p, n, class, classical, univ, w_prime, table })
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn level(&self) -> u32 {
        self.n
    }

    pub fn class(&self) -> i64 {
        self.class
    }

    pub fn classical_value(&self) -> Option<i64> {
        self.classical
    }

    pub fn plan(&self) -> Plan {
        self.univ.plan()
    }

    pub fn table(&self) -> &[ExponentEntry] {
        &self.table
    }

    pub fn w_prime(&self) -> &IwasawaSeries {
        &self.w_prime
    }

    pub fn binom(&self, i: u32) -> Result<IwasawaSeries> {
        if self.classical.is_none() {
            if let Some(b) = self.univ.binom(i as usize) {
                return Ok(b.clone());
            }
        }
        binom_general(&self.w_prime, i)
    }

    /// `s(ν)` for a unit `ν`: `ω(ν)^class` times the universal character at
    /// `<ν>`, or `ν^m` for a classical exponent.
    pub fn eval(&self, nu: &Padic) -> Result<IwasawaSeries> {
        let pl = self.plan();
        if let Some(m) = self.classical {
            return Ok(IwasawaSeries::constant(self.p, self.n, pl.trunc, &nu.pow(m as u64)));
        }
        if !nu.is_unit() {
            return Err(Error::NotUnit(nu.to_string()));
        }
        let s = nu.residue_mod(1)?;
        let omega = teichmuller(self.p, s as i64, pl.cap)?;
        let angle = nu.checked_div(&omega)?;
        Ok(self.univ.eval(&angle)?.scale(&omega.pow(self.class as u64)))
    }

    /// The point `T' = exp(mp) - 1` where this exponent becomes `m`.
    pub fn classical_point(&self, m: i64) -> Result<WeightPoint<Padic>> {
        if self.classical.is_none() && (m - self.class).rem_euclid(self.p as i64 - 1) != 0 {
            return Err(Error::OutsideDisk(format!(
                "m = {m} is not on the component ω^{}",
                self.class
            )));
        }
        WeightPoint::classical(self.p, m, self.plan().cap)
    }
}

/// `A_i = Σ_γ s(γ) binom(w'_n, i) ((∇ - γ)/γ)^i ∇^{γ + p^n Z_p}`.
pub fn a_i_term(f: &NearlyForm<Padic>, s: &UnivExponent, i: u32) -> Result<GradedNearly<IwasawaSeries>> {
    check_inputs(f, s)?;
    let b = s.binom(i)?;
    let mut acc: Option<GradedNearly<IwasawaSeries>> = None;
    for entry in s.table() {
        let mut g = GradedNearly::from_form(nabla_disk(f, entry.residue as i64)?);
        let gamma_inv = entry.gamma.inv()?;
        for _ in 0..i {
            g = g.step(&gamma_inv)?;
        }
        let term = g.tensor(&(entry.value.clone() * &b));
        acc = Some(match acc {
            None => term,
            Some(a) => a.add(&term)?,
        });
    }
    Ok(acc.expect("the table is never empty"))
}

fn check_inputs(f: &NearlyForm<Padic>, s: &UnivExponent) -> Result<()> {
    if f.prime() != s.prime() {
        return Err(Error::PrimeMismatch(f.prime(), s.prime()));
    }
    if f.level() != s.level() {
        return Err(Error::LevelMismatch(format!("form of level {} and exponent of level {}", f.level(), s.level())));
    }
    if !matches!(f.weight().kind, WeightKind::Classical { .. }) {
        return Err(Error::Unsupported("the universal iterate needs a classical form weight".into()));
    }
    Ok(())
}

/// The truncated universal iterate with its certified tail.
#[derive(Clone, Debug)]
pub struct UnivIterate {
    pub value: GradedNearly<IwasawaSeries>,
    pub terms: u32,
    pub tail_floor: i64,
}

/// Number of terms `I` so that every omitted `A_i` has valuation at least
/// `prec` above the input: `i - v(i!) >= i - (i-1)/(p-1)`.
pub fn iterate_terms(p: u32, prec: u32) -> u32 {
    plan(p, 1, prec).terms
}

fn iterate_tail(p: u32, terms: u32) -> i64 {
    let i = terms as i64 + 1;
    let num = i * (p as i64 - 1) - (i - 1);
    let den = p as i64 - 1;
    num.div_euclid(den) + if num.rem_euclid(den) == 0 { 0 } else { 1 }
}

/// `∇^s F = Σ_{i<=I} A_i(F)` on the depleted input.
pub fn nabla_univ(f: &NearlyForm<Padic>, s: &UnivExponent, prec: u32) -> Result<UnivIterate> {
    nabla_univ_terms(f, s, iterate_terms(s.prime(), prec))
}

/// [`nabla_univ`] with the cutoff `I` given directly.
pub fn nabla_univ_terms(f: &NearlyForm<Padic>, s: &UnivExponent, terms: u32) -> Result<UnivIterate> {
    check_inputs(f, s)?;
    let fd = f.deplete();
    let mut acc: Option<GradedNearly<IwasawaSeries>> = None;
    let binoms = (0..=terms).map(|i| s.binom(i)).collect::<Result<Vec<_>>>()?;
    for entry in s.table() {
        let mut g = GradedNearly::from_form(nabla_disk(&fd, entry.residue as i64)?);
        let gamma_inv = entry.gamma.inv()?;
        for (i, b) in binoms.iter().enumerate() {
            if i > 0 {
                g = g.step(&gamma_inv)?;
            }
            if b.is_zero() && b.tail() == INF {
                continue;
            }
            let term = g.tensor(&(entry.value.clone() * b));
            acc = Some(match acc {
                None => term,
                Some(a) => a.add(&term)?,
            });
        }
    }
    let zero = GradedNearly::zero(&fd).tensor(&s.table()[0].value.zero_like());
    let value = acc.unwrap_or(zero);
    let input_floor = fd.grid().values().filter(|c| !c.is_exact_zero()).map(|c| c.val()).min().unwrap_or(INF);
    let exact = matches!(s.classical_value(), Some(m) if m <= terms as i64);
    let tail_floor = if exact || input_floor == INF {
        INF
    } else {
        input_floor + iterate_tail(s.prime(), terms)
    };
    Ok(UnivIterate { value: value.with_error_floor(tail_floor), terms, tail_floor })
}

/// The closed form `Σ_i c^i binom(w'_n, i) binom(k + w'_n - m - 1, i) i! ν^{-i} s(ν) a`
/// for a monomial `a (1+q)^ν B_{k,m}`, with or without the `ν^{-i}` factor,
/// as a collapsed grid.
pub fn closed_form_monomial(
    f: &NearlyForm<Padic>,
    s: &UnivExponent,
    terms: u32,
    with_nu_factor: bool,
) -> Result<BTreeMap<(u32, u64), IwasawaSeries>> {
    check_inputs(f, s)?;
    let k = f.classical_weight().expect("checked classical");
    let p = f.prime();
    let mut out: BTreeMap<(u32, u64), IwasawaSeries> = BTreeMap::new();
    let c = match f.basis() {
        crate::qexp::Basis::V => 2 * f.level() as i64,
        crate::qexp::Basis::W => 0,
    };
    for (&(m, nu), a) in f.deplete().grid() {
        let nu_p = Padic::from_int(p, nu as i64, a.cap().max(s.plan().cap));
        let s_nu = s.eval(&nu_p)?;
        let nu_inv = nu_p.inv()?;
        let x = s.w_prime().clone() + &s.w_prime().from_int_like(k - m as i64 - 1);
        let mut falling = s.w_prime().one_like();
        for i in 0..=terms {
            let b = s.binom(i)?;
            let mut coef = (b * &falling).mul_p_power(p, c * i as i64) * &s_nu;
            if with_nu_factor {
                coef = coef.scale(&nu_inv.pow(i as u64));
            }
            let coef = coef.scale(a);
            let key = (m + i, nu);
            let v = match out.remove(&key) {
                Some(old) => old + &coef,
                None => coef,
            };
            out.insert(key, v);
            falling = falling * &(x.clone() - &x.from_int_like(i as i64));
        }
    }
    Ok(out)
}

/// Which closed form the truncated series matches on a given input.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosedFormReport {
    pub with_nu_factor: bool,
    pub without_nu_factor: bool,
    /// Digits both sides are known to, after folding in the truncation tails.
    pub compared_to: i64,
}

/// Compare the collapsed universal iterate of `f` (in the geometric basis)
/// against both closed forms, within their certified tails.
pub fn closed_form_check(f: &NearlyForm<Padic>, s: &UnivExponent, prec: u32) -> Result<ClosedFormReport> {
    let f = f.to_basis(crate::qexp::Basis::V);
    let it = nabla_univ(&f, s, prec)?;
    let series = it.value.collapse();
    let input_floor = f.grid().values().filter(|c| !c.is_exact_zero()).map(|c| c.val()).min().unwrap_or(INF);
    // term i of the closed form has norm at least 2i - v(i!) over the input
    let closed_tail = if input_floor == INF {
        INF
    } else {
        input_floor + term_decay(s.prime(), it.terms as u64 + 1) + it.terms as i64 + 1
    };
    let floor = it.tail_floor.min(closed_tail);
    let mut out = ClosedFormReport { with_nu_factor: true, without_nu_factor: true, compared_to: floor };
    for with in [true, false] {
        let closed = closed_form_monomial(&f, s, it.terms, with)?;
        let keys: std::collections::BTreeSet<_> = closed.keys().chain(series.keys()).copied().collect();
        let zero = s.w_prime().zero_like();
        let ok = keys.into_iter().all(|k| {
            let a = closed.get(&k).unwrap_or(&zero);
            let b = series.get(&k).unwrap_or(&zero);
            (a.clone() - b).absorb_error(floor).is_zero()
        });
        if with {
            out.with_nu_factor = ok;
        } else {
            out.without_nu_factor = ok;
        }
    }
    Ok(out)
}

/// Valuation `i - v(i!)` lower bound used for the certified tails.
pub fn term_decay(p: u32, i: u64) -> i64 {
    i as i64 - factorial_valuation(i, p) as i64
}
