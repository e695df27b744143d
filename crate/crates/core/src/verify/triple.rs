use rand::Rng;

use crate::config::RunConfig;
use crate::error::Result;
use crate::iwasawa::AlgebraicChar;
use crate::padic::{Padic, Unram};
use crate::qexp::Basis;
use crate::report::CaseResult;
use crate::ring::Coeff;
use crate::triple::{
    delta_eval, euler_e, euler_e1, slot_character, verify_theta_m_identity, DeltaKernelSpec, EigenScalar, PrimeSlot,
    TripleEigenData, TripleWeights,
};

use super::{fail_case, irreducible_quadratic, random_form, random_padic, random_quadratic_unit, random_unit, rng_for};

/// The corrected representative identity for `k1, k2 <= 6` and `m <= 3`.
pub fn theta_m_cases(cfg: &RunConfig) -> Result<Vec<CaseResult>> {
    let (p, n) = (cfg.p, cfg.n);
    let cap = cfg.prec + 4;
    let mut rng = rng_for(cfg, "theta-m");
    let mut out = Vec::new();
    for k1 in 2..=6i64 {
        for k2 in 2..=6i64 {
            for m in 0..=3i64 {
                let w = TripleWeights::unbalanced(k1, k2, k1 + k2 + 2 * m)?;
                let desc = format!("p={p} n={n} k=({k1},{k2},{}) m={m}", w.k3);
                let s1 = random_form(&mut rng, p, n, k1, Basis::V, 0, cfg.window, 5, cfg.prec, cap)?;
                let s2 = random_form(&mut rng, p, n, k2, Basis::V, 0, cfg.window, 5, cfg.prec, cap)?;
                match verify_theta_m_identity(&w, &s1, &s2) {
                    Ok(r) => out.push(
                        CaseResult::new(desc, r.pass)
                            .detail(format!("{} of {} residual terms nonzero", r.nonzero_residual_terms, r.residual_terms)),
                    ),
                    Err(e) => out.push(fail_case(desc, e)),
                }
            }
        }
    }
    Ok(out)
}

fn quad_pair(rng: &mut rand_chacha::ChaCha8Rng, p: u32, poly: (i64, i64), digits: u32, cap: u32) -> Result<(Unram, Unram)> {
    let x = Unram::quadratic(p, poly.0, poly.1, random_padic(rng, p, digits, cap), random_padic(rng, p, digits, cap))?;
    let y = Unram::quadratic(p, poly.0, poly.1, random_padic(rng, p, digits, cap), random_padic(rng, p, digits, cap))?;
    Ok((x, y))
}

fn base_pair(rng: &mut rand_chacha::ChaCha8Rng, p: u32, digits: u32, cap: u32) -> (Unram, Unram) {
    (Unram::base(&random_padic(rng, p, digits, cap)), Unram::base(&random_padic(rng, p, digits, cap)))
}

/// Homogeneity of `Δ` in each slot, vanishing on coincident pairs and the
/// rational case.
pub fn delta_cases(cfg: &RunConfig) -> Result<Vec<CaseResult>> {
    let p = cfg.p;
    let cap = cfg.prec + 4;
    let mut rng = rng_for(cfg, "delta-homogeneity");
    let poly = irreducible_quadratic(p);
    let mut out = Vec::new();
    for degree in 1..=2usize {
        for case in 0..cfg.cases {
            let r: [AlgebraicChar; 3] =
                std::array::from_fn(|_| AlgebraicChar::new((0..degree).map(|_| rng.gen_range(-3..=3)).collect()));
            let nu = [rng.gen_range(-2..=2), rng.gen_range(-2..=2), rng.gen_range(-2..=2)];
            let spec = DeltaKernelSpec::new(p, r, nu)?;
            let mut pairs = Vec::with_capacity(3);
            for _ in 0..3 {
                pairs.push(if degree == 2 {
                    quad_pair(&mut rng, p, poly, cfg.prec, cap)?
                } else {
                    base_pair(&mut rng, p, cfg.prec, cap)
                });
            }
            let t = if degree == 2 {
                random_quadratic_unit(&mut rng, p, poly, cfg.prec, cap)
            } else {
                Unram::base(&random_unit(&mut rng, p, cfg.prec, cap))
            };
            let view = |ps: &[(Unram, Unram)]| -> [(Unram, Unram); 3] { std::array::from_fn(|i| ps[i].clone()) };
            let eval = |ps: &[(Unram, Unram); 3]| delta_eval(&spec, [(&ps[0].0, &ps[0].1), (&ps[1].0, &ps[1].1), (&ps[2].0, &ps[2].1)]);
            let base = eval(&view(&pairs));
            for slot in 0..3 {
                let desc = format!("degree={degree} case={case:03} slot={slot}");
                let mut scaled = view(&pairs);
                scaled[slot] = (scaled[slot].0.clone() * &t, scaled[slot].1.clone() * &t);
                let res = (|| -> Result<bool> {
                    let b = base.clone()?;
                    let got = eval(&scaled)?;
                    let factor = slot_character(&spec, slot).eval(&t)?.expect("units evaluate");
                    Ok((got - &(b * &factor)).is_zero())
                })();
                match res {
                    Ok(pass) => out.push(CaseResult::new(desc, pass)),
                    Err(e) => out.push(fail_case(desc, e)),
                }
            }
            // a repeated pair makes one determinant vanish
            let mut same = view(&pairs);
            same[1] = same[0].clone();
            let desc = format!("degree={degree} case={case:03} repeated pair");
            match eval(&same) {
                Ok(v) => out.push(CaseResult::new(desc, v.is_zero())),
                Err(e) => out.push(fail_case(desc, e)),
            }
        }
    }
    let empty = || AlgebraicChar::new(Vec::new());
    let spec = DeltaKernelSpec::new(p, [empty(), empty(), empty()], [0, 0, 0])?;
    let one = Unram::base(&Padic::one(p, cap));
    let v = delta_eval(&spec, [(&one, &one), (&one, &one), (&one, &one)])?;
    out.push(CaseResult::new("degree=0 rational".to_string(), (v - &one).is_zero()));
    Ok(out)
}

fn scalar(p: u32, x: i64, cap: u32) -> EigenScalar {
    EigenScalar::Base(Padic::from_int(p, x, cap))
}

fn constant_data(p: u32, w: TripleWeights, alpha: i64, beta: i64, beta_z: i64, cap: u32) -> TripleEigenData {
    TripleEigenData {
        p,
        weights: w,
        alpha_x: scalar(p, alpha, cap),
        beta_x: scalar(p, beta, cap),
        alpha_y: scalar(p, alpha, cap),
        beta_y: scalar(p, beta, cap),
        alpha_z: scalar(p, alpha, cap),
        beta_z: scalar(p, beta_z, cap),
    }
}

/// Euler factors: product against factors, degenerate eigenvalues, and two
/// closed-form instances.
pub fn euler_cases(cfg: &RunConfig) -> Result<Vec<CaseResult>> {
    let p = cfg.p;
    let cap = cfg.prec + 12;
    let mut rng = rng_for(cfg, "euler");
    let poly = irreducible_quadratic(p);
    let mut out = Vec::new();
    for case in 0..cfg.cases {
        let k1 = rng.gen_range(1..=6i64);
        let k2 = rng.gen_range(1..=6i64);
        let k3 = k1 + k2 + 2 * rng.gen_range(0..=3i64);
        let w = TripleWeights::new(k1, k2, k3)?;
        let mut pick = |ext: bool| {
            if ext {
                EigenScalar::Ext(random_quadratic_unit(&mut rng, p, poly, cfg.prec, cap))
            } else {
                EigenScalar::Base(random_unit(&mut rng, p, cfg.prec, cap))
            }
        };
        let ext = case % 2 == 1;
        let d = TripleEigenData {
            p,
            weights: w,
            alpha_x: pick(ext),
            beta_x: pick(false),
            alpha_y: pick(ext),
            beta_y: pick(false),
            alpha_z: pick(false),
            beta_z: pick(ext),
        };
        let other = PrimeSlot::Other { weights: vec![[k1, k2, k3], [2, 2, 2]] };
        for (name, slot) in [("p0", PrimeSlot::Distinguished), ("other", other)] {
            for (which, r) in [("E", euler_e(&slot, &d)), ("E1", euler_e1(&slot, &d))] {
                let desc = format!("case={case:03} k=({k1},{k2},{k3}) {which} at {name} product");
                match r {
                    Ok(v) => out.push(CaseResult::new(desc, (v.recompute() - &v.value).is_zero())),
                    Err(e) => out.push(fail_case(desc, e)),
                }
            }
        }
    }

    let w = TripleWeights::new(2, 2, 2)?;
    let d = constant_data(p, w, 1, 1, 0, cap);
    let one = Unram::base(&Padic::one(p, cap));
    for (which, r) in [("E", euler_e(&PrimeSlot::Distinguished, &d)), ("E1", euler_e1(&PrimeSlot::Distinguished, &d))] {
        let desc = format!("beta_z=0 {which} at p0 is 1");
        match r {
            Ok(v) => out.push(CaseResult::new(desc, (v.value - &one).is_zero())),
            Err(e) => out.push(fail_case(desc, e)),
        }
    }

    let d = constant_data(p, w, 1, 1, 1, cap);
    let pp = Padic::one(p, cap).mul_p_power(p, -2);
    let want = Unram::base(&(Padic::one(p, cap) - &pp).pow(4));
    let desc = "unit eigenvalues k=(2,2,2) E at p0".to_string();
    match euler_e(&PrimeSlot::Distinguished, &d) {
        Ok(v) => out.push(CaseResult::new(desc, (v.value - &want).is_zero())),
        Err(e) => out.push(fail_case(desc, e)),
    }

    let beta = random_unit(&mut rng, p, cfg.prec, cap);
    let mut d = constant_data(p, w, 1, 1, 1, cap);
    d.beta_z = EigenScalar::Base(beta.clone());
    let sq = beta.clone() * &beta;
    let want = (Padic::one(p, cap) - &sq.mul_p_power(p, -8)) * &(Padic::one(p, cap) - &sq.mul_p_power(p, -6));
    let slot = PrimeSlot::Other { weights: vec![[2, 2, 2], [2, 2, 2]] };
    let desc = "two embeddings k=(2,2,2) E1 at other prime".to_string();
    match euler_e1(&slot, &d) {
        Ok(v) => out.push(CaseResult::new(desc, (v.value - &Unram::base(&want)).is_zero())),
        Err(e) => out.push(fail_case(desc, e)),
    }
    Ok(out)
}
