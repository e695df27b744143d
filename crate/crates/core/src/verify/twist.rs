use rand::Rng;

use crate::config::RunConfig;
use crate::error::Result;
use crate::padic::Cyclo;
use crate::qexp::DirichletChar;
use crate::report::CaseResult;

use super::{fail_case, random_qexp, rng_for};

/// Averaged twist against the direct twist on random q-expansions with a
/// random primitive character, and `U ∘ θ_χ = 0`.
pub fn theta_chi_cases(cfg: &RunConfig) -> Result<Vec<CaseResult>> {
    let (p, n) = (cfg.p, cfg.n);
    let cap = cfg.prec + 4;
    let mut rng = rng_for(cfg, "theta-chi");
    let xi = Cyclo::xi(p, n, cap);
    let primitive: Vec<DirichletChar> = DirichletChar::all(p, n, cap)?.into_iter().filter(|c| c.is_primitive()).collect();
    let mut out = Vec::new();
    for case in 0..cfg.cases {
        let chi = &primitive[rng.gen_range(0..primitive.len())];
        let (a, b) = chi.params();
        let f = random_qexp(&mut rng, p, cfg.window, 8, cfg.prec, cap);
        let desc = format!("p={p} n={n} case={case:03} chi=({a},{b})");
        match f.theta_avg(chi, &xi) {
            Ok(avg) => {
                let direct = f.theta_direct(chi);
                out.push(CaseResult::new(format!("{desc} avg=direct"), avg.approx_eq(&direct)));
                out.push(CaseResult::new(format!("{desc} U-kernel"), direct.u_op().is_zero()));
            }
            Err(e) => out.push(fail_case(desc, e)),
        }
    }
    Ok(out)
}
