//! Seeded randomized property suites over small Heisenberg and lattice spaces.
//!
//! Draw `i` uses its own generator seeded with `seed + i`, so a failing draw can
//! be replayed alone and results do not depend on how draws are scheduled.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::exec::Execution;
use crate::fock::{inner_product, theta_involution, GradedVector, SpaceConfig};
use crate::fusion::span_equality;
use crate::identities::{build_e, build_j, random_vector};
use crate::report::{CheckReport, ReportBuilder};
use crate::scalar::{self, ExactScalar};
use crate::vertex::{borcherds_lhs, borcherds_rhs, skew_rhs, VertexEngine};
use crate::virasoro::apply_l;

/// Cutoff of the spaces the draws live in.
pub const DRAW_CUTOFF: u32 = 12;

#[derive(Clone, Copy, Debug)]
pub struct PropSettings {
    pub samples: usize,
    pub seed: u64,
    pub exec: Execution,
}

fn rng_for(seed: u64, i: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64))
}

/// One of `M(1)`, `V_L` with `k = 1`, `V_L` with `k = 2`.
pub fn draw_config(rng: &mut impl Rng) -> SpaceConfig {
    match rng.gen_range(0..3) {
        0 => SpaceConfig::heisenberg(DRAW_CUTOFF),
        1 => SpaceConfig::lattice(1, DRAW_CUTOFF),
        _ => SpaceConfig::lattice(2, DRAW_CUTOFF),
    }
}

/// A nonzero homogeneous vector of weight at most `max_weight`.
pub fn draw_vector(cfg: &SpaceConfig, max_weight: u32, rng: &mut impl Rng) -> Result<GradedVector> {
    loop {
        let w = rng.gen_range(0..=max_weight);
        let v = random_vector(cfg, w, rng)?;
        if !v.is_zero() {
            return Ok(v);
        }
    }
}

fn label(cfg: &SpaceConfig) -> String {
    if cfg.lattice_k == 0 {
        "M(1)".into()
    } else {
        format!("V_L k={}", cfg.lattice_k)
    }
}

/// Runs `draw` for every index and folds the outcome into one report item.
fn suite<F>(rb: &mut ReportBuilder, name: &str, s: &PropSettings, draw: F)
where
    F: Fn(&mut VertexEngine, &mut ChaCha8Rng) -> Result<Option<String>> + Sync + Send,
{
    let idx: Vec<usize> = (0..s.samples).collect();
    let out = s.exec.map(&idx, |&i| {
        let mut rng = rng_for(s.seed, i);
        let cfg = draw_config(&mut rng);
        let mut eng = VertexEngine::new(cfg);
        match draw(&mut eng, &mut rng) {
            Ok(None) => None,
            Ok(Some(msg)) => Some(format!("draw {i} ({}): {msg}", label(&cfg))),
            Err(e) => Some(format!("draw {i} ({}): error: {e}", label(&cfg))),
        }
    });
    let fails: Vec<String> = out.into_iter().flatten().collect();
    let computed = match fails.first() {
        None => format!("0 failures in {} draws", s.samples),
        Some(f) => format!("{} failures in {} draws, first {f}", fails.len(), s.samples),
    };
    rb.item(name, format!("0 failures in {} draws", s.samples), computed, fails.is_empty());
}

/// `[u_m, v_n] = Σ_i C(m,i) (u_i v)_{m+n-i}` and `θ(u_t v) = (θu)_t (θv)`.
pub fn borcherds_props(s: &PropSettings) -> CheckReport {
    let mut rb = ReportBuilder::new("borcherds-props", "commutator formula and the theta automorphism on random draws");
    suite(&mut rb, "commutator formula", s, |eng, rng| {
        let cfg = *eng.config();
        let u = draw_vector(&cfg, 3, rng)?;
        let v = draw_vector(&cfg, 3, rng)?;
        let w = draw_vector(&cfg, 3, rng)?;
        let (m, n) = (rng.gen_range(-2..=3), rng.gen_range(-2..=3));
        let l = borcherds_lhs(eng, &u, m, &v, n, &w)?;
        let r = borcherds_rhs(eng, &u, m, &v, n, &w)?;
        Ok((l != r).then(|| format!("[u_{m}, v_{n}]w differs")))
    });
    suite(&mut rb, "theta is an automorphism", s, |eng, rng| {
        let cfg = *eng.config();
        let u = draw_vector(&cfg, 4, rng)?;
        let v = draw_vector(&cfg, 4, rng)?;
        let t = rng.gen_range(-3..=5);
        let l = theta_involution(&eng.mode(&u, t, &v)?, &cfg);
        let r = eng.mode(&theta_involution(&u, &cfg), t, &theta_involution(&v, &cfg))?;
        Ok((l != r).then(|| format!("theta(u_{t}v) differs")))
    });
    rb.finish()
}

/// Skew symmetry and the weight/sector bookkeeping of single modes.
pub fn skew_props(s: &PropSettings) -> CheckReport {
    let mut rb = ReportBuilder::new("skew-props", "skew symmetry and weight/sector bookkeeping on random draws");
    suite(&mut rb, "skew symmetry", s, |eng, rng| {
        let cfg = *eng.config();
        let u = draw_vector(&cfg, 4, rng)?;
        let v = draw_vector(&cfg, 4, rng)?;
        let t = rng.gen_range(-2..=5);
        let l = eng.mode(&u, t, &v)?;
        let r = skew_rhs(eng, &u, t, &v)?;
        Ok((l != r).then(|| format!("u_{t}v differs")))
    });
    suite(&mut rb, "weight and sector of u_t v", s, |eng, rng| {
        let cfg = *eng.config();
        let u = draw_vector(&cfg, 4, rng)?;
        let v = draw_vector(&cfg, 4, rng)?;
        let t = rng.gen_range(-4..=6);
        let (wu, wv) = (u.max_weight().unwrap_or(0) as i64, v.max_weight().unwrap_or(0) as i64);
        let want = wu + wv - t as i64 - 1;
        for su in u.sectors() {
            for sv in v.sectors() {
                let x = eng.mode(&u.sector_component(su), t, &v.sector_component(sv))?;
                if x.is_zero() {
                    continue;
                }
                if !x.is_homogeneous() || x.max_weight() != Some(want as u32) {
                    return Ok(Some(format!("u_{t}v has weights {:?}, expected {want}", x.weights())));
                }
                if x.sectors() != [su + sv] {
                    return Ok(Some(format!("sectors {:?} from {su} + {sv}", x.sectors())));
                }
            }
        }
        Ok(None)
    });
    rb.finish()
}

/// `(u_n v, w) = (-1)^{wt u} Σ_i (v, (L(1)^i u)_{2 wt u - n - i - 2} w) / i!` and `L(n)^† = L(-n)`.
pub fn form_props(s: &PropSettings) -> CheckReport {
    let mut rb = ReportBuilder::new("form-props", "invariance of the bilinear form on random draws");
    suite(&mut rb, "invariance under modes", s, |eng, rng| {
        let cfg = *eng.config();
        let u = draw_vector(&cfg, 3, rng)?;
        let v = draw_vector(&cfg, 3, rng)?;
        let (wu, wv) = (u.max_weight().unwrap_or(0) as i32, v.max_weight().unwrap_or(0) as i32);
        let n = rng.gen_range((wu + wv - 7).max(-2)..=wu + wv - 1);
        let w = random_vector(&cfg, (wu + wv - n - 1) as u32, rng)?;
        let lhs = inner_product(&eng.mode(&u, n, &v)?, &w, &cfg);
        let mut rhs = scalar::zero();
        let mut li = u.clone();
        let mut fact = scalar::one();
        for i in 0..=wu {
            if i > 0 {
                li = apply_l(&cfg, 1, &li)?;
                fact *= scalar::int(i as i64);
            }
            if li.is_zero() {
                break;
            }
            let x = eng.mode(&li, 2 * wu - n - i - 2, &w)?;
            rhs += inner_product(&v, &x, &cfg) / &fact;
        }
        rhs *= scalar::int(scalar::sign(wu as i64));
        Ok((lhs != rhs).then(|| format!("(u_{n}v, w) = {} but adjoint side = {}", scalar::render(&lhs), scalar::render(&rhs))))
    });
    suite(&mut rb, "L(n) adjoint to L(-n)", s, |eng, rng| {
        let cfg = *eng.config();
        let v = draw_vector(&cfg, 5, rng)?;
        let wv = v.max_weight().unwrap_or(0) as i32;
        let n = rng.gen_range(-3..=wv.min(3));
        let w = random_vector(&cfg, (wv - n) as u32, rng)?;
        let a: ExactScalar = inner_product(&apply_l(&cfg, n, &v)?, &w, &cfg);
        let b = inner_product(&v, &apply_l(&cfg, -n, &w)?, &cfg);
        Ok((a != b).then(|| format!("(L({n})v, w) = {} vs {}", scalar::render(&a), scalar::render(&b))))
    });
    rb.finish()
}

/// Cases on which the reduced and the defining product spans are compared.
pub fn span_cases(cutoff: u32) -> Result<Vec<(String, SpaceConfig, GradedVector, GradedVector)>> {
    let plus = SpaceConfig::heisenberg_plus(cutoff);
    let l2 = SpaceConfig::lattice_plus(2, cutoff);
    Ok(vec![
        ("J.J in M(1)+".into(), plus, build_j(&plus)?, build_j(&plus)?),
        ("J.E in V_L+, k=2".into(), l2, build_j(&l2)?, build_e(&l2, 1)),
        ("E.E in V_L+, k=2".into(), l2, build_e(&l2, 1), build_e(&l2, 1)),
    ])
}

/// Reduced spanning set against the full `{x_n y}` definition.
pub fn span_props(cutoff: u32, exec: Execution) -> CheckReport {
    let mut rb = ReportBuilder::new("span-props", "reduced and defining product spans agree");
    match span_cases(cutoff) {
        Ok(cases) => {
            for (name, cfg, x, y) in cases {
                match span_equality(&cfg, &x, &y, cutoff, exec) {
                    Ok(d) => {
                        let got = d.map_or("equal".to_string(), |w| format!("differ at weight {w}"));
                        rb.item(&format!("{name} to weight {cutoff}"), "equal", got, d.is_none());
                    }
                    Err(e) => {
                        rb.error(&name, "equal", e);
                    }
                }
            }
        }
        Err(e) => {
            rb.error("cases", "built", e);
        }
    }
    rb.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Status;

    fn small(samples: usize) -> PropSettings {
        PropSettings { samples, seed: 7, exec: Execution::Parallel }
    }

    #[test]
    fn suites_pass_on_a_few_draws() {
        for r in [borcherds_props(&small(12)), skew_props(&small(12)), form_props(&small(12))] {
            assert_eq!(r.status, Status::Pass, "{}: {}", r.check_id, r.computed);
        }
    }

    #[test]
    fn draws_do_not_depend_on_scheduling() {
        let a = form_props(&PropSettings { exec: Execution::Sequential, ..small(6) });
        let b = form_props(&small(6));
        assert_eq!(a.computed, b.computed);
    }

    #[test]
    fn spans_agree_at_small_cutoff() {
        let r = span_props(9, Execution::Parallel);
        assert_eq!(r.status, Status::Pass, "{}", r.computed);
    }
}
