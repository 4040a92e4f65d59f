//! End-to-end acceptance: one line per criterion, each with its own time limit.

use std::time::{Duration, Instant};

use voa_core::characters::{verify_char_identities, verify_theta_identity};
use voa_core::exec::Execution;
use voa_core::fock::SpaceConfig;
use voa_core::fusion::{check_nm_products, verify_fusion_eaa1, verify_fusion_ee7};
use voa_core::golden;
use voa_core::identities::{
    app2_consistency, compute_j_ladder, vacuum_descendant, verify_e_relations, verify_lemma_app1, verify_rearrangements,
    verify_x0_gram,
};
use voa_core::probe::{verify_eta_law, verify_s_defect};
use voa_core::props::{borcherds_props, form_props, skew_props, span_props, PropSettings};
use voa_core::scalar::int;
use voa_core::zhu::{verify_lemma_jj, verify_p_roots};
use voa_core::{CheckReport, GradedVector, Status};

const SEED: u64 = 0;
const SAMPLES: usize = 200;

struct Outcome {
    ok: bool,
    detail: String,
}

fn reports_ok(rs: &[CheckReport]) -> Outcome {
    let bad: Vec<String> = rs.iter().filter(|r| r.status != Status::Pass).map(|r| format!("{} is {:?}", r.check_id, r.status)).collect();
    Outcome { ok: bad.is_empty(), detail: if bad.is_empty() { "all reports pass".into() } else { bad.join(", ") } }
}

fn criterion(n: u32, name: &str, limit: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let t = Instant::now();
    let out = f();
    let el = t.elapsed();
    let in_time = el <= limit;
    let ok = out.ok && in_time;
    println!(
        "criterion {n:>2} [{}] {name}: {} ({:.3} s, limit {} s)",
        if ok { "PASS" } else { "FAIL" },
        if in_time { out.detail } else { format!("{}; over the time limit", out.detail) },
        el.as_secs_f64(),
        limit.as_secs()
    );
    ok
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

#[test]
fn acceptance() {
    let plus8 = SpaceConfig::heisenberg_plus(8);
    let mut results = Vec::new();

    results.push(criterion(1, "J-ladder exactness at cutoff 8", secs(1), || {
        let lad = compute_j_ladder(&plus8).unwrap();
        let l3 = vacuum_descendant(&plus8, &[3]).unwrap();
        let checks = [
            ("J_7J = 54*1", lad.entries[&7] == GradedVector::vacuum().scaled(&int(54))),
            ("J_6J = 0", lad.entries[&6].is_zero()),
            ("J_4J = 216*L(-3)1", lad.entries[&4] == l3.scaled(&int(216))),
            ("L(1,0)-part of J_3J = -72 L(-4)1 + 336 L(-2)^2 1", lad.lambda1 == int(-72) && lad.lambda2 == int(336)),
        ];
        let bad: Vec<&str> = checks.iter().filter(|c| !c.1).map(|c| c.0).collect();
        Outcome { ok: bad.is_empty(), detail: if bad.is_empty() { "four identities hold".into() } else { format!("failed: {}", bad.join(", ")) } }
    }));

    results.push(criterion(2, "Gram values, both systems and direct projections", secs(5), || {
        reports_ok(&[verify_lemma_app1(&plus8)])
    }));

    results.push(criterion(3, "lambda nonzero and equal to the pinned value", secs(5), || {
        let a = compute_j_ladder(&plus8).unwrap().lambda;
        let b = compute_j_ladder(&plus8).unwrap().lambda;
        let pinned = golden::load(&golden::default_path()).unwrap().and_then(|g| g.get("lambda").unwrap());
        let ok = a != int(0) && a == b && pinned.as_ref() == Some(&a);
        Outcome { ok, detail: format!("lambda = {a}, pinned = {:?}", pinned.map(|p| p.to_string())) }
    }));

    results.push(criterion(4, "Gram entry 9/2 recomputed against the printed 2/4", secs(5), || {
        let r = verify_x0_gram(&plus8);
        let ok = r.status == Status::Pass
            && r.computed.contains("recomputed = 9/2")
            && r.expected.contains("2/4 (as printed)")
            && r.computed.contains("solution with recomputed entry = (-72, 336)");
        Outcome { ok, detail: format!("x0-gram {:?}", r.status) }
    }));

    results.push(criterion(5, "Lemma JJ memberships and p, q coefficients", secs(10), || {
        reports_ok(&[verify_lemma_jj(&SpaceConfig::heisenberg_plus(10))])
    }));

    results.push(criterion(6, "roots of p", secs(5), || reports_ok(&[verify_p_roots(100)])));

    results.push(criterion(7, "E-relations for k = 1, 2, 3 at cutoff k^2 + 8", secs(30), || {
        let rs: Vec<CheckReport> = (1..=3).map(|k| verify_e_relations(k, &SpaceConfig::lattice_plus(k, k * k + 8))).collect();
        reports_ok(&rs)
    }));

    results.push(criterion(8, "character identities to order 17", secs(30), || {
        reports_ok(&[verify_char_identities(18, 2), verify_theta_identity(18)])
    }));

    results.push(criterion(9, "eta law and the S-defect of the candidate spectrum", secs(1), || {
        reports_ok(&[verify_eta_law(200), verify_s_defect(200)])
    }));

    results.push(criterion(10, "fusion supports at cutoff 17, k = 2", secs(120), || {
        let ex = Execution::Parallel;
        reports_ok(&[verify_fusion_eaa1(17, ex), verify_fusion_ee7(2, 17, ex), check_nm_products(2, 1, 1, 17, ex)])
    }));

    results.push(criterion(11, "property suites, 200 seeded draws each, and span equality to cutoff 12", secs(600), || {
        let s = PropSettings { samples: SAMPLES, seed: SEED, exec: Execution::Parallel };
        reports_ok(&[borcherds_props(&s), skew_props(&s), form_props(&s), span_props(12, Execution::Parallel)])
    }));

    results.push(criterion(12, "rearrangement identities and the app2 fit", secs(60), || {
        let plus12 = SpaceConfig::heisenberg_plus(12);
        reports_ok(&[verify_rearrangements(&plus12, SAMPLES, SEED), app2_consistency(&plus12)])
    }));

    let failed: Vec<usize> = results.iter().enumerate().filter(|(_, ok)| !**ok).map(|(i, _)| i + 1).collect();
    println!("{} of {} criteria pass", results.len() - failed.len(), results.len());
    assert!(failed.is_empty(), "criteria failing: {failed:?}");
}
