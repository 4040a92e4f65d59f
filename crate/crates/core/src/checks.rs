//! Check registry: every named verification, its configuration needs, and the
//! aggregate JSON document the CLI prints.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::characters::{verify_char_identities, verify_theta_identity};
use crate::error::{Result, VoaError};
use crate::exec::Execution;
use crate::fock::SpaceConfig;
use crate::fusion::{check_nm_products, verify_fusion_eaa1, verify_fusion_ee7};
use crate::golden::{self, GoldenFile};
use crate::identities::{
    app2_consistency, compute_j_ladder, e_relations_report, verify_j_ladder, verify_lemma_app1, verify_rearrangements,
    verify_x0_gram,
};
use crate::probe::{verify_eta_law, verify_s_defect};
use crate::props::{borcherds_props, form_props, skew_props, span_props, PropSettings};
use crate::report::{CheckReport, ReportBuilder, Status};
use crate::zhu::{verify_lemma_jj, verify_p_roots};

pub const CHECK_IDS: [&str; 19] = [
    "j-ladder",
    "app1",
    "x0-gram",
    "lemma-jj",
    "p-roots",
    "e-relations",
    "rearrangements",
    "app2",
    "char-m1plus",
    "theta-identity",
    "eta-s-law",
    "s-defect-demo",
    "fusion-eaa1",
    "fusion-ee7",
    "fusion-nm",
    "borcherds-props",
    "skew-props",
    "form-props",
    "span-props",
];

/// Terms summed by the modular probes.
pub const PROBE_TERMS: usize = 200;
/// Cutoff of the span-equality cases.
pub const SPAN_CUTOFF: u32 = 12;
/// Search bound for integer roots of `p`.
pub const ROOT_BOUND: i64 = 1000;

pub const LAMBDA_KEY: &str = "lambda";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub k: u32,
    pub cutoff: u32,
    /// q-series order; `cutoff + 1` when absent.
    pub order: Option<u32>,
    /// Empty means every registered check.
    pub checks: Vec<String>,
    pub samples: usize,
    pub rng_seed: u64,
    pub pin: bool,
    pub force: bool,
    #[serde(skip)]
    pub golden_path: Option<PathBuf>,
    #[serde(skip)]
    pub exec: Execution,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            k: 2,
            cutoff: 17,
            order: None,
            checks: Vec::new(),
            samples: 200,
            rng_seed: 0,
            pin: false,
            force: false,
            golden_path: None,
            exec: Execution::Parallel,
        }
    }
}

impl RunConfig {
    pub fn order(&self) -> u32 {
        self.order.unwrap_or(self.cutoff + 1)
    }

    /// Selected ids in registry order, rejecting unknown ones.
    pub fn selected(&self) -> Result<Vec<&'static str>> {
        if let Some(bad) = self.checks.iter().find(|c| *c != "all" && !CHECK_IDS.contains(&c.as_str())) {
            return Err(VoaError::UnknownCheck(bad.clone()));
        }
        if self.checks.is_empty() || self.checks.iter().any(|c| c == "all") {
            return Ok(CHECK_IDS.to_vec());
        }
        Ok(CHECK_IDS.iter().copied().filter(|id| self.checks.iter().any(|c| c == id)).collect())
    }

    pub fn golden_path(&self) -> PathBuf {
        self.golden_path.clone().unwrap_or_else(golden::default_path)
    }

    fn props(&self) -> PropSettings {
        PropSettings { samples: self.samples, seed: self.rng_seed, exec: self.exec }
    }
}

/// The document printed by `verify --format json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunOutput {
    pub version: u32,
    pub config: RunConfig,
    pub reports: Vec<CheckReport>,
}

impl RunOutput {
    pub fn failed(&self) -> bool {
        self.reports.iter().any(|r| r.status == Status::Fail)
    }

    pub fn inconclusive(&self) -> bool {
        self.reports.iter().any(|r| r.status == Status::Inconclusive)
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn to_table(&self) -> String {
        let w = self.reports.iter().map(|r| r.check_id.len()).max().unwrap_or(8).max(8);
        let mut out = format!("{:<w$}  {:<12}  {:>9}  description\n", "check", "status", "ms");
        for r in &self.reports {
            let st = match r.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
                Status::Inconclusive => "inconclusive",
            };
            out.push_str(&format!("{:<w$}  {:<12}  {:>9}  {}\n", r.check_id, st, r.runtime_ms, r.paper_ref));
        }
        out
    }
}

/// A report that only says the configured cutoff is too small.
fn too_small(id: &str, label: &str, need: u32, have: u32) -> CheckReport {
    let mut rb = ReportBuilder::new(id, label);
    rb.push("cutoff", format!(">= {need}"), have, Status::Inconclusive);
    rb.finish()
}

fn with_cutoff(id: &str, label: &str, need: u32, run: &RunConfig, f: impl FnOnce() -> CheckReport) -> CheckReport {
    if run.cutoff < need {
        too_small(id, label, need, run.cutoff)
    } else {
        f()
    }
}

/// `J`-relations of `E` for `k = 1, 2, 3` and the configured `k`, each at cutoff `k² + 8`.
fn e_relations_all(run: &RunConfig) -> CheckReport {
    let mut rb = ReportBuilder::new("e-relations", "relations of E = e^a + e^-a with the weight-four primary");
    let mut ks = vec![1, 2, 3];
    if run.k > 0 && !ks.contains(&run.k) {
        ks.push(run.k);
    }
    for k in ks {
        let need = k * k + 8;
        if run.cutoff < need {
            rb.push(&format!("k={k} cutoff"), format!(">= {need}"), run.cutoff, Status::Inconclusive);
            continue;
        }
        if let Err(e) = e_relations_report(k, &SpaceConfig::lattice_plus(k, need), &mut rb) {
            rb.error(&format!("k={k}"), "computed", e);
        }
    }
    rb.finish()
}

fn run_one(id: &str, run: &RunConfig, golden: Option<&GoldenFile>) -> CheckReport {
    let plus = |c: u32| SpaceConfig::heisenberg_plus(c);
    match id {
        "j-ladder" => with_cutoff(id, "ladder J_tJ", 8, run, || {
            let pinned = golden.and_then(|g| g.get(LAMBDA_KEY).ok().flatten());
            verify_j_ladder(&plus(8), pinned.as_ref()).0
        }),
        "app1" => with_cutoff(id, "projections of J_2J, J_1J, J_0J", 8, run, || verify_lemma_app1(&plus(8))),
        "x0-gram" => with_cutoff(id, "Gram system for X^0", 8, run, || verify_x0_gram(&plus(8))),
        "lemma-jj" => with_cutoff(id, "J * J in the Zhu algebra", 10, run, || verify_lemma_jj(&plus(10))),
        "p-roots" => verify_p_roots(ROOT_BOUND),
        "e-relations" => e_relations_all(run),
        "rearrangements" => {
            with_cutoff(id, "rearrangement identities", 12, run, || verify_rearrangements(&plus(12), run.samples, run.rng_seed))
        }
        "app2" => with_cutoff(id, "expansion of (X_4X)_2X", 12, run, || app2_consistency(&plus(12))),
        "char-m1plus" => verify_char_identities(run.order(), run.k),
        "theta-identity" => verify_theta_identity(run.order()),
        "eta-s-law" => verify_eta_law(PROBE_TERMS),
        "s-defect-demo" => verify_s_defect(PROBE_TERMS),
        "fusion-eaa1" => verify_fusion_eaa1(run.cutoff, run.exec),
        "fusion-ee7" => verify_fusion_ee7(run.k, run.cutoff, run.exec),
        "fusion-nm" => check_nm_products(run.k, 1, 1, run.cutoff, run.exec),
        "borcherds-props" => borcherds_props(&run.props()),
        "skew-props" => skew_props(&run.props()),
        "form-props" => form_props(&run.props()),
        "span-props" => with_cutoff(id, "reduced and defining product spans agree", SPAN_CUTOFF, run, || {
            span_props(SPAN_CUTOFF, run.exec)
        }),
        other => unreachable!("unregistered check {other}"),
    }
}

/// Computes the values that go into the golden file.
pub fn golden_values() -> Result<GoldenFile> {
    let lad = compute_j_ladder(&SpaceConfig::heisenberg_plus(8))?;
    let mut g = GoldenFile { version: 1, ..GoldenFile::default() };
    g.set(LAMBDA_KEY, &lad.lambda);
    Ok(g)
}

/// Runs the selected checks, pinning golden values first when asked.
pub fn run(cfg: &RunConfig) -> Result<RunOutput> {
    let ids = cfg.selected()?;
    let path = cfg.golden_path();
    if cfg.pin {
        golden::pin(&path, &golden_values()?, cfg.force)?;
    }
    let golden = golden::load(&path)?;
    let mut reports = cfg.exec.map(&ids, |id| run_one(id, cfg, golden.as_ref()));
    reports.sort_by(|a, b| a.check_id.cmp(&b.check_id));
    Ok(RunOutput { version: 1, config: cfg.clone(), reports })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_ids_are_rejected() {
        let cfg = RunConfig { checks: vec!["nope".into()], ..RunConfig::default() };
        assert!(matches!(cfg.selected(), Err(VoaError::UnknownCheck(_))));
    }

    #[test]
    fn selection_keeps_registry_order() {
        let cfg = RunConfig { checks: vec!["p-roots".into(), "j-ladder".into()], ..RunConfig::default() };
        assert_eq!(cfg.selected().unwrap(), vec!["j-ladder", "p-roots"]);
    }

    #[test]
    fn small_cutoff_is_inconclusive() {
        let cfg = RunConfig { cutoff: 6, checks: vec!["lemma-jj".into(), "app2".into()], ..RunConfig::default() };
        let out = run(&cfg).unwrap();
        assert!(out.reports.iter().all(|r| r.status == Status::Inconclusive));
        assert!(!out.failed());
    }
}
