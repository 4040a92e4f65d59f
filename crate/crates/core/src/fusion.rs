//! Product spans `U¹·U² = span{x_n y}` of Virasoro submodules and the lowest
//! weights of the summands they contain.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::error::{Result, VoaError};
use crate::exec::Execution;
use rustc_hash::FxHashMap;

use crate::fock::{enumerate_basis, fixed_subspace_basis, FockMonomial, GradedVector, SpaceConfig};
use crate::identities::{build_e, build_j};
use crate::linalg::{rank, Echelon};
use crate::report::{CheckReport, ReportBuilder, Status};
use crate::vertex::VertexEngine;
use crate::virasoro::{apply_l, primary_space, require_primary};

/// A subspace spanned by weight-homogeneous vectors, echelonized per weight.
#[derive(Clone, Debug, Default)]
pub struct GradedSubspace {
    parts: BTreeMap<u32, Echelon>,
}

impl GradedSubspace {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts each weight component separately; callers feed homogeneous vectors.
    pub fn insert(&mut self, v: &GradedVector) {
        for w in v.weights() {
            self.parts.entry(w).or_default().insert(&v.component(w));
        }
    }

    pub fn dim(&self, w: u32) -> usize {
        self.parts.get(&w).map_or(0, Echelon::dim)
    }

    pub fn dims(&self, max_weight: u32) -> Vec<usize> {
        (0..=max_weight).map(|w| self.dim(w)).collect()
    }

    pub fn basis(&self, w: u32) -> &[GradedVector] {
        self.parts.get(&w).map_or(&[], Echelon::rows)
    }

    pub fn weights(&self) -> impl Iterator<Item = u32> + '_ {
        self.parts.iter().filter(|(_, e)| e.dim() > 0).map(|(w, _)| *w)
    }

    pub fn contains(&self, v: &GradedVector) -> bool {
        v.weights().into_iter().all(|w| self.parts.get(&w).is_some_and(|e| e.contains(&v.component(w))))
    }

    /// First weight where the two subspaces differ.
    pub fn first_difference(&self, other: &Self) -> Option<u32> {
        let ws: BTreeSet<u32> = self.weights().chain(other.weights()).collect();
        ws.into_iter().find(|&w| {
            self.dim(w) != other.dim(w) || !self.basis(w).iter().all(|v| other.contains(v))
        })
    }

    /// Adds `L(-1)` and `L(-2)` images weight by weight up to `max_weight`.
    pub fn close_under_lowering(&mut self, cfg: &SpaceConfig, max_weight: u32) -> Result<()> {
        let Some(start) = self.weights().next() else { return Ok(()) };
        for w in start + 1..=max_weight {
            let mut new = Vec::new();
            for (n, src) in [(-1, w - 1), (-2, w.wrapping_sub(2))] {
                if src < start || src > max_weight {
                    continue;
                }
                for v in self.basis(src) {
                    new.push(apply_l(cfg, n, v)?);
                }
            }
            for v in &new {
                self.insert(v);
            }
        }
        Ok(())
    }

    /// Whether `L(1)` and `L(2)` map the subspace into itself.
    pub fn raising_stable(&self, cfg: &SpaceConfig) -> Result<bool> {
        for w in self.weights() {
            for v in self.basis(w) {
                for n in [1, 2] {
                    if !self.contains(&apply_l(cfg, n, v)?) {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

/// `L(1,0)`-submodule generated by a primary vector, truncated at `max_weight`.
pub fn descendant_closure(cfg: &SpaceConfig, primary: &GradedVector, max_weight: u32) -> Result<GradedSubspace> {
    require_primary(cfg, primary)?;
    let mut s = GradedSubspace::new();
    s.insert(primary);
    s.close_under_lowering(cfg, max_weight)?;
    Ok(s)
}

#[derive(Clone, Debug)]
pub struct ProductSpan {
    pub left: Vec<GradedVector>,
    pub right: Vec<GradedVector>,
    pub cutoff: u32,
    pub span: GradedSubspace,
}

/// All `x_n y` landing in weights `0..=cutoff`, one pair per task and one engine per worker.
fn products(cfg: &SpaceConfig, pairs: &[(&GradedVector, &GradedVector)], cutoff: u32, exec: Execution) -> Result<Vec<GradedVector>> {
    let out = exec.map_init(pairs, || VertexEngine::new(cfg.with_cutoff(cutoff)), |eng, &(x, y)| {
        eng.all_modes(x, y).into_values().collect::<Vec<_>>()
    });
    Ok(out.into_iter().flatten().collect())
}

/// The reduced spanning set: lowering descendants of `u_n v` for generating primaries `u`, `v`.
pub fn product_span(
    cfg: &SpaceConfig,
    left: &[GradedVector],
    right: &[GradedVector],
    cutoff: u32,
    exec: Execution,
) -> Result<ProductSpan> {
    cfg.check_weight(cutoff as i64)?;
    for p in left.iter().chain(right) {
        require_primary(cfg, p)?;
    }
    let pairs: Vec<_> = left.iter().flat_map(|x| right.iter().map(move |y| (x, y))).collect();
    let mut span = GradedSubspace::new();
    for v in products(cfg, &pairs, cutoff, exec)? {
        span.insert(&v);
    }
    span.close_under_lowering(cfg, cutoff)?;
    Ok(ProductSpan { left: left.to_vec(), right: right.to_vec(), cutoff, span })
}

/// Dimensions of the part of the configured space in the given sectors, weights `0..=cutoff`.
pub fn ambient_dims(cfg: &SpaceConfig, sectors: &BTreeSet<i32>, cutoff: u32) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for w in 0..=cutoff {
        let mut d = 0;
        for m in cfg.sectors(w) {
            if cfg.fixed_point {
                if m >= 0 && (sectors.contains(&m) || sectors.contains(&-m)) {
                    d += fixed_subspace_basis(cfg, w, m as u32)?.len();
                }
            } else if sectors.contains(&m) {
                d += enumerate_basis(cfg, w, m)?.len();
            }
        }
        out.push(d);
    }
    Ok(out)
}

fn sector_sums(left: &[GradedVector], right: &[GradedVector]) -> BTreeSet<i32> {
    let a: BTreeSet<i32> = left.iter().flat_map(GradedVector::sectors).collect();
    let b: BTreeSet<i32> = right.iter().flat_map(GradedVector::sectors).collect();
    a.iter().flat_map(|x| b.iter().map(move |y| x + y)).collect()
}

/// The defining span `{x_n y}` over bases of both closures, without any closure step.
///
/// Every `x_n y` lies in the sectors `s_x + s_y`, so weights whose span already
/// fills that part of the space are not computed again.
pub fn product_span_full(
    cfg: &SpaceConfig,
    left: &[GradedVector],
    right: &[GradedVector],
    cutoff: u32,
    exec: Execution,
) -> Result<ProductSpan> {
    cfg.check_weight(cutoff as i64)?;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for p in left {
        let c = descendant_closure(cfg, p, cutoff)?;
        xs.extend(c.weights().flat_map(|w| c.basis(w).to_vec()));
    }
    for p in right {
        let c = descendant_closure(cfg, p, cutoff)?;
        ys.extend(c.weights().flat_map(|w| c.basis(w).to_vec()));
    }
    let ambient = ambient_dims(cfg, &sector_sums(left, right), cutoff)?;
    xs.sort_by_key(|x| x.max_weight());
    let local = cfg.with_cutoff(cutoff);
    let mut span = GradedSubspace::new();
    let mut at = 0;
    while at < xs.len() {
        let open: BTreeSet<u32> = (0..=cutoff).filter(|&r| span.dim(r) < ambient[r as usize]).collect();
        if open.is_empty() {
            break;
        }
        let wx = xs[at].max_weight();
        let batch = xs[at..].iter().take_while(|x| x.max_weight() == wx).count();
        // Y(x, z) on each monomial is computed once and reused for every y
        let out = exec.map_init(&xs[at..at + batch], || VertexEngine::new(local), |eng, x| {
            let mut cache: FxHashMap<FockMonomial, GradedVector> = FxHashMap::default();
            let mut found = Vec::new();
            for y in &ys {
                let mut r = GradedVector::zero();
                for (my, cy) in y.iter() {
                    let s = cache.entry(my.clone()).or_insert_with(|| eng.series_on(x, my));
                    r.add_scaled(s, cy);
                }
                found.extend(r.weights().into_iter().filter(|w| open.contains(w)).map(|w| r.component(w)));
            }
            found
        });
        for v in out.iter().flatten() {
            span.insert(v);
        }
        at += batch;
    }
    Ok(ProductSpan { left: left.to_vec(), right: right.to_vec(), cutoff, span })
}

/// `|s|`-part of a vector: its components in sectors `s` and `-s`.
fn abs_sector_part(v: &GradedVector, s: u32) -> GradedVector {
    let s = s as i32;
    if s == 0 {
        v.sector_component(0)
    } else {
        v.sector_component(s).plus(&v.sector_component(-s))
    }
}

/// Primary multiplicities inside a span, keyed by weight and then `|sector|`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Support {
    pub primaries: BTreeMap<u32, BTreeMap<u32, usize>>,
    /// Whether every sector part of every spanning vector lies in the span.
    pub sector_graded: bool,
}

impl Support {
    pub fn weights(&self) -> BTreeSet<u32> {
        self.primaries.keys().copied().collect()
    }

    pub fn weights_in_sector(&self, s: u32) -> BTreeSet<u32> {
        self.primaries.iter().filter(|(_, m)| m.contains_key(&s)).map(|(w, _)| *w).collect()
    }

    pub fn sectors(&self) -> BTreeSet<u32> {
        self.primaries.values().flat_map(|m| m.keys().copied()).collect()
    }

    pub fn render(&self) -> String {
        let mut out = String::from("{");
        for (i, (w, m)) in self.primaries.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            let secs: Vec<String> = m.iter().map(|(s, c)| if *c == 1 { format!("s{s}") } else { format!("s{s}x{c}") }).collect();
            let _ = write!(out, "{w}[{}]", secs.join(" "));
        }
        out.push('}');
        out
    }
}

pub fn fusion_support(cfg: &SpaceConfig, span: &ProductSpan, exec: Execution) -> Result<Support> {
    let weights: Vec<u32> = span.span.weights().collect();
    let per_weight = exec.map(&weights, |&w| {
        let basis = span.span.basis(w);
        let prims = primary_space(cfg, basis);
        let sectors: BTreeSet<u32> = basis.iter().flat_map(|v| v.sectors()).map(i32::unsigned_abs).collect();
        let graded = basis.iter().all(|v| sectors.iter().all(|&s| span.span.contains(&abs_sector_part(v, s))));
        let mut found = BTreeMap::new();
        for &s in &sectors {
            let parts: Vec<GradedVector> = prims.iter().map(|p| abs_sector_part(p, s)).collect();
            let r = rank(&parts);
            if r > 0 {
                found.insert(s, r);
            }
        }
        (w, found, graded)
    });
    let mut sup = Support { sector_graded: true, ..Support::default() };
    for (w, found, graded) in per_weight {
        sup.sector_graded &= graded;
        if !found.is_empty() {
            sup.primaries.insert(w, found);
        }
    }
    Ok(sup)
}

/// Lowest weights `k²` with `|m - n| <= k <= m + n`.
pub fn window(m: u32, n: u32) -> BTreeSet<u32> {
    (m.abs_diff(n)..=m + n).map(|k| k * k).collect()
}

fn fmt_set(s: &BTreeSet<u32>) -> String {
    let v: Vec<String> = s.iter().map(u32::to_string).collect();
    format!("{{{}}}", v.join(", "))
}

/// Graded dimensions of `⊕ L(1, h)` for the given `h = n²/4` values with `4h` a square.
fn degenerate_dims(hs: &[u32], max_weight: u32) -> Vec<usize> {
    let p: Vec<usize> = crate::partition::partition_counts(max_weight as usize + 1)
        .iter()
        .map(|c| c.to_string().parse().unwrap_or(usize::MAX))
        .collect();
    let at = |n: i64| if n < 0 { 0 } else { p[n as usize] };
    (0..=max_weight as i64)
        .map(|w| {
            hs.iter()
                .map(|&h| {
                    let n = (4.0 * h as f64).sqrt().round() as i64;
                    at(w - h as i64) - at(w - h as i64 - n - 1)
                })
                .sum()
        })
        .collect()
}

/// `M^(4)·M^(4)` inside `M(1)^+`.
pub fn verify_fusion_eaa1(cutoff: u32, exec: Execution) -> CheckReport {
    let mut rb = ReportBuilder::new("fusion-eaa1", "M^(4).M^(4) = L(1,0) + M^(4) + L(1,16) inside M(1)+");
    let run = |rb: &mut ReportBuilder| -> Result<()> {
        let cfg = SpaceConfig::heisenberg_plus(cutoff);
        let j = build_j(&cfg)?;
        let ps = product_span(&cfg, std::slice::from_ref(&j), std::slice::from_ref(&j), cutoff, exec)?;
        let sup = fusion_support(&cfg, &ps, exec)?;
        let win = window(2, 2);
        let expected: BTreeSet<u32> = [0, 4, 16].into_iter().filter(|&h| h <= cutoff).collect();
        rb.item("support", fmt_set(&expected), fmt_set(&sup.weights()), sup.weights() == expected);
        rb.item("support inside window", fmt_set(&win), fmt_set(&sup.weights()), sup.weights().is_subset(&win));
        let missing: BTreeSet<u32> = win.difference(&sup.weights()).copied().collect();
        rb.push("window weights not witnessed", "reported only", fmt_set(&missing), Status::Pass);
        let want = degenerate_dims(&[0, 4, 16], cutoff);
        let got = ps.span.dims(cutoff);
        rb.item("graded dims = char L(1,0) + L(1,4) + L(1,16)", format!("{want:?}"), format!("{got:?}"), want == got);
        let stable = ps.span.raising_stable(&cfg)?;
        rb.item("span stable under L(1), L(2)", true, stable, stable);
        if cutoff < 16 {
            rb.push("cutoff covers the window", ">= 16", cutoff, Status::Inconclusive);
        }
        Ok(())
    };
    if let Err(e) = run(&mut rb) {
        rb.error("fusion-eaa1", "computed", e);
    }
    rb.finish()
}

/// `M^(4)·M^(k²)` inside `V_L^+` with `M^(k²)` generated by `E`.
pub fn verify_fusion_ee7(k: u32, cutoff: u32, exec: Execution) -> CheckReport {
    let mut rb = ReportBuilder::new("fusion-ee7", "M^(4).M^(k^2) has summands M^(k^2), L(1,(k+1)^2), L(1,(k+2)^2)");
    let run = |rb: &mut ReportBuilder| -> Result<()> {
        let cfg = SpaceConfig::lattice_plus(k, cutoff);
        let j = build_j(&cfg)?;
        let e = build_e(&cfg, 1);
        let ps = product_span(&cfg, std::slice::from_ref(&j), std::slice::from_ref(&e), cutoff, exec)?;
        let sup = fusion_support(&cfg, &ps, exec)?;
        let allowed: BTreeSet<u32> = [k * k, (k + 1) * (k + 1), (k + 2) * (k + 2)].into();
        let win = window(2, k);
        rb.item("support", format!("subset of {}", fmt_set(&allowed)), fmt_set(&sup.weights()), sup.weights().is_subset(&allowed));
        rb.item("support inside window", fmt_set(&win), fmt_set(&sup.weights()), sup.weights().is_subset(&win));
        let secs = sup.sectors();
        rb.item("sectors of primaries", "{1}", fmt_set(&secs), secs == BTreeSet::from([1]));
        rb.item("lowest summand M^(k^2) present", k * k, fmt_set(&sup.weights()), sup.weights().contains(&(k * k)));
        let stable = ps.span.raising_stable(&cfg)?;
        rb.item("span stable under L(1), L(2)", true, stable, stable);
        let top = (k + 2) * (k + 2);
        let not_seen: BTreeSet<u32> = allowed.difference(&sup.weights()).copied().collect();
        let status = if top > cutoff && !not_seen.is_empty() { Status::Inconclusive } else { Status::Pass };
        rb.push("allowed weights not witnessed", "reported only", fmt_set(&not_seen), status);
        Ok(())
    };
    if let Err(e) = run(&mut rb) {
        rb.error("fusion-ee7", "computed", e);
    }
    rb.finish()
}

/// Virasoro primaries of `N^m` (the `θ`-fixed part of sectors `±m`) up to `cutoff`.
pub fn nm_primaries(cfg: &SpaceConfig, m: u32, cutoff: u32) -> Result<Vec<GradedVector>> {
    let mut out = Vec::new();
    for w in 0..=cutoff {
        let basis = fixed_subspace_basis(cfg, w, m)?;
        if !basis.is_empty() {
            out.extend(primary_space(cfg, &basis));
        }
    }
    Ok(out)
}

/// Lowest weights of Virasoro summands of `N^s`.
fn nm_weights(k: u32, s: u32, cutoff: u32) -> BTreeSet<u32> {
    if s == 0 {
        (0u32..).map(|j| 4 * j * j).take_while(|&h| h <= cutoff).collect()
    } else {
        (k * s..).map(|j| j * j).take_while(|&h| h <= cutoff).collect()
    }
}

/// `N^m·N^n = N^{|m-n|} ⊕ N^{m+n}` inside `V_L^+`.
pub fn check_nm_products(k: u32, m: u32, n: u32, cutoff: u32, exec: Execution) -> CheckReport {
    let mut rb = ReportBuilder::new("fusion-nm", "N^m.N^n = N^(m-n) + N^(m+n) inside V_L+");
    let run = |rb: &mut ReportBuilder| -> Result<()> {
        if k == 0 || m == 0 || n == 0 {
            return Err(VoaError::InvalidConfig("k, m and n must be positive".into()));
        }
        let cfg = SpaceConfig::lattice_plus(k, cutoff);
        let left = nm_primaries(&cfg, m, cutoff)?;
        let right = if m == n { left.clone() } else { nm_primaries(&cfg, n, cutoff)? };
        let lw: Vec<u32> = left.iter().filter_map(GradedVector::max_weight).collect();
        rb.equal(&format!("primaries of N^{m} up to {cutoff}"), format!("{:?}", nm_weights(k, m, cutoff).into_iter().collect::<Vec<_>>()), format!("{lw:?}"));
        let lo = m.abs_diff(n);
        let hi = m + n;
        // every x_n y is θ-fixed and lies in sectors ±|m-n|, ±(m+n), so once the
        // span fills that space the remaining pairs cannot enlarge it
        let ambient = ambient_dims(&cfg, &sector_sums(&left, &right), cutoff)?;
        let mut pairs: Vec<(&GradedVector, &GradedVector)> = Vec::new();
        for (i, x) in left.iter().enumerate() {
            // skew symmetry puts y_n x in the lowering closure of the x_n y, so unordered pairs suffice when m = n
            let from = if m == n { i } else { 0 };
            pairs.extend(right[from..].iter().map(|y| (x, y)));
        }
        let cost = |p: &(&GradedVector, &GradedVector)| p.0.max_weight().unwrap_or(0) + p.1.max_weight().unwrap_or(0);
        pairs.sort_by_key(cost);
        let mut span = GradedSubspace::new();
        let mut used = 0;
        while used < pairs.len() && span.dims(cutoff) != ambient {
            let c = cost(&pairs[used]);
            let batch = pairs[used..].iter().take_while(|p| cost(p) == c).count();
            for v in products(&cfg, &pairs[used..used + batch], cutoff, exec)? {
                span.insert(&v);
            }
            span.close_under_lowering(&cfg, cutoff)?;
            used += batch;
        }
        let filled = span.dims(cutoff) == ambient;
        rb.push(
            "generator pairs computed",
            format!("at most {}", pairs.len()),
            format!("{used}{}", if filled { " (span fills the theta-fixed ambient sectors)" } else { "" }),
            Status::Pass,
        );
        let ps = ProductSpan { left: left.clone(), right, cutoff, span };
        let sup = fusion_support(&cfg, &ps, exec)?;
        let secs = sup.sectors();
        let want_secs: BTreeSet<u32> = [lo, hi].into_iter().filter(|&s| nm_weights(k, s, cutoff).first().is_some()).collect();
        rb.item("sectors of primaries", format!("subset of {}", fmt_set(&[lo, hi].into())), fmt_set(&secs), secs.is_subset(&[lo, hi].into()));
        rb.item("span is sector graded", true, sup.sector_graded, sup.sector_graded);
        for s in [lo, hi] {
            let allowed = nm_weights(k, s, cutoff);
            let got = sup.weights_in_sector(s);
            rb.item(&format!("primary weights in N^{s}"), format!("subset of {}", fmt_set(&allowed)), fmt_set(&got), got.is_subset(&allowed));
            match allowed.first() {
                Some(&h) => {
                    rb.item(&format!("N^{s} present (weight {h})"), true, got.contains(&h), got.contains(&h));
                }
                None => {
                    let h = if s == 0 { 0 } else { k * k * s * s };
                    rb.push(&format!("N^{s} present (weight {h})"), format!("cutoff >= {h}"), format!("cutoff {cutoff}"), Status::Inconclusive);
                }
            }
        }
        rb.push("support", fmt_set(&want_secs), sup.render(), Status::Pass);
        Ok(())
    };
    if let Err(e) = run(&mut rb) {
        rb.error("fusion-nm", "computed", e);
    }
    rb.finish()
}

/// Reduced and full spans agree as graded subspaces.
pub fn span_equality(cfg: &SpaceConfig, left: &GradedVector, right: &GradedVector, cutoff: u32, exec: Execution) -> Result<Option<u32>> {
    let reduced = product_span(cfg, std::slice::from_ref(left), std::slice::from_ref(right), cutoff, exec)?;
    let full = product_span_full(cfg, std::slice::from_ref(left), std::slice::from_ref(right), cutoff, exec)?;
    Ok(reduced.span.first_difference(&full.span))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vacuum_closure_dims() {
        let cfg = SpaceConfig::heisenberg_plus(8);
        let c = descendant_closure(&cfg, &GradedVector::vacuum(), 4).unwrap();
        assert_eq!(c.dims(4), vec![1, 0, 1, 1, 2]);
    }

    #[test]
    fn j_closure_dims() {
        let cfg = SpaceConfig::heisenberg_plus(8);
        let j = build_j(&cfg).unwrap();
        let c = descendant_closure(&cfg, &j, 8).unwrap();
        assert_eq!(c.dims(8)[4..], [1, 1, 2, 3, 5]);
    }

    #[test]
    fn non_primary_is_refused() {
        let cfg = SpaceConfig::heisenberg_plus(8);
        let w = apply_l(&cfg, -2, &GradedVector::vacuum()).unwrap();
        assert!(matches!(descendant_closure(&cfg, &w, 6), Err(VoaError::NotPrimary(_))));
    }

    #[test]
    fn vacuum_times_module_is_module() {
        let cfg = SpaceConfig::heisenberg_plus(9);
        let j = build_j(&cfg).unwrap();
        let ps = product_span(&cfg, &[GradedVector::vacuum()], std::slice::from_ref(&j), 9, Execution::Sequential).unwrap();
        let c = descendant_closure(&cfg, &j, 9).unwrap();
        assert_eq!(ps.span.first_difference(&c), None);
    }

    #[test]
    fn full_span_without_saturation() {
        // 1.J spans L(1,4), a proper part of M(1)+, so every pair is computed
        let cfg = SpaceConfig::heisenberg_plus(9);
        let j = build_j(&cfg).unwrap();
        let one = GradedVector::vacuum();
        let d = span_equality(&cfg, &one, &j, 9, Execution::Parallel).unwrap();
        assert_eq!(d, None);
        let full = product_span_full(&cfg, &[one], std::slice::from_ref(&j), 9, Execution::Parallel).unwrap();
        assert_eq!(full.span.dims(9), degenerate_dims(&[4], 9));
    }

    #[test]
    fn windows() {
        assert_eq!(window(2, 2), BTreeSet::from([0, 1, 4, 9, 16]));
        assert_eq!(window(2, 3), BTreeSet::from([1, 4, 9, 16, 25]));
    }

    #[test]
    fn degenerate_dims_match_closure() {
        let cfg = SpaceConfig::heisenberg_plus(10);
        let j = build_j(&cfg).unwrap();
        let c = descendant_closure(&cfg, &j, 10).unwrap();
        assert_eq!(c.dims(10), degenerate_dims(&[4], 10));
    }
}
