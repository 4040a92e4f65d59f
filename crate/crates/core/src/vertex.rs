//! Modes `u_t w` of vertex operators on Fock monomials.
//!
//! Oscillator insertions are peeled off one at a time with the normal-ordered
//! expansion of `Y(γ(-n)u', z)`; what remains is either the vacuum or a bare
//! exponential `e^{mα}`, whose vertex operator is expanded directly. Results are
//! memoised per engine at monomial granularity.

use std::collections::BTreeMap;
use std::rc::Rc;

use num_traits::Zero;
use rustc_hash::FxHashMap;

use crate::error::Result;
use crate::fock::{FockMonomial, GradedVector, SpaceConfig};
use crate::partition::{self, multiplicities, submultisets};
use crate::report::{CheckReport, ReportBuilder};
use crate::scalar::{self, binom, ExactScalar};
use crate::virasoro::{apply_l, gamma_on};

type ModeKey = (FockMonomial, i32, FockMonomial);

pub struct VertexEngine {
    cfg: SpaceConfig,
    memo: FxHashMap<ModeKey, Rc<GradedVector>>,
    creation: FxHashMap<(i32, u32), Rc<Vec<(Vec<u8>, ExactScalar)>>>,
    series_memo: FxHashMap<(FockMonomial, FockMonomial), Rc<GradedVector>>,
}

impl VertexEngine {
    pub fn new(cfg: SpaceConfig) -> Self {
        Self { cfg, memo: FxHashMap::default(), creation: FxHashMap::default(), series_memo: FxHashMap::default() }
    }

    pub fn config(&self) -> &SpaceConfig {
        &self.cfg
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len() + self.series_memo.len()
    }

    pub fn clear(&mut self) {
        self.memo.clear();
        self.series_memo.clear();
    }

    /// Every nonzero `u_t v` with result weight within the cutoff, keyed by `t`.
    ///
    /// The power of `z` in `Y(u, z)v` is fixed by the weight of each term, so the
    /// whole expansion is built once and split by weight afterwards.
    pub fn all_modes(&mut self, u: &GradedVector, v: &GradedVector) -> BTreeMap<i32, GradedVector> {
        let mut out: BTreeMap<i32, GradedVector> = BTreeMap::new();
        for wu in u.weights() {
            let pu = u.component(wu);
            for wv in v.weights() {
                let pv = v.component(wv);
                let mut sum = GradedVector::zero();
                for (um, uc) in pu.iter() {
                    for (vm, vc) in pv.iter() {
                        let r = self.monomial_series(um, vm);
                        if !r.is_zero() {
                            sum.add_scaled(&r, &(uc * vc));
                        }
                    }
                }
                for w in sum.weights() {
                    let t = wu as i32 + wv as i32 - w as i32 - 1;
                    out.entry(t).or_default().add_vec(&sum.component(w));
                }
            }
        }
        out.retain(|_, x| !x.is_zero());
        out
    }

    /// `Σ_t u_t w` for one monomial `w`, truncated at the cutoff.
    pub fn series_on(&mut self, u: &GradedVector, w: &FockMonomial) -> GradedVector {
        let mut out = GradedVector::zero();
        for (um, uc) in u.iter() {
            let r = self.monomial_series(um, w);
            if !r.is_zero() {
                out.add_scaled(&r, uc);
            }
        }
        out
    }

    /// `Σ_t u_t w` truncated at the cutoff.
    fn monomial_series(&mut self, u: &FockMonomial, w: &FockMonomial) -> Rc<GradedVector> {
        let top = self.cfg.cutoff;
        if u.is_empty() {
            if u.sector() == 0 {
                let v = if w.weight() <= top { GradedVector::from_monomial(w.clone()) } else { GradedVector::zero() };
                return Rc::new(v);
            }
            return Rc::new(self.lattice_series(u.sector(), w));
        }
        let key = (u.clone(), w.clone());
        if let Some(v) = self.series_memo.get(&key) {
            return v.clone();
        }
        let n = u.parts()[0] as u32;
        let (rest, _) = u.without_part(n as u8).expect("part present");
        let mut out = GradedVector::zero();
        // creation half: γ(-p) for p >= n, applied last
        let inner = self.monomial_series(&rest, w);
        for (m, x) in inner.iter() {
            for p in n..=top.saturating_sub(m.weight()) {
                out.add_term(m.with_part(p as u8), x * binom(p as i64 - 1, n - 1));
            }
        }
        // annihilation half
        let norm = self.cfg.generator_norm as i64;
        let mut js: Vec<i32> = w.parts().iter().map(|&p| p as i32).collect();
        js.dedup();
        js.push(0);
        for j in js {
            let Some((w2, x)) = gamma_on(j, w, norm) else { continue };
            let c = binom((-j - 1) as i64, n - 1) * scalar::int(x);
            let inner = self.monomial_series(&rest, &w2);
            if !inner.is_zero() {
                out.add_scaled(&inner, &c);
            }
        }
        let v = Rc::new(out);
        self.series_memo.insert(key, v.clone());
        v
    }

    /// `Y(e^{mα}, z)(Q e^{nα})` truncated at the cutoff, powers of `z` dropped.
    fn lattice_series(&mut self, m: i32, w: &FockMonomial) -> GradedVector {
        let k2 = self.cfg.k2() as i64;
        let norm = self.cfg.generator_norm as i64;
        let n = w.sector();
        let s = m + n;
        let eps = scalar::int(scalar::sign(k2 * (m * n) as i64));
        let cw = multiplicities(w.parts());
        let mut out = GradedVector::zero();
        for (lam, keep) in submultisets(w.parts()) {
            let keep_w: i64 = keep.iter().map(|&p| p as i64).sum();
            let room = self.cfg.cutoff as i64 - k2 * (s * s) as i64 - keep_w;
            if room < 0 {
                continue;
            }
            let mut coef = eps.clone();
            for (p, &kp) in multiplicities(&lam).iter().enumerate().skip(1) {
                if kp > 0 {
                    coef *= scalar::int(-(m as i64) * norm).pow(kp as i32) * binom(cw[p] as i64, kp);
                }
            }
            for d in 0..=room as u32 {
                let table = self.creation_table(m, d);
                for (mu, c) in table.iter() {
                    let mut parts = keep.clone();
                    parts.extend_from_slice(mu);
                    out.add_term(FockMonomial::new(&parts, s, k2 as u32), &coef * c);
                }
            }
        }
        out
    }

    /// `u_t v`, rejecting any result component above the cutoff.
    pub fn mode(&mut self, u: &GradedVector, t: i32, v: &GradedVector) -> Result<GradedVector> {
        let (Some(wu), Some(wv)) = (u.max_weight(), v.max_weight()) else {
            return Ok(GradedVector::zero());
        };
        self.cfg.check_weight(wu as i64 + wv as i64 - t as i64 - 1)?;
        let mut out = GradedVector::zero();
        for (um, uc) in u.iter() {
            for (vm, vc) in v.iter() {
                let r = self.monomial_mode(um, t, vm);
                if !r.is_zero() {
                    out.add_scaled(&r, &(uc * vc));
                }
            }
        }
        Ok(out)
    }

    /// `γ(j) v` for any integer `j`.
    pub fn gamma(&self, j: i32, v: &GradedVector) -> GradedVector {
        let n = self.cfg.generator_norm as i64;
        let mut out = GradedVector::zero();
        for (m, c) in v.iter() {
            if let Some((r, x)) = gamma_on(j, m, n) {
                out.add_term(r, c * scalar::int(x));
            }
        }
        out
    }

    fn monomial_mode(&mut self, u: &FockMonomial, t: i32, w: &FockMonomial) -> Rc<GradedVector> {
        let r = u.weight() as i64 + w.weight() as i64 - t as i64 - 1;
        if r < 0 {
            return Rc::new(GradedVector::zero());
        }
        if u.is_empty() {
            if u.sector() == 0 {
                let v = if t == -1 { GradedVector::from_monomial(w.clone()) } else { GradedVector::zero() };
                return Rc::new(v);
            }
            return Rc::new(self.lattice_mode(u.sector(), t, w));
        }
        let key = (u.clone(), t, w.clone());
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let v = Rc::new(self.peel(u, t, w, r as i32));
        self.memo.insert(key, v.clone());
        v
    }

    fn peel(&mut self, u: &FockMonomial, t: i32, w: &FockMonomial, r: i32) -> GradedVector {
        let n = u.parts()[0] as i32;
        let (rest, _) = u.without_part(n as u8).expect("part present");
        let mut out = GradedVector::zero();
        // creation half: j <= -n
        for j in (-r..=-n).rev() {
            let c = binom((-j - 1) as i64, (n - 1) as u32);
            let inner = self.monomial_mode(&rest, t - j - n, w);
            if inner.is_zero() {
                continue;
            }
            for (m, x) in inner.iter() {
                out.add_term(m.with_part((-j) as u8), x * &c);
            }
        }
        // annihilation half: γ(j) hits w first
        let norm = self.cfg.generator_norm as i64;
        let mut js: Vec<i32> = w.parts().iter().map(|&p| p as i32).collect();
        js.dedup();
        js.push(0);
        for j in js {
            let Some((w2, x)) = gamma_on(j, w, norm) else { continue };
            let c = binom((-j - 1) as i64, (n - 1) as u32) * scalar::int(x);
            let inner = self.monomial_mode(&rest, t - j - n, &w2);
            if !inner.is_zero() {
                out.add_scaled(&inner, &c);
            }
        }
        out
    }

    /// `(e^{mα})_t (Q e^{nα})`.
    fn lattice_mode(&mut self, m: i32, t: i32, w: &FockMonomial) -> GradedVector {
        let k2 = self.cfg.k2() as i64;
        let norm = self.cfg.generator_norm as i64;
        let n = w.sector();
        let s = m + n;
        let r = k2 * (m * m) as i64 + w.weight() as i64 - t as i64 - 1;
        let q = w.oscillator_weight() as i64;
        let eps = scalar::int(scalar::sign(k2 * (m * n) as i64));
        let mut out = GradedVector::zero();
        for (lam, keep) in submultisets(w.parts()) {
            let lam_w: i64 = lam.iter().map(|&p| p as i64).sum();
            let d = r - k2 * (s * s) as i64 - (q - lam_w);
            if d < 0 {
                continue;
            }
            // E^+ : each removed γ(-s) contributes -mN, times C(c_s, k_s)
            let cw = multiplicities(w.parts());
            let cl = multiplicities(&lam);
            let mut coef = eps.clone();
            for (p, &kp) in cl.iter().enumerate().skip(1) {
                if kp > 0 {
                    coef *= scalar::int(-(m as i64) * norm).pow(kp as i32) * binom(cw[p] as i64, kp);
                }
            }
            let table = self.creation_table(m, d as u32);
            for (mu, c) in table.iter() {
                let mut parts = keep.clone();
                parts.extend_from_slice(mu);
                out.add_term(FockMonomial::new(&parts, s, k2 as u32), &coef * c);
            }
        }
        out
    }

    /// Coefficients of `exp(Σ_s m γ(-s) z^s / s)` at `z^d`.
    fn creation_table(&mut self, m: i32, d: u32) -> Rc<Vec<(Vec<u8>, ExactScalar)>> {
        if let Some(t) = self.creation.get(&(m, d)) {
            return t.clone();
        }
        let mut rows = Vec::new();
        for mu in partition::partitions(d) {
            let mut c = scalar::one();
            for (p, &kp) in multiplicities(&mu).iter().enumerate().skip(1) {
                if kp > 0 {
                    c *= scalar::frac(m as i64, p as i64).pow(kp as i32)
                        / ExactScalar::from_integer(scalar::factorial(kp));
                }
            }
            rows.push((mu, c));
        }
        let t = Rc::new(rows);
        self.creation.insert((m, d), t.clone());
        t
    }
}

/// `u_t v` with a throwaway engine.
pub fn mode(u: &GradedVector, t: i32, v: &GradedVector, cfg: &SpaceConfig) -> Result<GradedVector> {
    VertexEngine::new(*cfg).mode(u, t, v)
}

/// Right-hand side of skew symmetry: `Σ_i (-1)^{t+i+1} L(-1)^i (v_{t+i} u) / i!`.
pub fn skew_rhs(engine: &mut VertexEngine, u: &GradedVector, t: i32, v: &GradedVector) -> Result<GradedVector> {
    let cfg = *engine.config();
    let top = u.max_weight().unwrap_or(0) as i32 + v.max_weight().unwrap_or(0) as i32 - t - 1;
    let mut out = GradedVector::zero();
    let mut fact = scalar::one();
    for i in 0..=top.max(-1) {
        if i > 0 {
            fact *= scalar::int(i as i64);
        }
        let mut x = engine.mode(v, t + i, u)?;
        for _ in 0..i {
            x = apply_l(&cfg, -1, &x)?;
        }
        let c = scalar::int(scalar::sign((t + i + 1) as i64)) / &fact;
        out.add_scaled(&x, &c);
    }
    Ok(out)
}

pub fn skew_symmetry_check(u: &GradedVector, v: &GradedVector, t: i32, cfg: &SpaceConfig) -> CheckReport {
    let mut engine = VertexEngine::new(*cfg);
    skew_symmetry_with(&mut engine, u, v, t)
}

pub fn skew_symmetry_with(engine: &mut VertexEngine, u: &GradedVector, v: &GradedVector, t: i32) -> CheckReport {
    let mut rb = ReportBuilder::new("skew-symmetry", "skew symmetry of vertex operators");
    let name = format!("u_{t}v");
    match engine.mode(u, t, v).and_then(|l| Ok((l, skew_rhs(engine, u, t, v)?))) {
        Ok((l, r)) => rb.item(&name, &r, &l, l == r),
        Err(e) => rb.error(&name, "value", e),
    };
    rb.finish()
}

/// `Σ_i C(m, i) (u_i v)_{m+n-i} w`.
pub fn borcherds_rhs(
    engine: &mut VertexEngine,
    u: &GradedVector,
    m: i32,
    v: &GradedVector,
    n: i32,
    w: &GradedVector,
) -> Result<GradedVector> {
    let top = u.max_weight().unwrap_or(0) as i32 + v.max_weight().unwrap_or(0) as i32;
    let mut out = GradedVector::zero();
    for i in 0..top {
        let c = binom(m as i64, i as u32);
        if c.is_zero() {
            continue;
        }
        let uv = engine.mode(u, i, v)?;
        if uv.is_zero() {
            continue;
        }
        out.add_scaled(&engine.mode(&uv, m + n - i, w)?, &c);
    }
    Ok(out)
}

pub fn borcherds_lhs(
    engine: &mut VertexEngine,
    u: &GradedVector,
    m: i32,
    v: &GradedVector,
    n: i32,
    w: &GradedVector,
) -> Result<GradedVector> {
    let vw = engine.mode(v, n, w)?;
    let uw = engine.mode(u, m, w)?;
    let a = engine.mode(u, m, &vw)?;
    let b = engine.mode(v, n, &uw)?;
    Ok(a.sub(&b))
}

pub fn borcherds_commutator_check(
    u: &GradedVector,
    m: i32,
    v: &GradedVector,
    n: i32,
    w: &GradedVector,
    cfg: &SpaceConfig,
) -> CheckReport {
    let mut engine = VertexEngine::new(*cfg);
    let mut rb = ReportBuilder::new("borcherds-commutator", "commutator formula for modes");
    let name = format!("[u_{m},v_{n}]w");
    let run = |e: &mut VertexEngine| -> Result<(GradedVector, GradedVector)> {
        Ok((borcherds_lhs(e, u, m, v, n, w)?, borcherds_rhs(e, u, m, v, n, w)?))
    };
    match run(&mut engine) {
        Ok((l, r)) => rb.item(&name, &r, &l, l == r),
        Err(e) => rb.error(&name, "value", e),
    };
    rb.finish()
}

/// `(a_m b)_n c` expanded by the iterate formula.
pub fn iterate_rhs(
    engine: &mut VertexEngine,
    a: &GradedVector,
    m: i32,
    b: &GradedVector,
    n: i32,
    c: &GradedVector,
) -> Result<GradedVector> {
    // truncation: a_j x vanishes once j >= wt a + wt x
    let wa = a.max_weight().unwrap_or(0) as i32;
    let wb = b.max_weight().unwrap_or(0) as i32;
    let wc = c.max_weight().unwrap_or(0) as i32;
    let mut out = GradedVector::zero();
    let limit = if m >= 0 { m } else { (wb + wc - n).max(wa + wc) };
    for i in 0..=limit {
        let coef = binom(m as i64, i as u32) * scalar::int(scalar::sign(i as i64));
        if coef.is_zero() {
            continue;
        }
        let mut term = GradedVector::zero();
        if n + i < wb + wc {
            let x = engine.mode(b, n + i, c)?;
            term.add_vec(&engine.mode(a, m - i, &x)?);
        }
        if i < wa + wc {
            let y = engine.mode(a, i, c)?;
            let z = engine.mode(b, m + n - i, &y)?;
            term.add_scaled(&z, &-scalar::int(scalar::sign(m as i64)));
        }
        out.add_scaled(&term, &coef);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(parts: &[u8], sector: i32, cfg: &SpaceConfig) -> GradedVector {
        GradedVector::from_monomial(FockMonomial::new(parts, sector, cfg.k2()))
    }

    #[test]
    fn all_modes_agree_with_single_modes() {
        for cfg in [SpaceConfig::heisenberg(9), SpaceConfig::lattice(1, 9), SpaceConfig::lattice(2, 11)] {
            let mut eng = VertexEngine::new(cfg);
            let mut single = VertexEngine::new(cfg);
            let u = v(&[2, 1], 1, &cfg).plus(&v(&[3], 1, &cfg).scaled(&scalar::frac(-2, 3)));
            let w = v(&[1, 1], -1, &cfg).plus(&v(&[2], -1, &cfg));
            let (wu, ww) = (u.max_weight().unwrap() as i32, w.max_weight().unwrap() as i32);
            let all = eng.all_modes(&u, &w);
            for t in (wu + ww - 1 - cfg.cutoff as i32)..=(wu + ww + 3) {
                let want = single.mode(&u, t, &w).unwrap();
                assert_eq!(all.get(&t).cloned().unwrap_or_default(), want, "t = {t}");
            }
        }
    }

    #[test]
    fn vacuum_modes() {
        let cfg = SpaceConfig::heisenberg(10);
        let w = v(&[2, 1], 0, &cfg);
        let one = GradedVector::vacuum();
        assert_eq!(mode(&one, -1, &w, &cfg).unwrap(), w);
        assert!(mode(&one, 0, &w, &cfg).unwrap().is_zero());
        // u_{-1} 1 = u
        assert_eq!(mode(&w, -1, &one, &cfg).unwrap(), w);
        assert!(mode(&w, 0, &one, &cfg).unwrap().is_zero());
    }

    #[test]
    fn heisenberg_field_modes_are_the_oscillators() {
        let cfg = SpaceConfig::lattice(1, 12);
        let g = v(&[1], 0, &cfg);
        let mut e = VertexEngine::new(cfg);
        let w = v(&[3, 1], 1, &cfg);
        for t in -3..4 {
            assert_eq!(e.mode(&g, t, &w).unwrap(), e.gamma(t, &w));
        }
    }

    #[test]
    fn exponential_products() {
        for k in 1..=3u32 {
            let cfg = SpaceConfig::lattice(k, 40);
            let ea = v(&[], 1, &cfg);
            let eb = v(&[], -1, &cfg);
            let t = 2 * (k * k) as i32 - 1;
            let r = mode(&ea, t, &eb, &cfg).unwrap();
            let sign = scalar::int(scalar::sign((k * k) as i64));
            assert_eq!(r, GradedVector::vacuum().scaled(&sign));
            // one step lower picks up γ(-1)
            let r2 = mode(&ea, t - 1, &eb, &cfg).unwrap();
            assert_eq!(r2, v(&[1], 0, &cfg).scaled(&sign));
        }
    }

    #[test]
    fn exponential_minus_one_mode_on_vacuum() {
        let cfg = SpaceConfig::lattice(2, 12);
        let ea = v(&[], 1, &cfg);
        assert_eq!(mode(&ea, -1, &GradedVector::vacuum(), &cfg).unwrap(), ea);
        assert_eq!(mode(&ea, -2, &GradedVector::vacuum(), &cfg).unwrap(), v(&[1], 1, &cfg));
    }

    #[test]
    fn cutoff_is_enforced() {
        let cfg = SpaceConfig::heisenberg(4);
        let g = v(&[1], 0, &cfg);
        assert!(mode(&g, -5, &GradedVector::vacuum(), &cfg).is_err());
    }

    #[test]
    fn conformal_vector_modes_are_virasoro() {
        let cfg = SpaceConfig::lattice(2, 14);
        let omega = apply_l(&cfg, -2, &GradedVector::vacuum()).unwrap();
        let w = v(&[2, 1], -1, &cfg);
        let mut e = VertexEngine::new(cfg);
        for n in -2..4 {
            assert_eq!(e.mode(&omega, n + 1, &w).unwrap(), apply_l(&cfg, n, &w).unwrap());
        }
    }
}
