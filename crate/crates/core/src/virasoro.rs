//! Virasoro operators `L(n) = (1/2N) Σ_j :γ(j)γ(n-j):` at central charge one.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Result, VoaError};
use crate::fock::{space_basis, FockMonomial, GradedVector, SpaceConfig};
use crate::linalg;
use crate::report::{CheckReport, ReportBuilder};
use crate::scalar::{self, ExactScalar};
use crate::vertex::VertexEngine;

/// `γ(j)` on a monomial: the image and its integer coefficient.
pub(crate) fn gamma_on(j: i32, mon: &FockMonomial, n: i64) -> Option<(FockMonomial, i64)> {
    match j {
        j if j < 0 => Some((mon.with_part((-j) as u8), 1)),
        0 => {
            let c = n * mon.sector() as i64;
            (c != 0).then(|| (mon.clone(), c))
        }
        j => {
            let (rest, c) = mon.without_part(j as u8)?;
            Some((rest, j as i64 * n * c as i64))
        }
    }
}

/// `2N · L(n)` on one monomial, with integer coefficients.
fn twice_n_l(n: i32, mon: &FockMonomial, norm: i64) -> Vec<(FockMonomial, i64)> {
    let mut out = Vec::new();
    let mut push_pair = |a: i32, b: i32, mult: i64| {
        // a acts after b; b is the annihilator when there is one
        if let Some((m1, c1)) = gamma_on(b, mon, norm) {
            if let Some((m2, c2)) = gamma_on(a, &m1, norm) {
                out.push((m2, mult * c1 * c2));
            }
        }
    };
    if n < 0 {
        for j in n + 1..0 {
            push_pair(j, n - j, 1);
        }
        let top = mon.parts().first().copied().unwrap_or(0) as i32;
        for j in 0..=top {
            push_pair(n - j, j, 2);
        }
    } else if n > 0 {
        for j in 0..=n {
            push_pair(j, n - j, 1);
        }
        let top = mon.parts().first().copied().unwrap_or(0) as i32;
        for j in (n + 1)..=top {
            push_pair(n - j, j, 2);
        }
    } else {
        let s = mon.sector() as i64;
        out.push((mon.clone(), norm * norm * s * s + 2 * norm * mon.oscillator_weight() as i64));
    }
    out
}

pub fn apply_l(cfg: &SpaceConfig, n: i32, v: &GradedVector) -> Result<GradedVector> {
    if let Some(w) = v.max_weight() {
        cfg.check_weight(w as i64 - n as i64)?;
    }
    Ok(apply_l_unchecked(cfg, n, v))
}

pub(crate) fn apply_l_unchecked(cfg: &SpaceConfig, n: i32, v: &GradedVector) -> GradedVector {
    let norm = cfg.generator_norm as i64;
    let inv = scalar::frac(1, 2 * norm);
    let mut acc: BTreeMap<FockMonomial, ExactScalar> = BTreeMap::new();
    for (mon, c) in v.iter() {
        if n > 0 && (mon.weight() as i32) < n {
            continue;
        }
        for (m, x) in twice_n_l(n, mon, norm) {
            *acc.entry(m).or_insert_with(scalar::zero) += c * scalar::int(x);
        }
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|(m, c)| (m, c * &inv)).collect()
}

/// `L(-n_1) ... L(-n_s) v`, rightmost operator applied first.
pub fn apply_word(cfg: &SpaceConfig, word: &[i32], v: &GradedVector) -> Result<GradedVector> {
    let mut r = v.clone();
    for &n in word.iter().rev() {
        r = apply_l(cfg, n, &r)?;
    }
    Ok(r)
}

/// `L(-λ_1) ... L(-λ_s) v` for a partition `λ`.
pub fn descendant(cfg: &SpaceConfig, lambda: &[u8], v: &GradedVector) -> Result<GradedVector> {
    let word: Vec<i32> = lambda.iter().map(|&p| -(p as i32)).collect();
    apply_word(cfg, &word, v)
}

pub fn is_primary(cfg: &SpaceConfig, v: &GradedVector) -> bool {
    apply_l_unchecked(cfg, 1, v).is_zero() && apply_l_unchecked(cfg, 2, v).is_zero()
}

/// Basis of `ker L(1) ∩ ker L(2)` inside the span of `basis` (assumed homogeneous).
pub fn primary_space(cfg: &SpaceConfig, basis: &[GradedVector]) -> Vec<GradedVector> {
    // L(1)b and L(2)b sit in different weights, so one combined image suffices
    let images: Vec<GradedVector> =
        basis.iter().map(|b| apply_l_unchecked(cfg, 1, b).plus(&apply_l_unchecked(cfg, 2, b))).collect();
    let mut e = linalg::Echelon::new();
    for k in linalg::left_kernel(&images) {
        e.insert(&linalg::combine(&k, basis));
    }
    e.rows().to_vec()
}

/// Number of Virasoro primaries at each weight of the configured module.
pub fn isotypic_multiplicities(cfg: &SpaceConfig, max_weight: u32) -> Result<BTreeMap<u32, usize>> {
    cfg.check_weight(max_weight as i64)?;
    let mut out = BTreeMap::new();
    for w in 0..=max_weight {
        let n = primary_space(cfg, &space_basis(cfg, w)?).len();
        if n > 0 {
            out.insert(w, n);
        }
    }
    Ok(out)
}

/// `[L(m), L(n)] v = (m-n) L(m+n) v + (m³-m)/12 δ_{m+n,0} v` at `c = 1`.
pub fn virasoro_bracket_check(cfg: &SpaceConfig, m: i32, n: i32, v: &GradedVector) -> CheckReport {
    let mut rb = ReportBuilder::new("virasoro-bracket", "Virasoro relations at central charge one");
    let run = || -> Result<(GradedVector, GradedVector)> {
        let lhs = apply_l(cfg, m, &apply_l(cfg, n, v)?)?.sub(&apply_l(cfg, n, &apply_l(cfg, m, v)?)?);
        let mut rhs = apply_l(cfg, m + n, v)?.scaled(&scalar::int((m - n) as i64));
        if m + n == 0 {
            let mm = m as i64;
            rhs.add_scaled(v, &scalar::frac(mm * mm * mm - mm, 12));
        }
        Ok((lhs, rhs))
    };
    match run() {
        Ok((lhs, rhs)) => {
            rb.item(&format!("[L({m}),L({n})]v"), &rhs, &lhs, lhs == rhs);
        }
        Err(e) => {
            rb.error(&format!("[L({m}),L({n})]v"), "value", e);
        }
    }
    rb.finish()
}

/// `[L(m), J_n] = (3(m+1) - n) J_{m+n}` on every basis vector of weight `<= max_weight`.
pub fn lj_commutator_check(
    engine: &mut VertexEngine,
    j: &GradedVector,
    m: i32,
    n: i32,
    max_weight: u32,
) -> CheckReport {
    let cfg = *engine.config();
    let mut rb = ReportBuilder::new("lj-commutator", "commutator of L(m) with modes of the weight-four primary");
    let coeff = scalar::int((3 * (m + 1) - n) as i64);
    let mut bad = 0usize;
    let mut total = 0usize;
    let mut first_error = None;
    for w in 0..=max_weight {
        let Ok(basis) = space_basis(&cfg, w) else { break };
        for v in basis {
            let run = |engine: &mut VertexEngine| -> Result<bool> {
                let lhs = apply_l(&cfg, m, &engine.mode(j, n, &v)?)?.sub(&engine.mode(j, n, &apply_l(&cfg, m, &v)?)?);
                let rhs = engine.mode(j, m + n, &v)?.scaled(&coeff);
                Ok(lhs == rhs)
            };
            match run(engine) {
                Ok(true) => total += 1,
                Ok(false) => {
                    total += 1;
                    bad += 1;
                }
                Err(e) => {
                    first_error.get_or_insert(e.to_string());
                }
            }
        }
    }
    let label = format!("[L({m}),J_{n}] - {}J_{} on weight <= {max_weight}", scalar::render(&coeff), m + n);
    match first_error {
        Some(e) if total == 0 => rb.error(&label, "0 failures", e),
        _ => rb.item(&label, "0 failures", format!("{bad} failures of {total}"), bad == 0 && total > 0),
    };
    rb.finish()
}

pub(crate) fn require_primary(cfg: &SpaceConfig, v: &GradedVector) -> Result<()> {
    if is_primary(cfg, v) {
        Ok(())
    } else {
        Err(VoaError::NotPrimary(format!("{}", v)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::FockMonomial;

    #[test]
    fn l_minus_two_on_vacuum_is_the_conformal_vector() {
        let cfg = SpaceConfig::heisenberg(8);
        let omega = apply_l(&cfg, -2, &GradedVector::vacuum()).unwrap();
        let expected = GradedVector::from_term(FockMonomial::new(&[1, 1], 0, 0), scalar::frac(1, 2));
        assert_eq!(omega, expected);
        assert!(apply_l(&cfg, -1, &GradedVector::vacuum()).unwrap().is_zero());
    }

    #[test]
    fn l_zero_is_the_weight() {
        let cfg = SpaceConfig::lattice(2, 20);
        let m = FockMonomial::new(&[3, 1, 1], -1, 4);
        let v = GradedVector::from_monomial(m.clone());
        assert_eq!(apply_l(&cfg, 0, &v).unwrap(), v.scaled(&scalar::int(m.weight() as i64)));
    }

    #[test]
    fn exponentials_are_primary() {
        for k in 1..=3 {
            let cfg = SpaceConfig::lattice(k, 20);
            let e = GradedVector::from_monomial(FockMonomial::new(&[], 1, k * k));
            assert!(is_primary(&cfg, &e));
        }
    }

    #[test]
    fn central_term_on_vacuum() {
        let cfg = SpaceConfig::heisenberg(8);
        let v = GradedVector::vacuum();
        let lhs = apply_l(&cfg, 2, &apply_l(&cfg, -2, &v).unwrap()).unwrap();
        assert_eq!(lhs, v.scaled(&scalar::frac(1, 2)));
    }

    #[test]
    fn heisenberg_primaries_sit_at_squares() {
        let cfg = SpaceConfig::heisenberg(9);
        let mult = isotypic_multiplicities(&cfg, 9).unwrap();
        let weights: Vec<u32> = mult.keys().copied().collect();
        assert_eq!(weights, vec![0, 1, 4, 9]);
        assert!(mult.values().all(|&c| c == 1));
    }
}
