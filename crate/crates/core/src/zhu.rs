//! Zhu's product `u * v`, the subspaces `O(V)` it is taken modulo, and the
//! polynomials describing `J * J` in the Zhu algebra of `M(1)^+`.

use num_traits::{Signed, Zero};

use crate::error::Result;
use crate::fock::{space_basis, GradedVector, SpaceConfig};
use crate::identities::{build_j, split_basis, split_vector};
use crate::linalg::Echelon;
use crate::report::{CheckReport, ReportBuilder, Status};
use crate::scalar::{self, binom, frac, int, rational_sqrt, render, ExactScalar};
use crate::vertex::VertexEngine;
use crate::virasoro::apply_l;

/// `u * v = Σ_j C(wt u, j) u_{j-1} v`, extended linearly in `u`.
pub fn zhu_product(eng: &mut VertexEngine, u: &GradedVector, v: &GradedVector) -> Result<GradedVector> {
    zhu_sum(eng, u, v, 1)
}

/// `u ∘ v = Σ_j C(wt u, j) u_{j-2} v`.
pub fn zhu_circle(eng: &mut VertexEngine, u: &GradedVector, v: &GradedVector) -> Result<GradedVector> {
    zhu_sum(eng, u, v, 2)
}

fn zhu_sum(eng: &mut VertexEngine, u: &GradedVector, v: &GradedVector, shift: i32) -> Result<GradedVector> {
    let mut out = GradedVector::zero();
    if v.is_zero() {
        return Ok(out);
    }
    // bilinear: split the left factor into homogeneous pieces
    for wu in u.weights() {
        let piece = u.component(wu);
        for j in 0..=wu {
            out.add_scaled(&eng.mode(&piece, j as i32 - shift, v)?, &binom(wu as i64, j));
        }
    }
    Ok(out)
}

/// Which subspace an `O`-type span is built in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpaceTag {
    /// `O(L(1,0))`, from `a ∘ b` with `a, b` vacuum descendants.
    VacuumModule,
    /// `(L(-1) + L(0)) M^(4)`.
    WeightFourModule,
    /// `O(M(1)^+)`, from `a ∘ b` over the whole space.
    Whole,
}

/// Echelon basis of the chosen subspace intersected with weights `<= max_weight`.
///
/// Circle products are generated with `wt a + wt b + 1 <= generation_bound`; rows
/// are kept only if their leading weight is at most `max_weight`.
pub fn o_subspace(cfg: &SpaceConfig, tag: SpaceTag, max_weight: u32, generation_bound: u32) -> Result<Echelon> {
    cfg.check_weight(generation_bound.max(max_weight) as i64)?;
    let mut eng = VertexEngine::new(*cfg);
    let mut all = Echelon::new();
    match tag {
        SpaceTag::WeightFourModule => {
            let j = build_j(cfg)?;
            for w in 4..max_weight {
                for v in split_basis(cfg, &j, w)?.1 {
                    let x = apply_l(cfg, -1, &v)?.plus(&v.scaled(&int(w as i64)));
                    all.insert(&x);
                }
            }
        }
        SpaceTag::VacuumModule | SpaceTag::Whole => {
            let j = build_j(cfg)?;
            let basis = |w: u32| -> Result<Vec<GradedVector>> {
                if tag == SpaceTag::Whole {
                    space_basis(cfg, w)
                } else {
                    Ok(split_basis(cfg, &j, w)?.0)
                }
            };
            for wa in 0..generation_bound {
                let left = basis(wa)?;
                for wb in 0..generation_bound - wa {
                    let right = basis(wb)?;
                    for a in &left {
                        for b in &right {
                            all.insert(&zhu_circle(&mut eng, a, b)?);
                        }
                    }
                }
            }
        }
    }
    Ok(Echelon::from_vectors(all.rows_with_pivot_weight_at_most(max_weight).iter()))
}

/// Dense univariate polynomial, coefficients from the constant term up.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(pub Vec<ExactScalar>);

impl Poly {
    pub fn new(mut c: Vec<ExactScalar>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Self(c)
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn eval(&self, x: &ExactScalar) -> ExactScalar {
        self.0.iter().rev().fold(scalar::zero(), |acc, c| acc * x + c)
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.0.is_empty() || o.0.is_empty() {
            return Poly(Vec::new());
        }
        let mut r = vec![scalar::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                r[i + j] += a * b;
            }
        }
        Poly::new(r)
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        let get = |p: &Poly, i: usize| p.0.get(i).cloned().unwrap_or_else(scalar::zero);
        Poly::new((0..n).map(|i| get(self, i) + get(o, i)).collect())
    }

    /// Quotient and remainder.
    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("nonzero divisor");
        let mut r = self.0.clone();
        if r.len() <= dd {
            return (Poly(Vec::new()), self.clone());
        }
        let mut q = vec![scalar::zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = &r[i + dd] / &d.0[dd];
            for (j, x) in d.0.iter().enumerate() {
                r[i + j] -= &c * x;
            }
            q[i] = c;
        }
        (Poly::new(q), Poly::new(r))
    }

    pub fn render_descending(&self) -> String {
        format!("({})", self.0.iter().rev().map(render).collect::<Vec<_>>().join(", "))
    }
}

/// `p` from the description of `J * J` modulo `O(L(1,0))`.
pub fn p_poly() -> Poly {
    Poly::new(vec![int(0), frac(-27, 70), frac(89, 10), frac(-212, 5), frac(1816, 35)])
}

pub fn q_poly() -> Poly {
    Poly::new(vec![frac(-27, 70), frac(89, 14), frac(-314, 35)])
}

/// `ω^{*i}` for `i = 0..=n`.
pub fn omega_powers(eng: &mut VertexEngine, n: usize) -> Result<Vec<GradedVector>> {
    let cfg = *eng.config();
    let omega = apply_l(&cfg, -2, &GradedVector::vacuum())?;
    let mut out = vec![GradedVector::vacuum()];
    for i in 1..=n {
        let next = zhu_product(eng, &omega, &out[i - 1])?;
        out.push(next);
    }
    Ok(out)
}

/// `Σ c_i ω^{*i}`.
pub fn star_poly(eng: &mut VertexEngine, p: &Poly) -> Result<GradedVector> {
    let pw = omega_powers(eng, p.0.len().saturating_sub(1))?;
    let mut out = GradedVector::zero();
    for (c, v) in p.0.iter().zip(&pw) {
        out.add_scaled(v, c);
    }
    Ok(out)
}

/// `Σ c_i ω * (ω * ( ... * J))`, the right-nested reading of `q(ω) * J`.
pub fn star_poly_on(eng: &mut VertexEngine, p: &Poly, j: &GradedVector) -> Result<GradedVector> {
    let cfg = *eng.config();
    let omega = apply_l(&cfg, -2, &GradedVector::vacuum())?;
    let mut cur = j.clone();
    let mut out = GradedVector::zero();
    for (i, c) in p.0.iter().enumerate() {
        if i > 0 {
            cur = zhu_product(eng, &omega, &cur)?;
        }
        out.add_scaled(&cur, c);
    }
    Ok(out)
}

/// `Σ c_i (ω^{*i}) * J`, the left-grouped reading.
pub fn star_poly_times(eng: &mut VertexEngine, p: &Poly, j: &GradedVector) -> Result<GradedVector> {
    let pw = omega_powers(eng, p.0.len().saturating_sub(1))?;
    let mut out = GradedVector::zero();
    for (c, v) in p.0.iter().zip(&pw) {
        out.add_scaled(&zhu_product(eng, v, j)?, c);
    }
    Ok(out)
}

pub struct JJSplit {
    pub product: GradedVector,
    pub u0: GradedVector,
    pub v0: GradedVector,
}

pub fn split_jj(cfg: &SpaceConfig) -> Result<JJSplit> {
    let j = build_j(cfg)?;
    let mut eng = VertexEngine::new(*cfg);
    let product = zhu_product(&mut eng, &j, &j)?;
    let mut u0 = GradedVector::zero();
    let mut v0 = GradedVector::zero();
    for w in product.weights() {
        let (u, v, _) = split_vector(cfg, &j, &product.component(w))?;
        u0.add_vec(&u);
        v0.add_vec(&v);
    }
    Ok(JJSplit { product, u0, v0 })
}

pub fn verify_lemma_jj(cfg: &SpaceConfig) -> CheckReport {
    verify_lemma_jj_scaled(cfg, &int(1))
}

/// Same check with `J` replaced by `s·J`; `p` scales by `s²`, `q` by `s`.
pub fn verify_lemma_jj_scaled(cfg: &SpaceConfig, s: &ExactScalar) -> CheckReport {
    let mut rb = ReportBuilder::new("lemma-jj", "J * J modulo O(L(1,0)) and (L(-1)+L(0))M^(4)");
    let run = |rb: &mut ReportBuilder| -> Result<()> {
        cfg.check_weight(8)?;
        let j = build_j(cfg)?.scaled(s);
        let mut eng = VertexEngine::new(*cfg);
        let product = zhu_product(&mut eng, &j, &j)?;
        let top = product.max_weight().unwrap_or(0);
        rb.item("J * J weights", "<= 8", top, top <= 8);
        let jj = build_j(cfg)?;
        let mut u0 = GradedVector::zero();
        let mut v0 = GradedVector::zero();
        for w in product.weights() {
            let (u, v, _) = split_vector(cfg, &jj, &product.component(w))?;
            u0.add_vec(&u);
            v0.add_vec(&v);
        }
        rb.item("split J * J = u0 + v0", "exact", "exact", u0.plus(&v0) == product);

        let p = p_poly();
        let q = q_poly();
        rb.equal("p coefficients", "(1816/35, -212/5, 89/10, -27/70, 0)", p.render_descending());
        rb.equal("q coefficients", "(-314/35, 89/14, -27/70)", q.render_descending());
        let s2 = s * s;
        let ps = Poly::new(p.0.iter().map(|c| c * &s2).collect());
        let qs = Poly::new(q.0.iter().map(|c| c * s).collect());

        let o_vac = o_subspace(cfg, SpaceTag::VacuumModule, 8, 8)?;
        let o_vac_wide = o_subspace(cfg, SpaceTag::VacuumModule, 8, 10)?;
        let vac_dim: usize = (0..=8).map(|w| split_basis(cfg, &jj, w).map(|b| b.0.len())).sum::<Result<usize>>()?;
        rb.equal("codim of O(L(1,0)) in weights <= 8", 5, vac_dim - o_vac.dim());
        rb.equal("dim O(L(1,0)) at weights <= 8, generation bound 8 vs 10", o_vac.dim(), o_vac_wide.dim());

        let pw = star_poly(&mut eng, &ps)?;
        let r1 = u0.sub(&pw);
        let res1 = o_vac.reduce(&r1);
        rb.item("u0 - p(w) in O(L(1,0))", "0", &res1, res1.is_zero());

        let o4 = o_subspace(cfg, SpaceTag::WeightFourModule, 8, 8)?;
        let qn = star_poly_on(&mut eng, &qs, &j)?;
        let res_nested = o4.reduce(&v0.sub(&qn));
        let qg = star_poly_times(&mut eng, &qs, &j)?;
        let res_grouped = o4.reduce(&v0.sub(&qg));
        rb.item("v0 - q(w)*J in (L(-1)+L(0))M^(4), right-nested", "0", &res_nested, res_nested.is_zero());
        rb.item("v0 - q(w)*J in (L(-1)+L(0))M^(4), left-grouped", "0", &res_grouped, res_grouped.is_zero());

        // the weaker statement the Zhu-algebra argument actually uses
        let o_all = o_subspace(cfg, SpaceTag::Whole, 8, 10)?;
        let rv = o_all.reduce(&v0.sub(&qg));
        rb.item("v0 - q(w)*J in O(M(1)+)", "0", &rv, rv.is_zero());
        let rall = o_all.reduce(&product.sub(&pw).sub(&qg));
        rb.item("J * J - p(w) - q(w)*J in O(M(1)+)", "0", &rall, rall.is_zero());
        let rj = o_all.reduce(&j);
        rb.item("J not in O(M(1)+)", "nonzero residual", if rj.is_zero() { "0".to_string() } else { "nonzero residual".to_string() }, !rj.is_zero());

        // on the top level of M(1, μ), o(J) = 4x^2 - x at x = μ^2 / 2
        let oj = Poly::new(vec![int(0), -int(1), int(4)]);
        let lhs = ps.add(&qs.mul(&Poly::new(oj.0.iter().map(|c| c * s).collect())));
        let rhs = oj.mul(&oj).mul(&Poly::new(vec![s2.clone()]));
        rb.item("p + q(4x^2 - x) = (4x^2 - x)^2", rhs.render_descending(), lhs.render_descending(), lhs == rhs);
        Ok(())
    };
    if let Err(e) = run(&mut rb) {
        rb.error("lemma-jj", "computed", e);
    }
    rb.finish()
}

pub fn verify_p_roots(bound: i64) -> CheckReport {
    let mut rb = ReportBuilder::new("p-roots", "roots of the Zhu-algebra polynomial p");
    let p = p_poly();
    rb.equal("p(0)", 0, render(&p.eval(&int(0))));
    rb.equal("p(1/4)", 0, render(&p.eval(&frac(1, 4))));
    let zeros: Vec<i64> = (1..=bound).flat_map(|n| [n, -n]).filter(|&n| p.eval(&int(n)).is_zero()).collect();
    rb.item(&format!("integer roots with 1 <= |n| <= {bound}"), "none", format!("{zeros:?}"), zeros.is_empty());
    let div = Poly::new(vec![int(0), frac(-1, 4), int(1)]);
    let (quad, rem) = p.divrem(&div);
    rb.item("remainder of p / (x(x - 1/4))", "0", rem.render_descending(), rem.0.is_empty());
    let monic_scale = int(1816) / quad.0.get(2).cloned().unwrap_or_else(scalar::one);
    let quad1816 = Poly::new(quad.0.iter().map(|c| c * &monic_scale).collect());
    rb.equal("quotient scaled to leading 1816", "(1816, -1030, 54)", quad1816.render_descending());
    if quad1816.0.len() == 3 {
        let (a, b, c) = (&quad1816.0[2], &quad1816.0[1], &quad1816.0[0]);
        let disc = b * b - int(4) * a * c;
        rb.equal("discriminant", "4*167161", format!("4*{}", render(&(&disc / int(4)))));
        let irr = rational_sqrt(&disc).is_none();
        rb.item("discriminant is not a rational square", "true", irr, irr);
        let sum = -b / a;
        let prod = c / a;
        // (515 ± √167161)/1816 have sum 1030/1816 and product (515² - 167161)/1816²
        let want_sum = frac(1030, 1816);
        let want_prod = frac(515 * 515 - 167161, 1816 * 1816);
        rb.item("root sum", render(&want_sum), render(&sum), sum == want_sum);
        rb.item("root product", render(&want_prod), render(&prod), prod == want_prod);
        let pos = disc.is_positive();
        rb.push("roots real", "true", pos, if pos { Status::Pass } else { Status::Fail });
    }
    rb.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vacuum_is_the_unit() {
        let cfg = SpaceConfig::heisenberg_plus(10);
        let mut e = VertexEngine::new(cfg);
        let j = build_j(&cfg).unwrap();
        assert_eq!(zhu_product(&mut e, &GradedVector::vacuum(), &j).unwrap(), j);
    }

    #[test]
    fn omega_star_omega() {
        let cfg = SpaceConfig::heisenberg_plus(10);
        let mut e = VertexEngine::new(cfg);
        let w = apply_l(&cfg, -2, &GradedVector::vacuum()).unwrap();
        let lhs = zhu_product(&mut e, &w, &w).unwrap();
        let mut rhs = apply_l(&cfg, -2, &w).unwrap();
        rhs.add_scaled(&apply_l(&cfg, -1, &w).unwrap(), &int(2));
        rhs.add_scaled(&w, &int(2));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn p_factorisation() {
        let p = p_poly();
        let f = Poly::new(vec![int(0), int(1)])
            .mul(&Poly::new(vec![frac(-1, 4), int(1)]))
            .mul(&Poly::new(vec![frac(54, 35), frac(-1030, 35), frac(1816, 35)]));
        assert_eq!(p, f);
    }
}
