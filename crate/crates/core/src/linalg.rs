//! Exact elimination over the rationals: a sparse reduced echelon form keyed by
//! monomials, plus small dense solvers for Gram systems and kernels.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::fock::{FockMonomial, GradedVector};
use crate::scalar::{self, ExactScalar};

/// Reduced row echelon basis of a subspace. Each row is normalised at its largest
/// monomial and vanishes at every other row's pivot.
#[derive(Clone, Default, Debug)]
pub struct Echelon {
    rows: Vec<GradedVector>,
    pivots: BTreeMap<FockMonomial, usize>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_vectors<'a>(vs: impl IntoIterator<Item = &'a GradedVector>) -> Self {
        let mut e = Self::new();
        for v in vs {
            e.insert(v);
        }
        e
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[GradedVector] {
        &self.rows
    }

    pub fn pivots(&self) -> impl Iterator<Item = &FockMonomial> {
        self.pivots.keys()
    }

    pub fn reduce(&self, v: &GradedVector) -> GradedVector {
        let hits: Vec<(usize, ExactScalar)> = v
            .iter()
            .filter_map(|(m, c)| self.pivots.get(m).map(|&i| (i, c.clone())))
            .collect();
        let mut r = v.clone();
        for (i, c) in hits {
            r.add_scaled(&self.rows[i], &-c);
        }
        r
    }

    pub fn contains(&self, v: &GradedVector) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v` to the span; returns whether the dimension grew.
    pub fn insert(&mut self, v: &GradedVector) -> bool {
        let r = self.reduce(v);
        let Some((lead, c)) = r.leading() else { return false };
        let lead = lead.clone();
        let inv = scalar::one() / c;
        let r = r.scaled(&inv);
        for row in self.rows.iter_mut() {
            let x = row.coefficient(&lead);
            if !x.is_zero() {
                row.add_scaled(&r, &-x);
            }
        }
        self.pivots.insert(lead, self.rows.len());
        self.rows.push(r);
        true
    }

    /// Rows whose pivot has weight at most `w`; by construction these span the
    /// part of the subspace whose leading terms stay at or below `w`.
    pub fn rows_with_pivot_weight_at_most(&self, w: u32) -> Vec<GradedVector> {
        self.pivots
            .iter()
            .filter(|(m, _)| m.weight() <= w)
            .map(|(_, &i)| self.rows[i].clone())
            .collect()
    }
}

/// Collects the monomials touched by `vs` in a fixed order.
fn coordinate_index<'a>(vs: impl IntoIterator<Item = &'a GradedVector>) -> BTreeMap<FockMonomial, usize> {
    let mut idx = BTreeMap::new();
    for v in vs {
        for (m, _) in v.iter() {
            let n = idx.len();
            idx.entry(m.clone()).or_insert(n);
        }
    }
    idx
}

pub fn to_dense(v: &GradedVector, idx: &BTreeMap<FockMonomial, usize>) -> Vec<ExactScalar> {
    let mut out = vec![scalar::zero(); idx.len()];
    for (m, c) in v.iter() {
        out[idx[m]] = c.clone();
    }
    out
}

/// Solves `A x = b` exactly. Free variables are set to zero; `None` if inconsistent.
pub fn solve(a: &[Vec<ExactScalar>], b: &[ExactScalar]) -> Option<Vec<ExactScalar>> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut m: Vec<Vec<ExactScalar>> =
        a.iter().zip(b).map(|(r, x)| r.iter().cloned().chain(std::iter::once(x.clone())).collect()).collect();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = scalar::one() / &m[r][c];
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..=cols {
                    let t = &m[r][j] * &f;
                    m[i][j] -= t;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    if m[r..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    let mut x = vec![scalar::zero(); cols];
    for (i, &c) in pivot_cols.iter().enumerate() {
        x[c] = m[i][cols].clone();
    }
    Some(x)
}

/// Coefficients `x` with `Σ x_i basis_i = v`, or `None` if `v` is outside the span.
pub fn express_in(v: &GradedVector, basis: &[GradedVector]) -> Option<Vec<ExactScalar>> {
    let idx = coordinate_index(basis.iter().chain(std::iter::once(v)));
    let cols: Vec<Vec<ExactScalar>> = basis.iter().map(|b| to_dense(b, &idx)).collect();
    let a: Vec<Vec<ExactScalar>> = (0..idx.len()).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
    let b = to_dense(v, &idx);
    if a.is_empty() {
        return if v.is_zero() { Some(vec![scalar::zero(); basis.len()]) } else { None };
    }
    solve(&a, &b)
}

/// Basis of `{c : Σ c_i images_i = 0}`.
pub fn left_kernel(images: &[GradedVector]) -> Vec<Vec<ExactScalar>> {
    let n = images.len();
    let idx = coordinate_index(images);
    let width = idx.len();
    let mut m: Vec<(Vec<ExactScalar>, Vec<ExactScalar>)> = images
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let mut tag = vec![scalar::zero(); n];
            tag[i] = scalar::one();
            (to_dense(v, &idx), tag)
        })
        .collect();
    let mut r = 0;
    for c in 0..width {
        let Some(p) = (r..n).find(|&i| !m[i].0[c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = scalar::one() / &m[r].0[c];
        let (prow, ptag) = (m[r].0.clone(), m[r].1.clone());
        for i in r + 1..n {
            if m[i].0[c].is_zero() {
                continue;
            }
            let f = &m[i].0[c] * &inv;
            for j in c..width {
                let t = &prow[j] * &f;
                m[i].0[j] -= t;
            }
            for j in 0..n {
                if !ptag[j].is_zero() {
                    let t = &ptag[j] * &f;
                    m[i].1[j] -= t;
                }
            }
        }
        r += 1;
    }
    m.into_iter().skip(r).map(|(_, tag)| tag).collect()
}

pub fn rank(vs: &[GradedVector]) -> usize {
    Echelon::from_vectors(vs).dim()
}

pub fn combine(coeffs: &[ExactScalar], vs: &[GradedVector]) -> GradedVector {
    let mut out = GradedVector::zero();
    for (c, v) in coeffs.iter().zip(vs) {
        out.add_scaled(v, c);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{frac, int};

    fn mono(parts: &[u8]) -> FockMonomial {
        FockMonomial::new(parts, 0, 0)
    }

    #[test]
    fn echelon_membership_and_rank() {
        let a = GradedVector::from_monomial(mono(&[2])).plus(&GradedVector::from_monomial(mono(&[1, 1])));
        let b = GradedVector::from_monomial(mono(&[1, 1]));
        let mut e = Echelon::new();
        assert!(e.insert(&a));
        assert!(e.insert(&b));
        assert!(!e.insert(&a.sub(&b)));
        assert!(e.contains(&GradedVector::from_monomial(mono(&[2]))));
        assert!(!e.contains(&GradedVector::from_monomial(mono(&[3]))));
        for row in e.rows() {
            let lead = row.leading().unwrap();
            assert_eq!(lead.1, &int(1));
        }
    }

    #[test]
    fn dense_solve_gram_system() {
        let a = vec![vec![int(5), int(3)], vec![int(3), frac(9, 2)]];
        let x = solve(&a, &[int(648), int(1296)]).unwrap();
        assert_eq!(x, vec![int(-72), int(336)]);
        assert!(solve(&[vec![int(1)], vec![int(2)]], &[int(1), int(3)]).is_none());
    }

    #[test]
    fn kernel_finds_the_dependency() {
        let a = GradedVector::from_monomial(mono(&[2]));
        let b = GradedVector::from_monomial(mono(&[1, 1]));
        let c = a.scaled(&int(2)).sub(&b);
        let k = left_kernel(&[a.clone(), b.clone(), c.clone()]);
        assert_eq!(k.len(), 1);
        assert!(combine(&k[0], &[a, b, c]).is_zero());
    }
}
