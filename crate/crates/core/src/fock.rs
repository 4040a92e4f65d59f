//! Fock-space monomials, graded vectors, bases and the invariant bilinear form.
//!
//! A monomial `γ(-n_1)...γ(-n_r) e^{mα}` carries its parts in non-increasing order
//! together with the lattice sector `m`. The derived ordering compares weight first,
//! so the largest monomial of a vector is always one of its top-weight terms.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Result, VoaError};
use crate::partition::{self, multiplicities};
use crate::scalar::{self, ExactScalar};

pub type Parts = SmallVec<[u8; 12]>;

/// Which of the four spaces is being modelled, plus the weight cutoff.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceConfig {
    /// `N = (γ, γ)`; `2k²` on the lattice, `1` for the bare Heisenberg algebra.
    pub generator_norm: u32,
    /// `k` with `L = Zα`, `(α, α) = 2k²`; zero means no lattice sectors.
    pub lattice_k: u32,
    pub cutoff: u32,
    /// Restrict to the fixed points of the involution `θ`.
    pub fixed_point: bool,
}

impl SpaceConfig {
    pub fn heisenberg(cutoff: u32) -> Self {
        Self { generator_norm: 1, lattice_k: 0, cutoff, fixed_point: false }
    }

    pub fn heisenberg_plus(cutoff: u32) -> Self {
        Self { fixed_point: true, ..Self::heisenberg(cutoff) }
    }

    pub fn lattice(k: u32, cutoff: u32) -> Self {
        Self { generator_norm: 2 * k * k, lattice_k: k, cutoff, fixed_point: false }
    }

    pub fn lattice_plus(k: u32, cutoff: u32) -> Self {
        Self { fixed_point: true, ..Self::lattice(k, cutoff) }
    }

    pub fn validate(&self) -> Result<()> {
        if self.cutoff > 200 {
            return Err(VoaError::InvalidConfig(format!("cutoff {} is too large", self.cutoff)));
        }
        let expected = if self.lattice_k == 0 { 1 } else { 2 * self.lattice_k * self.lattice_k };
        if self.generator_norm != expected {
            return Err(VoaError::InvalidConfig(format!(
                "generator norm {} does not match k = {} (expected {})",
                self.generator_norm, self.lattice_k, expected
            )));
        }
        Ok(())
    }

    pub fn k2(&self) -> u32 {
        self.lattice_k * self.lattice_k
    }

    pub fn norm(&self) -> ExactScalar {
        scalar::int(self.generator_norm as i64)
    }

    pub fn with_cutoff(&self, cutoff: u32) -> Self {
        Self { cutoff, ..*self }
    }

    /// Sectors `m` with a nonzero space at `weight`.
    pub fn sectors(&self, weight: u32) -> Vec<i32> {
        if self.lattice_k == 0 {
            return vec![0];
        }
        let k2 = self.k2();
        let mut out = vec![0];
        let mut m = 1i32;
        while k2 * (m * m) as u32 <= weight {
            out.push(m);
            out.push(-m);
            m += 1;
        }
        out.sort();
        out
    }

    pub fn check_weight(&self, w: i64) -> Result<()> {
        if w > self.cutoff as i64 {
            Err(VoaError::CutoffExceeded { requested: w, cutoff: self.cutoff })
        } else {
            Ok(())
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FockMonomial {
    weight: u32,
    sector: i32,
    parts: Parts,
}

impl FockMonomial {
    pub fn new(parts: &[u8], sector: i32, k2: u32) -> Self {
        let mut p: Parts = parts.iter().copied().filter(|&x| x > 0).collect();
        p.sort_unstable_by(|a, b| b.cmp(a));
        let weight = p.iter().map(|&x| x as u32).sum::<u32>() + k2 * (sector * sector) as u32;
        Self { weight, sector, parts: p }
    }

    pub fn vacuum() -> Self {
        Self { weight: 0, sector: 0, parts: Parts::new() }
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn sector(&self) -> i32 {
        self.sector
    }

    pub fn parts(&self) -> &[u8] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn with_part(&self, p: u8) -> Self {
        let mut parts = self.parts.clone();
        let pos = parts.iter().position(|&x| x < p).unwrap_or(parts.len());
        parts.insert(pos, p);
        Self { weight: self.weight + p as u32, sector: self.sector, parts }
    }

    /// Removes one copy of part `p`, returning its multiplicity before removal.
    pub fn without_part(&self, p: u8) -> Option<(Self, u32)> {
        let first = self.parts.iter().position(|&x| x == p)?;
        let count = self.parts[first..].iter().take_while(|&&x| x == p).count() as u32;
        let mut parts = self.parts.clone();
        parts.remove(first);
        Some((Self { weight: self.weight - p as u32, sector: self.sector, parts }, count))
    }

    pub fn with_sector(&self, sector: i32, k2: u32) -> Self {
        Self::new(&self.parts, sector, k2)
    }

    pub fn oscillator_weight(&self) -> u32 {
        self.parts.iter().map(|&x| x as u32).sum()
    }
}

impl fmt::Debug for FockMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for FockMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.parts {
            write!(f, "a(-{})", p)?;
        }
        match self.sector {
            0 if self.parts.is_empty() => write!(f, "1"),
            0 => Ok(()),
            m => write!(f, "e^{{{}a}}", m),
        }
    }
}

/// A finite linear combination of monomials with exact coefficients.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct GradedVector {
    terms: BTreeMap<FockMonomial, ExactScalar>,
}

impl GradedVector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn vacuum() -> Self {
        Self::from_monomial(FockMonomial::vacuum())
    }

    pub fn from_monomial(m: FockMonomial) -> Self {
        Self::from_term(m, scalar::one())
    }

    pub fn from_term(m: FockMonomial, c: ExactScalar) -> Self {
        let mut v = Self::zero();
        v.add_term(m, c);
        v
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&FockMonomial, &ExactScalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &FockMonomial) -> ExactScalar {
        self.terms.get(m).cloned().unwrap_or_else(scalar::zero)
    }

    pub fn add_term(&mut self, m: FockMonomial, c: ExactScalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &GradedVector, c: &ExactScalar) {
        if c.is_zero() {
            return;
        }
        for (m, x) in &other.terms {
            self.add_term(m.clone(), x * c);
        }
    }

    pub fn add_vec(&mut self, other: &GradedVector) {
        for (m, x) in &other.terms {
            self.add_term(m.clone(), x.clone());
        }
    }

    pub fn scaled(&self, c: &ExactScalar) -> GradedVector {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect() }
    }

    pub fn neg(&self) -> GradedVector {
        Self { terms: self.terms.iter().map(|(m, x)| (m.clone(), -x)).collect() }
    }

    pub fn sub(&self, other: &GradedVector) -> GradedVector {
        let mut r = self.clone();
        r.add_scaled(other, &-scalar::one());
        r
    }

    pub fn plus(&self, other: &GradedVector) -> GradedVector {
        let mut r = self.clone();
        r.add_vec(other);
        r
    }

    pub fn leading(&self) -> Option<(&FockMonomial, &ExactScalar)> {
        self.terms.iter().next_back()
    }

    pub fn max_weight(&self) -> Option<u32> {
        self.leading().map(|(m, _)| m.weight())
    }

    pub fn min_weight(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.weight()).min()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.max_weight() == self.min_weight()
    }

    pub fn weights(&self) -> Vec<u32> {
        let mut w: Vec<u32> = self.terms.keys().map(|m| m.weight()).collect();
        w.dedup();
        w
    }

    pub fn component(&self, weight: u32) -> GradedVector {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.weight() == weight)
                .map(|(m, x)| (m.clone(), x.clone()))
                .collect(),
        }
    }

    pub fn sector_component(&self, sector: i32) -> GradedVector {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.sector() == sector)
                .map(|(m, x)| (m.clone(), x.clone()))
                .collect(),
        }
    }

    pub fn sectors(&self) -> Vec<i32> {
        let mut s: Vec<i32> = self.terms.keys().map(|m| m.sector()).collect();
        s.sort();
        s.dedup();
        s
    }

    /// `self = c · other` for some scalar `c`.
    pub fn ratio_to(&self, other: &GradedVector) -> Option<ExactScalar> {
        if other.is_zero() {
            return if self.is_zero() { Some(scalar::zero()) } else { None };
        }
        let (m, x) = other.leading()?;
        let c = self.coefficient(m) / x;
        if other.scaled(&c) == *self {
            Some(c)
        } else {
            None
        }
    }
}

impl FromIterator<(FockMonomial, ExactScalar)> for GradedVector {
    fn from_iter<I: IntoIterator<Item = (FockMonomial, ExactScalar)>>(iter: I) -> Self {
        let mut v = Self::zero();
        for (m, c) in iter {
            v.add_term(m, c);
        }
        v
    }
}

impl fmt::Debug for GradedVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for GradedVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if a.is_one() {
                write!(f, "{}", m)?;
            } else {
                write!(f, "{}*{}", scalar::render(&a), m)?;
            }
        }
        Ok(())
    }
}

/// Monomial basis of the sector-`m` weight space, in descending lexicographic order.
pub fn enumerate_basis(cfg: &SpaceConfig, weight: u32, sector: i32) -> Result<Vec<FockMonomial>> {
    cfg.check_weight(weight as i64)?;
    if cfg.lattice_k == 0 && sector != 0 {
        return Ok(Vec::new());
    }
    let shift = cfg.k2() * (sector * sector) as u32;
    if shift > weight {
        return Ok(Vec::new());
    }
    Ok(partition::partitions(weight - shift)
        .into_iter()
        .map(|p| FockMonomial::new(&p, sector, cfg.k2()))
        .collect())
}

pub fn theta_involution(v: &GradedVector, cfg: &SpaceConfig) -> GradedVector {
    v.iter()
        .map(|(m, c)| {
            let s = scalar::int(scalar::sign(m.len() as i64));
            (m.with_sector(-m.sector(), cfg.k2()), c * s)
        })
        .collect()
}

/// Basis of the `θ`-fixed part of sectors `±m` at `weight`.
pub fn fixed_subspace_basis(cfg: &SpaceConfig, weight: u32, abs_sector: u32) -> Result<Vec<GradedVector>> {
    let m = abs_sector as i32;
    let mons = enumerate_basis(cfg, weight, m)?;
    Ok(mons
        .into_iter()
        .filter_map(|mon| {
            if m == 0 {
                (mon.len() % 2 == 0).then(|| GradedVector::from_monomial(mon))
            } else {
                let s = scalar::int(scalar::sign(mon.len() as i64));
                let partner = mon.with_sector(-m, cfg.k2());
                let mut v = GradedVector::from_monomial(mon);
                v.add_term(partner, s);
                Some(v)
            }
        })
        .collect())
}

/// Basis of the whole weight space of the configured module.
pub fn space_basis(cfg: &SpaceConfig, weight: u32) -> Result<Vec<GradedVector>> {
    let mut out = Vec::new();
    if cfg.fixed_point {
        for m in cfg.sectors(weight).into_iter().filter(|&m| m >= 0) {
            out.extend(fixed_subspace_basis(cfg, weight, m as u32)?);
        }
    } else {
        for m in cfg.sectors(weight) {
            out.extend(enumerate_basis(cfg, weight, m)?.into_iter().map(GradedVector::from_monomial));
        }
    }
    Ok(out)
}

pub fn space_dimension(cfg: &SpaceConfig, weight: u32) -> Result<usize> {
    Ok(space_basis(cfg, weight)?.len())
}

/// Pairing of two monomials under the invariant form normalised by `(1, 1) = 1`.
pub fn monomial_pairing(a: &FockMonomial, b: &FockMonomial, cfg: &SpaceConfig) -> ExactScalar {
    if a.sector() + b.sector() != 0 || a.parts() != b.parts() {
        return scalar::zero();
    }
    let n = cfg.generator_norm as i64;
    let mut acc = num_bigint::BigInt::from(scalar::sign(a.len() as i64));
    for (s, &c) in multiplicities(a.parts()).iter().enumerate().skip(1) {
        if c > 0 {
            acc *= num_bigint::BigInt::from(s as i64 * n).pow(c) * scalar::factorial(c);
        }
    }
    ExactScalar::from_integer(acc)
}

pub fn inner_product(u: &GradedVector, v: &GradedVector, cfg: &SpaceConfig) -> ExactScalar {
    let mut acc = scalar::zero();
    for (m, c) in u.iter() {
        let partner = m.with_sector(-m.sector(), cfg.k2());
        let d = v.coefficient(&partner);
        if !d.is_zero() {
            acc += c * d * monomial_pairing(m, &partner, cfg);
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_weight_includes_lattice_shift() {
        let m = FockMonomial::new(&[1, 3], -2, 4);
        assert_eq!(m.parts(), &[3, 1]);
        assert_eq!(m.weight(), 4 + 16);
        assert_eq!(m.with_part(2).parts(), &[3, 2, 1]);
        let (rest, c) = m.with_part(3).without_part(3).unwrap();
        assert_eq!((rest, c), (m.clone(), 2));
    }

    #[test]
    fn weight_four_heisenberg_basis() {
        let cfg = SpaceConfig::heisenberg(10);
        let b = enumerate_basis(&cfg, 4, 0).unwrap();
        let parts: Vec<Vec<u8>> = b.iter().map(|m| m.parts().to_vec()).collect();
        assert_eq!(parts, vec![vec![4], vec![3, 1], vec![2, 2], vec![2, 1, 1], vec![1, 1, 1, 1]]);
        assert!(enumerate_basis(&cfg, 11, 0).is_err());
    }

    #[test]
    fn fixed_point_dimensions() {
        let cfg = SpaceConfig::heisenberg_plus(12);
        let dims: Vec<usize> = (0..9).map(|w| space_dimension(&cfg, w).unwrap()).collect();
        assert_eq!(dims, vec![1, 0, 1, 1, 3, 3, 6, 7, 12]);
        let lat = SpaceConfig::lattice_plus(1, 12);
        assert_eq!(space_dimension(&lat, 1).unwrap(), 1);
    }

    #[test]
    fn theta_is_an_involution_fixing_the_fixed_basis() {
        let cfg = SpaceConfig::lattice(2, 12);
        for v in space_basis(&SpaceConfig::lattice_plus(2, 12), 7).unwrap() {
            assert_eq!(theta_involution(&v, &cfg), v);
        }
        let v = GradedVector::from_monomial(FockMonomial::new(&[2, 1], 1, 4));
        assert_eq!(theta_involution(&theta_involution(&v, &cfg), &cfg), v);
    }

    #[test]
    fn pairing_values() {
        let cfg = SpaceConfig::lattice(1, 10);
        let a = FockMonomial::new(&[1, 1], 0, 1);
        assert_eq!(monomial_pairing(&a, &a, &cfg), scalar::int(8));
        let e = GradedVector::from_monomial(FockMonomial::new(&[], 1, 1));
        let f = GradedVector::from_monomial(FockMonomial::new(&[], -1, 1));
        let big_e = e.plus(&f);
        assert_eq!(inner_product(&big_e, &big_e, &cfg), scalar::int(2));
    }
}
