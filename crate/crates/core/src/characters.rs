//! Truncated q-series with exact coefficients and an exact rational
//! exponent shift, plus the characters built from them.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Result, VoaError};
use crate::fock::{space_dimension, SpaceConfig};
use crate::partition::partition_counts;
use crate::report::{CheckReport, ReportBuilder};
use crate::scalar::{self, frac, int, render, ExactScalar};

/// `q^offset · Σ_{n < order} c_n q^n`; coefficients at `n >= order` are unknown.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    pub offset: ExactScalar,
    pub coeffs: BTreeMap<u32, ExactScalar>,
    pub order: u32,
}

impl QSeries {
    pub fn zero(order: u32) -> Self {
        Self { offset: scalar::zero(), coeffs: BTreeMap::new(), order }
    }

    pub fn from_coeffs(offset: ExactScalar, coeffs: impl IntoIterator<Item = (u32, ExactScalar)>, order: u32) -> Self {
        let mut s = Self { offset, coeffs: BTreeMap::new(), order };
        for (n, c) in coeffs {
            s.add_at(n, c);
        }
        s
    }

    pub fn coeff(&self, n: u32) -> ExactScalar {
        self.coeffs.get(&n).cloned().unwrap_or_else(scalar::zero)
    }

    fn add_at(&mut self, n: u32, c: ExactScalar) {
        if n >= self.order || c.is_zero() {
            return;
        }
        let e = self.coeffs.entry(n).or_insert_with(scalar::zero);
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&n);
        }
    }

    /// Coefficients `c_0..c_{order-1}` as a dense vector.
    pub fn dense(&self) -> Vec<ExactScalar> {
        (0..self.order).map(|n| self.coeff(n)).collect()
    }

    pub fn scaled(&self, c: &ExactScalar) -> Self {
        Self::from_coeffs(self.offset.clone(), self.coeffs.iter().map(|(n, v)| (*n, v * c)), self.order)
    }

    /// Multiply by `q^s` for a nonnegative integer `s`.
    pub fn shifted(&self, s: u32) -> Self {
        Self::from_coeffs(self.offset.clone(), self.coeffs.iter().map(|(n, v)| (n + s, v.clone())), self.order)
    }

    /// Sum of two series with the same offset.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.offset != other.offset {
            return Err(VoaError::InvalidConfig(format!(
                "cannot add series with offsets {} and {}",
                render(&self.offset),
                render(&other.offset)
            )));
        }
        let mut out = Self::from_coeffs(self.offset.clone(), self.coeffs.clone(), self.order.min(other.order));
        for (n, c) in &other.coeffs {
            out.add_at(*n, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scaled(&-scalar::one()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        let mut out = Self { offset: &self.offset + &other.offset, coeffs: BTreeMap::new(), order };
        for (a, ca) in &self.coeffs {
            for (b, cb) in other.coeffs.range(..order.saturating_sub(*a)) {
                out.add_at(a + b, ca * cb);
            }
        }
        out
    }

    /// Agreement on every exponent both series know.
    pub fn agrees_with(&self, other: &Self) -> bool {
        let order = self.order.min(other.order);
        self.offset == other.offset && (0..order).all(|n| self.coeff(n) == other.coeff(n))
    }

    /// First exponent where two series differ, if any.
    pub fn first_difference(&self, other: &Self) -> Option<u32> {
        let order = self.order.min(other.order);
        (0..order).find(|&n| self.coeff(n) != other.coeff(n))
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q^({})*[", render(&self.offset))?;
        for n in 0..self.order {
            if n > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", render(&self.coeff(n)))?;
        }
        write!(f, "] + O(q^{})", self.order)
    }
}

/// `q^{1/24} Π (1 - q^n)` via the pentagonal number theorem.
pub fn eta(order: u32) -> QSeries {
    let mut terms = Vec::new();
    for k in 0i64.. {
        let g = (k * (3 * k - 1) / 2) as u32;
        if g >= order {
            break;
        }
        terms.push((g, int(scalar::sign(k))));
        let g2 = (k * (3 * k + 1) / 2) as u32;
        if k > 0 && g2 < order {
            terms.push((g2, int(scalar::sign(k))));
        }
    }
    QSeries::from_coeffs(frac(1, 24), terms, order)
}

/// `1/η = q^{-1/24} Σ p(n) q^n`.
pub fn eta_inverse(order: u32) -> QSeries {
    let p = partition_counts(order as usize);
    QSeries::from_coeffs(
        frac(-1, 24),
        p.into_iter().enumerate().map(|(n, c)| (n as u32, ExactScalar::from_integer(c))),
        order,
    )
}

/// `θ_{0,1} = Σ_{n ∈ Z} (-1)^n q^{n²}`.
pub fn theta_series(order: u32) -> QSeries {
    let mut terms = vec![(0, scalar::one())];
    for n in 1u32.. {
        if n * n >= order {
            break;
        }
        terms.push((n * n, int(2 * scalar::sign(n as i64))));
    }
    QSeries::from_coeffs(scalar::zero(), terms, order)
}

/// `Σ_{n ≥ 0} (-q)^{n²}`.
pub fn half_theta_series(order: u32) -> QSeries {
    let terms = (0u32..).take_while(|n| n * n < order).map(|n| (n * n, int(scalar::sign(n as i64))));
    QSeries::from_coeffs(scalar::zero(), terms, order)
}

/// Character of the irreducible Virasoro module `L(1, h)`.
pub fn char_l1(h: &ExactScalar, order: u32) -> Result<QSeries> {
    if h.is_negative() {
        return Err(VoaError::InvalidConfig(format!("h = {} is negative", render(h))));
    }
    let pn = eta_inverse(order);
    // degenerate when h = n²/4
    let four_h = h * int(4);
    let numerator = match scalar::rational_sqrt(&four_h) {
        Some(n) if n.is_integer() => {
            let gap = n.to_integer() + 1;
            let gap = u32::try_from(gap).map_err(|_| VoaError::InvalidConfig("h too large".into()))?;
            QSeries::from_coeffs(h.clone(), [(0, scalar::one()), (gap, -scalar::one())], order)
        }
        _ => QSeries::from_coeffs(h.clone(), [(0, scalar::one())], order),
    };
    Ok(numerator.mul(&pn))
}

/// Graded dimensions of the configured module read off its basis.
pub fn char_from_basis(cfg: &SpaceConfig, order: u32) -> Result<QSeries> {
    if order > cfg.cutoff + 1 {
        return Err(VoaError::CutoffExceeded { requested: order as i64 - 1, cutoff: cfg.cutoff });
    }
    let mut coeffs = Vec::with_capacity(order as usize);
    for n in 0..order {
        coeffs.push((n, int(space_dimension(cfg, n)? as i64)));
    }
    Ok(QSeries::from_coeffs(frac(-1, 24), coeffs, order))
}

/// `(1 - q + q^4 - q^9)/η`, the spectrum ruled out by the modular argument.
pub fn candidate_spectrum(order: u32) -> QSeries {
    let num = QSeries::from_coeffs(
        scalar::zero(),
        [(0, int(1)), (1, int(-1)), (4, int(1)), (9, int(-1))],
        order,
    );
    num.mul(&eta_inverse(order))
}

fn compare(rb: &mut ReportBuilder, name: &str, want: &QSeries, got: &QSeries) {
    let ok = want.agrees_with(got);
    let comp = match got.first_difference(want) {
        None if ok => format!("agree to q^{}", want.order.min(got.order) - 1),
        None => format!("offsets differ: {} vs {}", render(&got.offset), render(&want.offset)),
        Some(n) => format!("differ at q^{n}: {} vs {}", render(&got.coeff(n)), render(&want.coeff(n))),
    };
    rb.item(name, format!("agree to q^{}", want.order.min(got.order) - 1), comp, ok);
}

/// Character identities for `M(1)`, `M(1)^+` and `V_L^+` through `q^{order-1}`.
pub fn verify_char_identities(order: u32, k: u32) -> CheckReport {
    let mut rb = ReportBuilder::new("char-m1plus", "graded dimensions of M(1), M(1)+ and V_L+ against closed forms");
    let run = |rb: &mut ReportBuilder| -> Result<()> {
        let cutoff = order.saturating_sub(1);
        let inv = eta_inverse(order);

        let m1 = char_from_basis(&SpaceConfig::heisenberg(cutoff), order)?;
        compare(rb, "char M(1) = 1/eta (coefficients p(n))", &inv, &m1);
        rb.equal("char M(1) at q^5", 7, render(&m1.coeff(5)));

        let plus = char_from_basis(&SpaceConfig::heisenberg_plus(cutoff), order)?;
        let closed = half_theta_series(order).mul(&inv);
        compare(rb, "char M(1)+ = sum_{n>=0} (-q)^{n^2} / eta", &closed, &plus);

        let isotypic = fold_offsets(order, (0u32..).take_while(|n| 4 * n * n < order).map(|n| 4 * n * n))?;
        compare(rb, "char M(1)+ = sum_n char L(1, 4n^2)", &isotypic, &plus);

        let half = scalar::frac(1, 2);
        let theta_part = theta_series(order).mul(&inv).scaled(&half);
        let with_theta = inv.scaled(&half).add(&theta_part)?;
        compare(rb, "char M(1)+ = 1/(2 eta) + theta_{0,1}/(2 eta)", &with_theta, &plus);

        let lat_order = order.min(17);
        let vl = char_from_basis(&SpaceConfig::lattice_plus(k, lat_order - 1), lat_order)?;
        let k2 = k * k;
        let mut expect = half_theta_series(lat_order).mul(&eta_inverse(lat_order));
        for m in (1u32..).take_while(|m| k2 * m * m < lat_order) {
            expect = expect.add(&eta_inverse(lat_order).shifted(k2 * m * m))?;
        }
        compare(rb, &format!("char V_L+ (k={k}) = char M(1)+ + sum_{{m>=1}} q^{{{k2}m^2}}/eta"), &expect, &vl);
        Ok(())
    };
    if let Err(e) = run(&mut rb) {
        rb.error("char-m1plus", "computed", e);
    }
    rb.finish()
}

/// `Σ_h char L(1, h)` rewritten with offset `-1/24`.
fn fold_offsets(order: u32, weights: impl Iterator<Item = u32>) -> Result<QSeries> {
    let mut out = QSeries { offset: frac(-1, 24), ..QSeries::zero(order) };
    for h in weights {
        let c = char_l1(&int(h as i64), order)?;
        let moved = QSeries { offset: frac(-1, 24), ..c.clone() }.shifted(h);
        out = out.add(&moved)?;
    }
    Ok(out)
}

/// Exact theta and eta identities.
pub fn verify_theta_identity(order: u32) -> CheckReport {
    let mut rb = ReportBuilder::new("theta-identity", "theta_{0,1} expansion and eta inversion");
    let th = theta_series(order);
    let head = theta_series(order.max(10));
    let shown: Vec<String> = [0, 1, 2, 4, 9].iter().map(|&n| render(&head.coeff(n))).collect();
    rb.equal("theta_{0,1} at q^0, q^1, q^2, q^4, q^9", "1, -2, 0, 2, -2", shown.join(", "));
    let two_half = half_theta_series(order).scaled(&int(2)).sub(&QSeries::from_coeffs(scalar::zero(), [(0, int(1))], order));
    match two_half {
        Ok(s) => compare(&mut rb, "theta_{0,1} = 2 sum_{n>=0} (-q)^{n^2} - 1", &th, &s),
        Err(e) => {
            rb.error("theta_{0,1} = 2 sum_{n>=0} (-q)^{n^2} - 1", "agree", e);
        }
    }
    let unit = eta(order).mul(&eta_inverse(order));
    let one = QSeries::from_coeffs(scalar::zero(), [(0, scalar::one())], order);
    compare(&mut rb, "eta * (1/eta) = 1", &one, &unit);
    let p = partition_counts(order as usize);
    let ok = (0..order).all(|n| eta_inverse(order).coeff(n) == ExactScalar::from_integer(p[n as usize].clone()));
    rb.item("1/eta coefficients = p(n)", "true", ok, ok);
    let l10: Vec<String> = char_l1(&scalar::zero(), 9).map(|c| c.dense().iter().map(render).collect()).unwrap_or_default();
    rb.equal("L(1,0) dims at q^0..q^8", "1, 0, 1, 1, 2, 2, 4, 4, 7", l10.join(", "));
    rb.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eta_times_inverse_is_one() {
        let u = eta(40).mul(&eta_inverse(40));
        assert_eq!(u.offset, scalar::zero());
        assert_eq!(u.coeff(0), int(1));
        assert!((1..40).all(|n| u.coeff(n).is_zero()));
    }

    #[test]
    fn l1_non_square_weight_is_shifted_partition_series() {
        let c = char_l1(&int(2), 10).unwrap();
        assert_eq!(c.offset, int(2) - frac(1, 24));
        assert_eq!(c.coeff(5), int(7));
    }

    #[test]
    fn l1_four_has_null_vector_at_nine() {
        let c = char_l1(&int(4), 12).unwrap();
        let p = partition_counts(12);
        // exponent n here is the level above h = 4
        for n in 0..12u32 {
            let want = &p[n as usize] - if n >= 5 { p[n as usize - 5].clone() } else { 0.into() };
            assert_eq!(c.coeff(n), ExactScalar::from_integer(want));
        }
    }
}
