//! High-precision evaluation of q-series on the imaginary axis and the
//! `τ ↦ -1/τ` comparison used by the modular argument.

use astro_float::{BigFloat, Consts, Radix, RoundingMode};

use crate::characters::{candidate_spectrum, eta, eta_inverse, theta_series, QSeries};
use crate::error::{Result, VoaError};
use crate::report::{CheckReport, ReportBuilder, Status};
use crate::scalar::{frac, render, ExactScalar};

/// Working precision in bits, about 77 decimal digits.
pub const PRECISION: usize = 256;
const RM: RoundingMode = RoundingMode::ToEven;

/// Tail of the truncated sum that the probe accepts.
pub const TAIL_LIMIT: f64 = 1e-12;

/// `|c_n| <= scale · exp(growth · sqrt(n))` for every `n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoefficientBound {
    pub scale: f64,
    pub growth: f64,
}

impl CoefficientBound {
    /// Bounded coefficients, e.g. theta or eta numerators.
    pub const fn bounded(scale: f64) -> Self {
        Self { scale, growth: 0.0 }
    }

    /// `p(n) < exp(π sqrt(2n/3))`, times `scale` for a numerator with `scale` unit terms.
    pub fn partitions(scale: f64) -> Self {
        Self { scale, growth: std::f64::consts::PI * (2.0f64 / 3.0).sqrt() }
    }

    /// Bound on `Σ_{n >= terms} |c_n| e^{-2π y n}`, or `None` when the majorant does not decay there.
    pub fn tail(&self, y: f64, terms: usize) -> Option<f64> {
        let n = terms.max(1) as f64;
        let log_first = self.scale.ln() + self.growth * n.sqrt() - 2.0 * std::f64::consts::PI * y * n;
        // growth·sqrt(n) is concave, so later terms shrink at least by this ratio
        let log_ratio = self.growth / (2.0 * n.sqrt()) - 2.0 * std::f64::consts::PI * y;
        if log_ratio >= 0.0 {
            return None;
        }
        Some(log_first.exp() / (1.0 - log_ratio.exp()))
    }
}

/// Result of comparing `F(i/t)` with `t^w F(it)`.
#[derive(Clone, Debug)]
pub struct ProbeResult {
    pub t: ExactScalar,
    pub terms: usize,
    pub at_it: BigFloat,
    pub at_inverse: BigFloat,
    pub defect: f64,
    pub tail_bound: f64,
    /// Change in the defect when the number of terms is doubled.
    pub doubling_change: f64,
}

pub struct Evaluator {
    cc: Consts,
}

impl Default for Evaluator {
    fn default() -> Self {
        Self::new()
    }
}

impl Evaluator {
    pub fn new() -> Self {
        Self { cc: Consts::new().expect("astro-float constants cache") }
    }

    fn rational(&mut self, q: &ExactScalar) -> BigFloat {
        let n = BigFloat::parse(&q.numer().to_string(), Radix::Dec, PRECISION, RM, &mut self.cc);
        let d = BigFloat::parse(&q.denom().to_string(), Radix::Dec, PRECISION, RM, &mut self.cc);
        n.div(&d, PRECISION, RM)
    }

    /// `Σ_{n < terms} c_n q^{n + offset}` at `τ = iy`.
    pub fn evaluate(&mut self, s: &QSeries, y: &ExactScalar, terms: usize) -> Result<BigFloat> {
        if terms > s.order as usize {
            return Err(VoaError::NotConverged(format!(
                "{terms} terms requested but the series is only known below q^{}",
                s.order
            )));
        }
        let pi = self.cc.pi(PRECISION, RM);
        let two_pi_y = pi.mul(&BigFloat::from_u8(2, PRECISION), PRECISION, RM).mul(&self.rational(y), PRECISION, RM);
        let q = two_pi_y.neg().exp(PRECISION, RM, &mut self.cc);
        let lead = self.rational(&s.offset).mul(&two_pi_y, PRECISION, RM).neg().exp(PRECISION, RM, &mut self.cc);
        let mut sum = BigFloat::from_u8(0, PRECISION);
        let mut qn = BigFloat::from_u8(1, PRECISION);
        for n in 0..terms as u32 {
            let c = s.coeff(n);
            if !num_traits::Zero::is_zero(&c) {
                let term = self.rational(&c).mul(&qn, PRECISION, RM);
                sum = sum.add(&term, PRECISION, RM);
            }
            qn = qn.mul(&q, PRECISION, RM);
        }
        Ok(sum.mul(&lead, PRECISION, RM))
    }

    fn t_power(&mut self, t: &ExactScalar, w: &ExactScalar) -> BigFloat {
        if num_traits::Zero::is_zero(w) {
            return BigFloat::from_u8(1, PRECISION);
        }
        let lt = self.rational(t).ln(PRECISION, RM, &mut self.cc);
        lt.mul(&self.rational(w), PRECISION, RM).exp(PRECISION, RM, &mut self.cc)
    }

    fn defect(&mut self, s: &QSeries, t: &ExactScalar, weight: &ExactScalar, terms: usize) -> Result<(BigFloat, BigFloat, f64)> {
        let a = self.evaluate(s, t, terms)?;
        let b = self.evaluate(s, &t.recip(), terms)?;
        let scaled = a.mul(&self.t_power(t, weight), PRECISION, RM);
        let d = b.sub(&scaled, PRECISION, RM).abs();
        Ok((a, b, to_f64(&d)))
    }

    /// Compares `F(i/t)` with `t^w F(it)`, refusing when the truncation tail is not below [`TAIL_LIMIT`].
    pub fn s_transform_probe(
        &mut self,
        s: &QSeries,
        bound: CoefficientBound,
        weight: &ExactScalar,
        t: &ExactScalar,
        terms: usize,
    ) -> Result<ProbeResult> {
        if !num_traits::Signed::is_positive(t) {
            return Err(VoaError::InvalidConfig(format!("t = {} must be positive", render(t))));
        }
        let tf = to_f64(&self.rational(t));
        let wf = to_f64(&self.rational(weight));
        let lead = to_f64(&self.rational(&s.offset)).min(0.0).abs();
        let mut tail = 0.0;
        for (y, factor) in [(tf, tf.powf(wf)), (1.0 / tf, 1.0)] {
            let Some(b) = bound.tail(y, terms) else {
                return Err(VoaError::NotConverged(format!("coefficient bound does not decay at y = {y}")));
            };
            tail += b * factor * (2.0 * std::f64::consts::PI * y * lead).exp();
        }
        if tail >= TAIL_LIMIT {
            return Err(VoaError::NotConverged(format!(
                "tail bound {tail:.3e} at {terms} terms and t = {} is not below {TAIL_LIMIT:e}",
                render(t)
            )));
        }
        let (a, b, d) = self.defect(s, t, weight, terms)?;
        let (_, _, d2) = self.defect(s, t, weight, 2 * terms)?;
        Ok(ProbeResult { t: t.clone(), terms, at_it: a, at_inverse: b, defect: d, tail_bound: tail, doubling_change: (d - d2).abs() })
    }
}

/// `|c_m| <= 2(sqrt(m) + 1) p(m) <= 4 e^{sqrt(m)} p(m)` for `θ_{0,1}/η`.
fn theta_over_eta_bound() -> CoefficientBound {
    let p = CoefficientBound::partitions(4.0);
    CoefficientBound { scale: p.scale, growth: p.growth + 1.0 }
}

pub fn to_f64(x: &BigFloat) -> f64 {
    let s = format!("{x}");
    s.parse::<f64>().unwrap_or(f64::NAN)
}

fn short(x: &BigFloat) -> String {
    format!("{:.15}", to_f64(x))
}

/// The eta transformation law at `τ = i` and `τ = 2i`.
pub fn verify_eta_law(terms: usize) -> CheckReport {
    let mut rb = ReportBuilder::new("eta-s-law", "eta(-1/tau) = (-i tau)^(1/2) eta(tau) on the imaginary axis");
    let mut ev = Evaluator::new();
    let series = eta(2 * terms as u32);
    for t in [frac(1, 1), frac(2, 1)] {
        let name = format!("eta at t = {}", render(&t));
        match ev.s_transform_probe(&series, CoefficientBound::bounded(1.0), &frac(1, 2), &t, terms) {
            Ok(r) => {
                rb.item(&format!("{name}: defect"), "< 1e-9", format!("{:.3e}", r.defect), r.defect < 1e-9);
                rb.item(&format!("{name}: tail bound"), "< 1e-12", format!("{:.3e}", r.tail_bound), r.tail_bound < TAIL_LIMIT);
                rb.item(&format!("{name}: change on doubling terms"), "< 1e-9", format!("{:.3e}", r.doubling_change), r.doubling_change < 1e-9);
                rb.push(&format!("{name}: values"), "eta(i/t), eta(it)", format!("{}, {}", short(&r.at_inverse), short(&r.at_it)), Status::Pass);
            }
            Err(e) => {
                rb.error(&name, "converged", e);
            }
        }
    }
    rb.item("terms", ">= 200", terms, terms >= 200);
    rb.finish()
}

/// Invariance defect of `(1 - q + q^4 - q^9)/η` and a self-dual control.
pub fn verify_s_defect(terms: usize) -> CheckReport {
    let mut rb = ReportBuilder::new("s-defect-demo", "S-invariance defect of the candidate spectrum (1-q+q^4-q^9)/eta");
    let mut ev = Evaluator::new();
    let order = 2 * terms as u32;
    let z = candidate_spectrum(order);
    match ev.s_transform_probe(&z, CoefficientBound::partitions(4.0), &frac(0, 1), &frac(2, 1), terms) {
        Ok(r) => {
            rb.item("|Z(i/2) - Z(2i)|", "> 0.1", format!("{:.6}", r.defect), r.defect > 0.1);
            rb.item("tail bound", "< 1e-12", format!("{:.3e}", r.tail_bound), r.tail_bound < TAIL_LIMIT);
            rb.item("change on doubling terms", "< 1e-9", format!("{:.3e}", r.doubling_change), r.doubling_change < 1e-9);
            rb.push("values", "Z(i/2), Z(2i)", format!("{}, {}", short(&r.at_inverse), short(&r.at_it)), Status::Pass);
        }
        Err(e) => {
            rb.error("candidate spectrum", "converged", e);
        }
    }
    // t = 1 is the fixed point of τ ↦ -1/τ, so any series has zero defect there
    let control = theta_series(order).mul(&eta_inverse(order));
    match ev.s_transform_probe(&control, theta_over_eta_bound(), &frac(0, 1), &frac(1, 1), terms) {
        Ok(r) => {
            rb.item("theta_{0,1}/eta at t = 1", "< 1e-6", format!("{:.3e}", r.defect), r.defect < 1e-6);
        }
        Err(e) => {
            rb.error("theta_{0,1}/eta at t = 1", "converged", e);
        }
    }
    rb.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::partition_counts;

    #[test]
    fn partition_bound_holds() {
        let p = partition_counts(400);
        let b = CoefficientBound::partitions(1.0);
        for (n, v) in p.iter().enumerate().skip(1) {
            let lim = b.scale * (b.growth * (n as f64).sqrt()).exp();
            assert!(v.to_string().parse::<f64>().unwrap() < lim, "n = {n}");
        }
    }

    #[test]
    fn refuses_short_sums() {
        let mut ev = Evaluator::new();
        let s = eta_inverse(20);
        let r = ev.s_transform_probe(&s, CoefficientBound::partitions(1.0), &frac(0, 1), &frac(2, 1), 10);
        assert!(matches!(r, Err(VoaError::NotConverged(_))));
    }

    #[test]
    fn eta_at_i() {
        // η(i) = Γ(1/4) / (2 π^{3/4})
        let mut ev = Evaluator::new();
        let v = to_f64(&ev.evaluate(&eta(50), &frac(1, 1), 50).unwrap());
        assert!((v - 0.768_225_422_326_056_7).abs() < 1e-12, "{v}");
    }
}
