//! Exact scalars and the handful of integer helpers every other module leans on.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Every coefficient in the engine is an exact rational.
pub type ExactScalar = BigRational;

pub fn int(n: i64) -> ExactScalar {
    BigRational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> ExactScalar {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> ExactScalar {
    ExactScalar::zero()
}

pub fn one() -> ExactScalar {
    ExactScalar::one()
}

/// Generalized binomial `C(m, i)` for any integer `m`, via the falling factorial.
pub fn binom(m: i64, i: u32) -> ExactScalar {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for j in 0..i as i64 {
        num *= BigInt::from(m - j);
        den *= BigInt::from(j + 1);
    }
    BigRational::new(num, den)
}

/// Same as [`binom`] but as a machine integer; panics on overflow.
pub fn binom_i(m: i64, i: u32) -> i128 {
    let mut acc: i128 = 1;
    for j in 0..i as i128 {
        acc = acc * (m as i128 - j) / (j + 1);
    }
    acc
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n as u64).fold(BigInt::one(), |a, b| a * BigInt::from(b))
}

pub fn sign(exp: i64) -> i64 {
    if exp.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Renders `3`, `-1/2`, never `3/1`.
pub fn render(q: &ExactScalar) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse(s: &str) -> Option<ExactScalar> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(BigRational::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

/// Exact square root of a non-negative rational when it exists.
pub fn rational_sqrt(q: &ExactScalar) -> Option<ExactScalar> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn negative_upper_binomials_follow_falling_factorial() {
        assert_eq!(binom(-1, 3), int(-1));
        assert_eq!(binom(-2, 2), int(3));
        assert_eq!(binom(5, 7), int(0));
        assert_eq!(binom(7, 0), int(1));
        assert_eq!(binom_i(-3, 2), 6);
    }

    #[test]
    fn render_parse_roundtrip() {
        for q in [frac(-9, 2), int(432), frac(23, 300), int(0)] {
            assert_eq!(parse(&render(&q)), Some(q));
        }
        assert_eq!(parse("2/0"), None);
    }

    #[test]
    fn exact_roots() {
        assert_eq!(rational_sqrt(&frac(9, 4)), Some(frac(3, 2)));
        assert_eq!(rational_sqrt(&int(668644)), None);
    }
}
