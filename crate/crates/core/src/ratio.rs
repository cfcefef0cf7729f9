//! Exact rational arithmetic helpers.
//!
//! All closed-form probabilities and exact expectations in this crate use
//! arbitrary-precision rationals. Factorial ratios are computed as telescoped
//! products so intermediate values stay small.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

/// Shorthand for a rational from two machine integers.
pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Rational from an unsigned integer.
pub fn int(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Exact conversion of a finite `f64`. Every finite double is a dyadic
/// rational, so no precision is lost.
pub fn from_f64(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite float")
}

/// `a! * b! / (a + b)!` as a telescoped product `prod_{i=1..min} i / (max + i)`.
///
/// This is the probability that, in a uniform interleaving of `a` items of one
/// kind and `b` of another, all items of the first kind precede all of the
/// second (equivalently `1 / C(a + b, a)`).
pub fn interleave_prefix_probability(a: u64, b: u64) -> BigRational {
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    let mut p = BigRational::one();
    for i in 1..=lo {
        p *= BigRational::new(BigInt::from(i), BigInt::from(hi + i));
    }
    p
}

/// Nearest-double rendering of a rational, for reports and tolerances.
pub fn to_f64(x: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interleave_matches_factorials() {
        // 2! * 3! / 5! = 12 / 120
        assert_eq!(interleave_prefix_probability(2, 3), rat(1, 10));
        assert_eq!(interleave_prefix_probability(3, 2), rat(1, 10));
        assert_eq!(interleave_prefix_probability(0, 7), rat(1, 1));
        assert_eq!(interleave_prefix_probability(1, 1), rat(1, 2));
    }

    #[test]
    fn from_f64_is_exact_on_dyadics() {
        assert_eq!(from_f64(0.5), rat(1, 2));
        assert_eq!(from_f64(-2.25), rat(-9, 4));
    }
}
