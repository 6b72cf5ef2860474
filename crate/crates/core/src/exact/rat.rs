//! Arbitrary-precision rational scalars.
//!
//! `Rat` is backed by `num_rational::BigRational`, which keeps every value
//! reduced with a positive denominator — exactly the invariants the rest of
//! the crate relies on.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Int = BigInt;
pub type Rat = BigRational;

pub fn rat_i64(n: i64) -> Rat {
    Rat::from_integer(Int::from(n))
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

/// Format without a trailing `/1` for integers.
pub fn rat_to_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Nearest double, adequate for the numerical layer (desk-scale values).
pub fn rat_to_f64(r: &Rat) -> f64 {
    let num = r.numer();
    let den = r.denom();
    // Direct conversion loses precision only beyond 2^53, which the numeric
    // layer tolerates by construction.
    let nf = bigint_to_f64(num);
    let df = bigint_to_f64(den);
    nf / df
}

fn bigint_to_f64(n: &Int) -> f64 {
    let mut out = 0.0f64;
    let (sign, digits) = n.to_u64_digits();
    for d in digits.iter().rev() {
        out = out * 1.8446744073709552e19 + *d as f64;
    }
    if sign == num_bigint::Sign::Minus {
        -out
    } else {
        out
    }
}

pub fn is_zero(r: &Rat) -> bool {
    r.is_zero()
}

pub fn abs(r: &Rat) -> Rat {
    r.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formatting() {
        assert_eq!(rat_to_string(&rat(4, 2)), "2");
        assert_eq!(rat_to_string(&rat(-3, 6)), "-1/2");
    }

    #[test]
    fn to_f64_roundtrip_small() {
        assert_eq!(rat_to_f64(&rat(1, 4)), 0.25);
        assert_eq!(rat_to_f64(&rat(-7, 2)), -3.5);
    }
}
