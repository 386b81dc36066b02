//! Exact rational code rates.
//!
//! Rates are kept in the unreduced form they arise in (`6/8`, `6/12`, ...)
//! so that reports keep the ladder notation, while comparisons and float
//! conversions are exact.

use serde::{Deserialize, Serialize};
use std::fmt;

/// An exact nonnegative rational, not automatically reduced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rational {
    num: u64,
    den: u64,
}

impl Rational {
    /// Creates `num/den`. Panics if `den == 0`.
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den != 0, "rational with zero denominator");
        Rational { num, den }
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Equality of the represented values (`6/8 == 3/4`).
    pub fn eq_value(&self, other: &Rational) -> bool {
        self.num as u128 * other.den as u128 == other.num as u128 * self.den as u128
    }

    /// Value comparison that is exact in integer arithmetic.
    pub fn cmp_value(&self, other: &Rational) -> std::cmp::Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }

    pub fn reduced(&self) -> Rational {
        let g = gcd(self.num, self.den);
        if g == 0 {
            *self
        } else {
            Rational::new(self.num / g, self.den / g)
        }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_keeps_unreduced_form() {
        assert_eq!(Rational::new(6, 8).to_string(), "6/8");
        assert_eq!(Rational::new(6, 8).reduced().to_string(), "3/4");
    }

    #[test]
    fn value_equality_crosses_representations() {
        assert!(Rational::new(6, 8).eq_value(&Rational::new(3, 4)));
        assert!(!Rational::new(6, 8).eq_value(&Rational::new(6, 9)));
        assert_ne!(Rational::new(6, 8), Rational::new(3, 4));
    }

    #[test]
    fn ordering_is_exact() {
        use std::cmp::Ordering;
        assert_eq!(
            Rational::new(6, 9).cmp_value(&Rational::new(6, 8)),
            Ordering::Less
        );
    }
}
