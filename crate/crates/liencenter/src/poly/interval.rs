//! Exact interval arithmetic over the rationals.
//!
//! Endpoints are exact, so every operation returns a true enclosure with no
//! rounding step. Used to certify sign claims found first in floating point.

use super::{Polynomial, Rational};
use num_traits::Zero;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatInterval {
    pub lo: Rational,
    pub hi: Rational,
}

impl RatInterval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        assert!(lo <= hi, "inverted interval");
        RatInterval { lo, hi }
    }

    pub fn point(v: Rational) -> Self {
        RatInterval { lo: v.clone(), hi: v }
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(2.into())
    }

    pub fn contains(&self, v: &Rational) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn add(&self, other: &RatInterval) -> RatInterval {
        RatInterval { lo: &self.lo + &other.lo, hi: &self.hi + &other.hi }
    }

    pub fn add_point(&self, v: &Rational) -> RatInterval {
        RatInterval { lo: &self.lo + v, hi: &self.hi + v }
    }

    pub fn mul(&self, other: &RatInterval) -> RatInterval {
        let p1 = &self.lo * &other.lo;
        let p2 = &self.lo * &other.hi;
        let p3 = &self.hi * &other.lo;
        let p4 = &self.hi * &other.hi;
        let lo = p1.clone().min(p2.clone()).min(p3.clone()).min(p4.clone());
        let hi = p1.max(p2).max(p3).max(p4);
        RatInterval { lo, hi }
    }

    /// True when the two intervals share no point.
    pub fn disjoint(&self, other: &RatInterval) -> bool {
        self.hi < other.lo || other.hi < self.lo
    }

    /// Smallest gap between the intervals; zero when they touch or overlap.
    pub fn gap(&self, other: &RatInterval) -> Rational {
        if self.hi < other.lo {
            &other.lo - &self.hi
        } else if other.hi < self.lo {
            &self.lo - &other.hi
        } else {
            Rational::zero()
        }
    }
}

/// Interval Horner evaluation: encloses `{p(x) : x in iv}`.
pub fn eval_poly_interval(p: &Polynomial, iv: &RatInterval) -> RatInterval {
    let mut acc = RatInterval::point(Rational::zero());
    for c in p.coeffs().iter().rev() {
        acc = acc.mul(iv).add_point(c);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::super::{rat, ratio};
    use super::*;

    #[test]
    fn interval_product_covers_sign_mix() {
        let a = RatInterval::new(rat(-2), rat(3));
        let b = RatInterval::new(rat(-1), rat(4));
        let p = a.mul(&b);
        assert_eq!(p.lo, rat(-8));
        assert_eq!(p.hi, rat(12));
    }

    #[test]
    fn poly_enclosure_contains_sampled_values() {
        let p = Polynomial::from_i64(&[1, -3, 0, 2]);
        let iv = RatInterval::new(ratio(-1, 2), ratio(3, 2));
        let enc = eval_poly_interval(&p, &iv);
        for k in 0..=20 {
            let x = ratio(-1, 2) + ratio(k, 10);
            if iv.contains(&x) {
                let v = p.eval(&x);
                assert!(enc.contains(&v), "p({x}) = {v} outside enclosure");
            }
        }
    }

    #[test]
    fn disjointness_and_gap() {
        let a = RatInterval::new(rat(0), rat(1));
        let b = RatInterval::new(rat(2), rat(3));
        assert!(a.disjoint(&b));
        assert_eq!(a.gap(&b), rat(1));
        let c = RatInterval::new(ratio(1, 2), rat(2));
        assert!(!a.disjoint(&c));
        assert!(a.gap(&c).is_zero());
    }
}
