//! Minimal double-double arithmetic (an unevaluated sum hi + lo) for the few
//! places where exponentially large terms cancel.

use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const LN2: Dd = Dd {
        hi: std::f64::consts::LN_2,
        lo: 2.319_046_813_846_299_6e-17,
    };

    pub fn from_f64(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn scale(self, x: f64) -> Self {
        let (p, e) = two_prod(self.hi, x);
        let (hi, lo) = quick_two_sum(p, e + self.lo * x);
        Dd { hi, lo }
    }

    pub fn div_f64(self, x: f64) -> Self {
        let q1 = self.hi / x;
        let (p, e) = two_prod(q1, x);
        let r = (self.hi - p - e + self.lo) / x;
        let (hi, lo) = quick_two_sum(q1, r);
        Dd { hi, lo }
    }

    pub fn recip(self) -> Self {
        let q1 = 1.0 / self.hi;
        let r = Dd::from_f64(1.0) - self * Dd::from_f64(q1);
        let q2 = r.hi / self.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo }
    }

    /// e^x to about 30 significant digits, for |x| well inside the f64 range.
    pub fn exp(x: f64) -> Self {
        let k = (x / std::f64::consts::LN_2).round();
        let r = Dd::from_f64(x) - Dd::LN2.scale(k);
        // e^r by Taylor series; |r| ≤ ln2/2 so 27 terms reach 1e-32
        let mut term = Dd::from_f64(1.0);
        let mut acc = Dd::from_f64(1.0);
        for n in 1..=27 {
            term = (term * r).div_f64(n as f64);
            acc = acc + term;
        }
        let p = 2f64.powi(k as i32);
        Dd {
            hi: acc.hi * p,
            lo: acc.lo * p,
        }
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, o: Dd) -> Dd {
        self + (-o)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, o: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, o.hi);
        let e = e + (self.hi * o.lo + self.lo * o.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_round_trips_products() {
        let a = Dd::exp(10.0);
        let b = Dd::exp(-10.0);
        let one = a * b - Dd::from_f64(1.0);
        assert!(one.to_f64().abs() < 1e-30);
        let sq = Dd::exp(3.0) * Dd::exp(3.0) - Dd::exp(6.0);
        assert!(sq.to_f64().abs() < 1e-28 * Dd::exp(6.0).hi);
        assert!((Dd::exp(1.0).hi - std::f64::consts::E).abs() <= f64::EPSILON);
    }

    #[test]
    fn recip_is_accurate() {
        let x = Dd::exp(7.5);
        let r = x * x.recip() - Dd::from_f64(1.0);
        assert!(r.to_f64().abs() < 1e-30);
    }
}
