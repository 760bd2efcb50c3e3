//! Unevaluated sums `hi + lo` of two doubles (about 32 significant digits)
//! for reference evaluations where cancellation eats double precision.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Twofold {
    pub hi: f64,
    pub lo: f64,
}

fn two_sum(a: f64, b: f64) -> Twofold {
    let s = a + b;
    let bb = s - a;
    Twofold {
        hi: s,
        lo: (a - (s - bb)) + (b - bb),
    }
}

fn quick_two_sum(a: f64, b: f64) -> Twofold {
    let s = a + b;
    Twofold {
        hi: s,
        lo: b - (s - a),
    }
}

fn two_prod(a: f64, b: f64) -> Twofold {
    let p = a * b;
    Twofold {
        hi: p,
        lo: a.mul_add(b, -p),
    }
}

impl Twofold {
    pub const ONE: Twofold = Twofold { hi: 1.0, lo: 0.0 };
    pub const ZERO: Twofold = Twofold { hi: 0.0, lo: 0.0 };

    pub fn from(x: f64) -> Self {
        Twofold { hi: x, lo: 0.0 }
    }

    /// `a + b` for doubles, exactly.
    pub fn sum(a: f64, b: f64) -> Self {
        two_sum(a, b)
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

impl Add for Twofold {
    type Output = Twofold;
    fn add(self, o: Twofold) -> Twofold {
        let s = two_sum(self.hi, o.hi);
        let t = two_sum(self.lo, o.lo);
        let u = quick_two_sum(s.hi, s.lo + t.hi);
        quick_two_sum(u.hi, u.lo + t.lo)
    }
}

impl Neg for Twofold {
    type Output = Twofold;
    fn neg(self) -> Twofold {
        Twofold {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Sub for Twofold {
    type Output = Twofold;
    fn sub(self, o: Twofold) -> Twofold {
        self + (-o)
    }
}

impl Mul for Twofold {
    type Output = Twofold;
    fn mul(self, o: Twofold) -> Twofold {
        let p = two_prod(self.hi, o.hi);
        quick_two_sum(p.hi, p.lo + (self.hi * o.lo + self.lo * o.hi))
    }
}

impl Div for Twofold {
    type Output = Twofold;
    fn div(self, o: Twofold) -> Twofold {
        let q1 = self.hi / o.hi;
        let r = self - o * Twofold::from(q1);
        let q2 = r.hi / o.hi;
        let r = r - o * Twofold::from(q2);
        let q3 = r.hi / o.hi;
        quick_two_sum(q1, q2) + Twofold::from(q3)
    }
}
