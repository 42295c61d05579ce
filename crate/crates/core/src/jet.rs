//! Second-order forward-mode differentiation over intervals.
//!
//! A [`Jet`] holds enclosures of `f`, `f'` and `f''` over the interval its
//! variable was seeded with.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::Result;
use crate::interval::Interval;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    pub v: Interval,
    pub d1: Interval,
    pub d2: Interval,
}

impl Jet {
    pub fn constant(c: Interval) -> Self {
        Jet { v: c, d1: Interval::ZERO, d2: Interval::ZERO }
    }

    pub fn var(x: Interval) -> Self {
        Jet { v: x, d1: Interval::ONE, d2: Interval::ZERO }
    }

    pub fn scale(self, c: Interval) -> Self {
        Jet { v: self.v * c, d1: self.d1 * c, d2: self.d2 * c }
    }

    pub fn recip(self) -> Result<Self> {
        let r = self.v.recip()?;
        let r2 = r.square();
        Ok(Jet {
            v: r,
            d1: -(self.d1 * r2),
            d2: -(self.d2 * r2) + (self.d1.square() * r2 * r).scale(2.0),
        })
    }

    pub fn checked_div(self, rhs: Jet) -> Result<Self> {
        Ok(self * rhs.recip()?)
    }

    pub fn exp(self) -> Self {
        let e = self.v.exp();
        Jet { v: e, d1: self.d1 * e, d2: (self.d2 + self.d1.square()) * e }
    }

    pub fn ln(self) -> Result<Self> {
        let r = self.v.recip()?;
        Ok(Jet {
            v: self.v.ln()?,
            d1: self.d1 * r,
            d2: self.d2 * r - (self.d1 * r).square(),
        })
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        Jet { v: self.v + rhs.v, d1: self.d1 + rhs.d1, d2: self.d2 + rhs.d2 }
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        Jet { v: self.v - rhs.v, d1: self.d1 - rhs.d1, d2: self.d2 - rhs.d2 }
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet { v: -self.v, d1: -self.d1, d2: -self.d2 }
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        Jet {
            v: self.v * rhs.v,
            d1: self.d1 * rhs.v + self.v * rhs.d1,
            d2: self.d2 * rhs.v + (self.d1 * rhs.d1).scale(2.0) + self.v * rhs.d2,
        }
    }
}
