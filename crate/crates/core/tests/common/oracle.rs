//! High-precision reference values.
//!
//! Sums, products and small powers of `f64` inputs are exact at 192 bits in
//! the ranges the tests use. Quotients, roots and transcendental values are
//! rounded to nearest, so they get a band of relative half-width `2^-185`
//! around the computed value, and an enclosure endpoint only counts as wrong
//! when it lies outside that band on the wrong side.

use astro_float::{BigFloat, Consts, RoundingMode};

const PREC: usize = 192;
const RM: RoundingMode = RoundingMode::ToEven;

#[derive(Clone, Copy, Debug)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
    Sqrt,
    Exp,
    Ln,
    Ln1p,
    Powi(i32),
    Square,
}

/// An interval certainly holding the true value of a point operation. An
/// enclosure is wrong when its lower end exceeds `hi` or its upper end is
/// below `lo`.
pub enum Bound {
    Between(BigFloat, BigFloat),
    /// Outside the oracle's domain.
    Skip,
}

pub struct Oracle {
    cc: Consts,
    eps: BigFloat,
}

fn big(x: f64) -> BigFloat {
    BigFloat::from_f64(x, PREC)
}

impl Oracle {
    pub fn new() -> Self {
        let eps = BigFloat::from_f64(2f64.powi(-185), PREC);
        Oracle { cc: Consts::new().expect("constants cache"), eps }
    }

    fn exact(v: BigFloat) -> Bound {
        Bound::Between(v.clone(), v)
    }

    fn banded(&self, v: BigFloat) -> Bound {
        if v.is_nan() {
            return Bound::Skip;
        }
        let d = v.abs().mul(&self.eps, PREC, RM);
        Bound::Between(v.sub(&d, PREC, RM), v.add(&d, PREC, RM))
    }

    pub fn eval(&mut self, op: Op, a: f64, b: f64) -> Bound {
        let (x, y) = (big(a), big(b));
        match op {
            Op::Add => Self::exact(x.add(&y, PREC, RM)),
            Op::Sub => Self::exact(x.sub(&y, PREC, RM)),
            Op::Mul => Self::exact(x.mul(&y, PREC, RM)),
            Op::Square => Self::exact(x.mul(&x, PREC, RM)),
            Op::Powi(n) if (0..=3).contains(&n) => {
                let mut acc = big(1.0);
                for _ in 0..n {
                    acc = acc.mul(&x, PREC, RM);
                }
                Self::exact(acc)
            }
            Op::Powi(_) => Bound::Skip,
            Op::Div if b == 0.0 => Bound::Skip,
            Op::Div => self.banded(x.div(&y, PREC, RM)),
            Op::Sqrt if a < 0.0 => Bound::Skip,
            Op::Sqrt => self.banded(x.sqrt(PREC, RM)),
            Op::Exp => {
                let v = x.exp(PREC, RM, &mut self.cc);
                self.banded(v)
            }
            Op::Ln if a <= 0.0 => Bound::Skip,
            Op::Ln => {
                let v = x.ln(PREC, RM, &mut self.cc);
                self.banded(v)
            }
            Op::Ln1p if a <= -1.0 => Bound::Skip,
            Op::Ln1p => {
                let one_plus = big(1.0).add(&x, PREC, RM);
                let v = one_plus.ln(PREC, RM, &mut self.cc);
                self.banded(v)
            }
        }
    }

    /// `log(b / a)` for `0 < a < b`.
    pub fn log_ratio(&mut self, b: f64, a: f64) -> (BigFloat, BigFloat) {
        let lb = big(b).ln(PREC, RM, &mut self.cc);
        let la = big(a).ln(PREC, RM, &mut self.cc);
        self.pair(lb.sub(&la, PREC, RM))
    }

    /// `1/a - 1/b`.
    pub fn recip_difference(&mut self, a: f64, b: f64) -> (BigFloat, BigFloat) {
        let one = big(1.0);
        let v = one.div(&big(a), PREC, RM).sub(&one.div(&big(b), PREC, RM), PREC, RM);
        self.pair(v)
    }

    fn pair(&self, v: BigFloat) -> (BigFloat, BigFloat) {
        // a few roundings, each far inside the band
        let d = v.abs().mul(&self.eps, PREC, RM).mul(&big(16.0), PREC, RM);
        (v.sub(&d, PREC, RM), v.add(&d, PREC, RM))
    }

    /// `x <= v`, with `x = -inf` allowed.
    pub fn le_f64(&self, x: f64, v: &BigFloat) -> bool {
        x == f64::NEG_INFINITY || big(x) <= *v
    }

    /// `x >= v`, with `x = inf` allowed.
    pub fn ge_f64(&self, x: f64, v: &BigFloat) -> bool {
        x == f64::INFINITY || big(x) >= *v
    }
}
