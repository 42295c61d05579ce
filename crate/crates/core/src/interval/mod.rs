//! Closed real intervals with double-precision endpoints.
//!
//! Rounding is emulated: every endpoint is computed in round-to-nearest and
//! then moved outward when the operation was inexact (see [`round`]). Values
//! are `Copy` and immutable, so they can be shared freely between threads.
//!
//! Transcendental endpoints come from the platform libm and are widened by
//! [`round::LIBM_ULPS`] ulps on each side.

mod expint;
pub(crate) mod round;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::Rational64;

use crate::error::{Error, Result};
use round::{
    add_down, add_up, div_down, div_up, mul_down, mul_up, sqrt_down, sqrt_up, sub_down, sub_up,
    widen_down, widen_up, LIBM_ULPS,
};

pub use expint::{e1, ei_neg};

/// Euler's constant rounded to nearest; the true value is within one ulp.
const EULER_GAMMA_F64: f64 = 0.577_215_664_901_532_9;

#[derive(Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ElemFn {
    Ln,
    Exp,
    Sqrt,
    PowReal(f64),
}

impl Interval {
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };
    pub const ONE: Interval = Interval { lo: 1.0, hi: 1.0 };

    /// The exact pair `[lo, hi]`. Rejects NaN, reversed endpoints and
    /// endpoints that cannot bound a real number (`lo = +inf`, `hi = -inf`).
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo > hi || lo == f64::INFINITY || hi == f64::NEG_INFINITY
        {
            return Err(Error::InvalidInterval { lo, hi });
        }
        Ok(Interval { lo, hi })
    }

    /// Degenerate interval at an exactly known double.
    #[inline]
    pub const fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    /// Enclosure of an integer; exact below 2^53.
    pub fn from_u64(n: u64) -> Self {
        let v = n as f64;
        if v as u128 == n as u128 {
            Interval::point(v)
        } else {
            Interval { lo: v.next_down(), hi: v.next_up() }
        }
    }

    /// Enclosure of a decimal literal such as `"9.27436"`.
    pub fn from_decimal(s: &str) -> Result<Self> {
        let t = s.trim();
        let v: f64 = t.parse().map_err(|_| Error::Parse {
            line: 0,
            message: format!("not a decimal number: {s:?}"),
        })?;
        if !v.is_finite() {
            return Err(Error::InvalidInterval { lo: v, hi: v });
        }
        let is_small_int = t.bytes().enumerate().all(|(i, b)| b.is_ascii_digit() || (i == 0 && b == b'-'))
            && v.abs() < 9.007_199_254_740_992e15;
        if is_small_int {
            Ok(Interval::point(v))
        } else {
            // std parsing is correctly rounded, so the literal is within one ulp
            Ok(Interval { lo: v.next_down(), hi: v.next_up() })
        }
    }

    /// `[lo_literal, hi_literal]` with each decimal enclosed outward.
    pub fn from_decimal_bounds(lo: &str, hi: &str) -> Result<Self> {
        let a = Interval::from_decimal(lo)?;
        let b = Interval::from_decimal(hi)?;
        Interval::new(a.lo, b.hi)
    }

    pub fn euler_gamma() -> Self {
        Interval { lo: EULER_GAMMA_F64.next_down(), hi: EULER_GAMMA_F64.next_up() }
    }

    /// Enclosure of the rational `r`.
    pub fn from_rational(r: Rational64) -> Self {
        let n = Interval::from_u64(r.numer().unsigned_abs());
        let n = if *r.numer() < 0 { -n } else { n };
        let d = Interval::from_u64(r.denom().unsigned_abs());
        n.checked_div(d).expect("Ratio denominators are positive")
    }

    #[inline]
    pub fn lo(self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn hi(self) -> f64 {
        self.hi
    }

    pub fn mid(self) -> f64 {
        if self.lo.is_infinite() || self.hi.is_infinite() {
            return if self.lo.is_infinite() { self.hi } else { self.lo };
        }
        self.lo / 2.0 + self.hi / 2.0
    }

    /// Upper bound on `hi - lo`.
    pub fn width(self) -> f64 {
        sub_up(self.hi, self.lo)
    }

    pub fn is_point(self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_zero(self) -> bool {
        self.contains(0.0)
    }

    pub fn is_subset_of(self, other: Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn hull(self, other: Interval) -> Interval {
        Interval { lo: self.lo.min(other.lo), hi: self.hi.max(other.hi) }
    }

    pub fn intersect(self, other: Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Interval { lo, hi })
    }

    /// Certainly strictly positive.
    pub fn is_positive(self) -> bool {
        self.lo > 0.0
    }

    pub fn abs(self) -> Interval {
        if self.lo >= 0.0 {
            self
        } else if self.hi <= 0.0 {
            -self
        } else {
            Interval { lo: 0.0, hi: (-self.lo).max(self.hi) }
        }
    }

    /// Endpoint-wise `max(self, other)`.
    pub fn max(self, other: Interval) -> Interval {
        Interval { lo: self.lo.max(other.lo), hi: self.hi.max(other.hi) }
    }

    pub fn min(self, other: Interval) -> Interval {
        Interval { lo: self.lo.min(other.lo), hi: self.hi.min(other.hi) }
    }

    /// `max(0, self)`.
    pub fn clamp_nonnegative(self) -> Interval {
        Interval { lo: self.lo.max(0.0), hi: self.hi.max(0.0) }
    }

    pub fn square(self) -> Interval {
        let a = self.abs();
        Interval { lo: mul_down(a.lo, a.lo), hi: mul_up(a.hi, a.hi) }
    }

    pub fn checked_div(self, rhs: Interval) -> Result<Interval> {
        if rhs.contains_zero() {
            return Err(Error::DivisionByZero { lo: rhs.lo, hi: rhs.hi });
        }
        let cands_lo = [
            div_down(self.lo, rhs.lo),
            div_down(self.lo, rhs.hi),
            div_down(self.hi, rhs.lo),
            div_down(self.hi, rhs.hi),
        ];
        let cands_hi = [
            div_up(self.lo, rhs.lo),
            div_up(self.lo, rhs.hi),
            div_up(self.hi, rhs.lo),
            div_up(self.hi, rhs.hi),
        ];
        Ok(Interval { lo: min4(cands_lo), hi: max4(cands_hi) })
    }

    pub fn recip(self) -> Result<Interval> {
        Interval::ONE.checked_div(self)
    }

    pub fn arith(self, rhs: Interval, op: ArithOp) -> Result<Interval> {
        match op {
            ArithOp::Add => Ok(self + rhs),
            ArithOp::Sub => Ok(self - rhs),
            ArithOp::Mul => Ok(self * rhs),
            ArithOp::Div => self.checked_div(rhs),
        }
    }

    pub fn elem(self, f: ElemFn) -> Result<Interval> {
        match f {
            ElemFn::Ln => self.ln(),
            ElemFn::Exp => Ok(self.exp()),
            ElemFn::Sqrt => self.sqrt(),
            ElemFn::PowReal(e) => self.powf(e),
        }
    }

    pub fn sqrt(self) -> Result<Interval> {
        if self.lo < 0.0 {
            return Err(self.domain("sqrt"));
        }
        Ok(Interval { lo: sqrt_down(self.lo), hi: sqrt_up(self.hi) })
    }

    pub fn ln(self) -> Result<Interval> {
        if self.lo <= 0.0 {
            return Err(self.domain("ln"));
        }
        Ok(Interval { lo: ln_down(self.lo), hi: ln_up(self.hi) })
    }

    /// `ln(1 + x)`, accurate for tiny `x`.
    pub fn ln_1p(self) -> Result<Interval> {
        if self.lo <= -1.0 {
            return Err(self.domain("ln_1p"));
        }
        Ok(Interval { lo: ln_1p_down(self.lo), hi: ln_1p_up(self.hi) })
    }

    pub fn exp(self) -> Interval {
        Interval { lo: exp_down(self.lo), hi: exp_up(self.hi) }
    }

    /// Integer power.
    pub fn powi(self, n: i32) -> Result<Interval> {
        if n < 0 {
            return self.powi(-n)?.recip();
        }
        let n = n as u32;
        if n == 0 {
            return Ok(Interval::ONE);
        }
        let (lo_abs, hi_abs) = if self.lo >= 0.0 {
            (self.lo, self.hi)
        } else if self.hi <= 0.0 {
            (-self.hi, -self.lo)
        } else {
            (0.0, (-self.lo).max(self.hi))
        };
        let p_lo = pow_u_down(lo_abs, n);
        let p_hi = pow_u_up(hi_abs, n);
        if n.is_multiple_of(2) || self.lo >= 0.0 {
            Ok(Interval { lo: p_lo, hi: p_hi })
        } else if self.hi <= 0.0 {
            Ok(Interval { lo: -p_hi, hi: -p_lo })
        } else {
            Ok(Interval { lo: -pow_u_up(-self.lo, n), hi: pow_u_up(self.hi, n) })
        }
    }

    /// `x^e` for a double exponent `e` taken as exact. Non-integer exponents
    /// need `lo >= 0`, negative ones `lo > 0`.
    pub fn powf(self, e: f64) -> Result<Interval> {
        if e.is_nan() {
            return Err(self.domain("powf"));
        }
        if e == e.trunc() && e.abs() < 1024.0 {
            return self.powi(e as i32);
        }
        if self.lo < 0.0 || (e < 0.0 && self.lo == 0.0) {
            return Err(self.domain("powf"));
        }
        if e > 0.0 {
            Ok(Interval { lo: powf_down(self.lo, e), hi: powf_up(self.hi, e) })
        } else {
            Ok(Interval { lo: powf_down(self.hi, e), hi: powf_up(self.lo, e) })
        }
    }

    /// `x^r` for an exact rational exponent, via `exp(r ln x)` with `r`
    /// enclosed, so exponents like 1/5 are not rounded to a double first.
    pub fn pow_rational(self, r: Rational64) -> Result<Interval> {
        if *r.denom() == 1 {
            let n = i32::try_from(*r.numer())
                .map_err(|_| Error::Parameter(format!("exponent {r} too large")))?;
            return self.powi(n);
        }
        if self.lo < 0.0 || (*r.numer() < 0 && self.lo == 0.0) {
            return Err(self.domain("pow_rational"));
        }
        let re = Interval::from_rational(r);
        let at = |v: f64| -> Result<Interval> {
            if v == 0.0 {
                return Ok(Interval::ZERO);
            }
            if v == f64::INFINITY {
                return Ok(if *r.numer() > 0 {
                    Interval { lo: f64::MAX, hi: f64::INFINITY }
                } else {
                    Interval::ZERO
                });
            }
            Ok((re * Interval::point(v).ln()?).exp())
        };
        if *r.numer() > 0 {
            Ok(Interval { lo: at(self.lo)?.lo, hi: at(self.hi)?.hi })
        } else {
            Ok(Interval { lo: at(self.hi)?.lo, hi: at(self.lo)?.hi })
        }
    }

    /// Scale by an exactly representable double.
    pub fn scale(self, k: f64) -> Interval {
        self * Interval::point(k)
    }

    fn domain(self, function: &'static str) -> Error {
        Error::Domain { function, lo: self.lo, hi: self.hi }
    }
}

fn min4(v: [f64; 4]) -> f64 {
    v.into_iter().fold(f64::INFINITY, |a, b| if b.is_nan() { a } else { a.min(b) })
}

fn max4(v: [f64; 4]) -> f64 {
    v.into_iter().fold(f64::NEG_INFINITY, |a, b| if b.is_nan() { a } else { a.max(b) })
}

fn pow_u_down(x: f64, n: u32) -> f64 {
    // x >= 0; repeated rounded-down products stay lower bounds
    let mut acc = 1.0;
    let mut base = x;
    let mut k = n;
    while k > 0 {
        if k & 1 == 1 {
            acc = mul_down(acc, base);
        }
        k >>= 1;
        if k > 0 {
            base = mul_down(base, base);
        }
    }
    acc.max(0.0)
}

fn pow_u_up(x: f64, n: u32) -> f64 {
    let mut acc = 1.0;
    let mut base = x;
    let mut k = n;
    while k > 0 {
        if k & 1 == 1 {
            acc = mul_up(acc, base);
        }
        k >>= 1;
        if k > 0 {
            base = mul_up(base, base);
        }
    }
    acc
}

fn ln_down(x: f64) -> f64 {
    if x == 1.0 {
        return 0.0;
    }
    if x == f64::INFINITY {
        return f64::MAX;
    }
    widen_down(x.ln(), LIBM_ULPS)
}

fn ln_up(x: f64) -> f64 {
    if x == 1.0 {
        return 0.0;
    }
    if x == f64::INFINITY {
        return f64::INFINITY;
    }
    widen_up(x.ln(), LIBM_ULPS)
}

fn ln_1p_down(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    if x == f64::INFINITY {
        return f64::MAX;
    }
    widen_down(x.ln_1p(), LIBM_ULPS)
}

fn ln_1p_up(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    widen_up(x.ln_1p(), LIBM_ULPS)
}

fn exp_down(x: f64) -> f64 {
    if x == 0.0 {
        return 1.0;
    }
    let v = x.exp();
    if v == f64::INFINITY {
        return if x.is_finite() { f64::MAX } else { v };
    }
    if v == 0.0 {
        return 0.0;
    }
    widen_down(v, LIBM_ULPS).max(0.0)
}

fn exp_up(x: f64) -> f64 {
    if x == 0.0 {
        return 1.0;
    }
    if x == f64::NEG_INFINITY {
        return 0.0;
    }
    let v = x.exp();
    if v == f64::INFINITY {
        return v;
    }
    widen_up(v, LIBM_ULPS)
}

fn powf_down(x: f64, e: f64) -> f64 {
    if x == 0.0 {
        return if e > 0.0 { 0.0 } else { f64::INFINITY };
    }
    if x == 1.0 {
        return 1.0;
    }
    let v = x.powf(e);
    if v == f64::INFINITY {
        return if x.is_finite() { f64::MAX } else { v };
    }
    if v == 0.0 {
        return 0.0;
    }
    widen_down(v, LIBM_ULPS).max(0.0)
}

fn powf_up(x: f64, e: f64) -> f64 {
    if x == 0.0 {
        return if e > 0.0 { 0.0 } else { f64::INFINITY };
    }
    if x == 1.0 {
        return 1.0;
    }
    let v = x.powf(e);
    if v == f64::INFINITY {
        return v;
    }
    widen_up(v, LIBM_ULPS)
}

impl Add for Interval {
    type Output = Interval;

    #[inline]
    fn add(self, rhs: Interval) -> Interval {
        Interval { lo: add_down(self.lo, rhs.lo), hi: add_up(self.hi, rhs.hi) }
    }
}

impl Sub for Interval {
    type Output = Interval;

    #[inline]
    fn sub(self, rhs: Interval) -> Interval {
        Interval { lo: sub_down(self.lo, rhs.hi), hi: sub_up(self.hi, rhs.lo) }
    }
}

impl Neg for Interval {
    type Output = Interval;

    #[inline]
    fn neg(self) -> Interval {
        Interval { lo: -self.hi, hi: -self.lo }
    }
}

impl Mul for Interval {
    type Output = Interval;

    #[inline]
    fn mul(self, rhs: Interval) -> Interval {
        let (a, b, c, d) = (self.lo, self.hi, rhs.lo, rhs.hi);
        if a >= 0.0 && c >= 0.0 {
            return Interval { lo: mul_down(a, c), hi: mul_up(b, d) };
        }
        let lo = min4([mul_down(a, c), mul_down(a, d), mul_down(b, c), mul_down(b, d)]);
        let hi = max4([mul_up(a, c), mul_up(a, d), mul_up(b, c), mul_up(b, d)]);
        Interval { lo, hi }
    }
}

impl std::iter::Sum for Interval {
    /// Left-to-right accumulation; the order is part of the result.
    fn sum<I: Iterator<Item = Interval>>(iter: I) -> Interval {
        iter.fold(Interval::ZERO, |acc, x| acc + x)
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}]",
            crate::decimal::format_down(self.lo),
            crate::decimal::format_up(self.hi)
        )
    }
}

impl serde::Serialize for Interval {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("Interval", 2)?;
        st.serialize_field("lo", &crate::decimal::format_down(self.lo))?;
        st.serialize_field("hi", &crate::decimal::format_up(self.hi))?;
        st.end()
    }
}

impl<'de> serde::Deserialize<'de> for Interval {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(serde::Deserialize)]
        struct Raw {
            lo: String,
            hi: String,
        }
        let raw = Raw::deserialize(deserializer)?;
        let lo = crate::decimal::parse_down(&raw.lo).map_err(serde::de::Error::custom)?;
        let hi = crate::decimal::parse_up(&raw.hi).map_err(serde::de::Error::custom)?;
        Interval::new(lo, hi).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ulp(x: f64) -> f64 {
        x.abs().next_up() - x.abs()
    }

    #[test]
    fn make_checks_order_and_nan() {
        assert_eq!(Interval::new(0.0, 0.0).unwrap(), Interval::ZERO);
        let g = Interval::new(0.5772156, 0.5772157).unwrap();
        assert_eq!((g.lo(), g.hi()), (0.5772156, 0.5772157));
        assert!(Interval::new(1.0, 0.0).is_err());
        assert!(Interval::new(f64::NAN, 1.0).is_err());
        assert!(Interval::new(0.0, f64::INFINITY).is_ok());
    }

    #[test]
    fn exact_arithmetic() {
        let a = Interval::point(1.0) + Interval::point(2.0);
        assert_eq!(a, Interval::point(3.0));
        let m = Interval::new(-1.0, 2.0).unwrap() * Interval::point(3.0);
        assert_eq!(m, Interval::new(-3.0, 6.0).unwrap());
    }

    #[test]
    fn one_third_is_tight() {
        let q = Interval::ONE.checked_div(Interval::point(3.0)).unwrap();
        // the double nearest 1/3 lies below it
        assert!(q.lo() <= 1.0 / 3.0 && q.hi() >= (1.0f64 / 3.0).next_up());
        assert!(q.hi() - q.lo() <= 2.0 * ulp(1.0 / 3.0));
    }

    #[test]
    fn division_by_zero_interval_is_rejected() {
        let r = Interval::ONE.checked_div(Interval::new(-1.0, 1.0).unwrap());
        assert!(matches!(r, Err(Error::DivisionByZero { .. })));
        assert!(Interval::ONE.arith(Interval::ZERO, ArithOp::Div).is_err());
    }

    #[test]
    fn elementary_domains() {
        assert!(Interval::new(-1.0, 1.0).unwrap().ln().is_err());
        assert!(Interval::point(-1.0).sqrt().is_err());
        assert!(Interval::new(-1.0, 1.0).unwrap().powf(0.5).is_err());
        assert!(Interval::ZERO.powf(-0.5).is_err());
        assert_eq!(Interval::ONE.ln().unwrap(), Interval::ZERO);
        assert_eq!(Interval::ZERO.exp(), Interval::ONE);
    }

    #[test]
    fn ln2_width() {
        let l = Interval::point(2.0).ln().unwrap();
        assert!(l.contains(std::f64::consts::LN_2));
        assert!(l.width() <= 4.0 * ulp(std::f64::consts::LN_2));
    }

    #[test]
    fn exp_underflow_keeps_positive_upper_bound() {
        let e = Interval::point(-4000.0).exp();
        assert_eq!(e.lo(), 0.0);
        assert!(e.hi() > 0.0 && e.hi() < 1e-300);
    }

    #[test]
    fn powi_signs() {
        let x = Interval::new(-2.0, 3.0).unwrap();
        assert_eq!(x.powi(2).unwrap(), Interval::new(0.0, 9.0).unwrap());
        assert_eq!(x.powi(3).unwrap(), Interval::new(-8.0, 27.0).unwrap());
        let inv = Interval::point(2.0).powi(-1).unwrap();
        assert_eq!(inv, Interval::point(0.5));
    }

    #[test]
    fn rational_power_of_four() {
        let r = Interval::point(4.0).pow_rational(Rational64::new(1, 2)).unwrap();
        assert!(r.contains(2.0));
        assert!(r.width() < 1e-14);
        let r = Interval::point(32.0).pow_rational(Rational64::new(-1, 5)).unwrap();
        assert!(r.contains(0.5));
    }

    #[test]
    fn from_rational_encloses() {
        let t = Interval::from_rational(Rational64::new(-2, 5));
        assert!(t.lo() <= -0.4 && t.hi() >= -0.4 && t.lo() < t.hi());
        assert_eq!(Interval::from_rational(Rational64::new(3, 4)), Interval::point(0.75));
    }

    #[test]
    fn decimal_literals() {
        let a = Interval::from_decimal("9.27436").unwrap();
        assert!(a.lo() < 9.27436 && 9.27436 < a.hi());
        assert_eq!(Interval::from_decimal("455052511").unwrap(), Interval::point(455052511.0));
        let c = Interval::from_decimal_bounds("1.320323", "1.320324").unwrap();
        assert!(c.lo() < 1.320323 && c.hi() > 1.320324);
        assert!(Interval::from_decimal("x").is_err());
    }

    #[test]
    fn large_integers_enclosed() {
        let n = Interval::from_u64(3_023_463_123_235_321);
        assert!(n.lo() <= 3.023463123235321e15 && n.hi() >= 3.023463123235321e15);
        let big = Interval::from_u64(u64::MAX);
        assert!(big.lo() < 18446744073709551615.0 && big.hi() >= 18446744073709551615.0);
    }
}
