//! Exponential integrals `E1(y)` for `y > 0` and `Ei(x)` for `x < 0`.
//!
//! Small arguments use the alternating power series
//! `E1(y) = -gamma - ln y + sum_{k>=1} (-1)^(k+1) y^k / (k k!)`, whose terms
//! decrease monotonically for `y < 2`, so the first omitted term bounds the
//! remainder. Larger arguments use the continued fraction
//! `E1(y) = e^-y / (y + 1/(1 + 1/(y + 2/(1 + 2/(y + ...)))))`; all of its
//! partial numerators and denominators are positive, so consecutive
//! convergents bracket the limit and their hull is an enclosure.

use super::Interval;
use crate::error::{Error, Result};

const SERIES_LIMIT: f64 = 2.0;
/// Series terms are dropped once below this; far under one ulp of any
/// result the series produces.
const SERIES_TAIL: f64 = 1e-22;
const MAX_CF_DEPTH: usize = 1 << 14;

/// `E1` over an interval with `lo > 0`; `E1` is decreasing.
pub fn e1(y: Interval) -> Result<Interval> {
    if !(y.lo() > 0.0) {
        return Err(Error::Domain { function: "e1", lo: y.lo(), hi: y.hi() });
    }
    let right = e1_point(y.hi())?;
    let left = e1_point(y.lo())?;
    Interval::new(right.lo(), left.hi())
}

/// `Ei` over an interval strictly left of the logarithmic singularity at 0.
pub fn ei_neg(x: Interval) -> Result<Interval> {
    if !(x.hi() < 0.0) {
        return Err(Error::Domain { function: "ei_neg", lo: x.lo(), hi: x.hi() });
    }
    Ok(-e1(-x)?)
}

fn e1_point(y: f64) -> Result<Interval> {
    if y == f64::INFINITY {
        return Ok(Interval::ZERO);
    }
    if y < SERIES_LIMIT {
        e1_series(y)
    } else {
        e1_continued_fraction(y)
    }
}

fn e1_series(y: f64) -> Result<Interval> {
    let yi = Interval::point(y);
    // power = y^k / k!
    let mut power = yi;
    let mut sum = Interval::ZERO;
    let mut k: u64 = 1;
    let remainder = loop {
        let term = power.checked_div(Interval::from_u64(k))?;
        sum = if k % 2 == 1 { sum + term } else { sum - term };
        power = (power * yi).checked_div(Interval::from_u64(k + 1))?;
        let next = power.checked_div(Interval::from_u64(k + 1))?;
        if next.hi() < SERIES_TAIL || k > 200 {
            break next.hi();
        }
        k += 1;
    };
    let head = -Interval::euler_gamma() - yi.ln()?;
    Ok(head + sum + Interval::new(-remainder, remainder)?)
}

fn convergent(y: Interval, depth: usize) -> Result<Interval> {
    let mut tail = Interval::ZERO;
    for i in (1..=depth).rev() {
        let (a, b) = if i == 1 {
            (Interval::ONE, y)
        } else if i % 2 == 0 {
            (Interval::from_u64((i / 2) as u64), Interval::ONE)
        } else {
            (Interval::from_u64((i / 2) as u64), y)
        };
        tail = a.checked_div(b + tail)?;
    }
    Ok(tail)
}

fn e1_continued_fraction(y: f64) -> Result<Interval> {
    let yi = Interval::point(y);
    let mut depth = 8;
    let bracket = loop {
        let a = convergent(yi, depth)?;
        let b = convergent(yi, depth + 1)?;
        let hull = a.hull(b);
        let rounding = a.width().max(b.width());
        if hull.width() <= 2.0 * rounding || depth >= MAX_CF_DEPTH {
            break hull;
        }
        depth *= 2;
    };
    Ok((-yi).exp() * bracket)
}
