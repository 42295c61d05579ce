//! Upper bounds for `H(s) = sum_n |g(n)| n^-s` through its Euler product, and
//! an enclosure of the twin prime constant `C = 2 prod_{p>2} p(p-2)/(p-1)^2`.
//!
//! `g` is multiplicative with `g(2) = 0`, `g(4) = -3/4`, `g(8) = 1/4` and,
//! for odd `p`, `g(p) = 4/(p(p-2))`, `g(p^2) = -(3p+2)/(p^2(p-2))`,
//! `g(p^3) = 2/(p^2(p-2))`, vanishing on higher powers. `log H(s)` is the sum
//! over primes of `log(1 + |g(p)| p^-s + |g(p^2)| p^-2s + |g(p^3)| p^-3s)`.
//! Primes up to a cutoff `P` are summed exactly; the rest are bounded by
//! partial summation against `pi(t) <= k2 t / log t`.

use num_rational::{Ratio, Rational64};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::{e1, Interval};
use crate::sieve::{prime_count, scan_chunks, Segment, SegmentSink, SieveConfig};

/// Prime-counting constant: `pi(x) <= (x / log x)(1 + 1.2762 / log x)` for `x > 1`.
pub const DUSART_CONSTANT: &str = "1.2762";

/// Safety factor applied to the dominating constant `k1`.
const K1_MARGIN: f64 = 1.0 + 1e-6;

/// Exact local values of `g` at a prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GFactor {
    pub p: u64,
    /// `[g(p), g(p^2), g(p^3)]`
    pub values: [Ratio<i128>; 3],
}

impl GFactor {
    pub fn new(p: u64) -> Self {
        if p == 2 {
            return GFactor {
                p,
                values: [Ratio::from_integer(0), Ratio::new(-3, 4), Ratio::new(1, 4)],
            };
        }
        let q = p as i128;
        let d = q * q * (q - 2);
        GFactor {
            p,
            values: [Ratio::new(4, q * (q - 2)), Ratio::new(-(3 * q + 2), d), Ratio::new(2, d)],
        }
    }

    /// `g(p^k)`; zero beyond the cube.
    pub fn at_power(&self, k: u32) -> Ratio<i128> {
        match k {
            0 => Ratio::from_integer(1),
            1..=3 => self.values[k as usize - 1],
            _ => Ratio::from_integer(0),
        }
    }
}

fn check_s(s: Rational64) -> Result<()> {
    if s <= Rational64::new(-1, 2) {
        return Err(Error::Parameter(format!("s = {s} must exceed -1/2")));
    }
    Ok(())
}

/// Enclosure of `log` of the local factor of `H(s)` at the prime `p`.
pub fn g_factor_log(p: u64, s: Rational64) -> Result<Interval> {
    check_s(s)?;
    if p < 2 {
        return Err(Error::Parameter(format!("{p} is not a prime")));
    }
    let t = Interval::from_u64(p);
    let x = t.pow_rational(-s)?;
    let y = if p == 2 {
        Interval::from_rational(Rational64::new(3, 4)) * x.square()
            + Interval::from_rational(Rational64::new(1, 4)) * x.powi(3)?
    } else {
        let tm2 = t - Interval::point(2.0);
        let d = t.square() * tm2;
        let a = Interval::point(4.0).checked_div(t * tm2)?;
        let b = (t.scale(3.0) + Interval::point(2.0)).checked_div(d)?;
        let c = Interval::point(2.0).checked_div(d)?;
        a * x + b * x.square() + c * x.powi(3)?
    };
    y.ln_1p()
}

/// Tail exponent `e = 2 + 2s` with `t^e (factor(t) - 1)` bounded.
fn tail_exponent(s: Rational64) -> Rational64 {
    Rational64::from_integer(2) + s * 2
}

/// `t^e (factor(t) - 1)` at `t`; decreasing in `t > 2` for `-1/2 < s < 0`.
fn k1_function(t: Interval, s: Rational64) -> Result<Interval> {
    let e = tail_exponent(s);
    let log_factor = g_factor_log_interval(t, s)?;
    Ok(t.pow_rational(e)? * (log_factor.exp() - Interval::ONE))
}

/// `g_factor_log` at a real (interval) argument `t > 2`.
fn g_factor_log_interval(t: Interval, s: Rational64) -> Result<Interval> {
    let x = t.pow_rational(-s)?;
    let tm2 = t - Interval::point(2.0);
    let d = t.square() * tm2;
    let a = Interval::point(4.0).checked_div(t * tm2)?;
    let b = (t.scale(3.0) + Interval::point(2.0)).checked_div(d)?;
    let c = Interval::point(2.0).checked_div(d)?;
    (a * x + b * x.square() + c * x.powi(3)?).ln_1p()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HBoundReport {
    pub cutoff: u64,
    pub s: String,
    /// `e` in the dominating form `log(1 + k1 t^-e)`.
    pub tail_exponent: String,
    pub prime_count: u64,
    pub s1: Interval,
    pub tail_first_term: Interval,
    pub tail_integral: Interval,
    /// Upper enclosure of `log H(s)`.
    pub log_h_bound: Interval,
    /// `[exp(S1), exp(S1 + tail)]`, an enclosure of `H(s)`.
    pub h_bound: Interval,
    pub k1: f64,
    pub k2: f64,
    /// The tail dominates the estimate and the bound is of little use.
    pub weak: bool,
}

/// Terms per partial block; blocks start from zero so small terms are not
/// swamped by the rounding of a large running total.
const BLOCK: u32 = 256;

struct LogSum<'a, F> {
    f: &'a F,
    acc: Interval,
    block: Interval,
    block_len: u32,
    count: u64,
    err: Option<Error>,
}

impl<F> LogSum<'_, F> {
    fn flush(&mut self) {
        self.acc = self.acc + self.block;
        self.block = Interval::ZERO;
        self.block_len = 0;
    }
}

impl<F: Fn(u64) -> Result<Interval>> SegmentSink for LogSum<'_, F> {
    fn visit(&mut self, segment: &Segment) {
        if self.err.is_some() {
            return;
        }
        for p in segment.primes() {
            match (self.f)(p) {
                Ok(v) => {
                    self.block = self.block + v;
                    self.block_len += 1;
                    if self.block_len == BLOCK {
                        self.flush();
                    }
                }
                Err(e) => {
                    self.err = Some(e);
                    return;
                }
            }
            self.count += 1;
        }
    }
}

/// Sum of `f(p)` over odd primes `p <= limit`, accumulated per sieve chunk
/// and merged in ascending order, together with the number of such primes.
pub fn odd_prime_sum<F>(limit: u64, cfg: &SieveConfig, f: F) -> Result<(Interval, u64)>
where
    F: Fn(u64) -> Result<Interval> + Sync,
{
    if limit < 3 {
        return Ok((Interval::ZERO, 0));
    }
    let parts = scan_chunks(3, limit + 1, cfg, |_| LogSum {
        f: &f,
        acc: Interval::ZERO,
        block: Interval::ZERO,
        block_len: 0,
        count: 0,
        err: None,
    })?;
    let mut acc = Interval::ZERO;
    let mut count = 0;
    for (_, mut sink) in parts {
        if let Some(e) = sink.err {
            return Err(e);
        }
        sink.flush();
        acc = acc + sink.acc;
        count += sink.count;
    }
    Ok((acc, count))
}

/// `k2 = 1 + 1.2762 / log P`.
fn k2_for(log_p: Interval) -> Result<Interval> {
    Ok(Interval::ONE + Interval::from_decimal(DUSART_CONSTANT)?.checked_div(log_p)?)
}

/// Upper bound for `H(s)`, `-1/2 < s < 0`, from the primes up to `cutoff`.
pub fn h_bound(cutoff: u64, s: Rational64, cfg: &SieveConfig) -> Result<HBoundReport> {
    check_s(s)?;
    if s >= Rational64::from_integer(0) {
        return Err(Error::Parameter(format!("s = {s} must be negative")));
    }
    if cutoff <= 2 {
        return Err(Error::NoAdmissibleK1 { cutoff, reason: "cutoff must exceed 2".into() });
    }
    let (odd, odd_count) = odd_prime_sum(cutoff, cfg, |p| g_factor_log(p, s))?;
    let s1 = g_factor_log(2, s)? + odd;
    let pi = odd_count + 1;

    let p = Interval::from_u64(cutoff);
    let e = tail_exponent(s);
    let ei = Interval::from_rational(e);
    let k1_at = k1_function(p, s)?;
    let k1 = (k1_at.hi() * K1_MARGIN).next_up();
    if !k1.is_finite() {
        return Err(Error::NoAdmissibleK1 { cutoff, reason: format!("k1(P) = {k1_at} is not finite") });
    }
    let k1i = Interval::point(k1);
    let dom_at_p = (k1i * p.pow_rational(-e)?).ln_1p()?;
    let g_at_p = g_factor_log(cutoff, s)?;
    if !(dom_at_p.lo() >= g_at_p.hi()) {
        return Err(Error::NoAdmissibleK1 {
            cutoff,
            reason: format!("log(1 + k1 P^-e) = {dom_at_p} does not dominate {g_at_p}"),
        });
    }

    let log_p = p.ln()?;
    let k2 = k2_for(log_p)?;
    let first = -(dom_at_p * Interval::from_u64(pi));
    let e1_arg = (ei - Interval::ONE) * log_p;
    let integral = ei * k1i * k2 * e1(e1_arg)?;
    let log_h = s1 + first + integral;
    let upper = log_h.exp().hi();
    let lower = s1.exp().lo();
    let h = Interval::new(lower, upper.max(lower))?;
    Ok(HBoundReport {
        cutoff,
        s: s.to_string(),
        tail_exponent: e.to_string(),
        prime_count: pi,
        s1,
        tail_first_term: first,
        tail_integral: integral,
        log_h_bound: log_h,
        h_bound: h,
        k1,
        k2: k2.hi(),
        weak: integral.hi() > 1.0,
    })
}

/// Check `log(1 + k1 t^-e) >= g(t, s)` at sample points `t` (interval
/// evaluation, both sides outward).
pub fn dominates_at(k1: f64, s: Rational64, t: f64) -> Result<bool> {
    let ti = Interval::point(t);
    let e = tail_exponent(s);
    let lhs = (Interval::point(k1) * ti.pow_rational(-e)?).ln_1p()?;
    let rhs = g_factor_log_interval(ti, s)?;
    Ok(lhs.lo() >= rhs.hi())
}

/// Enclosure of the twin prime constant from the primes up to `cutoff`.
///
/// The partial product is an upper bound. The tail
/// `-sum_{p>P} log(1 - 1/(p-1)^2)` is at most
/// `(1 - 1/P^2)^-1 sum_{p>P} (p-1)^-2`, and partial summation with
/// `pi(t) <= k2 t/log t` bounds that sum by
/// `-pi(P)/(P-1)^2 + (2 k2/log P)(1/(P-1) + 1/(2(P-1)^2))`.
pub fn twin_constant(cutoff: u64, cfg: &SieveConfig) -> Result<Interval> {
    if cutoff < 3 {
        return Err(Error::Parameter(format!("cutoff {cutoff} must be at least 3")));
    }
    let (log_prod, _) = odd_prime_sum(cutoff, cfg, |p| {
        let q = Interval::from_u64(p - 1);
        (-(q.square().recip()?)).ln_1p()
    })?;
    let pi = prime_count(cutoff, cfg)?;
    let p = Interval::from_u64(cutoff);
    let pm1 = p - Interval::ONE;
    let log_p = p.ln()?;
    let k2 = k2_for(log_p)?;
    let inv = pm1.recip()?;
    let inv2 = inv.square();
    let sum_bound = -(Interval::from_u64(pi) * inv2)
        + k2.scale(2.0).checked_div(log_p)? * (inv + inv2.scale(0.5));
    let scale = (Interval::ONE - p.square().recip()?).recip()?;
    let tail = (scale * sum_bound).clamp_nonnegative();
    let upper = (log_prod.exp()).scale(2.0);
    let lower = (log_prod - tail).exp().scale(2.0);
    Interval::new(lower.lo(), upper.hi())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> SieveConfig {
        SieveConfig::default()
    }

    #[test]
    fn local_values() {
        let g2 = GFactor::new(2);
        assert_eq!(g2.at_power(1), Ratio::from_integer(0));
        assert_eq!(g2.at_power(2), Ratio::new(-3, 4));
        assert_eq!(g2.at_power(3), Ratio::new(1, 4));
        let g3 = GFactor::new(3);
        assert_eq!(g3.at_power(1), Ratio::new(4, 3));
        assert_eq!(g3.at_power(2), Ratio::new(-11, 9));
        assert_eq!(g3.at_power(3), Ratio::new(2, 9));
        assert_eq!(g3.at_power(4), Ratio::from_integer(0));
    }

    #[test]
    fn factor_at_two_and_zero_exponent() {
        let v = g_factor_log(2, Rational64::from_integer(0)).unwrap();
        assert!(v.contains(std::f64::consts::LN_2));
    }

    #[test]
    fn factor_at_three() {
        // log(1 + (4/3) 3^0.4 + (11/9) 3^0.8 + (2/9) 3^1.2)
        let v = g_factor_log(3, Rational64::new(-2, 5)).unwrap();
        let x: f64 = 3f64.powf(0.4);
        let expect = (1.0 + 4.0 / 3.0 * x + 11.0 / 9.0 * x * x + 2.0 / 9.0 * x * x * x).ln();
        assert!((v.mid() - expect).abs() < 1e-14);
        assert!((v.mid() - 1.923_226_297_938).abs() < 1e-11);
        assert!(v.width() < 1e-14);
    }

    #[test]
    fn rejects_bad_s() {
        assert!(g_factor_log(3, Rational64::new(-1, 2)).is_err());
        assert!(h_bound(100, Rational64::new(-3, 5), &cfg()).is_err());
        assert!(h_bound(2, Rational64::new(-2, 5), &cfg()).is_err());
    }

    #[test]
    fn k1_decreases_and_dominates() {
        let s = Rational64::new(-2, 5);
        let a = k1_function(Interval::point(1e4), s).unwrap();
        let b = k1_function(Interval::point(1e5), s).unwrap();
        assert!(b.hi() < a.lo());
        let r = h_bound(10_000, s, &cfg()).unwrap();
        for t in [1e4, 2e4, 1e5, 1e7, 1e12, 1e20] {
            assert!(dominates_at(r.k1, s, t).unwrap(), "t = {t}");
        }
    }

    #[test]
    fn small_cutoff_is_weak() {
        let r = h_bound(10, Rational64::new(-2, 5), &cfg()).unwrap();
        assert!(r.weak);
        assert!(r.h_bound.hi().is_finite());
    }

    #[test]
    fn h_bound_structure() {
        let r = h_bound(100_000, Rational64::new(-2, 5), &cfg()).unwrap();
        assert_eq!(r.prime_count, 9592);
        assert!(r.h_bound.hi() >= r.s1.exp().lo());
        assert!(r.tail_first_term.hi() < 0.0);
        assert!(r.tail_integral.lo() > 0.0);
        assert!(!r.weak);
    }

    #[test]
    fn twin_constant_small() {
        let c = twin_constant(3, &cfg()).unwrap();
        assert!(c.hi() >= 1.5 && c.hi() < 1.5 + 1e-14);
        assert!(c.contains(1.320_323_631_693_739));
        let a = twin_constant(1000, &cfg()).unwrap();
        let b = twin_constant(100_000, &cfg()).unwrap();
        assert!(a.contains(1.320_323_631_693_739) && b.contains(1.320_323_631_693_739));
        assert!(b.width() < a.width());
    }
}
