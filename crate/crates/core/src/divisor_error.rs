//! The error term of the divisor sum,
//! `E(x) = sum_{n <= x} d(n)/n - (1/2)log^2 x - 2 g0 log x - g0^2 + 2 g1`,
//! and numeric searches for constants `c` with `|E(x)| x^a <= c`.
//!
//! `g0` and `g1` are the Stieltjes constants, entered as short decimal
//! enclosures. `E` is smooth on every `[n, n+1)` and jumps at integers. On
//! each such piece `(S - P(L)) e^{aL}` with `L = log x`, `S` the frozen sum
//! and `P` the quadratic above has critical points given by a quadratic in
//! `L`, so the scan evaluates those exactly in addition to a regular grid.

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::Interval;

/// `0.5772156 < g0 < 0.5772157`
pub fn gamma0() -> Interval {
    Interval::from_decimal_bounds("0.5772156", "0.5772157").expect("literal")
}

/// `-0.0728159 < g1 < -0.0728158`
pub fn gamma1() -> Interval {
    Interval::from_decimal_bounds("-0.0728159", "-0.0728158").expect("literal")
}

/// `g0^2 - 2 g1`, the constant of the main term.
fn main_constant() -> Interval {
    gamma0().square() - gamma1().scale(2.0)
}

const HARMONIC_DIRECT: u64 = 64;

/// Enclosure of the harmonic number `H_m`.
///
/// Beyond a small cutoff this is the Euler-Maclaurin expansion
/// `log m + gamma + 1/(2m) - 1/(12m^2) + 1/(120m^4)`, whose remainder lies
/// in `(-1/(252 m^6), 0)`. Here `gamma` is the tight enclosure of Euler's
/// constant, not the short literal used for `E`.
pub fn harmonic(m: u64) -> Interval {
    if m <= HARMONIC_DIRECT {
        return (1..=m).map(|k| Interval::from_u64(k).recip().expect("k > 0")).sum();
    }
    let mi = Interval::from_u64(m);
    let inv = mi.recip().expect("m > 0");
    let inv2 = inv.square();
    let inv4 = inv2.square();
    let rem = (inv4 * inv2).checked_div(Interval::point(252.0)).expect("nonzero").hi();
    mi.ln().expect("m > 0") + Interval::euler_gamma() + inv.scale(0.5)
        - inv2.checked_div(Interval::point(12.0)).expect("nonzero")
        + inv4.checked_div(Interval::point(120.0)).expect("nonzero")
        + Interval::new(-rem, 0.0).expect("ordered")
}

/// Enclosure of `sum_{n <= x} d(n)/n`, by the hyperbola identity
/// `2 sum_{a <= r} H(N/a)/a - H(r)^2` with `N = floor(x)`, `r = floor(sqrt N)`.
pub fn divisor_sum(x: f64) -> Result<Interval> {
    if !(x > 0.0) || !x.is_finite() || x >= 9.007_199_254_740_992e15 {
        return Err(Error::Domain { function: "divisor_sum", lo: x, hi: x });
    }
    let n = x.floor() as u64;
    if n == 0 {
        return Ok(Interval::ZERO);
    }
    let r = n.isqrt();
    let mut acc = Interval::ZERO;
    for a in 1..=r {
        acc = acc + harmonic(n / a).checked_div(Interval::from_u64(a))?;
    }
    Ok(acc.scale(2.0) - harmonic(r).square())
}

/// `(1/2)L^2 + 2 g0 L + g0^2 - 2 g1` at `L = log x`.
fn main_term(log_x: Interval) -> Interval {
    log_x.square().scale(0.5) + gamma0().scale(2.0) * log_x + main_constant()
}

/// Enclosure of `E(x)` for `x > 0`.
pub fn divisor_error(x: f64) -> Result<Interval> {
    let sum = divisor_sum(x)?;
    Ok(sum - main_term(Interval::point(x).ln()?))
}

/// Enclosure of `|E(x)| x^alpha` given the enclosure `sum` of the divisor sum at `x`.
fn weighted(sum: Interval, x: f64, alpha: Interval) -> Result<Interval> {
    let l = Interval::point(x).ln()?;
    let e = sum - main_term(l);
    Ok(e.abs() * (alpha * l).exp())
}

/// Which sample points a scan visits.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    /// Upper end of the integer range `[1, x_max]`.
    pub x_max: u64,
    /// Regular samples `n + j/offsets` inside each `[n, n+1)`.
    pub offsets_per_unit: u32,
    /// Include `(0, 1)`, where the divisor sum vanishes.
    pub unit_interval: bool,
    /// Include `[1, x_max]`.
    pub integer_range: bool,
    /// Add the analytic critical points of every piece.
    pub critical_points: bool,
    /// Extra log-spaced samples on `(0, 1)`, for cross-checking.
    pub unit_samples: u32,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            x_max: 100_000,
            offsets_per_unit: 8,
            unit_interval: true,
            integer_range: true,
            critical_points: true,
            unit_samples: 0,
        }
    }
}

impl GridSpec {
    pub fn unit_only() -> Self {
        GridSpec { integer_range: false, ..GridSpec::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DivisorErrorScan {
    pub alpha: String,
    pub grid: GridSpec,
    pub samples: u64,
    /// Enclosure of the largest sampled `|E(x)| x^alpha`.
    pub max_value: Interval,
    pub argmax: f64,
    /// The same maximum restricted to `(0, 1)`, if scanned.
    pub unit_max: Option<Interval>,
    pub unit_argmax: Option<f64>,
}

#[derive(Default)]
struct Best {
    value: Option<Interval>,
    arg: f64,
    samples: u64,
}

impl Best {
    fn offer(&mut self, v: Interval, x: f64) {
        self.samples += 1;
        match self.value {
            Some(cur) if v.hi() <= cur.hi() => {
                self.value = Some(Interval::new(cur.lo().max(v.lo()), cur.hi()).expect("ordered"));
            }
            Some(cur) => {
                self.value = Some(Interval::new(cur.lo().max(v.lo()), v.hi()).expect("ordered"));
                self.arg = x;
            }
            None => {
                self.value = Some(v);
                self.arg = x;
            }
        }
    }
}

/// Critical points in `x` of `(s - P(log x)) x^a` inside `[lo, hi)`.
fn critical_points(s: f64, a: f64, lo: f64, hi: f64) -> Vec<f64> {
    let g0 = gamma0().mid();
    let c0 = main_constant().mid();
    // -(a/2) L^2 - (1 + 2 a g0) L + (a (s - c0) - 2 g0) = 0
    let qa = -a / 2.0;
    let qb = -(1.0 + 2.0 * a * g0);
    let qc = a * (s - c0) - 2.0 * g0;
    let disc = qb * qb - 4.0 * qa * qc;
    if disc < 0.0 {
        return Vec::new();
    }
    let sq = disc.sqrt();
    [(-qb + sq) / (2.0 * qa), (-qb - sq) / (2.0 * qa)]
        .into_iter()
        .map(f64::exp)
        .filter(|&x| x > lo && x < hi && x.is_finite())
        .collect()
}

fn check_alpha(alpha: Rational64) -> Result<()> {
    if alpha <= Rational64::from_integer(0) || alpha >= Rational64::new(1, 2) {
        return Err(Error::Parameter(format!("alpha = {alpha} must lie in (0, 1/2)")));
    }
    Ok(())
}

/// Grid maximum of `|E(x)| x^alpha`.
pub fn scan_c(alpha: Rational64, grid: &GridSpec) -> Result<DivisorErrorScan> {
    check_alpha(alpha)?;
    let ai = Interval::from_rational(alpha);
    let af = ai.mid();
    let mut best = Best::default();
    let mut unit = Best::default();

    if grid.unit_interval {
        // the value approaches |g0^2 - 2 g1| as x -> 1 from the left
        let limit = main_constant().abs();
        unit.offer(limit, 1.0);
        if grid.critical_points {
            for x in critical_points(0.0, af, 0.0, 1.0) {
                unit.offer(weighted(Interval::ZERO, x, ai)?, x);
            }
        }
        for i in 0..grid.unit_samples {
            // log-spaced over [1e-12, 1)
            let t = i as f64 / grid.unit_samples as f64;
            let x = (-12.0 * (1.0 - t) * std::f64::consts::LN_10).exp();
            unit.offer(weighted(Interval::ZERO, x, ai)?, x);
        }
        if let Some(v) = unit.value {
            best.offer(v, unit.arg);
            best.samples += unit.samples - 1;
        }
    }

    if grid.integer_range && grid.x_max >= 1 {
        let n_max = grid.x_max as usize;
        let mut d = vec![0u32; n_max + 1];
        for i in 1..=n_max {
            for j in (i..=n_max).step_by(i) {
                d[j] += 1;
            }
        }
        let k = grid.offsets_per_unit.max(1);
        let mut sum = Interval::ZERO;
        for n in 1..=grid.x_max {
            sum = sum + Interval::from_u64(d[n as usize] as u64).checked_div(Interval::from_u64(n))?;
            let nf = n as f64;
            let next = (n + 1) as f64;
            for j in 0..k {
                let x = nf + j as f64 / k as f64;
                best.offer(weighted(sum, x, ai)?, x);
            }
            // left limit at n + 1, where the sum still equals S(n)
            best.offer(weighted(sum, next, ai)?, next);
            if grid.critical_points {
                for x in critical_points(sum.mid(), af, nf, next) {
                    best.offer(weighted(sum, x, ai)?, x);
                }
            }
        }
    }

    let max_value = best.value.ok_or_else(|| Error::Parameter("empty scan grid".into()))?;
    Ok(DivisorErrorScan {
        alpha: alpha.to_string(),
        grid: grid.clone(),
        samples: best.samples,
        max_value,
        argmax: best.arg,
        unit_max: unit.value,
        unit_argmax: unit.value.map(|_| unit.arg),
    })
}

/// Enclosure of `|E(x)| x^alpha` at a single point.
pub fn weighted_error(x: f64, alpha: Rational64) -> Result<Interval> {
    check_alpha(alpha)?;
    weighted(divisor_sum(x)?, x, Interval::from_rational(alpha))
}
