//! Randomized and exhaustive checks shared by the integration tests and the
//! acceptance suite. Each check returns a [`Report`] instead of panicking so
//! callers can print a summary line.

#![allow(dead_code)]

pub mod oracle;

use std::collections::BTreeMap;

use brun_core::euler_product::GFactor;
use brun_core::interval::{Interval, e1};
use brun_core::jet::Jet;
use brun_core::quadrature::{integrate, JetFn, QuadratureOptions};
use brun_core::tables::{bracket_contribution, CensusTableEntry};
use num_rational::Ratio;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use oracle::{Bound, Op};

#[derive(Debug, Default)]
pub struct Report {
    pub checked: u64,
    pub violations: Vec<String>,
}

impl Report {
    fn fail(&mut self, msg: String) {
        if self.violations.len() < 20 {
            self.violations.push(msg);
        } else if self.violations.len() == 20 {
            self.violations.push("...".into());
        }
    }

    pub fn ok(&self) -> bool {
        self.violations.is_empty() && self.checked > 0
    }
}

/// Magnitudes spread over `2^-40 .. 2^40`, with either sign.
fn wide(rng: &mut StdRng) -> f64 {
    let m: f64 = rng.gen_range(1.0..2.0);
    let e: i32 = rng.gen_range(-40..=40);
    let s = if rng.gen_bool(0.5) { -1.0 } else { 1.0 };
    s * m * 2f64.powi(e)
}

fn interval_around(rng: &mut StdRng, centre: f64) -> Interval {
    let spread = match rng.gen_range(0..3) {
        0 => 0.0,
        1 => centre.abs() * 2f64.powi(-rng.gen_range(1..52)),
        _ => centre.abs() * rng.gen_range(0.0..1.0),
    };
    let a = centre - spread * rng.gen_range(0.0..1.0);
    let b = centre + spread * rng.gen_range(0.0..1.0);
    Interval::new(a.min(b), a.max(b)).expect("ordered")
}

fn pick(rng: &mut StdRng, x: Interval) -> f64 {
    match rng.gen_range(0..3) {
        0 => x.lo(),
        1 => x.hi(),
        _ => {
            let t: f64 = rng.gen_range(0.0..=1.0);
            (x.lo() + t * (x.hi() - x.lo())).clamp(x.lo(), x.hi())
        }
    }
}

/// `cases` random operations; every point image, computed at high precision
/// with directed rounding, must lie inside the interval result.
pub fn interval_soundness(cases: u64, seed: u64) -> Report {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut oracle = oracle::Oracle::new();
    let mut report = Report::default();
    let ops = [Op::Add, Op::Sub, Op::Mul, Op::Div, Op::Sqrt, Op::Exp, Op::Ln, Op::Ln1p, Op::Powi(3), Op::Square];
    for i in 0..cases {
        let op = ops[(i % ops.len() as u64) as usize];
        let centre = match op {
            Op::Sqrt | Op::Ln => wide(&mut rng).abs(),
            Op::Exp => rng.gen_range(-350.0..350.0),
            // stays above -1 because the spread is below the centre's magnitude
            Op::Ln1p => rng.gen_range(-0.5..1e3),
            _ => wide(&mut rng),
        };
        let x = interval_around(&mut rng, centre);
        let centre = wide(&mut rng);
        let y = interval_around(&mut rng, centre);
        let result = match op {
            Op::Add => Ok(x + y),
            Op::Sub => Ok(x - y),
            Op::Mul => Ok(x * y),
            Op::Div => x.checked_div(y),
            Op::Sqrt => x.sqrt(),
            Op::Exp => Ok(x.exp()),
            Op::Ln => x.ln(),
            Op::Ln1p => x.ln_1p(),
            Op::Powi(n) => x.powi(n),
            Op::Square => Ok(x.square()),
        };
        let r = match result {
            Ok(r) => r,
            Err(e) => {
                report.fail(format!("{op:?} on {x:?}, {y:?} failed: {e}"));
                continue;
            }
        };
        for _ in 0..2 {
            let (a, b) = (pick(&mut rng, x), pick(&mut rng, y));
            report.checked += 1;
            match oracle.eval(op, a, b) {
                Bound::Between(lo, hi) => {
                    if !(oracle.le_f64(r.lo(), &hi) && oracle.ge_f64(r.hi(), &lo)) {
                        report.fail(format!("{op:?}({a:e}, {b:e}) escapes {r:?}"));
                    }
                }
                Bound::Skip => report.checked -= 1,
            }
        }
    }
    report
}

/// `int 1/u` and `int 1/u^2` over random ranges against their closed forms.
pub fn quadrature_containment(cases: u64, seed: u64) -> Report {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut oracle = oracle::Oracle::new();
    let mut report = Report::default();
    let opts = QuadratureOptions { width_target: 1e-9, ..Default::default() };
    for i in 0..cases {
        let a: f64 = rng.gen_range(0.5..100.0);
        let b = a + rng.gen_range(0.01..200.0);
        let (got, exact) = if i % 2 == 0 {
            let r = integrate(&JetFn(|u: Jet| u.recip()), a, b, &opts);
            (r, oracle.log_ratio(b, a))
        } else {
            let r = integrate(&JetFn(|u: Jet| (u * u).recip()), a, b, &opts);
            (r, oracle.recip_difference(a, b))
        };
        report.checked += 1;
        match got {
            Ok(r) => {
                if !(oracle.le_f64(r.value.lo(), &exact.1) && oracle.ge_f64(r.value.hi(), &exact.0)) {
                    report.fail(format!("case {i}: [{a}, {b}] gives {:?}", r.value));
                }
            }
            Err(e) => report.fail(format!("case {i}: {e}")),
        }
    }
    report
}

/// Halving the width target nests the enclosure, on a mix of integrands.
pub fn quadrature_refinement(cases: u64, seed: u64) -> Report {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut report = Report::default();
    for i in 0..cases {
        let a: f64 = rng.gen_range(1.0..20.0);
        let b = a + rng.gen_range(0.5..30.0);
        // the e1 closure has no jet, so its cells converge at first order only
        let w: f64 = if i % 2 == 0 { 2f64.powi(-rng.gen_range(14..24)) } else { 2f64.powi(-rng.gen_range(6..11)) };
        let run = |w: f64| {
            let opts = QuadratureOptions { width_target: w, ..Default::default() };
            if i % 2 == 0 {
                integrate(&JetFn(|u: Jet| (u * u.ln()?).recip()), a + 1.0, b + 1.0, &opts)
            } else {
                integrate(&|u: Interval| e1(u), a, b, &opts)
            }
        };
        report.checked += 1;
        match (run(w), run(w / 2.0)) {
            (Ok(c), Ok(f)) => {
                if !f.value.is_subset_of(c.value) {
                    report.fail(format!("case {i}: {:?} not inside {:?}", f.value, c.value));
                }
            }
            (Err(e), _) | (_, Err(e)) => report.fail(format!("case {i}: {e}")),
        }
    }
    report
}

fn factorize(mut n: u64) -> BTreeMap<u64, u32> {
    let mut f = BTreeMap::new();
    let mut d = 2;
    while d * d <= n {
        while n.is_multiple_of(d) {
            *f.entry(d).or_insert(0) += 1;
            n /= d;
        }
        d += 1;
    }
    if n > 1 {
        *f.entry(n).or_insert(0) += 1;
    }
    f
}

/// `g(n)` from the factorization of `n` and the local values.
pub fn g_of(n: u64) -> Ratio<i128> {
    factorize(n)
        .into_iter()
        .map(|(p, k)| GFactor::new(p).at_power(k))
        .fold(Ratio::from_integer(1), |acc, v| acc * v)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

/// `g(mn) = g(m) g(n)` for coprime `m, n` with `mn <= n_max`, and the local
/// identity `1 + g(p) + g(p^2) + g(p^3) = (p-1)^2 / (p(p-2))` for odd `p`.
pub fn g_multiplicativity(n_max: u64) -> Report {
    let mut report = Report::default();
    let g: Vec<Ratio<i128>> = (0..=n_max).map(|n| if n == 0 { Ratio::from_integer(0) } else { g_of(n) }).collect();
    for m in 1..=n_max {
        for n in m..=n_max / m {
            if gcd(m, n) != 1 {
                continue;
            }
            report.checked += 1;
            if g[(m * n) as usize] != g[m as usize] * g[n as usize] {
                report.fail(format!("g({}) != g({m}) g({n})", m * n));
            }
        }
    }
    for p in (3..=n_max).filter(|&p| factorize(p).get(&p) == Some(&1)) {
        let q = p as i128;
        let local = (1..=3).fold(Ratio::from_integer(1), |acc, k| acc + GFactor::new(p).at_power(k));
        report.checked += 1;
        if local != Ratio::new((q - 1) * (q - 1), q * (q - 2)) {
            report.fail(format!("local factor at {p} is {local}"));
        }
    }
    report
}

/// Splitting a bracket at an intermediate entry tightens the enclosure.
pub fn table_refinement(cases: u64, seed: u64) -> Report {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut report = Report::default();
    for i in 0..cases {
        let n: u32 = rng.gen_range(2..16);
        let k0: u64 = rng.gen_range(1..500);
        let k1 = k0 + rng.gen_range(2..500);
        let k2 = k1 + rng.gen_range(1..500);
        let scale = 10u64.pow(n);
        // counts roughly like x / log^2 x, with noise
        let count = |k: u64| {
            let x = (k * scale) as f64;
            (1.32 * x / x.ln().powi(2)) as u64
        };
        let c0 = count(k0);
        let c1 = count(k1).max(c0) + rng.gen_range(0..10);
        let c2 = count(k2).max(c1) + rng.gen_range(0..10);
        let e = |k: u64, c: u64| CensusTableEntry::new(k, n, c, "0").expect("entry");
        let (a, m, b) = (e(k0, c0), e(k1, c1), e(k2, c2));
        report.checked += 1;
        match (bracket_contribution(&a, &b), bracket_contribution(&a, &m), bracket_contribution(&m, &b)) {
            (Ok(coarse), Ok(left), Ok(right)) => {
                if !(left + right).is_subset_of(coarse) {
                    report.fail(format!("case {i}: {:?} + {:?} outside {:?}", left, right, coarse));
                }
            }
            _ => report.fail(format!("case {i}: bracket error")),
        }
    }
    report
}

/// Twin lower members up to `limit` by trial division.
pub fn trial_division_twins(limit: u64) -> Vec<u64> {
    let is_prime = |n: u64| n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d));
    (2..=limit).filter(|&p| is_prime(p) && is_prime(p + 2)).collect()
}

pub fn trial_division_prime_count(limit: u64) -> u64 {
    let is_prime = |n: u64| n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d));
    (2..=limit).filter(|&n| is_prime(n)).count() as u64
}
