//! Verified quadrature by interval bisection.
//!
//! A cell `[a, b]` contributes `f([a, b]) * (b - a)`, where `f([a, b])`
//! encloses the integrand over the whole cell. Integrands that provide
//! derivative jets also get a Taylor enclosure about a point `m` of the cell,
//! `f(m) h + f'(m) [(x-m)^2/2] + f''([a, b]) [(x-m)^3/6]` with the brackets
//! taken between `a` and `b`, intersected with the first.
//!
//! Cells are bisected depth first until their contribution is at most a
//! per-cell width `w`, and `w` walks down the fixed ladder `2^-k` until the
//! total enclosure is narrow enough. Each internal cell keeps the intersection of its own
//! contribution with the sum of its children, so a smaller `w` always gives
//! an enclosure contained in the one for a larger `w`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::jet::Jet;

/// An enclosure of the integrand over a cell.
pub trait Integrand {
    fn enclose(&self, cell: Interval) -> Result<Interval>;

    /// Value and first two derivatives over `x`, when available.
    fn jet(&self, _x: Interval) -> Result<Option<Jet>> {
        Ok(None)
    }
}

/// Integrand given as a function on jets.
pub struct JetFn<F>(pub F);

impl<F> Integrand for JetFn<F>
where
    F: Fn(Jet) -> Result<Jet>,
{
    fn enclose(&self, cell: Interval) -> Result<Interval> {
        Ok((self.0)(Jet::var(cell))?.v)
    }

    fn jet(&self, x: Interval) -> Result<Option<Jet>> {
        (self.0)(Jet::var(x)).map(Some)
    }
}

impl<F> Integrand for F
where
    F: Fn(Interval) -> Result<Interval>,
{
    fn enclose(&self, cell: Interval) -> Result<Interval> {
        self(cell)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Monotonicity {
    Increasing,
    Decreasing,
}

/// Integrand known to be monotone, enclosed from its values at the cell
/// endpoints.
pub struct Monotone<F> {
    pub f: F,
    pub direction: Monotonicity,
}

impl<F> Integrand for Monotone<F>
where
    F: Fn(f64) -> Result<Interval>,
{
    fn enclose(&self, cell: Interval) -> Result<Interval> {
        let a = (self.f)(cell.lo())?;
        let b = (self.f)(cell.hi())?;
        match self.direction {
            Monotonicity::Increasing => Interval::new(a.lo(), b.hi()),
            Monotonicity::Decreasing => Interval::new(b.lo(), a.hi()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureOptions {
    pub width_target: f64,
    /// Bound on integrand enclosures summed over all ladder levels.
    pub max_evaluations: u64,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        QuadratureOptions { width_target: 1e-6, max_evaluations: 200_000_000 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: Interval,
    /// Leaf cells at the final level.
    pub cells: u64,
    pub evaluations: u64,
    /// Per-cell width of the final level.
    pub cell_width: f64,
}

const MAX_DEPTH: u32 = 64;

struct Walk<'a, I: ?Sized> {
    f: &'a I,
    w: f64,
    cells: u64,
    evaluations: u64,
    budget: u64,
}

impl<I: Integrand + ?Sized> Walk<'_, I> {
    fn contribution(&mut self, a: f64, b: f64) -> Result<Interval> {
        self.evaluations += 1;
        let cell = Interval::new(a, b)?;
        let len = Interval::point(b) - Interval::point(a);
        let first = self.f.enclose(cell)? * len;
        let m = a + 0.5 * (b - a);
        let (Some(at_m), Some(over)) = (self.f.jet(Interval::point(m))?, self.f.jet(cell)?) else {
            return Ok(first);
        };
        let (ra, rb) = (Interval::point(a) - Interval::point(m), Interval::point(b) - Interval::point(m));
        let moment2 = (rb.square() - ra.square()).scale(0.5);
        let moment3 = (rb.powi(3)? - ra.powi(3)?).checked_div(Interval::point(6.0))?;
        let taylor = at_m.v * len + at_m.d1 * moment2 + over.d2 * moment3;
        Ok(first.intersect(taylor).unwrap_or(first))
    }

    fn cell(&mut self, a: f64, b: f64, own: Interval, depth: u32) -> Result<Option<Interval>> {
        let mid = a + 0.5 * (b - a);
        if own.width() <= self.w || depth >= MAX_DEPTH || mid <= a || mid >= b {
            self.cells += 1;
            return Ok(Some(own));
        }
        if self.evaluations + 2 > self.budget {
            return Ok(None);
        }
        let left_own = self.contribution(a, mid)?;
        let right_own = self.contribution(mid, b)?;
        let Some(left) = self.cell(a, mid, left_own, depth + 1)? else {
            return Ok(None);
        };
        let Some(right) = self.cell(mid, b, right_own, depth + 1)? else {
            return Ok(None);
        };
        let sum = left + right;
        // both are enclosures of the same integral
        Ok(Some(sum.intersect(own).unwrap_or(sum)))
    }
}

/// Enclosure of the integral of `f` over `[u0, u1]` with width at most
/// `opts.width_target`.
pub fn integrate<I: Integrand + ?Sized>(f: &I, u0: f64, u1: f64, opts: &QuadratureOptions) -> Result<QuadratureResult> {
    if !(u0 < u1) || !u0.is_finite() || !u1.is_finite() {
        return Err(Error::Parameter(format!("quadrature range [{u0}, {u1}] is empty or unbounded")));
    }
    if !(opts.width_target > 0.0) {
        return Err(Error::Parameter("width target must be positive".into()));
    }
    let mut k = (-opts.width_target.log2()).ceil() as i32;
    let mut evaluations = 0u64;
    let mut best: Option<Interval> = None;
    loop {
        let w = 2f64.powi(-k);
        let mut walk = Walk { f, w, cells: 0, evaluations, budget: opts.max_evaluations };
        let own = walk.contribution(u0, u1)?;
        let result = walk.cell(u0, u1, own, 0)?;
        evaluations = walk.evaluations;
        let Some(value) = result else {
            let achieved = best.map_or(f64::INFINITY, |b| b.width());
            return Err(Error::QuadratureBudget { achieved, target: opts.width_target });
        };
        best = Some(value);
        if value.width() <= opts.width_target {
            return Ok(QuadratureResult { value, cells: walk.cells, evaluations, cell_width: w });
        }
        if k > 1070 {
            return Err(Error::QuadratureBudget { achieved: value.width(), target: opts.width_target });
        }
        k += 1;
    }
}
