//! Upper bound for Brun's constant from an explicit bound on the twin-prime
//! counting function.
//!
//! For `x >= x0`,
//! `pi2(x) < 8 C x / (log x (log x + F(x))) + k x^{1/2}` with `k = 2` and
//! `F(x) = max{0, A6 + A7/log x - A8/(x^{a/2} log x) - A9/(x^{1/2} log x)}`.
//! Partial summation past a census point `x0` then gives
//! `B <= B(x0) - 2 pi2(x0)/x0 + int_{x0}^inf 16C/(t log t (log t + F(t))) dt + 4k x0^{-1/2}`.
//! The integral is taken in `u = log t`, rigorously up to `U` and bounded by
//! `16C/U` beyond, using `F >= 0`.

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::decimal;
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::jet::Jet;
use crate::quadrature::{integrate, Integrand, QuadratureOptions};
use crate::sieve::TwinCensus;

pub const DEFAULT_CUTOFF_U: f64 = 20_000.0;
pub const DEFAULT_WIDTH_TARGET: f64 = 1e-6;

/// Upper bound for `log H(-2/5)`.
pub const LOG_H_DEFAULT: &str = "6.8565069";
/// `|E(x)| <= 1.0503 x^{-2/5}`.
pub const C_ALPHA_DEFAULT: &str = "1.0503";

const A6_BASE: &str = "9.27436";
const A7_BASE: &str = "-5.6646";
const A7_LOG: &str = "9.2744";
const A9_STANDARD: &str = "24.09391";
const A9_IMPROVED: &str = "19.638";
const IMPROVED_SQRT: &str = "5.03";

fn lit(s: &str) -> Interval {
    Interval::from_decimal(s).expect("valid literal")
}

/// `sqrt(1 + (2/3) sqrt(6/5))`
pub fn rho_default() -> Interval {
    let inner = Interval::from_rational(Rational64::new(6, 5)).sqrt().expect("positive");
    (Interval::ONE + Interval::from_rational(Rational64::new(2, 3)) * inner).sqrt().expect("positive")
}

/// `H(-2/5) in [1, exp(6.8565069)]`.
pub fn h_default() -> Interval {
    let hi = Interval::point(lit(LOG_H_DEFAULT).hi()).exp().hi();
    Interval::new(1.0, hi).expect("ordered")
}

/// `1.320323 < C < 1.320324`
pub fn twin_constant_default() -> Interval {
    Interval::from_decimal_bounds("1.320323", "1.320324").expect("literal")
}

/// Where an input value came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub name: String,
    pub source: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub sha256: Option<String>,
}

impl Provenance {
    pub fn new(name: impl Into<String>, source: impl Into<String>) -> Self {
        Provenance { name: name.into(), source: source.into(), sha256: None }
    }

    pub fn with_hash(mut self, sha256: impl Into<String>) -> Self {
        self.sha256 = Some(sha256.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParamInputs {
    pub alpha: Rational64,
    pub c_alpha: Interval,
    /// Required unless `alpha = 2/5`.
    pub h_neg_alpha: Option<Interval>,
    pub twin_constant: Interval,
    pub rho: Interval,
    /// Use the smaller `A9` coefficient.
    pub improved_a9: bool,
    pub sources: Vec<Provenance>,
}

impl Default for ParamInputs {
    fn default() -> Self {
        ParamInputs {
            alpha: Rational64::new(2, 5),
            c_alpha: lit(C_ALPHA_DEFAULT),
            h_neg_alpha: None,
            twin_constant: twin_constant_default(),
            rho: rho_default(),
            improved_a9: false,
            sources: vec![
                Provenance::new("c_alpha", "literature value 1.0503 for alpha = 2/5; finite range re-checked by scan-c"),
                Provenance::new("twin_constant", "literature enclosure [1.320323, 1.320324]; reproducible by twin_constant"),
                Provenance::new("rho", "sqrt(1 + (2/3) sqrt(6/5)), large-sieve constant"),
            ],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RVParams {
    pub alpha: String,
    pub c_alpha: Interval,
    pub rho: Interval,
    pub h_neg_alpha: Interval,
    pub twin_constant: Interval,
    pub a6: Interval,
    pub a7: Interval,
    pub a8: Interval,
    pub a9: Interval,
    pub improved_a9: bool,
    pub sources: Vec<Provenance>,
}

impl RVParams {
    pub fn alpha(&self) -> Result<Rational64> {
        self.alpha
            .parse()
            .map_err(|_| Error::Parameter(format!("bad alpha {:?}", self.alpha)))
    }

    /// `A6 = 9.27436` and `A7 = A8 = A9 = 0`, as if `rho = 1` and the
    /// lower-order terms vanished.
    pub fn idealized(twin_constant: Interval) -> Self {
        RVParams {
            alpha: Rational64::new(2, 5).to_string(),
            c_alpha: Interval::ZERO,
            rho: Interval::ONE,
            h_neg_alpha: Interval::ZERO,
            twin_constant,
            a6: lit(A6_BASE),
            a7: Interval::ZERO,
            a8: Interval::ZERO,
            a9: Interval::ZERO,
            improved_a9: false,
            sources: vec![Provenance::new("a6..a9", "idealized constants, not a proven bound")],
        }
    }
}

fn check_alpha(alpha: Rational64) -> Result<()> {
    if alpha <= Rational64::from_integer(0) || alpha >= Rational64::new(1, 2) {
        return Err(Error::Parameter(format!("alpha = {alpha} must lie in (0, 1/2)")));
    }
    Ok(())
}

/// Evaluate `A6`..`A9` from their inputs.
pub fn derive_params(inputs: &ParamInputs) -> Result<RVParams> {
    check_alpha(inputs.alpha)?;
    let mut sources = inputs.sources.clone();
    let h = match inputs.h_neg_alpha {
        Some(h) => h,
        None if inputs.alpha == Rational64::new(2, 5) => {
            sources.push(Provenance::new("h_neg_alpha", format!("log H(-2/5) <= {LOG_H_DEFAULT}, Euler-product bound at cutoff 1e10")));
            h_default()
        }
        None => {
            return Err(Error::MissingInput(format!(
                "H(-{}) has no default; compute it with h-bound and pass it in",
                inputs.alpha
            )))
        }
    };
    let rho = inputs.rho;
    let log_rho = rho.ln()?;
    let a6 = lit(A6_BASE) - log_rho.scale(2.0);
    let a7 = lit(A7_BASE) + log_rho.square() - lit(A7_LOG) * log_rho;
    let a8 = inputs.twin_constant.scale(16.0) * inputs.c_alpha * h * rho.pow_rational(inputs.alpha / 2)?;
    let a9_coef = if inputs.improved_a9 { A9_IMPROVED } else { A9_STANDARD };
    let a9 = lit(a9_coef) * rho.sqrt()?;
    Ok(RVParams {
        alpha: inputs.alpha.to_string(),
        c_alpha: inputs.c_alpha,
        rho,
        h_neg_alpha: h,
        twin_constant: inputs.twin_constant,
        a6,
        a7,
        a8,
        a9,
        improved_a9: inputs.improved_a9,
        sources,
    })
}

/// Constants shared by `F` and the integrand.
#[derive(Clone, Copy)]
struct Coefficients {
    a6: Interval,
    a7: Interval,
    a8: Interval,
    a9: Interval,
    half_alpha: Interval,
    c16: Interval,
}

impl Coefficients {
    fn enclosing(p: &RVParams) -> Result<Self> {
        Ok(Coefficients {
            a6: p.a6,
            a7: p.a7,
            a8: p.a8,
            a9: p.a9,
            half_alpha: Interval::from_rational(p.alpha()? / 2),
            c16: p.twin_constant.scale(16.0),
        })
    }

    /// Point values that make `F` smallest and `16C` largest, so that the
    /// integrand is bounded above.
    fn pessimistic(p: &RVParams) -> Result<Self> {
        Ok(Coefficients {
            a6: Interval::point(p.a6.lo()),
            a7: Interval::point(p.a7.lo()),
            a8: Interval::point(p.a8.hi()),
            a9: Interval::point(p.a9.hi()),
            half_alpha: Interval::from_rational(p.alpha()? / 2),
            c16: Interval::point(p.twin_constant.scale(16.0).hi()),
        })
    }

    /// The expression inside `max{0, .}` at `u = log x`.
    fn inner(&self, u: Interval) -> Result<Interval> {
        let decay = self.a8 * (-(self.half_alpha * u)).exp() + self.a9 * (-u.scale(0.5)).exp();
        Ok(self.a6 + (self.a7 - decay).checked_div(u)?)
    }

    fn inner_jet(&self, u: Jet) -> Result<Jet> {
        let e1 = (-u.scale(self.half_alpha)).exp().scale(self.a8);
        let e2 = (-u.scale(Interval::point(0.5))).exp().scale(self.a9);
        Ok(Jet::constant(self.a6) + (Jet::constant(self.a7) - e1 - e2) * u.recip()?)
    }
}

/// `F` at `u = log x`, `u > 0`.
pub fn f_of_log(u: Interval, params: &RVParams) -> Result<Interval> {
    if !(u.lo() > 0.0) {
        return Err(Error::Domain { function: "F", lo: u.lo(), hi: u.hi() });
    }
    Ok(Coefficients::enclosing(params)?.inner(u)?.clamp_nonnegative())
}

/// `F(x)` for `x > 1`.
pub fn f_at(x: Interval, params: &RVParams) -> Result<Interval> {
    if !(x.lo() > 1.0) {
        return Err(Error::Domain { function: "F", lo: x.lo(), hi: x.hi() });
    }
    f_of_log(x.ln()?, params)
}

/// Coefficient of `x^{1/2}` in the `pi2` bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SqrtTerm {
    /// `k = 2`
    Standard,
    /// `k = x0^{-1/2} + 5.03 / (rho^{1/2} log(x0/rho))`
    Improved,
    /// `k = 0`; not a proven bound.
    Dropped,
}

/// The improved coefficient at `x0 = e^{log_x0}`.
pub fn improved_coefficient(log_x0: Interval, rho: Interval) -> Result<Interval> {
    let inv_sqrt = (-log_x0.scale(0.5)).exp();
    Ok(inv_sqrt + lit(IMPROVED_SQRT).checked_div(rho.sqrt()? * (log_x0 - rho.ln()?))?)
}

fn sqrt_coefficient(term: SqrtTerm, log_x0: Interval, rho: Interval) -> Result<Interval> {
    match term {
        SqrtTerm::Standard => Ok(Interval::point(2.0)),
        SqrtTerm::Improved => improved_coefficient(log_x0, rho),
        SqrtTerm::Dropped => Ok(Interval::ZERO),
    }
}

/// `8 C x / (log x (log x + F(x))) + k x^{1/2}`, with `k` evaluated at `x`.
pub fn pi2_upper(x: Interval, params: &RVParams, term: SqrtTerm) -> Result<Interval> {
    let l = x.ln()?;
    let f = f_of_log(l, params)?;
    let main = params.twin_constant.scale(8.0) * x.checked_div(l * (l + f))?;
    Ok(main + sqrt_coefficient(term, l, params.rho)? * x.sqrt()?)
}

struct TailIntegrand(Coefficients);

impl Integrand for TailIntegrand {
    fn enclose(&self, u: Interval) -> Result<Interval> {
        let f = self.0.inner(u)?.clamp_nonnegative();
        self.0.c16.checked_div(u * (u + f))
    }

    fn jet(&self, u: Interval) -> Result<Option<Jet>> {
        let x = Jet::var(u);
        let inner = self.0.inner_jet(x)?;
        if !(inner.v.lo() > 0.0) {
            return Ok(None);
        }
        Ok(Some((x * (x + inner)).recip()?.scale(self.0.c16)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundOptions {
    pub cutoff_u: f64,
    pub width_target: f64,
    pub sqrt_term: SqrtTerm,
    pub max_evaluations: u64,
}

impl Default for BoundOptions {
    fn default() -> Self {
        BoundOptions {
            cutoff_u: DEFAULT_CUTOFF_U,
            width_target: DEFAULT_WIDTH_TARGET,
            sqrt_term: SqrtTerm::Standard,
            max_evaluations: QuadratureOptions::default().max_evaluations,
        }
    }
}

/// What the bound needs to know about the census point `x0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SplicePoint {
    pub log_x0: Interval,
    pub pi2_over_x0: Interval,
    pub brun: Interval,
}

impl SplicePoint {
    pub fn from_census(c: &TwinCensus) -> Result<Self> {
        let x = Interval::from_u64(c.x);
        Ok(SplicePoint {
            log_x0: x.ln()?,
            pi2_over_x0: Interval::from_u64(c.pi2).checked_div(x)?,
            brun: c.brun_partial,
        })
    }
}

/// Enclosures of the pieces of the upper bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundTerms {
    pub brun_x0: Interval,
    /// `-2 pi2(x0) / x0`
    pub pair_correction: Interval,
    /// The integral over `[log x0, U]`.
    pub integral: Interval,
    pub sqrt_coefficient: Interval,
    /// `4 k x0^{-1/2}`
    pub sqrt_term: Interval,
    /// `16 C / U`
    pub tail: Interval,
    pub f_at_x0: Interval,
    pub quadrature_cells: u64,
    pub quadrature_evaluations: u64,
}

impl BoundTerms {
    pub fn total(&self) -> Interval {
        self.brun_x0 + self.pair_correction + self.integral + self.sqrt_term + self.tail
    }

    pub fn upper(&self) -> f64 {
        self.total().hi()
    }
}

/// The upper bound for `B` from a splice point.
pub fn upper_bound(point: &SplicePoint, params: &RVParams, opts: &BoundOptions) -> Result<BoundTerms> {
    let u0 = point.log_x0;
    if !(opts.cutoff_u > u0.hi()) || !opts.cutoff_u.is_finite() {
        return Err(Error::Parameter(format!(
            "cutoff_u = {} must exceed log x0 = {}",
            opts.cutoff_u,
            u0.hi()
        )));
    }
    let coef = Coefficients::pessimistic(params)?;
    let f0 = coef.inner(Interval::point(u0.lo()))?;
    if !(f0.lo() > 0.0) {
        return Err(Error::NonPositiveF { log_x0: u0.lo() });
    }
    let quad = integrate(
        &TailIntegrand(coef),
        u0.lo(),
        opts.cutoff_u,
        &QuadratureOptions { width_target: opts.width_target, max_evaluations: opts.max_evaluations },
    )?;
    let k = sqrt_coefficient(opts.sqrt_term, u0, params.rho)?;
    let inv_sqrt_x0 = (-u0.scale(0.5)).exp();
    Ok(BoundTerms {
        brun_x0: point.brun,
        pair_correction: -point.pi2_over_x0.scale(2.0),
        integral: quad.value,
        sqrt_coefficient: k,
        sqrt_term: k.scale(4.0) * inv_sqrt_x0,
        tail: coef.c16.checked_div(Interval::point(opts.cutoff_u))?,
        f_at_x0: f0.clamp_nonnegative(),
        quadrature_cells: quad.cells,
        quadrature_evaluations: quad.evaluations,
    })
}

/// A census point together with its trust level and origin.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CensusInput {
    pub census: TwinCensus,
    /// False for heuristic or projected values.
    pub rigorous: bool,
    pub provenance: Vec<Provenance>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundCertificate {
    #[serde(with = "decimal::serde_down")]
    pub lower: f64,
    #[serde(with = "decimal::serde_up")]
    pub upper: f64,
    pub x0: u64,
    pub pi2_x0: u64,
    pub brun_x0: Interval,
    pub params: RVParams,
    pub cutoff_u: f64,
    /// `int_U^inf du/u^2 = 1/U`, scaled by `16C` in `terms.tail`.
    #[serde(with = "decimal::serde_up")]
    pub tail_bound: f64,
    pub width_target: f64,
    pub sqrt_term: SqrtTerm,
    pub terms: BoundTerms,
    pub inputs_provenance: Vec<Provenance>,
    pub assumptions: Vec<String>,
    pub tool_version: String,
}

/// Certified bounds `lower <= B <= upper` from a rigorous census point.
pub fn brun_upper(input: &CensusInput, params: &RVParams, opts: &BoundOptions) -> Result<BoundCertificate> {
    if !input.rigorous {
        return Err(Error::NonRigorous(format!(
            "census at x = {} is marked non-rigorous",
            input.census.x
        )));
    }
    if opts.sqrt_term == SqrtTerm::Dropped || params.sources.iter().any(|s| s.name == "a6..a9") {
        return Err(Error::NonRigorous("idealized constants do not give a certificate".into()));
    }
    let c = &input.census;
    let terms = upper_bound(&SplicePoint::from_census(c)?, params, opts)?;
    let upper = terms.upper();
    let lower = c.brun_partial.lo();
    if !(lower < upper) {
        return Err(Error::Parameter(format!("lower bound {lower} does not lie below upper bound {upper}")));
    }
    let mut provenance = input.provenance.clone();
    provenance.extend(params.sources.iter().cloned());
    let mut assumptions = vec![
        "pi2(x) < 8Cx/(log x (log x + F(x))) + k x^{1/2} for x >= x0, with the large-sieve constant rho".to_string(),
        "|E(x)| <= c(alpha) x^{-alpha} for all x > 0; scan-c re-checks only a finite range".to_string(),
    ];
    if opts.sqrt_term == SqrtTerm::Improved {
        assumptions.push("improved x^{1/2} coefficient evaluated at x0".into());
    }
    if params.improved_a9 {
        assumptions.push("improved A9 coefficient 19.638".into());
    }
    Ok(BoundCertificate {
        lower,
        upper,
        x0: c.x,
        pi2_x0: c.pi2,
        brun_x0: c.brun_partial,
        params: params.clone(),
        cutoff_u: opts.cutoff_u,
        tail_bound: Interval::point(opts.cutoff_u).recip()?.hi(),
        width_target: opts.width_target,
        sqrt_term: opts.sqrt_term,
        terms,
        inputs_provenance: provenance,
        assumptions,
        tool_version: format!("brun-core {}", env!("CARGO_PKG_VERSION")),
    })
}
