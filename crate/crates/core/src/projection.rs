//! Heuristic projections: the Hardy-Littlewood estimate
//! `pi2(x) ~ C int_2^x dt / log^2 t`, the matching partial sums
//! `B(n) ~ B - 2C / log n`, and the upper bound the census machinery would
//! give if those values were known at `x0 = 10^k`.
//!
//! Nothing here is rigorous; every output is flagged and none can feed a
//! certificate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::rv_bound::{upper_bound, BoundOptions, RVParams, SplicePoint};

/// Assumed value of Brun's constant used as the projection basis.
pub const DEFAULT_B_ASSUMED: f64 = 1.902_160_583_2;

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
const GL5: [(f64, f64); 5] = [
    (0.0, 0.568_888_888_888_888_9),
    (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (-0.906_179_845_938_664, 0.236_926_885_056_189_1),
    (0.906_179_845_938_664, 0.236_926_885_056_189_1),
];

/// Panel width in `u = log t`.
const PANEL: f64 = 0.25;

/// `int_2^x dt / log^2 t`, by composite Gauss-Legendre in `u = log t`.
pub fn log_squared_integral(x: f64) -> Result<f64> {
    if !(x > 2.0) || !x.is_finite() {
        return Err(Error::Parameter(format!("x = {x} must exceed 2")));
    }
    let (u0, u1) = (std::f64::consts::LN_2, x.ln());
    let panels = ((u1 - u0) / PANEL).ceil().max(1.0) as usize;
    let h = (u1 - u0) / panels as f64;
    // factor out e^{u1} so the sum stays in range
    let mut acc = 0.0;
    for i in 0..panels {
        let mid = u0 + (i as f64 + 0.5) * h;
        for (node, weight) in GL5 {
            let u = mid + 0.5 * h * node;
            acc += weight * (u - u1).exp() / (u * u);
        }
    }
    Ok(acc * 0.5 * h * u1.exp())
}

/// Predicted `pi2(x)` with the twin prime constant `c`.
pub fn predict_pi2(x: f64, c: f64) -> Result<f64> {
    Ok(c * log_squared_integral(x)?)
}

/// Predicted `B(n) = b_assumed - 2c / log n`.
pub fn predict_brun_partial(n: f64, b_assumed: f64, c: f64) -> Result<f64> {
    if !(n > 1.0) {
        return Err(Error::Parameter(format!("n = {n} must exceed 1")));
    }
    Ok(b_assumed - 2.0 * c / n.ln())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Projection {
    pub k: u32,
    pub b_pred: f64,
    pub pi2_pred: f64,
    pub upper_pred: f64,
    pub b_assumed: f64,
    /// Always false.
    pub rigorous: bool,
}

/// Projected bounds at `x0 = 10^k` for each `k`.
pub fn project_table(ks: &[u32], b_assumed: f64, params: &RVParams, opts: &BoundOptions) -> Result<Vec<Projection>> {
    if ks.is_empty() {
        return Err(Error::Parameter("no exponents given".into()));
    }
    let c = params.twin_constant.mid();
    ks.iter()
        .map(|&k| {
            let x = 10f64.powi(k as i32);
            let pi2 = predict_pi2(x, c)?;
            let b = predict_brun_partial(x, b_assumed, c)?;
            let point = SplicePoint {
                log_x0: Interval::point(std::f64::consts::LN_10) * Interval::from_u64(k as u64),
                pi2_over_x0: Interval::point(pi2 / x),
                brun: Interval::point(b),
            };
            let terms = upper_bound(&point, params, opts)?;
            Ok(Projection { k, b_pred: b, pi2_pred: pi2, upper_pred: terms.upper(), b_assumed, rigorous: false })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rv_bound::{derive_params, ParamInputs};

    #[test]
    fn integral_against_series() {
        // int_2^x dt/log^2 t = li(x) - x/log x - li(2) + 2/log 2
        let x: f64 = 1e6;
        let li = 78_627.549_159_462_18; // li(1e6)
        let li2 = 1.045_163_780_117_493;
        let expect = li - x / x.ln() - li2 + 2.0 / 2f64.ln();
        let got = log_squared_integral(x).unwrap();
        assert!((got / expect - 1.0).abs() < 1e-10, "{got} vs {expect}");
    }

    #[test]
    fn census_count_at_two_e16() {
        let p = predict_pi2(2e16, 1.320_323_5).unwrap();
        assert!((p / 19_831_847_025_792.0 - 1.0).abs() < 1e-4);
    }

    #[test]
    fn partial_sum_limit() {
        let b = predict_brun_partial(1e300, DEFAULT_B_ASSUMED, 1.32).unwrap();
        assert!(b < DEFAULT_B_ASSUMED && DEFAULT_B_ASSUMED - b < 0.004);
        assert!(predict_brun_partial(1.0, 1.9, 1.32).is_err());
    }

    #[test]
    fn projections_decrease() {
        let params = derive_params(&ParamInputs::default()).unwrap();
        let rows = project_table(&[19, 20, 30, 80], DEFAULT_B_ASSUMED, &params, &BoundOptions::default()).unwrap();
        for w in rows.windows(2) {
            assert!(w[1].upper_pred < w[0].upper_pred);
        }
        assert!(rows.iter().all(|r| !r.rigorous && r.b_pred < r.b_assumed && r.pi2_pred > 0.0));
    }
}
