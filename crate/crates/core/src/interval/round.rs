//! Directed rounding on top of round-to-nearest hardware.
//!
//! Every `*_down` / `*_up` helper returns a double that is a guaranteed lower
//! (upper) bound of the exact real result. Error-free transformations (TwoSum,
//! FMA residuals) detect exact results so that representable answers are not
//! needlessly widened.

/// Results below this magnitude may have lost bits to gradual underflow, where
/// FMA residuals are no longer exact.
const TINY: f64 = 1.0e-290;

/// Ulps of slack granted to libm transcendentals (exp, ln, ln_1p, powf).
pub(crate) const LIBM_ULPS: u32 = 2;

#[inline]
fn two_sum_err(a: f64, b: f64, s: f64) -> f64 {
    let bb = s - a;
    (a - (s - bb)) + (b - bb)
}

#[inline]
pub(crate) fn add_down(a: f64, b: f64) -> f64 {
    let s = a + b;
    if !s.is_finite() {
        return overflow_down(s, a.is_finite() && b.is_finite());
    }
    if two_sum_err(a, b, s) < 0.0 {
        s.next_down()
    } else {
        s
    }
}

#[inline]
pub(crate) fn add_up(a: f64, b: f64) -> f64 {
    let s = a + b;
    if !s.is_finite() {
        return overflow_up(s, a.is_finite() && b.is_finite());
    }
    if two_sum_err(a, b, s) > 0.0 {
        s.next_up()
    } else {
        s
    }
}

#[inline]
pub(crate) fn sub_down(a: f64, b: f64) -> f64 {
    add_down(a, -b)
}

#[inline]
pub(crate) fn sub_up(a: f64, b: f64) -> f64 {
    add_up(a, -b)
}

#[inline]
pub(crate) fn mul_down(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        return 0.0;
    }
    let p = a * b;
    if !p.is_finite() {
        return overflow_down(p, a.is_finite() && b.is_finite());
    }
    if p.abs() < TINY {
        return p.next_down();
    }
    if a.mul_add(b, -p) < 0.0 {
        p.next_down()
    } else {
        p
    }
}

#[inline]
pub(crate) fn mul_up(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        return 0.0;
    }
    let p = a * b;
    if !p.is_finite() {
        return overflow_up(p, a.is_finite() && b.is_finite());
    }
    if p.abs() < TINY {
        return p.next_up();
    }
    if a.mul_add(b, -p) > 0.0 {
        p.next_up()
    } else {
        p
    }
}

/// `a / b` rounded down; `b` must be nonzero.
#[inline]
pub(crate) fn div_down(a: f64, b: f64) -> f64 {
    if a == 0.0 {
        return 0.0;
    }
    let q = a / b;
    if !q.is_finite() {
        return if q.is_nan() {
            q
        } else {
            overflow_down(q, a.is_finite() && b.is_finite())
        };
    }
    if b.is_infinite() {
        // a finite, so q is a signed zero and the exact value is 0
        return 0.0;
    }
    if q.abs() < TINY {
        return q.next_down();
    }
    // exact quotient = q + r / b
    let r = (-q).mul_add(b, a);
    if (r < 0.0) != (b < 0.0) && r != 0.0 {
        q.next_down()
    } else {
        q
    }
}

#[inline]
pub(crate) fn div_up(a: f64, b: f64) -> f64 {
    if a == 0.0 {
        return 0.0;
    }
    let q = a / b;
    if !q.is_finite() {
        return if q.is_nan() {
            q
        } else {
            overflow_up(q, a.is_finite() && b.is_finite())
        };
    }
    if b.is_infinite() {
        return 0.0;
    }
    if q.abs() < TINY {
        return q.next_up();
    }
    let r = (-q).mul_add(b, a);
    if (r < 0.0) == (b < 0.0) && r != 0.0 {
        q.next_up()
    } else {
        q
    }
}

/// Square root rounded down; `x >= 0`.
#[inline]
pub(crate) fn sqrt_down(x: f64) -> f64 {
    let r = x.sqrt();
    if r == 0.0 || r.is_infinite() {
        return r;
    }
    if x < TINY {
        return r.next_down();
    }
    if (-r).mul_add(r, x) < 0.0 {
        r.next_down()
    } else {
        r
    }
}

#[inline]
pub(crate) fn sqrt_up(x: f64) -> f64 {
    let r = x.sqrt();
    if r == 0.0 || r.is_infinite() {
        return r;
    }
    if x < TINY {
        return r.next_up();
    }
    if (-r).mul_add(r, x) > 0.0 {
        r.next_up()
    } else {
        r
    }
}

#[inline]
pub(crate) fn widen_down(mut v: f64, ulps: u32) -> f64 {
    for _ in 0..ulps {
        v = v.next_down();
    }
    v
}

#[inline]
pub(crate) fn widen_up(mut v: f64, ulps: u32) -> f64 {
    for _ in 0..ulps {
        v = v.next_up();
    }
    v
}

#[inline]
fn overflow_down(v: f64, finite_inputs: bool) -> f64 {
    if v == f64::INFINITY && finite_inputs {
        f64::MAX
    } else {
        v
    }
}

#[inline]
fn overflow_up(v: f64, finite_inputs: bool) -> f64 {
    if v == f64::NEG_INFINITY && finite_inputs {
        f64::MIN
    } else {
        v
    }
}
