//! Safeguarded scalar root finding: Newton or secant steps accepted only
//! while they stay inside the current bracket, bisection otherwise, so
//! convergence is guaranteed for any continuous sign-changing function.

use super::{Interval, Tolerance};
use crate::{Error, Result};

/// Find a root of `f` in `bracket` without derivative information
/// (secant steps with bisection fallback).
pub fn find_root<F: Fn(f64) -> f64>(f: F, bracket: &Interval, tol: &Tolerance) -> Result<f64> {
    solve(&f, None::<&fn(f64) -> f64>, bracket, tol)
}

/// Find a root of `f` in `bracket` using Newton steps from `df` while they
/// remain in-bracket, falling back to bisection otherwise.
pub fn find_root_with_derivative<F, D>(
    f: F,
    df: D,
    bracket: &Interval,
    tol: &Tolerance,
) -> Result<f64>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    solve(&f, Some(&df), bracket, tol)
}

fn solve<F, D>(f: &F, df: Option<&D>, bracket: &Interval, tol: &Tolerance) -> Result<f64>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    if !bracket.is_finite() {
        return Err(Error::InvalidInterval(
            "root bracket must have finite endpoints".into(),
        ));
    }
    let (mut a, mut b) = (bracket.lo(), bracket.hi());
    let mut fa = f(a);
    let mut fb = f(b);
    if !fa.is_finite() || !fb.is_finite() {
        return Err(Error::NonFinite(format!(
            "f non-finite at a bracket endpoint: f({a}) = {fa}, f({b}) = {fb}"
        )));
    }
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::InvalidBracket { lo: a, hi: b, flo: fa, fhi: fb });
    }

    let mut x = 0.5 * (a + b);
    let mut width_two_ago = b - a;
    // Purely relative tolerances on roots exponentially close to a bracket
    // endpoint need on the order of log2(width / (rel_tol * |root|))
    // bisections, so the cap is the caller's subdivision budget.
    for iter in 0..tol.max_subdivisions.max(200) {
        let fx = f(x);
        if !fx.is_finite() {
            return Err(Error::NonFinite(format!("f({x}) is not finite")));
        }
        let width_tol = tol.abs_tol.max(tol.rel_tol * x.abs());
        if fx == 0.0 || fx.abs() <= tol.abs_tol || (b - a) <= width_tol {
            return Ok(x);
        }
        // Shrink the bracket around the sign change.
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
        // Force a bisection whenever two steps together failed to halve the
        // bracket; this caps the worst case at twice the bisection count.
        let force_bisection = iter % 2 == 1 && {
            let halved = (b - a) <= 0.5 * width_two_ago;
            width_two_ago = b - a;
            !halved
        };
        // Candidate step: Newton when a derivative is available, secant
        // through the bracket endpoints otherwise.
        let candidate = if force_bisection {
            f64::NAN
        } else {
            match df {
                Some(d) => {
                    let slope = d(x);
                    if slope.is_finite() && slope != 0.0 {
                        x - fx / slope
                    } else {
                        f64::NAN
                    }
                }
                None => {
                    let denom = fb - fa;
                    if denom != 0.0 {
                        b - fb * (b - a) / denom
                    } else {
                        f64::NAN
                    }
                }
            }
        };
        x = if candidate.is_finite() && candidate > a && candidate < b {
            candidate
        } else {
            0.5 * (a + b)
        };
    }
    // Bisection interleaving makes the bracket shrink geometrically, so the
    // width test above fires long before the iteration cap in practice.
    Err(Error::NonConvergence(format!(
        "root iteration stalled on [{a}, {b}]"
    )))
}
