//! Deterministic evaluation grids. Check and sampling grids cluster points
//! logarithmically toward domain endpoints, where densities of interest are
//! singular or where variance functions vanish, while staying clamped a
//! fixed fraction of the local scale away from the boundary.

use super::Interval;

/// How far a semi-infinite or doubly infinite grid reaches beyond its
/// anchor, in units of the local scale.
const FAR_REACH: f64 = 1e3;

/// `n` points inside `domain`, spaced logarithmically in the distance to
/// each finite endpoint and clamped `clamp` of the local scale away from
/// it. Infinite directions are covered out to a fixed large multiple of
/// the local scale. Points are returned in increasing order.
///
/// Requires `n >= 4`.
pub fn log_end_grid(domain: &Interval, n: usize, clamp: f64) -> Vec<f64> {
    assert!(n >= 4, "grid needs at least 4 points");
    assert!(clamp > 0.0 && clamp < 0.5, "clamp must be in (0, 0.5)");
    let lo = domain.lo();
    let hi = domain.hi();
    let mut pts = match (lo.is_finite(), hi.is_finite()) {
        (true, true) => {
            let span = hi - lo;
            let eps = clamp * span;
            let n_lo = n / 2;
            let n_hi = n - n_lo;
            let mut v = Vec::with_capacity(n);
            // Distances from each endpoint grow geometrically up to just
            // short of the midpoint, so the two halves interleave cleanly.
            let top = 0.499 * span;
            for j in 0..n_lo {
                let frac = j as f64 / (n_lo - 1) as f64;
                v.push(lo + eps * (top / eps).powf(frac));
            }
            for j in 0..n_hi {
                let frac = j as f64 / (n_hi - 1) as f64;
                v.push(hi - eps * (top / eps).powf(frac));
            }
            v
        }
        (true, false) => {
            let scale = lo.abs().max(1.0);
            let eps = clamp * scale;
            let top = FAR_REACH * scale;
            (0..n)
                .map(|j| {
                    let frac = j as f64 / (n - 1) as f64;
                    lo + eps * (top / eps).powf(frac)
                })
                .collect()
        }
        (false, true) => {
            let scale = hi.abs().max(1.0);
            let eps = clamp * scale;
            let top = FAR_REACH * scale;
            (0..n)
                .map(|j| {
                    let frac = j as f64 / (n - 1) as f64;
                    hi - eps * (top / eps).powf(frac)
                })
                .collect()
        }
        (false, false) => {
            let n_neg = n / 2;
            let n_pos = n - n_neg;
            let mut v = Vec::with_capacity(n);
            for j in 0..n_neg {
                let frac = j as f64 / (n_neg - 1) as f64;
                v.push(-(clamp * (FAR_REACH / clamp).powf(1.0 - frac)));
            }
            for j in 0..n_pos {
                let frac = j as f64 / (n_pos - 1) as f64;
                v.push(clamp * (FAR_REACH / clamp).powf(frac));
            }
            v
        }
    };
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

/// `n` evenly spaced points on the closed interval `[lo, hi]`.
pub fn uniform_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2, "uniform grid needs at least 2 points");
    assert!(lo.is_finite() && hi.is_finite() && lo < hi);
    let h = (hi - lo) / (n - 1) as f64;
    (0..n).map(|j| lo + h * j as f64).collect()
}
