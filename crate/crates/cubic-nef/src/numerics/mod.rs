//! Numerical kernels shared by every other module: extended-real intervals,
//! adaptive Gauss-Kronrod quadrature, safeguarded root finding, five-point
//! finite differences, deterministic random streams, and grid builders.

mod fd;
mod grid;
mod quad;
mod rng;
mod root;

pub use fd::fd_derivative;
pub use grid::{log_end_grid, uniform_grid};
pub use quad::integrate;
pub use rng::RngStream;
pub use root::{find_root, find_root_with_derivative};

use crate::{Error, Result};

/// An interval of the extended real line. Infinite endpoints are always
/// open; finite endpoints carry explicit open/closed flags.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
    lo_closed: bool,
    hi_closed: bool,
}

impl Interval {
    /// General constructor. Requires `lo < hi`, neither endpoint NaN, and
    /// open flags on infinite endpoints.
    pub fn new(lo: f64, hi: f64, lo_closed: bool, hi_closed: bool) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() {
            return Err(Error::InvalidInterval("NaN endpoint".into()));
        }
        if !(lo < hi) {
            return Err(Error::InvalidInterval(format!(
                "lo = {lo} must be strictly below hi = {hi}"
            )));
        }
        if (lo.is_infinite() && lo_closed) || (hi.is_infinite() && hi_closed) {
            return Err(Error::InvalidInterval(
                "infinite endpoints must be open".into(),
            ));
        }
        Ok(Self { lo, hi, lo_closed, hi_closed })
    }

    /// Open interval `(lo, hi)`. Panics only on NaN or disordered input,
    /// so it is reserved for literals known valid at the call site.
    pub fn open(lo: f64, hi: f64) -> Self {
        Self::new(lo, hi, false, false).expect("valid open interval literal")
    }

    /// The whole real line.
    pub fn real_line() -> Self {
        Self::open(f64::NEG_INFINITY, f64::INFINITY)
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn lo_closed(&self) -> bool {
        self.lo_closed
    }

    pub fn hi_closed(&self) -> bool {
        self.hi_closed
    }

    /// Both endpoints finite.
    pub fn is_finite(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    /// Membership with the open/closed flags honoured.
    pub fn contains(&self, x: f64) -> bool {
        if x.is_nan() {
            return false;
        }
        let above = if self.lo_closed { x >= self.lo } else { x > self.lo };
        let below = if self.hi_closed { x <= self.hi } else { x < self.hi };
        above && below
    }

    /// Width; infinite when either endpoint is infinite.
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// Intersection, or `None` when the overlap is empty.
    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let (lo, lo_closed) = if self.lo > other.lo {
            (self.lo, self.lo_closed)
        } else if other.lo > self.lo {
            (other.lo, other.lo_closed)
        } else {
            (self.lo, self.lo_closed && other.lo_closed)
        };
        let (hi, hi_closed) = if self.hi < other.hi {
            (self.hi, self.hi_closed)
        } else if other.hi < self.hi {
            (other.hi, other.hi_closed)
        } else {
            (self.hi, self.hi_closed && other.hi_closed)
        };
        Interval::new(lo, hi, lo_closed, hi_closed).ok()
    }

    /// Human-readable form such as `(-inf, 0)` or `[0, 4]`.
    pub fn describe(&self) -> String {
        let lb = if self.lo_closed { '[' } else { '(' };
        let rb = if self.hi_closed { ']' } else { ')' };
        format!("{lb}{}, {}{rb}", fmt_end(self.lo), fmt_end(self.hi))
    }
}

fn fmt_end(x: f64) -> String {
    if x == f64::NEG_INFINITY {
        "-inf".into()
    } else if x == f64::INFINITY {
        "inf".into()
    } else {
        format!("{x}")
    }
}

/// Accuracy targets for quadrature and root finding.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Tolerance {
    pub fn new(abs_tol: f64, rel_tol: f64, max_subdivisions: usize) -> Result<Self> {
        if !(abs_tol >= 0.0) || !(rel_tol >= 0.0) {
            return Err(Error::InvalidTolerance(
                "tolerances must be nonnegative".into(),
            ));
        }
        if abs_tol + rel_tol <= 0.0 {
            return Err(Error::InvalidTolerance(
                "abs_tol + rel_tol must be positive".into(),
            ));
        }
        if max_subdivisions == 0 {
            return Err(Error::InvalidTolerance(
                "max_subdivisions must be positive".into(),
            ));
        }
        Ok(Self { abs_tol, rel_tol, max_subdivisions })
    }
}

impl Default for Tolerance {
    /// abs 1e-10, rel 1e-10, 2000 subdivisions: ample headroom below the
    /// 1e-6 .. 1e-8 residual thresholds used by the check suites.
    fn default() -> Self {
        Self { abs_tol: 1e-10, rel_tol: 1e-10, max_subdivisions: 2000 }
    }
}

/// Outcome of an adaptive quadrature run.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub subdivisions_used: usize,
}
