//! The semiconjugacy with the doubling map, types of cycles, and the
//! numeric injectivity probe.
//!
//! `Phi(X) = lim F^n(X) / 2^n` exists uniformly, is monotone, commutes a
//! lift step with doubling, and descends to a circle map `phi` with
//! `phi . f = D . phi`. A period-`p` orbit satisfies `F^p(X0) = X0 + k`
//! for an integer `k`, which pins `phi(x0) = k / (2^p - 1)`: the orbit's
//! type.

use crate::map::{frac, CirclePoint, LiftPoint, Params};
use crate::symbolic::Cycle;
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// Consecutive phi values closer than this count as a plateau.
pub const PLATEAU_TOL: f64 = 1e-6;

/// Default grid resolution for the injectivity probe.
pub const DEFAULT_PROBE_GRID: usize = 4096;

#[derive(Debug, Error, PartialEq)]
pub enum SemiconjError {
    #[error("lift return F^p(X0) - X0 = {shift} is {residual:.3e} away from an integer")]
    NonIntegerShift { shift: f64, residual: f64 },
    #[error("period {0} too large for an exact 2^p - 1 denominator")]
    PeriodTooLarge(usize),
}

/// A truncation of the limit `F^n(X)/2^n` with its geometric tail bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhiEstimate {
    pub value: f64,
    pub error_bound: f64,
    pub iterations: u32,
}

/// Uniform bound `M = sup |F(y) - 2y|`; the sup is over one period since
/// the displacement is 1-periodic, and is attained at a branch endpoint
/// because `F(y) - 2y` is piecewise linear.
pub fn displacement_bound(p: Params) -> f64 {
    let disp = |y: f64| (p.lift(LiftPoint(y)).value() - 2.0 * y).abs();
    let mut m: f64 = [0.0, 0.5, 1.0 - 1e-12]
        .map(disp)
        .into_iter()
        .fold(0.0, f64::max);
    for i in 0..256 {
        m = m.max(disp(i as f64 / 256.0));
    }
    m
}

/// Evaluate `Phi(X)` to within `tol` by iterating the lift until the tail
/// bound `M / 2^n` drops below `tol`.
///
/// The iterate grows like `2^n`, so the count is capped at 200; past that
/// the tail bound is already below 1e-59 and the reported `error_bound`
/// states whatever was actually achieved.
pub fn phi(p: Params, x: LiftPoint, tol: f64) -> PhiEstimate {
    assert!(tol > 0.0, "tolerance must be positive");
    let m = displacement_bound(p);
    let mut iterations = 0u32;
    let mut scale = 1.0;
    let mut y = x;
    while m * scale >= tol && iterations < 200 {
        y = p.lift(y);
        scale *= 0.5;
        iterations += 1;
    }
    PhiEstimate {
        value: y.value() * scale,
        error_bound: m * scale,
        iterations,
    }
}

/// The circle semiconjugacy `phi(x) = Phi(X) mod 1` for `x` in `[0,1)`.
pub fn phi_circle(p: Params, x: CirclePoint, tol: f64) -> f64 {
    frac(phi(p, LiftPoint(x.value()), tol).value)
}

/// The type `k / (2^p - 1)` of a period-`p` cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeFraction {
    pub k: u64,
    pub p: u32,
}

impl TypeFraction {
    pub fn denominator(&self) -> u64 {
        (1u64 << self.p) - 1
    }

    pub fn value(&self) -> f64 {
        self.k as f64 / self.denominator() as f64
    }

    /// Exact period of `k/(2^p - 1)` under doubling; equals `p` for the
    /// type of a genuine period-`p` orbit.
    pub fn doubling_period(&self) -> u32 {
        let d = self.denominator();
        let mut k = self.k % d;
        for q in 1..=self.p {
            k = (2 * k) % d;
            if k == self.k % d {
                return q;
            }
        }
        self.p
    }
}

impl fmt::Display for TypeFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.k, self.denominator())
    }
}

/// Compute the type of a cycle from the lift: `k = F^p(X0) - X0` rounded,
/// reduced mod `2^p - 1`.
///
/// The base point is the orbit point in `I-` nearest `1/2`; when no point
/// lies in `I-` (repelling all-plus orbits) the point nearest `1/2` is used.
pub fn type_of(p: Params, c: &Cycle) -> Result<TypeFraction, SemiconjError> {
    let period = c.period();
    if period >= 63 {
        return Err(SemiconjError::PeriodTooLarge(period));
    }
    let base = c.base_point_in_minus().unwrap_or_else(|| {
        *c.points()
            .iter()
            .min_by(|x, y| {
                let dx = (x.value() - 0.5).abs();
                let dy = (y.value() - 0.5).abs();
                dx.total_cmp(&dy)
            })
            .expect("cycle nonempty")
    });
    let x0 = base.value();
    let shift = p.lift_n(LiftPoint(x0), period).value() - x0;
    let k = shift.round();
    let residual = (shift - k).abs();
    if residual >= 1e-6 {
        return Err(SemiconjError::NonIntegerShift { shift, residual });
    }
    let denom = (1i64 << period) - 1;
    let k = (k as i64).rem_euclid(denom.max(1)) as u64;
    Ok(TypeFraction {
        k,
        p: period as u32,
    })
}

/// Report of the injectivity probe: plateau runs of the sampled
/// semiconjugacy, and whether the samples are non-decreasing.
///
/// Plateaus witness non-injectivity of `phi`, the signature of a parameter
/// in (or near) the hyperbolic set; a plateau-free monotone profile is
/// heuristic evidence that the map is conjugate to doubling.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub plateau_intervals: Vec<(f64, f64)>,
    pub monotone: bool,
    pub grid_n: usize,
}

/// Sample `Phi` on a uniform grid over one period and detect plateaus.
pub fn injectivity_probe(p: Params, grid_n: usize) -> ProbeReport {
    assert!(grid_n >= 2, "probe needs at least two grid points");
    let tol = 1e-9;
    let values: Vec<f64> = (0..=grid_n)
        .map(|i| phi(p, LiftPoint(i as f64 / grid_n as f64), tol).value)
        .collect();
    let monotone = values.windows(2).all(|w| w[1] >= w[0] - 4.0 * tol);
    let mut plateau_intervals = Vec::new();
    let mut run_start: Option<usize> = None;
    for i in 0..grid_n {
        let flat = (values[i + 1] - values[i]).abs() < PLATEAU_TOL;
        match (flat, run_start) {
            (true, None) => run_start = Some(i),
            (false, Some(s)) => {
                plateau_intervals.push((s as f64 / grid_n as f64, i as f64 / grid_n as f64));
                run_start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = run_start {
        plateau_intervals.push((s as f64 / grid_n as f64, 1.0));
    }
    ProbeReport {
        plateau_intervals,
        monotone,
        grid_n,
    }
}
