//! Boundary location via break-point collisions, the constructive
//! tongue-seeding algorithm, and eye ceiling-gap measurement.
//!
//! A hyperbolic component at fixed height `b` ends where the distinguished
//! attracting point collides with a break point: with `1/2` at the left
//! edge, with `0` (approached from below 1) at the right edge. At the
//! collision the break point itself is periodic, which turns boundary
//! location into an affine solve: the orbit of the break point depends on
//! `a` with exactly computable expansion rates `1, B+ + 1, B+^2 + B+ + 1, ...`.

use crate::map::{circle_dist, frac, signed_circle_dist, Branch, CirclePoint, LiftPoint, Params};
use crate::scan::ComponentRecord;
use crate::search::{find_attractor, SearchOptions};
use crate::symbolic::{cycles_with_itinerary, Cycle, Itinerary};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Number of a-samples in the boundary pre-sweep; landmark tongues and eyes
/// are a few 1e-4 wide, so ~5e-4 sampling hits each with at least one point.
pub const PRESWEEP_SAMPLES: usize = 2048;

/// Slack applied to the strict nesting-stage inequalities so measure-zero
/// tangencies are not accepted.
pub const STAGE_SLACK: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum TongueError {
    #[error(
        "no attractor with the requested itinerary at b = {b} (pre-sweep of {samples} samples)"
    )]
    NoBoundaryFound { b: f64, samples: usize },
    #[error("component spans the whole circle; no boundary to locate")]
    NoGap,
    #[error("the period-3 interval formula degenerates at epsilon = {0}")]
    EmptyInterval(f64),
    #[error("slope product {multiplier} is not contracting; b too far from 1")]
    NotContracting { multiplier: f64 },
    #[error("nesting stage {stage} check failed: b not close enough to 1")]
    StageCheckFailed { stage: usize },
    #[error("the final sweep crossed no shifted diagonal")]
    NoCrossing,
    #[error("seed verification failed at a = {a}")]
    Verification { a: f64 },
    #[error(transparent)]
    Param(#[from] crate::map::ParamError),
}

/// Which break point the query targets: `Left` means the component edge
/// where `1/2` becomes periodic, `Right` the edge where `0` does.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

/// A boundary query at fixed height `b`.
///
/// `near` selects among components when several carry the same itinerary
/// at this height (distinct tongues of the same word differ by type); when
/// absent the leftmost component in `[0,1)` is used.
#[derive(Debug, Clone)]
pub struct BoundaryQuery {
    pub b: f64,
    pub itinerary: Itinerary,
    pub side: Side,
    pub near: Option<f64>,
}

/// One maximal run of pre-sweep samples carrying the queried itinerary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComponentRun {
    /// First matching sample (coordinates may exceed 1 when the run wraps).
    pub lo: f64,
    /// Last matching sample.
    pub hi: f64,
    step: f64,
}

impl ComponentRun {
    pub fn contains(&self, a: f64) -> bool {
        let a = frac(a);
        self.lo - self.step <= a && a <= self.hi + self.step
            || self.lo - self.step <= a + 1.0 && a + 1.0 <= self.hi + self.step
    }

    pub fn center(&self) -> f64 {
        frac(0.5 * (self.lo + self.hi))
    }
}

#[derive(Debug, Clone)]
pub struct BoundaryResult {
    /// Boundary from the affine solve (authoritative).
    pub a: f64,
    /// Independent bisection verification.
    pub bisection_a: f64,
    /// Break-point orbit return residual at `a`.
    pub residual: f64,
    /// The component run the boundary belongs to.
    pub run: ComponentRun,
}

fn cycle_matches(report_cycle: Option<&Cycle>, canonical: &Itinerary) -> bool {
    report_cycle
        .map(|c| c.itinerary().canonical() == *canonical && c.multiplier().abs() < 1.0)
        .unwrap_or(false)
}

fn has_itinerary(a: f64, b: f64, canonical: &Itinerary, opts: &SearchOptions) -> bool {
    let p = Params::new(frac(a), b).expect("valid params");
    cycle_matches(find_attractor(p, opts).cycle(), canonical)
}

/// Locate all maximal sample runs carrying `itinerary` at height `b`.
pub fn component_runs(
    b: f64,
    itinerary: &Itinerary,
    samples: usize,
    opts: &SearchOptions,
) -> Vec<ComponentRun> {
    let canonical = itinerary.canonical();
    let step = 1.0 / samples as f64;
    let hits: Vec<bool> = (0..samples)
        .into_par_iter()
        .map(|i| has_itinerary((i as f64 + 0.5) * step, b, &canonical, opts))
        .collect();
    if hits.iter().all(|h| !h) {
        return Vec::new();
    }
    if hits.iter().all(|h| *h) {
        // one run covering the circle; callers treat this as no boundary
        return vec![ComponentRun {
            lo: 0.5 * step,
            hi: 1.0 - 0.5 * step,
            step,
        }];
    }
    // start scanning from a miss so wrapped runs come out whole
    let origin = hits.iter().position(|h| !h).expect("some miss exists");
    let mut runs = Vec::new();
    let mut current: Option<(usize, usize)> = None;
    for k in 1..=samples {
        let idx = (origin + k) % samples;
        if hits[idx] {
            let unwrapped = origin + k;
            current = match current {
                None => Some((unwrapped, unwrapped)),
                Some((s, _)) => Some((s, unwrapped)),
            };
        } else if let Some((s, e)) = current.take() {
            let lo = (s % samples) as f64 * step + 0.5 * step;
            runs.push(ComponentRun {
                lo,
                hi: lo + (e - s) as f64 * step,
                step,
            });
        }
    }
    runs.sort_by(|r, s| frac(r.lo).total_cmp(&frac(s.lo)));
    runs
}

fn pick_run(runs: &[ComponentRun], near: Option<f64>) -> ComponentRun {
    match near {
        Some(anchor) => runs
            .iter()
            .copied()
            .min_by(|r, s| {
                let dr = if r.contains(anchor) {
                    0.0
                } else {
                    circle_dist(r.center(), anchor)
                };
                let ds = if s.contains(anchor) {
                    0.0
                } else {
                    circle_dist(s.center(), anchor)
                };
                dr.total_cmp(&ds)
            })
            .expect("runs nonempty"),
        None => runs[0],
    }
}

/// Bisection on the attractor-existence predicate, from a bracket with
/// `inside` matching the itinerary and `outside` not.
fn bisect_edge(
    b: f64,
    canonical: &Itinerary,
    mut inside: f64,
    mut outside: f64,
    opts: &SearchOptions,
) -> f64 {
    for _ in 0..60 {
        let mid = 0.5 * (inside + outside);
        if has_itinerary(mid, b, canonical, opts) {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    frac(0.5 * (inside + outside))
}

/// Return the break-point orbit residual and the a-expansion rate of the
/// final orbit point: iterating `X0` for `p` steps at parameter `a`, the
/// residual is the wrapped distance from `x_p` back to `x_0`, and the rate
/// accumulates as `alpha <- B * alpha + 1` along the visited branches.
fn break_orbit_residual(a: f64, b: f64, x0: f64, period: usize) -> (f64, f64) {
    let p = Params::new(frac(a), b).expect("valid params");
    let mut x = LiftPoint(x0);
    let mut alpha = 0.0;
    for _ in 0..period {
        let r = frac(x.value());
        let slope = p.branch_coeffs(CirclePoint::new(r).half()).slope;
        alpha = slope * alpha + 1.0;
        x = p.lift(x);
    }
    (signed_circle_dist(x.value(), x0), alpha)
}

/// Solve for the `a` where the targeted break point is periodic, by the
/// affine-in-`a` propagation with `a`-expansion rates `1, B+ + 1, ...`,
/// started from the bisection estimate.
fn affine_boundary(a_start: f64, b: f64, x0: f64, period: usize) -> (f64, f64) {
    let mut a = a_start;
    let mut residual = f64::INFINITY;
    for _ in 0..8 {
        let (d, alpha) = break_orbit_residual(a, b, x0, period);
        residual = d.abs();
        if residual < 1e-14 {
            break;
        }
        a -= d / alpha;
    }
    (frac(a), residual)
}

/// Locate the `a` coordinate where the queried component's edge sits, i.e.
/// where the targeted break point becomes a neutral periodic point.
pub fn boundary_a(q: &BoundaryQuery) -> Result<BoundaryResult, TongueError> {
    let canonical = q.itinerary.canonical();
    let opts = SearchOptions::with_max_period(q.itinerary.period().max(16));
    let runs = component_runs(q.b, &canonical, PRESWEEP_SAMPLES, &opts);
    if runs.is_empty() {
        return Err(TongueError::NoBoundaryFound {
            b: q.b,
            samples: PRESWEEP_SAMPLES,
        });
    }
    if runs.len() == 1 && runs[0].hi - runs[0].lo >= 1.0 - 2.0 / PRESWEEP_SAMPLES as f64 {
        return Err(TongueError::NoGap);
    }
    let run = pick_run(&runs, q.near);
    let step = 1.0 / PRESWEEP_SAMPLES as f64;

    let (inside, outside) = match q.side {
        Side::Left => (run.lo, run.lo - step),
        Side::Right => (run.hi, run.hi + step),
    };
    let bisection_a = bisect_edge(q.b, &canonical, inside, outside, &opts);

    // the collided cycle's period, read just inside the edge
    let hug = match q.side {
        Side::Left => bisection_a + 4.0 * 1e-9,
        Side::Right => bisection_a - 4.0 * 1e-9,
    };
    let p_in = Params::new(frac(hug), q.b)?;
    let cycle =
        find_attractor(p_in, &opts)
            .cycle()
            .cloned()
            .ok_or(TongueError::NoBoundaryFound {
                b: q.b,
                samples: PRESWEEP_SAMPLES,
            })?;
    let x0 = match q.side {
        Side::Left => 0.5,
        // the right-edge collision happens at 0 approached from below 1
        Side::Right => 1.0,
    };
    let (a, residual) = affine_boundary(bisection_a, q.b, x0, cycle.period());
    Ok(BoundaryResult {
        a,
        bisection_a,
        residual,
        run,
    })
}

/// The closed-form interval `I_b` of the period-3 construction at
/// `b = 1 - epsilon`: every tongue parameter produced by the construction
/// lies inside it.
pub fn period3_interval(epsilon: f64) -> Result<(f64, f64), TongueError> {
    let b = 1.0 - epsilon;
    let multiplier = 2.0 * (1.0 - b) * (2.0 * (1.0 + b)).powi(2);
    if multiplier >= 1.0 {
        return Err(TongueError::NotContracting { multiplier });
    }
    let k = (1.0 - 10.0 * epsilon + 4.0 * epsilon * epsilon) / (10.0 - 4.0 * epsilon);
    if k <= 0.0 {
        return Err(TongueError::EmptyInterval(epsilon));
    }
    let hi = (2.0 - epsilon) / 2.0;
    Ok((hi - k, hi))
}

/// The geometric quantities of the nesting construction at period `n`:
/// `xi_1 = 1 / (B+^{n-1} + ... + B+ + 1)` and
/// `xi_j = (B+^{j-1} + ... + B+ + 1) * xi_1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct XiTable {
    pub n: usize,
    pub b: f64,
    /// `xi[j - 1]` holds `xi_j`, for `j = 1 ..= n - 1`.
    pub xi: Vec<f64>,
}

impl XiTable {
    pub fn xi(&self, j: usize) -> f64 {
        self.xi[j - 1]
    }
}

/// Partial geometric sums `S_j = 1 + B+ + ... + B+^{j-1}` for `j = 1..=n`;
/// these are the a-expansion rates of the first `n` iterates.
fn stage_slopes(n: usize, b: f64) -> Vec<f64> {
    let bplus = 2.0 * (1.0 + b);
    let mut sums = Vec::with_capacity(n);
    let mut power = 1.0;
    let mut acc = 0.0;
    for _ in 0..n {
        acc += power;
        power *= bplus;
        sums.push(acc);
    }
    sums
}

pub fn xi_table(n: usize, b: f64) -> XiTable {
    assert!(n >= 2, "xi table needs n >= 2");
    let sums = stage_slopes(n, b);
    let total = sums[n - 1];
    let xi = sums[..n - 1].iter().map(|s| s / total).collect();
    XiTable { n, b, xi }
}

/// Outcome of the constructive tongue seeding.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedResult {
    /// Interval of `a` whose every point carries an attracting single-minus
    /// period-`n` cycle, found around the construction's diagonal crossing.
    pub a_interval: (f64, f64),
    /// The fixed phase-space witness the nesting tracks.
    pub witness_x: f64,
    /// The nested a-intervals `J_1 .. J_{n-1}` (audit trail).
    pub nesting_trace: Vec<(f64, f64)>,
    /// Parameter where the witness is exactly periodic.
    pub crossing_a: f64,
    /// Integer `k` with `F^n(x) = x + k` at the crossing.
    pub k_shift: i64,
}

fn theta(a: f64, b: f64, x: f64, iterates: usize) -> f64 {
    let p = Params::new(frac(a), b).expect("valid params");
    p.lift_n(LiftPoint(x), iterates).value()
}

/// Execute the nesting construction for a single-minus period-`n` tongue at
/// height `b`: shrink a-intervals `J_1 > J_2 > ...` keeping each iterate of
/// the witness centered in a safe window, then sweep the `n`-th iterate
/// across a shifted diagonal and grow the resulting parameter into the full
/// component slice at this height.
pub fn seed_tongue(n: usize, b: f64) -> Result<SeedResult, TongueError> {
    assert!(n >= 3, "seeding starts at period 3");
    let bplus = 2.0 * (1.0 + b);
    let bminus = 2.0 * (1.0 - b);
    let multiplier = bminus * bplus.powi(n as i32 - 1);
    if multiplier >= 1.0 {
        return Err(TongueError::NotContracting { multiplier });
    }
    let slopes = stage_slopes(n, b);
    let table = xi_table(n, b);
    let xi1 = table.xi(1);
    if xi1 >= 0.25 {
        return Err(TongueError::StageCheckFailed { stage: 1 });
    }
    let x = 0.75;

    // J_1: theta_1(a) = a + 3b/2 + B- x lands in (2 + xi1, 2.5 - xi1)
    let t1 = 3.0 * b / 2.0 + bminus * x;
    let mut j = (2.0 + xi1 - t1, 2.5 - xi1 - t1);
    // the first stage must stay where A+ is in (0, 1/2) so one lift applies
    if j.0 < b / 2.0 - STAGE_SLACK || j.1 > 0.5 + b / 2.0 + STAGE_SLACK {
        return Err(TongueError::StageCheckFailed { stage: 1 });
    }
    let mut trace = vec![j];

    for stage in 2..n {
        let xi_s = table.xi(stage);
        let slope = slopes[stage - 1];
        if slope * (j.1 - j.0) <= 1.5 - 2.0 * xi_s + STAGE_SLACK {
            return Err(TongueError::StageCheckFailed { stage });
        }
        let lo = theta(j.0, b, x, stage);
        let hi = theta(j.1, b, x, stage);
        let emp_slope = (hi - lo) / (j.1 - j.0);
        debug_assert!((emp_slope - slope).abs() < 1e-6 * slope);
        // smallest fully contained window K^stage_m: containment bounds the
        // admissible m = 1 .. 2^stage - 1 from both sides
        let base = (1u64 << stage) as f64 - 1.0;
        let m_lo = (lo + STAGE_SLACK - base - xi_s).ceil().max(1.0);
        let m_hi = (hi - STAGE_SLACK - base - 0.5 + xi_s).floor().min(base);
        if m_lo > m_hi {
            return Err(TongueError::StageCheckFailed { stage });
        }
        let (k_lo, k_hi) = (base + m_lo + xi_s, base + m_lo + 0.5 - xi_s);
        j = (j.0 + (k_lo - lo) / emp_slope, j.0 + (k_hi - lo) / emp_slope);
        trace.push(j);
    }

    // margins at the center of J_{n-1}; each iterate sits inside its window
    // so every margin exceeds xi_1
    let a0 = 0.5 * (j.0 + j.1);
    let mut gamma = (x - 0.5).min(1.0 - x);
    for stage in 1..n {
        let v = frac(theta(a0, b, x, stage));
        gamma = gamma.min(v.min(0.5 - v).max(0.0) / slopes[stage - 1]);
    }
    if gamma <= 0.0 {
        return Err(TongueError::StageCheckFailed { stage: n - 1 });
    }

    // sweep theta_n over (a0 - gamma, a0 + gamma); slope 1/xi1 makes the
    // sweep at least ~2 units long, so it crosses a diagonal x + k
    let (sweep_lo, sweep_hi) = (a0 - gamma, a0 + gamma);
    let (v_lo, v_hi) = (theta(sweep_lo, b, x, n), theta(sweep_hi, b, x, n));
    let k_min = (v_lo - x).ceil() as i64;
    let k_max = (v_hi - x).floor() as i64;
    if k_min > k_max {
        return Err(TongueError::NoCrossing);
    }
    // smallest crossing; theta_n is increasing in a
    let k = k_min;
    let target = x + k as f64;
    let (mut lo_a, mut hi_a) = (sweep_lo, sweep_hi);
    for _ in 0..80 {
        let mid = 0.5 * (lo_a + hi_a);
        if theta(mid, b, x, n) < target {
            lo_a = mid;
        } else {
            hi_a = mid;
        }
    }
    let crossing_a = 0.5 * (lo_a + hi_a);

    // grow the crossing into the maximal surrounding slice where the exact
    // solver still finds the attracting single-minus cycle
    let mut word = vec![Branch::Minus];
    word.extend(std::iter::repeat_n(Branch::Plus, n - 1));
    let word = Itinerary::new(word).expect("nonempty");
    let exists = |a: f64| -> bool {
        Params::new(frac(a), b)
            .ok()
            .map(|p| {
                cycles_with_itinerary(p, &word)
                    .iter()
                    .any(|c| c.is_attracting())
            })
            .unwrap_or(false)
    };
    if !exists(crossing_a) {
        return Err(TongueError::Verification { a: crossing_a });
    }
    let grow = |dir: f64| -> f64 {
        let mut step = 1e-6;
        let mut inside = crossing_a;
        while exists(inside + dir * step) {
            inside += dir * step;
            step *= 2.0;
            if step > 1.0 {
                break;
            }
        }
        let mut outside = inside + dir * step;
        for _ in 0..60 {
            let mid = 0.5 * (inside + outside);
            if exists(mid) {
                inside = mid;
            } else {
                outside = mid;
            }
        }
        inside
    };
    let a_interval = (grow(-1.0), grow(1.0));

    // post-verification: interior samples must carry the cycle
    let canonical = word.canonical();
    let opts = SearchOptions::with_max_period(n.max(16));
    for t in [0.1, 0.3, 0.5, 0.7, 0.9] {
        let a = a_interval.0 + t * (a_interval.1 - a_interval.0);
        if !has_itinerary(a, b, &canonical, &opts) {
            return Err(TongueError::Verification { a });
        }
    }

    Ok(SeedResult {
        a_interval,
        witness_x: x,
        nesting_trace: trace,
        crossing_a: frac(crossing_a),
        k_shift: k,
    })
}

/// Vertical distance from a scanned component to the ceiling `b = 1`;
/// strictly positive for eyes.
pub fn ceiling_gap(component: &ComponentRecord) -> f64 {
    1.0 - component.max_b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::ItineraryClass;
    use approx::assert_abs_diff_eq;

    fn itin(s: &str) -> Itinerary {
        s.parse().unwrap()
    }

    #[test]
    fn period3_interval_closed_form() {
        let (lo, hi) = period3_interval(0.0).unwrap();
        assert_abs_diff_eq!(lo, 0.9, epsilon = 1e-15);
        assert_abs_diff_eq!(hi, 1.0, epsilon = 1e-15);

        let (lo, hi) = period3_interval(0.012).unwrap();
        assert!(lo < 0.964 && 0.964 < hi);

        assert!(matches!(
            period3_interval(0.2),
            Err(TongueError::NotContracting { .. }) | Err(TongueError::EmptyInterval(_))
        ));
    }

    #[test]
    fn xi_table_paper_fractions() {
        let t = xi_table(4, 1.0);
        assert_eq!(t.xi(1), 1.0 / 85.0);
        assert_eq!(t.xi(2), 1.0 / 17.0);
        assert_eq!(t.xi(3), 21.0 / 85.0);

        assert_eq!(xi_table(2, 1.0).xi(1), 0.2);
        assert_eq!(xi_table(5, 1.0).xi(1), 1.0 / 341.0);
    }

    #[test]
    fn stage_slopes_are_geometric_sums() {
        let s = stage_slopes(4, 1.0);
        assert_eq!(s, vec![1.0, 5.0, 21.0, 85.0]);
    }

    #[test]
    fn stage_slope_identity_empirical() {
        // finite differences of theta_j reproduce 1, B+ + 1, B+^2 + B+ + 1,
        // ... on the nesting intervals, where the branch pattern is forced
        let (n, b) = (5, 0.999);
        let seed = seed_tongue(n, b).expect("seed succeeds");
        let x = seed.witness_x;
        let slopes = stage_slopes(n, b);
        for stage in 1..n {
            // J_{stage - 1}; for stage 1 any interval below works since
            // theta_1 is a global translation in a
            let (lo, hi) = if stage == 1 {
                seed.nesting_trace[0]
            } else {
                seed.nesting_trace[stage - 2]
            };
            let fd = (theta(hi, b, x, stage) - theta(lo, b, x, stage)) / (hi - lo);
            assert_abs_diff_eq!(fd, slopes[stage - 1], epsilon = 1e-6 * slopes[stage - 1]);
        }
    }

    #[test]
    fn seed_tongue_produces_the_cycle() {
        for n in [3, 4, 5] {
            let seed = seed_tongue(n, 0.999).expect("seed succeeds");
            assert!(seed.a_interval.0 < seed.a_interval.1);
            assert_eq!(seed.nesting_trace.len(), n - 1);
            for w in seed.nesting_trace.windows(2) {
                assert!(w[1].0 >= w[0].0 - 1e-12 && w[1].1 <= w[0].1 + 1e-12);
            }
            let mid = frac(0.5 * (seed.a_interval.0 + seed.a_interval.1));
            let p = Params::new(mid, 0.999).unwrap();
            let c = find_attractor(p, &SearchOptions::default());
            let c = c.found().expect("attractor at seed midpoint");
            assert_eq!(c.period(), n);
            assert_eq!(c.itinerary().classification(), ItineraryClass::SingleMinus);
        }
    }

    #[test]
    fn seed_period_6_above_contraction_threshold() {
        // a single-minus period-6 attractor needs 2(1-b)(2(1+b))^5 < 1,
        // i.e. b > ~0.99951; the construction succeeds once past it
        assert!(matches!(
            seed_tongue(6, 0.999),
            Err(TongueError::NotContracting { .. })
        ));
        let seed = seed_tongue(6, 0.9998).expect("seed succeeds at b = 0.9998");
        let mid = frac(0.5 * (seed.a_interval.0 + seed.a_interval.1));
        let p = Params::new(mid, 0.9998).unwrap();
        let c = find_attractor(p, &SearchOptions::default());
        let c = c.found().expect("attractor at seed midpoint");
        assert_eq!(c.period(), 6);
        assert_eq!(c.itinerary().classification(), ItineraryClass::SingleMinus);
    }

    #[test]
    fn seed_fails_away_from_ceiling() {
        // period 6 needs b close to 1; the slope product is not contracting
        // at b = 0.8
        assert!(matches!(
            seed_tongue(6, 0.8),
            Err(TongueError::NotContracting { .. })
        ));
    }

    #[test]
    fn seed_growth_toward_ceiling() {
        // period 3 is contracting on the whole ladder; period 4 only from
        // b > 0.992, so its ladder starts higher
        for (n, ladder) in [(3, [0.99, 0.995, 0.999]), (4, [0.995, 0.997, 0.999])] {
            let mut last = 0.0;
            for b in ladder {
                let seed = seed_tongue(n, b).expect("seed succeeds");
                let len = seed.a_interval.1 - seed.a_interval.0;
                assert!(
                    len >= last - 1e-12,
                    "seed interval shrank toward the ceiling: {len} < {last} at b = {b}, n = {n}"
                );
                last = len;
            }
        }
    }

    #[test]
    fn boundary_left_right_bracket_landmark() {
        // the period-5 single-minus tongue plotted in the figures
        let left = boundary_a(&BoundaryQuery {
            b: 0.999,
            itinerary: itin("-++++"),
            side: Side::Left,
            near: Some(0.713),
        })
        .unwrap();
        assert_abs_diff_eq!(left.a, 0.712957676959782, epsilon = 1e-6);
        assert!((left.a - left.bisection_a).abs() < 1e-9);
        assert!(left.residual < 1e-10);

        let right = boundary_a(&BoundaryQuery {
            b: 0.999,
            itinerary: itin("-++++"),
            side: Side::Right,
            near: Some(0.713),
        })
        .unwrap();
        assert_abs_diff_eq!(right.a, 0.71367603, epsilon = 1e-6);
        assert!((right.a - right.bisection_a).abs() < 1e-9);
    }

    #[test]
    fn boundary_neutral_collision() {
        // just inside each edge the attractor's distinguished point hugs the
        // targeted break point
        for (side, target) in [(Side::Left, 0.5), (Side::Right, 0.0)] {
            let r = boundary_a(&BoundaryQuery {
                b: 0.999,
                itinerary: itin("-++++"),
                side,
                near: Some(0.713),
            })
            .unwrap();
            let inward = match side {
                Side::Left => 1e-12,
                Side::Right => -1e-12,
            };
            let p = Params::new(frac(r.a + inward), 0.999).unwrap();
            let c = find_attractor(p, &SearchOptions::default());
            let c = c.cycle().expect("attractor just inside the edge");
            let nearest = c
                .points()
                .iter()
                .map(|x| circle_dist(x.value(), target))
                .fold(f64::INFINITY, f64::min);
            assert!(nearest < 1e-4, "collision point {nearest} from {target}");
        }
    }

    #[test]
    fn boundary_of_the_period5_eye() {
        // the multi-minus period-5 eye near a = 0.795 at b = 0.96998; its
        // word is what the attractor there actually carries
        let p = Params::new(0.7948, 0.96998).unwrap();
        let c = find_attractor(p, &SearchOptions::default());
        let word = c.found().expect("eye attractor").itinerary().canonical();
        assert_eq!(word.minus_count(), 2);
        let query = |side| {
            boundary_a(&BoundaryQuery {
                b: 0.96998,
                itinerary: word.clone(),
                side,
                near: Some(0.795),
            })
            .unwrap()
        };
        let left = query(Side::Left);
        let right = query(Side::Right);
        assert_abs_diff_eq!(left.a, 0.79329, epsilon = 5e-4);
        assert_abs_diff_eq!(right.a, 0.79631081199, epsilon = 5e-4);
        assert!((left.a - left.bisection_a).abs() < 1e-9);
        assert!((right.a - right.bisection_a).abs() < 1e-9);
    }

    #[test]
    fn break_point_flag_fires_at_the_collision() {
        // walking a across the solved boundary in ulp steps must hit the
        // sliver where the cycle point sits within the guard of 1/2
        use crate::search::AttractorReport;
        let r = boundary_a(&BoundaryQuery {
            b: 0.999,
            itinerary: itin("-++++"),
            side: Side::Left,
            near: Some(0.713),
        })
        .unwrap();
        let mut a = r.a - 10.0 * f64::EPSILON;
        let mut flagged = false;
        for _ in 0..200 {
            let p = Params::new(a, 0.999).unwrap();
            if let AttractorReport::BreakPointAdjacent(c) =
                find_attractor(p, &SearchOptions::default())
            {
                let d = c
                    .points()
                    .iter()
                    .map(|x| (x.value() - 0.5).abs())
                    .fold(f64::INFINITY, f64::min);
                assert!(d < 1e-12, "flagged cycle point {d:.3e} from 1/2");
                flagged = true;
                break;
            }
            a = f64::from_bits(a.to_bits() + 1);
        }
        assert!(flagged, "no break-point-adjacent report near the boundary");
    }

    #[test]
    fn boundary_requires_existing_itinerary() {
        let err = boundary_a(&BoundaryQuery {
            b: 0.3,
            itinerary: itin("-++++"),
            side: Side::Left,
            near: None,
        });
        assert!(matches!(err, Err(TongueError::NoBoundaryFound { .. })));
    }

    #[test]
    fn ceiling_gap_rule() {
        let mut c = ComponentRecord {
            id: 0,
            kind: crate::scan::ComponentKind::Eye,
            period: 5,
            itinerary: itin("--+-+"),
            type_k: 1,
            type_p: 5,
            cell_count: 10,
            a_min: 0.79,
            a_max: 0.80,
            b_min: 0.9,
            b_max: 0.98,
            max_b: 0.975,
            touches_top: false,
        };
        assert_abs_diff_eq!(ceiling_gap(&c), 0.025, epsilon = 1e-15);
        c.max_b = 1.0;
        assert_eq!(ceiling_gap(&c), 0.0);
    }
}
