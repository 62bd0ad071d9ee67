//! Iterative attractor detection seeded at the break points.
//!
//! Both break points lie in the immediate basin whenever an attractor
//! exists, so iterating from `x = 1/2` finds it: burn in, watch a window
//! for a recurrence, read off the near-cycle's word, then hand the word to
//! the symbolic solver for exact refinement.

use crate::map::{circle_dist, CirclePoint, Params};
use crate::symbolic::{
    cycles_with_itinerary, enumerate_attracting_cycles, Cycle, Itinerary, SymbolicError,
};

/// Knobs for the iterative search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOptions {
    /// Iterations discarded before the detection window.
    pub burn_in: usize,
    /// Length of the observation window.
    pub detect_window: usize,
    /// Largest period the window scan reports.
    pub max_period: usize,
    /// Circle distance counting as a recurrence.
    pub tol_close: f64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            burn_in: 2000,
            detect_window: 256,
            max_period: 64,
            tol_close: 1e-9,
        }
    }
}

impl SearchOptions {
    pub fn with_max_period(max_period: usize) -> Self {
        let d = SearchOptions::default();
        SearchOptions {
            max_period,
            detect_window: d.detect_window.max(max_period + 1),
            ..d
        }
    }

    fn validated(&self) -> SearchOptions {
        let mut o = *self;
        o.burn_in = o.burn_in.max(1);
        o.max_period = o.max_period.max(1);
        o.detect_window = o.detect_window.max(o.max_period + 1);
        o.tol_close = o.tol_close.abs().max(f64::MIN_POSITIVE);
        o
    }
}

/// Outcome of [`find_attractor`].
#[derive(Debug, Clone)]
pub enum AttractorReport {
    Found(Cycle),
    NotFound,
    /// An attracting cycle was refined but an orbit point sits within the
    /// break-point guard of 0 or 1/2.
    BreakPointAdjacent(Cycle),
}

impl AttractorReport {
    pub fn cycle(&self) -> Option<&Cycle> {
        match self {
            AttractorReport::Found(c) | AttractorReport::BreakPointAdjacent(c) => Some(c),
            AttractorReport::NotFound => None,
        }
    }

    pub fn found(&self) -> Option<&Cycle> {
        match self {
            AttractorReport::Found(c) => Some(c),
            _ => None,
        }
    }
}

/// Detect the attracting cycle of `p`, if any, by forward iteration from
/// the break point `1/2` followed by symbolic refinement.
///
/// `NotFound` means no recurrence of period `<= max_period` appeared at
/// this resolution; it is a search outcome, not a nonexistence proof.
pub fn find_attractor(p: Params, opts: &SearchOptions) -> AttractorReport {
    let opts = opts.validated();
    let mut x = CirclePoint::new(0.5);
    for _ in 0..opts.burn_in {
        x = p.eval(x);
    }
    let mut window = Vec::with_capacity(opts.detect_window);
    window.push(x);
    for _ in 1..opts.detect_window {
        x = p.eval(x);
        window.push(x);
    }
    let last = *window.last().expect("window nonempty");
    let period = (1..=opts.max_period.min(window.len() - 1)).find(|&q| {
        circle_dist(window[window.len() - 1 - q].value(), last.value()) < opts.tol_close
    });
    let Some(period) = period else {
        return AttractorReport::NotFound;
    };

    let start = window.len() - period;
    let signs = window[start..].iter().map(|x| x.half()).collect();
    let Ok(word) = Itinerary::new(signs) else {
        return AttractorReport::NotFound;
    };

    // refine: among exact solutions with this word, take the attracting one
    // nearest the observed near-cycle
    let anchor = window[start];
    let refined = cycles_with_itinerary(p, &word)
        .into_iter()
        .filter(|c| c.multiplier().abs() < 1.0)
        .min_by(|a, b| {
            let da = nearest_dist(a, anchor);
            let db = nearest_dist(b, anchor);
            da.total_cmp(&db)
        });
    match refined {
        Some(c) if nearest_dist(&c, anchor) < 1e-6 => {
            if c.break_point_adjacent() {
                AttractorReport::BreakPointAdjacent(c)
            } else {
                AttractorReport::Found(c)
            }
        }
        _ => AttractorReport::NotFound,
    }
}

fn nearest_dist(c: &Cycle, x: CirclePoint) -> f64 {
    c.points()
        .iter()
        .map(|pt| circle_dist(pt.value(), x.value()))
        .fold(f64::INFINITY, f64::min)
}

/// Iterate `seed` until within `tol` of the cycle's point set, up to a
/// contraction-rate-derived budget. Returns the verdict and steps used.
fn converges_to(p: Params, seed: f64, cycle: &Cycle, tol: f64) -> (bool, usize) {
    let lambda = cycle.multiplier().abs().clamp(1e-300, 1.0 - 1e-12);
    let budget = (cycle.period() as f64 * (1e11f64.ln() / -lambda.ln())).ceil() as usize;
    let budget = budget.clamp(5_000, 2_000_000);
    let mut x = CirclePoint::new(seed);
    for i in 0..budget {
        if nearest_dist(cycle, x) < tol {
            return (true, i);
        }
        x = p.eval(x);
    }
    (nearest_dist(cycle, x) < tol, budget)
}

/// Cross-check of the iterative search against exhaustive enumeration.
#[derive(Debug, Clone)]
pub struct AuditReport {
    /// The enumerated attracting cycle, when one exists.
    pub cycle: Option<Cycle>,
    /// Enumeration returned two or more attracting cycles.
    pub uniqueness_violation: bool,
    /// Human-readable discrepancies; empty for a clean audit.
    pub mismatches: Vec<String>,
}

impl AuditReport {
    pub fn consistent(&self) -> bool {
        !self.uniqueness_violation && self.mismatches.is_empty()
    }
}

/// Audit a single parameter point: enumerate all attracting cycles up to
/// `max_period`, confirm there is at most one, confirm the iterative search
/// agrees, and confirm the orbits of both break points reach the cycle.
pub fn audit_uniqueness(p: Params, max_period: usize) -> AuditReport {
    let mut mismatches = Vec::new();
    let (cycle, violation) = match enumerate_attracting_cycles(p, max_period) {
        Ok(mut v) => (v.pop(), false),
        Err(SymbolicError::UniquenessViolation { mut cycles }) => {
            mismatches.push(format!(
                "enumeration found {} attracting cycles",
                cycles.len()
            ));
            (cycles.pop(), true)
        }
        Err(e) => {
            mismatches.push(format!("enumeration failed: {e}"));
            (None, false)
        }
    };

    // scale the burn-in from the known contraction rate so a slow cycle is
    // not misreported as a search/enumeration mismatch
    let mut opts = SearchOptions::with_max_period(max_period);
    if let Some(c) = &cycle {
        let lambda = c.multiplier().abs().clamp(1e-300, 1.0 - 1e-12);
        let needed = (c.period() as f64 * (1e11f64.ln() / -lambda.ln())).ceil() as usize;
        opts.burn_in = opts.burn_in.max(needed.min(2_000_000));
    }
    let report = find_attractor(p, &opts);

    match (&cycle, report.cycle()) {
        (Some(c), Some(f)) => {
            if !c.same_orbit(f) {
                mismatches.push("iterative and enumerated cycles differ".into());
            }
        }
        (Some(_), None) => {
            mismatches.push("enumeration found a cycle the iterative search missed".into())
        }
        (None, Some(f)) => mismatches.push(format!(
            "iterative search found a period-{} cycle enumeration missed",
            f.period()
        )),
        (None, None) => {}
    }

    if let Some(c) = &cycle {
        for seed in [0.0, 0.5] {
            let (ok, _) = converges_to(p, seed, c, 1e-6);
            if !ok {
                mismatches.push(format!("orbit of seed {seed} did not reach the cycle"));
            }
        }
    }

    AuditReport {
        cycle,
        uniqueness_violation: violation,
        mismatches,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::ItineraryClass;

    fn params(a: f64, b: f64) -> Params {
        Params::new(a, b).unwrap()
    }

    #[test]
    fn figure_attractor_found() {
        let r = find_attractor(params(0.964, 0.988), &SearchOptions::default());
        let c = r.found().expect("attractor");
        assert_eq!(c.period(), 3);
        assert_eq!(c.itinerary().canonical(), "-++".parse().unwrap());
    }

    #[test]
    fn doubling_has_no_attractor() {
        let r = find_attractor(params(0.0, 0.0), &SearchOptions::default());
        assert!(matches!(r, AttractorReport::NotFound));
    }

    #[test]
    fn multi_minus_period_5_attractor() {
        let r = find_attractor(params(0.5760, 0.7913), &SearchOptions::default());
        let c = r.found().expect("attractor");
        assert_eq!(c.period(), 5);
        let in_minus = c.points().iter().filter(|x| x.value() >= 0.5).count();
        assert_eq!(in_minus, 3);
        assert_eq!(c.itinerary().classification(), ItineraryClass::MultiMinus);
    }

    #[test]
    fn refinement_idempotent() {
        let p = params(0.964, 0.988);
        let a = find_attractor(p, &SearchOptions::default());
        let b = find_attractor(p, &SearchOptions::default());
        let (a, b) = (a.found().unwrap(), b.found().unwrap());
        assert!(a.same_orbit(b));
        for (x, y) in a.points().iter().zip(b.points()) {
            assert!(circle_dist(x.value(), y.value()) < 1e-9);
        }
    }

    #[test]
    fn audit_figure_params() {
        let audit = audit_uniqueness(params(0.964, 0.988), 6);
        assert!(audit.consistent(), "{:?}", audit.mismatches);
        assert_eq!(audit.cycle.as_ref().map(Cycle::period), Some(3));
    }

    #[test]
    fn audit_generic_point() {
        let audit = audit_uniqueness(params(0.2, 0.55), 8);
        assert!(audit.consistent(), "{:?}", audit.mismatches);
    }

    #[test]
    fn no_attractor_below_half() {
        // full a-sweep at three heights
        for b in [0.0, 0.25, 0.5] {
            for i in 0..64 {
                let a = (i as f64 + 0.5) / 64.0;
                let r = find_attractor(params(a, b), &SearchOptions::with_max_period(8));
                assert!(r.cycle().is_none(), "unexpected attractor at a={a}, b={b}");
            }
        }
    }

    #[test]
    fn seed_zero_reaches_same_cycle() {
        let p = params(0.964, 0.988);
        let c = find_attractor(p, &SearchOptions::default());
        let c = c.found().unwrap();
        let (ok, _) = converges_to(p, 0.0, c, 1e-8);
        assert!(ok);
    }
}
