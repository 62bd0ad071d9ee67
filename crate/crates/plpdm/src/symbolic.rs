//! Itinerary combinatorics and the closed-form periodic-orbit solver.
//!
//! A periodic word over `{+,-}` prescribes which half-interval each orbit
//! point must visit. The set of points realizing a word (its follower set)
//! is a finite union of intervals, computed by pulling half-intervals back
//! through the affine branches. On each follower interval the `p`-th
//! iterate of the lift is a single affine map `X -> slope * X + intercept`,
//! so periodic orbits come out of a linear solve against the diagonal.

use crate::map::{circle_dist, frac, near_break_point, Branch, CirclePoint, Params};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// Tolerance for the exact-period filter and point-set comparisons.
pub const CYCLE_TOL: f64 = 1e-9;

/// Multipliers within this distance of 1 classify a cycle as neutral.
pub const NEUTRAL_TOL: f64 = 1e-9;

/// Intervals shorter than this are dropped as numerically empty.
pub const MIN_INTERVAL_LEN: f64 = 1e-14;

#[derive(Debug, Error)]
pub enum SymbolicError {
    #[error("itinerary must be nonempty")]
    EmptyItinerary,
    #[error("invalid itinerary symbol {0:?}; expected '+' or '-'")]
    BadSymbol(char),
    #[error("uniqueness violation: {} distinct attracting cycles found", .cycles.len())]
    UniquenessViolation { cycles: Vec<Cycle> },
}

/// Classification of a periodic sign word by its minus count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ItineraryClass {
    AllPlus,
    SingleMinus,
    MultiMinus,
    AllMinus,
}

/// A finite periodic word over `{+,-}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Itinerary {
    signs: Vec<Branch>,
}

impl Itinerary {
    pub fn new(signs: Vec<Branch>) -> Result<Self, SymbolicError> {
        if signs.is_empty() {
            return Err(SymbolicError::EmptyItinerary);
        }
        Ok(Itinerary { signs })
    }

    pub fn period(&self) -> usize {
        self.signs.len()
    }

    pub fn signs(&self) -> &[Branch] {
        &self.signs
    }

    pub fn minus_count(&self) -> usize {
        self.signs.iter().filter(|s| **s == Branch::Minus).count()
    }

    pub fn plus_count(&self) -> usize {
        self.period() - self.minus_count()
    }

    pub fn classification(&self) -> ItineraryClass {
        match self.minus_count() {
            0 => ItineraryClass::AllPlus,
            1 => ItineraryClass::SingleMinus,
            m if m == self.period() => ItineraryClass::AllMinus,
            _ => ItineraryClass::MultiMinus,
        }
    }

    /// All-minus words of period >= 2 admit no attracting cycle; all-plus
    /// words admit no attracting cycle either since the plus branch expands.
    pub fn is_unrealizable_as_attractor(&self) -> bool {
        match self.classification() {
            ItineraryClass::AllMinus => self.period() >= 2,
            ItineraryClass::AllPlus => true,
            _ => false,
        }
    }

    /// Rotation starting at position `k`.
    pub fn rotated(&self, k: usize) -> Itinerary {
        let p = self.period();
        let k = k % p;
        let mut signs = Vec::with_capacity(p);
        signs.extend_from_slice(&self.signs[k..]);
        signs.extend_from_slice(&self.signs[..k]);
        Itinerary { signs }
    }

    /// Lexicographically least cyclic rotation, with `-` ordered before `+`.
    pub fn canonical(&self) -> Itinerary {
        (0..self.period())
            .map(|k| self.rotated(k))
            .min()
            .expect("nonempty")
    }

    /// True when the word is not a repetition of a shorter word.
    pub fn is_primitive(&self) -> bool {
        let p = self.period();
        for d in 1..p {
            if p.is_multiple_of(d) && (0..p).all(|i| self.signs[i] == self.signs[i % d]) {
                return false;
            }
        }
        true
    }

    /// Slope of `f^p` along any orbit with this word: the ordered product of
    /// the branch slopes.
    pub fn multiplier(&self, p: Params) -> f64 {
        self.signs
            .iter()
            .map(|s| p.branch_coeffs(*s).slope)
            .product()
    }
}

impl fmt::Display for Itinerary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.signs {
            write!(f, "{}", s.symbol())?;
        }
        Ok(())
    }
}

impl FromStr for Itinerary {
    type Err = SymbolicError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut signs = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '+' => signs.push(Branch::Plus),
                '-' => signs.push(Branch::Minus),
                other => return Err(SymbolicError::BadSymbol(other)),
            }
        }
        Itinerary::new(signs)
    }
}

impl Serialize for Itinerary {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Itinerary {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Half-open interval `[lo, hi)` inside `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_empty(&self) -> bool {
        self.len() < MIN_INTERVAL_LEN
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x < self.hi
    }
}

/// Ordered union of pairwise disjoint intervals.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct IntervalUnion {
    intervals: Vec<Interval>,
}

impl IntervalUnion {
    pub fn new(mut intervals: Vec<Interval>) -> Self {
        intervals.retain(|iv| !iv.is_empty());
        intervals.sort_by(|a, b| a.lo.total_cmp(&b.lo));
        let mut merged: Vec<Interval> = Vec::with_capacity(intervals.len());
        for iv in intervals {
            match merged.last_mut() {
                Some(last) if iv.lo <= last.hi => last.hi = last.hi.max(iv.hi),
                _ => merged.push(iv),
            }
        }
        IntervalUnion { intervals: merged }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn total_len(&self) -> f64 {
        self.intervals.iter().map(Interval::len).sum()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.intervals.iter().any(|iv| iv.contains(x))
    }
}

fn half_interval(sign: Branch) -> Interval {
    match sign {
        Branch::Plus => Interval { lo: 0.0, hi: 0.5 },
        Branch::Minus => Interval { lo: 0.5, hi: 1.0 },
    }
}

/// Preimage of `target` (a union inside `[0,1)`) under one affine branch,
/// clamped to the branch's half-interval.
fn branch_preimage(p: Params, sign: Branch, target: &IntervalUnion) -> IntervalUnion {
    let dom = half_interval(sign);
    let c = p.branch_coeffs(sign);
    let mut out = Vec::new();
    if c.slope < MIN_INTERVAL_LEN {
        // degenerate branch at b = 1: constant value A- mod 1
        if target.contains(frac(c.intercept)) {
            out.push(dom);
        }
        return IntervalUnion::new(out);
    }
    let img_lo = c.slope * dom.lo + c.intercept;
    let img_hi = c.slope * dom.hi + c.intercept;
    for iv in target.intervals() {
        let m_lo = (img_lo - iv.hi).floor() as i64 - 1;
        let m_hi = (img_hi - iv.lo).ceil() as i64 + 1;
        for m in m_lo..=m_hi {
            let lo = ((iv.lo + m as f64 - c.intercept) / c.slope).max(dom.lo);
            let hi = ((iv.hi + m as f64 - c.intercept) / c.slope).min(dom.hi);
            if hi - lo >= MIN_INTERVAL_LEN {
                out.push(Interval { lo, hi });
            }
        }
    }
    IntervalUnion::new(out)
}

/// The set of points whose first `p` symbols equal the given word:
/// `{ x in I_{s0} : f^j(x) in I_{sj} for 0 <= j < p }`.
///
/// Computed by backward induction on preimages; empty when the word is not
/// realized at these parameters.
pub fn follower_set(p: Params, itin: &Itinerary) -> IntervalUnion {
    let signs = itin.signs();
    let mut set = IntervalUnion::new(vec![half_interval(signs[signs.len() - 1])]);
    for &sign in signs[..signs.len() - 1].iter().rev() {
        if set.is_empty() {
            break;
        }
        set = branch_preimage(p, sign, &set);
    }
    set
}

/// One affine branch of `F^p` over a follower interval: on `domain`,
/// `F^p(X) = slope * X + intercept`, and `f^p(x) = (slope * x + intercept) mod 1`.
/// `lift_offset` records the winding, i.e. `floor(F^p)` at the domain midpoint.
#[derive(Debug, Clone, PartialEq)]
pub struct AffinePiece {
    pub domain: Interval,
    pub slope: f64,
    pub intercept: f64,
    pub lift_offset: i64,
}

/// Decompose `F^p` over the follower set of `itin` into affine pieces.
pub fn affine_pieces(p: Params, itin: &Itinerary) -> Vec<AffinePiece> {
    let set = follower_set(p, itin);
    let aplus = p.branch_coeffs(Branch::Plus).intercept;
    let shift = if aplus < 0.0 { 1.0 } else { 0.0 };
    set.intervals()
        .iter()
        .map(|&domain| {
            // Propagate X_{j+1} = B X_j + (A + s + (2 - B) n_j) along the
            // midpoint orbit; n_j = floor(X_j) is constant across the piece.
            let mut slope = 1.0;
            let mut intercept = 0.0;
            let mut x = domain.mid();
            for &sign in itin.signs() {
                let c = p.branch_coeffs(sign);
                let n = x.floor();
                let add = c.intercept + shift + (2.0 - c.slope) * n;
                slope *= c.slope;
                intercept = c.slope * intercept + add;
                x = c.slope * x + add;
            }
            AffinePiece {
                domain,
                slope,
                intercept,
                lift_offset: x.floor() as i64,
            }
        })
        .collect()
}

/// Stability class of a periodic orbit, from the magnitude of its multiplier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stability {
    Attracting,
    Repelling,
    Neutral,
}

/// A periodic orbit together with its word, multiplier and stability class.
#[derive(Debug, Clone)]
pub struct Cycle {
    points: Vec<CirclePoint>,
    itinerary: Itinerary,
    multiplier: f64,
    stability: Stability,
    break_point_adjacent: bool,
}

impl Cycle {
    pub fn points(&self) -> &[CirclePoint] {
        &self.points
    }

    pub fn period(&self) -> usize {
        self.points.len()
    }

    pub fn itinerary(&self) -> &Itinerary {
        &self.itinerary
    }

    pub fn multiplier(&self) -> f64 {
        self.multiplier
    }

    pub fn stability(&self) -> Stability {
        self.stability
    }

    pub fn is_attracting(&self) -> bool {
        self.stability == Stability::Attracting
    }

    /// True when some orbit point is within the break-point guard of 0 or 1/2.
    pub fn break_point_adjacent(&self) -> bool {
        self.break_point_adjacent
    }

    /// Orbit points as a sorted list, the rotation-invariant identity of the
    /// cycle.
    pub fn sorted_points(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.points.iter().map(|x| x.value()).collect();
        v.sort_by(f64::total_cmp);
        v
    }

    /// Whether two cycles describe the same orbit, up to rotation.
    pub fn same_orbit(&self, other: &Cycle) -> bool {
        if self.period() != other.period() {
            return false;
        }
        self.sorted_points()
            .iter()
            .zip(other.sorted_points())
            .all(|(a, b)| circle_dist(*a, b) < CYCLE_TOL)
    }

    /// The orbit point in `I-` closest to 1/2, the distinguished base point
    /// used for type computations; `None` when no point lies in `I-`.
    pub fn base_point_in_minus(&self) -> Option<CirclePoint> {
        self.points
            .iter()
            .copied()
            .filter(|x| x.value() >= 0.5)
            .min_by(|a, b| a.value().total_cmp(&b.value()))
    }
}

fn classify_stability(multiplier: f64) -> Stability {
    let m = multiplier.abs();
    if (m - 1.0).abs() <= NEUTRAL_TOL {
        Stability::Neutral
    } else if m < 1.0 {
        Stability::Attracting
    } else {
        Stability::Repelling
    }
}

/// Minimal period of the orbit of `x0` assuming it is `p`-periodic: the
/// smallest divisor `q` of `p` with `f^q(x0) = x0`.
fn minimal_period(params: Params, x0: CirclePoint, p: usize) -> usize {
    for q in 1..p {
        if p.is_multiple_of(q) && circle_dist(params.eval_n(x0, q).value(), x0.value()) < CYCLE_TOL
        {
            return q;
        }
    }
    p
}

/// All periodic orbits of exact period `itin.period()` realizing `itin`.
///
/// Each affine piece of `F^p` over the follower set is intersected with the
/// shifted diagonals `X + k`; solutions whose true minimal period is a
/// proper divisor are discarded.
pub fn cycles_with_itinerary(params: Params, itin: &Itinerary) -> Vec<Cycle> {
    let p = itin.period();
    let mut cycles: Vec<Cycle> = Vec::new();
    for piece in affine_pieces(params, itin) {
        if (piece.slope - 1.0).abs() < 1e-12 {
            // a neutral piece is parallel to the diagonal; no isolated root
            continue;
        }
        let g_lo = (piece.slope - 1.0) * piece.domain.lo + piece.intercept;
        let g_hi = (piece.slope - 1.0) * piece.domain.hi + piece.intercept;
        let k_lo = g_lo.min(g_hi).floor() as i64 - 1;
        let k_hi = g_lo.max(g_hi).ceil() as i64 + 1;
        for k in k_lo..=k_hi {
            let x0 = (k as f64 - piece.intercept) / (piece.slope - 1.0);
            if x0 < piece.domain.lo - 1e-13 || x0 >= piece.domain.hi + 1e-13 {
                continue;
            }
            let x0 = CirclePoint::new(x0.clamp(0.0, 1.0 - f64::EPSILON));
            if minimal_period(params, x0, p) != p {
                continue;
            }
            let mut points = Vec::with_capacity(p);
            let mut x = x0;
            let mut guard_hit = false;
            let mut word_ok = true;
            for &sign in itin.signs() {
                guard_hit |= near_break_point(x.value());
                word_ok &= x.half() == sign || near_break_point(x.value());
                points.push(x);
                x = params.eval(x);
            }
            if !word_ok {
                continue;
            }
            let cycle = Cycle {
                points,
                itinerary: itin.clone(),
                multiplier: piece.slope,
                stability: classify_stability(piece.slope),
                break_point_adjacent: guard_hit,
            };
            if !cycles.iter().any(|c| c.same_orbit(&cycle)) {
                cycles.push(cycle);
            }
        }
    }
    cycles
}

/// All primitive sign words of length `p`, one representative per rotation
/// class (the canonical rotation).
pub fn canonical_itineraries(p: usize) -> Vec<Itinerary> {
    assert!(
        (1..32).contains(&p),
        "itinerary enumeration is exponential in p"
    );
    let mut out = Vec::new();
    for bits in 0u32..(1 << p) {
        let signs: Vec<Branch> = (0..p)
            .map(|i| {
                if bits >> i & 1 == 1 {
                    Branch::Minus
                } else {
                    Branch::Plus
                }
            })
            .collect();
        let itin = Itinerary::new(signs).expect("nonempty");
        if itin.is_primitive() && itin == itin.canonical() {
            out.push(itin);
        }
    }
    out
}

/// Search every itinerary up to `max_period` for attracting cycles.
///
/// By the uniqueness of the attracting cycle the result holds at most one
/// orbit; finding two is reported as a diagnostic error rather than a value.
pub fn enumerate_attracting_cycles(
    params: Params,
    max_period: usize,
) -> Result<Vec<Cycle>, SymbolicError> {
    let mut found: Vec<Cycle> = Vec::new();
    for p in 1..=max_period {
        for itin in canonical_itineraries(p) {
            if itin.multiplier(params) >= 1.0 {
                continue;
            }
            for cycle in cycles_with_itinerary(params, &itin) {
                if cycle.is_attracting() && !found.iter().any(|c| c.same_orbit(&cycle)) {
                    found.push(cycle);
                }
            }
        }
    }
    if found.len() > 1 {
        return Err(SymbolicError::UniquenessViolation { cycles: found });
    }
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::LiftPoint;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn params(a: f64, b: f64) -> Params {
        Params::new(a, b).unwrap()
    }

    fn itin(s: &str) -> Itinerary {
        s.parse().unwrap()
    }

    #[test]
    fn classify_words() {
        assert_eq!(itin("-++").classification(), ItineraryClass::SingleMinus);
        assert_eq!(itin("---").classification(), ItineraryClass::AllMinus);
        assert!(itin("---").is_unrealizable_as_attractor());
        assert_eq!(itin("++").classification(), ItineraryClass::AllPlus);
        // the period-1 fixed point in I- is realizable
        assert_eq!(itin("-").classification(), ItineraryClass::SingleMinus);
        assert!(!itin("-").is_unrealizable_as_attractor());
    }

    #[test]
    fn canonical_rotation_orders_minus_first() {
        assert_eq!(itin("++-").canonical(), itin("-++"));
        assert_eq!(itin("+-+-").canonical(), itin("-+-+"));
        assert!(!itin("+-+-").is_primitive());
        assert!(itin("-++").is_primitive());
    }

    #[test]
    fn multiplier_known_values() {
        assert_eq!(itin("-++").multiplier(params(0.3, 0.0)), 8.0);
        assert_eq!(itin("-++").multiplier(params(0.3, 1.0)), 0.0);
        let m = itin("-++").multiplier(params(0.964, 0.988));
        let expect = 2.0 * (1.0 - 0.988) * (2.0f64 * (1.0 + 0.988)).powi(2);
        assert_abs_diff_eq!(m, expect, epsilon = 1e-12);
        assert_abs_diff_eq!(m, 0.3794, epsilon = 1e-4);
    }

    /// Brute-force follower set: sample a dense grid and check the word
    /// symbol by symbol.
    fn follower_set_brute(p: Params, w: &Itinerary, n: usize) -> Vec<bool> {
        (0..n)
            .map(|i| {
                let mut x = CirclePoint::new((i as f64 + 0.5) / n as f64);
                w.signs().iter().all(|&s| {
                    let ok = x.half() == s;
                    x = p.eval(x);
                    ok
                })
            })
            .collect()
    }

    fn check_follower_against_brute(p: Params, w: &Itinerary, n: usize, tol: f64) {
        let set = follower_set(p, w);
        let marks = follower_set_brute(p, w, n);
        for (i, &inside) in marks.iter().enumerate() {
            let x = (i as f64 + 0.5) / n as f64;
            if set
                .intervals()
                .iter()
                .all(|iv| x < iv.lo - tol || x > iv.hi + tol)
            {
                // x is well outside the union
                assert!(
                    !inside,
                    "brute force found {x} in follower set of {w} at ({}, {})",
                    p.a(),
                    p.b()
                );
            } else if set
                .intervals()
                .iter()
                .any(|iv| x > iv.lo + tol && x < iv.hi - tol)
            {
                // x is well inside the union
                assert!(
                    inside,
                    "brute force lost {x} from follower set of {w} at ({}, {})",
                    p.a(),
                    p.b()
                );
            }
        }
    }

    #[test]
    fn follower_set_trivial_cases() {
        let set = follower_set(params(0.0, 0.0), &itin("+"));
        assert_eq!(set.intervals(), &[Interval { lo: 0.0, hi: 0.5 }]);

        let set = follower_set(params(0.964, 0.988), &itin("-++"));
        assert!(!set.is_empty());
        for iv in set.intervals() {
            assert!(iv.lo >= 0.5 && iv.hi <= 1.0);
        }
    }

    #[test]
    fn follower_set_matches_brute_force() {
        check_follower_against_brute(params(0.964, 0.988), &itin("-++"), 100_000, 1e-6);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let p = params(rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0));
            let period = rng.gen_range(1..=6usize);
            let signs: Vec<Branch> = (0..period)
                .map(|_| {
                    if rng.gen_bool(0.5) {
                        Branch::Minus
                    } else {
                        Branch::Plus
                    }
                })
                .collect();
            let w = Itinerary::new(signs).unwrap();
            check_follower_against_brute(p, &w, 20_000, 1e-4);
        }
    }

    #[test]
    fn all_minus_follower_set_shrinks_to_empty() {
        // with no fixed point in I- every orbit escapes to I+, so the
        // all-minus word dies out at some finite period
        let p = params(0.5, 0.7);
        assert!(cycles_with_itinerary(p, &itin("-")).is_empty());
        let mut period = 2;
        loop {
            let w = Itinerary::new(vec![Branch::Minus; period]).unwrap();
            if follower_set(p, &w).is_empty() {
                break;
            }
            period += 1;
            assert!(period <= 64, "all-minus follower set never emptied");
        }
    }

    #[test]
    fn no_all_minus_cycles_beyond_fixed_points() {
        // even when an attracting fixed point keeps the all-minus follower
        // set nonempty forever, no exact-period >= 2 all-minus cycle exists
        let p = params(0.3, 0.9);
        assert_eq!(cycles_with_itinerary(p, &itin("-")).len(), 1);
        for period in 2..=8 {
            let w = Itinerary::new(vec![Branch::Minus; period]).unwrap();
            assert!(w.is_unrealizable_as_attractor());
            assert!(
                cycles_with_itinerary(p, &w).is_empty(),
                "all-minus cycle of period {period} should not exist"
            );
        }
    }

    #[test]
    fn affine_piece_consistency() {
        // direct iteration matches slope * x + intercept at piece midpoints
        let cases = [
            (params(0.964, 0.988), itin("-++")),
            (params(0.3, 0.7), itin("-+")),
            (params(0.576, 0.7913), itin("-+-+-")),
            (params(0.1, 0.2), itin("+++")),
        ];
        for (p, w) in cases {
            for piece in affine_pieces(p, &w) {
                let mid = piece.domain.mid();
                let direct = p.lift_n(LiftPoint(mid), w.period()).value();
                let affine = piece.slope * mid + piece.intercept;
                assert_abs_diff_eq!(direct, affine, epsilon = 1e-9);
                assert_abs_diff_eq!(
                    frac(affine),
                    p.eval_n(CirclePoint::new(mid), w.period()).value(),
                    epsilon = 1e-9
                );
                assert_eq!(piece.lift_offset, affine.floor() as i64);
                assert_eq!(piece.slope, w.multiplier(p));
            }
        }
    }

    #[test]
    fn doubling_fixed_point() {
        let cycles = cycles_with_itinerary(params(0.0, 0.0), &itin("+"));
        assert_eq!(cycles.len(), 1);
        let c = &cycles[0];
        assert_eq!(c.period(), 1);
        assert_abs_diff_eq!(c.points()[0].value(), 0.0, epsilon = 1e-12);
        assert_eq!(c.multiplier(), 2.0);
        assert_eq!(c.stability(), Stability::Repelling);
    }

    #[test]
    fn figure_cycle_period_3() {
        let p = params(0.964, 0.988);
        let cycles = cycles_with_itinerary(p, &itin("-++"));
        let attracting: Vec<_> = cycles.iter().filter(|c| c.is_attracting()).collect();
        assert_eq!(attracting.len(), 1);
        let c = attracting[0];
        assert_abs_diff_eq!(c.multiplier(), 0.3794, epsilon = 1e-4);

        // oracle: iterate from the break point 1/2 for 1000 steps and
        // compare the tail against the solved orbit
        let mut x = CirclePoint::new(0.5);
        for _ in 0..1000 {
            x = p.eval(x);
        }
        let close = c
            .points()
            .iter()
            .any(|pt| circle_dist(pt.value(), x.value()) < 1e-9);
        assert!(close, "iteration oracle did not land on the solved cycle");
    }

    #[test]
    fn orbit_points_map_forward() {
        let p = params(0.964, 0.988);
        for c in cycles_with_itinerary(p, &itin("-++")) {
            for (i, pt) in c.points().iter().enumerate() {
                let next = c.points()[(i + 1) % c.period()];
                assert!(circle_dist(p.eval(*pt).value(), next.value()) < 1e-9);
            }
        }
    }

    #[test]
    fn rotation_invariance_of_cycle_point_set() {
        let p = params(0.964, 0.988);
        let base = cycles_with_itinerary(p, &itin("-++"));
        for k in 1..3 {
            let rot = cycles_with_itinerary(p, &itin("-++").rotated(k));
            assert_eq!(base.len(), rot.len());
            for c in &base {
                assert!(rot.iter().any(|r| r.same_orbit(c)));
            }
        }
    }

    #[test]
    fn enumerate_below_half_is_empty() {
        for a in [0.0, 0.33, 0.71] {
            assert!(enumerate_attracting_cycles(params(a, 0.3), 8)
                .unwrap()
                .is_empty());
        }
        assert!(enumerate_attracting_cycles(params(0.0, 0.0), 6)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn enumerate_finds_exactly_figure_cycle() {
        let found = enumerate_attracting_cycles(params(0.964, 0.988), 6).unwrap();
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].period(), 3);
        assert_eq!(found[0].itinerary().canonical(), itin("-++"));
    }

    #[test]
    fn multiplier_identity_along_cycle() {
        let p = params(0.576, 0.7913);
        for w in canonical_itineraries(5) {
            for c in cycles_with_itinerary(p, &w) {
                // stored multiplier comes from the same ordered product
                assert_eq!(c.multiplier(), w.multiplier(p));
                let prod: f64 = c
                    .points()
                    .iter()
                    .map(|x| p.branch_coeffs(x.half()).slope)
                    .product();
                assert_abs_diff_eq!(prod, c.multiplier(), epsilon = 1e-12 * prod.abs().max(1.0));
            }
        }
    }

    #[test]
    fn uniqueness_audit_random_smoke() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let p = params(rng.gen_range(0.0..1.0), rng.gen_range(0.5..1.0));
            // must never return two attracting cycles
            let found = enumerate_attracting_cycles(p, 8).unwrap();
            assert!(found.len() <= 1);
        }
    }

    #[test]
    fn necklace_counts() {
        assert_eq!(canonical_itineraries(1).len(), 2);
        assert_eq!(canonical_itineraries(2).len(), 1); // -+
        assert_eq!(canonical_itineraries(3).len(), 2); // -++, --+
        assert_eq!(canonical_itineraries(4).len(), 3);
        assert_eq!(canonical_itineraries(6).len(), 9);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn word_strategy() -> impl Strategy<Value = Itinerary> {
            proptest::collection::vec(proptest::bool::ANY, 1..=8).prop_map(|bits| {
                let signs = bits
                    .into_iter()
                    .map(|b| if b { Branch::Minus } else { Branch::Plus })
                    .collect();
                Itinerary::new(signs).unwrap()
            })
        }

        proptest! {
            #[test]
            fn canonical_is_rotation_invariant(w in word_strategy(), k in 0usize..8) {
                let c = w.canonical();
                prop_assert_eq!(w.rotated(k).canonical(), c.clone());
                prop_assert_eq!(c.minus_count(), w.minus_count());
                prop_assert_eq!(c.period(), w.period());
            }

            #[test]
            fn follower_set_stays_in_first_half(
                w in word_strategy(),
                a in 0.0..1.0f64,
                b in 0.0..=1.0f64,
            ) {
                let p = params(a, b);
                let half = match w.signs()[0] {
                    Branch::Plus => (0.0, 0.5),
                    Branch::Minus => (0.5, 1.0),
                };
                for iv in follower_set(p, &w).intervals() {
                    prop_assert!(iv.lo >= half.0 - 1e-12 && iv.hi <= half.1 + 1e-12);
                    prop_assert!(iv.len() > 0.0);
                }
            }

            #[test]
            fn multiplier_rotation_invariant_up_to_rounding(
                w in word_strategy(),
                k in 0usize..8,
                a in 0.0..1.0f64,
                b in 0.0..=1.0f64,
            ) {
                let p = params(a, b);
                let m1 = w.multiplier(p);
                let m2 = w.rotated(k).multiplier(p);
                prop_assert!((m1 - m2).abs() <= 1e-12 * m1.abs().max(1.0));
            }
        }
    }
}
