//! The piecewise-linear perturbation of the doubling map (PLPDM) and its lift.
//!
//! The family is `f_{a,b}(x) = (2x + a + (b/2) S(x)) mod 1` where `S` is the
//! "straight sine", a piecewise linear tent approximating `sin 2pi(x - 1/4)`.
//! Opening the formula gives two affine branches,
//!
//! ```text
//!   f(x) = B+ x + A+  (mod 1)   on I+ = [0, 1/2),   B+ = 2(1+b), A+ = a - b/2
//!   f(x) = B- x + A-  (mod 1)   on I- = [1/2, 1),   B- = 2(1-b), A- = a + 3b/2
//! ```
//!
//! so the map expands on `I+` and, for `b > 1/2`, contracts on `I-`. The two
//! break points `0` and `1/2` are where everything interesting happens.

use thiserror::Error;

/// Distance below which an orbit point counts as sitting on a break point.
pub const BREAK_GUARD: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum ParamError {
    #[error("a must lie in [0,1), got {0}")]
    AOutOfRange(f64),
    #[error("b must lie in [0,1], got {0}")]
    BOutOfRange(f64),
}

/// Reduce a real number to its circle representative in `[0,1)`.
pub fn frac(x: f64) -> f64 {
    let f = x - x.floor();
    // x just below an integer can round the difference up to exactly 1.0
    if f >= 1.0 {
        0.0
    } else {
        f
    }
}

/// Distance on the circle R/Z.
pub fn circle_dist(x: f64, y: f64) -> f64 {
    let d = (frac(x) - frac(y)).abs();
    d.min(1.0 - d)
}

/// Signed displacement from `y` to `x` on the circle, wrapped into [-1/2, 1/2].
pub fn signed_circle_dist(x: f64, y: f64) -> f64 {
    let d = frac(x) - frac(y);
    d - d.round()
}

/// True when `x` is within [`BREAK_GUARD`] of a break point (`0` or `1/2`).
pub fn near_break_point(x: f64) -> bool {
    let x = frac(x);
    x.min(1.0 - x) < BREAK_GUARD || (x - 0.5).abs() < BREAK_GUARD
}

/// A point of the circle R/Z, stored as its representative in `[0,1)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct CirclePoint(f64);

impl CirclePoint {
    pub fn new(x: f64) -> Self {
        CirclePoint(frac(x))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Which half-interval the point lies in: `I+ = [0,1/2)`, `I- = [1/2,1)`.
    pub fn half(self) -> Branch {
        if self.0 < 0.5 {
            Branch::Plus
        } else {
            Branch::Minus
        }
    }
}

impl From<f64> for CirclePoint {
    fn from(x: f64) -> Self {
        CirclePoint::new(x)
    }
}

/// A point of the real line carrying lift coordinates.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct LiftPoint(pub f64);

impl LiftPoint {
    pub fn value(self) -> f64 {
        self.0
    }

    pub fn to_circle(self) -> CirclePoint {
        CirclePoint::new(self.0)
    }
}

/// Branch label: `Plus` for the expanding branch on `I+`, `Minus` for `I-`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Branch {
    // Minus sorts before Plus; canonical itineraries rely on this ordering.
    Minus,
    Plus,
}

impl Branch {
    pub fn symbol(self) -> char {
        match self {
            Branch::Plus => '+',
            Branch::Minus => '-',
        }
    }
}

/// One affine branch of the map: slope `B` and intercept `A` with
/// `f(x) = (B x + A) mod 1` on the branch's half-interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchCoeffs {
    pub sign: Branch,
    pub slope: f64,
    pub intercept: f64,
}

/// A parameter point `(a, b)` of the cylinder, `a` mod 1 and `b` in `[0,1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params {
    a: f64,
    b: f64,
}

impl Params {
    pub fn new(a: f64, b: f64) -> Result<Self, ParamError> {
        if !(0.0..1.0).contains(&a) {
            return Err(ParamError::AOutOfRange(a));
        }
        if !(0.0..=1.0).contains(&b) {
            return Err(ParamError::BOutOfRange(b));
        }
        Ok(Params { a, b })
    }

    /// Build from any real `a`, reduced mod 1.
    pub fn reduced(a: f64, b: f64) -> Result<Self, ParamError> {
        Params::new(frac(a), b)
    }

    pub fn a(self) -> f64 {
        self.a
    }

    pub fn b(self) -> f64 {
        self.b
    }

    pub fn branch_coeffs(self, sign: Branch) -> BranchCoeffs {
        match sign {
            Branch::Plus => BranchCoeffs {
                sign,
                slope: 2.0 * (1.0 + self.b),
                intercept: self.a - self.b / 2.0,
            },
            Branch::Minus => BranchCoeffs {
                sign,
                slope: 2.0 * (1.0 - self.b),
                intercept: self.a + 3.0 * self.b / 2.0,
            },
        }
    }

    /// One step of the circle map.
    pub fn eval(self, x: CirclePoint) -> CirclePoint {
        let c = self.branch_coeffs(x.half());
        CirclePoint::new(c.slope * x.value() + c.intercept)
    }

    /// `n` steps of the circle map.
    pub fn eval_n(self, x: CirclePoint, n: usize) -> CirclePoint {
        let mut y = x;
        for _ in 0..n {
            y = self.eval(y);
        }
        y
    }

    /// The canonical degree-2 lift `F`, normalized so `F(0)` lies in `[0,1)`.
    ///
    /// `F(X) = f~(X mod 1) + 2 floor(X)` where `f~` is the raw branch value
    /// plus 1 exactly when `A+ = a - b/2` is negative.
    pub fn lift(self, x: LiftPoint) -> LiftPoint {
        let k = x.0.floor();
        let r = x.0 - k;
        let plus = self.branch_coeffs(Branch::Plus);
        let raw = if r < 0.5 {
            plus.slope * r + plus.intercept
        } else {
            let minus = self.branch_coeffs(Branch::Minus);
            minus.slope * r + minus.intercept
        };
        let shift = if plus.intercept < 0.0 { 1.0 } else { 0.0 };
        LiftPoint(raw + shift + 2.0 * k)
    }

    pub fn lift_n(self, x: LiftPoint, n: usize) -> LiftPoint {
        let mut y = x;
        for _ in 0..n {
            y = self.lift(y);
        }
        y
    }

    /// Parameter-space mirror: the family is symmetric under
    /// `a -> 1/2 - a`, `x -> 1/2 - x`.
    pub fn mirror(self) -> Params {
        Params {
            a: frac(0.5 - self.a),
            b: self.b,
        }
    }
}

/// The straight sine: `4x - 1` on `[0, 1/2]`, `-4x + 3` on `[1/2, 1)`.
pub fn straight_sine(x: CirclePoint) -> f64 {
    let x = x.value();
    if x <= 0.5 {
        4.0 * x - 1.0
    } else {
        -4.0 * x + 3.0
    }
}

/// Mirror a phase-space configuration across the symmetry axis `a = 1/4`:
/// returns `((1/2 - a) mod 1, b)` and `(1/2 - x) mod 1`.
pub fn mirror(p: Params, x: CirclePoint) -> (Params, CirclePoint) {
    (p.mirror(), CirclePoint::new(0.5 - x.value()))
}

/// Lift evaluation with the `a` argument left unreduced: for `a = a0 + m`
/// with `a0` in `[0,1)` and integer `m`, this is `F_{a0,b}(X) + m`.
pub fn eval_lift_unreduced(a: f64, b: f64, x: LiftPoint) -> Result<LiftPoint, ParamError> {
    let m = a.floor();
    let p = Params::new(a - m, b)?;
    Ok(LiftPoint(p.lift(x).0 + m))
}
