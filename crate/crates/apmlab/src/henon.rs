//! Closed-form analysis of the limit conservative Henon maps
//!
//! ```text
//!   orientable:      x' = y,  y' = M - x - y^2
//!   non-orientable:  x' = y,  y' = M + x - y^2
//! ```
//!
//! These are the rescaled limits of the first-return maps; everything here
//! is exact root algebra and serves as the ground-truth oracle for the
//! return-map and cascade machinery.

use crate::geom::{Mat2, Point};
use serde::Serialize;

/// Stability class of a periodic point of an area-preserving map.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Stability {
    /// Elliptic with rotation away from the strong resonances.
    EllipticGeneric,
    /// Elliptic with psi in {pi/2, 2pi/3} (and arccos(-1/4) for 2-cycles).
    EllipticResonant,
    /// Double multiplier +1.
    ParabolicPlus,
    /// Double multiplier -1.
    ParabolicMinus,
    /// Real multipliers nu, 1/nu with det = +1 and |trace| > 2.
    Saddle,
    /// det = -1: multipliers nu, -1/nu.
    SaddleReflection,
}

impl Stability {
    pub fn as_str(self) -> &'static str {
        match self {
            Stability::EllipticGeneric => "elliptic",
            Stability::EllipticResonant => "elliptic-resonant",
            Stability::ParabolicPlus => "parabolic+1",
            Stability::ParabolicMinus => "parabolic-1",
            Stability::Saddle => "saddle",
            Stability::SaddleReflection => "saddle-reflection",
        }
    }
}

pub const PARABOLIC_BAND: f64 = 1e-6;
pub const RESONANCE_BAND: f64 = 1e-6;

/// Classify from (trace, det) of the differential over one period.
/// `two_cycle` adds the arccos(-1/4) resonance to the tagged set.
pub fn classify(trace: f64, det: f64, two_cycle: bool) -> Stability {
    if (det + 1.0).abs() < 1e-9 {
        return Stability::SaddleReflection;
    }
    if (trace - 2.0).abs() < PARABOLIC_BAND {
        return Stability::ParabolicPlus;
    }
    if (trace + 2.0).abs() < PARABOLIC_BAND {
        return Stability::ParabolicMinus;
    }
    if trace.abs() < 2.0 {
        // strong resonances by exact target traces
        let mut targets = vec![0.0, -1.0];
        if two_cycle {
            targets.push(-0.5);
        }
        if targets.iter().any(|t| (trace - t).abs() < RESONANCE_BAND) {
            return Stability::EllipticResonant;
        }
        return Stability::EllipticGeneric;
    }
    Stability::Saddle
}

#[derive(Clone, Debug, Serialize)]
pub struct HenonFixedPoint {
    pub point: Point,
    pub trace: f64,
    pub det: f64,
    pub stability: Stability,
    /// Rotation number arccos(trace/2) on elliptic branches.
    pub psi: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct HenonTwoCycle {
    pub points: [Point; 2],
    pub trace: f64,
    pub stability: Stability,
    pub psi: Option<f64>,
}

/// Tagged special parameter values of a family.
#[derive(Clone, Debug, Serialize)]
pub struct TaggedValue {
    pub m: f64,
    pub tag: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct HenonAnalysis {
    pub orientable: bool,
    pub m: f64,
    pub fixed_points: Vec<HenonFixedPoint>,
    pub two_cycles: Vec<HenonTwoCycle>,
    pub bifurcation_values: Vec<TaggedValue>,
}

pub fn henon_orientable(m: f64, p: Point) -> Point {
    Point::new(p.y, m - p.x - p.y * p.y)
}

pub fn henon_nonorientable(m: f64, p: Point) -> Point {
    Point::new(p.y, m + p.x - p.y * p.y)
}

pub fn henon_orientable_jacobian(p: Point) -> Mat2 {
    Mat2::new(0.0, 1.0, -1.0, -2.0 * p.y)
}

pub fn henon_nonorientable_jacobian(p: Point) -> Mat2 {
    Mat2::new(0.0, 1.0, 1.0, -2.0 * p.y)
}

fn psi_if_elliptic(trace: f64) -> Option<f64> {
    if trace.abs() <= 2.0 {
        Some((trace / 2.0).acos())
    } else {
        None
    }
}

/// Closed-form analysis of the orientable family at parameter M.
///
/// Fixed points solve x = y, x^2 + 2x - M = 0: they exist for M >= -1, the
/// branch x = -1 + sqrt(1+M) is elliptic on -1 < M < 3 with
/// psi = arccos(1 - sqrt(1+M)); the other branch is a saddle.
pub fn analyze_orientable(m: f64) -> HenonAnalysis {
    let mut fixed_points = Vec::new();
    let disc = 1.0 + m;
    if disc >= 0.0 {
        let s = disc.sqrt();
        for x in [-1.0 + s, -1.0 - s] {
            let p = Point::new(x, x);
            let j = henon_orientable_jacobian(p);
            let trace = j.trace();
            let stability = classify(trace, j.det(), false);
            fixed_points.push(HenonFixedPoint {
                point: p,
                trace,
                det: j.det(),
                stability,
                psi: psi_if_elliptic(trace),
            });
            if disc == 0.0 {
                break; // double root
            }
        }
    }
    HenonAnalysis {
        orientable: true,
        m,
        fixed_points,
        two_cycles: Vec::new(),
        bifurcation_values: orientable_tags(),
    }
}

fn orientable_tags() -> Vec<TaggedValue> {
    vec![
        TaggedValue { m: -1.0, tag: "parabolic+1" },
        TaggedValue { m: 0.0, tag: "resonance-1:4" },
        TaggedValue { m: 1.25, tag: "resonance-1:3" },
        TaggedValue { m: 3.0, tag: "parabolic-1" },
    ]
}

fn nonorientable_tags() -> Vec<TaggedValue> {
    vec![
        TaggedValue { m: 0.0, tag: "cycle-birth(+1,-1)" },
        TaggedValue { m: 0.5, tag: "resonance-1:4" },
        TaggedValue { m: 0.625, tag: "resonance-acos(-1/4)" },
        TaggedValue { m: 0.75, tag: "resonance-1:3" },
        TaggedValue { m: 1.0, tag: "period-doubling" },
    ]
}

/// Closed-form analysis of the non-orientable family at parameter M.
///
/// Fixed points (+-sqrt(M), +-sqrt(M)) for M > 0 are saddles with
/// reflection (det = -1); the 2-cycle {(-sqrt(M), sqrt(M)), (sqrt(M),
/// -sqrt(M))} is elliptic for 0 < M < 1 with psi = arccos(1 - 2M).
pub fn analyze_nonorientable(m: f64) -> HenonAnalysis {
    let mut fixed_points = Vec::new();
    let mut two_cycles = Vec::new();
    if m >= 0.0 {
        let s = m.sqrt();
        for x in [-s, s] {
            let p = Point::new(x, x);
            let j = henon_nonorientable_jacobian(p);
            let trace = j.trace();
            fixed_points.push(HenonFixedPoint {
                point: p,
                trace,
                det: j.det(),
                stability: classify(trace, j.det(), false),
                psi: None,
            });
            if m == 0.0 {
                break;
            }
        }
        if m > 0.0 {
            let p1 = Point::new(-s, s);
            let p2 = Point::new(s, -s);
            let j = henon_nonorientable_jacobian(p2).mul(henon_nonorientable_jacobian(p1));
            let trace = j.trace();
            let stability = classify(trace, j.det(), true);
            two_cycles.push(HenonTwoCycle {
                points: [p1, p2],
                trace,
                stability,
                psi: psi_if_elliptic(trace),
            });
        }
    }
    HenonAnalysis {
        orientable: false,
        m,
        fixed_points,
        two_cycles,
        bifurcation_values: nonorientable_tags(),
    }
}

/// Rotation angle of the elliptic fixed point: psi = arccos(1 - sqrt(1+M)).
pub fn orientable_psi(m: f64) -> Option<f64> {
    let s = (1.0 + m).sqrt();
    let c = 1.0 - s;
    if (-1.0..=1.0).contains(&c) {
        Some(c.acos())
    } else {
        None
    }
}

/// Rotation angle of the 2-cycle: psi = arccos(1 - 2M).
pub fn nonorientable_cycle_psi(m: f64) -> Option<f64> {
    let c = 1.0 - 2.0 * m;
    if (-1.0..=1.0).contains(&c) {
        Some(c.acos())
    } else {
        None
    }
}

/// Sign bookkeeping at the 1:4 resonance of the generalized family: the
/// fixed point is KAM-stable when the rescaled cubic coefficient
/// (nu2 f03 lambda^k / d^2 in the return-map setting) is positive. This is
/// a coefficient-sign check only, not a stability proof.
pub fn one_four_resonance_stabilizing(cubic_coeff: f64) -> bool {
    cubic_coeff > 0.0
}

/// Strong-resonance parameter values excluded by the genericity conditions.
pub fn resonance_m_values(orientable: bool) -> Vec<f64> {
    if orientable {
        vec![0.0, 1.25]
    } else {
        vec![0.5, 0.625, 0.75]
    }
}

/// Elliptic parameter windows of the two families:
/// the orientable family has an elliptic fixed point iff M in (-1, 3),
/// the non-orientable one an elliptic 2-cycle iff M in (0, 1).
pub fn elliptic_window(orientable: bool) -> (f64, f64) {
    if orientable {
        (-1.0, 3.0)
    } else {
        (0.0, 1.0)
    }
}
