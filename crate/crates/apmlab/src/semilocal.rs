//! Semi-local structure at the tangency: the invariants tau, alpha, s0, the
//! tangency class table, strip/horseshoe geometry, the margin-based
//! intersection classifier and its brute-force geometric oracle, and
//! symbolic-dynamics admissibility with an orbit-shooting verifier.

use crate::error::{Error, Result};
use crate::geom::{Box2, Mat2, Point};
use crate::globalmap::ModelMap;
use crate::rescale::compute_s0;
use serde::{Deserialize, Serialize};

/// Tangency classes. The third-class cells are keyed by the signs of
/// (lambda, c, d) and the saddle orientation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClassTag {
    Class1,
    Class2,
    H3_1,
    H3_2_1,
    H3_2_2,
    H3_3_1,
    H3_3_2,
    H3_4,
    H3_5,
}

impl ClassTag {
    pub fn as_str(self) -> &'static str {
        match self {
            ClassTag::Class1 => "class1",
            ClassTag::Class2 => "class2",
            ClassTag::H3_1 => "H3_1",
            ClassTag::H3_2_1 => "H3_2_1",
            ClassTag::H3_2_2 => "H3_2_2",
            ClassTag::H3_3_1 => "H3_3_1",
            ClassTag::H3_3_2 => "H3_3_2",
            ClassTag::H3_4 => "H3_4",
            ClassTag::H3_5 => "H3_5",
        }
    }
}

/// Invariants and classification of a model's homoclinic tangency.
#[derive(Clone, Debug, Serialize)]
pub struct TangencyProfile {
    pub tau: f64,
    pub alpha: f64,
    pub alpha_tilde: f64,
    pub s0: f64,
    pub nu1: i8,
    /// s0 evaluated with the opposite nu1 (odd-k value for locally
    /// non-orientable models).
    pub s0_alt: Option<f64>,
    pub class_tag: ClassTag,
    /// True when the raw signs were reduced to the canonical cell through
    /// the inverse-map dictionary (H3_1 with d < 0).
    pub canonicalized: bool,
    pub kbar: usize,
    pub lambda: f64,
    pub c: f64,
    pub d: f64,
    pub bc: f64,
}

impl TangencyProfile {
    /// tau of the canonical representative (the inverse map flips its sign).
    pub fn tau_canonical(&self) -> f64 {
        if self.canonicalized {
            -self.tau
        } else {
            self.tau
        }
    }
}

const TAU_INT_TOL: f64 = 1e-9;

fn frac_dist_to_integer(tau: f64) -> f64 {
    (tau - tau.round()).abs()
}

/// Default cutoff k-bar: when a tau-dependent bound is needed the cutoff
/// grows as tau approaches an integer, via |lambda|^(kbar/2) <
/// dist(tau, Z) * |ln|lambda|| / 4; otherwise 4.
pub fn default_kbar(lambda: f64, tau: f64, tau_dependent: bool) -> usize {
    if !tau_dependent {
        return 4;
    }
    let dist = frac_dist_to_integer(tau);
    if dist < TAU_INT_TOL {
        return usize::MAX; // callers treat borderline tau as unsupported
    }
    let bound = dist * lambda.abs().ln().abs() / 4.0;
    let k = 2.0 * bound.ln() / lambda.abs().ln();
    (k.ceil().max(4.0)) as usize
}

/// Smallest k for which the horseshoe crossings of all strips with indices
/// >= k stay inside the Pi+/Pi- neighbourhoods: the parabola crossing sits
/// at |y - y-| = sqrt(w) with w <= (|gamma|^-k y- + |lambda|^k |c| x+)/|d|,
/// and its Pi+ image is offset by |b| sqrt(w).
pub fn chart_kbar(model: &ModelMap) -> usize {
    let t = model.global.taylor();
    let cap = (0.95 * model.chart.eps_y).min(0.95 * model.chart.eps_x / t.b.abs().max(1e-300));
    let lambda = model.saddle.lambda().abs();
    let gamma = model.saddle.gamma().abs();
    for k in 1..=60 {
        let w = (gamma.powi(-(k as i32)) * t.y_minus + lambda.powi(k as i32) * t.c.abs() * t.x_plus)
            / t.d.abs();
        if w.sqrt() <= cap {
            return k;
        }
    }
    60
}

/// Compute tau, alpha, s0 and the class tag of a model.
pub fn compute_profile(model: &ModelMap) -> Result<TangencyProfile> {
    let t = model.global.taylor();
    let lambda = model.saddle.lambda();
    let orientable = model.saddle.is_orientable();
    let bc = t.b * t.c;
    let x_plus = t.x_plus;
    let y_minus = t.y_minus;

    if t.c * x_plus == 0.0 {
        return Err(Error::Validation("c * x+ = 0: the invariant tau is undefined".into()));
    }
    let ratio = t.c * x_plus / y_minus;
    let tau = ratio.abs().ln() / lambda.abs().ln();
    let alpha = ratio - 1.0;

    if !orientable && lambda > 0.0 {
        return Err(Error::Validation(
            "locally non-orientable models must store lambda < 0, gamma > 0".into(),
        ));
    }
    if !orientable && bc > 0.0 {
        return Err(Error::Validation(
            "locally non-orientable models require a needed-type pair (bc = -1)".into(),
        ));
    }

    let (class_tag, canonicalized) = classify_cell(lambda, orientable, t.c, t.d)?;

    let nu1: i8 = if orientable {
        if bc < 0.0 {
            1
        } else {
            -1
        }
    } else {
        1 // even-k value; s0_alt carries the odd-k one
    };
    let s0 = compute_s0(&t, nu1).value;
    let s0_alt = if orientable { None } else { Some(compute_s0(&t, -nu1).value) };

    let tau_dependent = matches!(
        class_tag,
        ClassTag::H3_1 | ClassTag::H3_2_1 | ClassTag::H3_2_2 | ClassTag::H3_4
    );
    let kbar = default_kbar(lambda, tau, tau_dependent && frac_dist_to_integer(tau) >= TAU_INT_TOL)
        .max(chart_kbar(model));

    Ok(TangencyProfile {
        tau,
        alpha,
        alpha_tilde: alpha + 2.0,
        s0,
        nu1,
        s0_alt,
        class_tag,
        canonicalized,
        kbar,
        lambda,
        c: t.c,
        d: t.d,
        bc,
    })
}

fn classify_cell(lambda: f64, orientable: bool, c: f64, d: f64) -> Result<(ClassTag, bool)> {
    if orientable {
        if lambda > 0.0 {
            if c < 0.0 && d < 0.0 {
                return Ok((ClassTag::Class1, false));
            }
            if c < 0.0 && d > 0.0 {
                return Ok((ClassTag::Class2, false));
            }
            // c > 0: H3_1; d < 0 reduces to d > 0 through the inverse map
            return Ok((ClassTag::H3_1, d < 0.0));
        }
        // lambda < 0, gamma = 1/lambda < 0
        if d > 0.0 {
            if c > 0.0 {
                return Ok((ClassTag::H3_4, false));
            }
            return Ok((ClassTag::H3_5, false));
        }
        return Err(Error::Unsupported(format!(
            "signs (lambda={lambda:+.3e}, c={c:+.3e}, d={d:+.3e}, orientable saddle) match no \
             reconstructed class cell; pass the inverse-map representative"
        )));
    }
    // lambda*gamma = -1, lambda < 0
    if c > 0.0 {
        if d < 0.0 {
            Ok((ClassTag::H3_2_1, false))
        } else {
            Ok((ClassTag::H3_3_1, false))
        }
    } else if d < 0.0 {
        Ok((ClassTag::H3_2_2, false))
    } else {
        Ok((ClassTag::H3_3_2, false))
    }
}

/// Inverse-map coefficient dictionary (c~ = 1/c, d~ = -d/(c b^2)): the
/// global-map coefficients of f^-1 in its own standard coordinates, where
/// the variables and the homoclinic points interchange. For an orientable
/// saddle the inverse keeps the same contracting multiplier.
pub fn inverse_map_signs(profile: &TangencyProfile, b: f64) -> (f64, f64) {
    (1.0 / profile.c, -profile.d / (profile.c * b * b))
}

// ---------------------------------------------------------------------------
// strips and horseshoes
// ---------------------------------------------------------------------------

/// The strip sigma_k^0 in Pi+ (points reaching Pi- in exactly k steps).
pub fn sigma0_box(model: &ModelMap, k: usize) -> Box2 {
    let x_plus = model.global.x_plus();
    let y_minus = model.global.y_minus();
    let eps_x = model.chart.eps_x;
    let eps_y = model.chart.eps_y;
    if model.saddle.betas().is_empty() {
        let g = model.saddle.gamma_pow_neg(k);
        return Box2::new(
            x_plus - eps_x,
            x_plus + eps_x,
            g * (y_minus - eps_y),
            g * (y_minus + eps_y),
        );
    }
    // nonlinear saddle: solve the band from the cross form at sampled x
    let mut y_lo = f64::INFINITY;
    let mut y_hi = f64::NEG_INFINITY;
    for i in 0..=8 {
        let x = x_plus - eps_x + 2.0 * eps_x * i as f64 / 8.0;
        for target in [y_minus - eps_y, y_minus + eps_y] {
            if let Ok(y0) = model.saddle.y_before(x, target, k) {
                y_lo = y_lo.min(y0);
                y_hi = y_hi.max(y0);
            }
        }
    }
    Box2::new(x_plus - eps_x, x_plus + eps_x, y_lo, y_hi)
}

/// The strip sigma_k^1 = T0^k(sigma_k^0) in Pi-.
pub fn sigma1_box(model: &ModelMap, k: usize) -> Box2 {
    let x_plus = model.global.x_plus();
    let y_minus = model.global.y_minus();
    let eps_x = model.chart.eps_x;
    let eps_y = model.chart.eps_y;
    let lam_k = model.saddle.lambda().powi(k as i32);
    if model.saddle.betas().is_empty() {
        return Box2::new(
            lam_k * (x_plus - eps_x),
            lam_k * (x_plus + eps_x),
            y_minus - eps_y,
            y_minus + eps_y,
        );
    }
    // hull of the closed-form images of the per-x band edges
    let mut x_lo = f64::INFINITY;
    let mut x_hi = f64::NEG_INFINITY;
    for i in 0..=8 {
        let x = x_plus - eps_x + 2.0 * eps_x * i as f64 / 8.0;
        for target in [y_minus - eps_y, y_minus + eps_y] {
            if let Ok(y0) = model.saddle.y_before(x, target, k) {
                if let Ok(xk) = model.saddle.x_after(Point::new(x, y0), k) {
                    x_lo = x_lo.min(xk);
                    x_hi = x_hi.max(xk);
                }
            }
        }
    }
    Box2::new(x_lo, x_hi, y_minus - eps_y, y_minus + eps_y)
}

/// Geometry pair returned by `strip_geometry`.
#[derive(Clone, Debug, Serialize)]
pub struct StripGeometry {
    pub k: usize,
    pub sigma0: Box2,
    pub sigma1: Box2,
}

pub fn strip_geometry(model: &ModelMap, k: usize) -> Result<StripGeometry> {
    if k < 1 {
        return Err(Error::Validation("strip index k must be >= 1".into()));
    }
    let sigma0 = sigma0_box(model, k);
    let sigma1 = sigma1_box(model, k);
    // the cross solves fail (non-finite hull) when the chart cannot carry
    // the band, e.g. B(xy) leaving its positivity domain
    if !sigma0.y_lo.is_finite() || !sigma1.x_lo.is_finite() {
        return Err(Error::Numerical(format!("chart too small to carry the strip k={k}")));
    }
    Ok(StripGeometry { k, sigma0, sigma1 })
}

/// Verdict of the margin-based intersection test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Regular,
    Empty,
    Borderline,
}

/// Horseshoe-vs-strip pair with the margin data.
#[derive(Clone, Debug, Serialize)]
pub struct StripPair {
    pub i: usize,
    pub j: usize,
    pub strip_box: Box2,
    pub horseshoe_samples: Vec<Point>,
    pub verdict: Verdict,
    /// d (gamma^-i y- - c lambda^j x+), the quantity tested against the
    /// S1 threshold.
    pub margin: f64,
    pub threshold: f64,
}

/// Classify the intersection of the horseshoe T1(sigma_j^1) with the strip
/// sigma_i^0 by the margin inequality.
pub fn intersection_classify(model: &ModelMap, i: usize, j: usize, s1: f64, kbar: usize) -> StripPair {
    let t = model.global.taylor();
    let lambda = model.saddle.lambda();
    let margin = t.d
        * (model.saddle.gamma_pow_neg(i) * t.y_minus - t.c * lambda.powi(j as i32) * t.x_plus);
    let threshold = s1
        * (lambda.abs().powi(i as i32) + lambda.abs().powi(j as i32))
        * lambda.abs().powf(kbar as f64 / 2.0);
    let verdict = if margin > threshold {
        Verdict::Regular
    } else if margin < -threshold {
        Verdict::Empty
    } else {
        Verdict::Borderline
    };
    // polyline: image of the sigma_j^1 center line under T1
    let sig1 = sigma1_box(model, j);
    let y_minus = model.global.y_minus();
    let eps_y = model.chart.eps_y;
    let xc = sig1.x_center();
    let horseshoe_samples: Vec<Point> = (0..=64)
        .map(|n| {
            let y = y_minus - eps_y + 2.0 * eps_y * n as f64 / 64.0;
            model.global.apply(Point::new(xc, y))
        })
        .collect();
    StripPair {
        i,
        j,
        strip_box: sigma0_box(model, i),
        horseshoe_samples,
        verdict,
        margin: margin,
        threshold,
    }
}

/// Verdict of the brute-force geometric intersection test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GeomVerdict {
    Regular,
    Empty,
    Irregular,
}

/// Count connected components of T1(sigma_j^1) inter sigma_i^0 by mapping
/// boundary polylines of the strip and counting in-box runs; the saddle
/// (cone) condition is checked on sampled differentials. Returns the verdict
/// and a stability flag (false = the count did not stabilize under
/// refinement, verdict degraded to Irregular-with-warning).
pub fn geometric_intersection(model: &ModelMap, i: usize, j: usize) -> (GeomVerdict, bool) {
    let target = sigma0_box(model, i);
    let sig1 = sigma1_box(model, j);
    let y_minus = model.global.y_minus();
    let eps_y = model.chart.eps_y;
    let xs = [sig1.x_lo, sig1.x_center(), sig1.x_hi];

    let count_runs = |x: f64, n: usize| -> (usize, Vec<(f64, f64)>) {
        let mut runs = Vec::new();
        let mut inside = false;
        let mut start = 0.0;
        for s in 0..=n {
            let y = y_minus - eps_y + 2.0 * eps_y * s as f64 / n as f64;
            let q = model.global.apply(Point::new(x, y));
            let now = target.contains(q);
            if now && !inside {
                start = y;
                inside = true;
            } else if !now && inside {
                runs.push((start, y));
                inside = false;
            }
        }
        if inside {
            runs.push((start, y_minus + eps_y));
        }
        (runs.len(), runs)
    };

    // refine x2 until the counts are stable under two successive doublings
    let mut counts = [usize::MAX; 3];
    let mut runs_mid: Vec<(f64, f64)> = Vec::new();
    let mut agreements = 0usize;
    for n in [2048usize, 4096, 8192, 16384, 32768] {
        let mut level_counts = [0usize; 3];
        for (ci, &x) in xs.iter().enumerate() {
            let (cnt, runs) = count_runs(x, n);
            level_counts[ci] = cnt;
            if ci == 1 {
                runs_mid = runs;
            }
        }
        if level_counts == counts {
            agreements += 1;
            if agreements >= 2 {
                break;
            }
        } else {
            agreements = 0;
            counts = level_counts;
        }
    }
    if agreements < 2 {
        return (GeomVerdict::Irregular, false);
    }
    if counts[0] != counts[1] || counts[1] != counts[2] {
        return (GeomVerdict::Irregular, true);
    }
    match counts[1] {
        0 => (GeomVerdict::Empty, true),
        2 => {
            // saddle condition at the run midpoints
            for &(y0, y1) in &runs_mid {
                let q = Point::new(xs[1], 0.5 * (y0 + y1));
                if !cone_condition(model, j, q) {
                    return (GeomVerdict::Irregular, true);
                }
            }
            (GeomVerdict::Regular, true)
        }
        _ => (GeomVerdict::Irregular, true),
    }
}

/// Expansion/contraction cones of T1 T0^j at the sigma_j^1 point q.
fn cone_condition(model: &ModelMap, j: usize, q: Point) -> bool {
    // backward orbit q -> p = T0^-j(q), then forward chain rule
    let mut pts = vec![q];
    let mut p = q;
    for _ in 0..j {
        match model.saddle.apply_inverse(p) {
            Ok(prev) => {
                p = prev;
                pts.push(p);
            }
            Err(_) => return false,
        }
    }
    let mut jac = Mat2::identity();
    for point in pts.iter().rev().skip(1) {
        jac = model.saddle.jacobian(*point).mul(jac);
    }
    // last factor: DT0 at the point before q is already included; compose T1
    let d = model.global.jacobian(q).mul(jac);
    let fwd = d.apply(Point::new(0.0, 1.0));
    if !(fwd.y.abs() > 1.5 && fwd.y.abs() > 1.5 * fwd.x.abs()) {
        return false;
    }
    match d.inverse() {
        Some(dinv) => {
            let bwd = dinv.apply(Point::new(1.0, 0.0));
            bwd.x.abs() > 1.5 && bwd.x.abs() > 1.5 * bwd.y.abs()
        }
        None => false,
    }
}

/// Smallest S1 from a doubling grid for which the margin classifier never
/// contradicts the geometric oracle over the calibration window
/// (i, j in [kbar, kbar+span]).
pub fn calibrate_s1(model: &ModelMap, kbar: usize, span: usize) -> f64 {
    let mut geo = Vec::new();
    for i in kbar..=kbar + span {
        for j in kbar..=kbar + span {
            let (v, _) = geometric_intersection(model, i, j);
            geo.push(((i, j), v));
        }
    }
    let mut s1 = 0.0_f64;
    loop {
        let mut contradiction = false;
        for &((i, j), gv) in &geo {
            let cv = intersection_classify(model, i, j, s1, kbar).verdict;
            let clash = matches!(
                (cv, gv),
                (Verdict::Regular, GeomVerdict::Empty) | (Verdict::Empty, GeomVerdict::Regular)
            );
            if clash {
                contradiction = true;
                break;
            }
        }
        if !contradiction {
            return s1;
        }
        s1 = if s1 == 0.0 { 1e-3 } else { s1 * 2.0 };
        if s1 > 1e6 {
            return s1;
        }
    }
}

// ---------------------------------------------------------------------------
// symbolic codes
// ---------------------------------------------------------------------------

/// Which leg of the horseshoe a transition passes through: the sign of
/// y - y- at the Pi- point (One = above, Two = below).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Leg {
    One,
    Two,
}

impl Leg {
    pub fn sign(self) -> f64 {
        match self {
            Leg::One => 1.0,
            Leg::Two => -1.0,
        }
    }
}

/// One block of a symbolic code: k zeros followed by a nonzero symbol.
/// Adjacent nonzero symbols cannot occur since k >= kbar >= 1.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct CodeBlock {
    pub k: usize,
    pub leg: Option<Leg>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SymbolCode {
    pub blocks: Vec<CodeBlock>,
    pub periodic: bool,
}

impl SymbolCode {
    pub fn periodic_from_ks(ks: &[usize]) -> Self {
        SymbolCode {
            blocks: ks.iter().map(|&k| CodeBlock { k, leg: None }).collect(),
            periodic: true,
        }
    }

    pub fn with_legs(ks: &[usize], legs: &[Leg]) -> Self {
        SymbolCode {
            blocks: ks
                .iter()
                .zip(legs.iter())
                .map(|(&k, &l)| CodeBlock { k, leg: Some(l) })
                .collect(),
            periodic: true,
        }
    }

    /// Parse "8,10" or "8:1,10:2" (block length, optional leg).
    pub fn parse(text: &str) -> Result<Self> {
        let mut blocks = Vec::new();
        for part in text.split(',') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let (kstr, leg) = match part.split_once(':') {
                Some((k, l)) => {
                    let leg = match l.trim() {
                        "1" => Leg::One,
                        "2" => Leg::Two,
                        other => {
                            return Err(Error::Validation(format!("bad leg symbol '{other}'")))
                        }
                    };
                    (k.trim(), Some(leg))
                }
                None => (part, None),
            };
            let k: usize = kstr
                .parse()
                .map_err(|_| Error::Validation(format!("bad block length '{kstr}'")))?;
            blocks.push(CodeBlock { k, leg });
        }
        if blocks.is_empty() {
            return Err(Error::Validation("empty symbolic code".into()));
        }
        Ok(SymbolCode { blocks, periodic: true })
    }

    fn adjacent_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.blocks.len();
        let mut pairs = Vec::new();
        if n == 0 {
            return pairs;
        }
        let upper = if self.periodic { n } else { n - 1 };
        for s in 0..upper {
            pairs.push((self.blocks[s].k, self.blocks[(s + 1) % n].k));
        }
        pairs
    }
}

/// Admissibility of a code for the class of the given profile.
///
/// Implemented descriptions: Class1 (nothing admissible), Class2
/// (everything), H3_1 with tau > 0 non-integer (gap rule), H3_2 with
/// tau < 0 non-integer (parity and gap rule), H3_3 (parity), H3_4 with
/// tau != 0 (parity), H3_5 with |tau| < 1 (mixed-parity order rule).
pub fn admissible_code(profile: &TangencyProfile, code: &SymbolCode, kbar: usize) -> Result<bool> {
    for b in &code.blocks {
        if b.k < kbar {
            return Err(Error::Validation(format!(
                "code block {} below cutoff kbar = {kbar}",
                b.k
            )));
        }
    }
    let tau = profile.tau_canonical();
    let near_int = frac_dist_to_integer(tau) < TAU_INT_TOL;
    let floor_tau = tau.floor();
    let pairs = code.adjacent_pairs();
    match profile.class_tag {
        ClassTag::Class1 => Ok(false),
        ClassTag::Class2 => Ok(true),
        ClassTag::H3_1 => {
            if tau <= 0.0 && !near_int {
                return Ok(false); // trivial set for negative tau
            }
            if near_int {
                return Err(Error::Unsupported(
                    "H3_1 with integer (or zero) tau has no implemented description".into(),
                ));
            }
            Ok(pairs
                .iter()
                .all(|&(ks, ks1)| ks as f64 - ks1 as f64 + floor_tau + 0.5 > 0.0))
        }
        ClassTag::H3_2_1 | ClassTag::H3_2_2 => {
            if near_int {
                return Err(Error::Unsupported(
                    "H3_2 with integer (or zero) tau has no implemented description".into(),
                ));
            }
            if tau > 0.0 {
                return Ok(false);
            }
            let want_even = profile.class_tag == ClassTag::H3_2_1;
            let parity_ok = code
                .blocks
                .iter()
                .all(|b| (b.k % 2 == 0) == want_even);
            Ok(parity_ok
                && pairs
                    .iter()
                    .all(|&(ks, ks1)| (ks as f64 - ks1 as f64) + floor_tau + 0.5 < 0.0))
        }
        ClassTag::H3_3_1 => Ok(code.blocks.iter().all(|b| b.k % 2 == 1)),
        ClassTag::H3_3_2 => Ok(code.blocks.iter().all(|b| b.k % 2 == 0)),
        ClassTag::H3_4 => {
            if tau.abs() < TAU_INT_TOL {
                return Err(Error::Unsupported(
                    "H3_4 at tau = 0 switches parity and has no implemented description".into(),
                ));
            }
            let want_even = tau > 0.0;
            Ok(code.blocks.iter().all(|b| (b.k % 2 == 0) == want_even))
        }
        ClassTag::H3_5 => {
            if tau.abs() >= 1.0 {
                return Err(Error::Unsupported(
                    "H3_5 description implemented for |tau| < 1 only".into(),
                ));
            }
            Ok(pairs.iter().all(|&(ks, ks1)| {
                if ks % 2 == 1 {
                    ks1 % 2 == 0 && ks1 < ks
                } else {
                    ks1 % 2 == 0 || ks1 > ks
                }
            }))
        }
    }
}

// ---------------------------------------------------------------------------
// orbit shooting
// ---------------------------------------------------------------------------

/// A located periodic orbit, represented by its Pi- points (one per block).
#[derive(Clone, Debug, Serialize)]
pub struct PeriodicOrbit {
    /// Points q_s in sigma_{k_s}^1 (just before the global map applies).
    pub points: Vec<Point>,
    pub residual: f64,
    /// Full period in map iterations: sum of (k_s + q).
    pub period: usize,
    pub legs: Vec<Leg>,
}

/// Outcome of the orbit search for a code.
#[derive(Clone, Debug, Serialize)]
pub enum OrbitOutcome {
    Found(PeriodicOrbit),
    /// Every seed either left the neighbourhood or diverged.
    Absent { seeds_tried: usize },
    /// Some Newton run stagnated inside the neighbourhood: not certified.
    Inconclusive { seeds_tried: usize, best_residual: f64 },
}

const ORBIT_TOL: f64 = 1e-10;
const ORBIT_MAX_BLOCK_SUM: usize = 40;

enum SeedResult {
    Converged(Vec<Point>, f64),
    Escaped,
    Diverged,
    Stagnated(f64),
}

/// Multi-shooting Newton for the single orbit prescribed by a periodic code
/// (blocks plus legs); legs left unspecified are enumerated.
pub fn code_to_orbit(model: &ModelMap, code: &SymbolCode) -> Result<OrbitOutcome> {
    if !code.periodic {
        return Err(Error::Validation("orbit search needs a periodic code".into()));
    }
    let total: usize = code.blocks.iter().map(|b| b.k).sum();
    if total > ORBIT_MAX_BLOCK_SUM {
        return Err(Error::Validation(format!(
            "total block sum {total} exceeds the supported bound {ORBIT_MAX_BLOCK_SUM}"
        )));
    }
    let m = code.blocks.len();
    let ks: Vec<usize> = code.blocks.iter().map(|b| b.k).collect();

    // enumerate unspecified legs
    let mut leg_sets: Vec<Vec<Leg>> = vec![Vec::new()];
    for b in &code.blocks {
        let choices = match b.leg {
            Some(l) => vec![l],
            None => vec![Leg::One, Leg::Two],
        };
        let mut next = Vec::new();
        for prefix in &leg_sets {
            for &c in &choices {
                let mut v = prefix.clone();
                v.push(c);
                next.push(v);
            }
        }
        leg_sets = next;
    }

    let mut seeds_tried = 0;
    let mut best_residual = f64::INFINITY;
    let mut stagnated = false;

    for legs in &leg_sets {
        for seed in seed_candidates(model, &ks, legs) {
            seeds_tried += 1;
            match multishoot(model, &ks, seed) {
                SeedResult::Converged(points, residual) => {
                    // verify the located orbit carries the requested legs
                    let y_minus = model.global.y_minus();
                    let got: Vec<Leg> = points
                        .iter()
                        .map(|q| if q.y >= y_minus { Leg::One } else { Leg::Two })
                        .collect();
                    if &got == legs {
                        let period: usize =
                            ks.iter().map(|&k| k + model.q as usize).sum();
                        return Ok(OrbitOutcome::Found(PeriodicOrbit {
                            points,
                            residual,
                            period,
                            legs: got,
                        }));
                    }
                    // converged to a different symbol sequence: keep looking
                }
                SeedResult::Escaped | SeedResult::Diverged => {}
                SeedResult::Stagnated(r) => {
                    stagnated = true;
                    best_residual = best_residual.min(r);
                }
            }
        }
        let _ = m;
    }
    if stagnated {
        Ok(OrbitOutcome::Inconclusive { seeds_tried, best_residual })
    } else {
        Ok(OrbitOutcome::Absent { seeds_tried })
    }
}

/// Geometric seeds: the parabola-crossing prediction per transition, with
/// fallback magnitudes when the crossing has no real solution.
fn seed_candidates(model: &ModelMap, ks: &[usize], legs: &[Leg]) -> Vec<Vec<Point>> {
    let t = model.global.taylor();
    let lambda = model.saddle.lambda();
    let y_minus = t.y_minus;
    let m = ks.len();

    // per-transition candidate y-offsets at the Pi- point q_s
    let mut per_block: Vec<Vec<f64>> = Vec::with_capacity(m);
    for s in 0..m {
        let k_next = ks[(s + 1) % m];
        let w = (model.saddle.gamma_pow_neg(k_next) * y_minus
            - t.mu
            - t.c * lambda.powi(ks[s] as i32) * t.x_plus)
            / t.d;
        let sign = legs[s].sign();
        let mut cands = Vec::new();
        if w > 0.0 {
            let r = w.sqrt();
            cands.push(sign * r);
            cands.push(sign * r * 1.25);
            cands.push(sign * r * 0.75);
        } else {
            // no real crossing: offer a few magnitudes inside the chart
            let scale = (model.chart.eps_y * 0.4).max(1e-6);
            cands.push(sign * scale);
            cands.push(sign * scale * 0.5);
        }
        per_block.push(cands);
    }

    // primary seed (first candidate each) plus one-at-a-time variations
    let primary: Vec<Point> = (0..m)
        .map(|s| {
            Point::new(
                lambda.powi(ks[s] as i32) * t.x_plus,
                y_minus + per_block[s][0],
            )
        })
        .collect();
    let mut seeds = vec![primary.clone()];
    for s in 0..m {
        for alt in per_block[s].iter().skip(1) {
            let mut v = primary.clone();
            v[s] = Point::new(v[s].x, y_minus + alt);
            seeds.push(v);
        }
    }
    seeds.truncate(200);
    seeds
}

fn multishoot(model: &ModelMap, ks: &[usize], mut qs: Vec<Point>) -> SeedResult {
    let m = ks.len();
    let n = 2 * m;
    // inflate the working chart: Newton iterates may graze the nominal
    // boundary before settling on an orbit that lies inside it
    let chart = {
        let nominal = model.u0_box();
        crate::saddle::ChartBox {
            x_max: nominal.x_max + 0.5 * model.chart.eps_x,
            y_max: nominal.y_max + 0.5 * model.chart.eps_y,
        }
    };
    let lambda_abs = model.saddle.lambda().abs();
    let scale: Vec<f64> = ks.iter().map(|&k| lambda_abs.powi(k as i32)).collect();
    let mut last_residual = f64::INFINITY;

    for _ in 0..60 {
        // residuals and block jacobians
        let mut residual = 0.0_f64;
        let mut rs: Vec<Point> = Vec::with_capacity(m);
        let mut blocks: Vec<Mat2> = Vec::with_capacity(m);
        for s in 0..m {
            let k_next = ks[(s + 1) % m];
            let p_next = model.global.apply(qs[s]);
            let j1 = model.global.jacobian(qs[s]);
            if !model.in_pi_plus(p_next) {
                // generous: allow some slack before declaring escape
                let dx = (p_next.x - model.global.x_plus()).abs();
                let dy = p_next.y.abs();
                if dx > 3.0 * model.chart.eps_x || dy > 3.0 * model.chart.eps_y {
                    return SeedResult::Escaped;
                }
            }
            let (q_pred, j0) = match model.saddle.iterate_with_jacobian(p_next, k_next, &chart) {
                Ok(v) => v,
                Err(_) => return SeedResult::Escaped,
            };
            let r = q_pred - qs[(s + 1) % m];
            residual = residual.max(r.norm_inf());
            rs.push(r);
            blocks.push(j0.mul(j1));
        }
        if residual < ORBIT_TOL {
            // a located orbit must live in the nominal Pi- neighbourhoods
            let y_minus = model.global.y_minus();
            let inside = qs.iter().all(|q| {
                q.x.abs() <= 1.02 * model.chart.eps_x
                    && (q.y - y_minus).abs() <= 1.02 * model.chart.eps_y
            });
            if !inside {
                return SeedResult::Escaped;
            }
            return SeedResult::Converged(qs, residual);
        }
        if !residual.is_finite() || residual > 1e3 {
            return SeedResult::Diverged;
        }
        last_residual = residual;

        // assemble the scaled cyclic system
        let mut a = vec![0.0_f64; n * n];
        let mut b = vec![0.0_f64; n];
        for s in 0..m {
            let sn = (s + 1) % m;
            let row = 2 * s;
            // row scaling: x-rows by 1/scale[sn]
            let rx = 1.0 / scale[sn];
            let blk = blocks[s];
            // columns of q_s (x scaled by scale[s])
            a[row * n + 2 * s] = rx * blk.a * scale[s];
            a[row * n + 2 * s + 1] = rx * blk.b;
            a[(row + 1) * n + 2 * s] = blk.c * scale[s];
            a[(row + 1) * n + 2 * s + 1] = blk.d;
            // columns of q_{s+1}: -I in scaled coordinates
            a[row * n + 2 * sn] += -1.0;
            a[(row + 1) * n + 2 * sn + 1] += -1.0;
            b[row] = -rx * rs[s].x;
            b[row + 1] = -rs[s].y;
        }
        let delta = match crate::geom::solve_dense(a, b) {
            Some(d) => d,
            None => return SeedResult::Stagnated(residual),
        };
        let mut step = 0.0_f64;
        for s in 0..m {
            let dx = delta[2 * s] * scale[s];
            let dy = delta[2 * s + 1];
            qs[s] = Point::new(qs[s].x + dx, qs[s].y + dy);
            step = step.max(dx.abs().max(dy.abs()));
        }
        if !step.is_finite() || step > 10.0 * chart.y_max {
            return SeedResult::Diverged;
        }
    }
    SeedResult::Stagnated(last_residual)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::globalmap::{Chart, ExactGlobalMap, GlobalMap};
    use crate::saddle::{Orientation, SaddleNormalForm};

    pub(crate) fn model_with(
        lambda: f64,
        orientation: Orientation,
        betas: Vec<f64>,
        b: f64,
        c: f64,
        d: f64,
        x_plus: f64,
        y_minus: f64,
        sigma: f64,
        mu: f64,
    ) -> ModelMap {
        let saddle = SaddleNormalForm::new(lambda, orientation, betas).unwrap();
        let global = GlobalMap::Exact(ExactGlobalMap {
            x_plus,
            y_minus,
            mu,
            b,
            c,
            d,
            sigma,
            f03: 0.0,
        });
        ModelMap::new(saddle, global, 1, None).unwrap()
    }

    fn class2_model() -> ModelMap {
        // lambda > 0, c < 0, d > 0
        model_with(0.5, Orientation::Preserving, vec![], 1.0, -1.0, 1.0, 1.0, 1.0, 0.0, 0.0)
    }

    fn class1_model() -> ModelMap {
        model_with(0.5, Orientation::Preserving, vec![], 1.0, -1.0, -1.0, 1.0, 1.0, 0.0, 0.0)
    }

    fn h31_model(tau: f64) -> ModelMap {
        // lambda > 0, c > 0, d > 0; x+ set so that c x+ / y- = lambda^tau
        let lambda: f64 = 0.5;
        let x_plus = lambda.powf(tau);
        model_with(lambda, Orientation::Preserving, vec![], -1.0, 1.0, 1.0, x_plus, 1.0, 0.0, 0.0)
    }

    #[test]
    fn tau_alpha_trivial_values() {
        // c x+ = y-  ->  tau = 0, alpha = 0
        let m = model_with(0.5, Orientation::Preserving, vec![], -1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 0.0);
        let p = compute_profile(&m).unwrap();
        assert_eq!(p.tau, 0.0);
        assert_eq!(p.alpha, 0.0);
        // lambda = 1/2, c x+/y- = 1/4 -> tau = 2
        let m = model_with(0.5, Orientation::Preserving, vec![], -4.0, 0.25, 1.0, 1.0, 1.0, 0.0, 0.0);
        let p = compute_profile(&m).unwrap();
        assert!((p.tau - 2.0).abs() < 1e-14);
    }

    #[test]
    fn tau_alpha_consistency_identity() {
        for (i, &(lambda, c, x_plus, y_minus)) in [
            (0.5, 1.3, 0.8, 1.1),
            (0.62, -0.7, 1.4, 0.9),
            (0.45, 2.0, 0.6, 0.7),
        ]
        .iter()
        .enumerate()
        {
            let _ = i;
            let m = model_with(
                lambda,
                Orientation::Preserving,
                vec![],
                -1.0 / c,
                c,
                1.0,
                x_plus,
                y_minus,
                0.0,
                0.0,
            );
            let p = compute_profile(&m).unwrap();
            assert!((lambda.abs().powf(p.tau) - (p.alpha + 1.0).abs()).abs() < 1e-12);
        }
    }

    #[test]
    fn class_table() {
        assert_eq!(compute_profile(&class1_model()).unwrap().class_tag, ClassTag::Class1);
        assert_eq!(compute_profile(&class2_model()).unwrap().class_tag, ClassTag::Class2);
        assert_eq!(compute_profile(&h31_model(0.5)).unwrap().class_tag, ClassTag::H3_1);
        // H3_4: lambda < 0 orientable, c > 0, d > 0
        let m = model_with(-0.5, Orientation::Preserving, vec![], -1.0, 1.0, 1.0, 1.0, 1.0, 0.0, 0.0);
        assert_eq!(compute_profile(&m).unwrap().class_tag, ClassTag::H3_4);
        // H3_5: lambda < 0 orientable, c < 0, d > 0
        let m = model_with(-0.5, Orientation::Preserving, vec![], 1.0, -1.0, 1.0, 1.0, 1.0, 0.0, 0.0);
        assert_eq!(compute_profile(&m).unwrap().class_tag, ClassTag::H3_5);
        // H3_3_1: reversing, c > 0, d > 0
        let m = model_with(-0.5, Orientation::Reversing, vec![], -1.0, 1.0, 1.0, 1.0, 1.0, 0.0, 0.0);
        let p = compute_profile(&m).unwrap();
        assert_eq!(p.class_tag, ClassTag::H3_3_1);
        // H3_2_1: reversing, c > 0, d < 0
        let m = model_with(-0.5, Orientation::Reversing, vec![], -1.0, 1.0, -1.0, 1.0, 1.0, 0.0, 0.0);
        assert_eq!(compute_profile(&m).unwrap().class_tag, ClassTag::H3_2_1);
        // H3_2_2: reversing, c < 0, d < 0
        let m = model_with(-0.5, Orientation::Reversing, vec![], 1.0, -1.0, -1.0, 1.0, 1.0, 0.0, 0.0);
        assert_eq!(compute_profile(&m).unwrap().class_tag, ClassTag::H3_2_2);
        // H3_3_2: reversing, c < 0, d > 0
        let m = model_with(-0.5, Orientation::Reversing, vec![], 1.0, -1.0, 1.0, 1.0, 1.0, 0.0, 0.0);
        assert_eq!(compute_profile(&m).unwrap().class_tag, ClassTag::H3_3_2);
        // orientable lambda < 0 with d < 0 matches no reconstructed cell
        let saddle = SaddleNormalForm::new(-0.5, Orientation::Preserving, vec![]).unwrap();
        let global = GlobalMap::Exact(ExactGlobalMap {
            x_plus: 1.0,
            y_minus: 1.0,
            mu: 0.0,
            b: -1.0,
            c: 1.0,
            d: -1.0,
            sigma: 0.0,
            f03: 0.0,
        });
        let m = ModelMap::new(saddle, global, 1, None).unwrap();
        assert!(matches!(compute_profile(&m), Err(crate::error::Error::Unsupported(_))));
    }

    #[test]
    fn h31_negative_d_canonicalizes() {
        let m = model_with(0.5, Orientation::Preserving, vec![], -1.0, 1.0, -1.0, 1.0, 1.0, 0.0, 0.0);
        let p = compute_profile(&m).unwrap();
        assert_eq!(p.class_tag, ClassTag::H3_1);
        assert!(p.canonicalized);
        // inverse dictionary maps it back into the d > 0 cell
        let (c_t, d_t) = inverse_map_signs(&p, -1.0);
        assert!(c_t > 0.0 && d_t > 0.0);
    }

    #[test]
    fn strip_bands_exact_for_linear_saddle() {
        // gamma^-3 [0.9, 1.1] with explicit chart eps 0.1
        let saddle = SaddleNormalForm::new(0.5, Orientation::Preserving, vec![]).unwrap();
        let global = GlobalMap::Exact(ExactGlobalMap {
            x_plus: 1.0,
            y_minus: 1.0,
            mu: 0.0,
            b: -1.0,
            c: 1.0,
            d: 1.0,
            sigma: 0.0,
            f03: 0.0,
        });
        let model = ModelMap::new(saddle, global, 1, Some(Chart { eps_x: 0.1, eps_y: 0.1 })).unwrap();
        let g = strip_geometry(&model, 3).unwrap();
        assert!((g.sigma0.y_lo - 0.1125).abs() < 1e-15);
        assert!((g.sigma0.y_hi - 0.1375).abs() < 1e-15);
    }

    #[test]
    fn strips_map_onto_sigma1_and_are_disjoint() {
        let saddle = SaddleNormalForm::new(0.5, Orientation::Preserving, vec![0.0, 0.1]).unwrap();
        let global = GlobalMap::Exact(ExactGlobalMap {
            x_plus: 1.0,
            y_minus: 1.0,
            mu: 0.0,
            b: -1.0,
            c: 1.0,
            d: 1.0,
            sigma: 0.0,
            f03: 0.0,
        });
        let model = ModelMap::new(saddle, global, 1, None).unwrap();
        let chart = model.u0_box();
        let y_minus = model.global.y_minus();
        let eps_y = model.chart.eps_y;
        let mut prev: Option<Box2> = None;
        for k in 4..=12 {
            let g = strip_geometry(&model, k).unwrap();
            // pointwise: strip points (built through the cross solve) map
            // into the advertised sigma_k^1 box
            for i in 0..=8 {
                let x = g.sigma0.x_lo + (g.sigma0.x_hi - g.sigma0.x_lo) * i as f64 / 8.0;
                // stay strictly inside the band edges: exact edge points can
                // step a roundoff ulp outside the chart during iteration
                for target in [y_minus - 0.999 * eps_y, y_minus, y_minus + 0.999 * eps_y] {
                    let y0 = model.saddle.y_before(x, target, k).unwrap();
                    assert!(y0 >= g.sigma0.y_lo - 1e-14 && y0 <= g.sigma0.y_hi + 1e-14);
                    let q = model.saddle.iterate(Point::new(x, y0), k, &chart).unwrap();
                    assert!((q.y - target).abs() < 1e-12, "k={k}: y_k misses target");
                    let tol = 1e-12 + 1e-9 * (g.sigma1.x_hi - g.sigma1.x_lo);
                    assert!(
                        q.x >= g.sigma1.x_lo - tol && q.x <= g.sigma1.x_hi + tol,
                        "k={k} x_k={} not in [{}, {}]",
                        q.x,
                        g.sigma1.x_lo,
                        g.sigma1.x_hi
                    );
                }
            }
            if let Some(p) = prev {
                assert!(!p.intersects(&g.sigma0), "sigma0 strips k={k} overlap");
            }
            prev = Some(g.sigma0);
        }
    }

    #[test]
    fn class2_all_regular_class1_all_empty() {
        let m2 = class2_model();
        let m1 = class1_model();
        for i in 4..=9 {
            for j in 4..=9 {
                assert_eq!(intersection_classify(&m2, i, j, 1.0, 4).verdict, Verdict::Regular);
                assert_eq!(intersection_classify(&m1, i, j, 1.0, 4).verdict, Verdict::Empty);
            }
        }
    }

    #[test]
    fn h31_self_pairs_follow_tau_sign() {
        let kbar = default_kbar(0.5, 0.7, true);
        let m_neg = h31_model(-0.7);
        let m_pos = h31_model(0.5);
        for i in kbar..kbar + 4 {
            assert_eq!(intersection_classify(&m_neg, i, i, 1.0, kbar).verdict, Verdict::Empty);
            assert_eq!(intersection_classify(&m_pos, i, i, 1.0, kbar).verdict, Verdict::Regular);
        }
    }

    #[test]
    fn geometric_oracle_matches_classifier_on_reference_models() {
        for model in [class2_model(), class1_model(), h31_model(0.5), h31_model(-0.7)] {
            for i in 6..=9 {
                for j in 6..=9 {
                    let cv = intersection_classify(&model, i, j, 1.0, 6).verdict;
                    let (gv, stable) = geometric_intersection(&model, i, j);
                    assert!(stable, "component count unstable at ({i},{j})");
                    match (cv, gv) {
                        (Verdict::Regular, GeomVerdict::Empty) | (Verdict::Empty, GeomVerdict::Regular) => {
                            panic!("contradiction at ({i},{j}): {cv:?} vs {gv:?}")
                        }
                        _ => {}
                    }
                }
            }
        }
    }

    #[test]
    fn tangent_configuration_is_irregular() {
        // margin ~ 0: vertex of the parabola exactly on the strip center line
        let lambda: f64 = 0.5;
        let i = 7usize;
        let j = 7usize;
        // choose mu so that mu + c lambda^j x+ = gamma^-i y-
        let mu = lambda.powi(i as i32) * 1.0 - 1.0 * lambda.powi(j as i32) * 1.0;
        let m = model_with(lambda, Orientation::Preserving, vec![], -1.0, 1.0, 1.0, 1.0, 1.0, 0.0, mu);
        let (gv, _) = geometric_intersection(&m, i, j);
        assert_eq!(gv, GeomVerdict::Irregular);
    }

    #[test]
    fn admissibility_rules() {
        // Class2: everything admissible
        let p2 = compute_profile(&class2_model()).unwrap();
        let code = SymbolCode::periodic_from_ks(&[8, 10]);
        assert!(admissible_code(&p2, &code, 4).unwrap());
        // Class1: nothing
        let p1 = compute_profile(&class1_model()).unwrap();
        assert!(!admissible_code(&p1, &code, 4).unwrap());
        // H3_1, tau = 0.5: (10,10) admissible, (9,11) not
        let p31 = compute_profile(&h31_model(0.5)).unwrap();
        let kbar = p31.kbar;
        assert!(admissible_code(&p31, &SymbolCode::periodic_from_ks(&[10, 10]), kbar.min(10)).unwrap());
        assert!(!admissible_code(&p31, &SymbolCode::periodic_from_ks(&[9, 11]), kbar.min(9)).unwrap());
        // H3_3_1: even block inadmissible
        let m = model_with(-0.5, Orientation::Reversing, vec![], -1.0, 1.0, 1.0, 1.0, 1.0, 0.0, 0.0);
        let p33 = compute_profile(&m).unwrap();
        assert!(!admissible_code(&p33, &SymbolCode::periodic_from_ks(&[5, 8]), 4).unwrap());
        assert!(admissible_code(&p33, &SymbolCode::periodic_from_ks(&[5, 7]), 4).unwrap());
        // H3_4: parity switches with the sign of tau; tau = 0 unsupported
        let m = model_with(
            -0.5,
            Orientation::Preserving,
            vec![],
            -1.0,
            1.0,
            1.0,
            0.5_f64.powf(0.4),
            1.0,
            0.0,
            0.0,
        );
        let p34 = compute_profile(&m).unwrap();
        assert_eq!(p34.class_tag, ClassTag::H3_4);
        let kbar = p34.kbar;
        let even = if kbar % 2 == 0 { kbar } else { kbar + 1 };
        assert!(admissible_code(&p34, &SymbolCode::periodic_from_ks(&[even]), kbar).unwrap());
        assert!(!admissible_code(&p34, &SymbolCode::periodic_from_ks(&[even + 1]), kbar).unwrap());
        let m0 = model_with(-0.5, Orientation::Preserving, vec![], -1.0, 1.0, 1.0, 1.0, 1.0, 0.0, 0.0);
        let p34z = compute_profile(&m0).unwrap();
        assert!(matches!(
            admissible_code(&p34z, &SymbolCode::periodic_from_ks(&[6]), 4),
            Err(crate::error::Error::Unsupported(_))
        ));
    }

    #[test]
    fn class2_single_block_orbits_exist() {
        let model = class2_model();
        for leg in [Leg::One, Leg::Two] {
            let code = SymbolCode::with_legs(&[8], &[leg]);
            match code_to_orbit(&model, &code).unwrap() {
                OrbitOutcome::Found(orbit) => {
                    assert!(orbit.residual < 1e-10);
                    assert_eq!(orbit.period, 9); // k + q
                }
                other => panic!("expected orbit for leg {leg:?}, got {other:?}"),
            }
        }
    }

    #[test]
    fn class1_codes_are_absent() {
        let model = class1_model();
        let code = SymbolCode::periodic_from_ks(&[8]);
        match code_to_orbit(&model, &code).unwrap() {
            OrbitOutcome::Absent { .. } => {}
            other => panic!("expected absence, got {other:?}"),
        }
    }
}
