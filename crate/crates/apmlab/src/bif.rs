//! Cascades of elliptic intervals in one-parameter families, the
//! two-parameter bifurcation curves B_k in the (mu, alpha) plane, the
//! global-resonance checks at tau = 0, and the pair-shift invariance of s0.

use crate::error::{Error, Result};
use crate::geom::Point;
use crate::globalmap::{GlobalMapCoeffs, ModelMap};
use crate::henon::Stability;
use crate::rescale::{compute_s0, curve_mu, mu_to_m, m_to_mu, model_alpha, nu1_sign, RescaleChain};
use crate::retmap::{FixedPointRecord, ReturnMap};
use crate::saddle::SaddleNormalForm;
use crate::sweep::map_ordered;
use serde::Serialize;

/// Kind of elliptic interval produced by the cascade.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum IntervalKind {
    /// Symplectic: elliptic fixed points of T_k.
    Ek,
    /// Globally non-orientable: elliptic 2-cycles of T_k.
    Ek2,
    /// Locally non-orientable, even k: elliptic fixed points.
    TildeEk,
    /// Locally non-orientable, odd k: elliptic 2-cycles.
    TildeEk2,
}

impl IntervalKind {
    pub fn as_str(self) -> &'static str {
        match self {
            IntervalKind::Ek => "e_k",
            IntervalKind::Ek2 => "e_k^2",
            IntervalKind::TildeEk => "~e_2m",
            IntervalKind::TildeEk2 => "~e^2_2m+1",
        }
    }

    pub fn is_two_cycle(self) -> bool {
        matches!(self, IntervalKind::Ek2 | IntervalKind::TildeEk2)
    }
}

/// Strong-resonance tags inside an interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ResTag {
    PiHalf,
    TwoPiThird,
    AcosMinusQuarter,
}

impl ResTag {
    pub fn as_str(self) -> &'static str {
        match self {
            ResTag::PiHalf => "pi/2",
            ResTag::TwoPiThird => "2pi/3",
            ResTag::AcosMinusQuarter => "acos(-1/4)",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ResonanceMu {
    pub tag: ResTag,
    pub mu_formula: f64,
    pub mu_detected: Option<f64>,
}

/// Detected and predicted data for one interval of the cascade.
#[derive(Clone, Debug, Serialize)]
pub struct CascadeInterval {
    pub k: usize,
    pub kind: IntervalKind,
    pub mu_plus_formula: f64,
    pub mu_minus_formula: f64,
    pub mu_plus_detected: Option<f64>,
    pub mu_minus_detected: Option<f64>,
    pub resonances: Vec<ResonanceMu>,
    pub complete: bool,
}

impl CascadeInterval {
    pub fn detected_bounds(&self) -> Option<(f64, f64)> {
        match (self.mu_minus_detected, self.mu_plus_detected) {
            (Some(a), Some(b)) => Some((a.min(b), a.max(b))),
            _ => None,
        }
    }
}

/// Kind of interval produced by T_k for this model.
pub fn interval_kind(model: &ModelMap, k: usize) -> IntervalKind {
    if model.saddle.is_orientable() {
        if model.bc() < 0.0 {
            IntervalKind::Ek
        } else {
            IntervalKind::Ek2
        }
    } else if k % 2 == 0 {
        IntervalKind::TildeEk
    } else {
        IntervalKind::TildeEk2
    }
}

/// Henon parameters of the endpoints and interior resonances per kind.
fn m_targets(kind: IntervalKind) -> (f64, f64, Vec<(ResTag, f64)>) {
    if kind.is_two_cycle() {
        (
            0.0,
            1.0,
            vec![
                (ResTag::PiHalf, 0.5),
                (ResTag::AcosMinusQuarter, 0.625),
                (ResTag::TwoPiThird, 0.75),
            ],
        )
    } else {
        (
            -1.0,
            3.0,
            vec![(ResTag::PiHalf, 0.0), (ResTag::TwoPiThird, 1.25)],
        )
    }
}

// ---------------------------------------------------------------------------
// branch location
// ---------------------------------------------------------------------------

fn henon_fixed_seed(nu1: i8, m: f64) -> Point {
    if nu1 > 0 {
        let x = -1.0 + (1.0 + m).max(0.0).sqrt();
        Point::new(x, x)
    } else {
        let x = m.max(0.0).sqrt();
        Point::new(x, x)
    }
}

fn locate_fixed(model: &ModelMap, k: usize, mu: f64) -> Option<FixedPointRecord> {
    let at_mu = model.with_mu(mu);
    let chain = RescaleChain::new(&at_mu, k).ok()?;
    let m = mu_to_m(&at_mu, k);
    let seed = chain.from_rescaled(&at_mu, henon_fixed_seed(chain.nu1, m)).ok()?;
    let rm = ReturnMap::new(&at_mu, k);
    rm.find_fixed_point(seed).ok()
}

fn locate_cycle(model: &ModelMap, k: usize, mu: f64) -> Option<FixedPointRecord> {
    let at_mu = model.with_mu(mu);
    let chain = RescaleChain::new(&at_mu, k).ok()?;
    let m = mu_to_m(&at_mu, k);
    let r = m.max(1e-12).sqrt();
    let seed = chain.from_rescaled(&at_mu, Point::new(-r, r)).ok()?;
    let rm = ReturnMap::new(&at_mu, k);
    let rec = rm.find_period2(seed).ok()?;
    // reject period-1 roots masquerading as cycles
    if let Some(p) = rec.partner {
        if p.dist_inf(rec.point) < 1e-10 {
            return None;
        }
    }
    Some(rec)
}

fn bisect(mut lo: f64, mut hi: f64, mut g_lo: f64, eval: impl Fn(f64) -> f64) -> f64 {
    for _ in 0..110 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        let g_mid = eval(mid);
        if (g_mid <= 0.0) == (g_lo <= 0.0) {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Root of `eval` in a bracket constructed around `center` with width
/// guidance `w`; expands twice if the initial bracket does not straddle.
fn bracketed_root(center: f64, w: f64, eval: impl Fn(f64) -> f64) -> Option<f64> {
    let mut half = 1.5 * w.abs().max(1e-300);
    for _ in 0..4 {
        let (lo, hi) = (center - half, center + half);
        let g_lo = eval(lo);
        let g_hi = eval(hi);
        if g_lo == 0.0 {
            return Some(lo);
        }
        if g_hi == 0.0 {
            return Some(hi);
        }
        if (g_lo <= 0.0) != (g_hi <= 0.0) {
            return Some(bisect(lo, hi, g_lo, eval));
        }
        half *= 2.0;
    }
    None
}

/// Scan the cascade over a k range; per-k work items run independently
/// (parallel when APM_THREADS > 1) and merge in k order.
pub fn cascade_scan(model: &ModelMap, ks: &[usize], mu_window: Option<(f64, f64)>) -> Vec<CascadeInterval> {
    let items: Vec<usize> = ks.to_vec();
    let out = map_ordered(items, |&k| scan_one(model, k));
    out.into_iter()
        .filter(|iv| match mu_window {
            None => true,
            Some((lo, hi)) => iv.mu_plus_formula.max(iv.mu_minus_formula) >= lo.min(hi)
                && iv.mu_plus_formula.min(iv.mu_minus_formula) <= lo.max(hi),
        })
        .collect()
}

fn scan_one(model: &ModelMap, k: usize) -> CascadeInterval {
    let kind = interval_kind(model, k);
    let (m_plus, m_minus, res) = m_targets(kind);
    let alpha = model_alpha(model);
    let formula = |m_val: f64| curve_mu(model, k, m_val, alpha).unwrap_or_else(|_| m_to_mu(model, k, m_val));
    let mu_plus_formula = formula(m_plus);
    let mu_minus_formula = formula(m_minus);
    let w = (mu_plus_formula - mu_minus_formula).abs();

    // "plus" endpoint: birth of the orbit, located by bisection on
    // existence of the T_k fixed point. For the 2-cycle kinds this is the
    // simultaneous birth of the (+1, -1) fixed point at M = 0, which avoids
    // the degenerate collapsed-cycle system.
    let exists = |mu: f64| -> f64 {
        if locate_fixed(model, k, mu).is_some() {
            -1.0
        } else {
            1.0
        }
    };
    let mu_plus_detected = bracketed_root(mu_plus_formula, w, exists);

    // "minus" endpoint: trace through -2 on the continued branch
    let trace_gap = |mu: f64, target: f64, cycle: bool| -> f64 {
        let rec = if cycle { locate_cycle(model, k, mu) } else { locate_fixed(model, k, mu) };
        match rec {
            Some(r) => r.trace - target,
            None => 4.0, // beyond the branch: same sign as the outside
        }
    };
    let mu_minus_detected =
        bracketed_root(mu_minus_formula, w, |mu| trace_gap(mu, -2.0, kind.is_two_cycle()));

    // interior strong resonances by trace targets 0, -1, -1/2
    let resonances: Vec<ResonanceMu> = res
        .into_iter()
        .map(|(tag, m_val)| {
            let mu_formula = formula(m_val);
            let trace_target = if kind.is_two_cycle() {
                2.0 - 4.0 * m_val
            } else {
                2.0 * (1.0 - (1.0 + m_val).sqrt())
            };
            let mu_detected = bracketed_root(mu_formula, w, |mu| {
                trace_gap(mu, trace_target, kind.is_two_cycle())
            });
            ResonanceMu { tag, mu_formula, mu_detected }
        })
        .collect();

    let complete = mu_plus_detected.is_some()
        && mu_minus_detected.is_some()
        && resonances.iter().all(|r| r.mu_detected.is_some());
    CascadeInterval {
        k,
        kind,
        mu_plus_formula,
        mu_minus_formula,
        mu_plus_detected,
        mu_minus_detected,
        resonances,
        complete,
    }
}

// ---------------------------------------------------------------------------
// two-parameter curves
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CurveTag {
    BkPlus,
    BkMinus,
    BkPm1,
    Bk2Minus,
    TildeBkPlus,
    TildeBkMinus,
    TildeBkPm1,
    TildeBk2Minus,
}

impl CurveTag {
    pub fn as_str(self) -> &'static str {
        match self {
            CurveTag::BkPlus => "B_k+",
            CurveTag::BkMinus => "B_k-",
            CurveTag::BkPm1 => "B_k+-1",
            CurveTag::Bk2Minus => "B_k^2-",
            CurveTag::TildeBkPlus => "~B_k+",
            CurveTag::TildeBkMinus => "~B_k-",
            CurveTag::TildeBkPm1 => "~B_k+-1",
            CurveTag::TildeBk2Minus => "~B_k^2-",
        }
    }
}

/// One sample of a bifurcation curve in the (mu, alpha) plane.
#[derive(Clone, Debug, Serialize)]
pub struct BifCurveSample {
    pub k: usize,
    pub curve_tag: CurveTag,
    /// alpha for plain kinds, alpha+2 for the odd locally-non-orientable
    /// branches.
    pub alpha: f64,
    pub mu: f64,
}

/// Sample every curve applicable to the model's class over the alpha grid.
/// The curves re-express the cascade endpoint formulas in (mu, alpha); both
/// call paths share `curve_mu`, so cascade predictions and curve samples at
/// the model's own alpha agree identically.
pub fn bif_curves(model: &ModelMap, ks: &[usize], alphas: &[f64]) -> Result<Vec<BifCurveSample>> {
    let mut out = Vec::new();
    for &k in ks {
        let kind = interval_kind(model, k);
        let (m_plus, m_minus, _) = m_targets(kind);
        let tags = match kind {
            IntervalKind::Ek => [(CurveTag::BkPlus, m_plus), (CurveTag::BkMinus, m_minus)],
            IntervalKind::Ek2 => [(CurveTag::BkPm1, m_plus), (CurveTag::Bk2Minus, m_minus)],
            IntervalKind::TildeEk => [(CurveTag::TildeBkPlus, m_plus), (CurveTag::TildeBkMinus, m_minus)],
            IntervalKind::TildeEk2 => [(CurveTag::TildeBkPm1, m_plus), (CurveTag::TildeBk2Minus, m_minus)],
        };
        for &alpha in alphas {
            for (tag, m_val) in tags {
                // for odd tilde branches the natural abscissa is alpha+2
                let (alpha_used, alpha_reported) = if kind == IntervalKind::TildeEk2 {
                    (alpha - 2.0, alpha)
                } else {
                    (alpha, alpha)
                };
                out.push(BifCurveSample {
                    k,
                    curve_tag: tag,
                    alpha: alpha_reported,
                    mu: curve_mu(model, k, m_val, alpha_used)?,
                });
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// global resonance
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ResonanceEntryKind {
    EllipticFixedPoint,
    EllipticTwoCycle,
    AbsenceVerified,
}

#[derive(Clone, Debug, Serialize)]
pub struct ResonanceEntry {
    pub k: usize,
    pub kind: ResonanceEntryKind,
    pub m: f64,
    pub trace: Option<f64>,
    pub henon_trace: Option<f64>,
    pub trace_error: Option<f64>,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct GlobalResonanceReport {
    pub s0: f64,
    pub s0_alt: Option<f64>,
    pub generic: bool,
    pub entries: Vec<ResonanceEntry>,
    pub all_ok: bool,
}

/// Coexistence check at the global resonance tau = 0, mu = 0: every
/// in-window k carries its elliptic orbit with trace near the Henon-limit
/// value; off-window k are verified absent.
pub fn global_resonance_check(model: &ModelMap, ks: &[usize]) -> Result<GlobalResonanceReport> {
    let alpha = model_alpha(model);
    let alpha_tilde = alpha + 2.0;
    if alpha.abs() > 1e-10 && alpha_tilde.abs() > 1e-10 {
        return Err(Error::Validation(format!(
            "global-resonance check requires |alpha| < 1e-10 or |alpha+2| < 1e-10, got alpha = {alpha:.3e}"
        )));
    }

    let profile_s0 = compute_s0(&model.global.taylor(), 1).value;
    let s0_alt = if model.saddle.is_orientable() {
        None
    } else {
        Some(compute_s0(&model.global.taylor(), -1).value)
    };

    let mut generic = true;
    let entries: Vec<ResonanceEntry> = ks
        .iter()
        .map(|&k| {
            let kind = interval_kind(model, k);
            let m = mu_to_m(model, k);
            let window = crate::henon::elliptic_window(!kind.is_two_cycle());
            let expected = m > window.0 + 1e-6 && m < window.1 - 1e-6;
            if expected {
                // genericity of this orbit's rotation number
                let bad = if kind.is_two_cycle() {
                    [0.5, 0.625, 0.75].iter().any(|r| (m - r).abs() < 1e-9)
                } else {
                    [0.0, 1.25].iter().any(|r| (m - r).abs() < 1e-9)
                };
                if bad {
                    generic = false;
                }
                let (rec, henon_trace, ek) = if kind.is_two_cycle() {
                    (locate_cycle(model, k, model.global.mu()), 2.0 - 4.0 * m, ResonanceEntryKind::EllipticTwoCycle)
                } else {
                    (
                        locate_fixed(model, k, model.global.mu()),
                        2.0 * (1.0 - (1.0 + m).sqrt()),
                        ResonanceEntryKind::EllipticFixedPoint,
                    )
                };
                match rec {
                    Some(r) if matches!(r.stability, Stability::EllipticGeneric | Stability::EllipticResonant) => {
                        let err = (r.trace - henon_trace).abs();
                        ResonanceEntry {
                            k,
                            kind: ek,
                            m,
                            trace: Some(r.trace),
                            henon_trace: Some(henon_trace),
                            trace_error: Some(err),
                            ok: true,
                        }
                    }
                    _ => ResonanceEntry {
                        k,
                        kind: ek,
                        m,
                        trace: None,
                        henon_trace: Some(henon_trace),
                        trace_error: None,
                        ok: false,
                    },
                }
            } else {
                // off-window parity: verify no elliptic orbit exists
                let rm = ReturnMap::new(model, k);
                let any_elliptic = rm
                    .grid_fixed_points()
                    .into_iter()
                    .chain(rm.grid_period2_points())
                    .any(|r| matches!(r.stability, Stability::EllipticGeneric | Stability::EllipticResonant));
                ResonanceEntry {
                    k,
                    kind: ResonanceEntryKind::AbsenceVerified,
                    m,
                    trace: None,
                    henon_trace: None,
                    trace_error: None,
                    ok: !any_elliptic,
                }
            }
        })
        .collect();

    let all_ok = entries.iter().all(|e| e.ok);
    Ok(GlobalResonanceReport {
        s0: profile_s0,
        s0_alt,
        generic,
        entries,
        all_ok,
    })
}

// ---------------------------------------------------------------------------
// s0 invariance under homoclinic pair shifts
// ---------------------------------------------------------------------------

/// Pair-shift variants: moving the homoclinic base points along the
/// orbit re-expresses the global map with extra local-map factors. The
/// orientable variants require lambda*gamma = +1, the reversing ones
/// lambda*gamma = -1 (needed-type pairs).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairVariant {
    /// (M+, M-) -> (T0(M+), M-), lambda*gamma = +1.
    OrientableShiftOnMPlus,
    /// (M+, M-) -> (M+, T0^-1(M-)), lambda*gamma = +1; away from tau = 0
    /// the defect d beta1 x+ y- (c x+ - y-) is reported, not an equality.
    OrientableShiftOnMMinus,
    /// Single step (T0(M+), M-), lambda*gamma = -1 (not of needed type).
    ReversingSingleStep,
    /// (T0^2(M+), M-).
    ReversingDoubleOnMPlus,
    /// (M+, T0^-2(M-)).
    ReversingDoubleOnMMinus,
    /// (T0(M+), T0^-1(M-)) with the x-flip normalization.
    ReversingMixed,
}

#[derive(Clone, Debug, Serialize)]
pub struct S0PairResult {
    pub s0: f64,
    pub s0_transformed: f64,
    /// Predicted defect of the orientable M- shift away from tau = 0.
    pub predicted_defect: Option<f64>,
}

/// Subset of the Taylor data entering s0, plus the geometry it transforms with.
#[derive(Clone, Copy, Debug)]
struct S0Data {
    x_plus: f64,
    y_minus: f64,
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    f20: f64,
    f11: f64,
}

impl S0Data {
    fn from_coeffs(t: &GlobalMapCoeffs) -> Self {
        S0Data {
            x_plus: t.x_plus,
            y_minus: t.y_minus,
            a: t.a,
            b: t.b,
            c: t.c,
            d: t.d,
            f20: t.f20,
            f11: t.f11,
        }
    }

    fn s0(&self, nu1: i8) -> f64 {
        let f = self.f11 * self.x_plus;
        self.d * self.x_plus * (self.a * self.c + self.f20 * self.x_plus)
            + 0.5 * f * (1.0 + nu1 as f64 - 0.5 * f)
    }

    /// New pair (T0(M+), M-): the global map gains a T0 factor on the left.
    fn shift_on_m_plus(&self, lambda: f64, gamma: f64, beta1: f64) -> S0Data {
        S0Data {
            x_plus: lambda * self.x_plus,
            y_minus: self.y_minus,
            a: lambda * self.a + lambda * self.x_plus * self.x_plus * beta1 * self.c,
            b: lambda * self.b,
            c: gamma * self.c,
            d: gamma * self.d,
            f20: gamma * self.f20 - gamma * self.c * self.c * beta1 * self.x_plus,
            f11: gamma * self.f11,
        }
    }

    /// New pair (M+, T0^-1(M-)): the global map gains a T0 factor on the right.
    fn shift_on_m_minus(&self, lambda: f64, gamma: f64, beta1: f64) -> S0Data {
        let y2 = self.y_minus * self.y_minus;
        S0Data {
            x_plus: self.x_plus,
            y_minus: self.y_minus / gamma,
            a: lambda * self.a - self.b * beta1 * y2 / gamma,
            b: self.b / gamma,
            c: lambda * self.c,
            d: self.d * gamma * gamma,
            f20: self.f20 * lambda * lambda - self.f11 * lambda * lambda * beta1 * y2
                + self.d * lambda * lambda * beta1 * beta1 * y2 * y2
                + self.c * lambda * lambda * beta1 * self.y_minus,
            f11: lambda * gamma * self.f11 - 2.0 * self.d * beta1 * y2,
        }
    }

    /// (T0(M+), M-) followed by x -> -x so that x+ stays positive.
    fn shift_on_m_plus_flipped(&self, lambda: f64, gamma: f64) -> S0Data {
        S0Data {
            x_plus: -lambda * self.x_plus,
            y_minus: self.y_minus,
            a: lambda * self.a,
            b: -lambda * self.b,
            c: -gamma * self.c,
            d: gamma * self.d,
            f20: gamma * self.f20,
            f11: -gamma * self.f11,
        }
    }
}

/// Apply the coefficient transformation of the chosen pair-shift variant and
/// recompute s0 (formula evaluated with the same nu1 on both sides).
pub fn s0_pair_invariance(
    coeffs: &GlobalMapCoeffs,
    saddle: &SaddleNormalForm,
    variant: PairVariant,
    nu1: i8,
) -> Result<S0PairResult> {
    let lambda = saddle.lambda();
    let gamma = saddle.gamma();
    let beta1 = saddle.beta(1);
    let orientable = saddle.is_orientable();
    let data = S0Data::from_coeffs(coeffs);

    let require = |cond: bool, what: &str| -> Result<()> {
        if cond {
            Ok(())
        } else {
            Err(Error::Validation(format!("variant requires {what}")))
        }
    };

    let (transformed, predicted_defect) = match variant {
        PairVariant::OrientableShiftOnMPlus => {
            require(orientable, "lambda*gamma = +1")?;
            (data.shift_on_m_plus(lambda, gamma, beta1), None)
        }
        PairVariant::OrientableShiftOnMMinus => {
            require(orientable, "lambda*gamma = +1")?;
            let defect = coeffs.d
                * beta1
                * coeffs.x_plus
                * coeffs.y_minus
                * (coeffs.c * coeffs.x_plus - coeffs.y_minus);
            let tau_zero = (coeffs.c * coeffs.x_plus - coeffs.y_minus).abs() < 1e-12;
            (
                data.shift_on_m_minus(lambda, gamma, beta1),
                if tau_zero { None } else { Some(defect) },
            )
        }
        PairVariant::ReversingSingleStep => {
            require(!orientable, "lambda*gamma = -1")?;
            (data.shift_on_m_plus(lambda, gamma, 0.0), None)
        }
        PairVariant::ReversingDoubleOnMPlus => {
            require(!orientable, "lambda*gamma = -1")?;
            (
                data.shift_on_m_plus(lambda, gamma, 0.0)
                    .shift_on_m_plus(lambda, gamma, 0.0),
                None,
            )
        }
        PairVariant::ReversingDoubleOnMMinus => {
            require(!orientable, "lambda*gamma = -1")?;
            (
                data.shift_on_m_minus(lambda, gamma, 0.0)
                    .shift_on_m_minus(lambda, gamma, 0.0),
                None,
            )
        }
        PairVariant::ReversingMixed => {
            require(!orientable, "lambda*gamma = -1")?;
            (
                data.shift_on_m_plus_flipped(lambda, gamma)
                    .shift_on_m_minus(lambda, gamma, 0.0),
                None,
            )
        }
    };

    Ok(S0PairResult {
        s0: data.s0(nu1),
        s0_transformed: transformed.s0(nu1),
        predicted_defect,
    })
}

/// Convenience wrapper when the caller has a model.
pub fn s0_pair_invariance_for(model: &ModelMap, variant: PairVariant) -> Result<S0PairResult> {
    let t = model.global.taylor();
    let nu1 = nu1_sign(model, 0); // k = 0: parity-even convention
    s0_pair_invariance(&t, &model.saddle, variant, nu1)
}

/// Fit the envelope constant C at the first sample and report the largest
/// ratio observed afterwards: used by the budget checks residual <= C * unit.
pub fn fitted_envelope(samples: &[(usize, f64)], unit: impl Fn(usize) -> f64) -> (f64, f64) {
    assert!(!samples.is_empty());
    let c0 = (samples[0].1 / unit(samples[0].0)).max(1e-300);
    let mut worst = 0.0_f64;
    for &(k, v) in &samples[1..] {
        worst = worst.max(v / (c0 * unit(k)));
    }
    (c0, worst)
}
