//! Rescaling of first-return maps to conservative Henon form, the
//! mu <-> M parameter dictionary, and the invariants nu1, nu2, s0.
//!
//! The conjugacy composes, at leading order (asymptotic rho/alpha
//! corrections set to zero), the chart from actual coordinates to Shilnikov
//! cross coordinates (x0, y_k) with an affine chain: homoclinic shift,
//! scaling, linear-term shift, mixing, final shift. The conjugated return
//! map is compared on a grid against
//!
//! ```text
//!   X' = Y,   Y' = M - nu1 X - Y^2 + nu2 (f03/d^2) lambda^k Y^3
//! ```
//!
//! with nu1 = sign(-bc (lambda gamma)^k), nu2 = sign((lambda gamma)^k).

use crate::error::{Error, Result};
use crate::geom::{least_squares, Point};
use crate::globalmap::{GlobalMap, GlobalMapCoeffs, ModelMap};
use crate::retmap::ReturnMap;
use serde::Serialize;

/// The invariant s0 = d x+ (a c + f20 x+) + (1/2) f11 x+ (1 + nu1 - (1/2) f11 x+).
#[derive(Clone, Copy, Debug, Serialize)]
pub struct S0Invariant {
    pub value: f64,
    pub nu1: i8,
}

pub fn compute_s0(coeffs: &GlobalMapCoeffs, nu1: i8) -> S0Invariant {
    let f = coeffs.f11 * coeffs.x_plus;
    let value = coeffs.d * coeffs.x_plus * (coeffs.a * coeffs.c + coeffs.f20 * coeffs.x_plus)
        + 0.5 * f * (1.0 + nu1 as f64 - 0.5 * f);
    S0Invariant { value, nu1 }
}

/// nu1 = sign(-bc (lambda gamma)^k) as an exact integer sign.
pub fn nu1_sign(model: &ModelMap, k: usize) -> i8 {
    let bc_sign: i8 = if model.bc() > 0.0 { 1 } else { -1 };
    let par: i8 = if model.saddle.orientation_pow(k) > 0.0 { 1 } else { -1 };
    -bc_sign * par
}

/// nu2 = sign((lambda gamma)^k).
pub fn nu2_sign(model: &ModelMap, k: usize) -> i8 {
    if model.saddle.orientation_pow(k) > 0.0 {
        1
    } else {
        -1
    }
}

/// The s0 value entering the M-dictionary at index k (parity-dependent for
/// locally non-orientable models).
pub fn s0_for_k(model: &ModelMap, k: usize) -> f64 {
    compute_s0(&model.global.taylor(), nu1_sign(model, k)).value
}

/// mu as a function of (alpha, M) along the endpoint formulas, with the
/// asymptotic corrections set to zero. This single expression backs both
/// the cascade endpoint predictions and the two-parameter bifurcation
/// curves (same formulas, two call paths).
pub fn mu_from_alpha(model: &ModelMap, k: usize, m: f64, alpha: f64) -> f64 {
    let t = model.global.taylor();
    let lambda = model.saddle.lambda();
    let lam_k = lambda.powi(k as i32);
    let s0 = s0_for_k(model, k);
    let quad = -(m + s0) * lam_k * lam_k / t.d;
    if model.saddle.is_orientable() {
        let beta1 = model.saddle.beta(1);
        let corr = 1.0 + k as f64 * beta1 * lam_k * t.x_plus * t.y_minus;
        -lam_k * t.y_minus * alpha * corr + quad
    } else if k % 2 == 0 {
        -lam_k * t.y_minus * alpha + quad
    } else {
        // odd k: gamma^-k = -lambda^k, the alpha+2 branch
        -lam_k * t.y_minus * (alpha + 2.0) + quad
    }
}

/// The model's own alpha = c x+ / y- - 1.
pub fn model_alpha(model: &ModelMap) -> f64 {
    let t = model.global.taylor();
    t.c * t.x_plus / t.y_minus - 1.0
}

/// The endpoint-formula curve mu(alpha; k, M): the family member at the
/// given alpha is built first, then the self-consistent inverse dictionary
/// is evaluated. The cascade endpoint predictions and the two-parameter
/// curves both go through this single path.
pub fn curve_mu(model: &ModelMap, k: usize, m: f64, alpha: f64) -> crate::error::Result<f64> {
    let member = model.with_alpha(alpha)?;
    Ok(m_to_mu(&member, k, m))
}

/// Rescaled Henon parameter M for the return map T_k (corrections zero).
pub fn mu_to_m(model: &ModelMap, k: usize) -> f64 {
    let t = model.global.taylor();
    let lambda = model.saddle.lambda();
    let lam_k = lambda.powi(k as i32);
    let mu = model.global.mu();
    let s0 = s0_for_k(model, k);
    let inner = if model.saddle.is_orientable() {
        let beta1 = model.saddle.beta(1);
        let corr = 1.0 + k as f64 * beta1 * lam_k * t.x_plus * t.y_minus;
        mu + lam_k * (t.c * t.x_plus - t.y_minus) * corr
    } else {
        mu + t.c * lam_k * t.x_plus - model.saddle.gamma_pow_neg(k) * t.y_minus
    };
    -t.d * inner / (lam_k * lam_k) - s0
}

/// Inverse of `mu_to_m`. The Taylor base point drifts with mu (the exact
/// family re-bases x+ to x+ - sigma*mu), so the inverse is solved by a
/// short fixed-point iteration on the explicit formula; the contraction
/// factor is O(lambda^k).
pub fn m_to_mu(model: &ModelMap, k: usize, m: f64) -> f64 {
    let step = |mu: f64| -> f64 {
        let at_mu = model.with_mu(mu);
        let t = at_mu.global.taylor();
        let lambda = at_mu.saddle.lambda();
        let lam_k = lambda.powi(k as i32);
        let s0 = s0_for_k(&at_mu, k);
        let lead = -(m + s0) * lam_k * lam_k / t.d;
        if at_mu.saddle.is_orientable() {
            let beta1 = at_mu.saddle.beta(1);
            let corr = 1.0 + k as f64 * beta1 * lam_k * t.x_plus * t.y_minus;
            lead - lam_k * (t.c * t.x_plus - t.y_minus) * corr
        } else {
            lead - t.c * lam_k * t.x_plus + at_mu.saddle.gamma_pow_neg(k) * t.y_minus
        }
    };
    let mut mu = step(0.0);
    for _ in 0..32 {
        let next = step(mu);
        if (next - mu).abs() <= 1e-18 * mu.abs().max(1e-300) {
            return next;
        }
        mu = next;
    }
    mu
}

/// The affine-plus-cross-chart conjugacy bringing T_k to rescaled form.
#[derive(Clone, Debug)]
pub struct RescaleChain {
    k: usize,
    lambda: f64,
    x_plus: f64,
    y_minus: f64,
    /// homoclinic x-shift (constant kill in the first cross equation)
    s_x: f64,
    /// scaling factors (xi, eta) = (su * u, sv * v)
    su: f64,
    sv: f64,
    /// common shift applied to u and v after scaling
    shift3: f64,
    /// mixing coefficients: (x, y) = (u + n1 v, v + n2 u)
    n1: f64,
    n2: f64,
    /// final shifts: X = x - fs - n1*m3, Y = y - fs
    fs: f64,
    pub m3: f64,
    /// Henon parameter of the conjugated map: m3 plus the exact constants
    /// produced by the final shifts (O(lambda^k (1 + |m3|))).
    pub m_final: f64,
    pub nu1: i8,
    pub nu2: i8,
    pub cubic_coeff: f64,
}

impl RescaleChain {
    pub fn new(model: &ModelMap, k: usize) -> Result<Self> {
        if k < 1 {
            return Err(Error::Validation("rescaling needs k >= 1".into()));
        }
        let t = model.global.taylor();
        let lambda = model.saddle.lambda();
        let lam_k = lambda.powi(k as i32);
        let nu1 = nu1_sign(model, k);
        let nu2 = nu2_sign(model, k);
        let odd_reversing = !model.saddle.is_orientable() && k % 2 == 1;

        let dd = t.d + lam_k * t.f12 * t.x_plus;
        if dd == 0.0 {
            return Err(Error::Numerical("degenerate quadratic coefficient in rescaling".into()));
        }

        // step 1: exact constant kill in the first cross equation (the
        // sigma*mu part exists only for the exact family; the jet family
        // carries no constant in F)
        let s_x = match &model.global {
            GlobalMap::Exact(g) => (t.a * lam_k * t.x_plus - g.sigma * g.mu) / (1.0 - t.a * lam_k),
            GlobalMap::Jet(_) => t.a * lam_k * t.x_plus / (1.0 - t.a * lam_k),
        };

        // step 2: scaling signs flip for odd iterates of a reversing saddle
        let (su, sv) = if odd_reversing {
            (t.b * lam_k / dd, lam_k / dd)
        } else {
            (-t.b * lam_k / dd, -lam_k / dd)
        };

        // M-ladder
        let beta1 = model.saddle.beta(1);
        let m1 = if model.saddle.is_orientable() {
            let corr = 1.0 + k as f64 * beta1 * lam_k * t.x_plus * t.y_minus;
            model.global.mu()
                + lam_k * (t.c * t.x_plus - t.y_minus) * corr
                + lam_k * lam_k * t.x_plus * (t.a * t.c + t.f20 * t.x_plus)
        } else if k % 2 == 0 {
            model.global.mu()
                + lam_k * (t.c * t.x_plus - t.y_minus)
                + lam_k * lam_k * t.x_plus * (t.a * t.c + t.f20 * t.x_plus)
        } else {
            model.global.mu()
                + t.c * lam_k * t.x_plus
                + lam_k * t.y_minus
                + lam_k * lam_k * t.x_plus * (t.a * t.c + t.f20 * t.x_plus)
        };
        let m2 = -dd * m1 / (lam_k * lam_k);
        let f = t.f11 * t.x_plus;
        let m3 = m2 - 0.5 * f * (1.0 + nu1 as f64) + 0.25 * f * f;

        // step 3: remove the linear v-term (sign follows the parity case)
        let shift3 = if odd_reversing { 0.5 * f } else { -0.5 * f };

        // step 4: mixing kills the v^2 term of the first equation and, via
        // the identity R = 2ad - b f11 - 2c e02 = 0, the xy term of the second
        let q_v2 = if odd_reversing {
            t.e02 * lam_k / (t.b * dd)
        } else {
            -t.e02 * lam_k / (t.b * dd)
        };
        let n1 = q_v2;
        let n2 = t.a * lam_k - nu1 as f64 * n1;

        // step 5
        let fs = 0.5 * t.a * lam_k;

        let cubic_coeff = nu2 as f64 * t.f03 * lam_k / (t.d * t.d);

        // exact constant the final shifts feed into the second component
        let m_final = m3 - (1.0 + nu1 as f64) * fs + fs * fs - nu1 as f64 * n1 * m3;

        Ok(RescaleChain {
            k,
            lambda,
            x_plus: t.x_plus,
            y_minus: t.y_minus,
            s_x,
            su,
            sv,
            shift3,
            n1,
            n2,
            fs,
            m3,
            m_final,
            nu1,
            nu2,
            cubic_coeff,
        })
    }

    /// Actual coordinates -> rescaled (X, Y).
    pub fn to_rescaled(&self, model: &ModelMap, p: Point) -> Result<Point> {
        let yk = model.saddle.y_after(p, self.k)?;
        let xi = p.x - self.x_plus - self.s_x;
        let eta = yk - self.y_minus;
        let u = xi / self.su + self.shift3;
        let v = eta / self.sv + self.shift3;
        let x = u + self.n1 * v;
        let y = v + self.n2 * u;
        Ok(Point::new(x - self.fs - self.n1 * self.m3, y - self.fs))
    }

    /// Rescaled (X, Y) -> actual coordinates.
    pub fn from_rescaled(&self, model: &ModelMap, p: Point) -> Result<Point> {
        let x = p.x + self.fs + self.n1 * self.m3;
        let y = p.y + self.fs;
        let det = 1.0 - self.n1 * self.n2;
        let u = (x - self.n1 * y) / det;
        let v = (y - self.n2 * x) / det;
        let xi = (u - self.shift3) * self.su;
        let eta = (v - self.shift3) * self.sv;
        let x0 = xi + self.x_plus + self.s_x;
        let yk = eta + self.y_minus;
        let y0 = model.saddle.y_before(x0, yk, self.k)?;
        Ok(Point::new(x0, y0))
    }

    pub fn lambda_k(&self) -> f64 {
        self.lambda.powi(self.k as i32)
    }
}

/// Comparison data of the conjugated return map against the limit Henon map.
#[derive(Clone, Debug, Serialize)]
pub struct RescaledMap {
    pub k: usize,
    pub nu1: i8,
    pub nu2: i8,
    pub m: f64,
    pub cubic_coeff: f64,
    pub residual_bound: f64,
    pub ball_radius: f64,
    /// Least-squares coefficient of X*Y in the second component (should be
    /// within residual_bound of zero: the mixing term cancels exactly).
    pub xy_fit_coeff: f64,
}

/// Evaluate the rescaled return map on a grid over the ball and measure the
/// sup-norm residual against the target Henon form.
pub fn rescaled_tk(model: &ModelMap, k: usize, ball_radius: f64) -> Result<RescaledMap> {
    rescaled_tk_grid(model, k, ball_radius, 41)
}

pub fn rescaled_tk_grid(model: &ModelMap, k: usize, ball_radius: f64, n: usize) -> Result<RescaledMap> {
    let chain = RescaleChain::new(model, k)?;
    let l = ball_radius;

    // chart pre-check at the corners, naming the violated bound
    for &(cx, cy) in &[(-l, -l), (-l, l), (l, -l), (l, l)] {
        let p = chain.from_rescaled(model, Point::new(cx, cy))?;
        let ex = (p.x - model.global.x_plus()).abs();
        if ex > model.chart.eps_x {
            return Err(Error::Validation(format!(
                "rescaled ball overflows the chart at k={k}: |x0 - x+| = {ex:.3e} > eps_x = {:.3e}",
                model.chart.eps_x
            )));
        }
        let yk = model.saddle.y_after(p, k)?;
        let ey = (yk - model.global.y_minus()).abs();
        if ey > model.chart.eps_y {
            return Err(Error::Validation(format!(
                "rescaled ball overflows the chart at k={k}: |y_k - y-| = {ey:.3e} > eps_y = {:.3e}",
                model.chart.eps_y
            )));
        }
    }

    let rm = ReturnMap::new(model, k);
    let mut residual = 0.0_f64;
    let mut rows: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n * n);
    for iy in 0..n {
        for ix in 0..n {
            let gx = -l + 2.0 * l * ix as f64 / (n - 1) as f64;
            let gy = -l + 2.0 * l * iy as f64 / (n - 1) as f64;
            let p = chain.from_rescaled(model, Point::new(gx, gy))?;
            let (q, _) = rm.eval(p)?;
            let r = chain.to_rescaled(model, q)?;
            let target_x = gy;
            let target_y = chain.m_final - chain.nu1 as f64 * gx - gy * gy
                + chain.cubic_coeff * gy * gy * gy;
            residual = residual
                .max((r.x - target_x).abs())
                .max((r.y - target_y).abs());
            rows.push((
                vec![1.0, gx, gy, gx * gx, gx * gy, gy * gy],
                r.y,
            ));
        }
    }

    let fit = least_squares(6, rows.into_iter())
        .ok_or_else(|| Error::Numerical("degenerate least-squares fit in rescaling".into()))?;
    Ok(RescaledMap {
        k,
        nu1: chain.nu1,
        nu2: chain.nu2,
        m: chain.m_final,
        cubic_coeff: chain.cubic_coeff,
        residual_bound: residual,
        ball_radius,
        xy_fit_coeff: fit[4],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::globalmap::{ExactGlobalMap, GlobalMap};
    use crate::saddle::{Orientation, SaddleNormalForm};

    fn model(
        lambda: f64,
        orientation: Orientation,
        b: f64,
        c: f64,
        d: f64,
        x_plus: f64,
        sigma: f64,
        f03: f64,
        mu: f64,
    ) -> ModelMap {
        let saddle = SaddleNormalForm::new(lambda, orientation, vec![]).unwrap();
        let global = GlobalMap::Exact(ExactGlobalMap {
            x_plus,
            y_minus: 1.0,
            mu,
            b,
            c,
            d,
            sigma,
            f03,
        });
        ModelMap::new(saddle, global, 1, None).unwrap()
    }

    fn reference(sigma: f64, f03: f64) -> ModelMap {
        model(0.5, Orientation::Preserving, -1.0, 1.0, 1.0, 1.0, sigma, f03, 0.0)
    }

    #[test]
    fn s0_trivial_values() {
        let t = reference(0.0, 0.0).global.taylor();
        assert_eq!(compute_s0(&t, 1).value, 0.0);
        let t = reference(1.0, 0.0).global.taylor();
        assert_eq!(compute_s0(&t, 1).value, -1.0);
    }

    #[test]
    fn s0_general_formula_reduces_to_special_cases() {
        // (1/2) f11 x+ (1 + nu1 - (1/2) f11 x+) specializes to the
        // symplectic and non-orientable forms
        let mut t = reference(0.7, 0.0).global.taylor();
        t.f11 = 0.6;
        t.f20 = 0.2;
        let f = t.f11 * t.x_plus;
        let base = t.d * t.x_plus * (t.a * t.c + t.f20 * t.x_plus);
        let symp = base + f * (1.0 - 0.25 * f);
        let nor = base - 0.25 * f * f;
        assert!((compute_s0(&t, 1).value - symp).abs() < 1e-15);
        assert!((compute_s0(&t, -1).value - nor).abs() < 1e-15);
    }

    #[test]
    fn mu_m_dictionary_roundtrip() {
        let m = reference(1.0, 0.2);
        for k in 4..=12 {
            for target in [-1.0, 0.0, 1.0, 3.0] {
                let mu = m_to_mu(&m, k, target);
                let m2 = mu_to_m(&m.with_mu(mu), k);
                assert!((m2 - target).abs() < 1e-9 * target.abs().max(1.0), "k={k}");
            }
        }
    }

    #[test]
    fn mu_to_m_trivial_substitutions() {
        // jet-family model (no mu-rebase of the Taylor base): a = 1, c = 1,
        // b = -1, d = 1, e02 = 1 keeps R = 2ad - b f11 - 2c e02 = 0; s0 = 1
        let saddle = SaddleNormalForm::new(0.5, Orientation::Preserving, vec![]).unwrap();
        let coeffs = crate::globalmap::GlobalMapCoeffs {
            x_plus: 1.0,
            y_minus: 1.0,
            mu: 0.0,
            a: 1.0,
            b: -1.0,
            c: 1.0,
            d: 1.0,
            e20: 0.0,
            e11: 0.0,
            e02: 1.0,
            f20: 0.0,
            f11: 0.0,
            f30: 0.0,
            f21: 0.0,
            f12: 0.0,
            f03: 0.0,
        };
        let m = ModelMap::new(
            saddle,
            GlobalMap::Jet(crate::globalmap::JetGlobalMap { coeffs }),
            1,
            None,
        )
        .unwrap();
        let k = 8usize;
        let lam2k = 0.5_f64.powi(2 * k as i32);
        let s0 = s0_for_k(&m, k);
        assert_eq!(s0, 1.0);
        // mu = -s0 lambda^2k / d at alpha = 0 gives M = 0 exactly
        let mu = -s0 * lam2k;
        assert!((mu_to_m(&m.with_mu(mu), k)).abs() < 1e-12);
        // mu at the formula's M = -1 endpoint: -(s0 - 1) lambda^2k / d
        let mu = m_to_mu(&m, k, -1.0);
        assert!((mu - (-(s0 - 1.0) * lam2k)).abs() < 1e-18);
    }

    #[test]
    fn nu_signs_all_four_orientation_cases() {
        // (lambda gamma, bc) -> (nu1 parity pattern, nu2 parity pattern)
        let symp = reference(1.0, 0.0); // bc = -1, orientable
        assert_eq!(nu1_sign(&symp, 7), 1);
        assert_eq!(nu2_sign(&symp, 7), 1);
        let gnor = model(0.5, Orientation::Preserving, 1.0, 1.0, 1.0, 1.0, 0.5, 0.0, 0.0); // bc=+1
        assert_eq!(nu1_sign(&gnor, 7), -1);
        assert_eq!(nu2_sign(&gnor, 7), 1);
        let lnor = model(-0.5, Orientation::Reversing, -1.0, 1.0, 1.0, 1.0, 1.0, 0.0, 0.0); // bc=-1
        assert_eq!(nu1_sign(&lnor, 6), 1);
        assert_eq!(nu1_sign(&lnor, 7), -1);
        assert_eq!(nu2_sign(&lnor, 6), 1);
        assert_eq!(nu2_sign(&lnor, 7), -1);
    }

    #[test]
    fn residual_vanishes_for_clean_configuration() {
        // sigma = 0, f03 = 0, betas empty, orientable: every dropped
        // correction is zero and the conjugacy is exact; the measured
        // residual is pure roundoff (amplified by lambda^-2k, so bounded by
        // ~2^k ulp rather than scaling with k lambda^2k)
        let m = model(0.5, Orientation::Preserving, -1.0, 1.0, 1.0, 1.0, 0.0, 0.0, 0.0);
        for k in 6..=14 {
            let r = rescaled_tk(&m, k, 2.0).unwrap();
            assert!(r.residual_bound < 1e-11, "k={k}: residual {}", r.residual_bound);
        }
    }

    #[test]
    fn residual_k_lambda_k_with_sigma() {
        let m = reference(1.0, 0.2);
        let r6 = rescaled_tk(&m, 6, 2.0).unwrap();
        let c6 = r6.residual_bound / (6.0 * 0.5_f64.powi(6));
        for k in 7..=14 {
            let r = rescaled_tk(&m, k, 2.0).unwrap();
            let c = r.residual_bound / (k as f64 * 0.5_f64.powi(k as i32));
            assert!(c <= 2.0 * c6, "k={k}: C = {c} vs fitted {c6}");
        }
    }

    #[test]
    fn xy_mixing_term_vanishes() {
        let m = reference(1.0, 0.2);
        for k in [6, 9, 12] {
            let r = rescaled_tk(&m, k, 2.0).unwrap();
            assert!(
                r.xy_fit_coeff.abs() <= r.residual_bound.max(1e-12),
                "k={k}: xy coefficient {} vs residual {}",
                r.xy_fit_coeff,
                r.residual_bound
            );
        }
    }

    #[test]
    fn jet_family_rescaling_with_f11_shifts() {
        // the truncated-jet global map exercises the f11/f20 shift terms of
        // the chain (zero for the exact family); R = 2ad - b f11 - 2c e02 = 0
        let saddle = SaddleNormalForm::new(0.5, Orientation::Preserving, vec![]).unwrap();
        let coeffs = crate::globalmap::GlobalMapCoeffs {
            x_plus: 1.0,
            y_minus: 1.0,
            mu: 0.0,
            a: 0.3,
            b: -1.0,
            c: 1.0,
            d: 1.2,
            e20: 0.05,
            e11: -0.04,
            e02: 0.46,
            f20: 0.1,
            f11: 0.2,
            f30: 0.0,
            f21: 0.0,
            f12: 0.05,
            f03: 0.1,
        };
        assert!(coeffs.validate().ok);
        let m = ModelMap::new(
            saddle,
            GlobalMap::Jet(crate::globalmap::JetGlobalMap { coeffs }),
            1,
            None,
        )
        .unwrap();
        let r6 = rescaled_tk(&m, 6, 1.5).unwrap();
        let c6 = r6.residual_bound / (6.0 * 0.5_f64.powi(6));
        for k in 7..=12 {
            let r = rescaled_tk(&m, k, 1.5).unwrap();
            let c = r.residual_bound / (k as f64 * 0.5_f64.powi(k as i32));
            assert!(c <= 2.5 * c6, "k={k}: C = {c} vs fitted {c6}");
            assert!(r.xy_fit_coeff.abs() <= r.residual_bound);
        }
    }

    #[test]
    fn reversing_jet_family_odd_chain_with_f11() {
        // odd iterates of a reversing saddle use the sign-flipped scaling
        // and shift; exercised with f11 != 0 through the jet family
        let saddle = SaddleNormalForm::new(-0.5, Orientation::Reversing, vec![]).unwrap();
        let coeffs = crate::globalmap::GlobalMapCoeffs {
            x_plus: 1.0,
            y_minus: 1.0,
            mu: 0.0,
            a: 0.2,
            b: -1.0,
            c: 1.0,
            d: 1.0,
            e20: 0.0,
            e11: 0.0,
            e02: 0.275,
            f20: 0.05,
            f11: -0.15,
            f30: 0.0,
            f21: 0.0,
            f12: 0.0,
            f03: 0.1,
        };
        // R = 2ad - b f11 - 2 c e02 = 0.4 - 0.15 - 0.55... adjust e02
        let mut coeffs = coeffs;
        coeffs.e02 = (2.0 * coeffs.a * coeffs.d - coeffs.b * coeffs.f11) / (2.0 * coeffs.c);
        assert!(coeffs.validate().ok);
        let m = ModelMap::new(
            saddle,
            GlobalMap::Jet(crate::globalmap::JetGlobalMap { coeffs }),
            1,
            None,
        )
        .unwrap();
        let r7 = rescaled_tk(&m, 7, 1.2).unwrap();
        assert_eq!(r7.nu1, -1);
        assert_eq!(r7.nu2, -1);
        let c7 = r7.residual_bound / (7.0 * 0.5_f64.powi(7));
        for k in [9usize, 11, 13] {
            let r = rescaled_tk(&m, k, 1.2).unwrap();
            let c = r.residual_bound / (k as f64 * 0.5_f64.powi(k as i32));
            assert!(c <= 3.0 * c7, "odd k={k}: C = {c} vs fitted {c7}");
        }
    }

    #[test]
    fn nonzero_beta1_keeps_residual_budget() {
        // saddle nonlinearity flows through the cross chart (closed-form B
        // powers) and the M1 correction factor
        let saddle = SaddleNormalForm::new(0.5, Orientation::Preserving, vec![0.3]).unwrap();
        let global = GlobalMap::Exact(ExactGlobalMap {
            x_plus: 1.0,
            y_minus: 1.0,
            mu: 0.0,
            b: -1.0,
            c: 1.0,
            d: 1.0,
            sigma: 1.0,
            f03: 0.2,
        });
        let m = ModelMap::new(saddle, global, 1, None).unwrap();
        let r6 = rescaled_tk(&m, 6, 2.0).unwrap();
        let c6 = r6.residual_bound / (6.0 * 0.5_f64.powi(6));
        for k in 7..=13 {
            let r = rescaled_tk(&m, k, 2.0).unwrap();
            let c = r.residual_bound / (k as f64 * 0.5_f64.powi(k as i32));
            assert!(c <= 2.0 * c6, "k={k}: C = {c} vs fitted {c6}");
        }
    }

    #[test]
    fn rescaled_fixed_points_converge_to_henon() {
        // fixed target M = 1 (mu = 0, s0 = -1): Henon elliptic point at
        // x = y = -1 + sqrt 2
        let m = reference(1.0, 0.0);
        let target = Point::new(-1.0 + 2.0_f64.sqrt(), -1.0 + 2.0_f64.sqrt());
        let mut prev_err = f64::INFINITY;
        for k in [8, 10, 12, 14] {
            let chain = RescaleChain::new(&m, k).unwrap();
            let rm = ReturnMap::new(&m, k);
            let seed = chain.from_rescaled(&m, target).unwrap();
            let rec = rm.find_fixed_point(seed).unwrap();
            let rescaled = chain.to_rescaled(&m, rec.point).unwrap();
            let err = rescaled.dist_inf(target);
            let budget = 10.0 * k as f64 * 0.5_f64.powi(k as i32);
            assert!(err < budget, "k={k}: err {err} budget {budget}");
            assert!(err < prev_err.max(1e-9) * 1.5, "k={k}: not shrinking");
            prev_err = err;
        }
    }
}
