//! The local saddle map `T0` in Birkhoff-Moser product form, its exact
//! iterates, and the cross-form expression of `T0^k`.
//!
//! The model saddle is
//!
//! ```text
//!   x' = lambda x B(xy),    y' = gamma y / B(xy),
//!   B(u) = 1 + beta_1 u + beta_2 u^2 + ...
//! ```
//!
//! with `gamma = +1/lambda` (orientable) or `gamma = -1/lambda`
//! (non-orientable). The Jacobian is identically `lambda*gamma` for any
//! polynomial `B`, which keeps multiplier and ellipticity tests sharp.

use crate::error::{Error, Result};
use crate::geom::{Mat2, Point};
use serde::{Deserialize, Serialize};

/// Orientation of the saddle germ: sign of lambda*gamma.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    Preserving,
    Reversing,
}

/// Saddle fixed point in normal-form coordinates.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SaddleNormalForm {
    lambda: f64,
    gamma: f64,
    betas: Vec<f64>,
}

/// Bound box |x| <= x_max, |y| <= y_max for orbit-in-chart checks.
#[derive(Clone, Copy, Debug)]
pub struct ChartBox {
    pub x_max: f64,
    pub y_max: f64,
}

impl ChartBox {
    pub fn contains(&self, p: Point) -> bool {
        p.x.abs() <= self.x_max && p.y.abs() <= self.y_max
    }
}

impl SaddleNormalForm {
    pub fn new(lambda: f64, orientation: Orientation, betas: Vec<f64>) -> Result<Self> {
        if !(lambda.abs() > 0.0 && lambda.abs() < 1.0) {
            return Err(Error::Validation(format!(
                "saddle multiplier must satisfy 0 < |lambda| < 1, got {lambda}"
            )));
        }
        let gamma = match orientation {
            Orientation::Preserving => 1.0 / lambda,
            Orientation::Reversing => -1.0 / lambda,
        };
        if orientation == Orientation::Reversing {
            for (i, b) in betas.iter().enumerate() {
                if (i + 1) % 2 == 1 && *b != 0.0 {
                    return Err(Error::Validation(format!(
                        "non-orientable saddle requires beta_{} = 0",
                        i + 1
                    )));
                }
            }
        }
        Ok(SaddleNormalForm { lambda, gamma, betas })
    }

    /// Build from explicit multipliers; gamma must be exactly +-1/lambda.
    pub fn from_multipliers(lambda: f64, gamma: f64, betas: Vec<f64>) -> Result<Self> {
        let prod = lambda * gamma;
        if (prod - 1.0).abs() < 1e-12 {
            Self::new(lambda, Orientation::Preserving, betas)
        } else if (prod + 1.0).abs() < 1e-12 {
            Self::new(lambda, Orientation::Reversing, betas)
        } else {
            Err(Error::Validation(format!(
                "|lambda*gamma| must equal 1, got lambda*gamma = {prod}"
            )))
        }
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn betas(&self) -> &[f64] {
        &self.betas
    }

    pub fn beta(&self, i: usize) -> f64 {
        self.betas.get(i - 1).copied().unwrap_or(0.0)
    }

    /// Sign of lambda*gamma as +-1.
    pub fn orientation_sign(&self) -> f64 {
        if self.lambda * self.gamma > 0.0 {
            1.0
        } else {
            -1.0
        }
    }

    pub fn is_orientable(&self) -> bool {
        self.orientation_sign() > 0.0
    }

    /// (lambda*gamma)^k as an exact sign.
    pub fn orientation_pow(&self, k: usize) -> f64 {
        if self.is_orientable() || k % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// gamma^-k computed as a signed power of |lambda|.
    pub fn gamma_pow_neg(&self, k: usize) -> f64 {
        self.gamma.powi(-(k as i32))
    }

    pub fn b_at(&self, u: f64) -> f64 {
        let mut acc = 1.0;
        let mut up = 1.0;
        for &b in &self.betas {
            up *= u;
            acc += b * up;
        }
        acc
    }

    fn b_prime_at(&self, u: f64) -> f64 {
        let mut acc = 0.0;
        let mut up = 1.0;
        for (i, &b) in self.betas.iter().enumerate() {
            acc += b * (i as f64 + 1.0) * up;
            up *= u;
        }
        acc
    }

    /// One application of T0. Errors when B(xy) is not positive (the chart is
    /// too large for the chosen betas).
    pub fn apply(&self, p: Point) -> Result<Point> {
        let u = p.x * p.y;
        let b = self.b_at(u);
        if !(b > 0.0) {
            return Err(Error::Domain(format!(
                "B(xy) = {b} <= 0 at (x, y) = ({}, {}); chart too large for the chosen betas",
                p.x, p.y
            )));
        }
        Ok(Point::new(self.lambda * p.x * b, self.gamma * p.y / b))
    }

    /// Differential of T0 at p (closed form).
    pub fn jacobian(&self, p: Point) -> Mat2 {
        let u = p.x * p.y;
        let b = self.b_at(u);
        let bp = self.b_prime_at(u);
        Mat2::new(
            self.lambda * (b + u * bp),
            self.lambda * p.x * p.x * bp,
            -self.gamma * p.y * p.y * bp / (b * b),
            self.gamma * (1.0 / b - u * bp / (b * b)),
        )
    }

    /// Exact inverse of T0 (u is scaled by 1/(lambda*gamma) per step).
    pub fn apply_inverse(&self, p: Point) -> Result<Point> {
        let u = p.x * p.y / (self.lambda * self.gamma);
        let b = self.b_at(u);
        if !(b > 0.0) {
            return Err(Error::Domain(format!(
                "B(xy) = {b} <= 0 on inverse branch at ({}, {})",
                p.x, p.y
            )));
        }
        Ok(Point::new(p.x / (self.lambda * b), p.y * b / self.gamma))
    }

    /// T0^k with the whole forward orbit kept inside `chart`.
    pub fn iterate(&self, p: Point, k: usize, chart: &ChartBox) -> Result<Point> {
        self.iterate_with_jacobian(p, k, chart).map(|(q, _)| q)
    }

    /// T0^k plus the chain-rule differential.
    pub fn iterate_with_jacobian(&self, p: Point, k: usize, chart: &ChartBox) -> Result<(Point, Mat2)> {
        if !chart.contains(p) {
            return Err(Error::ChartEscape { step: 0 });
        }
        let mut q = p;
        let mut jac = Mat2::identity();
        for step in 1..=k {
            jac = self.jacobian(q).mul(jac);
            q = self.apply(q)?;
            if !chart.contains(q) {
                return Err(Error::ChartEscape { step });
            }
        }
        Ok((q, jac))
    }

    /// Closed-form y-coordinate after k steps, using invariance of B along
    /// the orbit: y_k = gamma^k y0 B(x0 y0)^-k. Valid for the product-form
    /// model (odd betas vanish in the reversing case).
    pub fn y_after(&self, p: Point, k: usize) -> Result<f64> {
        let b = self.b_at(p.x * p.y);
        if !(b > 0.0) {
            return Err(Error::Domain("B(xy) <= 0 in closed-form iterate".into()));
        }
        Ok(self.gamma.powi(k as i32) * p.y * b.powi(-(k as i32)))
    }

    /// Closed-form x-coordinate after k steps: x_k = lambda^k x0 B(x0 y0)^k.
    pub fn x_after(&self, p: Point, k: usize) -> Result<f64> {
        let b = self.b_at(p.x * p.y);
        if !(b > 0.0) {
            return Err(Error::Domain("B(xy) <= 0 in closed-form iterate".into()));
        }
        Ok(self.lambda.powi(k as i32) * p.x * b.powi(k as i32))
    }

    /// Recover y0 from the cross pair (x0, y_k): solves
    /// y0 = gamma^-k y_k B(x0 y0)^k by fixed-point iteration.
    pub fn y_before(&self, x0: f64, yk: f64, k: usize) -> Result<f64> {
        let base = self.gamma.powi(-(k as i32)) * yk;
        let mut y0 = base;
        for _ in 0..64 {
            let b = self.b_at(x0 * y0);
            if !(b > 0.0) {
                return Err(Error::Domain("B(xy) <= 0 in cross-form solve".into()));
            }
            let next = base * b.powi(k as i32);
            if (next - y0).abs() <= 1e-16 * y0.abs().max(1e-300) {
                return Ok(next);
            }
            y0 = next;
        }
        Ok(y0)
    }
}

/// Evaluated cross-form data for T0^k.
#[derive(Clone, Debug, Serialize)]
pub struct CrossFormResult {
    pub xk: f64,
    pub y0: f64,
    pub k: usize,
    /// Evaluated hat-beta polynomials, truncated to the requested order:
    /// beta1*k, then beta1^2 k^2 + beta2 k.
    pub hat_betas: Vec<f64>,
}

pub fn hat_beta1(saddle: &SaddleNormalForm, k: usize) -> f64 {
    saddle.beta(1) * k as f64
}

pub fn hat_beta2(saddle: &SaddleNormalForm, k: usize) -> f64 {
    let kf = k as f64;
    saddle.beta(1).powi(2) * kf * kf + saddle.beta(2) * kf
}

/// Cross-form expression of T0^k: given x0 and y_k, returns
///
/// ```text
///   x_k = lambda^k x0 R_n(x0 y_k),   y0 = gamma^-k y_k R_n(x0 y_k),
///   R_n(v) = 1 + sum_{i<=n} hat_beta_i(k) lambda^{ik} v^i.
/// ```
///
/// Orders n <= 2 are supported (the hat-beta polynomials of higher order are
/// not pinned down by the model data we carry).
pub fn cross_form_t0k(
    saddle: &SaddleNormalForm,
    x0: f64,
    yk: f64,
    k: usize,
    n: usize,
) -> Result<CrossFormResult> {
    if n > 2 {
        return Err(Error::Unsupported(
            "cross-form hat-beta polynomials are available for n <= 2 only".into(),
        ));
    }
    let lambda = saddle.lambda;
    let v = x0 * yk;
    let mut hat = Vec::new();
    let mut r = 1.0;
    if n >= 1 {
        let hb1 = hat_beta1(saddle, k);
        r += hb1 * lambda.powi(k as i32) * v;
        hat.push(hb1);
    }
    if n >= 2 {
        let hb2 = hat_beta2(saddle, k);
        r += hb2 * lambda.powi(2 * k as i32) * v * v;
        hat.push(hb2);
    }
    Ok(CrossFormResult {
        xk: lambda.powi(k as i32) * x0 * r,
        y0: saddle.gamma.powi(-(k as i32)) * yk * r,
        k,
        hat_betas: hat,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chart() -> ChartBox {
        ChartBox { x_max: 10.0, y_max: 10.0 }
    }

    #[test]
    fn linear_case_direct() {
        let s = SaddleNormalForm::new(0.5, Orientation::Preserving, vec![]).unwrap();
        let q = s.apply(Point::new(0.8, 0.01)).unwrap();
        assert!((q.x - 0.4).abs() < 1e-15);
        assert!((q.y - 0.02).abs() < 1e-15);
    }

    #[test]
    fn product_form_direct_substitution() {
        // beta1 = 0.2, lambda = 0.5 at (1, 1): B = 1.2
        let s = SaddleNormalForm::new(0.5, Orientation::Preserving, vec![0.2]).unwrap();
        let q = s.apply(Point::new(1.0, 1.0)).unwrap();
        assert!((q.x - 0.6).abs() < 1e-15);
        assert!((q.y - 2.0 / 1.2).abs() < 1e-15);
    }

    #[test]
    fn jacobian_is_area_preserving() {
        // finite-difference Jacobian equals lambda*gamma at random-ish points
        let s = SaddleNormalForm::new(0.55, Orientation::Preserving, vec![0.3, -0.15]).unwrap();
        let lg = s.lambda() * s.gamma();
        let h = 1e-6;
        let mut worst = 0.0_f64;
        for i in 0..100 {
            let x = -0.9 + 0.018 * i as f64;
            let y = 0.8 - 0.016 * i as f64;
            let p = Point::new(x, y);
            let jx = {
                let a = s.apply(Point::new(x + h, y)).unwrap();
                let b = s.apply(Point::new(x - h, y)).unwrap();
                let c = s.apply(Point::new(x, y + h)).unwrap();
                let d = s.apply(Point::new(x, y - h)).unwrap();
                let j11 = (a.x - b.x) / (2.0 * h);
                let j21 = (a.y - b.y) / (2.0 * h);
                let j12 = (c.x - d.x) / (2.0 * h);
                let j22 = (c.y - d.y) / (2.0 * h);
                j11 * j22 - j12 * j21
            };
            worst = worst.max((jx - lg).abs());
            // analytic Jacobian is exact
            assert!((s.jacobian(p).det() - lg).abs() < 1e-12);
        }
        assert!(worst < 1e-8, "fd worst {worst}");
    }

    #[test]
    fn linear_iterate() {
        let s = SaddleNormalForm::new(0.5, Orientation::Preserving, vec![]).unwrap();
        let q = s.iterate(Point::new(0.8, 0.01), 3, &chart()).unwrap();
        assert!((q.x - 0.1).abs() < 1e-15);
        assert!((q.y - 0.08).abs() < 1e-15);
    }

    #[test]
    fn xy_invariant_when_betas_empty() {
        let s = SaddleNormalForm::new(0.5, Orientation::Preserving, vec![]).unwrap();
        let mut p = Point::new(0.3, 0.001);
        let u0 = p.x * p.y;
        for _ in 0..20 {
            p = s.apply(p).unwrap();
            assert!((p.x * p.y - u0).abs() < 1e-14);
        }
    }

    #[test]
    fn chart_escape_reports_step() {
        let s = SaddleNormalForm::new(0.5, Orientation::Preserving, vec![]).unwrap();
        let tight = ChartBox { x_max: 1.0, y_max: 0.1 };
        let err = s.iterate(Point::new(0.5, 0.06), 5, &tight).unwrap_err();
        match err {
            Error::ChartEscape { step } => assert_eq!(step, 1),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn cross_form_linear_exact() {
        let s = SaddleNormalForm::new(0.5, Orientation::Preserving, vec![]).unwrap();
        let r = cross_form_t0k(&s, 0.7, 0.9, 6, 2).unwrap();
        assert!((r.xk - 0.5_f64.powi(6) * 0.7).abs() < 1e-16);
        assert!((r.y0 - 2.0_f64.powi(-6) * 0.9).abs() < 1e-16);
    }

    #[test]
    fn hat_beta2_direct_value() {
        // k=5, beta1=0.1, beta2=0.3: 0.01*25 + 0.3*5 = 1.75
        let s = SaddleNormalForm::new(0.5, Orientation::Preserving, vec![0.1, 0.3]).unwrap();
        assert!((hat_beta2(&s, 5) - 1.75).abs() < 1e-15);
    }

    #[test]
    fn cross_form_consistent_with_iteration() {
        // |cross x_k - iterated x_k| <= C k |lambda|^2k |x0|^2 |y_k| with C bounded
        let s = SaddleNormalForm::new(0.5, Orientation::Preserving, vec![0.1]).unwrap();
        let mut worst_c = 0.0_f64;
        for k in 4..=10 {
            let p0 = Point::new(0.9, 0.9 * 0.5_f64.powi(k as i32));
            let q = s.iterate(p0, k, &chart()).unwrap();
            let r = cross_form_t0k(&s, p0.x, q.y, k, 1).unwrap();
            let budget_unit = k as f64 * 0.5_f64.powi(2 * k as i32) * p0.x * p0.x * q.y.abs();
            let c = (r.xk - q.x).abs() / budget_unit;
            let c2 = (r.y0 - p0.y).abs() / budget_unit;
            worst_c = worst_c.max(c).max(c2);
        }
        assert!(worst_c < 10.0, "fitted C grew: {worst_c}");
    }

    #[test]
    fn reversing_saddle_conventions() {
        let s = SaddleNormalForm::new(-0.5, Orientation::Reversing, vec![0.0, 0.2]).unwrap();
        assert!(s.gamma() > 1.0);
        assert_eq!(s.orientation_sign(), -1.0);
        // odd beta rejected
        assert!(SaddleNormalForm::new(-0.5, Orientation::Reversing, vec![0.1]).is_err());
        // reduces to x_k = lambda^k x0 when betas are even-only and we use n=1
        let r = cross_form_t0k(&s, 0.4, 0.3, 5, 1).unwrap();
        assert!((r.xk - (-0.5_f64).powi(5) * 0.4).abs() < 1e-16);
    }

    #[test]
    fn invariant_axes_preserved() {
        let s = SaddleNormalForm::new(0.5, Orientation::Preserving, vec![0.3]).unwrap();
        let q = s.apply(Point::new(0.7, 0.0)).unwrap();
        assert_eq!(q.y, 0.0);
        let q = s.apply(Point::new(0.0, 0.4)).unwrap();
        assert_eq!(q.x, 0.0);
    }

    #[test]
    fn inverse_undoes_apply() {
        let s = SaddleNormalForm::new(0.6, Orientation::Preserving, vec![0.25, -0.1]).unwrap();
        let p = Point::new(0.5, 0.3);
        let q = s.apply(p).unwrap();
        let back = s.apply_inverse(q).unwrap();
        assert!(back.dist_inf(p) < 1e-14);
    }

    #[test]
    fn cross_form_root_find_reproduces_iteration() {
        // given (x0, y0), solve the cross relations for y_k by a 1-D root
        // find, then compare (x_k, y_k) with direct iteration; the error
        // budget is the remainder order of the expansion
        let s = SaddleNormalForm::new(0.5, Orientation::Preserving, vec![0.1, 0.05]).unwrap();
        let big = chart();
        for k in 4..=12 {
            let x0 = 0.9;
            let y0 = 0.85 * 0.5_f64.powi(k as i32);
            let direct = s.iterate(Point::new(x0, y0), k, &big).unwrap();
            // root-find g(yk) = gamma^-k yk R(x0 yk) - y0 = 0 by bisection
            let g = |yk: f64| cross_form_t0k(&s, x0, yk, k, 2).unwrap().y0 - y0;
            let (mut lo, mut hi) = (0.25, 2.5);
            assert!(g(lo) < 0.0 && g(hi) > 0.0);
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if g(mid) < 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let yk = 0.5 * (lo + hi);
            let xk = cross_form_t0k(&s, x0, yk, k, 2).unwrap().xk;
            let budget = 50.0 * (k as f64).powi(2) * 0.5_f64.powi(3 * k as i32);
            assert!((yk - direct.y).abs() < budget, "k={k}: y_k off by {}", (yk - direct.y).abs());
            assert!((xk - direct.x).abs() < budget, "k={k}: x_k off by {}", (xk - direct.x).abs());
        }
    }
}
