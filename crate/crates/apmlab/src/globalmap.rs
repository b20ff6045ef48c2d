//! The global map `T1` near the homoclinic points and the `ModelMap`
//! container (saddle + global map + chart) with its JSON schema.
//!
//! The production family is exactly area-preserving for all coefficient
//! values:
//!
//! ```text
//!   x' = x+ + b (y - y-) - sigma * G(x, y)
//!   y' = G(x, y) = mu + c x + d (y - y-)^2 + f03 (y - y-)^3
//! ```
//!
//! Its Jacobian is the constant `-b c` (the sigma terms cancel), `mu` is the
//! splitting parameter, and the Taylor data at `(0, y-)` realizes
//! `a = -sigma c`, `e02 = -sigma d`, `f20 = f11 = 0`. A general truncated-jet
//! variant exists for testing; it is area-preserving only to represented
//! order.

use crate::error::{Error, Result};
use crate::geom::{Mat2, Point};
use crate::jets::Jet2;
use crate::saddle::{ChartBox, SaddleNormalForm};
use serde::{Deserialize, Serialize};

/// Taylor data of the global map at (0, y-), the coefficient set of the
/// quadratic-tangency expansion.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GlobalMapCoeffs {
    pub x_plus: f64,
    pub y_minus: f64,
    pub mu: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e20: f64,
    pub e11: f64,
    pub e02: f64,
    pub f20: f64,
    pub f11: f64,
    pub f30: f64,
    pub f21: f64,
    pub f12: f64,
    pub f03: f64,
}

/// Diagnostics from the area-preservation identities |bc| = 1 and
/// R = 2ad - b f11 - 2c e02 = 0.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct CoeffDiagnostics {
    pub bc: f64,
    pub bc_defect: f64,
    pub r_value: f64,
    pub ok: bool,
}

impl GlobalMapCoeffs {
    pub fn bc_sign(&self) -> f64 {
        if self.b * self.c > 0.0 {
            1.0
        } else {
            -1.0
        }
    }

    pub fn r_value(&self) -> f64 {
        2.0 * self.a * self.d - self.b * self.f11 - 2.0 * self.c * self.e02
    }

    /// Reports violations of |bc| = 1 and R = 0 with magnitudes.
    pub fn validate(&self) -> CoeffDiagnostics {
        let bc = self.b * self.c;
        let bc_defect = (bc.abs() - 1.0).abs();
        let r_value = self.r_value();
        CoeffDiagnostics {
            bc,
            bc_defect,
            r_value,
            ok: bc_defect <= 1e-12 && r_value.abs() <= 1e-12,
        }
    }
}

/// The exact area-preserving family.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExactGlobalMap {
    pub x_plus: f64,
    pub y_minus: f64,
    pub mu: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub sigma: f64,
    pub f03: f64,
}

impl ExactGlobalMap {
    pub fn validate(&self) -> Result<()> {
        if !(self.x_plus > 0.0 && self.y_minus > 0.0) {
            return Err(Error::Validation(
                "homoclinic coordinates x+ and y- must be positive".into(),
            ));
        }
        if self.d == 0.0 {
            return Err(Error::Validation("quadratic coefficient d must be nonzero".into()));
        }
        if ((self.b * self.c).abs() - 1.0).abs() > 1e-12 {
            return Err(Error::Validation(format!(
                "|bc| must equal 1 for an area-preserving global map, got {}",
                (self.b * self.c).abs()
            )));
        }
        Ok(())
    }

    fn g(&self, p: Point) -> f64 {
        let dy = p.y - self.y_minus;
        self.mu + self.c * p.x + self.d * dy * dy + self.f03 * dy * dy * dy
    }

    fn g_y(&self, p: Point) -> f64 {
        let dy = p.y - self.y_minus;
        2.0 * self.d * dy + 3.0 * self.f03 * dy * dy
    }

    pub fn apply(&self, p: Point) -> Point {
        let g = self.g(p);
        Point::new(
            self.x_plus + self.b * (p.y - self.y_minus) - self.sigma * g,
            g,
        )
    }

    /// Differential; its determinant is the constant -bc.
    pub fn jacobian(&self, p: Point) -> Mat2 {
        let gx = self.c;
        let gy = self.g_y(p);
        Mat2::new(-self.sigma * gx, self.b - self.sigma * gy, gx, gy)
    }

    /// Taylor data in the frame where the x-component has no constant term.
    /// The expansion base drifts with the splitting parameter: the image of
    /// (0, y-) is (x+ - sigma*mu, mu), so the effective x+ entering the
    /// invariants and parameter dictionaries is mu-dependent.
    pub fn taylor(&self) -> GlobalMapCoeffs {
        GlobalMapCoeffs {
            x_plus: self.x_plus - self.sigma * self.mu,
            y_minus: self.y_minus,
            mu: self.mu,
            a: -self.sigma * self.c,
            b: self.b,
            c: self.c,
            d: self.d,
            e20: 0.0,
            e11: 0.0,
            e02: -self.sigma * self.d,
            f20: 0.0,
            f11: 0.0,
            f30: 0.0,
            f21: 0.0,
            f12: 0.0,
            f03: self.f03,
        }
    }
}

/// Truncated-jet global map: evaluates the Taylor expansion literally.
/// Area preservation holds only to represented order; used for testing the
/// jet and rescale machinery against general coefficient sets.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct JetGlobalMap {
    pub coeffs: GlobalMapCoeffs,
}

impl JetGlobalMap {
    pub fn apply(&self, p: Point) -> Point {
        let c = &self.coeffs;
        let x = p.x;
        let v = p.y - c.y_minus;
        let fx = c.a * x + c.b * v + c.e20 * x * x + c.e11 * x * v + c.e02 * v * v;
        let fy = c.mu
            + c.c * x
            + c.d * v * v
            + c.f20 * x * x
            + c.f11 * x * v
            + c.f30 * x * x * x
            + c.f21 * x * x * v
            + c.f12 * x * v * v
            + c.f03 * v * v * v;
        Point::new(c.x_plus + fx, fy)
    }

    pub fn jacobian(&self, p: Point) -> Mat2 {
        let c = &self.coeffs;
        let x = p.x;
        let v = p.y - c.y_minus;
        Mat2::new(
            c.a + 2.0 * c.e20 * x + c.e11 * v,
            c.b + c.e11 * x + 2.0 * c.e02 * v,
            c.c + 2.0 * c.f20 * x + c.f11 * v + 3.0 * c.f30 * x * x + 2.0 * c.f21 * x * v + c.f12 * v * v,
            2.0 * c.d * v + c.f11 * x + c.f21 * x * x + 2.0 * c.f12 * x * v + 3.0 * c.f03 * v * v,
        )
    }
}

/// Either global-map realization.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum GlobalMap {
    Exact(ExactGlobalMap),
    Jet(JetGlobalMap),
}

impl GlobalMap {
    pub fn apply(&self, p: Point) -> Point {
        match self {
            GlobalMap::Exact(m) => m.apply(p),
            GlobalMap::Jet(m) => m.apply(p),
        }
    }

    pub fn jacobian(&self, p: Point) -> Mat2 {
        match self {
            GlobalMap::Exact(m) => m.jacobian(p),
            GlobalMap::Jet(m) => m.jacobian(p),
        }
    }

    pub fn taylor(&self) -> GlobalMapCoeffs {
        match self {
            GlobalMap::Exact(m) => m.taylor(),
            GlobalMap::Jet(m) => m.coeffs.clone(),
        }
    }

    pub fn x_plus(&self) -> f64 {
        match self {
            GlobalMap::Exact(m) => m.x_plus,
            GlobalMap::Jet(m) => m.coeffs.x_plus,
        }
    }

    pub fn y_minus(&self) -> f64 {
        match self {
            GlobalMap::Exact(m) => m.y_minus,
            GlobalMap::Jet(m) => m.coeffs.y_minus,
        }
    }

    pub fn mu(&self) -> f64 {
        match self {
            GlobalMap::Exact(m) => m.mu,
            GlobalMap::Jet(m) => m.coeffs.mu,
        }
    }

    pub fn set_mu(&mut self, mu: f64) {
        match self {
            GlobalMap::Exact(m) => m.mu = mu,
            GlobalMap::Jet(m) => m.coeffs.mu = mu,
        }
    }
}

/// Chart half-widths for the Pi+ / Pi- neighbourhoods.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Chart {
    pub eps_x: f64,
    pub eps_y: f64,
}

impl Chart {
    pub fn default_for(x_plus: f64, y_minus: f64) -> Self {
        let e = 0.25 * x_plus.min(y_minus);
        Chart { eps_x: e, eps_y: e }
    }
}

fn default_q() -> u32 {
    1
}

#[derive(Serialize, Deserialize)]
struct SaddleData {
    lambda: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    gamma: Option<f64>,
    #[serde(default)]
    betas: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct ModelData {
    saddle: SaddleData,
    global: GlobalMap,
    #[serde(default = "default_q")]
    q: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    chart: Option<Chart>,
}

/// A complete model: local saddle, global map, transition time bookkeeping
/// and chart geometry.
#[derive(Clone, Debug)]
pub struct ModelMap {
    pub saddle: SaddleNormalForm,
    pub global: GlobalMap,
    pub q: u32,
    pub chart: Chart,
}

impl ModelMap {
    pub fn new(saddle: SaddleNormalForm, global: GlobalMap, q: u32, chart: Option<Chart>) -> Result<Self> {
        if let GlobalMap::Exact(ref m) = global {
            m.validate()?;
        }
        let chart = chart.unwrap_or_else(|| Chart::default_for(global.x_plus(), global.y_minus()));
        if !(chart.eps_x > 0.0 && chart.eps_y > 0.0) {
            return Err(Error::Validation("chart half-widths must be positive".into()));
        }
        Ok(ModelMap { saddle, global, q, chart })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let data: ModelData = serde_json::from_str(text)?;
        let gamma = data.saddle.gamma.unwrap_or(1.0 / data.saddle.lambda);
        let saddle = SaddleNormalForm::from_multipliers(data.saddle.lambda, gamma, data.saddle.betas)?;
        ModelMap::new(saddle, data.global, data.q, data.chart)
    }

    pub fn to_json(&self) -> String {
        let data = ModelData {
            saddle: SaddleData {
                lambda: self.saddle.lambda(),
                gamma: Some(self.saddle.gamma()),
                betas: self.saddle.betas().to_vec(),
            },
            global: self.global.clone(),
            q: self.q,
            chart: Some(self.chart),
        };
        serde_json::to_string_pretty(&data).expect("model serialization")
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    pub fn with_mu(&self, mu: f64) -> ModelMap {
        let mut m = self.clone();
        m.global.set_mu(mu);
        m
    }

    /// The member of the two-parameter family with the given alpha at mu = 0:
    /// the raw x+ is rebuilt as (alpha + 1) y- / c.
    pub fn with_alpha(&self, alpha: f64) -> Result<ModelMap> {
        let t = self.global.taylor();
        let x_plus = (alpha + 1.0) * t.y_minus / t.c;
        if !(x_plus > 0.0) {
            return Err(Error::Validation(format!(
                "alpha = {alpha} gives non-positive x+ = {x_plus} for c = {}",
                t.c
            )));
        }
        let mut m = self.clone();
        match &mut m.global {
            GlobalMap::Exact(g) => g.x_plus = x_plus,
            GlobalMap::Jet(g) => g.coeffs.x_plus = x_plus,
        }
        Ok(m)
    }

    /// Bound box of the local chart U0 (covers both Pi+ and Pi-).
    pub fn u0_box(&self) -> ChartBox {
        ChartBox {
            x_max: self.global.x_plus() + self.chart.eps_x,
            y_max: self.global.y_minus() + self.chart.eps_y,
        }
    }

    /// p within the Pi- neighbourhood of (0, y-).
    pub fn in_pi_minus(&self, p: Point) -> bool {
        p.x.abs() <= self.chart.eps_x && (p.y - self.global.y_minus()).abs() <= self.chart.eps_y
    }

    /// p within the Pi+ neighbourhood of (x+, 0).
    pub fn in_pi_plus(&self, p: Point) -> bool {
        (p.x - self.global.x_plus()).abs() <= self.chart.eps_x && p.y.abs() <= self.chart.eps_y
    }

    pub fn bc(&self) -> f64 {
        let t = self.global.taylor();
        t.b * t.c
    }

    /// Validates saddle/global consistency used by the CLI before running.
    pub fn validate(&self) -> Result<()> {
        if let GlobalMap::Exact(ref m) = self.global {
            m.validate()?;
        } else {
            let d = self.global.taylor().validate();
            if !d.ok {
                return Err(Error::Validation(format!(
                    "jet global map violates area-preservation identities: |bc|-1 = {:.3e}, R = {:.3e}",
                    d.bc_defect, d.r_value
                )));
            }
        }
        Ok(())
    }
}

/// Taylor coefficients of T1 in displacement variables (x, y - y-) computed
/// independently through jet arithmetic; cross-check for `taylor()`.
pub fn taylor_of_t1_via_jets(map: &GlobalMap, order: usize) -> (Jet2, Jet2) {
    let x = Jet2::var_x(order);
    let dy = Jet2::var_y(order); // y - y- as a variable
    match map {
        GlobalMap::Exact(m) => {
            let g = {
                let dy2 = dy.mul(&dy);
                let dy3 = dy2.mul(&dy);
                Jet2::constant(m.mu, order)
                    .add(&x.scale(m.c))
                    .add(&dy2.scale(m.d))
                    .add(&dy3.scale(m.f03))
            };
            let fx = Jet2::constant(m.x_plus, order)
                .add(&dy.scale(m.b))
                .add(&g.scale(-m.sigma));
            (fx, g)
        }
        GlobalMap::Jet(m) => {
            let c = &m.coeffs;
            let x2 = x.mul(&x);
            let dy2 = dy.mul(&dy);
            let fx = Jet2::constant(c.x_plus, order)
                .add(&x.scale(c.a))
                .add(&dy.scale(c.b))
                .add(&x2.scale(c.e20))
                .add(&x.mul(&dy).scale(c.e11))
                .add(&dy2.scale(c.e02));
            let fy = Jet2::constant(c.mu, order)
                .add(&x.scale(c.c))
                .add(&dy2.scale(c.d))
                .add(&x2.scale(c.f20))
                .add(&x.mul(&dy).scale(c.f11))
                .add(&x2.mul(&x).scale(c.f30))
                .add(&x2.mul(&dy).scale(c.f21))
                .add(&x.mul(&dy2).scale(c.f12))
                .add(&dy2.mul(&dy).scale(c.f03));
            (fx, fy)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::saddle::Orientation;

    pub(crate) fn reference_exact() -> ExactGlobalMap {
        ExactGlobalMap {
            x_plus: 1.0,
            y_minus: 1.0,
            mu: 0.0,
            b: -1.0,
            c: 1.0,
            d: 1.0,
            sigma: 1.0,
            f03: 0.0,
        }
    }

    #[test]
    fn homoclinic_point_maps_to_homoclinic_point() {
        let m = reference_exact();
        let q = m.apply(Point::new(0.0, 1.0));
        assert_eq!(q.x, 1.0);
        assert_eq!(q.y, 0.0);
    }

    #[test]
    fn direct_substitution_example() {
        // sigma=0, b=-1, c=1, d=1, x+=1, y-=1, mu=0.1: (0.2, 1.3) -> (0.7, 0.39)
        let m = ExactGlobalMap {
            x_plus: 1.0,
            y_minus: 1.0,
            mu: 0.1,
            b: -1.0,
            c: 1.0,
            d: 1.0,
            sigma: 0.0,
            f03: 0.0,
        };
        let q = m.apply(Point::new(0.2, 1.3));
        assert!((q.x - 0.7).abs() < 1e-15);
        assert!((q.y - 0.39).abs() < 1e-15);
    }

    #[test]
    fn jacobian_is_minus_bc_everywhere() {
        let m = ExactGlobalMap {
            x_plus: 1.3,
            y_minus: 0.8,
            mu: 0.05,
            b: -2.0,
            c: 0.5,
            d: -1.4,
            sigma: 0.7,
            f03: 0.3,
        };
        let target = -m.b * m.c;
        let h = 1e-6;
        for i in 0..100 {
            let p = Point::new(-0.2 + 0.004 * i as f64, 0.8 + 0.003 * (i % 7) as f64);
            assert!((m.jacobian(p).det() - target).abs() < 1e-12);
            // finite differences agree
            let pxp = m.apply(Point::new(p.x + h, p.y));
            let pxm = m.apply(Point::new(p.x - h, p.y));
            let pyp = m.apply(Point::new(p.x, p.y + h));
            let pym = m.apply(Point::new(p.x, p.y - h));
            let det_fd = ((pxp.x - pxm.x) / (2.0 * h)) * ((pyp.y - pym.y) / (2.0 * h))
                - ((pyp.x - pym.x) / (2.0 * h)) * ((pxp.y - pxm.y) / (2.0 * h));
            assert!((det_fd - target).abs() < 1e-9);
        }
    }

    #[test]
    fn taylor_data_satisfies_identities() {
        // sigma=1, c=1, b=-1, d=1 -> a=-1, e02=-1, f20=f11=0, R=0
        let m = reference_exact();
        let t = m.taylor();
        assert_eq!(t.a, -1.0);
        assert_eq!(t.e02, -1.0);
        assert_eq!(t.f20, 0.0);
        assert_eq!(t.f11, 0.0);
        let diag = t.validate();
        assert!(diag.ok, "bc defect {} R {}", diag.bc_defect, diag.r_value);
    }

    #[test]
    fn validate_flags_r_violation() {
        // a=1, d=1, b=-1, f11=0, c=1, e02=0 -> R=2 flagged
        let c = GlobalMapCoeffs {
            x_plus: 1.0,
            y_minus: 1.0,
            mu: 0.0,
            a: 1.0,
            b: -1.0,
            c: 1.0,
            d: 1.0,
            e20: 0.0,
            e11: 0.0,
            e02: 0.0,
            f20: 0.0,
            f11: 0.0,
            f30: 0.0,
            f21: 0.0,
            f12: 0.0,
            f03: 0.0,
        };
        let diag = c.validate();
        assert!(!diag.ok);
        assert!((diag.r_value - 2.0).abs() < 1e-15);
        assert!(diag.bc_defect < 1e-15);
    }

    #[test]
    fn taylor_agrees_with_jet_extraction() {
        let m = GlobalMap::Exact(ExactGlobalMap {
            x_plus: 1.2,
            y_minus: 0.9,
            mu: 0.02,
            b: -0.5,
            c: 2.0,
            d: 1.7,
            sigma: 0.6,
            f03: 0.25,
        });
        let t = m.taylor();
        let (fx, fy) = taylor_of_t1_via_jets(&m, 4);
        assert!((fx.get(0, 0) - t.x_plus).abs() < 1e-12);
        assert!((fx.get(1, 0) - t.a).abs() < 1e-12);
        assert!((fx.get(0, 1) - t.b).abs() < 1e-12);
        assert!((fx.get(0, 2) - t.e02).abs() < 1e-12);
        assert!((fy.get(0, 0) - t.mu).abs() < 1e-12);
        assert!((fy.get(1, 0) - t.c).abs() < 1e-12);
        assert!((fy.get(0, 2) - t.d).abs() < 1e-12);
        assert!((fy.get(1, 1) - t.f11).abs() < 1e-12);
        assert!((fy.get(2, 0) - t.f20).abs() < 1e-12);
        assert!((fy.get(0, 3) - t.f03).abs() < 1e-12);
    }

    #[test]
    fn tangency_offset_is_exactly_mu() {
        let mut m = reference_exact();
        m.mu = 0.037;
        // the image of {x=0} has its vertex offset exactly mu in y
        let mut min_y = f64::INFINITY;
        for i in 0..=1000 {
            let y = 1.0 - 0.1 + 0.2 * i as f64 / 1000.0;
            let q = m.apply(Point::new(0.0, y));
            min_y = min_y.min(q.y);
        }
        assert!((min_y - 0.037).abs() < 1e-7);
    }

    #[test]
    fn model_json_roundtrip() {
        let saddle = SaddleNormalForm::new(0.5, Orientation::Preserving, vec![0.1]).unwrap();
        let model = ModelMap::new(saddle, GlobalMap::Exact(reference_exact()), 1, None).unwrap();
        let text = model.to_json();
        let back = ModelMap::from_json(&text).unwrap();
        assert_eq!(back.saddle.lambda(), 0.5);
        assert_eq!(back.global.x_plus(), 1.0);
        assert_eq!(back.q, 1);
        assert!((back.chart.eps_x - 0.25).abs() < 1e-15);
        // byte-identical re-serialization
        assert_eq!(text, back.to_json());
    }

    #[test]
    fn orientation_requires_gamma_field() {
        // non-orientable saddle: gamma = -1/lambda must be given explicitly
        let text = r#"{
            "saddle": {"lambda": -0.5, "gamma": 2.0, "betas": []},
            "global": {"family": "exact", "x_plus": 1.0, "y_minus": 1.0, "mu": 0.0,
                       "b": -1.0, "c": 1.0, "d": 1.0, "sigma": 1.0, "f03": 0.0},
            "q": 1
        }"#;
        let m = ModelMap::from_json(text).unwrap();
        assert_eq!(m.saddle.orientation_sign(), -1.0);
    }
}
