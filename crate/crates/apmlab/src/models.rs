//! Standard model specimens used across examples and the acceptance suite.
//!
//! All use the exact area-preserving global family; coefficients follow the
//! class sign tables. `b` is fixed to +-1/c so that |bc| = 1.

use crate::error::Result;
use crate::globalmap::{ExactGlobalMap, GlobalMap, ModelMap};
use crate::saddle::{Orientation, SaddleNormalForm};

pub struct ModelSpec {
    pub lambda: f64,
    pub orientation: Orientation,
    pub betas: Vec<f64>,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub x_plus: f64,
    pub y_minus: f64,
    pub sigma: f64,
    pub f03: f64,
    pub mu: f64,
}

impl ModelSpec {
    pub fn build(self) -> Result<ModelMap> {
        let saddle = SaddleNormalForm::new(self.lambda, self.orientation, self.betas)?;
        let global = GlobalMap::Exact(ExactGlobalMap {
            x_plus: self.x_plus,
            y_minus: self.y_minus,
            mu: self.mu,
            b: self.b,
            c: self.c,
            d: self.d,
            sigma: self.sigma,
            f03: self.f03,
        });
        ModelMap::new(saddle, global, 1, None)
    }
}

/// Reference symplectic model at the global resonance (tau = 0, s0 = -1):
/// lambda = 1/2, c = 1, b = -1, d = 1, x+ = y- = 1, sigma = 1.
pub fn reference_symplectic(f03: f64) -> ModelMap {
    ModelSpec {
        lambda: 0.5,
        orientation: Orientation::Preserving,
        betas: vec![],
        b: -1.0,
        c: 1.0,
        d: 1.0,
        x_plus: 1.0,
        y_minus: 1.0,
        sigma: 1.0,
        f03,
        mu: 0.0,
    }
    .build()
    .expect("reference model")
}

/// Reference model with alpha = c x+ / y- - 1 set by x+.
pub fn reference_with_alpha(alpha: f64, f03: f64) -> ModelMap {
    ModelSpec {
        lambda: 0.5,
        orientation: Orientation::Preserving,
        betas: vec![],
        b: -1.0,
        c: 1.0,
        d: 1.0,
        x_plus: 1.0 + alpha,
        y_minus: 1.0,
        sigma: 1.0,
        f03,
        mu: 0.0,
    }
    .build()
    .expect("reference model")
}

/// Globally non-orientable model (bc = +1) at tau = 0 with s0^nor = -sigma.
pub fn globally_nonorientable(sigma: f64) -> ModelMap {
    ModelSpec {
        lambda: 0.5,
        orientation: Orientation::Preserving,
        betas: vec![],
        b: 1.0,
        c: 1.0,
        d: 1.0,
        x_plus: 1.0,
        y_minus: 1.0,
        sigma,
        f03: 0.0,
        mu: 0.0,
    }
    .build()
    .expect("globally non-orientable model")
}

/// Locally non-orientable model in the H3_3_1 cell (lambda < 0, c > 0,
/// d > 0, bc = -1) at the requested tau (c x+ / y- = |lambda|^tau).
pub fn locally_nonorientable_h331(tau: f64, sigma: f64) -> ModelMap {
    let lambda: f64 = -0.5;
    ModelSpec {
        lambda,
        orientation: Orientation::Reversing,
        betas: vec![],
        b: -1.0,
        c: 1.0,
        d: 1.0,
        x_plus: lambda.abs().powf(tau),
        y_minus: 1.0,
        sigma,
        f03: 0.0,
        mu: 0.0,
    }
    .build()
    .expect("H3_3_1 model")
}

/// Locally non-orientable model in the H3_3_2 cell (lambda < 0, c < 0,
/// d > 0, bc = -1) at alpha~ = alpha + 2 = 0 (c x+ = -y-).
pub fn locally_nonorientable_h332(sigma: f64) -> ModelMap {
    ModelSpec {
        lambda: -0.5,
        orientation: Orientation::Reversing,
        betas: vec![],
        b: 1.0,
        c: -1.0,
        d: 1.0,
        x_plus: 1.0,
        y_minus: 1.0,
        sigma,
        f03: 0.0,
        mu: 0.0,
    }
    .build()
    .expect("H3_3_2 model")
}

/// First-class model: lambda > 0, c < 0, d < 0.
pub fn class1() -> ModelMap {
    ModelSpec {
        lambda: 0.5,
        orientation: Orientation::Preserving,
        betas: vec![],
        b: 1.0,
        c: -1.0,
        d: -1.0,
        x_plus: 1.0,
        y_minus: 1.0,
        sigma: 0.0,
        f03: 0.0,
        mu: 0.0,
    }
    .build()
    .expect("class-1 model")
}

/// Second-class model: lambda > 0, c < 0, d > 0.
pub fn class2() -> ModelMap {
    ModelSpec {
        lambda: 0.5,
        orientation: Orientation::Preserving,
        betas: vec![],
        b: 1.0,
        c: -1.0,
        d: 1.0,
        x_plus: 1.0,
        y_minus: 1.0,
        sigma: 0.0,
        f03: 0.0,
        mu: 0.0,
    }
    .build()
    .expect("class-2 model")
}

/// H3_1 model (lambda > 0, c > 0, d > 0) at the requested tau.
pub fn h3_1(tau: f64) -> ModelMap {
    let lambda: f64 = 0.5;
    ModelSpec {
        lambda,
        orientation: Orientation::Preserving,
        betas: vec![],
        b: -1.0,
        c: 1.0,
        d: 1.0,
        x_plus: lambda.powf(tau),
        y_minus: 1.0,
        sigma: 0.0,
        f03: 0.0,
        mu: 0.0,
    }
    .build()
    .expect("H3_1 model")
}
