//! First-return maps `T_k = T1 o T0^k`: evaluation with exact chain-rule
//! differentials, Newton location of fixed points and 2-cycles in the strip
//! `sigma_k^0`, and multiplier-based stability classification.

use crate::error::{Error, Result};
use crate::geom::{Box2, Mat2, Point};
use crate::globalmap::ModelMap;
use crate::henon::{classify, Stability};
use serde::Serialize;

pub const NEWTON_TOL: f64 = 1e-12;
pub const NEWTON_MAX_ITERS: usize = 50;

/// The first return map T_k for a fixed model and k.
#[derive(Clone)]
pub struct ReturnMap<'a> {
    pub model: &'a ModelMap,
    pub k: usize,
}

/// Located periodic point of T_k with multiplier data.
#[derive(Clone, Debug, Serialize)]
pub struct FixedPointRecord {
    pub point: Point,
    /// Period in T_k iterations (1 or 2).
    pub period: usize,
    pub trace: f64,
    pub det: f64,
    pub stability: Stability,
    /// arccos(trace/2) when elliptic.
    pub rotation: Option<f64>,
    /// Second point for period-2 records.
    pub partner: Option<Point>,
}

impl<'a> ReturnMap<'a> {
    pub fn new(model: &'a ModelMap, k: usize) -> Self {
        ReturnMap { model, k }
    }

    /// Expected determinant of DT_k: (lambda*gamma)^k * (-bc).
    pub fn expected_det(&self) -> f64 {
        self.model.saddle.orientation_pow(self.k) * (-self.model.bc())
    }

    /// Evaluate T_k with its exact chain-rule differential. Errors when the
    /// T0 orbit leaves the chart or fails to land in Pi-.
    pub fn eval(&self, p: Point) -> Result<(Point, Mat2)> {
        let chart = self.model.u0_box();
        let (q, j0) = self.model.saddle.iterate_with_jacobian(p, self.k, &chart)?;
        if self.k > 0 && !self.model.in_pi_minus(q) {
            return Err(Error::ChartEscape { step: self.k });
        }
        let j1 = self.model.global.jacobian(q);
        Ok((self.model.global.apply(q), j1.mul(j0)))
    }

    pub fn eval_point(&self, p: Point) -> Result<Point> {
        self.eval(p).map(|(q, _)| q)
    }

    /// The strip sigma_k^0 as a box (exact for empty betas, bisection hull
    /// otherwise); delegated to `semilocal::strip_geometry` for the full
    /// version. This local variant is the seed carrier.
    pub fn strip_box(&self) -> Box2 {
        crate::semilocal::sigma0_box(self.model, self.k)
    }

    /// Deterministic seed grid (default 32x32) over sigma_k^0.
    pub fn seed_grid(&self) -> Vec<Point> {
        self.seed_grid_n(32, 32)
    }

    pub fn seed_grid_n(&self, nx: usize, ny: usize) -> Vec<Point> {
        let b = self.strip_box();
        let mut seeds = Vec::with_capacity(nx * ny);
        for iy in 0..ny {
            for ix in 0..nx {
                let fx = (ix as f64 + 0.5) / nx as f64;
                let fy = (iy as f64 + 0.5) / ny as f64;
                seeds.push(Point::new(
                    b.x_lo + fx * (b.x_hi - b.x_lo),
                    b.y_lo + fy * (b.y_hi - b.y_lo),
                ));
            }
        }
        seeds
    }

    fn y_scale(&self) -> f64 {
        // strips are O(gamma^-k) thin; Newton runs with y scaled by gamma^k
        self.model.saddle.gamma().abs().powi(self.k as i32)
    }

    /// Newton for a fixed point of T_k^period from `seed`, in locally
    /// rescaled coordinates (y multiplied by gamma^k).
    fn newton(&self, seed: Point, period: usize) -> Result<Point> {
        let s = self.y_scale();
        let mut p = seed;
        let mut last_residual = f64::INFINITY;
        for _ in 0..NEWTON_MAX_ITERS {
            let (q, dq) = self.eval_period(p, period)?;
            let r = q - p;
            let residual = r.norm_inf();
            if residual < NEWTON_TOL {
                return Ok(p);
            }
            last_residual = residual;
            // scaled system: (S (DT - I) S^-1) (S delta) = -(S r)
            let m = Mat2::new(dq.a - 1.0, dq.b / s, s * dq.c, dq.d - 1.0);
            let rhs = Point::new(-r.x, -s * r.y);
            let delta_s = m.solve(rhs).ok_or_else(|| Error::Numerical(
                "singular Newton system for the return map".into(),
            ))?;
            let delta = Point::new(delta_s.x, delta_s.y / s);
            p = p + delta;
            // walk-off guard: far outside the chart means divergence
            if p.x.abs() > 10.0 * self.model.u0_box().x_max || !p.x.is_finite() || !p.y.is_finite() {
                return Err(Error::NoConvergence { residual, iters: NEWTON_MAX_ITERS });
            }
        }
        let (q, _) = self.eval_period(p, period)?;
        let residual = (q - p).norm_inf();
        if residual < NEWTON_TOL {
            Ok(p)
        } else {
            Err(Error::NoConvergence { residual: residual.min(last_residual), iters: NEWTON_MAX_ITERS })
        }
    }

    fn eval_period(&self, p: Point, period: usize) -> Result<(Point, Mat2)> {
        let mut q = p;
        let mut jac = Mat2::identity();
        for _ in 0..period {
            let (next, j) = self.eval(q)?;
            jac = j.mul(jac);
            q = next;
        }
        Ok((q, jac))
    }

    fn record_for(&self, p: Point, period: usize) -> Result<FixedPointRecord> {
        let (_, jac) = self.eval_period(p, period)?;
        let trace = jac.trace();
        let det = jac.det();
        let stability = classify(trace, det, period == 2);
        let rotation = if matches!(stability, Stability::EllipticGeneric | Stability::EllipticResonant) {
            Some((trace / 2.0).acos())
        } else {
            None
        };
        let partner = if period == 2 { Some(self.eval_point(p)?) } else { None };
        Ok(FixedPointRecord {
            point: p,
            period,
            trace,
            det,
            stability,
            rotation,
            partner,
        })
    }

    /// Newton to |T_k(p) - p| < 1e-12 and classify. Converging outside the
    /// strip is reported as an error, never silently accepted.
    pub fn find_fixed_point(&self, seed: Point) -> Result<FixedPointRecord> {
        let p = self.newton(seed, 1)?;
        if !self.in_strip_loose(p) {
            return Err(Error::OutsideStrip { x: p.x, y: p.y });
        }
        self.record_for(p, 1)
    }

    /// Newton on T_k^2; multipliers from the product of the two Jacobians.
    /// The record is canonicalized so that swapping the cycle points yields
    /// the same result.
    pub fn find_period2(&self, seed: Point) -> Result<FixedPointRecord> {
        let p = self.newton(seed, 2)?;
        if !self.in_strip_loose(p) {
            return Err(Error::OutsideStrip { x: p.x, y: p.y });
        }
        let q = self.eval_point(p)?;
        // canonical representative: smaller (y, x) lexicographically
        let rep = if (q.y, q.x) < (p.y, p.x) { q } else { p };
        self.record_for(rep, 2)
    }

    fn in_strip_loose(&self, p: Point) -> bool {
        let b = self.strip_box();
        let mx = 0.10 * (b.x_hi - b.x_lo).max(1e-12);
        let my = 0.75 * (b.y_hi - b.y_lo).max(1e-12);
        p.x >= b.x_lo - mx && p.x <= b.x_hi + mx && p.y >= b.y_lo - my && p.y <= b.y_hi + my
    }

    /// Exhaustive grid search for fixed points; deduplicated within 1e-8.
    pub fn grid_fixed_points(&self) -> Vec<FixedPointRecord> {
        self.grid_search(1)
    }

    /// Exhaustive grid search for period-2 points (includes fixed points,
    /// which are period-2 as well).
    pub fn grid_period2_points(&self) -> Vec<FixedPointRecord> {
        self.grid_search(2)
    }

    fn grid_search(&self, period: usize) -> Vec<FixedPointRecord> {
        let mut found: Vec<FixedPointRecord> = Vec::new();
        if period == 2 {
            // fixed points are period-2 points; their basins under the
            // squared map can be too tight for the grid, so install them
            // directly from the period-1 search
            for rec in self.grid_search(1) {
                if let Ok(as_p2) = self.record_for(rec.point, 2) {
                    found.push(as_p2);
                }
            }
        }
        for seed in self.seed_grid() {
            let rec = match period {
                1 => self.find_fixed_point(seed),
                _ => self.find_period2(seed),
            };
            if let Ok(rec) = rec {
                let dup = found.iter().any(|r| {
                    r.point.dist_inf(rec.point) < 1e-8
                        || rec
                            .partner
                            .map(|q| r.point.dist_inf(q) < 1e-8)
                            .unwrap_or(false)
                });
                if !dup {
                    found.push(rec);
                }
            }
        }
        found.sort_by(|a, b| (a.point.y, a.point.x).partial_cmp(&(b.point.y, b.point.x)).unwrap());
        found
    }
}
