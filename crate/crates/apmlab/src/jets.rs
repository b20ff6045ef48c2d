//! Truncated bivariate power series and the canonical normal-form reduction
//! of planar saddle germs.
//!
//! A [`Jet2`] stores a dense table of real coefficients for monomials
//! `x^i y^j` with `i + j <= order`; all arithmetic discards monomials above
//! the truncation order. [`JetMap2`] is a planar map germ with diagonal
//! linear part, the carrier for saddle normal forms and canonical changes of
//! coordinates. [`normal_form_reduce`] performs the inductive elimination of
//! non-resonant terms by generating-function changes and extracts the
//! Birkhoff coefficients.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

const COEFF_EPS: f64 = 0.0; // treat exact zeros as absent

/// Dense truncated power series in two variables.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet2 {
    order: usize,
    coeffs: Vec<f64>,
}

fn tri_len(order: usize) -> usize {
    (order + 1) * (order + 2) / 2
}

#[inline]
fn idx(i: usize, j: usize) -> usize {
    let t = i + j;
    t * (t + 1) / 2 + i
}

impl Jet2 {
    pub fn zero(order: usize) -> Self {
        Jet2 {
            order,
            coeffs: vec![0.0; tri_len(order)],
        }
    }

    pub fn constant(c: f64, order: usize) -> Self {
        let mut j = Jet2::zero(order);
        j.coeffs[0] = c;
        j
    }

    /// The monomial `x`.
    pub fn var_x(order: usize) -> Self {
        let mut j = Jet2::zero(order);
        j.set(1, 0, 1.0);
        j
    }

    /// The monomial `y`.
    pub fn var_y(order: usize) -> Self {
        let mut j = Jet2::zero(order);
        j.set(0, 1, 1.0);
        j
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i + j > self.order {
            0.0
        } else {
            self.coeffs[idx(i, j)]
        }
    }

    pub fn set(&mut self, i: usize, j: usize, c: f64) {
        assert!(i + j <= self.order, "monomial ({i},{j}) beyond order {}", self.order);
        self.coeffs[idx(i, j)] = c;
    }

    pub fn add_to(&mut self, i: usize, j: usize, c: f64) {
        assert!(i + j <= self.order);
        self.coeffs[idx(i, j)] += c;
    }

    /// Iterate over nonzero terms as (i, j, coeff), graded order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        let order = self.order;
        (0..=order).flat_map(move |t| {
            (0..=t).filter_map(move |i| {
                let c = self.coeffs[idx(i, t - i)];
                if c.abs() > COEFF_EPS {
                    Some((i, t - i, c))
                } else {
                    None
                }
            })
        })
    }

    pub fn add(&self, other: &Jet2) -> Jet2 {
        let order = self.order.min(other.order);
        let mut out = Jet2::zero(order);
        for t in 0..=order {
            for i in 0..=t {
                out.coeffs[idx(i, t - i)] = self.get(i, t - i) + other.get(i, t - i);
            }
        }
        out
    }

    pub fn sub(&self, other: &Jet2) -> Jet2 {
        let order = self.order.min(other.order);
        let mut out = Jet2::zero(order);
        for t in 0..=order {
            for i in 0..=t {
                out.coeffs[idx(i, t - i)] = self.get(i, t - i) - other.get(i, t - i);
            }
        }
        out
    }

    pub fn scale(&self, s: f64) -> Jet2 {
        let mut out = self.clone();
        for c in &mut out.coeffs {
            *c *= s;
        }
        out
    }

    /// Product, truncated to the smaller order of the factors.
    pub fn mul(&self, other: &Jet2) -> Jet2 {
        let order = self.order.min(other.order);
        let mut out = Jet2::zero(order);
        for t1 in 0..=order {
            for i1 in 0..=t1 {
                let c1 = self.get(i1, t1 - i1);
                if c1 == 0.0 {
                    continue;
                }
                for t2 in 0..=(order - t1) {
                    for i2 in 0..=t2 {
                        let c2 = other.get(i2, t2 - i2);
                        if c2 == 0.0 {
                            continue;
                        }
                        out.coeffs[idx(i1 + i2, t1 + t2 - i1 - i2)] += c1 * c2;
                    }
                }
            }
        }
        out
    }

    pub fn diff_x(&self) -> Jet2 {
        let order = self.order.saturating_sub(1);
        let mut out = Jet2::zero(order);
        for (i, j, c) in self.terms() {
            if i >= 1 && i - 1 + j <= order {
                out.add_to(i - 1, j, c * i as f64);
            }
        }
        out
    }

    pub fn diff_y(&self) -> Jet2 {
        let order = self.order.saturating_sub(1);
        let mut out = Jet2::zero(order);
        for (i, j, c) in self.terms() {
            if j >= 1 && i + j - 1 <= order {
                out.add_to(i, j - 1, c * j as f64);
            }
        }
        out
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        // graded Horner-free evaluation; orders are small
        let mut acc = 0.0;
        for (i, j, c) in self.terms() {
            acc += c * x.powi(i as i32) * y.powi(j as i32);
        }
        acc
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0_f64, |m, c| m.max(c.abs()))
    }

    pub fn truncate(&self, order: usize) -> Jet2 {
        let order = order.min(self.order);
        let mut out = Jet2::zero(order);
        for t in 0..=order {
            for i in 0..=t {
                out.coeffs[idx(i, t - i)] = self.get(i, t - i);
            }
        }
        out
    }

    /// Re-embed into a jet of the given order, dropping terms that no longer fit.
    pub fn resize(&self, order: usize) -> Jet2 {
        let mut out = Jet2::zero(order);
        for (i, j, c) in self.terms() {
            if i + j <= order {
                out.set(i, j, c);
            }
        }
        out
    }

    /// Substitute the pair (gx, gy) for the variables; both substituted jets
    /// must vanish at the origin for the truncation to be exact.
    pub fn compose(&self, gx: &Jet2, gy: &Jet2) -> Jet2 {
        let order = self.order.min(gx.order).min(gy.order);
        debug_assert!(gx.get(0, 0) == 0.0 && gy.get(0, 0) == 0.0);
        // power tables
        let one = Jet2::constant(1.0, order);
        let mut px: Vec<Jet2> = Vec::with_capacity(order + 1);
        let mut py: Vec<Jet2> = Vec::with_capacity(order + 1);
        px.push(one.clone());
        py.push(one);
        for p in 1..=order {
            px.push(px[p - 1].mul(gx));
            py.push(py[p - 1].mul(gy));
        }
        let mut out = Jet2::zero(order);
        for (i, j, c) in self.terms() {
            if i + j > order {
                continue;
            }
            let term = px[i].mul(&py[j]);
            out = out.add(&term.scale(c));
        }
        out
    }
}

/// Serialized form of a jet: truncation order plus sparse (i, j, c) terms.
#[derive(Serialize, Deserialize)]
struct JetData {
    order: usize,
    terms: Vec<(usize, usize, f64)>,
}

impl Serialize for Jet2 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        JetData {
            order: self.order,
            terms: self.terms().collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Jet2 {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let data = JetData::deserialize(d)?;
        let mut j = Jet2::zero(data.order);
        for (i, jj, c) in data.terms {
            if i + jj > data.order {
                return Err(serde::de::Error::custom("jet term beyond truncation order"));
            }
            j.set(i, jj, c);
        }
        Ok(j)
    }
}

/// Planar map germ with diagonal linear part diag(lambda, gamma).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct JetMap2 {
    pub fx: Jet2,
    pub fy: Jet2,
    pub lambda: f64,
    pub gamma: f64,
}

impl JetMap2 {
    /// Build from components, checking that the linear part is diagonal and
    /// matches the stated multipliers.
    pub fn new(fx: Jet2, fy: Jet2) -> Result<Self> {
        if fx.order() != fy.order() {
            return Err(Error::Validation("jet components have different orders".into()));
        }
        let lambda = fx.get(1, 0);
        let gamma = fy.get(0, 1);
        let off = fx.get(0, 1).abs().max(fy.get(1, 0).abs());
        let cst = fx.get(0, 0).abs().max(fy.get(0, 0).abs());
        if off > 1e-12 || cst > 1e-12 {
            return Err(Error::Validation(
                "jet map must fix the origin with diagonal linear part".into(),
            ));
        }
        Ok(JetMap2 { fx, fy, lambda, gamma })
    }

    pub fn identity(order: usize) -> Self {
        JetMap2 {
            fx: Jet2::var_x(order),
            fy: Jet2::var_y(order),
            lambda: 1.0,
            gamma: 1.0,
        }
    }

    pub fn linear(lambda: f64, gamma: f64, order: usize) -> Self {
        JetMap2 {
            fx: Jet2::var_x(order).scale(lambda),
            fy: Jet2::var_y(order).scale(gamma),
            lambda,
            gamma,
        }
    }

    pub fn order(&self) -> usize {
        self.fx.order()
    }

    /// |lambda * gamma| = 1 within tol: the germ of an area-preserving saddle.
    pub fn is_neutral_saddle(&self, tol: f64) -> bool {
        ((self.lambda * self.gamma).abs() - 1.0).abs() <= tol
    }

    pub fn eval(&self, x: f64, y: f64) -> (f64, f64) {
        (self.fx.eval(x, y), self.fy.eval(x, y))
    }

    pub fn max_coeff_diff(&self, other: &JetMap2) -> f64 {
        self.fx
            .sub(&other.fx)
            .max_abs_coeff()
            .max(self.fy.sub(&other.fy).max_abs_coeff())
    }
}

/// Taylor expansion of `outer(inner)`, exact to the common truncation order.
pub fn jet_compose(outer: &JetMap2, inner: &JetMap2) -> JetMap2 {
    let fx = outer.fx.compose(&inner.fx, &inner.fy);
    let fy = outer.fy.compose(&inner.fx, &inner.fy);
    JetMap2 {
        fx,
        fy,
        lambda: outer.lambda * inner.lambda,
        gamma: outer.gamma * inner.gamma,
    }
}

/// Determinant of the differential as a jet of order D-1.
pub fn jet_jacobian_det(map: &JetMap2) -> Jet2 {
    let a = map.fx.diff_x();
    let b = map.fx.diff_y();
    let c = map.fy.diff_x();
    let d = map.fy.diff_y();
    a.mul(&d).sub(&b.mul(&c))
}

/// Inverse of a jet map whose linear part is diagonal and invertible.
/// Degree-graded fixed point: W := L^-1 (id - N(W)).
pub fn jet_invert(map: &JetMap2) -> Result<JetMap2> {
    let order = map.order();
    if map.lambda == 0.0 || map.gamma == 0.0 {
        return Err(Error::Validation("jet map with singular linear part".into()));
    }
    let il = 1.0 / map.lambda;
    let ig = 1.0 / map.gamma;
    // nonlinear part
    let nx = {
        let mut t = map.fx.clone();
        t.add_to(1, 0, -map.lambda);
        t
    };
    let ny = {
        let mut t = map.fy.clone();
        t.add_to(0, 1, -map.gamma);
        t
    };
    let mut wx = Jet2::var_x(order).scale(il);
    let mut wy = Jet2::var_y(order).scale(ig);
    for _ in 0..=order {
        let nwx = nx.compose(&wx, &wy);
        let nwy = ny.compose(&wx, &wy);
        let new_wx = Jet2::var_x(order).sub(&nwx).scale(il);
        let new_wy = Jet2::var_y(order).sub(&nwy).scale(ig);
        let delta = new_wx.sub(&wx).max_abs_coeff().max(new_wy.sub(&wy).max_abs_coeff());
        wx = new_wx;
        wy = new_wy;
        if delta == 0.0 {
            break;
        }
    }
    Ok(JetMap2 {
        fx: wx,
        fy: wy,
        lambda: il,
        gamma: ig,
    })
}

/// The canonical change of coordinates defined implicitly by a generating
/// function `V(x, eta) = x*eta + h(x, eta)`:
///
///   xi = dV/deta (x, eta),   y = dV/dx (x, eta).
///
/// Returns the change as a map (x, y) -> (xi, eta) with identity linear part.
pub fn generating_change(v: &Jet2, order: usize) -> Result<JetMap2> {
    if (v.get(1, 1) - 1.0).abs() > 1e-12 {
        return Err(Error::Validation(
            "generating function must have unit x*eta coefficient".into(),
        ));
    }
    // h = V - x*eta; V may carry one degree more than the target order so
    // that top-degree monomials of the map remain reachable
    let mut h = v.clone();
    h.add_to(1, 1, -1.0);
    let h_x = h.diff_x().resize(order);
    let h_eta = h.diff_y().resize(order);

    let x_var = Jet2::var_x(order);
    let y_var = Jet2::var_y(order);

    // solve eta(x, y) from y = eta + h_x(x, eta) by degree-graded iteration
    let mut eta = y_var.clone();
    for _ in 0..=order {
        let corr = h_x.compose(&x_var, &eta);
        let new_eta = y_var.sub(&corr);
        let delta = new_eta.sub(&eta).max_abs_coeff();
        eta = new_eta;
        if delta == 0.0 {
            break;
        }
    }
    let xi = x_var.add(&h_eta.compose(&x_var, &eta));
    JetMap2::new(xi, eta)
}

/// Conjugate `F` by the canonical change generated by `V`; returns the
/// transformed map and the change itself.
pub fn apply_generating_with_change(f: &JetMap2, v: &Jet2) -> Result<(JetMap2, JetMap2)> {
    let phi = generating_change(v, f.order())?;
    let phi_inv = jet_invert(&phi)?;
    let conj = jet_compose(&phi, &jet_compose(f, &phi_inv));
    Ok((conj, phi))
}

/// Conjugate `F` by the canonical change generated by `V`.
pub fn apply_generating(f: &JetMap2, v: &Jet2) -> Result<JetMap2> {
    apply_generating_with_change(f, v).map(|(conj, _)| conj)
}

/// Result of the inductive normal-form reduction.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NormalFormResult {
    pub betas: Vec<f64>,
    pub tilde_betas: Vec<f64>,
    /// Accumulated canonical change: reduced = change o F o change^-1.
    pub change: JetMap2,
    pub reduced: JetMap2,
}

const HOMOLOGICAL_DIVISOR_MIN: f64 = 1e-8;

/// Straighten the local invariant manifolds of a saddle germ by canonical
/// changes, so that afterwards the x-component is divisible by x and the
/// y-component by y.
///
/// The stable manifold is the graph y = phi(x) solving the invariance
/// equation fy(x, phi(x)) = phi(fx(x, phi(x))) degree by degree; the change
/// eta = y - phi(x) is generated by V = x eta + integral phi dx. The
/// unstable manifold x = psi(y) is handled symmetrically.
pub fn straighten_manifolds(f: &JetMap2) -> Result<(JetMap2, JetMap2)> {
    let order = f.order();
    let lambda = f.lambda;
    let gamma = f.gamma;
    let x_var = Jet2::var_x(order);

    // stable graph y = phi(x)
    let mut phi = Jet2::zero(order);
    for m in 2..=order {
        let on_graph_x = f.fx.compose(&x_var, &phi);
        let on_graph_y = f.fy.compose(&x_var, &phi);
        let residual = on_graph_y.sub(&phi.compose(&on_graph_x, &Jet2::zero(order)));
        let r_m = residual.get(m, 0);
        if r_m != 0.0 {
            phi.add_to(m, 0, -r_m / (gamma - lambda.powi(m as i32)));
        }
    }
    // generating function V = x eta + integral phi(x) dx
    let mut v_s = unit_generating(order + 1);
    for (i, _, c) in phi.terms() {
        v_s.add_to(i + 1, 0, c / (i as f64 + 1.0));
    }
    let (mut cur, change_s) = apply_generating_with_change(f, &v_s)?;

    // unstable graph x = psi(y) of the updated germ
    let y_var = Jet2::var_y(order);
    let mut psi = Jet2::zero(order);
    for m in 2..=order {
        let on_graph_x = cur.fx.compose(&psi, &y_var);
        let on_graph_y = cur.fy.compose(&psi, &y_var);
        let residual = on_graph_x.sub(&psi.compose(&Jet2::zero(order), &on_graph_y));
        let r_m = residual.get(0, m);
        if r_m != 0.0 {
            psi.add_to(0, m, -r_m / (lambda - gamma.powi(m as i32)));
        }
    }
    // xi = x - psi(eta): V = x eta - integral psi(eta) d eta
    let mut v_u = unit_generating(order + 1);
    for (_, j, c) in psi.terms() {
        v_u.add_to(0, j + 1, -c / (j as f64 + 1.0));
    }
    let (next, change_u) = apply_generating_with_change(&cur, &v_u)?;
    cur = next;
    Ok((cur, jet_compose(&change_u, &change_s)))
}

/// Reduce a neutral saddle germ to Birkhoff normal form up to order 2n+1.
///
/// Works level by level: the level-i family consists of the monomials
/// `x^{i+1+m} y^i` of the x-component and `x^i y^{i+1+m}` of the
/// y-component. Each non-resonant monomial (m >= 1) is cancelled by one
/// canonical change with generating function `x eta + c x^m (x eta)^{i+1}`
/// (or `.. c eta^m ..`), whose coefficient solves the homological equation
/// monomial-by-monomial. When lambda*gamma = -1 the resonant pair at odd i
/// (m = 0) is cancelled as well. The cross families (`x^{i+1} y^{i+m}` etc.)
/// vanish automatically for unit-Jacobian germs.
pub fn normal_form_reduce(f: &JetMap2, n: usize) -> Result<NormalFormResult> {
    let order = f.order();
    let lambda = f.lambda;
    let gamma = f.gamma;
    if n < 1 {
        return Err(Error::Validation("normal-form order n must be >= 1".into()));
    }
    if 2 * n + 1 > order {
        return Err(Error::Validation(format!(
            "truncation order {order} too small for normal-form order n={n} (need 2n+1)"
        )));
    }
    if !(lambda.abs() > 0.0 && lambda.abs() < 1.0 && gamma.abs() > 1.0) {
        return Err(Error::Validation(format!(
            "not a saddle germ: lambda={lambda}, gamma={gamma}"
        )));
    }
    if ((lambda * gamma).abs() - 1.0).abs() > 1e-12 {
        return Err(Error::Validation(format!(
            "|lambda*gamma| must be 1, got {}",
            (lambda * gamma).abs()
        )));
    }
    let sig = if lambda * gamma > 0.0 { 1.0 } else { -1.0 };

    // straighten W^s and W^u first: the level machinery assumes both
    // components divisible by their own variable
    let (mut cur, mut change) = straighten_manifolds(f)?;
    let max_deg = (2 * n + 1).min(order);

    let apply = |cur: &mut JetMap2, change: &mut JetMap2, v: &Jet2| -> Result<()> {
        let (next, phi) = apply_generating_with_change(cur, v)?;
        *cur = next;
        *change = jet_compose(&phi, change);
        Ok(())
    };

    for i in 0..=n {
        let delta_i = if i % 2 == 0 { 1.0 } else { sig };

        // resonant pair at odd level for reversing germs; the same change
        // cancels beta_i and tilde_beta_i simultaneously
        if sig < 0.0 && i % 2 == 1 {
            let beta_c = cur.fx.get(i + 1, i) / lambda;
            if beta_c != 0.0 {
                let div = (i as f64 + 1.0) * (1.0 - delta_i); // = 2(i+1)
                let mut v = unit_generating(order + 1);
                // nu * (x eta)^{i+1}
                v.add_to(i + 1, i + 1, beta_c / div);
                apply(&mut cur, &mut change, &v)?;
            }
        }

        // non-resonant monomials at this level, lowest degree first
        let m_max = max_deg.saturating_sub(2 * i + 1);
        for m in 1..=m_max {
            // x-side: coefficient of x^{i+1+m} y^i
            let c = cur.fx.get(i + 1 + m, i) / lambda;
            if c != 0.0 {
                let div = 1.0 - delta_i * lambda.powi(m as i32);
                if div.abs() < HOMOLOGICAL_DIVISOR_MIN {
                    return Err(Error::Numerical(format!(
                        "homological divisor too small at level {i}, degree {m}"
                    )));
                }
                let mut v = unit_generating(order + 1);
                v.add_to(i + 1 + m, i + 1, c / ((i as f64 + 1.0) * div));
                apply(&mut cur, &mut change, &v)?;
            }
            // y-side: coefficient of x^i y^{i+1+m}
            let c = cur.fy.get(i, i + 1 + m) / gamma;
            if c != 0.0 {
                let div = delta_i * gamma.powi(m as i32) - 1.0;
                if div.abs() < HOMOLOGICAL_DIVISOR_MIN {
                    return Err(Error::Numerical(format!(
                        "homological divisor too small at level {i}, degree {m} (y side)"
                    )));
                }
                let mut v = unit_generating(order + 1);
                v.add_to(i + 1, i + 1 + m, c / ((i as f64 + 1.0) * div));
                apply(&mut cur, &mut change, &v)?;
            }
        }
    }

    let mut betas = Vec::with_capacity(n);
    let mut tilde_betas = Vec::with_capacity(n);
    for i in 1..=n {
        betas.push(cur.fx.get(i + 1, i) / lambda);
        tilde_betas.push(cur.fy.get(i, i + 1) / gamma);
    }

    Ok(NormalFormResult {
        betas,
        tilde_betas,
        change,
        reduced: cur,
    })
}

/// Sup-norm of the non-resonant coefficients of a (claimed) normal form,
/// over total degrees <= 2n+1.
pub fn non_resonant_residual(map: &JetMap2, n: usize) -> f64 {
    let max_deg = (2 * n + 1).min(map.order());
    let mut worst = 0.0_f64;
    for (i, j, c) in map.fx.terms() {
        if i + j > max_deg {
            continue;
        }
        let resonant = i == j + 1; // x (xy)^j
        if !resonant {
            worst = worst.max(c.abs());
        }
    }
    for (i, j, c) in map.fy.terms() {
        if i + j > max_deg {
            continue;
        }
        let resonant = j == i + 1; // y (xy)^i
        if !resonant {
            worst = worst.max(c.abs());
        }
    }
    worst
}

fn unit_generating(order: usize) -> Jet2 {
    let mut v = Jet2::zero(order);
    v.set(1, 1, 1.0);
    v
}

/// Exact Birkhoff-Moser product-form germ truncated as a jet:
/// x' = lambda x B(xy), y' = gamma y / B(xy), B(u) = 1 + sum beta_i u^i.
pub fn birkhoff_moser_jet(lambda: f64, gamma: f64, betas: &[f64], order: usize) -> JetMap2 {
    let u = Jet2::var_x(order).mul(&Jet2::var_y(order));
    let mut b = Jet2::constant(1.0, order);
    let mut upow = Jet2::constant(1.0, order);
    for (i, &beta) in betas.iter().enumerate() {
        let _ = i;
        upow = upow.mul(&u);
        b = b.add(&upow.scale(beta));
    }
    // 1/B by geometric series: B = 1 + w
    let w = {
        let mut t = b.clone();
        t.add_to(0, 0, -1.0);
        t
    };
    let mut binv = Jet2::constant(1.0, order);
    let mut wpow = Jet2::constant(1.0, order);
    for p in 1..=order {
        wpow = wpow.mul(&w);
        let s = if p % 2 == 0 { 1.0 } else { -1.0 };
        binv = binv.add(&wpow.scale(s));
    }
    let fx = Jet2::var_x(order).mul(&b).scale(lambda);
    let fy = Jet2::var_y(order).mul(&binv).scale(gamma);
    JetMap2 {
        fx,
        fy,
        lambda,
        gamma,
    }
}
