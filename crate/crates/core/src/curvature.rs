//! Signed curvature of boundary curves and the slope bounds behind their
//! bounded variation.

use serde::{Deserialize, Serialize};

use crate::boundary::BoundaryGraph;
use crate::error::{Error, Result};
use crate::scene::GeneratorScene;
use crate::singularity::{chain_reach, chain_values, solve_on_element, Chain, Frame};
use crate::topology::{Decomposition, JordanCurve};

/// Lower bound on the one-sided slope derivative: `8 / (3 sqrt(3) eps)`.
pub fn q_bound(eps: f64) -> f64 {
    8.0 / (3.0 * 3f64.sqrt() * eps)
}

/// Slope `p(a) = -a / sqrt(eps^2 - a^2)` induced by a contributor offset `a`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlopeFn {
    pub epsilon: f64,
}

impl SlopeFn {
    pub fn new(epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::Domain(format!("epsilon must be positive, got {epsilon}")));
        }
        Ok(SlopeFn { epsilon })
    }

    /// Closed-form derivative `-eps^2 / (eps^2 - a^2)^(3/2)`.
    pub fn derivative(&self, a: f64) -> Result<f64> {
        let e2 = self.epsilon * self.epsilon;
        if a.abs() >= self.epsilon {
            return Err(Error::Domain(format!("|a| = {} is not below epsilon", a.abs())));
        }
        Ok(-e2 / (e2 - a * a).powf(1.5))
    }
}

pub fn slope_p(f: &SlopeFn, a: f64) -> Result<f64> {
    let e = f.epsilon;
    if !(a.abs() < e) {
        return Err(Error::Domain(format!("|a| = {} is not below epsilon {e}", a.abs())));
    }
    Ok(-a / (e * e - a * a).sqrt())
}

/// `k(T, h) = (T A - h P) / (h A + T P)` with `P = sqrt(h^2 + T^2) / 2`
/// and `A = sqrt(eps^2 - P^2)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundFn {
    pub epsilon: f64,
    pub h: f64,
}

impl BoundFn {
    /// Requires `0 < h < 2 eps` so that `T = 0` is in the domain.
    pub fn new(epsilon: f64, h: f64) -> Result<Self> {
        SlopeFn::new(epsilon)?;
        if !(h > 0.0 && h < 2.0 * epsilon) {
            return Err(Error::Domain(format!("h = {h} outside (0, 2 epsilon)")));
        }
        Ok(BoundFn { epsilon, h })
    }

    /// Lower end `-sqrt(4 eps^2 - h^2)` and upper end
    /// `sqrt(eps^2 - (eps - h)^2)` of the range where `P(T) < eps`
    /// is considered.
    pub fn interval(&self) -> (f64, f64) {
        let (e, h) = (self.epsilon, self.h);
        (-(4.0 * e * e - h * h).sqrt(), (e * e - (e - h) * (e - h)).sqrt())
    }

    /// The zero of the denominator inside the interval, `-sqrt(2 h eps - h^2)`.
    pub fn pole(&self) -> f64 {
        let (e, h) = (self.epsilon, self.h);
        -(2.0 * h * e - h * h).sqrt()
    }

    /// Numerator and denominator of `k`.
    pub fn parts(&self, t: f64) -> Result<(f64, f64)> {
        let (e, h) = (self.epsilon, self.h);
        let p = (h * h + t * t).sqrt() / 2.0;
        if p >= e {
            return Err(Error::Domain(format!("P(T) = {p} is not below epsilon {e}")));
        }
        let a = (e * e - p * p).sqrt();
        Ok((t * a - h * p, h * a + t * p))
    }
}

pub fn bound_k(f: &BoundFn, t: f64) -> Result<f64> {
    let (num, den) = f.parts(t)?;
    if den == 0.0 {
        return Err(Error::Domain(format!("k has a pole at T = {t}")));
    }
    Ok(num / den)
}

/// `T^ = -sqrt(eps^2 - a^2) + sqrt(eps^2 - (a + h)^2)`.
pub fn t_hat(eps: f64, a: f64, h: f64) -> Result<f64> {
    if a.abs() >= eps || (a + h).abs() > eps {
        return Err(Error::Domain(format!("a = {a}, h = {h} outside the disc of radius {eps}")));
    }
    Ok(-(eps * eps - a * a).sqrt() + (eps * eps - (a + h) * (a + h)).sqrt())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvatureSample {
    pub curve: usize,
    pub element: usize,
    /// Arclength within the element.
    pub s: f64,
    /// Curvature of the element support in the local frame.
    pub kappa: f64,
    /// Curvature from second differences of the local graph.
    pub kappa_fd: Option<f64>,
    /// Finite-difference step used for `kappa_fd`.
    pub delta_s: f64,
    pub defined: bool,
}

impl CurvatureSample {
    /// Agreement tolerance for `kappa_fd`.
    pub fn tol_fd(&self) -> f64 {
        10.0 * self.delta_s
    }

    pub fn fd_error(&self) -> Option<f64> {
        self.kappa_fd.map(|k| (k - self.kappa).abs())
    }
}

/// Samples `n` points per element of curve `curve_id` plus one undefined
/// sample at every vertex.
pub fn curvature_on_curve(
    g: &BoundaryGraph,
    d: &Decomposition,
    curve_id: usize,
    n: usize,
) -> Result<Vec<CurvatureSample>> {
    let curve = d
        .curves
        .get(curve_id)
        .ok_or_else(|| Error::Domain(format!("no curve {curve_id}")))?;
    let n = n.max(1);
    let eps = g.epsilon;
    let mut out = Vec::new();
    for e in curve.elements() {
        let el = &g.elements[e];
        let len = el.support.length();
        if el.start.is_some() {
            out.push(CurvatureSample {
                curve: curve_id,
                element: e,
                s: 0.0,
                kappa: 0.0,
                kappa_fd: None,
                delta_s: 0.0,
                defined: false,
            });
        }
        let ds = (1e-3 * eps).min(len / (4.0 * n as f64));
        for k in 0..n {
            let frac = (k as f64 + 0.5) / n as f64;
            let x = el.support.point_at(frac);
            let y = el.contributor_point(x, eps);
            let kappa = el.support.curvature();
            let kappa_fd = if ds < 1e-5 * eps {
                None
            } else {
                (x - y).direction().and_then(|nu| {
                    let frame = Frame { x, xi: el.support.tangent_at(frac), nu };
                    let near = |s: f64| {
                        solve_on_element(&el.support, &frame, s, 1e-6 * eps)
                            .into_iter()
                            .map(|(_, f)| f)
                            .min_by(|a, b| a.abs().total_cmp(&b.abs()))
                    };
                    let (fm, f0, fp) = (near(-ds)?, near(0.0)?, near(ds)?);
                    let d1 = (fp - fm) / (2.0 * ds);
                    let d2 = (fp - 2.0 * f0 + fm) / (ds * ds);
                    Some(d2 / (1.0 + d1 * d1).powf(1.5))
                })
            };
            out.push(CurvatureSample {
                curve: curve_id,
                element: e,
                s: frac * len,
                kappa,
                kappa_fd,
                delta_s: ds,
                defined: true,
            });
        }
    }
    Ok(out)
}

/// Summary of the one-sided slope checks on one curve.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BvReport {
    pub windows: usize,
    pub pairs: usize,
    /// Smallest `D+f(s+h) - D+f(s) + q h + tol`; non-negative when the
    /// bound holds.
    pub min_margin: f64,
    pub chain_pairs: usize,
    pub chain_min_margin: f64,
    pub tv_ok: bool,
    /// Largest increase of `D+f` between neighbouring samples.
    pub max_step_increase: f64,
    /// Windows that pass a vertex of the curve.
    pub crossing_windows: usize,
}

/// One sampled window of a local graph representation along a curve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BvWindow {
    pub s: Vec<f64>,
    pub f: Vec<f64>,
    /// Forward difference quotients on consecutive samples.
    pub slopes: Vec<f64>,
    /// Contributor offsets at the midpoints of consecutive samples.
    pub offsets: Vec<f64>,
    pub crosses_vertex: bool,
}

/// Windows along `curve`: forward from each vertex, backward into each
/// vertex, and both ways from interior points of every element.
pub fn curve_windows(scene: &GeneratorScene, g: &BoundaryGraph, curve: &JordanCurve, n: usize) -> Result<Vec<BvWindow>> {
    let eps = g.epsilon;
    let elems: Vec<usize> = curve.elements().collect();
    let m = elems.len();
    let mut out = Vec::new();
    for i in 0..m {
        let e = elems[i];
        let el = &g.elements[e];
        let mut bases: Vec<(f64, bool)> = (0..4).flat_map(|k| {
            let f = (k as f64 + 0.5) / 4.0;
            [(f, false), (f, true)]
        }).collect();
        if el.start.is_some() {
            bases.push((0.0, false));
            bases.push((1.0, true));
        }
        for (frac, back) in bases {
            let steps: Vec<(usize, bool)> = if back {
                (0..m).map(|k| (elems[(i + m - k) % m], true)).collect()
            } else {
                (0..m).map(|k| (elems[(i + k) % m], false)).collect()
            };
            let chain = Chain { steps, start: if back { 1.0 - frac } else { frac } };
            let x = el.support.point_at(frac);
            let t = el.support.tangent_at(frac);
            let xi = if back { -t } else { t };
            let y = el.contributor_point(x, eps);
            let Some(nu) = (x - y).direction() else { continue };
            let frame = Frame { x, xi, nu };
            let s_max = chain_reach(g, &chain, &frame, y);
            if s_max < 1e-3 * eps {
                continue;
            }
            let ds = s_max / (n - 1) as f64;
            let s: Vec<f64> = (0..n).map(|k| ds * k as f64).collect();
            let mids: Vec<f64> = (0..n - 1).map(|k| ds * (k as f64 + 0.5)).collect();
            let f = chain_values(g, &chain, &frame, &s)?;
            let fm = chain_values(g, &chain, &frame, &mids)?;
            let slopes: Vec<f64> = f.windows(2).map(|w| (w[1] - w[0]) / ds).collect();
            let offsets: Vec<f64> = mids
                .iter()
                .zip(&fm)
                .map(|(&sm, &fv)| {
                    let p = frame.point(sm, fv);
                    let yp = scene
                        .generators()
                        .iter()
                        .map(|gen| gen.shape.closest_point(p))
                        .min_by(|a, b| a.dist(p).total_cmp(&b.dist(p)))
                        .expect("non-empty scene");
                    (p - yp).dot(xi.vec())
                })
                .collect();
            let end = frame.point(s_max, *f.last().unwrap());
            let crosses_vertex = el.support.project(end).1 > 1e-6 * eps;
            out.push(BvWindow { s, f, slopes, offsets, crosses_vertex });
        }
    }
    Ok(out)
}

/// Checks `D+f(s+h) - D+f(s) >= -q h - 10 ds` on every window of `curve`,
/// the intermediate bound through `p`, and the total-variation bound.
pub fn bv_check(scene: &GeneratorScene, g: &BoundaryGraph, curve: &JordanCurve, n: usize) -> Result<BvReport> {
    if n < 3 {
        return Err(Error::Domain("bounded-variation windows need at least 3 samples".into()));
    }
    let eps = g.epsilon;
    let q = q_bound(eps);
    let p = SlopeFn::new(eps)?;
    let windows = curve_windows(scene, g, curve, n)?;
    let mut r = BvReport {
        windows: windows.len(),
        min_margin: f64::INFINITY,
        chain_min_margin: f64::INFINITY,
        tv_ok: true,
        ..Default::default()
    };
    for w in &windows {
        let ds = w.s[1] - w.s[0];
        let tol = 10.0 * ds;
        if w.crosses_vertex {
            r.crossing_windows += 1;
        }
        let d = &w.slopes;
        for k in 0..d.len() {
            if k + 1 < d.len() {
                r.max_step_increase = r.max_step_increase.max(d[k + 1] - d[k]);
            }
            for j in (k + 1)..d.len() {
                let h = (j - k) as f64 * ds;
                let lhs = d[j] - d[k];
                let margin = lhs + q * h + tol;
                r.pairs += 1;
                r.min_margin = r.min_margin.min(margin);
                if margin < 0.0 {
                    return Err(Error::InequalityViolation { s: w.s[k], h, lhs, rhs: -q * h - tol });
                }
                let a = w.offsets[k];
                if (a + h).abs() < eps && a.abs() <= 0.5 * eps && (a + h).abs() <= 0.5 * eps {
                    let via_p = slope_p(&p, a + h)? - slope_p(&p, a)?;
                    let m1 = lhs - via_p + tol;
                    let m2 = via_p + q * h + tol;
                    r.chain_pairs += 1;
                    r.chain_min_margin = r.chain_min_margin.min(m1.min(m2));
                    if m1 < 0.0 || m2 < 0.0 {
                        return Err(Error::InequalityViolation { s: w.s[k], h, lhs, rhs: via_p - tol });
                    }
                }
            }
        }
        let tv: f64 = d.windows(2).map(|x| (x[1] - x[0]).abs()).sum();
        let sup = d.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let inf = d.iter().copied().fold(f64::INFINITY, f64::min);
        let span = ds * (d.len() - 1) as f64;
        if tv > (sup - inf) + 2.0 * q * span + tol {
            r.tv_ok = false;
        }
    }
    Ok(r)
}
