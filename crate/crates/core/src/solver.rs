//! Certified minimization of strongly convex objectives over a feasible set.
//!
//! Objectives have the form
//!
//! ```text
//! F(w) = (a/2)‖w‖² + bᵀw + c + κ·H(w) + λ₁‖w‖₁ + Σ_j c_j·max(0, θ_j − g_jᵀw)
//! ```
//!
//! where `H` is the shifted negative entropy. Every update rule and hindsight
//! problem in the crate reduces to this shape.
//!
//! Three paths are used:
//! * closed forms when there are no hinge terms and only one of `a`, `κ` is
//!   nonzero (a prox of the ℓ1 term, or a softmax);
//! * proximal gradient with backtracking otherwise, certified by an explicit
//!   subgradient `v ∈ ∂F(x)` through `F(x) − F* ≤ ‖v‖²/(2μ)`;
//! * accelerated projected ascent on the box-constrained dual when hinge
//!   terms are present, certified by the duality gap.

use serde::{Deserialize, Serialize};

use crate::error::{config, Error, Result};
use crate::geometry::{dot, norm2_sq, FeasibleSet, Point, Regularizer, ENTROPY_FLOOR};

/// Target used by [`solve_exact`]; the stand-in for an exact argmin.
pub const EXACT_DELTA: f64 = 1e-10;
pub const MAX_ITERS: usize = 100_000;
pub const DELTA_FLOOR: f64 = 1e-12;

/// One weighted hinge term `weight·max(0, threshold − gᵀw)`.
#[derive(Clone, Debug, PartialEq)]
pub struct HingeTerm {
    pub weight: f64,
    pub g: Vec<f64>,
    pub threshold: f64,
}

impl HingeTerm {
    pub fn value(&self, w: &[f64]) -> f64 {
        self.weight * (self.threshold - dot(&self.g, w)).max(0.0)
    }
}

/// A strongly convex inner objective, stored as running sums so learners can
/// extend it one loss at a time.
#[derive(Clone, Debug, PartialEq)]
pub struct InnerObjective {
    pub curvature: f64,
    pub linear: Vec<f64>,
    pub constant: f64,
    pub entropy: f64,
    pub l1: f64,
    pub hinges: Vec<HingeTerm>,
}

impl InnerObjective {
    pub fn new(dim: usize) -> Self {
        InnerObjective { curvature: 0.0, linear: vec![0.0; dim], constant: 0.0, entropy: 0.0, l1: 0.0, hinges: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.linear.len()
    }

    /// Strong convexity modulus w.r.t. ℓ2.
    pub fn mu(&self) -> f64 {
        self.curvature + self.entropy
    }

    pub fn add_linear(&mut self, g: &[f64], weight: f64) {
        for (b, gi) in self.linear.iter_mut().zip(g) {
            *b += weight * gi;
        }
    }

    /// Adds `weight·½‖w − center‖²`.
    pub fn add_half_sq_dist(&mut self, center: &[f64], weight: f64) {
        self.curvature += weight;
        self.add_linear(center, -weight);
        self.constant += 0.5 * weight * norm2_sq(center);
    }

    pub fn add_hinge(&mut self, g: &[f64], threshold: f64, weight: f64) {
        self.hinges.push(HingeTerm { weight, g: g.to_vec(), threshold });
    }

    pub fn add_regularizer(&mut self, r: Regularizer, weight: f64) {
        match r {
            Regularizer::HalfSquaredL2 => self.curvature += weight,
            Regularizer::NegativeEntropy => self.entropy += weight,
        }
    }

    /// Adds `weight·D_R(·, y)`.
    pub fn add_bregman(&mut self, r: Regularizer, y: &[f64], weight: f64) {
        match r {
            Regularizer::HalfSquaredL2 => self.add_half_sq_dist(y, weight),
            Regularizer::NegativeEntropy => {
                let grad = r.gradient(y);
                self.entropy += weight;
                self.add_linear(&grad, -weight);
                self.constant += weight * (dot(&grad, y) - r.value(y));
            }
        }
    }

    /// Removes everything except the hinge terms' dependence; used to build
    /// the smooth part of the dual.
    fn without_hinges(&self) -> InnerObjective {
        InnerObjective { hinges: Vec::new(), ..self.clone() }
    }

    fn smooth_value(&self, w: &[f64]) -> f64 {
        let mut v = 0.5 * self.curvature * norm2_sq(w) + dot(&self.linear, w) + self.constant;
        if self.entropy > 0.0 {
            v += self.entropy * Regularizer::NegativeEntropy.value(w);
        }
        v
    }

    fn smooth_gradient(&self, w: &[f64]) -> Vec<f64> {
        w.iter()
            .zip(&self.linear)
            .map(|(wi, bi)| {
                let mut g = self.curvature * wi + bi;
                if self.entropy > 0.0 {
                    g += self.entropy * (wi.max(ENTROPY_FLOOR).ln() + 1.0);
                }
                g
            })
            .collect()
    }

    /// `f(x) − f(y) − ∇f(y)ᵀ(x − y)` of the smooth part, evaluated without
    /// the cancellation of the direct formula.
    fn smooth_bregman(&self, x: &[f64], y: &[f64]) -> f64 {
        let mut d = 0.0;
        let mut kl = 0.0;
        for (xi, yi) in x.iter().zip(y) {
            d += (xi - yi) * (xi - yi);
            if self.entropy > 0.0 {
                let (xi, yi) = (xi.max(ENTROPY_FLOOR), yi.max(ENTROPY_FLOOR));
                let r = (xi - yi) / yi;
                kl += yi * ((1.0 + r) * r.ln_1p() - r);
            }
        }
        0.5 * self.curvature * d + self.entropy * kl
    }

    pub fn value(&self, w: &[f64]) -> f64 {
        let l1: f64 = w.iter().map(|x| x.abs()).sum();
        self.smooth_value(w) + self.l1 * l1 + self.hinges.iter().map(|h| h.value(w)).sum::<f64>()
    }

    fn check(&self, set: &FeasibleSet) -> Result<()> {
        if self.dim() != set.dim() {
            return Err(Error::Dimension { expected: set.dim(), got: self.dim() });
        }
        if self.entropy > 0.0 && !matches!(set, FeasibleSet::Simplex { .. }) {
            return Err(config("entropy terms need a simplex feasible set"));
        }
        if self.l1 > 0.0 && !set.supports_l1() {
            return Err(config("l1 terms over a ball require the ball to be centered at the origin"));
        }
        let finite = self.curvature.is_finite()
            && self.entropy.is_finite()
            && self.l1.is_finite()
            && self.constant.is_finite()
            && self.linear.iter().all(|x| x.is_finite());
        if !finite || self.curvature < 0.0 || self.entropy < 0.0 || self.l1 < 0.0 {
            return Err(Error::Domain("objective has negative or non-finite coefficients".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Certified,
    Truncated,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveCertificate {
    /// Certified bound on `F(w) − min F`.
    pub suboptimality: f64,
    pub iterations: usize,
    pub status: SolveStatus,
    pub closed_form: bool,
    /// Strong convexity modulus (ℓ2) of the solved objective.
    pub mu: f64,
}

impl SolveCertificate {
    pub fn exact(mu: f64) -> Self {
        SolveCertificate { suboptimality: 0.0, iterations: 0, status: SolveStatus::Certified, closed_form: true, mu }
    }

    /// ℓ2 radius around the true minimizer that contains the returned point.
    pub fn distance_radius(&self) -> f64 {
        if self.suboptimality == 0.0 {
            0.0
        } else if self.mu > 0.0 {
            (2.0 * self.suboptimality / self.mu).sqrt()
        } else {
            f64::INFINITY
        }
    }
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub max_iters: usize,
    pub allow_closed_form: bool,
    /// Lower bound on the proximal-gradient smoothness estimate, as a multiple
    /// of the objective's curvature. Values above 1 slow the contraction so
    /// that loose targets yield genuinely inexact points.
    pub damping: f64,
    pub delta_floor: f64,
    pub dual_warm_start: Option<Vec<f64>>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { max_iters: MAX_ITERS, allow_closed_form: true, damping: 1.0, delta_floor: DELTA_FLOOR, dual_warm_start: None }
    }
}

#[derive(Clone, Debug)]
pub struct Solution {
    pub point: Point,
    pub certificate: SolveCertificate,
    /// Final dual multipliers when hinge terms were present.
    pub dual: Option<Vec<f64>>,
}

pub fn solve_exact(set: &FeasibleSet, obj: &InnerObjective, warm_start: &Point) -> Result<Solution> {
    solve(set, obj, EXACT_DELTA, warm_start, &SolveOptions::default())
}

/// Returns a point whose certified suboptimality is at most `target_delta`,
/// or the best point found with status `Truncated`.
pub fn solve(
    set: &FeasibleSet,
    obj: &InnerObjective,
    target_delta: f64,
    warm_start: &Point,
    opts: &SolveOptions,
) -> Result<Solution> {
    obj.check(set)?;
    warm_start.check_dim(set.dim())?;
    if !(target_delta > 0.0) {
        return Err(config(format!("target delta must be positive, got {target_delta}")));
    }
    let mu = obj.mu();
    if !(mu > 0.0) {
        return Err(Error::Domain("inner objective is not strongly convex".into()));
    }
    let target = target_delta.max(opts.delta_floor);
    if !obj.hinges.is_empty() {
        return dual_ascent(set, obj, target, warm_start, opts);
    }
    if opts.allow_closed_form {
        if let Some(w) = closed_form(set, obj)? {
            return Ok(Solution { point: w, certificate: SolveCertificate::exact(mu), dual: None });
        }
    }
    proximal_gradient(set, obj, target, warm_start, opts)
}

/// Minimizer of the hinge-free part, when one exists in closed form.
fn closed_form(set: &FeasibleSet, obj: &InnerObjective) -> Result<Option<Point>> {
    debug_assert!(obj.hinges.is_empty());
    if obj.entropy == 0.0 && obj.curvature > 0.0 {
        let a = obj.curvature;
        let x: Vec<f64> = obj.linear.iter().map(|b| -b / a).collect();
        return set.prox_l1(&x, obj.l1 / a).map(Some);
    }
    if obj.curvature == 0.0 && obj.entropy > 0.0 {
        return Ok(Some(softmax(&obj.linear, obj.entropy)));
    }
    if obj.curvature == 0.0 && obj.entropy == 0.0 {
        return set.minimize_linear(&obj.linear, obj.l1).map(Some);
    }
    Ok(None)
}

/// `argmin_Δ bᵀw + κ·H(w)`, i.e. `w ∝ exp(−b/κ)`.
pub(crate) fn softmax(b: &[f64], kappa: f64) -> Point {
    let m = b.iter().fold(f64::INFINITY, |m, x| m.min(*x));
    let e: Vec<f64> = b.iter().map(|x| (-(x - m) / kappa).exp()).collect();
    let s: f64 = e.iter().sum();
    Point::from_vec(e.into_iter().map(|x| x / s).collect())
}

fn proximal_gradient(
    set: &FeasibleSet,
    obj: &InnerObjective,
    target: f64,
    warm_start: &Point,
    opts: &SolveOptions,
) -> Result<Solution> {
    let mu = obj.mu();
    let entropic = obj.entropy > 0.0;
    let prox = |x: &[f64], thresh: f64| -> Result<Vec<f64>> {
        if entropic {
            // ‖w‖₁ is constant on the simplex.
            Ok(FeasibleSet::project_floored_simplex(x, ENTROPY_FLOOR))
        } else {
            set.prox_l1(x, thresh).map(Point::into_vec)
        }
    };
    let mut y = prox(warm_start, 0.0)?;
    let lambda_min = opts.damping.max(1.0) * mu;
    let mut lambda = lambda_min;
    let mut gy = obj.smooth_gradient(&y);
    let mut last = f64::INFINITY;
    for k in 1..=opts.max_iters {
        let x = loop {
            let step: Vec<f64> = y.iter().zip(&gy).map(|(yi, gi)| yi - gi / lambda).collect();
            let x = prox(&step, obj.l1 / lambda)?;
            let diff: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a - b).collect();
            if obj.smooth_bregman(&x, &y) <= 0.5 * lambda * norm2_sq(&diff) * (1.0 + 1e-12) || lambda > 1e30 {
                break x;
            }
            lambda *= 2.0;
        };
        let gx = obj.smooth_gradient(&x);
        let v: Vec<f64> = (0..x.len()).map(|i| lambda * (y[i] - x[i]) + gx[i] - gy[i]).collect();
        last = norm2_sq(&v) / (2.0 * mu);
        if last <= target {
            return Ok(Solution {
                point: Point::from_vec(x),
                certificate: SolveCertificate {
                    suboptimality: last,
                    iterations: k,
                    status: SolveStatus::Certified,
                    closed_form: false,
                    mu,
                },
                dual: None,
            });
        }
        y = x;
        gy = gx;
        lambda = (lambda * 0.5).max(lambda_min);
    }
    Ok(Solution {
        point: Point::from_vec(y),
        certificate: SolveCertificate {
            suboptimality: last,
            iterations: opts.max_iters,
            status: SolveStatus::Truncated,
            closed_form: false,
            mu,
        },
        dual: None,
    })
}

/// Precomputed hinge data for the dual problem.
struct HingeDual<'a> {
    set: &'a FeasibleSet,
    base: InnerObjective,
    g: Vec<f64>,
    theta: Vec<f64>,
    caps: Vec<f64>,
    dim: usize,
}

impl<'a> HingeDual<'a> {
    fn new(set: &'a FeasibleSet, obj: &InnerObjective) -> Self {
        let dim = obj.dim();
        let mut g = Vec::with_capacity(obj.hinges.len() * dim);
        for h in &obj.hinges {
            g.extend_from_slice(&h.g);
        }
        HingeDual {
            set,
            base: obj.without_hinges(),
            g,
            theta: obj.hinges.iter().map(|h| h.threshold).collect(),
            caps: obj.hinges.iter().map(|h| h.weight).collect(),
            dim,
        }
    }

    fn m(&self) -> usize {
        self.theta.len()
    }

    fn row(&self, j: usize) -> &[f64] {
        &self.g[j * self.dim..(j + 1) * self.dim]
    }

    /// Linear coefficient `b − Σ λ_j g_j` of the Lagrangian.
    fn shifted_linear(&self, lam: &[f64]) -> Vec<f64> {
        let mut b = self.base.linear.clone();
        for (j, l) in lam.iter().enumerate() {
            if *l != 0.0 {
                for (bi, gi) in b.iter_mut().zip(self.row(j)) {
                    *bi -= l * gi;
                }
            }
        }
        b
    }

    /// Minimizer of the Lagrangian and the dual value at `lam`.
    fn inner(&self, lam: &[f64]) -> Result<(Point, f64)> {
        let mut obj = self.base.clone();
        obj.linear = self.shifted_linear(lam);
        let w = closed_form(self.set, &obj)?
            .ok_or_else(|| config("hinge terms need exactly one of curvature or entropy"))?;
        let q = obj.value(&w) + dot(lam, &self.theta);
        Ok((w, q))
    }

    /// `θ_j − g_jᵀw` for every hinge.
    fn margins(&self, w: &[f64]) -> Vec<f64> {
        (0..self.m()).map(|j| self.theta[j] - dot(self.row(j), w)).collect()
    }

    fn primal_value(&self, w: &[f64], margins: &[f64]) -> f64 {
        let l1: f64 = w.iter().map(|x| x.abs()).sum();
        let hinge: f64 = margins.iter().zip(&self.caps).map(|(mj, c)| c * mj.max(0.0)).sum();
        self.base.smooth_value(w) + self.base.l1 * l1 + hinge
    }

    /// Upper bound on the Lipschitz constant of the dual gradient.
    fn dual_smoothness(&self) -> f64 {
        let d = self.dim;
        let mut gram = vec![0.0; d * d];
        let mut frob = 0.0;
        for j in 0..self.m() {
            let r = self.row(j);
            frob += norm2_sq(r);
            for a in 0..d {
                for b in 0..d {
                    gram[a * d + b] += r[a] * r[b];
                }
            }
        }
        let mut v = vec![1.0 / (d as f64).sqrt(); d];
        let mut est = 0.0;
        for _ in 0..100 {
            let mut u = vec![0.0; d];
            for a in 0..d {
                for b in 0..d {
                    u[a] += gram[a * d + b] * v[b];
                }
            }
            est = norm2_sq(&u).sqrt();
            if est == 0.0 {
                break;
            }
            v = u.into_iter().map(|x| x / est).collect();
        }
        (1.1 * est).min(frob).max(1e-300) / self.base.mu()
    }
}

fn dual_ascent(
    set: &FeasibleSet,
    obj: &InnerObjective,
    target: f64,
    warm_start: &Point,
    opts: &SolveOptions,
) -> Result<Solution> {
    let mu = obj.mu();
    let hd = HingeDual::new(set, obj);
    let m = hd.m();
    let step = 1.0 / hd.dual_smoothness();
    let clamp = |lam: &mut Vec<f64>| {
        for (l, c) in lam.iter_mut().zip(&hd.caps) {
            *l = l.clamp(0.0, *c);
        }
    };

    let mut lam: Vec<f64> = opts.dual_warm_start.clone().unwrap_or_default();
    lam.resize(m, 0.0);
    clamp(&mut lam);

    // The warm start seeds the primal incumbent so refinement never worsens it.
    let mut best_w = warm_start.clone();
    let mut best_f = if set.contains(warm_start, 0.0) {
        hd.primal_value(warm_start, &hd.margins(warm_start))
    } else {
        f64::INFINITY
    };
    let mut best_q = f64::NEG_INFINITY;
    let mut best_lam = lam.clone();

    let gap_of = |f: f64, q: f64| f - q + 64.0 * f64::EPSILON * (1.0 + f.abs() + q.abs());

    let mut prev = lam.clone();
    let mut t_mom = 1.0_f64;
    let mut q_prev = f64::NEG_INFINITY;
    let mut last_gap = f64::INFINITY;
    for k in 1..=opts.max_iters {
        let beta = {
            let t_next = 0.5 * (1.0 + (1.0 + 4.0 * t_mom * t_mom).sqrt());
            let b = (t_mom - 1.0) / t_next;
            t_mom = t_next;
            b
        };
        let y: Vec<f64> = lam.iter().zip(&prev).map(|(l, p)| l + beta * (l - p)).collect();
        let (wy, _) = hd.inner(&y)?;
        let margins = hd.margins(&wy);
        let fy = hd.primal_value(&wy, &margins);
        if fy < best_f {
            best_f = fy;
            best_w = wy;
        }
        prev = std::mem::replace(&mut lam, y.iter().zip(&margins).map(|(yj, gj)| yj + step * gj).collect());
        clamp(&mut lam);

        if k % 4 == 1 || k == opts.max_iters {
            let (wl, ql) = hd.inner(&lam)?;
            let fl = hd.primal_value(&wl, &hd.margins(&wl));
            if fl < best_f {
                best_f = fl;
                best_w = wl;
            }
            if ql > best_q {
                best_q = ql;
                best_lam = lam.clone();
            }
            if ql < q_prev {
                // Adaptive restart of the momentum.
                t_mom = 1.0;
                prev = lam.clone();
            }
            q_prev = ql;
            last_gap = gap_of(best_f, best_q);
            if last_gap <= target {
                return Ok(Solution {
                    point: best_w,
                    certificate: SolveCertificate {
                        suboptimality: last_gap,
                        iterations: k,
                        status: SolveStatus::Certified,
                        closed_form: false,
                        mu,
                    },
                    dual: Some(best_lam),
                });
            }
        }
    }
    Ok(Solution {
        point: best_w,
        certificate: SolveCertificate {
            suboptimality: last_gap,
            iterations: opts.max_iters,
            status: SolveStatus::Truncated,
            closed_form: false,
            mu,
        },
        dual: Some(best_lam),
    })
}

/// Minimizes an objective that may lack strong convexity (a hindsight
/// problem), returning the point and a certified suboptimality bound.
///
/// Without hinge terms this is a closed form. With hinges and no curvature,
/// proximal-point continuation is used and certified by the linear-program
/// dual bound `λᵀθ + c + min_C (b − Σλg)ᵀw + λ₁‖w‖₁`.
pub fn minimize_certified(
    set: &FeasibleSet,
    obj: &InnerObjective,
    target: f64,
    max_outer: usize,
) -> Result<Solution> {
    obj.check(set)?;
    if obj.entropy > 0.0 {
        return Err(config("hindsight objectives do not carry entropy terms"));
    }
    let origin = set.project(&vec![0.0; set.dim()])?;
    if obj.hinges.is_empty() {
        let w = closed_form(set, obj)?.expect("closed form exists without entropy");
        return Ok(Solution { point: w, certificate: SolveCertificate::exact(obj.mu()), dual: None });
    }
    if obj.curvature > 0.0 {
        return solve(set, obj, target, &origin, &SolveOptions::default());
    }

    let hd = HingeDual::new(set, obj);
    let diam = set.diameter().max(1e-12);
    let gnorm = {
        let mut s = 0.0;
        for j in 0..hd.m() {
            s += hd.caps[j] * norm2_sq(hd.row(j)).sqrt();
        }
        s
    };
    let rho = (gnorm / diam).max(1e-6);
    let lower_bound = |lam: &[f64]| -> Result<f64> {
        let b = hd.shifted_linear(lam);
        let w = set.minimize_linear(&b, obj.l1)?;
        let l1: f64 = w.iter().map(|x| x.abs()).sum();
        Ok(dot(&b, &w) + obj.l1 * l1 + obj.constant + dot(lam, &hd.theta))
    };

    let mut center = origin.clone();
    let mut best_w = origin.clone();
    let mut best_f = obj.value(&origin);
    let mut best_lb = f64::NEG_INFINITY;
    let mut lam: Option<Vec<f64>> = None;
    let mut iterations = 0;
    let mut gap = f64::INFINITY;
    for _ in 0..max_outer {
        let mut sub = obj.clone();
        sub.add_half_sq_dist(&center, rho);
        let opts = SolveOptions { dual_warm_start: lam.clone(), max_iters: 20_000, ..SolveOptions::default() };
        let inner_target = (0.01 * target).max(1e-14);
        let sol = solve(set, &sub, inner_target, &center, &opts)?;
        iterations += sol.certificate.iterations;
        let f = obj.value(&sol.point);
        if f < best_f {
            best_f = f;
            best_w = sol.point.clone();
        }
        if let Some(l) = &sol.dual {
            best_lb = best_lb.max(lower_bound(l)?);
        }
        gap = best_f - best_lb + 64.0 * f64::EPSILON * (1.0 + best_f.abs() + best_lb.abs());
        if gap <= target {
            return Ok(Solution {
                point: best_w,
                certificate: SolveCertificate {
                    suboptimality: gap,
                    iterations,
                    status: SolveStatus::Certified,
                    closed_form: false,
                    mu: 0.0,
                },
                dual: lam,
            });
        }
        center = sol.point;
        lam = sol.dual;
    }
    Ok(Solution {
        point: best_w,
        certificate: SolveCertificate {
            suboptimality: gap,
            iterations,
            status: SolveStatus::Truncated,
            closed_form: false,
            mu: 0.0,
        },
        dual: lam,
    })
}
