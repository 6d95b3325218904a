//! Regret, forward regret and stability of a trajectory, and the verdicts of
//! the closed-form bounds against them.
//!
//! Bounds are checked with slack derived from the solver certificates: a
//! certificate `δ̂` with modulus `μ` places the returned point within
//! `√(2δ̂/μ)` (ℓ2) of the exact update.

use serde::{Deserialize, Serialize};

use crate::algorithms::{bound_lipschitz, bound_strong_convexity, LearnerInfo, LearnerKind, Regime, Schedule};
use crate::error::{config, Error, Result};
use crate::geometry::{dot, FeasibleSet, Norm, Point};
use crate::losses::{hindsight_optimum_tolerant, CompositePart, Hindsight, Loss};
use crate::solver::SolveCertificate;

/// Absolute tolerance in every pass rule.
pub const PASS_TOLERANCE: f64 = 1e-8;

/// Exponent tolerance of slope-fit verdicts.
pub const SLOPE_TOLERANCE: f64 = 0.1;

/// The record of one run: `w_1..w_{T+1}`, the losses, and the certificate of
/// every computed point.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub learner: String,
    pub info: Option<LearnerInfo>,
    pub seed: u64,
    pub set: FeasibleSet,
    /// Norm of stability and Lipschitz statements.
    pub norm: Norm,
    /// `w_1, …, w_{T+1}`; empty when `T = 0`.
    pub points: Vec<Point>,
    pub losses: Vec<Loss>,
    pub composite: CompositePart,
    /// `certificates[t]` certifies `points[t + 1]`.
    pub certificates: Vec<SolveCertificate>,
    pub etas: Vec<Option<f64>>,
    pub lipschitz: f64,
    pub composite_lipschitz: f64,
    pub strong_convexity: f64,
    pub hindsight: Option<Hindsight>,
    /// The inner learner's run for batched learners.
    pub inner: Option<Box<Trajectory>>,
    /// Number of full blocks the inner learner saw.
    pub inner_full_blocks: usize,
}

impl Trajectory {
    pub fn horizon(&self) -> usize {
        self.losses.len()
    }

    pub fn dim(&self) -> usize {
        self.set.dim()
    }

    /// Lipschitz constant of `ℓ_t + r`.
    pub fn total_lipschitz(&self) -> f64 {
        self.lipschitz + self.composite_lipschitz
    }

    pub fn with_hindsight(mut self, h: Hindsight) -> Self {
        self.hindsight = Some(h);
        self
    }

    /// `(ℓ_t + r)(w)` for one-based `t`.
    pub fn round_value(&self, t: usize, w: &[f64]) -> f64 {
        self.losses[t - 1].value(w) + self.composite.value(w)
    }

    fn hindsight_ref(&self) -> Result<&Hindsight> {
        self.hindsight.as_ref().ok_or(Error::MissingHindsight)
    }

    /// Distance radius of every point in the stability norm; `w_1` is exact.
    pub fn point_radii(&self) -> Vec<f64> {
        let factor = match self.norm {
            Norm::L1 => (self.dim() as f64).sqrt(),
            Norm::L2 | Norm::LInf => 1.0,
        };
        if self.points.is_empty() {
            return Vec::new();
        }
        std::iter::once(0.0).chain(self.certificates.iter().map(|c| factor * c.distance_radius())).collect()
    }

    fn info(&self) -> Result<&LearnerInfo> {
        self.info.as_ref().ok_or_else(|| config("trajectory carries no learner configuration"))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsReport {
    pub regret: f64,
    pub forward_regret: f64,
    pub stability: f64,
    pub uniform_stability_series: Vec<f64>,
    pub hindsight_value: f64,
    pub hindsight_slack: f64,
    /// `Σ_t` of the distance radii of all computed points.
    pub certificate_slack: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundVerdict {
    pub bound_name: String,
    pub theoretical_value: f64,
    pub empirical_value: f64,
    pub slack_applied: f64,
    pub pass: bool,
    /// Round at which a per-step bound is tightest.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub worst_step: Option<usize>,
}

impl BoundVerdict {
    pub fn new(name: impl Into<String>, theoretical: f64, empirical: f64, slack: f64) -> Self {
        let pass = empirical <= theoretical + slack + PASS_TOLERANCE;
        BoundVerdict {
            bound_name: name.into(),
            theoretical_value: theoretical,
            empirical_value: empirical,
            slack_applied: slack,
            pass,
            worst_step: None,
        }
    }
}

/// `Σ_t [(ℓ_t + r)(w_t) − (ℓ_t + r)(w*)]`.
pub fn regret(traj: &Trajectory) -> Result<f64> {
    let h = traj.hindsight_ref()?;
    let played: f64 = (1..=traj.horizon()).map(|t| traj.round_value(t, &traj.points[t - 1])).sum();
    Ok(played - h.value)
}

/// `Σ_t [(ℓ_t + r)(w_{t+1}) − (ℓ_t + r)(w*)]`.
pub fn forward_regret(traj: &Trajectory) -> Result<f64> {
    let h = traj.hindsight_ref()?;
    let ahead: f64 = (1..=traj.horizon()).map(|t| traj.round_value(t, &traj.points[t])).sum();
    Ok(ahead - h.value)
}

/// `‖w_t − w_{t+1}‖` for `t = 1..T`.
pub fn uniform_stability(traj: &Trajectory) -> Vec<f64> {
    traj.points.windows(2).map(|w| traj.norm.of_diff(&w[0], &w[1])).collect()
}

pub fn stability(traj: &Trajectory) -> f64 {
    uniform_stability(traj).iter().sum()
}

pub fn diagnostics(traj: &Trajectory) -> Result<DiagnosticsReport> {
    let h = traj.hindsight_ref()?;
    let series = uniform_stability(traj);
    Ok(DiagnosticsReport {
        regret: regret(traj)?,
        forward_regret: forward_regret(traj)?,
        stability: series.iter().sum(),
        uniform_stability_series: series,
        hindsight_value: h.value,
        hindsight_slack: h.slack,
        certificate_slack: traj.point_radii().iter().sum(),
    })
}

/// Both inequalities linking regret and forward regret through stability.
/// They hold pathwise, so no slack is applied.
pub fn check_equivalence(report: &DiagnosticsReport, lipschitz: f64) -> [BoundVerdict; 2] {
    let ls = lipschitz * report.stability;
    [
        BoundVerdict::new("equivalence_regret", ls + report.forward_regret, report.regret, 0.0),
        BoundVerdict::new("equivalence_forward_regret", ls + report.regret, report.forward_regret, 0.0),
    ]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundName {
    Regret,
    ForwardRegret,
    Stability,
    UniformStability,
    BatchRegret,
    BatchStability,
}

impl BoundName {
    pub fn name(self) -> &'static str {
        match self {
            BoundName::Regret => "regret",
            BoundName::ForwardRegret => "forward_regret",
            BoundName::Stability => "stability",
            BoundName::UniformStability => "uniform_stability",
            BoundName::BatchRegret => "batch_regret",
            BoundName::BatchStability => "batch_stability",
        }
    }
}

/// The bounds with a closed form for a learner configuration.
pub fn applicable_bounds(info: &LearnerInfo) -> Vec<BoundName> {
    use BoundName::*;
    if info.block.is_some() {
        return vec![BatchRegret, BatchStability];
    }
    match info.kind {
        LearnerKind::Ftl | LearnerKind::Ftrl | LearnerKind::Rda => vec![Regret, ForwardRegret, Stability, UniformStability],
        LearnerKind::Iol => vec![Regret, Stability, UniformStability],
        LearnerKind::Comid | LearnerKind::Md => vec![Regret, Stability],
    }
}

/// Constants entering the closed forms.
struct Constants {
    t: f64,
    l: f64,
    alpha: f64,
    d: f64,
    r_star: f64,
}

fn constants(traj: &Trajectory, info: &LearnerInfo) -> Result<Constants> {
    let norm_factor = match traj.norm {
        // ‖x‖₂² ≥ ‖x‖₁²/d.
        Norm::L1 => 1.0 / traj.dim() as f64,
        Norm::L2 | Norm::LInf => 1.0,
    };
    let h = traj.hindsight_ref()?;
    Ok(Constants {
        t: traj.horizon() as f64,
        l: bound_lipschitz(info.kind, traj.lipschitz, traj.composite_lipschitz),
        alpha: norm_factor * bound_strong_convexity(info.kind, traj.strong_convexity, &traj.composite),
        d: traj.set.diameter_in(traj.norm),
        r_star: info.regularizer.value(&h.point),
    })
}

fn log_term(t: f64) -> f64 {
    if t >= 1.0 {
        1.0 + t.ln()
    } else {
        0.0
    }
}

fn eta_sum(traj: &Trajectory) -> f64 {
    traj.etas.iter().map(|e| e.unwrap_or(0.0)).sum()
}

/// `√(sup_C h)`, the smallest `D` with `0 ≤ h ≤ D²` on `C`.
fn rda_d(traj: &Trajectory, info: &LearnerInfo) -> Result<f64> {
    Ok(info.regularizer.sup_value(&traj.set)?.sqrt())
}

fn regime_error(info: &LearnerInfo, what: &str) -> Error {
    config(format!("{}: no closed-form {what} bound for this configuration", info.label()))
}

/// Theoretical value of a cumulative bound at the trajectory's horizon.
pub fn theoretical_value(traj: &Trajectory, bound: BoundName) -> Result<f64> {
    let info = traj.info()?;
    if traj.horizon() == 0 {
        return Ok(0.0);
    }
    let c = constants(traj, info)?;
    let (t, l, a, d) = (c.t, c.l, c.alpha, c.d);
    let rda_beta = info.beta.unwrap_or(Schedule::Zero);
    Ok(match (bound, info.kind) {
        (BoundName::Regret, LearnerKind::Ftl) => 2.0 * l * l / a * log_term(t),
        (BoundName::Stability, LearnerKind::Ftl) => 2.0 * l / a * log_term(t),
        (BoundName::ForwardRegret, LearnerKind::Ftl) => 0.0,
        (BoundName::Regret, LearnerKind::Ftrl) => {
            let g = info.regularizer.dual_norm_grad_bound(&traj.set)?;
            2.0 * l * (g * d).sqrt() * t.sqrt()
        }
        (BoundName::Stability, LearnerKind::Ftrl) => l * ftrl_eta(info)? * t,
        (BoundName::ForwardRegret, LearnerKind::Ftrl) => {
            let g = info.regularizer.dual_norm_grad_bound(&traj.set)?;
            g * d / ftrl_eta(info)?
        }
        (BoundName::Regret, LearnerKind::Iol) => match info.regime {
            Regime::General => 2.0 * l * (2.0 * c.r_star).sqrt() * t.sqrt(),
            Regime::StronglyConvex => 2.0 * l * l / a * log_term(t) + a * c.r_star,
        },
        (BoundName::Regret, LearnerKind::Comid) => match info.regime {
            Regime::General => l * (2.0 * c.r_star).sqrt() * t.sqrt(),
            Regime::StronglyConvex => 2.0 * l * l / a * log_term(t) + a * c.r_star,
        },
        (BoundName::Regret, LearnerKind::Md) => match info.regime {
            Regime::General => l * (2.0 * c.r_star).sqrt() * t.sqrt(),
            Regime::StronglyConvex => return Err(regime_error(info, "regret")),
        },
        (BoundName::Stability, LearnerKind::Iol | LearnerKind::Comid | LearnerKind::Md) => 2.0 * l * eta_sum(traj),
        (bound, LearnerKind::Rda) => {
            let alpha_r = match traj.norm {
                Norm::L1 => traj.composite.strong_convexity() / traj.dim() as f64,
                _ => traj.composite.strong_convexity(),
            };
            match (bound, rda_beta) {
                (BoundName::Regret, Schedule::Zero) => 2.0 * l * l / alpha_r * log_term(t),
                (BoundName::Stability, Schedule::Zero) => 2.0 * l / alpha_r * log_term(t),
                (BoundName::ForwardRegret, Schedule::Zero) => 0.0,
                (BoundName::Regret, Schedule::SqrtT) => {
                    let dh = rda_d(traj, info)?;
                    (dh * dh + l * (2.0 * l + dh)) * t.sqrt()
                }
                (BoundName::Stability, Schedule::SqrtT) => (2.0 * l + rda_d(traj, info)?) * t.sqrt(),
                (BoundName::ForwardRegret, Schedule::SqrtT) => {
                    let dh = rda_d(traj, info)?;
                    t.sqrt() * dh * dh
                }
                _ => return Err(regime_error(info, bound.name())),
            }
        }
        (bound, _) => return Err(regime_error(info, bound.name())),
    })
}

fn ftrl_eta(info: &LearnerInfo) -> Result<f64> {
    match info.eta {
        Some(e) if e.is_constant() => Ok(e.at(1, info.horizon)),
        _ => Err(config("ftrl bounds need a constant step size")),
    }
}

/// Per-step stability bound for round `t` (one-based), if one applies.
pub fn uniform_bound_at(traj: &Trajectory, t: usize) -> Result<Option<f64>> {
    let info = traj.info()?;
    let c = constants(traj, info)?;
    let tf = t as f64;
    Ok(match info.kind {
        LearnerKind::Ftl => Some(c.l / ((tf - 0.5) * c.alpha)),
        LearnerKind::Ftrl => Some(c.l * ftrl_eta(info)?),
        LearnerKind::Iol => Some(2.0 * c.l * traj.etas[t - 1].ok_or_else(|| config("iol step size missing"))?),
        LearnerKind::Rda => match info.beta.unwrap_or(Schedule::Zero) {
            Schedule::Zero => {
                let alpha_r = match traj.norm {
                    Norm::L1 => traj.composite.strong_convexity() / traj.dim() as f64,
                    _ => traj.composite.strong_convexity(),
                };
                Some(2.0 * c.l / (alpha_r * tf))
            }
            Schedule::SqrtT if t >= 2 => Some((2.0 * c.l + rda_d(traj, info)?) / (tf - 1.0).sqrt()),
            _ => None,
        },
        LearnerKind::Comid | LearnerKind::Md => return Err(regime_error(info, "per-step stability")),
    })
}

/// Linearized forward regret `Σ_t gᵀ(w_{t+1} − w*) + r(w_{t+1}) − r(w*)`
/// with `g_t ∈ ∂ℓ_t(w_t)`, the quantity bounded for dual averaging.
pub fn linearized_forward_regret(traj: &Trajectory) -> Result<f64> {
    let h = traj.hindsight_ref()?;
    let mut s = 0.0;
    for t in 1..=traj.horizon() {
        let g = traj.losses[t - 1].subgradient(&traj.points[t - 1]);
        let diff = traj.points[t].sub(&h.point);
        s += dot(&g, &diff) + traj.composite.value(&traj.points[t]) - traj.composite.value(&h.point);
    }
    Ok(s)
}

/// Regret of the inner learner of a batched run over its full blocks,
/// against its own hindsight optimum, with that optimum's slack.
pub fn inner_block_regret(traj: &Trajectory) -> Result<(f64, f64)> {
    let inner = traj.inner.as_ref().ok_or_else(|| config("trajectory has no inner learner"))?;
    let n = traj.inner_full_blocks;
    if n == 0 {
        return Ok((0.0, 0.0));
    }
    let h = hindsight_optimum_tolerant(&inner.losses[..n], &inner.composite, &inner.set)?;
    let played: f64 = (1..=n).map(|i| inner.round_value(i, &inner.points[i - 1])).sum();
    Ok((played - h.value, h.slack))
}

/// Evaluates one bound on a trajectory produced under the matching regime.
pub fn check_bound(traj: &Trajectory, bound: BoundName) -> Result<BoundVerdict> {
    let info = traj.info()?.clone();
    let name = format!("{}_{}", info.label(), bound.name());
    let radii = traj.point_radii();
    let eps_star = traj.hindsight_ref()?.slack;
    let total: f64 = radii.iter().sum();
    let l_total = traj.total_lipschitz();
    match bound {
        BoundName::Regret | BoundName::ForwardRegret | BoundName::Stability => {
            if info.block.is_some() {
                return Err(regime_error(&info, bound.name()));
            }
            let theoretical = theoretical_value(traj, bound)?;
            let (empirical, slack) = match bound {
                BoundName::Regret => (regret(traj)?, l_total * total + eps_star),
                BoundName::ForwardRegret if info.kind == LearnerKind::Rda => {
                    (linearized_forward_regret(traj)?, l_total * total + eps_star)
                }
                BoundName::ForwardRegret => (forward_regret(traj)?, l_total * total + eps_star),
                _ => (stability(traj), radii.windows(2).map(|w| w[0] + w[1]).sum()),
            };
            Ok(BoundVerdict::new(name, theoretical, empirical, slack))
        }
        BoundName::UniformStability => {
            let series = uniform_stability(traj);
            let mut worst: Option<(f64, BoundVerdict)> = None;
            for (i, dist) in series.iter().enumerate() {
                let t = i + 1;
                let Some(b) = uniform_bound_at(traj, t)? else { continue };
                let slack = radii[i] + radii[i + 1];
                let margin = dist - b - slack;
                if worst.as_ref().map_or(true, |(m, _)| margin > *m) {
                    let mut v = BoundVerdict::new(name.clone(), b, *dist, slack);
                    v.worst_step = Some(t);
                    worst = Some((margin, v));
                }
            }
            Ok(worst.map(|(_, v)| v).unwrap_or_else(|| BoundVerdict::new(name, 0.0, 0.0, 0.0)))
        }
        BoundName::BatchStability => {
            let block = info.block.ok_or_else(|| regime_error(&info, bound.name()))?;
            let blocks = traj.horizon().div_ceil(block) as f64;
            Ok(BoundVerdict::new(name, blocks * traj.set.diameter_in(traj.norm), stability(traj), 0.0))
        }
        BoundName::BatchRegret => {
            let block = info.block.ok_or_else(|| regime_error(&info, bound.name()))?;
            let b = block as f64;
            let (inner_regret, inner_slack) = inner_block_regret(traj)?;
            let d = traj.set.diameter_in(traj.norm);
            let theoretical = b * inner_regret + l_total * d * b;
            Ok(BoundVerdict::new(name, theoretical, regret(traj)?, b * inner_slack + eps_star))
        }
    }
}

/// Every applicable bound plus both equivalence inequalities.
pub fn check_all(traj: &Trajectory) -> Result<(DiagnosticsReport, Vec<BoundVerdict>)> {
    let report = diagnostics(traj)?;
    let mut verdicts: Vec<BoundVerdict> = check_equivalence(&report, traj.total_lipschitz()).into();
    if let Some(info) = &traj.info {
        for b in applicable_bounds(info) {
            verdicts.push(check_bound(traj, b)?);
        }
    }
    Ok((report, verdicts))
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Growth-rate verdict: the fitted exponent of `max(regret, 1)` against the
/// horizon may exceed `exponent` by at most [`SLOPE_TOLERANCE`].
pub fn slope_verdict(name: impl Into<String>, horizons: &[usize], regrets: &[f64], exponent: f64) -> Result<BoundVerdict> {
    if horizons.len() < 2 || horizons.len() != regrets.len() {
        return Err(config("slope fits need at least two horizons with one regret each"));
    }
    let xs: Vec<f64> = horizons.iter().map(|t| *t as f64).collect();
    let ys: Vec<f64> = regrets.iter().map(|r| r.max(1.0)).collect();
    Ok(BoundVerdict::new(name, exponent, log_log_slope(&xs, &ys), SLOPE_TOLERANCE))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::Mode;
    use crate::geometry::Regularizer;

    fn p(v: &[f64]) -> Point {
        Point::new(v.to_vec()).unwrap()
    }

    fn toy(points: Vec<Point>, losses: Vec<Loss>, hindsight: Point) -> Trajectory {
        let set = FeasibleSet::centered_ball(2, 1.0).unwrap();
        let value = losses.iter().map(|l| l.value(&hindsight)).sum();
        let n = losses.len();
        Trajectory {
            learner: "toy".into(),
            info: None,
            seed: 0,
            set,
            norm: Norm::L2,
            points,
            lipschitz: losses.iter().fold(0.0f64, |m, l| m.max(l.lipschitz)),
            losses,
            composite: CompositePart::none(),
            certificates: vec![SolveCertificate::exact(1.0); n],
            etas: vec![None; n],
            composite_lipschitz: 0.0,
            strong_convexity: 0.0,
            hindsight: Some(Hindsight {
                point: hindsight,
                value,
                slack: 0.0,
                certificate: SolveCertificate::exact(0.0),
            }),
            inner: None,
            inner_full_blocks: 0,
        }
    }

    #[test]
    fn playing_the_optimum_has_zero_regret() {
        let w = p(&[0.0, -1.0]);
        let losses = vec![Loss::linear(p(&[0.0, 1.0]), Norm::L2); 4];
        let traj = toy(vec![w.clone(); 5], losses, w);
        let r = diagnostics(&traj).unwrap();
        assert_eq!((r.regret, r.forward_regret, r.stability), (0.0, 0.0, 0.0));
        for v in check_equivalence(&r, traj.total_lipschitz()) {
            assert!(v.pass);
            assert_eq!(v.theoretical_value, v.empirical_value);
        }
    }

    #[test]
    fn two_points_one_round() {
        let traj = toy(vec![p(&[0.0, 0.0]), p(&[0.6, 0.8])], vec![Loss::linear(p(&[1.0, 0.0]), Norm::L2)], p(&[-1.0, 0.0]));
        assert_eq!(stability(&traj), 1.0);
        assert_eq!(regret(&traj).unwrap(), 1.0);
        assert!((forward_regret(&traj).unwrap() - 1.6).abs() < 1e-15);
    }

    #[test]
    fn missing_hindsight_is_an_error() {
        let mut traj = toy(vec![p(&[0.0, 0.0]), p(&[0.0, 0.0])], vec![Loss::linear(p(&[1.0, 0.0]), Norm::L2)], p(&[0.0, 0.0]));
        traj.hindsight = None;
        assert!(matches!(regret(&traj), Err(Error::MissingHindsight)));
    }

    #[test]
    fn ftl_formula() {
        let set = FeasibleSet::centered_ball(2, 1.0).unwrap();
        let mut traj = toy(vec![p(&[0.0, 0.0]); 101], vec![Loss::linear(p(&[2.0, 0.0]), Norm::L2); 100], p(&[0.0, 0.0]));
        traj.set = set;
        traj.lipschitz = 2.0;
        traj.strong_convexity = 1.0;
        traj.info = Some(LearnerInfo {
            kind: LearnerKind::Ftl,
            regime: Regime::StronglyConvex,
            regularizer: Regularizer::HalfSquaredL2,
            eta: None,
            beta: None,
            block: None,
            horizon: 100,
            mode: Mode::Exact,
        });
        let v = theoretical_value(&traj, BoundName::Regret).unwrap();
        assert!((v - 8.0 * (1.0 + 100f64.ln())).abs() < 1e-12);
    }

    #[test]
    fn empty_trajectories_pass_vacuously() {
        let mut traj = toy(Vec::new(), Vec::new(), p(&[0.0, 0.0]));
        traj.lipschitz = 1.0;
        traj.strong_convexity = 1.0;
        traj.info = Some(LearnerInfo {
            kind: LearnerKind::Ftl,
            regime: Regime::StronglyConvex,
            regularizer: Regularizer::HalfSquaredL2,
            eta: None,
            beta: None,
            block: None,
            horizon: 0,
            mode: Mode::Exact,
        });
        let (_, verdicts) = check_all(&traj).unwrap();
        assert!(verdicts.iter().all(|v| v.pass), "{verdicts:?}");
    }

    #[test]
    fn slope_of_a_power_law() {
        let hs = [64, 128, 256, 512];
        let rs: Vec<f64> = hs.iter().map(|t| 3.0 * (*t as f64).powf(0.5)).collect();
        let v = slope_verdict("s", &hs, &rs, 0.5).unwrap();
        assert!((v.empirical_value - 0.5).abs() < 1e-12 && v.pass);
        let rs: Vec<f64> = hs.iter().map(|t| (*t as f64).powf(0.7)).collect();
        assert!(!slope_verdict("s", &hs, &rs, 0.5).unwrap().pass);
    }
}
