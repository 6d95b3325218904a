//! The learners, their step-size schedules, the batching wrapper and the run
//! loop.
//!
//! Every learner exposes the same play/observe protocol: [`Learner::play`]
//! returns `w_t`, and [`Learner::observe`] consumes `ℓ_t` and computes
//! `w_{t+1}` by solving its inner problem to the accuracy dictated by the
//! [`Mode`].

mod learners;
mod run;
mod schedule;
mod wrapper;

pub use learners::{Comid, Ftl, Ftrl, Iol, MirrorDescent, Rda};
pub use run::run;
pub use schedule::Schedule;
pub use wrapper::BatchWrapper;

use serde::{Deserialize, Serialize};

use crate::error::{config, Error, Result};
use crate::geometry::{FeasibleSet, Point, Regularizer};
use crate::losses::{CompositeKind, CompositePart, Loss};
use crate::solver::{solve, InnerObjective, Solution, SolveCertificate, SolveOptions, SolveStatus, EXACT_DELTA};

/// Damping applied to approximate solves so that loose targets are not met
/// by accident in a single exact step.
pub const APPROX_DAMPING: f64 = 2.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LearnerKind {
    Ftl,
    Ftrl,
    Rda,
    Comid,
    Iol,
    Md,
}

impl LearnerKind {
    pub fn name(self) -> &'static str {
        match self {
            LearnerKind::Ftl => "ftl",
            LearnerKind::Ftrl => "ftrl",
            LearnerKind::Rda => "rda",
            LearnerKind::Comid => "comid",
            LearnerKind::Iol => "iol",
            LearnerKind::Md => "md",
        }
    }

    pub const ALL: [LearnerKind; 6] =
        [LearnerKind::Ftl, LearnerKind::Ftrl, LearnerKind::Rda, LearnerKind::Comid, LearnerKind::Iol, LearnerKind::Md];
}

/// Which regime of the regret analysis a run is configured for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    #[default]
    General,
    StronglyConvex,
}

#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Mode {
    #[default]
    Exact,
    Approx { delta: Schedule },
}

impl Mode {
    pub fn name(&self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Approx { .. } => "approx",
        }
    }
}

/// User-facing learner configuration; unset schedules take the regime's
/// default.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LearnerSpec {
    pub kind: LearnerKind,
    #[serde(default)]
    pub regime: Regime,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<Schedule>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<Schedule>,
    /// Wraps the learner in the batching wrapper with this block length;
    /// `0` selects `⌈√T⌉`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub batch: Option<usize>,
}

impl LearnerSpec {
    pub fn new(kind: LearnerKind) -> Self {
        LearnerSpec { kind, regime: Regime::General, eta: None, beta: None, batch: None }
    }

    pub fn regime(mut self, regime: Regime) -> Self {
        self.regime = regime;
        self
    }

    pub fn eta(mut self, eta: Schedule) -> Self {
        self.eta = Some(eta);
        self
    }

    pub fn beta(mut self, beta: Schedule) -> Self {
        self.beta = Some(beta);
        self
    }

    pub fn batch(mut self, block: usize) -> Self {
        self.batch = Some(block);
        self
    }
}

/// Everything a learner needs besides its own spec.
#[derive(Clone, Debug)]
pub struct LearnerContext<'a> {
    pub set: &'a FeasibleSet,
    pub regularizer: Regularizer,
    pub composite: CompositePart,
    pub horizon: usize,
    /// Lipschitz constant of the `ℓ_t` alone.
    pub lipschitz: f64,
    /// Lipschitz constant of the composite term.
    pub composite_lipschitz: f64,
    /// Strong convexity modulus (ℓ2) of the `ℓ_t`.
    pub strong_convexity: f64,
    /// `R(w*)` for the hindsight optimum, used by optimized constant steps.
    pub hindsight_regularizer: Option<f64>,
    pub mode: Mode,
    pub strict: bool,
    pub validate: bool,
}

/// Resolved configuration of a built learner, as needed by the bound checks.
#[derive(Clone, Debug, PartialEq)]
pub struct LearnerInfo {
    pub kind: LearnerKind,
    pub regime: Regime,
    pub regularizer: Regularizer,
    pub eta: Option<Schedule>,
    pub beta: Option<Schedule>,
    pub block: Option<usize>,
    pub horizon: usize,
    pub mode: Mode,
}

impl LearnerInfo {
    pub fn label(&self) -> String {
        match self.block {
            Some(b) => format!("batch{b}({})", self.kind.name()),
            None => self.kind.name().to_string(),
        }
    }
}

/// Outcome of one observe call.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepInfo {
    /// Certificate of the new point `w_{t+1}`.
    pub certificate: SolveCertificate,
    /// Step size used, for learners that have one.
    pub eta: Option<f64>,
}

/// The inner learner's view of a batched run.
#[derive(Clone, Debug, Default)]
pub struct InnerRecord {
    pub points: Vec<Point>,
    pub losses: Vec<Loss>,
    pub certificates: Vec<SolveCertificate>,
    pub etas: Vec<Option<f64>>,
    /// Number of blocks of full length.
    pub full_blocks: usize,
}

pub trait Learner: Send {
    fn name(&self) -> String;

    /// The point `w_t` for the next round.
    fn play(&self) -> &Point;

    /// Consumes `ℓ_t` and moves to `w_{t+1}`.
    fn observe(&mut self, loss: &Loss) -> Result<StepInfo>;

    /// Called once after the last round; may update the provisional point.
    fn finish(&mut self) -> Result<Option<StepInfo>> {
        Ok(None)
    }

    fn inner_record(&self) -> Option<InnerRecord> {
        None
    }
}

/// How inner problems are solved.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolvePolicy {
    pub mode: Mode,
    pub strict: bool,
    pub horizon: usize,
}

impl SolvePolicy {
    pub fn exact() -> Self {
        SolvePolicy { mode: Mode::Exact, strict: false, horizon: 0 }
    }

    pub(crate) fn solve(
        &self,
        set: &FeasibleSet,
        obj: &InnerObjective,
        t: usize,
        warm: &Point,
        dual: Option<Vec<f64>>,
    ) -> Result<Solution> {
        let (target, mut opts) = match self.mode {
            Mode::Exact => (EXACT_DELTA, SolveOptions::default()),
            Mode::Approx { delta } => (
                delta.at(t, self.horizon),
                SolveOptions { allow_closed_form: false, damping: APPROX_DAMPING, ..SolveOptions::default() },
            ),
        };
        opts.dual_warm_start = dual;
        let sol = solve(set, obj, target, warm, &opts)?;
        if self.strict && sol.certificate.status == SolveStatus::Truncated {
            return Err(Error::SolverTruncated { step: t, achieved: sol.certificate.suboptimality });
        }
        Ok(sol)
    }
}

/// Builds a learner, resolving default schedules and, unless disabled,
/// checking that the configuration matches the premises of its bound.
pub fn build_learner(spec: &LearnerSpec, ctx: &LearnerContext) -> Result<(Box<dyn Learner>, LearnerInfo)> {
    ctx.regularizer.check_compatible(ctx.set)?;
    if let Mode::Approx { delta } = ctx.mode {
        delta.check_positive("delta")?;
    }
    if let Some(block) = spec.batch {
        let block = if block == 0 { (ctx.horizon as f64).sqrt().ceil().max(1.0) as usize } else { block };
        let inner_horizon = ctx.horizon.div_ceil(block).max(1);
        let inner_ctx = LearnerContext { horizon: inner_horizon, ..ctx.clone() };
        let inner_spec = LearnerSpec { batch: None, ..spec.clone() };
        let (inner, mut info) = build_learner(&inner_spec, &inner_ctx)?;
        info.block = Some(block);
        info.horizon = ctx.horizon;
        return Ok((Box::new(BatchWrapper::new(inner, block)?), info));
    }

    let eta = resolve_eta(spec, ctx)?;
    let beta = resolve_beta(spec, ctx)?;
    if ctx.validate && ctx.horizon > 0 {
        validate(spec, ctx, eta, beta)?;
    }
    let policy = SolvePolicy { mode: ctx.mode, strict: ctx.strict, horizon: ctx.horizon };
    let set = ctx.set.clone();
    let r = ctx.regularizer;
    let composite = ctx.composite;
    let learner: Box<dyn Learner> = match spec.kind {
        LearnerKind::Ftl => Box::new(Ftl::new(set, composite, policy)?),
        LearnerKind::Ftrl => {
            let eta = eta.expect("resolved").at(1, ctx.horizon);
            Box::new(Ftrl::new(set, r, eta, composite, policy)?)
        }
        LearnerKind::Rda => Box::new(Rda::new(set, r, beta.expect("resolved"), composite, policy)?),
        LearnerKind::Comid => Box::new(Comid::new(set, r, eta.expect("resolved"), composite, policy)?),
        LearnerKind::Iol => Box::new(Iol::new(set, r, eta.expect("resolved"), composite, policy)?),
        LearnerKind::Md => Box::new(MirrorDescent::new(set, r, eta.expect("resolved"), composite, policy)?),
    };
    let info = LearnerInfo {
        kind: spec.kind,
        regime: spec.regime,
        regularizer: r,
        eta,
        beta,
        block: None,
        horizon: ctx.horizon,
        mode: ctx.mode,
    };
    Ok((learner, info))
}

/// Lipschitz constant entering a learner's own bound: RDA and COMiD only
/// linearize `ℓ_t`, the others see `ℓ_t + r` as the loss.
pub fn bound_lipschitz(kind: LearnerKind, lipschitz: f64, composite_lipschitz: f64) -> f64 {
    match kind {
        LearnerKind::Rda | LearnerKind::Comid => lipschitz,
        _ => lipschitz + composite_lipschitz,
    }
}

/// Strong convexity of the per-round loss seen by a learner.
pub fn bound_strong_convexity(kind: LearnerKind, strong_convexity: f64, composite: &CompositePart) -> f64 {
    match kind {
        LearnerKind::Rda | LearnerKind::Comid => strong_convexity,
        _ => strong_convexity + composite.strong_convexity(),
    }
}

fn hindsight_reg(ctx: &LearnerContext, what: &str) -> Result<f64> {
    let r = ctx
        .hindsight_regularizer
        .ok_or_else(|| config(format!("{what}: the optimized step size needs R(w*) of the hindsight optimum")))?;
    if !(r > 1e-12) {
        return Err(config(format!("{what}: the optimized step size is undefined because R(w*) = {r:e}")));
    }
    Ok(r)
}

fn resolve_eta(spec: &LearnerSpec, ctx: &LearnerContext) -> Result<Option<Schedule>> {
    if let Some(eta) = spec.eta {
        if spec.kind == LearnerKind::Ftl || spec.kind == LearnerKind::Rda {
            return Err(config(format!("{} takes no step size", spec.kind.name())));
        }
        eta.check_positive("eta")?;
        return Ok(Some(eta));
    }
    if ctx.horizon == 0 && !matches!(spec.kind, LearnerKind::Ftl | LearnerKind::Rda) {
        // No step is ever taken.
        return Ok(Some(Schedule::Constant { value: 1.0 }));
    }
    let t = ctx.horizon.max(1) as f64;
    let l = bound_lipschitz(spec.kind, ctx.lipschitz, ctx.composite_lipschitz);
    let alpha = bound_strong_convexity(spec.kind, ctx.strong_convexity, &ctx.composite);
    let eta = match (spec.kind, spec.regime) {
        (LearnerKind::Ftl, _) | (LearnerKind::Rda, _) => None,
        (LearnerKind::Ftrl, _) => Some(Schedule::HorizonPower { c: 1.0, power: -0.5 }),
        (LearnerKind::Iol | LearnerKind::Comid | LearnerKind::Md, Regime::StronglyConvex) => {
            if !(alpha > 0.0) {
                return Err(config(format!(
                    "{}: the strongly convex regime requires losses with alpha > 0",
                    spec.kind.name()
                )));
            }
            Some(Schedule::InverseT { c: 1.0 / alpha })
        }
        (LearnerKind::Iol, Regime::General) => {
            // Minimizer of 2ηL²T + R(w*)/η.
            let r = hindsight_reg(ctx, "iol")?;
            Some(Schedule::Constant { value: (r / (2.0 * l * l * t)).sqrt() })
        }
        (LearnerKind::Comid | LearnerKind::Md, Regime::General) => {
            // Minimizer of R(w*)/η + ηL²T/2.
            let r = hindsight_reg(ctx, spec.kind.name())?;
            Some(Schedule::Constant { value: (2.0 * r / (l * l * t)).sqrt() })
        }
    };
    if let Some(e) = eta {
        e.check_positive("eta")?;
    }
    Ok(eta)
}

fn resolve_beta(spec: &LearnerSpec, ctx: &LearnerContext) -> Result<Option<Schedule>> {
    if spec.kind != LearnerKind::Rda {
        if spec.beta.is_some() {
            return Err(config(format!("{} takes no beta schedule", spec.kind.name())));
        }
        return Ok(None);
    }
    let _ = ctx;
    Ok(Some(spec.beta.unwrap_or(match spec.regime {
        Regime::StronglyConvex => Schedule::Zero,
        Regime::General => Schedule::SqrtT,
    })))
}

fn validate(spec: &LearnerSpec, ctx: &LearnerContext, eta: Option<Schedule>, beta: Option<Schedule>) -> Result<()> {
    let name = spec.kind.name();
    let alpha = bound_strong_convexity(spec.kind, ctx.strong_convexity, &ctx.composite);
    let premise = |msg: String| Err(config(format!("{name}: {msg} (use --no-validate to override)")));
    match spec.kind {
        LearnerKind::Ftl => {
            if !(alpha > 0.0) {
                return premise("follow the leader requires alpha-strongly convex losses with alpha > 0".into());
            }
        }
        LearnerKind::Ftrl => {
            if !eta.is_some_and(|e| e.is_constant()) {
                return premise("the regularized leader bound assumes a constant step size".into());
            }
        }
        LearnerKind::Rda => match beta {
            Some(Schedule::Zero) => {
                if !matches!(ctx.composite.kind, CompositeKind::HalfSquaredL2 { .. }) {
                    return premise("beta = 0 requires an alpha-strongly convex composite term r".into());
                }
                if spec.regime != Regime::StronglyConvex {
                    return premise("beta = 0 belongs to the strongly convex regime".into());
                }
            }
            Some(Schedule::SqrtT) => {
                let d = ctx.set.diameter_in(ctx.regularizer.norm());
                if ctx.regularizer.sup_value(ctx.set)? > d * d {
                    return premise("beta_t = sqrt(t) requires 0 <= h <= D^2 on the feasible set".into());
                }
                if spec.regime != Regime::General {
                    return premise("beta_t = sqrt(t) belongs to the general convex regime".into());
                }
            }
            other => return premise(format!("beta must be zero or sqrt(t), got {other:?}")),
        },
        LearnerKind::Iol | LearnerKind::Comid | LearnerKind::Md => {
            let eta = eta.expect("resolved");
            match spec.regime {
                Regime::General => {
                    if !eta.is_constant() {
                        return premise("the general convex regime uses a constant step size".into());
                    }
                }
                Regime::StronglyConvex => {
                    if spec.kind == LearnerKind::Md {
                        return premise("mirror descent is only covered in the general convex regime".into());
                    }
                    if ctx.regularizer != Regularizer::HalfSquaredL2 {
                        return premise("strong convexity w.r.t. D_R is only certified for R = 1/2 ||w||^2".into());
                    }
                    let expected = 1.0 / alpha;
                    match eta {
                        Schedule::InverseT { c } if (c - expected).abs() <= 1e-12 * expected => {}
                        _ => return premise(format!("the strongly convex regime requires eta_t = 1/(alpha t) with alpha = {alpha}")),
                    }
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(set: &FeasibleSet) -> LearnerContext<'_> {
        LearnerContext {
            set,
            regularizer: Regularizer::HalfSquaredL2,
            composite: CompositePart::none(),
            horizon: 100,
            lipschitz: 2.0,
            composite_lipschitz: 0.0,
            strong_convexity: 0.0,
            hindsight_regularizer: Some(0.5),
            mode: Mode::Exact,
            strict: true,
            validate: true,
        }
    }

    #[test]
    fn ftl_refuses_non_strongly_convex_losses() {
        let set = FeasibleSet::centered_ball(2, 1.0).unwrap();
        let err = build_learner(&LearnerSpec::new(LearnerKind::Ftl), &ctx(&set)).err().unwrap();
        assert!(err.to_string().contains("strongly convex"), "{err}");
    }

    #[test]
    fn strongly_convex_regime_needs_inverse_t_steps() {
        let set = FeasibleSet::centered_ball(2, 1.0).unwrap();
        let mut c = ctx(&set);
        c.strong_convexity = 1.0;
        let spec = LearnerSpec::new(LearnerKind::Iol).regime(Regime::StronglyConvex);
        let (_, info) = build_learner(&spec, &c).unwrap();
        assert_eq!(info.eta, Some(Schedule::InverseT { c: 1.0 }));
        let bad = spec.clone().eta(Schedule::Constant { value: 0.1 });
        let err = build_learner(&bad, &c).err().unwrap();
        assert!(err.to_string().contains("1/(alpha t)"), "{err}");
        c.validate = false;
        assert!(build_learner(&bad, &c).is_ok());
    }

    #[test]
    fn optimized_steps() {
        let set = FeasibleSet::centered_ball(2, 1.0).unwrap();
        let c = ctx(&set);
        let (_, iol) = build_learner(&LearnerSpec::new(LearnerKind::Iol), &c).unwrap();
        let expected = (0.5f64 / (2.0 * 4.0 * 100.0)).sqrt();
        assert_eq!(iol.eta, Some(Schedule::Constant { value: expected }));
        let (_, md) = build_learner(&LearnerSpec::new(LearnerKind::Md), &c).unwrap();
        assert_eq!(md.eta, Some(Schedule::Constant { value: (1.0f64 / (4.0 * 100.0)).sqrt() }));
    }

    #[test]
    fn rda_beta_zero_needs_strongly_convex_composite() {
        let set = FeasibleSet::centered_ball(2, 1.0).unwrap();
        let c = ctx(&set);
        let spec = LearnerSpec::new(LearnerKind::Rda).regime(Regime::StronglyConvex);
        assert!(build_learner(&spec, &c).is_err());
        let mut c2 = c.clone();
        c2.composite = CompositePart::new(CompositeKind::HalfSquaredL2 { weight: 1.0 }, &set).unwrap();
        assert!(build_learner(&spec, &c2).is_ok());
    }
}
