use crate::error::Result;
use crate::geometry::{FeasibleSet, Point, Regularizer};
use crate::losses::{CompositePart, Loss};
use crate::solver::{InnerObjective, Solution};

use super::{Learner, Schedule, SolvePolicy, StepInfo};

/// `argmin_C r`, falling back to `argmin_C R` when `r` has no unique minimizer.
fn composite_start(set: &FeasibleSet, composite: &CompositePart, r: Regularizer) -> Result<Point> {
    match composite.unique_argmin(set)? {
        Some(p) => Ok(p),
        None => r.argmin(set),
    }
}

fn step(sol: Solution, current: &mut Point, eta: Option<f64>) -> StepInfo {
    *current = sol.point;
    StepInfo { certificate: sol.certificate, eta }
}

/// Follow the leader: `w_{t+1} = argmin_C Σ_{τ≤t} (ℓ_τ + r)`.
pub struct Ftl {
    set: FeasibleSet,
    composite: CompositePart,
    policy: SolvePolicy,
    obj: InnerObjective,
    dual: Option<Vec<f64>>,
    current: Point,
    t: usize,
}

impl Ftl {
    pub fn new(set: FeasibleSet, composite: CompositePart, policy: SolvePolicy) -> Result<Self> {
        let current = set.project(&vec![0.0; set.dim()])?;
        Ok(Ftl { obj: InnerObjective::new(set.dim()), set, composite, policy, dual: None, current, t: 0 })
    }
}

impl Learner for Ftl {
    fn name(&self) -> String {
        "ftl".into()
    }

    fn play(&self) -> &Point {
        &self.current
    }

    fn observe(&mut self, loss: &Loss) -> Result<StepInfo> {
        self.t += 1;
        loss.add_to(&mut self.obj, 1.0);
        self.composite.add_to(&mut self.obj, 1.0);
        let sol = self.policy.solve(&self.set, &self.obj, self.t, &self.current, self.dual.take())?;
        self.dual = sol.dual.clone();
        Ok(step(sol, &mut self.current, None))
    }
}

/// Follow the regularized leader with a constant step:
/// `w_{t+1} = argmin_C Σ_{τ≤t} (ℓ_τ + r) + R/η`.
pub struct Ftrl {
    set: FeasibleSet,
    composite: CompositePart,
    policy: SolvePolicy,
    eta: f64,
    obj: InnerObjective,
    dual: Option<Vec<f64>>,
    current: Point,
    t: usize,
}

impl Ftrl {
    pub fn new(set: FeasibleSet, r: Regularizer, eta: f64, composite: CompositePart, policy: SolvePolicy) -> Result<Self> {
        let current = r.argmin(&set)?;
        let mut obj = InnerObjective::new(set.dim());
        obj.add_regularizer(r, 1.0 / eta);
        Ok(Ftrl { set, composite, policy, eta, obj, dual: None, current, t: 0 })
    }
}

impl Learner for Ftrl {
    fn name(&self) -> String {
        "ftrl".into()
    }

    fn play(&self) -> &Point {
        &self.current
    }

    fn observe(&mut self, loss: &Loss) -> Result<StepInfo> {
        self.t += 1;
        loss.add_to(&mut self.obj, 1.0);
        self.composite.add_to(&mut self.obj, 1.0);
        let sol = self.policy.solve(&self.set, &self.obj, self.t, &self.current, self.dual.take())?;
        self.dual = sol.dual.clone();
        Ok(step(sol, &mut self.current, Some(self.eta)))
    }
}

/// Regularized dual averaging:
/// `w_{t+1} = argmin_C (Σ_{τ≤t} g_τ)ᵀw + t·r(w) + β_t·h(w)` with
/// `g_τ ∈ ∂ℓ_τ(w_τ)`.
pub struct Rda {
    set: FeasibleSet,
    h: Regularizer,
    beta: Schedule,
    composite: CompositePart,
    policy: SolvePolicy,
    grad_sum: Vec<f64>,
    current: Point,
    t: usize,
}

impl Rda {
    pub fn new(set: FeasibleSet, h: Regularizer, beta: Schedule, composite: CompositePart, policy: SolvePolicy) -> Result<Self> {
        h.check_compatible(&set)?;
        let current = composite_start(&set, &composite, h)?;
        Ok(Rda { grad_sum: vec![0.0; set.dim()], set, h, beta, composite, policy, current, t: 0 })
    }
}

impl Learner for Rda {
    fn name(&self) -> String {
        "rda".into()
    }

    fn play(&self) -> &Point {
        &self.current
    }

    fn observe(&mut self, loss: &Loss) -> Result<StepInfo> {
        self.t += 1;
        for (s, g) in self.grad_sum.iter_mut().zip(loss.subgradient(&self.current)) {
            *s += g;
        }
        let mut obj = InnerObjective::new(self.set.dim());
        obj.add_linear(&self.grad_sum, 1.0);
        self.composite.add_to(&mut obj, self.t as f64);
        let beta = self.beta.at(self.t, self.policy.horizon);
        if beta > 0.0 {
            obj.add_regularizer(self.h, beta);
        }
        let sol = self.policy.solve(&self.set, &obj, self.t, &self.current, None)?;
        Ok(step(sol, &mut self.current, None))
    }
}

/// Implicit online learning: `w_{t+1} = argmin_C D_R(w, w_t) + η_t(ℓ_t + r)(w)`.
pub struct Iol {
    set: FeasibleSet,
    r: Regularizer,
    eta: Schedule,
    composite: CompositePart,
    policy: SolvePolicy,
    current: Point,
    t: usize,
}

impl Iol {
    pub fn new(set: FeasibleSet, r: Regularizer, eta: Schedule, composite: CompositePart, policy: SolvePolicy) -> Result<Self> {
        let current = r.argmin(&set)?;
        Ok(Iol { set, r, eta, composite, policy, current, t: 0 })
    }
}

impl Learner for Iol {
    fn name(&self) -> String {
        "iol".into()
    }

    fn play(&self) -> &Point {
        &self.current
    }

    fn observe(&mut self, loss: &Loss) -> Result<StepInfo> {
        self.t += 1;
        let eta = self.eta.at(self.t, self.policy.horizon);
        let mut obj = InnerObjective::new(self.set.dim());
        obj.add_bregman(self.r, &self.current, 1.0);
        loss.add_to(&mut obj, eta);
        self.composite.add_to(&mut obj, eta);
        let sol = self.policy.solve(&self.set, &obj, self.t, &self.current, None)?;
        Ok(step(sol, &mut self.current, Some(eta)))
    }
}

/// Composite objective mirror descent:
/// `w_{t+1} = argmin_C η_t(g_tᵀw + r(w)) + D_R(w, w_t)` with `g_t ∈ ∂ℓ_t(w_t)`.
pub struct Comid {
    set: FeasibleSet,
    r: Regularizer,
    eta: Schedule,
    composite: CompositePart,
    policy: SolvePolicy,
    current: Point,
    t: usize,
}

impl Comid {
    pub fn new(set: FeasibleSet, r: Regularizer, eta: Schedule, composite: CompositePart, policy: SolvePolicy) -> Result<Self> {
        r.check_compatible(&set)?;
        let current = composite_start(&set, &composite, r)?;
        Ok(Comid { set, r, eta, composite, policy, current, t: 0 })
    }
}

impl Learner for Comid {
    fn name(&self) -> String {
        "comid".into()
    }

    fn play(&self) -> &Point {
        &self.current
    }

    fn observe(&mut self, loss: &Loss) -> Result<StepInfo> {
        self.t += 1;
        let eta = self.eta.at(self.t, self.policy.horizon);
        let g = loss.subgradient(&self.current);
        let mut obj = InnerObjective::new(self.set.dim());
        obj.add_bregman(self.r, &self.current, 1.0);
        obj.add_linear(&g, eta);
        self.composite.add_to(&mut obj, eta);
        let sol = self.policy.solve(&self.set, &obj, self.t, &self.current, None)?;
        Ok(step(sol, &mut self.current, Some(eta)))
    }
}

/// Mirror descent on the full loss: `w_{t+1} = argmin_C η_t g_tᵀw + D_R(w, w_t)`
/// with `g_t ∈ ∂(ℓ_t + r)(w_t)`.
pub struct MirrorDescent {
    set: FeasibleSet,
    r: Regularizer,
    eta: Schedule,
    composite: CompositePart,
    policy: SolvePolicy,
    current: Point,
    t: usize,
}

impl MirrorDescent {
    pub fn new(set: FeasibleSet, r: Regularizer, eta: Schedule, composite: CompositePart, policy: SolvePolicy) -> Result<Self> {
        r.check_compatible(&set)?;
        let current = set.project(&vec![0.0; set.dim()])?;
        Ok(MirrorDescent { set, r, eta, composite, policy, current, t: 0 })
    }
}

impl Learner for MirrorDescent {
    fn name(&self) -> String {
        "md".into()
    }

    fn play(&self) -> &Point {
        &self.current
    }

    fn observe(&mut self, loss: &Loss) -> Result<StepInfo> {
        self.t += 1;
        let eta = self.eta.at(self.t, self.policy.horizon);
        let mut g = loss.subgradient(&self.current);
        for (gi, ri) in g.iter_mut().zip(self.composite.subgradient(&self.current)) {
            *gi += ri;
        }
        let mut obj = InnerObjective::new(self.set.dim());
        obj.add_bregman(self.r, &self.current, 1.0);
        obj.add_linear(&g, eta);
        let sol = self.policy.solve(&self.set, &obj, self.t, &self.current, None)?;
        Ok(step(sol, &mut self.current, Some(eta)))
    }
}
