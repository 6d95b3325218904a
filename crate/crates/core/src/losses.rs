//! Adversary moves with certified Lipschitz and strong-convexity constants.
//!
//! Lipschitz constants are stated in the dual of the norm paired with the
//! learner's regularizer, so `|ℓ(x) − ℓ(y)| ≤ L‖x − y‖` holds in that norm.
//! Strong convexity moduli are w.r.t. ℓ2.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{config, Error, Result};
use crate::geometry::{dot, norm2_sq, sample_unit_ball, sample_unit_sphere, sign, FeasibleSet, Norm, Point};
use crate::solver::{minimize_certified, InnerObjective, SolveCertificate, SolveStatus};

/// Required certificate on the hindsight optimum.
pub const HINDSIGHT_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub enum LossKind {
    Linear { g: Point },
    Quadratic { center: Point, alpha: f64 },
    /// `max(0, threshold − gᵀw)`.
    Hinge { g: Point, threshold: f64 },
    /// Uniform average of the parts.
    Average { parts: Vec<Loss> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Loss {
    pub kind: LossKind,
    pub lipschitz: f64,
    pub strong_convexity: f64,
}

impl Loss {
    pub fn linear(g: Point, norm: Norm) -> Self {
        let lipschitz = norm.dual().of(&g);
        Loss { kind: LossKind::Linear { g }, lipschitz, strong_convexity: 0.0 }
    }

    /// `(α/2)‖w − center‖²`.
    pub fn quadratic(center: Point, alpha: f64, set: &FeasibleSet, norm: Norm) -> Result<Self> {
        if !(alpha > 0.0) {
            return Err(config(format!("quadratic curvature must be positive, got {alpha}")));
        }
        center.check_dim(set.dim())?;
        let lipschitz = alpha * set.sup_distance(&center, norm.dual());
        Ok(Loss { kind: LossKind::Quadratic { center, alpha }, lipschitz, strong_convexity: alpha })
    }

    pub fn hinge(g: Point, threshold: f64, norm: Norm) -> Self {
        let lipschitz = norm.dual().of(&g);
        Loss { kind: LossKind::Hinge { g, threshold }, lipschitz, strong_convexity: 0.0 }
    }

    pub fn average(parts: Vec<Loss>) -> Result<Self> {
        if parts.is_empty() {
            return Err(config("cannot average an empty block of losses"));
        }
        let n = parts.len() as f64;
        let lipschitz = parts.iter().fold(0.0f64, |m, l| m.max(l.lipschitz));
        let strong_convexity = parts.iter().map(|l| l.strong_convexity).sum::<f64>() / n;
        Ok(Loss { kind: LossKind::Average { parts }, lipschitz, strong_convexity })
    }

    pub fn dim(&self) -> usize {
        match &self.kind {
            LossKind::Linear { g } | LossKind::Hinge { g, .. } => g.dim(),
            LossKind::Quadratic { center, .. } => center.dim(),
            LossKind::Average { parts } => parts[0].dim(),
        }
    }

    pub fn value(&self, w: &[f64]) -> f64 {
        match &self.kind {
            LossKind::Linear { g } => dot(g, w),
            LossKind::Quadratic { center, alpha } => 0.5 * alpha * Norm::L2.of_diff(w, center).powi(2),
            LossKind::Hinge { g, threshold } => (threshold - dot(g, w)).max(0.0),
            LossKind::Average { parts } => parts.iter().map(|p| p.value(w)).sum::<f64>() / parts.len() as f64,
        }
    }

    /// A subgradient. At a hinge kink the active piece's gradient `−g` is
    /// returned.
    pub fn subgradient(&self, w: &[f64]) -> Vec<f64> {
        match &self.kind {
            LossKind::Linear { g } => g.to_vec(),
            LossKind::Quadratic { center, alpha } => w.iter().zip(center.iter()).map(|(x, c)| alpha * (x - c)).collect(),
            LossKind::Hinge { g, threshold } => {
                if dot(g, w) <= *threshold {
                    g.iter().map(|x| -x).collect()
                } else {
                    vec![0.0; g.dim()]
                }
            }
            LossKind::Average { parts } => {
                let mut acc = vec![0.0; w.len()];
                for p in parts {
                    for (a, s) in acc.iter_mut().zip(p.subgradient(w)) {
                        *a += s;
                    }
                }
                let n = parts.len() as f64;
                acc.into_iter().map(|a| a / n).collect()
            }
        }
    }

    /// Adds `weight·ℓ` to an inner objective.
    pub fn add_to(&self, obj: &mut InnerObjective, weight: f64) {
        match &self.kind {
            LossKind::Linear { g } => obj.add_linear(g, weight),
            LossKind::Quadratic { center, alpha } => obj.add_half_sq_dist(center, weight * alpha),
            LossKind::Hinge { g, threshold } => obj.add_hinge(g, *threshold, weight),
            LossKind::Average { parts } => {
                let w = weight / parts.len() as f64;
                for p in parts {
                    p.add_to(obj, w);
                }
            }
        }
    }

    pub fn has_hinge(&self) -> bool {
        match &self.kind {
            LossKind::Hinge { .. } => true,
            LossKind::Average { parts } => parts.iter().any(Loss::has_hinge),
            _ => false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CompositeKind {
    #[default]
    None,
    L1 { weight: f64 },
    HalfSquaredL2 { weight: f64 },
}

/// The shared composite term `r`, normalized so that `min_C r = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CompositePart {
    pub kind: CompositeKind,
    pub min_over_c: f64,
}

impl CompositePart {
    pub fn none() -> Self {
        CompositePart { kind: CompositeKind::None, min_over_c: 0.0 }
    }

    pub fn new(kind: CompositeKind, set: &FeasibleSet) -> Result<Self> {
        let min_over_c = match kind {
            CompositeKind::None => 0.0,
            CompositeKind::L1 { weight } => {
                check_weight(weight)?;
                weight * Norm::L1.of(&l1_argmin(set)?)
            }
            CompositeKind::HalfSquaredL2 { weight } => {
                check_weight(weight)?;
                0.5 * weight * norm2_sq(&set.project(&vec![0.0; set.dim()])?)
            }
        };
        Ok(CompositePart { kind, min_over_c })
    }

    fn raw(&self, w: &[f64]) -> f64 {
        match self.kind {
            CompositeKind::None => 0.0,
            CompositeKind::L1 { weight } => weight * Norm::L1.of(w),
            CompositeKind::HalfSquaredL2 { weight } => 0.5 * weight * norm2_sq(w),
        }
    }

    /// `r(w) − min_C r`.
    pub fn value(&self, w: &[f64]) -> f64 {
        self.raw(w) - self.min_over_c
    }

    pub fn subgradient(&self, w: &[f64]) -> Vec<f64> {
        match self.kind {
            CompositeKind::None => vec![0.0; w.len()],
            CompositeKind::L1 { weight } => w.iter().map(|x| weight * sign(*x)).collect(),
            CompositeKind::HalfSquaredL2 { weight } => w.iter().map(|x| weight * x).collect(),
        }
    }

    pub fn is_none(&self) -> bool {
        matches!(self.kind, CompositeKind::None)
    }

    /// Modulus w.r.t. ℓ2.
    pub fn strong_convexity(&self) -> f64 {
        match self.kind {
            CompositeKind::HalfSquaredL2 { weight } => weight,
            _ => 0.0,
        }
    }

    /// Lipschitz constant over `set` in the dual of `norm`.
    pub fn lipschitz(&self, set: &FeasibleSet, norm: Norm) -> f64 {
        match self.kind {
            CompositeKind::None => 0.0,
            CompositeKind::L1 { weight } => weight * norm.dual().of(&vec![1.0; set.dim()]),
            CompositeKind::HalfSquaredL2 { weight } => weight * set.sup_distance(&vec![0.0; set.dim()], norm.dual()),
        }
    }

    /// The minimizer over `set` when it is unique.
    pub fn unique_argmin(&self, set: &FeasibleSet) -> Result<Option<Point>> {
        match self.kind {
            CompositeKind::None => Ok(None),
            CompositeKind::L1 { .. } => match set {
                FeasibleSet::Simplex { .. } => Ok(None),
                _ => l1_argmin(set).map(Some),
            },
            CompositeKind::HalfSquaredL2 { .. } => set.project(&vec![0.0; set.dim()]).map(Some),
        }
    }

    pub fn add_to(&self, obj: &mut InnerObjective, weight: f64) {
        match self.kind {
            CompositeKind::None => {}
            CompositeKind::L1 { weight: l } => obj.l1 += weight * l,
            CompositeKind::HalfSquaredL2 { weight: l } => obj.curvature += weight * l,
        }
        obj.constant -= weight * self.min_over_c;
    }
}

fn check_weight(weight: f64) -> Result<()> {
    if weight > 0.0 && weight.is_finite() {
        Ok(())
    } else {
        Err(config(format!("composite weight must be positive, got {weight}")))
    }
}

/// A minimizer of ‖w‖₁ over the set.
fn l1_argmin(set: &FeasibleSet) -> Result<Point> {
    match set {
        FeasibleSet::Ball { .. } if !set.is_centered_ball() => {
            Err(config("an l1 composite over a ball requires the ball to be centered at the origin"))
        }
        FeasibleSet::Simplex { dim } => Ok(Point::from_vec(vec![1.0 / *dim as f64; *dim])),
        _ => set.project(&vec![0.0; set.dim()]),
    }
}

fn default_scale() -> f64 {
    1.0
}
fn default_drift() -> f64 {
    0.5
}
fn default_threshold() -> f64 {
    0.5
}
fn default_alpha() -> f64 {
    1.0
}

/// Oblivious adversary families.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "suite", rename_all = "snake_case", deny_unknown_fields)]
pub enum AdversaryKind {
    /// Quadratics `(α/2)‖w − c_t‖²` with centers uniform in the set.
    Quadratic {
        #[serde(default = "default_alpha")]
        alpha: f64,
    },
    /// Linear losses `g_tᵀw`, `g_t = scale·(drift·m + (1 − drift)·u_t)` with a
    /// fixed unit direction `m` and `u_t` uniform in the unit ball.
    Linear {
        #[serde(default = "default_scale")]
        scale: f64,
        #[serde(default = "default_drift")]
        drift: f64,
    },
    /// Hinges `max(0, θ − g_tᵀw)` with `g_t` drawn as in the linear suite.
    Hinge {
        #[serde(default = "default_scale")]
        scale: f64,
        #[serde(default = "default_drift")]
        drift: f64,
        #[serde(default = "default_threshold")]
        threshold: f64,
    },
}

impl AdversaryKind {
    pub fn name(&self) -> &'static str {
        match self {
            AdversaryKind::Quadratic { .. } => "quadratic",
            AdversaryKind::Linear { .. } => "linear",
            AdversaryKind::Hinge { .. } => "hinge",
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            AdversaryKind::Quadratic { alpha } => alpha > 0.0 && alpha.is_finite(),
            AdversaryKind::Linear { scale, drift } => scale > 0.0 && scale.is_finite() && (0.0..=1.0).contains(&drift),
            AdversaryKind::Hinge { scale, drift, threshold } => {
                scale > 0.0 && scale.is_finite() && (0.0..=1.0).contains(&drift) && threshold.is_finite()
            }
        };
        if ok {
            Ok(())
        } else {
            Err(config(format!("invalid adversary parameters {self:?}")))
        }
    }
}

/// Per-step generator keyed by `(seed, stream)`.
fn step_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// A fully materialized loss sequence together with its uniform constants.
#[derive(Clone, Debug, PartialEq)]
pub struct AdversarySequence {
    pub kind: AdversaryKind,
    pub seed: u64,
    pub horizon: usize,
    pub dim: usize,
    pub norm: Norm,
    pub composite: CompositePart,
    pub losses: Vec<Loss>,
    /// Maximum Lipschitz constant of the `ℓ_t` alone.
    pub lipschitz: f64,
    /// Minimum strong convexity modulus of the `ℓ_t`.
    pub strong_convexity: f64,
    pub composite_lipschitz: f64,
}

impl AdversarySequence {
    pub fn generate(
        kind: AdversaryKind,
        seed: u64,
        horizon: usize,
        set: &FeasibleSet,
        norm: Norm,
        composite: CompositePart,
    ) -> Result<Self> {
        kind.validate()?;
        let dim = set.dim();
        let drift_dir = sample_unit_sphere(&mut step_rng(seed, u64::MAX), dim);
        let direction = |rng: &mut ChaCha8Rng, scale: f64, drift: f64| -> Point {
            let u = sample_unit_ball(rng, dim);
            Point::from_vec(drift_dir.iter().zip(&u).map(|(m, ui)| scale * (drift * m + (1.0 - drift) * ui)).collect())
        };
        let mut losses = Vec::with_capacity(horizon);
        for t in 0..horizon {
            let mut rng = step_rng(seed, t as u64);
            let loss = match kind {
                AdversaryKind::Quadratic { alpha } => Loss::quadratic(set.sample(&mut rng), alpha, set, norm)?,
                AdversaryKind::Linear { scale, drift } => Loss::linear(direction(&mut rng, scale, drift), norm),
                AdversaryKind::Hinge { scale, drift, threshold } => {
                    Loss::hinge(direction(&mut rng, scale, drift), threshold, norm)
                }
            };
            losses.push(loss);
        }
        Ok(Self::from_losses(kind, seed, set, norm, composite, losses))
    }

    /// Wraps an explicit list of losses, computing the uniform constants.
    pub fn from_losses(
        kind: AdversaryKind,
        seed: u64,
        set: &FeasibleSet,
        norm: Norm,
        composite: CompositePart,
        losses: Vec<Loss>,
    ) -> Self {
        let lipschitz = losses.iter().fold(0.0f64, |m, l| m.max(l.lipschitz));
        let strong_convexity = if losses.is_empty() {
            0.0
        } else {
            losses.iter().fold(f64::INFINITY, |m, l| m.min(l.strong_convexity))
        };
        AdversarySequence {
            kind,
            seed,
            horizon: losses.len(),
            dim: set.dim(),
            norm,
            composite,
            composite_lipschitz: composite.lipschitz(set, norm),
            losses,
            lipschitz,
            strong_convexity,
        }
    }

    /// Lipschitz constant of the full per-round loss `ℓ_t + r`.
    pub fn total_lipschitz(&self) -> f64 {
        self.lipschitz + self.composite_lipschitz
    }

    /// `ℓ_t(w) + r(w)` for the zero-based round index `t`.
    pub fn round_value(&self, t: usize, w: &[f64]) -> f64 {
        self.losses[t].value(w) + self.composite.value(w)
    }

    pub fn has_hinge(&self) -> bool {
        self.losses.iter().any(Loss::has_hinge)
    }
}

/// Best fixed point in hindsight and its certified accuracy.
#[derive(Clone, Debug, PartialEq)]
pub struct Hindsight {
    pub point: Point,
    /// `Σ_t ℓ_t(w*) + r(w*)`, by direct summation.
    pub value: f64,
    /// Certified bound on `value − min`, the ε_* of slack accounting.
    pub slack: f64,
    pub certificate: SolveCertificate,
}

/// The hindsight objective `Σ_t (ℓ_t + r)` as an inner objective.
pub fn hindsight_objective(losses: &[Loss], composite: &CompositePart, dim: usize) -> InnerObjective {
    let mut obj = InnerObjective::new(dim);
    for l in losses {
        l.add_to(&mut obj, 1.0);
    }
    composite.add_to(&mut obj, losses.len() as f64);
    obj
}

/// Hindsight optimum over `set`, failing unless the certificate reaches
/// [`HINDSIGHT_TOLERANCE`].
pub fn hindsight_optimum(seq: &AdversarySequence, set: &FeasibleSet) -> Result<Hindsight> {
    let h = hindsight_optimum_tolerant(&seq.losses, &seq.composite, set)?;
    if h.certificate.status == SolveStatus::Truncated || h.slack > HINDSIGHT_TOLERANCE {
        return Err(Error::HindsightUncertified { achieved: h.slack, required: HINDSIGHT_TOLERANCE });
    }
    Ok(h)
}

/// Hindsight optimum that reports, rather than rejects, a loose certificate.
pub fn hindsight_optimum_tolerant(losses: &[Loss], composite: &CompositePart, set: &FeasibleSet) -> Result<Hindsight> {
    let obj = hindsight_objective(losses, composite, set.dim());
    let sol = minimize_certified(set, &obj, HINDSIGHT_TOLERANCE, 2_000)?;
    let value = losses.iter().map(|l| l.value(&sol.point)).sum::<f64>() + losses.len() as f64 * composite.value(&sol.point);
    Ok(Hindsight { slack: sol.certificate.suboptimality, certificate: sol.certificate, point: sol.point, value })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::sample_normal;
    use crate::oracles;
    use crate::solver::{solve, SolveOptions};

    fn p(v: &[f64]) -> Point {
        Point::new(v.to_vec()).unwrap()
    }

    fn ball(d: usize) -> FeasibleSet {
        FeasibleSet::centered_ball(d, 1.0).unwrap()
    }

    #[test]
    fn values() {
        let lin = Loss::linear(p(&[1.0, 0.0]), Norm::L2);
        assert_eq!(lin.value(&[0.0, 1.0]), 0.0);
        let q = Loss::quadratic(p(&[0.1, -0.2]), 2.0, &ball(2), Norm::L2).unwrap();
        assert_eq!(q.value(&[0.1, -0.2]), 0.0);

        let mut rng = step_rng(1, 0);
        let g = [0.7, -1.3, 0.4];
        let h = Loss::hinge(p(&g), 0.3, Norm::L2);
        for _ in 0..200 {
            let w = ball(3).sample(&mut rng);
            let s = 0.3 - (g[0] * w[0] + g[1] * w[1] + g[2] * w[2]);
            let direct = if s > 0.0 { s } else { 0.0 };
            assert!((h.value(&w) - direct).abs() < 1e-15);
        }
    }

    #[test]
    fn subgradients() {
        let g = p(&[0.3, -0.4]);
        assert_eq!(Loss::linear(g.clone(), Norm::L2).subgradient(&[0.5, 0.5]), g.to_vec());

        let set = ball(2);
        let q = Loss::quadratic(p(&[0.2, 0.1]), 1.5, &set, Norm::L2).unwrap();
        let w = [-0.3, 0.6];
        let fd = oracles::central_difference(|x| q.value(x), &w, 1e-6);
        for (a, b) in q.subgradient(&w).iter().zip(&fd) {
            assert!((a - b).abs() < 1e-4);
        }

        // At the kink the subgradient inequality must still hold.
        let h = Loss::hinge(p(&[1.0, 1.0]), 0.5, Norm::L2);
        let kink = [0.25, 0.25];
        let s = h.subgradient(&kink);
        let mut rng = step_rng(2, 0);
        for _ in 0..2000 {
            let y = set.sample(&mut rng);
            let lin = h.value(&kink) + s[0] * (y[0] - kink[0]) + s[1] * (y[1] - kink[1]);
            assert!(h.value(&y) >= lin - 1e-15);
        }
    }

    #[test]
    fn generated_constants_are_certified() {
        let sets = [
            (FeasibleSet::centered_ball(4, 1.0).unwrap(), Norm::L2),
            (FeasibleSet::uniform_box(3, -0.5, 1.0).unwrap(), Norm::L2),
            (FeasibleSet::simplex(4).unwrap(), Norm::L1),
        ];
        let kinds = [
            AdversaryKind::Quadratic { alpha: 1.3 },
            AdversaryKind::Linear { scale: 2.0, drift: 0.3 },
            AdversaryKind::Hinge { scale: 1.0, drift: 0.5, threshold: 0.4 },
        ];
        let mut rng = step_rng(3, 0);
        for (set, norm) in &sets {
            for kind in kinds {
                let seq = AdversarySequence::generate(kind, 9, 30, set, *norm, CompositePart::none()).unwrap();
                for loss in &seq.losses {
                    for _ in 0..200 {
                        let x = set.sample(&mut rng);
                        let y = set.sample(&mut rng);
                        let ratio = (loss.value(&x) - loss.value(&y)).abs() / x.distance(&y, *norm);
                        assert!(ratio <= seq.lipschitz * (1.0 + 1e-9));
                        let gy = loss.subgradient(&y);
                        let bd = loss.value(&x) - loss.value(&y) - dot(&gy, &x.sub(&y));
                        let n = x.distance(&y, Norm::L2);
                        assert!(bd >= 0.5 * loss.strong_convexity * n * n - 1e-10);
                    }
                }
            }
        }
    }

    #[test]
    fn composite_lipschitz_is_certified() {
        let mut rng = step_rng(4, 0);
        let set = FeasibleSet::uniform_box(3, -1.0, 0.5).unwrap();
        for kind in [CompositeKind::L1 { weight: 0.3 }, CompositeKind::HalfSquaredL2 { weight: 0.8 }] {
            let r = CompositePart::new(kind, &set).unwrap();
            let l = r.lipschitz(&set, Norm::L2);
            for _ in 0..2000 {
                let x = set.sample(&mut rng);
                let y = set.sample(&mut rng);
                assert!((r.value(&x) - r.value(&y)).abs() <= l * x.distance(&y, Norm::L2) * (1.0 + 1e-9));
                assert!(r.value(&x) >= -1e-15);
            }
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let set = ball(3);
        let kind = AdversaryKind::Linear { scale: 1.0, drift: 0.5 };
        let a = AdversarySequence::generate(kind, 42, 50, &set, Norm::L2, CompositePart::none()).unwrap();
        let b = AdversarySequence::generate(kind, 42, 50, &set, Norm::L2, CompositePart::none()).unwrap();
        assert_eq!(a, b);
        let c = AdversarySequence::generate(kind, 43, 50, &set, Norm::L2, CompositePart::none()).unwrap();
        assert_ne!(a, c);
        // Each round depends only on (seed, t).
        let short = AdversarySequence::generate(kind, 42, 10, &set, Norm::L2, CompositePart::none()).unwrap();
        assert_eq!(&a.losses[..10], &short.losses[..]);
    }

    #[test]
    fn hindsight_of_identical_quadratics_is_their_center() {
        let set = ball(2);
        let c = p(&[0.3, -0.1]);
        let losses = vec![Loss::quadratic(c.clone(), 1.0, &set, Norm::L2).unwrap(); 5];
        let h = hindsight_optimum_tolerant(&losses, &CompositePart::none(), &set).unwrap();
        assert!(h.point.distance(&c, Norm::L2) < 1e-15);
        assert!(h.value.abs() < 1e-15);
    }

    #[test]
    fn hindsight_of_two_quadratics_is_the_midpoint() {
        let set = ball(2);
        let losses = vec![
            Loss::quadratic(p(&[0.4, 0.0]), 2.0, &set, Norm::L2).unwrap(),
            Loss::quadratic(p(&[0.0, 0.4]), 2.0, &set, Norm::L2).unwrap(),
        ];
        let h = hindsight_optimum_tolerant(&losses, &CompositePart::none(), &set).unwrap();
        assert!(h.point.distance(&[0.2, 0.2], Norm::L2) < 1e-15);
    }

    #[test]
    fn hindsight_of_linear_losses_over_ball_matches_angular_grid() {
        let set = ball(2);
        let seq = AdversarySequence::generate(
            AdversaryKind::Linear { scale: 1.0, drift: 0.2 },
            5,
            20,
            &set,
            Norm::L2,
            CompositePart::none(),
        )
        .unwrap();
        let h = hindsight_optimum(&seq, &set).unwrap();
        let mut mean = [0.0; 2];
        for l in &seq.losses {
            let g = l.subgradient(&[0.0, 0.0]);
            mean[0] += g[0] / 20.0;
            mean[1] += g[1] / 20.0;
        }
        let n = norm2_sq(&mean).sqrt();
        assert!(h.point.distance(&[-mean[0] / n, -mean[1] / n], Norm::L2) < 1e-12);
        let grid = oracles::angular_grid_argmin(|w| seq.losses.iter().map(|l| l.value(w)).sum(), 1.0, 100_000);
        assert!(h.point.distance(&grid, Norm::L2) < 1e-3);
    }

    #[test]
    fn closed_form_hindsight_agrees_with_iterative_solver() {
        let set = FeasibleSet::uniform_box(3, -0.3, 0.6).unwrap();
        let composite = CompositePart::new(CompositeKind::L1 { weight: 0.2 }, &set).unwrap();
        let seq = AdversarySequence::generate(AdversaryKind::Quadratic { alpha: 1.0 }, 8, 40, &set, Norm::L2, composite).unwrap();
        let h = hindsight_optimum(&seq, &set).unwrap();
        let obj = hindsight_objective(&seq.losses, &composite, 3);
        let opts = SolveOptions { allow_closed_form: false, ..SolveOptions::default() };
        let it = solve(&set, &obj, 1e-12, &Point::zeros(3), &opts).unwrap();
        assert!((obj.value(&it.point) - obj.value(&h.point)).abs() < 1e-6);
        assert!((obj.value(&h.point) - h.value).abs() < 1e-9);
    }

    #[test]
    fn hinge_hindsight_is_certified_and_beats_samples() {
        let set = ball(3);
        let seq = AdversarySequence::generate(
            AdversaryKind::Hinge { scale: 1.0, drift: 0.3, threshold: 0.5 },
            2,
            200,
            &set,
            Norm::L2,
            CompositePart::none(),
        )
        .unwrap();
        let h = hindsight_optimum(&seq, &set).unwrap();
        assert!(h.slack <= HINDSIGHT_TOLERANCE);
        let mut rng = step_rng(7, 0);
        for _ in 0..5000 {
            let u = set.sample(&mut rng);
            let v: f64 = seq.losses.iter().map(|l| l.value(&u)).sum();
            assert!(v >= h.value - h.slack - 1e-9);
        }
    }

    #[test]
    fn averaged_loss_is_the_mean() {
        let set = ball(2);
        let mut rng = step_rng(8, 0);
        let parts: Vec<Loss> = (0..4)
            .map(|_| {
                let c = set.sample(&mut rng);
                Loss::quadratic(c, 1.0 + sample_normal(&mut rng).abs(), &set, Norm::L2).unwrap()
            })
            .collect();
        let avg = Loss::average(parts.clone()).unwrap();
        let w = [0.1, 0.2];
        let mean: f64 = parts.iter().map(|l| l.value(&w)).sum::<f64>() / 4.0;
        assert!((avg.value(&w) - mean).abs() < 1e-15);
        let mut obj = InnerObjective::new(2);
        avg.add_to(&mut obj, 1.0);
        assert!((obj.value(&w) - mean).abs() < 1e-14);
    }
}
