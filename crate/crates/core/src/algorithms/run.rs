use crate::error::{Error, Result};
use crate::geometry::{FeasibleSet, NONNEG_TOL};
use crate::losses::AdversarySequence;
use crate::metrics::Trajectory;

use super::{Learner, LearnerInfo};

/// Plays `learner` against every loss of `seq` and records the trajectory.
///
/// Each emitted point is checked for membership in `set`. The trajectory has
/// no hindsight attached.
pub fn run(learner: &mut dyn Learner, info: Option<LearnerInfo>, seq: &AdversarySequence, set: &FeasibleSet) -> Result<Trajectory> {
    if seq.dim != set.dim() {
        return Err(Error::Dimension { expected: set.dim(), got: seq.dim });
    }
    let horizon = seq.losses.len();
    let mut points = Vec::with_capacity(horizon + 1);
    let mut certificates = Vec::with_capacity(horizon);
    let mut etas = Vec::with_capacity(horizon);
    let name = learner.name();
    let feasible = |w: &[f64]| -> Result<()> {
        if set.contains(w, NONNEG_TOL) {
            Ok(())
        } else {
            Err(Error::Domain(format!("{} emitted an infeasible point {w:?}", name)))
        }
    };
    if horizon > 0 {
        points.push(learner.play().clone());
        feasible(&points[0])?;
    }
    for loss in &seq.losses {
        let info = learner.observe(loss)?;
        let w = learner.play().clone();
        feasible(&w)?;
        points.push(w);
        certificates.push(info.certificate);
        etas.push(info.eta);
    }
    if let Some(last) = learner.finish()? {
        let w = learner.play().clone();
        feasible(&w)?;
        *points.last_mut().expect("finish only reports after a round") = w;
        *certificates.last_mut().expect("finish only reports after a round") = last.certificate;
    }

    let (inner, inner_full_blocks) = match learner.inner_record() {
        Some(rec) => {
            let inner = Trajectory {
                learner: format!("inner({})", learner.name()),
                info: info.as_ref().map(|i| LearnerInfo { block: None, ..i.clone() }),
                seed: seq.seed,
                set: set.clone(),
                norm: seq.norm,
                points: if rec.losses.is_empty() { Vec::new() } else { rec.points },
                losses: rec.losses,
                composite: seq.composite,
                certificates: rec.certificates,
                etas: rec.etas,
                lipschitz: seq.lipschitz,
                composite_lipschitz: seq.composite_lipschitz,
                strong_convexity: seq.strong_convexity,
                hindsight: None,
                inner: None,
                inner_full_blocks: 0,
            };
            (Some(Box::new(inner)), rec.full_blocks)
        }
        None => (None, 0),
    };

    Ok(Trajectory {
        learner: learner.name(),
        info,
        seed: seq.seed,
        set: set.clone(),
        norm: seq.norm,
        points,
        losses: seq.losses.clone(),
        composite: seq.composite,
        certificates,
        etas,
        lipschitz: seq.lipschitz,
        composite_lipschitz: seq.composite_lipschitz,
        strong_convexity: seq.strong_convexity,
        hindsight: None,
        inner,
        inner_full_blocks,
    })
}
