use serde::{Deserialize, Serialize};

use crate::error::{config, Result};

/// A positive sequence indexed by the round `t ≥ 1`, possibly depending on
/// the horizon `T`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Schedule {
    Constant { value: f64 },
    /// `c / t`
    InverseT { c: f64 },
    /// `c / √t`
    InverseSqrtT { c: f64 },
    /// `c / t²`
    InverseTSquared { c: f64 },
    /// `c·T^power`, constant over the run.
    HorizonPower { c: f64, power: f64 },
    /// `√t`, with value 0 at `t = 0`.
    SqrtT,
    Zero,
}

impl Schedule {
    pub fn at(&self, t: usize, horizon: usize) -> f64 {
        let tf = t as f64;
        match *self {
            Schedule::Constant { value } => value,
            Schedule::InverseT { c } => c / tf,
            Schedule::InverseSqrtT { c } => c / tf.sqrt(),
            Schedule::InverseTSquared { c } => c / (tf * tf),
            Schedule::HorizonPower { c, power } => c * (horizon.max(1) as f64).powf(power),
            Schedule::SqrtT => tf.sqrt(),
            Schedule::Zero => 0.0,
        }
    }

    /// Whether the value does not change with `t`.
    pub fn is_constant(&self) -> bool {
        matches!(self, Schedule::Constant { .. } | Schedule::HorizonPower { .. } | Schedule::Zero)
    }

    /// Checks `value > 0` for every `t ≥ 1`.
    pub fn check_positive(&self, what: &str) -> Result<()> {
        let c = match *self {
            Schedule::Constant { value } => value,
            Schedule::InverseT { c }
            | Schedule::InverseSqrtT { c }
            | Schedule::InverseTSquared { c }
            | Schedule::HorizonPower { c, .. } => c,
            Schedule::SqrtT => 1.0,
            Schedule::Zero => 0.0,
        };
        if c > 0.0 && c.is_finite() {
            Ok(())
        } else {
            Err(config(format!("{what} schedule must be positive, got {self:?}")))
        }
    }

    pub fn sum(&self, horizon: usize) -> f64 {
        (1..=horizon).map(|t| self.at(t, horizon)).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values() {
        assert_eq!(Schedule::InverseT { c: 2.0 }.at(4, 10), 0.5);
        assert_eq!(Schedule::InverseSqrtT { c: 1.0 }.at(4, 10), 0.5);
        assert_eq!(Schedule::InverseTSquared { c: 1.0 }.at(4, 10), 1.0 / 16.0);
        assert_eq!(Schedule::HorizonPower { c: 1.0, power: -0.5 }.at(3, 16), 0.25);
        assert_eq!(Schedule::SqrtT.at(0, 5), 0.0);
        assert_eq!(Schedule::SqrtT.at(9, 5), 3.0);
        assert_eq!(Schedule::Zero.at(3, 5), 0.0);
    }

    #[test]
    fn positivity() {
        assert!(Schedule::Zero.check_positive("eta").is_err());
        assert!(Schedule::Constant { value: -1.0 }.check_positive("eta").is_err());
        assert!(Schedule::InverseT { c: 1.0 }.check_positive("eta").is_ok());
    }
}
