//! Points, norms, feasible sets, regularizers and Bregman divergences.
//!
//! Every set here has an exact Euclidean projection. The two built-in
//! regularizers are `½‖w‖²` (1-strongly convex w.r.t. ℓ2) and the negative
//! entropy on the simplex shifted by `ln d` so that its minimum is zero
//! (1-strongly convex w.r.t. ℓ1).

use std::ops::Deref;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{config, Error, Result};

/// Entropy iterates are floored at this value before the gradient is taken.
pub const ENTROPY_FLOOR: f64 = 1e-12;

/// Absolute tolerance for nonnegativity assertions on Bregman divergences.
pub const NONNEG_TOL: f64 = 1e-10;

/// A finite real vector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.iter().all(|c| c.is_finite()) {
            Ok(Point(coords))
        } else {
            Err(Error::NonFinite)
        }
    }

    /// Wraps coordinates produced by arithmetic on finite inputs.
    pub(crate) fn from_vec(coords: Vec<f64>) -> Self {
        debug_assert!(coords.iter().all(|c| c.is_finite()), "non-finite point {coords:?}");
        Point(coords)
    }

    pub fn zeros(dim: usize) -> Self {
        Point(vec![0.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn sub(&self, other: &[f64]) -> Point {
        Point(self.0.iter().zip(other).map(|(a, b)| a - b).collect())
    }

    pub fn add(&self, other: &[f64]) -> Point {
        Point(self.0.iter().zip(other).map(|(a, b)| a + b).collect())
    }

    pub fn scaled(&self, s: f64) -> Point {
        Point(self.0.iter().map(|a| a * s).collect())
    }

    pub fn norm(&self, norm: Norm) -> f64 {
        norm.of(&self.0)
    }

    pub fn distance(&self, other: &[f64], norm: Norm) -> f64 {
        norm.of_diff(&self.0, other)
    }

    pub fn check_dim(&self, dim: usize) -> Result<()> {
        if self.dim() == dim {
            Ok(())
        } else {
            Err(Error::Dimension { expected: dim, got: self.dim() })
        }
    }
}

impl Deref for Point {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl From<Point> for Vec<f64> {
    fn from(p: Point) -> Vec<f64> {
        p.0
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm2_sq(a: &[f64]) -> f64 {
    a.iter().map(|x| x * x).sum()
}

/// Sign with `sign(0) = 0`.
pub(crate) fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

pub(crate) fn soft_threshold(x: f64, t: f64) -> f64 {
    if x > t {
        x - t
    } else if x < -t {
        x + t
    } else {
        0.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Norm {
    L1,
    L2,
    LInf,
}

impl Norm {
    pub fn dual(self) -> Norm {
        match self {
            Norm::L1 => Norm::LInf,
            Norm::L2 => Norm::L2,
            Norm::LInf => Norm::L1,
        }
    }

    pub fn of(self, v: &[f64]) -> f64 {
        match self {
            Norm::L1 => v.iter().map(|x| x.abs()).sum(),
            Norm::L2 => norm2_sq(v).sqrt(),
            Norm::LInf => v.iter().fold(0.0, |m, x| m.max(x.abs())),
        }
    }

    pub fn of_diff(self, a: &[f64], b: &[f64]) -> f64 {
        let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        self.of(&d)
    }
}

/// A compact convex set with an exact Euclidean projection.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FeasibleSet {
    Ball { center: Point, radius: f64 },
    Box { lower: Point, upper: Point },
    Simplex { dim: usize },
}

impl FeasibleSet {
    pub fn ball(center: Point, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) || center.dim() == 0 {
            return Err(config(format!("ball needs a positive radius and dimension, got r={radius}")));
        }
        Ok(FeasibleSet::Ball { center, radius })
    }

    pub fn centered_ball(dim: usize, radius: f64) -> Result<Self> {
        Self::ball(Point::zeros(dim), radius)
    }

    pub fn cube(lower: Point, upper: Point) -> Result<Self> {
        if lower.dim() != upper.dim() || lower.dim() == 0 {
            return Err(Error::Dimension { expected: lower.dim(), got: upper.dim() });
        }
        if lower.iter().zip(upper.iter()).any(|(l, u)| !(l < u)) {
            return Err(config("box needs lower < upper in every coordinate"));
        }
        Ok(FeasibleSet::Box { lower, upper })
    }

    pub fn uniform_box(dim: usize, lo: f64, hi: f64) -> Result<Self> {
        Self::cube(Point::new(vec![lo; dim])?, Point::new(vec![hi; dim])?)
    }

    pub fn simplex(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(config("simplex needs dimension at least 2"));
        }
        Ok(FeasibleSet::Simplex { dim })
    }

    /// Checks invariants of a set built by deserialization.
    pub fn validate(&self) -> Result<()> {
        match self {
            FeasibleSet::Ball { center, radius } => Self::ball(center.clone(), *radius).map(|_| ()),
            FeasibleSet::Box { lower, upper } => Self::cube(lower.clone(), upper.clone()).map(|_| ()),
            FeasibleSet::Simplex { dim } => Self::simplex(*dim).map(|_| ()),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            FeasibleSet::Ball { center, .. } => center.dim(),
            FeasibleSet::Box { lower, .. } => lower.dim(),
            FeasibleSet::Simplex { dim } => *dim,
        }
    }

    /// Exact ℓ2 diameter.
    pub fn diameter(&self) -> f64 {
        self.diameter_in(Norm::L2)
    }

    pub fn diameter_in(&self, norm: Norm) -> f64 {
        match self {
            FeasibleSet::Ball { radius, center } => match norm {
                Norm::L2 | Norm::LInf => 2.0 * radius,
                Norm::L1 => 2.0 * radius * (center.dim() as f64).sqrt(),
            },
            FeasibleSet::Box { lower, upper } => norm.of_diff(upper, lower),
            FeasibleSet::Simplex { .. } => match norm {
                Norm::L1 => 2.0,
                Norm::L2 => std::f64::consts::SQRT_2,
                Norm::LInf => 1.0,
            },
        }
    }

    pub fn is_centered_ball(&self) -> bool {
        matches!(self, FeasibleSet::Ball { center, .. } if center.iter().all(|c| *c == 0.0))
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        if x.len() != self.dim() {
            return false;
        }
        match self {
            FeasibleSet::Ball { center, radius } => Norm::L2.of_diff(x, center) <= radius + tol,
            FeasibleSet::Box { lower, upper } => x
                .iter()
                .zip(lower.iter().zip(upper.iter()))
                .all(|(v, (l, u))| *v >= l - tol && *v <= u + tol),
            FeasibleSet::Simplex { .. } => {
                x.iter().all(|v| *v >= -tol) && (x.iter().sum::<f64>() - 1.0).abs() <= tol * x.len() as f64
            }
        }
    }

    /// Euclidean projection onto the set.
    pub fn project(&self, x: &[f64]) -> Result<Point> {
        if x.len() != self.dim() {
            return Err(Error::Dimension { expected: self.dim(), got: x.len() });
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Point::from_vec(self.project_unchecked(x)))
    }

    pub(crate) fn project_unchecked(&self, x: &[f64]) -> Vec<f64> {
        match self {
            FeasibleSet::Ball { center, radius } => {
                let dist = Norm::L2.of_diff(x, center);
                if dist <= *radius {
                    x.to_vec()
                } else {
                    let s = radius / dist;
                    x.iter().zip(center.iter()).map(|(v, c)| c + s * (v - c)).collect()
                }
            }
            FeasibleSet::Box { lower, upper } => x
                .iter()
                .zip(lower.iter().zip(upper.iter()))
                .map(|(v, (l, u))| v.clamp(*l, *u))
                .collect(),
            FeasibleSet::Simplex { .. } => project_simplex_sum(x, 1.0),
        }
    }

    /// Projection onto `{w ∈ Δ : w_i ≥ floor}`; only meaningful for simplices.
    pub(crate) fn project_floored_simplex(x: &[f64], floor: f64) -> Vec<f64> {
        let d = x.len() as f64;
        let mass = 1.0 - d * floor;
        let shifted: Vec<f64> = x.iter().map(|v| v - floor).collect();
        project_simplex_sum(&shifted, mass).into_iter().map(|p| p + floor).collect()
    }

    /// `sup_{w ∈ C} ‖w − c‖` in the given norm.
    pub fn sup_distance(&self, c: &[f64], norm: Norm) -> f64 {
        match self {
            FeasibleSet::Ball { center, radius } => {
                let offset = norm.of_diff(center, c);
                let unit = match norm {
                    Norm::L2 | Norm::LInf => 1.0,
                    Norm::L1 => (center.dim() as f64).sqrt(),
                };
                offset + radius * unit
            }
            FeasibleSet::Box { lower, upper } => {
                let far: Vec<f64> = c
                    .iter()
                    .zip(lower.iter().zip(upper.iter()))
                    .map(|(ci, (l, u))| (ci - l).abs().max((u - ci).abs()))
                    .collect();
                norm.of(&far)
            }
            FeasibleSet::Simplex { dim } => (0..*dim)
                .map(|i| {
                    let mut v: Vec<f64> = c.iter().map(|x| -x).collect();
                    v[i] += 1.0;
                    norm.of(&v)
                })
                .fold(0.0, f64::max),
        }
    }

    /// Uniform sample from the set.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Point {
        match self {
            FeasibleSet::Ball { center, radius } => {
                let u = sample_unit_ball(rng, center.dim());
                Point::from_vec(center.iter().zip(&u).map(|(c, x)| c + radius * x).collect())
            }
            FeasibleSet::Box { lower, upper } => Point::from_vec(
                lower.iter().zip(upper.iter()).map(|(l, u)| l + (u - l) * rng.gen::<f64>()).collect(),
            ),
            FeasibleSet::Simplex { dim } => {
                let e: Vec<f64> = (0..*dim).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
                let s: f64 = e.iter().sum();
                Point::from_vec(e.into_iter().map(|x| x / s).collect())
            }
        }
    }

    /// `argmin_{w ∈ C} vᵀw + l1·‖w‖₁` in closed form.
    pub fn minimize_linear(&self, v: &[f64], l1: f64) -> Result<Point> {
        if v.len() != self.dim() {
            return Err(Error::Dimension { expected: self.dim(), got: v.len() });
        }
        let w = match self {
            FeasibleSet::Box { lower, upper } => v
                .iter()
                .zip(lower.iter().zip(upper.iter()))
                .map(|(vi, (l, u))| {
                    let cost = |x: f64| vi * x + l1 * x.abs();
                    let mut best = 0.0_f64.clamp(*l, *u);
                    for cand in [*l, *u] {
                        if cost(cand) < cost(best) {
                            best = cand;
                        }
                    }
                    best
                })
                .collect(),
            FeasibleSet::Ball { center, radius } => {
                if l1 > 0.0 && !self.is_centered_ball() {
                    return Err(config("l1 terms over a ball require the ball to be centered at the origin"));
                }
                let s: Vec<f64> = v.iter().map(|x| soft_threshold(*x, l1)).collect();
                let n = norm2_sq(&s).sqrt();
                if n == 0.0 {
                    center.to_vec()
                } else {
                    center.iter().zip(&s).map(|(c, si)| c - radius * si / n).collect()
                }
            }
            FeasibleSet::Simplex { dim } => {
                // ‖w‖₁ = 1 on the simplex, so only the linear part matters.
                let mut best = 0;
                for i in 1..*dim {
                    if v[i] < v[best] {
                        best = i;
                    }
                }
                let mut w = vec![0.0; *dim];
                w[best] = 1.0;
                w
            }
        };
        Ok(Point::from_vec(w))
    }

    /// `argmin_{w ∈ C} ½‖w − x‖² + thresh·‖w‖₁`.
    ///
    /// Exact for boxes (separable), origin-centred balls (projection after
    /// soft-thresholding) and simplices (where `‖w‖₁` is constant).
    pub fn prox_l1(&self, x: &[f64], thresh: f64) -> Result<Point> {
        if thresh == 0.0 {
            return self.project(x);
        }
        match self {
            FeasibleSet::Box { .. } => {
                let s: Vec<f64> = x.iter().map(|v| soft_threshold(*v, thresh)).collect();
                self.project(&s)
            }
            FeasibleSet::Ball { .. } => {
                if !self.is_centered_ball() {
                    return Err(config("l1 prox over a ball requires the ball to be centered at the origin"));
                }
                let s: Vec<f64> = x.iter().map(|v| soft_threshold(*v, thresh)).collect();
                self.project(&s)
            }
            FeasibleSet::Simplex { .. } => self.project(x),
        }
    }

    /// Whether `prox_l1` is exact for this set.
    pub fn supports_l1(&self) -> bool {
        !matches!(self, FeasibleSet::Ball { .. }) || self.is_centered_ball()
    }
}

/// Projection onto `{w ≥ 0, Σw = mass}` by the sort-and-threshold rule.
pub(crate) fn project_simplex_sum(x: &[f64], mass: f64) -> Vec<f64> {
    let mut u = x.to_vec();
    u.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (j, uj) in u.iter().enumerate() {
        cumsum += uj;
        let t = (cumsum - mass) / (j as f64 + 1.0);
        if uj - t > 0.0 {
            theta = t;
        }
    }
    x.iter().map(|v| (v - theta).max(0.0)).collect()
}

pub(crate) fn sample_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    // Box-Muller; u1 in (0, 1].
    let u1 = 1.0 - rng.gen::<f64>();
    let u2 = rng.gen::<f64>();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

pub(crate) fn sample_unit_sphere<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| sample_normal(rng)).collect();
        let n = norm2_sq(&v).sqrt();
        if n > 1e-12 {
            return v.into_iter().map(|x| x / n).collect();
        }
    }
}

pub(crate) fn sample_unit_ball<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<f64> {
    let r = rng.gen::<f64>().powf(1.0 / dim as f64);
    sample_unit_sphere(rng, dim).into_iter().map(|x| r * x).collect()
}

/// Strongly convex generator of a Bregman divergence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regularizer {
    /// `½‖w‖²`, modulus 1 w.r.t. ℓ2.
    HalfSquaredL2,
    /// `Σ w_i ln w_i + ln d` on the simplex, modulus 1 w.r.t. ℓ1.
    NegativeEntropy,
}

impl Regularizer {
    pub fn strong_convexity_modulus(self) -> f64 {
        1.0
    }

    /// The norm the modulus refers to; also the norm used for stability.
    pub fn norm(self) -> Norm {
        match self {
            Regularizer::HalfSquaredL2 => Norm::L2,
            Regularizer::NegativeEntropy => Norm::L1,
        }
    }

    /// Both built-ins are nonnegative on their admissible sets.
    pub fn nonneg(self) -> bool {
        true
    }

    pub fn check_compatible(self, set: &FeasibleSet) -> Result<()> {
        match (self, set) {
            (Regularizer::NegativeEntropy, FeasibleSet::Simplex { .. }) | (Regularizer::HalfSquaredL2, _) => Ok(()),
            (Regularizer::NegativeEntropy, _) => Err(config("negative entropy is only supported on the simplex")),
        }
    }

    pub fn value(self, w: &[f64]) -> f64 {
        match self {
            Regularizer::HalfSquaredL2 => 0.5 * norm2_sq(w),
            Regularizer::NegativeEntropy => {
                let s: f64 = w.iter().map(|x| if *x > 0.0 { x * x.ln() } else { 0.0 }).sum();
                s + (w.len() as f64).ln()
            }
        }
    }

    /// Gradient; entropy coordinates are floored at [`ENTROPY_FLOOR`].
    pub fn gradient(self, w: &[f64]) -> Vec<f64> {
        match self {
            Regularizer::HalfSquaredL2 => w.to_vec(),
            Regularizer::NegativeEntropy => w.iter().map(|x| x.max(ENTROPY_FLOOR).ln() + 1.0).collect(),
        }
    }

    pub fn argmin(self, set: &FeasibleSet) -> Result<Point> {
        self.check_compatible(set)?;
        match self {
            Regularizer::HalfSquaredL2 => set.project(&vec![0.0; set.dim()]),
            Regularizer::NegativeEntropy => Ok(Point::from_vec(vec![1.0 / set.dim() as f64; set.dim()])),
        }
    }

    /// `sup_{w ∈ C} R(w)`.
    pub fn sup_value(self, set: &FeasibleSet) -> Result<f64> {
        self.check_compatible(set)?;
        Ok(match self {
            Regularizer::HalfSquaredL2 => {
                let s = set.sup_distance(&vec![0.0; set.dim()], Norm::L2);
                0.5 * s * s
            }
            Regularizer::NegativeEntropy => (set.dim() as f64).ln(),
        })
    }

    /// `D_R(x, y) = R(x) − R(y) − ∇R(y)ᵀ(x − y)`.
    pub fn bregman(self, x: &[f64], y: &[f64]) -> Result<f64> {
        if x.len() != y.len() {
            return Err(Error::Dimension { expected: y.len(), got: x.len() });
        }
        if self == Regularizer::NegativeEntropy && y.iter().any(|v| *v <= 0.0) {
            return Err(Error::Domain("entropy Bregman divergence needs y in the relative interior".into()));
        }
        let g = self.gradient(y);
        let lin: f64 = g.iter().zip(x.iter().zip(y)).map(|(gi, (xi, yi))| gi * (xi - yi)).sum();
        Ok(self.value(x) - self.value(y) - lin)
    }

    /// `sup_{w ∈ C} ‖∇R(w)‖_*` with the default entropy floor.
    pub fn dual_norm_grad_bound(self, set: &FeasibleSet) -> Result<f64> {
        self.dual_norm_grad_bound_with_floor(set, ENTROPY_FLOOR)
    }

    pub fn dual_norm_grad_bound_with_floor(self, set: &FeasibleSet, floor: f64) -> Result<f64> {
        self.check_compatible(set)?;
        match self {
            Regularizer::HalfSquaredL2 => Ok(set.sup_distance(&vec![0.0; set.dim()], Norm::L2)),
            Regularizer::NegativeEntropy => {
                // ln w + 1 is monotone, so the extremes sit at the floor and at the
                // largest admissible coordinate.
                let d = set.dim() as f64;
                let lo = floor.ln() + 1.0;
                let hi = (1.0 - (d - 1.0) * floor).ln() + 1.0;
                Ok(lo.abs().max(hi.abs()))
            }
        }
    }
}

/// Free-function form of [`FeasibleSet::project`].
pub fn project(set: &FeasibleSet, x: &Point) -> Result<Point> {
    set.project(x)
}

/// Free-function form of [`Regularizer::bregman`].
pub fn bregman(r: Regularizer, x: &Point, y: &Point) -> Result<f64> {
    r.bregman(x, y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(v: &[f64]) -> Point {
        Point::new(v.to_vec()).unwrap()
    }

    #[test]
    fn box_interior_point_is_fixed() {
        let set = FeasibleSet::uniform_box(2, 0.0, 1.0).unwrap();
        assert_eq!(set.project(&[0.5, 0.5]).unwrap().as_slice(), &[0.5, 0.5]);
    }

    #[test]
    fn ball_projection_scales_radially() {
        let set = FeasibleSet::centered_ball(2, 1.0).unwrap();
        let w = set.project(&[3.0, 4.0]).unwrap();
        assert!((w[0] - 0.6).abs() < 1e-15 && (w[1] - 0.8).abs() < 1e-15);
    }

    #[test]
    fn simplex_projection_matches_grid_search() {
        let set = FeasibleSet::simplex(3).unwrap();
        let x = [0.9, 0.6, 0.1];
        let w = set.project(&x).unwrap();
        let grid = oracles::simplex_grid_projection(&x);
        for i in 0..3 {
            assert!((w[i] - grid[i]).abs() < 1e-4, "{w:?} vs {grid:?}");
        }
    }

    #[test]
    fn projection_rejects_wrong_dimension() {
        let set = FeasibleSet::simplex(3).unwrap();
        assert!(matches!(set.project(&[0.1, 0.2]), Err(Error::Dimension { expected: 3, got: 2 })));
    }

    #[test]
    fn diameters() {
        assert_eq!(FeasibleSet::centered_ball(3, 1.5).unwrap().diameter(), 3.0);
        let b = FeasibleSet::uniform_box(2, 0.0, 1.0).unwrap();
        assert!((b.diameter() - 2f64.sqrt()).abs() < 1e-15);
        assert!((FeasibleSet::simplex(4).unwrap().diameter() - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn bregman_of_half_squared_l2() {
        let r = Regularizer::HalfSquaredL2;
        let x = p(&[0.3, -0.2]);
        let y = p(&[-0.1, 0.4]);
        assert_eq!(r.bregman(&x, &x).unwrap(), 0.0);
        let half_sq = 0.5 * norm2_sq(&x.sub(&y));
        assert!((r.bregman(&x, &y).unwrap() - half_sq).abs() < 1e-15);
    }

    #[test]
    fn entropy_bregman_is_kl() {
        let r = Regularizer::NegativeEntropy;
        let x = [0.5, 0.5];
        let y = [0.25, 0.75];
        let kl = oracles::kl_divergence(&x, &y);
        assert!((r.bregman(&x, &y).unwrap() - kl).abs() < 1e-14);
    }

    #[test]
    fn entropy_bregman_rejects_boundary() {
        let r = Regularizer::NegativeEntropy;
        assert!(matches!(r.bregman(&[0.5, 0.5], &[1.0, 0.0]), Err(Error::Domain(_))));
    }

    #[test]
    fn dual_norm_grad_bounds() {
        let r = Regularizer::HalfSquaredL2;
        let ball = FeasibleSet::centered_ball(3, 2.5).unwrap();
        assert_eq!(r.dual_norm_grad_bound(&ball).unwrap(), 2.5);
        let b = FeasibleSet::uniform_box(2, 0.0, 1.0).unwrap();
        assert!((r.dual_norm_grad_bound(&b).unwrap() - 2f64.sqrt()).abs() < 1e-15);

        let s = FeasibleSet::simplex(3).unwrap();
        let closed = Regularizer::NegativeEntropy.dual_norm_grad_bound_with_floor(&s, 1e-6).unwrap();
        let grid = oracles::entropy_grad_bound_grid(3, 1e-6, 200);
        assert!((closed - grid).abs() < 1e-9, "{closed} vs {grid}");
        assert!(Regularizer::NegativeEntropy.dual_norm_grad_bound(&b).is_err());
    }

    #[test]
    fn entropy_is_zero_at_uniform_and_nonnegative() {
        let r = Regularizer::NegativeEntropy;
        assert!(r.value(&[0.25; 4]).abs() < 1e-15);
        assert!(r.value(&[1.0, 0.0, 0.0, 0.0]) > 0.0);
    }

    #[test]
    fn random_pairs_satisfy_nonnegativity_and_strong_convexity() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let cases = [
            (Regularizer::HalfSquaredL2, FeasibleSet::centered_ball(4, 1.0).unwrap()),
            (Regularizer::HalfSquaredL2, FeasibleSet::uniform_box(3, -1.0, 2.0).unwrap()),
            (Regularizer::NegativeEntropy, FeasibleSet::simplex(5).unwrap()),
        ];
        for (r, set) in cases {
            for _ in 0..10_000 {
                let x = set.sample(&mut rng);
                let y = set.sample(&mut rng);
                let d = r.bregman(&x, &y).unwrap();
                assert!(d >= -NONNEG_TOL);
                let n = x.distance(&y, r.norm());
                assert!(d >= 0.5 * r.strong_convexity_modulus() * n * n - NONNEG_TOL, "{r:?} {d} {n}");
                assert!(r.value(&x) >= -NONNEG_TOL);
            }
        }
    }

    #[test]
    fn minimizer_of_a_bregman_ball_satisfies_growth_condition() {
        // f = D_R(·, y0) over C is minimized at project(y0) for R = ½‖·‖².
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let set = FeasibleSet::uniform_box(3, 0.0, 1.0).unwrap();
        let r = Regularizer::HalfSquaredL2;
        let y0 = p(&[1.7, -0.3, 0.4]);
        let wstar = set.project(&y0).unwrap();
        let f = |u: &[f64]| r.bregman(u, &y0).unwrap();
        for _ in 0..2000 {
            let u = set.sample(&mut rng);
            let n = u.distance(&wstar, Norm::L2);
            assert!(f(&u) >= f(&wstar) + 0.5 * n * n - 1e-10);
        }
    }

    #[test]
    fn projections_are_idempotent_and_nonexpansive() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let sets = [
            FeasibleSet::ball(p(&[0.5, -1.0, 2.0]), 0.7).unwrap(),
            FeasibleSet::uniform_box(3, -0.5, 0.25).unwrap(),
            FeasibleSet::simplex(3).unwrap(),
        ];
        for set in &sets {
            for _ in 0..2000 {
                let x: Vec<f64> = (0..3).map(|_| 4.0 * sample_normal(&mut rng)).collect();
                let y: Vec<f64> = (0..3).map(|_| 4.0 * sample_normal(&mut rng)).collect();
                let px = set.project(&x).unwrap();
                let py = set.project(&y).unwrap();
                assert!(set.contains(&px, 1e-12));
                let ppx = set.project(&px).unwrap();
                assert!(ppx.distance(&px, Norm::L2) < 1e-12);
                assert!(px.distance(&py, Norm::L2) <= Norm::L2.of_diff(&x, &y) + 1e-12);
            }
        }
    }

    #[test]
    fn minimize_linear_matches_sampling() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let sets = [
            FeasibleSet::centered_ball(3, 1.0).unwrap(),
            FeasibleSet::uniform_box(3, -0.5, 1.0).unwrap(),
            FeasibleSet::simplex(3).unwrap(),
        ];
        for set in &sets {
            for l1 in [0.0, 0.3] {
                let v: Vec<f64> = (0..3).map(|_| sample_normal(&mut rng)).collect();
                let w = set.minimize_linear(&v, l1).unwrap();
                let cost = |u: &[f64]| dot(&v, u) + l1 * Norm::L1.of(u);
                for _ in 0..5000 {
                    let u = set.sample(&mut rng);
                    assert!(cost(&w) <= cost(&u) + 1e-12);
                }
            }
        }
    }

    #[test]
    fn prox_l1_needs_centered_ball() {
        let off = FeasibleSet::ball(p(&[1.0, 0.0]), 1.0).unwrap();
        assert!(off.prox_l1(&[0.2, 0.2], 0.1).is_err());
        assert!(off.prox_l1(&[0.2, 0.2], 0.0).is_ok());
    }

    #[test]
    fn sup_distance_matches_sampling() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let sets = [
            FeasibleSet::ball(p(&[0.2, 0.1]), 1.0).unwrap(),
            FeasibleSet::uniform_box(2, -1.0, 0.5).unwrap(),
            FeasibleSet::simplex(2).unwrap(),
        ];
        let c = [0.3, -0.4];
        for set in &sets {
            for norm in [Norm::L1, Norm::L2, Norm::LInf] {
                let sup = set.sup_distance(&c, norm);
                let mut seen: f64 = 0.0;
                for _ in 0..20_000 {
                    seen = seen.max(set.sample(&mut rng).distance(&c, norm));
                }
                assert!(seen <= sup + 1e-12);
                assert!(seen >= 0.97 * sup, "{set:?} {norm:?} {seen} {sup}");
            }
        }
    }
}
