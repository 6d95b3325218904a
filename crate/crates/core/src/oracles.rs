//! Brute-force reference computations.
//!
//! Nothing here shares code with the closed forms or solvers it is used to
//! check; each routine is a direct search or a textbook formula.

/// Default grid step for two-dimensional searches.
pub const GRID_STEP: f64 = 1e-3;

/// `Σ x_i ln(x_i / y_i)` with `0 ln 0 = 0`.
pub fn kl_divergence(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| if *a > 0.0 { a * (a / b).ln() } else { 0.0 }).sum()
}

/// Central finite differences of `f` at `w`.
pub fn central_difference<F: Fn(&[f64]) -> f64>(f: F, w: &[f64], h: f64) -> Vec<f64> {
    (0..w.len())
        .map(|i| {
            let mut up = w.to_vec();
            let mut down = w.to_vec();
            up[i] += h;
            down[i] -= h;
            (f(&up) - f(&down)) / (2.0 * h)
        })
        .collect()
}

/// Minimizes `f` over the rectangle `[lower, upper]` by exhaustive search on
/// a grid of the given step, then refines three times on finer local grids.
pub fn grid_minimize_2d<F: Fn(&[f64]) -> f64>(f: F, lower: [f64; 2], upper: [f64; 2], step: f64) -> ([f64; 2], f64) {
    let nx = ((upper[0] - lower[0]) / step).round() as usize;
    let ny = ((upper[1] - lower[1]) / step).round() as usize;
    let mut best = ([lower[0], lower[1]], f64::INFINITY);
    for i in 0..=nx {
        let x = (lower[0] + i as f64 * step).min(upper[0]);
        for j in 0..=ny {
            let y = (lower[1] + j as f64 * step).min(upper[1]);
            let v = f(&[x, y]);
            if v < best.1 {
                best = ([x, y], v);
            }
        }
    }
    let mut h = step;
    for _ in 0..3 {
        let center = best.0;
        let fine = h / 10.0;
        for i in -20..=20 {
            let x = (center[0] + i as f64 * fine).clamp(lower[0], upper[0]);
            for j in -20..=20 {
                let y = (center[1] + j as f64 * fine).clamp(lower[1], upper[1]);
                let v = f(&[x, y]);
                if v < best.1 {
                    best = ([x, y], v);
                }
            }
        }
        h = fine;
    }
    best
}

/// Minimizes `f` over the disc of the given radius centered at `center`,
/// with `f = ∞` outside.
pub fn grid_minimize_disc<F: Fn(&[f64]) -> f64>(f: F, center: [f64; 2], radius: f64, step: f64) -> ([f64; 2], f64) {
    let inside = |w: &[f64]| {
        let dx = w[0] - center[0];
        let dy = w[1] - center[1];
        if dx * dx + dy * dy <= radius * radius {
            f(w)
        } else {
            f64::INFINITY
        }
    };
    grid_minimize_2d(inside, [center[0] - radius, center[1] - radius], [center[0] + radius, center[1] + radius], step)
}

/// Euclidean projection onto the 3-simplex by grid search.
pub fn simplex_grid_projection(x: &[f64]) -> Vec<f64> {
    assert_eq!(x.len(), 3, "grid projection is three-dimensional");
    let f = |p: &[f64]| {
        let r = 1.0 - p[0] - p[1];
        if r < -1e-15 {
            return f64::INFINITY;
        }
        let r = r.max(0.0);
        (p[0] - x[0]).powi(2) + (p[1] - x[1]).powi(2) + (r - x[2]).powi(2)
    };
    let (p, _) = grid_minimize_2d(f, [0.0, 0.0], [1.0, 1.0], GRID_STEP);
    vec![p[0], p[1], (1.0 - p[0] - p[1]).max(0.0)]
}

/// `max ‖ln w + 1‖_∞` over a grid on `{w ∈ Δ_d : w_i ≥ floor}` with `n`
/// subdivisions per unit of free mass.
pub fn entropy_grad_bound_grid(dim: usize, floor: f64, n: usize) -> f64 {
    let free = 1.0 - dim as f64 * floor;
    let mut best: f64 = 0.0;
    let mut counts = vec![0usize; dim];
    fn visit(i: usize, left: usize, counts: &mut Vec<usize>, visit_leaf: &mut dyn FnMut(&[usize])) {
        if i + 1 == counts.len() {
            counts[i] = left;
            visit_leaf(counts);
            return;
        }
        for k in 0..=left {
            counts[i] = k;
            visit(i + 1, left - k, counts, visit_leaf);
        }
    }
    let mut leaf = |c: &[usize]| {
        for k in c {
            let w = floor + free * (*k as f64) / n as f64;
            best = best.max((w.ln() + 1.0).abs());
        }
    };
    visit(0, n, &mut counts, &mut leaf);
    best
}

/// Minimizes `f` over the circle of the given radius by angular search.
pub fn angular_grid_argmin<F: Fn(&[f64]) -> f64>(f: F, radius: f64, n: usize) -> Vec<f64> {
    let mut best = (vec![radius, 0.0], f64::INFINITY);
    for k in 0..n {
        let a = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
        let w = vec![radius * a.cos(), radius * a.sin()];
        let v = f(&w);
        if v < best.1 {
            best = (w, v);
        }
    }
    best.0
}

/// `Σ_t a_t` accumulated left to right; a deliberately naive re-summation.
pub fn resum(terms: impl IntoIterator<Item = f64>) -> f64 {
    let mut s = 0.0;
    for t in terms {
        s += t;
    }
    s
}
