//! Minimization of `φ(ξ, ζ) = (ξ − 1)/(1 − α) + (ζ − 1)/(1 − β)` over
//! `D = {0 ≤ ξ ≤ 1, 1 ≤ ζ ≤ γ, ζ ≥ γ ξ^{β/α}}`, which turns the norm
//! inequality between two measurement distributions into the Tsallis bound.
//! The closed-form minimum `(ξ₀ − 1)/(1 − α)` with `ξ₀ = γ^{−α/β}` is
//! compared against a masked grid search.

use crate::entropy::{conjugate_order, ConjugateOrders};
use crate::error::{Error, Result};

const REFINE_LEVELS: usize = 4;
const REFINE_POINTS: usize = 256;
const MAX_GRID_GROWTH: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiProblem {
    gamma: f64,
    orders: ConjugateOrders,
    xi0: f64,
}

impl PhiProblem {
    pub fn new(gamma: f64, alpha: f64) -> Result<Self> {
        if !(gamma.is_finite() && gamma >= 1.0) {
            return Err(Error::Domain(format!("gamma must be >= 1, got {gamma}")));
        }
        if !(alpha.is_finite() && alpha > 1.0) {
            return Err(Error::Domain(format!("alpha must be > 1, got {alpha}")));
        }
        let orders = conjugate_order(alpha)?;
        let xi0 = gamma.powf(-alpha / orders.beta());
        Ok(Self { gamma, orders, xi0 })
    }

    /// `γ = g^{−2(1−β)}` for an overlap factor `g ∈ (0, 1]`.
    pub fn from_factor(g: f64, alpha: f64) -> Result<Self> {
        if !(g > 0.0 && g <= 1.0) {
            return Err(Error::Domain(format!("overlap factor {g} outside (0, 1]")));
        }
        let beta = conjugate_order(alpha)?.beta();
        Self::new(g.powf(-2.0 * (1.0 - beta)), alpha)
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn alpha(&self) -> f64 {
        self.orders.alpha()
    }

    pub fn beta(&self) -> f64 {
        self.orders.beta()
    }

    pub fn xi0(&self) -> f64 {
        self.xi0
    }

    pub fn phi(&self, xi: f64, zeta: f64) -> f64 {
        (xi - 1.0) / (1.0 - self.alpha()) + (zeta - 1.0) / (1.0 - self.beta())
    }

    pub fn is_feasible(&self, xi: f64, zeta: f64) -> bool {
        (0.0..=1.0).contains(&xi)
            && zeta >= 1.0
            && zeta <= self.gamma
            && zeta >= self.gamma * xi.powf(self.beta() / self.alpha())
    }

    pub fn analytic_min(&self) -> f64 {
        (self.xi0 - 1.0) / (1.0 - self.alpha()) + 0.0
    }

    /// `dφ/dξ` along the lower boundary curve `ζ = (ξ/ξ₀)^{β/α}`.
    pub fn curve_derivative(&self, xi: f64) -> f64 {
        let k = self.beta() / self.alpha();
        ((xi / self.xi0).powf(k) / xi - 1.0) / (self.alpha() - 1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiMinReport {
    pub analytic_min: f64,
    pub numeric_min: f64,
    pub argmin: (f64, f64),
    /// Feasible points on the initial full-domain grid.
    pub feasible_points: usize,
}

struct Window {
    xi: (f64, f64),
    zeta: (f64, f64),
}

struct GridResult {
    min: f64,
    arg: (f64, f64),
    feasible: usize,
}

fn axis(lo: f64, hi: f64, n: usize, k: usize) -> f64 {
    if n == 1 {
        lo
    } else {
        lo + (hi - lo) * k as f64 / (n - 1) as f64
    }
}

fn scan(problem: &PhiProblem, w: &Window, nx: usize, nz: usize) -> GridResult {
    let mut out = GridResult {
        min: f64::INFINITY,
        arg: (f64::NAN, f64::NAN),
        feasible: 0,
    };
    let k = problem.beta() / problem.alpha();
    for i in 0..nx {
        let xi = axis(w.xi.0, w.xi.1, nx, i);
        let floor = problem.gamma * xi.powf(k);
        for j in 0..nz {
            let zeta = axis(w.zeta.0, w.zeta.1, nz, j);
            if zeta < floor || zeta < 1.0 || zeta > problem.gamma {
                continue;
            }
            out.feasible += 1;
            let v = problem.phi(xi, zeta);
            if v < out.min {
                out.min = v;
                out.arg = (xi, zeta);
            }
        }
    }
    out
}

/// Grid minimization of `φ` on `D` next to the closed-form minimum.
///
/// The first pass is a uniform `grid_points × grid_points` grid on
/// `[0, 1] × [1, γ]`, enlarged until at least `grid_points²` points are
/// feasible. Later passes rescan uniform grids on shrinking windows around
/// the incumbent, so the result is always the value at a feasible point.
pub fn phi_min_verify(problem: &PhiProblem, grid_points: usize) -> Result<PhiMinReport> {
    if grid_points < 2 {
        return Err(Error::Domain("grid_points must be at least 2".into()));
    }
    let full = Window {
        xi: (0.0, 1.0),
        zeta: (1.0, problem.gamma),
    };
    let target = grid_points * grid_points;
    let mut n = grid_points;
    let mut coarse = scan(problem, &full, n, n);
    for _ in 0..MAX_GRID_GROWTH {
        if coarse.feasible >= target {
            break;
        }
        let ratio = (target as f64 / coarse.feasible.max(1) as f64).sqrt();
        n = ((n as f64) * ratio * 1.02).ceil() as usize + 1;
        coarse = scan(problem, &full, n, n);
    }
    if coarse.feasible == 0 {
        return Err(Error::Resolution("no feasible grid point".into()));
    }

    let mut best = (coarse.min, coarse.arg);
    let mut hx = 1.0 / (n - 1) as f64;
    let mut hz = (problem.gamma - 1.0) / (n - 1) as f64;
    for _ in 0..REFINE_LEVELS {
        let (x, z) = best.1;
        let w = Window {
            xi: ((x - 2.0 * hx).max(0.0), (x + 2.0 * hx).min(1.0)),
            zeta: ((z - 2.0 * hz).max(1.0), (z + 2.0 * hz).min(problem.gamma)),
        };
        let fine = scan(problem, &w, REFINE_POINTS, REFINE_POINTS);
        if fine.feasible > 0 && fine.min < best.0 {
            best = (fine.min, fine.arg);
        }
        hx = (w.xi.1 - w.xi.0) / (REFINE_POINTS - 1) as f64;
        hz = (w.zeta.1 - w.zeta.0) / (REFINE_POINTS - 1) as f64;
    }

    Ok(PhiMinReport {
        analytic_min: problem.analytic_min(),
        numeric_min: best.0,
        argmin: best.1,
        feasible_points: coarse.feasible,
    })
}
