//! Two worked uncertainty relations: DFT-complementary observables in `d`
//! dimensions, and binned angle versus angular momentum.

use std::f64::consts::{PI, TAU};

use crate::bounds::{BoundReport, FactorKind};
use crate::entropy::{alpha_log, entropy, ConjugateOrders, EntropyKind, ProbVector};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, ComplexVector, UnitaryMatrix, C64};

pub const DEFAULT_QUAD_POINTS: usize = 64;
/// Largest discarded momentum weight an [`AngleState`] may carry into a demo.
pub const MAX_TAIL_WEIGHT: f64 = 1e-12;
const STATE_NORM_TOL: f64 = 1e-10;
const QUAD_NORM_TOL: f64 = 1e-6;

/// `(1/√d) exp(2πi·k·l/d)` for `k, l ∈ {1, …, d}`.
pub fn dft_matrix(d: usize) -> Result<UnitaryMatrix> {
    if d == 0 {
        return Err(Error::Dimension("DFT dimension must be positive".into()));
    }
    let scale = 1.0 / (d as f64).sqrt();
    let m = ComplexMatrix::from_fn(d, d, |r, c| {
        let (k, l) = ((r + 1) as f64, (c + 1) as f64);
        C64::from_polar(scale, TAU * ((k * l) % d as f64) / d as f64)
    });
    UnitaryMatrix::new(m)
}

fn check_unit(v: &ComplexVector) -> Result<()> {
    let n = v.norm();
    if (n - 1.0).abs() > STATE_NORM_TOL {
        return Err(Error::Domain(format!("state of norm {n}")));
    }
    Ok(())
}

fn moduli_squared(v: &ComplexVector) -> Result<ProbVector> {
    ProbVector::new(v.iter().map(|c| c.norm_sqr()).collect())
}

/// `H_α(p) + H_β(q) ≥ ln_μ d` with `q_l = |c_l|²` and `p_k = |(F c)_k|²`.
pub fn dft_uncertainty_demo(state: &ComplexVector, orders: &ConjugateOrders) -> Result<BoundReport> {
    check_unit(state)?;
    let d = state.len();
    let f = dft_matrix(d)?;
    let image = f.matrix() * state;
    let p = moduli_squared(&image)?;
    let q = moduli_squared(state)?;
    let lhs = entropy(&p, orders.alpha_order(), EntropyKind::Tsallis)
        + entropy(&q, orders.beta_order(), EntropyKind::Tsallis);
    let rhs = alpha_log(d as f64, orders.mu_order())?;
    Ok(BoundReport::new(lhs, rhs, 1.0 / (d as f64).sqrt(), FactorKind::FBar, *orders))
}

/// `(Σ|x|^s)^{1/s}`.
pub fn lp_norm(v: &ComplexVector, s: f64) -> f64 {
    v.iter().map(|c| c.norm().powf(s)).sum::<f64>().powf(1.0 / s)
}

/// One side of a norm inequality `lhs ≤ rhs`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormInequality {
    pub lhs: f64,
    pub rhs: f64,
}

impl NormInequality {
    pub fn holds(&self, rel_tol: f64) -> bool {
        self.lhs <= self.rhs * (1.0 + rel_tol) + rel_tol
    }
}

fn hausdorff_exponent(b: f64) -> Result<f64> {
    if !(b > 1.0 && b < 2.0) {
        return Err(Error::Domain(format!("norm exponent b = {b} outside (1, 2)")));
    }
    Ok(b / (b - 1.0))
}

/// `‖c‖_a ≤ d^{−(2−b)/2b}‖F c‖_b` and `‖F c‖_a ≤ d^{−(2−b)/2b}‖c‖_b` with
/// `1/a + 1/b = 1`.
pub fn dft_norm_pair(c: &ComplexVector, b: f64) -> Result<[NormInequality; 2]> {
    let a = hausdorff_exponent(b)?;
    let d = c.len();
    let image = dft_matrix(d)?.matrix() * c;
    let k = (d as f64).powf(-(2.0 - b) / (2.0 * b));
    Ok([
        NormInequality {
            lhs: lp_norm(c, a),
            rhs: k * lp_norm(&image, b),
        },
        NormInequality {
            lhs: lp_norm(&image, a),
            rhs: k * lp_norm(c, b),
        },
    ])
}

/// Pure state on the circle, `Ψ(φ) = (2π)^{−1/2} Σ_{|l|≤L} c_l e^{ilφ}`,
/// observed through `nbins` equal angular bins.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleState {
    coeffs: Vec<C64>,
    nbins: usize,
    tail_weight: f64,
}

impl AngleState {
    /// `coeffs[i]` is `c_{i−L}`; an even length is rejected.
    pub fn new(coeffs: Vec<C64>, nbins: usize) -> Result<Self> {
        Self::with_tail(coeffs, nbins, 0.0)
    }

    pub fn with_tail(coeffs: Vec<C64>, nbins: usize, tail_weight: f64) -> Result<Self> {
        if coeffs.len() % 2 == 0 {
            return Err(Error::Dimension(format!(
                "{} momentum coefficients, expected 2L + 1",
                coeffs.len()
            )));
        }
        if nbins == 0 {
            return Err(Error::Domain("nbins must be positive".into()));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
        if (norm - 1.0).abs() > STATE_NORM_TOL {
            return Err(Error::Domain(format!("momentum weights sum to {norm}")));
        }
        if !(0.0..1.0).contains(&tail_weight) {
            return Err(Error::Domain(format!("tail weight {tail_weight}")));
        }
        Ok(Self {
            coeffs,
            nbins,
            tail_weight,
        })
    }

    /// Truncates the amplitudes `f(l)` to `|l| ≤ truncation` and normalizes,
    /// recording the weight found in `truncation < |l| ≤ reach`.
    pub fn from_fn(
        truncation: usize,
        reach: usize,
        nbins: usize,
        f: impl Fn(i64) -> C64,
    ) -> Result<Self> {
        let reach = reach.max(truncation);
        let (t, r) = (truncation as i64, reach as i64);
        let kept: Vec<C64> = (-t..=t).map(&f).collect();
        let inner: f64 = kept.iter().map(|c| c.norm_sqr()).sum();
        let outer: f64 = (t + 1..=r).map(|l| f(l).norm_sqr() + f(-l).norm_sqr()).sum();
        if !(inner > 0.0) || !outer.is_finite() {
            return Err(Error::Degenerate("no weight inside the truncation".into()));
        }
        let scale = inner.sqrt();
        let coeffs = kept.into_iter().map(|c| c / scale).collect();
        Self::with_tail(coeffs, nbins, outer / (inner + outer))
    }

    /// `c_l ∝ exp(−l²/2s²)`.
    pub fn gaussian(truncation: usize, width: f64, nbins: usize) -> Result<Self> {
        if !(width > 0.0 && width.is_finite()) {
            return Err(Error::Domain(format!("wavepacket width {width}")));
        }
        let reach = truncation + (40.0 * width).ceil() as usize;
        Self::from_fn(truncation, reach, nbins, |l| {
            C64::new((-(l * l) as f64 / (2.0 * width * width)).exp(), 0.0)
        })
    }

    /// `c_l = δ_{l,m}` for `|m| ≤ truncation`.
    pub fn momentum_eigenstate(truncation: usize, m: i64, nbins: usize) -> Result<Self> {
        if m.unsigned_abs() as usize > truncation {
            return Err(Error::Domain(format!("momentum {m} beyond truncation {truncation}")));
        }
        Self::from_fn(truncation, truncation, nbins, |l| {
            C64::new(if l == m { 1.0 } else { 0.0 }, 0.0)
        })
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len() / 2
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn nbins(&self) -> usize {
        self.nbins
    }

    pub fn delta_phi(&self) -> f64 {
        TAU / self.nbins as f64
    }

    pub fn tail_weight(&self) -> f64 {
        self.tail_weight
    }

    pub fn momentum_distribution(&self) -> Result<ProbVector> {
        ProbVector::new(self.coeffs.iter().map(|c| c.norm_sqr()).collect())
    }

    pub fn amplitude(&self, phi: f64) -> C64 {
        let l0 = -(self.truncation() as f64);
        let sum: C64 = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * C64::from_polar(1.0, (l0 + i as f64) * phi))
            .sum();
        sum / TAU.sqrt()
    }

    pub fn with_nbins(&self, nbins: usize) -> Result<Self> {
        Self::with_tail(self.coeffs.clone(), nbins, self.tail_weight)
    }

    /// `∫ g(|Ψ|²)` over bin `k` by composite Simpson with `intervals`
    /// subintervals (rounded up to even).
    fn bin_integral(&self, k: usize, intervals: usize, g: &impl Fn(f64) -> f64) -> f64 {
        let n = intervals + intervals % 2;
        let h = self.delta_phi() / n as f64;
        let start = k as f64 * self.delta_phi();
        let mut acc = 0.0;
        for j in 0..=n {
            let w = if j == 0 || j == n {
                1.0
            } else if j % 2 == 1 {
                4.0
            } else {
                2.0
            };
            acc += w * g(self.amplitude(start + j as f64 * h).norm_sqr());
        }
        acc * h / 3.0
    }

    /// Bin probabilities `p_k = ∫_{kδφ}^{(k+1)δφ} |Ψ|²`, unnormalized.
    pub fn bin_weights(&self, quad_points_per_bin: usize) -> Result<Vec<f64>> {
        check_quad(quad_points_per_bin)?;
        Ok((0..self.nbins)
            .map(|k| self.bin_integral(k, quad_points_per_bin, &|x| x))
            .collect())
    }

    /// `∫_0^{2π} |Ψ|^s` by the same per-bin quadrature.
    pub fn abs_power_integral(&self, s: f64, quad_points_per_bin: usize) -> Result<f64> {
        check_quad(quad_points_per_bin)?;
        let half = s / 2.0;
        Ok((0..self.nbins)
            .map(|k| self.bin_integral(k, quad_points_per_bin, &|x: f64| x.powf(half)))
            .sum())
    }

    /// `‖Ψ‖_s = (∫|Ψ|^s)^{1/s}`.
    pub fn lp_norm(&self, s: f64, quad_points_per_bin: usize) -> Result<f64> {
        Ok(self.abs_power_integral(s, quad_points_per_bin)?.powf(1.0 / s))
    }

    fn coeff_norm(&self, s: f64) -> f64 {
        self.coeffs
            .iter()
            .map(|c| c.norm().powf(s))
            .sum::<f64>()
            .powf(1.0 / s)
    }
}

fn check_quad(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain("quad_points_per_bin must be positive".into()));
    }
    Ok(())
}

/// `H_α(φ) + H_β(J_z) ≥ ln_μ(2π/δφ)` for the binned angle and the angular
/// momentum of `state`.
pub fn angle_momentum_demo(
    state: &AngleState,
    orders: &ConjugateOrders,
    quad_points_per_bin: usize,
) -> Result<BoundReport> {
    if orders.alpha() < 1.0 {
        return Err(Error::Domain(format!(
            "angle demo takes the angle at the larger order, got alpha = {}",
            orders.alpha()
        )));
    }
    if state.tail_weight() >= MAX_TAIL_WEIGHT {
        return Err(Error::Resolution(format!(
            "discarded momentum weight {:e}; raise the truncation",
            state.tail_weight()
        )));
    }
    let weights = state.bin_weights(quad_points_per_bin)?;
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > QUAD_NORM_TOL {
        return Err(Error::Resolution(format!(
            "bin weights sum to {total}; raise quad_points_per_bin"
        )));
    }
    let p = ProbVector::new(weights.into_iter().map(|w| w.max(0.0) / total).collect())?;
    let q = state.momentum_distribution()?;
    let lhs = entropy(&p, orders.alpha_order(), EntropyKind::Tsallis)
        + entropy(&q, orders.beta_order(), EntropyKind::Tsallis);
    let nbins = state.nbins() as f64;
    let rhs = alpha_log(nbins, orders.mu_order())?;
    Ok(BoundReport::new(lhs, rhs, 1.0 / nbins.sqrt(), FactorKind::FBar, *orders))
}

/// Per bin, `(1/δφ)∫|Ψ|^{2β} ≤ ((1/δφ)∫|Ψ|²)^β` for `β < 1`.
pub fn bin_integral_means(
    state: &AngleState,
    beta: f64,
    quad_points_per_bin: usize,
) -> Result<Vec<NormInequality>> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::Domain(format!("integral means need 0 < beta < 1, got {beta}")));
    }
    check_quad(quad_points_per_bin)?;
    let dphi = state.delta_phi();
    Ok((0..state.nbins())
        .map(|k| {
            let lhs = state.bin_integral(k, quad_points_per_bin, &|x: f64| x.powf(beta)) / dphi;
            let mean = state.bin_integral(k, quad_points_per_bin, &|x| x) / dphi;
            NormInequality {
                lhs,
                rhs: mean.max(0.0).powf(beta),
            }
        })
        .collect())
}

/// `‖Ψ‖_b² ≤ δφ^{(1−β)/β}‖p‖_β` and `δφ^{(1−α)/α}‖p‖_α ≤ ‖Ψ‖_a²` with
/// `b = 2β`, `a = 2α`.
pub fn bin_norm_chain(
    state: &AngleState,
    orders: &ConjugateOrders,
    quad_points_per_bin: usize,
) -> Result<[NormInequality; 2]> {
    let (alpha, beta) = (orders.alpha(), orders.beta());
    let p = state.bin_weights(quad_points_per_bin)?;
    let dphi = state.delta_phi();
    let p_norm = |s: f64| p.iter().map(|x| x.max(0.0).powf(s)).sum::<f64>().powf(1.0 / s);
    Ok([
        NormInequality {
            lhs: state.lp_norm(2.0 * beta, quad_points_per_bin)?.powi(2),
            rhs: dphi.powf((1.0 - beta) / beta) * p_norm(beta),
        },
        NormInequality {
            lhs: dphi.powf((1.0 - alpha) / alpha) * p_norm(alpha),
            rhs: state.lp_norm(2.0 * alpha, quad_points_per_bin)?.powi(2),
        },
    ])
}

/// `‖c‖_a ≤ (2π)^{−(2−b)/2b}‖Ψ‖_b` and `‖Ψ‖_a ≤ (2π)^{−(2−b)/2b}‖c‖_b` with
/// `1/a + 1/b = 1`, `1 < b < 2`.
pub fn young_hausdorff_pair(
    state: &AngleState,
    b: f64,
    quad_points_per_bin: usize,
) -> Result<[NormInequality; 2]> {
    let a = hausdorff_exponent(b)?;
    let k = (2.0 * PI).powf(-(2.0 - b) / (2.0 * b));
    Ok([
        NormInequality {
            lhs: state.coeff_norm(a),
            rhs: k * state.lp_norm(b, quad_points_per_bin)?,
        },
        NormInequality {
            lhs: state.lp_norm(a, quad_points_per_bin)?,
            rhs: k * state.coeff_norm(b),
        },
    ])
}
