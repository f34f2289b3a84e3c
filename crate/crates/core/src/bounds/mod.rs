//! POVMs, the overlap factors `g(M,N|ρ) ≤ f(M,N|ρ) ≤ f̄(M,N) ≤ 1`, and the
//! Tsallis and Rényi uncertainty relations built from them.
//!
//! Both checks bind the order `α` to the first measurement and `β` to the
//! second. The Tsallis relation reads
//! `H_α(M|ρ) + H_β(N|ρ) ≥ ln_μ(factor⁻²)` and the Rényi relation
//! `R_α(M|ρ) + R_β(N|ρ) ≥ −2 ln(factor)`.
//!
//! General POVMs are handled directly; no Naimark dilation is formed.

mod phi;

pub use phi::{phi_min_verify, PhiMinReport, PhiProblem};

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::channels::Unraveling;
use crate::entropy::{alpha_log, entropy, ConjugateOrders, EntropyKind, ProbVector};
use crate::error::{Error, Result};
use crate::linalg::{
    check_finite, ginibre, hermitian_eig, hermitian_part, hermiticity_defect, hs_inner,
    psd_sqrt_hermitian, spectral_norm, ComplexMatrix, ComplexVector, DensityMatrix,
    UnitaryMatrix, C64, TOL_HERM, TOL_PSD,
};

/// Probabilities at or below this are treated as zero when forming ratios.
pub const P_ZERO_TOL: f64 = 1e-12;
pub const TOL_POVM_COMPLETE: f64 = 1e-9;

/// A resolution of the identity `{M_i}`, `M_i ≥ 0`, `Σ M_i = I`.
#[derive(Debug, Clone)]
pub struct Povm {
    elements: Vec<ComplexMatrix>,
    roots: Vec<ComplexMatrix>,
}

impl Povm {
    pub fn new(elements: Vec<ComplexMatrix>) -> Result<Self> {
        let d = elements
            .first()
            .map(|m| m.nrows())
            .ok_or_else(|| Error::Dimension("POVM needs at least one element".into()))?;
        if d == 0 {
            return Err(Error::Dimension("empty POVM element".into()));
        }
        let mut sum = ComplexMatrix::zeros(d, d);
        let mut clean = Vec::with_capacity(elements.len());
        let mut roots = Vec::with_capacity(elements.len());
        for m in elements {
            if m.shape() != (d, d) {
                return Err(Error::Dimension(format!(
                    "POVM element of shape {:?}, expected {d}x{d}",
                    m.shape()
                )));
            }
            check_finite(&m)?;
            let defect = hermiticity_defect(&m);
            if defect > TOL_HERM {
                return Err(Error::NotHermitian(defect));
            }
            let m = hermitian_part(&m);
            let min = hermitian_eig(&m)?.values.last().copied().unwrap_or(0.0);
            if min < -TOL_PSD {
                return Err(Error::NotPsd(min));
            }
            sum += &m;
            roots.push(psd_sqrt_hermitian(&m)?);
            clean.push(m);
        }
        let defect = (sum - ComplexMatrix::identity(d, d)).norm();
        if defect > TOL_POVM_COMPLETE {
            return Err(Error::Completeness(defect));
        }
        Ok(Self {
            elements: clean,
            roots,
        })
    }

    /// Rank-one projectors onto the columns of `basis`.
    pub fn from_basis(basis: &UnitaryMatrix) -> Result<Self> {
        let b = basis.matrix();
        Self::new(
            (0..b.ncols())
                .map(|k| {
                    let col = b.column(k);
                    &col * col.adjoint()
                })
                .collect(),
        )
    }

    /// Projective measurement in a Haar-random orthonormal basis.
    pub fn random_projective_with<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<Self> {
        Self::from_basis(&crate::linalg::haar_unitary_with(dim, rng)?)
    }

    /// General POVM `M_i = S^{-1/2} G_iG_i† S^{-1/2}` with `S = Σ G_iG_i†`.
    pub fn random_with<R: Rng + ?Sized>(dim: usize, n_elements: usize, rng: &mut R) -> Result<Self> {
        if dim == 0 || n_elements == 0 {
            return Err(Error::Dimension("POVM needs positive dimension and size".into()));
        }
        let raw: Vec<ComplexMatrix> = (0..n_elements)
            .map(|_| {
                let g = ginibre(dim, dim, rng);
                &g * g.adjoint()
            })
            .collect();
        let total = raw.iter().fold(ComplexMatrix::zeros(dim, dim), |acc, h| acc + h);
        let inv_sqrt = hermitian_eig(&total)?.map_values(|l| C64::new(l.sqrt().recip(), 0.0));
        Self::new(raw.iter().map(|h| &inv_sqrt * h * &inv_sqrt).collect())
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    /// `M_i^{1/2}`, in element order.
    pub fn roots(&self) -> &[ComplexMatrix] {
        &self.roots
    }

    pub fn dim(&self) -> usize {
        self.elements[0].nrows()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

fn check_dims(m: &Povm, n: &Povm, rho: Option<&DensityMatrix>) -> Result<()> {
    let d = m.dim();
    if n.dim() != d || rho.is_some_and(|r| r.dim() != d) {
        return Err(Error::Dimension(format!(
            "POVMs of dimensions {} and {} with state of dimension {}",
            d,
            n.dim(),
            rho.map_or(d, |r| r.dim())
        )));
    }
    Ok(())
}

/// `p_i = tr(M_i ρ)`.
pub fn povm_probabilities(m: &Povm, rho: &DensityMatrix) -> Result<ProbVector> {
    if m.dim() != rho.dim() {
        return Err(Error::Dimension(format!(
            "POVM of dimension {} with state of dimension {}",
            m.dim(),
            rho.dim()
        )));
    }
    let probs = m
        .elements()
        .iter()
        .map(|e| hs_inner(e, rho.matrix()).map(|z| z.re))
        .collect::<Result<Vec<_>>>()?;
    ProbVector::new(probs)
}

/// `{A_i†A_i}`.
pub fn povm_from_unraveling(a: &Unraveling) -> Result<Povm> {
    Povm::new(a.ops().iter().map(|op| op.adjoint() * op).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FactorKind {
    G,
    F,
    FBar,
}

impl FromStr for FactorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "g" => Ok(Self::G),
            "f" => Ok(Self::F),
            "fbar" => Ok(Self::FBar),
            other => Err(Error::Domain(format!("unknown factor kind {other:?}"))),
        }
    }
}

impl fmt::Display for FactorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::G => "g",
            Self::F => "f",
            Self::FBar => "fbar",
        })
    }
}

fn admissible(p: &[f64]) -> impl Iterator<Item = (usize, f64)> + '_ {
    p.iter().copied().enumerate().filter(|&(_, x)| x > P_ZERO_TOL)
}

/// `g(M,N|ρ) = max |tr(M_i N_j ρ)| / √(p_i q_j)` over `p_i, q_j > 0`.
pub fn g_factor(m: &Povm, n: &Povm, rho: &DensityMatrix) -> Result<f64> {
    check_dims(m, n, Some(rho))?;
    let p = povm_probabilities(m, rho)?;
    let q = povm_probabilities(n, rho)?;
    let n_rho: Vec<ComplexMatrix> = n.elements().iter().map(|nj| nj * rho.matrix()).collect();
    let mut best: Option<f64> = None;
    for (i, pi) in admissible(p.as_slice()) {
        for (j, qj) in admissible(q.as_slice()) {
            // M_i Hermitian, so tr(M_i† X) = tr(M_i X)
            let t = hs_inner(&m.elements()[i], &n_rho[j])?.norm();
            let r = t / (pi * qj).sqrt();
            best = Some(best.map_or(r, |b| b.max(r)));
        }
    }
    best.ok_or_else(|| Error::Degenerate("no pair of nonzero probabilities".into()))
}

/// `f(M,N|ρ)`: the `g`-type ratio maximized over the eigenvectors of `ρ`
/// with nonzero eigenvalue.
pub fn f_factor(m: &Povm, n: &Povm, rho: &DensityMatrix) -> Result<f64> {
    check_dims(m, n, Some(rho))?;
    let eig = rho.eigen()?;
    let mut best: Option<f64> = None;
    for (k, &lambda) in eig.values.iter().enumerate() {
        if lambda <= P_ZERO_TOL {
            continue;
        }
        let psi = eig.vector(k);
        let m_psi: Vec<ComplexVector> = m.elements().iter().map(|e| e * &psi).collect();
        let n_psi: Vec<ComplexVector> = n.elements().iter().map(|e| e * &psi).collect();
        let p: Vec<f64> = m_psi.iter().map(|v| psi.dotc(v).re).collect();
        let q: Vec<f64> = n_psi.iter().map(|v| psi.dotc(v).re).collect();
        for (i, pi) in admissible(&p) {
            for (j, qj) in admissible(&q) {
                let r = m_psi[i].dotc(&n_psi[j]).norm() / (pi * qj).sqrt();
                best = Some(best.map_or(r, |b| b.max(r)));
            }
        }
    }
    best.ok_or_else(|| Error::Degenerate("no eigenvector with nonzero probabilities".into()))
}

/// `f̄(M,N) = max ‖M_i^{1/2} N_j^{1/2}‖_∞`, independent of the state.
pub fn f_bar(m: &Povm, n: &Povm) -> Result<f64> {
    check_dims(m, n, None)?;
    let mut best = 0.0f64;
    for mi in m.roots() {
        for nj in n.roots() {
            best = best.max(spectral_norm(&(mi * nj))?);
        }
    }
    Ok(best)
}

pub fn overlap_factor(m: &Povm, n: &Povm, rho: &DensityMatrix, kind: FactorKind) -> Result<f64> {
    match kind {
        FactorKind::G => g_factor(m, n, rho),
        FactorKind::F => f_factor(m, n, rho),
        FactorKind::FBar => f_bar(m, n),
    }
}

/// Outcome of one uncertainty-relation evaluation, all values in nats.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundReport {
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub factor: f64,
    pub factor_kind: FactorKind,
    pub orders: ConjugateOrders,
    /// Evaluated at `α = β = 1`, where the bound holds only as a limit.
    pub limit_extrapolated: bool,
}

impl BoundReport {
    pub fn new(lhs: f64, rhs: f64, factor: f64, factor_kind: FactorKind, orders: ConjugateOrders) -> Self {
        Self {
            lhs,
            rhs,
            slack: lhs - rhs,
            factor,
            factor_kind,
            orders,
            limit_extrapolated: orders.is_limit_point(),
        }
    }
}

fn check_factor(factor: f64) -> Result<f64> {
    if factor > 0.0 && factor.is_finite() {
        Ok(factor)
    } else {
        Err(Error::Degenerate(format!("overlap factor {factor}")))
    }
}

/// `ln_μ(factor⁻²)`.
pub fn tsallis_bound(factor: f64, orders: &ConjugateOrders) -> Result<f64> {
    alpha_log(check_factor(factor)?.powi(-2), orders.mu_order())
}

/// `−2 ln(factor)`.
pub fn renyi_bound(factor: f64) -> Result<f64> {
    Ok(-2.0 * check_factor(factor)?.ln())
}

fn entropy_sum(
    m: &Povm,
    n: &Povm,
    rho: &DensityMatrix,
    orders: &ConjugateOrders,
    kind: EntropyKind,
) -> Result<f64> {
    let p = povm_probabilities(m, rho)?;
    let q = povm_probabilities(n, rho)?;
    Ok(entropy(&p, orders.alpha_order(), kind) + entropy(&q, orders.beta_order(), kind))
}

/// `H_α(M|ρ) + H_β(N|ρ)` against `ln_μ(factor⁻²)`.
pub fn tsallis_uncertainty_check(
    m: &Povm,
    n: &Povm,
    rho: &DensityMatrix,
    orders: &ConjugateOrders,
    factor_kind: FactorKind,
) -> Result<BoundReport> {
    let factor = overlap_factor(m, n, rho, factor_kind)?;
    let lhs = entropy_sum(m, n, rho, orders, EntropyKind::Tsallis)?;
    let rhs = tsallis_bound(factor, orders)?;
    Ok(BoundReport::new(lhs, rhs, factor, factor_kind, *orders))
}

/// `R_α(M|ρ) + R_β(N|ρ)` against `−2 ln(factor)`.
pub fn renyi_uncertainty_check(
    m: &Povm,
    n: &Povm,
    rho: &DensityMatrix,
    orders: &ConjugateOrders,
    factor_kind: FactorKind,
) -> Result<BoundReport> {
    let factor = overlap_factor(m, n, rho, factor_kind)?;
    let lhs = entropy_sum(m, n, rho, orders, EntropyKind::Renyi)?;
    let rhs = renyi_bound(factor)?;
    Ok(BoundReport::new(lhs, rhs, factor, factor_kind, *orders))
}
