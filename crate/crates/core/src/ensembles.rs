//! State ensembles and the entropy bounds relating an ensemble to the
//! density matrix it generates.

use rand::Rng;

use crate::entropy::{entropy, quantum_entropy, EntropyKind, EntropyOrder, ProbVector};
use crate::error::{Error, Result};
use crate::linalg::{
    haar_random_unitary, spectral_noise_floor, ComplexMatrix, ComplexVector, DensityMatrix, UnitaryMatrix, C64,
};

/// Members lighter than this are dropped when generating ensembles.
pub const MIN_MEMBER_WEIGHT: f64 = 1e-14;
const RANK_TOL: f64 = 1e-12;

pub trait Ensemble {
    fn dim(&self) -> usize;
    fn weights(&self) -> &ProbVector;
    fn density(&self) -> Result<DensityMatrix>;
}

/// `ρ = Σ p_i ψ_iψ_i†` or `ρ = Σ p_i ω_i`.
pub fn ensemble_density<E: Ensemble + ?Sized>(e: &E) -> Result<DensityMatrix> {
    e.density()
}

#[derive(Debug, Clone)]
pub struct PureEnsemble {
    weights: ProbVector,
    states: Vec<ComplexVector>,
}

impl PureEnsemble {
    pub fn new(weights: ProbVector, states: Vec<ComplexVector>) -> Result<Self> {
        if weights.len() != states.len() || states.is_empty() {
            return Err(Error::Dimension(format!(
                "{} weights for {} states",
                weights.len(),
                states.len()
            )));
        }
        let d = states[0].len();
        for s in &states {
            if s.len() != d || d == 0 {
                return Err(Error::Dimension("ensemble states of differing dimension".into()));
            }
            let n = s.norm();
            if (n - 1.0).abs() > 1e-10 {
                return Err(Error::Domain(format!("ensemble state of norm {n}")));
            }
        }
        Ok(Self { weights, states })
    }

    pub fn states(&self) -> &[ComplexVector] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }
}

impl Ensemble for PureEnsemble {
    fn dim(&self) -> usize {
        self.states[0].len()
    }

    fn weights(&self) -> &ProbVector {
        &self.weights
    }

    fn density(&self) -> Result<DensityMatrix> {
        let d = self.dim();
        let mut rho = ComplexMatrix::zeros(d, d);
        for (p, psi) in self.weights.as_slice().iter().zip(&self.states) {
            rho += (psi * psi.adjoint()).scale(*p);
        }
        DensityMatrix::new(rho)
    }
}

#[derive(Debug, Clone)]
pub struct MixedEnsemble {
    weights: ProbVector,
    members: Vec<DensityMatrix>,
}

impl MixedEnsemble {
    pub fn new(weights: ProbVector, members: Vec<DensityMatrix>) -> Result<Self> {
        if weights.len() != members.len() || members.is_empty() {
            return Err(Error::Dimension(format!(
                "{} weights for {} members",
                weights.len(),
                members.len()
            )));
        }
        let d = members[0].dim();
        if members.iter().any(|m| m.dim() != d) {
            return Err(Error::Dimension("ensemble members of differing dimension".into()));
        }
        Ok(Self { weights, members })
    }

    pub fn members(&self) -> &[DensityMatrix] {
        &self.members
    }
}

impl Ensemble for MixedEnsemble {
    fn dim(&self) -> usize {
        self.members[0].dim()
    }

    fn weights(&self) -> &ProbVector {
        &self.weights
    }

    fn density(&self) -> Result<DensityMatrix> {
        let d = self.dim();
        let mut rho = ComplexMatrix::zeros(d, d);
        for (p, w) in self.weights.as_slice().iter().zip(&self.members) {
            rho += w.matrix().scale(*p);
        }
        DensityMatrix::new(rho)
    }
}

/// How the eigen-ensemble of `ρ` is mixed into `m` members.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mixing {
    /// `u = I`: the spectral ensemble itself.
    Identity,
    /// Haar-random `m × m` unitary from the given seed.
    Haar(u64),
}

#[derive(Debug, Clone)]
pub struct GeneratedEnsemble {
    pub ensemble: PureEnsemble,
    /// Eigenvalues of `ρ`, descending, zero-padded to `m`.
    pub spectrum: Vec<f64>,
    pub mixing: UnitaryMatrix,
}

/// Pure ensemble for `ρ` with `√p_i ψ_i = Σ_j u_ij √λ_j φ_j`.
///
/// Members with weight below [`MIN_MEMBER_WEIGHT`] are dropped, so the
/// ensemble may have fewer than `m` members.
pub fn ensemble_from_state(rho: &DensityMatrix, m: usize, mixing: Mixing) -> Result<GeneratedEnsemble> {
    let eig = rho.eigen()?;
    let d = rho.dim();
    let rank = eig.values.iter().filter(|&&l| l > RANK_TOL).count();
    if m < rank || m == 0 {
        return Err(Error::Domain(format!("{m} members cannot realize a rank-{rank} state")));
    }
    let u = match mixing {
        Mixing::Identity => UnitaryMatrix::identity(m),
        Mixing::Haar(seed) => haar_random_unitary(m, seed)?,
    };
    let used = m.min(d);
    let floor = spectral_noise_floor(&eig.values);
    let spectrum: Vec<f64> = (0..m)
        .map(|j| if j < used && eig.values[j] > floor { eig.values[j] } else { 0.0 })
        .collect();
    let mut weights = Vec::with_capacity(m);
    let mut states = Vec::with_capacity(m);
    for i in 0..m {
        let mut w = ComplexVector::zeros(d);
        for (j, &lambda) in spectrum.iter().enumerate().take(used) {
            w += eig.vector(j) * (u.matrix()[(i, j)] * C64::new(lambda.sqrt(), 0.0));
        }
        let p = w.norm_squared();
        if p < MIN_MEMBER_WEIGHT {
            continue;
        }
        states.push(w.unscale(p.sqrt()));
        weights.push(p);
    }
    Ok(GeneratedEnsemble {
        ensemble: PureEnsemble::new(ProbVector::new(weights)?, states)?,
        spectrum,
        mixing: u,
    })
}

/// Random pure ensemble with Haar-random member states and flat-Dirichlet
/// weights.
pub fn random_pure_ensemble<R: Rng + ?Sized>(dim: usize, members: usize, rng: &mut R) -> Result<PureEnsemble> {
    let states = (0..members)
        .map(|_| crate::linalg::random_state_vector(dim, rng))
        .collect();
    PureEnsemble::new(random_weights(members, rng)?, states)
}

/// Random mixed ensemble of full-rank random members.
pub fn random_mixed_ensemble<R: Rng + ?Sized>(dim: usize, members: usize, rng: &mut R) -> Result<MixedEnsemble> {
    let states = (0..members)
        .map(|_| {
            let rank = rng.random_range(1..=dim);
            crate::linalg::random_density_with(dim, rank, rng)
        })
        .collect::<Result<Vec<_>>>()?;
    MixedEnsemble::new(random_weights(members, rng)?, states)
}

fn random_weights<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<ProbVector> {
    if n == 0 {
        return Err(Error::Dimension("ensemble needs at least one member".into()));
    }
    let raw: Vec<f64> = (0..n).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let total: f64 = raw.iter().sum();
    ProbVector::new(raw.into_iter().map(|x| x / total).collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureEnsembleBounds {
    /// Entropy of the generated density matrix.
    pub state_entropy: f64,
    /// Entropy of the ensemble weights.
    pub ensemble_entropy: f64,
    /// Whether `state_entropy ≤ ensemble_entropy` is guaranteed at this order
    /// and kind (always for Tsallis, `α < 1` for Rényi).
    pub in_premise: bool,
}

pub fn pure_ensemble_bounds_check(
    e: &PureEnsemble,
    order: EntropyOrder,
    kind: EntropyKind,
) -> Result<PureEnsembleBounds> {
    let rho = e.density()?;
    let in_premise = match kind {
        EntropyKind::Tsallis => true,
        EntropyKind::Renyi => order.value() < 1.0 || order.is_shannon(),
    };
    Ok(PureEnsembleBounds {
        state_entropy: quantum_entropy(&rho, order, kind)?,
        ensemble_entropy: entropy(e.weights(), order, kind),
        in_premise,
    })
}

/// `lower = Σ p_i H(ω_i) ≤ mid = H(ρ) ≤ upper = Σ p_i^α H(ω_i) + H(p)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropySandwich {
    pub lower: f64,
    pub mid: f64,
    pub upper: f64,
}

/// Tsallis-only; the mixing bounds have no Rényi counterpart.
pub fn mixed_ensemble_bounds_check(
    e: &MixedEnsemble,
    order: EntropyOrder,
    kind: EntropyKind,
) -> Result<EntropySandwich> {
    if kind != EntropyKind::Tsallis {
        return Err(Error::UnsupportedKind(
            "mixed-ensemble bounds are defined for Tsallis entropies only".into(),
        ));
    }
    let power = if order.is_shannon() { 1.0 } else { order.value() };
    let mut lower = 0.0;
    let mut weighted = 0.0;
    for (p, w) in e.weights().as_slice().iter().zip(e.members()) {
        let h = quantum_entropy(w, order, kind)?;
        lower += p * h;
        if *p > 0.0 {
            weighted += p.powf(power) * h;
        }
    }
    Ok(EntropySandwich {
        lower,
        mid: quantum_entropy(&e.density()?, order, kind)?,
        upper: weighted + entropy(e.weights(), order, kind),
    })
}
