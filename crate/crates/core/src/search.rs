//! Local search over remixings for Rényi-minimal unravelings, and the
//! uncertainty relations between extremal unravelings of two channels.

use crate::bounds::{
    povm_from_unraveling, renyi_uncertainty_check, tsallis_uncertainty_check, BoundReport,
    FactorKind,
};
use crate::channels::{extremal_unraveling, gram_matrix, remix, GramMatrix, Unraveling};
use crate::entropy::{renyi_entropy, ConjugateOrders, EntropyOrder, ProbVector};
use crate::error::{Error, Result};
use crate::linalg::{
    ginibre, haar_unitary_with, hermitian_eig, hermitian_part, seeded_rng, ComplexMatrix,
    DensityMatrix, SeededRng, UnitaryMatrix, C64,
};

const STALL_STEPS: usize = 50;
const STEP_DECAY: f64 = 0.95;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig {
    pub alpha: f64,
    pub restarts: usize,
    pub iterations: usize,
    pub step_scale: f64,
    pub seed: u64,
}

impl SearchConfig {
    /// 20 restarts of 500 steps, initial step 0.3.
    pub fn with_alpha(alpha: f64) -> Self {
        Self {
            alpha,
            restarts: 20,
            iterations: 500,
            step_scale: 0.3,
            seed: 0,
        }
    }

    fn validate_budget(&self) -> Result<()> {
        if self.restarts == 0 || self.iterations == 0 {
            return Err(Error::Domain("restarts and iterations must be positive".into()));
        }
        if !(self.step_scale > 0.0 && self.step_scale.is_finite()) {
            return Err(Error::Domain(format!("step_scale {}", self.step_scale)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct SearchResult {
    pub best: Unraveling,
    pub entropy: f64,
    /// `best = remix(a, mixing)`.
    pub mixing: UnitaryMatrix,
    /// Best entropy reached by each restart, in restart order.
    pub restart_entropies: Vec<f64>,
}

fn objective(pi: &GramMatrix, u: &ComplexMatrix, order: EntropyOrder) -> Result<f64> {
    let p = ProbVector::from_spectrum(&pi.remixed_diagonal(u))?;
    Ok(renyi_entropy(&p, order))
}

/// `exp(i s K)` for a random Hermitian `K` of unit Frobenius norm.
fn random_step(n: usize, s: f64, rng: &mut SeededRng) -> Result<ComplexMatrix> {
    let g = ginibre(n, n, rng);
    let k = hermitian_part(&g);
    let k = k.unscale(k.norm().max(f64::MIN_POSITIVE));
    let eig = hermitian_eig(&k)?;
    Ok(eig.map_values(|l| C64::from_polar(1.0, s * l)))
}

fn restart_rng(seed: u64, restart: usize) -> SeededRng {
    let mut rng = seeded_rng(seed);
    rng.set_stream(restart as u64);
    rng
}

fn descend(
    pi: &GramMatrix,
    start: ComplexMatrix,
    order: EntropyOrder,
    cfg: &SearchConfig,
    rng: &mut SeededRng,
) -> Result<(f64, ComplexMatrix)> {
    let n = start.nrows();
    let mut u = start;
    let mut best = objective(pi, &u, order)?;
    let mut step = cfg.step_scale;
    let mut stalled = 0;
    for _ in 0..cfg.iterations {
        let cand = &u * random_step(n, step, rng)?;
        let value = objective(pi, &cand, order)?;
        if value < best {
            best = value;
            u = cand;
            stalled = 0;
        } else {
            stalled += 1;
            if stalled >= STALL_STEPS {
                step *= STEP_DECAY;
                stalled = 0;
            }
        }
    }
    Ok((best, u))
}

/// Multi-restart hill descent of `R_α(remix(a, U)|ρ)` over unitaries `U`,
/// at any positive order.
///
/// Restart 0 starts from the diagonalizer of `Π(A|ρ)`, later restarts from
/// Haar-random unitaries; restart `r` draws from stream `r` of `cfg.seed`.
/// The input itself is also a candidate, so the result is never worse than
/// either the input or the Gram-diagonal unraveling.
pub fn unitary_local_search(a: &Unraveling, rho: &DensityMatrix, cfg: &SearchConfig) -> Result<SearchResult> {
    cfg.validate_budget()?;
    let order = EntropyOrder::new(cfg.alpha)?;
    let pi = gram_matrix(a, rho)?;
    let n = a.len();
    let identity = UnitaryMatrix::identity(n);
    let mut best_value = objective(&pi, identity.matrix(), order)?;
    let mut best_u = identity.into_matrix();
    if n == 1 {
        return Ok(SearchResult {
            best: a.clone(),
            entropy: best_value,
            mixing: UnitaryMatrix::identity(1),
            restart_entropies: vec![best_value; cfg.restarts],
        });
    }
    let diagonalizer = extremal_unraveling(a, rho)?.diagonalizer;
    let mut restart_entropies = Vec::with_capacity(cfg.restarts);
    for r in 0..cfg.restarts {
        let mut rng = restart_rng(cfg.seed, r);
        let start = if r == 0 {
            diagonalizer.matrix().clone()
        } else {
            haar_unitary_with(n, &mut rng)?.into_matrix()
        };
        let (value, u) = descend(&pi, start, order, cfg, &mut rng)?;
        restart_entropies.push(value);
        if value < best_value {
            best_value = value;
            best_u = u;
        }
    }
    let mixing = UnitaryMatrix::new(best_u)?;
    Ok(SearchResult {
        best: remix(a, &mixing)?,
        entropy: best_value,
        mixing,
        restart_entropies,
    })
}

/// Best unraveling found for the Rényi entropy of order `cfg.alpha > 1`.
pub fn renyi_extremal_search(a: &Unraveling, rho: &DensityMatrix, cfg: &SearchConfig) -> Result<(Unraveling, f64)> {
    if !(cfg.alpha > 1.0) {
        return Err(Error::Domain(format!(
            "search order {} <= 1: the Gram-diagonal unraveling from extremal_unraveling is optimal there",
            cfg.alpha
        )));
    }
    let r = unitary_local_search(a, rho, cfg)?;
    Ok((r.best, r.entropy))
}

/// Tsallis relation for the Gram-diagonal unravelings of `a` and `b`, with
/// the `g` factor of their effect POVMs.
pub fn extremal_pair_tsallis(
    a: &Unraveling,
    b: &Unraveling,
    rho: &DensityMatrix,
    orders: &ConjugateOrders,
) -> Result<BoundReport> {
    let m = povm_from_unraveling(&extremal_unraveling(a, rho)?.extremal)?;
    let n = povm_from_unraveling(&extremal_unraveling(b, rho)?.extremal)?;
    tsallis_uncertainty_check(&m, &n, rho, orders, FactorKind::G)
}

/// Rényi relation with the searched unraveling of `a` at order `α` and the
/// Gram-diagonal unraveling of `b`. `cfg.alpha` is replaced by `orders.alpha`.
pub fn extremal_pair_renyi(
    a: &Unraveling,
    b: &Unraveling,
    rho: &DensityMatrix,
    orders: &ConjugateOrders,
    cfg: &SearchConfig,
) -> Result<BoundReport> {
    if !(orders.alpha() > 1.0) {
        return Err(Error::Domain(format!(
            "extremal_pair_renyi needs alpha > 1, got {}",
            orders.alpha()
        )));
    }
    let cfg = SearchConfig {
        alpha: orders.alpha(),
        ..*cfg
    };
    let (a_best, _) = renyi_extremal_search(a, rho, &cfg)?;
    let m = povm_from_unraveling(&a_best)?;
    let n = povm_from_unraveling(&extremal_unraveling(b, rho)?.extremal)?;
    renyi_uncertainty_check(&m, &n, rho, orders, FactorKind::G)
}
