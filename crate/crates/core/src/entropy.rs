//! Tsallis and Rényi entropies (in nats), the α-logarithm and conjugate
//! order pairs.

use crate::error::{Error, Result};
use crate::linalg::{spectral_noise_floor, DensityMatrix, TOL_PSD};

/// Orders closer than this to one use the Shannon / von Neumann formulas.
pub const EPS_ORDER: f64 = 1e-8;
const PROB_CLIP: f64 = 1e-12;
const PROB_SUM_TOL: f64 = 1e-10;

/// Order `α > 0` of an entropy.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct EntropyOrder(f64);

impl EntropyOrder {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::Domain(format!("entropy order must be > 0, got {alpha}")));
        }
        Ok(Self(alpha))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_shannon(self) -> bool {
        (self.0 - 1.0).abs() < EPS_ORDER
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EntropyKind {
    Tsallis,
    Renyi,
}

impl std::str::FromStr for EntropyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tsallis" => Ok(Self::Tsallis),
            "renyi" => Ok(Self::Renyi),
            other => Err(Error::UnsupportedKind(other.to_string())),
        }
    }
}

/// A probability distribution. Entries down to `-1e-12` are clipped to zero
/// and a total within `1e-10` of one is renormalized; anything else is
/// rejected.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbVector(Vec<f64>);

impl ProbVector {
    pub fn new(mut probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::Probability("empty distribution".into()));
        }
        for p in probs.iter_mut() {
            if !p.is_finite() || *p < -PROB_CLIP {
                return Err(Error::Probability(format!("entry {p} out of range")));
            }
            if *p < 0.0 {
                *p = 0.0;
            }
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > PROB_SUM_TOL {
            return Err(Error::Probability(format!("entries sum to {total}")));
        }
        probs.iter_mut().for_each(|p| *p /= total);
        Ok(Self(probs))
    }

    /// Eigenvalues of a PSD unit-trace matrix. Values within `TOL_PSD` below
    /// zero, and positive values at rounding level, are set to zero first.
    pub fn from_spectrum(values: &[f64]) -> Result<Self> {
        let floor = spectral_noise_floor(values);
        Self::new(
            values
                .iter()
                .map(|&l| if l >= -TOL_PSD && l <= floor { 0.0 } else { l })
                .collect(),
        )
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Probability("empty distribution".into()));
        }
        Ok(Self(vec![1.0 / n as f64; n]))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `Σ p_i^s` with `0^s = 0`.
    pub fn power_sum(&self, s: f64) -> f64 {
        self.0.iter().filter(|&&p| p > 0.0).map(|p| p.powf(s)).sum()
    }

    /// `(Σ p_i^s)^{1/s}`; a norm only for `s ≥ 1`.
    pub fn power_norm(&self, s: f64) -> f64 {
        self.power_sum(s).powf(1.0 / s)
    }

    pub fn shannon(&self) -> f64 {
        -self
            .0
            .iter()
            .filter(|&&p| p > 0.0)
            .map(|p| p * p.ln())
            .sum::<f64>()
    }
}

/// `ln_α x = (x^{1−α} − 1)/(1 − α)`, the natural log near `α = 1`.
///
/// At `x = 0` the value is finite only for `α < 1`.
pub fn alpha_log(x: f64, order: EntropyOrder) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::Domain(format!("alpha_log of negative {x}")));
    }
    let a = order.value();
    if x == 0.0 && (order.is_shannon() || a > 1.0) {
        return Err(Error::Domain(format!("alpha_log(0) diverges at order {a}")));
    }
    if order.is_shannon() {
        return Ok(x.ln());
    }
    Ok((x.powf(1.0 - a) - 1.0) / (1.0 - a))
}

/// `(1−α)^{-1}(Σ p_i^α − 1)`, Shannon at `α → 1`.
pub fn tsallis_entropy(p: &ProbVector, order: EntropyOrder) -> f64 {
    let h = if order.is_shannon() {
        p.shannon()
    } else {
        let a = order.value();
        (p.power_sum(a) - 1.0) / (1.0 - a)
    };
    h.max(0.0)
}

/// `(1−α)^{-1} ln Σ p_i^α`, Shannon at `α → 1`.
pub fn renyi_entropy(p: &ProbVector, order: EntropyOrder) -> f64 {
    let h = if order.is_shannon() {
        p.shannon()
    } else {
        let a = order.value();
        p.power_sum(a).ln() / (1.0 - a)
    };
    h.max(0.0)
}

pub fn entropy(p: &ProbVector, order: EntropyOrder, kind: EntropyKind) -> f64 {
    match kind {
        EntropyKind::Tsallis => tsallis_entropy(p, order),
        EntropyKind::Renyi => renyi_entropy(p, order),
    }
}

/// Rényi entropy from the Tsallis entropy of the same distribution.
pub fn renyi_from_tsallis(h: f64, order: EntropyOrder) -> Result<f64> {
    if order.is_shannon() {
        return Ok(h);
    }
    let a = order.value();
    let arg = 1.0 + (1.0 - a) * h;
    if !(arg > 0.0) {
        return Err(Error::Domain(format!("1 + (1-alpha) h = {arg} <= 0")));
    }
    Ok(arg.ln() / (1.0 - a))
}

/// Entropy of the spectrum of `ρ`; both kinds give von Neumann at `α → 1`.
pub fn quantum_entropy(rho: &DensityMatrix, order: EntropyOrder, kind: EntropyKind) -> Result<f64> {
    let spectrum = ProbVector::from_spectrum(&rho.eigen()?.values)?;
    Ok(entropy(&spectrum, order, kind))
}

/// Orders with `1/α + 1/β = 2`, and `μ = max{α, β}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConjugateOrders {
    alpha: f64,
    beta: f64,
    mu: f64,
}

impl ConjugateOrders {
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn alpha_order(&self) -> EntropyOrder {
        EntropyOrder(self.alpha)
    }

    pub fn beta_order(&self) -> EntropyOrder {
        EntropyOrder(self.beta)
    }

    pub fn mu_order(&self) -> EntropyOrder {
        EntropyOrder(self.mu)
    }

    /// The pair with the two roles exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            alpha: self.beta,
            beta: self.alpha,
            mu: self.mu,
        }
    }

    /// Both orders at the Shannon point; bounds there are limits, not
    /// instances of the `α > 1 > β` derivation.
    pub fn is_limit_point(&self) -> bool {
        EntropyOrder(self.alpha).is_shannon() && EntropyOrder(self.beta).is_shannon()
    }
}

pub fn conjugate_order(alpha: f64) -> Result<ConjugateOrders> {
    if !(alpha.is_finite() && alpha > 0.5) {
        return Err(Error::Domain(format!(
            "conjugate order requires alpha > 1/2, got {alpha}"
        )));
    }
    let beta = alpha / (2.0 * alpha - 1.0);
    Ok(ConjugateOrders {
        alpha,
        beta,
        mu: alpha.max(beta),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{random_density, seeded_rng};
    use proptest::prelude::*;
    use rand::Rng;

    fn ord(a: f64) -> EntropyOrder {
        EntropyOrder::new(a).unwrap()
    }

    fn pv(p: &[f64]) -> ProbVector {
        ProbVector::new(p.to_vec()).unwrap()
    }

    fn random_pv(n: usize, rng: &mut impl Rng) -> ProbVector {
        let raw: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
        let s: f64 = raw.iter().sum();
        ProbVector::new(raw.iter().map(|x| x / s).collect()).unwrap()
    }

    #[test]
    fn alpha_log_values() {
        for a in [0.3, 1.0, 2.0, 7.0] {
            assert_eq!(alpha_log(1.0, ord(a)).unwrap(), 0.0);
        }
        assert!((alpha_log(4.0, ord(2.0)).unwrap() - 0.75).abs() < 1e-15);
        let e = std::f64::consts::E;
        for a in [1.0 - 1e-9, 1.0 + 1e-9] {
            assert!((alpha_log(e, ord(a)).unwrap() - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn alpha_log_domain() {
        assert!(alpha_log(-0.1, ord(2.0)).is_err());
        assert!(alpha_log(0.0, ord(2.0)).is_err());
        assert!(alpha_log(0.0, ord(1.0)).is_err());
        assert!((alpha_log(0.0, ord(0.5)).unwrap() + 2.0).abs() < 1e-15);
    }

    #[test]
    fn alpha_log_continuous_in_order() {
        let x = 3.7;
        let below = alpha_log(x, ord(1.0 - 2e-8)).unwrap();
        let at = alpha_log(x, ord(1.0)).unwrap();
        let above = alpha_log(x, ord(1.0 + 2e-8)).unwrap();
        assert!((below - at).abs() < 1e-7 && (above - at).abs() < 1e-7);
    }

    #[test]
    fn entropy_hand_values() {
        assert!((tsallis_entropy(&pv(&[0.5, 0.5]), ord(2.0)) - 0.5).abs() < 1e-15);
        assert!((tsallis_entropy(&ProbVector::uniform(4).unwrap(), ord(2.0)) - 0.75).abs() < 1e-15);
        for a in [0.3, 1.0, 2.0, 5.0] {
            assert_eq!(tsallis_entropy(&pv(&[1.0, 0.0, 0.0]), ord(a)), 0.0);
            assert_eq!(renyi_entropy(&pv(&[1.0, 0.0]), ord(a)), 0.0);
        }
        let ln2 = std::f64::consts::LN_2;
        assert!((renyi_entropy(&pv(&[0.5, 0.5]), ord(2.0)) - ln2).abs() < 1e-15);
    }

    #[test]
    fn conversion_hand_values() {
        assert_eq!(renyi_from_tsallis(0.0, ord(0.5)).unwrap(), 0.0);
        assert!((renyi_from_tsallis(0.5, ord(2.0)).unwrap() - std::f64::consts::LN_2).abs() < 1e-15);
        assert!(renyi_from_tsallis(1.0, ord(2.0)).is_err());
    }

    #[test]
    fn conversion_identity_random() {
        let mut rng = seeded_rng(20);
        for _ in 0..100 {
            let p = random_pv(rng.random_range(2..8), &mut rng);
            for a in [0.3, 0.5, 0.7, 2.0, 5.0] {
                let direct = renyi_entropy(&p, ord(a));
                let via = renyi_from_tsallis(tsallis_entropy(&p, ord(a)), ord(a)).unwrap();
                assert!((direct - via).abs() < 1e-12, "alpha {a}: {direct} vs {via}");
            }
        }
    }

    #[test]
    fn prob_vector_clipping_and_rejection() {
        let p = ProbVector::new(vec![1.0 + 5e-11, -5e-13]).unwrap();
        assert_eq!(p.as_slice()[1], 0.0);
        assert!((p.as_slice().iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert!(ProbVector::new(vec![0.5, 0.4]).is_err());
        assert!(ProbVector::new(vec![1.1, -0.1]).is_err());
        assert!(ProbVector::new(vec![]).is_err());
    }

    #[test]
    fn quantum_entropy_values() {
        let d = 3;
        let mixed = DensityMatrix::maximally_mixed(d).unwrap();
        for a in [0.4, 1.0, 2.0, 3.0] {
            let ts = quantum_entropy(&mixed, ord(a), EntropyKind::Tsallis).unwrap();
            assert!((ts - alpha_log(d as f64, ord(a)).unwrap()).abs() < 1e-12);
            let re = quantum_entropy(&mixed, ord(a), EntropyKind::Renyi).unwrap();
            assert!((re - (d as f64).ln()).abs() < 1e-12);
        }
        let pure = random_density(3, 1, 3).unwrap();
        for kind in [EntropyKind::Tsallis, EntropyKind::Renyi] {
            assert!(quantum_entropy(&pure, ord(2.0), kind).unwrap().abs() < 1e-10);
        }
        let rho = random_density(3, 3, 4).unwrap();
        let ts = quantum_entropy(&rho, ord(2.0), EntropyKind::Tsallis).unwrap();
        assert!((ts - (1.0 - rho.purity())).abs() < 1e-10);
    }

    #[test]
    fn quantum_entropy_embeds_classical() {
        let mut rng = seeded_rng(21);
        for _ in 0..20 {
            let p = random_pv(4, &mut rng);
            let rho = DensityMatrix::diagonal(p.as_slice()).unwrap();
            for a in [0.5, 1.0, 2.5] {
                for kind in [EntropyKind::Tsallis, EntropyKind::Renyi] {
                    let q = quantum_entropy(&rho, ord(a), kind).unwrap();
                    assert!((q - entropy(&p, ord(a), kind)).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn conjugate_pairs() {
        let c = conjugate_order(1.0).unwrap();
        assert_eq!((c.beta(), c.mu()), (1.0, 1.0));
        assert!(c.is_limit_point());
        let c = conjugate_order(2.0).unwrap();
        assert!((c.beta() - 2.0 / 3.0).abs() < 1e-15 && c.mu() == 2.0);
        let c = conjugate_order(2.0 / 3.0).unwrap();
        assert!((c.beta() - 2.0).abs() < 1e-12 && (c.mu() - 2.0).abs() < 1e-12);
        assert!(conjugate_order(0.5).is_err());
        assert!(conjugate_order(0.2).is_err());
        let c = conjugate_order(3.0).unwrap();
        assert!((1.0 / c.alpha() + 1.0 / c.beta() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn uniform_is_maximal() {
        let mut rng = seeded_rng(22);
        for n in 2..7 {
            let u = ProbVector::uniform(n).unwrap();
            for _ in 0..50 {
                let p = random_pv(n, &mut rng);
                for a in [0.3, 1.0, 2.0, 5.0] {
                    assert!(tsallis_entropy(&p, ord(a)) <= tsallis_entropy(&u, ord(a)) + 1e-12);
                    assert!(renyi_entropy(&p, ord(a)) <= renyi_entropy(&u, ord(a)) + 1e-12);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn permutation_invariant(raw in proptest::collection::vec(0.0f64..1.0, 2..8), a in 0.1f64..6.0, rot in 0usize..8) {
            let s: f64 = raw.iter().sum();
            prop_assume!(s > 1e-3);
            let p: Vec<f64> = raw.iter().map(|x| x / s).collect();
            let mut q = p.clone();
            let k = rot % q.len();
            q.rotate_left(k);
            q.reverse();
            let (p, q) = (pv(&p), pv(&q));
            prop_assert!((tsallis_entropy(&p, ord(a)) - tsallis_entropy(&q, ord(a))).abs() < 1e-12);
            prop_assert!((renyi_entropy(&p, ord(a)) - renyi_entropy(&q, ord(a))).abs() < 1e-12);
        }

        #[test]
        fn renyi_non_increasing_in_order(raw in proptest::collection::vec(0.0f64..1.0, 2..8)) {
            let s: f64 = raw.iter().sum();
            prop_assume!(s > 1e-3);
            let p = pv(&raw.iter().map(|x| x / s).collect::<Vec<_>>());
            let grid = [0.1, 0.3, 0.5, 0.9, 1.0, 1.2, 2.0, 3.0, 5.0, 10.0];
            for w in grid.windows(2) {
                prop_assert!(renyi_entropy(&p, ord(w[1])) <= renyi_entropy(&p, ord(w[0])) + 1e-12);
            }
            for a in grid {
                prop_assert!(tsallis_entropy(&p, ord(a)) >= 0.0);
            }
        }
    }
}
