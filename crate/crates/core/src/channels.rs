//! Kraus unravelings of trace-preserving maps, unitary remixing, the Gram
//! matrix `Π_ij = tr(A_i†A_j ρ)` and the extremal unraveling obtained by
//! diagonalizing it.

use rand::Rng;

use crate::entropy::{entropy, EntropyKind, EntropyOrder, ProbVector};
use crate::error::{Error, Result};
use crate::linalg::{
    check_finite, ginibre, hermitian_eig, hermitian_part, seeded_rng, ComplexMatrix,
    DensityMatrix, UnitaryMatrix, C64,
};

pub const TOL_COMPLETE: f64 = 1e-9;

/// An ordered set of Kraus operators `A_i : H → H'` with `Σ A_i†A_i = I`.
#[derive(Debug, Clone, PartialEq)]
pub struct Unraveling {
    ops: Vec<ComplexMatrix>,
}

impl Unraveling {
    pub fn new(ops: Vec<ComplexMatrix>) -> Result<Self> {
        let first = ops
            .first()
            .ok_or_else(|| Error::Dimension("unraveling needs at least one operator".into()))?;
        let shape = first.shape();
        if shape.0 == 0 || shape.1 == 0 {
            return Err(Error::Dimension("empty Kraus operator".into()));
        }
        for op in &ops {
            if op.shape() != shape {
                return Err(Error::Dimension(format!(
                    "Kraus operators of shapes {:?} and {:?}",
                    shape,
                    op.shape()
                )));
            }
            check_finite(op)?;
        }
        let defect = completeness_defect(&ops, shape.1);
        if defect > TOL_COMPLETE {
            return Err(Error::Completeness(defect));
        }
        Ok(Self { ops })
    }

    /// The single-operator unraveling `{U}`.
    pub fn unitary(u: &UnitaryMatrix) -> Self {
        Self {
            ops: vec![u.matrix().clone()],
        }
    }

    /// Von Neumann measurement channel in the basis given by the columns of
    /// `basis`: `A_k = b_k b_k†`.
    pub fn measurement(basis: &UnitaryMatrix) -> Self {
        let b = basis.matrix();
        let ops = (0..b.ncols())
            .map(|k| {
                let col = b.column(k);
                &col * col.adjoint()
            })
            .collect();
        Self { ops }
    }

    /// Qubit Pauli channel with weights `(1 − 3p/4, p/4, p/4, p/4)` on
    /// `(I, X, Y, Z)`; `p = 1` is the fully depolarizing channel.
    pub fn pauli_depolarizing(p: f64) -> Result<Self> {
        if !(0.0..=4.0 / 3.0).contains(&p) {
            return Err(Error::Domain(format!("depolarizing parameter {p} outside [0, 4/3]")));
        }
        let weights = [1.0 - 0.75 * p, p / 4.0, p / 4.0, p / 4.0];
        let ops = pauli_matrices()
            .into_iter()
            .zip(weights)
            .map(|(s, w)| s.scale(w.sqrt()))
            .collect();
        Self::new(ops)
    }

    pub fn random_with<R: Rng + ?Sized>(
        dim_in: usize,
        dim_out: usize,
        n_ops: usize,
        rng: &mut R,
    ) -> Result<Self> {
        if dim_in == 0 || dim_out == 0 || n_ops == 0 || n_ops * dim_out < dim_in {
            return Err(Error::Dimension(format!(
                "cannot build {n_ops} Kraus operators {dim_out}x{dim_in}"
            )));
        }
        // isometry W = G (G†G)^{-1/2}, split into row blocks
        let g = ginibre(n_ops * dim_out, dim_in, rng);
        let inv_sqrt = hermitian_eig(&(g.adjoint() * &g))?.map_values(|l| C64::new(l.sqrt().recip(), 0.0));
        let w = g * inv_sqrt;
        let ops = (0..n_ops)
            .map(|k| w.rows(k * dim_out, dim_out).into_owned())
            .collect();
        Self::new(ops)
    }

    /// Random channel from a Haar-like isometry.
    pub fn random(dim_in: usize, dim_out: usize, n_ops: usize, seed: u64) -> Result<Self> {
        Self::random_with(dim_in, dim_out, n_ops, &mut seeded_rng(seed))
    }

    pub fn ops(&self) -> &[ComplexMatrix] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn dim_in(&self) -> usize {
        self.ops[0].ncols()
    }

    pub fn dim_out(&self) -> usize {
        self.ops[0].nrows()
    }

    /// `‖Σ A_i†A_i − I‖_F`.
    pub fn completeness_defect(&self) -> f64 {
        completeness_defect(&self.ops, self.dim_in())
    }

    fn check_input(&self, rho: &DensityMatrix) -> Result<()> {
        if rho.dim() != self.dim_in() {
            return Err(Error::Dimension(format!(
                "state of dimension {} fed to a channel with input dimension {}",
                rho.dim(),
                self.dim_in()
            )));
        }
        Ok(())
    }
}

fn completeness_defect(ops: &[ComplexMatrix], dim_in: usize) -> f64 {
    let mut sum = ComplexMatrix::zeros(dim_in, dim_in);
    for a in ops {
        sum += a.adjoint() * a;
    }
    (sum - ComplexMatrix::identity(dim_in, dim_in)).norm()
}

/// `I, X, Y, Z`.
pub fn pauli_matrices() -> [ComplexMatrix; 4] {
    let z = C64::new(0.0, 0.0);
    let o = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    [
        ComplexMatrix::from_row_slice(2, 2, &[o, z, z, o]),
        ComplexMatrix::from_row_slice(2, 2, &[z, o, o, z]),
        ComplexMatrix::from_row_slice(2, 2, &[z, -i, i, z]),
        ComplexMatrix::from_row_slice(2, 2, &[o, z, z, -o]),
    ]
}

/// `Σ A_i ρ A_i†`.
pub fn apply_channel(a: &Unraveling, rho: &DensityMatrix) -> Result<DensityMatrix> {
    a.check_input(rho)?;
    let d = a.dim_out();
    let mut out = ComplexMatrix::zeros(d, d);
    for op in a.ops() {
        out += op * rho.matrix() * op.adjoint();
    }
    DensityMatrix::new(out)
}

/// `B_i = Σ_j A_j u_ji`. The unraveling is padded with zero operators when
/// `u` is larger than the operator count.
pub fn remix(a: &Unraveling, u: &UnitaryMatrix) -> Result<Unraveling> {
    let n = a.len();
    let m = u.dim();
    if m < n {
        return Err(Error::Dimension(format!(
            "remixing {n} Kraus operators with a {m}x{m} unitary"
        )));
    }
    let (rows, cols) = a.ops[0].shape();
    let u = u.matrix();
    let ops = (0..m)
        .map(|i| {
            let mut b = ComplexMatrix::zeros(rows, cols);
            for (j, aj) in a.ops.iter().enumerate() {
                b += aj * u[(j, i)];
            }
            b
        })
        .collect();
    Ok(Unraveling { ops })
}

/// `Π(A|ρ)`, an `n × n` Hermitian PSD unit-trace matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    pi: ComplexMatrix,
    label: String,
}

impl GramMatrix {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.pi
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn diagonal(&self) -> Vec<f64> {
        self.pi.diagonal().iter().map(|z| z.re).collect()
    }

    /// Diagonal of `U†ΠU`, i.e. the effect probabilities after a remix by `U`,
    /// without forming the remixed operators. `u` must match `Π`'s size.
    pub fn remixed_diagonal(&self, u: &ComplexMatrix) -> Vec<f64> {
        let pu = &self.pi * u;
        (0..u.ncols())
            .map(|i| {
                u.column(i)
                    .iter()
                    .zip(pu.column(i).iter())
                    .map(|(a, b)| (a.conj() * b).re)
                    .sum()
            })
            .collect()
    }
}

pub fn gram_matrix(a: &Unraveling, rho: &DensityMatrix) -> Result<GramMatrix> {
    a.check_input(rho)?;
    let n = a.len();
    let weighted: Vec<ComplexMatrix> = a.ops().iter().map(|op| op * rho.matrix()).collect();
    let mut pi = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v: C64 = a.ops[i]
                .iter()
                .zip(weighted[j].iter())
                .map(|(x, y)| x.conj() * y)
                .sum();
            pi[(i, j)] = v;
            pi[(j, i)] = v.conj();
        }
    }
    Ok(GramMatrix {
        pi: hermitian_part(&pi),
        label: format!("{n} Kraus operators, dim {}", a.dim_in()),
    })
}

/// `p_i = tr(A_i†A_i ρ)`.
pub fn effect_probabilities(a: &Unraveling, rho: &DensityMatrix) -> Result<ProbVector> {
    a.check_input(rho)?;
    let probs = a
        .ops()
        .iter()
        .map(|op| {
            let w = op * rho.matrix();
            op.iter().zip(w.iter()).map(|(x, y)| (x.conj() * y).re).sum()
        })
        .collect();
    ProbVector::new(probs)
}

#[derive(Debug, Clone)]
pub struct ExtremalResult {
    pub extremal: Unraveling,
    /// Eigenvalues of `Π`, descending; the effect probabilities of `extremal`.
    pub lambdas: ProbVector,
    pub diagonalizer: UnitaryMatrix,
}

/// The unraveling `A_i^{ex} = Σ_j A_j v_ji` where `V†ΠV` is diagonal.
///
/// For degenerate spectra the eigenbasis, and so the operators, are not
/// unique; only `lambdas` and quantities derived from them are canonical.
pub fn extremal_unraveling(a: &Unraveling, rho: &DensityMatrix) -> Result<ExtremalResult> {
    let pi = gram_matrix(a, rho)?;
    let eig = hermitian_eig(pi.matrix())?;
    let extremal = remix(a, &eig.vectors)?;
    Ok(ExtremalResult {
        extremal,
        lambdas: ProbVector::from_spectrum(&eig.values)?,
        diagonalizer: eig.vectors,
    })
}

pub fn unraveling_entropy(
    a: &Unraveling,
    rho: &DensityMatrix,
    order: EntropyOrder,
    kind: EntropyKind,
) -> Result<f64> {
    Ok(entropy(&effect_probabilities(a, rho)?, order, kind))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::tsallis_entropy;
    use crate::linalg::{haar_random_unitary, haar_unitary_with, random_density};

    fn ord(a: f64) -> EntropyOrder {
        EntropyOrder::new(a).unwrap()
    }

    #[test]
    fn rejects_incomplete_and_mismatched() {
        let half = ComplexMatrix::identity(2, 2).scale(0.5);
        assert!(matches!(Unraveling::new(vec![half]), Err(Error::Completeness(_))));
        let a = ComplexMatrix::identity(2, 2);
        let b = ComplexMatrix::zeros(3, 3);
        assert!(matches!(Unraveling::new(vec![a, b]), Err(Error::Dimension(_))));
        assert!(Unraveling::new(vec![]).is_err());
    }

    #[test]
    fn unitary_channel() {
        let u = haar_random_unitary(3, 1).unwrap();
        let a = Unraveling::unitary(&u);
        let rho = random_density(3, 3, 2).unwrap();
        let out = apply_channel(&a, &rho).unwrap();
        let expected = u.matrix() * rho.matrix() * u.matrix().adjoint();
        assert!((out.matrix() - expected).norm() < 1e-12);
        let s_in = rho.eigen().unwrap().values;
        let s_out = out.eigen().unwrap().values;
        for (x, y) in s_in.iter().zip(&s_out) {
            assert!((x - y).abs() < 1e-12);
        }
        let pi = gram_matrix(&a, &rho).unwrap();
        assert_eq!(pi.matrix().shape(), (1, 1));
        assert!((pi.matrix()[(0, 0)].re - 1.0).abs() < 1e-12);
        assert_eq!(effect_probabilities(&a, &rho).unwrap().as_slice(), &[1.0]);
        for kind in [EntropyKind::Tsallis, EntropyKind::Renyi] {
            for al in [0.5, 1.0, 2.0] {
                assert_eq!(unraveling_entropy(&a, &rho, ord(al), kind).unwrap(), 0.0);
            }
        }
        let ex = extremal_unraveling(&a, &rho).unwrap();
        assert_eq!(ex.lambdas.len(), 1);
        let ratio = ex.extremal.ops()[0][(0, 0)] / u.matrix()[(0, 0)];
        assert!((ratio.norm() - 1.0).abs() < 1e-12);
        assert!((&ex.extremal.ops()[0] - u.matrix() * ratio).norm() < 1e-12);
    }

    #[test]
    fn fully_depolarizing_on_pure_state() {
        let a = Unraveling::pauli_depolarizing(1.0).unwrap();
        let rho = DensityMatrix::diagonal(&[1.0, 0.0]).unwrap();
        let out = apply_channel(&a, &rho).unwrap();
        let expected = ComplexMatrix::identity(2, 2).scale(0.5);
        assert!((out.matrix() - expected).norm() < 1e-12);
        let mixed = DensityMatrix::maximally_mixed(2).unwrap();
        let h = unraveling_entropy(&a, &mixed, ord(2.0), EntropyKind::Tsallis).unwrap();
        assert!((h - 0.75).abs() < 1e-12);
    }

    #[test]
    fn depolarizing_gram_is_diagonal() {
        let p = 0.4;
        let a = Unraveling::pauli_depolarizing(p).unwrap();
        let rho = DensityMatrix::maximally_mixed(2).unwrap();
        let pi = gram_matrix(&a, &rho).unwrap();
        let w = [1.0 - 0.75 * p, p / 4.0, p / 4.0, p / 4.0];
        for i in 0..4 {
            for j in 0..4 {
                let expected = if i == j { w[i] } else { 0.0 };
                assert!((pi.matrix()[(i, j)] - C64::new(expected, 0.0)).norm() < 1e-12);
            }
        }
        let probs = effect_probabilities(&a, &rho).unwrap();
        for (x, y) in probs.as_slice().iter().zip(w) {
            assert!((x - y).abs() < 1e-12);
        }
        let ex = extremal_unraveling(&a, &rho).unwrap();
        let lam = ex.lambdas.as_slice();
        assert!((lam[0] - w[0]).abs() < 1e-12);
        assert!(lam[1..].iter().all(|l| (l - p / 4.0).abs() < 1e-12));
    }

    #[test]
    fn identity_and_permutation_remix() {
        let a = Unraveling::random(2, 2, 3, 5).unwrap();
        let same = remix(&a, &UnitaryMatrix::identity(3)).unwrap();
        for (x, y) in a.ops().iter().zip(same.ops()) {
            assert!((x - y).norm() < 1e-15);
        }
        let perm = UnitaryMatrix::permutation(&[2, 0, 1]).unwrap();
        let b = remix(&a, &perm).unwrap();
        assert!((&b.ops()[0] - &a.ops()[2]).norm() < 1e-15);
        assert!((&b.ops()[1] - &a.ops()[0]).norm() < 1e-15);
        assert!((&b.ops()[2] - &a.ops()[1]).norm() < 1e-15);
    }

    #[test]
    fn remix_pads_with_zero_operators() {
        let a = Unraveling::random(2, 2, 2, 6).unwrap();
        let u = haar_random_unitary(5, 7).unwrap();
        let b = remix(&a, &u).unwrap();
        assert_eq!(b.len(), 5);
        assert!(b.completeness_defect() < 1e-12);
        let rho = random_density(2, 2, 8).unwrap();
        let out_a = apply_channel(&a, &rho).unwrap();
        let out_b = apply_channel(&b, &rho).unwrap();
        assert!((out_a.matrix() - out_b.matrix()).norm() < 1e-12);
        assert!(matches!(remix(&b, &haar_random_unitary(3, 1).unwrap()), Err(Error::Dimension(_))));
    }

    #[test]
    fn random_remix_preserves_depolarizing_channel() {
        let a = Unraveling::pauli_depolarizing(0.6).unwrap();
        let mut rng = seeded_rng(9);
        for _ in 0..20 {
            let u = haar_unitary_with(4, &mut rng).unwrap();
            let rho = crate::linalg::random_density_with(2, 2, &mut rng).unwrap();
            let b = remix(&a, &u).unwrap();
            let diff = apply_channel(&a, &rho).unwrap().matrix() - apply_channel(&b, &rho).unwrap().matrix();
            assert!(diff.norm() < 1e-12);
        }
    }

    #[test]
    fn rectangular_kraus_operators() {
        let a = Unraveling::random(2, 3, 2, 10).unwrap();
        assert_eq!((a.dim_in(), a.dim_out()), (2, 3));
        let rho = random_density(2, 2, 11).unwrap();
        let out = apply_channel(&a, &rho).unwrap();
        assert_eq!(out.dim(), 3);
        let pi = gram_matrix(&a, &rho).unwrap();
        assert_eq!(pi.matrix().shape(), (2, 2));
        assert!((pi.matrix().trace().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn state_dimension_mismatch() {
        let a = Unraveling::random(2, 2, 2, 1).unwrap();
        let rho = DensityMatrix::maximally_mixed(3).unwrap();
        assert!(matches!(apply_channel(&a, &rho), Err(Error::Dimension(_))));
        assert!(matches!(gram_matrix(&a, &rho), Err(Error::Dimension(_))));
        assert!(matches!(effect_probabilities(&a, &rho), Err(Error::Dimension(_))));
    }

    #[test]
    fn extremal_gram_is_diagonal_and_probabilities_match() {
        let a = Unraveling::random(3, 3, 4, 12).unwrap();
        let rho = random_density(3, 2, 13).unwrap();
        let pi = gram_matrix(&a, &rho).unwrap();
        let probs = effect_probabilities(&a, &rho).unwrap();
        for (x, y) in pi.diagonal().iter().zip(probs.as_slice()) {
            assert!((x - y).abs() < 1e-12);
        }
        let ex = extremal_unraveling(&a, &rho).unwrap();
        let pex = gram_matrix(&ex.extremal, &rho).unwrap();
        let lam = ex.lambdas.as_slice();
        for i in 0..4 {
            for j in 0..4 {
                let expected = if i == j { lam[i] } else { 0.0 };
                assert!((pex.matrix()[(i, j)].re - expected).abs() < 1e-9);
                if i != j {
                    assert!(pex.matrix()[(i, j)].norm() < 1e-9);
                }
            }
        }
        assert!(ex.extremal.completeness_defect() < 1e-9);
        assert!(lam.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn extremal_beats_haar_remixings() {
        let mut rng = seeded_rng(14);
        let a = Unraveling::random_with(2, 2, 2, &mut rng).unwrap();
        let rho = crate::linalg::random_density_with(2, 2, &mut rng).unwrap();
        let ex = extremal_unraveling(&a, &rho).unwrap();
        let pi = gram_matrix(&a, &rho).unwrap();
        for _ in 0..2000 {
            let u = haar_unitary_with(2, &mut rng).unwrap();
            let p = ProbVector::new(pi.remixed_diagonal(u.matrix())).unwrap();
            for al in [0.3, 0.7, 2.0, 5.0] {
                assert!(tsallis_entropy(&ex.lambdas, ord(al)) <= tsallis_entropy(&p, ord(al)) + 1e-10);
            }
        }
    }

    #[test]
    fn remixed_diagonal_matches_explicit_remix() {
        let a = Unraveling::random(2, 2, 3, 15).unwrap();
        let rho = random_density(2, 2, 16).unwrap();
        let u = haar_random_unitary(3, 17).unwrap();
        let pi = gram_matrix(&a, &rho).unwrap();
        let fast = pi.remixed_diagonal(u.matrix());
        let slow = effect_probabilities(&remix(&a, &u).unwrap(), &rho).unwrap();
        for (x, y) in fast.iter().zip(slow.as_slice()) {
            assert!((x - y).abs() < 1e-12);
        }
    }
}
