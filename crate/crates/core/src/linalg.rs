//! Dense complex linear algebra: Hilbert–Schmidt products, norms, Hermitian
//! eigendecomposition, PSD square roots and seeded random states/unitaries.
//!
//! Matrices are plain `nalgebra::DMatrix<Complex<f64>>`. The validated
//! wrappers [`DensityMatrix`] and [`UnitaryMatrix`] are immutable once built.

use nalgebra::{Complex, DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type ComplexMatrix = DMatrix<C64>;
pub type ComplexVector = DVector<C64>;

/// The only random generator used across the crate. Every random object is
/// a function of an explicit seed.
pub type SeededRng = ChaCha8Rng;

pub const TOL_HERM: f64 = 1e-9;
pub const TOL_UNITARY: f64 = 1e-9;
pub const TOL_TRACE: f64 = 1e-10;
pub const TOL_PSD: f64 = 1e-10;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn check_finite(x: &ComplexMatrix) -> Result<()> {
    if x.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

fn check_square(x: &ComplexMatrix, what: &str) -> Result<usize> {
    if x.nrows() == 0 || x.nrows() != x.ncols() {
        return Err(Error::Dimension(format!(
            "{what} must be square and non-empty, got {}x{}",
            x.nrows(),
            x.ncols()
        )));
    }
    Ok(x.nrows())
}

/// `‖X − X†‖_F`.
pub fn hermiticity_defect(x: &ComplexMatrix) -> f64 {
    (x - x.adjoint()).norm()
}

/// `(X + X†)/2`.
pub fn hermitian_part(x: &ComplexMatrix) -> ComplexMatrix {
    (x + x.adjoint()).scale(0.5)
}

/// Hilbert–Schmidt inner product `tr(X†Y)`.
pub fn hs_inner(x: &ComplexMatrix, y: &ComplexMatrix) -> Result<C64> {
    if x.shape() != y.shape() {
        return Err(Error::Dimension(format!(
            "hs_inner shapes {:?} and {:?}",
            x.shape(),
            y.shape()
        )));
    }
    Ok(x.iter().zip(y.iter()).map(|(a, b)| a.conj() * b).sum())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatrixNorms {
    pub frobenius: f64,
    pub spectral: f64,
}

/// Frobenius and spectral norms from the singular values.
pub fn matrix_norms(x: &ComplexMatrix) -> Result<MatrixNorms> {
    check_finite(x)?;
    if x.is_empty() {
        return Err(Error::Dimension("empty matrix".into()));
    }
    let s = x.clone().svd(false, false).singular_values;
    let frobenius = s.iter().map(|v| v * v).sum::<f64>().sqrt();
    let spectral = s.iter().cloned().fold(0.0, f64::max);
    Ok(MatrixNorms {
        frobenius,
        spectral,
    })
}

pub fn spectral_norm(x: &ComplexMatrix) -> Result<f64> {
    matrix_norms(x).map(|n| n.spectral)
}

/// A square matrix with `‖U†U − I‖_F ≤ TOL_UNITARY`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix(ComplexMatrix);

impl UnitaryMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        let d = check_square(&m, "unitary")?;
        check_finite(&m)?;
        let defect = (m.adjoint() * &m - ComplexMatrix::identity(d, d)).norm();
        if defect > TOL_UNITARY {
            return Err(Error::NotUnitary(defect));
        }
        Ok(Self(m))
    }

    pub fn identity(dim: usize) -> Self {
        Self(ComplexMatrix::identity(dim, dim))
    }

    /// Permutation matrix with `P[perm[j], j] = 1`, so column `j` of `A·P`
    /// is column `perm[j]` of `A`.
    pub fn permutation(perm: &[usize]) -> Result<Self> {
        let d = perm.len();
        let mut m = ComplexMatrix::zeros(d, d);
        for (j, &i) in perm.iter().enumerate() {
            if i >= d {
                return Err(Error::Dimension(format!("permutation index {i} >= {d}")));
            }
            m[(i, j)] = C64::new(1.0, 0.0);
        }
        Self::new(m)
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    /// Entrywise `|u_ij|²`; doubly stochastic for any unitary.
    pub fn unistochastic(&self) -> DMatrix<f64> {
        self.0.map(|z| z.norm_sqr())
    }
}

/// Eigenpairs of a Hermitian matrix, eigenvalues in descending order.
#[derive(Debug, Clone)]
pub struct HermitianEig {
    pub values: Vec<f64>,
    pub vectors: UnitaryMatrix,
}

impl HermitianEig {
    pub fn vector(&self, j: usize) -> ComplexVector {
        self.vectors.matrix().column(j).into_owned()
    }

    /// `V·diag(f(λ))·V†`.
    pub fn map_values(&self, f: impl Fn(f64) -> C64) -> ComplexMatrix {
        let v = self.vectors.matrix();
        let d = DVector::from_iterator(self.values.len(), self.values.iter().map(|&l| f(l)));
        let mut scaled = v.clone();
        for (j, mut col) in scaled.column_iter_mut().enumerate() {
            col *= d[j];
        }
        scaled * v.adjoint()
    }
}

/// Eigenvalues at or below this level are indistinguishable from zero after
/// a dense eigensolve.
pub fn spectral_noise_floor(values: &[f64]) -> f64 {
    let top = values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    64.0 * f64::EPSILON * top
}

/// Eigendecomposition of a Hermitian matrix. The input is symmetrized first;
/// only a defect larger than `TOL_HERM` is rejected.
pub fn hermitian_eig(h: &ComplexMatrix) -> Result<HermitianEig> {
    check_square(h, "hermitian_eig input")?;
    check_finite(h)?;
    let defect = hermiticity_defect(h);
    if defect > TOL_HERM {
        return Err(Error::NotHermitian(defect));
    }
    let sym = hermitian_part(h);
    let eig = SymmetricEigen::try_new(sym, f64::EPSILON, 0).ok_or(Error::EigenSolver)?;
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    // stable: exact ties keep solver order
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&j| eig.eigenvalues[j]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok(HermitianEig {
        values,
        vectors: UnitaryMatrix::new(vectors)?,
    })
}

/// Square root of a Hermitian PSD matrix; eigenvalues in `[−TOL_PSD, 0)` are
/// treated as zero.
pub fn psd_sqrt_hermitian(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(m)?;
    let min = eig.values.last().copied().unwrap_or(0.0);
    if min < -TOL_PSD {
        return Err(Error::NotPsd(min));
    }
    // eigenvalues at rounding level are zero; their square roots would not be
    let noise = spectral_noise_floor(&eig.values);
    Ok(eig.map_values(|l| C64::new(if l > noise { l.sqrt() } else { 0.0 }, 0.0)))
}

pub fn psd_sqrt(rho: &DensityMatrix) -> Result<ComplexMatrix> {
    psd_sqrt_hermitian(rho.matrix())
}

/// Hermitian, PSD, unit-trace state.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        check_square(&m, "density matrix")?;
        check_finite(&m)?;
        let defect = hermiticity_defect(&m);
        if defect > TOL_HERM {
            return Err(Error::NotHermitian(defect));
        }
        let m = hermitian_part(&m);
        let tr = m.trace().re;
        if (tr - 1.0).abs() > TOL_TRACE {
            return Err(Error::Trace((tr - 1.0).abs()));
        }
        let eig = hermitian_eig(&m)?;
        let min = eig.values.last().copied().unwrap_or(0.0);
        if min < -TOL_PSD {
            return Err(Error::NotPsd(min));
        }
        Ok(Self { matrix: m })
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Dimension("dim must be positive".into()));
        }
        Ok(Self {
            matrix: ComplexMatrix::identity(dim, dim).scale(1.0 / dim as f64),
        })
    }

    /// `ψψ†` for a unit vector `ψ`.
    pub fn pure(psi: &ComplexVector) -> Result<Self> {
        if psi.is_empty() {
            return Err(Error::Dimension("empty state vector".into()));
        }
        let norm = psi.norm();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::Domain(format!("state vector norm {norm} is not 1")));
        }
        Self::new(psi * psi.adjoint())
    }

    pub fn diagonal(p: &[f64]) -> Result<Self> {
        let d = p.len();
        Self::new(ComplexMatrix::from_fn(d, d, |i, j| {
            if i == j {
                C64::new(p[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        }))
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn eigen(&self) -> Result<HermitianEig> {
        hermitian_eig(&self.matrix)
    }

    /// `tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        hs_inner(&self.matrix, &self.matrix)
            .map(|z| z.re)
            .unwrap_or(f64::NAN)
    }
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Matrix of independent standard complex Gaussians (`E|z|² = 1`).
pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// Haar-distributed unit vector.
pub fn random_state_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexVector {
    let v = ComplexVector::from_fn(dim, |_, _| complex_gaussian(rng));
    let n = v.norm();
    v.unscale(n)
}

/// Haar unitary from the QR factorization of a Ginibre matrix, with the
/// phases of `R`'s diagonal pushed into `Q`.
pub fn haar_unitary_with<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<UnitaryMatrix> {
    if dim == 0 {
        return Err(Error::Dimension("unitary dimension must be positive".into()));
    }
    let qr = ginibre(dim, dim, rng).qr();
    let mut q = qr.q();
    let r = qr.r();
    for (j, mut col) in q.column_iter_mut().enumerate() {
        let rjj = r[(j, j)];
        let n = rjj.norm();
        if n > 0.0 {
            col *= rjj / n;
        }
    }
    UnitaryMatrix::new(q)
}

pub fn haar_random_unitary(dim: usize, seed: u64) -> Result<UnitaryMatrix> {
    haar_unitary_with(dim, &mut seeded_rng(seed))
}

/// `GG†/tr(GG†)` with `G` a `dim × rank` Ginibre matrix.
pub fn random_density_with<R: Rng + ?Sized>(
    dim: usize,
    rank: usize,
    rng: &mut R,
) -> Result<DensityMatrix> {
    if dim == 0 || rank == 0 || rank > dim {
        return Err(Error::Dimension(format!(
            "need 1 <= rank <= dim, got rank {rank}, dim {dim}"
        )));
    }
    let g = ginibre(dim, rank, rng);
    let gg = &g * g.adjoint();
    let tr = gg.trace().re;
    DensityMatrix::new(gg.unscale(tr))
}

pub fn random_density(dim: usize, rank: usize, seed: u64) -> Result<DensityMatrix> {
    random_density_with(dim, rank, &mut seeded_rng(seed))
}
