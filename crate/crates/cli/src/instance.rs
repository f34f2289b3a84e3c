//! Problem instances on disk. Matrices are nested arrays of `[re, im]` pairs,
//! row-major.

use std::path::Path;

use serde::{Deserialize, Serialize};
use unravel::bounds::Povm;
use unravel::channels::Unraveling;
use unravel::linalg::{ComplexMatrix, DensityMatrix, C64};

use crate::CliError;

pub type MatrixJson = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<MatrixJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kraus: Option<Vec<MatrixJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub povm_m: Option<Vec<MatrixJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub povm_n: Option<Vec<MatrixJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

pub fn matrix_from_json(m: &MatrixJson, what: &str) -> Result<ComplexMatrix, CliError> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    if rows == 0 || cols == 0 || m.iter().any(|r| r.len() != cols) {
        return Err(CliError::format(format!("{what}: matrix must be a non-empty rectangular array")));
    }
    Ok(ComplexMatrix::from_fn(rows, cols, |i, j| {
        let [re, im] = m[i][j];
        C64::new(re, im)
    }))
}

pub fn matrix_to_json(m: &ComplexMatrix) -> MatrixJson {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

impl InstanceFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        let inst: Self = serde_json::from_str(&text)
            .map_err(|e| CliError::format(format!("{}: {e}", path.display())))?;
        if inst.dim == 0 {
            return Err(CliError::format("dim must be positive".into()));
        }
        Ok(inst)
    }

    /// `I/dim` when absent.
    pub fn density(&self) -> Result<DensityMatrix, CliError> {
        let rho = match &self.rho {
            Some(m) => DensityMatrix::new(matrix_from_json(m, "rho")?)?,
            None => DensityMatrix::maximally_mixed(self.dim)?,
        };
        if rho.dim() != self.dim {
            return Err(unravel::Error::Dimension(format!("rho is {0}x{0}, dim is {1}", rho.dim(), self.dim)).into());
        }
        Ok(rho)
    }

    pub fn unraveling(&self) -> Result<Unraveling, CliError> {
        let ops = self
            .kraus
            .as_ref()
            .ok_or_else(|| CliError::format("instance has no \"kraus\" field".into()))?
            .iter()
            .map(|m| matrix_from_json(m, "kraus"))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Unraveling::new(ops)?)
    }

    pub fn povm_pair(&self) -> Result<(Povm, Povm), CliError> {
        let load = |field: &Option<Vec<MatrixJson>>, name: &str| -> Result<Povm, CliError> {
            let elements = field
                .as_ref()
                .ok_or_else(|| CliError::format(format!("instance has no \"{name}\" field")))?
                .iter()
                .map(|m| matrix_from_json(m, name))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Povm::new(elements)?)
        };
        Ok((load(&self.povm_m, "povm_m")?, load(&self.povm_n, "povm_n")?))
    }
}
