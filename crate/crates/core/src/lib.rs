//! Extremal Kraus unravelings of trace-preserving maps, Tsallis and Rényi
//! entropies of the resulting effect distributions, and numerical checks of
//! entropic uncertainty relations for pairs of measurements.
//!
//! Modules, bottom to top:
//!
//! - [`linalg`]: dense complex matrices, Hermitian eigendecomposition, seeded
//!   random states and unitaries.
//! - [`entropy`]: classical and quantum Tsallis/Rényi entropies, `ln_α`,
//!   conjugate order pairs.
//! - [`channels`]: unravelings, remixing, the Gram matrix `Π(A|ρ)` and the
//!   extremal unraveling that minimizes every Tsallis entropy.
//! - [`bounds`]: POVMs, the overlap factors `g ≤ f ≤ f̄` and the Tsallis and
//!   Rényi uncertainty checks, plus the two-variable minimization behind the
//!   Tsallis bound.
//! - [`ensembles`]: pure and mixed ensembles and their entropy bounds.
//! - [`demos`]: DFT-complementary observables and binned angle versus
//!   angular momentum.
//! - [`search`]: local search over remixings for Rényi orders above one and
//!   uncertainty relations for extremal unravelings of two channels.

pub mod bounds;
pub mod channels;
pub mod demos;
pub mod ensembles;
pub mod entropy;
pub mod error;
pub mod linalg;
pub mod search;

pub use error::{Error, Result};
