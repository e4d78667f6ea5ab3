//! General SIC-POVMs and the separability criteria built on them.
//!
//! * [`gellmann`] and [`sicpovm`] construct general SIC-POVMs in any
//!   dimension 2..=64 and evaluate outcome probabilities and the index of
//!   coincidence.
//! * [`criteria`] computes `J(ρ)` for bipartite, multipartite and
//!   block-partitioned states and compares it with the separability bounds.
//! * [`assignment`] holds the combinatorial maximization behind `J`.
//! * [`states`] generates benchmark states and reads/writes state files.
//! * [`oracles`] provides the PPT test and brute-force `J` for cross-checks.
//!
//! Numeric code is generic over [`Real`] (`f64` or `f32`); the aliases below
//! fix the scalar to `f64`, with `*32` variants for single precision.

pub mod assignment;
pub mod criteria;
pub mod error;
pub mod gellmann;
mod json;
pub mod matcore;
pub mod oracles;
pub mod scalar;
pub mod sicpovm;
pub mod states;

pub use error::{Error, Result};
pub use scalar::Real;

pub use criteria::{JMode, PartitionSpec, Solver, Theorem};
pub use oracles::PptReport;
pub use sicpovm::PovmResiduals;

pub type ComplexMatrix = matcore::Matrix<f64>;
pub type DensityMatrix = matcore::Density<f64>;
pub type OperatorBasis = gellmann::OperatorBasis<f64>;
pub type GeneralSicPovm = sicpovm::SicPovm<f64>;
pub type WeightTensor = assignment::WeightTensor<f64>;
pub type Assignment = assignment::Assignment<f64>;
pub type CriterionVerdict = criteria::CriterionVerdict<f64>;

pub type ComplexMatrix32 = matcore::Matrix<f32>;
pub type DensityMatrix32 = matcore::Density<f32>;
pub type GeneralSicPovm32 = sicpovm::SicPovm<f32>;
pub type WeightTensor32 = assignment::WeightTensor<f32>;
pub type CriterionVerdict32 = criteria::CriterionVerdict<f32>;
