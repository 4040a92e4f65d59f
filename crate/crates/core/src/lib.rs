pub mod characters;
pub mod checks;
pub mod error;
pub mod exec;
pub mod fock;
pub mod fusion;
pub mod golden;
pub mod identities;
pub mod linalg;
pub mod partition;
pub mod probe;
pub mod props;
pub mod report;
pub mod scalar;
pub mod vertex;
pub mod virasoro;
pub mod zhu;

pub use error::{Result, VoaError};
pub use fock::{FockMonomial, GradedVector, SpaceConfig};
pub use report::{CheckReport, Status};
pub use scalar::ExactScalar;
