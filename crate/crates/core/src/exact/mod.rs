//! Exact scalar and matrix arithmetic over Q and prime fields, canonical
//! subspaces, and the nilpotency / semisimplicity predicates shared by the
//! rest of the crate.

pub mod matrix;
pub mod multipoly;
pub mod nilpotency;
pub mod poly;
pub mod scalar;
pub mod subspace;

pub use matrix::{Matrix, PreparedSolver};
pub use multipoly::MultiPoly;
pub use nilpotency::{all_nilpotent, all_nilpotent_witness};
pub use scalar::{FieldTag, Scalar};
pub use subspace::Subspace;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactError {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("operation is defined over the rationals only")]
    RequiresRational,
    #[error("characteristic polynomial over F{modulus} needs modulus > {size}")]
    SmallCharacteristic { modulus: u64, size: usize },
    #[error("ambient dimension {ambient} is not a space of square matrices")]
    NotMatrixSpace { ambient: usize },
}
