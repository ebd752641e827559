//! Exact arithmetic kernel: Gaussian-rational scalars and small dense
//! matrices. Every algebraic predicate used elsewhere in the crate is decided
//! here with zero tolerance.

mod matrix;
mod scalar;

pub use matrix::{rank_over_reals, ExactMatrix};
pub use scalar::GaussianRational;

pub(crate) use matrix::bareiss_rank;
pub(crate) use scalar::{parse_ratio, rational};

/// 2×2 matrices used to build the Clifford generator representations.
pub mod pauli {
    use super::ExactMatrix;

    /// `[[0, 1], [-1, 0]]`
    pub fn sigma1() -> ExactMatrix {
        ExactMatrix::from_int_pairs(2, 2, &[(0, 0), (1, 0), (-1, 0), (0, 0)]).unwrap()
    }

    /// `[[0, j], [j, 0]]`
    pub fn sigma2() -> ExactMatrix {
        ExactMatrix::from_int_pairs(2, 2, &[(0, 0), (0, 1), (0, 1), (0, 0)]).unwrap()
    }

    /// `[[1, 0], [0, -1]]`
    pub fn sigma3() -> ExactMatrix {
        ExactMatrix::from_int_pairs(2, 2, &[(1, 0), (0, 0), (0, 0), (-1, 0)]).unwrap()
    }
}
