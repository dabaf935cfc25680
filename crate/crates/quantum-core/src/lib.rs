//! Dense complex linear algebra for a driven qutrit: basis conventions,
//! spin-1 operators, density matrices, and state-fidelity primitives.
//!
//! Unit convention used across the workspace: Hamiltonians are stored in
//! cycle frequency (MHz, i.e. H/h) and time is in microseconds. The factor
//! of 2π is applied by the propagator, never here.

mod density;
mod operator;
mod spin;

pub use density::{project_computational, uhlmann_fidelity, DensityMatrix};
pub use operator::{sqrtm_psd, Operator};
pub use spin::{embed_logical, qubit_paulis, spin1_operators};

use nalgebra::DMatrix;
use num_complex::Complex;

pub type C64 = Complex<f64>;

pub fn c(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

pub fn cr(re: f64) -> C64 {
    Complex::new(re, 0.0)
}

pub const I: C64 = Complex::new(0.0, 1.0);

#[derive(Debug, thiserror::Error)]
pub enum QcError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("matrix is not Hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),
    #[error("matrix is not positive semidefinite (min eigenvalue {0:.3e})")]
    NotPositive(f64),
    #[error("trace is {0:.12}, expected 1")]
    BadTrace(f64),
    #[error("state is fully leaked out of the computational subspace")]
    FullyLeaked,
}

/// Qutrit level ordering. Fixed once for the whole workspace: index 0 is
/// |+1⟩, index 1 the auxiliary |0⟩, index 2 is |−1⟩, so S_z is diagonal
/// descending. The logical qubit is |0_L⟩ = |−1⟩, |1_L⟩ = |+1⟩.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QutritBasis {
    pub plus: usize,
    pub aux: usize,
    pub minus: usize,
}

impl QutritBasis {
    pub const STANDARD: QutritBasis = QutritBasis {
        plus: 0,
        aux: 1,
        minus: 2,
    };

    /// Computational-subspace indices in logical order (|0_L⟩, |1_L⟩).
    pub fn logical(&self) -> [usize; 2] {
        [self.minus, self.plus]
    }

    pub fn is_valid(&self) -> bool {
        self.plus != self.aux && self.minus != self.aux && self.plus != self.minus
    }
}

/// |i⟩⟨j| in a `dim`-dimensional space.
pub fn ketbra(dim: usize, i: usize, j: usize) -> DMatrix<C64> {
    let mut m = DMatrix::zeros(dim, dim);
    m[(i, j)] = cr(1.0);
    m
}

pub fn max_abs_diff(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}
