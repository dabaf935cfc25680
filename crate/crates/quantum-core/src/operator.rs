use nalgebra::DMatrix;
use std::ops::{Add, Mul, Neg, Sub};

use crate::{cr, C64, QcError};

/// Dense complex operator. Hamiltonian-valued operators carry MHz units by
/// convention; everything else is dimensionless.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    mat: DMatrix<C64>,
}

impl Operator {
    pub fn new(mat: DMatrix<C64>) -> Self {
        assert_eq!(mat.nrows(), mat.ncols(), "operators are square");
        Operator { mat }
    }

    pub fn zeros(dim: usize) -> Self {
        Operator::new(DMatrix::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        Operator::new(DMatrix::identity(dim, dim))
    }

    /// Build from a row-major slice of complex entries.
    pub fn from_rows(dim: usize, entries: &[C64]) -> Self {
        assert_eq!(entries.len(), dim * dim);
        Operator::new(DMatrix::from_row_slice(dim, dim, entries))
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn mat(&self) -> &DMatrix<C64> {
        &self.mat
    }

    pub fn into_mat(self) -> DMatrix<C64> {
        self.mat
    }

    pub fn dagger(&self) -> Operator {
        Operator::new(self.mat.adjoint())
    }

    pub fn trace(&self) -> C64 {
        self.mat.trace()
    }

    pub fn scale(&self, s: C64) -> Operator {
        Operator::new(self.mat.map(|z| z * s))
    }

    pub fn scale_re(&self, s: f64) -> Operator {
        self.scale(cr(s))
    }

    pub fn commutator(&self, other: &Operator) -> Operator {
        Operator::new(&self.mat * &other.mat - &other.mat * &self.mat)
    }

    pub fn anticommutator(&self, other: &Operator) -> Operator {
        Operator::new(&self.mat * &other.mat + &other.mat * &self.mat)
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        crate::max_abs_diff(&self.mat, &self.mat.adjoint())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_deviation() <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        let id = DMatrix::identity(self.dim(), self.dim());
        crate::max_abs_diff(&(&self.mat * self.mat.adjoint()), &id) <= tol
    }

    /// Eigendecomposition of a Hermitian operator: real ascending
    /// eigenvalues and the matching eigenvector columns.
    pub fn herm_eigen(&self) -> (Vec<f64>, DMatrix<C64>) {
        herm_eigen(&self.mat)
    }

    /// Frobenius (Hilbert–Schmidt) norm.
    pub fn fro_norm(&self) -> f64 {
        self.mat.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest singular value.
    pub fn op_norm(&self) -> f64 {
        let gram = self.mat.adjoint() * &self.mat;
        let (evals, _) = herm_eigen(&gram);
        evals.last().copied().unwrap_or(0.0).max(0.0).sqrt()
    }

    /// Hilbert–Schmidt inner product ⟨self, other⟩ = tr(self† · other).
    pub fn hs_inner(&self, other: &Operator) -> C64 {
        (self.mat.adjoint() * &other.mat).trace()
    }
}

fn herm_eigen(m: &DMatrix<C64>) -> (Vec<f64>, DMatrix<C64>) {
    let se = m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..se.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| se.eigenvalues[a].partial_cmp(&se.eigenvalues[b]).unwrap());
    let evals: Vec<f64> = order.iter().map(|&k| se.eigenvalues[k]).collect();
    let n = m.nrows();
    let mut vecs = DMatrix::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        vecs.set_column(col, &se.eigenvectors.column(k));
    }
    (evals, vecs)
}

/// Square root of a Hermitian PSD matrix via eigendecomposition, with
/// negative eigenvalues (numerical noise) clipped at zero. Rejects inputs
/// that are not Hermitian/positive beyond `tol`.
pub fn sqrtm_psd(m: &DMatrix<C64>, tol: f64) -> Result<DMatrix<C64>, QcError> {
    let dev = crate::max_abs_diff(m, &m.adjoint());
    if dev > tol.max(1e-10) {
        return Err(QcError::NotHermitian(dev));
    }
    let (evals, vecs) = herm_eigen(m);
    if let Some(&min) = evals.first() {
        if min < -tol {
            return Err(QcError::NotPositive(min));
        }
    }
    let sqrt_diag = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        evals.len(),
        evals.iter().map(|&l| cr(l.max(0.0).sqrt())),
    ));
    Ok(&vecs * sqrt_diag * vecs.adjoint())
}

impl Add for &Operator {
    type Output = Operator;
    fn add(self, rhs: &Operator) -> Operator {
        Operator::new(self.mat() + rhs.mat())
    }
}

impl Sub for &Operator {
    type Output = Operator;
    fn sub(self, rhs: &Operator) -> Operator {
        Operator::new(self.mat() - rhs.mat())
    }
}

impl Mul for &Operator {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        Operator::new(self.mat() * rhs.mat())
    }
}

impl Neg for &Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        self.scale(cr(-1.0))
    }
}
