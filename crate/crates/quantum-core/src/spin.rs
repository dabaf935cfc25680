use crate::{c, cr, C64, Operator, QutritBasis};
use nalgebra::DMatrix;

/// Spin-1 operators (S_x, S_y, S_z) in the fixed (|+1⟩, |0⟩, |−1⟩) ordering.
pub fn spin1_operators() -> (Operator, Operator, Operator) {
    let s = 1.0 / 2f64.sqrt();
    let sx = Operator::from_rows(
        3,
        &[
            cr(0.0), cr(s), cr(0.0),
            cr(s), cr(0.0), cr(s),
            cr(0.0), cr(s), cr(0.0),
        ],
    );
    let sy = Operator::from_rows(
        3,
        &[
            cr(0.0), c(0.0, -s), cr(0.0),
            c(0.0, s), cr(0.0), c(0.0, -s),
            cr(0.0), c(0.0, s), cr(0.0),
        ],
    );
    let sz = Operator::from_rows(
        3,
        &[
            cr(1.0), cr(0.0), cr(0.0),
            cr(0.0), cr(0.0), cr(0.0),
            cr(0.0), cr(0.0), cr(-1.0),
        ],
    );
    (sx, sy, sz)
}

/// Qubit Paulis (σ_x, σ_y, σ_z) in logical order (|0_L⟩, |1_L⟩).
pub fn qubit_paulis() -> (Operator, Operator, Operator) {
    let sx = Operator::from_rows(2, &[cr(0.0), cr(1.0), cr(1.0), cr(0.0)]);
    let sy = Operator::from_rows(2, &[cr(0.0), c(0.0, -1.0), c(0.0, 1.0), cr(0.0)]);
    let sz = Operator::from_rows(2, &[cr(1.0), cr(0.0), cr(0.0), cr(-1.0)]);
    (sx, sy, sz)
}

/// Embed a 2×2 logical-subspace operator into the qutrit, zero on the
/// auxiliary level.
pub fn embed_logical(op2: &Operator, basis: QutritBasis) -> Operator {
    assert_eq!(op2.dim(), 2);
    let idx = basis.logical();
    let mut m: DMatrix<C64> = DMatrix::zeros(3, 3);
    for a in 0..2 {
        for b in 0..2 {
            m[(idx[a], idx[b])] = op2.mat()[(a, b)];
        }
    }
    Operator::new(m)
}
