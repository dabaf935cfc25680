//! Point-group machinery for the doublet-driven gate: irrep bookkeeping,
//! Schur averaging of coupling matrices, and Hilbert–Schmidt projection of
//! perturbation operators onto symmetry-sector representatives.

use nalgebra::{DMatrix, Matrix2, Vector2};
use quantum_core::{spin1_operators, Operator};

#[derive(Debug, thiserror::Error)]
pub enum SymmetryError {
    #[error("multiplicity for {irrep} is {value}, not an integer within 1e-9")]
    NonIntegerMultiplicity { irrep: &'static str, value: f64 },
    #[error("operator passed to hs_sector_weights must be Hermitian")]
    NotHermitian,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroupName {
    C3v,
    D3d,
    Trivial,
}

#[derive(Clone, Debug)]
pub struct Irrep {
    pub name: &'static str,
    /// Character per group element, aligned with `PointGroup::elements`.
    pub characters: Vec<f64>,
}

/// Finite point group carrying the doublet (E-type) representation its
/// elements act through. For the trivial group the "doublet" degenerates
/// to the 1×1 identity.
#[derive(Clone, Debug)]
pub struct PointGroup {
    pub name: GroupName,
    elements: Vec<DMatrix<f64>>,
    irreps: Vec<Irrep>,
}

fn rotation(theta: f64) -> DMatrix<f64> {
    let (s, c) = theta.sin_cos();
    DMatrix::from_row_slice(2, 2, &[c, -s, s, c])
}

fn reflection(axis_angle: f64) -> DMatrix<f64> {
    let (s, c) = (2.0 * axis_angle).sin_cos();
    DMatrix::from_row_slice(2, 2, &[c, s, s, -c])
}

impl PointGroup {
    /// Six elements: rotations by {0, ±2π/3} and reflections across axes
    /// at {0°, 60°, 120°}. Which reflection axes realize the E irrep is a
    /// free convention; this choice is validated by the closure and
    /// character-orthogonality invariants.
    pub fn c3v() -> Self {
        let thirds = 2.0 * std::f64::consts::PI / 3.0;
        let elements = vec![
            rotation(0.0),
            rotation(thirds),
            rotation(2.0 * thirds),
            reflection(0.0),
            reflection(thirds / 2.0),
            reflection(thirds),
        ];
        let irreps = vec![
            Irrep { name: "A1", characters: vec![1.0; 6] },
            Irrep { name: "A2", characters: vec![1.0, 1.0, 1.0, -1.0, -1.0, -1.0] },
            Irrep { name: "E", characters: vec![2.0, -1.0, -1.0, 0.0, 0.0, 0.0] },
        ];
        PointGroup { name: GroupName::C3v, elements, irreps }
    }

    /// Inversion acts trivially on the gerade doublet, so all twelve
    /// elements act through the six C3v matrices (each appearing twice)
    /// and only the gerade irreps are tracked.
    pub fn d3d() -> Self {
        let c3v = PointGroup::c3v();
        let mut elements = c3v.elements.clone();
        elements.extend(c3v.elements.iter().cloned());
        let dup = |v: &[f64]| {
            let mut out = v.to_vec();
            out.extend_from_slice(v);
            out
        };
        let irreps = vec![
            Irrep { name: "A1g", characters: dup(&c3v.irreps[0].characters) },
            Irrep { name: "A2g", characters: dup(&c3v.irreps[1].characters) },
            Irrep { name: "Eg", characters: dup(&c3v.irreps[2].characters) },
        ];
        PointGroup { name: GroupName::D3d, elements, irreps }
    }

    pub fn trivial() -> Self {
        PointGroup {
            name: GroupName::Trivial,
            elements: vec![DMatrix::identity(1, 1)],
            irreps: vec![Irrep { name: "A", characters: vec![1.0] }],
        }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[DMatrix<f64>] {
        &self.elements
    }

    pub fn irreps(&self) -> &[Irrep] {
        &self.irreps
    }

    /// Character of the carried (doublet) rep itself, per element.
    pub fn rep_character(&self, g: usize) -> f64 {
        self.elements[g].trace()
    }

    /// Closure under multiplication and presence of the identity, checked
    /// against the element list itself.
    pub fn is_closed(&self, tol: f64) -> bool {
        let dim = self.elements[0].nrows();
        let id = DMatrix::<f64>::identity(dim, dim);
        let has_id = self.elements.iter().any(|e| (e - &id).abs().max() < tol);
        let closed = self.elements.iter().all(|a| {
            self.elements.iter().all(|b| {
                let prod = a * b;
                self.elements.iter().any(|e| (&prod - e).abs().max() < tol)
            })
        });
        has_id && closed
    }

    /// (1/|G|) Σ_g χ_a(g) χ_b(g) − δ_ab, maximized over irrep pairs.
    pub fn character_orthogonality_residual(&self) -> f64 {
        let n = self.order() as f64;
        let mut worst: f64 = 0.0;
        for (a, ia) in self.irreps.iter().enumerate() {
            for (b, ib) in self.irreps.iter().enumerate() {
                let dot: f64 = ia
                    .characters
                    .iter()
                    .zip(&ib.characters)
                    .map(|(x, y)| x * y)
                    .sum::<f64>()
                    / n;
                let expect = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((dot - expect).abs());
            }
        }
        worst
    }
}

/// Multiplicities n_λ = (1/|G|) Σ_g χ_rep(g)² χ_λ(g) of each irrep in the
/// tensor square of the carried rep.
pub fn tensor_square_decomposition(
    group: &PointGroup,
) -> Result<Vec<(&'static str, usize)>, SymmetryError> {
    let n = group.order() as f64;
    let mut out = Vec::new();
    for irrep in group.irreps() {
        let raw: f64 = (0..group.order())
            .map(|g| group.rep_character(g).powi(2) * irrep.characters[g])
            .sum::<f64>()
            / n;
        let rounded = raw.round();
        if (raw - rounded).abs() > 1e-9 {
            return Err(SymmetryError::NonIntegerMultiplicity {
                irrep: irrep.name,
                value: raw,
            });
        }
        out.push((irrep.name, rounded as usize));
    }
    Ok(out)
}

/// Group average (1/|G|) Σ_g R(g)ᵀ C R(g) of a coupling matrix over the
/// doublet rep. For the E-bearing groups Schur's lemma collapses this to
/// (tr C / 2)·I; the trivial group returns C unchanged.
pub fn schur_average_coupling(group: &PointGroup, c: &Matrix2<f64>) -> Matrix2<f64> {
    if group.elements()[0].nrows() != 2 {
        return *c;
    }
    let mut acc = Matrix2::zeros();
    for e in group.elements() {
        let r = Matrix2::from_iterator(e.iter().copied());
        acc += r.transpose() * c * r;
    }
    acc / group.order() as f64
}

/// Squared Hilbert–Schmidt overlap fractions of a Hermitian qutrit
/// operator with the four unit-norm sector representatives
/// (S_z² → A1, S_z → A2, S_x → E_x, S_y → E_y).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SectorWeights {
    pub w_a1: f64,
    pub w_a2: f64,
    pub w_ex: f64,
    pub w_ey: f64,
    /// Fraction of ‖V‖² captured by the representative span; the four
    /// weights sum to this value. Zero flags an operator with no
    /// component in the span (or the zero operator).
    pub span_fraction: f64,
}

impl SectorWeights {
    pub fn as_array(&self) -> [f64; 4] {
        [self.w_a1, self.w_a2, self.w_ex, self.w_ey]
    }
}

/// The four sector representatives at unit Hilbert–Schmidt norm. They are
/// mutually orthogonal, which the sector-weight tests pin down.
pub fn sector_representatives() -> [Operator; 4] {
    let (sx, sy, sz) = spin1_operators();
    let szz = &sz * &sz;
    [szz, sz, sx, sy].map(|op| {
        let n = op.fro_norm();
        op.scale_re(1.0 / n)
    })
}

pub fn hs_sector_weights(v: &Operator) -> Result<SectorWeights, SymmetryError> {
    if !v.is_hermitian(1e-10) {
        return Err(SymmetryError::NotHermitian);
    }
    let norm_sq = v.fro_norm().powi(2);
    if norm_sq < 1e-24 {
        return Ok(SectorWeights {
            w_a1: 0.0,
            w_a2: 0.0,
            w_ex: 0.0,
            w_ey: 0.0,
            span_fraction: 0.0,
        });
    }
    let reps = sector_representatives();
    let mut w = [0.0; 4];
    for (k, rep) in reps.iter().enumerate() {
        let c = rep.hs_inner(v);
        // Hermitian·Hermitian inner products are real.
        debug_assert!(c.im.abs() < 1e-10 * norm_sq.sqrt());
        w[k] = c.re.powi(2) / norm_sq;
    }
    Ok(SectorWeights {
        w_a1: w[0],
        w_a2: w[1],
        w_ex: w[2],
        w_ey: w[3],
        span_fraction: w.iter().sum(),
    })
}

/// Bilinear combinations of two doublets used by the selection-rule
/// analysis: scalar, antisymmetric, and doublet channels.
pub fn bilinears(eps: Vector2<f64>, o: Vector2<f64>) -> (f64, f64, Vector2<f64>) {
    let b_a1 = eps[0] * o[0] + eps[1] * o[1];
    let b_a2 = eps[0] * o[1] - eps[1] * o[0];
    let b_e = Vector2::new(eps[0] * o[0] - eps[1] * o[1], eps[0] * o[1] + eps[1] * o[0]);
    (b_a1, b_a2, b_e)
}
