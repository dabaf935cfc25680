use quantum_core::{embed_logical, ketbra, qubit_paulis, Operator, QutritBasis};

/// Which relaxation structure applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CollapsePlatform {
    /// Ground-state spin-1 defect: computational levels decay into the
    /// auxiliary |0⟩ at 1/T1, plus rotating-frame depolarization of the
    /// computational qubit at total rate 1/T1ρ.
    NvGround,
    /// Orbital doublet at cryogenic temperature: the auxiliary level decays
    /// into the two computational levels, each branch at 1/(2·T1_orb).
    /// The second time argument is ignored.
    SivOrbital,
}

/// Jump operators with rates in µs⁻¹.  Dephasing from the surface-spin
/// field is not in here; it enters through the Hamiltonian.
#[derive(Clone, Debug)]
pub struct CollapseSet {
    pub ops: Vec<(Operator, f64)>,
}

impl CollapseSet {
    pub fn empty() -> Self {
        CollapseSet { ops: Vec::new() }
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(Operator, f64)> {
        self.ops.iter()
    }
}

/// Build the collapse set for the given platform.  Times in µs; pass
/// `f64::INFINITY` to disable a channel.  The depolarization budget 1/T1ρ
/// is split evenly over σ_x, σ_y, σ_z on the computational subspace.
pub fn lindblad_collapse_set(
    t1_us: f64,
    t1rho_us: f64,
    platform: CollapsePlatform,
) -> CollapseSet {
    assert!(t1_us > 0.0, "T1 must be positive (or infinite)");
    assert!(t1rho_us > 0.0, "T1ρ must be positive (or infinite)");
    let b = QutritBasis::STANDARD;
    let mut ops = Vec::new();

    match platform {
        CollapsePlatform::NvGround => {
            if t1_us.is_finite() {
                let rate = 1.0 / t1_us;
                ops.push((Operator::new(ketbra(3, b.aux, b.plus)), rate));
                ops.push((Operator::new(ketbra(3, b.aux, b.minus)), rate));
            }
            if t1rho_us.is_finite() {
                let rate = 1.0 / (3.0 * t1rho_us);
                let (sx, sy, sz) = qubit_paulis();
                for p in [sx, sy, sz] {
                    ops.push((embed_logical(&p, b), rate));
                }
            }
        }
        CollapsePlatform::SivOrbital => {
            if t1_us.is_finite() {
                let rate = 1.0 / (2.0 * t1_us);
                ops.push((Operator::new(ketbra(3, b.plus, b.aux)), rate));
                ops.push((Operator::new(ketbra(3, b.minus, b.aux)), rate));
            }
        }
    }

    CollapseSet { ops }
}
