use nalgebra::DMatrix;
use proptest::prelude::*;
use quantum_core::{c, project_computational, uhlmann_fidelity, C64, DensityMatrix, QutritBasis};

/// Random valid density matrix via ρ = G·G†/tr(G·G†).
fn arb_density(dim: usize) -> impl Strategy<Value = DensityMatrix> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), dim * dim).prop_map(move |raw| {
        let g = DMatrix::<C64>::from_iterator(dim, dim, raw.into_iter().map(|(re, im)| c(re, im)));
        let m = &g * g.adjoint();
        let tr = m.trace().re.max(1e-12);
        DensityMatrix::new(m.map(|z| z / tr)).expect("construction yields a valid state")
    })
}

proptest! {
    #[test]
    fn fidelity_is_symmetric(a in arb_density(3), b in arb_density(3)) {
        let fab = uhlmann_fidelity(&a, &b).unwrap();
        let fba = uhlmann_fidelity(&b, &a).unwrap();
        prop_assert!((fab - fba).abs() < 1e-10);
        prop_assert!((0.0..=1.0).contains(&fab));
    }

    #[test]
    fn projection_preserves_positivity(rho in arb_density(3)) {
        let basis = QutritBasis::STANDARD;
        if rho.population(basis.aux) < 1.0 - 1e-6 {
            // Constructor revalidates trace/Hermiticity/positivity.
            let (rho2, leak) = project_computational(&rho, basis).unwrap();
            prop_assert!(leak >= 0.0 && leak < 1.0);
            prop_assert_eq!(rho2.dim(), 2);
        }
    }

    #[test]
    fn fidelity_with_self_is_one(rho in arb_density(2)) {
        let f = uhlmann_fidelity(&rho, &rho).unwrap();
        prop_assert!((f - 1.0).abs() < 1e-8);
    }
}
