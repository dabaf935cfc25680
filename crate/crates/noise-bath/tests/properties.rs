use noise_bath::{
    child_seed, kmc_field_trace, sample_bath_geometry, HoppingRule, SurfaceBathConfig,
};
use proptest::prelude::*;

fn config_strategy() -> impl Strategy<Value = SurfaceBathConfig> {
    (
        2usize..24,
        0.001f64..0.02,
        1.0f64..10.0,
        5.0f64..50.0,
        5.0f64..40.0,
        prop_oneof![Just(HoppingRule::Swap), Just(HoppingRule::PairFlip)],
    )
        .prop_map(|(n_spins, density, r_c_nm, tau_c_ns, depth_nm, hopping)| {
            SurfaceBathConfig {
                n_spins,
                density,
                r_c_nm,
                tau_c_ns,
                depth_nm,
                hopping,
                master_seed: 0,
            }
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn traces_are_finite_ordered_and_piecewise_valid(
        cfg in config_strategy(),
        gseed in any::<u64>(),
        tseed in any::<u64>(),
        t_end in 0.5f64..3.0,
    ) {
        let bath = sample_bath_geometry(&cfg, gseed);
        let trace = kmc_field_trace(&bath, t_end, tseed);

        prop_assert_eq!(trace.t[0], 0.0);
        prop_assert_eq!(trace.t.len(), trace.b_gauss.len());
        for k in 1..trace.t.len() {
            prop_assert!(trace.t[k] > trace.t[k - 1]);
            prop_assert!(trace.t[k] < t_end);
        }
        for b in &trace.b_gauss {
            prop_assert!(b.is_finite());
        }
        // Clamped lookup agrees with the stored samples.
        let last = *trace.b_gauss.last().unwrap();
        prop_assert_eq!(trace.value_at(t_end + 1.0), last);
        prop_assert_eq!(trace.value_at(0.0), trace.b_gauss[0]);
    }

    #[test]
    fn normalization_scalar_is_per_lattice_not_per_trace(
        cfg in config_strategy(),
        gseed in any::<u64>(),
        s1 in any::<u64>(),
        s2 in any::<u64>(),
    ) {
        let bath = sample_bath_geometry(&cfg, gseed);
        let a = kmc_field_trace(&bath, 1.0, s1);
        let b = kmc_field_trace(&bath, 1.0, s2);
        prop_assert_eq!(a.norm_factor, bath.norm_factor);
        prop_assert_eq!(b.norm_factor, bath.norm_factor);

        // The scalar pins the fair-coin variance of this lattice to the
        // continuum half-plane value.
        let var_disc: f64 =
            0.25 * bath.couplings.iter().map(|c| c * c).sum::<f64>();
        let pinned = bath.norm_factor * bath.norm_factor * var_disc;
        let want = noise_bath::continuum_field_variance(cfg.density, cfg.depth_nm);
        prop_assert!((pinned / want - 1.0).abs() < 1e-10);
    }

    #[test]
    fn swap_dynamics_keep_the_field_in_the_reachable_set(
        gseed in any::<u64>(),
        tseed in any::<u64>(),
    ) {
        // Under swap hopping the multiset of spin states never changes, so
        // every field sample must come from a permutation of the initial
        // states.  With n small we can enumerate all permutations' fields.
        let cfg = SurfaceBathConfig {
            n_spins: 5,
            density: 0.01,
            tau_c_ns: 5.0,
            hopping: HoppingRule::Swap,
            ..SurfaceBathConfig::default()
        };
        let bath = sample_bath_geometry(&cfg, gseed);
        let trace = kmc_field_trace(&bath, 1.0, tseed);

        let mut reachable = Vec::new();
        let mut states = bath.init_states.clone();
        permute_fields(&bath, &mut states, 0, &mut reachable);
        for b in &trace.b_gauss {
            let hit = reachable.iter().any(|r| (r - b).abs() < 1e-12);
            prop_assert!(hit, "field {b} outside the swap-reachable set");
        }
    }
}

fn permute_fields(
    bath: &noise_bath::BathGeometry,
    states: &mut Vec<f64>,
    k: usize,
    out: &mut Vec<f64>,
) {
    if k == states.len() {
        out.push(bath.field_gauss(states));
        return;
    }
    for swap_with in k..states.len() {
        states.swap(k, swap_with);
        permute_fields(bath, states, k + 1, out);
        states.swap(k, swap_with);
    }
}

#[test]
fn trajectory_seeds_decorrelate_dc_offsets() {
    // Different trajectory indices must see different lattices (hence
    // different DC offsets); that inhomogeneity is the dephasing resource.
    let cfg = SurfaceBathConfig::default();
    let offsets: Vec<f64> = (0..20u64)
        .map(|traj| {
            let bath = sample_bath_geometry(&cfg, child_seed(cfg.master_seed, &[traj]));
            kmc_field_trace(&bath, 0.1, child_seed(cfg.master_seed, &[traj, 1])).b_gauss[0]
        })
        .collect();
    let distinct = offsets
        .iter()
        .enumerate()
        .all(|(i, a)| offsets.iter().skip(i + 1).all(|b| (a - b).abs() > 1e-12));
    assert!(distinct, "DC offsets collided across trajectories");
}
