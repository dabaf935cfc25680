use crate::geometry::BathGeometry;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use std::fmt::Write as _;

/// What a pairwise event does to the two selected spins.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HoppingRule {
    /// Exchange the two states.  Conserves total bath polarization, which
    /// is what spatial hopping of a spin excitation does.
    Swap,
    /// Negate both states.  Sensitivity-test alternative; does not conserve
    /// polarization when the pair is aligned.
    PairFlip,
}

/// Piecewise-constant axial field seen by the defect.  `b_gauss[k]` holds on
/// `t[k] ≤ t < t[k+1]`; the last value extends to the end of the run.
#[derive(Clone, Debug)]
pub struct FieldTrace {
    /// Event times in µs, starting at 0.
    pub t: Vec<f64>,
    pub b_gauss: Vec<f64>,
    /// Seed this realization was drawn from.
    pub seed: u64,
    /// Copy of the lattice normalization scalar the samples were scaled by.
    pub norm_factor: f64,
}

impl FieldTrace {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    /// Field at an arbitrary time (clamped at both ends).
    pub fn value_at(&self, time: f64) -> f64 {
        if time <= self.t[0] {
            return self.b_gauss[0];
        }
        let idx = self.t.partition_point(|&x| x <= time);
        self.b_gauss[idx - 1]
    }

    /// Event times strictly inside (0, t_end), for integrators that must
    /// not step across a field discontinuity.
    pub fn interior_breakpoints(&self, t_end: f64) -> Vec<f64> {
        self.t
            .iter()
            .copied()
            .filter(|&x| x > 0.0 && x < t_end)
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("t_us,b_surf_gauss\n");
        for (t, b) in self.t.iter().zip(&self.b_gauss) {
            let _ = writeln!(out, "{t:.9},{b:.9e}");
        }
        out
    }
}

fn apply_hop(rule: HoppingRule, states: &mut [f64], i: usize, j: usize) {
    match rule {
        HoppingRule::Swap => states.swap(i, j),
        HoppingRule::PairFlip => {
            states[i] = -states[i];
            states[j] = -states[j];
        }
    }
}

/// Run the jump process over `[0, t_end]` µs and record the field after
/// every event.  Waiting times are exponential in the total pair rate;
/// the acting pair is drawn proportionally to its rate.  A single-spin
/// lattice has no pairs and yields a constant (DC-offset) trace.
pub fn kmc_field_trace(bath: &BathGeometry, t_end: f64, seed: u64) -> FieldTrace {
    assert!(t_end > 0.0, "trace horizon must be positive");
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut states = bath.init_states.clone();

    let mut t = vec![0.0];
    let mut b_gauss = vec![bath.field_gauss(&states)];

    if bath.total_rate > 0.0 {
        let mut now = 0.0;
        loop {
            // u ∈ [0, 1) so 1 − u never underflows the log.
            let u: f64 = rng.gen();
            now += -(1.0 - u).ln() / bath.total_rate;
            if now >= t_end {
                break;
            }
            let mut pick = rng.gen::<f64>() * bath.total_rate;
            let mut chosen = bath.pair_rates.len() - 1;
            for (k, (_, _, rate)) in bath.pair_rates.iter().enumerate() {
                pick -= rate;
                if pick <= 0.0 {
                    chosen = k;
                    break;
                }
            }
            let (i, j, _) = bath.pair_rates[chosen];
            apply_hop(bath.cfg.hopping, &mut states, i as usize, j as usize);
            t.push(now);
            b_gauss.push(bath.field_gauss(&states));
        }
    }

    FieldTrace {
        t,
        b_gauss,
        seed,
        norm_factor: bath.norm_factor,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{dipolar_coupling, hop_rate, sample_bath_geometry, SurfaceBathConfig};
    use crate::seed::child_seed;

    fn two_site_bath(separation_nm: f64, states: [f64; 2]) -> BathGeometry {
        let cfg = SurfaceBathConfig {
            n_spins: 2,
            ..SurfaceBathConfig::default()
        };
        let positions = vec![[0.0, 0.0], [separation_nm, 0.0]];
        let couplings: Vec<f64> = positions
            .iter()
            .map(|p| dipolar_coupling(*p, cfg.depth_nm))
            .collect();
        let rate = hop_rate(separation_nm, cfg.tau_c_ns, cfg.r_c_nm);
        BathGeometry {
            cfg,
            positions,
            init_states: states.to_vec(),
            couplings,
            norm_factor: 1.0,
            pair_rates: vec![(0, 1, rate)],
            total_rate: rate,
        }
    }

    #[test]
    fn swap_conserves_polarization_for_every_pair_state() {
        for a in [0.5, -0.5] {
            for b in [0.5, -0.5] {
                let mut s = [a, b];
                apply_hop(HoppingRule::Swap, &mut s, 0, 1);
                assert_eq!(s[0] + s[1], a + b);
                assert_eq!(s, [b, a]);
            }
        }
    }

    #[test]
    fn pair_flip_negates_both_states() {
        let mut s = [0.5, 0.5];
        apply_hop(HoppingRule::PairFlip, &mut s, 0, 1);
        assert_eq!(s, [-0.5, -0.5]);
        // Aligned pair: polarization not conserved, the flagged difference
        // from the swap rule.
        let mut s = [0.5, -0.5];
        apply_hop(HoppingRule::PairFlip, &mut s, 0, 1);
        assert_eq!(s, [-0.5, 0.5]);
    }

    #[test]
    fn two_spin_waiting_times_are_exponential_at_the_pair_rate() {
        // Separation r_c: Γ = e⁻¹·100 µs⁻¹.  Mean of 10⁵ waiting times
        // within 2%, and a 10-bin χ² against the exponential quantiles.
        let bath = two_site_bath(5.0, [0.5, -0.5]);
        let gamma = bath.total_rate;
        assert!((gamma - 100.0 / std::f64::consts::E).abs() < 1e-10);

        let horizon = 1.1e5 / gamma;
        let trace = kmc_field_trace(&bath, horizon, 2024);
        let n = trace.len() - 1;
        assert!(n >= 100_000, "only {n} events");

        let waits: Vec<f64> = (0..100_000)
            .map(|k| trace.t[k + 1] - trace.t[k])
            .collect();
        let mean: f64 = waits.iter().sum::<f64>() / waits.len() as f64;
        assert!(
            (mean * gamma - 1.0).abs() < 0.02,
            "mean·Γ = {}",
            mean * gamma
        );

        let mut counts = [0usize; 10];
        for w in &waits {
            // Exponential CDF value falls uniformly over the 10 bins.
            let cdf = 1.0 - (-gamma * w).exp();
            counts[((cdf * 10.0) as usize).min(9)] += 1;
        }
        let expect = waits.len() as f64 / 10.0;
        let chi2: f64 = counts
            .iter()
            .map(|&c| (c as f64 - expect).powi(2) / expect)
            .sum();
        // 99.9th percentile of χ²(9 dof).
        assert!(chi2 < 27.88, "χ² = {chi2}, counts {counts:?}");
    }

    #[test]
    fn opposite_two_spin_trace_alternates_sign() {
        let bath = two_site_bath(5.0, [0.5, -0.5]);
        let trace = kmc_field_trace(&bath, 50.0, 9);
        assert!(trace.len() > 10);
        for k in 1..trace.len() {
            assert!(
                (trace.b_gauss[k] + trace.b_gauss[k - 1]).abs() < 1e-15,
                "swap of an opposite pair must flip the field sign"
            );
        }
    }

    #[test]
    fn single_spin_lattice_is_a_dc_offset() {
        let cfg = SurfaceBathConfig {
            n_spins: 1,
            ..SurfaceBathConfig::default()
        };
        let bath = sample_bath_geometry(&cfg, 5);
        assert_eq!(bath.total_rate, 0.0);
        let trace = kmc_field_trace(&bath, 10.0, 77);
        assert_eq!(trace.len(), 1);
        assert_eq!(trace.value_at(0.0), trace.value_at(9.99));
        assert!(trace.b_gauss[0].is_finite() && trace.b_gauss[0] != 0.0);
    }

    #[test]
    fn value_at_respects_event_boundaries() {
        let trace = FieldTrace {
            t: vec![0.0, 1.0, 2.5],
            b_gauss: vec![1.0, -2.0, 3.0],
            seed: 0,
            norm_factor: 1.0,
        };
        assert_eq!(trace.value_at(-1.0), 1.0);
        assert_eq!(trace.value_at(0.0), 1.0);
        assert_eq!(trace.value_at(0.999), 1.0);
        assert_eq!(trace.value_at(1.0), -2.0);
        assert_eq!(trace.value_at(2.4999), -2.0);
        assert_eq!(trace.value_at(2.5), 3.0);
        assert_eq!(trace.value_at(100.0), 3.0);
        assert_eq!(trace.interior_breakpoints(2.0), vec![1.0]);
        assert_eq!(trace.interior_breakpoints(3.0), vec![1.0, 2.5]);
    }

    #[test]
    fn traces_are_seed_deterministic_and_share_the_lattice_scalar() {
        let bath = sample_bath_geometry(&SurfaceBathConfig::default(), 1);
        let a = kmc_field_trace(&bath, 2.0, 100);
        let b = kmc_field_trace(&bath, 2.0, 100);
        assert_eq!(a.t, b.t);
        assert_eq!(a.b_gauss, b.b_gauss);
        let c = kmc_field_trace(&bath, 2.0, 101);
        assert_ne!(a.t, c.t);
        // One static scalar per lattice, reused verbatim by every trace.
        assert_eq!(a.norm_factor, bath.norm_factor);
        assert_eq!(c.norm_factor, bath.norm_factor);
    }

    #[test]
    fn ensemble_mean_field_is_zero_within_three_standard_errors() {
        // Fresh lattice and fair-coin states per realization; probe the
        // trace at several times.
        let cfg = SurfaceBathConfig::default();
        let n = 500;
        let probes = [0.0, 0.5, 1.1, 1.8];
        let mut sums = [0.0; 4];
        let mut sq = [0.0; 4];
        for k in 0..n {
            let bath = sample_bath_geometry(&cfg, child_seed(cfg.master_seed, &[k, 0]));
            let trace = kmc_field_trace(&bath, 2.0, child_seed(cfg.master_seed, &[k, 1]));
            for (p, &tp) in probes.iter().enumerate() {
                let b = trace.value_at(tp);
                sums[p] += b;
                sq[p] += b * b;
            }
        }
        for p in 0..probes.len() {
            let mean = sums[p] / n as f64;
            let var = sq[p] / n as f64 - mean * mean;
            let se = (var / n as f64).sqrt();
            assert!(
                mean.abs() < 3.0 * se,
                "probe {} biased: mean {mean:.3e}, se {se:.3e}",
                probes[p]
            );
        }
    }

    #[test]
    fn csv_export_lists_every_event() {
        let bath = two_site_bath(5.0, [0.5, -0.5]);
        let trace = kmc_field_trace(&bath, 5.0, 13);
        let csv = trace.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("t_us,b_surf_gauss"));
        assert_eq!(lines.count(), trace.len());
    }
}
