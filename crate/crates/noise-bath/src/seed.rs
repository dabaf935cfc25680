use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// SplitMix64 output function.  Used to derive well-separated child seeds
/// from a master seed plus an index path; its avalanche behavior keeps
/// neighboring indices uncorrelated.
pub fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deterministic child seed for a path like (sweep, point, trajectory).
/// Order-sensitive: each path element is mixed before being folded in.
pub fn child_seed(master: u64, path: &[u64]) -> u64 {
    let mut s = splitmix64(master);
    for &p in path {
        s = splitmix64(s.wrapping_add(splitmix64(p)));
    }
    s
}

/// Stream cipher RNG seeded from [`child_seed`].
pub fn child_rng(master: u64, path: &[u64]) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(child_seed(master, path))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::RngCore;

    #[test]
    fn pinned_values_guard_the_derivation() {
        // Frozen outputs: any change here silently reshuffles every seeded
        // result in the workspace.
        assert_eq!(splitmix64(0), 0xE220_A839_7B1D_CDAF);
        assert_eq!(splitmix64(1), 0x910A_2DEC_8902_5CC1);
        assert_eq!(child_seed(0, &[]), 0xE220_A839_7B1D_CDAF);
    }

    #[test]
    fn paths_are_order_sensitive_and_distinct() {
        let m = 7;
        assert_eq!(child_seed(m, &[1, 2]), child_seed(m, &[1, 2]));
        assert_ne!(child_seed(m, &[1, 2]), child_seed(m, &[2, 1]));
        assert_ne!(child_seed(m, &[1]), child_seed(m, &[1, 0]));
        assert_ne!(child_seed(m, &[0]), child_seed(m + 1, &[0]));

        let mut seen = std::collections::HashSet::new();
        for traj in 0..10_000u64 {
            assert!(seen.insert(child_seed(m, &[3, 1, traj])));
        }
    }

    #[test]
    fn child_rng_streams_differ() {
        let mut a = child_rng(1, &[0]);
        let mut b = child_rng(1, &[1]);
        let xa: Vec<u64> = (0..4).map(|_| a.next_u64()).collect();
        let xb: Vec<u64> = (0..4).map(|_| b.next_u64()).collect();
        assert_ne!(xa, xb);
        let mut a2 = child_rng(1, &[0]);
        let xa2: Vec<u64> = (0..4).map(|_| a2.next_u64()).collect();
        assert_eq!(xa, xa2);
    }
}
