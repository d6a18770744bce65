use fdsched_core::gibbs::{sigmoid_prob, theta_update, Constraints, SATURATION};
use fdsched_core::harness::{derive_seed, parse_config};
use fdsched_core::oracles::{exhaustive_search, SearchSpaceSpec, DEFAULT_SPACE_CAP};
use fdsched_core::{
    draw_channels, evaluate_selection, GibbsHyper, Layout, Problem, SelectionMask, SystemConfig,
    ThetaVector,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mask_value_round_trip(value in any::<u64>(), len in 1usize..=64) {
        let value = if len == 64 { value } else { value & ((1u64 << len) - 1) };
        prop_assert_eq!(SelectionMask::from_value(value, len).value(), value);
    }

    #[test]
    fn theta_stays_within_saturation(
        theta in prop::collection::vec(-200.0f64..200.0, 1..12),
        f in -1e3f64..1e3,
        beta in 0.05f64..1.0,
        seed in any::<u64>(),
    ) {
        let hyper = GibbsHyper { beta, alpha: 10.0, ..GibbsHyper::default() };
        let theta = ThetaVector(theta);
        let p = sigmoid_prob(&theta, beta);
        let x: Vec<bool> = (0..p.len()).map(|i| (seed >> (i % 64)) & 1 == 1).collect();
        let next = theta_update(&theta, &x, f, &p, &hyper);
        for t in &next.0 {
            prop_assert!((beta * t).abs() <= SATURATION + 1e-9);
        }
    }

    #[test]
    fn exhaustive_dominates_every_feasible_mask(seed in 0u64..1000, value in 0u64..(1 << 10), k_min in 1usize..=2) {
        let cfg = SystemConfig::new(5, 3, 2).with_k_min(k_min, 1).with_powers(1e-3, 1e-3);
        let ch = draw_channels(&cfg, &mut ChaCha8Rng::seed_from_u64(seed));
        let problem = Problem::Joint;
        let best = exhaustive_search(problem, &ch, &cfg, DEFAULT_SPACE_CAP).unwrap();
        let mask = SelectionMask::from_value(value, SearchSpaceSpec::new(problem, &cfg).bits());
        if Constraints::new(problem, &cfg).is_feasible(&mask) {
            if let Ok(se) = evaluate_selection(&mask, &Layout::new(problem, &cfg), &ch, &cfg) {
                prop_assert!(se >= 0.0);
                prop_assert!(se <= best.se);
            }
        }
    }

    #[test]
    fn seed_derivation_is_injective_on_small_grids(master in any::<u64>(), a in 0u64..64, b in 0u64..64) {
        prop_assume!(a != b);
        prop_assert_ne!(derive_seed(master, &[a]), derive_seed(master, &[b]));
    }

    #[test]
    fn any_valid_grid_loads(snr in prop::collection::vec(-10.0f64..50.0, 1..4), k in 1usize..=3, r in 1usize..100) {
        let list = snr.iter().map(|s| format!("{s:?}")).collect::<Vec<_>>().join(", ");
        let sweep = parse_config(&format!("[sweep]\nsnr_db = [{list}]\nk_min = [{k}]\nrealizations = {r}\n")).unwrap();
        prop_assert_eq!(sweep.points().len(), snr.len());
        for point in sweep.points() {
            let cfg = sweep.system_at(&point);
            prop_assert!(cfg.p_u > 0.0 && cfg.p_d > 0.0);
        }
    }
}
