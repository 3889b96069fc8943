use ppnrd_gbs::cost::{cost_heatmap, g_factor, simulation_time, CostModel};
use ppnrd_gbs::pattern::ClickPattern;
use ppnrd_gbs::samplers::SampleSet;
use proptest::prelude::*;

fn set(samples: Vec<Vec<u8>>, fanout: usize) -> SampleSet {
    let m = samples[0].len();
    SampleSet::new(
        "",
        "test",
        0,
        m,
        fanout,
        samples.into_iter().map(ClickPattern).collect(),
    )
    .unwrap()
}

#[test]
fn threshold_samples_fill_only_the_g_equals_two_column() {
    let samples = set(
        vec![vec![1, 0, 1, 1], vec![0, 1, 0, 0], vec![1, 1, 1, 1], vec![0, 0, 0, 0]],
        1,
    );
    let heat = cost_heatmap(&samples, &CostModel::new(1.0, 4).unwrap(), 0.25).unwrap();
    assert!(heat.cells.iter().all(|c| c.g_bin_low == 2.0));
    assert_eq!(heat.cells.iter().map(|c| c.count).sum::<usize>(), 3);
    assert_eq!(heat.skipped_empty, 1);
    assert_eq!(heat.hardest_index, 2);
}

#[test]
fn hardest_sample_has_the_largest_time() {
    let samples = set(vec![vec![2, 0, 1], vec![1, 1, 1], vec![2, 2, 0], vec![0, 0, 1]], 2);
    let model = CostModel::new(1e-9, 3).unwrap();
    let heat = cost_heatmap(&samples, &model, 0.5).unwrap();
    let times: Vec<f64> = samples
        .samples()
        .iter()
        .map(|p| simulation_time(p, &model).unwrap().ln_seconds)
        .collect();
    let max = times.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    assert_eq!(times[heat.hardest_index], max);
    let mean = times.iter().map(|t| t.exp()).sum::<f64>() / times.len() as f64;
    assert!((heat.mean_seconds - mean).abs() <= 1e-12 * mean);
}

#[test]
fn contours_are_equal_time_lines() {
    let samples = set(
        vec![vec![1, 0, 1, 0, 1, 1], vec![3, 2, 1, 4, 0, 2], vec![1, 1, 0, 0, 0, 0]],
        4,
    );
    let model = CostModel::new(1e-3, 6).unwrap();
    let heat = cost_heatmap(&samples, &model, 0.25).unwrap();
    assert!(!heat.contours.is_empty());
    for c in &heat.contours {
        let n = c.n as f64;
        let log10_t = (0.5 * model.c_machine * 6.0 * n.powi(3)).log10() + 0.5 * n * c.g.log10();
        assert!((log10_t - c.log10_t).abs() < 1e-9, "{c:?}");
    }
}

#[test]
fn invalid_inputs_are_rejected() {
    assert!(CostModel::new(0.0, 4).is_err());
    assert!(CostModel::new(f64::NAN, 4).is_err());
    assert!(CostModel::new(1.0, 0).is_err());
    let empty = set(vec![vec![0, 0]], 1);
    assert!(cost_heatmap(&empty, &CostModel::new(1.0, 2).unwrap(), 0.25).is_err());
    let ok = set(vec![vec![1, 0]], 1);
    assert!(cost_heatmap(&ok, &CostModel::new(1.0, 2).unwrap(), 0.0).is_err());
    assert!(g_factor(&ClickPattern(vec![0, 0, 0])).is_err());
}

proptest! {
    #[test]
    fn g_is_permutation_invariant(mut counts in prop::collection::vec(0u8..=8, 1..40), seed in any::<u64>()) {
        prop_assume!(counts.iter().any(|&c| c > 0));
        let a = g_factor(&ClickPattern(counts.clone())).unwrap();
        let k = (seed % counts.len() as u64) as usize;
        counts.rotate_left(k);
        counts.reverse();
        let b = g_factor(&ClickPattern(counts)).unwrap();
        prop_assert_eq!(a.n, b.n);
        prop_assert!((a.ln_g - b.ln_g).abs() <= 1e-12 * a.ln_g.abs().max(1.0));
    }

    #[test]
    fn g_lies_between_two_and_max_count_plus_one(counts in prop::collection::vec(0u8..=8, 1..40)) {
        let max = *counts.iter().max().unwrap();
        prop_assume!(max > 0);
        let g = g_factor(&ClickPattern(counts)).unwrap().g;
        prop_assert!(g >= 2.0 - 1e-12 && g <= max as f64 + 1.0 + 1e-12);
    }

    #[test]
    fn time_is_log_linear_in_c(counts in prop::collection::vec(0u8..=8, 1..30), lc in -40.0f64..40.0) {
        prop_assume!(counts.iter().any(|&c| c > 0));
        let p = ClickPattern(counts.clone());
        let m = counts.len();
        let base = simulation_time(&p, &CostModel::new(1.0, m).unwrap()).unwrap().ln_seconds;
        let scaled = simulation_time(&p, &CostModel::new(lc.exp(), m).unwrap()).unwrap().ln_seconds;
        prop_assert!((scaled - base - lc).abs() < 1e-9);
    }
}

proptest! {
    #[test]
    fn raising_a_count_never_lowers_the_time(counts in prop::collection::vec(0u8..=4, 1..30), k in any::<usize>()) {
        let i = k % counts.len();
        prop_assume!(counts[i] > 0);
        let model = CostModel::new(1.0, counts.len()).unwrap();
        let before = simulation_time(&ClickPattern(counts.clone()), &model).unwrap().ln_seconds;
        let mut doubled = counts;
        doubled[i] *= 2;
        let after = simulation_time(&ClickPattern(doubled), &model).unwrap().ln_seconds;
        prop_assert!(after >= before);
    }
}
