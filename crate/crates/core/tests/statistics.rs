use mcvuln::analytic::disjoint_probability;
use mcvuln::montecarlo::{estimate_disjoint_fixed, estimate_pr_a, PrAOptions, Sampling};
use mcvuln::{MemoryModel, ModelParams, Overlap, RandomStream, SegmentLengths};

#[test]
fn two_two_shift_only_is_one_sixth() {
    let lengths = SegmentLengths::uniform(2, 2).unwrap();
    let e = estimate_disjoint_fixed(&lengths, &Sampling::new(1_000_000, 3), Overlap::Closed).unwrap();
    assert!(e.within(1.0 / 6.0, 3.0, 0.0), "{}", e.mean);
    assert!(e.stderr < 3.8e-4);
}

#[test]
fn shift_only_matches_exact_for_random_lengths() {
    let mut rng = RandomStream::new(77);
    for case in 0..20 {
        let n = 1 + (rng.next_u64() % 4) as usize;
        let lens: Vec<usize> = (0..n).map(|_| (rng.next_u64() % 6) as usize).collect();
        let lengths = SegmentLengths::new(lens).unwrap();
        let exact = disjoint_probability(&lengths).unwrap().to_f64();
        let e = estimate_disjoint_fixed(&lengths, &Sampling::new(200_000, case), Overlap::Closed).unwrap();
        assert!(
            e.within_target_sigma(exact, 3.0),
            "({lengths}): {} vs {exact}",
            e.mean
        );
    }
}

#[test]
fn index_set_convention_is_more_permissive() {
    let lengths = SegmentLengths::uniform(2, 2).unwrap();
    let s = Sampling::new(100_000, 4);
    let closed = estimate_disjoint_fixed(&lengths, &s, Overlap::Closed).unwrap();
    let index_set = estimate_disjoint_fixed(&lengths, &s, Overlap::IndexSet).unwrap();
    assert!(index_set.hits > closed.hits);
}

#[test]
fn model_ordering_at_two_threads() {
    let params = ModelParams::default();
    let s = Sampling::new(4_000_000, 8);
    let opts = PrAOptions::default();
    let sc = estimate_pr_a(&MemoryModel::SC, 2, &params, &s, &opts).unwrap();
    let tso = estimate_pr_a(&MemoryModel::TSO, 2, &params, &s, &opts).unwrap();
    let wo = estimate_pr_a(&MemoryModel::WO, 2, &params, &s, &opts).unwrap();
    let gap = |a: &mcvuln::montecarlo::Estimate, b: &mcvuln::montecarlo::Estimate| {
        (a.mean - b.mean) / (a.stderr.powi(2) + b.stderr.powi(2)).sqrt()
    };
    assert!(gap(&sc, &tso) >= 3.0, "sc {} tso {}", sc.mean, tso.mean);
    assert!(gap(&tso, &wo) >= 3.0, "tso {} wo {}", tso.mean, wo.mean);
}

#[test]
fn more_threads_means_lower_pr_a() {
    let params = ModelParams::with_program_len(16);
    let s = Sampling::new(100_000, 9);
    let opts = PrAOptions::default();
    let two = estimate_pr_a(&MemoryModel::TSO, 2, &params, &s, &opts).unwrap();
    let three = estimate_pr_a(&MemoryModel::TSO, 3, &params, &s, &opts).unwrap();
    assert!(three.ci95.1 < two.ci95.0);
}

#[test]
fn independent_programs_run_and_stay_reproducible() {
    let params = ModelParams::with_program_len(16);
    let opts = PrAOptions {
        independent_programs: true,
        ..PrAOptions::default()
    };
    let a = estimate_pr_a(
        &MemoryModel::WO,
        2,
        &params,
        &Sampling::new(50_000, 1).with_workers(1),
        &opts,
    )
    .unwrap();
    let b = estimate_pr_a(
        &MemoryModel::WO,
        2,
        &params,
        &Sampling::new(50_000, 1).with_workers(3),
        &opts,
    )
    .unwrap();
    assert_eq!(a, b);
    assert!(a.within(7.0 / 54.0, 4.0, 2f64.powi(-14)));
}
