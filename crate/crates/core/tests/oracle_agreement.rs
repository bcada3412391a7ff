use mcvuln::analytic::{disjoint_probability, window_pmf_bounds};
use mcvuln::oracle::{exact_disjoint, exact_window_pmf, MAX_ORACLE_PROGRAM_LEN};
use mcvuln::{ExactValue, MemoryModel, ModelParams, RandomStream, SegmentLengths};

#[test]
fn window_masses_sum_to_one_up_to_the_cap() {
    for model in MemoryModel::PRESETS {
        for m in 0..=MAX_ORACLE_PROGRAM_LEN {
            let pmf = exact_window_pmf(&model, &ModelParams::with_program_len(m)).unwrap();
            assert_eq!(
                ExactValue::sum(pmf.values()),
                ExactValue::one(),
                "{model} m = {m}"
            );
        }
    }
}

#[test]
fn tso_oracle_inside_envelope() {
    let m = 12;
    let slack = ExactValue::pow2_neg(m as u64 - 2);
    let pmf = exact_window_pmf(&MemoryModel::TSO, &ModelParams::with_program_len(m)).unwrap();
    for (&g, v) in &pmf {
        let b = window_pmf_bounds(g as u32);
        assert!(
            v >= &(b.lower() - &slack) && v <= &(b.upper() + &slack),
            "gamma {g}: {v}"
        );
    }
}

#[test]
fn disjoint_brackets_contain_exact_value() {
    let mut rng = RandomStream::new(2024);
    for _ in 0..10 {
        let n = 1 + (rng.next_u64() % 4) as usize;
        let lens: Vec<usize> = (0..n).map(|_| (rng.next_u64() % 6) as usize).collect();
        let lengths = SegmentLengths::new(lens).unwrap();
        let exact = disjoint_probability(&lengths).unwrap();
        let b = exact_disjoint(&lengths, 16).unwrap();
        assert!(b.lower() <= &exact && &exact <= b.upper(), "({lengths})");
    }
}

#[test]
fn three_segment_bracket() {
    let lengths = SegmentLengths::uniform(3, 2).unwrap();
    let b = exact_disjoint(&lengths, 20).unwrap();
    assert!(b.contains(&ExactValue::new(1, 224)));
}
