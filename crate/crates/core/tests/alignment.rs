mod common;

use rand::Rng;
use rsm_core::alignment::{
    average_alignment, displacement, is_good, local_alignment, standardize, total_alignment_ind, total_alignment_std,
    AlignmentParams, Partition,
};
use rsm_core::{BitString, Error};

fn bs(s: &str) -> BitString {
    s.parse().unwrap()
}

#[test]
fn displacement_examples() {
    assert_eq!(displacement(&bs("")), 0);
    assert_eq!(displacement(&bs("1111")), 4);
    assert_eq!(displacement(&bs("1010")), 0);
    assert_eq!(displacement(&bs("000")), 3);
}

#[test]
fn local_alignment_examples() {
    assert_eq!(local_alignment(&bs("111"), &bs("000"), 0.4), 0.0);
    assert!((local_alignment(&bs("111"), &bs("11"), 0.4) - 0.8).abs() < 1e-15);
    assert_eq!(local_alignment(&bs(""), &bs(""), 0.4), 0.0);
    assert_eq!(local_alignment(&bs("0011"), &bs("111111"), 0.4), 1.0);
    assert_eq!(local_alignment(&bs("0001"), &bs("10"), 0.4), 0.0);
}

#[test]
fn params_follow_the_window_definitions() {
    let p = AlignmentParams::new(0.5, 64, 6400).unwrap();
    assert_eq!(p.big_b, 100);
    assert!((p.epsilon - 1.0 / 24.0).abs() < 1e-15);
    assert!((p.delta - 64f64.powf(-0.5 + 1.0 / 24.0)).abs() < 1e-15);
    assert!((p.gamma - 64f64.powf(-1.0 / 24.0)).abs() < 1e-15);
    assert_eq!(p.induced_budget(), 84);
    assert_eq!(p.standardized_budget(), 252);
    assert!(p.in_window(32) && p.in_window(28) && p.in_window(36));
    assert!(!p.in_window(27) && !p.in_window(37));
    assert!(AlignmentParams::new(0.5, 0, 10).is_err());
    assert!(AlignmentParams::new(1.5, 4, 10).is_err());
    assert!(AlignmentParams::new(0.5, 11, 10).is_err());
}

#[test]
fn standard_lengths_track_prefix_sums() {
    for (alpha, b) in [(0.3, 7usize), (0.5, 5), (0.45, 24), (2.0 / 3.0, 9)] {
        let p = AlignmentParams::new(alpha, b, b * 40).unwrap();
        let mut prefix = 0usize;
        for k in 0..p.big_b {
            let len = p.standard_length(k);
            let ab = alpha * b as f64;
            assert!(len == ab.floor() as usize || len == ab.ceil() as usize);
            prefix += len;
            assert!((prefix as f64 - ab * (k + 1) as f64).abs() <= 1.0);
        }
    }
}

#[test]
fn one_block_alignment() {
    let p = AlignmentParams::new(0.5, 4, 4).unwrap();
    let (x, y) = (bs("1101"), bs("11"));
    let expected = local_alignment(&x, &y, p.delta);
    assert!((total_alignment_std(&x, &y, &p).unwrap().unwrap() - expected).abs() < 1e-15);
    assert!((total_alignment_ind(&x, &y, &p).unwrap().unwrap() - expected).abs() < 1e-15);
    // A y longer than one block cannot be covered.
    assert_eq!(total_alignment_std(&x, &bs("11111"), &p).unwrap(), None);
}

#[test]
fn all_ones_micro_case() {
    let p = AlignmentParams::new(0.5, 4, 8).unwrap();
    let x = bs("11111111");
    let y = bs("111");
    let expected = (1.0 + p.delta) / 2.0;
    assert!((total_alignment_std(&x, &y, &p).unwrap().unwrap() - expected).abs() < 1e-15);
}

fn std_admissible(p: &AlignmentParams) -> impl Fn(&[usize]) -> bool + '_ {
    move |lens: &[usize]| {
        lens.iter().enumerate().filter(|&(i, &l)| l != p.standard_length(i)).count() <= p.standardized_budget()
    }
}

fn ind_admissible(p: &AlignmentParams) -> impl Fn(&[usize]) -> bool + '_ {
    move |lens: &[usize]| lens.iter().filter(|&&l| !p.in_window(l)).count() <= p.induced_budget()
}

#[test]
fn dps_match_exhaustive_enumeration() {
    let mut rng = common::rng(11);
    let mut cases = 0;
    for big_b in 1..=4usize {
        for b in 1..=5usize {
            for &alpha in &[0.3, 0.5, 0.8] {
                for eps in [1.0 / 24.0, 0.3] {
                    for _ in 0..3 {
                        let p = AlignmentParams::with_epsilon(alpha, b, big_b * b, eps).unwrap();
                        let xv = common::random_bits(&mut rng, big_b * b);
                        let m = rng.random_range(0..=big_b * b);
                        let yv = common::random_bits(&mut rng, m);
                        let (x, y) = (common::bitstring(&xv), common::bitstring(&yv));
                        let brute_std = common::best_alignment(&xv, &yv, b, big_b, p.delta, std_admissible(&p));
                        let brute_ind = common::best_alignment(&xv, &yv, b, big_b, p.delta, ind_admissible(&p));
                        let dp_std = total_alignment_std(&x, &y, &p).unwrap();
                        let dp_ind = total_alignment_ind(&x, &y, &p).unwrap();
                        match (brute_std, dp_std) {
                            (Some(a), Some(d)) => assert!((a - d).abs() < 1e-12),
                            (a, d) => assert_eq!(a, d),
                        }
                        match (brute_ind, dp_ind) {
                            (Some(a), Some(d)) => assert!((a - d).abs() < 1e-12),
                            (a, d) => assert_eq!(a, d),
                        }
                        cases += 1;
                    }
                }
            }
        }
    }
    assert!(cases >= 300);
}

#[test]
fn induced_value_dominates_members() {
    let mut rng = common::rng(12);
    let p = AlignmentParams::new(0.5, 16, 160).unwrap();
    let x = common::bitstring(&common::random_bits(&mut rng, 160));
    for _ in 0..50 {
        let lens: Vec<usize> = (0..10).map(|_| rng.random_range(6..=10)).collect();
        let y = common::bitstring(&common::random_bits(&mut rng, lens.iter().sum()));
        let part = Partition::new(lens);
        assert!(part.is_induced(&y, &p));
        let direct = average_alignment(&x, &y, &part, &p).unwrap();
        assert!(total_alignment_ind(&x, &y, &p).unwrap().unwrap() >= direct - 1e-15);
    }
}

#[test]
fn standardize_fixed_point() {
    let p = AlignmentParams::new(0.5, 8, 32).unwrap();
    let y = bs("0110100111010010");
    let part = Partition::new(vec![4, 4, 4, 4]);
    assert_eq!(standardize(&y, &part, &p).unwrap(), part);
}

#[test]
fn standardize_hand_traced() {
    // b = 8, αb = 4, window {3,4,5}, runs of two ordinary blocks.
    let p = AlignmentParams::new(0.5, 8, 32).unwrap();
    assert_eq!(p.run_length(), 2);
    let y = bs(&"01".repeat(7));
    // Block 2 is exceptional: block 1 absorbs the slack, block 2 is copied.
    // Blocks 3 and 4 form a final run: block 3 is set to αb, block 4 absorbs.
    let out = standardize(&y, &Partition::new(vec![5, 0, 5, 4]), &p).unwrap();
    assert_eq!(out.lengths(), &[5, 0, 4, 5]);
    // Exceptional first block: copied verbatim with an empty standardized prefix.
    let y = bs(&"1".repeat(16));
    let out = standardize(&y, &Partition::new(vec![8, 3, 5, 0]), &p).unwrap();
    assert_eq!(out.lengths(), &[8, 4, 4, 0]);
    // Two ordinary blocks fill a run before the exceptional block is reached.
    let y = bs(&"1".repeat(13));
    let out = standardize(&y, &Partition::new(vec![3, 5, 1, 4]), &p).unwrap();
    assert_eq!(out.lengths(), &[4, 4, 1, 4]);
}

#[test]
fn standardize_rejects_non_induced_input() {
    let p = AlignmentParams::new(0.5, 8, 32).unwrap();
    let y = bs(&"1".repeat(16));
    assert!(matches!(standardize(&y, &Partition::new(vec![0, 0, 8, 8]), &p), Err(Error::InvalidPartition(_))));
    assert!(standardize(&y, &Partition::new(vec![4, 4, 4]), &p).is_err());
    assert!(standardize(&y, &Partition::new(vec![4, 4, 4, 5]), &p).is_err());
}

fn random_induced(rng: &mut impl Rng, p: &AlignmentParams) -> Vec<usize> {
    let window: Vec<usize> = (0..=p.b).filter(|&l| p.in_window(l)).collect();
    let exceptional = rng.random_range(0..=p.induced_budget());
    let mut lens: Vec<usize> = (0..p.big_b).map(|_| window[rng.random_range(0..window.len())]).collect();
    for _ in 0..exceptional {
        let i = rng.random_range(0..p.big_b);
        lens[i] = rng.random_range(0..=p.b);
    }
    lens
}

#[test]
fn standardize_outputs_are_standardized() {
    let mut rng = common::rng(13);
    let p = AlignmentParams::new(0.5, 24, 480).unwrap();
    for _ in 0..1000 {
        let lens = random_induced(&mut rng, &p);
        let y = common::bitstring(&common::random_bits(&mut rng, lens.iter().sum()));
        let part = Partition::new(lens);
        let out = standardize(&y, &part, &p).unwrap();
        assert!(out.is_standardized(&y, &p));
        assert_eq!(out.lengths().iter().sum::<usize>(), y.len());
        for i in part.exceptional_blocks(&p) {
            assert_eq!(out.lengths()[i], part.lengths()[i]);
        }
    }
}

#[test]
fn standardize_with_longer_runs() {
    let mut rng = common::rng(14);
    let p = AlignmentParams::with_epsilon(0.5, 64, 64 * 30, 0.2).unwrap();
    assert_eq!(p.run_length(), 3);
    for _ in 0..300 {
        let lens = random_induced(&mut rng, &p);
        let y = common::bitstring(&common::random_bits(&mut rng, lens.iter().sum()));
        let out = standardize(&y, &Partition::new(lens.clone()), &p).unwrap();
        assert_eq!(out.lengths().iter().sum::<usize>(), lens.iter().sum::<usize>());
        let changed = (0..p.big_b).filter(|&i| out.lengths()[i] != p.standard_length(i)).count();
        let exceptional = lens.iter().filter(|&&l| !p.in_window(l)).count();
        let runs = p.big_b.div_ceil(p.run_length());
        assert!(changed <= 2 * exceptional + runs + 1);
    }
}

#[test]
fn good_set_requires_matching_length() {
    let p = AlignmentParams::new(0.5, 8, 64).unwrap();
    let x = bs(&"10".repeat(32));
    assert!(matches!(is_good(&x, &bs("1"), &p), Err(Error::DimensionMismatch(_))));
    let y = bs(&"1".repeat(32));
    assert!(is_good(&x, &y, &p).is_ok());
}
