//! Behaviour of the full decision procedure under relabelling and on
//! negative instances.

use crn_realize_core::ratmat::nullity;
use crn_realize_core::wr_def_one::Rejection;
use crn_realize_core::{
    generate, net_reaction_data, realize_def_one, verify_outcome, Flag, GenSpec, NetReactionData,
    TargetType,
};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn instance(target: TargetType, sizes: Vec<usize>, seed: u64) -> NetReactionData {
    net_reaction_data(&generate(&GenSpec::new(target, sizes, seed)).unwrap())
}

fn permuted(d: &NetReactionData, perm: &[usize]) -> NetReactionData {
    d.restrict(perm)
}

#[test]
fn flag_is_invariant_under_column_permutation() {
    let cases = [
        (TargetType::SingleClass, vec![4]),
        (TargetType::TypeI, vec![2, 3]),
        (TargetType::TypeII, vec![2, 3]),
        (TargetType::TypeII, vec![2, 2, 2]),
    ];
    for (target, sizes) in cases {
        for seed in 0..15 {
            let d = instance(target, sizes.clone(), seed);
            let base = realize_def_one(&d).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut perm: Vec<usize> = (0..d.len()).collect();
            perm.shuffle(&mut rng);
            let p = permuted(&d, &perm);
            let out = realize_def_one(&p).unwrap();
            assert_eq!(out.flag, base.flag, "{target:?} seed {seed}");
            assert!(verify_outcome(&p, &out));
        }
    }
}

#[test]
fn repeated_runs_are_identical() {
    for seed in 0..10 {
        let d = instance(TargetType::TypeII, vec![2, 2, 3], seed);
        assert_eq!(realize_def_one(&d).unwrap(), realize_def_one(&d).unwrap());
    }
}

#[test]
fn single_class_deficiency_zero_is_rejected() {
    for seed in 0..30 {
        let d = instance(TargetType::DefZero, vec![2 + (seed % 3) as usize], seed);
        let out = realize_def_one(&d).unwrap();
        assert_eq!(nullity(d.net_vectors()), 1);
        assert_eq!(out.flag, Flag::None);
        assert_eq!(
            out.diagnostics.rejection,
            Some(Rejection::TooFewRays { r: 1 })
        );
    }
}

#[test]
fn accepted_outcomes_always_verify() {
    let targets = [
        TargetType::DefZero,
        TargetType::DefTwoPlus,
        TargetType::TypeI,
    ];
    for target in targets {
        for seed in 0..20 {
            let sizes = match target {
                TargetType::DefTwoPlus => vec![3, 3],
                _ => vec![2, 3],
            };
            let d = instance(target, sizes, seed);
            let out = realize_def_one(&d).unwrap();
            assert_eq!(out.flag == Flag::None, out.realization.is_none());
            assert_eq!(
                verify_outcome(&d, &out),
                out.flag != Flag::None,
                "{target:?} seed {seed}"
            );
        }
    }
}

#[test]
fn zero_net_vectors_alone_yield_no_realization() {
    let d = NetReactionData::new(
        crn_realize_core::RatMatrix::from_i64(&[&[0, 1]]),
        crn_realize_core::RatMatrix::from_i64(&[&[0, 0]]),
    )
    .unwrap();
    assert_eq!(realize_def_one(&d).unwrap().flag, Flag::None);
}
