//! Double description against support enumeration, plus ray invariants.

use crn_realize_core::cone::{extreme_rays_with, in_cone, AdjacencyTest};
use crn_realize_core::ratmat::{is_nonnegative, rat};
use crn_realize_core::{extreme_rays, extreme_rays_bruteforce, RatMatrix, Ray};
use proptest::prelude::*;
use std::collections::BTreeSet;

fn matrix() -> impl Strategy<Value = RatMatrix> {
    (1usize..=4, 1usize..=10).prop_flat_map(|(n, m)| {
        prop::collection::vec(-3i64..=3, n * m).prop_map(move |v| {
            let rows = v
                .chunks(m)
                .map(|r| r.iter().map(|&x| rat(x)).collect())
                .collect();
            RatMatrix::from_rows(rows, m).unwrap()
        })
    })
}

fn set(r: Vec<Ray>) -> BTreeSet<Ray> {
    r.into_iter().collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn adjacency_tests_agree_with_enumeration(w in matrix()) {
        let oracle = set(extreme_rays_bruteforce(&w).unwrap());
        prop_assert_eq!(&set(extreme_rays_with(&w, AdjacencyTest::Combinatorial)), &oracle);
        prop_assert_eq!(&set(extreme_rays_with(&w, AdjacencyTest::Algebraic)), &oracle);
    }

    #[test]
    fn rays_are_kernel_members_and_irredundant(w in matrix()) {
        let rays = extreme_rays(&w);
        for (i, r) in rays.iter().enumerate() {
            let x = r.to_rational();
            prop_assert!(is_nonnegative(&x));
            prop_assert!(w.mul_vec(&x).unwrap().iter().all(|v| *v == rat(0)));
            let others: Vec<Ray> = rays.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, r)| r.clone()).collect();
            prop_assert!(!in_cone(r, &others));
        }
        let sorted = { let mut s = rays.clone(); s.sort(); s };
        prop_assert_eq!(rays, sorted);
    }

    #[test]
    fn column_scaling_preserves_supports(w in matrix(), k in 1i64..=4) {
        // scaling every entry leaves ker(W) unchanged
        let scaled = RatMatrix::from_rows(
            (0..w.rows()).map(|i| w.row(i).iter().map(|x| x * rat(k)).collect()).collect(),
            w.cols(),
        ).unwrap();
        prop_assert_eq!(extreme_rays(&w), extreme_rays(&scaled));
    }
}
