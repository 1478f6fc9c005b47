//! Simplex against exhaustive basic-solution enumeration.

use crn_realize_core::lp::{solve, LpProblem, LpStatus};
use crn_realize_core::ratmat::{dot, rank, rat, rref};
use crn_realize_core::{extreme_rays_bruteforce, RatMatrix, RatVector, Rational};
use num_traits::{Signed, Zero};
use proptest::prelude::*;

/// Unique solution of `A_S x = b` when the columns in `cols` are independent.
fn basic_solution(a: &RatMatrix, b: &[Rational], cols: &[usize]) -> Option<RatVector> {
    let sub = a.select_columns(cols);
    if rank(&sub) != cols.len() {
        return None;
    }
    let bcol = RatMatrix::from_columns(&[b.to_vec()], a.rows()).unwrap();
    let aug = sub.hstack(&bcol).unwrap();
    let (r, pivots) = rref(&aug);
    if pivots.contains(&cols.len()) {
        return None;
    }
    let mut x = vec![Rational::zero(); a.cols()];
    for (row, &p) in pivots.iter().enumerate() {
        x[cols[p]] = r[(row, cols.len())].clone();
    }
    Some(x)
}

fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u32..1 << n).map(move |mask| (0..n).filter(|&i| mask >> i & 1 == 1).collect())
}

/// `None` if infeasible, `Some(None)` if unbounded, else the optimum.
fn oracle(a: &RatMatrix, b: &[Rational], c: &[Rational]) -> Option<Option<Rational>> {
    let vertices: Vec<RatVector> = subsets(a.cols())
        .filter_map(|s| basic_solution(a, b, &s))
        .filter(|x| x.iter().all(|v| !v.is_negative()))
        .collect();
    if vertices.is_empty() {
        return None;
    }
    let rays = extreme_rays_bruteforce(a).unwrap();
    if rays.iter().any(|r| dot(&r.to_rational(), c).is_positive()) {
        return Some(None);
    }
    vertices.iter().map(|x| dot(x, c)).max().map(Some)
}

fn small_lp() -> impl Strategy<Value = (RatMatrix, RatVector, RatVector)> {
    (1usize..=4, 1usize..=5).prop_flat_map(|(n, m)| {
        (
            prop::collection::vec(-3i64..=3, n * m),
            prop::collection::vec(-4i64..=4, n),
            prop::collection::vec(-3i64..=3, m),
        )
            .prop_map(move |(a, b, c)| {
                let rows = a
                    .chunks(m)
                    .map(|r| r.iter().map(|&v| rat(v)).collect())
                    .collect();
                (
                    RatMatrix::from_rows(rows, m).unwrap(),
                    b.into_iter().map(rat).collect(),
                    c.into_iter().map(rat).collect(),
                )
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn simplex_matches_enumeration((a, b, c) in small_lp()) {
        let out = solve(&LpProblem::maximize(a.clone(), b.clone(), c.clone())).unwrap();
        match oracle(&a, &b, &c) {
            None => prop_assert_eq!(out.status, LpStatus::Infeasible),
            Some(None) => prop_assert_eq!(out.status, LpStatus::Unbounded),
            Some(Some(v)) => {
                prop_assert_eq!(out.status, LpStatus::Optimal);
                prop_assert_eq!(out.value.as_ref(), Some(&v));
                let x = out.point.unwrap();
                prop_assert!(LpProblem::maximize(a, b, c).is_feasible(&x));
            }
        }
    }

    #[test]
    fn upper_bounds_match_explicit_slacks((a, b, c) in small_lp(), caps in prop::collection::vec(prop::option::of(0i64..=3), 5)) {
        let m = a.cols();
        let upper: Vec<Option<Rational>> = caps[..m].iter().map(|u| u.map(rat)).collect();
        let bounded = solve(&LpProblem::maximize(a.clone(), b.clone(), c.clone()).with_upper_bounds(upper.clone())).unwrap();

        // x_j + s_j = u_j as extra rows and columns
        let capped: Vec<usize> = (0..m).filter(|&j| upper[j].is_some()).collect();
        let (n, k) = (a.rows(), capped.len());
        let mut big = RatMatrix::zeros(n + k, m + k);
        for i in 0..n {
            for j in 0..m {
                big[(i, j)] = a[(i, j)].clone();
            }
        }
        let mut rhs = b.clone();
        for (t, &j) in capped.iter().enumerate() {
            big[(n + t, j)] = rat(1);
            big[(n + t, m + t)] = rat(1);
            rhs.push(upper[j].clone().unwrap());
        }
        let mut obj = c.clone();
        obj.extend(std::iter::repeat_n(rat(0), k));
        match oracle(&big, &rhs, &obj) {
            None => prop_assert_eq!(bounded.status, LpStatus::Infeasible),
            Some(None) => prop_assert_eq!(bounded.status, LpStatus::Unbounded),
            Some(Some(v)) => prop_assert_eq!(bounded.value, Some(v)),
        }
    }
}
