//! Single-linkage-class weakly reversible realization.
//!
//! Three stages:
//! 1. every net reaction vector must be a nonnegative combination of the
//!    directions `y_j - y_i` towards the other given vertices;
//! 2. the maximal edge set `E*` collects every pair `(i, j)` for which some
//!    feasible decomposition at `i` puts positive weight on `j`. Edge `e` is
//!    tested by maximizing `c_e <= 1` over the homogenized cone
//!    `A c = t w, c, t >= 0`; an optimum `(c, t)` with `c_e > 0` and the gate
//!    solution `c0` give the witness `(c + c0) / (1 + t)`. Rates at `i` are
//!    the average of the witnesses, which is feasible and positive on `E*`;
//! 3. the realization on `E*` is accepted iff its Kirchhoff matrix has a
//!    one-dimensional kernel with full support.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lp::{solve, LpProblem, LpStatus};
use crate::network::{kirchhoff_from_edges, EGraph, MassActionSystem, NetReactionData};
use crate::ratmat::{kernel_basis, RatMatrix, RatVector, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingleClassOutcome {
    /// Present iff a realization exists. Vertex `i` is column `i` of the
    /// input.
    pub realization: Option<MassActionSystem>,
    /// Every pair that carries positive weight in some feasible
    /// decomposition; empty when the feasibility gate fails.
    pub max_edges: Vec<(usize, usize)>,
}

impl SingleClassOutcome {
    pub fn exists(&self) -> bool {
        self.realization.is_some()
    }

    fn none(max_edges: Vec<(usize, usize)>) -> Self {
        Self {
            realization: None,
            max_edges,
        }
    }
}

/// Directions `y_j - y_i` for `j != i`, as columns, plus the matching `j`.
fn directions(data: &NetReactionData, i: usize) -> (RatMatrix, Vec<usize>) {
    let yi = data.source(i);
    let targets: Vec<usize> = (0..data.len()).filter(|&j| j != i).collect();
    let cols: Vec<RatVector> = targets
        .iter()
        .map(|&j| data.source(j).iter().zip(&yi).map(|(a, b)| a - b).collect())
        .collect();
    (
        RatMatrix::from_columns(&cols, data.dim()).expect("source lengths agree"),
        targets,
    )
}

/// Per-vertex rates on the maximal edge set, or `None` when the vertex's net
/// vector is not in the cone of available directions.
fn maximal_rates(data: &NetReactionData, i: usize) -> Result<Option<Vec<(usize, Rational)>>> {
    let (dirs, targets) = directions(data, i);
    let wi = data.net_vector(i);
    let gate = solve(&LpProblem::feasibility(dirs.clone(), wi.clone()))?;
    if gate.status == LpStatus::Infeasible {
        return Ok(None);
    }
    let c0 = gate.point.expect("feasible outcome has a point");
    let k = targets.len();
    let neg_w: RatVector = wi.iter().map(|x| -x).collect();
    let mut cols = dirs.columns();
    cols.push(neg_w);
    let homog = RatMatrix::from_columns(&cols, data.dim())?;
    let zero = vec![Rational::zero(); data.dim()];
    let mut witnesses: Vec<RatVector> = Vec::new();
    let mut positive = vec![false; k];
    for e in 0..k {
        let mut c = vec![Rational::zero(); k + 1];
        c[e] = Rational::one();
        let mut upper = vec![None; k + 1];
        upper[e] = Some(Rational::one());
        let p = LpProblem::maximize(homog.clone(), zero.clone(), c).with_upper_bounds(upper);
        let out = solve(&p)?;
        if out.status == LpStatus::Optimal && out.value.as_ref().is_some_and(Signed::is_positive) {
            let x = out.point.expect("optimal outcome has a point");
            let scale = Rational::one() + &x[k];
            positive[e] = true;
            witnesses.push((0..k).map(|j| (&x[j] + &c0[j]) / &scale).collect());
        }
    }
    if witnesses.is_empty() {
        return Ok(Some(Vec::new()));
    }
    let count = Rational::from_integer(witnesses.len().into());
    let rates: Vec<(usize, Rational)> = (0..k)
        .filter(|&e| positive[e])
        .map(|e| {
            let total: Rational = witnesses.iter().map(|w| w[e].clone()).sum();
            (targets[e], total / &count)
        })
        .collect();
    debug_assert!(rates.iter().all(|(_, r)| r.is_positive()));
    Ok(Some(rates))
}

pub fn realize_single_class(data: &NetReactionData) -> Result<SingleClassOutcome> {
    let m = data.len();
    if m == 0 {
        return Err(Error::InvalidInput("no source vertices".into()));
    }
    // A lone vertex carries no reaction, so it cannot form a linkage class.
    if m == 1 {
        return Ok(SingleClassOutcome::none(Vec::new()));
    }

    let mut edges = Vec::new();
    let mut rates = Vec::new();
    for i in 0..m {
        match maximal_rates(data, i)? {
            None => return Ok(SingleClassOutcome::none(Vec::new())),
            Some(out) => {
                for (j, k) in out {
                    edges.push((i, j));
                    rates.push(k);
                }
            }
        }
    }

    let q = kirchhoff_from_edges(m, &edges, &rates);
    let ker = kernel_basis(&q);
    let full_support = ker.len() == 1 && ker[0].iter().all(|x| !x.is_zero());
    if !full_support {
        return Ok(SingleClassOutcome::none(edges));
    }

    let graph = EGraph::new(data.dim(), data.sources().columns(), edges.clone())?;
    let realization = MassActionSystem::new(graph, rates)?;
    Ok(SingleClassOutcome {
        realization: Some(realization),
        max_edges: edges,
    })
}
