//! Exact two-phase simplex over the rationals.
//!
//! Problems are stated as `A x = b, 0 <= x (<= u)` with an optional
//! objective to maximize. Pivoting follows Bland's rule, so the method
//! terminates on degenerate instances without perturbation.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::ratmat::{dot, RatMatrix, RatVector, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpProblem {
    pub a: RatMatrix,
    pub b: RatVector,
    /// Maximized when present; a pure feasibility query otherwise.
    pub objective: Option<RatVector>,
    /// Per-variable upper bounds (`None` = unbounded above).
    pub upper: Option<Vec<Option<Rational>>>,
}

impl LpProblem {
    pub fn feasibility(a: RatMatrix, b: RatVector) -> Self {
        Self {
            a,
            b,
            objective: None,
            upper: None,
        }
    }

    pub fn maximize(a: RatMatrix, b: RatVector, c: RatVector) -> Self {
        Self {
            a,
            b,
            objective: Some(c),
            upper: None,
        }
    }

    pub fn with_upper_bounds(mut self, upper: Vec<Option<Rational>>) -> Self {
        self.upper = Some(upper);
        self
    }

    fn validate(&self) -> Result<()> {
        let n = self.a.cols();
        if self.a.rows() != self.b.len() {
            return Err(Error::DimensionMismatch(format!(
                "constraint matrix has {} rows but right-hand side has {} entries",
                self.a.rows(),
                self.b.len()
            )));
        }
        if let Some(c) = &self.objective {
            if c.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "objective has {} entries for {n} variables",
                    c.len()
                )));
            }
        }
        if let Some(u) = &self.upper {
            if u.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "{} upper bounds for {n} variables",
                    u.len()
                )));
            }
            if u.iter().flatten().any(Signed::is_negative) {
                return Err(Error::InvalidInput("negative upper bound".into()));
            }
        }
        Ok(())
    }

    /// Exact feasibility check of a candidate point.
    pub fn is_feasible(&self, x: &[Rational]) -> bool {
        if x.len() != self.a.cols() || x.iter().any(Signed::is_negative) {
            return false;
        }
        if let Some(u) = &self.upper {
            for (xi, ui) in x.iter().zip(u) {
                if let Some(ui) = ui {
                    if xi > ui {
                        return false;
                    }
                }
            }
        }
        match self.a.mul_vec(x) {
            Ok(ax) => ax == self.b,
            Err(_) => false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Infeasible,
    Optimal,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpOutcome {
    pub status: LpStatus,
    /// A feasible point; absent when infeasible.
    pub point: Option<RatVector>,
    /// Exact optimum; present only when `Optimal`. Zero for pure
    /// feasibility problems.
    pub value: Option<Rational>,
}

impl LpOutcome {
    pub fn is_feasible(&self) -> bool {
        self.status != LpStatus::Infeasible
    }
}

struct Tableau {
    /// `rows x (cols + 1)`; the last column is the right-hand side.
    t: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    cols: usize,
}

enum PhaseEnd {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn rhs(&self, i: usize) -> &Rational {
        &self.t[i][self.cols]
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let inv = self.t[row][col].recip();
        for x in self.t[row].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        let pivot_row = self.t[row].clone();
        for (i, r) in self.t.iter_mut().enumerate() {
            if i == row || r[col].is_zero() {
                continue;
            }
            let f = r[col].clone();
            for (x, p) in r.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        self.basis[row] = col;
    }

    /// Maximizes `cost` over the columns allowed by `allowed`, starting from
    /// the current basic feasible solution.
    fn optimize(&mut self, cost: &[Rational], allowed: &dyn Fn(usize) -> bool) -> PhaseEnd {
        loop {
            let entering = (0..self.cols).filter(|&j| allowed(j)).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let mut r = cost[j].clone();
                for (i, &bi) in self.basis.iter().enumerate() {
                    if !self.t[i][j].is_zero() && !cost[bi].is_zero() {
                        r -= &cost[bi] * &self.t[i][j];
                    }
                }
                r.is_positive()
            });
            let Some(col) = entering else {
                return PhaseEnd::Optimal;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.t.len() {
                let a = &self.t[i][col];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(i) / a;
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((li, lr)) => {
                        if ratio < lr || (ratio == lr && self.basis[i] < self.basis[li]) {
                            Some((i, ratio))
                        } else {
                            Some((li, lr))
                        }
                    }
                };
            }
            match leave {
                None => return PhaseEnd::Unbounded,
                Some((row, _)) => self.pivot(row, col),
            }
        }
    }

    fn point(&self, n: usize) -> RatVector {
        let mut x = vec![Rational::zero(); n];
        for (i, &bi) in self.basis.iter().enumerate() {
            if bi < n {
                x[bi] = self.rhs(i).clone();
            }
        }
        x
    }
}

/// Solves the problem exactly.
pub fn solve(p: &LpProblem) -> Result<LpOutcome> {
    p.validate()?;
    let n = p.a.cols();
    let bounded: Vec<(usize, Rational)> = p
        .upper
        .iter()
        .flatten()
        .enumerate()
        .filter_map(|(j, u)| u.clone().map(|u| (j, u)))
        .collect();

    // Columns: original variables, one slack per upper bound, one artificial
    // per row.
    let m = p.a.rows() + bounded.len();
    let structural = n + bounded.len();
    let cols = structural + m;
    let mut t = Vec::with_capacity(m);
    for i in 0..p.a.rows() {
        let mut row = vec![Rational::zero(); cols + 1];
        row[..n].clone_from_slice(p.a.row(i));
        row[cols] = p.b[i].clone();
        t.push(row);
    }
    for (k, (j, u)) in bounded.iter().enumerate() {
        let mut row = vec![Rational::zero(); cols + 1];
        row[*j] = Rational::one();
        row[n + k] = Rational::one();
        row[cols] = u.clone();
        t.push(row);
    }
    for (i, row) in t.iter_mut().enumerate() {
        if row[cols].is_negative() {
            for x in row.iter_mut() {
                *x = -x.clone();
            }
        }
        row[structural + i] = Rational::one();
    }
    let mut tab = Tableau {
        t,
        basis: (structural..cols).collect(),
        cols,
    };

    // Phase 1: maximize -(sum of artificials).
    let mut phase1 = vec![Rational::zero(); cols];
    for c in phase1.iter_mut().skip(structural) {
        *c = -Rational::one();
    }
    tab.optimize(&phase1, &|_| true);
    let infeasibility: Rational = tab
        .basis
        .iter()
        .enumerate()
        .filter(|(_, &b)| b >= structural)
        .map(|(i, _)| tab.rhs(i).clone())
        .sum();
    if infeasibility.is_positive() {
        return Ok(LpOutcome {
            status: LpStatus::Infeasible,
            point: None,
            value: None,
        });
    }

    // Drive zero-valued artificials out of the basis; rows where that is
    // impossible are redundant and dropped.
    let mut i = 0;
    while i < tab.t.len() {
        if tab.basis[i] >= structural {
            match (0..structural).find(|&j| !tab.t[i][j].is_zero()) {
                Some(j) => tab.pivot(i, j),
                None => {
                    tab.t.remove(i);
                    tab.basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }

    let mut cost = vec![Rational::zero(); cols];
    if let Some(c) = &p.objective {
        cost[..n].clone_from_slice(c);
    }
    let end = tab.optimize(&cost, &|j| j < structural);
    let point = tab.point(n);
    debug_assert!(p.is_feasible(&point));
    Ok(match end {
        PhaseEnd::Optimal => {
            let value = p
                .objective
                .as_ref()
                .map_or_else(Rational::zero, |c| dot(c, &point));
            LpOutcome {
                status: LpStatus::Optimal,
                point: Some(point),
                value: Some(value),
            }
        }
        PhaseEnd::Unbounded => LpOutcome {
            status: LpStatus::Unbounded,
            point: Some(point),
            value: None,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratmat::{rat, rat_vec, ratio};

    #[test]
    fn single_equality_maximum() {
        let p = LpProblem::maximize(RatMatrix::from_i64(&[&[1]]), rat_vec(&[1]), rat_vec(&[1]));
        let out = solve(&p).unwrap();
        assert_eq!(out.status, LpStatus::Optimal);
        assert_eq!(out.value, Some(rat(1)));
        assert_eq!(out.point, Some(rat_vec(&[1])));
    }

    #[test]
    fn negative_sum_is_infeasible() {
        let p = LpProblem::feasibility(RatMatrix::from_i64(&[&[1, 1]]), rat_vec(&[-1]));
        let out = solve(&p).unwrap();
        assert_eq!(out.status, LpStatus::Infeasible);
        assert!(out.point.is_none());
    }

    #[test]
    fn single_direction_decomposition() {
        // c * ((2,0) - (1,0)) = (1,0)
        let p = LpProblem::feasibility(RatMatrix::from_i64(&[&[1], &[0]]), rat_vec(&[1, 0]));
        let out = solve(&p).unwrap();
        assert_eq!(out.status, LpStatus::Optimal);
        assert_eq!(out.point, Some(rat_vec(&[1])));
    }

    #[test]
    fn unbounded_ray() {
        let p = LpProblem::maximize(
            RatMatrix::from_i64(&[&[1, -1]]),
            rat_vec(&[1]),
            rat_vec(&[1, 0]),
        );
        let out = solve(&p).unwrap();
        assert_eq!(out.status, LpStatus::Unbounded);
        assert!(p.is_feasible(out.point.as_ref().unwrap()));
    }

    #[test]
    fn upper_bound_caps_unbounded_direction() {
        let p = LpProblem::maximize(
            RatMatrix::from_i64(&[&[1, -1]]),
            rat_vec(&[1]),
            rat_vec(&[1, 0]),
        )
        .with_upper_bounds(vec![Some(rat(5)), None]);
        let out = solve(&p).unwrap();
        assert_eq!(out.status, LpStatus::Optimal);
        assert_eq!(out.value, Some(rat(5)));
        assert_eq!(out.point, Some(rat_vec(&[5, 4])));
    }

    #[test]
    fn fractional_optimum() {
        // maximize y s.t. 2x + 3y = 1
        let p = LpProblem::maximize(
            RatMatrix::from_i64(&[&[2, 3]]),
            rat_vec(&[1]),
            rat_vec(&[0, 1]),
        );
        let out = solve(&p).unwrap();
        assert_eq!(out.value, Some(ratio(1, 3)));
    }

    #[test]
    fn redundant_rows_are_tolerated() {
        let p = LpProblem::maximize(
            RatMatrix::from_i64(&[&[1, 1], &[2, 2], &[0, 0]]),
            rat_vec(&[1, 2, 0]),
            rat_vec(&[1, 2]),
        );
        let out = solve(&p).unwrap();
        assert_eq!(out.value, Some(rat(2)));
    }

    #[test]
    fn empty_problem_is_feasible() {
        let p = LpProblem::feasibility(RatMatrix::zeros(0, 0), vec![]);
        let out = solve(&p).unwrap();
        assert_eq!(out.status, LpStatus::Optimal);
        assert_eq!(out.point, Some(vec![]));
    }

    #[test]
    fn dimension_mismatch() {
        let p = LpProblem::feasibility(RatMatrix::zeros(2, 2), rat_vec(&[1]));
        assert!(matches!(solve(&p), Err(Error::DimensionMismatch(_))));
        let p = LpProblem::maximize(RatMatrix::zeros(1, 2), rat_vec(&[1]), rat_vec(&[1]));
        assert!(solve(&p).is_err());
    }

    #[test]
    fn degenerate_cycling_instance_terminates() {
        // Beale's classic cycling example, in equality form with slacks.
        let a = RatMatrix::from_rows(
            vec![
                vec![
                    ratio(1, 4),
                    rat(-8),
                    rat(-1),
                    rat(9),
                    rat(1),
                    rat(0),
                    rat(0),
                ],
                vec![
                    ratio(1, 2),
                    rat(-12),
                    ratio(-1, 2),
                    rat(3),
                    rat(0),
                    rat(1),
                    rat(0),
                ],
                vec![rat(0), rat(0), rat(1), rat(0), rat(0), rat(0), rat(1)],
            ],
            7,
        )
        .unwrap();
        let c = vec![
            ratio(3, 4),
            rat(-20),
            ratio(1, 2),
            rat(-6),
            rat(0),
            rat(0),
            rat(0),
        ];
        let p = LpProblem::maximize(a, rat_vec(&[0, 0, 1]), c);
        let out = solve(&p).unwrap();
        assert_eq!(out.status, LpStatus::Optimal);
        assert_eq!(out.value, Some(ratio(5, 4)));
        assert!(p.is_feasible(out.point.as_ref().unwrap()));
    }
}
