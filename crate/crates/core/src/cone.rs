//! Extreme rays of the pointed cone `ker(W) ∩ R^m_{>=0}`.
//!
//! The cone is parametrized by a kernel basis `B` (`x = B t`), so the double
//! description iteration runs in `dim ker(W)` dimensions with one inequality
//! `x_i >= 0` per coordinate. Rays are carried in `x`-coordinates throughout.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::network::{kirchhoff_matrix, net_reaction_data, MassActionSystem};
use crate::ratmat::{kernel_basis, primitive, rank, rref, RatMatrix, RatVector, Rational};

/// Nonnegative primitive integer vector spanning an extreme ray.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ray {
    coords: Vec<BigInt>,
}

impl Ray {
    /// Normalizes a nonnegative, nonzero rational vector.
    pub fn new(v: &[Rational]) -> Result<Self> {
        if v.iter().any(Signed::is_negative) {
            return Err(Error::InvalidInput("ray has a negative coordinate".into()));
        }
        if v.iter().all(Zero::is_zero) {
            return Err(Error::InvalidInput("ray is the zero vector".into()));
        }
        let coords = crate::ratmat::primitive_integer(v);
        Ok(Self { coords })
    }

    pub fn from_i64(v: &[i64]) -> Result<Self> {
        Self::new(&crate::ratmat::rat_vec(v))
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn support(&self) -> Vec<usize> {
        self.coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, _)| i)
            .collect()
    }

    pub fn to_rational(&self) -> RatVector {
        self.coords
            .iter()
            .cloned()
            .map(Rational::from_integer)
            .collect()
    }
}

/// How the double description step decides whether two rays are adjacent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdjacencyTest {
    /// No third ray's zero set contains the common zero set.
    Combinatorial,
    /// The common active constraints have rank `d - 2`.
    Algebraic,
}

impl Default for AdjacencyTest {
    fn default() -> Self {
        if cfg!(feature = "rank-adjacency") {
            AdjacencyTest::Algebraic
        } else {
            AdjacencyTest::Combinatorial
        }
    }
}

#[derive(Clone, PartialEq, Eq)]
struct ZeroSet(Vec<u64>);

impl ZeroSet {
    fn new(m: usize) -> Self {
        ZeroSet(vec![0; m.div_ceil(64)])
    }

    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn intersect(&self, other: &ZeroSet) -> ZeroSet {
        ZeroSet(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn contains_all(&self, other: &ZeroSet) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & b == *b)
    }

    fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn members(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (k, w) in self.0.iter().enumerate() {
            for b in 0..64 {
                if w & (1 << b) != 0 {
                    out.push(k * 64 + b);
                }
            }
        }
        out
    }
}

struct DdRay {
    x: RatVector,
    zeros: ZeroSet,
}

/// Extreme rays of `ker(W) ∩ R^m_{>=0}`, sorted lexicographically.
pub fn extreme_rays(w: &RatMatrix) -> Vec<Ray> {
    extreme_rays_with(w, AdjacencyTest::default())
}

pub fn extreme_rays_with(w: &RatMatrix, test: AdjacencyTest) -> Vec<Ray> {
    let m = w.cols();
    let basis = kernel_basis(w);
    let d = basis.len();
    if d == 0 {
        return Vec::new();
    }
    let b = RatMatrix::from_columns(&basis, m).expect("kernel vectors have length m");

    // Initial simplicial cone: the first d linearly independent rows.
    let mut initial = Vec::with_capacity(d);
    for i in 0..m {
        let mut candidate = initial.clone();
        candidate.push(i);
        if rank(&b.select_rows(&candidate)) == candidate.len() {
            initial = candidate;
            if initial.len() == d {
                break;
            }
        }
    }
    debug_assert_eq!(initial.len(), d);
    let a0 = b.select_rows(&initial);
    let (r, _) = rref(&a0.hstack(&RatMatrix::identity(d)).expect("square"));
    let inv =
        RatMatrix::from_rows((0..d).map(|i| r.row(i)[d..].to_vec()).collect(), d).expect("shape");
    let gens = b.mul(&inv).expect("shape");

    let mut processed = vec![false; m];
    for &i in &initial {
        processed[i] = true;
    }
    let mut rays: Vec<DdRay> = (0..d)
        .map(|k| {
            let x = primitive(&gens.column(k));
            let mut zeros = ZeroSet::new(m);
            for &i in &initial {
                if x[i].is_zero() {
                    zeros.insert(i);
                }
            }
            DdRay { x, zeros }
        })
        .collect();

    for (h, &done) in processed.iter().enumerate() {
        if done {
            continue;
        }
        let (mut pos, mut neg, mut zero) = (Vec::new(), Vec::new(), Vec::new());
        for (k, ray) in rays.iter().enumerate() {
            if ray.x[h].is_positive() {
                pos.push(k);
            } else if ray.x[h].is_negative() {
                neg.push(k);
            } else {
                zero.push(k);
            }
        }
        let mut next: Vec<DdRay> = Vec::new();
        for &p in &pos {
            for &q in &neg {
                if !adjacent(&rays, p, q, d, &b, test) {
                    continue;
                }
                let (rp, rq) = (&rays[p], &rays[q]);
                let a = rp.x[h].clone();
                let c = -rq.x[h].clone();
                let x: RatVector =
                    rq.x.iter()
                        .zip(&rp.x)
                        .map(|(u, v)| &a * u + &c * v)
                        .collect();
                let x = primitive(&x);
                let mut zeros = rp.zeros.intersect(&rq.zeros);
                zeros.insert(h);
                next.push(DdRay { x, zeros });
            }
        }
        let mut kept: Vec<DdRay> = Vec::with_capacity(pos.len() + zero.len() + next.len());
        for k in pos {
            kept.push(DdRay {
                x: rays[k].x.clone(),
                zeros: rays[k].zeros.clone(),
            });
        }
        for k in zero {
            let mut zeros = rays[k].zeros.clone();
            zeros.insert(h);
            kept.push(DdRay {
                x: rays[k].x.clone(),
                zeros,
            });
        }
        kept.extend(next);
        rays = kept;
    }

    let mut out: Vec<Ray> = rays
        .iter()
        .map(|r| Ray::new(&r.x).expect("final rays are nonnegative and nonzero"))
        .collect();
    out.sort();
    out.dedup();
    out
}

fn adjacent(
    rays: &[DdRay],
    p: usize,
    q: usize,
    d: usize,
    b: &RatMatrix,
    test: AdjacencyTest,
) -> bool {
    let common = rays[p].zeros.intersect(&rays[q].zeros);
    if d >= 2 && common.len() < d - 2 {
        return false;
    }
    match test {
        AdjacencyTest::Combinatorial => !rays
            .iter()
            .enumerate()
            .any(|(k, r)| k != p && k != q && r.zeros.contains_all(&common)),
        AdjacencyTest::Algebraic => {
            let active = common.members();
            rank(&b.select_rows(&active)) + 2 == d
        }
    }
}

/// Largest `m` accepted by [`extreme_rays_bruteforce`].
pub const BRUTEFORCE_MAX_COLUMNS: usize = 12;

/// Reference enumeration over supports: a nonnegative kernel vector spans an
/// extreme ray iff its support is minimal, i.e. the columns on the support
/// have a one-dimensional kernel spanned by a strictly positive vector.
pub fn extreme_rays_bruteforce(w: &RatMatrix) -> Result<Vec<Ray>> {
    let m = w.cols();
    if m > BRUTEFORCE_MAX_COLUMNS {
        return Err(Error::TooLarge(format!(
            "brute-force enumeration supports at most {BRUTEFORCE_MAX_COLUMNS} columns, got {m}"
        )));
    }
    let mut masks: Vec<u32> = (1..(1u32 << m)).collect();
    masks.sort_by_key(|s| (s.count_ones(), *s));
    let mut found: Vec<(u32, Ray)> = Vec::new();
    for s in masks {
        if found.iter().any(|(f, _)| f & s == *f) {
            continue;
        }
        let cols: Vec<usize> = (0..m).filter(|&i| s & (1 << i) != 0).collect();
        let ker = kernel_basis(&w.select_columns(&cols));
        if ker.len() != 1 {
            continue;
        }
        let v = &ker[0];
        let sign = if v.iter().all(Signed::is_positive) {
            Rational::from_integer(1.into())
        } else if v.iter().all(Signed::is_negative) {
            Rational::from_integer((-1).into())
        } else {
            continue;
        };
        let mut x = vec![Rational::zero(); m];
        for (&c, vi) in cols.iter().zip(v) {
            x[c] = vi * &sign;
        }
        found.push((s, Ray::new(&x)?));
    }
    let mut out: Vec<Ray> = found.into_iter().map(|(_, r)| r).collect();
    out.sort();
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorKind {
    /// In the kernel of the Kirchhoff matrix.
    Cyclic,
    /// Mapped by the Kirchhoff matrix to a nonzero element of `ker(Y)`.
    Stoichiometric,
}

pub fn classify_generator(d: &Ray, sys: &MassActionSystem) -> Result<GeneratorKind> {
    let w = net_reaction_data(sys);
    let x = d.to_rational();
    let wx = w.net_vectors().mul_vec(&x)?;
    if wx.iter().any(|v| !v.is_zero()) {
        return Err(Error::NotInKernel);
    }
    let ad = kirchhoff_matrix(sys).mul_vec(&x)?;
    Ok(if ad.iter().all(Zero::is_zero) {
        GeneratorKind::Cyclic
    } else {
        GeneratorKind::Stoichiometric
    })
}

/// Whether `target` is a nonnegative combination of `generators`.
pub fn in_cone(target: &Ray, generators: &[Ray]) -> bool {
    use crate::lp::{solve, LpProblem};
    let m = target.len();
    let cols: Vec<RatVector> = generators.iter().map(Ray::to_rational).collect();
    let a = RatMatrix::from_columns(&cols, m).expect("rays share a length");
    solve(&LpProblem::feasibility(a, target.to_rational()))
        .map(|o| o.is_feasible())
        .unwrap_or(false)
}
