//! Seeded generator of weakly reversible systems with a prescribed
//! deficiency pattern.
//!
//! Each linkage class lives in its own block of coordinates, so class
//! stoichiometric subspaces are independent unless a shared direction is
//! planted on purpose. A class of affine dimension `a` with `a + 1 + δ_i`
//! vertices has deficiency `δ_i`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::network::{structure_report, EGraph, MassActionSystem, StructureReport};
use crate::ratmat::{rank, RatMatrix, Rational};

/// Largest coordinate of a generated vertex.
pub const GRID_MAX: i64 = 6;

const MAX_ATTEMPTS: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TargetType {
    /// One linkage class of deficiency one.
    SingleClass,
    /// Several classes, one of which carries deficiency one.
    TypeI,
    /// Several deficiency-zero classes whose subspaces share one relation.
    TypeII,
    DefZero,
    /// Deficiency at least two.
    DefTwoPlus,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenSpec {
    pub target: TargetType,
    /// Vertex count per linkage class; each at least 2.
    pub class_sizes: Vec<usize>,
    /// Ambient dimension; the minimal one when `None`.
    pub dim: Option<usize>,
    /// Rates are `p / q` with `p` and `q` drawn uniformly from these ranges.
    pub rate_numerators: (u32, u32),
    pub rate_denominators: (u32, u32),
    pub seed: u64,
}

impl GenSpec {
    pub fn new(target: TargetType, class_sizes: Vec<usize>, seed: u64) -> Self {
        Self {
            target,
            class_sizes,
            dim: None,
            rate_numerators: (1, 5),
            rate_denominators: (1, 3),
            seed,
        }
    }

    pub fn with_dim(mut self, dim: usize) -> Self {
        self.dim = Some(dim);
        self
    }

    pub fn linkage_classes(&self) -> usize {
        self.class_sizes.len()
    }

    /// Per-class deficiencies the construction aims for.
    fn class_deficiencies(&self) -> Result<Vec<usize>> {
        let sizes = &self.class_sizes;
        if sizes.is_empty() {
            return Err(Error::Unsatisfiable("no linkage classes".into()));
        }
        if sizes.iter().any(|&k| k < 2) {
            return Err(Error::Unsatisfiable(
                "class sizes must be at least 2".into(),
            ));
        }
        let l = sizes.len();
        let mut defs = vec![0; l];
        match self.target {
            TargetType::DefZero => {}
            TargetType::SingleClass => {
                if l != 1 || sizes[0] < 3 {
                    return Err(Error::Unsatisfiable(
                        "a single deficiency-one class needs exactly one class of size >= 3".into(),
                    ));
                }
                defs[0] = 1;
            }
            TargetType::TypeI => {
                if l < 2 {
                    return Err(Error::Unsatisfiable(
                        "Type I needs at least two classes".into(),
                    ));
                }
                let c = sizes.iter().rposition(|&k| k >= 3).ok_or_else(|| {
                    Error::Unsatisfiable("Type I needs a class with at least 3 vertices".into())
                })?;
                defs[c] = 1;
            }
            TargetType::TypeII => {
                if l < 2 {
                    return Err(Error::Unsatisfiable(
                        "Type II needs at least two classes".into(),
                    ));
                }
            }
            TargetType::DefTwoPlus => {
                if let Some(c) = sizes.iter().rposition(|&k| k >= 4) {
                    defs[c] = 2;
                } else {
                    let big: Vec<usize> = (0..l).filter(|&c| sizes[c] >= 3).collect();
                    if big.len() < 2 {
                        return Err(Error::Unsatisfiable(
                            "deficiency two needs a class of size >= 4 or two of size >= 3".into(),
                        ));
                    }
                    defs[big[0]] = 1;
                    defs[big[1]] = 1;
                }
            }
        }
        Ok(defs)
    }

    /// Whether a structure report has the requested deficiency pattern.
    pub fn matches(&self, report: &StructureReport) -> bool {
        if !report.weakly_reversible || report.linkage_classes.len() != self.linkage_classes() {
            return false;
        }
        let sum = report.class_deficiency_sum();
        match self.target {
            TargetType::SingleClass => report.deficiency == 1,
            TargetType::TypeI => report.deficiency == 1 && sum == 1,
            TargetType::TypeII => report.deficiency == 1 && sum == 0,
            TargetType::DefZero => report.deficiency == 0,
            TargetType::DefTwoPlus => report.deficiency >= 2,
        }
    }
}

/// Coordinates a class may move along: a block of fresh axes and, for
/// Type II, one planted direction over the shared axes.
struct ClassFrame {
    axes: Vec<usize>,
    planted: Option<Vec<i64>>,
}

fn frames(spec: &GenSpec, defs: &[usize]) -> (Vec<ClassFrame>, usize) {
    let l = spec.class_sizes.len();
    let shared = if spec.target == TargetType::TypeII {
        l - 1
    } else {
        0
    };
    let mut next = shared;
    let mut out = Vec::with_capacity(l);
    for (c, (&k, &def)) in spec.class_sizes.iter().zip(defs).enumerate() {
        let affine = k - 1 - def;
        let block = if shared > 0 { affine - 1 } else { affine };
        let axes: Vec<usize> = (next..next + block).collect();
        next += block;
        // f_1 = e_1, f_c = e_c - e_{c-1}, f_l = e_{l-1}: the only relation is
        // f_1 + ... + f_{l-1} = f_l and it involves every class.
        let planted = (shared > 0).then(|| {
            let mut f = vec![0i64; shared];
            if c == 0 {
                f[0] = 1;
            } else if c == l - 1 {
                f[shared - 1] = 1;
            } else {
                f[c] = 1;
                f[c - 1] = -1;
            }
            f
        });
        out.push(ClassFrame { axes, planted });
    }
    (out, next)
}

fn random_rate(rng: &mut ChaCha8Rng, spec: &GenSpec) -> Rational {
    let (a, b) = spec.rate_numerators;
    let (c, d) = spec.rate_denominators;
    let p = rng.gen_range(a.max(1)..=b.max(a.max(1)));
    let q = rng.gen_range(c.max(1)..=d.max(c.max(1)));
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Integer points of one class relative to a base point, or `None` when the
/// draw is degenerate.
fn class_offsets(
    rng: &mut ChaCha8Rng,
    frame: &ClassFrame,
    size: usize,
    def: usize,
    dim: usize,
) -> Option<Vec<Vec<i64>>> {
    let mut basis: Vec<Vec<i64>> = frame
        .axes
        .iter()
        .map(|&a| {
            let mut e = vec![0; dim];
            e[a] = 1;
            e
        })
        .collect();
    if let Some(f) = &frame.planted {
        let mut e = vec![0; dim];
        e[..f.len()].copy_from_slice(f);
        basis.push(e);
    }
    let affine = basis.len();
    debug_assert_eq!(affine, size - 1 - def);

    let mut dirs: Vec<Vec<i64>> = Vec::with_capacity(affine);
    for _ in 0..affine {
        let coeffs: Vec<i64> = (0..affine).map(|_| rng.gen_range(-2..=2)).collect();
        let v: Vec<i64> = (0..dim)
            .map(|x| basis.iter().zip(&coeffs).map(|(b, c)| b[x] * c).sum())
            .collect();
        dirs.push(v);
    }
    if affine > 0 {
        let cols: Vec<Vec<Rational>> = dirs
            .iter()
            .map(|v| {
                v.iter()
                    .map(|&x| Rational::from_integer(x.into()))
                    .collect()
            })
            .collect();
        if rank(&RatMatrix::from_columns(&cols, dim).ok()?) != affine {
            return None;
        }
    }

    let mut points = vec![vec![0i64; dim]];
    points.extend(dirs.iter().cloned());
    for _ in 0..def {
        let lambdas: Vec<i64> = (0..affine).map(|_| rng.gen_range(-1..=2)).collect();
        let p: Vec<i64> = (0..dim)
            .map(|x| dirs.iter().zip(&lambdas).map(|(d, l)| d[x] * l).sum())
            .collect();
        points.push(p);
    }
    let distinct: BTreeSet<&Vec<i64>> = points.iter().collect();
    (distinct.len() == points.len()).then_some(points)
}

fn strongly_connected_edges(rng: &mut ChaCha8Rng, members: &[usize]) -> Vec<(usize, usize)> {
    let mut order = members.to_vec();
    order.shuffle(rng);
    let k = order.len();
    let mut edges: BTreeSet<(usize, usize)> =
        (0..k).map(|i| (order[i], order[(i + 1) % k])).collect();
    for &a in members {
        for &b in members {
            if a != b && rng.gen_bool(0.25) {
                edges.insert((a, b));
            }
        }
    }
    edges.into_iter().collect()
}

fn attempt(
    spec: &GenSpec,
    defs: &[usize],
    rng: &mut ChaCha8Rng,
) -> Result<Option<MassActionSystem>> {
    let (frames, min_dim) = frames(spec, defs);
    let dim = spec.dim.unwrap_or(min_dim.max(1));
    if dim < min_dim {
        return Err(Error::Unsatisfiable(format!(
            "needs dimension at least {min_dim}, got {dim}"
        )));
    }

    let mut vertices: Vec<Vec<i64>> = Vec::new();
    let mut edges = Vec::new();
    for ((frame, &size), &def) in frames.iter().zip(&spec.class_sizes).zip(defs) {
        let Some(offsets) = class_offsets(rng, frame, size, def, dim) else {
            return Ok(None);
        };
        let mut base = vec![0i64; dim];
        for (x, b) in base.iter_mut().enumerate() {
            let lo = offsets.iter().map(|p| p[x]).min().unwrap_or(0);
            let hi = offsets.iter().map(|p| p[x]).max().unwrap_or(0);
            if hi - lo > GRID_MAX {
                return Ok(None);
            }
            *b = rng.gen_range(-lo..=GRID_MAX - hi);
        }
        let start = vertices.len();
        for p in offsets {
            vertices.push(p.iter().zip(&base).map(|(a, b)| a + b).collect());
        }
        let members: Vec<usize> = (start..vertices.len()).collect();
        edges.extend(strongly_connected_edges(rng, &members));
    }

    let rates = (0..edges.len()).map(|_| random_rate(rng, spec)).collect();
    let vs = vertices
        .iter()
        .map(|v| {
            v.iter()
                .map(|&x| Rational::from_integer(x.into()))
                .collect()
        })
        .collect();
    let graph = match EGraph::new(dim, vs, edges) {
        Ok(g) => g,
        Err(Error::InvalidGraph(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    let sys = MassActionSystem::new(graph, rates)?;
    Ok(spec.matches(&structure_report(sys.graph())).then_some(sys))
}

/// Deterministic in `spec`: the same seed always yields the same system.
pub fn generate(spec: &GenSpec) -> Result<MassActionSystem> {
    let defs = spec.class_deficiencies()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    for _ in 0..MAX_ATTEMPTS {
        if let Some(sys) = attempt(spec, &defs, &mut rng)? {
            return Ok(sys);
        }
    }
    Err(Error::Unsatisfiable(format!(
        "no valid instance after {MAX_ATTEMPTS} draws"
    )))
}
