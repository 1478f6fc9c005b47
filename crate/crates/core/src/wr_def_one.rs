//! Decision procedure for weakly reversible deficiency-one realizations.
//!
//! The extreme rays of `ker(W) ∩ R^m_{>=0}` determine the candidate linkage
//! classes: for a realization with `ℓ` classes the cone has `ℓ + 1` rays
//! (`dim ker W` of them) when one class carries the deficiency, and `ℓ + 2`
//! rays when every class has deficiency zero. Each candidate class is then
//! handed to [`realize_single_class`].

use std::fmt;

use crate::cone::{extreme_rays, Ray};
use crate::error::{Error, Result};
use crate::network::{
    is_weakly_reversible, net_reaction_data, structure_report, EGraph, MassActionSystem,
    NetReactionData,
};
use crate::ratmat::{nullity, Rational};
use crate::wr_single::realize_single_class;

/// Result code of the decision procedure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Flag {
    None = 0,
    SingleClass = 1,
    TypeI = 2,
    TypeII = 3,
}

impl Flag {
    pub fn code(self) -> u8 {
        self as u8
    }

    pub fn message(self) -> &'static str {
        match self {
            Flag::None => "No weakly reversible and deficiency one realization exists.",
            Flag::SingleClass => {
                "Weakly reversible and deficiency one realization consisting of a single linkage class exists."
            }
            Flag::TypeI => "Weakly reversible and deficiency one realization of Type I exists.",
            Flag::TypeII => "Weakly reversible and deficiency one realization of Type II exists.",
        }
    }
}

/// Deficiency pattern of a weakly reversible deficiency-one network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RealizationType {
    SingleClass,
    /// The class deficiencies sum to one.
    TypeI,
    /// Every class has deficiency zero.
    TypeII,
}

impl RealizationType {
    pub fn flag(self) -> Flag {
        match self {
            RealizationType::SingleClass => Flag::SingleClass,
            RealizationType::TypeI => Flag::TypeI,
            RealizationType::TypeII => Flag::TypeII,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            RealizationType::SingleClass => "SingleClass",
            RealizationType::TypeI => "TypeI",
            RealizationType::TypeII => "TypeII",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Realization {
    /// Vertex `i` is source column `i` of the input.
    pub system: MassActionSystem,
    pub linkage_classes: Vec<Vec<usize>>,
    pub kind: RealizationType,
}

/// Why a ray pair was not accepted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PairResult {
    /// Supports do not induce a partition for either branch.
    NoPartition,
    /// Some candidate class has a kernel of dimension other than one.
    KernelDimension {
        class: usize,
    },
    /// The single-class subroutine rejected a candidate class.
    ClassRejected {
        class: usize,
    },
    Accepted,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairAttempt {
    pub i: usize,
    pub j: usize,
    pub classes: Vec<Vec<usize>>,
    pub result: PairResult,
}

/// Which gate rejected the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rejection {
    TooFewRays { r: usize },
    UncoveredSupport { missing: Vec<usize> },
    SingleClassRejected,
    PairsExhausted,
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rejection::TooFewRays { r } => write!(f, "r = {r} < 2 extreme rays"),
            Rejection::UncoveredSupport { missing } => {
                write!(f, "ray supports miss coordinates {missing:?}")
            }
            Rejection::SingleClassRejected => {
                write!(
                    f,
                    "r = 2 but no single-linkage-class weakly reversible realization"
                )
            }
            Rejection::PairsExhausted => write!(f, "no ray pair yields a valid partition"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostics {
    /// `dim ker(W)`.
    pub kernel_dim: usize,
    pub rays: Vec<Ray>,
    pub attempted_pairs: Vec<PairAttempt>,
    pub rejection: Option<Rejection>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealizationOutcome {
    pub flag: Flag,
    pub realization: Option<Realization>,
    pub diagnostics: Diagnostics,
}

fn pairwise_disjoint_cover(blocks: &[Vec<usize>], m: usize) -> bool {
    let mut seen = vec![false; m];
    for b in blocks {
        for &i in b {
            if seen[i] {
                return false;
            }
            seen[i] = true;
        }
    }
    seen.into_iter().all(|s| s)
}

fn union(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut u: Vec<usize> = a.iter().chain(b).copied().collect();
    u.sort_unstable();
    u.dedup();
    u
}

/// Runs the single-class subroutine on every class; on success returns the
/// assembled system, otherwise the index of the first rejected class.
fn realize_classes(
    data: &NetReactionData,
    classes: &[Vec<usize>],
) -> Result<std::result::Result<MassActionSystem, usize>> {
    let mut edges: Vec<((usize, usize), Rational)> = Vec::new();
    for (p, class) in classes.iter().enumerate() {
        let out = realize_single_class(&data.restrict(class))?;
        let Some(sys) = out.realization else {
            return Ok(Err(p));
        };
        for (&(a, b), k) in sys.graph().edges().iter().zip(sys.rates()) {
            edges.push(((class[a], class[b]), k.clone()));
        }
    }
    edges.sort_by_key(|e| e.0);
    let (pairs, rates): (Vec<_>, Vec<_>) = edges.into_iter().unzip();
    let graph = EGraph::new(data.dim(), data.sources().columns(), pairs)?;
    Ok(Ok(MassActionSystem::new(graph, rates)?))
}

fn sorted_classes(mut classes: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    for c in classes.iter_mut() {
        c.sort_unstable();
    }
    classes.sort_by_key(|c| c[0]);
    classes
}

pub fn realize_def_one(data: &NetReactionData) -> Result<RealizationOutcome> {
    let m = data.len();
    let w = data.net_vectors();
    let kernel_dim = nullity(w);
    let rays = extreme_rays(w);
    let r = rays.len();
    let supports: Vec<Vec<usize>> = rays.iter().map(Ray::support).collect();
    let mut diagnostics = Diagnostics {
        kernel_dim,
        rays: rays.clone(),
        attempted_pairs: Vec::new(),
        rejection: None,
    };
    let reject = |mut diagnostics: Diagnostics, why: Rejection| {
        diagnostics.rejection = Some(why);
        Ok(RealizationOutcome {
            flag: Flag::None,
            realization: None,
            diagnostics,
        })
    };

    if r < 2 {
        return reject(diagnostics, Rejection::TooFewRays { r });
    }
    let mut covered = vec![false; m];
    for s in &supports {
        for &i in s {
            covered[i] = true;
        }
    }
    let missing: Vec<usize> = (0..m).filter(|&i| !covered[i]).collect();
    if !missing.is_empty() {
        return reject(diagnostics, Rejection::UncoveredSupport { missing });
    }

    let accept = |diagnostics: Diagnostics,
                  system: MassActionSystem,
                  classes: Vec<Vec<usize>>,
                  kind: RealizationType| {
        let out = RealizationOutcome {
            flag: kind.flag(),
            realization: Some(Realization {
                system,
                linkage_classes: sorted_classes(classes),
                kind,
            }),
            diagnostics,
        };
        if !verify_outcome(data, &out) {
            return Err(Error::VerificationFailed(format!(
                "flag {} realization does not certify",
                kind.flag().code()
            )));
        }
        Ok(out)
    };

    if r == 2 {
        let all: Vec<usize> = (0..m).collect();
        return match realize_classes(data, std::slice::from_ref(&all))? {
            Ok(sys) => accept(diagnostics, sys, vec![all], RealizationType::SingleClass),
            Err(_) => reject(diagnostics, Rejection::SingleClassRejected),
        };
    }

    for i in 0..r - 1 {
        for j in i + 1..r {
            let rest: Vec<Vec<usize>> = (0..r)
                .filter(|&p| p != i && p != j)
                .map(|p| supports[p].clone())
                .collect();
            let merged = union(&supports[i], &supports[j]);

            let (classes, kind) = if r == kernel_dim && {
                let mut blocks = rest.clone();
                blocks.push(merged.clone());
                pairwise_disjoint_cover(&blocks, m)
            } {
                let mut classes = rest;
                classes.push(merged);
                (classes, RealizationType::TypeI)
            } else if r == kernel_dim + 1 && pairwise_disjoint_cover(&rest, m) {
                (rest, RealizationType::TypeII)
            } else {
                diagnostics.attempted_pairs.push(PairAttempt {
                    i,
                    j,
                    classes: Vec::new(),
                    result: PairResult::NoPartition,
                });
                continue;
            };

            if kind == RealizationType::TypeII {
                if let Some(p) = classes
                    .iter()
                    .position(|c| nullity(&w.select_columns(c)) != 1)
                {
                    diagnostics.attempted_pairs.push(PairAttempt {
                        i,
                        j,
                        classes,
                        result: PairResult::KernelDimension { class: p },
                    });
                    continue;
                }
            }

            match realize_classes(data, &classes)? {
                Ok(sys) => {
                    diagnostics.attempted_pairs.push(PairAttempt {
                        i,
                        j,
                        classes: classes.clone(),
                        result: PairResult::Accepted,
                    });
                    return accept(diagnostics, sys, classes, kind);
                }
                Err(p) => diagnostics.attempted_pairs.push(PairAttempt {
                    i,
                    j,
                    classes,
                    result: PairResult::ClassRejected { class: p },
                }),
            }
        }
    }
    reject(diagnostics, Rejection::PairsExhausted)
}

/// Independent certificate check of a positive outcome.
pub fn verify_outcome(data: &NetReactionData, out: &RealizationOutcome) -> bool {
    let Some(real) = &out.realization else {
        return false;
    };
    if out.flag != real.kind.flag() {
        return false;
    }
    let g = real.system.graph();
    if !is_weakly_reversible(g) {
        return false;
    }
    let report = structure_report(g);
    if report.deficiency != 1 || report.linkage_classes != real.linkage_classes {
        return false;
    }
    let type_ok = match real.kind {
        RealizationType::SingleClass => report.linkage_classes.len() == 1,
        RealizationType::TypeI => report.class_deficiency_sum() == 1,
        RealizationType::TypeII => report.class_deficiency_sum() == 0,
    };
    if !type_ok {
        return false;
    }
    net_reaction_data(&real.system) == *data
}
