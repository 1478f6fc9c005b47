//! JSON, DOT and plain-text renderings of results.

use std::fmt::Write as _;

use crn_realize_core::wr_def_one::{PairResult, Rejection};
use crn_realize_core::{MassActionSystem, NetReactionData, RealizationOutcome, StructureReport};
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::formats::{NetworkFile, Number};

/// Bumped whenever a field is renamed, removed or changes meaning.
pub const SCHEMA_VERSION: u32 = 1;

fn rejection_json(r: &Rejection) -> Value {
    let kind = match r {
        Rejection::TooFewRays { .. } => "too_few_rays",
        Rejection::UncoveredSupport { .. } => "uncovered_support",
        Rejection::SingleClassRejected => "single_class_rejected",
        Rejection::PairsExhausted => "pairs_exhausted",
    };
    let mut v = json!({ "kind": kind, "detail": r.to_string() });
    match r {
        Rejection::TooFewRays { r } => v["r"] = json!(r),
        Rejection::UncoveredSupport { missing } => v["missing"] = json!(missing),
        _ => {}
    }
    v
}

fn pair_result_json(r: &PairResult) -> Value {
    match r {
        PairResult::NoPartition => json!({ "kind": "no_partition" }),
        PairResult::KernelDimension { class } => {
            json!({ "kind": "kernel_dimension", "class": class })
        }
        PairResult::ClassRejected { class } => json!({ "kind": "class_rejected", "class": class }),
        PairResult::Accepted => json!({ "kind": "accepted" }),
    }
}

pub fn outcome_json(data: &NetReactionData, out: &RealizationOutcome) -> Value {
    let d = &out.diagnostics;
    let realization = out.realization.as_ref().map(|r| {
        let mut net =
            serde_json::to_value(NetworkFile::from_system(&r.system)).expect("serializable");
        net["classes"] = json!(r.linkage_classes);
        net
    });
    json!({
        "schema_version": SCHEMA_VERSION,
        "flag": out.flag.code(),
        "type": out.realization.as_ref().map(|r| r.kind.name()),
        "message": out.flag.message(),
        "n": data.dim(),
        "m": data.len(),
        "kernel_dim": d.kernel_dim,
        "r": d.rays.len(),
        "rays": d.rays.iter()
            .map(|ray| ray.coords().iter().map(Number::from_integer).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
        "attempted_pairs": d.attempted_pairs.iter().map(|p| json!({
            "i": p.i,
            "j": p.j,
            "classes": p.classes,
            "result": pair_result_json(&p.result),
        })).collect::<Vec<_>>(),
        "rejection": d.rejection.as_ref().map(rejection_json),
        "classes": out.realization.as_ref().map(|r| &r.linkage_classes),
        "realization": realization,
    })
}

pub fn structure_json(sys: &MassActionSystem, report: &StructureReport) -> Value {
    let l = report.linkage_classes.len();
    let kind = match (
        report.weakly_reversible,
        report.deficiency,
        report.class_deficiency_sum(),
    ) {
        (true, 1, _) if l == 1 => Some("SingleClass"),
        (true, 1, 1) => Some("TypeI"),
        (true, 1, 0) => Some("TypeII"),
        _ => None,
    };
    json!({
        "schema_version": SCHEMA_VERSION,
        "n": sys.graph().dim(),
        "m": report.vertex_count(),
        "linkage_classes": report.linkage_classes,
        "terminal_components": report.terminal_components,
        "stoichiometric_dim": report.stoichiometric_dim,
        "deficiency": report.deficiency,
        "class_deficiencies": report.class_deficiencies,
        "weakly_reversible": report.weakly_reversible,
        "deficiency_one_type": kind,
    })
}

/// Complex notation: `(2, 0, 1)` becomes `2X1+X3`, the origin `0`.
pub fn complex_label(v: &[crn_realize_core::Rational]) -> String {
    let parts: Vec<String> = v
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| {
            if c.is_one() {
                format!("X{}", i + 1)
            } else if c.is_negative() || !c.is_integer() {
                format!("({c})X{}", i + 1)
            } else {
                format!("{c}X{}", i + 1)
            }
        })
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join("+")
    }
}

/// One cluster per class; vertex `i` is node `v<i>`.
pub fn dot(sys: &MassActionSystem, classes: &[Vec<usize>]) -> String {
    let g = sys.graph();
    let mut class_of = vec![0; g.vertex_count()];
    for (c, members) in classes.iter().enumerate() {
        for &v in members {
            class_of[v] = c;
        }
    }
    let mut s = String::from("digraph realization {\n  rankdir=LR;\n  node [shape=box];\n");
    for (c, members) in classes.iter().enumerate() {
        let _ = writeln!(s, "  subgraph cluster_{c} {{\n    label=\"L{}\";", c + 1);
        for &v in members {
            let _ = writeln!(
                s,
                "    v{v} [label=\"{}\"];",
                complex_label(&g.vertices()[v])
            );
        }
        for (&(a, b), k) in g.edges().iter().zip(sys.rates()) {
            if class_of[a] == c {
                let _ = writeln!(s, "    v{a} -> v{b} [label=\"{k}\"];");
            }
        }
        s.push_str("  }\n");
    }
    s.push_str("}\n");
    s
}

pub fn outcome_text(out: &RealizationOutcome) -> String {
    let d = &out.diagnostics;
    let mut s = String::new();
    let _ = writeln!(s, "flag {}: {}", out.flag.code(), out.flag.message());
    let _ = writeln!(s, "dim ker W = {}, r = {}", d.kernel_dim, d.rays.len());
    for (i, ray) in d.rays.iter().enumerate() {
        let c: Vec<String> = ray.coords().iter().map(ToString::to_string).collect();
        let _ = writeln!(s, "  d{} = ({})", i + 1, c.join(", "));
    }
    for p in &d.attempted_pairs {
        let _ = writeln!(
            s,
            "  pair (d{}, d{}): {:?} {:?}",
            p.i + 1,
            p.j + 1,
            p.classes,
            p.result
        );
    }
    if let Some(r) = &d.rejection {
        let _ = writeln!(s, "rejected: {r}");
    }
    if let Some(r) = &out.realization {
        let g = r.system.graph();
        for (c, members) in r.linkage_classes.iter().enumerate() {
            let _ = writeln!(s, "L{}: {:?}", c + 1, members);
        }
        for (&(a, b), k) in g.edges().iter().zip(r.system.rates()) {
            let _ = writeln!(
                s,
                "  {} -> {}  k = {k}",
                complex_label(&g.vertices()[a]),
                complex_label(&g.vertices()[b])
            );
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crn_realize_core::network::{linkage_classes, system_from_i64};
    use crn_realize_core::ratmat::{rat_vec, ratio};

    #[test]
    fn labels() {
        assert_eq!(complex_label(&rat_vec(&[0, 0])), "0");
        assert_eq!(complex_label(&rat_vec(&[1, 2])), "X1+2X2");
        assert_eq!(complex_label(&[ratio(1, 2)]), "(1/2)X1");
    }

    #[test]
    fn dot_clusters() {
        let sys = system_from_i64(
            &[&[0, 0], &[1, 0], &[0, 1], &[1, 1]],
            &[(0, 1, 1), (1, 0, 2), (2, 3, 3), (3, 2, 4)],
        )
        .unwrap();
        let d = dot(&sys, &linkage_classes(sys.graph()));
        assert_eq!(d.matches("subgraph cluster_").count(), 2);
        assert!(d.contains("v1 -> v0 [label=\"2\"];"));
        assert!(d.contains("v3 [label=\"X1+X2\"];"));
    }
}
