//! JSON file formats. Vertex and class indices are 0-based throughout.
//!
//! Numbers are JSON integers or strings holding an integer or `p/q`.

use std::str::FromStr;

use crn_realize_core::{EGraph, MassActionSystem, NetReactionData, RatMatrix, RatVector, Rational};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Number {
    Int(i64),
    Text(String),
}

impl Number {
    pub fn to_rational(&self) -> Result<Rational, CliError> {
        match self {
            Number::Int(v) => Ok(Rational::from_integer((*v).into())),
            Number::Text(s) => Rational::from_str(s.trim())
                .map_err(|_| CliError::Format(format!("not an integer or p/q: {s:?}"))),
        }
    }

    pub fn from_rational(x: &Rational) -> Self {
        if x.is_integer() {
            Self::from_integer(&x.to_integer())
        } else {
            Number::Text(x.to_string())
        }
    }

    pub fn from_integer(x: &BigInt) -> Self {
        x.to_i64()
            .map_or_else(|| Number::Text(x.to_string()), Number::Int)
    }
}

fn rows_to_matrix(
    name: &str,
    rows: &[Vec<Number>],
    n: usize,
    m: usize,
) -> Result<RatMatrix, CliError> {
    if rows.len() != n {
        return Err(CliError::Format(format!(
            "{name} has {} rows, expected n = {n}",
            rows.len()
        )));
    }
    let mut out = Vec::with_capacity(n);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != m {
            return Err(CliError::Format(format!(
                "{name} row {i} has {} entries, expected m = {m}",
                row.len()
            )));
        }
        out.push(
            row.iter()
                .map(Number::to_rational)
                .collect::<Result<RatVector, _>>()?,
        );
    }
    Ok(RatMatrix::from_rows(out, m)?)
}

fn matrix_to_rows(a: &RatMatrix) -> Vec<Vec<Number>> {
    (0..a.rows())
        .map(|i| a.row(i).iter().map(Number::from_rational).collect())
        .collect()
}

/// `{"n", "m", "Y", "W"}` with `n x m` row-major arrays.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub n: usize,
    pub m: usize,
    #[serde(rename = "Y")]
    pub y: Vec<Vec<Number>>,
    #[serde(rename = "W")]
    pub w: Vec<Vec<Number>>,
}

impl MatrixFile {
    pub fn from_data(d: &NetReactionData) -> Self {
        Self {
            n: d.dim(),
            m: d.len(),
            y: matrix_to_rows(d.sources()),
            w: matrix_to_rows(d.net_vectors()),
        }
    }

    pub fn to_data(&self) -> Result<NetReactionData, CliError> {
        let y = rows_to_matrix("Y", &self.y, self.n, self.m)?;
        let w = rows_to_matrix("W", &self.w, self.n, self.m)?;
        Ok(NetReactionData::new(y, w)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeEntry {
    pub from: usize,
    pub to: usize,
    pub rate: Number,
}

/// `{"n", "vertices": [[...]], "edges": [{"from", "to", "rate"}]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetworkFile {
    pub n: usize,
    pub vertices: Vec<Vec<Number>>,
    pub edges: Vec<EdgeEntry>,
}

impl NetworkFile {
    pub fn from_system(sys: &MassActionSystem) -> Self {
        let g = sys.graph();
        Self {
            n: g.dim(),
            vertices: g
                .vertices()
                .iter()
                .map(|v| v.iter().map(Number::from_rational).collect())
                .collect(),
            edges: g
                .edges()
                .iter()
                .zip(sys.rates())
                .map(|(&(from, to), k)| EdgeEntry {
                    from,
                    to,
                    rate: Number::from_rational(k),
                })
                .collect(),
        }
    }

    pub fn to_system(&self) -> Result<MassActionSystem, CliError> {
        let mut vertices = Vec::with_capacity(self.vertices.len());
        for (i, v) in self.vertices.iter().enumerate() {
            if v.len() != self.n {
                return Err(CliError::Format(format!(
                    "vertex {i} has {} coordinates, expected n = {}",
                    v.len(),
                    self.n
                )));
            }
            vertices.push(
                v.iter()
                    .map(Number::to_rational)
                    .collect::<Result<RatVector, _>>()?,
            );
        }
        let edges = self.edges.iter().map(|e| (e.from, e.to)).collect();
        let rates = self
            .edges
            .iter()
            .map(|e| e.rate.to_rational())
            .collect::<Result<Vec<_>, _>>()?;
        let graph = EGraph::new(self.n, vertices, edges)?;
        Ok(MassActionSystem::new(graph, rates)?)
    }
}

/// Parses `"3,1;2,2"` into vertices.
pub fn parse_vertex_list(s: &str) -> Result<Vec<RatVector>, CliError> {
    s.split(';')
        .filter(|v| !v.trim().is_empty())
        .map(|v| {
            v.split(',')
                .map(|x| {
                    Rational::from_str(x.trim())
                        .map_err(|_| CliError::Format(format!("bad coordinate {x:?} in {v:?}")))
                })
                .collect()
        })
        .collect()
}

/// Appends a zero net vector for each extra vertex.
pub fn with_extra_vertices(
    d: &NetReactionData,
    extra: &[RatVector],
) -> Result<NetReactionData, CliError> {
    let n = d.dim();
    let mut ys = d.sources().columns();
    let mut ws = d.net_vectors().columns();
    for v in extra {
        if v.len() != n {
            return Err(CliError::Format(format!(
                "extra vertex has {} coordinates, expected {n}",
                v.len()
            )));
        }
        ys.push(v.clone());
        ws.push(vec![Rational::from_integer(0.into()); n]);
    }
    Ok(NetReactionData::new(
        RatMatrix::from_columns(&ys, n)?,
        RatMatrix::from_columns(&ws, n)?,
    )?)
}

/// Columns reordered lexicographically by source vector.
pub fn sorted_by_source(d: &NetReactionData) -> NetReactionData {
    let ys = d.sources().columns();
    let mut idx: Vec<usize> = (0..d.len()).collect();
    idx.sort_by(|&a, &b| ys[a].cmp(&ys[b]));
    d.restrict(&idx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers() {
        let v: Vec<Number> = serde_json::from_str(r#"[3, "-1/2", " 4 "]"#).unwrap();
        let r: Vec<String> = v
            .iter()
            .map(|x| x.to_rational().unwrap().to_string())
            .collect();
        assert_eq!(r, ["3", "-1/2", "4"]);
        assert!(Number::Text("1/0".into()).to_rational().is_err());
        assert!(Number::Text("x".into()).to_rational().is_err());
        assert_eq!(
            serde_json::to_string(&Number::from_rational(&r_("6/4"))).unwrap(),
            r#""3/2""#
        );
        assert_eq!(
            serde_json::to_string(&Number::from_rational(&r_("-8/4"))).unwrap(),
            "-2"
        );
    }

    fn r_(s: &str) -> Rational {
        Rational::from_str(s).unwrap()
    }

    #[test]
    fn matrix_shapes_checked() {
        let bad = r#"{"n": 2, "m": 2, "Y": [[1, 2]], "W": [[1, -1], [0, 0]]}"#;
        let f: MatrixFile = serde_json::from_str(bad).unwrap();
        assert!(f.to_data().is_err());
        let dup = r#"{"n": 1, "m": 2, "Y": [[1, 1]], "W": [[1, -1]]}"#;
        let f: MatrixFile = serde_json::from_str(dup).unwrap();
        assert!(f.to_data().is_err());
    }

    #[test]
    fn extra_vertices_and_sorting() {
        let f: MatrixFile = serde_json::from_str(
            r#"{"n": 2, "m": 4, "Y": [[1, 2, 3, 3], [0, 0, 0, 2]], "W": [[-1, 1, 0, 0], [0, 0, 1, -1]]}"#,
        )
        .unwrap();
        let d = f.to_data().unwrap();
        let extra = parse_vertex_list("3,1").unwrap();
        let d5 = sorted_by_source(&with_extra_vertices(&d, &extra).unwrap());
        assert_eq!(
            d5.sources(),
            &RatMatrix::from_i64(&[&[1, 2, 3, 3, 3], &[0, 0, 0, 1, 2]])
        );
        assert_eq!(d5.net_vector(3), vec![r_("0"), r_("0")]);
        assert!(with_extra_vertices(&d, &parse_vertex_list("1,0").unwrap()).is_err());
        assert!(with_extra_vertices(&d, &parse_vertex_list("1").unwrap()).is_err());
        assert!(parse_vertex_list("1,a").is_err());
    }
}
