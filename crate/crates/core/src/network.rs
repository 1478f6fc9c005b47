//! Reaction networks embedded in rational n-space and their mass-action
//! systems.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::ratmat::{rank, RatMatrix, RatVector, Rational};

/// Directed graph whose vertices are distinct points of rational n-space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EGraph {
    dim: usize,
    vertices: Vec<RatVector>,
    edges: Vec<(usize, usize)>,
}

impl EGraph {
    pub fn new(dim: usize, vertices: Vec<RatVector>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for (i, v) in vertices.iter().enumerate() {
            if v.len() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "vertex {i} has {} coordinates, expected {dim}",
                    v.len()
                )));
            }
            if !seen.insert(v) {
                return Err(Error::InvalidGraph(format!("vertex {i} is a duplicate")));
            }
        }
        let mut edge_set = BTreeSet::new();
        let mut touched = vec![false; vertices.len()];
        for &(a, b) in &edges {
            if a >= vertices.len() || b >= vertices.len() {
                return Err(Error::InvalidGraph(format!("edge {a}->{b} out of range")));
            }
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {a}")));
            }
            if !edge_set.insert((a, b)) {
                return Err(Error::InvalidGraph(format!("duplicate edge {a}->{b}")));
            }
            touched[a] = true;
            touched[b] = true;
        }
        if let Some(i) = touched.iter().position(|t| !t) {
            return Err(Error::InvalidGraph(format!("vertex {i} is isolated")));
        }
        Ok(Self {
            dim,
            vertices,
            edges,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[RatVector] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Matrix whose columns are the vertices.
    pub fn vertex_matrix(&self) -> RatMatrix {
        RatMatrix::from_columns(&self.vertices, self.dim).expect("vertex lengths checked")
    }

    pub fn reaction_vector(&self, edge: usize) -> RatVector {
        let (a, b) = self.edges[edge];
        self.vertices[b]
            .iter()
            .zip(&self.vertices[a])
            .map(|(y, x)| y - x)
            .collect()
    }

    /// `n x |E|` matrix of reaction vectors `y' - y`.
    pub fn reaction_matrix(&self) -> RatMatrix {
        let cols: Vec<RatVector> = (0..self.edges.len())
            .map(|e| self.reaction_vector(e))
            .collect();
        RatMatrix::from_columns(&cols, self.dim).expect("vertex lengths checked")
    }

    fn successors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
        }
        adj
    }
}

/// An E-graph with a strictly positive rate on every edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MassActionSystem {
    graph: EGraph,
    rates: Vec<Rational>,
}

impl MassActionSystem {
    /// `rates[e]` belongs to `graph.edges()[e]`.
    pub fn new(graph: EGraph, rates: Vec<Rational>) -> Result<Self> {
        if rates.len() != graph.edges.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} rates for {} edges",
                rates.len(),
                graph.edges.len()
            )));
        }
        if let Some(e) = rates.iter().position(|k| !k.is_positive()) {
            return Err(Error::InvalidInput(format!(
                "rate of edge {e} is not positive"
            )));
        }
        Ok(Self { graph, rates })
    }

    pub fn graph(&self) -> &EGraph {
        &self.graph
    }

    pub fn rates(&self) -> &[Rational] {
        &self.rates
    }

    pub fn rate(&self, from: usize, to: usize) -> Option<&Rational> {
        self.graph
            .edges
            .iter()
            .position(|&e| e == (from, to))
            .map(|e| &self.rates[e])
    }

    pub fn into_parts(self) -> (EGraph, Vec<Rational>) {
        (self.graph, self.rates)
    }
}

/// Source vertices and the net reaction vector at each of them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetReactionData {
    ys: RatMatrix,
    w: RatMatrix,
}

impl NetReactionData {
    pub fn new(ys: RatMatrix, w: RatMatrix) -> Result<Self> {
        if ys.rows() != w.rows() || ys.cols() != w.cols() {
            return Err(Error::DimensionMismatch(format!(
                "source matrix is {}x{} but net reaction matrix is {}x{}",
                ys.rows(),
                ys.cols(),
                w.rows(),
                w.cols()
            )));
        }
        let mut seen = BTreeSet::new();
        for (j, col) in ys.columns().into_iter().enumerate() {
            if !seen.insert(col) {
                return Err(Error::InvalidInput(format!(
                    "source vertex {j} is a duplicate"
                )));
            }
        }
        Ok(Self { ys, w })
    }

    pub fn sources(&self) -> &RatMatrix {
        &self.ys
    }

    pub fn net_vectors(&self) -> &RatMatrix {
        &self.w
    }

    pub fn dim(&self) -> usize {
        self.ys.rows()
    }

    pub fn len(&self) -> usize {
        self.ys.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.ys.cols() == 0
    }

    pub fn source(&self, i: usize) -> RatVector {
        self.ys.column(i)
    }

    pub fn net_vector(&self, i: usize) -> RatVector {
        self.w.column(i)
    }

    /// Keeps the given columns, in the given order.
    pub fn restrict(&self, idx: &[usize]) -> NetReactionData {
        NetReactionData {
            ys: self.ys.select_columns(idx),
            w: self.w.select_columns(idx),
        }
    }
}

/// All strongly connected components and the terminal ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SccDecomposition {
    pub components: Vec<Vec<usize>>,
    pub terminal: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureReport {
    pub linkage_classes: Vec<Vec<usize>>,
    pub terminal_components: Vec<Vec<usize>>,
    /// Dimension of the stoichiometric subspace.
    pub stoichiometric_dim: usize,
    pub deficiency: usize,
    pub class_deficiencies: Vec<usize>,
    pub weakly_reversible: bool,
}

impl StructureReport {
    pub fn vertex_count(&self) -> usize {
        self.linkage_classes.iter().map(Vec::len).sum()
    }

    pub fn class_deficiency_sum(&self) -> usize {
        self.class_deficiencies.iter().sum()
    }
}

fn sort_blocks(mut blocks: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    for b in blocks.iter_mut() {
        b.sort_unstable();
    }
    blocks.sort_by_key(|b| b[0]);
    blocks
}

/// Connected components of the underlying undirected graph.
pub fn linkage_classes(g: &EGraph) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for &(a, b) in &g.edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    let mut blocks: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in 0..n {
        let r = find(&mut parent, v);
        blocks.entry(r).or_default().push(v);
    }
    sort_blocks(blocks.into_values().collect())
}

/// Tarjan's algorithm on an adjacency list. Components are returned sorted
/// by their smallest member.
pub(crate) fn tarjan(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    struct State<'a> {
        adj: &'a [Vec<usize>],
        index: Vec<Option<usize>>,
        low: Vec<usize>,
        on_stack: Vec<bool>,
        stack: Vec<usize>,
        next: usize,
        out: Vec<Vec<usize>>,
    }

    fn visit(s: &mut State<'_>, v: usize) {
        s.index[v] = Some(s.next);
        s.low[v] = s.next;
        s.next += 1;
        s.stack.push(v);
        s.on_stack[v] = true;
        for &w in &s.adj[v] {
            match s.index[w] {
                None => {
                    visit(s, w);
                    s.low[v] = s.low[v].min(s.low[w]);
                }
                Some(iw) if s.on_stack[w] => s.low[v] = s.low[v].min(iw),
                Some(_) => {}
            }
        }
        if Some(s.low[v]) == s.index[v] {
            let mut comp = Vec::new();
            while let Some(w) = s.stack.pop() {
                s.on_stack[w] = false;
                comp.push(w);
                if w == v {
                    break;
                }
            }
            s.out.push(comp);
        }
    }

    let n = adj.len();
    let mut s = State {
        adj,
        index: vec![None; n],
        low: vec![0; n],
        on_stack: vec![false; n],
        stack: Vec::new(),
        next: 0,
        out: Vec::new(),
    };
    for v in 0..n {
        if s.index[v].is_none() {
            visit(&mut s, v);
        }
    }
    sort_blocks(s.out)
}

pub(crate) fn terminal_of(adj: &[Vec<usize>], components: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut comp_of = vec![0; adj.len()];
    for (c, comp) in components.iter().enumerate() {
        for &v in comp {
            comp_of[v] = c;
        }
    }
    components
        .iter()
        .enumerate()
        .filter(|(c, comp)| {
            comp.iter()
                .all(|&v| adj[v].iter().all(|&w| comp_of[w] == *c))
        })
        .map(|(_, comp)| comp.clone())
        .collect()
}

pub fn strongly_connected_components(g: &EGraph) -> SccDecomposition {
    let adj = g.successors();
    let components = tarjan(&adj);
    let terminal = terminal_of(&adj, &components);
    SccDecomposition {
        components,
        terminal,
    }
}

/// Every linkage class is strongly connected.
pub fn is_weakly_reversible(g: &EGraph) -> bool {
    strongly_connected_components(g).components == linkage_classes(g)
}

pub fn structure_report(g: &EGraph) -> StructureReport {
    let classes = linkage_classes(g);
    let sccs = strongly_connected_components(g);
    let s = rank(&g.reaction_matrix());
    let m = g.vertex_count();
    let deficiency = m - classes.len() - s;
    let mut class_of = vec![0; m];
    for (c, block) in classes.iter().enumerate() {
        for &v in block {
            class_of[v] = c;
        }
    }
    let class_deficiencies = classes
        .iter()
        .enumerate()
        .map(|(c, block)| {
            let cols: Vec<RatVector> = g
                .edges
                .iter()
                .enumerate()
                .filter(|(_, &(a, _))| class_of[a] == c)
                .map(|(e, _)| g.reaction_vector(e))
                .collect();
            let dim_s = rank(&RatMatrix::from_columns(&cols, g.dim).expect("shape"));
            block.len() - 1 - dim_s
        })
        .collect();
    let weakly_reversible = sccs.components == classes;
    StructureReport {
        linkage_classes: classes,
        terminal_components: sccs.terminal,
        stoichiometric_dim: s,
        deficiency,
        class_deficiencies,
        weakly_reversible,
    }
}

/// Kirchhoff matrix from raw edges: `[A]_{ji} = k_{i->j}`, diagonal is the
/// negative total outflow.
pub(crate) fn kirchhoff_from_edges(
    m: usize,
    edges: &[(usize, usize)],
    rates: &[Rational],
) -> RatMatrix {
    let mut a = RatMatrix::zeros(m, m);
    for (&(i, j), k) in edges.iter().zip(rates) {
        a[(j, i)] += k;
        a[(i, i)] -= k;
    }
    a
}

/// Negative transpose of the rate-weighted Laplacian; columns sum to zero.
pub fn kirchhoff_matrix(sys: &MassActionSystem) -> RatMatrix {
    kirchhoff_from_edges(sys.graph.vertex_count(), &sys.graph.edges, &sys.rates)
}

/// One column per vertex (in vertex order); vertices that are not sources
/// get a zero net reaction vector.
pub fn net_reaction_data(sys: &MassActionSystem) -> NetReactionData {
    let g = &sys.graph;
    let mut w = RatMatrix::zeros(g.dim, g.vertex_count());
    for (e, (&(i, _), k)) in g.edges.iter().zip(&sys.rates).enumerate() {
        for (r, x) in g.reaction_vector(e).iter().enumerate() {
            if !x.is_zero() {
                w[(r, i)] += k * x;
            }
        }
    }
    NetReactionData {
        ys: g.vertex_matrix(),
        w,
    }
}

fn integer_exponent(y: &Rational) -> Option<i32> {
    if !y.is_integer() {
        return None;
    }
    y.to_integer().to_i32()
}

/// `x^y` for an integer exponent vector.
pub fn monomial(x: &[Rational], y: &[Rational]) -> Result<Rational> {
    let mut out = Rational::one();
    for (xi, yi) in x.iter().zip(y) {
        let e = integer_exponent(yi).ok_or_else(|| {
            Error::InvalidInput(format!("exponent {yi} is not a machine-size integer"))
        })?;
        out *= num_traits::pow::Pow::pow(xi, e);
    }
    Ok(out)
}

/// Right-hand side of the mass-action ODE at a strictly positive point.
/// Vertex coordinates must be integers.
pub fn mass_action_rhs(sys: &MassActionSystem, x: &[Rational]) -> Result<RatVector> {
    let g = &sys.graph;
    if x.len() != g.dim {
        return Err(Error::DimensionMismatch(format!(
            "point has {} coordinates, expected {}",
            x.len(),
            g.dim
        )));
    }
    if x.iter().any(|xi| !xi.is_positive()) {
        return Err(Error::InvalidInput(
            "state must be strictly positive".into(),
        ));
    }
    let mut out = vec![Rational::zero(); g.dim];
    for (e, (&(i, _), k)) in g.edges.iter().zip(&sys.rates).enumerate() {
        let flux = k * monomial(x, &g.vertices[i])?;
        for (o, d) in out.iter_mut().zip(g.reaction_vector(e)) {
            *o += &flux * d;
        }
    }
    Ok(out)
}

fn net_vector_map(sys: &MassActionSystem) -> BTreeMap<RatVector, RatVector> {
    let data = net_reaction_data(sys);
    (0..data.len())
        .map(|i| (data.source(i), data.net_vector(i)))
        .filter(|(_, w)| w.iter().any(|x| !x.is_zero()))
        .collect()
}

/// Identical net reaction vectors at every vertex of either system.
pub fn dynamically_equivalent(a: &MassActionSystem, b: &MassActionSystem) -> bool {
    a.graph.dim == b.graph.dim && net_vector_map(a) == net_vector_map(b)
}

/// `{v_i - v_0}` linearly independent.
pub fn affinely_independent(vertices: &[RatVector]) -> bool {
    let Some(first) = vertices.first() else {
        return true;
    };
    let diffs: Vec<RatVector> = vertices[1..]
        .iter()
        .map(|v| v.iter().zip(first).map(|(a, b)| a - b).collect())
        .collect();
    match RatMatrix::from_columns(&diffs, first.len()) {
        Ok(d) => rank(&d) == diffs.len(),
        Err(_) => false,
    }
}

/// Builds a system from `(from, to, rate)` triples on integer vertices.
/// Intended for tests and examples.
pub fn system_from_i64(
    vertices: &[&[i64]],
    edges: &[(usize, usize, i64)],
) -> Result<MassActionSystem> {
    let dim = vertices.first().map_or(0, |v| v.len());
    let vs = vertices.iter().map(|v| crate::ratmat::rat_vec(v)).collect();
    let g = EGraph::new(dim, vs, edges.iter().map(|&(a, b, _)| (a, b)).collect())?;
    MassActionSystem::new(
        g,
        edges
            .iter()
            .map(|&(_, _, k)| Rational::from_integer(BigInt::from(k)))
            .collect(),
    )
}
