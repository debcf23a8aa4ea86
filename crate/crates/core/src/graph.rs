//! Graphs, cospectrality, and the length-two walk inflation to order-3
//! hypermatrices.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypermatrix::{Hypermatrix, Permutation, ShapeError};
use crate::linalg::Eliminate;
use crate::power::{analyze_powers, Formulation, PowerError};
use crate::product::Convention;
use crate::scalar::{Backend, Fp, Modulus, Rational, Scalar, ScalarError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("line {line}: {message}")]
    EdgeList { line: usize, message: String },
    #[error("graph6 byte {position}: {message}")]
    Graph6 { position: usize, message: String },
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("graph6 needs an undirected loop-free graph")]
    NotSimple,
    #[error(transparent)]
    Shape(#[from] ShapeError),
    #[error(transparent)]
    Power(#[from] PowerError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphFormat {
    Edgelist,
    Graph6,
}

impl FromStr for GraphFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "edgelist" => Ok(GraphFormat::Edgelist),
            "graph6" => Ok(GraphFormat::Graph6),
            other => Err(format!("unknown graph format `{other}` (edgelist|graph6)")),
        }
    }
}

/// Directed graph on vertices `0..n`. Undirected inputs are stored with
/// both orientations of every edge.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
    undirected: bool,
}

/// A parsed graph plus non-fatal diagnostics (duplicate edges).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Loaded {
    pub graph: Graph,
    pub warnings: Vec<String>,
}

impl Graph {
    pub fn empty(n: usize, undirected: bool) -> Graph {
        Graph {
            n,
            edges: BTreeSet::new(),
            undirected,
        }
    }

    /// Builds a graph from an edge list; undirected graphs get both
    /// orientations. Duplicates are silently merged.
    pub fn from_edges(n: usize, edges: &[(usize, usize)], undirected: bool) -> Result<Graph, GraphError> {
        let mut g = Graph::empty(n, undirected);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Adds `u → v` (and `v → u` if undirected). Returns `false` if the
    /// edge was already present.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<bool, GraphError> {
        for x in [u, v] {
            if x >= self.n {
                return Err(GraphError::VertexOutOfRange { vertex: x, n: self.n });
            }
        }
        let fresh = self.edges.insert((u, v));
        if self.undirected {
            self.edges.insert((v, u));
        }
        Ok(fresh)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_undirected(&self) -> bool {
        self.undirected
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u, v))
    }

    /// Directed edges in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// The graph `σG` with edges `(σ(u), σ(v))`.
    pub fn relabel(&self, sigma: &Permutation) -> Result<Graph, GraphError> {
        if sigma.len() != self.n {
            return Err(ShapeError::PermutationSize {
                perm: sigma.len(),
                side: self.n,
            }
            .into());
        }
        Ok(Graph {
            n: self.n,
            edges: self.edges.iter().map(|&(u, v)| (sigma.apply(u), sigma.apply(v))).collect(),
            undirected: self.undirected,
        })
    }

    /// 0/1 adjacency matrix with `M[u,v] = 1` iff `u → v`.
    pub fn adjacency<S: Scalar>(&self, ctx: S::Context) -> Result<Hypermatrix<S>, GraphError> {
        let one = S::one(&ctx);
        let zero = S::zero(&ctx);
        Ok(Hypermatrix::from_fn(vec![self.n, self.n], ctx, |i| {
            if self.has_edge(i[0], i[1]) {
                one.clone()
            } else {
                zero.clone()
            }
        })?)
    }

    fn adjacency_int(&self) -> Vec<Vec<BigInt>> {
        (0..self.n)
            .map(|u| {
                (0..self.n)
                    .map(|v| BigInt::from(u8::from(self.has_edge(u, v))))
                    .collect()
            })
            .collect()
    }

    /// Random graph where each candidate edge is present with probability
    /// `density`. Undirected graphs have no self-loops.
    pub fn random<R: Rng + ?Sized>(n: usize, density: f64, undirected: bool, rng: &mut R) -> Graph {
        let mut g = Graph::empty(n, undirected);
        for u in 0..n {
            for v in 0..n {
                let candidate = if undirected { u < v } else { u != v };
                if candidate && rng.gen_bool(density) {
                    g.add_edge(u, v).expect("vertices in range");
                }
            }
        }
        g
    }

    /// Every simple undirected graph on `n` labelled vertices.
    pub fn all_undirected(n: usize) -> impl Iterator<Item = Graph> {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|v| (0..v).map(move |u| (u, v))).collect();
        assert!(pairs.len() < 64, "too many vertices to enumerate");
        (0u64..1 << pairs.len()).map(move |mask| {
            let mut g = Graph::empty(n, true);
            for (bit, &(u, v)) in pairs.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    g.add_edge(u, v).expect("vertices in range");
                }
            }
            g
        })
    }
}

// ---------------------------------------------------------------------------
// Loading

pub fn load_graph(text: &str, format: GraphFormat, undirected: bool) -> Result<Loaded, GraphError> {
    match format {
        GraphFormat::Edgelist => parse_edge_list(text, undirected),
        GraphFormat::Graph6 => Ok(Loaded {
            graph: decode_graph6(text.trim_end_matches(['\n', '\r']))?,
            warnings: Vec::new(),
        }),
    }
}

/// Lines `u v`; `#` starts a comment. An optional first line `n <count>`
/// fixes the vertex count (needed for isolated vertices); otherwise it is
/// one more than the largest index seen.
fn parse_edge_list(text: &str, undirected: bool) -> Result<Loaded, GraphError> {
    let mut declared = None;
    let mut raw = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let fields: Vec<&str> = body.split_whitespace().collect();
        let bad = |message: String| GraphError::EdgeList { line: lineno, message };
        if fields[0] == "n" {
            if declared.is_some() || !raw.is_empty() {
                return Err(bad("`n <count>` must be the first entry".into()));
            }
            let [_, count] = fields[..] else {
                return Err(bad("expected `n <count>`".into()));
            };
            declared = Some(count.parse::<usize>().map_err(|_| bad(format!("bad vertex count `{count}`")))?);
            continue;
        }
        let [u, v] = fields[..] else {
            return Err(bad(format!("expected `u v`, found `{body}`")));
        };
        let parse = |t: &str| t.parse::<usize>().map_err(|_| bad(format!("bad vertex `{t}`")));
        raw.push((lineno, parse(u)?, parse(v)?));
    }
    let n = match declared {
        Some(n) => n,
        None => raw.iter().map(|&(_, u, v)| u.max(v) + 1).max().unwrap_or(0),
    };
    let mut graph = Graph::empty(n, undirected);
    let mut warnings = Vec::new();
    for (line, u, v) in raw {
        match graph.add_edge(u, v) {
            Ok(true) => {}
            Ok(false) => warnings.push(format!("line {line}: duplicate edge {u} {v}")),
            Err(GraphError::VertexOutOfRange { vertex, n }) => {
                return Err(GraphError::EdgeList {
                    line,
                    message: format!("vertex {vertex} out of range for {n} vertices"),
                })
            }
            Err(e) => return Err(e),
        }
    }
    Ok(Loaded { graph, warnings })
}

const G6_HEADER: &str = ">>graph6<<";

fn g6_err(position: usize, message: impl Into<String>) -> GraphError {
    GraphError::Graph6 {
        position,
        message: message.into(),
    }
}

/// Decodes one graph6 string (optional `>>graph6<<` header).
pub fn decode_graph6(text: &str) -> Result<Graph, GraphError> {
    let offset = if text.starts_with(G6_HEADER) { G6_HEADER.len() } else { 0 };
    let bytes = &text.as_bytes()[offset..];
    let six = |i: usize| -> Result<u64, GraphError> {
        match bytes.get(i) {
            Some(&b) if (63..=126).contains(&b) => Ok(u64::from(b - 63)),
            Some(&b) => Err(g6_err(offset + i, format!("byte {b:#04x} outside 63..=126"))),
            None => Err(g6_err(offset + i, "unexpected end of input")),
        }
    };
    let (n, mut pos) = match bytes.first() {
        None => return Err(g6_err(offset, "empty input")),
        Some(126) if bytes.get(1) == Some(&126) => {
            let mut n = 0u64;
            for i in 2..8 {
                n = n << 6 | six(i)?;
            }
            (n, 8)
        }
        Some(126) => {
            let mut n = 0u64;
            for i in 1..4 {
                n = n << 6 | six(i)?;
            }
            (n, 4)
        }
        Some(_) => (six(0)?, 1),
    };
    let n = usize::try_from(n).map_err(|_| g6_err(offset, "vertex count too large"))?;
    let bits = n * n.saturating_sub(1) / 2;
    let needed = bits.div_ceil(6);
    if bytes.len() != pos + needed {
        return Err(g6_err(
            offset + bytes.len().min(pos + needed),
            format!("expected {needed} adjacency bytes for {n} vertices, found {}", bytes.len() - pos),
        ));
    }
    let mut graph = Graph::empty(n, true);
    let mut k = 0;
    let mut word = 0;
    for v in 1..n {
        for u in 0..v {
            if k % 6 == 0 {
                word = six(pos)?;
                pos += 1;
            }
            if word >> (5 - k % 6) & 1 == 1 {
                graph.add_edge(u, v)?;
            }
            k += 1;
        }
    }
    if k % 6 != 0 && word & ((1 << (6 - k % 6)) - 1) != 0 {
        return Err(g6_err(offset + pos - 1, "nonzero padding bits"));
    }
    Ok(graph)
}

/// Canonical graph6 text (no header) for an undirected loop-free graph.
pub fn encode_graph6(g: &Graph) -> Result<String, GraphError> {
    let symmetric = g.edges().all(|(u, v)| u != v && g.has_edge(v, u));
    if !symmetric {
        return Err(GraphError::NotSimple);
    }
    let mut out: Vec<u8> = Vec::new();
    let n = g.n() as u64;
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        out.extend((0..3).rev().map(|i| ((n >> (6 * i)) & 63) as u8 + 63));
    } else {
        out.extend([126, 126]);
        out.extend((0..6).rev().map(|i| ((n >> (6 * i)) & 63) as u8 + 63));
    }
    let mut word = 0u8;
    let mut k = 0;
    for v in 1..g.n() {
        for u in 0..v {
            word = word << 1 | u8::from(g.has_edge(u, v));
            k += 1;
            if k % 6 == 0 {
                out.push(word + 63);
                word = 0;
            }
        }
    }
    if k % 6 != 0 {
        out.push((word << (6 - k % 6)) + 63);
    }
    Ok(String::from_utf8(out).expect("graph6 bytes are ASCII"))
}

// ---------------------------------------------------------------------------
// Spectra

fn int_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    let mut c = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                c[i][j] += &a[i][k] * &b[k][j];
            }
        }
    }
    c
}

/// Coefficients `c_0..c_n` (ascending, `c_n = 1`) of `det(xI − M)`,
/// by Faddeev–LeVerrier; every division is exact for integer matrices.
pub fn charpoly(g: &Graph) -> Vec<BigInt> {
    let a = g.adjacency_int();
    let n = g.n();
    let mut c = vec![BigInt::zero(); n + 1];
    c[n] = BigInt::one();
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for k in 1..=n {
        m = int_mul(&a, &m);
        for (i, row) in m.iter_mut().enumerate() {
            row[i] += &c[n - k + 1];
        }
        let am = int_mul(&a, &m);
        let trace: BigInt = (0..n).map(|i| &am[i][i]).sum();
        c[n - k] = -trace / BigInt::from(k);
    }
    c
}

pub fn cospectral(g1: &Graph, g2: &Graph) -> bool {
    g1.n() == g2.n() && charpoly(g1) == charpoly(g2)
}

/// With `α_k = c_{k−1}` taken from the characteristic polynomial of `G1`
/// (so `α_{n+1} = 1`), checks `Σ_{k=1}^{n+1} α_k M^{τ+k} = 0` for the
/// adjacency matrices of both graphs.
pub fn shifted_walk_relation(g1: &Graph, g2: &Graph, tau: usize) -> bool {
    if !cospectral(g1, g2) {
        return false;
    }
    let alphas = charpoly(g1);
    [g1, g2].iter().all(|g| {
        let a = g.adjacency_int();
        let n = g.n();
        let mut power: Vec<Vec<BigInt>> = (0..n)
            .map(|i| (0..n).map(|j| BigInt::from(u8::from(i == j))).collect())
            .collect();
        for _ in 0..=tau {
            power = int_mul(&power, &a);
        }
        let mut acc = vec![vec![BigInt::zero(); n]; n];
        for alpha in &alphas {
            for i in 0..n {
                for j in 0..n {
                    acc[i][j] += alpha * &power[i][j];
                }
            }
            power = int_mul(&power, &a);
        }
        acc.iter().flatten().all(Zero::is_zero)
    })
}

// ---------------------------------------------------------------------------
// Inflation and invariants

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Semantics {
    /// Any length-two walk `r → g → b`.
    #[default]
    Walks,
    /// Only walks with `r, g, b` pairwise distinct.
    Paths,
}

impl fmt::Display for Semantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Semantics::Walks => "walks",
            Semantics::Paths => "paths",
        })
    }
}

impl FromStr for Semantics {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "walks" => Ok(Semantics::Walks),
            "paths" => Ok(Semantics::Paths),
            other => Err(format!("unknown semantics `{other}` (walks|paths)")),
        }
    }
}

/// `a[r,g,b] = 1` iff `r → g` and `g → b` are edges (and, for `paths`,
/// `r, g, b` are pairwise distinct).
pub fn inflate<S: Scalar>(g: &Graph, semantics: Semantics, ctx: S::Context) -> Result<Hypermatrix<S>, GraphError> {
    let n = g.n();
    let one = S::one(&ctx);
    let zero = S::zero(&ctx);
    Ok(Hypermatrix::from_fn(vec![n, n, n], ctx, |i| {
        let (r, m, b) = (i[0], i[1], i[2]);
        let walk = g.has_edge(r, m) && g.has_edge(m, b);
        let ok = match semantics {
            Semantics::Walks => walk,
            Semantics::Paths => walk && r != m && m != b && r != b,
        };
        if ok {
            one.clone()
        } else {
            zero.clone()
        }
    })?)
}

/// Exact for `n³ ≤ 64`, otherwise arithmetic modulo `prime`.
pub fn default_backend(n: usize, prime: Modulus) -> Backend {
    if n * n * n <= 64 {
        Backend::Exact
    } else {
        Backend::ModP(prime.get())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantSettings {
    pub semantics: Semantics,
    pub formulation: Formulation,
    pub convention: Convention,
    pub backend: Backend,
}

/// First dependence among the inflation's powers, as canonical strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoefficientRecord {
    pub r: usize,
    pub alphas: Vec<String>,
    pub dependent: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub graph: String,
    pub semantics: Semantics,
    pub formulation: Formulation,
    pub convention: Convention,
    pub backend: Backend,
    /// Span dimension of the bounded power prefix.
    pub rank: usize,
    pub coefficients: CoefficientRecord,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub timing_ms: Option<f64>,
}

impl InvariantReport {
    pub fn settings(&self) -> InvariantSettings {
        InvariantSettings {
            semantics: self.semantics,
            formulation: self.formulation,
            convention: self.convention,
            backend: self.backend,
        }
    }

    /// Equality of the invariant payload: rank, then coefficients.
    pub fn same_invariant(&self, other: &InvariantReport) -> bool {
        self.settings() == other.settings()
            && self.rank == other.rank
            && self.coefficients == other.coefficients
    }
}

fn invariant_in<S: Eliminate>(
    g: &Graph,
    ctx: S::Context,
    settings: &InvariantSettings,
) -> Result<(usize, CoefficientRecord), GraphError> {
    let a = inflate::<S>(g, settings.semantics, ctx)?;
    let analysis = analyze_powers(&a, settings.formulation, settings.convention)?;
    let cv = analysis.coefficients;
    Ok((
        analysis.span,
        CoefficientRecord {
            r: cv.r,
            alphas: cv.alpha_strings(),
            dependent: cv.dependent,
        },
    ))
}

/// Inflates `g` and records its power-span rank and first dependence.
pub fn hypergraph_invariant(
    g: &Graph,
    name: &str,
    settings: &InvariantSettings,
) -> Result<InvariantReport, GraphError> {
    let (rank, coefficients) = match settings.backend {
        Backend::Exact => invariant_in::<Rational>(g, (), settings)?,
        Backend::ModP(p) => invariant_in::<Fp>(g, Modulus::new(p)?, settings)?,
    };
    Ok(InvariantReport {
        graph: name.to_string(),
        semantics: settings.semantics,
        formulation: settings.formulation,
        convention: settings.convention,
        backend: settings.backend,
        rank,
        coefficients,
        timing_ms: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    SameInvariant,
    DifferentInvariant,
    NotCospectral,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::SameInvariant => "same-invariant",
            Verdict::DifferentInvariant => "different-invariant",
            Verdict::NotCospectral => "not-cospectral",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Distinction {
    pub verdict: Verdict,
    pub reports: [InvariantReport; 2],
}

/// Compares the invariants of two graphs; non-cospectral pairs are reported
/// as such without comparing invariants.
pub fn distinguish(
    (g1, name1): (&Graph, &str),
    (g2, name2): (&Graph, &str),
    settings: &InvariantSettings,
) -> Result<Distinction, GraphError> {
    let r1 = hypergraph_invariant(g1, name1, settings)?;
    let r2 = hypergraph_invariant(g2, name2, settings)?;
    let verdict = if !cospectral(g1, g2) {
        Verdict::NotCospectral
    } else if r1.same_invariant(&r2) {
        Verdict::SameInvariant
    } else {
        Verdict::DifferentInvariant
    };
    Ok(Distinction {
        verdict,
        reports: [r1, r2],
    })
}
