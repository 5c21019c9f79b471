//! Orbifold GKM graphs and orbifold torus graphs.
//!
//! Edge `i` owns two darts: `2i` runs `from -> to`, `2i + 1` runs back.
//! Parallel edges are allowed; loops are not.

mod connection;
mod faces;
mod json;

use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exact::{lcm, Int, Rat, RatMatrix};
use crate::poly::LinearForm;

pub use connection::{infer_connection, Connection, ConnectionError};
pub use faces::{enumerate_faces, Face, FaceId, FacePoset, DEFAULT_VALENCE_CAP};
pub use json::{EdgeJson, GraphJson};

pub type VertexId = usize;
pub type EdgeId = usize;
pub type DartId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("edge {edge}: axial value has {found} coordinates, torus rank is {expected}")]
    WrongArity {
        edge: EdgeId,
        expected: usize,
        found: usize,
    },
    #[error("edge {0} is a loop")]
    SelfLoop(EdgeId),
    #[error("dart {0} has zero axial value")]
    ZeroAxial(DartId),
    #[error("bad rational: {0}")]
    BadRational(String),
    #[error(transparent)]
    Connection(#[from] ConnectionError),
    #[error("valence {valence} exceeds the face enumeration cap {cap}")]
    ValenceCap { valence: usize, cap: usize },
    #[error("graph is not regular")]
    Irregular,
    #[error("faces {0} and {1} have no least common upper face")]
    NoJoin(FaceId, FaceId),
    #[error("subgraph is not a face of the poset")]
    FaceNotFound,
    #[error("malformed graph JSON: {0}")]
    Json(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub from: VertexId,
    pub to: VertexId,
    /// Axial value of the dart leaving `from`.
    pub alpha_from: LinearForm,
    /// Axial value of the dart leaving `to`.
    pub alpha_to: LinearForm,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbifoldGkmGraph {
    torus_rank: usize,
    vertices: Vec<String>,
    edges: Vec<Edge>,
    out: Vec<Vec<DartId>>,
}

impl OrbifoldGkmGraph {
    /// Structural checks only; the axiomatic ones live in [`validate`].
    pub fn new(torus_rank: usize, vertices: Vec<String>, edges: Vec<Edge>) -> Result<Self, GraphError> {
        let mut seen = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if seen.insert(v.as_str(), i).is_some() {
                return Err(GraphError::DuplicateVertex(v.clone()));
            }
        }
        let mut out = vec![Vec::new(); vertices.len()];
        for (i, e) in edges.iter().enumerate() {
            for a in [&e.alpha_from, &e.alpha_to] {
                if a.nvars() != torus_rank {
                    return Err(GraphError::WrongArity {
                        edge: i,
                        expected: torus_rank,
                        found: a.nvars(),
                    });
                }
            }
            if e.from >= vertices.len() || e.to >= vertices.len() {
                return Err(GraphError::UnknownVertex(format!("#{}", e.from.max(e.to))));
            }
            if e.from == e.to {
                return Err(GraphError::SelfLoop(i));
            }
            out[e.from].push(2 * i);
            out[e.to].push(2 * i + 1);
        }
        Ok(OrbifoldGkmGraph {
            torus_rank,
            vertices,
            edges,
            out,
        })
    }

    /// Builds from vertex names and `(from, to, α(from→to), α(to→from))`.
    pub fn from_named(
        torus_rank: usize,
        vertices: &[&str],
        edges: Vec<(&str, &str, LinearForm, LinearForm)>,
    ) -> Result<Self, GraphError> {
        let names: Vec<String> = vertices.iter().map(|s| s.to_string()).collect();
        let find = |s: &str| {
            names
                .iter()
                .position(|n| n == s)
                .ok_or_else(|| GraphError::UnknownVertex(s.to_string()))
        };
        let edges = edges
            .into_iter()
            .map(|(f, t, a, b)| {
                Ok(Edge {
                    from: find(f)?,
                    to: find(t)?,
                    alpha_from: a,
                    alpha_to: b,
                })
            })
            .collect::<Result<Vec<_>, GraphError>>()?;
        Self::new(torus_rank, names, edges)
    }

    pub fn torus_rank(&self) -> usize {
        self.torus_rank
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_darts(&self) -> usize {
        2 * self.edges.len()
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v]
    }

    pub fn vertex_index(&self, name: &str) -> Option<VertexId> {
        self.vertices.iter().position(|n| n == name)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Common out-degree, if the graph is regular and non-empty.
    pub fn valence(&self) -> Option<usize> {
        let first = self.out.first()?.len();
        self.out.iter().all(|d| d.len() == first).then_some(first)
    }

    pub fn darts_at(&self, v: VertexId) -> &[DartId] {
        &self.out[v]
    }

    pub fn origin(&self, d: DartId) -> VertexId {
        let e = &self.edges[d / 2];
        if d.is_multiple_of(2) {
            e.from
        } else {
            e.to
        }
    }

    pub fn terminus(&self, d: DartId) -> VertexId {
        self.origin(reverse(d))
    }

    pub fn alpha(&self, d: DartId) -> &LinearForm {
        let e = &self.edges[d / 2];
        if d.is_multiple_of(2) {
            &e.alpha_from
        } else {
            &e.alpha_to
        }
    }

    pub fn describe_dart(&self, d: DartId) -> String {
        format!(
            "{}->{} (edge {})",
            self.vertex_name(self.origin(d)),
            self.vertex_name(self.terminus(d)),
            edge_of(d)
        )
    }

    /// `q` with `α(ē) = q α(e)`, if the two values are parallel.
    pub fn reversal_ratio(&self, d: DartId) -> Option<Rat> {
        self.alpha(d).ratio_to(self.alpha(reverse(d)))
    }

    /// Least positive `r` such that `r α(e)` is integral and equals
    /// `± s α(ē)` for a positive integer `s`.
    pub fn rtilde(&self, d: DartId) -> Result<Int, GraphError> {
        let a = self.alpha(d);
        if a.is_zero() {
            return Err(GraphError::ZeroAxial(d));
        }
        let base = a.denominator_lcm();
        Ok(match self.reversal_ratio(d) {
            // s = r / |q| must be an integer
            Some(q) if !q.is_zero() => lcm(&base, &q.numer().abs()),
            _ => base,
        })
    }

    /// `r̃_e α(e)` as an integral form.
    pub fn modulus(&self, d: DartId) -> Result<LinearForm, GraphError> {
        let r = self.rtilde(d)?;
        Ok(self.alpha(d).scale(&Rat::from_integer(r)))
    }

    /// Connected components as vertex lists.
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let mut comp = vec![usize::MAX; self.num_vertices()];
        let mut out = Vec::new();
        for s in 0..self.num_vertices() {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut stack = vec![s];
            let mut members = Vec::new();
            comp[s] = id;
            while let Some(v) = stack.pop() {
                members.push(v);
                for &d in &self.out[v] {
                    let w = self.terminus(d);
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        stack.push(w);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// Induced graph on a vertex set and edge set (as given by a face).
    pub fn subgraph(&self, vertices: &[VertexId], edges: &[EdgeId]) -> Result<Self, GraphError> {
        let names = vertices.iter().map(|&v| self.vertices[v].clone()).collect();
        let index: HashMap<VertexId, usize> = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let new_edges = edges
            .iter()
            .map(|&e| {
                let old = &self.edges[e];
                let lookup = |v| {
                    index
                        .get(&v)
                        .copied()
                        .ok_or_else(|| GraphError::UnknownVertex(self.vertices[v].clone()))
                };
                Ok(Edge {
                    from: lookup(old.from)?,
                    to: lookup(old.to)?,
                    alpha_from: old.alpha_from.clone(),
                    alpha_to: old.alpha_to.clone(),
                })
            })
            .collect::<Result<Vec<_>, GraphError>>()?;
        Self::new(self.torus_rank, names, new_edges)
    }
}

pub fn reverse(d: DartId) -> DartId {
    d ^ 1
}

pub fn edge_of(d: DartId) -> EdgeId {
    d / 2
}

pub(crate) fn forms_rank(forms: &[&LinearForm], k: usize) -> usize {
    if forms.is_empty() {
        return 0;
    }
    let rows = forms.iter().map(|f| f.coefficients().to_vec()).collect();
    RatMatrix::from_rows(k, rows).expect("uniform arity").rank()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ValidationMode {
    /// Pairwise independence at each vertex.
    Gkm,
    /// Full independence at each vertex plus a unique connection.
    Torus,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Empty,
    Irregular { vertex: String, expected: usize, found: usize },
    ZeroAxial { dart: String },
    PairwiseDependent { vertex: String, first: String, second: String },
    NotIndependent { vertex: String, rank: usize, valence: usize },
    NotParallel { dart: String },
    Connection(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Empty => write!(f, "graph has no vertices"),
            Violation::Irregular { vertex, expected, found } => {
                write!(f, "vertex {vertex}: valence {found}, expected {expected}")
            }
            Violation::ZeroAxial { dart } => write!(f, "dart {dart}: zero axial value"),
            Violation::PairwiseDependent { vertex, first, second } => write!(
                f,
                "vertex {vertex}: axial values of {first} and {second} are linearly dependent"
            ),
            Violation::NotIndependent { vertex, rank, valence } => write!(
                f,
                "vertex {vertex}: axial values span rank {rank}, need {valence}"
            ),
            Violation::NotParallel { dart } => {
                write!(f, "dart {dart}: alpha(e) and alpha(reverse e) are not parallel")
            }
            Violation::Connection(msg) => write!(f, "connection: {msg}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub mode: ValidationMode,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the axioms of an orbifold GKM graph (or torus graph) and lists
/// every violation found.
pub fn validate(g: &OrbifoldGkmGraph, mode: ValidationMode) -> ValidationReport {
    let mut violations = Vec::new();
    if g.num_vertices() == 0 {
        violations.push(Violation::Empty);
        return ValidationReport { mode, violations };
    }
    let n = g.darts_at(0).len();
    for v in 0..g.num_vertices() {
        let found = g.darts_at(v).len();
        if found != n {
            violations.push(Violation::Irregular {
                vertex: g.vertex_name(v).to_string(),
                expected: n,
                found,
            });
        }
    }
    let k = g.torus_rank();
    for d in 0..g.num_darts() {
        if g.alpha(d).is_zero() {
            violations.push(Violation::ZeroAxial {
                dart: g.describe_dart(d),
            });
        } else if !g.alpha(reverse(d)).is_zero() && g.reversal_ratio(d).is_none() {
            violations.push(Violation::NotParallel {
                dart: g.describe_dart(d),
            });
        }
    }
    for v in 0..g.num_vertices() {
        let darts = g.darts_at(v);
        for (i, &a) in darts.iter().enumerate() {
            for &b in &darts[i + 1..] {
                if forms_rank(&[g.alpha(a), g.alpha(b)], k) < 2 {
                    violations.push(Violation::PairwiseDependent {
                        vertex: g.vertex_name(v).to_string(),
                        first: g.describe_dart(a),
                        second: g.describe_dart(b),
                    });
                }
            }
        }
        if mode == ValidationMode::Torus {
            let forms: Vec<&LinearForm> = darts.iter().map(|&d| g.alpha(d)).collect();
            let rank = forms_rank(&forms, k);
            if rank < darts.len() {
                violations.push(Violation::NotIndependent {
                    vertex: g.vertex_name(v).to_string(),
                    rank,
                    valence: darts.len(),
                });
            }
        }
    }
    if mode == ValidationMode::Torus && violations.is_empty() {
        if let Err(e) = infer_connection(g) {
            violations.push(Violation::Connection(e.describe(g)));
        }
    }
    ValidationReport { mode, violations }
}

/// Least positive `c` with `c * diff ∈ Z * modulus`, when `diff` is a
/// rational multiple of the modulus.
pub(crate) fn congruence_witness(diff: &LinearForm, modulus: &LinearForm) -> Option<Int> {
    if diff.is_zero() {
        return Some(Int::one());
    }
    let t = modulus.ratio_to(diff)?;
    // c * t must be an integer
    Some(t.denom().clone())
}
