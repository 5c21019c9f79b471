//! Characteristic pairs `(Q, λ)`, the torus graph they determine, and the
//! polygon (4-dimensional) pipeline.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cohomology::GraphClass;
use crate::exact::{lattice_intersection, lcm, ExactError, Int, IntMatrix, IntegerLattice, Rat};
use crate::facering::{FaceMonomial, FacePolynomial, FaceRing, FaceRingError};
use crate::graph::{Edge, FaceId, GraphError, OrbifoldGkmGraph};
use crate::poly::{sym_power_matrix, LinearForm, Poly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuotientError {
    #[error("invalid characteristic pair: {0}")]
    Invalid(String),
    #[error("vectors of the facets at vertex {0} are linearly dependent")]
    Singular(String),
    #[error("adjacent facets F{0} and F{1} have dependent vectors (D = 0)")]
    Degenerate(usize, usize),
    #[error("a polygon needs at least 2 facets")]
    TooFewFacets,
    #[error("index {0} out of range 1..={1}")]
    IndexOutOfRange(usize, usize),
    #[error("gcd of the D values is {0}, not 1")]
    GcdCondition(Int),
    #[error("facet {0} does not correspond to a face of the graph")]
    NotAFace(String),
    #[error("global element {0} does not map to the constant class")]
    GlobalElement(usize),
    #[error("malformed pair JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    FaceRing(#[from] FaceRingError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Facet {
    pub name: String,
    pub lambda: Vec<Int>,
}

/// An edge of `Q`: the `n − 1` facets containing it and its two endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairEdge {
    pub facets: Vec<usize>,
    pub ends: [usize; 2],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacteristicPair {
    n: usize,
    facets: Vec<Facet>,
    /// Facets at each vertex, ascending.
    vertices: Vec<Vec<usize>>,
    vertex_names: Vec<String>,
    edges: Vec<PairEdge>,
    polygon: Option<PolygonPair>,
}

fn ints(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&x| Int::from(x)).collect()
}

impl CharacteristicPair {
    /// Vertex names default to the joined facet names (`F1.F3.F4`).
    pub fn new(
        n: usize,
        facets: Vec<Facet>,
        vertices: Vec<Vec<usize>>,
        edges: Vec<PairEdge>,
        vertex_names: Option<Vec<String>>,
    ) -> Result<Self, QuotientError> {
        let bad = |s: String| Err(QuotientError::Invalid(s));
        for f in &facets {
            if f.lambda.len() != n {
                return bad(format!("facet {} has {} coordinates, expected {n}", f.name, f.lambda.len()));
            }
        }
        let mut sorted = Vec::with_capacity(vertices.len());
        for (i, v) in vertices.iter().enumerate() {
            let mut s = v.clone();
            s.sort_unstable();
            s.dedup();
            if s.len() != n || s.iter().any(|&j| j >= facets.len()) {
                return bad(format!("vertex {} must lie on {n} distinct known facets", i + 1));
            }
            sorted.push(s);
        }
        for (i, e) in edges.iter().enumerate() {
            if e.facets.len() + 1 != n || e.ends.iter().any(|&v| v >= vertices.len()) || e.ends[0] == e.ends[1] {
                return bad(format!("edge {} is malformed", i + 1));
            }
            for &v in &e.ends {
                if !e.facets.iter().all(|f| sorted[v].contains(f)) {
                    return bad(format!("edge {} is not contained in its endpoint {}", i + 1, v + 1));
                }
            }
        }
        let names = match vertex_names {
            Some(ns) if ns.len() == vertices.len() => ns,
            Some(_) => return bad("vertex name count mismatch".into()),
            None => sorted
                .iter()
                .map(|s| s.iter().map(|&j| facets[j].name.as_str()).collect::<Vec<_>>().join("."))
                .collect(),
        };
        let pair = CharacteristicPair {
            n,
            facets,
            vertices: sorted,
            vertex_names: names,
            edges,
            polygon: None,
        };
        for v in 0..pair.vertices.len() {
            if pair.lambda_v(v).determinant()?.is_zero() {
                return Err(QuotientError::Singular(pair.vertex_names[v].clone()));
            }
        }
        Ok(pair)
    }

    /// `Q = Δ^n` with facets `F1..F(n+1)`; vertex `i` avoids facet `i`.
    pub fn simplex(lambdas: &[Vec<i64>]) -> Result<Self, QuotientError> {
        let m = lambdas.len();
        if m < 2 {
            return Err(QuotientError::TooFewFacets);
        }
        let n = m - 1;
        let facets = lambdas
            .iter()
            .enumerate()
            .map(|(i, l)| Facet {
                name: format!("F{}", i + 1),
                lambda: ints(l),
            })
            .collect();
        let vertices: Vec<Vec<usize>> = (0..m).map(|skip| (0..m).filter(|&j| j != skip).collect()).collect();
        let mut edges = Vec::new();
        for a in 0..m {
            for b in a + 1..m {
                edges.push(PairEdge {
                    facets: (0..m).filter(|&j| j != a && j != b).collect(),
                    ends: [a, b],
                });
            }
        }
        Self::new(n, facets, vertices, edges, None)
    }

    /// The classical pair of `CP^n`: standard basis plus minus their sum.
    pub fn projective_space(n: usize) -> Result<Self, QuotientError> {
        let mut ls: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        ls.push(vec![-1; n]);
        Self::simplex(&ls)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn vertices(&self) -> &[Vec<usize>] {
        &self.vertices
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertex_names
    }

    pub fn edges(&self) -> &[PairEdge] {
        &self.edges
    }

    pub fn polygon(&self) -> Option<&PolygonPair> {
        self.polygon.as_ref()
    }

    pub fn facet_index(&self, name: &str) -> Option<usize> {
        self.facets.iter().position(|f| f.name == name)
    }

    /// `Λ_v`, columns `λ(F)` for the facets at `v` in ascending order.
    pub fn lambda_v(&self, v: usize) -> IntMatrix {
        let cols = &self.vertices[v];
        let mut m = IntMatrix::zeros(self.n, self.n);
        for (c, &j) in cols.iter().enumerate() {
            for r in 0..self.n {
                m[(r, c)] = self.facets[j].lambda[r].clone();
            }
        }
        m
    }
}

/// A pair together with its graph and local data.
#[derive(Debug, Clone)]
pub struct DerivedGraph {
    pub pair: CharacteristicPair,
    pub graph: OrbifoldGkmGraph,
    pub lambda_v: Vec<IntMatrix>,
    /// `|det Λ_v|`.
    pub dets: Vec<Int>,
}

/// Builds the torus graph: the dart leaving `v` along an edge gets the row of
/// `Λ_v^{-1}` dual to the facet at `v` that the edge leaves.
pub fn derive_graph(p: &CharacteristicPair) -> Result<DerivedGraph, QuotientError> {
    let lambda_v: Vec<IntMatrix> = (0..p.vertices.len()).map(|v| p.lambda_v(v)).collect();
    let mut dets = Vec::with_capacity(lambda_v.len());
    let mut inverses = Vec::with_capacity(lambda_v.len());
    for (v, m) in lambda_v.iter().enumerate() {
        let inv = m
            .to_rat()
            .inverse()
            .map_err(|_| QuotientError::Singular(p.vertex_names[v].clone()))?;
        dets.push(m.determinant()?.abs());
        inverses.push(inv);
    }
    let label = |v: usize, e: &PairEdge| -> Result<LinearForm, QuotientError> {
        let facets = &p.vertices[v];
        let out: Vec<usize> = (0..facets.len()).filter(|&i| !e.facets.contains(&facets[i])).collect();
        match out[..] {
            [row] => Ok(LinearForm::new(inverses[v].row(row).to_vec())),
            _ => Err(QuotientError::Invalid(format!("edge at vertex {} leaves no unique facet", p.vertex_names[v]))),
        }
    };
    let edges = p
        .edges
        .iter()
        .map(|e| {
            Ok(Edge {
                from: e.ends[0],
                to: e.ends[1],
                alpha_from: label(e.ends[0], e)?,
                alpha_to: label(e.ends[1], e)?,
            })
        })
        .collect::<Result<Vec<_>, QuotientError>>()?;
    let graph = OrbifoldGkmGraph::new(p.n, p.vertex_names.clone(), edges)?;
    Ok(DerivedGraph {
        pair: p.clone(),
        graph,
        lambda_v,
        dets,
    })
}

impl DerivedGraph {
    /// The face of the graph corresponding to facet `j`.
    pub fn facet_face(&self, ring: &FaceRing, j: usize) -> Result<FaceId, QuotientError> {
        let vertices: Vec<usize> = (0..self.pair.vertices.len())
            .filter(|&v| self.pair.vertices[v].contains(&j))
            .collect();
        let edges: Vec<usize> = (0..self.pair.edges.len())
            .filter(|&e| self.pair.edges[e].facets.contains(&j))
            .collect();
        ring.poset()
            .find(&vertices, &edges)
            .ok_or_else(|| QuotientError::NotAFace(self.pair.facets[j].name.clone()))
    }

    pub fn facet_faces(&self, ring: &FaceRing) -> Result<Vec<FaceId>, QuotientError> {
        (0..self.pair.facets.len()).map(|j| self.facet_face(ring, j)).collect()
    }

    /// `ℓ_F = lcm{|det Λ_v| : v ∈ F}`.
    pub fn lcm_bound(&self, ring: &FaceRing, face: FaceId) -> Int {
        ring.poset()
            .face(face)
            .vertices
            .iter()
            .fold(Int::one(), |acc, &v| lcm(&acc, &self.dets[v]))
    }

    /// Face labels: vertex names for vertices, otherwise the facets
    /// containing the face joined by `.`, and `G` for the whole graph.
    pub fn face_names(&self, ring: &FaceRing) -> Result<Vec<String>, QuotientError> {
        let facet_faces = self.facet_faces(ring)?;
        Ok((0..ring.poset().len())
            .map(|f| {
                let face = ring.poset().face(f);
                if face.dim == 0 {
                    return self.graph.vertex_name(face.vertices[0]).to_string();
                }
                let names: Vec<&str> = facet_faces
                    .iter()
                    .enumerate()
                    .filter(|(_, &ff)| ring.poset().is_subface(f, ff))
                    .map(|(j, _)| self.pair.facets[j].name.as_str())
                    .collect();
                if names.is_empty() {
                    "G".to_string()
                } else {
                    names.join(".")
                }
            })
            .collect())
    }
}

/// `Σ_j λ(F_j)_i x_{F_j}` for `i = 1..n`, each checked to be integral and to
/// map to the constant class `e_i`.
pub fn linear_global_elements(d: &DerivedGraph, ring: &FaceRing) -> Result<Vec<FacePolynomial>, QuotientError> {
    let faces = d.facet_faces(ring)?;
    let k = d.graph.torus_rank();
    (0..d.pair.n)
        .map(|i| {
            let mut p = FacePolynomial::zero();
            for (j, f) in d.pair.facets.iter().enumerate() {
                p = p.add(&ring.x(faces[j]).scale(&f.lambda[i]));
            }
            let expect = GraphClass::constant(&d.graph, &Poly::var(k, i));
            if ring.mu(&p).values != expect.values {
                return Err(QuotientError::GlobalElement(i + 1));
            }
            Ok(p)
        })
        .collect()
}

/// A polygon `Q` with `λ(F_k) = (a_k, b_k)`, indices mod `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolygonPair {
    lambdas: Vec<[Int; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GcdCheck {
    pub ds: Vec<Int>,
    pub gcd: Int,
    pub holds: bool,
}

impl PolygonPair {
    pub fn new(lambdas: Vec<[Int; 2]>) -> Result<Self, QuotientError> {
        let m = lambdas.len();
        if m < 2 {
            return Err(QuotientError::TooFewFacets);
        }
        let p = PolygonPair { lambdas };
        for k in 1..=m {
            if p.d(k).is_zero() {
                return Err(QuotientError::Degenerate(k, k % m + 1));
            }
        }
        Ok(p)
    }

    pub fn from_i64(lambdas: &[[i64; 2]]) -> Result<Self, QuotientError> {
        Self::new(lambdas.iter().map(|[a, b]| [Int::from(*a), Int::from(*b)]).collect())
    }

    pub fn m(&self) -> usize {
        self.lambdas.len()
    }

    pub fn lambdas(&self) -> &[[Int; 2]] {
        &self.lambdas
    }

    /// `λ(F_k)`, 1-based and cyclic.
    fn lam(&self, k: usize) -> &[Int; 2] {
        &self.lambdas[(k + self.m() - 1) % self.m()]
    }

    /// `D_k = a_k b_{k+1} − b_k a_{k+1}`, 1-based and cyclic.
    pub fn d(&self, k: usize) -> Int {
        let [a, b] = self.lam(k);
        let [a1, b1] = self.lam(k + 1);
        a * b1 - b * a1
    }

    pub fn ds(&self) -> Vec<Int> {
        (1..=self.m()).map(|k| self.d(k)).collect()
    }

    pub fn gcd_check(&self) -> GcdCheck {
        let ds = self.ds();
        let gcd = ds.iter().fold(Int::zero(), |acc, d| acc.gcd(d));
        let holds = gcd.is_one();
        GcdCheck { ds, gcd, holds }
    }

    /// `Λ_k = [λ(F_k) | λ(F_{k+1})]`.
    pub fn lambda_k(&self, k: usize) -> IntMatrix {
        let [a, b] = self.lam(k).clone();
        let [a1, b1] = self.lam(k + 1).clone();
        IntMatrix::from_rows(2, vec![vec![a, a1], vec![b, b1]]).expect("2x2")
    }

    /// The pair with facets `F1..Fm`, vertices `v_k = F_k ∩ F_{k+1}` and the
    /// edge `F_k` running from `v_{k−1}` to `v_k`.
    pub fn to_pair(&self) -> Result<CharacteristicPair, QuotientError> {
        let m = self.m();
        let facets = self
            .lambdas
            .iter()
            .enumerate()
            .map(|(i, l)| Facet {
                name: format!("F{}", i + 1),
                lambda: l.to_vec(),
            })
            .collect();
        let vertices = (0..m).map(|i| vec![i, (i + 1) % m]).collect();
        let edges = (0..m)
            .map(|i| PairEdge {
                facets: vec![i],
                ends: [(i + m - 1) % m, i],
            })
            .collect();
        let names = (1..=m).map(|k| format!("v{k}")).collect();
        let mut p = CharacteristicPair::new(2, facets, vertices, edges, Some(names))?;
        p.polygon = Some(self.clone());
        Ok(p)
    }

    /// `𝕃_k` in `Z^{nm}`: rows of `#^(n)(Λ_k)` placed on the cyclic columns
    /// `(k−1)n .. (k−1)n+n`, plus unit vectors on every other column.
    pub fn lattice_k(&self, n: usize, k: usize) -> Result<IntegerLattice, QuotientError> {
        let m = self.m();
        if k == 0 || k > m {
            return Err(QuotientError::IndexOutOfRange(k, m));
        }
        if n == 0 {
            return Err(QuotientError::Invalid("degree must be positive".into()));
        }
        let width = n * m;
        let block = sym_power_matrix(n, &self.lambda_k(k)).expect("2x2 input");
        let cols: Vec<usize> = (0..=n).map(|t| ((k - 1) * n + t) % width).collect();
        let mut rows = Vec::new();
        for r in block.rows_iter() {
            let mut row = vec![Int::zero(); width];
            for (t, v) in r.iter().enumerate() {
                row[cols[t]] += v;
            }
            rows.push(row);
        }
        for j in (0..width).filter(|j| !cols.contains(j)) {
            let mut e = vec![Int::zero(); width];
            e[j] = Int::one();
            rows.push(e);
        }
        Ok(IntegerLattice::from_rows(width, rows))
    }

    /// `⋂_k 𝕃_k` without checking the gcd condition.
    pub fn generators_unchecked(&self, n: usize) -> Result<IntegerLattice, QuotientError> {
        let mut acc = self.lattice_k(n, 1)?;
        for k in 2..=self.m() {
            acc = lattice_intersection(&acc, &self.lattice_k(n, k)?)?;
        }
        Ok(acc)
    }

    /// Degree-`2n` generator lattice; requires `gcd{D_k} = 1`.
    pub fn generators(&self, n: usize) -> Result<IntegerLattice, QuotientError> {
        let check = self.gcd_check();
        if !check.holds {
            return Err(QuotientError::GcdCondition(check.gcd));
        }
        self.generators_unchecked(n)
    }

    /// Coordinate monomials `x_{F_i}^{n−α} x_{F_{i+1}}^α` in lattice order,
    /// given the face id of each facet.
    pub fn monomials(&self, n: usize, facet_faces: &[FaceId]) -> Vec<FaceMonomial> {
        let m = self.m();
        let mut out = Vec::with_capacity(n * m);
        for i in 0..m {
            for alpha in 0..n {
                let mut mono = vec![facet_faces[i]; n - alpha];
                mono.extend(std::iter::repeat_n(facet_faces[(i + 1) % m], alpha));
                mono.sort_unstable();
                out.push(mono);
            }
        }
        out
    }

    /// Expected axial values: `α(e_k) = (b_k, −a_k)/D_{k−1}`, `α(ē_k) = (−b_k, a_k)/D_k`.
    pub fn expected_alpha(&self, k: usize) -> (LinearForm, LinearForm) {
        let [a, b] = self.lam(k);
        let prev = Rat::from_integer(self.d(k + self.m() - 1));
        let cur = Rat::from_integer(self.d(k));
        let fwd = LinearForm::new(vec![Rat::from_integer(b.clone()) / &prev, Rat::from_integer(-a) / &prev]);
        let back = LinearForm::new(vec![Rat::from_integer(-b) / &cur, Rat::from_integer(a.clone()) / &cur]);
        (fwd, back)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PairJson {
    Polygon {
        polygon: Vec<[i64; 2]>,
    },
    Full {
        n: usize,
        facets: Vec<FacetJson>,
        vertices: Vec<Vec<String>>,
        edges: Vec<PairEdgeJson>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacetJson {
    pub name: String,
    pub lambda: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairEdgeJson {
    pub facets: Vec<String>,
    pub ends: [usize; 2],
}

fn small(v: &Int) -> Result<i64, QuotientError> {
    use num_traits::ToPrimitive;
    v.to_i64().ok_or_else(|| QuotientError::Json(format!("{v} does not fit in 64 bits")))
}

impl CharacteristicPair {
    pub fn to_json(&self) -> Result<PairJson, QuotientError> {
        if let Some(p) = &self.polygon {
            return Ok(PairJson::Polygon {
                polygon: p
                    .lambdas
                    .iter()
                    .map(|[a, b]| Ok([small(a)?, small(b)?]))
                    .collect::<Result<_, QuotientError>>()?,
            });
        }
        let name = |j: &usize| self.facets[*j].name.clone();
        Ok(PairJson::Full {
            n: self.n,
            facets: self
                .facets
                .iter()
                .map(|f| {
                    Ok(FacetJson {
                        name: f.name.clone(),
                        lambda: f.lambda.iter().map(small).collect::<Result<_, _>>()?,
                    })
                })
                .collect::<Result<_, QuotientError>>()?,
            vertices: self.vertices.iter().map(|v| v.iter().map(name).collect()).collect(),
            edges: self
                .edges
                .iter()
                .map(|e| PairEdgeJson {
                    facets: e.facets.iter().map(name).collect(),
                    ends: e.ends,
                })
                .collect(),
        })
    }

    pub fn from_json(j: &PairJson) -> Result<Self, QuotientError> {
        match j {
            PairJson::Polygon { polygon } => PolygonPair::from_i64(polygon)?.to_pair(),
            PairJson::Full { n, facets, vertices, edges } => {
                let fs: Vec<Facet> = facets
                    .iter()
                    .map(|f| Facet {
                        name: f.name.clone(),
                        lambda: ints(&f.lambda),
                    })
                    .collect();
                let find = |s: &String| {
                    fs.iter()
                        .position(|f| &f.name == s)
                        .ok_or_else(|| QuotientError::Invalid(format!("unknown facet `{s}`")))
                };
                let vs = vertices
                    .iter()
                    .map(|v| v.iter().map(find).collect::<Result<Vec<_>, _>>())
                    .collect::<Result<Vec<_>, _>>()?;
                let es = edges
                    .iter()
                    .map(|e| {
                        Ok(PairEdge {
                            facets: e.facets.iter().map(find).collect::<Result<_, QuotientError>>()?,
                            ends: e.ends,
                        })
                    })
                    .collect::<Result<Vec<_>, QuotientError>>()?;
                Self::new(*n, fs, vs, es, None)
            }
        }
    }

    pub fn from_json_str(s: &str) -> Result<Self, QuotientError> {
        let j: PairJson = serde_json::from_str(s).map_err(|e| QuotientError::Json(e.to_string()))?;
        Self::from_json(&j)
    }

    pub fn to_json_string(&self) -> Result<String, QuotientError> {
        Ok(serde_json::to_string_pretty(&self.to_json()?).expect("pair JSON serializes"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn p1236() -> CharacteristicPair {
        CharacteristicPair::simplex(&[vec![-2, -3, -6], vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap()
    }

    #[test]
    fn p1236_labels_at_f1f3f4() {
        let d = derive_graph(&p1236()).unwrap();
        let v = d.graph.vertex_index("F1.F3.F4").unwrap();
        let mut labels: Vec<LinearForm> = d.graph.darts_at(v).iter().map(|&e| d.graph.alpha(e).clone()).collect();
        labels.sort_by_key(|l| l.to_string());
        let mut expect = vec![
            LinearForm::new(vec![rat(-1, 2), rat(0, 1), rat(0, 1)]),
            LinearForm::new(vec![rat(-3, 2), rat(1, 1), rat(0, 1)]),
            LinearForm::new(vec![rat(-3, 1), rat(0, 1), rat(1, 1)]),
        ];
        expect.sort_by_key(|l| l.to_string());
        assert_eq!(labels, expect);
    }

    #[test]
    fn gcd_examples() {
        let ok = PolygonPair::from_i64(&[[1, 0], [0, 1], [-1, -2]]).unwrap().gcd_check();
        assert_eq!(ok.ds, vec![Int::from(1), Int::from(1), Int::from(2)]);
        assert!(ok.holds);
        let bad = PolygonPair::from_i64(&[[2, 0], [0, 1], [-2, -1]]).unwrap().gcd_check();
        assert_eq!(bad.gcd, Int::from(2));
        assert!(!bad.holds);
    }

    #[test]
    fn degenerate_polygon_rejected() {
        assert_eq!(
            PolygonPair::from_i64(&[[1, 0], [2, 0], [0, 1]]),
            Err(QuotientError::Degenerate(1, 2))
        );
    }

    #[test]
    fn polygon_axial_formula() {
        let poly = PolygonPair::from_i64(&[[1, 0], [0, 1], [-1, -2]]).unwrap();
        let d = derive_graph(&poly.to_pair().unwrap()).unwrap();
        for k in 1..=3 {
            let (fwd, back) = poly.expected_alpha(k);
            assert_eq!(d.graph.alpha(2 * (k - 1)), &fwd);
            assert_eq!(d.graph.alpha(2 * (k - 1) + 1), &back);
        }
    }
}
