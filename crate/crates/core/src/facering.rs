//! Rational Thom classes, the map `μ`, the integrality lattice of the face
//! ring and the degreewise isomorphism check.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cohomology::{self, Domain, GraphClass};
use crate::exact::{content, denominator_lcm, lcm, rational_preimage_lattice, Int, IntegerLattice, Rat, RatMatrix};
use crate::graph::{
    enumerate_faces, infer_connection, Connection, FaceId, FacePoset, GraphError, OrbifoldGkmGraph, VertexId,
    DEFAULT_VALENCE_CAP,
};
use crate::poly::{monomials_of_degree, Poly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FaceRingError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("unknown face {0}")]
    UnknownFace(FaceId),
    #[error("graph has no single top face")]
    NoTopFace,
    #[error("zero direction")]
    ZeroDirection,
}

/// Sorted multiset of faces; the top face never appears (`x_Γ = 1`).
pub type FaceMonomial = Vec<FaceId>;

/// Integer combination of face monomials.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct FacePolynomial {
    terms: BTreeMap<FaceMonomial, Int>,
}

impl FacePolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(Vec::new(), Int::one())
    }

    fn monomial(m: FaceMonomial, c: Int) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    fn add_term(&mut self, mut m: FaceMonomial, c: Int) {
        if c.is_zero() {
            return;
        }
        m.sort_unstable();
        let v = self.terms.remove(&m).unwrap_or_else(Int::zero) + c;
        if !v.is_zero() {
            self.terms.insert(m, v);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FaceMonomial, &Int)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &[FaceId]) -> Int {
        self.terms.get(m).cloned().unwrap_or_else(Int::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &Int) -> Self {
        let mut out = Self::zero();
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v * c);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, v) in &other.terms {
            out.add_term(m.clone(), v.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Int::one()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (m1, v1) in &self.terms {
            for (m2, v2) in &other.terms {
                let mut m = m1.clone();
                m.extend_from_slice(m2);
                out.add_term(m, v1 * v2);
            }
        }
        out
    }

    /// `Σ coeffs[i] * monomials[i]`.
    pub fn from_coefficients(monomials: &[FaceMonomial], coeffs: &[Int]) -> Self {
        let mut out = Self::zero();
        for (m, c) in monomials.iter().zip(coeffs) {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn coefficients_in(&self, monomials: &[FaceMonomial]) -> Vec<Int> {
        monomials.iter().map(|m| self.coefficient(m)).collect()
    }

    /// Renders with caller-supplied face names, e.g. `-2*x[F1] + x[F2]`.
    pub fn render(&self, name: impl Fn(FaceId) -> String) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c < &Int::zero();
            s.push_str(match (i, neg) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            });
            let mag = if neg { -c } else { c.clone() };
            let body = monomial_string(m, &name);
            if m.is_empty() {
                s.push_str(&mag.to_string());
            } else if mag.is_one() {
                s.push_str(&body);
            } else {
                s.push_str(&format!("{mag}*{body}"));
            }
        }
        s
    }
}

fn monomial_string(m: &[FaceId], name: &impl Fn(FaceId) -> String) -> String {
    let mut parts: Vec<String> = Vec::new();
    let mut i = 0;
    while i < m.len() {
        let j = m[i..].iter().take_while(|&&f| f == m[i]).count();
        let base = format!("x[{}]", name(m[i]));
        parts.push(if j > 1 { format!("{base}^{j}") } else { base });
        i += j;
    }
    parts.join("*")
}

impl fmt::Display for FacePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(|id| id.to_string()))
    }
}

/// `𝒵_{Γ,α}` in one degree: integer coefficient vectors over `monomials`
/// whose image under `μ` is vertexwise integral.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegralityLattice {
    /// Polynomial degree `d`; cohomological degree is `2d`.
    pub degree: u32,
    pub monomials: Vec<FaceMonomial>,
    pub lattice: IntegerLattice,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeJson {
    pub degree: u32,
    pub monomials: Vec<Vec<String>>,
    pub hnf_basis: Vec<Vec<serde_json::Value>>,
}

/// Outcome of the degreewise isomorphism check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsoReport {
    pub degree: u32,
    pub monomial_count: usize,
    pub image_rank: usize,
    pub cohomology_rank: usize,
    pub lattices_equal: bool,
    pub relations_checked: usize,
    pub relations_failed: Vec<(FaceId, FaceId)>,
}

impl IsoReport {
    pub fn holds(&self) -> bool {
        self.lattices_equal && self.relations_failed.is_empty()
    }
}

/// A graph with its connection, face poset and tabulated Thom classes.
#[derive(Debug, Clone)]
pub struct FaceRing {
    graph: OrbifoldGkmGraph,
    connection: Connection,
    poset: FacePoset,
    top: FaceId,
    /// `tau[F][v]`.
    tau: Vec<Vec<Poly>>,
}

impl FaceRing {
    pub fn new(graph: OrbifoldGkmGraph) -> Result<Self, FaceRingError> {
        let connection = infer_connection(&graph).map_err(GraphError::from)?;
        let poset = enumerate_faces(&graph, &connection, DEFAULT_VALENCE_CAP)?;
        let top = poset.top().ok_or(FaceRingError::NoTopFace)?;
        let k = graph.torus_rank();
        let tau = poset
            .faces()
            .iter()
            .map(|face| {
                (0..graph.num_vertices())
                    .map(|v| {
                        if !face.contains_vertex(v) {
                            return Poly::zero(k);
                        }
                        let inside = face.darts_at(&graph, v);
                        graph
                            .darts_at(v)
                            .iter()
                            .filter(|d| !inside.contains(d))
                            .fold(Poly::one(k), |acc, &d| &acc * &graph.alpha(d).to_poly())
                    })
                    .collect()
            })
            .collect();
        Ok(FaceRing {
            graph,
            connection,
            poset,
            top,
            tau,
        })
    }

    pub fn graph(&self) -> &OrbifoldGkmGraph {
        &self.graph
    }

    pub fn connection(&self) -> &Connection {
        &self.connection
    }

    pub fn poset(&self) -> &FacePoset {
        &self.poset
    }

    pub fn top(&self) -> FaceId {
        self.top
    }

    pub fn valence(&self) -> usize {
        self.poset.valence()
    }

    fn check(&self, f: FaceId) -> Result<(), FaceRingError> {
        if f < self.poset.len() {
            Ok(())
        } else {
            Err(FaceRingError::UnknownFace(f))
        }
    }

    /// Half the cohomological degree of `x_F`.
    pub fn weight(&self, f: FaceId) -> u32 {
        (self.valence() - self.poset.face(f).dim) as u32
    }

    /// The generator `x_F`; `x_Γ = 1`.
    pub fn x(&self, f: FaceId) -> FacePolynomial {
        if f == self.top {
            FacePolynomial::one()
        } else {
            FacePolynomial::monomial(vec![f], Int::one())
        }
    }

    /// `τ_F(v)`: product of the axial values at `v` leaving `F`, zero off `F`.
    pub fn tau(&self, f: FaceId, v: VertexId) -> &Poly {
        &self.tau[f][v]
    }

    pub fn thom_class(&self, f: FaceId) -> Result<GraphClass, FaceRingError> {
        self.check(f)?;
        Ok(GraphClass::new(self.weight(f), Domain::Rational, self.tau[f].clone()))
    }

    pub fn mu(&self, p: &FacePolynomial) -> GraphClass {
        let k = self.graph.torus_rank();
        let mut degree = None;
        let values = (0..self.graph.num_vertices())
            .map(|v| {
                let mut acc = Poly::zero(k);
                for (m, c) in p.terms() {
                    degree.get_or_insert_with(|| m.iter().map(|&f| self.weight(f)).sum::<u32>());
                    let term = m.iter().fold(Poly::one(k), |a, &f| &a * &self.tau[f][v]);
                    acc = &acc + &term.scale(&Rat::from_integer(c.clone()));
                }
                acc
            })
            .collect();
        GraphClass::new(degree.unwrap_or(0), Domain::Rational, values)
    }

    pub fn is_integral(&self, p: &FacePolynomial) -> bool {
        self.mu(p).is_integral()
    }

    /// Monomials of degree `d` (sum of weights), in canonical sorted order.
    pub fn monomials_of_degree(&self, d: u32) -> Vec<FaceMonomial> {
        let faces: Vec<FaceId> = (0..self.poset.len()).filter(|&f| f != self.top).collect();
        let mut out = Vec::new();
        fn rec(ring: &FaceRing, faces: &[FaceId], start: usize, left: u32, cur: &mut Vec<FaceId>, out: &mut Vec<FaceMonomial>) {
            if left == 0 {
                out.push(cur.clone());
                return;
            }
            for i in start..faces.len() {
                let w = ring.weight(faces[i]);
                if w <= left {
                    cur.push(faces[i]);
                    rec(ring, faces, i, left - w, cur, out);
                    cur.pop();
                }
            }
        }
        rec(self, &faces, 0, d, &mut Vec::new(), &mut out);
        out.sort();
        out
    }

    /// Matrix sending monomial coefficients to vertexwise `μ`-coefficients.
    fn mu_matrix(&self, d: u32, monomials: &[FaceMonomial]) -> RatMatrix {
        let k = self.graph.torus_rank();
        let eps = monomials_of_degree(k, d);
        let images: Vec<Vec<Rat>> = monomials
            .iter()
            .map(|m| self.mu(&FacePolynomial::monomial(m.clone(), Int::one())))
            .map(|mut class| {
                class.degree = d;
                class.coordinates(k)
            })
            .collect();
        let rows = self.graph.num_vertices() * eps.len();
        let mut mat = RatMatrix::zeros(rows, monomials.len());
        for (j, col) in images.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                mat[(i, j)] = v.clone();
            }
        }
        mat
    }

    /// `𝒵_{Γ,α}` in degree `d` over the raw monomials, or over `monomials`
    /// when given (e.g. a normal form modulo the relation ideal).
    pub fn integrality_lattice(&self, d: u32, monomials: Option<&[FaceMonomial]>) -> IntegralityLattice {
        let monomials = match monomials {
            Some(ms) => ms.to_vec(),
            None => self.monomials_of_degree(d),
        };
        let lattice = if monomials.is_empty() {
            IntegerLattice::full(0)
        } else {
            rational_preimage_lattice(&self.mu_matrix(d, &monomials))
        };
        IntegralityLattice {
            degree: d,
            monomials,
            lattice,
        }
    }

    /// Least positive `ℓ` with `ℓ x_F` integral.
    pub fn minimal_thom(&self, f: FaceId) -> Result<Int, FaceRingError> {
        self.check(f)?;
        Ok(self.tau[f]
            .iter()
            .fold(Int::one(), |acc, p| lcm(&acc, &p.denominator_lcm())))
    }

    /// Shortest integral element on the rational line through `p`.
    pub fn minimal_multiple(&self, p: &FacePolynomial) -> Result<FacePolynomial, FaceRingError> {
        let g = content(p.terms().map(|(_, c)| c));
        if g.is_zero() {
            return Err(FaceRingError::ZeroDirection);
        }
        let primitive = FacePolynomial {
            terms: p.terms().map(|(m, c)| (m.clone(), c / &g)).collect(),
        };
        let image = self.mu(&primitive);
        let ell = denominator_lcm(image.values.iter().flat_map(|q| q.terms().map(|(_, c)| c)));
        Ok(primitive.scale(&ell))
    }

    /// `x_E x_F − x_{E∨F} Σ_G x_G`, `G` over the components of `E ∩ F`.
    pub fn relation(&self, e: FaceId, f: FaceId) -> Result<FacePolynomial, FaceRingError> {
        self.check(e)?;
        self.check(f)?;
        let meet = self.poset.meet_components(e, f)?;
        let product = self.x(e).mul(&self.x(f));
        // x_∅ = 0: disjoint faces need no join, which may not be unique
        if meet.is_empty() {
            return Ok(product);
        }
        let join = self.poset.join(e, f)?;
        let sum = meet.iter().fold(FacePolynomial::zero(), |acc, &g| acc.add(&self.x(g)));
        Ok(product.sub(&self.x(join).mul(&sum)))
    }

    /// Degree-`d` check: the `μ`-image of the integrality lattice equals the
    /// lattice of graph classes, and every relation maps to zero.
    pub fn check_iso_degree(&self, d: u32) -> Result<IsoReport, FaceRingError> {
        let k = self.graph.torus_rank();
        let z = self.integrality_lattice(d, None);
        let width = self.graph.num_vertices() * monomials_of_degree(k, d).len();
        let images: Vec<Vec<Int>> = z
            .lattice
            .basis()
            .rows_iter()
            .map(|row| {
                let mut class = self.mu(&FacePolynomial::from_coefficients(&z.monomials, row));
                class.degree = d;
                class.coordinates(k).into_iter().map(|q| q.to_integer()).collect()
            })
            .collect();
        let image = IntegerLattice::from_rows(width, images);
        let target = cohomology::basis_lattice(&self.graph, d)?;
        let mut failed = Vec::new();
        let mut checked = 0;
        for e in 0..self.poset.len() {
            for f in e..self.poset.len() {
                checked += 1;
                if !self.mu(&self.relation(e, f)?).is_zero() {
                    failed.push((e, f));
                }
            }
        }
        Ok(IsoReport {
            degree: d,
            monomial_count: z.monomials.len(),
            image_rank: image.rank(),
            cohomology_rank: target.rank(),
            lattices_equal: image == target,
            relations_checked: checked,
            relations_failed: failed,
        })
    }

    /// Default face label: `G` for the whole graph, vertex names for
    /// vertices, `f<id>` otherwise.
    pub fn face_label(&self, f: FaceId) -> String {
        let face = self.poset.face(f);
        if f == self.top {
            "G".into()
        } else if face.dim == 0 {
            self.graph.vertex_name(face.vertices[0]).to_string()
        } else {
            format!("f{f}")
        }
    }

    pub fn lattice_json(&self, z: &IntegralityLattice, name: impl Fn(FaceId) -> String) -> LatticeJson {
        LatticeJson {
            degree: 2 * z.degree,
            monomials: z.monomials.iter().map(|m| m.iter().map(|&f| name(f)).collect()).collect(),
            hnf_basis: z
                .lattice
                .basis()
                .rows_iter()
                .map(|r| r.iter().map(int_json).collect())
                .collect(),
        }
    }
}

/// Integers as JSON numbers when they fit in 64 bits, strings otherwise.
pub fn int_json(v: &Int) -> serde_json::Value {
    use num_traits::ToPrimitive;
    match v.to_i64() {
        Some(x) => serde_json::Value::from(x),
        None => serde_json::Value::from(v.to_string()),
    }
}
