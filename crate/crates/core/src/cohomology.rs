//! Graph equivariant cohomology: vertex-indexed polynomials whose
//! differences across every edge are divisible by `r̃_e α(e)`.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{right_kernel, Int, IntMatrix, IntegerLattice, Rat, RatMatrix};
use crate::graph::{GraphError, OrbifoldGkmGraph};
use crate::poly::{divides_linear, divides_linear_rational, monomials_of_degree, Monomial, Poly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CohomologyError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("constant class e{0} is not a degree-2 class of the graph")]
    MissingConstant(usize),
    #[error("class has {found} vertex values, graph has {expected} vertices")]
    WrongSize { expected: usize, found: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Domain {
    Integral,
    Rational,
}

/// A candidate class: one homogeneous polynomial of degree `degree` per vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphClass {
    pub degree: u32,
    pub domain: Domain,
    pub values: Vec<Poly>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassJson {
    /// Cohomological degree, twice the polynomial degree.
    pub degree: u32,
    pub values: BTreeMap<String, String>,
}

impl GraphClass {
    pub fn new(degree: u32, domain: Domain, values: Vec<Poly>) -> Self {
        GraphClass { degree, domain, values }
    }

    pub fn zero(g: &OrbifoldGkmGraph, degree: u32) -> Self {
        let k = g.torus_rank();
        GraphClass::new(degree, Domain::Integral, vec![Poly::zero(k); g.num_vertices()])
    }

    /// The same polynomial at every vertex.
    pub fn constant(g: &OrbifoldGkmGraph, p: &Poly) -> Self {
        GraphClass::new(
            p.grade().unwrap_or(0),
            if p.is_integral() { Domain::Integral } else { Domain::Rational },
            vec![p.clone(); g.num_vertices()],
        )
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Poly::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.values.iter().all(Poly::is_integral)
    }

    /// Coefficients, vertex-major, against `monomials_of_degree(k, degree)`.
    pub fn coordinates(&self, k: usize) -> Vec<Rat> {
        let basis = monomials_of_degree(k, self.degree);
        self.values.iter().flat_map(|p| p.coefficients_in(&basis)).collect()
    }

    pub fn from_coordinates(k: usize, degree: u32, domain: Domain, coords: &[Rat]) -> Self {
        let basis = monomials_of_degree(k, degree);
        let values = coords
            .chunks(basis.len().max(1))
            .map(|c| Poly::from_coefficients(k, &basis, c))
            .collect();
        GraphClass::new(degree, domain, values)
    }

    pub fn to_json(&self, g: &OrbifoldGkmGraph) -> ClassJson {
        ClassJson {
            degree: 2 * self.degree,
            values: g
                .vertex_names()
                .iter()
                .cloned()
                .zip(self.values.iter().map(|p| p.to_string()))
                .collect(),
        }
    }
}

/// True iff every edge congruence holds (integrally with modulus `r̃_e α(e)`,
/// or rationally with modulus `α(e)`).
pub fn is_class(g: &OrbifoldGkmGraph, f: &GraphClass) -> bool {
    if f.values.len() != g.num_vertices() {
        return false;
    }
    if f.domain == Domain::Integral && !f.is_integral() {
        return false;
    }
    g.edges().iter().enumerate().all(|(i, e)| {
        let diff = &f.values[e.from] - &f.values[e.to];
        if diff.is_zero() {
            return true;
        }
        match f.domain {
            Domain::Integral => match g.modulus(2 * i) {
                Ok(m) => matches!(divides_linear(&m, &diff), Ok(Some(_))),
                Err(_) => false,
            },
            Domain::Rational => matches!(divides_linear_rational(g.alpha(2 * i), &diff), Ok(Some(_))),
        }
    })
}

/// Rows of the edge system `f_{i(e)} − f_{t(e)} − ℓ_e g_e = 0`, with unknowns
/// ordered as all `f_v` (degree `d`) then all `g_e` (degree `d − 1`).
fn edge_system(g: &OrbifoldGkmGraph, d: u32, domain: Domain) -> Result<(Vec<Vec<Rat>>, usize), GraphError> {
    let k = g.torus_rank();
    let md = monomials_of_degree(k, d);
    let lower = if d == 0 { Vec::new() } else { monomials_of_degree(k, d - 1) };
    let pos: BTreeMap<&Monomial, usize> = md.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let nf = g.num_vertices() * md.len();
    let cols = nf + g.num_edges() * lower.len();
    let mut rows = Vec::with_capacity(g.num_edges() * md.len());
    for (i, e) in g.edges().iter().enumerate() {
        let ell = match domain {
            Domain::Integral => g.modulus(2 * i)?,
            Domain::Rational => g.alpha(2 * i).clone(),
        };
        let mut block = vec![vec![Rat::zero(); cols]; md.len()];
        for (r, row) in block.iter_mut().enumerate() {
            row[e.from * md.len() + r] += Rat::from_integer(1.into());
            row[e.to * md.len() + r] -= Rat::from_integer(1.into());
        }
        for (j, m) in lower.iter().enumerate() {
            let col = nf + i * lower.len() + j;
            for (v, c) in ell.coefficients().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let target = m.mul(&Monomial::var(k, v));
                block[pos[&target]][col] -= c;
            }
        }
        rows.extend(block);
    }
    Ok((rows, cols))
}

/// The integral lattice `H^{2d}_T(Γ, α)` in the coordinates of
/// [`GraphClass::coordinates`].
pub fn basis_lattice(g: &OrbifoldGkmGraph, d: u32) -> Result<IntegerLattice, GraphError> {
    let k = g.torus_rank();
    let nf = g.num_vertices() * monomials_of_degree(k, d).len();
    let (rows, cols) = edge_system(g, d, Domain::Integral)?;
    if rows.is_empty() {
        return Ok(IntegerLattice::full(nf));
    }
    let ints: Vec<Vec<Int>> = rows
        .into_iter()
        .map(|r| r.into_iter().map(|q| q.to_integer()).collect())
        .collect();
    let a = IntMatrix::from_rows(cols, ints).expect("uniform rows");
    let kernel = right_kernel(&a);
    let projected = kernel.rows_iter().map(|r| r[..nf].to_vec()).collect();
    Ok(IntegerLattice::from_rows(nf, projected))
}

/// A `Z`-basis of the degree-`2d` classes, in canonical (HNF) form.
pub fn basis(g: &OrbifoldGkmGraph, d: u32) -> Result<Vec<GraphClass>, GraphError> {
    let k = g.torus_rank();
    let lattice = basis_lattice(g, d)?;
    Ok(lattice
        .basis()
        .rows_iter()
        .map(|r| {
            let coords: Vec<Rat> = r.iter().cloned().map(Rat::from_integer).collect();
            GraphClass::from_coordinates(k, d, Domain::Integral, &coords)
        })
        .collect())
}

/// A `Q`-basis (reduced row echelon) of the rational degree-`2d` classes.
pub fn rational_basis(g: &OrbifoldGkmGraph, d: u32) -> Result<Vec<Vec<Rat>>, GraphError> {
    let k = g.torus_rank();
    let nf = g.num_vertices() * monomials_of_degree(k, d).len();
    let (rows, cols) = edge_system(g, d, Domain::Rational)?;
    let null = if rows.is_empty() {
        RatMatrix::identity(cols).to_rows()
    } else {
        RatMatrix::from_rows(cols, rows).expect("uniform rows").nullspace()
    };
    let projected: Vec<Vec<Rat>> = null.into_iter().map(|r| r[..nf].to_vec()).collect();
    Ok(crate::exact::rational_row_echelon(projected, nf))
}

pub fn rational_dimension(g: &OrbifoldGkmGraph, d: u32) -> Result<usize, GraphError> {
    Ok(rational_basis(g, d)?.len())
}

/// Ranks of `H*_T(Γ, α; Q) / (H^{>0}(BT))` per cohomological degree `2d`,
/// `d = 0..=d_max`.
pub fn ordinary_ranks(g: &OrbifoldGkmGraph, d_max: u32) -> Result<Vec<(u32, usize)>, CohomologyError> {
    let k = g.torus_rank();
    let bases: Vec<Vec<Vec<Rat>>> = (0..=d_max).map(|d| rational_basis(g, d)).collect::<Result<_, _>>()?;
    // the constant classes must be present in degree 2
    if d_max >= 1 {
        let b1 = &bases[1];
        let width = g.num_vertices() * k;
        for i in 0..k {
            let c = GraphClass::constant(g, &Poly::var(k, i)).coordinates(k);
            let mut rows = b1.clone();
            rows.push(c);
            if crate::exact::rational_row_echelon(rows, width).len() != b1.len() {
                return Err(CohomologyError::MissingConstant(i + 1));
            }
        }
    }
    let mut out = vec![(0, bases[0].len())];
    for d in 1..=d_max {
        let width = g.num_vertices() * monomials_of_degree(k, d).len();
        let mut products = Vec::new();
        for row in &bases[d as usize - 1] {
            let class = GraphClass::from_coordinates(k, d - 1, Domain::Rational, row);
            for i in 0..k {
                let var = Poly::var(k, i);
                let moved = GraphClass::new(d, Domain::Rational, class.values.iter().map(|p| p * &var).collect());
                products.push(moved.coordinates(k));
            }
        }
        let image = crate::exact::rational_row_echelon(products, width).len();
        out.push((2 * d, bases[d as usize].len() - image));
    }
    Ok(out)
}
