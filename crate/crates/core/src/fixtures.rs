//! Built-in example graphs and characteristic pairs.

use crate::exact::Rat;
use crate::graph::OrbifoldGkmGraph;
use crate::poly::LinearForm;
use crate::quotient::{CharacteristicPair, PolygonPair};

#[derive(Debug, Clone)]
pub enum Fixture {
    Graph(OrbifoldGkmGraph),
    Pair(CharacteristicPair),
}

/// Names accepted by [`by_name`]; `spindle-M-N` and `spindle-diag-M-N` take
/// any positive integers.
pub const NAMES: &[&str] = &[
    "spindle-2-3",
    "spindle-diag-2-3",
    "p1236",
    "p111222",
    "doubled-square",
    "cp2",
    "cp3",
    "p112",
    "nonfree-triangle",
    "two-gon",
];

fn q(num: i64, den: i64) -> Rat {
    Rat::new(num.into(), den.into())
}

fn form(v: &[(i64, i64)]) -> LinearForm {
    LinearForm::new(v.iter().map(|&(a, b)| q(a, b)).collect())
}

/// Two vertices, labels `(1/m) e` and `−(1/n) e`.
pub fn spindle(m: i64, n: i64) -> OrbifoldGkmGraph {
    OrbifoldGkmGraph::from_named(1, &["p", "q"], vec![("p", "q", form(&[(1, m)]), form(&[(-1, n)]))])
        .expect("spindle is well formed")
}

/// Diagonal circle action: labels `(m−n)/m e` and `(n−m)/n e`.
pub fn spindle_diag(m: i64, n: i64) -> OrbifoldGkmGraph {
    OrbifoldGkmGraph::from_named(1, &["p", "q"], vec![("p", "q", form(&[(m - n, m)]), form(&[(n - m, n)]))])
        .expect("spindle is well formed")
}

/// Weighted projective space with weights (1, 2, 3, 6) over the 3-simplex.
pub fn p1236() -> CharacteristicPair {
    CharacteristicPair::simplex(&[vec![-2, -3, -6], vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]])
        .expect("valid pair")
}

/// `P_(1,1,1,2,2,2)(Λ²C⁴)` under the residual rank-3 torus: six fixed points
/// `Pab`, the dart at `Pcd` towards `Pab` labelled `w_ab − (q_ab/q_cd) w_cd`.
pub fn p111222() -> OrbifoldGkmGraph {
    // (name, character in e1..e3, weight)
    let pts: [(&str, [i64; 3], i64); 6] = [
        ("P12", [1, 1, 0], 1),
        ("P13", [1, 0, 1], 1),
        ("P14", [1, 0, 0], 1),
        ("P23", [0, 1, 1], 2),
        ("P24", [0, 1, 0], 2),
        ("P34", [0, 0, 1], 2),
    ];
    let label = |at: usize, to: usize| {
        let (_, wc, qc) = pts[at];
        let (_, wa, qa) = pts[to];
        LinearForm::new((0..3).map(|i| q(wa[i], 1) - q(qa * wc[i], qc)).collect())
    };
    let names: Vec<&str> = pts.iter().map(|p| p.0).collect();
    let mut edges = Vec::new();
    for a in 0..6 {
        for b in a + 1..6 {
            edges.push((names[a], names[b], label(a, b), label(b, a)));
        }
    }
    OrbifoldGkmGraph::from_named(3, &names, edges).expect("well formed")
}

/// Square with both diagonals and doubled vertical sides; every vertex sees
/// `e1/2` (arcs), `e2/3` (sides), `e3/4` (diagonals), `e4/5` (horizontals).
pub fn doubled_square() -> OrbifoldGkmGraph {
    let l = |i: usize| {
        let mut v = vec![(0, 1); 4];
        v[i] = (1, i as i64 + 2);
        form(&v)
    };
    let e = |a: &'static str, b: &'static str, i: usize| (a, b, l(i), l(i));
    OrbifoldGkmGraph::from_named(
        4,
        &["BL", "BR", "TR", "TL"],
        vec![
            e("BL", "BR", 3),
            e("TL", "TR", 3),
            e("BL", "TL", 1),
            e("BR", "TR", 1),
            e("BL", "TR", 2),
            e("BR", "TL", 2),
            e("BL", "TL", 0),
            e("BR", "TR", 0),
        ],
    )
    .expect("well formed")
}

pub fn cp2_polygon() -> PolygonPair {
    PolygonPair::from_i64(&[[1, 0], [0, 1], [-1, -1]]).expect("valid polygon")
}

pub fn p112_polygon() -> PolygonPair {
    PolygonPair::from_i64(&[[1, 0], [0, 1], [-1, -2]]).expect("valid polygon")
}

/// `gcd{D_k} = 2`: odd cohomology does not vanish.
pub fn nonfree_polygon() -> PolygonPair {
    PolygonPair::from_i64(&[[2, 0], [0, 1], [-2, -1]]).expect("valid polygon")
}

pub fn two_gon() -> PolygonPair {
    PolygonPair::from_i64(&[[1, 0], [0, 1]]).expect("valid polygon")
}

fn pair_of(p: PolygonPair) -> Fixture {
    Fixture::Pair(p.to_pair().expect("polygon converts"))
}

fn parse_two(rest: &str) -> Option<(i64, i64)> {
    let (a, b) = rest.split_once('-')?;
    let (a, b) = (a.parse().ok()?, b.parse().ok()?);
    (a > 0 && b > 0).then_some((a, b))
}

pub fn by_name(name: &str) -> Option<Fixture> {
    if let Some(rest) = name.strip_prefix("spindle-diag-") {
        let (m, n) = parse_two(rest)?;
        return (m != n).then(|| Fixture::Graph(spindle_diag(m, n)));
    }
    if let Some(rest) = name.strip_prefix("spindle-") {
        let (m, n) = parse_two(rest)?;
        return Some(Fixture::Graph(spindle(m, n)));
    }
    Some(match name {
        "p1236" => Fixture::Pair(p1236()),
        "p111222" => Fixture::Graph(p111222()),
        "doubled-square" => Fixture::Graph(doubled_square()),
        "cp2" => pair_of(cp2_polygon()),
        "cp3" => Fixture::Pair(CharacteristicPair::projective_space(3).expect("valid pair")),
        "p112" => pair_of(p112_polygon()),
        "nonfree-triangle" => pair_of(nonfree_polygon()),
        "two-gon" => pair_of(two_gon()),
        _ => return None,
    })
}
