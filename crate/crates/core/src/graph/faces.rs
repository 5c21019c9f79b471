use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::{edge_of, Connection, DartId, EdgeId, GraphError, OrbifoldGkmGraph, VertexId};

pub const DEFAULT_VALENCE_CAP: usize = 8;

pub type FaceId = usize;

/// A connection-invariant regular subgraph. Edges are stored unoriented.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Face {
    pub dim: usize,
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
}

fn sorted_subset<T: Ord>(small: &[T], big: &[T]) -> bool {
    small.iter().all(|x| big.binary_search(x).is_ok())
}

impl Face {
    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn contains_edge(&self, e: EdgeId) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    pub fn is_subface_of(&self, other: &Face) -> bool {
        sorted_subset(&self.vertices, &other.vertices) && sorted_subset(&self.edges, &other.edges)
    }

    /// Darts at `v` that run along edges of this face.
    pub fn darts_at(&self, g: &OrbifoldGkmGraph, v: VertexId) -> Vec<DartId> {
        g.darts_at(v)
            .iter()
            .copied()
            .filter(|&d| self.contains_edge(edge_of(d)))
            .collect()
    }

    fn key(&self) -> (Vec<VertexId>, Vec<EdgeId>) {
        (self.vertices.clone(), self.edges.clone())
    }
}

/// All faces, sorted by dimension, then vertex set, then edge set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FacePoset {
    faces: Vec<Face>,
    valence: usize,
    index: HashMap<(Vec<VertexId>, Vec<EdgeId>), FaceId>,
    skipped: usize,
    edge_ends: Vec<(VertexId, VertexId)>,
}

impl FacePoset {
    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face(&self, id: FaceId) -> &Face {
        &self.faces[id]
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn valence(&self) -> usize {
        self.valence
    }

    /// Seeds whose transported subgraph turned out not to be a face.
    pub fn skipped_seeds(&self) -> usize {
        self.skipped
    }

    pub fn ids_of_dim(&self, d: usize) -> Vec<FaceId> {
        (0..self.faces.len()).filter(|&i| self.faces[i].dim == d).collect()
    }

    pub fn count_by_dim(&self) -> Vec<usize> {
        (0..=self.valence).map(|d| self.ids_of_dim(d).len()).collect()
    }

    /// The whole graph, when it is connected.
    pub fn top(&self) -> Option<FaceId> {
        match self.ids_of_dim(self.valence)[..] {
            [id] => Some(id),
            _ => None,
        }
    }

    pub fn find(&self, vertices: &[VertexId], edges: &[EdgeId]) -> Option<FaceId> {
        self.index.get(&(vertices.to_vec(), edges.to_vec())).copied()
    }

    pub fn vertex_face(&self, v: VertexId) -> Option<FaceId> {
        self.find(&[v], &[])
    }

    pub fn edge_face(&self, g: &OrbifoldGkmGraph, e: EdgeId) -> Option<FaceId> {
        let edge = &g.edges()[e];
        let mut vs = vec![edge.from, edge.to];
        vs.sort_unstable();
        self.find(&vs, &[e])
    }

    pub fn is_subface(&self, a: FaceId, b: FaceId) -> bool {
        self.faces[a].is_subface_of(&self.faces[b])
    }

    /// The least face containing both.
    pub fn join(&self, a: FaceId, b: FaceId) -> Result<FaceId, GraphError> {
        let uppers: Vec<FaceId> = (0..self.faces.len())
            .filter(|&c| self.is_subface(a, c) && self.is_subface(b, c))
            .collect();
        uppers
            .iter()
            .copied()
            .find(|&c| uppers.iter().all(|&u| self.is_subface(c, u)))
            .ok_or(GraphError::NoJoin(a, b))
    }

    /// Connected components of the intersection, each as a face. Empty when
    /// the faces are disjoint.
    pub fn meet_components(&self, a: FaceId, b: FaceId) -> Result<Vec<FaceId>, GraphError> {
        let (fa, fb) = (&self.faces[a], &self.faces[b]);
        let verts: Vec<VertexId> = fa.vertices.iter().copied().filter(|v| fb.contains_vertex(*v)).collect();
        let edges: Vec<EdgeId> = fa.edges.iter().copied().filter(|e| fb.contains_edge(*e)).collect();
        // union-find over the shared vertices
        let pos: HashMap<VertexId, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut parent: Vec<usize> = (0..verts.len()).collect();
        fn root(p: &mut [usize], mut i: usize) -> usize {
            while p[i] != i {
                p[i] = p[p[i]];
                i = p[i];
            }
            i
        }
        let ends = |e: EdgeId| self.edge_ends[e];
        for &e in &edges {
            let (x, y) = ends(e);
            let (Some(&i), Some(&j)) = (pos.get(&x), pos.get(&y)) else {
                return Err(GraphError::FaceNotFound);
            };
            let (ri, rj) = (root(&mut parent, i), root(&mut parent, j));
            parent[ri] = rj;
        }
        let mut groups: BTreeMap<usize, (Vec<VertexId>, Vec<EdgeId>)> = BTreeMap::new();
        for (i, &v) in verts.iter().enumerate() {
            let r = root(&mut parent, i);
            groups.entry(r).or_default().0.push(v);
        }
        for &e in &edges {
            let r = root(&mut parent, pos[&ends(e).0]);
            groups.get_mut(&r).expect("component").1.push(e);
        }
        let mut out: Vec<FaceId> = groups
            .into_values()
            .map(|(vs, es)| self.find(&vs, &es).ok_or(GraphError::FaceNotFound))
            .collect::<Result<_, _>>()?;
        out.sort_unstable();
        Ok(out)
    }
}

fn combinations(n: usize, d: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, d: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == d {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, d, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, d, &mut Vec::new(), &mut out);
    out
}

/// Transports the seed dart set along the connection until closed. Returns
/// `None` when two transports disagree at a vertex.
fn grow(g: &OrbifoldGkmGraph, theta: &Connection, p: VertexId, seed: BTreeSet<DartId>) -> Option<Face> {
    let dim = seed.len();
    let mut sets: BTreeMap<VertexId, BTreeSet<DartId>> = BTreeMap::new();
    sets.insert(p, seed);
    let mut queue = vec![p];
    while let Some(v) = queue.pop() {
        let here = sets[&v].clone();
        for &e in &here {
            let w = g.terminus(e);
            let moved: BTreeSet<DartId> = here.iter().map(|&e1| theta.apply(e, e1)).collect();
            match sets.get(&w) {
                None => {
                    sets.insert(w, moved);
                    queue.push(w);
                }
                Some(existing) if *existing == moved => {}
                Some(_) => return None,
            }
        }
    }
    let vertices: Vec<VertexId> = sets.keys().copied().collect();
    let edges: BTreeSet<EdgeId> = sets.values().flatten().map(|&d| edge_of(d)).collect();
    Some(Face {
        dim,
        vertices,
        edges: edges.into_iter().collect(),
    })
}

/// Enumerates every face by growing each `(vertex, d-subset of darts)` seed.
pub fn enumerate_faces(g: &OrbifoldGkmGraph, theta: &Connection, valence_cap: usize) -> Result<FacePoset, GraphError> {
    let n = g.valence().ok_or(GraphError::Irregular)?;
    if n > valence_cap {
        return Err(GraphError::ValenceCap { valence: n, cap: valence_cap });
    }
    let mut found: BTreeSet<Face> = BTreeSet::new();
    let mut skipped = 0;
    for d in 0..=n {
        for p in 0..g.num_vertices() {
            let darts = g.darts_at(p);
            for combo in combinations(darts.len(), d) {
                let seed: BTreeSet<DartId> = combo.iter().map(|&i| darts[i]).collect();
                match grow(g, theta, p, seed) {
                    Some(face) => {
                        found.insert(face);
                    }
                    None => {
                        skipped += 1;
                        log::debug!("seed at {} of size {d} is not a face", g.vertex_name(p));
                    }
                }
            }
        }
    }
    let faces: Vec<Face> = found.into_iter().collect();
    let index = faces.iter().enumerate().map(|(i, f)| (f.key(), i)).collect();
    let edge_ends = g.edges().iter().map(|e| (e.from, e.to)).collect();
    Ok(FacePoset {
        faces,
        valence: n,
        index,
        skipped,
        edge_ends,
    })
}
