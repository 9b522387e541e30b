//! Planar trivalent multigraphs as combinatorial maps.
//!
//! A map stores half-edges with two permutations: `twin` pairs the two sides of
//! every edge, `next` rotates counterclockwise around a vertex. Faces are the
//! orbits of `next ∘ twin`. Circle components without vertices are kept as a
//! plain counter (`free_loops`); each one counts as a single edge.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use thiserror::Error;

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfEdgeId(pub usize);

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub usize);

/// Index of an edge with both ends at vertices. Edges are numbered in order of
/// their smaller half-edge.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub usize);

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FaceId(pub usize);

impl fmt::Display for HalfEdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("vertex {vertex} has degree {degree}, expected 3")]
    NonTrivalent { vertex: usize, degree: usize },
    #[error("duplicate vertex id {0}")]
    DuplicateVertex(usize),
    #[error("half-edge {0} appears at more than one rotation slot")]
    DuplicateHalfEdge(usize),
    #[error("half-edge {0} is paired more than once")]
    HalfEdgePairedTwice(usize),
    #[error("half-edge {0} is paired with itself")]
    SelfPaired(usize),
    #[error("unmatched half-edge {0}")]
    UnmatchedHalfEdge(usize),
    #[error("half-edge {0} is paired but belongs to no vertex")]
    UnknownHalfEdge(usize),
    #[error("rotation system is not planar: component of vertex {vertex} has V - E + F = {euler}")]
    NotPlanar { vertex: usize, euler: i64 },
}

/// A φ-orbit of half-edges, starting at its smallest half-edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    id: FaceId,
    half_edges: Vec<HalfEdgeId>,
}

impl Face {
    pub fn id(&self) -> FaceId {
        self.id
    }

    pub fn degree(&self) -> usize {
        self.half_edges.len()
    }

    pub fn half_edges(&self) -> &[HalfEdgeId] {
        &self.half_edges
    }

    pub fn vertices(&self, map: &CombinatorialMap) -> Vec<VertexId> {
        self.half_edges.iter().map(|&h| map.vertex_of(h)).collect()
    }

    pub fn edges(&self, map: &CombinatorialMap) -> Vec<EdgeId> {
        self.half_edges.iter().map(|&h| map.edge_of(h)).collect()
    }

    /// True when the boundary walk visits pairwise distinct vertices and edges.
    pub fn is_simple(&self, map: &CombinatorialMap) -> bool {
        let mut vs = self.vertices(map);
        let mut es = self.edges(map);
        vs.sort();
        vs.dedup();
        es.sort();
        es.dedup();
        vs.len() == self.degree() && es.len() == self.degree()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CombinatorialMap {
    twin: Vec<usize>,
    next: Vec<usize>,
    vertex_of: Vec<usize>,
    rotations: Vec<[usize; 3]>,
    edge_of: Vec<usize>,
    edges: Vec<(usize, usize)>,
    free_loops: usize,
    planar: bool,
}

/// Builds a validated planar map. See [`CombinatorialMap::build`].
pub fn build_map(
    rotations: &[(usize, Vec<usize>)],
    pairs: &[(usize, usize)],
    free_loops: usize,
) -> Result<CombinatorialMap, MapError> {
    CombinatorialMap::build(rotations, pairs, free_loops)
}

impl CombinatorialMap {
    pub fn empty() -> Self {
        Self::from_tables(Vec::new(), Vec::new(), 0)
    }

    /// `n` disjoint circles.
    pub fn circles(n: usize) -> Self {
        Self::from_tables(Vec::new(), Vec::new(), n)
    }

    /// Builds a map from vertex rotations (vertex id, half-edges in
    /// counterclockwise order) and edge pairs, rejecting non-planar rotation
    /// systems. Ids may be sparse; they are relabeled densely in ascending order.
    pub fn build(
        rotations: &[(usize, Vec<usize>)],
        pairs: &[(usize, usize)],
        free_loops: usize,
    ) -> Result<Self, MapError> {
        let map = Self::build_abstract(rotations, pairs, free_loops)?;
        map.require_planar()?;
        Ok(map)
    }

    /// Like [`CombinatorialMap::build`] but accepts rotation systems of higher
    /// genus. Such maps are only meaningful to rotation-independent queries.
    pub fn build_abstract(
        rotations: &[(usize, Vec<usize>)],
        pairs: &[(usize, usize)],
        free_loops: usize,
    ) -> Result<Self, MapError> {
        let mut sorted: Vec<&(usize, Vec<usize>)> = rotations.iter().collect();
        sorted.sort_by_key(|(v, _)| *v);
        for w in sorted.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(MapError::DuplicateVertex(w[0].0));
            }
        }

        let mut owner: BTreeMap<usize, ()> = BTreeMap::new();
        let mut dense_rotations = Vec::with_capacity(sorted.len());
        for (v, hs) in &sorted {
            if hs.len() != 3 {
                return Err(MapError::NonTrivalent {
                    vertex: *v,
                    degree: hs.len(),
                });
            }
            for &h in hs {
                if owner.insert(h, ()).is_some() {
                    return Err(MapError::DuplicateHalfEdge(h));
                }
            }
            dense_rotations.push([hs[0], hs[1], hs[2]]);
        }
        let dense: BTreeMap<usize, usize> =
            owner.keys().enumerate().map(|(i, &h)| (h, i)).collect();

        let mut twin = vec![usize::MAX; dense.len()];
        for &(a, b) in pairs {
            if a == b {
                return Err(MapError::SelfPaired(a));
            }
            let da = *dense.get(&a).ok_or(MapError::UnknownHalfEdge(a))?;
            let db = *dense.get(&b).ok_or(MapError::UnknownHalfEdge(b))?;
            if twin[da] != usize::MAX {
                return Err(MapError::HalfEdgePairedTwice(a));
            }
            if twin[db] != usize::MAX {
                return Err(MapError::HalfEdgePairedTwice(b));
            }
            twin[da] = db;
            twin[db] = da;
        }
        if let Some((&h, _)) = dense.iter().find(|(_, &d)| twin[d] == usize::MAX) {
            return Err(MapError::UnmatchedHalfEdge(h));
        }

        for rot in &mut dense_rotations {
            for h in rot.iter_mut() {
                *h = dense[h];
            }
        }
        Ok(Self::from_tables(dense_rotations, twin, free_loops))
    }

    /// Relabels an already consistent (possibly sparse) system densely. Used by
    /// the graph moves, whose outputs are consistent by construction.
    pub(crate) fn compact(
        rotations: Vec<[usize; 3]>,
        pairs: Vec<(usize, usize)>,
        free_loops: usize,
    ) -> Self {
        let mut ids: Vec<usize> = rotations.iter().flatten().copied().collect();
        ids.sort_unstable();
        let dense: BTreeMap<usize, usize> = ids.iter().enumerate().map(|(i, &h)| (h, i)).collect();
        let mut twin = vec![usize::MAX; ids.len()];
        for (a, b) in pairs {
            twin[dense[&a]] = dense[&b];
            twin[dense[&b]] = dense[&a];
        }
        debug_assert!(twin.iter().all(|&t| t != usize::MAX));
        let rotations = rotations
            .into_iter()
            .map(|r| r.map(|h| dense[&h]))
            .collect();
        Self::from_tables(rotations, twin, free_loops)
    }

    fn from_tables(rotations: Vec<[usize; 3]>, twin: Vec<usize>, free_loops: usize) -> Self {
        let n = twin.len();
        let mut next = vec![0; n];
        let mut vertex_of = vec![0; n];
        let rotations: Vec<[usize; 3]> = rotations
            .into_iter()
            .map(|r| {
                let start = (0..3).min_by_key(|&i| r[i]).unwrap();
                [r[start], r[(start + 1) % 3], r[(start + 2) % 3]]
            })
            .collect();
        for (v, r) in rotations.iter().enumerate() {
            for i in 0..3 {
                next[r[i]] = r[(i + 1) % 3];
                vertex_of[r[i]] = v;
            }
        }
        let mut edge_of = vec![0; n];
        let mut edges = Vec::with_capacity(n / 2);
        for h in 0..n {
            if h < twin[h] {
                edge_of[h] = edges.len();
                edge_of[twin[h]] = edges.len();
                edges.push((h, twin[h]));
            }
        }
        let mut map = CombinatorialMap {
            twin,
            next,
            vertex_of,
            rotations,
            edge_of,
            edges,
            free_loops,
            planar: true,
        };
        map.planar = map.euler_violation().is_none();
        map
    }

    pub fn num_half_edges(&self) -> usize {
        self.twin.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.rotations.len()
    }

    /// Edges between vertices, excluding free loops.
    pub fn num_vertex_edges(&self) -> usize {
        self.edges.len()
    }

    /// `|E(G)|`: every free loop counts as one edge.
    pub fn num_edges(&self) -> usize {
        self.edges.len() + self.free_loops
    }

    pub fn free_loops(&self) -> usize {
        self.free_loops
    }

    pub fn is_empty(&self) -> bool {
        self.rotations.is_empty() && self.free_loops == 0
    }

    pub fn is_planar(&self) -> bool {
        self.planar
    }

    pub fn require_planar(&self) -> Result<(), MapError> {
        match self.euler_violation() {
            None => Ok(()),
            Some((vertex, euler)) => Err(MapError::NotPlanar { vertex, euler }),
        }
    }

    pub fn twin(&self, h: HalfEdgeId) -> HalfEdgeId {
        HalfEdgeId(self.twin[h.0])
    }

    pub fn next_at_vertex(&self, h: HalfEdgeId) -> HalfEdgeId {
        HalfEdgeId(self.next[h.0])
    }

    /// φ = σ ∘ twin.
    pub fn next_in_face(&self, h: HalfEdgeId) -> HalfEdgeId {
        HalfEdgeId(self.next[self.twin[h.0]])
    }

    pub fn vertex_of(&self, h: HalfEdgeId) -> VertexId {
        VertexId(self.vertex_of[h.0])
    }

    pub fn edge_of(&self, h: HalfEdgeId) -> EdgeId {
        EdgeId(self.edge_of[h.0])
    }

    /// Half-edges at `v` in counterclockwise order, smallest first.
    pub fn rotation(&self, v: VertexId) -> [HalfEdgeId; 3] {
        self.rotations[v.0].map(HalfEdgeId)
    }

    pub fn edge_half_edges(&self, e: EdgeId) -> (HalfEdgeId, HalfEdgeId) {
        let (a, b) = self.edges[e.0];
        (HalfEdgeId(a), HalfEdgeId(b))
    }

    pub fn edge_endpoints(&self, e: EdgeId) -> (VertexId, VertexId) {
        let (a, b) = self.edges[e.0];
        (VertexId(self.vertex_of[a]), VertexId(self.vertex_of[b]))
    }

    pub fn is_self_loop(&self, e: EdgeId) -> bool {
        let (u, v) = self.edge_endpoints(e);
        u == v
    }

    /// The edges at `v` in rotation order; a self-loop appears twice.
    pub fn incident_edges(&self, v: VertexId) -> [EdgeId; 3] {
        self.rotations[v.0].map(|h| EdgeId(self.edge_of[h]))
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.rotations.len()).map(VertexId)
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.edges.len()).map(EdgeId)
    }

    pub fn half_edges(&self) -> impl Iterator<Item = HalfEdgeId> {
        (0..self.twin.len()).map(HalfEdgeId)
    }

    /// Faces in order of their smallest half-edge.
    pub fn faces(&self) -> Vec<Face> {
        let n = self.twin.len();
        let mut seen = vec![false; n];
        let mut faces = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut orbit = Vec::new();
            let mut h = start;
            while !seen[h] {
                seen[h] = true;
                orbit.push(HalfEdgeId(h));
                h = self.next[self.twin[h]];
            }
            faces.push(Face {
                id: FaceId(faces.len()),
                half_edges: orbit,
            });
        }
        faces
    }

    /// Vertex sets of the connected components that carry vertices, each
    /// sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let nv = self.rotations.len();
        let mut comp = vec![usize::MAX; nv];
        let mut out = Vec::new();
        for s in 0..nv {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![];
            let mut queue = VecDeque::from([s]);
            comp[s] = id;
            while let Some(v) = queue.pop_front() {
                members.push(VertexId(v));
                for &h in &self.rotations[v] {
                    let w = self.vertex_of[self.twin[h]];
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        queue.push_back(w);
                    }
                }
            }
            members.sort();
            out.push(members);
        }
        out
    }

    /// First component (by smallest vertex) whose Euler characteristic is not 2.
    fn euler_violation(&self) -> Option<(usize, i64)> {
        let comps = self.components();
        let mut comp_of = vec![0; self.rotations.len()];
        for (i, c) in comps.iter().enumerate() {
            for v in c {
                comp_of[v.0] = i;
            }
        }
        let mut faces = vec![0i64; comps.len()];
        for face in self.faces() {
            faces[comp_of[self.vertex_of[face.half_edges[0].0]]] += 1;
        }
        comps.iter().zip(faces).find_map(|(c, f)| {
            let v = c.len() as i64;
            let e = 3 * v / 2;
            let chi = v - e + f;
            (chi != 2).then_some((c[0].0, chi))
        })
    }

    /// Proper 2-coloring of the vertices exists. Free loops impose nothing.
    pub fn is_bipartite(&self) -> bool {
        let nv = self.rotations.len();
        let mut side: Vec<Option<bool>> = vec![None; nv];
        for s in 0..nv {
            if side[s].is_some() {
                continue;
            }
            side[s] = Some(false);
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                let sv = side[v].unwrap();
                for &h in &self.rotations[v] {
                    let w = self.vertex_of[self.twin[h]];
                    match side[w] {
                        None => {
                            side[w] = Some(!sv);
                            queue.push_back(w);
                        }
                        Some(sw) if sw == sv => return false,
                        Some(_) => {}
                    }
                }
            }
        }
        true
    }

    /// Components of `self` followed by relabeled components of `other`.
    pub fn disjoint_union(&self, other: &CombinatorialMap) -> CombinatorialMap {
        let offset = self.twin.len();
        let mut twin = self.twin.clone();
        twin.extend(other.twin.iter().map(|&t| t + offset));
        let mut rotations = self.rotations.clone();
        rotations.extend(other.rotations.iter().map(|r| r.map(|h| h + offset)));
        Self::from_tables(rotations, twin, self.free_loops + other.free_loops)
    }

    /// Raw tables for serialization: rotations and edge pairs in dense ids.
    pub(crate) fn raw_rotations(&self) -> &[[usize; 3]] {
        &self.rotations
    }

    pub(crate) fn raw_edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub(crate) fn raw_twin(&self) -> &[usize] {
        &self.twin
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn theta() -> CombinatorialMap {
        build_map(
            &[(0, vec![0, 1, 2]), (1, vec![5, 4, 3])],
            &[(0, 3), (1, 4), (2, 5)],
            0,
        )
        .unwrap()
    }

    #[test]
    fn theta_is_valid_with_three_bigon_faces() {
        let g = theta();
        assert_eq!(g.num_vertices(), 2);
        assert_eq!(g.num_edges(), 3);
        let faces = g.faces();
        assert_eq!(faces.len(), 3);
        assert!(faces.iter().all(|f| f.degree() == 2));
        assert_eq!(faces[0].half_edges(), &[HalfEdgeId(0), HalfEdgeId(5)]);
        assert!(faces.iter().all(|f| f.is_simple(&g)));
    }

    #[test]
    fn single_free_loop() {
        let u = build_map(&[], &[], 1).unwrap();
        assert_eq!(u.free_loops(), 1);
        assert_eq!(u.num_edges(), 1);
        assert!(u.faces().is_empty());
        assert!(u.is_bipartite());
    }

    #[test]
    fn unmatched_half_edge_is_reported() {
        let err = build_map(&[(0, vec![0, 1, 2])], &[(0, 1)], 0).unwrap_err();
        assert_eq!(err, MapError::UnmatchedHalfEdge(2));
    }

    #[test]
    fn construction_errors_are_distinct() {
        assert_eq!(
            build_map(&[(0, vec![0, 1])], &[(0, 1)], 0).unwrap_err(),
            MapError::NonTrivalent {
                vertex: 0,
                degree: 2
            }
        );
        assert_eq!(
            build_map(&[(0, vec![0, 1, 2]), (1, vec![2, 3, 4])], &[], 0).unwrap_err(),
            MapError::DuplicateHalfEdge(2)
        );
        assert_eq!(
            build_map(&[(0, vec![0, 1, 2]), (0, vec![3, 4, 5])], &[], 0).unwrap_err(),
            MapError::DuplicateVertex(0)
        );
        assert_eq!(
            build_map(&[(0, vec![0, 1, 2])], &[(0, 0)], 0).unwrap_err(),
            MapError::SelfPaired(0)
        );
        assert_eq!(
            build_map(
                &[(0, vec![0, 1, 2]), (1, vec![3, 4, 5])],
                &[(0, 3), (0, 4)],
                0
            )
            .unwrap_err(),
            MapError::HalfEdgePairedTwice(0)
        );
        assert_eq!(
            build_map(&[(0, vec![0, 1, 2])], &[(0, 9)], 0).unwrap_err(),
            MapError::UnknownHalfEdge(9)
        );
    }

    #[test]
    fn twisted_theta_is_not_planar() {
        // Same rotation at both vertices: a theta graph drawn on the torus.
        let err = build_map(
            &[(0, vec![0, 1, 2]), (1, vec![3, 4, 5])],
            &[(0, 3), (1, 4), (2, 5)],
            0,
        )
        .unwrap_err();
        assert!(matches!(
            err,
            MapError::NotPlanar {
                vertex: 0,
                euler: 0
            }
        ));
        let lax = CombinatorialMap::build_abstract(
            &[(0, vec![0, 1, 2]), (1, vec![3, 4, 5])],
            &[(0, 3), (1, 4), (2, 5)],
            0,
        )
        .unwrap();
        assert!(!lax.is_planar());
    }

    #[test]
    fn sparse_ids_are_compacted() {
        let g = build_map(
            &[(7, vec![10, 20, 30]), (3, vec![60, 50, 40])],
            &[(10, 40), (20, 50), (30, 60)],
            0,
        )
        .unwrap();
        // vertex 3 sorts first, so its rotation (40 50 60 reversed) becomes vertex 0
        assert_eq!(
            g.rotation(VertexId(0)),
            [HalfEdgeId(3), HalfEdgeId(5), HalfEdgeId(4)]
        );
        assert_eq!(g.twin(HalfEdgeId(0)), HalfEdgeId(3));
    }

    #[test]
    fn self_loop_vertex_structure() {
        // Vertex 0 carries a self-loop (0,1) and connects to vertex 1 which has
        // a self-loop as well: the "dumbbell".
        let g = build_map(
            &[(0, vec![0, 1, 2]), (1, vec![3, 4, 5])],
            &[(0, 1), (2, 3), (4, 5)],
            0,
        )
        .unwrap();
        assert!(g.is_self_loop(EdgeId(0)));
        assert!(!g.is_bipartite());
        assert_eq!(g.faces().len(), 3);
    }

    #[test]
    fn disjoint_union_adds_components() {
        let u = CombinatorialMap::circles(1);
        let uu = u.disjoint_union(&u);
        assert_eq!(uu.free_loops(), 2);
        let tu = theta().disjoint_union(&u);
        assert_eq!(tu.num_vertices(), 2);
        assert_eq!(tu.num_edges(), 4);
        assert_eq!(CombinatorialMap::empty().disjoint_union(&theta()), theta());
        let tt = theta().disjoint_union(&theta());
        assert!(tt.is_planar());
        assert_eq!(tt.components().len(), 2);
    }
}
