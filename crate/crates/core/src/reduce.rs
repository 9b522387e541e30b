//! Graph reduction by local relations.
//!
//! A planar trivalent graph is rewritten into a weighted sum of empty graphs
//! using four moves:
//!
//! * a free loop is deleted, multiplying by `loop_factor`;
//! * a bigon is collapsed, joining its two outer edges, multiplying by
//!   `bigon_factor`;
//! * a triangle is contracted to a single vertex, multiplying by
//!   `triangle_factor`;
//! * a square is replaced by the sum of its two smoothings, which join the
//!   outer edges `(a,b),(c,d)` and `(b,c),(d,a)` respectively.
//!
//! With integer factors `(3, 2, 1)` the result is the Euler characteristic of
//! the decoration space; with `([3], [2], 1)` it is the sl3 web polynomial.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::laurent::{quantum_integer, LaurentPoly};
use crate::map::{CombinatorialMap, Face, HalfEdgeId, MapError, VertexId};

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MoveKind {
    FreeLoop,
    Bigon,
    Triangle,
    Square,
}

impl MoveKind {
    fn degree(self) -> usize {
        match self {
            MoveKind::FreeLoop => 0,
            MoveKind::Bigon => 2,
            MoveKind::Triangle => 3,
            MoveKind::Square => 4,
        }
    }
}

impl fmt::Display for MoveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MoveKind::FreeLoop => "loop",
            MoveKind::Bigon => "bigon",
            MoveKind::Triangle => "triangle",
            MoveKind::Square => "square",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Move {
    FreeLoop(usize),
    Bigon(Face),
    Triangle(Face),
    Square(Face),
}

impl Move {
    pub fn kind(&self) -> MoveKind {
        match self {
            Move::FreeLoop(_) => MoveKind::FreeLoop,
            Move::Bigon(_) => MoveKind::Bigon,
            Move::Triangle(_) => MoveKind::Triangle,
            Move::Square(_) => MoveKind::Square,
        }
    }

    pub fn face(&self) -> Option<&Face> {
        match self {
            Move::FreeLoop(_) => None,
            Move::Bigon(f) | Move::Triangle(f) | Move::Square(f) => Some(f),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReduceError {
    #[error("no free loop to remove")]
    NoFreeLoop,
    #[error("face is not a {expected} of this map")]
    InvalidFace { expected: MoveKind },
    #[error(transparent)]
    NotPlanar(#[from] MapError),
    #[error("graph is not bipartite")]
    NotBipartite,
    #[error("irreducible: no free loop, bigon, triangle or square face in a graph with {} edges", .0.num_edges())]
    Irreducible(Box<CombinatorialMap>),
}

/// Factors applied by the single-child moves. Both square children are
/// weighted by one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationWeights<R> {
    pub loop_factor: R,
    pub bigon_factor: R,
    pub triangle_factor: R,
}

impl RelationWeights<BigInt> {
    /// χ(CP²) = 3, χ(CP¹) = 2, triangle = 1.
    pub fn euler() -> Self {
        RelationWeights {
            loop_factor: BigInt::from(3),
            bigon_factor: BigInt::from(2),
            triangle_factor: BigInt::one(),
        }
    }
}

impl RelationWeights<LaurentPoly> {
    pub fn p3() -> Self {
        RelationWeights {
            loop_factor: quantum_integer(3).unwrap(),
            bigon_factor: quantum_integer(2).unwrap(),
            triangle_factor: LaurentPoly::one(),
        }
    }
}

/// How the next move is chosen when several apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Free loop, then bigon, triangle, square; smallest face first.
    #[default]
    Priority,
    /// Uniformly among all applicable moves, from a seeded generator.
    Random(u64),
}

/// Every applicable move in priority order.
pub fn find_moves(map: &CombinatorialMap) -> Vec<Move> {
    let mut moves: Vec<Move> = (0..map.free_loops()).map(Move::FreeLoop).collect();
    let mut by_kind: BTreeMap<MoveKind, Vec<Move>> = BTreeMap::new();
    for face in map.faces() {
        let kind = match face.degree() {
            2 => MoveKind::Bigon,
            3 => MoveKind::Triangle,
            4 => MoveKind::Square,
            _ => continue,
        };
        if !face.is_simple(map) {
            continue;
        }
        let mv = match kind {
            MoveKind::Bigon => Move::Bigon(face),
            MoveKind::Triangle => Move::Triangle(face),
            _ => Move::Square(face),
        };
        by_kind.entry(kind).or_default().push(mv);
    }
    moves.extend(by_kind.into_values().flatten());
    moves
}

/// The highest-priority move, if any.
pub fn find_move(map: &CombinatorialMap) -> Option<Move> {
    if map.free_loops() > 0 {
        return Some(Move::FreeLoop(0));
    }
    find_moves(map).into_iter().next()
}

pub fn apply_loop(map: &CombinatorialMap, index: usize) -> Result<CombinatorialMap, ReduceError> {
    if index >= map.free_loops() {
        return Err(ReduceError::NoFreeLoop);
    }
    Ok(CombinatorialMap::compact(
        map.raw_rotations().to_vec(),
        map.raw_edges().to_vec(),
        map.free_loops() - 1,
    ))
}

/// Confirms that `face` is a simple face of `map` of the given kind and
/// returns the outer half-edge at each face vertex, in face order.
fn outer_half_edges(
    map: &CombinatorialMap,
    face: &Face,
    kind: MoveKind,
) -> Result<Vec<HalfEdgeId>, ReduceError> {
    let hs = face.half_edges();
    let err = ReduceError::InvalidFace { expected: kind };
    if hs.len() != kind.degree() || hs.iter().any(|h| h.0 >= map.num_half_edges()) {
        return Err(err);
    }
    for (i, &h) in hs.iter().enumerate() {
        if map.next_in_face(h) != hs[(i + 1) % hs.len()] {
            return Err(err);
        }
    }
    if !face.is_simple(map) {
        return Err(err);
    }
    Ok(hs.iter().map(|&h| map.next_at_vertex(h)).collect())
}

/// Deletes `removed` vertices and reconnects the graph through them: each
/// link `(s, t)` joins stubs `s` and `t` (outer half-edges at removed
/// vertices) by a path inside the deleted region. Chains of links and edges
/// that close up without reaching the rest of the graph become free loops.
fn splice(
    map: &CombinatorialMap,
    removed: &[VertexId],
    links: &[(HalfEdgeId, HalfEdgeId)],
) -> CombinatorialMap {
    let gone: BTreeSet<usize> = removed
        .iter()
        .flat_map(|&v| map.rotation(v))
        .map(|h| h.0)
        .collect();
    let mut partner = BTreeMap::new();
    for &(s, t) in links {
        partner.insert(s.0, t.0);
        partner.insert(t.0, s.0);
    }
    let twin = map.raw_twin();

    let mut pairs: Vec<(usize, usize)> = map
        .raw_edges()
        .iter()
        .copied()
        .filter(|(a, b)| !gone.contains(a) && !gone.contains(b))
        .collect();
    let mut visited = BTreeSet::new();
    let mut loops = map.free_loops();
    for &s in partner.keys() {
        if visited.contains(&s) || gone.contains(&twin[s]) {
            continue;
        }
        let mut cur = s;
        loop {
            let p = partner[&cur];
            visited.insert(cur);
            visited.insert(p);
            let y = twin[p];
            if !gone.contains(&y) {
                pairs.push((twin[s], y));
                break;
            }
            cur = y;
        }
    }
    for &s in partner.keys() {
        if visited.contains(&s) {
            continue;
        }
        let mut cur = s;
        loop {
            let p = partner[&cur];
            visited.insert(cur);
            visited.insert(p);
            cur = twin[p];
            if cur == s {
                break;
            }
        }
        loops += 1;
    }

    let removed: BTreeSet<VertexId> = removed.iter().copied().collect();
    let rotations = map
        .vertices()
        .filter(|v| !removed.contains(v))
        .map(|v| map.raw_rotations()[v.0])
        .collect();
    CombinatorialMap::compact(rotations, pairs, loops)
}

/// Collapses a bigon: both vertices go away and the two outer edges become one.
pub fn apply_bigon(map: &CombinatorialMap, face: &Face) -> Result<CombinatorialMap, ReduceError> {
    let outer = outer_half_edges(map, face, MoveKind::Bigon)?;
    Ok(splice(map, &face.vertices(map), &[(outer[0], outer[1])]))
}

/// Contracts a triangle to one vertex carrying its three outer edges.
pub fn apply_triangle(
    map: &CombinatorialMap,
    face: &Face,
) -> Result<CombinatorialMap, ReduceError> {
    let outer = outer_half_edges(map, face, MoveKind::Triangle)?;
    let vertices: BTreeSet<VertexId> = face.vertices(map).into_iter().collect();
    let inner: BTreeSet<usize> = face
        .half_edges()
        .iter()
        .flat_map(|&h| [h.0, map.twin(h).0])
        .collect();
    let mut rotations: Vec<[usize; 3]> = map
        .vertices()
        .filter(|v| !vertices.contains(v))
        .map(|v| map.raw_rotations()[v.0])
        .collect();
    // Walking the face visits the outer edges clockwise around the
    // contracted vertex.
    rotations.push([outer[0].0, outer[2].0, outer[1].0]);
    let pairs = map
        .raw_edges()
        .iter()
        .copied()
        .filter(|(a, _)| !inner.contains(a))
        .collect();
    Ok(CombinatorialMap::compact(
        rotations,
        pairs,
        map.free_loops(),
    ))
}

/// The two smoothings of a square with outer edges `a, b, c, d` in face
/// order: the first joins `(a,b)` and `(c,d)`, the second `(b,c)` and `(d,a)`.
pub fn apply_square(
    map: &CombinatorialMap,
    face: &Face,
) -> Result<(CombinatorialMap, CombinatorialMap), ReduceError> {
    let o = outer_half_edges(map, face, MoveKind::Square)?;
    let vs = face.vertices(map);
    Ok((
        splice(map, &vs, &[(o[0], o[1]), (o[2], o[3])]),
        splice(map, &vs, &[(o[1], o[2]), (o[3], o[0])]),
    ))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceStep<R> {
    /// Leaf: the empty graph, worth one.
    Empty,
    Move {
        kind: MoveKind,
        /// Face half-edges; empty for a free loop.
        face: Vec<HalfEdgeId>,
        /// Factor applied to every child's value.
        multiplier: R,
        children: Vec<usize>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceNode<R> {
    pub depth: usize,
    pub graph: CombinatorialMap,
    pub step: TraceStep<R>,
}

/// Reduction tree stored in preorder; node 0 is the root. A node's index is
/// also the id of its graph snapshot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionTrace<R> {
    nodes: Vec<TraceNode<R>>,
}

impl<R> ReductionTrace<R> {
    pub fn nodes(&self) -> &[TraceNode<R>] {
        &self.nodes
    }

    pub fn node(&self, id: usize) -> &TraceNode<R> {
        &self.nodes[id]
    }

    pub fn children(&self, id: usize) -> &[usize] {
        match &self.nodes[id].step {
            TraceStep::Empty => &[],
            TraceStep::Move { children, .. } => children,
        }
    }

    #[cfg(test)]
    pub(crate) fn nodes_mut_for_tests(&mut self) -> &mut [TraceNode<R>] {
        &mut self.nodes
    }

    pub fn leaves(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| matches!(n.step, TraceStep::Empty))
            .count()
    }
}

impl<R> ReductionTrace<R>
where
    R: Clone + Zero + One + Mul<Output = R>,
{
    /// Sum over root-to-leaf paths of the product of multipliers.
    pub fn value(&self) -> R {
        self.value_of(0)
    }

    pub fn value_of(&self, id: usize) -> R {
        match &self.nodes[id].step {
            TraceStep::Empty => R::one(),
            TraceStep::Move {
                multiplier,
                children,
                ..
            } => {
                let sum = children
                    .iter()
                    .fold(R::zero(), |acc, &c| acc + self.value_of(c));
                multiplier.clone() * sum
            }
        }
    }

    /// Product of multipliers strictly above each node, indexed by node id.
    pub fn path_weights(&self) -> Vec<R> {
        let mut weights = vec![R::one(); self.nodes.len()];
        for id in 0..self.nodes.len() {
            if let TraceStep::Move {
                multiplier,
                children,
                ..
            } = &self.nodes[id].step
            {
                for &c in children {
                    weights[c] = weights[id].clone() * multiplier.clone();
                }
            }
        }
        weights
    }
}

/// One line per node: `<depth> <move> <face-halfedges> <multiplier>`,
/// indented by depth; leaves print `<depth> empty 1`.
impl<R: fmt::Display> fmt::Display for ReductionTrace<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for node in &self.nodes {
            let indent = "  ".repeat(node.depth);
            match &node.step {
                TraceStep::Empty => writeln!(f, "{indent}{} empty 1", node.depth)?,
                TraceStep::Move {
                    kind,
                    face,
                    multiplier,
                    ..
                } => {
                    let face = if face.is_empty() {
                        "-".to_string()
                    } else {
                        face.iter()
                            .map(|h| h.to_string())
                            .collect::<Vec<_>>()
                            .join(",")
                    };
                    writeln!(f, "{indent}{} {kind} {face} {multiplier}", node.depth)?
                }
            }
        }
        Ok(())
    }
}

struct Reducer<'w, R> {
    weights: &'w RelationWeights<R>,
    rng: Option<ChaCha8Rng>,
    trace: Option<Vec<TraceNode<R>>>,
}

impl<R> Reducer<'_, R>
where
    R: Clone + Zero + One + Add<Output = R> + Mul<Output = R>,
{
    fn choose(&mut self, map: &CombinatorialMap) -> Option<Move> {
        match &mut self.rng {
            None => find_move(map),
            Some(rng) => find_moves(map).choose(rng).cloned(),
        }
    }

    fn eval(&mut self, map: CombinatorialMap, depth: usize) -> Result<R, ReduceError> {
        let slot = self.trace.as_mut().map(|nodes| {
            nodes.push(TraceNode {
                depth,
                graph: map.clone(),
                step: TraceStep::Empty,
            });
            nodes.len() - 1
        });
        if map.is_empty() {
            return Ok(R::one());
        }
        let mv = self
            .choose(&map)
            .ok_or_else(|| ReduceError::Irreducible(Box::new(map.clone())))?;
        let (multiplier, next) = match &mv {
            Move::FreeLoop(i) => (
                self.weights.loop_factor.clone(),
                vec![apply_loop(&map, *i)?],
            ),
            Move::Bigon(face) => (
                self.weights.bigon_factor.clone(),
                vec![apply_bigon(&map, face)?],
            ),
            Move::Triangle(face) => (
                self.weights.triangle_factor.clone(),
                vec![apply_triangle(&map, face)?],
            ),
            Move::Square(face) => {
                let (a, b) = apply_square(&map, face)?;
                (R::one(), vec![a, b])
            }
        };
        let mut children = Vec::with_capacity(next.len());
        let mut sum = R::zero();
        for child in next {
            debug_assert!(child.num_edges() < map.num_edges());
            debug_assert!(child.is_planar());
            if let Some(nodes) = &self.trace {
                children.push(nodes.len());
            }
            sum = sum + self.eval(child, depth + 1)?;
        }
        if let (Some(nodes), Some(id)) = (self.trace.as_mut(), slot) {
            nodes[id].step = TraceStep::Move {
                kind: mv.kind(),
                face: mv
                    .face()
                    .map(|f| f.half_edges().to_vec())
                    .unwrap_or_default(),
                multiplier: multiplier.clone(),
                children,
            };
        }
        Ok(multiplier * sum)
    }
}

/// Reduces `map` with the priority strategy and records the full tree.
pub fn reduce<R>(
    map: &CombinatorialMap,
    weights: &RelationWeights<R>,
) -> Result<(R, ReductionTrace<R>), ReduceError>
where
    R: Clone + Zero + One + Add<Output = R> + Mul<Output = R>,
{
    reduce_with(map, weights, Strategy::Priority)
}

pub fn reduce_with<R>(
    map: &CombinatorialMap,
    weights: &RelationWeights<R>,
    strategy: Strategy,
) -> Result<(R, ReductionTrace<R>), ReduceError>
where
    R: Clone + Zero + One + Add<Output = R> + Mul<Output = R>,
{
    map.require_planar()?;
    let mut reducer = Reducer {
        weights,
        rng: match strategy {
            Strategy::Priority => None,
            Strategy::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        },
        trace: Some(Vec::new()),
    };
    let value = reducer.eval(map.clone(), 0)?;
    Ok((
        value,
        ReductionTrace {
            nodes: reducer.trace.unwrap(),
        },
    ))
}

/// Value only, without recording a trace.
pub fn evaluate<R>(
    map: &CombinatorialMap,
    weights: &RelationWeights<R>,
    strategy: Strategy,
) -> Result<R, ReduceError>
where
    R: Clone + Zero + One + Add<Output = R> + Mul<Output = R>,
{
    map.require_planar()?;
    let mut reducer = Reducer {
        weights,
        rng: match strategy {
            Strategy::Priority => None,
            Strategy::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        },
        trace: None,
    };
    reducer.eval(map.clone(), 0)
}

/// χ of the decoration space, via the integer relations (3, 2, 1).
pub fn euler_characteristic(map: &CombinatorialMap) -> Result<BigInt, ReduceError> {
    evaluate(map, &RelationWeights::euler(), Strategy::Priority)
}
