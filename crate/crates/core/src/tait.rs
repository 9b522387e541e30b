//! Brute-force Tait colorings: every edge gets one of three colors and the
//! three edges at each vertex get distinct colors. Rotation data is ignored,
//! so non-planar maps are accepted.

use std::collections::VecDeque;
use std::fmt;

use num_bigint::BigUint;

use crate::map::{CombinatorialMap, EdgeId};

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Color {
    One = 1,
    Two = 2,
    Three = 3,
}

impl Color {
    pub const ALL: [Color; 3] = [Color::One, Color::Two, Color::Three];

    fn index(self) -> usize {
        self as usize - 1
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", *self as u8)
    }
}

/// A coloring of the vertex edges (indexed by [`EdgeId`]) and of each free loop.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TaitColoring {
    pub edges: Vec<Color>,
    pub loops: Vec<Color>,
}

impl TaitColoring {
    pub fn color(&self, e: EdgeId) -> Color {
        self.edges[e.0]
    }
}

/// Checks the vertex condition directly from the incidence data.
pub fn is_tait_coloring(map: &CombinatorialMap, coloring: &TaitColoring) -> bool {
    if coloring.edges.len() != map.num_vertex_edges() || coloring.loops.len() != map.free_loops() {
        return false;
    }
    map.vertices().all(|v| {
        let [a, b, c] = map.incident_edges(v).map(|e| coloring.color(e));
        a != b && b != c && a != c
    })
}

struct Search {
    /// endpoints (u, v) of each edge in search order
    ends: Vec<(usize, usize)>,
    /// bitmask of colors already used at each vertex
    used: Vec<u8>,
}

impl Search {
    fn new(map: &CombinatorialMap, order: &[EdgeId]) -> Self {
        Search {
            ends: order
                .iter()
                .map(|&e| {
                    let (u, v) = map.edge_endpoints(e);
                    (u.0, v.0)
                })
                .collect(),
            used: vec![0; map.num_vertices()],
        }
    }

    fn count(&mut self, depth: usize) -> u128 {
        if depth == self.ends.len() {
            return 1;
        }
        let (u, v) = self.ends[depth];
        let free = !(self.used[u] | self.used[v]) & 0b111;
        let mut total = 0;
        for c in 0..3 {
            let bit = 1u8 << c;
            if free & bit != 0 {
                self.used[u] |= bit;
                self.used[v] |= bit;
                total += self.count(depth + 1);
                self.used[u] &= !bit;
                self.used[v] &= !bit;
            }
        }
        total
    }
}

/// Edge order for the counting search: breadth-first over edge adjacency so
/// each vertex constraint closes soon after it opens.
fn bfs_edge_order(map: &CombinatorialMap) -> Vec<EdgeId> {
    let m = map.num_vertex_edges();
    let mut seen = vec![false; m];
    let mut order = Vec::with_capacity(m);
    for start in map.edges() {
        if seen[start.0] {
            continue;
        }
        seen[start.0] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(e) = queue.pop_front() {
            order.push(e);
            let (u, v) = map.edge_endpoints(e);
            for w in [u, v] {
                for f in map.incident_edges(w) {
                    if !seen[f.0] {
                        seen[f.0] = true;
                        queue.push_back(f);
                    }
                }
            }
        }
    }
    order
}

/// Exact number of Tait colorings. Each free loop contributes a factor 3;
/// a self-loop at a vertex makes the count 0.
pub fn count_tait(map: &CombinatorialMap) -> BigUint {
    if map.edges().any(|e| map.is_self_loop(e)) {
        return BigUint::ZERO;
    }
    let mut total = BigUint::from(3u32).pow(map.free_loops() as u32);
    // Components are independent; counting them separately keeps each
    // partial count small.
    let order = bfs_edge_order(map);
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        let mut comp_vertices = vec![false; map.num_vertices()];
        let (u, v) = map.edge_endpoints(order[start]);
        comp_vertices[u.0] = true;
        comp_vertices[v.0] = true;
        while end < order.len() {
            let (u, v) = map.edge_endpoints(order[end]);
            if !comp_vertices[u.0] && !comp_vertices[v.0] {
                break;
            }
            comp_vertices[u.0] = true;
            comp_vertices[v.0] = true;
            end += 1;
        }
        let count = Search::new(map, &order[start..end]).count(0);
        if count == 0 {
            return BigUint::ZERO;
        }
        total *= BigUint::from(count);
        start = end;
    }
    total
}

/// The first `limit` colorings in lexicographic order of
/// (edge colors by edge id, then loop colors).
pub fn enumerate_tait(map: &CombinatorialMap, limit: usize) -> Vec<TaitColoring> {
    let mut out = Vec::new();
    if limit == 0 || map.edges().any(|e| map.is_self_loop(e)) {
        return out;
    }
    let order: Vec<EdgeId> = map.edges().collect();
    let mut search = Search::new(map, &order);
    let mut colors = vec![Color::One; order.len() + map.free_loops()];
    enumerate_rec(
        &mut search,
        map.num_vertex_edges(),
        0,
        &mut colors,
        limit,
        &mut out,
    );
    out
}

fn enumerate_rec(
    search: &mut Search,
    vertex_edges: usize,
    depth: usize,
    colors: &mut Vec<Color>,
    limit: usize,
    out: &mut Vec<TaitColoring>,
) {
    if out.len() >= limit {
        return;
    }
    if depth == colors.len() {
        out.push(TaitColoring {
            edges: colors[..vertex_edges].to_vec(),
            loops: colors[vertex_edges..].to_vec(),
        });
        return;
    }
    for c in Color::ALL {
        if depth < vertex_edges {
            let (u, v) = search.ends[depth];
            let bit = 1u8 << c.index();
            if (search.used[u] | search.used[v]) & bit != 0 {
                continue;
            }
            search.used[u] |= bit;
            search.used[v] |= bit;
            colors[depth] = c;
            enumerate_rec(search, vertex_edges, depth + 1, colors, limit, out);
            search.used[u] &= !bit;
            search.used[v] &= !bit;
        } else {
            colors[depth] = c;
            enumerate_rec(search, vertex_edges, depth + 1, colors, limit, out);
        }
        if out.len() >= limit {
            return;
        }
    }
}
