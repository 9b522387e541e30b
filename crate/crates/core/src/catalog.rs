//! Named graphs and the fixture corpus used by tests and `tait verify`.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::map::{CombinatorialMap, EdgeId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("unknown graph family `{0}`")]
    UnknownFamily(String),
    #[error("family `{family}` expects {expected}")]
    BadParameters {
        family: String,
        expected: &'static str,
    },
    #[error("prism({0}) is undefined; use n >= 2")]
    DegeneratePrism(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CatalogFamily {
    Circle,
    Theta,
    K4,
    Prism(usize),
    Cube,
    Dodecahedron,
    /// Not planar; only meaningful to the Tait oracle.
    Petersen,
}

impl CatalogFamily {
    pub fn parse(name: &str, params: &[String]) -> Result<Self, CatalogError> {
        let no_params = |f: CatalogFamily| {
            if params.is_empty() {
                Ok(f)
            } else {
                Err(CatalogError::BadParameters {
                    family: name.to_string(),
                    expected: "no parameters",
                })
            }
        };
        match name {
            "circle" => no_params(CatalogFamily::Circle),
            "theta" => no_params(CatalogFamily::Theta),
            "k4" => no_params(CatalogFamily::K4),
            "cube" => no_params(CatalogFamily::Cube),
            "dodecahedron" => no_params(CatalogFamily::Dodecahedron),
            "petersen" => no_params(CatalogFamily::Petersen),
            "prism" => {
                match params {
                    [n] => n.parse().map(CatalogFamily::Prism).map_err(|_| {
                        CatalogError::BadParameters {
                            family: name.to_string(),
                            expected: "one integer parameter n",
                        }
                    }),
                    _ => Err(CatalogError::BadParameters {
                        family: name.to_string(),
                        expected: "one integer parameter n",
                    }),
                }
            }
            other => Err(CatalogError::UnknownFamily(other.to_string())),
        }
    }

    pub fn build(self) -> Result<CombinatorialMap, CatalogError> {
        Ok(match self {
            CatalogFamily::Circle => circle(),
            CatalogFamily::Theta => theta(),
            CatalogFamily::K4 => k4(),
            CatalogFamily::Prism(n) => prism(n)?,
            CatalogFamily::Cube => cube(),
            CatalogFamily::Dodecahedron => dodecahedron(),
            CatalogFamily::Petersen => petersen(),
        })
    }

    pub fn is_planar(self) -> bool {
        self != CatalogFamily::Petersen
    }
}

impl fmt::Display for CatalogFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatalogFamily::Circle => write!(f, "circle"),
            CatalogFamily::Theta => write!(f, "theta"),
            CatalogFamily::K4 => write!(f, "k4"),
            CatalogFamily::Prism(n) => write!(f, "prism({n})"),
            CatalogFamily::Cube => write!(f, "cube"),
            CatalogFamily::Dodecahedron => write!(f, "dodecahedron"),
            CatalogFamily::Petersen => write!(f, "petersen"),
        }
    }
}

impl FromStr for CatalogFamily {
    type Err = CatalogError;

    /// Accepts `name` or `name(n)` / `name n`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if let Some((name, rest)) = s.split_once('(') {
            let arg = rest.trim_end_matches(')').trim().to_string();
            return CatalogFamily::parse(name.trim(), &[arg]);
        }
        let mut parts = s.split_whitespace();
        let name = parts.next().unwrap_or("");
        let params: Vec<String> = parts.map(str::to_string).collect();
        CatalogFamily::parse(name, &params)
    }
}

/// Builds a rotation system from a straight-line drawing: the half-edges at
/// each vertex are sorted by angle, counterclockwise. Edge `i` owns
/// half-edges `2i` (at its first endpoint) and `2i + 1`.
pub fn from_drawing(
    coords: &[(f64, f64)],
    edges: &[(usize, usize)],
    planar: bool,
) -> CombinatorialMap {
    let mut around: Vec<Vec<(f64, usize)>> = vec![Vec::new(); coords.len()];
    let mut pairs = Vec::with_capacity(edges.len());
    for (i, &(u, v)) in edges.iter().enumerate() {
        let angle = |from: usize, to: usize| {
            let (x0, y0) = coords[from];
            let (x1, y1) = coords[to];
            (y1 - y0).atan2(x1 - x0)
        };
        around[u].push((angle(u, v), 2 * i));
        around[v].push((angle(v, u), 2 * i + 1));
        pairs.push((2 * i, 2 * i + 1));
    }
    let rotations: Vec<(usize, Vec<usize>)> = around
        .into_iter()
        .enumerate()
        .map(|(v, mut hs)| {
            hs.sort_by(|a, b| a.0.total_cmp(&b.0));
            (v, hs.into_iter().map(|(_, h)| h).collect())
        })
        .collect();
    let built = if planar {
        CombinatorialMap::build(&rotations, &pairs, 0)
    } else {
        CombinatorialMap::build_abstract(&rotations, &pairs, 0)
    };
    built.expect("catalog drawing is a valid trivalent map")
}

fn polar(r: f64, turns: f64) -> (f64, f64) {
    let a = TAU * turns;
    (r * a.cos(), r * a.sin())
}

pub fn circle() -> CombinatorialMap {
    CombinatorialMap::circles(1)
}

pub fn theta() -> CombinatorialMap {
    CombinatorialMap::build(
        &[(0, vec![0, 1, 2]), (1, vec![5, 4, 3])],
        &[(0, 3), (1, 4), (2, 5)],
        0,
    )
    .expect("theta is planar")
}

/// The tetrahedron: a center vertex inside a triangle.
pub fn k4() -> CombinatorialMap {
    let coords = [
        (0.0, 0.0),
        polar(1.0, 0.25),
        polar(1.0, 0.25 + 1.0 / 3.0),
        polar(1.0, 0.25 + 2.0 / 3.0),
    ];
    from_drawing(
        &coords,
        &[(0, 1), (0, 2), (0, 3), (1, 2), (2, 3), (3, 1)],
        true,
    )
}

/// The n-gonal prism: an inner and an outer n-cycle joined by spokes.
/// `prism(2)` is the two-vertex-pair multigraph made of two bigons joined
/// by two spokes; `prism(4)` is the cube.
pub fn prism(n: usize) -> Result<CombinatorialMap, CatalogError> {
    match n {
        0 | 1 => Err(CatalogError::DegeneratePrism(n)),
        2 => {
            // t0, t1 joined by a straight and an arched edge, likewise b0, b1
            // below; spokes t0-b0 and t1-b1.
            let rotations = [
                (0, vec![0, 2, 8]),
                (1, vec![3, 1, 10]),
                (2, vec![4, 9, 6]),
                (3, vec![11, 5, 7]),
            ];
            let pairs = [(0, 1), (2, 3), (4, 5), (6, 7), (8, 9), (10, 11)];
            Ok(CombinatorialMap::build(&rotations, &pairs, 0).expect("prism(2) is planar"))
        }
        _ => {
            let mut coords = Vec::with_capacity(2 * n);
            for r in [1.0, 2.0] {
                coords.extend((0..n).map(|i| polar(r, i as f64 / n as f64)));
            }
            let mut edges = Vec::with_capacity(3 * n);
            for i in 0..n {
                let j = (i + 1) % n;
                edges.push((i, j));
                edges.push((n + i, n + j));
                edges.push((i, n + i));
            }
            Ok(from_drawing(&coords, &edges, true))
        }
    }
}

pub fn cube() -> CombinatorialMap {
    prism(4).expect("prism(4) exists")
}

/// Layered drawing: inner pentagon, a zig-zag 10-cycle, outer pentagon.
pub fn dodecahedron() -> CombinatorialMap {
    let mut coords = Vec::with_capacity(20);
    for (r, shift) in [(1.0, 0.0), (2.0, 0.0), (2.5, 0.1), (4.0, 0.1)] {
        coords.extend((0..5).map(|i| polar(r, i as f64 / 5.0 + shift)));
    }
    let (a, b, c, d) = (0, 5, 10, 15);
    let mut edges = Vec::with_capacity(30);
    for i in 0..5 {
        let j = (i + 1) % 5;
        edges.push((a + i, a + j));
        edges.push((a + i, b + i));
        edges.push((b + i, c + i));
        edges.push((c + i, b + j));
        edges.push((c + i, d + i));
        edges.push((d + i, d + j));
    }
    from_drawing(&coords, &edges, true)
}

/// Outer pentagon, inner pentagram, spokes. Not planar.
pub fn petersen() -> CombinatorialMap {
    let mut coords = Vec::with_capacity(10);
    for r in [2.0, 1.0] {
        coords.extend((0..5).map(|i| polar(r, 0.25 + i as f64 / 5.0)));
    }
    let mut edges = Vec::with_capacity(15);
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, 5 + i));
        edges.push((5 + i, 5 + (i + 2) % 5));
    }
    from_drawing(&coords, &edges, false)
}

/// Subdivides `edge` twice and doubles the middle segment, producing a bigon.
/// Preserves planarity and bipartiteness.
pub fn insert_bigon(map: &CombinatorialMap, edge: EdgeId) -> CombinatorialMap {
    let (a, b) = map.edge_half_edges(edge);
    let n = map.num_half_edges();
    let (x0, x1, x2, y0, y1, y2) = (n, n + 1, n + 2, n + 3, n + 4, n + 5);
    let mut rotations = map.raw_rotations().to_vec();
    rotations.push([x0, x1, x2]);
    rotations.push([y0, y2, y1]);
    let mut pairs: Vec<(usize, usize)> = map
        .raw_edges()
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != edge.0)
        .map(|(_, &p)| p)
        .collect();
    pairs.extend([(a.0, x0), (b.0, y0), (x1, y1), (x2, y2)]);
    CombinatorialMap::compact(rotations, pairs, map.free_loops())
}

/// Bipartite planar fixtures, all small enough for brute-force checks
/// (at most 27 edges).
pub fn bipartite_fixtures() -> Vec<(String, CombinatorialMap)> {
    let cube = cube();
    let hex = prism(6).unwrap();
    let mut out = vec![
        ("circle".to_string(), circle()),
        ("empty".to_string(), CombinatorialMap::empty()),
        ("theta".to_string(), theta()),
        ("prism(2)".to_string(), prism(2).unwrap()),
        ("cube".to_string(), cube.clone()),
        ("prism(6)".to_string(), hex.clone()),
        ("prism(8)".to_string(), prism(8).unwrap()),
        (
            "theta+circle".to_string(),
            theta().disjoint_union(&circle()),
        ),
        ("theta+theta".to_string(), theta().disjoint_union(&theta())),
        ("cube+theta".to_string(), cube.disjoint_union(&theta())),
        ("theta+bigon".to_string(), insert_bigon(&theta(), EdgeId(0))),
        (
            "prism(2)+bigon".to_string(),
            insert_bigon(&prism(2).unwrap(), EdgeId(4)),
        ),
        ("cube+bigon".to_string(), insert_bigon(&cube, EdgeId(0))),
        (
            "cube+2bigons".to_string(),
            insert_bigon(&insert_bigon(&cube, EdgeId(0)), EdgeId(5)),
        ),
        ("prism(6)+bigon".to_string(), insert_bigon(&hex, EdgeId(2))),
        (
            "prism(6)+2bigons".to_string(),
            insert_bigon(&insert_bigon(&hex, EdgeId(1)), EdgeId(7)),
        ),
        (
            "prism(6)+3bigons".to_string(),
            insert_bigon(
                &insert_bigon(&insert_bigon(&hex, EdgeId(0)), EdgeId(4)),
                EdgeId(11),
            ),
        ),
    ];
    out.sort_by_key(|(_, g)| g.num_edges());
    out
}

/// Every planar graph of the catalog together with its name; non-bipartite
/// members included.
pub fn planar_catalog() -> Vec<(String, CombinatorialMap)> {
    let mut out = bipartite_fixtures();
    out.push(("k4".to_string(), k4()));
    out.push(("prism(3)".to_string(), prism(3).unwrap()));
    out.push(("prism(5)".to_string(), prism(5).unwrap()));
    out.push(("k4+bigon".to_string(), insert_bigon(&k4(), EdgeId(3))));
    out.push(("dodecahedron".to_string(), dodecahedron()));
    out.sort_by_key(|(_, g)| g.num_edges());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn degrees(g: &CombinatorialMap) -> Vec<usize> {
        let mut d: Vec<usize> = g.faces().iter().map(|f| f.degree()).collect();
        d.sort();
        d
    }

    #[test]
    fn face_degrees_of_named_graphs() {
        assert_eq!(degrees(&theta()), vec![2, 2, 2]);
        assert_eq!(degrees(&k4()), vec![3, 3, 3, 3]);
        assert_eq!(degrees(&cube()), vec![4; 6]);
        assert_eq!(degrees(&prism(2).unwrap()), vec![2, 2, 4, 4]);
        assert_eq!(degrees(&prism(3).unwrap()), vec![3, 3, 4, 4, 4]);
        assert_eq!(degrees(&prism(6).unwrap()), vec![4, 4, 4, 4, 4, 4, 6, 6]);
        assert_eq!(degrees(&dodecahedron()), vec![5; 12]);
    }

    #[test]
    fn sizes() {
        assert_eq!(cube().num_edges(), 12);
        assert_eq!(prism(4).unwrap(), cube());
        assert_eq!(dodecahedron().num_vertices(), 20);
        assert_eq!(dodecahedron().num_edges(), 30);
        let p = petersen();
        assert_eq!((p.num_vertices(), p.num_edges()), (10, 15));
        assert!(!p.is_planar());
        assert!(matches!(prism(1), Err(CatalogError::DegeneratePrism(1))));
    }

    #[test]
    fn bigon_insertion_keeps_planarity_and_bipartiteness() {
        for (name, g) in bipartite_fixtures() {
            assert!(g.is_planar(), "{name}");
            assert!(g.is_bipartite(), "{name}");
        }
        let g = insert_bigon(&cube(), EdgeId(3));
        assert_eq!(g.num_edges(), 15);
        assert_eq!(degrees(&g).iter().filter(|&&d| d == 2).count(), 1);
    }

    #[test]
    fn family_names_parse() {
        assert_eq!(
            "prism(6)".parse::<CatalogFamily>().unwrap(),
            CatalogFamily::Prism(6)
        );
        assert_eq!(
            "prism 3".parse::<CatalogFamily>().unwrap(),
            CatalogFamily::Prism(3)
        );
        assert_eq!("k4".parse::<CatalogFamily>().unwrap(), CatalogFamily::K4);
        assert!(matches!(
            "moebius".parse::<CatalogFamily>(),
            Err(CatalogError::UnknownFamily(_))
        ));
        assert!(CatalogFamily::parse("prism", &[]).is_err());
        assert!(CatalogFamily::parse("theta", &["2".into()]).is_err());
    }
}
