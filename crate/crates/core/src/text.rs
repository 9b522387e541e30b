//! Line-based text format for maps.
//!
//! ```text
//! # comment
//! vertex <vid>: <h1> <h2> <h3>     # counterclockwise rotation
//! edge <eid>: <ha> <hb>
//! loops <n>                        # free circles, default 0
//! ```
//!
//! The parser accepts non-planar rotation systems (the Tait oracle does not
//! need an embedding); callers that do need one check
//! [`CombinatorialMap::require_planar`].

use std::collections::BTreeSet;
use std::fmt::Write;

use thiserror::Error;

use crate::map::{CombinatorialMap, MapError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: duplicate {kind} id {id}")]
    DuplicateId {
        line: usize,
        kind: &'static str,
        id: usize,
    },
    #[error("line {line}: vertex {vertex} lists {degree} half-edges, expected 3")]
    Degree {
        line: usize,
        vertex: usize,
        degree: usize,
    },
    #[error(transparent)]
    Map(#[from] MapError),
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        message: message.into(),
    }
}

fn int(token: &str, line: usize) -> Result<usize, ParseError> {
    token.parse::<usize>().map_err(|_| {
        syntax(
            line,
            format!("expected a non-negative integer, found `{token}`"),
        )
    })
}

/// Splits `<keyword> <id>: <rest>` and returns (id, rest tokens).
fn header<'a>(
    rest: &'a str,
    line: usize,
    keyword: &str,
) -> Result<(usize, Vec<&'a str>), ParseError> {
    let (id, body) = rest
        .split_once(':')
        .ok_or_else(|| syntax(line, format!("expected `{keyword} <id>: ...`")))?;
    let id = int(id.trim(), line)?;
    Ok((id, body.split_whitespace().collect()))
}

pub fn parse_map(input: &str) -> Result<CombinatorialMap, ParseError> {
    let mut rotations = Vec::new();
    let mut pairs = Vec::new();
    let mut vertex_ids = BTreeSet::new();
    let mut edge_ids = BTreeSet::new();
    let mut loops: Option<usize> = None;

    for (idx, raw) in input.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap().trim();
        if content.is_empty() {
            continue;
        }
        let (keyword, rest) = content
            .split_once(char::is_whitespace)
            .unwrap_or((content, ""));
        match keyword {
            "vertex" => {
                let (id, tokens) = header(rest, line, "vertex")?;
                if !vertex_ids.insert(id) {
                    return Err(ParseError::DuplicateId {
                        line,
                        kind: "vertex",
                        id,
                    });
                }
                let hs = tokens
                    .iter()
                    .map(|t| int(t, line))
                    .collect::<Result<Vec<_>, _>>()?;
                if hs.len() != 3 {
                    return Err(ParseError::Degree {
                        line,
                        vertex: id,
                        degree: hs.len(),
                    });
                }
                rotations.push((id, hs));
            }
            "edge" => {
                let (id, tokens) = header(rest, line, "edge")?;
                if !edge_ids.insert(id) {
                    return Err(ParseError::DuplicateId {
                        line,
                        kind: "edge",
                        id,
                    });
                }
                if tokens.len() != 2 {
                    return Err(syntax(
                        line,
                        format!("edge {id} needs exactly 2 half-edges"),
                    ));
                }
                pairs.push((int(tokens[0], line)?, int(tokens[1], line)?));
            }
            "loops" => {
                if loops.is_some() {
                    return Err(syntax(line, "`loops` given more than once"));
                }
                let tokens: Vec<&str> = rest.split_whitespace().collect();
                if tokens.len() != 1 {
                    return Err(syntax(line, "expected `loops <n>`"));
                }
                loops = Some(int(tokens[0], line)?);
            }
            other => return Err(syntax(line, format!("unknown directive `{other}`"))),
        }
    }
    Ok(CombinatorialMap::build_abstract(
        &rotations,
        &pairs,
        loops.unwrap_or(0),
    )?)
}

/// Canonical serialization: dense ids in ascending order, each rotation
/// starting at its smallest half-edge, edges as (smaller, larger). The
/// `loops` line is omitted when there are none.
pub fn serialize_map(map: &CombinatorialMap) -> String {
    let mut out = String::new();
    for (v, r) in map.raw_rotations().iter().enumerate() {
        writeln!(out, "vertex {v}: {} {} {}", r[0], r[1], r[2]).unwrap();
    }
    for (e, (a, b)) in map.raw_edges().iter().enumerate() {
        writeln!(out, "edge {e}: {a} {b}").unwrap();
    }
    if map.free_loops() > 0 {
        writeln!(out, "loops {}", map.free_loops()).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const THETA: &str = "\
# theta graph
vertex 0: 0 1 2
vertex 1: 5 4 3   # reversed
edge 0: 0 3
edge 1: 1 4
edge 2: 2 5
";

    #[test]
    fn parses_theta_and_serializes_canonically() {
        let g = parse_map(THETA).unwrap();
        assert_eq!(g.num_vertices(), 2);
        let text = serialize_map(&g);
        assert_eq!(
            text,
            "vertex 0: 0 1 2\nvertex 1: 3 5 4\nedge 0: 0 3\nedge 1: 1 4\nedge 2: 2 5\n"
        );
        assert_eq!(parse_map(&text).unwrap(), g);
    }

    #[test]
    fn circle_is_a_single_line() {
        let g = parse_map("loops 1\n").unwrap();
        assert_eq!(g.free_loops(), 1);
        assert_eq!(serialize_map(&g), "loops 1\n");
        assert!(parse_map("").unwrap().is_empty());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            parse_map("vertex 0: 0 1 2\nvertex 0: 3 4 5\n"),
            Err(ParseError::DuplicateId {
                kind: "vertex",
                id: 0,
                ..
            })
        ));
        assert!(matches!(
            parse_map("vertex 0: 0 1 2\nvertex 1: 3 4 5\nedge 0: 0 3\nedge 0: 1 4\n"),
            Err(ParseError::DuplicateId {
                kind: "edge",
                line: 4,
                ..
            })
        ));
        assert!(matches!(
            parse_map("vertex 0: 0 1 x\n"),
            Err(ParseError::Syntax { line: 1, .. })
        ));
        assert!(matches!(
            parse_map("vertex 0: 0 1 2 3\n"),
            Err(ParseError::Degree { degree: 4, .. })
        ));
        assert!(matches!(
            parse_map("vertex -1: 0 1 2\n"),
            Err(ParseError::Syntax { .. })
        ));
        assert!(matches!(
            parse_map("loops 1\nloops 2\n"),
            Err(ParseError::Syntax { line: 2, .. })
        ));
        assert!(matches!(
            parse_map("face 0: 1 2\n"),
            Err(ParseError::Syntax { .. })
        ));
        assert!(matches!(
            parse_map("vertex 0: 0 1 2\nedge 0: 0 1\n"),
            Err(ParseError::Map(MapError::UnmatchedHalfEdge(2)))
        ));
    }

    #[test]
    fn non_planar_input_parses_but_is_flagged() {
        let g =
            parse_map("vertex 0: 0 1 2\nvertex 1: 3 4 5\nedge 0: 0 3\nedge 1: 1 4\nedge 2: 2 5\n")
                .unwrap();
        assert!(!g.is_planar());
        assert!(g.require_planar().is_err());
    }
}
