//! Edge-list text format.
//!
//! ```text
//! # comment
//! n m planar:1
//! u v p/q
//! ```
//!
//! Vertex indices are 0-based; weights are exact rationals and always written
//! as `p/q`, so a write/parse cycle reproduces the graph exactly.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::rational::{parse_rational, to_pq};

pub fn write_edge_list(g: &WeightedGraph) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{} {} planar:{}",
        g.n(),
        g.m(),
        u8::from(g.declared_planar())
    );
    for e in g.edges() {
        let _ = writeln!(out, "{} {} {}", e.u, e.v, to_pq(&e.w));
    }
    out
}

pub fn parse_edge_list(text: &str) -> Result<WeightedGraph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (hline, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "missing header `n m planar:{0|1}`"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 3 {
        return Err(Error::parse(hline, "header must be `n m planar:{0|1}`"));
    }
    let n: usize = fields[0]
        .parse()
        .map_err(|_| Error::parse(hline, "vertex count is not an integer"))?;
    let m: usize = fields[1]
        .parse()
        .map_err(|_| Error::parse(hline, "edge count is not an integer"))?;
    let planar = match fields[2] {
        "planar:0" => false,
        "planar:1" => true,
        other => return Err(Error::parse(hline, format!("bad planarity flag `{other}`"))),
    };

    let mut edges = Vec::with_capacity(m);
    for (lno, line) in lines {
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 3 {
            return Err(Error::parse(lno, "edge line must be `u v p/q`"));
        }
        let u: usize = f[0]
            .parse()
            .map_err(|_| Error::parse(lno, "bad vertex index"))?;
        let v: usize = f[1]
            .parse()
            .map_err(|_| Error::parse(lno, "bad vertex index"))?;
        let w = parse_rational(f[2]).map_err(|e| Error::parse(lno, e.to_string()))?;
        edges.push((u, v, w));
    }
    if edges.len() != m {
        return Err(Error::parse(
            hline,
            format!("header declares {m} edges but {} were listed", edges.len()),
        ));
    }
    WeightedGraph::new(n, edges, planar)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use proptest::prelude::*;

    #[test]
    fn parses_comments_and_integers() {
        let text = "# ladder\n3 2 planar:1\n0 1 1/2 # spoke\n\n1 2 3\n";
        let g = parse_edge_list(text).unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.edge(0).w, ratio(1, 2));
        assert_eq!(g.edge(1).w, int(3));
        assert!(g.declared_planar());
    }

    #[test]
    fn reports_bad_input() {
        assert!(parse_edge_list("").is_err());
        assert!(parse_edge_list("2 1 planar:2\n0 1 1").is_err());
        assert!(parse_edge_list("2 2 planar:0\n0 1 1").is_err());
        assert!(parse_edge_list("2 1 planar:0\n0 1 x").is_err());
        assert!(parse_edge_list("2 1 planar:0\n0 0 1").is_err());
        match parse_edge_list("2 1 planar:0\n0 1 1/0") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    proptest! {
        #[test]
        fn write_parse_round_trip(
            raw in proptest::collection::vec((0usize..6, 0usize..6, 0i64..50, 1i64..40), 0..15),
        ) {
            let mut seen = std::collections::HashSet::new();
            let edges: Vec<_> = raw
                .into_iter()
                .filter(|&(u, v, _, _)| u != v && seen.insert((u.min(v), u.max(v))))
                .map(|(u, v, p, q)| (u, v, ratio(p, q)))
                .collect();
            let g = WeightedGraph::new(6, edges, false).unwrap();
            let text = write_edge_list(&g);
            prop_assert_eq!(parse_edge_list(&text).unwrap(), g.clone());
            prop_assert_eq!(write_edge_list(&parse_edge_list(&text).unwrap()), text);
        }
    }
}
