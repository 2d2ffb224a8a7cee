//! Plain-text edge lists.
//!
//! The first line is `n m`; each of the following `m` lines holds one edge
//! `u v` with 0-based ids separated by whitespace. Loops (`u u`) appear only
//! in multigraph files. [`to_text`] writes edges in lexicographic order with
//! `u <= v`, so a file already in that order round-trips byte for byte.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::graph::Graph;

pub fn to_text(g: &Graph) -> String {
    let mut out = String::with_capacity(16 * (g.edge_count() as usize + 1));
    out.push_str(&format!("{} {}\n", g.n(), g.edge_count()));
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

pub fn write<W: Write>(g: &Graph, mut w: W) -> std::io::Result<()> {
    w.write_all(to_text(g).as_bytes())
}

/// Parses the `n m` header and edge lines. Blank lines are skipped.
pub fn parse_edges(text: &str) -> Result<(usize, Vec<(usize, usize)>)> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let (hline, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        reason: "missing `n m` header".into(),
    })?;
    let [n, m] = parse_pair(header, hline + 1)?;
    let mut edges = Vec::with_capacity(m);
    for (i, line) in lines {
        let [u, v] = parse_pair(line, i + 1)?;
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(Error::Parse {
            line: 1,
            reason: format!("header announces {m} edges, found {}", edges.len()),
        });
    }
    Ok((n, edges))
}

pub fn from_text(text: &str, allow_multi: bool) -> Result<Graph> {
    let (n, edges) = parse_edges(text)?;
    Graph::build(n, &edges, allow_multi)
}

pub fn read<R: BufRead>(mut r: R, allow_multi: bool) -> Result<Graph> {
    let mut text = String::new();
    r.read_to_string(&mut text).map_err(|e| Error::Parse {
        line: 0,
        reason: e.to_string(),
    })?;
    from_text(&text, allow_multi)
}

fn parse_pair(line: &str, lineno: usize) -> Result<[usize; 2]> {
    let mut it = line.split_whitespace().map(|tok| {
        tok.parse::<usize>().map_err(|e| Error::Parse {
            line: lineno,
            reason: format!("`{tok}`: {e}"),
        })
    });
    let a = it.next().transpose()?;
    let b = it.next().transpose()?;
    match (a, b, it.next()) {
        (Some(a), Some(b), None) => Ok([a, b]),
        _ => Err(Error::Parse {
            line: lineno,
            reason: "expected exactly two integers".into(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn sorted_file_round_trips() {
        let text = "4 4\n0 1\n0 2\n1 2\n2 3\n";
        let g = from_text(text, false).unwrap();
        assert_eq!(to_text(&g), text);
    }

    #[test]
    fn multigraph_file() {
        let text = "2 3\n0 1\n0 1\n1 1\n";
        let g = from_text(text, true).unwrap();
        assert_eq!(g.degree(1), 4);
        assert_eq!(to_text(&g), text);
        assert!(from_text(text, false).is_err());
    }

    #[test]
    fn unsorted_input_is_normalised() {
        let g = from_text("3 2\n2 1\n1 0\n", false).unwrap();
        assert_eq!(to_text(&g), "3 2\n0 1\n1 2\n");
    }

    #[test]
    fn malformed_input() {
        assert!(matches!(from_text("", false), Err(Error::Parse { .. })));
        assert!(matches!(
            from_text("3 2\n0 1\n", false),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            from_text("3 1\n0 x\n", false),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            from_text("3 1\n0 1 2\n", false),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    proptest! {
        #[test]
        fn canonical_text_is_a_fixed_point(
            n in 1usize..20,
            raw in proptest::collection::vec((0usize..20, 0usize..20), 0..40),
        ) {
            let edges: Vec<_> = raw.into_iter().map(|(u, v)| (u % n, v % n)).collect();
            let g = Graph::build(n, &edges, true).unwrap();
            let text = to_text(&g);
            let back = from_text(&text, true).unwrap();
            prop_assert_eq!(&back, &g);
            prop_assert_eq!(to_text(&back), text);
        }
    }
}
