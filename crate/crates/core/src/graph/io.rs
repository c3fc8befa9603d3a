//! Plain-text edge lists: a header line `n m`, then one `u v` line per edge.
//! Lines starting with `#` and blank lines are skipped.

use std::fmt::Write as _;

use super::MultiGraph;
use crate::error::{Error, Result};

fn parse_pair(line: &str, lineno: usize, what: &str) -> Result<(usize, usize)> {
    let mut parts = line.split_whitespace();
    let mut next = || -> Result<usize> {
        let tok = parts.next().ok_or_else(|| Error::Parse {
            line: lineno,
            msg: format!("expected two integers for {what}"),
        })?;
        tok.parse().map_err(|_| Error::Parse {
            line: lineno,
            msg: format!("`{tok}` is not a nonnegative integer"),
        })
    };
    let pair = (next()?, next()?);
    if let Some(extra) = parts.next() {
        return Err(Error::Parse { line: lineno, msg: format!("unexpected token `{extra}`") });
    }
    Ok(pair)
}

pub fn parse_edge_list(text: &str) -> Result<MultiGraph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (header_line, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "missing header `n m`".into() })?;
    let (n, m) = parse_pair(header, header_line, "the header")?;
    let mut g = MultiGraph::new(n);
    let mut last_line = header_line;
    for (lineno, line) in lines {
        last_line = lineno;
        let (u, v) = parse_pair(line, lineno, "an edge")?;
        if u >= n || v >= n {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("vertex {} out of range for n = {n}", u.max(v)),
            });
        }
        if u == v {
            return Err(Error::Parse { line: lineno, msg: format!("loop at vertex {u}") });
        }
        g.add_edge(u, v)?;
    }
    if g.edge_count() != m {
        return Err(Error::Parse {
            line: last_line,
            msg: format!("header declares {m} edges but {} were listed", g.edge_count()),
        });
    }
    Ok(g)
}

pub fn to_edge_list(g: &MultiGraph) -> String {
    let mut out = format!("{} {}\n", g.vertex_count(), g.edge_count());
    for &(u, v) in g.edges() {
        writeln!(out, "{u} {v}").expect("writing to a String");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_edge() {
        let g = parse_edge_list("2 1\n0 1\n").unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edges(), &[(0, 1)]);
    }

    #[test]
    fn parallel_pair_keeps_ids() {
        let g = parse_edge_list("2 2\n0 1\n0 1\n").unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.incident(0), &[0, 1]);
    }

    #[test]
    fn loop_reported_with_line() {
        match parse_edge_list("3 1\n0 0\n") {
            Err(Error::Parse { line, msg }) => {
                assert_eq!(line, 2);
                assert!(msg.contains("loop"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn out_of_range_and_garbage() {
        assert!(matches!(parse_edge_list("2 1\n0 2\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_edge_list("2 1\n# c\n0 x\n"), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(parse_edge_list("2 2\n0 1\n"), Err(Error::Parse { .. })));
        assert!(parse_edge_list("").is_err());
    }

    #[test]
    fn comments_skipped_and_round_trip() {
        let text = "# demo\n3 2\n0 1\n# mid\n2 1\n";
        let g = parse_edge_list(text).unwrap();
        let written = to_edge_list(&g);
        assert_eq!(written, "3 2\n0 1\n2 1\n");
        assert_eq!(parse_edge_list(&written).unwrap(), g);
    }
}
