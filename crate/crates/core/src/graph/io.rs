use std::fmt::Write;

use super::Graph;
use crate::error::{Error, Result};

/// Parses `n m` followed by `m` lines `u v`. Blank lines and `#` comments
/// are skipped.
pub fn read_edge_list(text: &str) -> Result<Graph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (line, header) = lines.next().ok_or(Error::Parse {
        line: 0,
        msg: "empty input".into(),
    })?;
    let (n, m) = pair(line, header)?;
    let mut edges = Vec::with_capacity(m);
    for (line, l) in lines {
        let (u, v) = pair(line, l)?;
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(Error::Parse {
            line,
            msg: format!("header declares {m} edges, found {}", edges.len()),
        });
    }
    Graph::new(n, edges)
}

fn pair(line: usize, text: &str) -> Result<(usize, usize)> {
    let fields: Vec<&str> = text.split_whitespace().collect();
    let parse = |s: &str| {
        s.parse::<usize>().map_err(|e| Error::Parse {
            line,
            msg: format!("{s:?}: {e}"),
        })
    };
    match fields.as_slice() {
        [a, b] => Ok((parse(a)?, parse(b)?)),
        _ => Err(Error::Parse {
            line,
            msg: format!("expected two integers, got {text:?}"),
        }),
    }
}

/// Canonical form: header, then edges sorted lexicographically.
pub fn write_edge_list(g: &Graph) -> String {
    let mut edges = g.edges().to_vec();
    edges.sort_unstable();
    let mut out = String::new();
    writeln!(out, "{} {}", g.n_vertices(), edges.len()).unwrap();
    for (a, b) in edges {
        writeln!(out, "{a} {b}").unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_canonical() {
        let g = Graph::new(4, [(3, 2), (0, 1), (1, 3)]).unwrap();
        let text = write_edge_list(&g);
        assert_eq!(text, "4 3\n0 1\n1 3\n2 3\n");
        let h = read_edge_list(&text).unwrap();
        assert_eq!(write_edge_list(&h), text);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(read_edge_list("").is_err());
        assert!(read_edge_list("3 1\n0 0\n").is_err());
        assert!(read_edge_list("3 2\n0 1\n1 0\n").is_err());
        assert!(read_edge_list("3 2\n0 1\n").is_err());
        assert!(read_edge_list("3 1\n0 x\n").is_err());
        assert!(read_edge_list("# c\n3 1\n\n0 2\n").is_ok());
    }
}
