//! Plain-text hypergraph files.
//!
//! ```text
//! k N E
//! v1 v2 .. vk      (E lines, 0-based vertex ids, ascending)
//! ```
//!
//! Writing is canonical (edges in sorted order, single spaces, trailing
//! newline), so reading a written file and writing it again reproduces the
//! same bytes.

use std::fmt::Write as _;

use thiserror::Error;
use uptail_core::Hypergraph;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Invalid(#[from] uptail_core::Error),
}

fn parse_err(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Parse {
        line,
        msg: msg.into(),
    }
}

pub fn write_hypergraph(h: &Hypergraph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {} {}", h.k(), h.num_vertices(), h.num_edges());
    for e in h.edges() {
        let row: Vec<String> = e.iter().map(u32::to_string).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

fn numbers(line: &str, lineno: usize) -> Result<Vec<usize>, FormatError> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse()
                .map_err(|_| parse_err(lineno, format!("not a number: {tok:?}")))
        })
        .collect()
}

pub fn read_hypergraph(text: &str) -> Result<Hypergraph, FormatError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty());
    let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
    let head = numbers(header, hl)?;
    let [k, n, e] = head[..] else {
        return Err(parse_err(hl, "header must be `k N E`"));
    };
    let mut edges = Vec::with_capacity(e);
    for (lineno, line) in lines {
        let row = numbers(line, lineno)?;
        if row.len() != k {
            return Err(parse_err(
                lineno,
                format!("expected {k} vertices, found {}", row.len()),
            ));
        }
        edges.push(row);
    }
    if edges.len() != e {
        return Err(parse_err(
            hl,
            format!("header promises {e} edges, found {}", edges.len()),
        ));
    }
    Ok(Hypergraph::new(k, n, edges)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use uptail_core::families::{build_ap, build_schur};

    #[test]
    fn small_file() {
        let h = build_ap(5, 3).unwrap();
        let text = write_hypergraph(&h);
        assert_eq!(text, "3 5 4\n0 1 2\n0 2 4\n1 2 3\n2 3 4\n");
        assert_eq!(read_hypergraph(&text).unwrap(), h);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(read_hypergraph("").is_err());
        assert!(read_hypergraph("3 4\n").is_err());
        assert!(read_hypergraph("3 4 1\n0 1\n").is_err());
        assert!(read_hypergraph("3 4 2\n0 1 2\n").is_err());
        assert!(read_hypergraph("3 4 1\n0 1 9\n").is_err());
        assert!(read_hypergraph("3 4 1\n0 x 2\n").is_err());
    }

    #[test]
    fn unsorted_input_is_canonicalised() {
        let h = read_hypergraph("3 4 2\n3 2 1\n2 1 0\n").unwrap();
        assert_eq!(write_hypergraph(&h), "3 4 2\n0 1 2\n1 2 3\n");
    }

    proptest! {
        #[test]
        fn round_trip_is_byte_identical(n in 1usize..40, schur in any::<bool>()) {
            let h = if schur { build_schur(n).unwrap() } else { build_ap(n, 3).unwrap() };
            let once = write_hypergraph(&h);
            let back = read_hypergraph(&once).unwrap();
            prop_assert_eq!(&back, &h);
            prop_assert_eq!(write_hypergraph(&back), once);
        }
    }
}
