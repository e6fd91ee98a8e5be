//! Plain-text matrix and graph formats.
//!
//! Matrix files hold one row per line, entries separated by whitespace or
//! commas. Blank lines and lines starting with `#` are skipped. Edge lists
//! hold one `u v` pair (0-indexed) per line under the same comment rules.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graphsym::Graph;
use crate::matrix::Matrix;
use crate::scalar::Scalar;

fn data_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            return None;
        }
        let tokens = line.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()).collect();
        Some((i + 1, tokens))
    })
}

/// Parses a square matrix.
pub fn parse_matrix<T: Scalar>(text: &str) -> Result<Matrix<T>> {
    let mut rows: Vec<Vec<T>> = Vec::new();
    let mut width = None;
    let mut last_line = 0;
    for (line, tokens) in data_lines(text) {
        last_line = line;
        let row = tokens
            .iter()
            .map(|t| {
                t.parse::<f64>()
                    .map(T::lit)
                    .map_err(|_| Error::Input { line, message: format!("row {}: '{t}' is not a number", rows.len() + 1) })
            })
            .collect::<Result<Vec<T>>>()?;
        let w = *width.get_or_insert(row.len());
        if row.len() != w {
            return Err(Error::Input {
                line,
                message: format!("row {} has {} entries, expected {w}", rows.len() + 1, row.len()),
            });
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Input { line: 0, message: "no matrix rows found".into() });
    }
    let w = width.unwrap_or(0);
    if rows.len() != w {
        return Err(Error::Input { line: last_line, message: format!("expected a square matrix, got {}×{w}", rows.len()) });
    }
    Matrix::from_rows(&rows)
}

/// One row per line, shortest round-trip decimal entries separated by spaces.
pub fn format_matrix<T: Scalar>(m: &Matrix<T>) -> String {
    let mut out = String::new();
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|x| format!("{}", x.as_f64())).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}

/// Parses an edge list; the vertex count is `vertices` or one more than the
/// largest index seen.
pub fn parse_edge_list(text: &str, vertices: Option<usize>) -> Result<Graph> {
    let mut edges = Vec::new();
    for (line, tokens) in data_lines(text) {
        if tokens.len() != 2 {
            return Err(Error::Input { line, message: format!("expected 'u v', found {} tokens", tokens.len()) });
        }
        let parse = |t: &str| {
            t.parse::<usize>().map_err(|_| Error::Input { line, message: format!("'{t}' is not a vertex index") })
        };
        let (u, v) = (parse(tokens[0])?, parse(tokens[1])?);
        if u == v {
            return Err(Error::Input { line, message: format!("self-loop at vertex {u}") });
        }
        edges.push((u, v));
    }
    let seen = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
    let n = vertices.unwrap_or(seen);
    if n < seen {
        return Err(Error::Input { line: 0, message: format!("vertex index {} out of range for {n} vertices", seen - 1) });
    }
    Graph::from_edges(n, &edges)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GraphFormat {
    /// Matrix when the data is square and 0/1-valued, edge list otherwise.
    #[default]
    Auto,
    Edges,
    Matrix,
}

pub fn parse_graph(text: &str, format: GraphFormat) -> Result<Graph> {
    match format {
        GraphFormat::Edges => parse_edge_list(text, None),
        GraphFormat::Matrix => Graph::from_matrix(&parse_matrix::<f64>(text)?),
        GraphFormat::Auto => {
            let lines: Vec<_> = data_lines(text).collect();
            let square = !lines.is_empty()
                && lines.iter().all(|(_, t)| t.len() == lines.len() && t.iter().all(|x| *x == "0" || *x == "1"));
            if square && lines.len() != 2 {
                Graph::from_matrix(&parse_matrix::<f64>(text)?)
            } else {
                parse_edge_list(text, None)
            }
        }
    }
}
