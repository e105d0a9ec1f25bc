//! Plain-text formats for matrices, sign matrices and graphs.
//!
//! All three start with a line holding `n`. Lines whose first non-blank
//! character is `#` are comments; blank lines are ignored.
//!
//! * matrix: `n` rows of `n` whitespace-separated decimals;
//! * sign matrix: `n` rows of exactly `n` characters from `{+, -}`;
//! * graph: one `i j` edge per line, vertices numbered from 1.

use std::fmt::Write as _;

use crate::densemat::{DenseMatrix, SymMatrix};
use crate::error::{Error, Result};
use crate::graph::UGraph;
use crate::signpattern::{Sign, SignMatrix};

/// Content lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_dimension<'a>(lines: &mut impl Iterator<Item = (usize, &'a str)>) -> Result<usize> {
    let (line, text) = lines.next().ok_or_else(|| parse_error(1, "missing dimension line"))?;
    let n: usize = text
        .parse()
        .map_err(|_| parse_error(line, format!("expected a dimension, found {text:?}")))?;
    if n == 0 {
        return Err(parse_error(line, "dimension must be at least 1"));
    }
    Ok(n)
}

pub fn parse_matrix(text: &str) -> Result<DenseMatrix> {
    let mut lines = content_lines(text);
    let n = parse_dimension(&mut lines)?;
    let mut data = Vec::with_capacity(n * n);
    let mut last_line = 1;
    for row in 0..n {
        let (line, content) = lines
            .next()
            .ok_or_else(|| parse_error(last_line, format!("expected {n} rows, found {row}")))?;
        last_line = line;
        let before = data.len();
        for token in content.split_whitespace() {
            let x: f64 = token
                .parse()
                .map_err(|_| parse_error(line, format!("invalid number {token:?}")))?;
            if !x.is_finite() {
                return Err(parse_error(line, format!("non-finite entry {token:?}")));
            }
            data.push(x);
        }
        let found = data.len() - before;
        if found != n {
            return Err(parse_error(line, format!("row has {found} entries, expected {n}")));
        }
    }
    if let Some((line, _)) = lines.next() {
        return Err(parse_error(line, "trailing content after the last row"));
    }
    DenseMatrix::new(n, data)
}

/// Parses and checks symmetry.
pub fn parse_sym_matrix(text: &str) -> Result<SymMatrix> {
    SymMatrix::from_dense(parse_matrix(text)?)
}

/// Writes entries with 17 significant digits, which round-trips every `f64`.
pub fn write_matrix(a: &DenseMatrix) -> String {
    let n = a.n();
    let mut out = format!("{n}\n");
    for i in 0..n {
        let row: Vec<String> = (0..n).map(|j| format!("{:.16e}", a.get(i, j))).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn write_sym_matrix(a: &SymMatrix) -> String {
    write_matrix(&a.to_dense())
}

pub fn parse_sign_matrix(text: &str) -> Result<SignMatrix> {
    let mut lines = content_lines(text);
    let n = parse_dimension(&mut lines)?;
    let mut signs = Vec::with_capacity(n * n);
    let mut last_line = 1;
    for row in 0..n {
        let (line, content) = lines
            .next()
            .ok_or_else(|| parse_error(last_line, format!("expected {n} rows, found {row}")))?;
        last_line = line;
        let before = signs.len();
        for c in content.chars() {
            let s = Sign::from_char(c)
                .ok_or_else(|| parse_error(line, format!("unexpected character {c:?}")))?;
            signs.push(s);
        }
        let found = signs.len() - before;
        if found != n {
            return Err(parse_error(line, format!("row has {found} signs, expected {n}")));
        }
    }
    if let Some((line, _)) = lines.next() {
        return Err(parse_error(line, "trailing content after the last row"));
    }
    SignMatrix::new(n, signs)
}

pub fn write_sign_matrix(s: &SignMatrix) -> String {
    format!("{}\n{s}", s.n())
}

pub fn parse_graph(text: &str) -> Result<UGraph> {
    let mut lines = content_lines(text);
    let n = parse_dimension(&mut lines)?;
    let mut g = UGraph::new(n);
    for (line, content) in lines {
        let fields: Vec<&str> = content.split_whitespace().collect();
        let [a, b] = fields[..] else {
            return Err(parse_error(line, format!("expected `i j`, found {content:?}")));
        };
        let parse_vertex = |tok: &str| -> Result<usize> {
            let v: usize = tok
                .parse()
                .map_err(|_| parse_error(line, format!("invalid vertex {tok:?}")))?;
            if v == 0 || v > n {
                return Err(parse_error(line, format!("vertex {v} outside 1..={n}")));
            }
            Ok(v - 1)
        };
        let (u, v) = (parse_vertex(a)?, parse_vertex(b)?);
        if u == v {
            return Err(parse_error(line, format!("self-loop at vertex {}", u + 1)));
        }
        if !g.add_edge(u, v)? {
            return Err(parse_error(line, format!("duplicate edge {} {}", u + 1, v + 1)));
        }
    }
    Ok(g)
}

pub fn write_graph(g: &UGraph) -> String {
    let mut out = format!("{}\n", g.n());
    for (u, v) in g.edges() {
        writeln!(out, "{} {}", u + 1, v + 1).expect("writing to a String");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn matrix_with_comments() {
        let text = "# witness\n2\n# row one\n2 -1\n-1 2\n";
        let a = parse_matrix(text).unwrap();
        assert_eq!(a.as_slice(), &[2.0, -1.0, -1.0, 2.0]);
    }

    #[test]
    fn matrix_errors_carry_line_numbers() {
        let err = parse_matrix("2\n1 2\n3\n").unwrap_err();
        assert_eq!(err, Error::Parse { line: 3, message: "row has 1 entries, expected 2".into() });
        assert!(matches!(parse_matrix("x\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_matrix("2\n1 2\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_matrix("1\n1\n1\n"), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(parse_matrix("1\nnan\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_matrix(""), Err(Error::Parse { .. })));
    }

    #[test]
    fn sign_matrix_parsing() {
        let s = parse_sign_matrix("4\n+-++\n-+++\n+++-\n++-+\n").unwrap();
        assert_eq!(s.get(0, 1), Sign::Minus);
        assert_eq!(parse_sign_matrix(&write_sign_matrix(&s)).unwrap(), s);
        assert!(matches!(parse_sign_matrix("2\n+-\n-\n"), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(parse_sign_matrix("2\n+ -\n-+\n"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn graph_parsing() {
        let g = parse_graph("3\n1 2\n# middle\n2 3\n").unwrap();
        assert_eq!(g, UGraph::path(3));
        assert_eq!(write_graph(&g), "3\n1 2\n2 3\n");
        assert!(matches!(parse_graph("3\n1 4\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_graph("3\n1 1\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_graph("3\n1 2\n2 1\n"), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(parse_graph("3\n1 2 3\n"), Err(Error::Parse { line: 2, .. })));
    }

    proptest! {
        #[test]
        fn matrix_text_round_trips_exactly(n in 1usize..6, seed in any::<u64>()) {
            use rand::Rng;
            let mut rng = crate::rng::seeded(seed);
            let data: Vec<f64> = (0..n * n).map(|_| rng.gen_range(-1e6..1e6) * rng.gen::<f64>().powi(8)).collect();
            let a = DenseMatrix::new(n, data).unwrap();
            prop_assert_eq!(parse_matrix(&write_matrix(&a)).unwrap(), a);
        }

        #[test]
        fn graph_text_round_trips(n in 1usize..30, seed in any::<u64>()) {
            let g = crate::treesign::random_tree(n, seed);
            prop_assert_eq!(parse_graph(&write_graph(&g)).unwrap(), g);
        }
    }
}
