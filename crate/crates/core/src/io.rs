//! Text formats: edge lists, graph6 and ideal files.
//!
//! An edge list is a header line `r m` followed by `m` lines `u v` with
//! `1 <= u < v <= r`. Corpus files hold any number of graphs, each either
//! an edge-list block or a single graph6 line. Blank lines and `#` comments
//! are skipped everywhere. The JSON forms written by the serializers are
//! accepted too.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::monomial::{Monomial, MonomialIdeal};

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn numbers(line: usize, text: &str) -> Result<Vec<usize>> {
    text.split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::parse(line, format!("expected an integer, found {t:?}"))))
        .collect()
}

pub fn write_edge_list(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.vertex_count(), g.edge_count());
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

/// Reads exactly one graph in edge-list, graph6 or JSON form.
pub fn parse_graph(text: &str) -> Result<Graph> {
    if text.trim_start().starts_with('{') {
        return Ok(serde_json::from_str(text)?);
    }
    let mut graphs = parse_corpus(text)?;
    match graphs.len() {
        1 => Ok(graphs.pop().unwrap()),
        0 => Err(Error::parse(1, "no graph found")),
        k => Err(Error::parse(1, format!("expected one graph, found {k}"))),
    }
}

/// A JSON array of graphs is accepted as well.
pub fn parse_corpus(text: &str) -> Result<Vec<Graph>> {
    if text.trim_start().starts_with('[') {
        return Ok(serde_json::from_str(text)?);
    }
    let mut lines = content_lines(text);
    let mut graphs = Vec::new();
    while let Some((line, head)) = lines.next() {
        if !head.contains(char::is_whitespace) {
            graphs.push(decode_graph6(head).map_err(|e| relocate(e, line))?);
            continue;
        }
        let header = numbers(line, head)?;
        let [r, m] = header[..] else {
            return Err(Error::parse(line, "header must be \"r m\""));
        };
        let mut g = Graph::empty(r).map_err(|e| Error::parse(line, e.to_string()))?;
        for _ in 0..m {
            let Some((line, text)) = lines.next() else {
                return Err(Error::parse(line, format!("expected {m} edges")));
            };
            let [u, v] = numbers(line, text)?[..] else {
                return Err(Error::parse(line, "edge must be \"u v\""));
            };
            if u == 0 || u >= v || v > r {
                return Err(Error::parse(line, format!("edge {u} {v} violates 1 <= u < v <= {r}")));
            }
            g.add_edge(u, v).map_err(|e| Error::parse(line, e.to_string()))?;
        }
        graphs.push(g);
    }
    Ok(graphs)
}

fn relocate(e: Error, line: usize) -> Error {
    match e {
        Error::Parse { msg, .. } => Error::Parse { line, msg },
        other => other,
    }
}

pub fn read_graph(path: &Path) -> Result<Graph> {
    parse_graph(&std::fs::read_to_string(path)?)
}

pub fn read_corpus(path: &Path) -> Result<Vec<Graph>> {
    parse_corpus(&std::fs::read_to_string(path)?)
}

/// graph6 encoding for graphs on at most 62 vertices.
pub fn encode_graph6(g: &Graph) -> String {
    let r = g.vertex_count();
    assert!(r <= 62, "short graph6 form only");
    let mut out = String::new();
    out.push((r as u8 + 63) as char);
    let mut bits = Vec::new();
    for v in 2..=r {
        for u in 1..v {
            bits.push(g.has_edge(u, v));
        }
    }
    for chunk in bits.chunks(6) {
        let mut byte = 0u8;
        for (i, &b) in chunk.iter().enumerate() {
            if b {
                byte |= 1 << (5 - i);
            }
        }
        out.push((byte + 63) as char);
    }
    out
}

pub fn decode_graph6(text: &str) -> Result<Graph> {
    let text = text.strip_prefix(">>graph6<<").unwrap_or(text);
    let bytes: Vec<u8> = text.bytes().collect();
    if bytes.is_empty() || bytes.iter().any(|&b| !(63..=126).contains(&b)) {
        return Err(Error::parse(1, format!("not a graph6 string: {text:?}")));
    }
    if bytes[0] == 126 {
        return Err(Error::parse(1, "graph6 strings above 62 vertices are not supported"));
    }
    let r = (bytes[0] - 63) as usize;
    let needed = (r * r.saturating_sub(1) / 2).div_ceil(6);
    if bytes.len() != 1 + needed {
        return Err(Error::parse(1, format!("graph6 string for {r} vertices needs {needed} data bytes")));
    }
    let mut g = Graph::empty(r)?;
    let mut k = 0;
    for v in 2..=r {
        for u in 1..v {
            let byte = bytes[1 + k / 6] - 63;
            if byte >> (5 - k % 6) & 1 == 1 {
                g.add_edge(u, v)?;
            }
            k += 1;
        }
    }
    Ok(g)
}

/// An ideal file is either ideal JSON (`{"ambient": r, "generators": [...]}`)
/// or text: the number of variables on the first line, then one monomial
/// such as `x1^2*x3` per line.
pub fn parse_ideal(text: &str) -> Result<MonomialIdeal> {
    if text.trim_start().starts_with('{') {
        return Ok(serde_json::from_str(text)?);
    }
    let mut lines = content_lines(text);
    let Some((line, head)) = lines.next() else {
        return Err(Error::parse(1, "empty ideal file"));
    };
    let r: usize = head.parse().map_err(|_| Error::parse(line, "first line must be the number of variables"))?;
    let gens = lines
        .map(|(line, t)| Monomial::parse(t, r).map_err(|e| relocate(e, line)))
        .collect::<Result<Vec<_>>>()?;
    MonomialIdeal::new(r, gens)
}

pub fn read_ideal(path: &Path) -> Result<MonomialIdeal> {
    parse_ideal(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_list_round_trip() {
        let g = Graph::new(4, &[(1, 2), (2, 3), (1, 3), (3, 4)]).unwrap();
        assert_eq!(parse_graph(&write_edge_list(&g)).unwrap(), g);
        let text = "# triangle\n3 3\n1 2\n\n2 3\n1 3  # closing edge\n";
        assert_eq!(parse_graph(text).unwrap(), Graph::cycle(3));
    }

    #[test]
    fn edge_list_errors() {
        assert!(matches!(parse_graph("3 1\n2 1\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_graph("3 2\n1 2\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_graph("3 1\n1 4\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_graph("3 x\n"), Err(Error::Parse { line: 1, .. })));
        assert!(parse_graph("").is_err());
    }

    #[test]
    fn graph6_known_strings() {
        assert_eq!(encode_graph6(&Graph::cycle(3)), "Bw");
        assert_eq!(encode_graph6(&Graph::complete(4)), "C~");
        assert_eq!(encode_graph6(&Graph::path(2)), "A_");
        assert_eq!(decode_graph6("Bw").unwrap(), Graph::cycle(3));
        assert!(decode_graph6("B").is_err());
    }

    #[test]
    fn mixed_corpus() {
        let text = "Bw\n2 1\n1 2\nC~\n";
        let gs = parse_corpus(text).unwrap();
        assert_eq!(gs, vec![Graph::cycle(3), Graph::path(2), Graph::complete(4)]);
        for g in [Graph::cycle(5), Graph::complete(6), Graph::path(9), Graph::empty(1).unwrap()] {
            assert_eq!(decode_graph6(&encode_graph6(&g)).unwrap(), g);
        }
    }

    #[test]
    fn json_graphs() {
        let g = Graph::cycle(4);
        assert_eq!(parse_graph(&serde_json::to_string(&g).unwrap()).unwrap(), g);
        let all = vec![g, Graph::path(3)];
        assert_eq!(parse_corpus(&serde_json::to_string(&all).unwrap()).unwrap(), all);
        assert!(parse_graph(r#"{"vertices":2,"edges":[[1,1]]}"#).is_err());
    }

    #[test]
    fn ideal_files() {
        let json = r#"{"ambient":3,"generators":[[1,1,0],[1,0,1],[0,1,1]]}"#;
        let from_json = parse_ideal(json).unwrap();
        assert_eq!(from_json, MonomialIdeal::edge_ideal(&Graph::cycle(3)));
        assert_eq!(parse_ideal("3\nx1*x2\nx1*x3\nx2*x3\n").unwrap(), from_json);
        assert!(parse_ideal("2\nx3\n").is_err());
    }
}
