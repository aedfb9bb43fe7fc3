//! Plain-text instance format.
//!
//! ```text
//! # comments and blank lines are ignored
//! HGMST 1
//! <n> <m>
//! <card> <label> ... <label> <weight>     (m lines)
//! ```
//!
//! Labels are arbitrary whitespace-free tokens. When every label is an
//! integer in `[0, n)` it is used as the vertex id directly; otherwise ids
//! are assigned in order of first appearance.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

pub const MAGIC: &str = "HGMST";
pub const VERSION: u32 = 1;

/// A parsed instance with the original label of every vertex id.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub hypergraph: Hypergraph,
    pub labels: Vec<String>,
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Parses the text format, keeping the label mapping.
pub fn parse_instance_labeled(text: &str) -> Result<Instance> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (ln, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
    let mut parts = header.split_whitespace();
    if parts.next() != Some(MAGIC) {
        return Err(parse_err(ln, format!("expected '{MAGIC} {VERSION}' header")));
    }
    match parts.next().map(str::parse::<u32>) {
        Some(Ok(VERSION)) => {}
        _ => return Err(parse_err(ln, format!("unsupported version, expected {VERSION}"))),
    }
    if parts.next().is_some() {
        return Err(parse_err(ln, "trailing tokens after header"));
    }

    let (ln, sizes) = lines.next().ok_or_else(|| parse_err(ln + 1, "missing 'n m' line"))?;
    let nums: Vec<&str> = sizes.split_whitespace().collect();
    let [n, m] = nums.as_slice() else {
        return Err(parse_err(ln, "expected 'n m'"));
    };
    let n: usize = n.parse().map_err(|_| parse_err(ln, format!("bad vertex count '{n}'")))?;
    let m: usize = m.parse().map_err(|_| parse_err(ln, format!("bad edge count '{m}'")))?;

    let mut raw_edges: Vec<(usize, Vec<&str>, f64)> = Vec::with_capacity(m);
    for (ln, line) in lines.by_ref() {
        let toks: Vec<&str> = line.split_whitespace().collect();
        let card: usize = toks[0]
            .parse()
            .map_err(|_| parse_err(ln, format!("bad cardinality '{}'", toks[0])))?;
        if toks.len() != card + 2 {
            return Err(parse_err(
                ln,
                format!("cardinality {card} needs {} tokens, found {}", card + 2, toks.len()),
            ));
        }
        if card < 2 {
            return Err(Error::InvalidHypergraph(format!(
                "line {ln}: edge has {card} vertices, need at least 2"
            )));
        }
        let w: f64 = toks[card + 1]
            .parse()
            .map_err(|_| parse_err(ln, format!("bad weight '{}'", toks[card + 1])))?;
        raw_edges.push((ln, toks[1..=card].to_vec(), w));
        if raw_edges.len() == m {
            break;
        }
    }
    if raw_edges.len() != m {
        return Err(parse_err(
            text.lines().count().max(1),
            format!("expected {m} edges, found {}", raw_edges.len()),
        ));
    }
    if let Some((ln, _)) = lines.next() {
        return Err(parse_err(ln, "unexpected content after the last edge"));
    }

    let dense = raw_edges
        .iter()
        .flat_map(|(_, ls, _)| ls.iter())
        .all(|l| l.parse::<usize>().is_ok_and(|v| v < n));
    let mut ids: HashMap<&str, usize> = HashMap::new();
    let mut labels: Vec<String> = if dense {
        (0..n).map(|v| v.to_string()).collect()
    } else {
        Vec::with_capacity(n)
    };
    let mut edges = Vec::with_capacity(m);
    let mut weights = Vec::with_capacity(m);
    for (ln, ls, w) in &raw_edges {
        let mut e = Vec::with_capacity(ls.len());
        for &l in ls {
            let v = if dense {
                l.parse::<usize>().expect("checked above")
            } else if let Some(&v) = ids.get(l) {
                v
            } else {
                let v = labels.len();
                if v >= n {
                    return Err(parse_err(*ln, format!("more than {n} distinct labels")));
                }
                ids.insert(l, v);
                labels.push(l.to_string());
                v
            };
            e.push(v);
        }
        let mut sorted = e.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|p| p[0] == p[1]) {
            return Err(Error::InvalidHypergraph(format!("line {ln}: edge repeats a vertex")));
        }
        edges.push(e);
        weights.push(*w);
    }
    // Vertices never mentioned in an edge keep synthetic labels.
    while labels.len() < n {
        labels.push(format!("_{}", labels.len()));
    }
    let hypergraph = Hypergraph::new(n, edges, weights)?;
    Ok(Instance { hypergraph, labels })
}

pub fn parse_instance(text: &str) -> Result<Hypergraph> {
    parse_instance_labeled(text).map(|i| i.hypergraph)
}

/// Serializes with dense vertex ids; weights use the shortest decimal that
/// reads back to the same double.
pub fn write_instance(h: &Hypergraph) -> String {
    let mut out = format!("{MAGIC} {VERSION}\n{} {}\n", h.n(), h.num_edges());
    for (e, w) in h.edges().iter().zip(h.weights()) {
        write!(out, "{}", e.len()).unwrap();
        for v in e {
            write!(out, " {v}").unwrap();
        }
        writeln!(out, " {w:?}").unwrap();
    }
    out
}

pub fn read_instance_file(path: &Path) -> Result<Hypergraph> {
    parse_instance(&fs::read_to_string(path)?)
}

pub fn write_instance_file(path: &Path, h: &Hypergraph) -> Result<()> {
    fs::write(path, write_instance(h))?;
    Ok(())
}
