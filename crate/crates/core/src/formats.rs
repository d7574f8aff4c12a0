//! Text formats: edge lists, graph6, sparse6 and permutation generator files.

use thiserror::Error;

use crate::graph::{Graph, GraphError};
use crate::perm::{PermError, Permutation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("parse error at line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("parse error at byte {offset}: {message}")]
    Byte { offset: usize, message: String },
    #[error("bad permutation at line {line}: {source}")]
    BadPermutation { line: usize, source: PermError },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn line_err(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Line { line, message: message.into() }
}

fn byte_err(offset: usize, message: impl Into<String>) -> FormatError {
    FormatError::Byte { offset, message: message.into() }
}

/// Parses `n m` followed by `m` lines `u v`. Blank lines and lines
/// starting with `#` are skipped.
pub fn parse_edge_list(text: &str) -> Result<Graph, FormatError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hl, header) = lines.next().ok_or_else(|| line_err(1, "missing `n m` header"))?;
    let nums = parse_usizes(header, hl)?;
    let [n, m] = nums[..] else {
        return Err(line_err(hl, "header must be `n m`"));
    };
    let mut edges = Vec::with_capacity(m);
    for (ln, l) in lines.by_ref().take(m) {
        let nums = parse_usizes(l, ln)?;
        let [u, v] = nums[..] else {
            return Err(line_err(ln, "edge line must be `u v`"));
        };
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(line_err(
            text.lines().count() + 1,
            format!("expected {m} edges, found {}", edges.len()),
        ));
    }
    if let Some((ln, _)) = lines.next() {
        return Err(line_err(ln, "trailing data after the declared edges"));
    }
    Ok(Graph::new(n, &edges)?)
}

fn parse_usizes(s: &str, line: usize) -> Result<Vec<usize>, FormatError> {
    s.split_whitespace()
        .map(|t| t.parse::<usize>().map_err(|e| line_err(line, format!("`{t}`: {e}"))))
        .collect()
}

const MAX_LONG_N: usize = 258_047;

fn encode_n(n: usize, out: &mut Vec<u8>) {
    if n <= 62 {
        out.push(n as u8 + 63);
    } else {
        assert!(n <= MAX_LONG_N, "graph6 supports at most {MAX_LONG_N} vertices here");
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    }
}

/// Returns `(n, bytes consumed)`.
fn decode_n(data: &[u8], start: usize) -> Result<(usize, usize), FormatError> {
    let b0 = *data.get(start).ok_or_else(|| byte_err(start, "missing vertex count"))?;
    if !(63..=126).contains(&b0) {
        return Err(byte_err(start, format!("byte {b0} outside the printable range")));
    }
    if b0 < 126 {
        return Ok(((b0 - 63) as usize, 1));
    }
    if data.get(start + 1) == Some(&126) {
        return Err(byte_err(start, "the 36-bit vertex count form is not supported"));
    }
    let mut n = 0usize;
    for k in 1..=3 {
        let b = *data.get(start + k).ok_or_else(|| byte_err(start + k, "truncated vertex count"))?;
        if !(63..=126).contains(&b) {
            return Err(byte_err(start + k, format!("byte {b} outside the printable range")));
        }
        n = (n << 6) | (b - 63) as usize;
    }
    Ok((n, 4))
}

fn pack_bits(bits: &[bool], out: &mut Vec<u8>) {
    for chunk in bits.chunks(6) {
        let mut v = 0u8;
        for i in 0..6 {
            v <<= 1;
            if chunk.get(i).copied().unwrap_or(false) {
                v |= 1;
            }
        }
        out.push(v + 63);
    }
}

fn unpack_bits(data: &[u8], start: usize) -> Result<Vec<bool>, FormatError> {
    let mut bits = Vec::with_capacity(6 * (data.len() - start));
    for (i, &b) in data.iter().enumerate().skip(start) {
        if !(63..=126).contains(&b) {
            return Err(byte_err(i, format!("byte {b} outside the printable range")));
        }
        let v = b - 63;
        for k in (0..6).rev() {
            bits.push((v >> k) & 1 == 1);
        }
    }
    Ok(bits)
}

/// Encodes a graph in graph6 (no header, no newline).
pub fn to_graph6(g: &Graph) -> String {
    let n = g.order();
    let mut out = Vec::new();
    encode_n(n, &mut out);
    let mut bits = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for j in 1..n {
        for i in 0..j {
            bits.push(g.has_edge(i, j));
        }
    }
    pack_bits(&bits, &mut out);
    String::from_utf8(out).expect("printable ascii")
}

/// Decodes one graph6 string (an optional `>>graph6<<` header is accepted).
pub fn from_graph6(s: &str) -> Result<Graph, FormatError> {
    let s = s.trim_end_matches(['\n', '\r']);
    let s = s.strip_prefix(">>graph6<<").unwrap_or(s);
    let data = s.as_bytes();
    let (n, used) = decode_n(data, 0)?;
    let needed_bits = n * n.saturating_sub(1) / 2;
    let needed_bytes = needed_bits.div_ceil(6);
    if data.len() - used != needed_bytes {
        return Err(byte_err(
            data.len(),
            format!("expected {needed_bytes} adjacency bytes, found {}", data.len() - used),
        ));
    }
    let bits = unpack_bits(data, used)?;
    let mut edges = Vec::new();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if bits[k] {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    Ok(Graph::new(n, &edges)?)
}

fn bits_for(n: usize) -> usize {
    // bits needed to write n - 1
    let mut k = 0;
    while (1usize << k) < n {
        k += 1;
    }
    k
}

fn push_value(bits: &mut Vec<bool>, x: usize, k: usize) {
    for i in (0..k).rev() {
        bits.push((x >> i) & 1 == 1);
    }
}

/// Encodes a graph in sparse6 (leading `:`, no newline).
pub fn to_sparse6(g: &Graph) -> String {
    let n = g.order();
    let k = bits_for(n);
    let mut out = vec![b':'];
    encode_n(n, &mut out);
    let mut edges: Vec<(usize, usize)> = g.edges().iter().map(|&(u, v)| (v, u)).collect();
    edges.sort_unstable();
    let mut bits = Vec::new();
    let mut cur = 0usize;
    for (v, u) in edges {
        if v == cur {
            bits.push(false);
            push_value(&mut bits, u, k);
        } else if v == cur + 1 {
            cur += 1;
            bits.push(true);
            push_value(&mut bits, u, k);
        } else {
            cur = v;
            bits.push(true);
            push_value(&mut bits, v, k);
            bits.push(false);
            push_value(&mut bits, u, k);
        }
    }
    let pad = (6 - bits.len() % 6) % 6;
    if k < 6 && n == (1 << k) && pad >= k && cur + 1 < n {
        bits.push(false);
    }
    while bits.len() % 6 != 0 {
        bits.push(true);
    }
    pack_bits(&bits, &mut out);
    String::from_utf8(out).expect("printable ascii")
}

/// Decodes one sparse6 string. Loops and multi-edges are rejected because
/// [`Graph`] is simple.
pub fn from_sparse6(s: &str) -> Result<Graph, FormatError> {
    let s = s.trim_end_matches(['\n', '\r']);
    let s = s.strip_prefix(">>sparse6<<").unwrap_or(s);
    let data = s.as_bytes();
    if data.first() != Some(&b':') {
        return Err(byte_err(0, "sparse6 data must start with `:`"));
    }
    let (n, used) = decode_n(data, 1)?;
    let k = bits_for(n);
    let bits = unpack_bits(data, 1 + used)?;
    let mut edges = Vec::new();
    let mut v = 0usize;
    let mut pos = 0;
    while pos + 1 + k <= bits.len() {
        let b = bits[pos];
        let mut x = 0usize;
        for i in 0..k {
            x = (x << 1) | bits[pos + 1 + i] as usize;
        }
        pos += 1 + k;
        if b {
            v += 1;
        }
        if v >= n || x >= n {
            break;
        }
        if x > v {
            v = x;
        } else {
            edges.push((x, v));
        }
    }
    Ok(Graph::new(n, &edges)?)
}

/// Decodes graph6 or sparse6, chosen by the leading byte.
pub fn from_graph6_or_sparse6(s: &str) -> Result<Graph, FormatError> {
    let t = s.trim();
    if t.starts_with(':') || t.starts_with(">>sparse6<<") {
        from_sparse6(t)
    } else {
        from_graph6(t)
    }
}

/// Parses a generator file: one permutation per line, written either as a
/// JSON array of images or as whitespace-separated images.
pub fn parse_generators(text: &str) -> Result<Vec<Permutation>, FormatError> {
    let mut gens = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let images: Vec<usize> = if line.starts_with('[') {
            serde_json::from_str(line).map_err(|e| line_err(i + 1, e.to_string()))?
        } else {
            parse_usizes(line, i + 1)?
        };
        let p = Permutation::from_images(images)
            .map_err(|source| FormatError::BadPermutation { line: i + 1, source })?;
        gens.push(p);
    }
    Ok(gens)
}

/// One JSON image list per line.
pub fn write_generators(gens: &[Permutation]) -> String {
    gens.iter()
        .map(|g| serde_json::to_string(g.images()).expect("serializable") + "\n")
        .collect()
}
