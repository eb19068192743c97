//! graph6 encoding (McKay's format).
//!
//! The order is written as `N(n)`: one byte for `n <= 62`, `~` plus three
//! bytes up to 258047, and `~~` plus six bytes beyond that. The upper
//! triangle follows column by column, `(0,1), (0,2), (1,2), (0,3), ...`,
//! packed six bits per byte with 63 added. Writing never emits the optional
//! `>>graph6<<` header; parsing accepts it.

use crate::error::{Error, Result};
use crate::graph::Graph;

const HEADER: &[u8] = b">>graph6<<";
const BIAS: u8 = 63;

fn perr(offset: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        offset,
        message: message.into(),
    }
}

fn encode_order(n: usize, out: &mut Vec<u8>) {
    if n <= 62 {
        out.push(n as u8 + BIAS);
    } else if n <= 258_047 {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 0x3f) as u8 + BIAS);
        }
    } else {
        out.extend_from_slice(&[126, 126]);
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> shift) & 0x3f) as u8 + BIAS);
        }
    }
}

pub fn write_graph6(g: &Graph) -> String {
    let n = g.order();
    let mut out = Vec::with_capacity(8 + n * n / 12);
    encode_order(n, &mut out);
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | g.has_edge(i, j) as u8;
            filled += 1;
            if filled == 6 {
                out.push(acc + BIAS);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + BIAS);
    }
    String::from_utf8(out).expect("graph6 bytes are printable ASCII")
}

fn sextet(bytes: &[u8], at: usize) -> Result<usize> {
    match bytes.get(at) {
        None => Err(perr(at, "unexpected end of input")),
        Some(&b) if (63..=126).contains(&b) => Ok((b - BIAS) as usize),
        Some(&b) => Err(perr(
            at,
            format!("byte 0x{b:02x} outside the graph6 range 63..=126"),
        )),
    }
}

pub fn parse_graph6(text: &str) -> Result<Graph> {
    let bytes = text.as_bytes();
    let mut pos = if bytes.starts_with(HEADER) {
        HEADER.len()
    } else {
        0
    };
    let end = bytes.len() - bytes.iter().rev().take_while(|b| b.is_ascii_whitespace()).count();
    let bytes = &bytes[..end.max(pos)];

    let first = sextet(bytes, pos)?;
    let n = if first < 63 {
        pos += 1;
        first
    } else if bytes.get(pos + 1) == Some(&126) {
        let mut n = 0;
        for i in 0..6 {
            n = (n << 6) | sextet(bytes, pos + 2 + i)?;
        }
        pos += 8;
        if n <= 258_047 {
            return Err(perr(pos - 8, format!("order {n} must use the short form")));
        }
        n
    } else {
        let mut n = 0;
        for i in 0..3 {
            n = (n << 6) | sextet(bytes, pos + 1 + i)?;
        }
        pos += 4;
        if n <= 62 {
            return Err(perr(pos - 4, format!("order {n} must use the one-byte form")));
        }
        n
    };
    if n == 0 {
        return Err(perr(0, "graph order must be at least 1"));
    }

    let bits = n * (n - 1) / 2;
    let need = bits.div_ceil(6);
    let body = &bytes[pos..];
    for i in 0..body.len() {
        sextet(bytes, pos + i)?;
    }
    if body.len() != need {
        let at = pos + body.len().min(need);
        return Err(perr(
            at,
            format!(
                "expected {need} adjacency bytes for order {n}, found {}",
                body.len()
            ),
        ));
    }
    let pad = need * 6 - bits;
    if pad > 0 {
        let last = (body[need - 1] - BIAS) as usize;
        if last & ((1 << pad) - 1) != 0 {
            return Err(perr(pos + need - 1, "non-zero padding bits"));
        }
    }

    let mut edges = Vec::new();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            let byte = (body[k / 6] - BIAS) as usize;
            if byte >> (5 - k % 6) & 1 == 1 {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    Graph::from_edges(n, edges)
}
