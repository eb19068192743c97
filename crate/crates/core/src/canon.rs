//! Canonical labeling for small graphs.
//!
//! The key of a graph is the lexicographically smallest upper-triangle bit
//! string (graph6 column order) over all labelings that list vertices cell
//! by cell, where the cells come from iterated degree refinement. The set
//! of admissible labelings is itself isomorphism-invariant, so the minimum
//! identifies the isomorphism class.
//!
//! The search fills positions left to right. At each position only
//! candidates with the smallest new column survive, and of two unplaced
//! twins (`N(u) - v == N(v) - u`) only one is tried, since swapping them is
//! an automorphism fixing everything already placed.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Largest order accepted by [`canonical_form`].
pub const CANON_MAX_ORDER: usize = 10;

/// Canonical key: order plus the minimal upper-triangle bit string, first
/// bit most significant.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalKey {
    n: u8,
    bits: u64,
}

impl CanonicalKey {
    pub fn order(&self) -> usize {
        self.n as usize
    }

    pub fn edge_count(&self) -> usize {
        self.bits.count_ones() as usize
    }

    /// The canonically labeled representative.
    pub fn to_graph(&self) -> Graph {
        let n = self.order();
        let total = n * n.saturating_sub(1) / 2;
        let mut edges = Vec::new();
        let mut k = 0;
        for j in 1..n {
            for i in 0..j {
                if self.bits >> (total - 1 - k) & 1 == 1 {
                    edges.push((i, j));
                }
                k += 1;
            }
        }
        Graph::from_edges(n, edges).expect("key encodes a valid graph")
    }

    pub fn to_hex(&self) -> String {
        format!("{:02x}{:012x}", self.n, self.bits)
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl fmt::Debug for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalKey({})", self.to_hex())
    }
}

impl FromStr for CanonicalKey {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |m: &str| Error::Parse {
            offset: 0,
            message: format!("canonical key {s:?}: {m}"),
        };
        if s.len() != 14 || !s.is_ascii() {
            return Err(bad("expected 14 hex digits"));
        }
        let n = u8::from_str_radix(&s[..2], 16).map_err(|_| bad("bad order"))?;
        let bits = u64::from_str_radix(&s[2..], 16).map_err(|_| bad("bad bits"))?;
        let n_us = n as usize;
        if n_us == 0 || n_us > CANON_MAX_ORDER {
            return Err(bad("order out of range"));
        }
        let total = n_us * (n_us - 1) / 2;
        if total < 64 && bits >> total != 0 {
            return Err(bad("bits beyond the upper triangle"));
        }
        Ok(CanonicalKey { n, bits })
    }
}

impl Serialize for CanonicalKey {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_hex())
    }
}

impl<'de> Deserialize<'de> for CanonicalKey {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Iterated degree refinement. Colors are ranks of sorted signatures, so they
/// are invariant under relabeling.
fn refined_colors(rows: &[u64]) -> Vec<u32> {
    let n = rows.len();
    let mut color: Vec<u32> = rows.iter().map(|r| r.count_ones()).collect();
    let mut classes = distinct(&color);
    loop {
        let sigs: Vec<(u32, Vec<u32>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<u32> = (0..n)
                    .filter(|&u| rows[v] >> u & 1 == 1)
                    .map(|u| color[u])
                    .collect();
                nb.sort_unstable();
                (color[v], nb)
            })
            .collect();
        let mut sorted = sigs.clone();
        sorted.sort();
        sorted.dedup();
        let next: Vec<u32> = sigs
            .iter()
            .map(|s| sorted.binary_search(s).expect("present") as u32)
            .collect();
        let next_classes = sorted.len();
        color = next;
        if next_classes == classes {
            return color;
        }
        classes = next_classes;
    }
}

fn distinct(c: &[u32]) -> usize {
    let mut v = c.to_vec();
    v.sort_unstable();
    v.dedup();
    v.len()
}

struct Search<'a> {
    rows: &'a [u64],
    color: Vec<u32>,
    cell_of_position: Vec<u32>,
    placed: Vec<usize>,
    cols: Vec<u64>,
    best: Option<Vec<u64>>,
    best_perm: Vec<usize>,
}

impl Search<'_> {
    fn column(&self, v: usize) -> u64 {
        self.placed
            .iter()
            .fold(0u64, |acc, &p| (acc << 1) | (self.rows[p] >> v & 1))
    }

    fn twins(&self, u: usize, v: usize) -> bool {
        let mask = !((1u64 << u) | (1u64 << v));
        self.rows[u] & mask == self.rows[v] & mask
    }

    /// `true` when the current prefix already exceeds the best string.
    fn worse_than_best(&self) -> bool {
        match &self.best {
            None => false,
            Some(best) => self.cols.as_slice() > &best[..self.cols.len()],
        }
    }

    fn run(&mut self, used: u64) {
        let n = self.rows.len();
        let m = self.placed.len();
        if m == n {
            if self.best.as_ref().is_none_or(|b| self.cols < *b) {
                self.best = Some(self.cols.clone());
                self.best_perm = self.placed.clone();
            }
            return;
        }
        let target = self.cell_of_position[m];
        let mut cands: Vec<(u64, usize)> = (0..n)
            .filter(|&v| used >> v & 1 == 0 && self.color[v] == target)
            .map(|v| (self.column(v), v))
            .collect();
        let min_col = cands
            .iter()
            .map(|c| c.0)
            .min()
            .expect("cell has an unplaced vertex");
        cands.retain(|c| c.0 == min_col);

        let mut tried: Vec<usize> = Vec::with_capacity(cands.len());
        for &(col, v) in &cands {
            if tried.iter().any(|&w| self.twins(v, w)) {
                continue;
            }
            tried.push(v);
            self.placed.push(v);
            self.cols.push(col);
            if !self.worse_than_best() {
                self.run(used | 1 << v);
            }
            self.placed.pop();
            self.cols.pop();
        }
    }
}

/// Canonical key and the labeling that realizes it (`perm[position] = vertex`).
pub fn canonical_labeling(g: &Graph) -> Result<(CanonicalKey, Vec<usize>)> {
    let n = g.order();
    if n > CANON_MAX_ORDER {
        return Err(Error::UnsupportedSize {
            n,
            cap: CANON_MAX_ORDER,
        });
    }
    let rows: Vec<u64> = (0..n).map(|v| g.row_word(v)).collect();
    let color = refined_colors(&rows);
    let mut cell_of_position: Vec<u32> = color.clone();
    cell_of_position.sort_unstable();

    let mut search = Search {
        rows: &rows,
        color,
        cell_of_position,
        placed: Vec::with_capacity(n),
        cols: Vec::with_capacity(n),
        best: None,
        best_perm: Vec::new(),
    };
    search.run(0);
    let cols = search.best.expect("at least one labeling");
    let bits = cols.iter().enumerate().fold(0u64, |acc, (j, &c)| (acc << j) | c);
    Ok((CanonicalKey { n: n as u8, bits }, search.best_perm))
}

pub fn canonical_form(g: &Graph) -> Result<CanonicalKey> {
    canonical_labeling(g).map(|(k, _)| k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::make_complete_split;

    #[test]
    fn relabeled_triangle_matches() {
        let a = Graph::from_edges(5, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let b = Graph::from_edges(5, [(4, 3), (3, 1), (1, 4)]).unwrap();
        assert_eq!(canonical_form(&a).unwrap(), canonical_form(&b).unwrap());
    }

    #[test]
    fn path_and_triangle_differ() {
        let p3 = Graph::path(3).unwrap();
        let k3 = Graph::complete(3).unwrap();
        assert_ne!(canonical_form(&p3).unwrap(), canonical_form(&k3).unwrap());
    }

    #[test]
    fn key_reconstructs_isomorphic_graph() {
        let g = make_complete_split(9, 3)
            .unwrap()
            .permuted(&[4, 7, 0, 8, 2, 5, 1, 3, 6]);
        let (key, perm) = canonical_labeling(&g).unwrap();
        let rep = key.to_graph();
        assert_eq!(canonical_form(&rep).unwrap(), key);
        for i in 0..9 {
            for j in 0..9 {
                assert_eq!(rep.has_edge(i, j), g.has_edge(perm[i], perm[j]));
            }
        }
    }

    #[test]
    fn hex_round_trip() {
        let key = canonical_form(&Graph::petersen()).unwrap();
        let s = key.to_hex();
        assert_eq!(s.len(), 14);
        assert_eq!(s.parse::<CanonicalKey>().unwrap(), key);
        assert!("zz".parse::<CanonicalKey>().is_err());
    }

    #[test]
    fn order_cap() {
        let g = Graph::empty(11).unwrap();
        assert!(matches!(
            canonical_form(&g),
            Err(Error::UnsupportedSize { n: 11, cap: 10 })
        ));
    }

    #[test]
    fn symmetric_graphs_are_fast() {
        for n in 1..=10 {
            let k = canonical_form(&Graph::complete(n).unwrap()).unwrap();
            assert_eq!(k.edge_count(), n * (n - 1) / 2);
            canonical_form(&Graph::empty(n).unwrap()).unwrap();
        }
        canonical_form(&Graph::petersen()).unwrap();
        canonical_form(&Graph::complete_bipartite(5, 5).unwrap()).unwrap();
    }
}
