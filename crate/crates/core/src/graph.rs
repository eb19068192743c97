//! Simple undirected graphs on `0..n` with bit-packed adjacency rows.
//!
//! Every row occupies `ceil(n / 64)` machine words, so graphs with `n <= 64`
//! use a single word per row and all set operations reduce to one `u64`
//! instruction. Larger graphs fall back to word arrays of the same layout.

use std::fmt;

use crate::error::{Error, Result};

#[inline]
fn words_for(n: usize) -> usize {
    n.div_ceil(64).max(1)
}

/// A subset of `0..n`, bit-packed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    n: usize,
    bits: Vec<u64>,
}

impl VertexSet {
    pub fn empty(n: usize) -> Self {
        VertexSet {
            n,
            bits: vec![0; words_for(n)],
        }
    }

    pub fn full(n: usize) -> Self {
        let mut s = Self::empty(n);
        for v in 0..n {
            s.insert(v);
        }
        s
    }

    /// Builds a set from vertex indices.
    ///
    /// # Panics
    /// Panics if any vertex is `>= n`.
    pub fn from_vertices<I: IntoIterator<Item = usize>>(n: usize, vertices: I) -> Self {
        let mut s = Self::empty(n);
        for v in vertices {
            s.insert(v);
        }
        s
    }

    pub(crate) fn from_words(n: usize, bits: Vec<u64>) -> Self {
        debug_assert_eq!(bits.len(), words_for(n));
        VertexSet { n, bits }
    }

    /// Size of the vertex universe this set lives in.
    pub fn universe(&self) -> usize {
        self.n
    }

    pub fn words(&self) -> &[u64] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn contains(&self, v: usize) -> bool {
        v < self.n && self.bits[v / 64] >> (v % 64) & 1 == 1
    }

    pub fn insert(&mut self, v: usize) {
        assert!(v < self.n, "vertex {v} out of range 0..{}", self.n);
        self.bits[v / 64] |= 1 << (v % 64);
    }

    pub fn remove(&mut self, v: usize) {
        if v < self.n {
            self.bits[v / 64] &= !(1 << (v % 64));
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(i * 64 + b)
                }
            })
        })
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    fn zip_with(&self, other: &VertexSet, f: impl Fn(u64, u64) -> u64) -> VertexSet {
        assert_eq!(self.n, other.n, "vertex sets over different universes");
        VertexSet {
            n: self.n,
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        self.zip_with(other, |a, b| a & !b)
    }

    pub fn complement(&self) -> VertexSet {
        VertexSet::full(self.n).difference(self)
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        assert_eq!(self.n, other.n, "vertex sets over different universes");
        self.bits.iter().zip(&other.bits).all(|(&a, &b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        assert_eq!(self.n, other.n, "vertex sets over different universes");
        self.bits.iter().zip(&other.bits).all(|(&a, &b)| a & b == 0)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// An immutable simple undirected graph.
///
/// Adjacency is symmetric and loop-free; both are enforced at construction.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
}

impl Graph {
    /// The edgeless graph on `n >= 1` vertices.
    pub fn empty(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("graph order must be at least 1".into()));
        }
        let words = words_for(n);
        Ok(Graph {
            n,
            words,
            rows: vec![0; n * words],
        })
    }

    pub fn from_edges<I: IntoIterator<Item = (usize, usize)>>(n: usize, edges: I) -> Result<Self> {
        let mut g = Self::empty(n)?;
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidParameter(format!(
                    "edge {u}-{v} out of range for order {n}"
                )));
            }
            if u == v {
                return Err(Error::InvalidParameter(format!("self-loop at {u}")));
            }
            g.set(u, v, true);
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Result<Self> {
        Self::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
    }

    pub fn path(n: usize) -> Result<Self> {
        Self::from_edges(n, (1..n).map(|v| (v - 1, v)))
    }

    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidParameter(
                "a cycle needs at least 3 vertices".into(),
            ));
        }
        Self::from_edges(n, (0..n).map(|v| (v, (v + 1) % n)))
    }

    /// `K_{a,b}` with parts `0..a` and `a..a+b`.
    pub fn complete_bipartite(a: usize, b: usize) -> Result<Self> {
        Self::from_edges(a + b, (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v))))
    }

    pub fn petersen() -> Self {
        let outer = (0..5).map(|i| (i, (i + 1) % 5));
        let spokes = (0..5).map(|i| (i, i + 5));
        let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
        Self::from_edges(10, outer.chain(spokes).chain(inner)).expect("static edge list")
    }

    fn set(&mut self, u: usize, v: usize, on: bool) {
        let (wu, bu) = (u * self.words + v / 64, v % 64);
        let (wv, bv) = (v * self.words + u / 64, u % 64);
        if on {
            self.rows[wu] |= 1 << bu;
            self.rows[wv] |= 1 << bv;
        } else {
            self.rows[wu] &= !(1 << bu);
            self.rows[wv] &= !(1 << bv);
        }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(|w| w.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.rows[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    /// Raw adjacency row of `v`.
    pub fn row(&self, v: usize) -> &[u64] {
        &self.rows[v * self.words..(v + 1) * self.words]
    }

    /// Adjacency row as a single word; only meaningful for `n <= 64`.
    #[inline]
    pub(crate) fn row_word(&self, v: usize) -> u64 {
        debug_assert!(self.n <= 64);
        self.rows[v]
    }

    pub fn neighbors(&self, v: usize) -> VertexSet {
        VertexSet::from_words(self.n, self.row(v).to_vec())
    }

    pub fn neighbor_iter(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(v).iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(i * 64 + b)
                }
            })
        })
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| self.neighbor_iter(u).filter(move |&v| v > u).map(move |v| (u, v)))
    }

    /// Non-edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn non_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            (u + 1..self.n)
                .filter(move |&v| !self.has_edge(u, v))
                .map(move |v| (u, v))
        })
    }

    /// Copy of the graph with `uv` added.
    ///
    /// # Panics
    /// Panics on out-of-range vertices or `u == v`.
    pub fn with_edge(&self, u: usize, v: usize) -> Graph {
        assert!(u < self.n && v < self.n && u != v, "invalid edge {u}-{v}");
        let mut g = self.clone();
        g.set(u, v, true);
        g
    }

    pub fn without_edge(&self, u: usize, v: usize) -> Graph {
        assert!(u < self.n && v < self.n && u != v, "invalid edge {u}-{v}");
        let mut g = self.clone();
        g.set(u, v, false);
        g
    }

    /// Applies a batch of removals then additions.
    pub fn edited(&self, remove: &[(usize, usize)], add: &[(usize, usize)]) -> Graph {
        let mut g = self.clone();
        for &(u, v) in remove {
            assert!(u < self.n && v < self.n && u != v, "invalid edge {u}-{v}");
            g.set(u, v, false);
        }
        for &(u, v) in add {
            assert!(u < self.n && v < self.n && u != v, "invalid edge {u}-{v}");
            g.set(u, v, true);
        }
        g
    }

    /// `self` on `0..n1` followed by `other` on `n1..n1+n2`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let off = self.n;
        Graph::from_edges(
            self.n + other.n,
            self.edges().chain(other.edges().map(|(u, v)| (u + off, v + off))),
        )
        .expect("union of valid graphs")
    }

    /// Relabels vertex `v` as `perm[v]`.
    ///
    /// # Panics
    /// Panics unless `perm` is a permutation of `0..n`.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n);
        let mut seen = vec![false; self.n];
        for &p in perm {
            assert!(p < self.n && !seen[p], "not a permutation");
            seen[p] = true;
        }
        Graph::from_edges(self.n, self.edges().map(|(u, v)| (perm[u], perm[v]))).expect("relabeling")
    }

    /// Connected components, ordered by their lowest vertex.
    pub fn components(&self) -> Vec<VertexSet> {
        let mut seen = VertexSet::empty(self.n);
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen.contains(s) {
                continue;
            }
            let mut comp = VertexSet::empty(self.n);
            let mut stack = vec![s];
            seen.insert(s);
            while let Some(u) = stack.pop() {
                comp.insert(u);
                for w in self.neighbor_iter(u) {
                    if !seen.contains(w) {
                        seen.insert(w);
                        stack.push(w);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    pub fn is_forest(&self) -> bool {
        self.edge_count() + self.components().len() == self.n
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges=", self.n)?;
        f.debug_list().entries(self.edges()).finish()?;
        write!(f, ")")
    }
}

/// The complete split graph `S_{n,c}`: a clique on `0..c` joined to an
/// independent set on `c..n`.
pub fn make_complete_split(n: usize, c: usize) -> Result<Graph> {
    if c == 0 || c >= n {
        return Err(Error::InvalidParameter(format!(
            "complete split graph needs 1 <= c < n (got n={n}, c={c})"
        )));
    }
    Graph::from_edges(n, (0..c).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
}

/// Number of edges with both ends in `a`.
pub fn edge_count_within(g: &Graph, a: &VertexSet) -> usize {
    edge_count_between(g, a, a) / 2
}

/// Number of ordered incidences `(x, y)` with `x ∈ a`, `y ∈ b`, `xy ∈ E`.
///
/// An edge with both ends in `a ∩ b` is counted twice, once per direction.
pub fn edge_count_between(g: &Graph, a: &VertexSet, b: &VertexSet) -> usize {
    a.iter()
        .map(|x| {
            g.row(x)
                .iter()
                .zip(b.words())
                .map(|(&r, &m)| (r & m).count_ones() as usize)
                .sum::<usize>()
        })
        .sum()
}

pub fn neighborhood(g: &Graph, v: usize) -> VertexSet {
    g.neighbors(v)
}

/// Vertices at distance exactly two from `v`.
pub fn second_neighborhood(g: &Graph, v: usize) -> VertexSet {
    let first = g.neighbors(v);
    let mut reach = VertexSet::empty(g.order());
    for u in first.iter() {
        reach = reach.union(&g.neighbors(u));
    }
    reach.remove(v);
    reach.difference(&first)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_edge_counts() {
        let g = make_complete_split(9, 3).unwrap();
        assert_eq!(g.edge_count(), 21);
        let star = make_complete_split(5, 1).unwrap();
        assert_eq!(star.edge_count(), 4);
        assert_eq!(star.degree(0), 4);
        assert!(make_complete_split(5, 5).is_err());
        assert!(make_complete_split(5, 0).is_err());
    }

    #[test]
    fn split_structure() {
        let g = make_complete_split(7, 3).unwrap();
        for u in 0..7 {
            for v in 0..7 {
                let expected = u != v && (u < 3 || v < 3);
                assert_eq!(g.has_edge(u, v), expected, "{u}-{v}");
            }
        }
    }

    #[test]
    fn within_and_between() {
        let k4 = Graph::complete(4).unwrap();
        assert_eq!(edge_count_within(&k4, &VertexSet::full(4)), 6);

        let s = make_complete_split(9, 3).unwrap();
        let clique = VertexSet::from_vertices(9, 0..3);
        let indep = VertexSet::from_vertices(9, 3..9);
        assert_eq!(edge_count_within(&s, &clique), 3);
        assert_eq!(edge_count_within(&s, &indep), 0);
        assert_eq!(edge_count_between(&s, &clique, &indep), 18);

        let k3 = Graph::complete(3).unwrap();
        let all = VertexSet::full(3);
        assert_eq!(edge_count_between(&k3, &all, &all), 6);
    }

    #[test]
    fn neighborhoods() {
        let p = Graph::path(3).unwrap();
        assert_eq!(neighborhood(&p, 0).to_vec(), vec![1]);
        assert_eq!(second_neighborhood(&p, 0).to_vec(), vec![2]);

        let s = make_complete_split(9, 3).unwrap();
        assert_eq!(neighborhood(&s, 5).len(), 3);
        assert_eq!(second_neighborhood(&s, 5).len(), 5);

        let k5 = Graph::complete(5).unwrap();
        assert!(second_neighborhood(&k5, 2).is_empty());
    }

    #[test]
    fn large_rows_use_multiple_words() {
        let g = make_complete_split(150, 3).unwrap();
        assert_eq!(g.row(0).len(), 3);
        assert_eq!(g.degree(0), 149);
        assert_eq!(g.degree(140), 3);
        assert!(g.has_edge(2, 149));
        assert!(!g.has_edge(100, 149));
        assert_eq!(g.edge_count(), 3 + 3 * 147);
        assert_eq!(second_neighborhood(&g, 149).len(), 146);
    }

    #[test]
    fn rejects_loops_and_range() {
        assert!(Graph::from_edges(3, [(1, 1)]).is_err());
        assert!(Graph::from_edges(3, [(0, 3)]).is_err());
        assert!(Graph::empty(0).is_err());
    }

    #[test]
    fn components_and_forests() {
        let g = Graph::from_edges(6, [(0, 1), (2, 3), (3, 4)]).unwrap();
        let comps = g.components();
        assert_eq!(comps.len(), 3);
        assert_eq!(comps[1].to_vec(), vec![2, 3, 4]);
        assert!(g.is_forest());
        assert!(!Graph::cycle(4).unwrap().is_forest());
    }

    #[test]
    fn petersen_is_cubic() {
        let p = Graph::petersen();
        assert_eq!(p.edge_count(), 15);
        assert!((0..10).all(|v| p.degree(v) == 3));
    }
}
