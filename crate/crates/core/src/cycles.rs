//! Vertex-disjoint cycle packing.
//!
//! Every cycle's vertex set contains a chordless cycle (take a shortest
//! cycle of the induced subgraph), so a packing of `k` arbitrary cycles can
//! always be traded for a packing of `k` chordless ones. Searches therefore
//! run over chordless cycles only, as a set-packing problem on vertex masks.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

/// Largest graph order handled by the packing routines (one `u128` mask).
pub const PACKING_MAX_ORDER: usize = 128;
pub const DEFAULT_CYCLE_CAP: usize = 1_000_000;
const MEMO_CAP: usize = 1 << 24;

type Mask = u128;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PackingOptions {
    /// Abort chordless-cycle enumeration beyond this many cycles.
    pub cycle_cap: usize,
}

impl Default for PackingOptions {
    fn default() -> Self {
        PackingOptions {
            cycle_cap: DEFAULT_CYCLE_CAP,
        }
    }
}

/// Pairwise vertex-disjoint cycles, each listed in cyclic order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclePacking {
    pub cycles: Vec<Vec<usize>>,
}

impl CyclePacking {
    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    /// Checks that every entry is a cycle of `g` and that cycles are disjoint.
    pub fn is_valid_in(&self, g: &Graph) -> bool {
        let mut used = VertexSet::empty(g.order());
        for c in &self.cycles {
            if c.len() < 3 {
                return false;
            }
            for (i, &v) in c.iter().enumerate() {
                if v >= g.order() || used.contains(v) {
                    return false;
                }
                used.insert(v);
                if !g.has_edge(v, c[(i + 1) % c.len()]) {
                    return false;
                }
            }
        }
        true
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PackingResult {
    /// Packing number found; the true maximum when `exact`.
    pub nu: usize,
    pub witness: CyclePacking,
    pub exact: bool,
}

/// Outcome of a "does `G` contain `k` disjoint cycles" query.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DisjointCyclesAnswer {
    pub found: bool,
    /// `k` disjoint cycles when `found`.
    pub witness: Option<CyclePacking>,
    /// `false` only when the cycle cap cut the search short without a witness.
    pub exact: bool,
}

fn rows_of(g: &Graph) -> Result<Vec<Mask>> {
    let n = g.order();
    if n > PACKING_MAX_ORDER {
        return Err(Error::UnsupportedSize {
            n,
            cap: PACKING_MAX_ORDER,
        });
    }
    Ok((0..n)
        .map(|v| {
            let r = g.row(v);
            let lo = r[0] as Mask;
            let hi = r.get(1).copied().unwrap_or(0) as Mask;
            lo | hi << 64
        })
        .collect())
}

#[inline]
fn bit(v: usize) -> Mask {
    1 << v
}

/// Bits `0..=v`.
#[inline]
fn upto(v: usize) -> Mask {
    if v >= 127 {
        !0
    } else {
        bit(v + 1) - 1
    }
}

#[inline]
fn low(m: Mask) -> usize {
    m.trailing_zeros() as usize
}

fn mask_vertices(mut m: Mask) -> Vec<usize> {
    let mut out = Vec::with_capacity(m.count_ones() as usize);
    while m != 0 {
        out.push(low(m));
        m &= m - 1;
    }
    out
}

struct ChordlessWalker<'a> {
    rows: &'a [Mask],
    cap: usize,
    out: Vec<Mask>,
    overflow: bool,
}

impl ChordlessWalker<'_> {
    /// Extends the induced path `s, v1, ..., last`. `interior` holds the
    /// closed neighborhoods of `v1..` up to but excluding `last`.
    fn extend(&mut self, s: usize, v1: usize, last: usize, path: Mask, interior: Mask, higher: Mask) {
        if self.overflow {
            return;
        }
        let rs = self.rows[s];
        let step = self.rows[last] & higher & !path & !interior;
        let mut close = step & rs & !upto(v1);
        while close != 0 {
            let w = low(close);
            close &= close - 1;
            if self.out.len() >= self.cap {
                self.overflow = true;
                return;
            }
            self.out.push(path | bit(w));
        }
        let mut ext = step & !rs;
        let interior = interior | self.rows[last] | bit(last);
        while ext != 0 {
            let w = low(ext);
            ext &= ext - 1;
            self.extend(s, v1, w, path | bit(w), interior, higher);
            if self.overflow {
                return;
            }
        }
    }
}

/// Chordless cycles as vertex masks, sorted lexicographically by their
/// sorted vertex lists. On overflow returns the cycles found so far in `Err`.
fn chordless_masks(rows: &[Mask], cap: usize) -> std::result::Result<Vec<Mask>, Vec<Mask>> {
    let n = rows.len();
    let mut walker = ChordlessWalker {
        rows,
        cap,
        out: Vec::new(),
        overflow: false,
    };
    for (s, &row) in rows.iter().enumerate() {
        let higher = !upto(s) & full_mask(n);
        let mut firsts = row & higher;
        while firsts != 0 {
            let v1 = low(firsts);
            firsts &= firsts - 1;
            // Path s, v1: the extension step excludes N[s] separately.
            walker.extend(s, v1, v1, bit(s) | bit(v1), 0, higher);
        }
        if walker.overflow {
            break;
        }
    }
    let mut cycles = walker.out;
    cycles.sort_by_cached_key(|&m| mask_vertices(m));
    if walker.overflow {
        Err(cycles)
    } else {
        Ok(cycles)
    }
}

/// All chordless cycles of `g`, each once, ordered by sorted vertex list.
pub fn enumerate_chordless_cycles(g: &Graph) -> Result<Vec<VertexSet>> {
    enumerate_chordless_cycles_capped(g, DEFAULT_CYCLE_CAP)
}

pub fn enumerate_chordless_cycles_capped(g: &Graph, cap: usize) -> Result<Vec<VertexSet>> {
    let rows = rows_of(g)?;
    let masks = chordless_masks(&rows, cap).map_err(|_| Error::CycleCapExceeded { cap })?;
    Ok(masks
        .into_iter()
        .map(|m| VertexSet::from_vertices(g.order(), mask_vertices(m)))
        .collect())
}

/// Cyclic order of a chordless cycle given by its vertex mask.
fn cycle_order(rows: &[Mask], m: Mask) -> Vec<usize> {
    let start = low(m);
    let mut order = vec![start];
    let mut prev = start;
    let mut cur = low(rows[start] & m);
    while cur != start {
        order.push(cur);
        let next = rows[cur] & m & !bit(prev);
        prev = cur;
        cur = low(next);
    }
    order
}

/// Chordless cycles sorted by length, then lexicographically.
fn packing_universe(rows: &[Mask], cap: usize) -> (Vec<Mask>, bool) {
    let (mut cycles, complete) = match chordless_masks(rows, cap) {
        Ok(c) => (c, true),
        Err(c) => (c, false),
    };
    cycles.sort_by_key(|m| m.count_ones());
    (cycles, complete)
}

#[derive(Clone, Copy)]
enum Choice {
    Leaf,
    Take(u32),
    Skip(usize),
}

struct Packer<'a> {
    cycles: &'a [Mask],
    memo: HashMap<Mask, (u8, Choice)>,
}

impl Packer<'_> {
    fn remember(&mut self, avail: Mask, entry: (u8, Choice)) {
        if self.memo.len() >= MEMO_CAP {
            self.memo.clear();
        }
        self.memo.insert(avail, entry);
    }

    fn solve(&mut self, avail: Mask, cands: &[u32]) -> u8 {
        if let Some(&(v, _)) = self.memo.get(&avail) {
            return v;
        }
        let fitting: Vec<u32> = cands
            .iter()
            .copied()
            .filter(|&i| self.cycles[i as usize] & !avail == 0)
            .collect();
        if fitting.is_empty() {
            self.remember(avail, (0, Choice::Leaf));
            return 0;
        }
        let cover = fitting.iter().fold(0, |acc, &i| acc | self.cycles[i as usize]);
        let v = low(cover);
        let bound = (avail.count_ones() / 3) as u8;
        let mut best = 0u8;
        let mut choice = Choice::Leaf;
        for &i in &fitting {
            let c = self.cycles[i as usize];
            if c & bit(v) == 0 {
                continue;
            }
            let rest = avail & !c;
            if ((rest.count_ones() / 3) as u8) < best {
                continue;
            }
            let val = 1 + self.solve(rest, &fitting);
            if val > best {
                best = val;
                choice = Choice::Take(i);
                if best == bound {
                    break;
                }
            }
        }
        if best < bound {
            let rest = avail & !bit(v);
            if (rest.count_ones() / 3) as u8 > best {
                let val = self.solve(rest, &fitting);
                if val > best {
                    best = val;
                    choice = Choice::Skip(v);
                }
            }
        }
        self.remember(avail, (best, choice));
        best
    }

    fn witness(&mut self, mut avail: Mask, all: &[u32]) -> Vec<Mask> {
        let mut out = Vec::new();
        loop {
            let (_, choice) = match self.memo.get(&avail) {
                Some(&e) => e,
                None => {
                    self.solve(avail, all);
                    self.memo[&avail]
                }
            };
            match choice {
                Choice::Leaf => return out,
                Choice::Take(i) => {
                    let c = self.cycles[i as usize];
                    out.push(c);
                    avail &= !c;
                }
                Choice::Skip(v) => avail &= !bit(v),
            }
        }
    }
}

struct Finder<'a> {
    cycles: &'a [Mask],
    /// Smallest target known to be unreachable from a given vertex set.
    failed: HashMap<Mask, usize>,
}

impl Finder<'_> {
    fn find(&mut self, avail: Mask, need: usize, cands: &[u32], picked: &mut Vec<u32>) -> bool {
        if need == 0 {
            return true;
        }
        if (avail.count_ones() as usize) < 3 * need {
            return false;
        }
        if self.failed.get(&avail).is_some_and(|&f| f <= need) {
            return false;
        }
        let fitting: Vec<u32> = cands
            .iter()
            .copied()
            .filter(|&i| self.cycles[i as usize] & !avail == 0)
            .collect();
        if fitting.len() >= need {
            let cover = fitting.iter().fold(0, |acc, &i| acc | self.cycles[i as usize]);
            let v = low(cover);
            for &i in &fitting {
                let c = self.cycles[i as usize];
                if c & bit(v) == 0 {
                    continue;
                }
                picked.push(i);
                if self.find(avail & !c, need - 1, &fitting, picked) {
                    return true;
                }
                picked.pop();
            }
            if self.find(avail & !bit(v), need, &fitting, picked) {
                return true;
            }
        }
        if self.failed.len() >= MEMO_CAP {
            self.failed.clear();
        }
        let e = self.failed.entry(avail).or_insert(need);
        *e = (*e).min(need);
        false
    }
}

fn full_mask(n: usize) -> Mask {
    if n == 128 {
        !0
    } else {
        bit(n) - 1
    }
}

fn to_packing(rows: &[Mask], masks: &[Mask]) -> CyclePacking {
    CyclePacking {
        cycles: masks.iter().map(|&m| cycle_order(rows, m)).collect(),
    }
}

/// Greedy disjoint selection in the given order; a lower bound only.
fn greedy(cycles: &[Mask]) -> Vec<Mask> {
    let mut used = 0;
    let mut out = Vec::new();
    for &c in cycles {
        if c & used == 0 {
            used |= c;
            out.push(c);
        }
    }
    out
}

pub fn max_cycle_packing(g: &Graph) -> Result<PackingResult> {
    max_cycle_packing_with(g, &PackingOptions::default())
}

/// Maximum number of vertex-disjoint cycles, by branch and bound over
/// chordless cycles with memoization on the remaining vertex set.
///
/// If the chordless-cycle cap is hit the result is a greedy lower bound
/// flagged `exact = false`.
pub fn max_cycle_packing_with(g: &Graph, opts: &PackingOptions) -> Result<PackingResult> {
    let rows = rows_of(g)?;
    let (cycles, complete) = packing_universe(&rows, opts.cycle_cap);
    if !complete {
        let chosen = greedy(&cycles);
        return Ok(PackingResult {
            nu: chosen.len(),
            witness: to_packing(&rows, &chosen),
            exact: false,
        });
    }
    let all: Vec<u32> = (0..cycles.len() as u32).collect();
    let mut packer = Packer {
        cycles: &cycles,
        memo: HashMap::new(),
    };
    let full = full_mask(g.order());
    let nu = packer.solve(full, &all) as usize;
    let chosen = packer.witness(full, &all);
    debug_assert_eq!(chosen.len(), nu);
    Ok(PackingResult {
        nu,
        witness: to_packing(&rows, &chosen),
        exact: true,
    })
}

/// Any one cycle, found by depth-first search.
fn any_cycle(g: &Graph) -> Option<Vec<usize>> {
    let n = g.order();
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![usize::MAX; n];
    for root in 0..n {
        if depth[root] != usize::MAX {
            continue;
        }
        depth[root] = 0;
        let mut stack = vec![root];
        while let Some(u) = stack.pop() {
            for w in g.neighbor_iter(u) {
                if w == parent[u] {
                    continue;
                }
                if depth[w] == usize::MAX {
                    depth[w] = depth[u] + 1;
                    parent[w] = u;
                    stack.push(w);
                } else {
                    // non-tree edge u-w closes a cycle through the LCA
                    let (mut a, mut b) = (u, w);
                    let mut left = vec![a];
                    let mut right = vec![b];
                    while depth[a] > depth[b] {
                        a = parent[a];
                        left.push(a);
                    }
                    while depth[b] > depth[a] {
                        b = parent[b];
                        right.push(b);
                    }
                    while a != b {
                        a = parent[a];
                        b = parent[b];
                        left.push(a);
                        right.push(b);
                    }
                    right.pop();
                    right.reverse();
                    left.extend(right);
                    return Some(left);
                }
            }
        }
    }
    None
}

pub fn has_k_disjoint_cycles(g: &Graph, k: usize) -> Result<DisjointCyclesAnswer> {
    has_k_disjoint_cycles_with(g, k, &PackingOptions::default())
}

/// Decides `nu(g) >= k`, stopping at the first `k` disjoint cycles found.
pub fn has_k_disjoint_cycles_with(
    g: &Graph,
    k: usize,
    opts: &PackingOptions,
) -> Result<DisjointCyclesAnswer> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    if k == 1 {
        let c = any_cycle(g);
        return Ok(DisjointCyclesAnswer {
            found: c.is_some(),
            witness: c.map(|c| CyclePacking { cycles: vec![c] }),
            exact: true,
        });
    }
    let rows = rows_of(g)?;
    if g.order() < 3 * k {
        return Ok(DisjointCyclesAnswer {
            found: false,
            witness: None,
            exact: true,
        });
    }
    let (cycles, complete) = packing_universe(&rows, opts.cycle_cap);
    let all: Vec<u32> = (0..cycles.len() as u32).collect();
    let mut finder = Finder {
        cycles: &cycles,
        failed: HashMap::new(),
    };
    let mut picked = Vec::with_capacity(k);
    let found = finder.find(full_mask(g.order()), k, &all, &mut picked);
    let witness = found.then(|| {
        let masks: Vec<Mask> = picked.iter().map(|&i| cycles[i as usize]).collect();
        to_packing(&rows, &masks)
    });
    Ok(DisjointCyclesAnswer {
        found,
        witness,
        exact: found || complete,
    })
}
