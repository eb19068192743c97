//! Exhaustive search over isomorphism classes of graphs without `k`
//! vertex-disjoint cycles.
//!
//! Classes are generated one edge count at a time. Every class with `m + 1`
//! edges arises from some class with `m` edges by adding one edge, and the
//! property "fewer than `k` disjoint cycles" survives edge deletion, so
//! growing only feasible parents reaches every feasible class. Children are
//! deduplicated by canonical key, which makes each class appear once.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::canon::{canonical_form, CanonicalKey, CANON_MAX_ORDER};
use crate::cycles::has_k_disjoint_cycles;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::graph6::write_graph6;
use crate::spectral::{spectral_radius, DEFAULT_TOL};

/// Default largest order for exhaustive runs.
pub const DEFAULT_ENUMERATION_CAP: usize = 9;

/// Relative tolerance under which two spectral radii count as tied.
pub const SPECTRAL_TIE_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Objective {
    Edges,
    SpectralRadius,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMode {
    Exhaustive,
    LocalSearch,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchSpec {
    pub n: usize,
    pub k: usize,
    pub objective: Objective,
    pub mode: SearchMode,
    pub seed: u64,
    /// Largest order allowed in exhaustive mode.
    pub cap: usize,
}

impl SearchSpec {
    pub fn new(n: usize, k: usize, objective: Objective, mode: SearchMode) -> Self {
        SearchSpec {
            n,
            k,
            objective,
            mode,
            seed: 0,
            cap: DEFAULT_ENUMERATION_CAP,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidParameter("n must be positive".into()));
        }
        if self.k == 0 {
            return Err(Error::InvalidParameter("k must be positive".into()));
        }
        if self.cap > CANON_MAX_ORDER {
            return Err(Error::InvalidParameter(format!(
                "enumeration cap {} exceeds the hard limit {CANON_MAX_ORDER}",
                self.cap
            )));
        }
        if self.mode == SearchMode::Exhaustive && self.n > self.cap {
            return Err(Error::UnsupportedSize {
                n: self.n,
                cap: self.cap,
            });
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationOptions {
    pub cap: usize,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        EnumerationOptions {
            cap: DEFAULT_ENUMERATION_CAP,
        }
    }
}

/// One visited isomorphism class.
#[derive(Clone, Debug)]
pub struct FeasibleClass {
    pub key: CanonicalKey,
    /// Canonically labeled representative.
    pub graph: Graph,
    /// No single added edge keeps the graph feasible.
    pub edge_maximal: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationStats {
    pub classes: u64,
    pub edge_maximal: u64,
    /// Classes per edge count, indexed by edge count.
    pub classes_by_edges: Vec<u64>,
    /// Parent/child pairs generated before deduplication.
    pub augmentations: u64,
    /// Distinct children whose cycle packing was decided.
    pub feasibility_checks: u64,
    /// Distinct children rejected because they hold `k` disjoint cycles.
    pub pruned: u64,
}

fn feasible(g: &Graph, k: usize) -> Result<bool> {
    let ans = has_k_disjoint_cycles(g, k)?;
    if !ans.exact {
        return Err(Error::Invariant(format!(
            "packing search on {} was not exact",
            write_graph6(g)
        )));
    }
    Ok(!ans.found)
}

fn distinct_children(key: &CanonicalKey) -> Result<Vec<CanonicalKey>> {
    let g = key.to_graph();
    let mut out = g
        .non_edges()
        .map(|(u, v)| canonical_form(&g.with_edge(u, v)))
        .collect::<Result<Vec<_>>>()?;
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Visits every isomorphism class of `n`-vertex graphs with fewer than `k`
/// vertex-disjoint cycles exactly once, in increasing (edge count, key)
/// order. Work within a level runs on the rayon pool; the visitor runs on
/// the calling thread.
pub fn enumerate_feasible<F>(
    n: usize,
    k: usize,
    opts: &EnumerationOptions,
    mut visitor: F,
) -> Result<EnumerationStats>
where
    F: FnMut(&FeasibleClass),
{
    if k == 0 {
        return Err(Error::InvalidParameter("k must be positive".into()));
    }
    if opts.cap > CANON_MAX_ORDER {
        return Err(Error::InvalidParameter(format!(
            "enumeration cap {} exceeds the hard limit {CANON_MAX_ORDER}",
            opts.cap
        )));
    }
    if n == 0 || n > opts.cap {
        return Err(Error::UnsupportedSize { n, cap: opts.cap });
    }

    let mut stats = EnumerationStats::default();
    let mut level = vec![canonical_form(&Graph::empty(n)?)?];
    while !level.is_empty() {
        let children: Vec<Vec<CanonicalKey>> =
            level.par_iter().map(distinct_children).collect::<Result<_>>()?;

        let mut pool: Vec<CanonicalKey> = children.iter().flatten().copied().collect();
        stats.augmentations += pool.len() as u64;
        pool.sort_unstable();
        pool.dedup();
        let verdicts: Vec<bool> = pool
            .par_iter()
            .map(|c| feasible(&c.to_graph(), k))
            .collect::<Result<_>>()?;
        stats.feasibility_checks += pool.len() as u64;
        let next: Vec<CanonicalKey> = pool
            .iter()
            .zip(&verdicts)
            .filter(|(_, &ok)| ok)
            .map(|(c, _)| *c)
            .collect();
        stats.pruned += (pool.len() - next.len()) as u64;
        let alive: HashSet<CanonicalKey> = next.iter().copied().collect();

        stats.classes_by_edges.push(level.len() as u64);
        for (key, kids) in level.iter().zip(&children) {
            let edge_maximal = !kids.iter().any(|c| alive.contains(c));
            stats.classes += 1;
            stats.edge_maximal += edge_maximal as u64;
            visitor(&FeasibleClass {
                key: *key,
                graph: key.to_graph(),
                edge_maximal,
            });
        }
        level = next;
    }
    Ok(stats)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    /// Present when the order is small enough for canonical labeling.
    pub key: Option<CanonicalKey>,
    pub graph6: String,
    pub edges: usize,
    pub rho: f64,
}

impl Witness {
    pub fn from_graph(g: &Graph) -> Result<Self> {
        let key = if g.order() <= CANON_MAX_ORDER {
            Some(canonical_form(g)?)
        } else {
            None
        };
        Ok(Witness {
            key,
            graph6: write_graph6(g),
            edges: g.edge_count(),
            rho: spectral_radius(g, DEFAULT_TOL).rho,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtremalRecord {
    pub n: usize,
    pub k: usize,
    pub objective: Objective,
    pub mode: SearchMode,
    /// Edge count or spectral radius, depending on the objective.
    pub optimum: f64,
    pub witnesses: Vec<Witness>,
    /// Graphs (classes, or candidate moves in local search) looked at.
    pub graphs_examined: u64,
    /// Graphs whose objective value was computed.
    pub graphs_evaluated: u64,
    pub exact: bool,
    pub enumeration: Option<EnumerationStats>,
}

impl ExtremalRecord {
    pub fn witness_keys(&self) -> Vec<CanonicalKey> {
        self.witnesses.iter().filter_map(|w| w.key).collect()
    }
}

/// Confirms the record's witnesses are feasible, independently of the
/// search that found them.
pub fn recheck_witnesses(record: &ExtremalRecord) -> Result<()> {
    for w in &record.witnesses {
        let g = crate::graph6::parse_graph6(&w.graph6)?;
        if has_k_disjoint_cycles(&g, record.k)?.found {
            return Err(Error::Invariant(format!(
                "witness {} holds {} disjoint cycles",
                w.graph6, record.k
            )));
        }
    }
    Ok(())
}

/// Maximum edge count over feasible `n`-vertex graphs, with every maximizer.
pub fn edge_maximizer(n: usize, k: usize, opts: &EnumerationOptions) -> Result<ExtremalRecord> {
    let mut best = 0usize;
    let mut keys: Vec<CanonicalKey> = Vec::new();
    let stats = enumerate_feasible(n, k, opts, |c| {
        let m = c.key.edge_count();
        if m > best {
            best = m;
            keys.clear();
        }
        if m == best {
            keys.push(c.key);
        }
    })?;
    let witnesses = keys
        .iter()
        .map(|key| Witness::from_graph(&key.to_graph()))
        .collect::<Result<Vec<_>>>()?;
    let record = ExtremalRecord {
        n,
        k,
        objective: Objective::Edges,
        mode: SearchMode::Exhaustive,
        optimum: best as f64,
        witnesses,
        graphs_examined: stats.classes,
        graphs_evaluated: stats.classes,
        exact: true,
        enumeration: Some(stats),
    };
    recheck_witnesses(&record)?;
    Ok(record)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct SpectralSearchOptions {
    pub enumeration: EnumerationOptions,
    /// Evaluate every feasible class instead of the edge-maximal ones only.
    pub evaluate_all: bool,
}

/// Maximum spectral radius over feasible `n`-vertex graphs. By default only
/// edge-maximal classes are evaluated, since adding an edge never lowers
/// the spectral radius.
pub fn spectral_maximizer(n: usize, k: usize, opts: &SpectralSearchOptions) -> Result<ExtremalRecord> {
    let mut candidates: Vec<CanonicalKey> = Vec::new();
    let stats = enumerate_feasible(n, k, &opts.enumeration, |c| {
        if opts.evaluate_all || c.edge_maximal {
            candidates.push(c.key);
        }
    })?;
    let rhos: Vec<f64> = candidates
        .par_iter()
        .map(|key| {
            let p = spectral_radius(&key.to_graph(), DEFAULT_TOL);
            if !p.converged {
                return Err(Error::NotConverged { residual: p.residual });
            }
            Ok(p.rho)
        })
        .collect::<Result<_>>()?;

    let best = rhos.iter().copied().fold(0.0f64, f64::max);
    let floor = best - SPECTRAL_TIE_TOL * best.max(1.0);
    let witnesses = candidates
        .iter()
        .zip(&rhos)
        .filter(|(_, &r)| r >= floor)
        .map(|(key, _)| Witness::from_graph(&key.to_graph()))
        .collect::<Result<Vec<_>>>()?;
    let record = ExtremalRecord {
        n,
        k,
        objective: Objective::SpectralRadius,
        mode: SearchMode::Exhaustive,
        optimum: best,
        witnesses,
        graphs_examined: stats.classes,
        graphs_evaluated: candidates.len() as u64,
        exact: true,
        enumeration: Some(stats),
    };
    recheck_witnesses(&record)?;
    Ok(record)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::make_complete_split;

    fn count(n: usize, k: usize) -> EnumerationStats {
        enumerate_feasible(n, k, &EnumerationOptions::default(), |_| {}).unwrap()
    }

    #[test]
    fn forests_on_four_vertices() {
        assert_eq!(count(4, 1).classes, 6);
        assert_eq!(count(4, 3).classes, 11);
    }

    #[test]
    fn all_graphs_when_cycles_cannot_fit() {
        let totals = [1, 2, 4, 11, 34, 156];
        for (i, &t) in totals.iter().enumerate() {
            assert_eq!(count(i + 1, 3).classes, t);
        }
    }

    #[test]
    fn visited_graphs_are_feasible_and_unique() {
        let mut seen = HashSet::new();
        enumerate_feasible(6, 2, &EnumerationOptions::default(), |c| {
            assert!(seen.insert(c.key));
            assert!(!has_k_disjoint_cycles(&c.graph, 2).unwrap().found);
            assert_eq!(canonical_form(&c.graph).unwrap(), c.key);
        })
        .unwrap();
    }

    #[test]
    fn cap_is_enforced() {
        let err = enumerate_feasible(10, 2, &EnumerationOptions::default(), |_| {}).unwrap_err();
        assert!(matches!(err, Error::UnsupportedSize { n: 10, cap: 9 }));
        let err = enumerate_feasible(4, 2, &EnumerationOptions { cap: 11 }, |_| {}).unwrap_err();
        assert!(matches!(err, Error::InvalidParameter(_)));
    }

    #[test]
    fn trees_maximize_edges_for_k1() {
        let r = edge_maximizer(6, 1, &EnumerationOptions::default()).unwrap();
        assert_eq!(r.optimum, 5.0);
        assert_eq!(r.witnesses.len(), 6);
    }

    #[test]
    fn k5_is_spectral_maximizer_on_five_vertices() {
        let r = spectral_maximizer(5, 2, &SpectralSearchOptions::default()).unwrap();
        assert!((r.optimum - 4.0).abs() < 1e-9);
        let k5 = canonical_form(&Graph::complete(5).unwrap()).unwrap();
        assert_eq!(r.witness_keys(), vec![k5]);
    }

    #[test]
    fn star_wins_for_k1() {
        let r = spectral_maximizer(6, 1, &SpectralSearchOptions::default()).unwrap();
        let star = canonical_form(&make_complete_split(6, 1).unwrap()).unwrap();
        assert_eq!(r.witness_keys(), vec![star]);
    }

    #[test]
    fn spec_validation() {
        let mut s = SearchSpec::new(10, 2, Objective::Edges, SearchMode::Exhaustive);
        assert!(s.validate().is_err());
        s.cap = 10;
        assert!(s.validate().is_ok());
        s.mode = SearchMode::LocalSearch;
        s.n = 40;
        assert!(s.validate().is_ok());
    }
}
