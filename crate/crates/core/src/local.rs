//! Hill climbing over graphs without `k` disjoint cycles.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cycles::has_k_disjoint_cycles;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::search::{ExtremalRecord, Objective, SearchMode, Witness};
use crate::spectral::{spectral_radius, PerronResult, DEFAULT_TOL};
use crate::threshold::compute_thresholds;

/// Smallest spectral gain accepted as an improvement.
pub const MIN_RHO_GAIN: f64 = 1e-10;

/// Removes `v3v4` and joins `v3` to every hub vertex it is not yet adjacent to.
pub fn claim3_rewire(g: &Graph, v3: usize, v4: usize, hub: &VertexSet) -> Result<Graph> {
    let n = g.order();
    if v3 >= n || v4 >= n || hub.universe() != n {
        return Err(Error::InvalidParameter(format!(
            "vertices and hub must live on 0..{n}"
        )));
    }
    if !g.has_edge(v3, v4) {
        return Err(Error::NotAnEdge(v3, v4));
    }
    if hub.is_empty() {
        return Err(Error::InvalidParameter("hub is empty".into()));
    }
    if hub.contains(v3) || hub.contains(v4) {
        return Err(Error::InvalidParameter(format!(
            "hub must avoid both {v3} and {v4}"
        )));
    }
    let add: Vec<(usize, usize)> = hub
        .iter()
        .filter(|&h| !g.has_edge(v3, h))
        .map(|h| (v3, h))
        .collect();
    Ok(g.edited(&[(v3, v4)], &add))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalSearchOptions {
    /// Maximum number of accepted moves, summed over restarts.
    pub budget: usize,
    pub seed: u64,
    /// Number of climbs from the start graph. The first uses the fixed move
    /// order; later ones shuffle it with a generator seeded from `seed`.
    pub restarts: usize,
    pub objective: Objective,
}

impl Default for LocalSearchOptions {
    fn default() -> Self {
        LocalSearchOptions {
            budget: 10_000,
            seed: 0,
            restarts: 1,
            objective: Objective::SpectralRadius,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalSearchOutcome {
    pub record: ExtremalRecord,
    #[serde(skip)]
    pub best: Option<Graph>,
    pub accepted_moves: usize,
    /// Climbs that stopped at a graph with no improving move.
    pub local_optima: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Move {
    Rewire { v3: usize, v4: usize, hub: HubRule },
    Add(usize, usize),
}

/// Hub choice for rewiring moves: the current `R''`, or the `2k-1` vertices
/// with the largest Perron entries (the size `R''` has on the extremal graph).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum HubRule {
    Threshold,
    TopEntries,
}

struct Climber<'a> {
    k: usize,
    opts: &'a LocalSearchOptions,
    examined: u64,
    evaluated: u64,
}

impl Climber<'_> {
    fn score(&self, g: &Graph, p: &PerronResult) -> f64 {
        match self.opts.objective {
            Objective::Edges => g.edge_count() as f64,
            Objective::SpectralRadius => p.rho,
        }
    }

    fn hubs(&self, p: &PerronResult, g: &Graph) -> Result<(VertexSet, VertexSet)> {
        let n = g.order();
        let threshold = compute_thresholds(g, p, self.k as u64)?.r_dprime;
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| p.x[b].total_cmp(&p.x[a]).then(a.cmp(&b)));
        let top = VertexSet::from_vertices(n, order.into_iter().take((2 * self.k - 1).min(n)));
        Ok((threshold, top))
    }

    fn moves(&self, g: &Graph, p: &PerronResult, rng: Option<&mut ChaCha8Rng>) -> Vec<Move> {
        let n = g.order();
        let mut by_entry: Vec<usize> = (0..n).collect();
        by_entry.sort_by(|&a, &b| p.x[a].total_cmp(&p.x[b]).then(a.cmp(&b)));
        let mut rewires = Vec::new();
        for hub in [HubRule::Threshold, HubRule::TopEntries] {
            for &v3 in &by_entry {
                for v4 in g.neighbor_iter(v3) {
                    rewires.push(Move::Rewire { v3, v4, hub });
                }
            }
        }
        let mut adds: Vec<Move> = g.non_edges().map(|(u, v)| Move::Add(u, v)).collect();
        if let Some(rng) = rng {
            rewires.shuffle(rng);
            adds.shuffle(rng);
        }
        rewires.extend(adds);
        rewires
    }

    fn apply(&self, g: &Graph, m: Move, hubs: &(VertexSet, VertexSet)) -> Option<Graph> {
        match m {
            Move::Add(u, v) => Some(g.with_edge(u, v)),
            Move::Rewire { v3, v4, hub } => {
                let hub = match hub {
                    HubRule::Threshold => &hubs.0,
                    HubRule::TopEntries => &hubs.1,
                };
                if hub.contains(v3) || hub.contains(v4) || hub.is_subset(&g.neighbors(v3)) {
                    return None;
                }
                claim3_rewire(g, v3, v4, hub).ok()
            }
        }
    }

    fn feasible(&self, g: &Graph) -> bool {
        has_k_disjoint_cycles(g, self.k).is_ok_and(|a| a.exact && !a.found)
    }

    /// Climbs from `g` until no move improves or the budget runs out.
    /// Returns the final graph, its Perron data, the moves used, and whether
    /// it stopped at a local optimum.
    fn climb(
        &mut self,
        g: Graph,
        budget: usize,
        mut rng: Option<ChaCha8Rng>,
    ) -> Result<(Graph, PerronResult, usize, bool)> {
        let mut g = g;
        let mut p = spectral_radius(&g, DEFAULT_TOL);
        let mut used = 0;
        'outer: while used < budget {
            let current = self.score(&g, &p);
            let hubs = self.hubs(&p, &g)?;
            for m in self.moves(&g, &p, rng.as_mut()) {
                let Some(h) = self.apply(&g, m, &hubs) else {
                    continue;
                };
                self.examined += 1;
                let q = spectral_radius(&h, DEFAULT_TOL);
                self.evaluated += 1;
                let gain = self.score(&h, &q) - current;
                let improves = match self.opts.objective {
                    Objective::Edges => gain > 0.5 || (gain > -0.5 && q.rho > p.rho + MIN_RHO_GAIN),
                    Objective::SpectralRadius => gain > MIN_RHO_GAIN,
                };
                if improves && q.converged && self.feasible(&h) {
                    g = h;
                    p = q;
                    used += 1;
                    continue 'outer;
                }
            }
            return Ok((g, p, used, true));
        }
        Ok((g, p, used, false))
    }
}

/// First-improvement hill climbing from `g0`. Moves are scanned rewires
/// first (hub `R''`, then the top `2k-1` Perron vertices, `v3` by increasing
/// entry), then single-edge additions in lexicographic order. A move is taken
/// when the result still lacks `k` disjoint cycles and the objective rises.
/// Edge deletions are never scanned since they cannot raise either objective.
pub fn local_search(g0: &Graph, k: usize, opts: &LocalSearchOptions) -> Result<LocalSearchOutcome> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be positive".into()));
    }
    if opts.restarts == 0 {
        return Err(Error::InvalidParameter("at least one restart is required".into()));
    }
    let start = has_k_disjoint_cycles(g0, k)?;
    if start.found || !start.exact {
        return Err(Error::Infeasible { k });
    }

    let mut climber = Climber {
        k,
        opts,
        examined: 0,
        evaluated: 0,
    };
    let mut best = g0.clone();
    let mut best_p = spectral_radius(g0, DEFAULT_TOL);
    let mut remaining = opts.budget;
    let mut accepted = 0;
    let mut optima = 0;
    for r in 0..opts.restarts {
        if remaining == 0 {
            break;
        }
        let rng = (r > 0).then(|| ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(r as u64)));
        let (g, p, used, optimum) = climber.climb(g0.clone(), remaining, rng)?;
        remaining -= used;
        accepted += used;
        optima += optimum as usize;
        if climber.score(&g, &p) > climber.score(&best, &best_p) + MIN_RHO_GAIN {
            best = g;
            best_p = p;
        }
    }

    if has_k_disjoint_cycles(&best, k)?.found {
        return Err(Error::Invariant("local search left the feasible set".into()));
    }
    let record = ExtremalRecord {
        n: g0.order(),
        k,
        objective: opts.objective,
        mode: SearchMode::LocalSearch,
        optimum: climber.score(&best, &best_p),
        witnesses: vec![Witness::from_graph(&best)?],
        graphs_examined: climber.examined,
        graphs_evaluated: climber.evaluated,
        exact: false,
        enumeration: None,
    };
    Ok(LocalSearchOutcome {
        record,
        best: Some(best),
        accepted_moves: accepted,
        local_optima: optima,
    })
}
