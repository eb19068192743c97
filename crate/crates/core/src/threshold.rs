//! Perron-entry threshold sets and the structural checks built on them.
//!
//! With `λ = 1/(120k²)` and ratios `r_v = x_v / x_{u*}`:
//!
//! ```text
//! R    = { v : r_v >  λ }
//! R'   = { v : r_v > 4λ }
//! R''  = { v : r_v ≥ 1/(4k) }
//! R''' = { v : R'' ⊆ N(v) }
//! R''''= V \ (R'' ∪ R''')
//! ```
//!
//! The structural bounds on these sets are only guaranteed for the
//! spectral-extremal graph once `n ≥ 16(2k−1)/λ²`. Below that order every
//! check is still measured but reported as not applicable.

use std::collections::BTreeSet;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{edge_count_between, second_neighborhood, Graph, VertexSet};
use crate::spectral::{split_radicand, PerronResult, MAX_ANALYTIC_ORDER};

/// Largest order for which [`SplitThresholds::materialize`] builds explicit sets.
pub const MATERIALIZE_MAX_ORDER: u64 = 1 << 20;

pub fn lambda(k: u64) -> f64 {
    1.0 / (120.0 * (k * k) as f64)
}

/// `16(2k−1)/λ² = 16(2k−1)(120k²)²`, the smallest order covered by the
/// structural bounds.
pub fn hypothesis_order(k: u64) -> u128 {
    let k = k as u128;
    16 * (2 * k - 1) * (120 * k * k) * (120 * k * k)
}

pub fn hypothesis_holds(n: u64, k: u64) -> bool {
    k >= 2 && n as u128 >= hypothesis_order(k)
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ThresholdConfig {
    /// Ratios within `slack` of a threshold count as ties: strict sets
    /// exclude them, `R''` includes them. `0` compares exactly.
    pub slack: f64,
}

fn serialize_set<S: Serializer>(set: &VertexSet, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(set.iter())
}

#[derive(Clone, Debug, Serialize)]
pub struct ThresholdSets {
    pub k: u64,
    pub lambda: f64,
    pub u_star: usize,
    #[serde(serialize_with = "serialize_set")]
    pub r: VertexSet,
    #[serde(serialize_with = "serialize_set")]
    pub r_prime: VertexSet,
    #[serde(serialize_with = "serialize_set")]
    pub r_dprime: VertexSet,
    #[serde(serialize_with = "serialize_set")]
    pub r_tprime: VertexSet,
    #[serde(serialize_with = "serialize_set")]
    pub r_qprime: VertexSet,
    pub ratios: Vec<f64>,
}

impl ThresholdSets {
    /// Recomputes membership from `ratios` and compares with the stored sets.
    pub fn is_consistent(&self, g: &Graph, cfg: &ThresholdConfig) -> bool {
        let again = classify(g, self.k, self.u_star, self.ratios.clone(), cfg);
        again.r == self.r
            && again.r_prime == self.r_prime
            && again.r_dprime == self.r_dprime
            && again.r_tprime == self.r_tprime
            && again.r_qprime == self.r_qprime
    }
}

fn classify(g: &Graph, k: u64, u_star: usize, ratios: Vec<f64>, cfg: &ThresholdConfig) -> ThresholdSets {
    let n = g.order();
    let lam = lambda(k);
    let strict = |r: f64, t: f64| r - t > cfg.slack;
    let loose = |r: f64, t: f64| r - t >= -cfg.slack;
    let pick = |f: &dyn Fn(f64) -> bool| VertexSet::from_vertices(n, (0..n).filter(|&v| f(ratios[v])));
    let r = pick(&|x| strict(x, lam));
    let r_prime = pick(&|x| strict(x, 4.0 * lam));
    let r_dprime = pick(&|x| loose(x, 1.0 / (4 * k) as f64));
    let r_tprime = VertexSet::from_vertices(n, (0..n).filter(|&v| r_dprime.is_subset(&g.neighbors(v))));
    let r_qprime = r_dprime.union(&r_tprime).complement();
    ThresholdSets {
        k,
        lambda: lam,
        u_star,
        r,
        r_prime,
        r_dprime,
        r_tprime,
        r_qprime,
        ratios,
    }
}

pub fn compute_thresholds(g: &Graph, p: &PerronResult, k: u64) -> Result<ThresholdSets> {
    compute_thresholds_with(g, p, k, &ThresholdConfig::default())
}

/// Threshold sets of `g` from its Perron vector.
///
/// Ratios are taken against the largest entry, so vertices outside the
/// realizing component have ratio 0.
pub fn compute_thresholds_with(
    g: &Graph,
    p: &PerronResult,
    k: u64,
    cfg: &ThresholdConfig,
) -> Result<ThresholdSets> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    if !p.converged {
        return Err(Error::NotConverged { residual: p.residual });
    }
    if p.x.len() != g.order() {
        return Err(Error::InvalidParameter(
            "Perron vector length differs from graph order".into(),
        ));
    }
    if !(0.0..=1e-3).contains(&cfg.slack) {
        return Err(Error::InvalidParameter(format!(
            "slack {} outside [0, 1e-3]",
            cfg.slack
        )));
    }
    Ok(classify(g, k, p.u_star(), p.ratios(), cfg))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LemmaStatus {
    Pass,
    Fail,
    NotApplicable,
}

/// The structural claims checked on threshold sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LemmaCheck {
    /// `|R| ≤ 2√((2k−1)n)`.
    RSize,
    /// `|R'| ≤ 6k/λ`.
    RPrimeSize,
    /// `d(v) > λn/3` on `R'`.
    RPrimeDegree,
    /// `d(v) > (r_v − 1/(12k))n` on `R''`; measured as the smallest margin.
    RDoublePrimeDegreeByRatio,
    /// `d(v) ≥ (1 − 5/(12k))n` on `R''`.
    RDoublePrimeDegree,
    /// `|R''| = 2k − 1`.
    RDoublePrimeSize,
    /// `e(N(v), N²(v) ∩ R) ≤ (5k/3 − 1)λn` for `d(v) ≤ λn/3`.
    LowDegreeSecondNeighborhood,
}

impl LemmaCheck {
    pub fn claim(&self) -> &'static str {
        match self {
            LemmaCheck::RSize => "|R| <= 2 sqrt((2k-1) n)",
            LemmaCheck::RPrimeSize => "|R'| <= 6k / lambda",
            LemmaCheck::RPrimeDegree => "d(v) > lambda n / 3 for v in R'",
            LemmaCheck::RDoublePrimeDegreeByRatio => "d(v) - (x_v/x_u* - 1/(12k)) n > 0 for v in R''",
            LemmaCheck::RDoublePrimeDegree => "d(v) >= (1 - 5/(12k)) n for v in R''",
            LemmaCheck::RDoublePrimeSize => "|R''| = 2k - 1",
            LemmaCheck::LowDegreeSecondNeighborhood => {
                "e(N(v), N2(v) & R) <= (5k/3 - 1) lambda n when d(v) <= lambda n / 3"
            }
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaEntry {
    pub check: LemmaCheck,
    pub claim: &'static str,
    pub bound: f64,
    /// `None` when the claim is vacuous (quantifies over an empty set).
    pub measured: Option<f64>,
    pub hypothesis_satisfied: bool,
    pub holds: bool,
    pub status: LemmaStatus,
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaReport {
    pub n: u64,
    pub k: u64,
    pub lambda: f64,
    pub hypothesis_order: u128,
    pub hypothesis_satisfied: bool,
    pub entries: Vec<LemmaEntry>,
}

impl LemmaReport {
    pub fn entry(&self, check: LemmaCheck) -> &LemmaEntry {
        self.entries
            .iter()
            .find(|e| e.check == check)
            .expect("every check is reported")
    }

    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.status == LemmaStatus::Pass)
    }

    pub fn any_fail(&self) -> bool {
        self.entries.iter().any(|e| e.status == LemmaStatus::Fail)
    }
}

/// Vertices sharing a degree and a ratio.
#[derive(Clone, Copy, Debug)]
struct Group {
    degree: f64,
    ratio: f64,
}

struct LemmaInputs {
    n: u64,
    k: u64,
    r_size: u64,
    r_prime_size: u64,
    r_prime: Vec<Group>,
    r_dprime_size: u64,
    r_dprime: Vec<Group>,
    /// Largest `e(N(v), N²(v) ∩ R)` over low-degree vertices, if any.
    second_load: Option<f64>,
}

fn min_of(it: impl Iterator<Item = f64>) -> Option<f64> {
    it.fold(None, |acc, x| Some(acc.map_or(x, |a: f64| a.min(x))))
}

fn evaluate(inp: &LemmaInputs) -> LemmaReport {
    let (n, k) = (inp.n as f64, inp.k as f64);
    let lam = lambda(inp.k);
    let hyp = hypothesis_holds(inp.n, inp.k);
    let mut entries = Vec::new();
    let mut push = |check: LemmaCheck, bound: f64, measured: Option<f64>, holds: bool| {
        let status = match (hyp, holds) {
            (false, _) => LemmaStatus::NotApplicable,
            (true, true) => LemmaStatus::Pass,
            (true, false) => LemmaStatus::Fail,
        };
        entries.push(LemmaEntry {
            check,
            claim: check.claim(),
            bound,
            measured,
            hypothesis_satisfied: hyp,
            holds,
            status,
        });
    };

    let b = 2.0 * ((2.0 * k - 1.0) * n).sqrt();
    push(
        LemmaCheck::RSize,
        b,
        Some(inp.r_size as f64),
        inp.r_size as f64 <= b,
    );

    let b = 6.0 * k / lam;
    push(
        LemmaCheck::RPrimeSize,
        b,
        Some(inp.r_prime_size as f64),
        inp.r_prime_size as f64 <= b,
    );

    let b = lam * n / 3.0;
    let m = min_of(inp.r_prime.iter().map(|g| g.degree));
    push(LemmaCheck::RPrimeDegree, b, m, m.is_none_or(|d| d > b));

    let m = min_of(
        inp.r_dprime
            .iter()
            .map(|g| g.degree - (g.ratio - 1.0 / (12.0 * k)) * n),
    );
    push(
        LemmaCheck::RDoublePrimeDegreeByRatio,
        0.0,
        m,
        m.is_none_or(|d| d > 0.0),
    );

    let b = (1.0 - 5.0 / (12.0 * k)) * n;
    let m = min_of(inp.r_dprime.iter().map(|g| g.degree));
    push(LemmaCheck::RDoublePrimeDegree, b, m, m.is_none_or(|d| d >= b));

    let b = 2.0 * k - 1.0;
    push(
        LemmaCheck::RDoublePrimeSize,
        b,
        Some(inp.r_dprime_size as f64),
        inp.r_dprime_size == 2 * inp.k - 1,
    );

    let b = (5.0 * k / 3.0 - 1.0) * lam * n;
    push(
        LemmaCheck::LowDegreeSecondNeighborhood,
        b,
        inp.second_load,
        inp.second_load.is_none_or(|l| l <= b),
    );

    LemmaReport {
        n: inp.n,
        k: inp.k,
        lambda: lam,
        hypothesis_order: hypothesis_order(inp.k),
        hypothesis_satisfied: hyp,
        entries,
    }
}

/// Measures every structural claim on `g`. Nothing is reported as failing
/// unless `n ≥ 16(2k−1)/λ²` and `k ≥ 2`.
pub fn verify_lemma_bounds(t: &ThresholdSets, g: &Graph, k: u64) -> LemmaReport {
    let n = g.order();
    let lam = lambda(k);
    let groups = |set: &VertexSet| -> Vec<Group> {
        set.iter()
            .map(|v| Group {
                degree: g.degree(v) as f64,
                ratio: t.ratios[v],
            })
            .collect()
    };
    let low_cut = lam * n as f64 / 3.0;
    let second_load = (0..n)
        .filter(|&v| g.degree(v) as f64 <= low_cut)
        .map(|v| {
            let far = second_neighborhood(g, v).intersection(&t.r);
            edge_count_between(g, &g.neighbors(v), &far) as f64
        })
        .fold(None, |acc: Option<f64>, x| Some(acc.map_or(x, |a| a.max(x))));
    evaluate(&LemmaInputs {
        n: n as u64,
        k,
        r_size: t.r.len() as u64,
        r_prime_size: t.r_prime.len() as u64,
        r_prime: groups(&t.r_prime),
        r_dprime_size: t.r_dprime.len() as u64,
        r_dprime: groups(&t.r_dprime),
        second_load,
    })
}

/// Which of the two vertex classes of `S_{n,2k−1}` a set contains.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ClassMembership {
    pub clique: bool,
    pub independent: bool,
}

impl ClassMembership {
    pub const NONE: ClassMembership = ClassMembership {
        clique: false,
        independent: false,
    };
    pub const CLIQUE: ClassMembership = ClassMembership {
        clique: true,
        independent: false,
    };
    pub const INDEPENDENT: ClassMembership = ClassMembership {
        clique: false,
        independent: true,
    };
}

/// Threshold structure of `S_{n,2k−1}` from its two-valued Perron vector,
/// without building the graph. Clique vertices are `0..2k−1`.
#[derive(Clone, Debug, Serialize)]
pub struct SplitThresholds {
    pub n: u64,
    pub k: u64,
    pub lambda: f64,
    pub rho: f64,
    /// `x_v / x_{u*}` on the independent side, `(2k−1)/ρ`.
    pub independent_ratio: f64,
    pub r: ClassMembership,
    pub r_prime: ClassMembership,
    pub r_dprime: ClassMembership,
    pub r_tprime: ClassMembership,
    pub r_qprime: ClassMembership,
}

/// Decides `(2k−1)/ρ` against `1/denom` exactly: returns the ordering of
/// `ρ` relative to `denom·(2k−1)`, via `√D` vs `denom·(2k−1) − (k−1)`.
fn rho_vs(n: u64, k: u64, denom: u128) -> std::cmp::Ordering {
    let d = split_radicand(n, k);
    let target = denom * (2 * k as u128 - 1);
    let m = target - (k as u128 - 1);
    d.cmp(&(m * m))
}

impl SplitThresholds {
    pub fn clique_size(&self) -> u64 {
        2 * self.k - 1
    }

    pub fn size(&self, m: ClassMembership) -> u64 {
        let c = self.clique_size();
        (m.clique as u64) * c + (m.independent as u64) * (self.n - c)
    }

    /// Explicit sets on `S_{n,2k−1}` labeled as [`crate::make_complete_split`] does.
    pub fn materialize(&self) -> Result<ThresholdSets> {
        if self.n > MATERIALIZE_MAX_ORDER {
            return Err(Error::UnsupportedSize {
                n: self.n as usize,
                cap: MATERIALIZE_MAX_ORDER as usize,
            });
        }
        let n = self.n as usize;
        let c = self.clique_size() as usize;
        let set = |m: ClassMembership| {
            VertexSet::from_vertices(
                n,
                (0..n).filter(|&v| if v < c { m.clique } else { m.independent }),
            )
        };
        Ok(ThresholdSets {
            k: self.k,
            lambda: self.lambda,
            u_star: 0,
            r: set(self.r),
            r_prime: set(self.r_prime),
            r_dprime: set(self.r_dprime),
            r_tprime: set(self.r_tprime),
            r_qprime: set(self.r_qprime),
            ratios: (0..n)
                .map(|v| if v < c { 1.0 } else { self.independent_ratio })
                .collect(),
        })
    }

    pub fn lemma_report(&self) -> LemmaReport {
        let (n, c) = (self.n, self.clique_size());
        let clique = Group {
            degree: (n - 1) as f64,
            ratio: 1.0,
        };
        let indep = Group {
            degree: c as f64,
            ratio: self.independent_ratio,
        };
        let groups = |m: ClassMembership| {
            let mut g = Vec::new();
            if m.clique {
                g.push(clique);
            }
            if m.independent {
                g.push(indep);
            }
            g
        };
        // Low-degree vertices are independent ones (degree 2k−1) once
        // λn/3 ≥ 2k−1. Their second neighborhood is the rest of the
        // independent side; it meets R only if that side is in R.
        let low_cut = lambda(self.k) * n as f64 / 3.0;
        let second_load = if (c as f64) <= low_cut {
            let others = n - c - 1;
            Some(if self.r.independent {
                (c * others) as f64
            } else {
                0.0
            })
        } else {
            None
        };
        evaluate(&LemmaInputs {
            n,
            k: self.k,
            r_size: self.size(self.r),
            r_prime_size: self.size(self.r_prime),
            r_prime: groups(self.r_prime),
            r_dprime_size: self.size(self.r_dprime),
            r_dprime: groups(self.r_dprime),
            second_load,
        })
    }

    /// Whether `2k` vertices of `R''` have `2k` common neighbors.
    pub fn has_common_neighborhood_biclique(&self) -> bool {
        let (n, k, c) = (self.n, self.k, self.clique_size());
        let avail_c = if self.r_dprime.clique { c } else { 0 };
        let avail_i = if self.r_dprime.independent { n - c } else { 0 };
        (0..=avail_c.min(2 * k)).any(|a| {
            let b = 2 * k - a;
            if b > avail_i {
                return false;
            }
            // Common neighbors: unchosen clique vertices, plus the unchosen
            // independent ones when no independent vertex is chosen.
            let common = (c - a) + if b == 0 { n - c } else { 0 };
            common >= 2 * k
        })
    }
}

/// Threshold structure of `S_{n,2k−1}` for `n` up to `10^15`.
pub fn split_threshold_structure(n: u64, k: u64) -> Result<SplitThresholds> {
    let rho = crate::spectral::closed_form_split_rho(n, k)?;
    debug_assert!(n <= MAX_ANALYTIC_ORDER);
    let kk = k as u128;
    use std::cmp::Ordering::*;
    // ratio > 1/t  <=>  ρ < t(2k−1);  ratio ≥ 1/t  <=>  ρ ≤ t(2k−1)
    let in_r = rho_vs(n, k, 120 * kk * kk) == Less;
    let in_r_prime = rho_vs(n, k, 30 * kk * kk) == Less;
    let in_r_dprime = rho_vs(n, k, 4 * kk) != Greater;
    let r_dprime = ClassMembership {
        clique: true,
        independent: in_r_dprime,
    };
    // A clique vertex misses itself; an independent vertex sees the whole clique.
    let r_tprime = if in_r_dprime {
        ClassMembership::NONE
    } else {
        ClassMembership {
            clique: false,
            independent: true,
        }
    };
    Ok(SplitThresholds {
        n,
        k,
        lambda: lambda(k),
        rho,
        independent_ratio: (2 * k - 1) as f64 / rho,
        r: ClassMembership {
            clique: true,
            independent: in_r,
        },
        r_prime: ClassMembership {
            clique: true,
            independent: in_r_prime,
        },
        r_dprime,
        r_tprime,
        r_qprime: ClassMembership::NONE,
    })
}

/// `|S₁ ∩ ⋯ ∩ S_k|` and `Σ|S_i| − (k−1)|S₁ ∪ ⋯ ∪ S_k|`. An empty family
/// gives `(0, 0)`.
pub fn set_intersection_bound<T: Ord + Clone>(sets: &[BTreeSet<T>]) -> (usize, i64) {
    let Some((first, rest)) = sets.split_first() else {
        return (0, 0);
    };
    let inter = first
        .iter()
        .filter(|x| rest.iter().all(|s| s.contains(*x)))
        .count();
    let union: BTreeSet<&T> = sets.iter().flatten().collect();
    let total: i64 = sets.iter().map(|s| s.len() as i64).sum();
    (inter, total - (sets.len() as i64 - 1) * union.len() as i64)
}

/// A `K_{2k,2k}` whose left side lies in `R''`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Biclique {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

fn biclique_dfs(
    g: &Graph,
    pool: &[usize],
    need: usize,
    chosen: &mut Vec<usize>,
    common: VertexSet,
) -> Option<Biclique> {
    if chosen.len() == need {
        return Some(Biclique {
            left: chosen.clone(),
            right: common.iter().take(need).collect(),
        });
    }
    for (i, &v) in pool.iter().enumerate() {
        if pool.len() - i < need - chosen.len() {
            break;
        }
        let next = common.intersection(&g.neighbors(v));
        if next.len() < need {
            continue;
        }
        chosen.push(v);
        if let Some(b) = biclique_dfs(g, &pool[i + 1..], need, chosen, next) {
            return Some(b);
        }
        chosen.pop();
    }
    None
}

/// Looks for `2k` vertices of `R''` with at least `2k` common neighbors,
/// i.e. a `K_{2k,2k}` and hence `k` disjoint 4-cycles.
pub fn check_common_neighborhood_kkk(t: &ThresholdSets, g: &Graph, k: u64) -> Option<Biclique> {
    let need = 2 * k as usize;
    let pool = t.r_dprime.to_vec();
    if pool.len() < need {
        return None;
    }
    biclique_dfs(
        g,
        &pool,
        need,
        &mut Vec::with_capacity(need),
        VertexSet::full(g.order()),
    )
}
