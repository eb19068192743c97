//! Spectral radius and Perron vector, plus closed forms for complete split
//! graphs.
//!
//! The iteration runs on `A + I` per connected component. The shift makes
//! every non-trivial component primitive, so bipartite components converge
//! instead of oscillating between two vectors.

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

pub const DEFAULT_TOL: f64 = 1e-12;
pub const MAX_ITERATIONS: usize = 1_000_000;
/// Components whose radii differ by less than this (relative) are tied.
const COMPONENT_TIE: f64 = 1e-12;
/// Largest `n` accepted by the analytic split-graph routines.
pub const MAX_ANALYTIC_ORDER: u64 = 1_000_000_000_000_000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PowerOptions {
    pub tol: f64,
    pub max_iterations: usize,
}

impl Default for PowerOptions {
    fn default() -> Self {
        PowerOptions {
            tol: DEFAULT_TOL,
            max_iterations: MAX_ITERATIONS,
        }
    }
}

fn serialize_set<S: Serializer>(set: &VertexSet, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(set.iter())
}

#[derive(Clone, Debug, Serialize)]
pub struct PerronResult {
    pub rho: f64,
    /// Unit, nonnegative; zero outside `component`.
    pub x: Vec<f64>,
    /// `‖A x − ρ x‖∞` at the returned vector.
    pub residual: f64,
    pub iterations: usize,
    #[serde(serialize_with = "serialize_set")]
    pub component: VertexSet,
    pub converged: bool,
}

impl PerronResult {
    /// Vertex with the largest entry, lowest index on ties.
    pub fn u_star(&self) -> usize {
        let mut best = 0;
        for (v, &xv) in self.x.iter().enumerate() {
            if xv > self.x[best] {
                best = v;
            }
        }
        best
    }

    /// `x_v / x_{u*}` for every vertex.
    pub fn ratios(&self) -> Vec<f64> {
        let top = self.x[self.u_star()];
        self.x.iter().map(|&v| v / top).collect()
    }
}

struct ComponentRun {
    rho: f64,
    x: Vec<f64>,
    residual: f64,
    iterations: usize,
    converged: bool,
}

fn iterate_component(adj: &[Vec<u32>], opts: &PowerOptions) -> ComponentRun {
    let m = adj.len();
    if m == 1 {
        return ComponentRun {
            rho: 0.0,
            x: vec![1.0],
            residual: 0.0,
            iterations: 0,
            converged: true,
        };
    }
    let mut x = vec![1.0 / (m as f64).sqrt(); m];
    let mut ax = vec![0.0; m];
    let mut prev = f64::INFINITY;
    let mut best = (f64::INFINITY, 0.0, x.clone());
    for it in 1..=opts.max_iterations {
        for (i, nb) in adj.iter().enumerate() {
            ax[i] = nb.iter().map(|&j| x[j as usize]).sum();
        }
        let rho: f64 = x.iter().zip(&ax).map(|(a, b)| a * b).sum();
        let residual = x
            .iter()
            .zip(&ax)
            .map(|(&xi, &yi)| (yi - rho * xi).abs())
            .fold(0.0, f64::max);
        if residual < best.0 {
            best = (residual, rho, x.clone());
        }
        if (rho - prev).abs() <= opts.tol && residual <= opts.tol * rho.max(1.0) {
            return ComponentRun {
                rho,
                x,
                residual,
                iterations: it,
                converged: true,
            };
        }
        prev = rho;
        let mut norm = 0.0;
        for i in 0..m {
            x[i] += ax[i];
            norm += x[i] * x[i];
        }
        let norm = norm.sqrt();
        x.iter_mut().for_each(|v| *v /= norm);
    }
    let (residual, rho, x) = best;
    ComponentRun {
        rho,
        x,
        residual,
        iterations: opts.max_iterations,
        converged: false,
    }
}

pub fn spectral_radius(g: &Graph, tol: f64) -> PerronResult {
    spectral_radius_with(
        g,
        &PowerOptions {
            tol,
            ..PowerOptions::default()
        },
    )
}

/// Largest adjacency eigenvalue and a Perron vector of a component that
/// realizes it.
///
/// Components are iterated from the all-ones vector. Among components tied
/// for the maximum, the one holding the lowest vertex wins. An edgeless
/// graph reports `ρ = 0` with the uniform vector on all vertices.
pub fn spectral_radius_with(g: &Graph, opts: &PowerOptions) -> PerronResult {
    let n = g.order();
    if g.edge_count() == 0 {
        return PerronResult {
            rho: 0.0,
            x: vec![1.0 / (n as f64).sqrt(); n],
            residual: 0.0,
            iterations: 0,
            component: VertexSet::full(n),
            converged: true,
        };
    }
    let mut chosen: Option<(VertexSet, Vec<usize>, ComponentRun)> = None;
    let mut all_converged = true;
    let mut iterations = 0;
    for comp in g.components() {
        let verts = comp.to_vec();
        let mut local = vec![u32::MAX; n];
        for (i, &v) in verts.iter().enumerate() {
            local[v] = i as u32;
        }
        let adj: Vec<Vec<u32>> = verts
            .iter()
            .map(|&v| g.neighbor_iter(v).map(|w| local[w]).collect())
            .collect();
        let run = iterate_component(&adj, opts);
        all_converged &= run.converged;
        iterations += run.iterations;
        let better = match &chosen {
            None => true,
            Some((_, _, cur)) => run.rho > cur.rho + COMPONENT_TIE * cur.rho.max(1.0),
        };
        if better {
            chosen = Some((comp, verts, run));
        }
    }
    let (component, verts, run) = chosen.expect("graph has at least one vertex");
    let mut x = vec![0.0; n];
    for (i, &v) in verts.iter().enumerate() {
        x[v] = run.x[i];
    }
    PerronResult {
        rho: run.rho,
        x,
        residual: run.residual,
        iterations,
        component,
        converged: all_converged,
    }
}

fn check_split_params(n: u64, k: u64) -> Result<()> {
    if k == 0 || n < 2 * k {
        return Err(Error::InvalidParameter(format!(
            "need n > 2k-1 >= 1 (got n={n}, k={k})"
        )));
    }
    if n > MAX_ANALYTIC_ORDER {
        return Err(Error::UnsupportedSize {
            n: n as usize,
            cap: MAX_ANALYTIC_ORDER as usize,
        });
    }
    Ok(())
}

/// Radicand `(k−1)² + (2k−1)(n−2k+1)` of the split-graph radius, exact.
pub(crate) fn split_radicand(n: u64, k: u64) -> u128 {
    let (n, k) = (n as u128, k as u128);
    (k - 1) * (k - 1) + (2 * k - 1) * (n - 2 * k + 1)
}

/// `ρ(S_{n,2k−1}) = (k−1) + √((k−1)² + (2k−1)(n−2k+1))`.
pub fn closed_form_split_rho(n: u64, k: u64) -> Result<f64> {
    check_split_params(n, k)?;
    Ok((k - 1) as f64 + (split_radicand(n, k) as f64).sqrt())
}

/// Two-valued Perron profile of `S_{n,2k−1}`: entry `a` on the clique,
/// `b` on the independent side (unnormalized, `a = 1`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SplitSpectrum {
    pub n: u64,
    pub k: u64,
    pub rho: f64,
    pub a: f64,
    pub b: f64,
}

impl SplitSpectrum {
    /// Relative residuals of `ρa = (2k−2)a + (n−2k+1)b` and `ρb = (2k−1)a`.
    pub fn eigen_residuals(&self) -> (f64, f64) {
        let c = (2 * self.k - 1) as f64;
        let m = (self.n - 2 * self.k + 1) as f64;
        let lhs1 = self.rho * self.a;
        let rhs1 = (c - 1.0) * self.a + m * self.b;
        let lhs2 = self.rho * self.b;
        let rhs2 = c * self.a;
        ((lhs1 - rhs1).abs() / lhs1.abs(), (lhs2 - rhs2).abs() / lhs2.abs())
    }

    pub fn ratio(&self) -> f64 {
        self.b / self.a
    }
}

pub fn split_perron_profile(n: u64, k: u64) -> Result<SplitSpectrum> {
    let rho = closed_form_split_rho(n, k)?;
    Ok(SplitSpectrum {
        n,
        k,
        rho,
        a: 1.0,
        b: (2 * k - 1) as f64 / rho,
    })
}

/// `f(n,k) = (2k−1)(n−k)`.
///
/// # Panics
/// Panics unless `n > 2k − 1 >= 1`.
pub fn erdos_posa_edge_bound(n: u64, k: u64) -> u64 {
    assert!(k >= 1 && n > 2 * k - 1, "need n > 2k-1 >= 1");
    (2 * k - 1) * (n - k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::make_complete_split;

    #[test]
    fn edgeless_is_zero_and_uniform() {
        let r = spectral_radius(&Graph::empty(4).unwrap(), DEFAULT_TOL);
        assert_eq!(r.rho, 0.0);
        assert!(r.x.iter().all(|&v| (v - 0.5).abs() < 1e-15));
        assert_eq!(r.component.len(), 4);
        assert!(r.converged);
    }

    #[test]
    fn cycles_have_radius_two() {
        for n in 3..12 {
            let r = spectral_radius(&Graph::cycle(n).unwrap(), DEFAULT_TOL);
            assert!(r.converged);
            assert!((r.rho - 2.0).abs() < 1e-12, "C_{n}: {}", r.rho);
        }
    }

    #[test]
    fn bipartite_converges() {
        let r = spectral_radius(&Graph::complete_bipartite(3, 5).unwrap(), DEFAULT_TOL);
        assert!(r.converged);
        assert!((r.rho - 15f64.sqrt()).abs() < 1e-12);
        let p = spectral_radius(&Graph::path(10).unwrap(), DEFAULT_TOL);
        let exact = 2.0 * (std::f64::consts::PI / 11.0).cos();
        assert!((p.rho - exact).abs() < 1e-12);
    }

    #[test]
    fn split_ten_two() {
        let g = make_complete_split(10, 3).unwrap();
        let r = spectral_radius(&g, DEFAULT_TOL);
        let closed = closed_form_split_rho(10, 2).unwrap();
        assert!((closed - (1.0 + 22f64.sqrt())).abs() < 1e-15);
        assert!((r.rho - closed).abs() <= 1e-9);
        assert!((r.rho - 5.690415759823429).abs() < 1e-9);
    }

    #[test]
    fn star_closed_form() {
        assert_eq!(closed_form_split_rho(5, 1).unwrap(), 2.0);
        assert!(closed_form_split_rho(3, 2).is_err());
        assert!(closed_form_split_rho(3, 0).is_err());
    }

    #[test]
    fn disconnected_picks_larger_component() {
        let g = Graph::cycle(3)
            .unwrap()
            .disjoint_union(&Graph::complete(4).unwrap());
        let r = spectral_radius(&g, DEFAULT_TOL);
        assert!((r.rho - 3.0).abs() < 1e-12);
        assert_eq!(r.component.to_vec(), vec![3, 4, 5, 6]);
        assert!(r.x[..3].iter().all(|&v| v == 0.0));
        assert_eq!(r.u_star(), 3);
    }

    #[test]
    fn tied_components_take_lowest_vertex() {
        let g = Graph::path(2)
            .unwrap()
            .disjoint_union(&Graph::cycle(4).unwrap())
            .disjoint_union(&Graph::cycle(5).unwrap());
        let r = spectral_radius(&g, DEFAULT_TOL);
        assert_eq!(r.component.to_vec(), vec![2, 3, 4, 5]);
    }

    #[test]
    fn unconverged_is_flagged() {
        let opts = PowerOptions {
            tol: 1e-14,
            max_iterations: 3,
        };
        let r = spectral_radius_with(&Graph::path(30).unwrap(), &opts);
        assert!(!r.converged);
        assert!(r.residual > 0.0);
    }

    #[test]
    fn edge_bound_values() {
        assert_eq!(erdos_posa_edge_bound(48, 2), 138);
        assert_eq!(erdos_posa_edge_bound(9, 2), 21);
    }

    #[test]
    fn profile_ratio_ten_two() {
        let p = split_perron_profile(10, 2).unwrap();
        assert!((p.ratio() - 3.0 / (1.0 + 22f64.sqrt())).abs() < 1e-15);
        let (r1, r2) = p.eigen_residuals();
        assert!(r1 < 1e-12 && r2 < 1e-12);
    }
}
