//! Laplacian spectra of Cayley graphs.
//!
//! `Δ = I − A/k`. Graphs with at most [`DENSE_LIMIT`] vertices get the full
//! spectrum from a dense eigensolve; larger ones get `λ₁` from a restarted
//! Lanczos iteration on the sparse operator with constants deflated.

mod dense;
mod lanczos;

use alloc::vec::Vec;

use libm::{fabs, sqrt};

use crate::cayley::CayleyGraph;
use crate::error::{Error, Result};

pub use lanczos::{lambda1_iterative, lambda1_iterative_with, LanczosOptions};

pub const DENSE_LIMIT: usize = 5000;
pub const DEFAULT_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Dense,
    Lanczos,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Dense => "dense",
            Method::Lanczos => "lanczos",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralReport {
    /// Filled in by callers that know which prime the graph came from.
    pub prime: Option<u64>,
    pub vertices: usize,
    pub psl: bool,
    /// Ascending. Complete for the dense method; the lowest few Ritz values
    /// for Lanczos (always starting with the exact `0`).
    pub eigenvalues: Vec<f64>,
    pub lambda1: f64,
    pub method: Method,
    /// Largest of the `λ₀` and `λ₁` eigenpair residuals `‖Δx − λx‖`, `‖x‖ = 1`.
    pub residual: f64,
    /// Operator applications (Lanczos) or 0.
    pub iterations: usize,
    /// Wall time; left at 0 by this crate, which has no clock.
    pub seconds: f64,
}

impl SpectralReport {
    pub fn lambda_max(&self) -> Option<f64> {
        match self.method {
            Method::Dense => self.eigenvalues.last().copied(),
            Method::Lanczos => None,
        }
    }

    /// Number of eigenvalues within `tol` of `value`.
    pub fn multiplicity(&self, value: f64, tol: f64) -> usize {
        self.eigenvalues.iter().filter(|x| fabs(**x - value) <= tol).count()
    }
}

/// Full spectrum of `Δ` by Householder reduction and implicit QL.
pub fn laplacian_spectrum_dense(g: &CayleyGraph) -> Result<SpectralReport> {
    let v = g.vertex_count();
    if v > DENSE_LIMIT {
        return Err(Error::GraphTooLarge {
            vertices: v,
            limit: DENSE_LIMIT,
        });
    }
    if v == 0 || g.k() == 0 {
        return Err(Error::InvalidInput("empty graph".into()));
    }
    let t = dense::Tridiagonal::reduce(g.dense_laplacian(), v);
    let eigenvalues = dense::tridiagonal_eigenvalues(&t.diag, &t.off)?;

    let constant = vec_const(v);
    let mut residual = eigen_residual(g, &constant, 0.0);
    let lambda1 = if v >= 2 { eigenvalues[1] } else { eigenvalues[0] };
    if v >= 2 {
        let mut y = dense::tridiagonal_eigenvector(&t.diag, &t.off, lambda1, 0x7468_696e);
        t.back_transform(&mut y);
        dense::normalize(&mut y);
        residual = residual.max(eigen_residual(g, &y, lambda1));
    }
    Ok(SpectralReport {
        prime: None,
        vertices: v,
        psl: g.is_psl(),
        eigenvalues,
        lambda1,
        method: Method::Dense,
        residual,
        iterations: 0,
        seconds: 0.0,
    })
}

/// Dense below the threshold, Lanczos above it.
pub fn lambda1_auto(g: &CayleyGraph, tol: f64) -> Result<SpectralReport> {
    if g.vertex_count() <= DENSE_LIMIT {
        laplacian_spectrum_dense(g)
    } else {
        lambda1_iterative(g, tol)
    }
}

fn vec_const(v: usize) -> Vec<f64> {
    alloc::vec![1.0 / sqrt(v as f64); v]
}

pub(crate) fn eigen_residual(g: &CayleyGraph, x: &[f64], lambda: f64) -> f64 {
    let mut y = alloc::vec![0.0; x.len()];
    g.apply_laplacian(x, &mut y);
    sqrt(y.iter().zip(x).map(|(a, b)| (a - lambda * b) * (a - lambda * b)).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::image::enumerate_image;
    use alloc::vec;
    use alloc::vec::Vec;

    fn ex5_graph(p: u64, psl: bool) -> CayleyGraph {
        let g = catalog::generators("ex5").unwrap();
        let img = enumerate_image(&g, p, 1 << 20).unwrap();
        crate::cayley::build_cayley(&img, psl).unwrap()
    }

    fn cycle(n: u32) -> CayleyGraph {
        CayleyGraph::from_adjacency((0..n).map(|i| vec![(i + 1) % n, (i + n - 1) % n]).collect()).unwrap()
    }

    #[test]
    fn ex5_mod3_spectrum() {
        let r = laplacian_spectrum_dense(&ex5_graph(3, false)).unwrap();
        assert_eq!(r.vertices, 24);
        assert_eq!(r.multiplicity(0.0, 1e-9), 1);
        // every listed value occurs, but the list is not in ascending order
        assert_eq!(r.multiplicity(0.5, 1e-9), 4);
        assert_eq!(r.multiplicity(0.75, 1e-9), 2);
        assert_eq!(r.multiplicity(1.25, 1e-9), 8);
        assert_eq!(r.multiplicity((7.0 + sqrt(17.0)) / 8.0, 1e-9), 3);
        assert_eq!(r.multiplicity(1.75, 1e-9), 3);
        assert!(fabs(r.lambda1 - (7.0 - sqrt(17.0)) / 8.0) < 1e-9);
        assert!(fabs(r.lambda_max().unwrap() - 1.75) < 1e-9);
        assert!(r.residual < 1e-9);
        assert!(r.eigenvalues.iter().all(|&x| (-1e-12..=2.0 + 1e-12).contains(&x)));
    }

    #[test]
    fn disconnected_graph_has_double_zero() {
        let mut lists: Vec<Vec<u32>> = (0..4).map(|i| vec![(i + 1) % 4, (i + 3) % 4]).collect();
        lists.extend((0..3).map(|i| vec![4 + (i + 1) % 3, 4 + (i + 2) % 3]));
        let g = CayleyGraph::from_adjacency(lists).unwrap();
        let r = laplacian_spectrum_dense(&g).unwrap();
        assert_eq!(r.multiplicity(0.0, 1e-9), 2);
        assert_eq!(g.component_count(), 2);
        assert_eq!(lambda1_iterative(&g, 1e-8), Err(Error::Disconnected));
    }

    #[test]
    fn complete_graph_k5() {
        let g = CayleyGraph::from_adjacency((0..5u32).map(|i| (0..5).filter(|&j| j != i).collect()).collect())
            .unwrap();
        let r = laplacian_spectrum_dense(&g).unwrap();
        assert_eq!(r.multiplicity(0.0, 1e-12), 1);
        assert_eq!(r.multiplicity(1.25, 1e-12), 4);
    }

    #[test]
    fn cycle_100_closed_form() {
        let exact = 1.0 - libm::cos(2.0 * core::f64::consts::PI / 100.0);
        let c = cycle(100);
        let d = laplacian_spectrum_dense(&c).unwrap();
        assert!(fabs(d.lambda1 - exact) < 1e-12);
        let it = lambda1_iterative(&c, 1e-8).unwrap();
        assert!(fabs(it.lambda1 - exact) < 1e-9, "{} vs {exact}", it.lambda1);
        assert!(it.residual <= 1e-8);
    }

    #[test]
    fn iterative_matches_dense() {
        for (p, psl) in [(3, false), (5, false), (7, true), (11, true)] {
            let g = ex5_graph(p, psl);
            let d = laplacian_spectrum_dense(&g).unwrap();
            let it = lambda1_iterative(&g, 1e-8).unwrap();
            assert!(fabs(d.lambda1 - it.lambda1) < 1e-6, "p={p}: {} vs {}", d.lambda1, it.lambda1);
            assert_eq!(it.eigenvalues[0], 0.0);
        }
    }

    #[test]
    fn matvec_budget_is_a_hard_limit() {
        let g = cycle(400);
        let opts = |max_matvecs| LanczosOptions {
            max_matvecs,
            ..LanczosOptions::default()
        };
        match lambda1_iterative_with(&g, opts(10)) {
            Err(Error::NoConvergence { iterations, residual }) => {
                assert!(iterations <= 10);
                assert!(residual > DEFAULT_TOLERANCE);
            }
            other => panic!("expected a convergence failure, got {other:?}"),
        }
        let ok = lambda1_iterative_with(&g, opts(5000)).unwrap();
        assert!(ok.iterations <= 5000);
    }

    #[test]
    fn oversized_dense_is_refused() {
        let g = cycle(DENSE_LIMIT as u32 + 1);
        assert!(matches!(laplacian_spectrum_dense(&g), Err(Error::GraphTooLarge { .. })));
    }
}
