//! Cayley graphs of enumerated finite images.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::image::GroupImage;
use crate::modular::ModMatrix;

/// A `k`-regular multigraph stored as `k` sorted neighbor slots per vertex.
///
/// `A[v][w]` counts the slots of `v` holding `w`, so a loop contributes one
/// per generator symbol fixing `v` (two for `s` and `s⁻¹`), every row of the
/// adjacency matrix sums to `k`, and `A` is symmetric.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CayleyGraph {
    k: usize,
    neighbors: Vec<u32>,
    /// Image index of each vertex's representative, when built from an image.
    representatives: Vec<u32>,
    psl: bool,
}

impl CayleyGraph {
    /// A regular multigraph from explicit neighbor lists (each of length `k`).
    pub fn from_adjacency(lists: Vec<Vec<u32>>) -> Result<Self> {
        let k = lists.first().map_or(0, Vec::len);
        let v = lists.len();
        let mut neighbors = Vec::with_capacity(v * k);
        for mut l in lists {
            if l.len() != k {
                return Err(Error::InvalidInput("graph is not regular".into()));
            }
            if l.iter().any(|&w| w as usize >= v) {
                return Err(Error::InvalidInput("neighbor out of range".into()));
            }
            l.sort_unstable();
            neighbors.extend(l);
        }
        let g = CayleyGraph {
            k,
            neighbors,
            representatives: Vec::new(),
            psl: false,
        };
        if !g.is_symmetric() {
            return Err(Error::InvalidInput("adjacency is not symmetric".into()));
        }
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        if self.k == 0 {
            self.representatives.len()
        } else {
            self.neighbors.len() / self.k
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn is_psl(&self) -> bool {
        self.psl
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.neighbors[v * self.k..(v + 1) * self.k]
    }

    /// Image index of the element (or `±` class representative) at `v`.
    pub fn representative(&self, v: usize) -> Option<usize> {
        self.representatives.get(v).map(|&i| i as usize)
    }

    /// Sum of degrees, counting each neighbor slot once.
    pub fn degree_sum(&self) -> usize {
        self.neighbors.len()
    }

    pub fn is_symmetric(&self) -> bool {
        let mut forward: Vec<(u32, u32)> = Vec::with_capacity(self.neighbors.len());
        for v in 0..self.vertex_count() {
            for &w in self.neighbors(v) {
                forward.push((v as u32, w));
            }
        }
        let mut backward: Vec<(u32, u32)> = forward.iter().map(|&(a, b)| (b, a)).collect();
        forward.sort_unstable();
        backward.sort_unstable();
        forward == backward
    }

    /// True when no neighbor slot repeats and there are no loops.
    pub fn is_simple(&self) -> bool {
        (0..self.vertex_count()).all(|v| {
            let nb = self.neighbors(v);
            nb.iter().all(|&w| w as usize != v) && nb.windows(2).all(|p| p[0] != p[1])
        })
    }

    /// Number of connected components (union-find).
    pub fn component_count(&self) -> usize {
        let v = self.vertex_count();
        let mut parent: Vec<usize> = (0..v).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut count = v;
        for a in 0..v {
            for &b in self.neighbors(a) {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b as usize));
                if ra != rb {
                    parent[ra] = rb;
                    count -= 1;
                }
            }
        }
        count
    }

    /// `y = Δx = x − (1/k)·A·x`.
    pub fn apply_laplacian(&self, x: &[f64], y: &mut [f64]) {
        let inv_k = 1.0 / self.k as f64;
        for (v, out) in y.iter_mut().enumerate() {
            let s: f64 = self.neighbors(v).iter().map(|&w| x[w as usize]).sum();
            *out = x[v] - inv_k * s;
        }
    }

    /// Dense Laplacian, row-major.
    pub fn dense_laplacian(&self) -> Vec<f64> {
        let v = self.vertex_count();
        let mut a = vec![0.0; v * v];
        let inv_k = 1.0 / self.k as f64;
        for i in 0..v {
            a[i * v + i] += 1.0;
            for &w in self.neighbors(i) {
                a[i * v + w as usize] -= inv_k;
            }
        }
        a
    }
}

/// Right-multiplication Cayley graph `g ~ g·s` over the symmetric generators
/// of a complete image. With `psl`, `g` and `−g` are identified first.
pub fn build_cayley(image: &GroupImage, psl: bool) -> Result<CayleyGraph> {
    if !image.is_complete() {
        return Err(Error::IncompleteImage);
    }
    let order = image.order();
    let k = image.letter_matrices().len();
    let mut vertex_of = vec![u32::MAX; order];
    let mut representatives = Vec::new();
    for i in 0..order {
        if vertex_of[i] != u32::MAX {
            continue;
        }
        let v = representatives.len() as u32;
        vertex_of[i] = v;
        representatives.push(i as u32);
        if psl {
            let neg: ModMatrix = image.element(i).neg();
            if let Some(j) = image.index_of(&neg) {
                vertex_of[j] = v;
            }
        }
    }
    let mut neighbors = Vec::with_capacity(representatives.len() * k);
    for &rep in &representatives {
        let start = neighbors.len();
        for letter in 0..k {
            let j = image
                .step(rep as usize, letter)
                .expect("complete image is closed under generators");
            neighbors.push(vertex_of[j]);
        }
        neighbors[start..].sort_unstable();
    }
    Ok(CayleyGraph {
        k,
        neighbors,
        representatives,
        psl,
    })
}
