//! Exact linear algebra over `Z` and `Q`.
//!
//! Kernels and ranks use fraction-free elimination: rows are combined with
//! integer multipliers and divided by the gcd of their entries, so no
//! rationals appear until the kernel vectors are read off (and those are
//! scaled back to primitive integer vectors).

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type RatMatrix = Vec<Vec<BigRational>>;

fn normalize(row: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for x in row.iter() {
        if !x.is_zero() {
            g = g.gcd(x);
            if g.is_one() {
                return;
            }
        }
    }
    if g.is_zero() || g.is_one() {
        return;
    }
    for x in row.iter_mut() {
        *x /= &g;
    }
}

/// `target ← p·target − c·row` where `p` is the pivot of `row` at `col` and
/// `c = target[col]`; clears `target[col]`.
fn eliminate(target: &mut [BigInt], row: &[BigInt], col: usize) {
    if target[col].is_zero() {
        return;
    }
    let p = row[col].clone();
    let c = target[col].clone();
    for (t, r) in target.iter_mut().zip(row) {
        *t = &*t * &p - &c * r;
    }
    normalize(target);
}

/// Reduced row echelon form up to row scaling. Returns the pivot columns;
/// `rows` is left with one nonzero row per pivot, in pivot order.
pub fn echelon(rows: &mut Vec<Vec<BigInt>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        normalize(&mut rows[r]);
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r {
                eliminate(row, &pivot_row, col);
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

pub fn rank(rows: &[Vec<BigInt>]) -> usize {
    let mut rows = rows.to_vec();
    echelon(&mut rows).len()
}

/// Primitive integer basis of `{x : rows · x = 0}`.
pub fn kernel(rows: &[Vec<BigInt>], ncols: usize) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> = rows.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    let pivots = echelon(&mut rows);
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        // x_free = L, x_pivot = -L * a[free] / a[pivot], with L the lcm of the pivots.
        let mut l = BigInt::one();
        for (row, &pc) in rows.iter().zip(&pivots) {
            if !row[free].is_zero() {
                l = l.lcm(&row[pc]);
            }
        }
        let mut v = vec![BigInt::zero(); ncols];
        v[free] = l.clone();
        for (row, &pc) in rows.iter().zip(&pivots) {
            if !row[free].is_zero() {
                v[pc] = -(&l * &row[free]) / &row[pc];
            }
        }
        normalize(&mut v);
        if v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
            for x in v.iter_mut() {
                *x = -&*x;
            }
        }
        basis.push(v);
    }
    basis
}

/// Incrementally grown set of linearly independent integer vectors.
#[derive(Clone, Debug, Default)]
pub struct SpanBuilder {
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
}

impl SpanBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Adds `v` if it is independent of the current span; returns whether it was.
    pub fn insert(&mut self, mut v: Vec<BigInt>) -> bool {
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            eliminate(&mut v, row, pc);
        }
        match v.iter().position(|x| !x.is_zero()) {
            Some(pc) => {
                normalize(&mut v);
                self.rows.push(v);
                self.pivots.push(pc);
                true
            }
            None => false,
        }
    }
}

pub fn rat(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

pub fn to_rational(rows: &[Vec<BigInt>]) -> RatMatrix {
    rows.iter()
        .map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect()
}

pub fn rat_identity(n: usize) -> RatMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigRational::one() } else { BigRational::zero() })
                .collect()
        })
        .collect()
}

pub fn rat_mul(a: &RatMatrix, b: &RatMatrix) -> RatMatrix {
    let n = a.len();
    let m = b.first().map_or(0, Vec::len);
    let inner = b.len();
    let mut out = vec![vec![BigRational::zero(); m]; n];
    for i in 0..n {
        for k in 0..inner {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..m {
                out[i][j] += &a[i][k] * &b[k][j];
            }
        }
    }
    out
}

pub fn rat_transpose(a: &RatMatrix) -> RatMatrix {
    let m = a.first().map_or(0, Vec::len);
    (0..m).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

/// Bilinear form `xᵀ Q y`.
pub fn bilinear(q: &RatMatrix, x: &[BigRational], y: &[BigRational]) -> BigRational {
    let mut acc = BigRational::zero();
    for (i, xi) in x.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        for (j, yj) in y.iter().enumerate() {
            if !yj.is_zero() && !q[i][j].is_zero() {
                acc += xi * &q[i][j] * yj;
            }
        }
    }
    acc
}

/// Result of a congruence diagonalization `Pᵀ Q P = diag(d)`.
#[derive(Clone, Debug)]
pub struct Diagonalization {
    /// Columns are the new basis vectors.
    pub basis: RatMatrix,
    pub diagonal: Vec<BigRational>,
}

/// Lagrange reduction of a symmetric rational matrix by congruence.
///
/// Pivots are chosen at the leading nonzero diagonal entry; when the
/// remaining diagonal is zero but an off-diagonal entry `q_ij` is not, the
/// basis vector `e_i` is replaced by `e_i + e_j` first.
pub fn congruence_diagonalize(q: &RatMatrix) -> Diagonalization {
    let n = q.len();
    let mut a = q.clone();
    let mut p = rat_identity(n);

    let swap = |a: &mut RatMatrix, p: &mut RatMatrix, i: usize, j: usize| {
        if i == j {
            return;
        }
        a.swap(i, j);
        for row in a.iter_mut() {
            row.swap(i, j);
        }
        for row in p.iter_mut() {
            row.swap(i, j);
        }
    };

    for k in 0..n {
        if a[k][k].is_zero() {
            if let Some(i) = (k + 1..n).find(|&i| !a[i][i].is_zero()) {
                swap(&mut a, &mut p, k, i);
            } else if let Some((i, j)) = (k..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| !a[i][j].is_zero())
            {
                // column i += column j
                for r in 0..n {
                    let v = a[r][j].clone();
                    a[r][i] += v;
                }
                for c in 0..n {
                    let v = a[j][c].clone();
                    a[i][c] += v;
                }
                for row in p.iter_mut() {
                    let v = row[j].clone();
                    row[i] += v;
                }
                swap(&mut a, &mut p, k, i);
            } else {
                break;
            }
        }
        let pivot = a[k][k].clone();
        for j in k + 1..n {
            if a[k][j].is_zero() {
                continue;
            }
            let f = &a[k][j] / &pivot;
            for r in 0..n {
                let v = &f * &a[r][k];
                a[r][j] -= v;
            }
            for c in 0..n {
                let v = &f * &a[k][c];
                a[j][c] -= v;
            }
            for row in p.iter_mut() {
                let v = &f * &row[k];
                row[j] -= v;
            }
        }
    }
    Diagonalization {
        basis: p,
        diagonal: (0..n).map(|i| a[i][i].clone()).collect(),
    }
}

/// Inertia of a symmetric form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl Signature {
    /// The same signature with positive and negative swapped.
    pub fn flipped(self) -> Signature {
        Signature {
            positive: self.negative,
            negative: self.positive,
            zero: self.zero,
        }
    }
}

pub fn form_signature(q: &RatMatrix) -> Signature {
    let d = congruence_diagonalize(q).diagonal;
    Signature {
        positive: d.iter().filter(|x| x.is_positive()).count(),
        negative: d.iter().filter(|x| x.is_negative()).count(),
        zero: d.iter().filter(|x| x.is_zero()).count(),
    }
}

/// Writes a positive rational as `s² · f` with `f` a squarefree integer;
/// returns `(s, f)`.
pub fn square_decomposition(x: &BigRational) -> (BigRational, BigInt) {
    assert!(x.is_positive());
    // x = a/b = (ab)/b², and ab = k² f
    let ab = x.numer() * x.denom();
    let (k, f) = split_square(&ab);
    (BigRational::new(k, x.denom().clone()), f)
}

/// `x = k² · f` with `f` squarefree, for positive integers of modest size.
fn split_square(x: &BigInt) -> (BigInt, BigInt) {
    let mut rest = x.clone();
    let mut k = BigInt::one();
    let mut f = BigInt::one();
    let mut d = BigInt::from(2);
    while &d * &d <= rest {
        let mut e = 0u32;
        while (&rest % &d).is_zero() {
            rest /= &d;
            e += 1;
        }
        for _ in 0..e / 2 {
            k *= &d;
        }
        if e % 2 == 1 {
            f *= &d;
        }
        d += 1;
    }
    f *= rest;
    (k, f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    fn diag(entries: &[i64]) -> RatMatrix {
        let n = entries.len();
        (0..n)
            .map(|i| (0..n).map(|j| if i == j { rat(entries[i]) } else { rat(0) }).collect())
            .collect()
    }

    #[test]
    fn rank_and_kernel() {
        let m = ints(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank(&m), 2);
        let k = kernel(&m, 3);
        assert_eq!(k.len(), 1);
        let v = &k[0];
        for row in &m {
            let dot: BigInt = row.iter().zip(v).map(|(a, b)| a * b).sum();
            assert!(dot.is_zero());
        }
        assert_eq!(v, &ints(&[&[1, 1, -1]])[0]);
    }

    #[test]
    fn kernel_of_zero_map_is_everything() {
        let k = kernel(&ints(&[&[0, 0]]), 2);
        assert_eq!(k, ints(&[&[1, 0], &[0, 1]]));
    }

    #[test]
    fn span_builder_detects_dependence() {
        let mut s = SpanBuilder::new();
        assert!(s.insert(ints(&[&[1, 1, 0]])[0].clone()));
        assert!(s.insert(ints(&[&[0, 1, 1]])[0].clone()));
        assert!(!s.insert(ints(&[&[2, 3, 1]])[0].clone()));
        assert!(s.insert(ints(&[&[0, 0, 5]])[0].clone()));
        assert_eq!(s.dim(), 3);
    }

    #[test]
    fn signatures() {
        let sig = |d: &[i64]| form_signature(&diag(d));
        assert_eq!(
            sig(&[1, 1, 1, 1]),
            Signature { positive: 4, negative: 0, zero: 0 }
        );
        assert_eq!(
            sig(&[1, 1, 1, -1]),
            Signature { positive: 3, negative: 1, zero: 0 }
        );
        // hyperbolic plane: needs the off-diagonal pivot step
        let h = to_rational(&ints(&[&[0, 1], &[1, 0]]));
        assert_eq!(
            form_signature(&h),
            Signature { positive: 1, negative: 1, zero: 0 }
        );
    }

    #[test]
    fn diagonalization_is_a_congruence() {
        let q = to_rational(&ints(&[
            &[0, -12, 0, 0],
            &[-12, 0, 0, 0],
            &[0, 0, 6, 0],
            &[0, 0, 0, 1],
        ]));
        let d = congruence_diagonalize(&q);
        let pt = rat_transpose(&d.basis);
        let out = rat_mul(&rat_mul(&pt, &q), &d.basis);
        for i in 0..4 {
            for j in 0..4 {
                if i == j {
                    assert_eq!(out[i][i], d.diagonal[i]);
                } else {
                    assert!(out[i][j].is_zero());
                }
            }
        }
    }

    #[test]
    fn square_parts() {
        let (s, f) = square_decomposition(&BigRational::new(BigInt::from(24), BigInt::from(1)));
        assert_eq!(f, BigInt::from(6));
        assert_eq!(s, rat(2));
        let (s, f) = square_decomposition(&BigRational::new(BigInt::from(1), BigInt::from(3)));
        assert_eq!(f, BigInt::from(3));
        assert_eq!(s, BigRational::new(BigInt::from(1), BigInt::from(3)));
    }
}
