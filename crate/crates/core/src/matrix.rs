//! Square matrices over the integers with arbitrary-precision entries.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub const MIN_DIM: usize = 2;
pub const MAX_DIM: usize = 8;

/// An `n × n` integer matrix stored row-major. Entries never overflow.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    n: usize,
    entries: Vec<BigInt>,
}

fn check_dim(n: usize) -> Result<()> {
    if (MIN_DIM..=MAX_DIM).contains(&n) {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension(n))
    }
}

impl IntMatrix {
    pub fn new(n: usize, entries: Vec<BigInt>) -> Result<Self> {
        check_dim(n)?;
        if entries.len() != n * n {
            return Err(Error::InvalidInput(alloc::format!(
                "expected {} entries for a {n}x{n} matrix, got {}",
                n * n,
                entries.len()
            )));
        }
        Ok(IntMatrix { n, entries })
    }

    /// Builds a matrix from rows of machine integers.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            let row = row.as_ref();
            if row.len() != n {
                return Err(Error::InvalidInput(alloc::format!(
                    "row of length {} in a matrix with {n} rows",
                    row.len()
                )));
            }
            entries.extend(row.iter().map(|&x| BigInt::from(x)));
        }
        IntMatrix::new(n, entries)
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![BigInt::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = BigInt::one();
        }
        IntMatrix { n, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[BigInt]> {
        self.entries.chunks(self.n)
    }

    pub fn is_identity(&self) -> bool {
        *self == IntMatrix::identity(self.n)
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        let n = self.n;
        let mut entries = vec![BigInt::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = &self.entries[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &other.entries[k * n + j];
                    if !b.is_zero() {
                        entries[i * n + j] += a * b;
                    }
                }
            }
        }
        Ok(IntMatrix { n, entries })
    }

    pub fn transpose(&self) -> IntMatrix {
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for j in 0..n {
            for i in 0..n {
                entries.push(self.entries[i * n + j].clone());
            }
        }
        IntMatrix { n, entries }
    }

    pub fn neg(&self) -> IntMatrix {
        IntMatrix {
            n: self.n,
            entries: self.entries.iter().map(|x| -x).collect(),
        }
    }

    pub fn trace(&self) -> BigInt {
        (0..self.n).map(|i| self.get(i, i).clone()).sum()
    }

    /// Determinant by Bareiss fraction-free elimination.
    pub fn det(&self) -> BigInt {
        let n = self.n;
        let mut a: Vec<Vec<BigInt>> = self.rows().map(|r| r.to_vec()).collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
                a[i][k] = BigInt::zero();
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    /// Exact inverse of a unimodular matrix.
    pub fn inverse(&self) -> Result<IntMatrix> {
        let det = self.det();
        if !(det.is_one() || (-&det).is_one()) {
            return Err(Error::NotUnimodular);
        }
        let n = self.n;
        let mut a: Vec<Vec<BigRational>> = self
            .rows()
            .map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect())
            .collect();
        let mut inv: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            BigRational::one()
                        } else {
                            BigRational::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !a[r][col].is_zero())
                .ok_or(Error::NotUnimodular)?;
            a.swap(col, pivot);
            inv.swap(col, pivot);
            let p = a[col][col].clone();
            for j in 0..n {
                a[col][j] = &a[col][j] / &p;
                inv[col][j] = &inv[col][j] / &p;
            }
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let factor = a[r][col].clone();
                for j in 0..n {
                    let da = &factor * &a[col][j];
                    let di = &factor * &inv[col][j];
                    a[r][j] -= da;
                    inv[r][j] -= di;
                }
            }
        }
        let mut entries = Vec::with_capacity(n * n);
        for row in inv {
            for x in row {
                if !x.is_integer() {
                    return Err(Error::NotUnimodular);
                }
                entries.push(x.to_integer());
            }
        }
        Ok(IntMatrix { n, entries })
    }

    /// Integer power; negative exponents use the inverse.
    pub fn pow(&self, exp: i64) -> Result<IntMatrix> {
        let mut base = if exp < 0 {
            self.inverse()?
        } else {
            self.clone()
        };
        let mut e = exp.unsigned_abs();
        let mut acc = IntMatrix::identity(self.n);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Power with an arbitrary-precision exponent.
    pub fn pow_big(&self, exp: &BigInt) -> Result<IntMatrix> {
        let mut base = if exp.is_negative() {
            self.inverse()?
        } else {
            self.clone()
        };
        let mut e = exp.abs();
        let two = BigInt::from(2);
        let mut acc = IntMatrix::identity(self.n);
        while !e.is_zero() {
            if e.is_odd() {
                acc = acc.mul(&base)?;
            }
            e /= &two;
            if !e.is_zero() {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    pub fn commutes_with(&self, other: &IntMatrix) -> bool {
        match (self.mul(other), other.mul(self)) {
            (Ok(a), Ok(b)) => a == b,
            _ => false,
        }
    }

    /// Characteristic polynomial `det(xI - M)` as coefficients from the
    /// constant term up; the leading coefficient is 1.
    ///
    /// Faddeev–LeVerrier; every division is exact over the integers.
    pub fn char_poly(&self) -> Vec<BigInt> {
        let n = self.n;
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[n] = BigInt::one();
        let mut m = IntMatrix {
            n,
            entries: vec![BigInt::zero(); n * n],
        };
        for k in 1..=n {
            // M_k = A M_{k-1} + c_{n-k+1} I
            let mut next = self.mul(&m).expect("same dimension");
            for i in 0..n {
                next.entries[i * n + i] += &coeffs[n - k + 1];
            }
            let am = self.mul(&next).expect("same dimension");
            coeffs[n - k] = -am.trace() / BigInt::from(k);
            m = next;
        }
        coeffs
    }

    /// Flattened entries as a vector, for span computations.
    pub fn to_vec(&self) -> Vec<BigInt> {
        self.entries.clone()
    }
}

/// `mat_mul` as a free function.
pub fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> Result<IntMatrix> {
    a.mul(b)
}

pub fn det(m: &IntMatrix) -> BigInt {
    m.det()
}

pub fn mat_inv(m: &IntMatrix) -> Result<IntMatrix> {
    m.inverse()
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, row) in self.rows().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for (j, x) in row.iter().enumerate() {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    // Cofactor expansion, kept independent of the Bareiss path.
    fn cofactor_det(a: &[Vec<BigInt>]) -> BigInt {
        let n = a.len();
        if n == 1 {
            return a[0][0].clone();
        }
        let mut total = BigInt::zero();
        for j in 0..n {
            let minor: Vec<Vec<BigInt>> = a[1..]
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|&(c, _)| c != j)
                        .map(|(_, x)| x.clone())
                        .collect()
                })
                .collect();
            let term = &a[0][j] * cofactor_det(&minor);
            if j % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
        total
    }

    #[test]
    fn identity_is_neutral() {
        let x = m(&[&[3, -7], &[2, 11]]);
        assert_eq!(IntMatrix::identity(2).mul(&x).unwrap(), x);
        assert_eq!(x.mul(&IntMatrix::identity(2)).unwrap(), x);
    }

    #[test]
    fn golden_matrix_squared() {
        let a = m(&[&[2, 1], &[1, 1]]);
        assert_eq!(a.mul(&a).unwrap(), m(&[&[5, 3], &[3, 2]]));
    }

    #[test]
    fn reflection_squares_to_identity() {
        let g = m(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, -1, 0], &[0, 0, 0, 1]]);
        assert!(g.mul(&g).unwrap().is_identity());
    }

    #[test]
    fn dimension_mismatch() {
        let a = IntMatrix::identity(2);
        let b = IntMatrix::identity(3);
        assert_eq!(
            a.mul(&b),
            Err(Error::DimensionMismatch { left: 2, right: 3 })
        );
    }

    #[test]
    fn determinants() {
        assert_eq!(IntMatrix::identity(5).det(), BigInt::one());
        assert_eq!(m(&[&[1, 2], &[3, 4]]).det(), BigInt::from(-2));
        let a = m(&[&[0, 0, 0, -1], &[1, 0, 0, -1], &[0, 1, 0, -1], &[0, 0, 1, -1]]);
        let b = m(&[&[1, 0, 0, 5], &[0, 1, 0, -5], &[0, 0, 1, 5], &[0, 0, 0, 1]]);
        for g in [a, b] {
            let rows: Vec<Vec<BigInt>> = g.rows().map(|r| r.to_vec()).collect();
            assert_eq!(cofactor_det(&rows), BigInt::one());
            assert_eq!(g.det(), BigInt::one());
        }
        // zero pivot forces a row swap
        assert_eq!(m(&[&[0, 1], &[1, 0]]).det(), BigInt::from(-1));
        assert_eq!(m(&[&[1, 2], &[2, 4]]).det(), BigInt::zero());
    }

    #[test]
    fn inverses() {
        assert_eq!(
            m(&[&[0, 1], &[-1, 0]]).inverse().unwrap(),
            m(&[&[0, -1], &[1, 0]])
        );
        assert_eq!(
            m(&[&[1, 4], &[0, 1]]).inverse().unwrap(),
            m(&[&[1, -4], &[0, 1]])
        );
        let a = m(&[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]]);
        assert_eq!(a.inverse().unwrap(), a.transpose());
        assert_eq!(
            m(&[&[1, 2], &[3, 4]]).inverse(),
            Err(Error::NotUnimodular)
        );
    }

    #[test]
    fn char_poly_of_golden_matrix() {
        let a = m(&[&[2, 1], &[1, 1]]);
        let cp = a.char_poly();
        assert_eq!(cp, vec![BigInt::from(1), BigInt::from(-3), BigInt::from(1)]);
        let u = m(&[&[1, 1, 0], &[0, 1, 0], &[0, 0, 1]]);
        // (x-1)^3 = x^3 - 3x^2 + 3x - 1
        assert_eq!(
            u.char_poly(),
            vec![
                BigInt::from(-1),
                BigInt::from(3),
                BigInt::from(-3),
                BigInt::from(1)
            ]
        );
    }

    #[test]
    fn powers() {
        let a = m(&[&[2, 1], &[1, 1]]);
        assert_eq!(a.pow(2).unwrap(), m(&[&[5, 3], &[3, 2]]));
        assert!(a.pow(3).unwrap().mul(&a.pow(-3).unwrap()).unwrap().is_identity());
        assert_eq!(a.pow_big(&BigInt::from(-2)).unwrap(), a.pow(-2).unwrap());
    }

    #[test]
    fn rejects_bad_dimensions() {
        assert_eq!(
            IntMatrix::from_rows(&[[1i64]]),
            Err(Error::UnsupportedDimension(1))
        );
        assert!(IntMatrix::from_rows(&[&[1i64, 2][..], &[1][..]]).is_err());
    }
}
