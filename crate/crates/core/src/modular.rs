//! Matrices over `Z/mZ`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

/// An `n × n` matrix of least nonnegative residues modulo `modulus`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ModMatrix {
    n: usize,
    modulus: u64,
    entries: Vec<u64>,
}

fn check_modulus(m: u64) -> Result<()> {
    if m < 2 {
        Err(Error::InvalidModulus(m))
    } else {
        Ok(())
    }
}

impl ModMatrix {
    /// Builds a matrix, reducing each (possibly negative) entry.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R], modulus: u64) -> Result<Self> {
        check_modulus(modulus)?;
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            let row = row.as_ref();
            if row.len() != n {
                return Err(Error::InvalidInput("matrix is not square".into()));
            }
            entries.extend(row.iter().map(|&x| reduce_i128(x as i128, modulus)));
        }
        Ok(ModMatrix {
            n,
            modulus,
            entries,
        })
    }

    /// Wraps already-reduced residues.
    pub fn from_residues(n: usize, modulus: u64, entries: Vec<u64>) -> Result<Self> {
        check_modulus(modulus)?;
        if entries.len() != n * n {
            return Err(Error::InvalidInput("wrong number of residues".into()));
        }
        if entries.iter().any(|&x| x >= modulus) {
            return Err(Error::InvalidInput("residue not reduced".into()));
        }
        Ok(ModMatrix {
            n,
            modulus,
            entries,
        })
    }

    pub fn identity(n: usize, modulus: u64) -> Self {
        let mut entries = vec![0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1 % modulus;
        }
        ModMatrix {
            n,
            modulus,
            entries,
        }
    }

    /// `-I` modulo `modulus`.
    pub fn minus_identity(n: usize, modulus: u64) -> Self {
        ModMatrix::identity(n, modulus).neg()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.n + j]
    }

    pub fn is_identity(&self) -> bool {
        *self == ModMatrix::identity(self.n, self.modulus)
    }

    pub fn mul(&self, other: &ModMatrix) -> Result<ModMatrix> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        if self.modulus != other.modulus {
            return Err(Error::InvalidInput("moduli differ".into()));
        }
        let n = self.n;
        let m = self.modulus as u128;
        let mut entries = vec![0u64; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc: u128 = 0;
                for k in 0..n {
                    acc = (acc + self.entries[i * n + k] as u128 * other.entries[k * n + j] as u128)
                        % m;
                }
                entries[i * n + j] = acc as u64;
            }
        }
        Ok(ModMatrix {
            n,
            modulus: self.modulus,
            entries,
        })
    }

    pub fn neg(&self) -> ModMatrix {
        let m = self.modulus;
        ModMatrix {
            n: self.n,
            modulus: m,
            entries: self
                .entries
                .iter()
                .map(|&x| if x == 0 { 0 } else { m - x })
                .collect(),
        }
    }

    /// Lift of each residue to `[0, m)` as an integer matrix.
    pub fn lift(&self) -> IntMatrix {
        IntMatrix::new(
            self.n,
            self.entries.iter().map(|&x| BigInt::from(x)).collect(),
        )
        .expect("dimension already validated")
    }

    /// Determinant reduced mod `m`.
    pub fn det(&self) -> u64 {
        reduce_big(&self.lift().det(), self.modulus)
    }

    /// True when the determinant is `1` or `-1` modulo `m`.
    pub fn det_is_unit_sign(&self) -> bool {
        let d = self.det();
        d == 1 % self.modulus || d == self.modulus - 1
    }
}

fn reduce_i128(x: i128, m: u64) -> u64 {
    x.rem_euclid(m as i128) as u64
}

pub(crate) fn reduce_big(x: &BigInt, m: u64) -> u64 {
    x.mod_floor(&BigInt::from(m))
        .to_u64()
        .expect("residue below modulus")
}

/// Entrywise least nonnegative residues of `m` modulo `modulus`.
pub fn reduce_mod(m: &IntMatrix, modulus: u64) -> Result<ModMatrix> {
    check_modulus(modulus)?;
    Ok(ModMatrix {
        n: m.n(),
        modulus,
        entries: m.entries().iter().map(|x| reduce_big(x, modulus)).collect(),
    })
}

impl fmt::Debug for ModMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} (mod {})", self.modulus)
    }
}

impl fmt::Display for ModMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, row) in self.entries.chunks(self.n).enumerate() {
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

    #[test]
    fn unipotent_collapses_mod_two() {
        let a = IntMatrix::from_rows(&[[1, 4], [0, 1]]).unwrap();
        assert!(reduce_mod(&a, 2).unwrap().is_identity());
    }

    #[test]
    fn lifting_target_has_unit_determinant_mod_five() {
        let t = IntMatrix::from_rows(&[[2, 0], [1, 3]]).unwrap();
        assert_eq!(t.det(), BigInt::from(6));
        assert_eq!(reduce_mod(&t, 5).unwrap().det(), 1);
    }

    #[test]
    fn negative_entries_reduce_upward() {
        let s = IntMatrix::from_rows(&[[0, 1], [-1, 0]]).unwrap();
        let r = reduce_mod(&s, 7).unwrap();
        assert_eq!(r.entries(), &[0, 1, 6, 0]);
        assert_eq!(
            ModMatrix::from_rows(&[[0, 1], [-1, 0]], 7).unwrap(),
            r
        );
    }

    #[test]
    fn reduction_is_idempotent() {
        let x = IntMatrix::from_rows(&[[17, -23], [-5, 9]]).unwrap();
        let once = reduce_mod(&x, 6).unwrap();
        let twice = reduce_mod(&once.lift(), 6).unwrap();
        assert_eq!(once, twice);
    }

    #[test]
    fn modulus_must_be_at_least_two() {
        let x = IntMatrix::identity(2);
        assert_eq!(reduce_mod(&x, 1), Err(Error::InvalidModulus(1)));
        assert_eq!(reduce_mod(&x, 0), Err(Error::InvalidModulus(0)));
    }

    #[test]
    fn minus_identity_mod_two_is_identity() {
        assert!(ModMatrix::minus_identity(2, 2).is_identity());
        assert!(!ModMatrix::minus_identity(2, 4).is_identity());
    }
}
