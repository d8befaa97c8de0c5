//! Words in `S = [[0,1],[-1,0]]` and `T = [[1,1],[0,1]]`.

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StGen {
    S,
    T,
}

/// A product of syllables `S^e` and `T^e`. `S` exponents are kept in
/// `1..=3` (`S⁴ = I`); no syllable has exponent zero and neighbors differ.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct STWord {
    syllables: Vec<(StGen, BigInt)>,
}

/// Letters of `PSL₂(Z) = ⟨s, t | s², t³⟩` with `s = S`, `t = ST`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PslLetter {
    S,
    T,
    TInv,
}

impl PslLetter {
    pub fn column(self) -> usize {
        match self {
            PslLetter::S => 0,
            PslLetter::T => 1,
            PslLetter::TInv => 2,
        }
    }

    pub fn inv(self) -> PslLetter {
        match self {
            PslLetter::S => PslLetter::S,
            PslLetter::T => PslLetter::TInv,
            PslLetter::TInv => PslLetter::T,
        }
    }
}

pub fn s_matrix() -> IntMatrix {
    IntMatrix::from_rows(&[[0, 1], [-1, 0]]).expect("2x2")
}

pub fn t_matrix() -> IntMatrix {
    IntMatrix::from_rows(&[[1, 1], [0, 1]]).expect("2x2")
}

impl STWord {
    pub fn identity() -> Self {
        STWord::default()
    }

    pub fn syllables(&self) -> &[(StGen, BigInt)] {
        &self.syllables
    }

    pub fn push(&mut self, g: StGen, e: BigInt) {
        let e = match g {
            StGen::S => e.mod_floor(&BigInt::from(4)),
            StGen::T => e,
        };
        if e.is_zero() {
            return;
        }
        match self.syllables.last_mut() {
            Some((last, x)) if *last == g => {
                *x += e;
                if g == StGen::S {
                    *x = x.mod_floor(&BigInt::from(4));
                }
                if x.is_zero() {
                    self.syllables.pop();
                }
            }
            _ => self.syllables.push((g, e)),
        }
    }

    /// Number of letters, counting `S³` as the single letter `S⁻¹`.
    pub fn len(&self) -> BigInt {
        self.syllables
            .iter()
            .map(|(g, e)| match g {
                StGen::S if *e == BigInt::from(3) => BigInt::one(),
                _ => e.abs(),
            })
            .sum()
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn eval(&self) -> IntMatrix {
        let mut acc = IntMatrix::identity(2);
        for (g, e) in &self.syllables {
            let m = match g {
                StGen::S => s_matrix().pow(e.to_i64().expect("S exponent in 1..=3")),
                StGen::T => t_matrix().pow_big(e),
            }
            .expect("unimodular");
            acc = acc.mul(&m).expect("2x2");
        }
        acc
    }

    /// The same element of `PSL₂(Z)` as a word in `s, t`, via `S ↦ s`,
    /// `T ↦ s t`. Exponents must fit in memory as explicit letters.
    pub fn to_psl(&self) -> Result<Vec<PslLetter>> {
        let mut out = Vec::new();
        for (g, e) in &self.syllables {
            let k = e
                .abs()
                .to_usize()
                .filter(|&k| k <= 1 << 24)
                .ok_or_else(|| Error::InvalidInput("T exponent too large to spell out".into()))?;
            match g {
                StGen::S => {
                    if k % 2 == 1 {
                        out.push(PslLetter::S);
                    }
                }
                StGen::T if e.is_positive() => {
                    for _ in 0..k {
                        out.push(PslLetter::S);
                        out.push(PslLetter::T);
                    }
                }
                StGen::T => {
                    for _ in 0..k {
                        out.push(PslLetter::TInv);
                        out.push(PslLetter::S);
                    }
                }
            }
        }
        Ok(reduce_psl(out))
    }
}

/// Cancels `s s`, `t t⁻¹`, `t⁻¹ t`.
pub fn reduce_psl(word: Vec<PslLetter>) -> Vec<PslLetter> {
    let mut out: Vec<PslLetter> = Vec::with_capacity(word.len());
    for l in word {
        if out.last() == Some(&l.inv()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

impl fmt::Display for STWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syllables.is_empty() {
            return f.write_str("1");
        }
        for (i, (g, e)) in self.syllables.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(match g {
                StGen::S => "S",
                StGen::T => "T",
            })?;
            if !e.is_one() {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// Writes an `SL₂(Z)` matrix as a word in `S` and `T` by the Euclidean
/// algorithm on its first column; the result evaluates to `m` exactly.
pub fn rewrite_in_st(m: &IntMatrix) -> Result<STWord> {
    if m.n() != 2 {
        return Err(Error::UnsupportedDimension(m.n()));
    }
    if !m.det().is_one() {
        return Err(Error::InvalidInput("matrix is not in SL2(Z)".into()));
    }
    let mut a = m.get(0, 0).clone();
    let mut b = m.get(0, 1).clone();
    let mut c = m.get(1, 0).clone();
    let mut d = m.get(1, 1).clone();
    let mut word = STWord::identity();
    // invariant: m = word · [[a, b], [c, d]]
    while !c.is_zero() {
        let q = round_div(&a, &c);
        // [[a,b],[c,d]] = T^q S · [[-c, -d], [a - qc, b - qd]]
        word.push(StGen::T, q.clone());
        word.push(StGen::S, BigInt::one());
        let (na, nb) = (-&c, -&d);
        let (nc, nd) = (&a - &q * &c, &b - &q * &d);
        a = na;
        b = nb;
        c = nc;
        d = nd;
    }
    if a.is_one() {
        word.push(StGen::T, b);
    } else {
        // [[-1, b], [0, -1]] = S² T^{-b}
        word.push(StGen::S, BigInt::from(2));
        word.push(StGen::T, -b);
    }
    debug_assert_eq!(&word.eval(), m);
    Ok(word)
}

/// `⌊a/c + 1/2⌋`, so that `|a − qc| ≤ |c|/2`.
fn round_div(a: &BigInt, c: &BigInt) -> BigInt {
    let num: BigInt = a * 2 + c;
    num.div_floor(&(c * 2))
}
