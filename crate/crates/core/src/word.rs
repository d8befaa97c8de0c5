//! Group words and named generator sets.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

/// One generator or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(gen: usize, inverse: bool) -> Self {
        Letter { gen, inverse }
    }

    pub fn inv(self) -> Letter {
        Letter {
            gen: self.gen,
            inverse: !self.inverse,
        }
    }

    /// Position in the symmetric generating list `g0, g0⁻¹, g1, g1⁻¹, ...`.
    pub fn index(self) -> usize {
        2 * self.gen + self.inverse as usize
    }

    pub fn from_index(i: usize) -> Letter {
        Letter {
            gen: i / 2,
            inverse: i % 2 == 1,
        }
    }
}

/// A freely reduced word. Reduction happens on construction.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn new<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last() == Some(&l.inv()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn letter(gen: usize) -> Self {
        Word(alloc::vec![Letter::new(gen, false)])
    }

    /// `g^exp` for a single generator.
    pub fn power(gen: usize, exp: i64) -> Self {
        let l = Letter::new(gen, exp < 0);
        Word((0..exp.unsigned_abs()).map(|_| l).collect())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word::new(self.0.iter().chain(other.0.iter()).copied())
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    /// Renders the word with the given generator names, collapsing runs into
    /// powers (`T^4 S^-1`). The empty word renders as `1`.
    pub fn display_with<'a>(&'a self, names: &'a [String]) -> WordDisplay<'a> {
        WordDisplay { word: self, names }
    }
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    names: &'a [String],
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letters = self.word.letters();
        if letters.is_empty() {
            return f.write_str("1");
        }
        let mut i = 0;
        let mut first = true;
        while i < letters.len() {
            let l = letters[i];
            let mut run = 1;
            while i + run < letters.len() && letters[i + run] == l {
                run += 1;
            }
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            match self.names.get(l.gen) {
                Some(name) => f.write_str(name)?,
                None => write!(f, "g{}", l.gen)?,
            }
            let exp = if l.inverse { -(run as i64) } else { run as i64 };
            if exp != 1 {
                write!(f, "^{exp}")?;
            }
            i += run;
        }
        Ok(())
    }
}

/// Default generator names `A, B, C, ...`.
pub fn default_names(count: usize) -> Vec<String> {
    (0..count)
        .map(|i| {
            if i < 26 {
                char::from(b'A' + i as u8).to_string()
            } else {
                alloc::format!("g{i}")
            }
        })
        .collect()
}

/// A named list of invertible integer matrices of a common dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSet {
    name: String,
    names: Vec<String>,
    gens: Vec<IntMatrix>,
    inverses: Vec<IntMatrix>,
}

impl GeneratorSet {
    pub fn new(name: impl Into<String>, gens: Vec<IntMatrix>) -> Result<Self> {
        let names = default_names(gens.len());
        GeneratorSet::with_names(name, names, gens)
    }

    pub fn with_names(
        name: impl Into<String>,
        names: Vec<String>,
        gens: Vec<IntMatrix>,
    ) -> Result<Self> {
        let first = gens.first().ok_or(Error::EmptyGeneratorSet)?;
        let n = first.n();
        if let Some(bad) = gens.iter().find(|g| g.n() != n) {
            return Err(Error::DimensionMismatch {
                left: n,
                right: bad.n(),
            });
        }
        if names.len() != gens.len() {
            return Err(Error::InvalidInput("one name per generator required".into()));
        }
        let inverses = gens
            .iter()
            .map(IntMatrix::inverse)
            .collect::<Result<Vec<_>>>()?;
        Ok(GeneratorSet {
            name: name.into(),
            names,
            gens,
            inverses,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn n(&self) -> usize {
        self.gens[0].n()
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn generators(&self) -> &[IntMatrix] {
        &self.gens
    }

    pub fn generator(&self, i: usize) -> &IntMatrix {
        &self.gens[i]
    }

    /// Matrix of a letter (generator or inverse).
    pub fn letter_matrix(&self, l: Letter) -> Result<&IntMatrix> {
        if l.gen >= self.gens.len() {
            return Err(Error::BadGeneratorIndex {
                index: l.gen,
                count: self.gens.len(),
            });
        }
        Ok(if l.inverse {
            &self.inverses[l.gen]
        } else {
            &self.gens[l.gen]
        })
    }

    /// The symmetric generating list `g0, g0⁻¹, g1, g1⁻¹, ...`.
    pub fn symmetric_letters(&self) -> impl Iterator<Item = Letter> {
        (0..2 * self.gens.len()).map(Letter::from_index)
    }

    /// True when every generator has determinant `+1`.
    pub fn is_special(&self) -> bool {
        self.gens.iter().all(|g| num_traits::One::is_one(&g.det()))
    }

    pub fn render(&self, w: &Word) -> String {
        w.display_with(&self.names).to_string()
    }
}

/// Evaluates a word as the ordered product of generator matrices.
pub fn eval_word(gens: &GeneratorSet, w: &Word) -> Result<IntMatrix> {
    let mut acc = IntMatrix::identity(gens.n());
    for &l in w.letters() {
        acc = acc.mul(gens.letter_matrix(l)?)?;
    }
    Ok(acc)
}
