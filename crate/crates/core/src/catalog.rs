//! Built-in generator sets with their literature-asserted properties.
//!
//! Matrices are transcribed entry for entry; `tests/catalog.rs` pins them
//! with a checksum. The asserted facts are what `ProvenThinByCatalog` and
//! the catalog-backed `ProvenNotThin` verdicts appeal to.

use alloc::string::String;
use alloc::vec::Vec;

use crate::closure::ClosureClass;
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::word::GeneratorSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThinnessClaim {
    /// Finite index in the integer points of the closure.
    NotThin,
    Thin,
    /// Open: the literature does not know.
    Unknown,
}

#[derive(Clone, Copy, Debug)]
pub struct CatalogEntry {
    pub id: &'static str,
    pub summary: &'static str,
    pub generators: &'static [&'static [&'static [i64]]],
    pub closure: Option<ClosureClass>,
    pub thinness: ThinnessClaim,
    /// Index in `SL_2(Z)`, where the literature states it.
    pub sl2_index: Option<u64>,
    pub citation: &'static str,
}

impl CatalogEntry {
    pub fn n(&self) -> usize {
        self.generators[0].len()
    }

    pub fn generator_set(&self) -> GeneratorSet {
        let gens = self
            .generators
            .iter()
            .map(|rows| IntMatrix::from_rows(rows).expect("catalog matrices are square"))
            .collect();
        GeneratorSet::new(self.id, gens).expect("catalog generators are unimodular")
    }
}

pub const ENTRIES: &[CatalogEntry] = &[
    CatalogEntry {
        id: "ex1",
        summary: "T and S: all of SL2(Z)",
        generators: &[&[&[1, 1], &[0, 1]], &[&[0, 1], &[-1, 0]]],
        closure: Some(ClosureClass::Full),
        thinness: ThinnessClaim::NotThin,
        sl2_index: Some(1),
        citation: "classical: S and T generate SL2(Z)",
    },
    CatalogEntry {
        id: "ex2",
        summary: "level-4 congruence group of index 12",
        generators: &[&[&[1, 2], &[0, 1]], &[&[1, 0], &[2, 1]]],
        closure: Some(ClosureClass::Full),
        thinness: ThinnessClaim::NotThin,
        sl2_index: Some(12),
        citation: "classical: diagonal entries 1 mod 4, even off-diagonal; index 12 in SL2(Z), 6 in PSL2(Z)",
    },
    CatalogEntry {
        id: "ex3",
        summary: "unipotent: upper triangular with even corner",
        generators: &[&[&[1, 4], &[0, 1]], &[&[1, 6], &[0, 1]]],
        closure: Some(ClosureClass::Unipotent),
        thinness: ThinnessClaim::NotThin,
        sl2_index: None,
        citation: "closure is the unipotent group U; index 2 in U(Z)",
    },
    CatalogEntry {
        id: "ex4",
        summary: "cyclic hyperbolic group: a torus over Q(sqrt 5)",
        generators: &[&[&[2, 1], &[1, 1]], &[&[5, 3], &[3, 2]]],
        closure: Some(ClosureClass::Torus),
        thinness: ThinnessClaim::NotThin,
        sl2_index: None,
        citation: "closure is a torus D1 split over Q(sqrt 5); the group equals D1(Z)",
    },
    CatalogEntry {
        id: "ex5",
        summary: "T^4 and S: Zariski dense, infinite index",
        generators: &[&[&[1, 4], &[0, 1]], &[&[0, 1], &[-1, 0]]],
        closure: Some(ClosureClass::Full),
        thinness: ThinnessClaim::Thin,
        sl2_index: None,
        citation: "infinite index in SL2(Z) and not virtually abelian, hence thin",
    },
    CatalogEntry {
        id: "ex7",
        summary: "SL2(Z) in the upper-left block of SL3",
        generators: &[
            &[&[1, 1, 0], &[0, 1, 0], &[0, 0, 1]],
            &[&[0, 1, 0], &[-1, 0, 0], &[0, 0, 1]],
        ],
        closure: Some(ClosureClass::ReducibleBlock),
        thinness: ThinnessClaim::NotThin,
        sl2_index: None,
        citation: "closure is a block copy of SL2; the group is its full integer points",
    },
    CatalogEntry {
        id: "ex8",
        summary: "(3,3,4) triangle group in SL3(Z)",
        generators: &[
            &[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]],
            &[&[1, 2, 4], &[0, -1, -1], &[0, 1, 0]],
        ],
        closure: Some(ClosureClass::Full),
        thinness: ThinnessClaim::Thin,
        sl2_index: None,
        citation: "faithful (3,3,4) triangle group image, necessarily of infinite index in SL3(Z)",
    },
    CatalogEntry {
        id: "ex9",
        summary: "Dwork hypergeometric monodromy in Sp(4)",
        generators: &[
            &[&[0, 0, 0, -1], &[1, 0, 0, -1], &[0, 1, 0, -1], &[0, 0, 1, -1]],
            &[&[1, 0, 0, 5], &[0, 1, 0, -5], &[0, 0, 1, 5], &[0, 0, 0, 1]],
        ],
        closure: Some(ClosureClass::Symplectic),
        thinness: ThinnessClaim::Thin,
        sl2_index: None,
        citation: "hypergeometric monodromy in Sp(4): this group is thin",
    },
    CatalogEntry {
        id: "ex10",
        summary: "reflection group of a signature-(3,1) form: crystallographic packing",
        generators: &[
            &[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, -1, 0], &[0, 0, 0, 1]],
            &[&[1, 0, 0, 0], &[1, 1, 1, 0], &[-2, 0, -1, 0], &[0, 0, 0, 1]],
            &[&[0, 1, 0, 0], &[1, 0, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]],
            &[&[3, 2, 0, 1], &[2, 3, 0, 1], &[0, 0, 1, 0], &[-12, -12, 0, -5]],
        ],
        closure: Some(ClosureClass::OrthogonalLike),
        thinness: ThinnessClaim::Thin,
        sl2_index: None,
        citation: "the limit set is a crystallographic circle packing, so the group is thin",
    },
    CatalogEntry {
        id: "ex11",
        summary: "Zariski dense in SL3, thinness open",
        generators: &[
            &[&[1, 1, 2], &[0, 1, 1], &[0, -3, -2]],
            &[&[-2, 0, -1], &[-5, 1, -1], &[3, 0, 1]],
        ],
        closure: Some(ClosureClass::Full),
        thinness: ThinnessClaim::Unknown,
        sl2_index: None,
        citation: "Zariski dense in SL3; thinness is an open problem",
    },
    CatalogEntry {
        id: "gl2-demo",
        summary: "T, S and a reflection: all of GL2(Z)",
        generators: &[
            &[&[1, 1], &[0, 1]],
            &[&[0, 1], &[-1, 0]],
            &[&[-1, 0], &[0, 1]],
        ],
        closure: None,
        thinness: ThinnessClaim::NotThin,
        sl2_index: None,
        citation: "classical: GL2(Z) has determinants +-1 only",
    },
];

pub fn entry(id: &str) -> Option<&'static CatalogEntry> {
    ENTRIES.iter().find(|e| e.id == id)
}

pub fn generators(id: &str) -> Result<GeneratorSet> {
    entry(id)
        .map(CatalogEntry::generator_set)
        .ok_or_else(|| Error::InvalidInput(alloc::format!("unknown catalog entry {id}")))
}

/// The catalog entry with exactly these generator matrices, in order.
pub fn matching(gens: &GeneratorSet) -> Option<&'static CatalogEntry> {
    ENTRIES.iter().find(|e| {
        let g = e.generator_set();
        g.generators() == gens.generators()
    })
}

pub fn ids() -> Vec<String> {
    ENTRIES.iter().map(|e| String::from(e.id)).collect()
}
