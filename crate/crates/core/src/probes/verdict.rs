//! The `−I` congruence obstruction and the thinness verdict pipeline.

use alloc::string::String;
use alloc::vec::Vec;

use hashbrown::HashSet;

use super::coset::{coset_enumerate, CosetOutcome, CosetTable, DEFAULT_COSET_CAP};
use super::st::rewrite_in_st;
use crate::catalog::{self, ThinnessClaim};
use crate::closure::{certify_closure, ClosureCertificate, ClosureClass};
use crate::error::{Error, Result};
use crate::image::{enumerate_image, DEFAULT_ELEMENT_CAP};
use crate::matrix::IntMatrix;
use crate::modular::ModMatrix;
use crate::word::{GeneratorSet, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Obstruction {
    /// `−I` is missing from the image mod `modulus`, hence from the group.
    Excluded { modulus: u64 },
    Inconclusive,
}

/// Looks for a modulus at which `−I` is not in the (complete) image.
pub fn minus_identity_obstruction(gens: &GeneratorSet, moduli: &[u64], cap: usize) -> Result<Obstruction> {
    if gens.n() != 2 {
        return Err(Error::UnsupportedDimension(gens.n()));
    }
    for &m in moduli {
        let image = enumerate_image(gens, m, cap)?;
        if image.is_complete() && !image.contains(&ModMatrix::minus_identity(2, m)) {
            return Ok(Obstruction::Excluded { modulus: m });
        }
    }
    Ok(Obstruction::Inconclusive)
}

/// A word of length at most `max_len` evaluating to `−I`, by breadth-first
/// search over distinct integer matrices (at most `budget` of them).
pub fn find_minus_identity(gens: &GeneratorSet, max_len: usize, budget: usize) -> Option<Word> {
    let target = IntMatrix::identity(gens.n()).neg();
    let letters: Vec<_> = gens.symmetric_letters().collect();
    let mut seen: HashSet<IntMatrix> = HashSet::new();
    let id = IntMatrix::identity(gens.n());
    seen.insert(id.clone());
    let mut level = alloc::vec![(id, Word::empty())];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for (m, w) in &level {
            for &l in &letters {
                let mm = m.mul(gens.letter_matrix(l).ok()?).ok()?;
                if !seen.insert(mm.clone()) {
                    continue;
                }
                let ww = Word::new(w.letters().iter().copied().chain(core::iter::once(l)));
                if mm == target {
                    return Some(ww);
                }
                if seen.len() > budget {
                    return None;
                }
                next.push((mm, ww));
            }
        }
        level = next;
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MinusIdentity {
    Present { word: Word },
    Excluded { modulus: u64 },
    Undecided,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NotThinReason {
    /// Finite index in `SL₂(Z)` from a closed coset table.
    Index {
        psl_index: usize,
        /// `None` when `−I` could be neither found nor excluded; the index is
        /// then `psl_index` or twice it.
        sl2_index: Option<usize>,
        minus_identity: MinusIdentity,
    },
    /// The closure is a proper subgroup and the catalog records that the
    /// group has finite index in its integer points.
    ProperClosure { class: ClosureClass, citation: &'static str },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Classification {
    ProvenNotThin(NotThinReason),
    ProvenThinByCatalog { entry: &'static str, citation: &'static str },
    ThinEvidence,
    Unknown,
}

impl Classification {
    pub fn name(&self) -> &'static str {
        match self {
            Classification::ProvenNotThin(_) => "ProvenNotThin",
            Classification::ProvenThinByCatalog { .. } => "ProvenThinByCatalog",
            Classification::ThinEvidence => "ThinEvidence",
            Classification::Unknown => "Unknown",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CosetEvidence {
    Closed(CosetTable),
    Exceeded { cap: usize, live: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub classification: Classification,
    pub closure: ClosureCertificate,
    pub coset: Option<CosetEvidence>,
    pub catalog_entry: Option<&'static str>,
    /// Human-readable trail of the branches taken.
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbeConfig {
    pub element_cap: usize,
    pub coset_cap: usize,
    pub obstruction_moduli: Vec<u64>,
    pub minus_identity_word_length: usize,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig {
            element_cap: DEFAULT_ELEMENT_CAP,
            coset_cap: DEFAULT_COSET_CAP,
            obstruction_moduli: alloc::vec![3, 4, 5, 8],
            minus_identity_word_length: 8,
        }
    }
}

/// Runs closure evidence, then coset enumeration where it applies, and
/// classifies. Anything not backed by a proof or a catalog citation is
/// `ThinEvidence` or `Unknown`.
pub fn thinness_verdict(gens: &GeneratorSet, config: &ProbeConfig) -> Result<Verdict> {
    let closure = certify_closure(gens, config.element_cap)?;
    let entry = catalog::matching(gens);
    let mut notes = Vec::new();
    notes.push(alloc::format!("closure class {}", closure.class.as_str()));
    let catalog_agrees = entry.is_some_and(|e| e.closure == Some(closure.class));
    if let Some(e) = entry {
        notes.push(alloc::format!("matches catalog entry {}", e.id));
    }
    let mut verdict = Verdict {
        classification: Classification::Unknown,
        closure,
        coset: None,
        catalog_entry: entry.map(|e| e.id),
        notes,
    };
    let class = verdict.closure.class;

    match class {
        ClosureClass::Full if gens.n() == 2 => {
            let words = gens
                .generators()
                .iter()
                .map(|g| rewrite_in_st(g)?.to_psl())
                .collect::<Result<Vec<_>>>()?;
            match coset_enumerate(&words, config.coset_cap) {
                CosetOutcome::Closed(table) => {
                    table
                        .verify()
                        .map_err(|why| Error::InvalidInput(alloc::format!("coset table failed verification: {why}")))?;
                    let psl_index = table.index();
                    verdict.notes.push(alloc::format!("coset enumeration closed at PSL2 index {psl_index}"));
                    let minus_identity =
                        match minus_identity_obstruction(gens, &config.obstruction_moduli, config.element_cap)? {
                            Obstruction::Excluded { modulus } => MinusIdentity::Excluded { modulus },
                            Obstruction::Inconclusive => {
                                match find_minus_identity(gens, config.minus_identity_word_length, 1 << 18) {
                                    Some(word) => MinusIdentity::Present { word },
                                    None => MinusIdentity::Undecided,
                                }
                            }
                        };
                    let sl2_index = match &minus_identity {
                        MinusIdentity::Present { .. } => Some(psl_index),
                        MinusIdentity::Excluded { .. } => Some(2 * psl_index),
                        MinusIdentity::Undecided => None,
                    };
                    verdict.coset = Some(CosetEvidence::Closed(table));
                    verdict.classification = Classification::ProvenNotThin(NotThinReason::Index {
                        psl_index,
                        sl2_index,
                        minus_identity,
                    });
                }
                CosetOutcome::Exceeded { live, .. } => {
                    verdict
                        .notes
                        .push(alloc::format!("coset enumeration exceeded {} cosets", config.coset_cap));
                    verdict.coset = Some(CosetEvidence::Exceeded {
                        cap: config.coset_cap,
                        live,
                    });
                    verdict.classification = match entry {
                        Some(e) if catalog_agrees && e.thinness == ThinnessClaim::Thin => {
                            Classification::ProvenThinByCatalog {
                                entry: e.id,
                                citation: e.citation,
                            }
                        }
                        _ => Classification::ThinEvidence,
                    };
                }
            }
        }
        ClosureClass::Undetermined => {}
        _ => {
            if let Some(e) = entry.filter(|_| catalog_agrees) {
                verdict.classification = match (class, e.thinness) {
                    (ClosureClass::Full, ThinnessClaim::Thin) => Classification::ProvenThinByCatalog {
                        entry: e.id,
                        citation: e.citation,
                    },
                    (ClosureClass::Full, _) => Classification::Unknown,
                    (_, ThinnessClaim::NotThin) => Classification::ProvenNotThin(NotThinReason::ProperClosure {
                        class,
                        citation: e.citation,
                    }),
                    (_, ThinnessClaim::Thin) => Classification::ProvenThinByCatalog {
                        entry: e.id,
                        citation: e.citation,
                    },
                    (_, ThinnessClaim::Unknown) => Classification::Unknown,
                };
            }
        }
    }
    verdict
        .notes
        .push(alloc::format!("verdict {}", verdict.classification.name()));
    Ok(verdict)
}
