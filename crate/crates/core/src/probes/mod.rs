//! Finite-index probes for subgroups of `SL₂(Z)` and the verdict pipeline.

pub mod coset;
pub mod st;
pub mod verdict;

pub use coset::{coset_enumerate, CosetOutcome, CosetTable, DEFAULT_COSET_CAP};
pub use st::{rewrite_in_st, s_matrix, t_matrix, PslLetter, STWord, StGen};
pub use verdict::{
    find_minus_identity, minus_identity_obstruction, thinness_verdict, Classification, CosetEvidence,
    MinusIdentity, NotThinReason, Obstruction, ProbeConfig, Verdict,
};
