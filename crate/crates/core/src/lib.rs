//! Construction and analysis of random-sign Dicke states.
//!
//! The crate covers the full pipeline: compact signed Dicke states over the
//! k-excitation subspace ([`dicke`]), exact bipartite entanglement through
//! Hamming-weight-blocked Schmidt decomposition ([`entanglement`]), a dense
//! statevector simulator for the circuit preparation protocol ([`circuit`]),
//! multi-scale dissimilarity of measurement records ([`dissimilarity`]),
//! parent Hamiltonians by CZ conjugation of the LMG model ([`hamiltonian`]),
//! and seeded sweep runners with CSV output ([`experiments`]).
//!
//! All randomness is ChaCha12 seeded through explicit `u64` seeds; repeated
//! runs with the same parameters are bit-identical.

pub mod circuit;
pub mod combin;
pub mod dicke;
pub mod dissimilarity;
pub mod entanglement;
pub mod error;
mod jacobi;
pub mod seeding;
pub mod statevector;

pub use circuit::{
    apply_gate, apply_mcz_oracle, build_dicke_prep, build_random_cz_layer, extract_signed_dicke,
    run_prep_protocol, sample_measurements, CircuitSpec, Gate, MeasureBasis, PairSampling,
};
pub use combin::{binomial, rank_subset, SubsetRank};
pub use dicke::{Bipartition, SignedDickeState};
pub use dissimilarity::{
    coarse_grain, haar_partial_law, partial_dissimilarity, total_dissimilarity,
    z_basis_dissimilarity, z_basis_dissimilarity_exact, BitstringRecord, DissimilarityProfile,
};
pub use entanglement::{
    build_blocked_matrix, dicke_log_fit, enumerate_sign_entropies, entanglement_entropy,
    page_entropy, von_neumann_entropy, BlockedSchmidtMatrix, EntropyResult,
};
pub use error::{Error, Result};
pub use seeding::child_seed;
pub use statevector::{StateVector, DEFAULT_QUBIT_GUARD};
