//! Quantum classification of threshold-network activity.
//!
//! The pipeline takes a weighted directed network, evolves it with a
//! synchronous integrate-and-fire rule, quantizes the per-node running sums
//! into fixed-point codes, and then answers two questions with exact
//! statevector simulation:
//!
//! * which codes are realized in the snapshot (Grover membership sweep,
//!   [`grover`]), and
//! * whether the thresholded firing function is constant over the realized
//!   codes (two runs of Deutsch-Jozsa over a two-part oracle,
//!   [`djclassifier`]), which separates quiescent, epileptic and
//!   activity-sustaining networks.
//!
//! Every quantum path has a classical reference next to it
//! ([`bitsets::realized_sets_classical`], [`djclassifier::classify_classical`]).

pub mod bitsets;
pub mod djclassifier;
pub mod error;
pub mod estimate;
pub mod grover;
pub mod netmodel;
pub mod statevector;

pub use bitsets::{realized_sets_classical, surjection_check, RealizedSets};
pub use djclassifier::{
    build_two_part_oracle, classify_classical, classify_quantum, fire_bit, run_dj, Classification,
    DjMode, DjRunResult, Evidence, TruthTable, TwoPartOracleSpec, Verdict,
};
pub use error::{Error, Result};
pub use grover::{
    build_domain_oracle, build_list_oracle, compute_realized_sets_grover, iteration_count,
    run_membership, success_probability, GroverConfig, GroverMode, GroverSweep, MembershipEntry,
    MembershipReport,
};
pub use netmodel::{Encoding, FiringState, Network, Snapshot};
pub use statevector::{RegisterLayout, StateVector};
