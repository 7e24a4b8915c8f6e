//! Shift spaces presented by labeled graphs, sliding block codes between
//! them, and decision procedures for the structural properties of such
//! codes: eresolving, retracts, continuing behavior, and the finite-type
//! question for images.
//!
//! Everything is immutable after construction and safe to share across
//! threads; the deciders are pure functions of their inputs.
//!
//! ```
//! use sofic_core::{corpus, check_retract, minimal_retract, verify_kbound};
//!
//! // collapse two symbols onto one: right continuing, yet no retract
//! let code = corpus::no_retract_code();
//! assert!(!check_retract(&code, 3).unwrap().holds);
//! assert_eq!(minimal_retract(&code).unwrap(), None);
//!
//! // a code with a retract has an image of finite type within the bound
//! let report = verify_kbound(&corpus::min_code()).unwrap();
//! assert!(report.bound_respected());
//! ```

pub mod alphabet;
pub mod bitset;
pub mod code;
pub mod constructions;
pub mod corpus;
pub mod determinize;
pub mod doc;
pub mod error;
pub mod experiment;
pub mod gen;
pub mod lasso;
pub mod presentation;
pub mod resolving;
pub mod rng;
pub mod sft;

pub use alphabet::Alphabet;
pub use code::{higher_block, is_injective, language_equal, HigherBlock, SlidingBlockCode};
pub use constructions::{
    bicontinuing_recode, no_retract_example, no_retract_witness, repair_lift, retract_zero_recode,
    spacer_interleave, InterleavedCode, RecodedCode,
};
pub use determinize::{canonical_form, determinize, language_contained, ContainmentVerdict};
pub use doc::{CodeDocument, DomainRef, ShiftDocument};
pub use error::{Error, Result};
pub use experiment::{run_kbound_experiment, KBoundExperiment};
pub use lasso::{lasso_membership, some_member, LassoPoint};
pub use presentation::{Edge, Presentation};
pub use resolving::{
    check_retract, is_left_eresolving, is_right_continuing_sft, is_right_eresolving,
    minimal_retract, oracle_retract, refute_right_continuing_bounded, verify_kbound, CodedPair,
    EresolvingVerdict, KBoundReport, Limits, OracleOutcome, RetractAnalyzer, RetractVerdict,
};
pub use sft::{from_forbidden, is_sft, step_of, SftSpec};
