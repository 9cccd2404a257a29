//! Toolkit for omega-automata and omega-rational relations.
//!
//! This crate provides the objects needed to work with languages of infinite
//! words and with letter-to-word transductions over them:
//!
//! * [`Alphabet`], [`Word`] and [`LassoWord`], finite and ultimately periodic
//!   words with a canonical lasso representation,
//! * [`BuchiAutomaton`], nondeterministic Büchi automata with membership,
//!   emptiness (witness producing), intersection, trimming and prefix
//!   enumeration,
//! * [`BuchiTransducer`], asynchronous Büchi transducers with domain/image
//!   projections, input-prefix restriction, evaluation on lasso words and
//!   bounded functionality/intersection searches,
//! * [`PcpRegInstance`], infinite Post correspondence instances constrained by
//!   a regular index language, with a bounded overhang-graph solver,
//! * [`TuringMachine`], nondeterministic single-tape machines with a bounded
//!   search for runs that revisit the initial state forever, plus the
//!   reductions from machines to correspondence instances and from instances
//!   to transducers and functions (module [`reductions`]),
//! * continuity probing for functions realized by transducers
//!   (module [`continuity`]),
//! * a schema-versioned manifest format for every object above
//!   (module [`manifest`]) and a small HOA import/export shim for plain
//!   Büchi automata (module [`hoa`]).
//!
//! All values are immutable after construction and safe to share across
//! threads. Every search and every constructed automaton uses stored
//! iteration order only, so equal inputs produce byte-equal outputs.

pub mod alphabet;
pub mod continuity;
mod error;
mod graph;
pub mod hoa;
pub mod lasso;
pub mod manifest;
pub mod nba;
pub mod pcp;
pub mod reductions;
pub mod tm;
pub mod transducer;

pub use alphabet::{Alphabet, Symbol, Word};
pub use continuity::{
    continuity_probe, f_discontinuity_witness, prefix_distance_exponent, probe_with_witness,
    xkn_test, BallPrefix, ContinuityVerdict,
};
pub use error::{Error, Result};
pub use hoa::{export_hoa, import_hoa};
pub use lasso::LassoWord;
pub use manifest::{source_hash, Manifest, Provenance, WitnessRecord, MANIFEST_VERSION};
pub use nba::{BuchiAutomaton, StateId};
pub use pcp::{concatenate_indices, PcpRegInstance, PcpSearch, SolutionCheck};
pub use reductions::{
    decode_pcp_solution, pcp_to_function_f, pcp_to_function_fprime, pcp_to_transducer_pair,
    tm_to_pcpreg, MARKER_LETTERS, MARKER_OUTPUTS_X, MARKER_OUTPUTS_Y,
};
pub use tm::{Move, TmConfiguration, TmRule, TmRunLasso, TmSearch, TuringMachine};
pub use transducer::{common_witness_search, BuchiTransducer, RationalRelationWitness};



