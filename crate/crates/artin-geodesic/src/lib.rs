//! Geodesic normal forms and the word problem in Artin groups whose Coxeter
//! diagram avoids A₃ and B₃ subdiagrams.
//!
//! The engine rewrites words by length-preserving moves on *critical* factors:
//! two-generator critical words, their pseudo-generator generalisations over
//! two or three generators, and chains of such factors (rewriting sequences)
//! whose application shortens a word by a free cancellation at the right end.
//! A word is geodesic exactly when it admits no rewriting sequence, which
//! yields a quadratic-time reduction to shortest form and a solution to the
//! word problem.
//!
//! Module map:
//! - [`presentation`]: Coxeter matrices, parsing, and the diagram hypothesis.
//! - [`word`]: letters, free reduction, alternating strings, syllables.
//! - [`critical2`]: two-generator critical words, δ, τ, and the m = 3
//!   closed-form transform.
//! - [`pseudo`]: two- and three-generator pseudo-critical words and their τ.
//! - [`rrs`]: rewriting sequences — validation, application, the optimal
//!   sequence search, and the resulting `reduce`/`equal`/`is_geodesic` API.
//! - [`oracle`]: slow, independent ground-truth procedures used for
//!   differential testing (BFS over relator moves, exhaustive enumeration).

pub mod critical2;
pub mod oracle;
pub mod presentation;
pub mod pseudo;
pub mod rrs;
pub mod word;

pub use presentation::{parse_presentation, CoxeterLabel, GeneratorId, ParseError, Presentation};
pub use rrs::{
    apply_rrs, build_rrs, equal, find_optimal_rrs, is_geodesic, reduce, validate_rrs, Crit,
    CritType, Decomposition, ReducerState, Rrs, RrsError, SearchMode, TraceRecord,
};
pub use word::{free_reduce, Letter, Word};
