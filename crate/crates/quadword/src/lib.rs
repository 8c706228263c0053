//! Generation and analysis of right-infinite words and the growth of their
//! monomial algebras.
//!
//! The pipeline: generate a Sturmian base word with exact arithmetic
//! ([`sturmian`]), run the nested anchor/block/stage construction to its
//! limit word ([`construction`]), index prefixes with a suffix automaton for
//! exact factor counts ([`factor_index`]), derive growth functions, fitted
//! growth exponents, and bound checks ([`growth`]), count words avoiding
//! forbidden factors ([`transfer`]), and compute in the word's monomial
//! algebra: periodic quotients, their identities and PI degrees, and
//! candidates for prime quotients of growth-exponent one ([`algebra`]).

pub mod algebra;
pub mod construction;
pub mod error;
pub mod factor_index;
pub mod growth;
pub mod sturmian;
pub mod transfer;
pub mod word;

pub use error::{Error, Result};

pub use word::{Alphabet, FiniteWord, Letter, PeriodicStream, WordStream};

pub use sturmian::{
    fibonacci_stream, mechanical_stream, verify_sturmian, FibonacciStream, MechanicalStream,
    SlopeSpec, SturmianReport,
};

pub use construction::{
    anchors_to_length, build_block, exponent, select_anchors, u_stream,
    verify_stage_length_bound, AnchorRule, ConstructionParams, ConstructionTrace,
    StageBoundReport, StageBoundRow, TraceFile, UStream,
};

pub use factor_index::{
    bergman_gap_check, border_array, is_primitive, minimal_period, primitive_root,
    recurrence_check, ComplexityProfile, FactorIndex, PeriodicityClass, RecurrenceReport,
    RecurrenceScan,
};

pub use growth::{
    check_u_bounds, complexity_bound_checks, estimate_gk, estimate_growth_constant,
    growth_function, growth_report, growth_sandwich_check, growth_series, prime_budget,
    BoundCheck, GrowthReport, SandwichReport, UBoundReport,
};

pub use transfer::{
    classify_growth, transfer_count, transfer_counts, ForbiddenPresentation, GrowthClass,
};

pub use algebra::{
    build_periodic_quotient, canonical_rotation, check_candidate, enumerate_cogk1_candidates,
    envelope_increases, matrix_image_degrees, verify_quotient_identities, AlgebraElement,
    CandidateStatus, DegreeRow, IdentityReport, PeriodicQuotient, PrimeCandidate,
};
