//! Nonlinearity analysis of Boolean functions and S-boxes through
//! projections onto r-dimensional linear subspaces.
//!
//! The classical nonlinearity of a Boolean function measures its distance
//! to degree-one approximations. This crate generalizes that: instead of a
//! single linear form, a surjective linear map `U` with `r` independent
//! rows projects the inputs (or the input/output graph of an S-box) down
//! to `r` bits, and the function induces a probability distribution on the
//! 2^r outcomes. Ranking those distributions by (number of impossible
//! outcomes, support entropy) yields a nonlinearity parameter `N_f` and an
//! entropy parameter `H_f` for every dimension `r`.
//!
//! The crate provides:
//!
//! - packed truth-table types for conventional ([`BooleanFunction`]) and
//!   vectorial ([`VectorialFunction`]) functions, with hex and algebraic
//!   normal form I/O;
//! - the Walsh spectrum ([`walsh_spectrum`]) with exact rational values,
//!   classical nonlinearity, and bent/perfect-nonlinearity predicates;
//! - streaming enumeration of all rank-`r` row spaces in reduced row
//!   echelon form ([`enumerate_rref`]), splittable into ranges for
//!   parallel scans;
//! - exact classification of induced distributions ([`analyze`]) into a
//!   [`NonlinearityReport`] per dimension;
//! - exhaustive and filtered searches for the functions that are optimal
//!   under the induced-distribution order ([`optimal_search`]).
//!
//! Entropies are reported in bits (base-2 logarithms). All classification
//! is integer-exact: classes are keyed by the zero count and the integer
//! invariant `prod c^c` over nonzero counts, never by floating point.

mod anf;
mod analysis;
mod boolean;
mod dist;
mod error;
mod gf;
mod optimal;
mod reference;
mod report;
mod subspace;
mod vectorial;
mod walsh;

pub use anf::AnfExpression;
pub use analysis::{
    analyze, analyze_jobs, analyze_range, merge_partials, FunctionRef, Mode, PartialCensus,
};
pub use boolean::{BooleanFunction, MAX_ARITY};
pub use dist::{
    class_key, compare_distribution_classes, entropy_key, induce_conventional, induce_vectorial,
    support_entropy, DistributionClass, InducedDistribution,
};
pub use error::Error;
pub use gf::{gf_inverse_sbox, is_irreducible};
pub use optimal::{
    compare_function_classes, optimal_search, search_summary_json, verify_optimal_vs_perfect,
    write_census_jsonl, FunctionClass, OptimalPnReport, OptimalSearchResult, SearchScope,
    FULL_SCAN_BIT_CAP,
};
pub use reference::{five_variable_example, inversion_sbox_16};
pub use report::{
    reports_to_csv, reports_to_json, reports_to_markdown, ClassSummary, NonlinearityReport,
};
pub use subspace::{
    canonicalize, enumerate_rref, for_each_rref_in_range, gaussian_binomial, split_range,
    LinearMap, RrefIter, SubspaceRange,
};
pub use vectorial::VectorialFunction;
pub use walsh::{
    classical_nonlinearity, correlation_probability, is_bent, is_perfect_nonlinear,
    walsh_spectrum, WalshSpectrum,
};

pub type Result<T> = std::result::Result<T, Error>;
