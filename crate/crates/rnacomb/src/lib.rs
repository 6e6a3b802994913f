//! Exact combinatorics of RNA secondary structures under minimum arc-length
//! and minimum stack-length constraints.
//!
//! - [`structure`] — diagrams, validation, brute-force enumeration, dot-bracket I/O
//! - [`series`] — exact big-integer tables s(n, l) / t(n, l) from the class's
//!   functional equation, plus closed-form and algebraic cross-checks
//! - [`asymptotics`] — dominant singularity and the Gaussian limit (mu, sigma^2)
//!   of the arc-count distribution
//! - [`compat`] — nucleotide-ratio thresholds and the fraction of structures
//!   admitting a compatible sequence, exact and via the Gaussian limit
//! - [`sampler`] — exactly uniform random generation by unranking
//!
//! ```
//! use rnacomb::{ArcCountTable, StructureClass};
//!
//! let class = StructureClass::new(2, 1).unwrap();
//! let table = ArcCountTable::build(class, 10);
//! // 6 structures on 5 vertices with exactly one arc
//! assert_eq!(table.s_row(5)[1], 6u32.into());
//! ```

pub mod asymptotics;
pub mod compat;
pub mod error;
pub mod poly;
pub mod sampler;
pub mod series;
pub mod structure;
pub mod util;

pub use asymptotics::{clt_params, dominant_singularity, gaussian_cdf, ClassPolynomials, CltParams};
pub use compat::{
    compatible_fraction, max_compatible_arcs, ratio_threshold, CurvePoint, FractionResult, Method,
    Pairing, RatioVector,
};
pub use error::Error;
pub use sampler::{empirical_arc_stats, SamplerState};
pub use series::{
    catalan_form_counts, functional_equation_residual_is_zero, narayana, r1_count,
    solve_functional_equation, waterman_lambda2_count, ArcCountTable,
};
pub use structure::{
    enumerate, enumerate_structures, SecondaryStructure, Stack, StructureClass, Violation,
    BRUTE_FORCE_CAP,
};

// re-exported so downstream users can construct exact ratios without naming
// the num crates themselves
pub use num_bigint::{BigInt, BigUint};
pub use num_rational::BigRational;
