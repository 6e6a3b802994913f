use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid structure class: lambda={lambda}, r={r} (both must be >= 1)")]
    InvalidClass { lambda: u32, r: u32 },

    #[error("malformed arc ({i},{j}) on {n} vertices")]
    MalformedArc { i: usize, j: usize, n: usize },

    #[error("duplicate arc ({i},{j})")]
    DuplicateArc { i: usize, j: usize },

    #[error("brute-force enumeration is capped at n <= {cap}, got n = {n}")]
    BruteForceCap { n: usize, cap: usize },

    #[error("structure with shared endpoints or crossing arcs has no dot-bracket form")]
    UnencodableStructure,

    #[error("dot-bracket parse error at byte {pos}: {reason}")]
    DotBracket { pos: usize, reason: &'static str },

    #[error("n = {n} exceeds table range n_max = {n_max}")]
    TableRange { n: usize, n_max: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("no dominant singularity located on (0, 1] for lambda={lambda}, r={r}, y={y}")]
    NoSingularity { lambda: u32, r: u32, y: f64 },

    #[error("degenerate singularity (vanishing x-derivative) for lambda={lambda}, r={r}, y={y}")]
    DegenerateSingularity { lambda: u32, r: u32, y: f64 },

    #[error("y = {0} outside the supported range [0.5, 2]")]
    UnsupportedY(f64),

    #[error("implicit-derivative and finite-difference CLT parameters disagree: {0}")]
    CltCrossCheck(String),

    #[error("invalid ratio vector: {0}")]
    Ratio(String),

    #[error("ratio mode does not match pairing rule: {0}")]
    ModeMismatch(&'static str),

    #[error("{0} required but not provided")]
    MissingInput(&'static str),

    #[error("empty sample list")]
    EmptySample,

    #[error("sample list mixes structures of different length")]
    MixedSampleLength,

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
