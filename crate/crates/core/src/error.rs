use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("usage error: {0}")]
    Usage(String),

    #[error("vectors live in R^{expected}, got R^{found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// The two cells of a join are not in general position.
    #[error("join is degenerate: {0}")]
    JoinDegenerate(String),

    /// The hulls of a product do not meet in exactly one point, or their
    /// directions are not independent.
    #[error("product is degenerate: {0}")]
    ProductDegenerate(String),

    #[error("({k},{r},{s}) is not a face index of K_{n}")]
    Index { k: usize, r: usize, s: usize, n: usize },

    #[error("point outside the domain: {0}")]
    Domain(String),

    /// `end(paths[junction]) != start(paths[junction + 1])`.
    #[error("paths {junction} and {next} are not composable", next = junction + 1)]
    Composability { junction: usize },
}
