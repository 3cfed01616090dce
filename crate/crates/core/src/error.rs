use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid range: lo = {lo} exceeds hi = {hi}")]
    InvalidRange { lo: i64, hi: i64 },

    #[error("element {0} not found")]
    NotFound(String),

    #[error("invalid tail rule: {0}")]
    InvalidTail(String),

    #[error("relation is not a partial order: {0}")]
    NotPartialOrder(String),

    #[error("invalid map: {0}")]
    InvalidMap(String),

    #[error("invalid multivalued map: {0}")]
    InvalidMultiMap(String),

    #[error("image {image} of x{point} lies outside the window [{lo}, {hi}]")]
    OutOfWindow {
        point: i64,
        image: i64,
        lo: i64,
        hi: i64,
    },

    #[error("window has {size} elements, above the enumeration guard of {limit}")]
    WindowTooLarge { size: usize, limit: usize },

    #[error("inconclusive: {0}")]
    Inconclusive(String),

    #[error("empty result: {0}")]
    EmptyResult(String),

    #[error("map is not Vietoris-like: {0}")]
    NotVietoris(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error("spec parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
