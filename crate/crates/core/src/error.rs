use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("size limit exceeded: {0}")]
    Size(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("graph is disconnected: vertex {0} is unreachable")]
    Disconnected(usize),

    #[error("invalid metric: {0}")]
    InvalidMetric(String),

    #[error("coloring is not monotone: {0}")]
    NotMonotone(String),

    #[error("map is not injective: points {0} and {1} have the same image")]
    NotInjective(usize, usize),

    #[error("map is not surjective: target point {0} has an empty fiber")]
    NotSurjective(usize),

    #[error("target is not a tree: {0}")]
    NotATree(String),

    #[error("argument {t} is outside the modulus domain [0, {a}]")]
    Domain { t: f64, a: f64 },

    #[error("parse error: {0}")]
    Parse(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
