use thiserror::Error;

/// Error type shared by every mesh-producing and mesh-consuming operation.
#[derive(Debug, Error)]
pub enum MeshError {
    #[error("malformed mesh: {0}")]
    MalformedMesh(String),
    #[error("invalid transform: {0}")]
    InvalidTransform(String),
    #[error("non-finite coordinate: {0}")]
    NonFinite(String),
    #[error("topology error: {0}")]
    Topology(String),
    #[error("generation error: {0}")]
    Generation(String),
    #[error("path error: {0}")]
    Path(String),
    #[error("profile error: {0}")]
    Profile(String),
    #[error("integration error at step {step}: {msg}")]
    Integration { step: usize, msg: String },
    #[error("input error: {0}")]
    Input(String),
    #[error("codec error: {0}")]
    Codec(String),
    #[error("parameter error: {0}")]
    Parameter(String),
    #[error("unknown scene '{name}'; valid scenes: {known}")]
    UnknownScene { name: String, known: String },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, MeshError>;
