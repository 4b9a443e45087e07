use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("singular variety: {0}")]
    SingularVariety(String),
    #[error("invalid descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("negative power of non-inverted variable `{0}`")]
    NegativePower(String),
    #[error("operands belong to different rings")]
    MixedRings,
    #[error("not tangent: relation residue {0} != 0")]
    NotTangent(String),
    #[error("degree mismatch: {0}")]
    Degree(String),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("broken volume certificate: {0}")]
    BrokenCertificate(String),
    #[error("certificate search failed: {0}")]
    CertificateSearch(String),
    #[error("window mismatch: {0}")]
    WindowMismatch(String),
    #[error("form is not closed")]
    NotClosed,
    #[error("vector field has nonzero divergence")]
    NonzeroDivergence,
    #[error("matrix is not nilpotent")]
    NotNilpotent,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
