use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("config error at `{path}`: {message}")]
    Config { path: String, message: String },

    #[error("unknown preset `{name}`; known presets: {}", known.join(", "))]
    UnknownPreset { name: String, known: Vec<String> },

    #[error("integration diverged at step {step} (t = {t})")]
    Divergence { step: usize, t: f64 },

    #[error("loop has {n} samples, at least {min} required")]
    LoopTooShort { n: usize, min: usize },

    #[error("loop kind mismatch: {0}")]
    LoopKind(String),

    #[error("unsupported family: {0}")]
    UnsupportedFamily(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{source_name}:{line}: {message}")]
    Format { source_name: String, line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
