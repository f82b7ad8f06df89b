use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("invalid configuration: {0}")]
    Usage(String),
    #[error("omega #{index}: {source}")]
    Job { index: usize, source: wh_core::Error },
    #[error(transparent)]
    Core(#[from] wh_core::Error),
}

pub type Result<T> = std::result::Result<T, CliError>;

pub mod exit {
    pub const OK: u8 = 0;
    pub const IO: u8 = 1;
    pub const USAGE: u8 = 2;
    pub const PARSE: u8 = 3;
    pub const ELLIPTICITY: u8 = 4;
    pub const RESIDUAL: u8 = 5;
    pub const UNRESOLVED: u8 = 6;
    pub const NUMERICAL: u8 = 7;
}

fn core_code(e: &wh_core::Error) -> u8 {
    use wh_core::Error as E;
    match e {
        E::Parse { .. } | E::InvalidSymbol(_) | E::Evaluation { .. } => exit::PARSE,
        E::Ellipticity { .. } | E::Homogeneity { .. } | E::Limit { .. } => exit::ELLIPTICITY,
        E::Residual { .. }
        | E::Assembly { .. }
        | E::Breakdown { .. }
        | E::IllConditioned { .. }
        | E::IndexMismatch { .. }
        | E::Integrality { .. } => exit::RESIDUAL,
        E::UnresolvedIndices { .. } => exit::UNRESOLVED,
        _ => exit::NUMERICAL,
    }
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Io { .. } => exit::IO,
            Self::Usage(_) => exit::USAGE,
            Self::Job { source, .. } | Self::Core(source) => core_code(source),
        }
    }
}
