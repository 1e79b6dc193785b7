use std::io;
use std::path::PathBuf;

use crate::html::HtmlError;

/// Failures surfaced by the IO layer and the pipeline.
#[derive(Debug, thiserror::Error)]
pub enum NormnetError {
    #[error("{file}:{line}: {message}")]
    Format {
        file: String,
        line: usize,
        message: String,
    },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: {source}")]
    Html { path: PathBuf, source: HtmlError },
    #[error("config: {0}")]
    Config(String),
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("{0}")]
    Core(#[from] normnet_core::Error),
    #[error("unknown figure {0:?}")]
    UnknownFigure(String),
    #[error("stage {stage} failed: {source}")]
    Stage {
        stage: &'static str,
        source: Box<NormnetError>,
    },
}

impl NormnetError {
    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        NormnetError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn format(file: impl Into<String>, line: usize, message: impl Into<String>) -> Self {
        NormnetError::Format {
            file: file.into(),
            line,
            message: message.into(),
        }
    }

    /// Whether the failure stems from the inputs rather than the analysis.
    pub fn is_validation(&self) -> bool {
        match self {
            NormnetError::Format { .. }
            | NormnetError::Html { .. }
            | NormnetError::Config(_)
            | NormnetError::Validation(_)
            | NormnetError::UnknownFigure(_)
            | NormnetError::Io { .. } => true,
            NormnetError::Core(e) => matches!(
                e,
                normnet_core::Error::InvalidCorpus(_) | normnet_core::Error::RedirectCycle(_)
            ),
            NormnetError::Stage { source, .. } => source.is_validation(),
        }
    }

    /// Process exit code: 2 for input validation, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.is_validation() {
            2
        } else {
            1
        }
    }

    pub fn stage(&self) -> Option<&'static str> {
        match self {
            NormnetError::Stage { stage, .. } => Some(stage),
            _ => None,
        }
    }
}

pub type Result<T, E = NormnetError> = std::result::Result<T, E>;
