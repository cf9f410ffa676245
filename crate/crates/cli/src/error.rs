use thiserror::Error;

use crate::workspace::WorkspaceError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("workspace: {0}")]
    Workspace(#[from] WorkspaceError),
    #[error(transparent)]
    Core(#[from] ncg_core::Error),
    #[error("unknown {kind} `{name}`")]
    Unknown { kind: String, name: String },
    #[error("{0}")]
    Usage(String),
}
