//! Workspace files, command dispatch and JSON reports for the `ncg` tool.

pub mod commands;
pub mod context;
pub mod error;
pub mod report;
pub mod verify;
pub mod workspace;

pub use commands::{run_command, Command};
pub use context::{Context, Settings};
pub use error::CliError;
pub use report::{Report, Verdict};
pub use verify::verify_example_report;
pub use workspace::{parse_workspace, serialize_workspace, WorkspaceError, WorkspaceFile};
