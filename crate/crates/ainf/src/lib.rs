//! JSON workspaces and the `ainf` command line on top of `ainf-core`.
//!
//! A workspace is one versioned document naming algebras, modules, bocses,
//! twisted modules and the maps between them. `ainf check` runs the defining
//! identities of a named structure; `ainf construct` builds a new structure,
//! reloads it from its serialized form and checks it again before writing.

pub mod cli;
pub mod format;
pub mod workspace;

pub use cli::{run, Cli};
pub use format::Document;
pub use workspace::Workspace;
