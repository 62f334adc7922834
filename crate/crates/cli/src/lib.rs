//! Library half of the `germoid` command-line tool: the JSON schema, the
//! command implementations, and the DOT export.

pub mod commands;
pub mod dot;
pub mod schema;
