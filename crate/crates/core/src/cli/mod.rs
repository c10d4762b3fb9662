//! Scenario parsing, builtin examples and command dispatch for the
//! `valdist` binary.

pub mod expr;
pub mod scenario;

pub use scenario::{parse_scenario, serialize_scenario, Scenario};
pub mod builtins;

pub use builtins::{builtin, builtin_names};
pub mod commands;

pub use commands::{exit_code, run_command, Command, Grid, Outcome};
