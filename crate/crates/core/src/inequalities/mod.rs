//! One checker per inequality chain. Each evaluates every term, stores it
//! once, and reports the slack of every link.

mod checks;
mod report;

pub use checks::{check_scalar_seed, CheckConfig, CheckInputs, CheckKind, Checker, FAMILY_GATE};
pub use report::{inputs_digest, ChainLink, CheckReport};
