//! Command-line front end for `voa-coset-core`: generators, OPEs, free field
//! checks, characters, branching identities and the Fock space oracle.

mod app;
pub mod json;

pub use app::{run, Cli, Command, Family, Format};
