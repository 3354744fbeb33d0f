#![no_std]

extern crate alloc;

pub mod chars;
pub mod error;
pub mod fock;
pub mod num;
pub mod ope;

pub use error::{Error, Result};
