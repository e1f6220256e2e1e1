//! Maximum extractable work and efficiency of nanoscale heat engines when
//! every Rényi free energy must decrease.

// negated comparisons are used on purpose so that NaN fails validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod extensions;
pub mod macro_engine;
pub mod multicycle;
pub mod nano_engine;
pub mod numerics;
pub mod second_laws;
pub mod thermo_core;

pub use error::{Error, Result};
