// `!(x > 0.0)` style guards are used on purpose so that NaN inputs are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod linalg;
pub mod unitary;
pub mod interp;
pub mod search;
pub mod pade;
pub mod analysis;
pub mod brasil;
pub mod lawson;
pub mod cli;
