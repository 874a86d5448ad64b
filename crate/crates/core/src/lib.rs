//! Transducers on powers of Cantor space, the Brin-Thompson groups `dV_n` as
//! prefix exchanges, and the core monoid whose units compute `Out(dV_n)`.
//!
//! Maps act on the right and compose left to right throughout: `(x)fg` applies
//! `f` first.

pub mod catalog;
pub mod enumerate;
pub mod error;
pub mod homeo;
pub mod machine;
pub mod outer;
pub mod words;

pub use error::{Error, Result};
