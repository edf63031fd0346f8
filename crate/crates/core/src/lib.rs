//! Exact enumeration and verification tools for planar maps, Goulden-Jackson
//! pairs and GUE cumulants.

pub mod bkar;
pub mod error;
pub mod gauss;
pub mod gjdm;
pub mod gue;
pub mod maps;
pub mod partition;
pub mod perm;
pub mod poly;
pub mod report;

pub use error::{Error, Result};
