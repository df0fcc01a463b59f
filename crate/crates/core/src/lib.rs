//! Cluster categories and orbit categories of Dynkin type as finite
//! translation quivers, their cluster tilting objects, and the periodicity
//! classification of those objects.

pub mod arquiver;
pub mod bitset;
pub mod catalog;
pub mod classify;
pub mod diagram;
pub mod error;
pub mod homcalc;
pub mod props;
pub mod tilting;

pub use error::{CtkError, Result};
