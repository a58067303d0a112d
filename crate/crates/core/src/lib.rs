//! Exact-arithmetic Kitaev lattice models with defects.

pub mod balancing_equiv;
pub mod cli;
pub mod comodule;
pub mod crossed;
pub mod hopf;
pub mod lattice;
pub mod linalg;
pub mod report;
pub mod separability;
pub mod surface;

pub use report::{Check, Report};
