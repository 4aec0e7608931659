//! Verification toolkit for finite models on integer grids.
//!
//! A [`Model`] maps points of a [`DiscreteDomain`] to exact [`OutputValue`]s.
//! The [`verifier`] decides whether unseen inputs always produce new outputs
//! (the subset condition) and whether that survives unbounded growth of each
//! dimension; [`analysis`] covers hypothesis validity, memory compilation and
//! the split/merge experiment on information generators.

pub mod analysis;
pub mod domain;
pub mod error;
pub mod generator;
pub mod model;
pub mod value;
pub mod verifier;

pub use domain::{DiscreteDomain, Point, Region};
pub use error::{Error, Result};
pub use generator::{fibers, InformationGenerator};
pub use model::{Model, ModelKind};
pub use value::OutputValue;
