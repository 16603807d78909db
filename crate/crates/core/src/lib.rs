//! Cluster tubes, their maximal rigid objects and gentle endomorphism
//! algebras, locally free quiver Grassmannians, and the Caldero-Chapoton map
//! onto type-C cluster variables.

pub mod foundation;
pub mod cluster;
pub mod endo;
pub mod amod;
pub mod cc;
pub mod error;
pub mod example;
pub mod grassmannian;
pub mod report;
pub mod tube;
pub mod verify;

pub use error::{Error, Result};
