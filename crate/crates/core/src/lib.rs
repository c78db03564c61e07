//! Frenet apparatus, harmonic curvatures and f-eikonal helix classification
//! for parametric curves in `R^n`.

pub mod catalog;
pub mod classify;
pub mod dsl;
pub mod frenet;
pub mod harmonic;
pub mod jet;
pub mod report;
pub mod verify;
