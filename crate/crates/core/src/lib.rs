//! Desk-scale computational toolkit for the intrinsic geometry of subsets of
//! two-dimensional CAT(kappa) spaces: model-surface trigonometry, exact planar
//! shortest paths, piecewise-flat complexes, integer simplicial homology,
//! iterated Jordan-curve cutting, constructive majorization, sampling-based
//! CAT(kappa) verification and Vietoris-Rips filling-radius estimation.

pub mod complex;
pub mod error;
pub mod fillrad;
pub mod homology;
pub mod jordan;
pub mod majorize;
pub mod model;
pub mod polygon;
pub mod predicates;
pub mod rng;
pub mod scene;
pub mod svg;
pub mod verify;

pub use error::{GeomError, Result};
