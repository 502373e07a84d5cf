//! Plane-strain finite elements for bending of solid plates and three-layer
//! plates with a homogenized tetrachiral honeycomb core.
//!
//! Units are fixed throughout: millimetres, newtons, megapascals.

pub mod error;
pub mod experiments;
pub mod fem;
pub mod honeycomb;
pub mod materials;
pub mod plate;

pub use error::{Error, Result};
pub use fem::{
    ElementGeometry, ElementKind, GlobalSystem, LayerModel, LayerTag, Mesh, RecoveryMode,
    ReducedSystem, StressField,
};
pub use honeycomb::{EffectiveCoreProperties, TetrachiralGeometry};
pub use materials::{IsotropicMaterial, LayerMaterial, TransverselyIsotropicMaterial};
pub use plate::{BoundaryKind, LoadCase, PlateModel, PlateSpec};
