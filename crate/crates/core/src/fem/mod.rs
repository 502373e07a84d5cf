//! Plane-strain finite-element core: elements, meshes, assembly and solve.

pub mod band;
pub mod element;
pub mod mesh;
pub mod system;

pub use element::{
    conforming_stiffness_iso, conforming_stiffness_ti, element_stiffness, gauss_legendre,
    incompatible_stiffness_iso, incompatible_stiffness_iso_layered, quadrature_stiffness,
    quadrature_stiffness_for, relative_frobenius, strain_displacement, strain_operator,
    ElementGeometry, ElementKind, ElementMatrix, CORNERS,
};
pub use mesh::{Band, Element, LayerTag, Mesh};
pub use system::{
    assemble, recover, CornerStress, ElementStress, GlobalSystem, LayerModel, RecoveryMode,
    ReducedSystem, Solution, StressField, RESIDUAL_TOL,
};

#[cfg(test)]
mod tests;
