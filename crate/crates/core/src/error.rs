use thiserror::Error;

/// Errors raised while building or solving a plate model.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid material: {0}")]
    InvalidMaterial(String),

    #[error("invalid honeycomb geometry: {0}")]
    InvalidGeometry(String),

    #[error("relative density {target} is outside the achievable range (0, {max})")]
    DensityOutOfRange { target: f64, max: f64 },

    #[error("rib free length is negative ({free_length} mm): walls too thick for the rib geometry")]
    NegativeRibLength { free_length: f64 },

    #[error("invalid element geometry: {0}")]
    InvalidElement(String),

    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("no element count along x places nodes at {targets:?} with aspect ratio <= {max_aspect}")]
    NoAdmissibleMesh { targets: Vec<f64>, max_aspect: f64 },

    #[error("core thickness {thickness} mm falls outside the 1-layer and 2-layer bands; pass an explicit core layer count")]
    CoreThicknessOutsideBands { thickness: f64 },

    #[error("layer {layer} has no material card")]
    MissingLayerMaterial { layer: usize },

    #[error("layer {layer}: {reason}")]
    UnsupportedLayerModel { layer: usize, reason: String },

    #[error("invalid plate spec: {0}")]
    InvalidPlate(String),

    #[error("no mesh node at {what} (x = {x} mm, y = {y} mm)")]
    NodeNotFound { what: &'static str, x: f64, y: f64 },

    #[error("constraints remove every degree of freedom")]
    EmptySystem,

    #[error("stiffness matrix is singular: {zero_modes} zero-energy mode(s) remain after constraints")]
    Singular { zero_modes: usize },

    #[error("stiffness matrix is not positive definite (pivot {pivot} at row {row})")]
    Indefinite { row: usize, pivot: f64 },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("unsupported quadrature order {0} (1..=6 available)")]
    QuadratureOrder(usize),

    #[error("{0} is not on the experiment grid")]
    OffGrid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
