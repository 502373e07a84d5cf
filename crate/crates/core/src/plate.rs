//! Plate cross-section models: meshes, supports and point loads.

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::fem::{
    assemble, recover, Band, ElementKind, LayerModel, LayerTag, Mesh, RecoveryMode, Solution,
    StressField,
};
use crate::materials::{IsotropicMaterial, TransverselyIsotropicMaterial};

/// Worst element aspect ratio accepted when snapping solid meshes.
pub const MAX_ASPECT: f64 = 1.5;

/// Element columns of composite meshes.
pub const COMPOSITE_COLUMNS: usize = 36;

/// Geometry of the plate and its supports (mm).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlateSpec {
    /// span length
    pub a: f64,
    /// out-of-plane width
    pub h: f64,
    /// total thickness
    pub t_p: f64,
    /// face-layer thickness
    pub t_fl: f64,
    /// core thickness
    pub t_cl: f64,
    /// load abscissa
    pub l_1: f64,
    pub x1: f64,
    pub x2: f64,
}

impl Default for PlateSpec {
    fn default() -> Self {
        Self {
            a: 54.0,
            h: 13.0,
            t_p: 2.0,
            t_fl: 0.5,
            t_cl: 1.0,
            l_1: 27.0,
            x1: 12.0,
            x2: 42.0,
        }
    }
}

impl PlateSpec {
    /// Same plate with core thickness `t_cl`; total thickness follows.
    pub fn with_core_thickness(mut self, t_cl: f64) -> Self {
        self.t_cl = t_cl;
        self.t_p = 2.0 * self.t_fl + t_cl;
        self
    }

    fn tol(&self) -> f64 {
        1e-9 * self.a.abs().max(1.0)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("a", self.a), ("h", self.h), ("t_p", self.t_p)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidPlate(format!("{name} must be positive, got {v}")));
            }
        }
        if !(0.0 < self.x1 && self.x1 < self.l_1 && self.l_1 < self.x2 && self.x2 < self.a) {
            return Err(Error::InvalidPlate(format!(
                "need 0 < x1 < l_1 < x2 < a, got x1={}, l_1={}, x2={}, a={}",
                self.x1, self.l_1, self.x2, self.a
            )));
        }
        Ok(())
    }

    pub fn validate_composite(&self) -> Result<()> {
        self.validate()?;
        if !(self.t_fl > 0.0 && self.t_cl > 0.0) {
            return Err(Error::InvalidPlate(format!(
                "layer thicknesses must be positive, got t_fl={}, t_cl={}",
                self.t_fl, self.t_cl
            )));
        }
        let sum = 2.0 * self.t_fl + self.t_cl;
        if (self.t_p - sum).abs() > 1e-9 * self.t_p {
            return Err(Error::InvalidPlate(format!(
                "t_p = {} differs from 2 t_fl + t_cl = {sum}",
                self.t_p
            )));
        }
        Ok(())
    }

    /// Abscissas that must coincide with node lines.
    pub fn key_abscissas(&self) -> [f64; 3] {
        [self.x1, self.l_1, self.x2]
    }

    fn places_nodes(&self, columns: usize) -> bool {
        let a_fe = self.a / columns as f64;
        self.key_abscissas().iter().all(|&x| {
            let k = x / a_fe;
            (k - k.round()).abs() * a_fe <= self.tol()
        })
    }
}

/// Element count along x for a solid mesh with element height `b_fe`.
///
/// Among counts that put nodes on the supports and the load line, picks the
/// one whose elements are closest to square (in log aspect), preferring the
/// coarser mesh on ties; rejects aspect ratios above [`MAX_ASPECT`].
pub fn snap_columns(spec: &PlateSpec, b_fe: f64) -> Result<usize> {
    let target = spec.a / b_fe;
    let hi = (target * MAX_ASPECT).ceil() as usize + 1;
    let mut best: Option<(usize, f64)> = None;
    for n in 1..=hi {
        if !spec.places_nodes(n) {
            continue;
        }
        let a_fe = spec.a / n as f64;
        let skew = (a_fe / b_fe).ln().abs();
        if skew > MAX_ASPECT.ln() + 1e-12 {
            continue;
        }
        if best.is_none_or(|(_, s)| skew < s - 1e-12) {
            best = Some((n, skew));
        }
    }
    best.map(|(n, _)| n).ok_or_else(|| Error::NoAdmissibleMesh {
        targets: spec.key_abscissas().to_vec(),
        max_aspect: MAX_ASPECT,
    })
}

pub fn build_solid_mesh(spec: &PlateSpec, layers: usize) -> Result<Mesh> {
    spec.validate()?;
    if layers == 0 {
        return Err(Error::InvalidMesh("at least one layer through the thickness is required".into()));
    }
    let columns = snap_columns(spec, spec.t_p / layers as f64)?;
    Mesh::layered(spec.a, columns, vec![Band::new(LayerTag::Solid, spec.t_p, layers)], spec.h)
}

/// Element rows for a core of thickness `t_cl`, read to 0.1 mm: one row for
/// 0.7–1.4 mm, two rows for 1.7–3.6 mm.
pub fn core_layers_for_thickness(t_cl: f64) -> Result<usize> {
    let r = (t_cl * 10.0).round() / 10.0;
    if (0.7..=1.4).contains(&r) {
        Ok(1)
    } else if (1.7..=3.6).contains(&r) {
        Ok(2)
    } else {
        Err(Error::CoreThicknessOutsideBands { thickness: t_cl })
    }
}

/// Face / core / face mesh with one element row per face and 36 columns.
pub fn build_composite_mesh(spec: &PlateSpec, core_layers: Option<usize>) -> Result<Mesh> {
    spec.validate_composite()?;
    let rows = match core_layers {
        Some(0) => return Err(Error::InvalidMesh("core needs at least one element row".into())),
        Some(n) => n,
        None => core_layers_for_thickness(spec.t_cl)?,
    };
    if !spec.places_nodes(COMPOSITE_COLUMNS) {
        return Err(Error::NoAdmissibleMesh {
            targets: spec.key_abscissas().to_vec(),
            max_aspect: f64::INFINITY,
        });
    }
    Mesh::layered(
        spec.a,
        COMPOSITE_COLUMNS,
        vec![
            Band::new(LayerTag::BottomFace, spec.t_fl, 1),
            Band::new(LayerTag::Core, spec.t_cl, rows),
            Band::new(LayerTag::TopFace, spec.t_fl, 1),
        ],
        spec.h,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryKind {
    /// Both DOFs of every node on the lines `x = x1` and `x = x2`.
    Clamped,
    /// Both DOFs of the bottom node at `x1` and at `x2`; the plate may rotate.
    Supported,
}

impl BoundaryKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Clamped => "clamped",
            Self::Supported => "supported",
        }
    }
}

impl std::fmt::Display for BoundaryKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BoundaryKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "clamped" => Ok(Self::Clamped),
            "supported" => Ok(Self::Supported),
            other => Err(Error::InvalidPlate(format!(
                "unknown boundary condition '{other}' (expected clamped or supported)"
            ))),
        }
    }
}

/// Nodes whose displacements are fixed by `bc`.
pub fn apply_boundary(mesh: &Mesh, spec: &PlateSpec, bc: BoundaryKind) -> Result<Vec<usize>> {
    let tol = spec.tol();
    let mut fixed = Vec::new();
    for (what, x) in [("x1", spec.x1), ("x2", spec.x2)] {
        let i = mesh
            .x_index(x, tol)
            .ok_or(Error::NodeNotFound { what, x, y: 0.0 })?;
        match bc {
            BoundaryKind::Clamped => {
                fixed.extend((0..mesh.y_lines().len()).map(|j| mesh.node_at_indices(i, j)))
            }
            BoundaryKind::Supported => fixed.push(mesh.node_at_indices(i, 0)),
        }
    }
    Ok(fixed)
}

/// Downward point force on the top surface at `x = l_1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoadCase {
    /// total force magnitude (N), applied in -y
    pub f_y: f64,
}

pub fn apply_load(mesh: &Mesh, spec: &PlateSpec, lc: &LoadCase) -> Result<Vec<f64>> {
    let top = mesh.thickness();
    let i = mesh.x_index(spec.l_1, spec.tol()).ok_or(Error::NodeNotFound {
        what: "load point",
        x: spec.l_1,
        y: top,
    })?;
    let node = mesh.node_at_indices(i, mesh.y_lines().len() - 1);
    let mut p = vec![0.0; mesh.dof_count()];
    p[2 * node + 1] = -lc.f_y;
    Ok(p)
}

/// Mesh plus per-band formulations.
#[derive(Debug, Clone)]
pub struct PlateModel {
    pub spec: PlateSpec,
    pub mesh: Mesh,
    pub models: Vec<LayerModel>,
}

/// Solved plate: displacements and recovered stresses.
#[derive(Debug, Clone)]
pub struct PlateResponse {
    pub solution: Solution,
    pub field: StressField,
    pub free_dofs: usize,
}

impl PlateModel {
    pub fn solid(spec: &PlateSpec, mat: IsotropicMaterial, layers: usize, kind: ElementKind) -> Result<Self> {
        Ok(Self {
            spec: *spec,
            mesh: build_solid_mesh(spec, layers)?,
            models: vec![LayerModel::new(mat, kind)],
        })
    }

    /// Three-layer plate; faces use `face_kind`, the homogenized core is
    /// always conforming.
    pub fn composite(
        spec: &PlateSpec,
        core: TransverselyIsotropicMaterial,
        face: IsotropicMaterial,
        face_kind: ElementKind,
        core_layers: Option<usize>,
    ) -> Result<Self> {
        let face_model = LayerModel::new(face, face_kind);
        Ok(Self {
            spec: *spec,
            mesh: build_composite_mesh(spec, core_layers)?,
            models: vec![face_model, LayerModel::new(core, ElementKind::Conforming), face_model],
        })
    }

    pub fn analyze(&self, bc: BoundaryKind, load: &LoadCase, mode: RecoveryMode) -> Result<PlateResponse> {
        let mut sys = assemble(&self.mesh, &self.models)?;
        sys.set_load(apply_load(&self.mesh, &self.spec, load)?)?;
        let fixed = apply_boundary(&self.mesh, &self.spec, bc)?;
        let reduced = sys.apply_constraints(&fixed)?;
        let solution = reduced.solve()?;
        let field = recover(&self.mesh, &self.models, &solution.displacements, mode)?;
        Ok(PlateResponse {
            solution,
            field,
            free_dofs: reduced.free_dofs().len(),
        })
    }
}
