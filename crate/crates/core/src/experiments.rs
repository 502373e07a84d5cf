//! Numerical campaigns: solid-plate anchors, the two composite setups,
//! mesh-convergence studies and Poisson-ratio diagrams.

use std::io::Write;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fem::{ElementKind, LayerTag, RecoveryMode};
use crate::honeycomb::{
    effective_material, effective_properties, poisson_lu, poisson_qi, relative_density,
    wall_thickness_for_density, TetrachiralGeometry,
};
use crate::materials::IsotropicMaterial;
use crate::plate::{BoundaryKind, LoadCase, PlateModel, PlateSpec};

/// Mean cylinder diameters of the campaign (mm).
pub const DIAMETERS: [f64; 4] = [1.0, 1.3, 1.6, 1.9];

/// Relative densities of the campaign (fractions).
pub const DENSITY_GRID: [f64; 9] = [0.14, 0.211, 0.282, 0.353, 0.425, 0.496, 0.567, 0.638, 0.709];

/// Solid volume of the core kept fixed in setup 2 (mm³).
pub const CORE_SOLID_VOLUME: f64 = 351.0;

pub const SETUP1_PROBE: f64 = 30.0;
pub const SETUP2_PROBE: f64 = 60.0;
pub const CONVERGENCE_PROBE: f64 = 60.0;

/// Through-thickness element rows of the solid-plate anchor runs.
pub const SOLID_LAYERS: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Setup {
    /// Fixed layer thicknesses (0.5 / 1 / 0.5 mm), density swept.
    One,
    /// Fixed core solid volume; core thickness follows the density.
    Two,
}

impl Setup {
    pub fn default_probe(&self) -> f64 {
        match self {
            Self::One => SETUP1_PROBE,
            Self::Two => SETUP2_PROBE,
        }
    }

    pub fn number(&self) -> u8 {
        match self {
            Self::One => 1,
            Self::Two => 2,
        }
    }

    /// Plate for this setup at relative density `rho_rel`.
    pub fn plate(&self, base: &PlateSpec, rho_rel: f64) -> PlateSpec {
        match self {
            Self::One => *base,
            Self::Two => base.with_core_thickness(setup2_core_thickness(base, rho_rel)),
        }
    }
}

/// `t_cl = V_cl / (rho_rel · a · h)`.
pub fn setup2_core_thickness(spec: &PlateSpec, rho_rel: f64) -> f64 {
    CORE_SOLID_VOLUME / (rho_rel * spec.a * spec.h)
}

/// Element formulation of a composite run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    /// Conforming elements in every layer.
    Conforming,
    /// Incompatible elements in the solid faces, conforming core.
    IncompatibleFaces,
}

impl Algorithm {
    pub fn face_kind(&self) -> ElementKind {
        match self {
            Self::Conforming => ElementKind::Conforming,
            Self::IncompatibleFaces => ElementKind::Incompatible,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Conforming => "conforming",
            Self::IncompatibleFaces => "incompatible",
        }
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Algorithm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "conforming" => Ok(Self::Conforming),
            "incompatible" | "incompatible_faces" => Ok(Self::IncompatibleFaces),
            other => Err(Error::InvalidPlate(format!(
                "unknown algorithm '{other}' (expected conforming or incompatible)"
            ))),
        }
    }
}

/// Inputs for one composite run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CaseParams {
    pub setup: Setup,
    pub d_a: f64,
    pub rho_rel: f64,
    pub bc: BoundaryKind,
    pub algorithm: Algorithm,
    pub f_probe: f64,
    pub solid: IsotropicMaterial,
    pub base: PlateSpec,
    /// Explicit core element rows; `None` applies the thickness bands.
    pub core_layers: Option<usize>,
    /// Accept diameters and densities outside the campaign grid.
    pub off_grid: bool,
}

impl CaseParams {
    pub fn new(setup: Setup, d_a: f64, rho_rel: f64, bc: BoundaryKind, algorithm: Algorithm) -> Self {
        Self {
            setup,
            d_a,
            rho_rel,
            bc,
            algorithm,
            f_probe: setup.default_probe(),
            solid: IsotropicMaterial::formlabs_clear(),
            base: PlateSpec::default(),
            core_layers: None,
            off_grid: false,
        }
    }
}

fn on_grid(v: f64, grid: &[f64]) -> bool {
    grid.iter().any(|&g| (g - v).abs() <= 1e-9)
}

/// Per-layer maxima and critical load of one composite run.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerStressLedger {
    pub setup: Setup,
    pub bc: BoundaryKind,
    pub algorithm: Algorithm,
    pub d_a: f64,
    pub t_sw: f64,
    pub t_cl: f64,
    pub rho_rel: f64,
    pub f_probe: f64,
    /// From the homogenized continuum, not from individual cell walls.
    pub sigma_core: f64,
    pub sigma_top: f64,
    pub sigma_bottom: f64,
    pub f_crit: f64,
    pub governing: LayerTag,
}

impl LayerStressLedger {
    pub fn sigma_max(&self) -> f64 {
        self.sigma_core.max(self.sigma_top).max(self.sigma_bottom)
    }

    pub fn sigma_faces(&self) -> f64 {
        self.sigma_top.max(self.sigma_bottom)
    }

    pub fn sigma_of(&self, tag: LayerTag) -> Option<f64> {
        match tag {
            LayerTag::Core => Some(self.sigma_core),
            LayerTag::TopFace => Some(self.sigma_top),
            LayerTag::BottomFace => Some(self.sigma_bottom),
            LayerTag::Solid => None,
        }
    }
}

/// `F_crit = F_probe · sigma_el / sigma_max`.
pub fn critical_load(f_probe: f64, sigma_el: f64, sigma_max: f64) -> Result<f64> {
    if !(sigma_max > 0.0) {
        return Err(Error::InvalidPlate(format!(
            "critical load undefined for peak stress {sigma_max}"
        )));
    }
    Ok(f_probe * sigma_el / sigma_max)
}

pub fn run_case(p: &CaseParams) -> Result<LayerStressLedger> {
    if !p.off_grid {
        if !on_grid(p.d_a, &DIAMETERS) {
            return Err(Error::OffGrid(format!("diameter {} mm", p.d_a)));
        }
        if !on_grid(p.rho_rel, &DENSITY_GRID) {
            return Err(Error::OffGrid(format!("relative density {}", p.rho_rel)));
        }
    }
    let t_sw = wall_thickness_for_density(p.d_a, p.rho_rel)?;
    let geom = TetrachiralGeometry::from_cell(p.d_a, t_sw)?;
    let core = effective_material(&geom, &p.solid)?;
    let spec = p.setup.plate(&p.base, p.rho_rel);
    let model = PlateModel::composite(&spec, core, p.solid, p.algorithm.face_kind(), p.core_layers)?;
    let resp = model.analyze(p.bc, &LoadCase { f_y: p.f_probe }, RecoveryMode::Normal)?;
    let max = |tag| resp.field.max_in_tag(tag).unwrap_or(0.0);
    let (core_s, top, bottom) = (max(LayerTag::Core), max(LayerTag::TopFace), max(LayerTag::BottomFace));
    let governing = [(LayerTag::Core, core_s), (LayerTag::TopFace, top), (LayerTag::BottomFace, bottom)]
        .into_iter()
        .fold((LayerTag::Core, f64::NEG_INFINITY), |best, c| if c.1 > best.1 { c } else { best })
        .0;
    let sigma_max = core_s.max(top).max(bottom);
    log::debug!(
        "setup {} d_a={} rho={} {} {}: sigma core/top/bottom = {core_s}/{top}/{bottom}",
        p.setup.number(),
        p.d_a,
        p.rho_rel,
        p.bc,
        p.algorithm
    );
    Ok(LayerStressLedger {
        setup: p.setup,
        bc: p.bc,
        algorithm: p.algorithm,
        d_a: p.d_a,
        t_sw,
        t_cl: spec.t_cl,
        rho_rel: p.rho_rel,
        f_probe: p.f_probe,
        sigma_core: core_s,
        sigma_top: top,
        sigma_bottom: bottom,
        f_crit: critical_load(p.f_probe, p.solid.elastic_limit(), sigma_max)?,
        governing,
    })
}

/// Peak stress and critical load of a homogeneous plate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolidResult {
    pub bc: BoundaryKind,
    pub kind: ElementKind,
    pub layers: usize,
    pub columns: usize,
    pub dofs: usize,
    pub f_probe: f64,
    pub sigma_max: f64,
    pub f_crit: f64,
}

pub fn run_solid(
    spec: &PlateSpec,
    mat: &IsotropicMaterial,
    layers: usize,
    kind: ElementKind,
    bc: BoundaryKind,
    f_probe: f64,
) -> Result<SolidResult> {
    let model = PlateModel::solid(spec, *mat, layers, kind)?;
    let resp = model.analyze(bc, &LoadCase { f_y: f_probe }, RecoveryMode::Normal)?;
    let sigma_max = resp.field.max_von_mises();
    Ok(SolidResult {
        bc,
        kind,
        layers,
        columns: model.mesh.columns(),
        dofs: resp.free_dofs,
        f_probe,
        sigma_max,
        f_crit: critical_load(f_probe, mat.elastic_limit(), sigma_max)?,
    })
}

/// Options shared by grid sweeps.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepOptions {
    pub diameters: Vec<f64>,
    pub densities: Vec<f64>,
    pub f_probe: Option<f64>,
    pub solid: IsotropicMaterial,
    pub base: PlateSpec,
    /// Explicit core element rows for every case.
    pub core_layers: Option<usize>,
    /// Worker threads; 0 uses the global pool.
    pub workers: usize,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            diameters: DIAMETERS.to_vec(),
            densities: DENSITY_GRID.to_vec(),
            f_probe: None,
            solid: IsotropicMaterial::formlabs_clear(),
            base: PlateSpec::default(),
            core_layers: None,
            workers: 0,
        }
    }
}

fn in_pool<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    if workers == 0 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidPlate(format!("cannot start {workers} workers: {e}")))?;
    Ok(pool.install(f))
}

/// Every (diameter, density) case in grid order (diameter outer).
pub fn run_sweep(
    setup: Setup,
    bc: BoundaryKind,
    algorithm: Algorithm,
    opts: &SweepOptions,
) -> Result<Vec<LayerStressLedger>> {
    let cases: Vec<CaseParams> = opts
        .diameters
        .iter()
        .flat_map(|&d| opts.densities.iter().map(move |&r| (d, r)))
        .map(|(d_a, rho)| CaseParams {
            f_probe: opts.f_probe.unwrap_or(setup.default_probe()),
            solid: opts.solid,
            base: opts.base,
            core_layers: opts.core_layers,
            off_grid: true,
            ..CaseParams::new(setup, d_a, rho, bc, algorithm)
        })
        .collect();
    in_pool(opts.workers, || cases.par_iter().map(run_case).collect::<Result<Vec<_>>>())?
}

/// Solid-plate peak stress for 1..=`max_layers` rows, both element kinds and
/// both boundary conditions; rows ordered by (bc, kind, layers).
pub fn mesh_convergence_study(
    spec: &PlateSpec,
    mat: &IsotropicMaterial,
    max_layers: usize,
    f_probe: f64,
    workers: usize,
) -> Result<Vec<SolidResult>> {
    let mut cases = Vec::new();
    for bc in [BoundaryKind::Clamped, BoundaryKind::Supported] {
        for kind in [ElementKind::Conforming, ElementKind::Incompatible] {
            for layers in 1..=max_layers {
                cases.push((bc, kind, layers));
            }
        }
    }
    in_pool(workers, || {
        cases
            .par_iter()
            .map(|&(bc, kind, layers)| run_solid(spec, mat, layers, kind, bc, f_probe))
            .collect::<Result<Vec<_>>>()
    })?
}

/// One point of the honeycomb property / Poisson-ratio diagram.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoissonRow {
    pub d_a: f64,
    pub t_sw: f64,
    pub rho_rel: f64,
    pub e1: f64,
    pub e2: f64,
    pub g2: f64,
    pub mu_qi: f64,
    /// `None` where the rib free length turns negative.
    pub mu_lu: Option<f64>,
}

/// `(d_a, t_sw)` points hitting each target density at each diameter.
pub fn density_grid_points(diameters: &[f64], densities: &[f64]) -> Result<Vec<(f64, f64)>> {
    let mut pts = Vec::new();
    for &d in diameters {
        for &r in densities {
            pts.push((d, wall_thickness_for_density(d, r)?));
        }
    }
    Ok(pts)
}

/// Honeycomb properties and both Poisson-ratio models at `(d_a, t_sw)`
/// points; `t_h` is the out-of-plane honeycomb thickness.
pub fn poisson_diagram(points: &[(f64, f64)], solid: &IsotropicMaterial, t_h: f64) -> Result<Vec<PoissonRow>> {
    points
        .iter()
        .map(|&(d_a, t_sw)| {
            let g = TetrachiralGeometry::from_cell(d_a, t_sw)?.with_thickness(t_h)?;
            let props = effective_properties(&g, solid);
            let mu_lu = match poisson_lu(&g) {
                Ok(v) => Some(v),
                Err(Error::NegativeRibLength { .. }) => None,
                Err(e) => return Err(e),
            };
            Ok(PoissonRow {
                d_a,
                t_sw,
                rho_rel: relative_density(&g),
                e1: props.e1,
                e2: props.e2,
                g2: props.g2,
                mu_qi: poisson_qi(&g),
                mu_lu,
            })
        })
        .collect()
}

pub const SWEEP_HEADER: [&str; 14] = [
    "setup", "bc", "algorithm", "d_a_mm", "t_sw_mm", "t_cl_mm", "rho_rel", "f_probe_n",
    "sigma_core_mpa", "sigma_top_mpa", "sigma_bottom_mpa", "f_crit_n", "governing_layer",
    "core_model",
];

pub const CONVERGENCE_HEADER: [&str; 8] = [
    "bc", "element", "layers", "columns", "dofs", "f_probe_n", "sigma_max_mpa", "f_crit_n",
];

pub const POISSON_HEADER: [&str; 8] = [
    "d_a_mm", "t_sw_mm", "rho_rel", "e1_mpa", "e2_mpa", "g2_mpa", "mu_qi", "mu_lu",
];

fn csv_err(e: csv::Error) -> std::io::Error {
    std::io::Error::other(e)
}

pub fn write_sweep_csv<W: Write>(out: W, rows: &[LayerStressLedger]) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SWEEP_HEADER).map_err(csv_err)?;
    for r in rows {
        w.write_record([
            r.setup.number().to_string(),
            r.bc.to_string(),
            r.algorithm.to_string(),
            r.d_a.to_string(),
            r.t_sw.to_string(),
            r.t_cl.to_string(),
            r.rho_rel.to_string(),
            r.f_probe.to_string(),
            r.sigma_core.to_string(),
            r.sigma_top.to_string(),
            r.sigma_bottom.to_string(),
            r.f_crit.to_string(),
            r.governing.to_string(),
            "homogenized".to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()
}

pub fn write_convergence_csv<W: Write>(out: W, rows: &[SolidResult]) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CONVERGENCE_HEADER).map_err(csv_err)?;
    for r in rows {
        w.write_record([
            r.bc.to_string(),
            r.kind.to_string(),
            r.layers.to_string(),
            r.columns.to_string(),
            r.dofs.to_string(),
            r.f_probe.to_string(),
            r.sigma_max.to_string(),
            r.f_crit.to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()
}

pub fn write_poisson_csv<W: Write>(out: W, rows: &[PoissonRow]) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(POISSON_HEADER).map_err(csv_err)?;
    for r in rows {
        w.write_record([
            r.d_a.to_string(),
            r.t_sw.to_string(),
            r.rho_rel.to_string(),
            r.e1.to_string(),
            r.e2.to_string(),
            r.g2.to_string(),
            r.mu_qi.to_string(),
            r.mu_lu.map(|v| v.to_string()).unwrap_or_default(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()
}
