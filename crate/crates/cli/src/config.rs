//! Scenario files: one TOML document per scenario, units in key names.

use serde::{Deserialize, Serialize};

use chiralplate::experiments::{Algorithm, DENSITY_GRID, DIAMETERS};
use chiralplate::{BoundaryKind, IsotropicMaterial, PlateSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SetupKind {
    Solid,
    Setup1,
    Setup2,
    Convergence,
    Poisson,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum AlgorithmArg {
    Conforming,
    Incompatible,
}

impl From<AlgorithmArg> for Algorithm {
    fn from(a: AlgorithmArg) -> Self {
        match a {
            AlgorithmArg::Conforming => Algorithm::Conforming,
            AlgorithmArg::Incompatible => Algorithm::IncompatibleFaces,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum BcArg {
    Clamped,
    Supported,
}

impl From<BcArg> for BoundaryKind {
    fn from(b: BcArg) -> Self {
        match b {
            BcArg::Clamped => BoundaryKind::Clamped,
            BcArg::Supported => BoundaryKind::Supported,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MaterialConfig {
    pub e_mpa: f64,
    pub mu: f64,
    pub density_kg_m3: f64,
    pub sigma_el_mpa: f64,
}

impl Default for MaterialConfig {
    fn default() -> Self {
        let m = IsotropicMaterial::formlabs_clear();
        Self {
            e_mpa: m.youngs_modulus(),
            mu: m.poisson_ratio(),
            density_kg_m3: m.density(),
            sigma_el_mpa: m.elastic_limit(),
        }
    }
}

impl MaterialConfig {
    pub fn build(&self) -> chiralplate::Result<IsotropicMaterial> {
        IsotropicMaterial::new(self.e_mpa, self.mu)?
            .with_density(self.density_kg_m3)?
            .with_elastic_limit(self.sigma_el_mpa)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PlateConfig {
    pub a_mm: f64,
    pub h_mm: f64,
    pub t_p_mm: f64,
    pub t_fl_mm: f64,
    pub t_cl_mm: f64,
    pub l_1_mm: f64,
    pub x1_mm: f64,
    pub x2_mm: f64,
}

impl Default for PlateConfig {
    fn default() -> Self {
        let s = PlateSpec::default();
        Self {
            a_mm: s.a,
            h_mm: s.h,
            t_p_mm: s.t_p,
            t_fl_mm: s.t_fl,
            t_cl_mm: s.t_cl,
            l_1_mm: s.l_1,
            x1_mm: s.x1,
            x2_mm: s.x2,
        }
    }
}

impl PlateConfig {
    pub fn spec(&self) -> PlateSpec {
        PlateSpec {
            a: self.a_mm,
            h: self.h_mm,
            t_p: self.t_p_mm,
            t_fl: self.t_fl_mm,
            t_cl: self.t_cl_mm,
            l_1: self.l_1_mm,
            x1: self.x1_mm,
            x2: self.x2_mm,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct LoadConfig {
    /// Probe force; the setup default applies when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f_y_n: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MeshConfig {
    /// Element rows through a solid plate.
    pub layers: usize,
    /// Explicit core element rows for composites.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub core_layers: Option<usize>,
    /// Finest level of the convergence study.
    pub max_layers: usize,
}

impl Default for MeshConfig {
    fn default() -> Self {
        Self {
            layers: 2,
            core_layers: None,
            max_layers: 5,
        }
    }
}

/// A single composite case for `solve`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CaseConfig {
    pub d_a_mm: f64,
    pub rho_rel: f64,
}

impl Default for CaseConfig {
    fn default() -> Self {
        Self {
            d_a_mm: 1.0,
            rho_rel: 0.353,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    pub d_a_mm: Vec<f64>,
    pub rho_rel: Vec<f64>,
    /// Honeycomb out-of-plane thickness for the rib-compliance Poisson model;
    /// defaults to the plate's core thickness.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_h_mm: Option<f64>,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            d_a_mm: DIAMETERS.to_vec(),
            rho_rel: DENSITY_GRID.to_vec(),
            t_h_mm: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dir: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioConfig {
    pub setup: SetupKind,
    pub algorithm: AlgorithmArg,
    pub bc: BcArg,
    pub material: MaterialConfig,
    pub plate: PlateConfig,
    pub load: LoadConfig,
    pub mesh: MeshConfig,
    pub case: CaseConfig,
    pub grid: GridConfig,
    pub output: OutputConfig,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            setup: SetupKind::Solid,
            algorithm: AlgorithmArg::Conforming,
            bc: BcArg::Clamped,
            material: MaterialConfig::default(),
            plate: PlateConfig::default(),
            load: LoadConfig::default(),
            mesh: MeshConfig::default(),
            case: CaseConfig::default(),
            grid: GridConfig::default(),
            output: OutputConfig::default(),
        }
    }
}

impl ScenarioConfig {
    pub fn parse(text: &str) -> Result<Self, String> {
        let cfg: Self = toml::from_str(text).map_err(|e| e.to_string())?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Checks that do not need any computation.
    pub fn validate(&self) -> Result<(), String> {
        self.material.build().map_err(|e| e.to_string())?;
        let spec = self.plate.spec();
        match self.setup {
            SetupKind::Setup1 | SetupKind::Setup2 => spec.validate_composite(),
            _ => spec.validate(),
        }
        .map_err(|e| e.to_string())?;
        if let Some(f) = self.load.f_y_n {
            if !f.is_finite() {
                return Err(format!("load.f_y_n must be finite, got {f}"));
            }
        }
        if self.mesh.layers == 0 || self.mesh.max_layers == 0 {
            return Err("mesh.layers and mesh.max_layers must be at least 1".into());
        }
        if self.grid.d_a_mm.is_empty() || self.grid.rho_rel.is_empty() {
            return Err("grid.d_a_mm and grid.rho_rel must not be empty".into());
        }
        if let Some(t) = self.grid.t_h_mm {
            if !(t > 0.0) {
                return Err(format!("grid.t_h_mm must be positive, got {t}"));
            }
        }
        Ok(())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario config always serializes")
    }
}
