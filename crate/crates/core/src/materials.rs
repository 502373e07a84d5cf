//! Elastic constants and the plane-strain elasticity matrices built from them.
//!
//! Units are fixed to mm / N / MPa everywhere in the crate. Strain and stress
//! vectors are ordered `(xx, yy, xy)` with engineering shear strain.

use nalgebra::{Matrix2, Matrix3};

use crate::error::{Error, Result};

/// Isotropic linear-elastic solid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsotropicMaterial {
    e: f64,
    mu: f64,
    density: f64,
    elastic_limit: f64,
}

impl IsotropicMaterial {
    /// Young's modulus `e` (MPa) and Poisson ratio `mu` in `[0, 0.5)`.
    ///
    /// Density defaults to 0 and the elastic limit to infinity; set them with
    /// [`with_density`](Self::with_density) and
    /// [`with_elastic_limit`](Self::with_elastic_limit).
    pub fn new(e: f64, mu: f64) -> Result<Self> {
        if !(e.is_finite() && e > 0.0) {
            return Err(Error::InvalidMaterial(format!(
                "Young's modulus must be positive, got {e}"
            )));
        }
        if !(0.0..0.5).contains(&mu) {
            return Err(Error::InvalidMaterial(format!(
                "Poisson ratio must lie in [0, 0.5), got {mu}"
            )));
        }
        Ok(Self {
            e,
            mu,
            density: 0.0,
            elastic_limit: f64::INFINITY,
        })
    }

    /// Formlabs Clear resin: E = 2.8 GPa, mu = 0.35, 1200 kg/m³, 35 MPa elastic limit.
    pub fn formlabs_clear() -> Self {
        Self {
            e: 2800.0,
            mu: 0.35,
            density: 1200.0,
            elastic_limit: 35.0,
        }
    }

    /// Density in kg/m³. Informational only.
    pub fn with_density(mut self, density: f64) -> Result<Self> {
        if !(density.is_finite() && density >= 0.0) {
            return Err(Error::InvalidMaterial(format!(
                "density must be non-negative, got {density}"
            )));
        }
        self.density = density;
        Ok(self)
    }

    /// Elastic-limit stress in MPa.
    pub fn with_elastic_limit(mut self, sigma_el: f64) -> Result<Self> {
        if !(sigma_el > 0.0) {
            return Err(Error::InvalidMaterial(format!(
                "elastic limit must be positive, got {sigma_el}"
            )));
        }
        self.elastic_limit = sigma_el;
        Ok(self)
    }

    pub fn youngs_modulus(&self) -> f64 {
        self.e
    }

    pub fn poisson_ratio(&self) -> f64 {
        self.mu
    }

    pub fn density(&self) -> f64 {
        self.density
    }

    pub fn elastic_limit(&self) -> f64 {
        self.elastic_limit
    }

    pub fn shear_modulus(&self) -> f64 {
        self.e / (2.0 * (1.0 + self.mu))
    }

    /// Common prefactor `E / ((1+mu)(1-2mu))` of the normal-strain block.
    fn lame_prefactor(&self) -> f64 {
        self.e / ((1.0 + self.mu) * (1.0 - 2.0 * self.mu))
    }
}

/// Transversely isotropic solid. Direction 1 is the in-plane (isotropy plane)
/// direction, direction 2 the perpendicular one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransverselyIsotropicMaterial {
    e1: f64,
    mu1: f64,
    e2: f64,
    mu2: f64,
    g2: f64,
}

impl TransverselyIsotropicMaterial {
    pub fn new(e1: f64, mu1: f64, e2: f64, mu2: f64, g2: f64) -> Result<Self> {
        if !(e1.is_finite() && e1 >= 0.0) {
            return Err(Error::InvalidMaterial(format!(
                "in-plane modulus E1 must be non-negative, got {e1}"
            )));
        }
        if !(e2.is_finite() && e2 > 0.0) {
            return Err(Error::InvalidMaterial(format!(
                "out-of-plane modulus E2 must be positive, got {e2}"
            )));
        }
        if !(g2.is_finite() && g2 > 0.0) {
            return Err(Error::InvalidMaterial(format!(
                "out-of-plane shear modulus G2 must be positive, got {g2}"
            )));
        }
        if !(mu1.is_finite() && mu2.is_finite()) {
            return Err(Error::InvalidMaterial("Poisson ratios must be finite".into()));
        }
        let mat = Self { e1, mu1, e2, mu2, g2 };
        let denom = mat.denominator();
        if !(denom > 0.0) {
            return Err(Error::InvalidMaterial(format!(
                "(1+mu1)(1-mu1-2 n1 mu2^2) = {denom} must be positive"
            )));
        }
        Ok(mat)
    }

    /// The isotropic card written in transversely isotropic form.
    pub fn from_isotropic(mat: &IsotropicMaterial) -> Self {
        Self {
            e1: mat.e,
            mu1: mat.mu,
            e2: mat.e,
            mu2: mat.mu,
            g2: mat.shear_modulus(),
        }
    }

    pub fn e1(&self) -> f64 {
        self.e1
    }
    pub fn mu1(&self) -> f64 {
        self.mu1
    }
    pub fn e2(&self) -> f64 {
        self.e2
    }
    pub fn mu2(&self) -> f64 {
        self.mu2
    }
    pub fn g2(&self) -> f64 {
        self.g2
    }

    /// Modulus ratio `n1 = E1 / E2`.
    pub fn n1(&self) -> f64 {
        self.e1 / self.e2
    }

    /// Shear ratio `m1 = G2 / E2`.
    pub fn m1(&self) -> f64 {
        self.g2 / self.e2
    }

    fn denominator(&self) -> f64 {
        (1.0 + self.mu1) * (1.0 - self.mu1 - 2.0 * self.n1() * self.mu2 * self.mu2)
    }

    fn prefactor(&self) -> f64 {
        self.e2 / self.denominator()
    }

    fn normal_block(&self) -> Matrix2<f64> {
        let (n1, mu1, mu2) = (self.n1(), self.mu1, self.mu2);
        let p = self.prefactor();
        let off = p * n1 * mu2 * (1.0 + mu1);
        Matrix2::new(
            p * n1 * (1.0 - n1 * mu2 * mu2),
            off,
            off,
            p * (1.0 - mu1 * mu1),
        )
    }
}

fn embed_normal(block: &Matrix2<f64>) -> Matrix3<f64> {
    let mut m = Matrix3::zeros();
    m.fixed_view_mut::<2, 2>(0, 0).copy_from(block);
    m
}

fn shear_only(g: f64) -> Matrix3<f64> {
    let mut m = Matrix3::zeros();
    m[(2, 2)] = g;
    m
}

/// Plane-strain elasticity matrix in Lamé form.
pub fn plane_strain_matrix(mat: &IsotropicMaterial) -> Matrix3<f64> {
    let (normal, shear) = plane_strain_submatrices(mat);
    normal + shear
}

/// Normal-strain and shear parts `(chi_E, chi_G)` of the plane-strain matrix.
pub fn plane_strain_submatrices(mat: &IsotropicMaterial) -> (Matrix3<f64>, Matrix3<f64>) {
    (
        embed_normal(&stress_recovery_matrix_iso(mat)),
        shear_only(mat.shear_modulus()),
    )
}

pub fn ti_plane_strain_matrix(mat: &TransverselyIsotropicMaterial) -> Matrix3<f64> {
    let (normal, shear) = ti_submatrices(mat);
    normal + shear
}

pub fn ti_submatrices(mat: &TransverselyIsotropicMaterial) -> (Matrix3<f64>, Matrix3<f64>) {
    (embed_normal(&mat.normal_block()), shear_only(mat.g2))
}

/// 2×2 matrix mapping normal strains to normal stresses (shear row dropped).
pub fn stress_recovery_matrix_iso(mat: &IsotropicMaterial) -> Matrix2<f64> {
    let p = mat.lame_prefactor();
    Matrix2::new(p * (1.0 - mat.mu), p * mat.mu, p * mat.mu, p * (1.0 - mat.mu))
}

pub fn stress_recovery_matrix_ti(mat: &TransverselyIsotropicMaterial) -> Matrix2<f64> {
    mat.normal_block()
}

/// Plane equivalent stress from two principal stresses.
pub fn von_mises_plane(s1: f64, s2: f64) -> f64 {
    // the radicand is a positive semidefinite quadratic form; clamp rounding noise
    (s1 * s1 + s2 * s2 - s1 * s2).max(0.0).sqrt()
}

/// Equivalent stress from three principal stresses.
pub fn von_mises_3d(s1: f64, s2: f64, s3: f64) -> f64 {
    let sum = (s1 - s2).powi(2) + (s2 - s3).powi(2) + (s3 - s1).powi(2);
    (sum / 2.0).sqrt()
}

/// Material card for one layer of a plate model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LayerMaterial {
    Isotropic(IsotropicMaterial),
    Transverse(TransverselyIsotropicMaterial),
}

impl LayerMaterial {
    pub fn elasticity(&self) -> Matrix3<f64> {
        match self {
            Self::Isotropic(m) => plane_strain_matrix(m),
            Self::Transverse(m) => ti_plane_strain_matrix(m),
        }
    }

    pub fn recovery(&self) -> Matrix2<f64> {
        match self {
            Self::Isotropic(m) => stress_recovery_matrix_iso(m),
            Self::Transverse(m) => stress_recovery_matrix_ti(m),
        }
    }

    /// Poisson ratio feeding the incompatible-mode shape functions.
    pub fn in_plane_poisson(&self) -> f64 {
        match self {
            Self::Isotropic(m) => m.mu,
            Self::Transverse(m) => m.mu1,
        }
    }
}

impl From<IsotropicMaterial> for LayerMaterial {
    fn from(m: IsotropicMaterial) -> Self {
        Self::Isotropic(m)
    }
}

impl From<TransverselyIsotropicMaterial> for LayerMaterial {
    fn from(m: TransverselyIsotropicMaterial) -> Self {
        Self::Transverse(m)
    }
}
