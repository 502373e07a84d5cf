//! Tetrachiral honeycomb cell geometry and its homogenized elastic properties.
//!
//! Cells sit on a square lattice of pitch `L_h = 1.6 d_a`. Each cylinder of
//! mean diameter `d_a` carries four ribs tangent to it, so the rib length
//! between tangency points is `l = sqrt(L_h² - d_a²)` and the rib angle is
//! `theta = atan(d_a / l)`. All effective quantities depend only on the
//! dimensionless ratios `t_sw / d_a` and `l / d_a`.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::materials::{IsotropicMaterial, TransverselyIsotropicMaterial};

/// Cell pitch over mean cylinder diameter.
pub const PITCH_RATIO: f64 = 1.6;

/// Bisection stops once the bracketing interval is this narrow (mm).
const BISECTION_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TetrachiralGeometry {
    mean_diameter: f64,
    wall_thickness: f64,
    pitch: f64,
    rib_length: f64,
    rib_angle: f64,
    outer_radius: f64,
    out_of_plane_thickness: f64,
}

impl TetrachiralGeometry {
    /// Cell with mean cylinder diameter `d_a` and wall thickness `t_sw` (mm).
    ///
    /// The out-of-plane thickness defaults to 1 mm; it only enters
    /// [`rib_compliances`], where it cancels from the Poisson ratio.
    pub fn from_cell(d_a: f64, t_sw: f64) -> Result<Self> {
        if !(d_a.is_finite() && d_a > 0.0) {
            return Err(Error::InvalidGeometry(format!(
                "cylinder diameter must be positive, got {d_a}"
            )));
        }
        if !(t_sw.is_finite() && t_sw > 0.0) {
            return Err(Error::InvalidGeometry(format!(
                "wall thickness must be positive, got {t_sw}"
            )));
        }
        // beta = t_sw / r < 1 with r = d_a/2 + t_sw/2
        if t_sw >= d_a {
            return Err(Error::InvalidGeometry(format!(
                "wall thickness {t_sw} must be below the mean diameter {d_a}"
            )));
        }
        let pitch = PITCH_RATIO * d_a;
        let rib_length = (pitch * pitch - d_a * d_a).sqrt();
        Ok(Self {
            mean_diameter: d_a,
            wall_thickness: t_sw,
            pitch,
            rib_length,
            rib_angle: (d_a / rib_length).atan(),
            outer_radius: 0.5 * (d_a + t_sw),
            out_of_plane_thickness: 1.0,
        })
    }

    pub fn with_thickness(mut self, t_h: f64) -> Result<Self> {
        if !(t_h.is_finite() && t_h > 0.0) {
            return Err(Error::InvalidGeometry(format!(
                "honeycomb thickness must be positive, got {t_h}"
            )));
        }
        self.out_of_plane_thickness = t_h;
        Ok(self)
    }

    pub fn mean_diameter(&self) -> f64 {
        self.mean_diameter
    }
    pub fn mean_radius(&self) -> f64 {
        0.5 * self.mean_diameter
    }
    pub fn wall_thickness(&self) -> f64 {
        self.wall_thickness
    }
    pub fn pitch(&self) -> f64 {
        self.pitch
    }
    pub fn rib_length(&self) -> f64 {
        self.rib_length
    }
    /// Angle between the rib mid-line and the line joining cylinder centres (rad).
    pub fn rib_angle(&self) -> f64 {
        self.rib_angle
    }
    pub fn outer_radius(&self) -> f64 {
        self.outer_radius
    }
    pub fn thickness(&self) -> f64 {
        self.out_of_plane_thickness
    }

    /// `alpha = l / r`.
    pub fn alpha(&self) -> f64 {
        self.rib_length / self.outer_radius
    }

    /// `beta = t_sw / r`, always in (0, 1).
    pub fn beta(&self) -> f64 {
        self.wall_thickness / self.outer_radius
    }

    /// `r_a / l`.
    pub fn alpha_h(&self) -> f64 {
        self.mean_radius() / self.rib_length
    }

    /// `t_sw / l`.
    pub fn beta_h(&self) -> f64 {
        self.wall_thickness / self.rib_length
    }
}

/// Solid area fraction of the cell footprint.
///
/// The overlap of each rib root with its cylinder is removed through the
/// circular-segment term with half-angle `phi = acos(1 - beta)`.
pub fn relative_density(g: &TetrachiralGeometry) -> f64 {
    let (a, b) = (g.alpha(), g.beta());
    let phi = (1.0 - b).acos();
    let solid = b * (2.0 * a + PI * (2.0 - b)) - 2.0 * (phi - (1.0 - b) * phi.sin());
    let cell = 4.0 * ((1.0 - 0.5 * b).powi(2) + 0.25 * a * a);
    solid / cell
}

/// Upper bound of [`relative_density`] reached as the wall fills the cylinder.
pub fn max_relative_density(d_a: f64) -> Result<f64> {
    // approach t_sw -> d_a from below; density is continuous there
    let g = TetrachiralGeometry::from_cell(d_a, d_a * (1.0 - 1e-12))?;
    Ok(relative_density(&g))
}

/// Wall thickness giving relative density `rho_target` for diameter `d_a`.
///
/// Bisection on `(0, d_a)`, where the density is strictly increasing.
pub fn wall_thickness_for_density(d_a: f64, rho_target: f64) -> Result<f64> {
    let max = max_relative_density(d_a)?;
    if !(rho_target > 0.0 && rho_target < max) {
        return Err(Error::DensityOutOfRange {
            target: rho_target,
            max,
        });
    }
    let density_at = |t: f64| -> Result<f64> {
        Ok(relative_density(&TetrachiralGeometry::from_cell(d_a, t)?))
    };
    let (mut lo, mut hi) = (0.0, d_a * (1.0 - 1e-12));
    while hi - lo > BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if density_at(mid)? < rho_target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// In-plane effective modulus (MPa) for cell-wall modulus `e_s`.
pub fn effective_e1(g: &TetrachiralGeometry, e_s: f64) -> f64 {
    let slender = g.beta_h();
    let (s, c) = g.rib_angle.sin_cos();
    e_s * slender / (c * c + s * s / (slender * slender))
}

/// Out-of-plane effective modulus: the solid modulus scaled by density.
pub fn effective_e2(g: &TetrachiralGeometry, e_s: f64) -> f64 {
    e_s * relative_density(g)
}

/// Out-of-plane effective shear modulus for cell-wall shear modulus `g_s`.
pub fn effective_g2(g: &TetrachiralGeometry, g_s: f64) -> f64 {
    let (a, b, th) = (g.alpha(), g.beta(), g.rib_angle);
    let c = th.cos();
    let cc = (FRAC_PI_2 - th).cos();
    g_s * b * (c * c + a * cc * cc + PI) / (1.0 + a * a)
}

/// Homogenized constants of a tetrachiral core.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveCoreProperties {
    pub e1: f64,
    pub e2: f64,
    pub g2: f64,
    /// Out-of-plane response to in-plane strain, taken as zero.
    pub mu_xy: f64,
    /// In-plane response to out-of-plane strain, taken as the solid's ratio.
    pub mu_yx: f64,
    pub rho_rel: f64,
}

pub fn effective_properties(g: &TetrachiralGeometry, solid: &IsotropicMaterial) -> EffectiveCoreProperties {
    EffectiveCoreProperties {
        e1: effective_e1(g, solid.youngs_modulus()),
        e2: effective_e2(g, solid.youngs_modulus()),
        g2: effective_g2(g, solid.shear_modulus()),
        mu_xy: 0.0,
        mu_yx: solid.poisson_ratio(),
        rho_rel: relative_density(g),
    }
}

/// Transversely isotropic card for the plane model of the plate cross-section.
///
/// The honeycomb plane contains the span direction x, so direction 1 of the
/// card maps to x and direction 2 to the through-thickness axis y.
pub fn effective_material(
    g: &TetrachiralGeometry,
    solid: &IsotropicMaterial,
) -> Result<TransverselyIsotropicMaterial> {
    let p = effective_properties(g, solid);
    TransverselyIsotropicMaterial::new(p.e1, p.mu_xy, p.e2, p.mu_yx, p.g2)
}

/// Poisson ratio of the rib-rotation model (rib angle, `r_a / l`, `t_sw / l`).
pub fn poisson_qi(g: &TetrachiralGeometry) -> f64 {
    let (a, b, th) = (g.alpha_h(), g.beta_h(), g.rib_angle);
    let s = th.sin();
    -s * (a - a * (PI - 2.0 * th) * (a + b)) / (2.0 * a * (a - a * s - b * s))
}

/// Bending and axial compliances `(a_h, b_h)` of one rib for wall modulus `e`.
pub fn rib_compliances(g: &TetrachiralGeometry, e: f64) -> Result<(f64, f64)> {
    let t = g.wall_thickness;
    let l = g.rib_length;
    let t_h = g.out_of_plane_thickness;
    let root = (2.0 * g.outer_radius * t - t * t).max(0.0).sqrt();
    let free_length = l - 2.0 * root;
    if free_length < 0.0 {
        return Err(Error::NegativeRibLength { free_length });
    }
    let inertia = t_h * t.powi(3) / 12.0;
    let bending = free_length.powi(3) / (24.0 * e * inertia);
    let axial = l / (2.0 * t_h * t * e);
    Ok((bending, axial))
}

/// Poisson ratio of the rib bending/stretching model. Always in [-1, 0].
pub fn poisson_lu(g: &TetrachiralGeometry) -> Result<f64> {
    let (a, b) = rib_compliances(g, 1.0)?;
    Ok(poisson_from_compliances(a, b, g.rib_angle))
}

pub fn poisson_from_compliances(a_h: f64, b_h: f64, rib_angle: f64) -> f64 {
    let (s, c) = rib_angle.sin_cos();
    let sc = s * s * c * c;
    let quartic = s.powi(4) + c.powi(4);
    -(a_h - b_h).powi(2) * sc / (2.0 * a_h * b_h * quartic + (a_h + b_h).powi(2) * sc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geom(d: f64, t: f64) -> TetrachiralGeometry {
        TetrachiralGeometry::from_cell(d, t).unwrap()
    }

    #[test]
    fn cell_geometry_right_triangle() {
        let g = geom(1.0, 0.1);
        assert!((g.pitch() - 1.6).abs() < 1e-15);
        assert!((g.rib_length() - 1.2489995996796796).abs() < 1e-14);
        assert!((g.rib_angle() - 0.67513153293703165).abs() < 1e-14);
        assert!((g.rib_length().powi(2) + 1.0 - g.pitch().powi(2)).abs() < 1e-13);
        assert!((g.rib_angle().tan() - 1.0 / g.rib_length()).abs() < 1e-14);
        let g19 = geom(1.9, 0.1);
        assert!((g19.rib_length() - 2.3730992393913913).abs() < 1e-13);
        assert!((g19.rib_angle() - g.rib_angle()).abs() < 1e-15);
        assert!((g.outer_radius() - 0.55).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_cells() {
        assert!(TetrachiralGeometry::from_cell(0.0, 0.1).is_err());
        assert!(TetrachiralGeometry::from_cell(1.0, 0.0).is_err());
        assert!(TetrachiralGeometry::from_cell(1.0, -0.1).is_err());
        assert!(TetrachiralGeometry::from_cell(1.0, 1.0).is_err());
    }

    #[test]
    fn density_reference_values() {
        // 40-digit evaluations of the closed form
        assert!((relative_density(&geom(1.0, 0.0782)) - 0.14914029765475208).abs() < 1e-13);
        assert!((relative_density(&geom(1.9, 1.1766)) - 0.79837947235897078).abs() < 1e-13);
        assert!((relative_density(&geom(1.0, 0.2217)) - 0.37498151149260611).abs() < 1e-13);
        assert!(relative_density(&geom(1.0, 1e-9)) < 1e-8);
    }

    #[test]
    fn density_monotone_in_wall_thickness() {
        for d in [1.0, 1.3, 1.6, 1.9] {
            let mut prev = 0.0;
            for k in 1..=100 {
                let t = d * k as f64 / 101.0;
                let rho = relative_density(&geom(d, t));
                assert!(rho > prev, "d_a={d} t={t}");
                assert!(rho < 1.0);
                prev = rho;
            }
        }
    }

    #[test]
    fn inversion_reference_values() {
        let t = wall_thickness_for_density(1.0, 0.353).unwrap();
        assert!((t - 0.20633489396659373).abs() < 1e-11);
        let t = wall_thickness_for_density(1.6, 0.425).unwrap();
        assert!((t - 0.41273713065380540).abs() < 1e-11);
        assert!(wall_thickness_for_density(1.0, 0.0).is_err());
        assert!(wall_thickness_for_density(1.0, 0.99).is_err());
    }

    #[test]
    fn effective_moduli() {
        let g = geom(1.0, 0.2217);
        assert!((effective_e1(&g, 2800.0) - 38.209400619722661).abs() < 1e-11);
        assert!((effective_e1(&g, 5600.0) - 2.0 * effective_e1(&g, 2800.0)).abs() < 1e-12);
        assert!(effective_e1(&geom(1.0, 1e-6), 2800.0) < 1e-10);

        let t = wall_thickness_for_density(1.0, 0.353).unwrap();
        assert!((effective_e2(&geom(1.0, t), 2800.0) - 988.4).abs() < 1e-8);
        let t = wall_thickness_for_density(1.0, 0.709).unwrap();
        assert!((effective_e2(&geom(1.0, t), 2800.0) - 1985.2).abs() < 1e-8);

        let gs = 2800.0 / 2.7;
        let g16 = geom(1.6, 0.4389);
        assert!((effective_g2(&g16, gs) - 416.41895684790497).abs() < 1e-10);
        assert!((effective_g2(&g16, 2.0 * gs) - 2.0 * effective_g2(&g16, gs)).abs() < 1e-10);
        assert!(effective_g2(&geom(1.0, 1e-12), gs) < 1e-6);
    }

    #[test]
    fn effective_card() {
        let solid = IsotropicMaterial::formlabs_clear();
        let t = wall_thickness_for_density(1.0, 0.353).unwrap();
        let m = effective_material(&geom(1.0, t), &solid).unwrap();
        assert!((m.e1() - 30.997181732305580).abs() < 1e-9);
        assert!((m.e2() - 988.4).abs() < 1e-8);
        assert!((m.g2() - 305.90941101221980).abs() < 1e-9);
        assert_eq!(m.mu1(), 0.0);
        assert_eq!(m.mu2(), 0.35);
        assert!(m.e1() != m.e2());
    }

    #[test]
    fn vanishing_wall_degenerates() {
        // every modulus tends to zero with the wall; a zero card is refused
        let solid = IsotropicMaterial::formlabs_clear();
        let p = effective_properties(&geom(1.0, 1e-12), &solid);
        assert!(p.e1 < 1e-9 && p.e2 < 1e-6 && p.g2 < 1e-6 && p.rho_rel < 1e-9);
        assert!(TransverselyIsotropicMaterial::new(0.0, 0.0, 0.0, 0.35, 0.0).is_err());
    }

    #[test]
    fn poisson_reference_values() {
        // rows: (rho_rel, t_sw from inversion, qi, lu) at d_a = 1, 40 digits
        let rows = [
            (0.14, 0.0730145414386805, -0.4902113527882471, Some(-0.8596144189656693)),
            (0.282, 0.1588875534220863, -0.2434754407688892, Some(-0.1309880072584375)),
            (0.353, 0.2063348939665937, 0.08689999621057663, Some(-0.01051438758111818)),
            (0.709, 0.5112557436006673, -1.331307554039659, None),
        ];
        for (rho, t, qi, lu) in rows {
            let ts = wall_thickness_for_density(1.0, rho).unwrap();
            assert!((ts - t).abs() < 1e-11);
            let g = geom(1.0, ts);
            assert!((poisson_qi(&g) - qi).abs() < 1e-9, "rho={rho}");
            match lu {
                Some(v) => assert!((poisson_lu(&g).unwrap() - v).abs() < 1e-9),
                None => assert!(matches!(
                    poisson_lu(&g),
                    Err(Error::NegativeRibLength { .. })
                )),
            }
        }
    }

    #[test]
    fn poisson_lu_independent_of_modulus_and_thickness() {
        let g = geom(1.3, 0.12);
        let base = poisson_lu(&g).unwrap();
        for (e, th) in [(2800.0, 1.0), (1.0, 3.6), (70e3, 0.25)] {
            let g2 = g.with_thickness(th).unwrap();
            let (a, b) = rib_compliances(&g2, e).unwrap();
            let v = poisson_from_compliances(a, b, g.rib_angle());
            assert!((v - base).abs() < 1e-12);
        }
        assert_eq!(poisson_from_compliances(2.0, 2.0, 0.6), 0.0);
        assert!((-1.0..=0.0).contains(&base));
    }

    #[test]
    fn scale_invariance() {
        let g1 = geom(1.0, 0.2);
        let g2 = geom(1.9, 0.38);
        assert!((relative_density(&g1) - relative_density(&g2)).abs() < 1e-14);
        assert!((effective_e1(&g1, 2800.0) - effective_e1(&g2, 2800.0)).abs() < 1e-10);
        assert!((effective_g2(&g1, 1000.0) - effective_g2(&g2, 1000.0)).abs() < 1e-10);
        assert!((poisson_qi(&g1) - poisson_qi(&g2)).abs() < 1e-12);
    }
}
