//! Rectangular 4-node plane-strain elements.
//!
//! Local coordinates `xi, eta` span [-1, 1]; corners are numbered
//! (-1,-1), (1,-1), (1,1), (-1,1). DOFs are ordered `(v1x, v1y, v2x, v2y, ...)`.

use nalgebra::{Matrix3, SMatrix};

use crate::error::{Error, Result};
use crate::materials::{
    plane_strain_matrix, stress_recovery_matrix_ti, IsotropicMaterial, LayerMaterial,
    TransverselyIsotropicMaterial,
};

pub type ElementMatrix = SMatrix<f64, 8, 8>;
pub type StrainOperator = SMatrix<f64, 3, 8>;
pub type NormalStrainOperator = SMatrix<f64, 2, 8>;

/// Corner signs `(xi_q, eta_q)`.
pub const CORNERS: [(f64, f64); 4] = [(-1.0, -1.0), (1.0, -1.0), (1.0, 1.0), (-1.0, 1.0)];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementGeometry {
    a: f64,
    b: f64,
    h: f64,
}

impl ElementGeometry {
    /// Width `a_fe` along x, height `b_fe` along y, depth `h` (mm).
    pub fn new(a_fe: f64, b_fe: f64, h: f64) -> Result<Self> {
        for (name, v) in [("a_fe", a_fe), ("b_fe", b_fe), ("h", h)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidElement(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(Self { a: a_fe, b: b_fe, h })
    }

    pub fn width(&self) -> f64 {
        self.a
    }
    pub fn height(&self) -> f64 {
        self.b
    }
    pub fn depth(&self) -> f64 {
        self.h
    }
    /// `b_fe / a_fe`.
    pub fn gamma(&self) -> f64 {
        self.b / self.a
    }

    pub fn with_depth(self, h: f64) -> Result<Self> {
        Self::new(self.a, self.b, h)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ElementKind {
    /// Bilinear shape functions, continuous across element edges.
    Conforming,
    /// Bilinear field enriched with Poisson-coupled quadratic modes.
    Incompatible,
}

impl std::fmt::Display for ElementKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Conforming => "conforming",
            Self::Incompatible => "incompatible",
        })
    }
}

/// 2×2 block `(r, s)` of `m`.
fn put_block(k: &mut ElementMatrix, r: usize, s: usize, block: [[f64; 2]; 2]) {
    for i in 0..2 {
        for j in 0..2 {
            k[(2 * r + i, 2 * s + j)] = block[i][j];
        }
    }
}

fn symmetrize(k: &mut ElementMatrix) {
    for i in 0..8 {
        for j in 0..i {
            let v = 0.5 * (k[(i, j)] + k[(j, i)]);
            k[(i, j)] = v;
            k[(j, i)] = v;
        }
    }
}

/// Conforming element, isotropic material.
pub fn conforming_stiffness_iso(g: &ElementGeometry, mat: &IsotropicMaterial) -> ElementMatrix {
    let (e, mu, gm) = (mat.youngs_modulus(), mat.poisson_ratio(), g.gamma());
    let pe = e * g.h / (4.0 * (1.0 + mu) * (1.0 - 2.0 * mu));
    let pg = mat.shear_modulus() * g.h / 4.0;
    let mut k = ElementMatrix::zeros();
    for (r, &(xr, yr)) in CORNERS.iter().enumerate() {
        for (s, &(xs, ys)) in CORNERS.iter().enumerate() {
            let ke = [
                [(1.0 - mu) * gm * xr * xs * (1.0 + yr * ys / 3.0), mu * xr * ys],
                [mu * yr * xs, (1.0 - mu) * yr * ys / gm * (1.0 + xr * xs / 3.0)],
            ];
            let kg = [
                [yr * ys / gm * (1.0 + xr * xs / 3.0), yr * xs],
                [xr * ys, gm * xr * xs * (1.0 + yr * ys / 3.0)],
            ];
            put_block(
                &mut k,
                r,
                s,
                [
                    [pe * ke[0][0] + pg * kg[0][0], pe * ke[0][1] + pg * kg[0][1]],
                    [pe * ke[1][0] + pg * kg[1][0], pe * ke[1][1] + pg * kg[1][1]],
                ],
            );
        }
    }
    k
}

/// Incompatible element, isotropic material.
pub fn incompatible_stiffness_iso(g: &ElementGeometry, mat: &IsotropicMaterial) -> ElementMatrix {
    let (e, mu, gm) = (mat.youngs_modulus(), mat.poisson_ratio(), g.gamma());
    let pe = e * g.h / (4.0 * (1.0 + mu) * (1.0 - 2.0 * mu));
    let pg = mat.shear_modulus() * g.h / 4.0;
    let q = (1.0 - mu - mu * mu - mu * mu * mu) / 3.0;
    let mut k = ElementMatrix::zeros();
    for (r, &(xr, yr)) in CORNERS.iter().enumerate() {
        for (s, &(xs, ys)) in CORNERS.iter().enumerate() {
            let ke = [
                [gm * xr * xs * ((1.0 - mu) + q * yr * ys), mu * xr * ys],
                [mu * yr * xs, yr * ys / gm * ((1.0 - mu) + q * xr * xs)],
            ];
            let kg = [[yr * ys / gm, yr * xs], [xr * ys, gm * xr * xs]];
            put_block(
                &mut k,
                r,
                s,
                [
                    [pe * ke[0][0] + pg * kg[0][0], pe * ke[0][1] + pg * kg[0][1]],
                    [pe * ke[1][0] + pg * kg[1][0], pe * ke[1][1] + pg * kg[1][1]],
                ],
            );
        }
    }
    k
}

/// Conforming element, transversely isotropic material.
pub fn conforming_stiffness_ti(
    g: &ElementGeometry,
    mat: &TransverselyIsotropicMaterial,
) -> ElementMatrix {
    let (n1, mu1, mu2, gm) = (mat.n1(), mat.mu1(), mat.mu2(), g.gamma());
    let pe = mat.e2() * g.h / (4.0 * (1.0 + mu1) * (1.0 - mu1 - 2.0 * n1 * mu2 * mu2));
    let pg = mat.g2() * g.h / 4.0;
    let c00 = n1 * (1.0 - n1 * mu2 * mu2);
    let c01 = n1 * mu2 * (1.0 + mu1);
    let c11 = 1.0 - mu1 * mu1;
    let mut k = ElementMatrix::zeros();
    for (r, &(xr, yr)) in CORNERS.iter().enumerate() {
        for (s, &(xs, ys)) in CORNERS.iter().enumerate() {
            let ke = [
                [c00 * gm * xr * xs * (1.0 + yr * ys / 3.0), c01 * xr * ys],
                [c01 * yr * xs, c11 * yr * ys / gm * (1.0 + xr * xs / 3.0)],
            ];
            let kg = [
                [yr * ys / gm * (1.0 + xr * xs / 3.0), yr * xs],
                [xr * ys, gm * xr * xs * (1.0 + yr * ys / 3.0)],
            ];
            put_block(
                &mut k,
                r,
                s,
                [
                    [pe * ke[0][0] + pg * kg[0][0], pe * ke[0][1] + pg * kg[0][1]],
                    [pe * ke[1][0] + pg * kg[1][0], pe * ke[1][1] + pg * kg[1][1]],
                ],
            );
        }
    }
    k
}

/// Per-layer incompatible stiffness for a stack of isotropic layers.
///
/// Each entry of `layers` is one layer's `(geometry, material)`; the result
/// holds one element matrix per layer index. The normal block uses the
/// bracket `(1 - mu) + (1 - mu - mu^2 - mu^3)/3 · eta_r eta_s`, which is what
/// integrating the coupled strain field produces.
pub fn incompatible_stiffness_iso_layered(
    layers: &[(ElementGeometry, IsotropicMaterial)],
) -> Vec<ElementMatrix> {
    layers
        .iter()
        .map(|(g, m)| {
            let gamma = g.gamma();
            let mu = m.poisson_ratio();
            let e_pref = m.youngs_modulus() * g.depth() / (4.0 * (1.0 + mu) * (1.0 - 2.0 * mu));
            let g_pref = m.shear_modulus() * g.depth() / 4.0;
            let corr = (1.0 - mu - mu.powi(2) - mu.powi(3)) / 3.0;
            ElementMatrix::from_fn(|i, j| {
                let (r, s) = (i / 2, j / 2);
                let (xr, yr) = CORNERS[r];
                let (xs, ys) = CORNERS[s];
                let (ke, kg) = match (i % 2, j % 2) {
                    (0, 0) => (
                        gamma * xr * xs * ((1.0 - mu) + corr * yr * ys),
                        yr * ys / gamma,
                    ),
                    (0, 1) => (mu * xr * ys, yr * xs),
                    (1, 0) => (mu * yr * xs, xr * ys),
                    _ => (
                        yr * ys / gamma * ((1.0 - mu) + corr * xr * xs),
                        gamma * xr * xs,
                    ),
                };
                e_pref * ke + g_pref * kg
            })
        })
        .collect()
}

/// Stiffness for one element of `kind` made of `mat`.
///
/// Transversely isotropic layers only support the conforming element.
pub fn element_stiffness(
    kind: ElementKind,
    g: &ElementGeometry,
    mat: &LayerMaterial,
) -> Result<ElementMatrix> {
    match (kind, mat) {
        (ElementKind::Conforming, LayerMaterial::Isotropic(m)) => Ok(conforming_stiffness_iso(g, m)),
        (ElementKind::Conforming, LayerMaterial::Transverse(m)) => Ok(conforming_stiffness_ti(g, m)),
        (ElementKind::Incompatible, LayerMaterial::Isotropic(m)) => {
            Ok(incompatible_stiffness_iso(g, m))
        }
        (ElementKind::Incompatible, LayerMaterial::Transverse(_)) => Err(Error::UnsupportedLayerModel {
            layer: 0,
            reason: "incompatible elements require an isotropic material".into(),
        }),
    }
}

/// Full 3×8 strain operator `(eps_xx, eps_yy, gamma_xy)` at `(xi, eta)`.
///
/// `mu` is the Poisson ratio carried by the incompatible modes; it is
/// ignored for conforming elements.
pub fn strain_operator(
    kind: ElementKind,
    g: &ElementGeometry,
    mu: f64,
    xi: f64,
    eta: f64,
) -> StrainOperator {
    let (a, b) = (g.a, g.b);
    let mut op = StrainOperator::zeros();
    for (q, &(xq, yq)) in CORNERS.iter().enumerate() {
        let (cx, cy) = (2 * q, 2 * q + 1);
        // b_a and a_a, halved
        op[(0, cx)] = 0.5 * xq * (1.0 + yq * eta) / a;
        op[(1, cy)] = 0.5 * yq * (1.0 + xq * xi) / b;
        match kind {
            ElementKind::Conforming => {
                op[(2, cx)] = 0.5 * yq * (1.0 + xq * xi) / b;
                op[(2, cy)] = 0.5 * xq * (1.0 + yq * eta) / a;
            }
            ElementKind::Incompatible => {
                // c_a and e_a couplings, halved
                op[(0, cy)] = -0.5 * mu * xq * yq * xi / b;
                op[(1, cx)] = -0.5 * mu * xq * yq * eta / a;
                op[(2, cx)] = 0.5 * yq / b;
                op[(2, cy)] = 0.5 * xq / a;
            }
        }
    }
    op
}

/// Normal-strain rows of [`strain_operator`], as used for stress recovery.
pub fn strain_displacement(
    kind: ElementKind,
    g: &ElementGeometry,
    mu: f64,
    xi: f64,
    eta: f64,
) -> NormalStrainOperator {
    strain_operator(kind, g, mu, xi, eta).fixed_rows::<2>(0).into_owned()
}

/// Gauss–Legendre points and weights on [-1, 1].
pub fn gauss_legendre(order: usize) -> Result<&'static [(f64, f64)]> {
    const G1: [(f64, f64); 1] = [(0.0, 2.0)];
    const G2: [(f64, f64); 2] = [(-0.577_350_269_189_625_8, 1.0), (0.577_350_269_189_625_8, 1.0)];
    const G3: [(f64, f64); 3] = [
        (-0.774_596_669_241_483_4, 0.555_555_555_555_555_6),
        (0.0, 0.888_888_888_888_888_9),
        (0.774_596_669_241_483_4, 0.555_555_555_555_555_6),
    ];
    const G4: [(f64, f64); 4] = [
        (-0.861_136_311_594_052_6, 0.347_854_845_137_453_9),
        (-0.339_981_043_584_856_3, 0.652_145_154_862_546_1),
        (0.339_981_043_584_856_3, 0.652_145_154_862_546_1),
        (0.861_136_311_594_052_6, 0.347_854_845_137_453_9),
    ];
    const G5: [(f64, f64); 5] = [
        (-0.906_179_845_938_664, 0.236_926_885_056_189_1),
        (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
        (0.0, 0.568_888_888_888_888_9),
        (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
        (0.906_179_845_938_664, 0.236_926_885_056_189_1),
    ];
    const G6: [(f64, f64); 6] = [
        (-0.932_469_514_203_152, 0.171_324_492_379_170_3),
        (-0.661_209_386_466_264_5, 0.360_761_573_048_138_6),
        (-0.238_619_186_083_196_9, 0.467_913_934_572_691),
        (0.238_619_186_083_196_9, 0.467_913_934_572_691),
        (0.661_209_386_466_264_5, 0.360_761_573_048_138_6),
        (0.932_469_514_203_152, 0.171_324_492_379_170_3),
    ];
    match order {
        1 => Ok(&G1),
        2 => Ok(&G2),
        3 => Ok(&G3),
        4 => Ok(&G4),
        5 => Ok(&G5),
        6 => Ok(&G6),
        n => Err(Error::QuadratureOrder(n)),
    }
}

/// Numerical integration of `B^T chi B` over the element with a tensor
/// Gauss rule. Exact for conforming elements from order 2, incompatible from
/// order 2 as well (integrands are at most quadratic per direction).
pub fn quadrature_stiffness(
    kind: ElementKind,
    g: &ElementGeometry,
    chi: &Matrix3<f64>,
    mu: f64,
    order: usize,
) -> Result<ElementMatrix> {
    let rule = gauss_legendre(order)?;
    let jac = 0.25 * g.a * g.b * g.h;
    let mut k = ElementMatrix::zeros();
    for &(xi, wx) in rule {
        for &(eta, wy) in rule {
            let op = strain_operator(kind, g, mu, xi, eta);
            k += op.transpose() * chi * op * (wx * wy * jac);
        }
    }
    symmetrize(&mut k);
    Ok(k)
}

/// Quadrature oracle driven directly by a layer material.
pub fn quadrature_stiffness_for(
    kind: ElementKind,
    g: &ElementGeometry,
    mat: &LayerMaterial,
    order: usize,
) -> Result<ElementMatrix> {
    let chi = match mat {
        LayerMaterial::Isotropic(m) => plane_strain_matrix(m),
        LayerMaterial::Transverse(m) => {
            let mut c = Matrix3::zeros();
            c.fixed_view_mut::<2, 2>(0, 0).copy_from(&stress_recovery_matrix_ti(m));
            c[(2, 2)] = m.g2();
            c
        }
    };
    quadrature_stiffness(kind, g, &chi, mat.in_plane_poisson(), order)
}

/// Relative Frobenius distance `|a - b| / max(|a|, |b|)`.
pub fn relative_frobenius(a: &ElementMatrix, b: &ElementMatrix) -> f64 {
    let scale = a.norm().max(b.norm());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).norm() / scale
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::SVector;
    use proptest::prelude::*;

    fn unit() -> ElementGeometry {
        ElementGeometry::new(1.0, 1.0, 1.0).unwrap()
    }

    fn rigid_modes(g: &ElementGeometry) -> [SVector<f64, 8>; 3] {
        let mut tx = SVector::<f64, 8>::zeros();
        let mut ty = SVector::<f64, 8>::zeros();
        let mut rot = SVector::<f64, 8>::zeros();
        for (q, &(x, y)) in CORNERS.iter().enumerate() {
            tx[2 * q] = 1.0;
            ty[2 * q + 1] = 1.0;
            rot[2 * q] = -y * g.height() / 2.0;
            rot[2 * q + 1] = x * g.width() / 2.0;
        }
        [tx, ty, rot]
    }

    #[test]
    fn unit_square_conforming_corner_entry() {
        let m = IsotropicMaterial::new(1.0, 0.0).unwrap();
        let k = conforming_stiffness_iso(&unit(), &m);
        assert!((k[(0, 0)] - 0.5).abs() < 1e-15);
        assert_eq!(k, k.transpose());
    }

    #[test]
    fn unit_square_incompatible_shear_block() {
        // mu = 0: G = 1/2, shear contribution to (0,0) is G/4 with no 1/3 term
        let m = IsotropicMaterial::new(1.0, 0.0).unwrap();
        let k = incompatible_stiffness_iso(&unit(), &m);
        let k_normal_only = 0.25 * (1.0 + 1.0 / 3.0);
        assert!((k[(0, 0)] - (k_normal_only + 0.125)).abs() < 1e-15);
        let q = quadrature_stiffness_for(ElementKind::Incompatible, &unit(), &m.into(), 3).unwrap();
        assert!(relative_frobenius(&k, &q) < 1e-14);
    }

    #[test]
    fn rigid_body_modes_annihilated() {
        let m = IsotropicMaterial::formlabs_clear();
        let g = ElementGeometry::new(1.5, 0.5, 13.0).unwrap();
        let ti = TransverselyIsotropicMaterial::new(31.0, 0.0, 988.4, 0.35, 305.9).unwrap();
        for k in [
            conforming_stiffness_iso(&g, &m),
            incompatible_stiffness_iso(&g, &m),
            conforming_stiffness_ti(&g, &ti),
        ] {
            for v in rigid_modes(&g) {
                assert!((k * v).norm() < 1e-10 * k.norm());
            }
        }
    }

    #[test]
    fn conforming_nullity_three() {
        let m = IsotropicMaterial::formlabs_clear();
        let g = ElementGeometry::new(1.0, 2.0, 13.0).unwrap();
        let eig = conforming_stiffness_iso(&g, &m).symmetric_eigenvalues();
        let max = eig.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
        let zeros = eig.iter().filter(|&&l| l.abs() < 1e-10 * max).count();
        assert_eq!(zeros, 3);
        assert!(eig.iter().all(|&l| l > -1e-10 * max));
    }

    #[test]
    fn incompatible_softer_in_bending() {
        // pure bending mode: v_x = xi * eta
        let m = IsotropicMaterial::new(1.0, 0.3).unwrap();
        let g = ElementGeometry::new(4.0, 1.0, 1.0).unwrap();
        let mut v = SVector::<f64, 8>::zeros();
        for (q, &(x, y)) in CORNERS.iter().enumerate() {
            v[2 * q] = x * y;
        }
        let ec = (v.transpose() * conforming_stiffness_iso(&g, &m) * v)[0];
        let ei = (v.transpose() * incompatible_stiffness_iso(&g, &m) * v)[0];
        assert!(ei < ec);
    }

    #[test]
    fn layered_matches_single_layer() {
        let layers = [
            (ElementGeometry::new(1.5, 0.5, 13.0).unwrap(), IsotropicMaterial::formlabs_clear()),
            (ElementGeometry::new(1.5, 1.0, 13.0).unwrap(), IsotropicMaterial::new(900.0, 0.2).unwrap()),
        ];
        let ks = incompatible_stiffness_iso_layered(&layers);
        for ((g, m), k) in layers.iter().zip(&ks) {
            assert!(relative_frobenius(k, &incompatible_stiffness_iso(g, m)) < 1e-15);
        }
    }

    #[test]
    fn mu_zero_incompatible_reduced_bracket() {
        let m = IsotropicMaterial::new(3.0, 0.0).unwrap();
        let g = ElementGeometry::new(2.0, 1.0, 1.0).unwrap();
        let k = incompatible_stiffness_iso(&g, &m);
        // (0,0): E h/4 · gamma (1 + 1/3) + G h/4 / gamma
        let expect = 0.75 * 0.5 * (4.0 / 3.0) + 1.5 / 4.0 / 0.5;
        assert!((k[(0, 0)] - expect).abs() < 1e-14);
    }

    #[test]
    fn strain_operator_corner_entries() {
        let g = ElementGeometry::new(2.0, 0.5, 1.0).unwrap();
        // d psi_1 / dx at corner 2 (xi=1, eta=-1): xi_1 (1 + eta_1 eta)/(2a) = -1·2/4
        let b = strain_displacement(ElementKind::Conforming, &g, 0.0, 1.0, -1.0);
        assert!((b[(0, 0)] + 0.5).abs() < 1e-15);
        // d psi_1 / dy at corner 2: eta_1 (1 + xi_1 xi)/(2b) = 0
        assert_eq!(b[(1, 1)], 0.0);
        // d psi_4 / dy at corner 1 (xi=-1, eta=-1): eta_4 (1 + xi_4 xi)/(2b) = 2/1
        let b = strain_displacement(ElementKind::Conforming, &g, 0.0, -1.0, -1.0);
        assert!((b[(1, 7)] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn stretch_gives_constant_strain() {
        let g = ElementGeometry::new(1.5, 0.7, 1.0).unwrap();
        let eps = 1e-3;
        let mut v = SVector::<f64, 8>::zeros();
        for (q, &(x, _)) in CORNERS.iter().enumerate() {
            v[2 * q] = eps * x * g.width() / 2.0;
        }
        for &(xi, eta) in &[(-1.0, -1.0), (0.3, -0.7), (1.0, 1.0)] {
            let e = strain_displacement(ElementKind::Conforming, &g, 0.3, xi, eta) * v;
            assert!((e[0] - eps).abs() < 1e-15);
            assert!(e[1].abs() < 1e-18);
        }
    }

    #[test]
    fn incompatible_coupling_vanishes_for_mu_zero() {
        let g = ElementGeometry::new(1.5, 0.7, 1.0).unwrap();
        let a = strain_displacement(ElementKind::Incompatible, &g, 0.0, 0.4, -0.2);
        let c = strain_displacement(ElementKind::Conforming, &g, 0.0, 0.4, -0.2);
        assert_eq!(a, c);
    }

    #[test]
    fn quadrature_order_errors() {
        let m: LayerMaterial = IsotropicMaterial::formlabs_clear().into();
        assert!(quadrature_stiffness_for(ElementKind::Conforming, &unit(), &m, 0).is_err());
        assert!(quadrature_stiffness_for(ElementKind::Conforming, &unit(), &m, 7).is_err());
        let a = quadrature_stiffness_for(ElementKind::Conforming, &unit(), &m, 2).unwrap();
        let b = quadrature_stiffness_for(ElementKind::Conforming, &unit(), &m, 5).unwrap();
        assert!(relative_frobenius(&a, &b) < 1e-14);
    }

    #[test]
    fn incompatible_transverse_rejected() {
        let ti: LayerMaterial = TransverselyIsotropicMaterial::new(31.0, 0.0, 988.4, 0.35, 305.9)
            .unwrap()
            .into();
        assert!(element_stiffness(ElementKind::Incompatible, &unit(), &ti).is_err());
    }

    #[test]
    fn invalid_geometry() {
        assert!(ElementGeometry::new(0.0, 1.0, 1.0).is_err());
        assert!(ElementGeometry::new(1.0, -1.0, 1.0).is_err());
        assert!(ElementGeometry::new(1.0, 1.0, f64::NAN).is_err());
    }

    proptest! {
        #[test]
        fn analytic_matches_quadrature(
            gamma in 0.2f64..5.0, mu in 0.0f64..0.45, e in 1.0f64..1e4, h in 0.1f64..20.0,
            n1 in 0.01f64..3.0, m1 in 0.05f64..1.0, mu1 in 0.0f64..0.4, mu2 in 0.0f64..0.4,
        ) {
            let g = ElementGeometry::new(1.0, gamma, h).unwrap();
            let iso = IsotropicMaterial::new(e, mu).unwrap();
            let k = conforming_stiffness_iso(&g, &iso);
            let q = quadrature_stiffness_for(ElementKind::Conforming, &g, &iso.into(), 3).unwrap();
            prop_assert!(relative_frobenius(&k, &q) < 1e-12);
            let k = incompatible_stiffness_iso(&g, &iso);
            let q = quadrature_stiffness_for(ElementKind::Incompatible, &g, &iso.into(), 3).unwrap();
            prop_assert!(relative_frobenius(&k, &q) < 1e-12);
            if let Ok(ti) = TransverselyIsotropicMaterial::new(n1 * e, mu1, e, mu2, m1 * e) {
                let k = conforming_stiffness_ti(&g, &ti);
                let q = quadrature_stiffness_for(ElementKind::Conforming, &g, &ti.into(), 3).unwrap();
                prop_assert!(relative_frobenius(&k, &q) < 1e-12);
            }
        }

        #[test]
        fn ti_isotropic_degeneration(gamma in 0.2f64..5.0, mu in 0.0f64..0.45) {
            let g = ElementGeometry::new(1.3, 1.3 * gamma, 2.0).unwrap();
            let iso = IsotropicMaterial::new(2800.0, mu).unwrap();
            let ti = TransverselyIsotropicMaterial::from_isotropic(&iso);
            let d = relative_frobenius(&conforming_stiffness_ti(&g, &ti), &conforming_stiffness_iso(&g, &iso));
            prop_assert!(d < 1e-12);
        }

        #[test]
        fn linear_in_depth(gamma in 0.2f64..5.0, mu in 0.0f64..0.45) {
            let g = ElementGeometry::new(1.0, gamma, 1.0).unwrap();
            let g2 = g.with_depth(2.0).unwrap();
            let ti = TransverselyIsotropicMaterial::new(40.0, 0.0, 900.0, mu, 300.0).unwrap();
            let d = relative_frobenius(&(conforming_stiffness_ti(&g, &ti) * 2.0), &conforming_stiffness_ti(&g2, &ti));
            prop_assert!(d < 1e-15);
        }
    }
}
