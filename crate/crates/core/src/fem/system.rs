//! Global assembly, constraint elimination, solution and stress recovery.

use std::io::Write;

use nalgebra::{Matrix2, SVector, Vector2};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fem::band::SymBand;
use crate::fem::element::{element_stiffness, strain_displacement, strain_operator, ElementKind, CORNERS};
use crate::fem::mesh::{LayerTag, Mesh};
use crate::materials::{von_mises_plane, LayerMaterial};

/// Residual bound `|K u - P| <= RESIDUAL_TOL |P|` checked after every solve.
pub const RESIDUAL_TOL: f64 = 1e-8;

/// Material and element formulation for one band of a mesh.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayerModel {
    pub material: LayerMaterial,
    pub kind: ElementKind,
}

impl LayerModel {
    pub fn new(material: impl Into<LayerMaterial>, kind: ElementKind) -> Self {
        Self {
            material: material.into(),
            kind,
        }
    }
}

fn check_models(mesh: &Mesh, models: &[LayerModel]) -> Result<()> {
    if models.len() < mesh.bands().len() {
        return Err(Error::MissingLayerMaterial {
            layer: models.len(),
        });
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct GlobalSystem {
    stiffness: SymBand,
    load: Vec<f64>,
}

/// Sum of expanded element matrices: node `n` of element `e` with local
/// number `q` receives block `(q, q')` of the element matrix.
pub fn assemble(mesh: &Mesh, models: &[LayerModel]) -> Result<GlobalSystem> {
    check_models(mesh, models)?;
    let elems = mesh.elements();
    let local: Vec<_> = elems
        .par_iter()
        .map(|e| {
            let m = &models[e.layer];
            let g = mesh.element_geometry(e)?;
            element_stiffness(m.kind, &g, &m.material).map_err(|err| match err {
                Error::UnsupportedLayerModel { reason, .. } => Error::UnsupportedLayerModel {
                    layer: e.layer,
                    reason,
                },
                other => other,
            })
        })
        .collect::<Result<_>>()?;
    let n = mesh.dof_count();
    let mut k = SymBand::zeros(n, mesh.half_bandwidth());
    // serial scatter keeps the summation order fixed
    for (e, ke) in elems.iter().zip(&local) {
        for (r, &nr) in e.nodes.iter().enumerate() {
            for (s, &ns) in e.nodes.iter().enumerate() {
                for i in 0..2 {
                    for j in 0..2 {
                        let (gi, gj) = (2 * nr + i, 2 * ns + j);
                        if gi >= gj {
                            k.add(gi, gj, ke[(2 * r + i, 2 * s + j)]);
                        }
                    }
                }
            }
        }
    }
    Ok(GlobalSystem {
        stiffness: k,
        load: vec![0.0; n],
    })
}

impl GlobalSystem {
    pub fn dof_count(&self) -> usize {
        self.stiffness.size()
    }

    pub fn stiffness(&self) -> &SymBand {
        &self.stiffness
    }

    pub fn load(&self) -> &[f64] {
        &self.load
    }

    pub fn set_load(&mut self, p: Vec<f64>) -> Result<()> {
        if p.len() != self.dof_count() {
            return Err(Error::DimensionMismatch {
                expected: self.dof_count(),
                found: p.len(),
            });
        }
        self.load = p;
        Ok(())
    }

    /// Removes both DOFs of every node in `fixed_nodes`.
    pub fn apply_constraints(&self, fixed_nodes: &[usize]) -> Result<ReducedSystem> {
        let dofs: Vec<(usize, f64)> = fixed_nodes
            .iter()
            .flat_map(|&n| [(2 * n, 0.0), (2 * n + 1, 0.0)])
            .collect();
        self.apply_prescribed(&dofs)
    }

    /// Eliminates DOFs with prescribed values `(dof, value)`; nonzero values
    /// move to the right-hand side as `P_f - K_fp u_p`.
    pub fn apply_prescribed(&self, prescribed: &[(usize, f64)]) -> Result<ReducedSystem> {
        let n = self.dof_count();
        let mut fixed = vec![false; n];
        let mut base = vec![0.0; n];
        for &(d, v) in prescribed {
            if d >= n {
                return Err(Error::InvalidMesh(format!("constrained DOF {d} does not exist")));
            }
            fixed[d] = true;
            base[d] = v;
        }
        let free: Vec<usize> = (0..n).filter(|&d| !fixed[d]).collect();
        if free.is_empty() {
            return Err(Error::EmptySystem);
        }
        let carried = if base.iter().any(|&v| v != 0.0) {
            Some(self.stiffness.mul_vec(&base))
        } else {
            None
        };
        let load = free
            .iter()
            .map(|&d| self.load[d] - carried.as_ref().map_or(0.0, |c| c[d]))
            .collect();
        Ok(ReducedSystem {
            stiffness: self.stiffness.restrict(&free),
            load,
            free,
            base,
        })
    }

    /// Writes `K` and `P` in coordinate (matrix-market style) text form.
    pub fn dump<W: Write>(&self, out: &mut W) -> std::io::Result<()> {
        let n = self.dof_count();
        let k = &self.stiffness;
        let mut entries = Vec::new();
        for i in 0..n {
            for j in i.saturating_sub(k.bandwidth())..=i {
                let v = k.get(i, j);
                if v != 0.0 {
                    entries.push((i, j, v));
                }
            }
        }
        writeln!(out, "%%MatrixMarket matrix coordinate real symmetric")?;
        writeln!(out, "{n} {n} {}", entries.len())?;
        for (i, j, v) in entries {
            writeln!(out, "{} {} {:e}", i + 1, j + 1, v)?;
        }
        writeln!(out, "%%MatrixMarket matrix array real general")?;
        writeln!(out, "{n} 1")?;
        for v in &self.load {
            writeln!(out, "{v:e}")?;
        }
        Ok(())
    }
}

/// System left after eliminating constrained DOFs, with the index map back
/// to the full numbering.
#[derive(Debug, Clone)]
pub struct ReducedSystem {
    stiffness: SymBand,
    load: Vec<f64>,
    free: Vec<usize>,
    /// full vector holding the prescribed values
    base: Vec<f64>,
}

/// Full displacement vector plus solve diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub displacements: Vec<f64>,
    /// `|K_a u_a - P_a| / |P_a|` (absolute when `P_a = 0`).
    pub relative_residual: f64,
}

impl ReducedSystem {
    pub fn stiffness(&self) -> &SymBand {
        &self.stiffness
    }
    pub fn load(&self) -> &[f64] {
        &self.load
    }
    /// Full DOF index of each reduced DOF.
    pub fn free_dofs(&self) -> &[usize] {
        &self.free
    }

    /// Scatters reduced values into a full vector holding the prescribed
    /// values (zero for plain constraints) at fixed DOFs.
    pub fn expand(&self, reduced: &[f64]) -> Vec<f64> {
        let mut u = self.base.clone();
        for (&d, &v) in self.free.iter().zip(reduced) {
            u[d] = v;
        }
        u
    }

    pub fn solve(&self) -> Result<Solution> {
        let chol = self.stiffness.cholesky()?;
        let ua = chol.solve(&self.load)?;
        let r = self.stiffness.mul_vec(&ua);
        let res = norm(r.iter().zip(&self.load).map(|(a, b)| a - b));
        let pn = norm(self.load.iter().copied());
        let rel = if pn > 0.0 { res / pn } else { res };
        if rel > RESIDUAL_TOL {
            log::warn!("solve residual {rel:e} exceeds {RESIDUAL_TOL:e}");
        }
        Ok(Solution {
            displacements: self.expand(&ua),
            relative_residual: rel,
        })
    }
}

fn norm(it: impl Iterator<Item = f64>) -> f64 {
    it.map(|v| v * v).sum::<f64>().sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecoveryMode {
    /// Normal strains only, 2×2 recovery matrix, von Mises from the two
    /// normal stresses.
    Normal,
    /// Also evaluates shear strain and stress from the full operator. Not part
    /// of the reference pipeline.
    Diagnostic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CornerStress {
    pub node: usize,
    pub x: f64,
    pub y: f64,
    pub strain: Vector2<f64>,
    pub stress: Vector2<f64>,
    pub von_mises: f64,
    /// `(gamma_xy, tau_xy, von Mises of the principal stresses)` in
    /// diagnostic mode.
    pub shear: Option<(f64, f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ElementStress {
    pub element: usize,
    pub layer: usize,
    pub tag: LayerTag,
    pub corners: [CornerStress; 4],
}

#[derive(Debug, Clone, PartialEq)]
pub struct StressField {
    pub elements: Vec<ElementStress>,
}

impl StressField {
    pub fn max_von_mises(&self) -> f64 {
        self.points().map(|c| c.von_mises).fold(0.0, f64::max)
    }

    /// Maximum von Mises stress in band `layer`.
    pub fn max_in_layer(&self, layer: usize) -> f64 {
        self.elements
            .iter()
            .filter(|e| e.layer == layer)
            .flat_map(|e| e.corners.iter())
            .map(|c| c.von_mises)
            .fold(0.0, f64::max)
    }

    pub fn max_in_tag(&self, tag: LayerTag) -> Option<f64> {
        let mut any = false;
        let m = self
            .elements
            .iter()
            .filter(|e| e.tag == tag)
            .flat_map(|e| {
                any = true;
                e.corners.iter()
            })
            .map(|c| c.von_mises)
            .fold(0.0, f64::max);
        any.then_some(m)
    }

    pub fn points(&self) -> impl Iterator<Item = &CornerStress> {
        self.elements.iter().flat_map(|e| e.corners.iter())
    }
}

/// Strains and stresses at the four corners of every element.
pub fn recover(
    mesh: &Mesh,
    models: &[LayerModel],
    displacements: &[f64],
    mode: RecoveryMode,
) -> Result<StressField> {
    check_models(mesh, models)?;
    if displacements.len() != mesh.dof_count() {
        return Err(Error::DimensionMismatch {
            expected: mesh.dof_count(),
            found: displacements.len(),
        });
    }
    let elements = mesh
        .elements()
        .par_iter()
        .enumerate()
        .map(|(ei, e)| {
            let model = &models[e.layer];
            let g = mesh.element_geometry(e)?;
            let mu = model.material.in_plane_poisson();
            let recovery: Matrix2<f64> = model.material.recovery();
            let chi = model.material.elasticity();
            let mut v = SVector::<f64, 8>::zeros();
            for (q, &n) in e.nodes.iter().enumerate() {
                v[2 * q] = displacements[2 * n];
                v[2 * q + 1] = displacements[2 * n + 1];
            }
            let corners = std::array::from_fn(|q| {
                let (xi, eta) = CORNERS[q];
                let strain = strain_displacement(model.kind, &g, mu, xi, eta) * v;
                let stress = recovery * strain;
                let shear = match mode {
                    RecoveryMode::Normal => None,
                    RecoveryMode::Diagnostic => {
                        let full = strain_operator(model.kind, &g, mu, xi, eta) * v;
                        let s = chi * full;
                        let c = 0.5 * (s[0] + s[1]);
                        let r = (0.25 * (s[0] - s[1]).powi(2) + s[2] * s[2]).sqrt();
                        Some((full[2], s[2], von_mises_plane(c + r, c - r)))
                    }
                };
                let node = e.nodes[q];
                let (x, y) = mesh.node(node);
                CornerStress {
                    node,
                    x,
                    y,
                    strain,
                    stress,
                    von_mises: von_mises_plane(stress[0], stress[1]),
                    shear,
                }
            });
            Ok(ElementStress {
                element: ei,
                layer: e.layer,
                tag: mesh.bands()[e.layer].tag,
                corners,
            })
        })
        .collect::<Result<_>>()?;
    Ok(StressField { elements })
}
