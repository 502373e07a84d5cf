use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

use super::*;
use crate::error::Error;
use crate::materials::{plane_strain_matrix, IsotropicMaterial, TransverselyIsotropicMaterial};

fn iso() -> IsotropicMaterial {
    IsotropicMaterial::formlabs_clear()
}

fn solid(length: f64, columns: usize, thickness: f64, rows: usize) -> Mesh {
    Mesh::layered(length, columns, vec![Band::new(LayerTag::Solid, thickness, rows)], 13.0).unwrap()
}

fn conforming() -> Vec<LayerModel> {
    vec![LayerModel::new(iso(), ElementKind::Conforming)]
}

fn zero_eigs(k: &DMatrix<f64>) -> usize {
    let eig = k.clone().symmetric_eigenvalues();
    let max = eig.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    eig.iter().filter(|&&l| l.abs() < 1e-10 * max).count()
}

#[test]
fn single_element_system_is_element_matrix() {
    let mesh = solid(1.0, 1, 1.0, 1);
    let sys = assemble(&mesh, &conforming()).unwrap();
    let g = ElementGeometry::new(1.0, 1.0, 13.0).unwrap();
    let ke = conforming_stiffness_iso(&g, &iso());
    // corner order (0,0),(1,0),(1,1),(0,1) maps to nodes 0, 2, 3, 1
    let nodes = mesh.elements()[0].nodes;
    let k = sys.stiffness().to_dense();
    for r in 0..4 {
        for s in 0..4 {
            for i in 0..2 {
                for j in 0..2 {
                    assert_eq!(
                        k[(2 * nodes[r] + i, 2 * nodes[s] + j)],
                        ke[(2 * r + i, 2 * s + j)]
                    );
                }
            }
        }
    }
}

#[test]
fn assembly_matches_dense_correspondence_sum() {
    let mesh = Mesh::layered(
        3.0,
        3,
        vec![Band::new(LayerTag::BottomFace, 0.5, 1), Band::new(LayerTag::Core, 1.0, 2)],
        13.0,
    )
    .unwrap();
    let ti = TransverselyIsotropicMaterial::new(31.0, 0.0, 988.4, 0.35, 305.9).unwrap();
    let models = vec![
        LayerModel::new(iso(), ElementKind::Incompatible),
        LayerModel::new(ti, ElementKind::Conforming),
    ];
    let sys = assemble(&mesh, &models).unwrap();
    let a = mesh.correspondence_matrix();
    let n = mesh.dof_count();
    let mut dense = DMatrix::<f64>::zeros(n, n);
    for (e, el) in mesh.elements().iter().enumerate() {
        let m = &models[el.layer];
        let ke = element_stiffness(m.kind, &mesh.element_geometry(el).unwrap(), &m.material).unwrap();
        for mi in 0..mesh.node_count() {
            for ni in 0..mesh.node_count() {
                let (r, s) = (a[e][mi], a[e][ni]);
                if r == 0 || s == 0 {
                    continue;
                }
                let (r, s) = (r as usize - 1, s as usize - 1);
                for i in 0..2 {
                    for j in 0..2 {
                        dense[(2 * mi + i, 2 * ni + j)] += ke[(2 * r + i, 2 * s + j)];
                    }
                }
            }
        }
    }
    let k = sys.stiffness().to_dense();
    assert!((&k - &dense).norm() <= 1e-12 * dense.norm());
    assert_eq!(k, k.transpose());
}

#[test]
fn unconstrained_conforming_has_three_rigid_modes() {
    let mesh = solid(4.0, 4, 2.0, 2);
    let k = assemble(&mesh, &conforming()).unwrap().stiffness().to_dense();
    assert_eq!(zero_eigs(&k), 3);
    let tx = DVector::from_fn(mesh.dof_count(), |d, _| if d % 2 == 0 { 1.0 } else { 0.0 });
    assert!((&k * tx).norm() < 1e-9 * k.norm());
}

#[test]
fn fixing_every_node_is_an_error() {
    let mesh = solid(1.0, 1, 1.0, 1);
    let sys = assemble(&mesh, &conforming()).unwrap();
    let all: Vec<usize> = (0..mesh.node_count()).collect();
    assert_eq!(sys.apply_constraints(&all).unwrap_err(), Error::EmptySystem);
}

#[test]
fn constraint_counts() {
    let mesh = solid(1.0, 1, 1.0, 1);
    let sys = assemble(&mesh, &conforming()).unwrap();
    // one node pinned leaves the rotation
    let red = sys.apply_constraints(&[0]).unwrap();
    assert_eq!(red.solve().unwrap_err(), Error::Singular { zero_modes: 1 });
    assert_eq!(zero_eigs(&red.stiffness().to_dense()), 1);
    // two nodes: positive definite
    let red = sys.apply_constraints(&[0, 2]).unwrap();
    let eig = red.stiffness().to_dense().symmetric_eigenvalues();
    assert!(eig.iter().all(|&l| l > 0.0));
    assert_eq!(red.free_dofs(), &[2, 3, 6, 7]);
    let u = red.expand(&[1.0, 2.0, 3.0, 4.0]);
    assert_eq!(u, vec![0.0, 0.0, 1.0, 2.0, 0.0, 0.0, 3.0, 4.0]);
}

#[test]
fn single_element_matches_dense_inverse() {
    let mesh = solid(1.0, 1, 1.0, 1);
    let mut sys = assemble(&mesh, &conforming()).unwrap();
    let top = mesh.node_at_indices(1, 1);
    let mut p = vec![0.0; 8];
    p[2 * top + 1] = -1.0;
    sys.set_load(p).unwrap();
    let bottom = [mesh.node_at_indices(0, 0), mesh.node_at_indices(1, 0)];
    let red = sys.apply_constraints(&bottom).unwrap();
    let sol = red.solve().unwrap();
    let k = red.stiffness().to_dense();
    let ua = k.try_inverse().unwrap() * DVector::from_column_slice(red.load());
    for (&d, v) in red.free_dofs().iter().zip(ua.iter()) {
        assert!((sol.displacements[d] - v).abs() < 1e-12 * v.abs().max(1e-12));
    }
    assert!(sol.relative_residual < RESIDUAL_TOL);
}

#[test]
fn zero_load_zero_response() {
    let mesh = solid(4.0, 4, 1.0, 1);
    let sys = assemble(&mesh, &conforming()).unwrap();
    let fixed = mesh.nodes_on_vertical(0.0, 1e-9).unwrap();
    let sol = sys.apply_constraints(&fixed).unwrap().solve().unwrap();
    assert!(sol.displacements.iter().all(|&v| v == 0.0));
    let field = recover(&mesh, &conforming(), &sol.displacements, RecoveryMode::Normal).unwrap();
    assert_eq!(field.max_von_mises(), 0.0);
}

#[test]
fn uniform_stretch_patch_stress() {
    let mesh = solid(3.0, 3, 2.0, 2);
    let eps = 1e-3;
    let mut u = vec![0.0; mesh.dof_count()];
    for n in 0..mesh.node_count() {
        u[2 * n] = eps * mesh.node(n).0;
    }
    let chi = plane_strain_matrix(&iso());
    for mode in [RecoveryMode::Normal, RecoveryMode::Diagnostic] {
        let f = recover(&mesh, &conforming(), &u, mode).unwrap();
        for c in f.points() {
            assert!((c.stress[0] - chi[(0, 0)] * eps).abs() < 1e-12);
            assert!((c.stress[1] - chi[(0, 1)] * eps).abs() < 1e-12);
            if let Some((g, t, _)) = c.shear {
                assert!(g.abs() < 1e-15 && t.abs() < 1e-12);
            }
        }
    }
}

#[test]
fn patch_test_constant_strain() {
    let mesh = solid(6.0, 6, 4.0, 4);
    let models = conforming();
    let sys = assemble(&mesh, &models).unwrap();
    let (exx, eyy, gxy) = (1e-3, -4e-4, 6e-4);
    let field = |x: f64, y: f64| (exx * x + 0.5 * gxy * y, eyy * y + 0.5 * gxy * x);
    let mut prescribed = Vec::new();
    for n in 0..mesh.node_count() {
        let (x, y) = mesh.node(n);
        let edge = x == 0.0 || y == 0.0 || (x - 6.0).abs() < 1e-12 || (y - 4.0).abs() < 1e-12;
        if edge {
            let (ux, uy) = field(x, y);
            prescribed.push((2 * n, ux));
            prescribed.push((2 * n + 1, uy));
        }
    }
    let sol = sys.apply_prescribed(&prescribed).unwrap().solve().unwrap();
    for n in 0..mesh.node_count() {
        let (x, y) = mesh.node(n);
        let (ux, uy) = field(x, y);
        assert!((sol.displacements[2 * n] - ux).abs() < 1e-12);
        assert!((sol.displacements[2 * n + 1] - uy).abs() < 1e-12);
    }
    let f = recover(&mesh, &models, &sol.displacements, RecoveryMode::Diagnostic).unwrap();
    for c in f.points() {
        assert!((c.strain[0] - exx).abs() <= 1e-9 * exx.abs());
        assert!((c.strain[1] - eyy).abs() <= 1e-9 * eyy.abs());
        assert!((c.shear.unwrap().0 - gxy).abs() <= 1e-9 * gxy);
    }
}

#[test]
fn missing_layer_material() {
    let mesh = Mesh::layered(
        2.0,
        2,
        vec![Band::new(LayerTag::BottomFace, 0.5, 1), Band::new(LayerTag::Core, 1.0, 1)],
        13.0,
    )
    .unwrap();
    assert_eq!(
        assemble(&mesh, &conforming()).unwrap_err(),
        Error::MissingLayerMaterial { layer: 1 }
    );
}

#[test]
fn incompatible_core_rejected_with_layer_index() {
    let mesh = Mesh::layered(
        2.0,
        2,
        vec![Band::new(LayerTag::BottomFace, 0.5, 1), Band::new(LayerTag::Core, 1.0, 1)],
        13.0,
    )
    .unwrap();
    let ti = TransverselyIsotropicMaterial::new(31.0, 0.0, 988.4, 0.35, 305.9).unwrap();
    let models = vec![
        LayerModel::new(iso(), ElementKind::Incompatible),
        LayerModel::new(ti, ElementKind::Incompatible),
    ];
    assert!(matches!(
        assemble(&mesh, &models),
        Err(Error::UnsupportedLayerModel { layer: 1, .. })
    ));
}

#[test]
fn dump_format() {
    let mesh = solid(1.0, 1, 1.0, 1);
    let sys = assemble(&mesh, &conforming()).unwrap();
    let mut buf = Vec::new();
    sys.dump(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("%%MatrixMarket matrix coordinate real symmetric"));
    assert!(lines.next().unwrap().starts_with("8 8 "));
}

fn cantilever(kind: ElementKind, p1: f64, p2: f64) -> (Vec<f64>, StressField) {
    let mesh = solid(8.0, 8, 1.0, 2);
    let models = vec![LayerModel::new(iso(), kind)];
    let mut sys = assemble(&mesh, &models).unwrap();
    let mut p = vec![0.0; mesh.dof_count()];
    p[2 * mesh.node_at_indices(8, 2) + 1] = p1;
    p[2 * mesh.node_at_indices(4, 2)] = p2;
    sys.set_load(p).unwrap();
    let fixed = mesh.nodes_on_vertical(0.0, 1e-9).unwrap();
    let u = sys.apply_constraints(&fixed).unwrap().solve().unwrap().displacements;
    let f = recover(&mesh, &models, &u, RecoveryMode::Diagnostic).unwrap();
    (u, f)
}

#[test]
fn incompatible_softer_cantilever() {
    let (uc, _) = cantilever(ElementKind::Conforming, -1.0, 0.0);
    let (ui, _) = cantilever(ElementKind::Incompatible, -1.0, 0.0);
    let tip = |u: &[f64]| u[2 * (8 * 3 + 2) + 1];
    assert!(tip(&ui).abs() > tip(&uc).abs());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn superposition_and_linearity(p1 in -50.0f64..50.0, p2 in -50.0f64..50.0, inc in any::<bool>()) {
        let kind = if inc { ElementKind::Incompatible } else { ElementKind::Conforming };
        let (u1, f1) = cantilever(kind, p1, 0.0);
        let (u2, f2) = cantilever(kind, 0.0, p2);
        let (u12, f12) = cantilever(kind, p1, p2);
        let scale = u12.iter().fold(0.0f64, |a, b| a.max(b.abs())).max(1e-30);
        for i in 0..u12.len() {
            prop_assert!((u12[i] - u1[i] - u2[i]).abs() <= 1e-9 * scale);
        }
        let smax = f12.max_von_mises().max(1e-30);
        for ((a, b), c) in f1.points().zip(f2.points()).zip(f12.points()) {
            prop_assert!(c.von_mises >= 0.0);
            for k in 0..2 {
                prop_assert!((c.stress[k] - a.stress[k] - b.stress[k]).abs() <= 1e-9 * smax);
            }
        }
        let (u2x, _) = cantilever(kind, 2.0 * p1, 2.0 * p2);
        for i in 0..u12.len() {
            prop_assert!((u2x[i] - 2.0 * u12[i]).abs() <= 1e-9 * scale);
        }
    }
}
