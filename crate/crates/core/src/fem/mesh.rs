//! Structured rectangular meshes of layered plate cross-sections.
//!
//! Nodes are numbered column by column (y fastest), which keeps the
//! half-bandwidth of the global stiffness at `2 (rows + 2) + 1`.

use crate::error::{Error, Result};
use crate::fem::element::ElementGeometry;

/// Role of a material band in the plate cross-section.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LayerTag {
    Solid,
    BottomFace,
    Core,
    TopFace,
}

impl LayerTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Solid => "solid",
            Self::BottomFace => "bottom_face",
            Self::Core => "core",
            Self::TopFace => "top_face",
        }
    }
}

impl std::fmt::Display for LayerTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A horizontal material band made of `rows` equal-height element rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Band {
    pub tag: LayerTag,
    pub thickness: f64,
    pub rows: usize,
}

impl Band {
    pub fn new(tag: LayerTag, thickness: f64, rows: usize) -> Self {
        Self { tag, thickness, rows }
    }
    pub fn row_height(&self) -> f64 {
        self.thickness / self.rows as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Element {
    /// Global node ids in corner order (-1,-1), (1,-1), (1,1), (-1,1).
    pub nodes: [usize; 4],
    /// Material band (layer index).
    pub layer: usize,
    pub column: usize,
    pub row: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    xs: Vec<f64>,
    ys: Vec<f64>,
    bands: Vec<Band>,
    /// band index of each element row
    row_band: Vec<usize>,
    elements: Vec<Element>,
    depth: f64,
}

impl Mesh {
    /// Uniform `columns`-element grid over `[0, length]` stacked with `bands`
    /// from `y = 0` upward. `depth` is the out-of-plane thickness.
    pub fn layered(length: f64, columns: usize, bands: Vec<Band>, depth: f64) -> Result<Self> {
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::InvalidMesh(format!("length must be positive, got {length}")));
        }
        if columns == 0 {
            return Err(Error::InvalidMesh("at least one element column is required".into()));
        }
        if bands.is_empty() {
            return Err(Error::InvalidMesh("at least one band is required".into()));
        }
        if !(depth.is_finite() && depth > 0.0) {
            return Err(Error::InvalidMesh(format!("depth must be positive, got {depth}")));
        }
        for (i, b) in bands.iter().enumerate() {
            if b.rows == 0 || !(b.thickness.is_finite() && b.thickness > 0.0) {
                return Err(Error::InvalidMesh(format!(
                    "band {i} needs positive thickness and rows, got {} mm / {} rows",
                    b.thickness, b.rows
                )));
            }
        }
        let a = length / columns as f64;
        let xs: Vec<f64> = (0..=columns).map(|i| i as f64 * a).collect();
        let mut ys = vec![0.0];
        let mut row_band = Vec::new();
        let mut y0 = 0.0;
        for (bi, b) in bands.iter().enumerate() {
            for r in 1..=b.rows {
                // integer steps within a band avoid drift
                ys.push(y0 + b.thickness * r as f64 / b.rows as f64);
                row_band.push(bi);
            }
            y0 += b.thickness;
        }
        let ny = ys.len();
        let node = |i: usize, j: usize| i * ny + j;
        let mut elements = Vec::with_capacity(columns * row_band.len());
        for (j, &layer) in row_band.iter().enumerate() {
            for i in 0..columns {
                elements.push(Element {
                    nodes: [node(i, j), node(i + 1, j), node(i + 1, j + 1), node(i, j + 1)],
                    layer,
                    column: i,
                    row: j,
                });
            }
        }
        Ok(Self {
            xs,
            ys,
            bands,
            row_band,
            elements,
            depth,
        })
    }

    pub fn node_count(&self) -> usize {
        self.xs.len() * self.ys.len()
    }
    pub fn dof_count(&self) -> usize {
        2 * self.node_count()
    }
    pub fn columns(&self) -> usize {
        self.xs.len() - 1
    }
    pub fn rows(&self) -> usize {
        self.ys.len() - 1
    }
    pub fn elements(&self) -> &[Element] {
        &self.elements
    }
    pub fn bands(&self) -> &[Band] {
        &self.bands
    }
    pub fn depth(&self) -> f64 {
        self.depth
    }
    pub fn length(&self) -> f64 {
        *self.xs.last().unwrap()
    }
    pub fn thickness(&self) -> f64 {
        *self.ys.last().unwrap()
    }
    pub fn x_lines(&self) -> &[f64] {
        &self.xs
    }
    pub fn y_lines(&self) -> &[f64] {
        &self.ys
    }

    /// Band index of element row `row`.
    pub fn band_of_row(&self, row: usize) -> usize {
        self.row_band[row]
    }

    /// Coordinates `(x, y)` of node `n`.
    pub fn node(&self, n: usize) -> (f64, f64) {
        let ny = self.ys.len();
        (self.xs[n / ny], self.ys[n % ny])
    }

    pub fn node_at_indices(&self, i: usize, j: usize) -> usize {
        i * self.ys.len() + j
    }

    pub fn element_geometry(&self, e: &Element) -> Result<ElementGeometry> {
        ElementGeometry::new(
            self.xs[e.column + 1] - self.xs[e.column],
            self.ys[e.row + 1] - self.ys[e.row],
            self.depth,
        )
    }

    /// Index of the x-line within `tol` of `x`.
    pub fn x_index(&self, x: f64, tol: f64) -> Option<usize> {
        nearest(&self.xs, x, tol)
    }

    pub fn y_index(&self, y: f64, tol: f64) -> Option<usize> {
        nearest(&self.ys, y, tol)
    }

    /// All nodes on the vertical line through `x`.
    pub fn nodes_on_vertical(&self, x: f64, tol: f64) -> Option<Vec<usize>> {
        let i = self.x_index(x, tol)?;
        Some((0..self.ys.len()).map(|j| self.node_at_indices(i, j)).collect())
    }

    /// Local corner number (1..=4) of global node `node` in element `e`, or 0.
    pub fn local_number(&self, e: usize, node: usize) -> u8 {
        self.elements[e]
            .nodes
            .iter()
            .position(|&n| n == node)
            .map_or(0, |q| q as u8 + 1)
    }

    /// Dense node-correspondence matrix: entry `[e][n]` is the local corner
    /// number of node `n` in element `e`, or 0 when `n` is not a corner of `e`.
    pub fn correspondence_matrix(&self) -> Vec<Vec<u8>> {
        let nn = self.node_count();
        self.elements
            .iter()
            .map(|el| {
                let mut row = vec![0u8; nn];
                for (q, &n) in el.nodes.iter().enumerate() {
                    row[n] = q as u8 + 1;
                }
                row
            })
            .collect()
    }

    /// Largest |row - col| over DOF pairs coupled by an element.
    pub fn half_bandwidth(&self) -> usize {
        self.elements
            .iter()
            .map(|e| {
                let lo = e.nodes.iter().min().unwrap();
                let hi = e.nodes.iter().max().unwrap();
                2 * (hi - lo) + 1
            })
            .max()
            .unwrap_or(0)
    }

    /// Summed area of the elements in band `layer`.
    pub fn band_area(&self, layer: usize) -> f64 {
        self.elements
            .iter()
            .filter(|e| e.layer == layer)
            .map(|e| {
                (self.xs[e.column + 1] - self.xs[e.column]) * (self.ys[e.row + 1] - self.ys[e.row])
            })
            .sum()
    }
}

fn nearest(lines: &[f64], v: f64, tol: f64) -> Option<usize> {
    lines
        .iter()
        .enumerate()
        .map(|(i, &x)| (i, (x - v).abs()))
        .filter(|&(_, d)| d <= tol)
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(i, _)| i)
}
