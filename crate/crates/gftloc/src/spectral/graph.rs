//! 4-connected grid graph over an image patch and its Laplacian.
//!
//! Pixels are nodes (row-major index `r * width + c`); each pixel is
//! joined to its immediate horizontal and vertical neighbours with unit
//! edge weight. The Laplacian L = D - A is real, symmetric and positive
//! semi-definite, with a single zero eigenvalue (the grid is connected).

use ndarray::Array2;

use crate::error::{Error, Result};

/// Unit-weight 4-connected grid graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridGraph {
    height: usize,
    width: usize,
    edges: Vec<(u32, u32)>,
}

impl GridGraph {
    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn node_count(&self) -> usize {
        self.height * self.width
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as ordered pairs (i < j) of row-major node indices.
    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    /// Node degrees; every grid node has degree 2, 3 or 4 (degree 1 only
    /// on degenerate 1-row / 1-column grids).
    pub fn degrees(&self) -> Vec<u32> {
        let mut deg = vec![0u32; self.node_count()];
        for &(i, j) in &self.edges {
            deg[i as usize] += 1;
            deg[j as usize] += 1;
        }
        deg
    }
}

/// Builds the 4-connected grid graph for a `height` x `width` patch.
///
/// Requires at least two nodes; a dimension of zero is rejected.
pub fn build_grid_graph(height: usize, width: usize) -> Result<GridGraph> {
    if height == 0 || width == 0 {
        return Err(Error::InvalidDimension {
            height,
            width,
            reason: "grid dimensions must be positive",
        });
    }
    if height * width < 2 {
        return Err(Error::InvalidDimension {
            height,
            width,
            reason: "grid must contain at least two nodes",
        });
    }

    let idx = |r: usize, c: usize| (r * width + c) as u32;
    let mut edges = Vec::with_capacity(height * (width - 1) + width * (height - 1));
    for r in 0..height {
        for c in 0..width {
            if c + 1 < width {
                edges.push((idx(r, c), idx(r, c + 1)));
            }
            if r + 1 < height {
                edges.push((idx(r, c), idx(r + 1, c)));
            }
        }
    }
    Ok(GridGraph {
        height,
        width,
        edges,
    })
}

/// Dense Laplacian L = D - A of a grid graph.
///
/// Diagonal holds node degrees, off-diagonal entries are -1 on edges.
/// Row sums are zero and the matrix is symmetric by construction.
pub fn laplacian(g: &GridGraph) -> Array2<f64> {
    let n = g.node_count();
    let mut l = Array2::<f64>::zeros((n, n));
    for &(i, j) in g.edges() {
        let (i, j) = (i as usize, j as usize);
        l[[i, j]] = -1.0;
        l[[j, i]] = -1.0;
        l[[i, i]] += 1.0;
        l[[j, j]] += 1.0;
    }
    l
}

/// Applies the grid Laplacian to a signal without materializing L.
pub fn laplacian_apply(height: usize, width: usize, x: &[f64]) -> Vec<f64> {
    assert_eq!(x.len(), height * width);
    let at = |r: usize, c: usize| x[r * width + c];
    let mut out = vec![0.0; x.len()];
    for r in 0..height {
        for c in 0..width {
            let mut acc = 0.0;
            let mut deg = 0.0;
            if r > 0 {
                acc += at(r - 1, c);
                deg += 1.0;
            }
            if r + 1 < height {
                acc += at(r + 1, c);
                deg += 1.0;
            }
            if c > 0 {
                acc += at(r, c - 1);
                deg += 1.0;
            }
            if c + 1 < width {
                acc += at(r, c + 1);
                deg += 1.0;
            }
            out[r * width + c] = deg * at(r, c) - acc;
        }
    }
    out
}
