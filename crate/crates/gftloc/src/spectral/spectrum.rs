//! Laplacian eigenbasis of the grid graph.
//!
//! Two routes produce a [`GridSpectrum`]:
//!
//! * [`eigenbasis_analytic`] — the canonical basis. The grid graph is
//!   the Cartesian product of two path graphs, so every eigenpair is a
//!   closed-form cosine mode: for mode pair (p, q),
//!   `lambda = (2 - 2 cos(pi p / H)) + (2 - 2 cos(pi q / W))` and the
//!   eigenvector is the outer product of the sampled-cosine path modes.
//!   Modes are sorted by (lambda, p, q); that lexicographic tie-break is
//!   the deterministic resolution of the grid's eigenvalue degeneracy
//!   and is what all downstream features are built on.
//! * [`eigendecompose_dense`] — a cyclic Jacobi eigensolver used as an
//!   oracle for small N. O(N^3) per sweep; restricted to N <= 4096,
//!   and already slow well before that bound (use the analytic basis
//!   for anything but verification).
//!
//! Both routes apply the same sign convention: the first entry of each
//! eigenvector whose magnitude exceeds 1e-12 is made positive.
//!
//! # Serialized form
//!
//! `GFTSPEC1` containers are little-endian binary: an 8-byte magic,
//! u32 convention version, u32 height, u32 width, then N records of
//! (u32 p, u32 q, f64 lambda) in canonical order. Only separable
//! (analytic) spectra are serialized; dense spectra are oracle-only.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use ndarray::{Array1, Array2};

use crate::error::{Error, Result};

/// Version tag for the canonical ordering + sign convention. Bump if
/// either ever changes; datasets and checkpoints embed it.
pub const SPECTRUM_CONVENTION: u32 = 1;

const SPECTRUM_MAGIC: &[u8; 8] = b"GFTSPEC1";

/// Largest N accepted by the dense eigensolver.
pub const DENSE_EIGEN_MAX_N: usize = 4096;

const SIGN_EPS: f64 = 1e-12;

/// Eigenvalues and eigenbasis of a grid-graph Laplacian, in canonical
/// order.
#[derive(Debug, Clone)]
pub struct GridSpectrum {
    height: usize,
    width: usize,
    eigenvalues: Vec<f64>,
    basis: Basis,
}

#[derive(Debug, Clone)]
enum Basis {
    /// Closed-form separable basis: eigenvector k is the outer product
    /// of `row_modes` column p and `col_modes` column q, with
    /// (p, q) = `modes[k]`.
    Separable {
        row_modes: Array2<f64>,
        col_modes: Array2<f64>,
        modes: Vec<(u32, u32)>,
    },
    /// Explicit orthonormal eigenvector matrix (columns).
    Dense { vectors: Array2<f64> },
}

impl GridSpectrum {
    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Number of spectral coefficients, N = height * width.
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Eigenvalues in canonical (non-decreasing) order.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn is_separable(&self) -> bool {
        matches!(self.basis, Basis::Separable { .. })
    }

    /// Grid-mode pair (p, q) of spectral index k; `None` for dense
    /// spectra, which carry no mode labels.
    pub fn mode(&self, k: usize) -> Option<(u32, u32)> {
        match &self.basis {
            Basis::Separable { modes, .. } => modes.get(k).copied(),
            Basis::Dense { .. } => None,
        }
    }

    /// Materializes eigenvector k as a row-major signal over the grid.
    pub fn eigenvector(&self, k: usize) -> Result<Vec<f64>> {
        if k >= self.len() {
            return Err(Error::IndexOutOfRange {
                index: k,
                len: self.len(),
            });
        }
        match &self.basis {
            Basis::Separable {
                row_modes,
                col_modes,
                modes,
            } => {
                let (p, q) = modes[k];
                let mut u = Vec::with_capacity(self.height * self.width);
                for i in 0..self.height {
                    let vi = row_modes[[i, p as usize]];
                    for j in 0..self.width {
                        u.push(vi * col_modes[[j, q as usize]]);
                    }
                }
                Ok(u)
            }
            Basis::Dense { vectors } => Ok(vectors.column(k).to_vec()),
        }
    }

    /// Full eigenvector matrix U with eigenvectors as columns.
    /// O(N^2) memory; intended for tests and small grids.
    pub fn basis_matrix(&self) -> Array2<f64> {
        match &self.basis {
            Basis::Dense { vectors } => vectors.clone(),
            Basis::Separable { .. } => {
                let n = self.len();
                let mut u = Array2::<f64>::zeros((n, n));
                for k in 0..n {
                    let col = self.eigenvector(k).expect("k < n");
                    for (i, v) in col.into_iter().enumerate() {
                        u[[i, k]] = v;
                    }
                }
                u
            }
        }
    }

    pub(crate) fn separable_parts(&self) -> Option<(&Array2<f64>, &Array2<f64>, &[(u32, u32)])> {
        match &self.basis {
            Basis::Separable {
                row_modes,
                col_modes,
                modes,
            } => Some((row_modes, col_modes, modes)),
            Basis::Dense { .. } => None,
        }
    }

    pub(crate) fn dense_vectors(&self) -> Option<&Array2<f64>> {
        match &self.basis {
            Basis::Dense { vectors } => Some(vectors),
            Basis::Separable { .. } => None,
        }
    }

    /// Writes the ordering table to a `GFTSPEC1` container.
    pub fn save(&self, path: &Path) -> Result<()> {
        let (_, _, modes) = self.separable_parts().ok_or_else(|| {
            Error::Format("only separable (analytic) spectra can be serialized".into())
        })?;
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = BufWriter::new(file);
        let io_err = |e| Error::io(path, e);
        w.write_all(SPECTRUM_MAGIC).map_err(io_err)?;
        w.write_all(&SPECTRUM_CONVENTION.to_le_bytes()).map_err(io_err)?;
        w.write_all(&(self.height as u32).to_le_bytes()).map_err(io_err)?;
        w.write_all(&(self.width as u32).to_le_bytes()).map_err(io_err)?;
        for (k, &(p, q)) in modes.iter().enumerate() {
            w.write_all(&p.to_le_bytes()).map_err(io_err)?;
            w.write_all(&q.to_le_bytes()).map_err(io_err)?;
            w.write_all(&self.eigenvalues[k].to_le_bytes()).map_err(io_err)?;
        }
        w.flush().map_err(io_err)
    }

    /// Reads a `GFTSPEC1` container and rebuilds the basis, verifying
    /// the stored ordering table against the closed form.
    pub fn load(path: &Path) -> Result<GridSpectrum> {
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        let mut r = BufReader::new(file);
        let io_err = |e| Error::io(path, e);

        let mut magic = [0u8; 8];
        r.read_exact(&mut magic).map_err(io_err)?;
        if &magic != SPECTRUM_MAGIC {
            return Err(Error::Format("not a GFTSPEC1 spectrum file".into()));
        }
        let version = read_u32(&mut r, path)?;
        if version != SPECTRUM_CONVENTION {
            return Err(Error::Incompatible(format!(
                "spectrum convention v{version}, this build expects v{SPECTRUM_CONVENTION}"
            )));
        }
        let height = read_u32(&mut r, path)? as usize;
        let width = read_u32(&mut r, path)? as usize;
        let spectrum = eigenbasis_analytic(height, width)?;
        let modes = match &spectrum.basis {
            Basis::Separable { modes, .. } => modes,
            Basis::Dense { .. } => unreachable!(),
        };
        for (k, &(p, q)) in modes.iter().enumerate() {
            let fp = read_u32(&mut r, path)?;
            let fq = read_u32(&mut r, path)?;
            let mut buf = [0u8; 8];
            r.read_exact(&mut buf).map_err(io_err)?;
            let lambda = f64::from_le_bytes(buf);
            if fp != p || fq != q || (lambda - spectrum.eigenvalues[k]).abs() > 1e-12 {
                return Err(Error::Format(format!(
                    "spectrum ordering table disagrees with convention at index {k}"
                )));
            }
        }
        Ok(spectrum)
    }
}

fn read_u32<R: Read>(r: &mut R, path: &Path) -> Result<u32> {
    let mut buf = [0u8; 4];
    r.read_exact(&mut buf).map_err(|e| Error::io(path, e))?;
    Ok(u32::from_le_bytes(buf))
}

/// Path-graph Laplacian eigenvalue for mode p of P_n.
pub fn path_eigenvalue(p: usize, n: usize) -> f64 {
    2.0 - 2.0 * (std::f64::consts::PI * p as f64 / n as f64).cos()
}

/// Orthonormal path-graph eigenvectors as columns of an n x n matrix.
///
/// Mode p sampled at node i is cos(pi p (i + 1/2) / n), scaled to unit
/// norm (1/sqrt(n) for p = 0, sqrt(2/n) otherwise). Every column's
/// first entry is positive, so the sign convention holds as-is.
pub fn path_modes(n: usize) -> Array2<f64> {
    let mut m = Array2::<f64>::zeros((n, n));
    let norm0 = 1.0 / (n as f64).sqrt();
    let norm = (2.0 / n as f64).sqrt();
    for p in 0..n {
        let scale = if p == 0 { norm0 } else { norm };
        for i in 0..n {
            let angle = std::f64::consts::PI * p as f64 * (i as f64 + 0.5) / n as f64;
            m[[i, p]] = scale * angle.cos();
        }
    }
    m
}

/// Closed-form eigenbasis of the `height` x `width` grid Laplacian.
///
/// This is the canonical spectrum: downstream features, datasets and
/// checkpoints all assume its ordering.
pub fn eigenbasis_analytic(height: usize, width: usize) -> Result<GridSpectrum> {
    if height == 0 || width == 0 {
        return Err(Error::InvalidDimension {
            height,
            width,
            reason: "grid dimensions must be positive",
        });
    }

    let row_eigs: Vec<f64> = (0..height).map(|p| path_eigenvalue(p, height)).collect();
    let col_eigs: Vec<f64> = (0..width).map(|q| path_eigenvalue(q, width)).collect();

    let mut table: Vec<(f64, u32, u32)> = Vec::with_capacity(height * width);
    for (p, &lp) in row_eigs.iter().enumerate() {
        for (q, &lq) in col_eigs.iter().enumerate() {
            table.push((lp + lq, p as u32, q as u32));
        }
    }
    table.sort_by(|a, b| {
        a.0.total_cmp(&b.0)
            .then_with(|| a.1.cmp(&b.1))
            .then_with(|| a.2.cmp(&b.2))
    });

    let eigenvalues: Vec<f64> = table.iter().map(|t| t.0).collect();
    let modes: Vec<(u32, u32)> = table.iter().map(|t| (t.1, t.2)).collect();

    Ok(GridSpectrum {
        height,
        width,
        eigenvalues,
        basis: Basis::Separable {
            row_modes: path_modes(height),
            col_modes: path_modes(width),
            modes,
        },
    })
}

/// Dense eigendecomposition oracle via cyclic Jacobi rotations.
///
/// `l` must be the symmetric Laplacian of a `height` x `width` grid
/// (symmetry checked to 1e-12). Eigenvalues come out ascending with the
/// shared sign convention applied. Cost is O(N^3) per sweep — use only
/// for verification at small N.
pub fn eigendecompose_dense(l: &Array2<f64>, height: usize, width: usize) -> Result<GridSpectrum> {
    let n = l.nrows();
    if l.ncols() != n || n != height * width || n == 0 {
        return Err(Error::ShapeMismatch {
            expected: format!("{0}x{0} matrix for a {1}x{2} grid", height * width, height, width),
            actual: format!("{}x{}", l.nrows(), l.ncols()),
        });
    }
    if n > DENSE_EIGEN_MAX_N {
        return Err(Error::Config(format!(
            "dense eigendecomposition limited to N <= {DENSE_EIGEN_MAX_N} (got {n})"
        )));
    }
    let mut max_dev = 0.0f64;
    for i in 0..n {
        for j in (i + 1)..n {
            max_dev = max_dev.max((l[[i, j]] - l[[j, i]]).abs());
        }
    }
    if max_dev > 1e-12 {
        return Err(Error::NotSymmetric { max_dev });
    }

    let (mut eigenvalues, vectors) = jacobi_eigh(l)?;

    // Sort ascending, carrying eigenvectors along.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eigenvalues[i].total_cmp(&eigenvalues[j]));
    let mut sorted_vectors = Array2::<f64>::zeros((n, n));
    let mut sorted_values = Vec::with_capacity(n);
    for (dst, &src) in order.iter().enumerate() {
        sorted_vectors.column_mut(dst).assign(&vectors.column(src));
        sorted_values.push(eigenvalues[src]);
    }
    eigenvalues = sorted_values;

    // PSD matrix: a leading eigenvalue of -1e-15 is roundoff, not signal.
    for ev in &mut eigenvalues {
        if ev.abs() < 1e-12 {
            *ev = 0.0;
        }
    }

    for mut col in sorted_vectors.columns_mut() {
        apply_sign_convention(col.as_slice_mut().expect("contiguous column"));
    }

    Ok(GridSpectrum {
        height,
        width,
        eigenvalues,
        basis: Basis::Dense {
            vectors: sorted_vectors,
        },
    })
}

/// First entry with magnitude above the threshold is made positive.
fn apply_sign_convention(v: &mut [f64]) {
    for &x in v.iter() {
        if x.abs() > SIGN_EPS {
            if x < 0.0 {
                for y in v.iter_mut() {
                    *y = -*y;
                }
            }
            return;
        }
    }
}

/// Cyclic Jacobi eigensolver for symmetric matrices.
///
/// Returns unsorted `(eigenvalues, eigenvectors-as-columns)`.
fn jacobi_eigh(m: &Array2<f64>) -> Result<(Vec<f64>, Array2<f64>)> {
    let n = m.nrows();
    let mut a = m.clone();
    let mut v = Array2::<f64>::eye(n);
    if n == 1 {
        return Ok((vec![a[[0, 0]]], v));
    }

    let frob: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let tol = 1e-14 * frob.max(1.0);
    const MAX_SWEEPS: usize = 64;

    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                off += a[[i, j]] * a[[i, j]];
            }
        }
        if off.sqrt() <= tol {
            let eigenvalues: Vec<f64> = (0..n).map(|i| a[[i, i]]).collect();
            return Ok((eigenvalues, v));
        }

        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[[p, q]];
                if apq.abs() <= tol / (n as f64) {
                    continue;
                }
                let app = a[[p, p]];
                let aqq = a[[q, q]];
                let tau = (aqq - app) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                for i in 0..n {
                    if i != p && i != q {
                        let aip = a[[i, p]];
                        let aiq = a[[i, q]];
                        a[[i, p]] = c * aip - s * aiq;
                        a[[p, i]] = a[[i, p]];
                        a[[i, q]] = s * aip + c * aiq;
                        a[[q, i]] = a[[i, q]];
                    }
                }
                a[[p, p]] = app - t * apq;
                a[[q, q]] = aqq + t * apq;
                a[[p, q]] = 0.0;
                a[[q, p]] = 0.0;

                for i in 0..n {
                    let vip = v[[i, p]];
                    let viq = v[[i, q]];
                    v[[i, p]] = c * vip - s * viq;
                    v[[i, q]] = s * vip + c * viq;
                }
            }
        }
    }

    Err(Error::Numeric(format!(
        "Jacobi eigensolver did not converge in {MAX_SWEEPS} sweeps (n = {n})"
    )))
}

/// Convenience: analytic spectrum for the paper-scale 64x64 patch.
pub fn canonical_patch_spectrum() -> GridSpectrum {
    eigenbasis_analytic(64, 64).expect("64x64 is valid")
}

#[allow(dead_code)]
fn eigenvector_residual(height: usize, width: usize, lambda: f64, u: &[f64]) -> f64 {
    let lu = super::graph::laplacian_apply(height, width, u);
    lu.iter()
        .zip(u)
        .map(|(lu_i, u_i)| (lu_i - lambda * u_i).abs())
        .fold(0.0, f64::max)
}
