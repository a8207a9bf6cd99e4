//! Graph Fourier Transform: projection of a patch onto the Laplacian
//! eigenbasis and reconstruction back, including partial reconstruction
//! from a subset of coefficients.

use ndarray::{Array1, Array2, ArrayView2};

use crate::error::{Error, Result};
use crate::spectral::spectrum::GridSpectrum;

/// A 2D grid of pixel intensities; the graph signal.
///
/// Freshly loaded or synthesized patches are normalized to [0, 1].
/// Reconstructions from masked spectra can leave that range; they carry
/// `normalized = false` and skip the range check.
#[derive(Debug, Clone, PartialEq)]
pub struct ImagePatch {
    height: usize,
    width: usize,
    pixels: Vec<f64>,
    normalized: bool,
}

impl ImagePatch {
    /// A normalized patch; every intensity must lie in [0, 1].
    pub fn new(height: usize, width: usize, pixels: Vec<f64>) -> Result<Self> {
        Self::validate_shape(height, width, pixels.len())?;
        if let Some(bad) = pixels.iter().find(|p| !(0.0..=1.0).contains(*p) || p.is_nan()) {
            return Err(Error::Numeric(format!(
                "pixel intensity {bad} outside [0, 1]"
            )));
        }
        Ok(Self {
            height,
            width,
            pixels,
            normalized: true,
        })
    }

    /// A patch with no range constraint (reconstruction output).
    pub fn unnormalized(height: usize, width: usize, pixels: Vec<f64>) -> Result<Self> {
        Self::validate_shape(height, width, pixels.len())?;
        Ok(Self {
            height,
            width,
            pixels,
            normalized: false,
        })
    }

    fn validate_shape(height: usize, width: usize, len: usize) -> Result<()> {
        if height == 0 || width == 0 {
            return Err(Error::InvalidDimension {
                height,
                width,
                reason: "patch dimensions must be positive",
            });
        }
        if len != height * width {
            return Err(Error::ShapeMismatch {
                expected: format!("{} pixels for {}x{}", height * width, height, width),
                actual: format!("{len} pixels"),
            });
        }
        Ok(())
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }

    /// Row-major pixel intensities.
    pub fn pixels(&self) -> &[f64] {
        &self.pixels
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.pixels[row * self.width + col]
    }

    /// Whether the [0, 1] range invariant is in force.
    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn mean(&self) -> f64 {
        self.pixels.iter().sum::<f64>() / self.pixels.len() as f64
    }

    pub fn l2_norm(&self) -> f64 {
        self.pixels.iter().map(|p| p * p).sum::<f64>().sqrt()
    }

    /// View of the pixels as a height x width matrix.
    pub fn as_matrix(&self) -> ArrayView2<'_, f64> {
        ArrayView2::from_shape((self.height, self.width), &self.pixels)
            .expect("shape validated at construction")
    }

    /// Crops a `size` x `size` window with top-left corner (row, col).
    pub fn window(&self, row: usize, col: usize, size: usize) -> Result<ImagePatch> {
        if row + size > self.height || col + size > self.width {
            return Err(Error::ShapeMismatch {
                expected: format!("window within {}x{}", self.height, self.width),
                actual: format!("{size}x{size} at ({row}, {col})"),
            });
        }
        let mut pixels = Vec::with_capacity(size * size);
        for r in row..row + size {
            pixels.extend_from_slice(&self.pixels[r * self.width + col..r * self.width + col + size]);
        }
        Ok(ImagePatch {
            height: size,
            width: size,
            pixels,
            normalized: self.normalized,
        })
    }
}

/// GFT coefficients of one patch, in the spectrum's canonical order.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralVector {
    coefficients: Vec<f64>,
}

impl SpectralVector {
    pub fn new(coefficients: Vec<f64>) -> Self {
        Self { coefficients }
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.coefficients
    }

    pub fn l2_norm(&self) -> f64 {
        self.coefficients.iter().map(|c| c * c).sum::<f64>().sqrt()
    }
}

fn check_dims(spectrum: &GridSpectrum, height: usize, width: usize) -> Result<()> {
    if spectrum.height() != height || spectrum.width() != width {
        return Err(Error::ShapeMismatch {
            expected: format!("{}x{} (spectrum)", spectrum.height(), spectrum.width()),
            actual: format!("{height}x{width}"),
        });
    }
    Ok(())
}

/// Forward GFT: coefficient k is the inner product of the signal with
/// eigenvector k.
///
/// Separable spectra use the two-sided factor transform
/// `T = R^T X C` (O(N (H + W)) instead of O(N^2)); coefficient k is
/// then `T[p_k, q_k]`.
pub fn gft_forward(spectrum: &GridSpectrum, patch: &ImagePatch) -> Result<SpectralVector> {
    check_dims(spectrum, patch.height(), patch.width())?;

    if let Some((row_modes, col_modes, modes)) = spectrum.separable_parts() {
        let x = patch.as_matrix();
        let t = row_modes.t().dot(&x).dot(col_modes);
        let coefficients = modes
            .iter()
            .map(|&(p, q)| t[[p as usize, q as usize]])
            .collect();
        return Ok(SpectralVector::new(coefficients));
    }

    let u = spectrum.dense_vectors().expect("dense if not separable");
    let x = Array1::from(patch.pixels().to_vec());
    Ok(SpectralVector::new(u.t().dot(&x).to_vec()))
}

/// Inverse GFT: X = U S. Output is flagged unnormalized — masked
/// spectra reconstruct outside [0, 1].
pub fn gft_inverse(spectrum: &GridSpectrum, s: &SpectralVector) -> Result<ImagePatch> {
    if s.len() != spectrum.len() {
        return Err(Error::ShapeMismatch {
            expected: format!("{} coefficients", spectrum.len()),
            actual: format!("{}", s.len()),
        });
    }

    if let Some((row_modes, col_modes, modes)) = spectrum.separable_parts() {
        let (h, w) = (spectrum.height(), spectrum.width());
        let mut t = Array2::<f64>::zeros((h, w));
        for (k, &(p, q)) in modes.iter().enumerate() {
            t[[p as usize, q as usize]] = s.coefficients()[k];
        }
        let x = row_modes.dot(&t).dot(&col_modes.t());
        let pixels = x.iter().copied().collect();
        return ImagePatch::unnormalized(h, w, pixels);
    }

    let u = spectrum.dense_vectors().expect("dense if not separable");
    let coeffs = Array1::from(s.coefficients().to_vec());
    let x = u.dot(&coeffs);
    ImagePatch::unnormalized(spectrum.height(), spectrum.width(), x.to_vec())
}

/// Partial reconstruction X* = U S*: zero every coefficient outside
/// `keep`, then invert.
pub fn reconstruct_partial(
    spectrum: &GridSpectrum,
    s: &SpectralVector,
    keep: &[usize],
) -> Result<ImagePatch> {
    if s.len() != spectrum.len() {
        return Err(Error::ShapeMismatch {
            expected: format!("{} coefficients", spectrum.len()),
            actual: format!("{}", s.len()),
        });
    }
    let mut masked = vec![0.0; s.len()];
    for &k in keep {
        if k >= s.len() {
            return Err(Error::IndexOutOfRange {
                index: k,
                len: s.len(),
            });
        }
        masked[k] = s.coefficients()[k];
    }
    gft_inverse(spectrum, &SpectralVector::new(masked))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::spectrum::{eigenbasis_analytic, eigendecompose_dense};
    use crate::spectral::graph::{build_grid_graph, laplacian};
    use crate::rng;
    use rand::Rng;

    fn random_patch(h: usize, w: usize, seed: u64) -> ImagePatch {
        let mut r = rng::stream(seed, "test-patch", 0);
        let pixels = (0..h * w).map(|_| r.random::<f64>()).collect();
        ImagePatch::new(h, w, pixels).unwrap()
    }

    #[test]
    fn patch_validation() {
        assert!(ImagePatch::new(2, 2, vec![0.0, 0.5, 1.0, 0.3]).is_ok());
        assert!(ImagePatch::new(2, 2, vec![0.0, 0.5, 1.0]).is_err());
        assert!(ImagePatch::new(2, 2, vec![0.0, 0.5, 1.0, 1.3]).is_err());
        assert!(ImagePatch::new(0, 2, vec![]).is_err());
        // Reconstruction constructor waives the range check only.
        assert!(ImagePatch::unnormalized(2, 2, vec![-3.0, 0.5, 1.0, 9.0]).is_ok());
        assert!(ImagePatch::unnormalized(2, 2, vec![0.0]).is_err());
    }

    #[test]
    fn constant_patch_concentrates_on_mode_zero() {
        for (h, w) in [(4, 4), (3, 7)] {
            let spectrum = eigenbasis_analytic(h, w).unwrap();
            let c = 0.37;
            let patch = ImagePatch::new(h, w, vec![c; h * w]).unwrap();
            let s = gft_forward(&spectrum, &patch).unwrap();
            let n = (h * w) as f64;
            assert!((s.coefficients()[0] - c * n.sqrt()).abs() <= 1e-9);
            for &coeff in &s.coefficients()[1..] {
                assert!(coeff.abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn zero_patch_maps_to_zero_vector() {
        let spectrum = eigenbasis_analytic(5, 5).unwrap();
        let patch = ImagePatch::new(5, 5, vec![0.0; 25]).unwrap();
        let s = gft_forward(&spectrum, &patch).unwrap();
        assert!(s.coefficients().iter().all(|&c| c == 0.0));
    }

    #[test]
    fn round_trip_identity_4x4() {
        let spectrum = eigenbasis_analytic(4, 4).unwrap();
        let patch = random_patch(4, 4, 11);
        let s = gft_forward(&spectrum, &patch).unwrap();
        let back = gft_inverse(&spectrum, &s).unwrap();
        for (a, b) in patch.pixels().iter().zip(back.pixels()) {
            assert!((a - b).abs() <= 1e-9);
        }
        assert!(!back.is_normalized());
    }

    #[test]
    fn parseval_against_dense_spectrum_too() {
        let g = build_grid_graph(4, 5).unwrap();
        let dense = eigendecompose_dense(&laplacian(&g), 4, 5).unwrap();
        let analytic = eigenbasis_analytic(4, 5).unwrap();
        let patch = random_patch(4, 5, 3);
        for spectrum in [&dense, &analytic] {
            let s = gft_forward(spectrum, &patch).unwrap();
            let rel = (s.l2_norm() - patch.l2_norm()).abs() / patch.l2_norm();
            assert!(rel <= 1e-9, "parseval rel err {rel}");
        }
    }

    #[test]
    fn inverse_of_unit_dc_is_all_ones() {
        let spectrum = eigenbasis_analytic(3, 3).unwrap();
        let mut coeffs = vec![0.0; 9];
        coeffs[0] = 3.0; // sqrt(N) for N = 9
        let x = gft_inverse(&spectrum, &SpectralVector::new(coeffs)).unwrap();
        for p in x.pixels() {
            assert!((p - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn partial_keep_all_and_none() {
        let spectrum = eigenbasis_analytic(4, 4).unwrap();
        let patch = random_patch(4, 4, 5);
        let s = gft_forward(&spectrum, &patch).unwrap();

        let all: Vec<usize> = (0..16).collect();
        let full = reconstruct_partial(&spectrum, &s, &all).unwrap();
        let plain = gft_inverse(&spectrum, &s).unwrap();
        assert_eq!(full.pixels(), plain.pixels());

        let none = reconstruct_partial(&spectrum, &s, &[]).unwrap();
        assert!(none.pixels().iter().all(|&p| p == 0.0));
    }

    #[test]
    fn partial_keep_dc_gives_mean_patch() {
        let spectrum = eigenbasis_analytic(6, 4).unwrap();
        let patch = random_patch(6, 4, 9);
        let s = gft_forward(&spectrum, &patch).unwrap();
        let recon = reconstruct_partial(&spectrum, &s, &[0]).unwrap();
        let mean = patch.mean();
        for p in recon.pixels() {
            assert!((p - mean).abs() <= 1e-9);
        }
    }

    #[test]
    fn partial_rejects_out_of_range_index() {
        let spectrum = eigenbasis_analytic(2, 2).unwrap();
        let s = SpectralVector::new(vec![0.0; 4]);
        assert!(matches!(
            reconstruct_partial(&spectrum, &s, &[4]),
            Err(Error::IndexOutOfRange { index: 4, len: 4 })
        ));
    }

    #[test]
    fn dimension_mismatch_is_shape_error() {
        let spectrum = eigenbasis_analytic(4, 4).unwrap();
        let patch = random_patch(4, 5, 1);
        assert!(matches!(
            gft_forward(&spectrum, &patch),
            Err(Error::ShapeMismatch { .. })
        ));
        let s = SpectralVector::new(vec![0.0; 20]);
        assert!(matches!(
            gft_inverse(&spectrum, &s),
            Err(Error::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn window_extracts_subgrid() {
        let patch = random_patch(6, 6, 2);
        let win = patch.window(1, 2, 3).unwrap();
        assert_eq!(win.height(), 3);
        assert_eq!(win.get(0, 0), patch.get(1, 2));
        assert_eq!(win.get(2, 2), patch.get(3, 4));
        assert!(patch.window(4, 4, 3).is_err());
    }
}
