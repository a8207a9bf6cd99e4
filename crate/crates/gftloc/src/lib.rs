//! Surface defect detection on textured images via grid-graph Fourier
//! analysis.
//!
//! The pipeline: image patches are treated as signals on a 4-connected
//! grid graph; the Graph Fourier Transform projects them onto the
//! Laplacian eigenbasis; a 1D CNN classifies the spectral coefficient
//! vectors as defect / non-defect; Shapley-value attribution explains
//! which coefficients drive each decision; and a sliding window turns
//! the patch classifier into a defect heatmap scored against
//! ground-truth masks.

pub mod error;
pub mod rng;
pub mod spectral;

pub use error::{Error, Result};
