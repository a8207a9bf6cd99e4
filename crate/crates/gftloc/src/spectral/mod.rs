//! Grid-graph spectral core: graph construction, Laplacian eigenbasis,
//! and the Graph Fourier Transform.

mod graph;
mod spectrum;
mod transform;

pub use graph::{build_grid_graph, laplacian, laplacian_apply, GridGraph};
pub use spectrum::{
    canonical_patch_spectrum, eigenbasis_analytic, eigendecompose_dense, path_eigenvalue,
    path_modes, GridSpectrum, DENSE_EIGEN_MAX_N, SPECTRUM_CONVENTION,
};
pub use transform::{gft_forward, gft_inverse, reconstruct_partial, ImagePatch, SpectralVector};
