//! Closed-form spectra and eigenbasis coefficients of 𝒟^K_α.

mod blocks;
mod form;
mod spectrum;

pub use blocks::{
    block_matrix, bloch_projector, bloch_vector, clifford_block, clifford_generators,
    dirac_block, BlockEigenData,
};
pub use form::HarmonicForm;
pub use spectrum::{
    enumerate_spectrum, kernel_dimension, lambda_l, landau_level, mu_m, BranchLabel, Sign,
    SpectrumEntry, SpectrumSlice, ZERO_TOL,
};
