//! Spectral geometry of Spin^c Dirac operators on the flat 3-torus.
//!
//! The crate computes closed-form spectra and eigenbasis data, spectral flow
//! along integer loops, the K¹ index of families over sub-tori, and explicit
//! small-R spectral sections, and checks them against a lattice-gauge oracle.

pub mod error;
pub mod flow_index;
pub mod io;
pub mod lattice_oracle;
pub mod spectral_sections;
pub mod spectrum_engine;
pub mod torus_geometry;

pub use error::{Error, Result};
