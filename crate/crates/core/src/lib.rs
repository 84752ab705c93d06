//! Two-photon spectral wavepackets in a lossless beam splitter.
//!
//! A [`BiphotonSpectrum`] is a unit-norm amplitude matrix over a shared
//! [`FrequencyGrid`]. The [`beamsplitter`] module propagates it through the
//! splitter unitary and splits the output into the same-port (coalescence)
//! and click-click channels; [`models`] builds the standard analytic spectra
//! and carries their closed-form coincidence probabilities.
//!
//! The crate is `no_std` and needs only `alloc`.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod beamsplitter;
mod error;
pub mod grid;
mod linalg;
pub mod models;
pub mod spectrum;
pub mod wavepacket;

pub use beamsplitter::{
    coincidence_probability, input_fidelity, transform, trapping_fidelity, BeamSplitterParams,
    OutputDecomposition, TwoPhotonState,
};
pub use error::{Error, Result};
pub use grid::FrequencyGrid;
pub use models::{GaussianPairModel, Modeled, Parity, PumpEnvelope, ShihModel, Warning};
pub use spectrum::{BiphotonSpectrum, SymmetryParts};
pub use wavepacket::TimeWavepacket;
