//! Simulation of discrete-time quantum walks carried out with
//! classical light pulses circulating a ring resonator.
//!
//! The crate has three layers:
//!
//! * [`coin`], [`walk`], [`spectrum`] — polarization-coin algebra and
//!   exact walk evolution on a truncated OAM lattice;
//! * [`resonator`] — the temporal cavity model: pulse shape,
//!   round-trip weighting, and the five-term overlap convolution that
//!   distorts gated measurements, plus its inverse;
//! * [`grid`], [`sorter`] — Fourier-optics simulation of the
//!   log-polar OAM mode sorter used for detection.

pub mod coin;
pub mod error;
pub mod grid;
pub mod resonator;
pub mod sorter;
pub mod spectrum;
pub mod walk;

pub use coin::{
    coin_theta, compose, equal_up_to_global_phase, hwp_operator, qwp_operator, Coin, CoinOperator,
    CoinState, PlateKind, WaveplateSpec,
};
pub use error::{Error, Result};
pub use grid::{oam_mode, FieldGrid};
pub use resonator::{
    bs_weight, convolve_steps, deconvolve_series, deconvolve_step, gate_offset,
    overlap_coefficients, pulse_value, CavityConfig, PulseModel, StepSeries,
};
pub use sorter::{
    bin_spectrum, corrector_phase, crosstalk_matrix, fanout_phase, sorter_pipeline, spot_position,
    unwrapper_phase, CrosstalkMatrix, SorterDesign,
};
pub use spectrum::{similarity, Spectrum};
pub use walk::{
    classical_rw_distribution, coin_apply, evolve, evolve_localized, shift_apply, step,
    QPlateSpec, WalkerState,
};
