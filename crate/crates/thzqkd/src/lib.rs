//! Achievable secret key rates for multi-carrier continuous-variable QKD
//! over terahertz links.
//!
//! The crate models the full chain from transmitter to key rate:
//!
//! * [`physics`] — blackbody thermal occupation and the shot-noise-unit
//!   variance scale everything else is expressed in.
//! * [`modnoise`] — excess noise a single shared modulator injects when
//!   driven with N OFDM subcarrier tones (I/Q imbalance + third-order
//!   intermodulation).
//! * [`atmosphere`] — humidity-dependent molecular absorption spectra for
//!   moist air, built line-by-line from a water-vapour line list plus an
//!   empirical continuum.
//! * [`channel`] — per-subcarrier transmissivity and noise injection for
//!   absorbing open-air paths and diffraction-limited free-space links.
//! * [`skr`] — asymptotic secret key rate of the Gaussian-modulated
//!   coherent-state protocol against collective Gaussian attacks.
//! * [`scenarios`] — JSON-described sweep scenarios, built-in preset
//!   curves, and deterministic CSV emission.
//!
//! Everything downstream of the frequency plan is deterministic: a sweep
//! produces byte-identical CSV output regardless of thread count.

pub mod atmosphere;
pub mod channel;
pub mod error;
pub mod modnoise;
pub mod physics;
pub mod scenarios;
pub mod skr;

pub use error::{Error, Result};
