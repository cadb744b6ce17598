//! Blackbody photon statistics in shot-noise units.
//!
//! Every quadrature variance in this crate is expressed in shot-noise units
//! (SNU), where an ideal vacuum mode has variance 1. A mode in equilibrium
//! with a thermal bath at temperature T carries a Bose–Einstein mean photon
//! number n̄ = 1/(exp(hf/k_BT) − 1), and its quadrature variance is
//! V₀ = 2n̄ + 1. At millimetre and terahertz frequencies n̄ is far from
//! negligible at room temperature — tens of photons per mode at 300 GHz —
//! which is what makes the thermal background the central obstacle for
//! quantum links in this band.

use crate::error::{Error, Result};

/// Planck constant, J·s (2019 SI exact value).
pub const PLANCK: f64 = 6.626_070_15e-34;
/// Boltzmann constant, J/K (2019 SI exact value).
pub const BOLTZMANN: f64 = 1.380_649e-23;
/// Speed of light in vacuum, m/s (exact).
pub const SPEED_OF_LIGHT: f64 = 2.997_924_58e8;

/// Thermal bath the quantum channel is embedded in.
///
/// Open-air links sit in the ~300 K ambient field; cooled or inter-satellite
/// scenarios use a few tens of kelvin. Absolute zero is allowed and gives
/// exactly the vacuum state.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThermalEnvironment {
    pub temperature_k: f64,
}

impl ThermalEnvironment {
    pub fn new(temperature_k: f64) -> Result<Self> {
        if !temperature_k.is_finite() || temperature_k < 0.0 {
            return Err(Error::validation(format!(
                "temperature must be finite and >= 0 K, got {temperature_k}"
            )));
        }
        Ok(ThermalEnvironment { temperature_k })
    }
}

fn check_frequency(f_hz: f64) -> Result<f64> {
    if !f_hz.is_finite() || f_hz <= 0.0 {
        return Err(Error::validation(format!(
            "frequency must be finite and > 0 Hz, got {f_hz}"
        )));
    }
    Ok(f_hz)
}

/// Mean thermal photon number n̄ of a mode at `f_hz` in equilibrium at the
/// environment temperature.
///
/// Uses `expm1` so the high-temperature (hf ≪ k_BT) regime keeps full
/// precision; T = 0 is taken as exactly zero occupation rather than relying
/// on the exponential to overflow.
pub fn thermal_occupation(f_hz: f64, env: &ThermalEnvironment) -> Result<f64> {
    let f = check_frequency(f_hz)?;
    if env.temperature_k == 0.0 {
        return Ok(0.0);
    }
    let x = PLANCK * f / (BOLTZMANN * env.temperature_k);
    Ok(1.0 / x.exp_m1())
}

/// Quadrature variance V₀ = 2n̄ + 1 of the thermal background, in SNU.
///
/// Equals 1 exactly when the environment is at absolute zero; grows linearly
/// with temperature in the Rayleigh–Jeans regime.
pub fn vacuum_variance(f_hz: f64, env: &ThermalEnvironment) -> Result<f64> {
    Ok(2.0 * thermal_occupation(f_hz, env)? + 1.0)
}
