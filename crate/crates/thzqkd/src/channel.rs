//! Link models: what fraction of each subcarrier's light survives the trip,
//! and how much noise rides along with it.
//!
//! Three channel kinds are supported:
//!
//! * **Open air** — Beer–Lambert attenuation T = e^(−αd) with α interpolated
//!   from an [`AbsorptionSpectrum`] at each subcarrier frequency.
//! * **Diffraction** — free-space Gaussian beam expanding past a circular
//!   receive aperture; loss is the uncaptured fraction of the beam.
//! * **Fixed** — frequency-flat transmissivity, mainly for idealized checks.
//!
//! Every subcarrier is evaluated at its own frequency: absorption, beam
//! wavelength, and vacuum variance all vary across an OFDM band. The loss
//! itself injects vacuum noise ε_single = (1 − T)/T, which combines with the
//! modulator's ε_mod into the total input-referred excess noise ε_multi.

use crate::atmosphere::{absorption_at, AbsorptionSpectrum};
use crate::error::{Error, Result};
use crate::modnoise::{modulation_noise, worst_modulation_noise, CarrierPlan, ModulatorParams};
use crate::physics::{vacuum_variance, ThermalEnvironment, SPEED_OF_LIGHT};

/// Transmissivities below this are clamped so ε_single stays finite.
pub const TRANSMISSIVITY_FLOOR: f64 = 1e-300;

/// Subcarriers whose transmissivity falls below this are flagged dark:
/// numerically alive, practically useless.
pub const DARK_CUTOFF: f64 = 1e-12;

/// Physical description of the link.
#[derive(Clone, Debug, PartialEq)]
pub enum ChannelSpec {
    /// Absorbing atmospheric path; transmissivity from the spectrum.
    OpenAir { spectrum: AbsorptionSpectrum },
    /// Diffraction-limited free-space link: transmit beam waist ω₀ and
    /// receive aperture radius, both in metres.
    Diffraction { beam_waist_m: f64, aperture_m: f64 },
    /// Frequency-flat transmissivity in (0, 1].
    Fixed { transmissivity: f64 },
}

impl ChannelSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            ChannelSpec::OpenAir { spectrum } => {
                if spectrum.is_empty() {
                    return Err(Error::validation("open-air channel needs a non-empty spectrum".to_string()));
                }
            }
            ChannelSpec::Diffraction { beam_waist_m, aperture_m } => {
                if !(beam_waist_m.is_finite() && *beam_waist_m > 0.0) {
                    return Err(Error::validation(format!(
                        "beam_waist_m must be > 0, got {beam_waist_m}"
                    )));
                }
                if !(aperture_m.is_finite() && *aperture_m > 0.0) {
                    return Err(Error::validation(format!(
                        "aperture_m must be > 0, got {aperture_m}"
                    )));
                }
            }
            ChannelSpec::Fixed { transmissivity } => {
                if !(transmissivity.is_finite() && *transmissivity > 0.0 && *transmissivity <= 1.0) {
                    return Err(Error::validation(format!(
                        "fixed transmissivity must be in (0, 1], got {transmissivity}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Whether the modulator noise is charged per subcarrier or at the
/// band-worst value everywhere (the conservative default).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseMode {
    PerSubcarrier,
    #[default]
    WorstCase,
}

/// Everything the key-rate computation needs to know about one subcarrier
/// at one distance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SubcarrierChannelState {
    pub k: u32,
    pub f_hz: f64,
    pub t_ch: f64,
    /// Loss-induced vacuum noise (1 − T)/T, SNU.
    pub eps_single: f64,
    /// Modulator excess noise charged to this subcarrier, SNU.
    pub eps_mod: f64,
    /// Total input-referred excess noise ε_single + ε_mod, SNU.
    pub eps_multi: f64,
    /// Vacuum variance V₀ at this subcarrier's frequency, SNU.
    pub v0: f64,
    /// Transmissivity fell below [`DARK_CUTOFF`].
    pub dark: bool,
}

fn check_distance(d_m: f64) -> Result<()> {
    if !d_m.is_finite() || d_m < 0.0 {
        return Err(Error::validation(format!(
            "distance must be finite and >= 0 m, got {d_m}"
        )));
    }
    Ok(())
}

/// Beer–Lambert transmissivity e^(−αd) of an absorbing path.
pub fn open_air_transmissivity(alpha_per_m: f64, d_m: f64) -> Result<f64> {
    if !alpha_per_m.is_finite() || alpha_per_m < 0.0 {
        return Err(Error::validation(format!(
            "absorption coefficient must be finite and >= 0, got {alpha_per_m}"
        )));
    }
    check_distance(d_m)?;
    Ok((-alpha_per_m * d_m).exp())
}

/// Gaussian-beam radius after propagating distance d:
/// ω(d) = ω₀·√(1 + (λd/(πω₀²))²).
pub fn beam_radius(d_m: f64, omega0_m: f64, wavelength_m: f64) -> Result<f64> {
    if !(omega0_m.is_finite() && omega0_m > 0.0) {
        return Err(Error::validation(format!("beam waist must be > 0, got {omega0_m}")));
    }
    if !(wavelength_m.is_finite() && wavelength_m > 0.0) {
        return Err(Error::validation(format!("wavelength must be > 0, got {wavelength_m}")));
    }
    check_distance(d_m)?;
    let spread = wavelength_m * d_m / (std::f64::consts::PI * omega0_m * omega0_m);
    Ok(omega0_m * (1.0 + spread * spread).sqrt())
}

/// Fraction of a Gaussian beam captured by a circular aperture of radius
/// r_a after expanding to ω(d): T = 1 − exp(−2r_a²/ω²(d)).
pub fn diffraction_transmissivity(
    d_m: f64,
    omega0_m: f64,
    aperture_m: f64,
    wavelength_m: f64,
) -> Result<f64> {
    if !(aperture_m.is_finite() && aperture_m > 0.0) {
        return Err(Error::validation(format!("aperture radius must be > 0, got {aperture_m}")));
    }
    let omega = beam_radius(d_m, omega0_m, wavelength_m)?;
    Ok(-(-2.0 * aperture_m * aperture_m / (omega * omega)).exp_m1())
}

/// Vacuum noise a lossy channel injects, referred to the input:
/// ε_single = (1 − T)/T.
pub fn loss_vacuum_noise(t_ch: f64) -> Result<f64> {
    if !(t_ch.is_finite() && t_ch > 0.0 && t_ch <= 1.0) {
        return Err(Error::validation(format!(
            "transmissivity must be in (0, 1], got {t_ch}"
        )));
    }
    Ok((1.0 - t_ch) / t_ch)
}

/// Evaluates the channel for every subcarrier of the plan at distance d.
///
/// Output is ordered by k = 1..=N. With [`NoiseMode::WorstCase`] the
/// band-worst ε_mod is charged to every subcarrier; with
/// [`NoiseMode::PerSubcarrier`] each gets its own.
pub fn per_subcarrier_channel(
    plan: &CarrierPlan,
    p: &ModulatorParams,
    spec: &ChannelSpec,
    env: &ThermalEnvironment,
    d_m: f64,
    noise_mode: NoiseMode,
) -> Result<Vec<SubcarrierChannelState>> {
    plan.validate()?;
    p.validate()?;
    spec.validate()?;
    check_distance(d_m)?;
    let worst = match noise_mode {
        NoiseMode::WorstCase => Some(worst_modulation_noise(plan, p)?.1),
        NoiseMode::PerSubcarrier => None,
    };
    let mut states = Vec::with_capacity(plan.n as usize);
    for k in 1..=plan.n {
        let f_hz = plan.subcarrier_hz(k);
        let raw_t = match spec {
            ChannelSpec::OpenAir { spectrum } => {
                let alpha = absorption_at(spectrum, f_hz).map_err(|e| {
                    Error::validation(format!("subcarrier k={k} ({f_hz} Hz): {e}"))
                })?;
                open_air_transmissivity(alpha, d_m)?
            }
            ChannelSpec::Diffraction { beam_waist_m, aperture_m } => {
                let wavelength = SPEED_OF_LIGHT / f_hz;
                diffraction_transmissivity(d_m, *beam_waist_m, *aperture_m, wavelength)?
            }
            ChannelSpec::Fixed { transmissivity } => *transmissivity,
        };
        let t_ch = raw_t.max(TRANSMISSIVITY_FLOOR);
        let eps_mod = match worst {
            Some(w) => w,
            None => modulation_noise(plan, p, k)?,
        };
        let eps_single = loss_vacuum_noise(t_ch)?;
        states.push(SubcarrierChannelState {
            k,
            f_hz,
            t_ch,
            eps_single,
            eps_mod,
            eps_multi: eps_single + eps_mod,
            v0: vacuum_variance(f_hz, env)?,
            dark: t_ch < DARK_CUTOFF,
        });
    }
    Ok(states)
}
