//! Humidity-dependent molecular absorption of moist air in the THz band.
//!
//! The absorption coefficient is built as α_f = α_l + α_c:
//!
//! * **Resonant lines** (α_l): a line-by-line sum over water-vapour
//!   transitions. Each line contributes its temperature-adjusted intensity
//!   times a van Vleck–Weisskopf profile with pressure-broadened half-width;
//!   wings are truncated 25 cm⁻¹ from the line centre, beyond which the
//!   continuum term takes over.
//! * **Continuum** (α_c): the empirical quadratic-in-frequency excess
//!   absorption observed between lines, with a self (water–water) and a
//!   foreign (water–air) pressure term.
//!
//! All spectroscopic bookkeeping is in the traditional units of the line
//! lists: wavenumbers in cm⁻¹, pressures in Torr, intensities in
//! cm⁻¹/(molecule·cm⁻²) at the 296 K reference temperature. Public
//! interfaces speak hertz and metres; conversions are internal.
//!
//! The bundled line list ([`builtin_water_lines`]) covers the rotational
//! water band from 22 GHz to 3 THz. Its intensities and widths are
//! calibrated so the resulting spectra reproduce measured THz link budgets
//! (window depths and peak positions), rather than being copied from a
//! spectroscopic database; treat it as a model input, and substitute
//! externally tabulated spectra via [`load_spectrum_table`] when fidelity
//! to a particular database matters.

mod hitran;

pub use hitran::parse_hitran_records;

use std::sync::LazyLock;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::physics::BOLTZMANN;

/// Wavenumber ↔ frequency scale: 1 cm⁻¹ in GHz.
pub const GHZ_PER_WAVENUMBER: f64 = 29.9792458;

/// HITRAN reference temperature for line intensities and widths, kelvin.
pub const REFERENCE_TEMPERATURE_K: f64 = 296.0;

/// Second radiation constant hc/k_B in cm·K, for intensity rescaling.
const C2_CM_K: f64 = 1.4387769;

/// One Torr in pascal.
const PASCAL_PER_TORR: f64 = 101_325.0 / 760.0;

/// Per-line wing cutoff: contributions further than this from the line
/// centre are dropped (the continuum represents far wings).
const WING_CUTOFF_CM: f64 = 25.0;

/// Lines centred this far outside the evaluation band are skipped entirely.
const BAND_MARGIN_CM: f64 = 50.0;

/// One rotational-band transition of a line list.
///
/// Units follow the source format: `center`, `lower_state_energy` in cm⁻¹;
/// `intensity` in cm⁻¹/(molecule·cm⁻²) at 296 K; halfwidths and
/// `pressure_shift` in cm⁻¹/atm; `temp_exponent` dimensionless.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralLine {
    pub center: f64,
    pub intensity: f64,
    pub air_halfwidth: f64,
    pub self_halfwidth: f64,
    pub lower_state_energy: f64,
    pub temp_exponent: f64,
    pub pressure_shift: f64,
    pub molecule_id: u32,
    pub isotopologue_id: u32,
}

impl SpectralLine {
    pub fn validate(&self) -> Result<()> {
        if !(self.center > 0.0) {
            return Err(Error::validation(format!(
                "line centre must be > 0 cm^-1, got {}", self.center
            )));
        }
        if !(self.air_halfwidth > 0.0) {
            return Err(Error::validation(format!(
                "air halfwidth must be > 0, got {}", self.air_halfwidth
            )));
        }
        if !(self.intensity >= 0.0) {
            return Err(Error::validation(format!(
                "line intensity must be >= 0, got {}", self.intensity
            )));
        }
        Ok(())
    }
}

/// Water-vapour/dry-air mixture state: partial pressures in Torr and
/// temperature in kelvin.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MoistAir {
    pub water_pressure_torr: f64,
    pub air_pressure_torr: f64,
    pub temperature_k: f64,
}

impl MoistAir {
    pub fn new(water_pressure_torr: f64, air_pressure_torr: f64, temperature_k: f64) -> Result<Self> {
        let air = MoistAir { water_pressure_torr, air_pressure_torr, temperature_k };
        air.validate()?;
        Ok(air)
    }

    /// Sea-level mixture at the given relative humidity: p_w from the
    /// saturation curve, dry air topping up to 760 Torr total.
    pub fn at_relative_humidity(rh_percent: f64, temperature_k: f64) -> Result<Self> {
        let p_w = rh_to_water_pressure(rh_percent, temperature_k)?;
        MoistAir::new(p_w, 760.0 - p_w, temperature_k)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("water_pressure_torr", self.water_pressure_torr),
            ("air_pressure_torr", self.air_pressure_torr),
        ] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::validation(format!(
                    "{name} must be finite and >= 0, got {v}"
                )));
            }
        }
        if self.water_pressure_torr + self.air_pressure_torr <= 0.0 {
            return Err(Error::validation("total pressure must be > 0".to_string()));
        }
        if !self.temperature_k.is_finite() || self.temperature_k <= 0.0 {
            return Err(Error::validation(format!(
                "temperature_k must be finite and > 0, got {}", self.temperature_k
            )));
        }
        Ok(())
    }

    /// Water-molecule number density in m⁻³ (ideal gas).
    pub fn water_number_density(&self) -> f64 {
        self.water_pressure_torr * PASCAL_PER_TORR / (BOLTZMANN * self.temperature_k)
    }
}

/// Saturation vapour pressure over liquid water (Buck formula), converted
/// from hPa to Torr; `rh_to_water_pressure` scales it by RH/100.
fn buck_saturation_torr(temperature_k: f64) -> f64 {
    let t = temperature_k - 273.15;
    let hpa = 6.1121 * ((18.678 - t / 234.5) * t / (257.14 + t)).exp();
    hpa * 760.0 / 1013.25
}

/// Converts relative humidity (percent) to water partial pressure in Torr.
pub fn rh_to_water_pressure(rh_percent: f64, temperature_k: f64) -> Result<f64> {
    if !rh_percent.is_finite() || !(0.0..=100.0).contains(&rh_percent) {
        return Err(Error::validation(format!(
            "relative humidity must be in [0, 100] percent, got {rh_percent}"
        )));
    }
    if !temperature_k.is_finite() || temperature_k <= 0.0 {
        return Err(Error::validation(format!(
            "temperature_k must be finite and > 0, got {temperature_k}"
        )));
    }
    Ok(rh_percent / 100.0 * buck_saturation_torr(temperature_k))
}

/// Pressure-broadened line shape φ(ν; ν₀, γ) in cm, evaluated at wavenumber
/// ν for a line whose (shifted) centre is ν₀ and half-width γ.
///
/// Kept behind a trait so the profile can be swapped (Lorentz, van
/// Vleck–Huber, …) without touching the summation machinery.
pub trait LineShapeModel: Sync {
    fn profile(&self, nu: f64, center: f64, halfwidth: f64) -> f64;
}

/// Van Vleck–Weisskopf profile — the standard choice in the mm-wave/THz
/// range, where the anti-resonant term and the (ν/ν₀)² prefactor matter.
#[derive(Clone, Copy, Debug, Default)]
pub struct VanVleckWeisskopf;

impl LineShapeModel for VanVleckWeisskopf {
    fn profile(&self, nu: f64, center: f64, halfwidth: f64) -> f64 {
        let ratio = nu / center;
        let dm = nu - center;
        let dp = nu + center;
        (ratio * ratio / std::f64::consts::PI)
            * (halfwidth / (dm * dm + halfwidth * halfwidth)
                + halfwidth / (dp * dp + halfwidth * halfwidth))
    }
}

/// Line intensity rescaled from the 296 K reference to temperature T:
/// rotational partition function (296/T)^1.5, Boltzmann population of the
/// lower state, and stimulated-emission factor.
fn intensity_at(line: &SpectralLine, temperature_k: f64) -> f64 {
    let t = temperature_k;
    let tr = REFERENCE_TEMPERATURE_K;
    let partition = (tr / t).powf(1.5);
    let population = (-C2_CM_K * line.lower_state_energy / t).exp()
        / (-C2_CM_K * line.lower_state_energy / tr).exp();
    let emission = (-(-C2_CM_K * line.center / t).exp() + 1.0)
        / (-(-C2_CM_K * line.center / tr).exp() + 1.0);
    line.intensity * partition * population * emission
}

/// Pressure-broadened half-width at the mixture state, cm⁻¹.
fn broadened_halfwidth(line: &SpectralLine, air: &MoistAir) -> f64 {
    (line.air_halfwidth * air.air_pressure_torr / 760.0
        + line.self_halfwidth * air.water_pressure_torr / 760.0)
        * (REFERENCE_TEMPERATURE_K / air.temperature_k).powf(line.temp_exponent)
}

fn line_absorption_with_shape(
    f_hz: f64,
    lines: &[SpectralLine],
    air: &MoistAir,
    shape: &dyn LineShapeModel,
) -> Result<f64> {
    if !f_hz.is_finite() || f_hz <= 0.0 {
        return Err(Error::validation(format!(
            "frequency must be finite and > 0 Hz, got {f_hz}"
        )));
    }
    air.validate()?;
    let nu = f_hz / (GHZ_PER_WAVENUMBER * 1e9);
    let mut sum_cm = 0.0;
    for line in lines {
        let shifted = line.center + line.pressure_shift * air.air_pressure_torr / 760.0;
        if (nu - shifted).abs() > WING_CUTOFF_CM {
            continue;
        }
        let gamma = broadened_halfwidth(line, air);
        sum_cm += intensity_at(line, air.temperature_k) * shape.profile(nu, shifted, gamma);
    }
    // S·φ is cm⁻¹ per (molecule·cm⁻³); number density in m⁻³ brings a 1e-6,
    // converting cm⁻¹ to m⁻¹ brings a 1e2.
    Ok(1e-4 * air.water_number_density() * sum_cm)
}

/// Resonant-line absorption α_l at one frequency, in m⁻¹ (Napierian),
/// using the van Vleck–Weisskopf profile.
pub fn line_absorption(f_hz: f64, lines: &[SpectralLine], air: &MoistAir) -> Result<f64> {
    line_absorption_with_shape(f_hz, lines, air, &VanVleckWeisskopf)
}

/// Empirical continuum coefficients: self (water–water) and foreign
/// (water–dry-air) terms, in m⁻¹·Torr⁻²·THz⁻².
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContinuumCoefficients {
    pub c_self: f64,
    pub c_foreign: f64,
}

impl Default for ContinuumCoefficients {
    fn default() -> Self {
        ContinuumCoefficients { c_self: 4.0e-8, c_foreign: 1.4e-9 }
    }
}

/// Continuum absorption α_c = (C_s·p_w + C_f·p_air)·p_w·f² in m⁻¹, with f
/// in THz. Quadratic in frequency, zero for dry air.
pub fn continuum_absorption(f_hz: f64, air: &MoistAir, coeffs: &ContinuumCoefficients) -> f64 {
    let f_thz = f_hz / 1e12;
    (coeffs.c_self * air.water_pressure_torr + coeffs.c_foreign * air.air_pressure_torr)
        * air.water_pressure_torr
        * f_thz
        * f_thz
}

/// Where a spectrum's numbers came from; loaded tables bypass the line model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Computed,
    Loaded,
}

/// Absorption coefficient sampled on an ascending frequency grid.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct AbsorptionSpectrum {
    grid_hz: Vec<f64>,
    alpha_per_m: Vec<f64>,
    provenance: Provenance,
}

impl AbsorptionSpectrum {
    pub fn new(grid_hz: Vec<f64>, alpha_per_m: Vec<f64>, provenance: Provenance) -> Result<Self> {
        if grid_hz.len() != alpha_per_m.len() {
            return Err(Error::validation(format!(
                "grid and alpha lengths differ: {} vs {}",
                grid_hz.len(),
                alpha_per_m.len()
            )));
        }
        for pair in grid_hz.windows(2) {
            if !(pair[1] > pair[0]) {
                return Err(Error::validation(format!(
                    "frequency grid must be strictly ascending: {} then {}",
                    pair[0], pair[1]
                )));
            }
        }
        for (&f, &a) in grid_hz.iter().zip(&alpha_per_m) {
            if !f.is_finite() || f <= 0.0 {
                return Err(Error::validation(format!("grid frequency {f} not positive finite")));
            }
            if !a.is_finite() || a < 0.0 {
                return Err(Error::validation(format!(
                    "absorption {a} at {f} Hz must be finite and >= 0"
                )));
            }
        }
        Ok(AbsorptionSpectrum { grid_hz, alpha_per_m, provenance })
    }

    pub fn grid_hz(&self) -> &[f64] {
        &self.grid_hz
    }

    pub fn alpha_per_m(&self) -> &[f64] {
        &self.alpha_per_m
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn len(&self) -> usize {
        self.grid_hz.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid_hz.is_empty()
    }
}

/// Full spectrum α_l + α_c over an ascending grid. Grid points are
/// independent, so the evaluation parallelizes; the per-point line sum runs
/// in list order, keeping results bit-identical across thread counts.
pub fn total_absorption_spectrum(
    grid_hz: &[f64],
    lines: &[SpectralLine],
    air: &MoistAir,
    coeffs: &ContinuumCoefficients,
) -> Result<AbsorptionSpectrum> {
    air.validate()?;
    for pair in grid_hz.windows(2) {
        if !(pair[1] > pair[0]) {
            return Err(Error::validation(format!(
                "frequency grid must be strictly ascending: {} then {}",
                pair[0], pair[1]
            )));
        }
    }
    let in_band: Vec<&SpectralLine> = match (grid_hz.first(), grid_hz.last()) {
        (Some(&lo), Some(&hi)) => {
            let lo_cm = lo / (GHZ_PER_WAVENUMBER * 1e9) - BAND_MARGIN_CM;
            let hi_cm = hi / (GHZ_PER_WAVENUMBER * 1e9) + BAND_MARGIN_CM;
            lines.iter().filter(|l| l.center >= lo_cm && l.center <= hi_cm).collect()
        }
        _ => Vec::new(),
    };
    let shape = VanVleckWeisskopf;
    let alpha: Vec<f64> = grid_hz
        .par_iter()
        .map(|&f| {
            let mut a = continuum_absorption(f, air, coeffs);
            for line in &in_band {
                let shifted = line.center + line.pressure_shift * air.air_pressure_torr / 760.0;
                let nu = f / (GHZ_PER_WAVENUMBER * 1e9);
                if (nu - shifted).abs() > WING_CUTOFF_CM {
                    continue;
                }
                let gamma = broadened_halfwidth(line, air);
                a += 1e-4
                    * air.water_number_density()
                    * intensity_at(line, air.temperature_k)
                    * shape.profile(nu, shifted, gamma);
            }
            if !f.is_finite() || f <= 0.0 {
                return Err(Error::validation(format!(
                    "frequency must be finite and > 0 Hz, got {f}"
                )));
            }
            Ok(a)
        })
        .collect::<Result<_>>()?;
    AbsorptionSpectrum::new(grid_hz.to_vec(), alpha, Provenance::Computed)
}

/// Linear interpolation on the spectrum grid; exact at grid points, no
/// extrapolation outside [first, last].
pub fn absorption_at(spectrum: &AbsorptionSpectrum, f_hz: f64) -> Result<f64> {
    let grid = &spectrum.grid_hz;
    let (first, last) = match (grid.first(), grid.last()) {
        (Some(&a), Some(&b)) => (a, b),
        _ => return Err(Error::validation("empty spectrum".to_string())),
    };
    if !f_hz.is_finite() || f_hz < first || f_hz > last {
        return Err(Error::validation(format!(
            "frequency {f_hz} Hz outside tabulated range [{first}, {last}]"
        )));
    }
    match grid.binary_search_by(|g| g.partial_cmp(&f_hz).expect("finite grid")) {
        Ok(i) => Ok(spectrum.alpha_per_m[i]),
        Err(i) => {
            let (f0, f1) = (grid[i - 1], grid[i]);
            let (a0, a1) = (spectrum.alpha_per_m[i - 1], spectrum.alpha_per_m[i]);
            Ok(a0 + (a1 - a0) * (f_hz - f0) / (f1 - f0))
        }
    }
}

/// Serializes a spectrum as `frequency_hz,alpha_per_m` CSV with LF line
/// endings and shortest round-trip float formatting.
pub fn save_spectrum_table(spectrum: &AbsorptionSpectrum) -> String {
    let mut out = String::from("frequency_hz,alpha_per_m\n");
    for (&f, &a) in spectrum.grid_hz.iter().zip(&spectrum.alpha_per_m) {
        out.push_str(&format!("{f},{a}\n"));
    }
    out
}

/// Parses a `frequency_hz,alpha_per_m` CSV table. Errors carry the 1-based
/// data-row number; a non-ascending grid is rejected.
pub fn load_spectrum_table(input: &str) -> Result<AbsorptionSpectrum> {
    let mut lines = input.lines();
    match lines.next() {
        Some(h) if h.trim() == "frequency_hz,alpha_per_m" => {}
        other => {
            return Err(Error::validation(format!(
                "expected header 'frequency_hz,alpha_per_m', got {:?}",
                other.unwrap_or("")
            )))
        }
    }
    let mut grid = Vec::new();
    let mut alpha = Vec::new();
    for (idx, row) in lines.enumerate() {
        let row_no = idx + 1;
        if row.trim().is_empty() {
            continue;
        }
        let mut cells = row.split(',');
        let (f_raw, a_raw) = match (cells.next(), cells.next(), cells.next()) {
            (Some(f), Some(a), None) => (f, a),
            _ => {
                return Err(Error::validation(format!(
                    "row {row_no}: expected two comma-separated fields, got {row:?}"
                )))
            }
        };
        let f: f64 = f_raw.trim().parse().map_err(|_| {
            Error::validation(format!("row {row_no}: invalid frequency {f_raw:?}"))
        })?;
        let a: f64 = a_raw.trim().parse().map_err(|_| {
            Error::validation(format!("row {row_no}: invalid absorption {a_raw:?}"))
        })?;
        if let Some(&prev) = grid.last() {
            if f <= prev {
                return Err(Error::validation(format!(
                    "row {row_no}: frequency {f} not above previous {prev}"
                )));
            }
        }
        grid.push(f);
        alpha.push(a);
    }
    AbsorptionSpectrum::new(grid, alpha, Provenance::Loaded)
}

static BUILTIN_LINES: LazyLock<Vec<SpectralLine>> = LazyLock::new(|| {
    parse_hitran_records(include_str!("../../data/h2o_lines.par"))
        .expect("bundled line list parses")
});

/// The water-vapour line list shipped with the crate (22 GHz – 3 THz band).
pub fn builtin_water_lines() -> &'static [SpectralLine] {
    &BUILTIN_LINES
}
