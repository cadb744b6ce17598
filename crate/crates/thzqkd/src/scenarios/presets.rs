//! Built-in parameter sets for the published sweep families.
//!
//! Each multi-curve family (`fig4a`, `fig5`, …) expands into one [`Scenario`]
//! per curve — one per subcarrier count, humidity level, or carrier frequency
//! — so the CLI can write one CSV per curve. `fig2` is the odd one out: it
//! sweeps modulation noise against subcarrier count with no channel at all,
//! so it gets its own small descriptor instead of a [`Scenario`].

use std::f64::consts::PI;

use crate::channel::NoiseMode;
use crate::modnoise::{CarrierPlan, ModulatorParams};
use crate::physics::ThermalEnvironment;
use crate::skr::{DetectionParams, WPolicy};

use super::{Scenario, ScenarioChannel, Spacing, SweepSpec, DEFAULT_SKR_FLOOR};

/// Shared modulator imperfections: every preset keeps the same I/Q imbalance
/// and drive level and varies only the modulation variance.
fn standard_modulator(v_mod: f64) -> ModulatorParams {
    ModulatorParams { mu: 0.01, a_sig: 1.0, kappa: 0.98, theta_rad: PI / 50.0, v_mod }
}

/// Metre-scale open-air link at 300 K ambient: absorption generated from the
/// bundled line list at the given humidity, thermal noise at the ambient
/// temperature.
#[allow(clippy::too_many_arguments)]
fn open_air_curve(
    name: String,
    f_i_ghz: f64,
    delta_f_ghz: f64,
    n: u32,
    v_mod: f64,
    rh_pct: f64,
    stop_m: f64,
) -> Scenario {
    Scenario {
        name,
        plan: CarrierPlan { f_i_hz: f_i_ghz * 1e9, delta_f_hz: delta_f_ghz * 1e9, n },
        modulator: standard_modulator(v_mod),
        channel: ScenarioChannel::OpenAir {
            spectrum_file: None,
            relative_humidity_pct: Some(rh_pct),
            air_temperature_k: None,
        },
        environment: ThermalEnvironment { temperature_k: 300.0 },
        detection: DetectionParams::default(),
        sweep: SweepSpec { start_m: 0.01, stop_m, points: 500, spacing: Spacing::Linear },
        noise_mode: NoiseMode::WorstCase,
        skr_floor: DEFAULT_SKR_FLOOR,
        w_policy: WPolicy::Ambient,
    }
}

/// Kilometre-scale evacuated link: diffraction-limited beam with 10 cm waist
/// and aperture, a cold environment setting the detection-side vacuum noise,
/// and the injected channel noise pinned to the vacuum floor W = 1.
fn vacuum_curve(
    name: String,
    f_i_ghz: f64,
    delta_f_ghz: f64,
    n: u32,
    v_mod: f64,
    temperature_k: f64,
    stop_m: f64,
) -> Scenario {
    Scenario {
        name,
        plan: CarrierPlan { f_i_hz: f_i_ghz * 1e9, delta_f_hz: delta_f_ghz * 1e9, n },
        modulator: standard_modulator(v_mod),
        channel: ScenarioChannel::Diffraction { beam_waist_m: 0.1, aperture_m: 0.1 },
        environment: ThermalEnvironment { temperature_k },
        detection: DetectionParams::default(),
        sweep: SweepSpec { start_m: 10.0, stop_m, points: 500, spacing: Spacing::Log },
        noise_mode: NoiseMode::WorstCase,
        skr_floor: DEFAULT_SKR_FLOOR,
        w_policy: WPolicy::Fixed(1.0),
    }
}

/// Subcarrier counts the multi-curve families sweep over.
pub const SUBCARRIER_FAMILY: [u32; 7] = [1, 4, 8, 16, 32, 64, 128];
/// Relative-humidity levels (percent) of the humidity families, driest first.
pub const HUMIDITY_LEVELS: [f64; 4] = [17.89, 36.79, 48.03, 70.84];

/// The preset family names accepted by `preset <name>`, in listing order.
pub fn preset_groups() -> &'static [(&'static str, &'static str)] {
    &[
        ("fig2", "worst-case modulation noise vs subcarrier count (no channel)"),
        ("fig4a", "300 GHz open air, 70.84% RH, V_mod 1000, N family"),
        ("fig4b", "300 GHz open air, 70.84% RH, V_mod 100, N family"),
        ("fig4c", "580 GHz open air, 70.84% RH, V_mod 1000, N family"),
        ("fig4d", "580 GHz open air, 70.84% RH, V_mod 100, N family"),
        ("fig4e", "780 GHz open air, 70.84% RH, V_mod 1000, N family"),
        ("fig4f", "780 GHz open air, 70.84% RH, V_mod 100, N family"),
        ("fig5", "580 GHz open air, V_mod 1000, humidity x {1,32} subcarriers"),
        ("fig6a", "780 GHz evacuated 30 K, V_mod 100, N family"),
        ("fig6b", "780 GHz evacuated 30 K, V_mod 1000, N family"),
        ("fig7", "evacuated 30 K, V_mod 100, N=32, carrier-frequency family"),
        ("fig8a", "840 GHz open air, 70.84% RH, {1,12} subcarriers x V_mod"),
        ("fig8b", "840 GHz open air, N=12, V_mod 1000, humidity family"),
        ("fig9", "840 GHz evacuated 25 K, V_mod 1000, N family"),
    ]
}

/// All sweepable preset curves in listing order, one scenario per curve.
pub fn builtin_presets() -> Vec<Scenario> {
    let mut out = Vec::new();
    for (group, f_i_ghz, v_mod, stop_m) in [
        ("fig4a", 300.0, 1000.0, 15.0),
        ("fig4b", 300.0, 100.0, 15.0),
        ("fig4c", 580.0, 1000.0, 10.0),
        ("fig4d", 580.0, 100.0, 10.0),
        ("fig4e", 780.0, 1000.0, 10.0),
        ("fig4f", 780.0, 100.0, 10.0),
    ] {
        for n in SUBCARRIER_FAMILY {
            out.push(open_air_curve(
                format!("{group}_n{n}"),
                f_i_ghz,
                5.0,
                n,
                v_mod,
                70.84,
                stop_m,
            ));
        }
    }
    for rh in HUMIDITY_LEVELS {
        for n in [1, 32] {
            out.push(open_air_curve(
                format!("fig5_rh{rh}_n{n}"),
                580.0,
                5.0,
                n,
                1000.0,
                rh,
                5.0,
            ));
        }
    }
    for (group, v_mod) in [("fig6a", 100.0), ("fig6b", 1000.0)] {
        for n in SUBCARRIER_FAMILY {
            out.push(vacuum_curve(format!("{group}_n{n}"), 780.0, 5.0, n, v_mod, 30.0, 3e5));
        }
    }
    for f_i_ghz in [600.0, 900.0, 2700.0, 8100.0] {
        out.push(vacuum_curve(
            format!("fig7_f{}thz", f_i_ghz / 1000.0),
            f_i_ghz,
            5.0,
            32,
            100.0,
            30.0,
            1e6,
        ));
    }
    for v_mod in [1000.0, 100.0] {
        for n in [1, 12] {
            out.push(open_air_curve(
                format!("fig8a_n{n}_vmod{v_mod}"),
                840.0,
                3.0,
                n,
                v_mod,
                70.84,
                10.0,
            ));
        }
    }
    for rh in HUMIDITY_LEVELS {
        out.push(open_air_curve(format!("fig8b_rh{rh}"), 840.0, 3.0, 12, 1000.0, rh, 10.0));
    }
    for n in [1, 4, 8, 12] {
        out.push(vacuum_curve(format!("fig9_n{n}"), 840.0, 3.0, n, 1000.0, 25.0, 1e5));
    }
    out
}

/// The curves belonging to one preset family, or a single curve when `name`
/// matches exactly. Empty when nothing matches (`fig2` has no sweep curves).
pub fn preset_scenarios(name: &str) -> Vec<Scenario> {
    builtin_presets()
        .into_iter()
        .filter(|s| s.name == name || (s.name.starts_with(name) && s.name[name.len()..].starts_with('_')))
        .collect()
}

/// The channel-free modulation-noise family: per-subcarrier noise curves for
/// a range of subcarrier counts on the 300 GHz plan, with the modulation
/// variance calibrated to place the worst-case noise scale.
#[derive(Clone, Debug, PartialEq)]
pub struct ModulationNoisePreset {
    pub f_i_hz: f64,
    pub delta_f_hz: f64,
    pub n_values: Vec<u32>,
    pub modulator: ModulatorParams,
}

impl ModulationNoisePreset {
    /// The carrier plan for one subcarrier count in the family.
    pub fn plan(&self, n: u32) -> CarrierPlan {
        CarrierPlan { f_i_hz: self.f_i_hz, delta_f_hz: self.delta_f_hz, n }
    }
}

/// The `fig2` preset: N from 10 to 120 in steps of 10 on the 300 GHz plan.
pub fn modulation_noise_preset() -> ModulationNoisePreset {
    ModulationNoisePreset {
        f_i_hz: 300e9,
        delta_f_hz: 5e9,
        n_values: (1..=12).map(|i| i * 10).collect(),
        modulator: standard_modulator(100.0),
    }
}
