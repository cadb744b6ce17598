//! Scenario configuration, distance sweeps, and CSV emission.
//!
//! A [`Scenario`] is a strict-JSON description of one link: frequency plan,
//! modulator, channel, thermal environment, detection chain, and the distance
//! grid to sweep. [`run_sweep`] evaluates the OFDM key rate at every grid
//! point in parallel and reports the largest swept distance whose rate still
//! clears the configured floor. [`presets`] holds the built-in parameter
//! sets; the CLI writes one CSV per curve.

pub mod presets;

use std::io::{self, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::atmosphere::{
    builtin_water_lines, load_spectrum_table, save_spectrum_table, total_absorption_spectrum,
    ContinuumCoefficients, MoistAir, SpectralLine,
};
use crate::channel::{ChannelSpec, NoiseMode};
use crate::error::{Error, Result};
use crate::modnoise::{CarrierPlan, ModulatorParams};
use crate::physics::ThermalEnvironment;
use crate::skr::{ofdm_key_rate, DetectionParams, WPolicy};

/// Key-rate floor (bits per channel use) below which a distance no longer
/// counts as secure, when a scenario does not override it.
pub const DEFAULT_SKR_FLOOR: f64 = 1e-5;

fn default_skr_floor() -> f64 {
    DEFAULT_SKR_FLOOR
}

/// How the sweep grid spaces its samples between start and stop.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    Linear,
    Log,
}

/// Distance grid: `points` samples from `start_m` to `stop_m` inclusive.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub start_m: f64,
    pub stop_m: f64,
    pub points: u32,
    pub spacing: Spacing,
}

impl SweepSpec {
    fn validate_at(&self, path: &str) -> Result<()> {
        if !self.start_m.is_finite() || self.start_m < 0.0 {
            return Err(Error::validation(format!(
                "{path}.start_m: must be finite and >= 0, got {}",
                self.start_m
            )));
        }
        if !self.stop_m.is_finite() || self.stop_m <= self.start_m {
            return Err(Error::validation(format!(
                "{path}.stop_m: must be finite and exceed start_m, got {} (start_m {})",
                self.stop_m, self.start_m
            )));
        }
        if self.points < 2 {
            return Err(Error::validation(format!(
                "{path}.points: must be >= 2, got {}",
                self.points
            )));
        }
        if self.spacing == Spacing::Log && self.start_m == 0.0 {
            return Err(Error::validation(format!(
                "{path}.spacing: log spacing requires start_m > 0"
            )));
        }
        Ok(())
    }

    /// The swept distances, ascending; the first sample is exactly `start_m`
    /// and the last exactly `stop_m`.
    pub fn distances(&self) -> Vec<f64> {
        let n = self.points as usize;
        let mut out = Vec::with_capacity(n);
        match self.spacing {
            Spacing::Linear => {
                let step = (self.stop_m - self.start_m) / (n - 1) as f64;
                for i in 0..n {
                    out.push(self.start_m + step * i as f64);
                }
            }
            Spacing::Log => {
                let step = (self.stop_m / self.start_m).ln() / (n - 1) as f64;
                for i in 0..n {
                    out.push(self.start_m * (step * i as f64).exp());
                }
            }
        }
        *out.last_mut().expect("points >= 2") = self.stop_m;
        out
    }
}

/// Channel description as written in scenario JSON. An open-air link either
/// points at a saved absorption table or carries the relative humidity needed
/// to generate one from the bundled water-vapour line list; the other two
/// variants map directly onto the physics-level channel.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ScenarioChannel {
    OpenAir {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        spectrum_file: Option<PathBuf>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        relative_humidity_pct: Option<f64>,
        /// Temperature of the absorbing air column when generating a table
        /// from `relative_humidity_pct`. Defaults to the 296 K spectroscopy
        /// reference, which is also where the humidity-to-pressure
        /// conversion is tabulated; the scenario's `environment` temperature
        /// only sets the detection-side thermal noise.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        air_temperature_k: Option<f64>,
    },
    Diffraction {
        beam_waist_m: f64,
        aperture_m: f64,
    },
    Fixed {
        transmissivity: f64,
    },
}

impl ScenarioChannel {
    fn validate_at(&self, path: &str) -> Result<()> {
        match self {
            ScenarioChannel::OpenAir { spectrum_file, relative_humidity_pct, air_temperature_k } => {
                match (spectrum_file, relative_humidity_pct) {
                    (Some(_), Some(_)) | (None, None) => Err(Error::validation(format!(
                        "{path}: open_air requires exactly one of spectrum_file or \
                         relative_humidity_pct"
                    ))),
                    (Some(_), None) if air_temperature_k.is_some() => {
                        Err(Error::validation(format!(
                            "{path}.air_temperature_k: only applies when generating from \
                             relative_humidity_pct"
                        )))
                    }
                    (None, Some(rh)) if !rh.is_finite() || !(0.0..=100.0).contains(rh) => {
                        Err(Error::validation(format!(
                            "{path}.relative_humidity_pct: must be within [0, 100], got {rh}"
                        )))
                    }
                    (None, Some(_)) => match air_temperature_k {
                        Some(t) if !t.is_finite() || *t <= 0.0 => Err(Error::validation(format!(
                            "{path}.air_temperature_k: must be positive and finite, got {t}"
                        ))),
                        _ => Ok(()),
                    },
                    _ => Ok(()),
                }
            }
            ScenarioChannel::Diffraction { beam_waist_m, aperture_m } => {
                ChannelSpec::Diffraction { beam_waist_m: *beam_waist_m, aperture_m: *aperture_m }
                    .validate()
                    .map_err(|e| e.annotate(path))
            }
            ScenarioChannel::Fixed { transmissivity } => {
                ChannelSpec::Fixed { transmissivity: *transmissivity }
                    .validate()
                    .map_err(|e| e.annotate(path))
            }
        }
    }

    /// Materialize the physics-level channel. A generated open-air spectrum
    /// is tabulated at exactly the plan's subcarrier frequencies, so later
    /// lookups land on grid points and interpolation never enters; when
    /// `cache_dir` is given (typically the output directory) the table is
    /// persisted under a parameter-hash filename and reused by later runs.
    pub fn resolve(
        &self,
        plan: &CarrierPlan,
        cache_dir: Option<&Path>,
    ) -> Result<ChannelSpec> {
        match self {
            ScenarioChannel::OpenAir { spectrum_file: Some(path), .. } => {
                let text =
                    std::fs::read_to_string(path).map_err(|e| Error::io(path.clone(), e))?;
                Ok(ChannelSpec::OpenAir { spectrum: load_spectrum_table(&text)? })
            }
            ScenarioChannel::OpenAir {
                spectrum_file: None,
                relative_humidity_pct: Some(rh),
                air_temperature_k,
            } => {
                let air = MoistAir::at_relative_humidity(
                    *rh,
                    air_temperature_k.unwrap_or(crate::atmosphere::REFERENCE_TEMPERATURE_K),
                )?;
                let coeffs = ContinuumCoefficients::default();
                let lines = builtin_water_lines();
                let spectrum = match cache_dir {
                    Some(dir) => {
                        let key = spectrum_cache_key(plan, &air, &coeffs, lines);
                        let file = dir.join(format!("spectrum_{key:016x}.csv"));
                        if file.exists() {
                            let text = std::fs::read_to_string(&file)
                                .map_err(|e| Error::io(file.clone(), e))?;
                            load_spectrum_table(&text)?
                        } else {
                            let spectrum = total_absorption_spectrum(
                                &plan.frequencies(),
                                lines,
                                &air,
                                &coeffs,
                            )?;
                            std::fs::create_dir_all(dir)
                                .map_err(|e| Error::io(dir.to_path_buf(), e))?;
                            std::fs::write(&file, save_spectrum_table(&spectrum))
                                .map_err(|e| Error::io(file.clone(), e))?;
                            spectrum
                        }
                    }
                    None => {
                        total_absorption_spectrum(&plan.frequencies(), lines, &air, &coeffs)?
                    }
                };
                Ok(ChannelSpec::OpenAir { spectrum })
            }
            ScenarioChannel::OpenAir { .. } => Err(Error::validation(
                "open_air requires exactly one of spectrum_file or relative_humidity_pct"
                    .to_string(),
            )),
            ScenarioChannel::Diffraction { beam_waist_m, aperture_m } => {
                Ok(ChannelSpec::Diffraction {
                    beam_waist_m: *beam_waist_m,
                    aperture_m: *aperture_m,
                })
            }
            ScenarioChannel::Fixed { transmissivity } => {
                Ok(ChannelSpec::Fixed { transmissivity: *transmissivity })
            }
        }
    }
}

/// 64-bit FNV-1a accumulator used to content-address generated spectra.
struct Fnv(u64);

impl Fnv {
    fn new() -> Self {
        Fnv(0xcbf2_9ce4_8422_2325)
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 = (self.0 ^ u64::from(b)).wrapping_mul(0x100_0000_01b3);
        }
    }

    fn write_f64(&mut self, v: f64) {
        self.write(&v.to_bits().to_le_bytes());
    }
}

fn spectrum_cache_key(
    plan: &CarrierPlan,
    air: &MoistAir,
    coeffs: &ContinuumCoefficients,
    lines: &[SpectralLine],
) -> u64 {
    let mut h = Fnv::new();
    h.write_f64(plan.f_i_hz);
    h.write_f64(plan.delta_f_hz);
    h.write(&plan.n.to_le_bytes());
    h.write_f64(air.water_pressure_torr);
    h.write_f64(air.air_pressure_torr);
    h.write_f64(air.temperature_k);
    h.write_f64(coeffs.c_self);
    h.write_f64(coeffs.c_foreign);
    for line in lines {
        h.write_f64(line.center);
        h.write_f64(line.intensity);
        h.write_f64(line.air_halfwidth);
        h.write_f64(line.self_halfwidth);
        h.write_f64(line.lower_state_energy);
        h.write_f64(line.temp_exponent);
        h.write_f64(line.pressure_shift);
    }
    h.0
}

/// One complete simulation: everything needed to sweep the key rate over
/// distance. Parses from strict JSON; omitted detection, noise-mode, floor,
/// and thermal-noise-policy fields take the documented defaults.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub plan: CarrierPlan,
    pub modulator: ModulatorParams,
    pub channel: ScenarioChannel,
    pub environment: ThermalEnvironment,
    #[serde(default)]
    pub detection: DetectionParams,
    pub sweep: SweepSpec,
    #[serde(default)]
    pub noise_mode: NoiseMode,
    #[serde(default = "default_skr_floor")]
    pub skr_floor: f64,
    #[serde(default)]
    pub w_policy: WPolicy,
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        if self.name.is_empty() {
            return Err(Error::validation("$.name: must not be empty".to_string()));
        }
        if self.name.contains(['/', '\\', '\0']) {
            return Err(Error::validation(format!(
                "$.name: must not contain path separators, got {:?}",
                self.name
            )));
        }
        self.plan.validate().map_err(|e| e.annotate("$.plan"))?;
        self.modulator.validate().map_err(|e| e.annotate("$.modulator"))?;
        self.channel.validate_at("$.channel")?;
        ThermalEnvironment::new(self.environment.temperature_k)
            .map_err(|e| e.annotate("$.environment"))?;
        self.detection.validate().map_err(|e| e.annotate("$.detection"))?;
        self.sweep.validate_at("$.sweep")?;
        if !self.skr_floor.is_finite() || self.skr_floor <= 0.0 {
            return Err(Error::validation(format!(
                "$.skr_floor: must be finite and > 0, got {}",
                self.skr_floor
            )));
        }
        self.w_policy.validate().map_err(|e| e.annotate("$.w_policy"))?;
        Ok(())
    }
}

/// Parse and validate a scenario from UTF-8 JSON bytes. Errors name the JSON
/// path of the offending field, and unknown fields are rejected outright so a
/// typo cannot silently fall back to a default.
pub fn parse_scenario(bytes: &[u8]) -> Result<Scenario> {
    let mut de = serde_json::Deserializer::from_slice(bytes);
    let scenario: Scenario = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        if path == "." {
            Error::validation(format!("scenario JSON: {inner}"))
        } else {
            Error::validation(format!("$.{path}: {inner}"))
        }
    })?;
    de.end()
        .map_err(|e| Error::validation(format!("scenario JSON: {e}")))?;
    scenario.validate()?;
    Ok(scenario)
}

/// One evaluated grid point: total rate plus the unclamped per-subcarrier
/// rates (index k−1; negative entries contribute nothing to the total).
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub distance_m: f64,
    pub r_ofdm: f64,
    pub r_k: Vec<f64>,
}

/// A swept curve, rows ascending in distance, plus the largest swept distance
/// whose total rate still clears the scenario's floor (grid-resolution only,
/// no interpolation).
#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub max_secure_distance_m: Option<f64>,
}

/// Evaluate a scenario over its whole distance grid, materializing the
/// channel first (loading or generating an absorption table if the link is
/// open-air). `cache_dir` persists generated tables for reuse.
pub fn run_sweep(scenario: &Scenario, cache_dir: Option<&Path>) -> Result<SweepResult> {
    scenario.validate()?;
    let spec = scenario.channel.resolve(&scenario.plan, cache_dir)?;
    run_sweep_with_channel(scenario, &spec)
}

/// Sweep against an already materialized channel. Grid points evaluate in
/// parallel; row order and every value are independent of the thread count.
pub fn run_sweep_with_channel(scenario: &Scenario, spec: &ChannelSpec) -> Result<SweepResult> {
    scenario.validate()?;
    spec.validate()?;
    let rows = scenario
        .sweep
        .distances()
        .into_par_iter()
        .map(|d| {
            let breakdown = ofdm_key_rate(
                &scenario.plan,
                &scenario.modulator,
                spec,
                &scenario.environment,
                &scenario.detection,
                d,
                scenario.noise_mode,
                &scenario.w_policy,
            )
            .map_err(|e| e.annotate(format!("scenario '{}' at d={d} m", scenario.name)))?;
            Ok(SweepRow {
                distance_m: d,
                r_ofdm: breakdown.r_ofdm,
                r_k: breakdown.per_subcarrier.iter().map(|row| row.r_k).collect(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let max_secure_distance_m = rows
        .iter()
        .rev()
        .find(|row| row.r_ofdm >= scenario.skr_floor)
        .map(|row| row.distance_m);
    Ok(SweepResult { rows, max_secure_distance_m })
}

/// Write a sweep as CSV: a header, one row per grid point, and a trailing
/// `# max_secure_distance_m=` comment line. `wide` appends one `r_k_<k>`
/// column per subcarrier. Floats use shortest round-trip formatting and lines
/// end in LF, so equal results give byte-identical output.
pub fn emit_csv(result: &SweepResult, wide: bool, out: &mut impl Write) -> io::Result<()> {
    out.write_all(b"distance_m,r_ofdm_bits")?;
    if wide {
        let n = result.rows.first().map_or(0, |row| row.r_k.len());
        for k in 1..=n {
            write!(out, ",r_k_{k}")?;
        }
    }
    out.write_all(b"\n")?;
    for row in &result.rows {
        write!(out, "{},{}", row.distance_m, row.r_ofdm)?;
        if wide {
            for r in &row.r_k {
                write!(out, ",{r}")?;
            }
        }
        out.write_all(b"\n")?;
    }
    match result.max_secure_distance_m {
        Some(d) => writeln!(out, "# max_secure_distance_m={d}")?,
        None => out.write_all(b"# max_secure_distance_m=none\n")?,
    }
    Ok(())
}

/// [`emit_csv`] into a string, for in-memory comparison and tests.
pub fn csv_string(result: &SweepResult, wide: bool) -> String {
    let mut buf = Vec::new();
    emit_csv(result, wide, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("CSV output is UTF-8")
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Cold low-loss link with the channel noise pinned at the vacuum floor:
    /// a regime where every subcarrier keeps a comfortably positive rate.
    fn fixed_scenario(transmissivity: f64) -> Scenario {
        Scenario {
            name: "unit".to_string(),
            plan: CarrierPlan { f_i_hz: 780e9, delta_f_hz: 5e9, n: 2 },
            modulator: ModulatorParams {
                mu: 0.01,
                a_sig: 1.0,
                kappa: 0.98,
                theta_rad: std::f64::consts::PI / 50.0,
                v_mod: 1000.0,
            },
            channel: ScenarioChannel::Fixed { transmissivity },
            environment: ThermalEnvironment { temperature_k: 30.0 },
            detection: DetectionParams::default(),
            sweep: SweepSpec { start_m: 1.0, stop_m: 5.0, points: 5, spacing: Spacing::Linear },
            noise_mode: NoiseMode::WorstCase,
            skr_floor: DEFAULT_SKR_FLOOR,
            w_policy: WPolicy::Fixed(1.0),
        }
    }

    #[test]
    fn minimal_document_gets_documented_defaults() {
        let json = br#"{
            "name": "minimal",
            "plan": {"f_i_hz": 3e11, "delta_f_hz": 5e9, "n": 4},
            "modulator": {"mu": 0.01, "a_sig": 1.0, "kappa": 0.98,
                          "theta_rad": 0.0628, "v_mod": 1000.0},
            "channel": {"type": "fixed", "transmissivity": 0.5},
            "environment": {"temperature_k": 300.0},
            "sweep": {"start_m": 0.01, "stop_m": 10.0, "points": 2, "spacing": "linear"}
        }"#;
        let s = parse_scenario(json).unwrap();
        assert_eq!(s.detection, DetectionParams::default());
        assert_eq!(s.detection.eta, 0.1);
        assert_eq!(s.detection.s_trusted, 1.0);
        assert_eq!(s.detection.beta, 1.0);
        assert_eq!(s.noise_mode, NoiseMode::WorstCase);
        assert_eq!(s.skr_floor, 1e-5);
        assert_eq!(s.w_policy, WPolicy::Ambient);
    }

    #[test]
    fn single_point_sweep_is_rejected_with_its_path() {
        let mut s = fixed_scenario(0.5);
        s.sweep.points = 1;
        let msg = s.validate().unwrap_err().to_string();
        assert!(msg.contains("$.sweep.points"), "message was: {msg}");
    }

    #[test]
    fn unknown_field_is_rejected_with_its_path() {
        let json = br#"{
            "name": "typo",
            "plan": {"f_i_hz": 3e11, "delta_f_hz": 5e9, "n": 4, "banana": 1},
            "modulator": {"mu": 0.01, "a_sig": 1.0, "kappa": 0.98,
                          "theta_rad": 0.0628, "v_mod": 1000.0},
            "channel": {"type": "fixed", "transmissivity": 0.5},
            "environment": {"temperature_k": 300.0},
            "sweep": {"start_m": 0.01, "stop_m": 10.0, "points": 2, "spacing": "linear"}
        }"#;
        let err = parse_scenario(json).unwrap_err().to_string();
        assert!(err.contains("$.plan"), "message was: {err}");
        assert!(err.contains("banana"), "message was: {err}");
    }

    #[test]
    fn trailing_garbage_is_rejected() {
        let mut json = serde_json::to_vec(&fixed_scenario(0.5)).unwrap();
        json.extend_from_slice(b" {}");
        assert!(parse_scenario(&json).is_err());
    }

    #[test]
    fn open_air_needs_exactly_one_source() {
        let mut s = fixed_scenario(0.5);
        s.channel =
            ScenarioChannel::OpenAir {
                spectrum_file: None,
                relative_humidity_pct: None,
                air_temperature_k: None,
            };
        assert!(s.validate().unwrap_err().to_string().contains("$.channel"));
        s.channel = ScenarioChannel::OpenAir {
            spectrum_file: Some(PathBuf::from("x.csv")),
            relative_humidity_pct: Some(50.0),
            air_temperature_k: None,
        };
        assert!(s.validate().is_err());
    }

    #[test]
    fn scenario_json_round_trips() {
        let original = fixed_scenario(0.25);
        let json = serde_json::to_vec_pretty(&original).unwrap();
        let reparsed = parse_scenario(&json).unwrap();
        assert_eq!(reparsed, original);
    }

    #[test]
    fn linear_and_log_grids_hit_both_endpoints() {
        let lin = SweepSpec { start_m: 0.01, stop_m: 15.0, points: 500, spacing: Spacing::Linear };
        let log = SweepSpec { start_m: 10.0, stop_m: 3e5, points: 500, spacing: Spacing::Log };
        for spec in [lin, log] {
            let d = spec.distances();
            assert_eq!(d.len(), 500);
            assert_eq!(d[0], spec.start_m);
            assert_eq!(d[499], spec.stop_m);
            assert!(d.windows(2).all(|p| p[1] > p[0]));
        }
    }

    #[test]
    fn fixed_channel_sweep_is_flat_and_secure_to_the_end() {
        let s = fixed_scenario(0.9);
        let result = run_sweep(&s, None).unwrap();
        assert_eq!(result.rows.len(), 5);
        let first = result.rows[0].r_ofdm;
        assert!(first > 0.0);
        for row in &result.rows {
            assert_eq!(row.r_ofdm, first);
            assert_eq!(row.r_k.len(), 2);
        }
        assert_eq!(result.max_secure_distance_m, Some(5.0));
    }

    #[test]
    fn floor_above_the_curve_means_no_secure_distance() {
        let mut s = fixed_scenario(0.9);
        let base = run_sweep(&s, None).unwrap();
        s.skr_floor = base.rows[0].r_ofdm * 2.0;
        let result = run_sweep(&s, None).unwrap();
        assert_eq!(result.max_secure_distance_m, None);
        assert!(csv_string(&result, false).ends_with("# max_secure_distance_m=none\n"));
    }

    #[test]
    fn secure_distance_is_monotone_in_the_floor() {
        let mut s = fixed_scenario(0.9);
        s.channel = ScenarioChannel::Diffraction { beam_waist_m: 0.1, aperture_m: 0.1 };
        s.sweep = SweepSpec { start_m: 10.0, stop_m: 1e5, points: 40, spacing: Spacing::Log };
        s.modulator.v_mod = 1000.0;
        s.w_policy = WPolicy::Fixed(1.0);
        let mut previous = f64::INFINITY;
        for floor in [1e-5, 1e-3, 1e-1, 10.0] {
            s.skr_floor = floor;
            let d = run_sweep(&s, None)
                .unwrap()
                .max_secure_distance_m
                .unwrap_or(0.0);
            assert!(d <= previous, "floor {floor} gave {d} > {previous}");
            previous = d;
        }
    }

    #[test]
    fn csv_layout_and_wide_columns() {
        let result = SweepResult {
            rows: vec![
                SweepRow { distance_m: 0.5, r_ofdm: 2.25, r_k: vec![1.5, 0.75] },
                SweepRow { distance_m: 1.0, r_ofdm: 1.0, r_k: vec![1.25, -0.25] },
            ],
            max_secure_distance_m: Some(1.0),
        };
        let narrow = csv_string(&result, false);
        assert_eq!(
            narrow,
            "distance_m,r_ofdm_bits\n0.5,2.25\n1,1\n# max_secure_distance_m=1\n"
        );
        let wide = csv_string(&result, true);
        assert_eq!(
            wide,
            "distance_m,r_ofdm_bits,r_k_1,r_k_2\n0.5,2.25,1.5,0.75\n1,1,1.25,-0.25\n\
             # max_secure_distance_m=1\n"
        );
    }

    #[test]
    fn generated_spectrum_is_cached_and_reused_identically() {
        let dir = tempfile::tempdir().unwrap();
        let mut s = fixed_scenario(0.5);
        s.channel =
            ScenarioChannel::OpenAir {
                spectrum_file: None,
                relative_humidity_pct: Some(70.84),
                air_temperature_k: None,
            };
        s.sweep = SweepSpec { start_m: 0.01, stop_m: 2.0, points: 4, spacing: Spacing::Linear };
        let first = run_sweep(&s, Some(dir.path())).unwrap();
        let cached: Vec<_> = std::fs::read_dir(dir.path())
            .unwrap()
            .map(|e| e.unwrap().file_name().into_string().unwrap())
            .collect();
        assert_eq!(cached.len(), 1);
        assert!(cached[0].starts_with("spectrum_") && cached[0].ends_with(".csv"));
        let second = run_sweep(&s, Some(dir.path())).unwrap();
        assert_eq!(first, second);
        let uncached = run_sweep(&s, None).unwrap();
        assert_eq!(first, uncached);
    }

    #[test]
    fn cached_spectrum_matches_direct_subcarrier_evaluation() {
        let plan = CarrierPlan { f_i_hz: 580e9, delta_f_hz: 5e9, n: 3 };
        let channel =
            ScenarioChannel::OpenAir {
                spectrum_file: None,
                relative_humidity_pct: Some(17.89),
                air_temperature_k: None,
            };
        let spec = channel.resolve(&plan, None).unwrap();
        let ChannelSpec::OpenAir { spectrum } = &spec else {
            panic!("open-air resolution must produce an open-air channel")
        };
        let air =
            MoistAir::at_relative_humidity(17.89, crate::atmosphere::REFERENCE_TEMPERATURE_K)
                .unwrap();
        for &f in &plan.frequencies() {
            let direct = total_absorption_spectrum(
                &[f],
                builtin_water_lines(),
                &air,
                &ContinuumCoefficients::default(),
            )
            .unwrap();
            assert_eq!(
                crate::atmosphere::absorption_at(spectrum, f).unwrap(),
                direct.alpha_per_m()[0]
            );
        }
    }
}
