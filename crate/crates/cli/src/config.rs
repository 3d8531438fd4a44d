//! TOML run configuration.
//!
//! Frequencies are written as ordinary frequencies with a unit suffix
//! (`"10 GHz"`, `"20 MHz"`); phases are plain radians.

use std::fmt;
use std::str::FromStr;

use anyhow::{bail, Context};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use twotone_core::units::hz;
use twotone_core::{DriveSpec, Quantity, SystemParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FreqUnit {
    Hz,
    KHz,
    MHz,
    GHz,
}

impl FreqUnit {
    fn scale(self) -> f64 {
        match self {
            FreqUnit::Hz => 1.0,
            FreqUnit::KHz => 1e3,
            FreqUnit::MHz => 1e6,
            FreqUnit::GHz => 1e9,
        }
    }

    fn name(self) -> &'static str {
        match self {
            FreqUnit::Hz => "Hz",
            FreqUnit::KHz => "kHz",
            FreqUnit::MHz => "MHz",
            FreqUnit::GHz => "GHz",
        }
    }
}

/// An ordinary frequency as written in the file. Keeps the unit so the
/// configuration serializes back to what was read.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frequency {
    pub value: f64,
    pub unit: FreqUnit,
}

impl Frequency {
    pub const fn new(value: f64, unit: FreqUnit) -> Self {
        Self { value, unit }
    }

    pub fn hz(&self) -> f64 {
        self.value * self.unit.scale()
    }

    /// Angular frequency in rad/s.
    pub fn angular(&self) -> f64 {
        hz(self.hz())
    }
}

impl fmt::Display for Frequency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.value, self.unit.name())
    }
}

impl FromStr for Frequency {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        let s = s.trim();
        let split = s
            .find(|c: char| c.is_ascii_alphabetic() && c != 'e' && c != 'E')
            .with_context(|| format!("frequency '{s}' needs a unit (Hz, kHz, MHz or GHz)"))?;
        let (number, unit) = s.split_at(split);
        let value: f64 = number
            .trim()
            .parse()
            .with_context(|| format!("invalid number in frequency '{s}'"))?;
        let unit = match unit.trim() {
            "Hz" => FreqUnit::Hz,
            "kHz" => FreqUnit::KHz,
            "MHz" => FreqUnit::MHz,
            "GHz" => FreqUnit::GHz,
            other => bail!("unknown frequency unit '{other}' in '{s}'"),
        };
        if !value.is_finite() {
            bail!("frequency '{s}' is not finite");
        }
        Ok(Self { value, unit })
    }
}

impl Serialize for Frequency {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Frequency {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(|e: anyhow::Error| serde::de::Error::custom(format!("{e:#}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SystemSection {
    pub cavity: Frequency,
    pub magnon: Frequency,
    pub coupling: Frequency,
    /// arg g in radians.
    pub coupling_phase: f64,
    pub kappa_c: Frequency,
    pub kappa_m: Frequency,
    pub kappa_1: Frequency,
    pub kappa_2: Frequency,
    pub kappa_3: Frequency,
    pub phi_1: f64,
    pub phi_2: f64,
    pub phi_3: f64,
    pub zeta: f64,
    pub phi_3p: f64,
}

impl Default for SystemSection {
    fn default() -> Self {
        use FreqUnit::*;
        Self {
            cavity: Frequency::new(10.0, GHz),
            magnon: Frequency::new(10.0, GHz),
            coupling: Frequency::new(20.0, MHz),
            coupling_phase: -std::f64::consts::FRAC_PI_2,
            kappa_c: Frequency::new(1.0, MHz),
            kappa_m: Frequency::new(1.0, MHz),
            kappa_1: Frequency::new(10.0, MHz),
            kappa_2: Frequency::new(10.0, MHz),
            kappa_3: Frequency::new(5.0, MHz),
            phi_1: 0.0,
            phi_2: 0.0,
            phi_3: 0.0,
            zeta: 0.0,
            phi_3p: 0.0,
        }
    }
}

impl SystemSection {
    pub fn to_params(&self) -> SystemParams {
        SystemParams {
            omega_c: self.cavity.angular(),
            omega_m: self.magnon.angular(),
            g_abs: self.coupling.angular(),
            g_arg: self.coupling_phase,
            kappa_c: self.kappa_c.angular(),
            kappa_m: self.kappa_m.angular(),
            kappa_1: self.kappa_1.angular(),
            kappa_2: self.kappa_2.angular(),
            kappa_3: self.kappa_3.angular(),
            phi_1: self.phi_1,
            phi_2: self.phi_2,
            phi_3: self.phi_3,
            zeta: self.zeta,
            phi_3p: self.phi_3p,
        }
    }
}

/// Port 3 drive. Exactly one of `delta` and `delta0` may be given; neither
/// means a single-tone drive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriveSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta0: Option<f64>,
    #[serde(default)]
    pub phi: f64,
    #[serde(default = "unit_amplitude")]
    pub amplitude: f64,
}

fn unit_amplitude() -> f64 {
    1.0
}

impl Default for DriveSection {
    fn default() -> Self {
        Self { delta: None, delta0: None, phi: 0.0, amplitude: 1.0 }
    }
}

impl DriveSection {
    pub fn to_drive(&self, params: &SystemParams) -> anyhow::Result<DriveSpec> {
        let drive = match (self.delta, self.delta0) {
            (Some(_), Some(_)) => bail!("drive: give either delta or delta0, not both"),
            (Some(delta), None) => DriveSpec::new(delta, self.phi),
            (None, Some(d0)) => {
                if !(d0 >= 0.0) {
                    bail!("drive: delta0 must be non-negative, got {d0}");
                }
                DriveSpec::from_effective(params, d0, self.phi)?
            }
            (None, None) => DriveSpec::new(0.0, self.phi),
        };
        let drive = drive.with_amplitude(self.amplitude);
        drive.validate()?;
        Ok(drive)
    }
}

/// Probe and magnon windows. Missing bounds default to `cavity ± 5|g|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probe_start: Option<Frequency>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probe_stop: Option<Frequency>,
    #[serde(default = "default_points")]
    pub probe_points: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub magnon_start: Option<Frequency>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub magnon_stop: Option<Frequency>,
    #[serde(default = "default_points")]
    pub magnon_points: usize,
}

fn default_points() -> usize {
    401
}

impl Default for SweepSection {
    fn default() -> Self {
        Self {
            probe_start: None,
            probe_stop: None,
            probe_points: default_points(),
            magnon_start: None,
            magnon_stop: None,
            magnon_points: default_points(),
        }
    }
}

/// Magnon frequencies listed by `poles`. Empty means 21 points across the
/// sweep window.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolesSection {
    #[serde(default)]
    pub magnon: Vec<Frequency>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifySection {
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "yes")]
    pub ode: bool,
    #[serde(default = "yes")]
    pub alignment: bool,
}

fn default_seed() -> u64 {
    twotone_core::verify::VerifyOptions::default().seed
}

fn yes() -> bool {
    true
}

impl Default for VerifySection {
    fn default() -> Self {
        Self { seed: default_seed(), ode: true, alignment: true }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default = "default_dir")]
    pub dir: String,
    /// Worker cap for sweeps; `TWOTONE_THREADS` overrides it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
}

fn default_dir() -> String {
    "out".into()
}

impl Default for OutputSection {
    fn default() -> Self {
        Self { dir: default_dir(), workers: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_quantity", with = "quantity_name")]
    pub quantity: Quantity,
    #[serde(default)]
    pub emit_plots: bool,
    #[serde(default)]
    pub system: SystemSection,
    #[serde(default)]
    pub drive: DriveSection,
    #[serde(default)]
    pub sweep: SweepSection,
    #[serde(default)]
    pub poles: PolesSection,
    #[serde(default)]
    pub verify: VerifySection,
    #[serde(default)]
    pub output: OutputSection,
}

fn default_quantity() -> Quantity {
    Quantity::R1
}

mod quantity_name {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Quantity, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(q)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Quantity, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            quantity: default_quantity(),
            emit_plots: false,
            system: SystemSection::default(),
            drive: DriveSection::default(),
            sweep: SweepSection::default(),
            poles: PolesSection::default(),
            verify: VerifySection::default(),
            output: OutputSection::default(),
        }
    }
}

impl RunConfig {
    /// Parses and validates a configuration.
    pub fn from_toml(text: &str) -> anyhow::Result<Self> {
        let config: RunConfig = toml::from_str(text).context("invalid configuration")?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_toml(&self) -> anyhow::Result<String> {
        Ok(toml::to_string(self)?)
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        let params = self.params();
        params.validate().context("system")?;
        self.drive.to_drive(&params)?;
        if self.sweep.probe_points == 0 || self.sweep.magnon_points == 0 {
            bail!("sweep: point counts must be positive");
        }
        let (probe, magnon) = self.axes();
        probe.validate().context("sweep probe window")?;
        magnon.validate().context("sweep magnon window")?;
        if self.output.workers == Some(0) {
            bail!("output: workers must be positive");
        }
        Ok(())
    }

    pub fn params(&self) -> SystemParams {
        self.system.to_params()
    }

    pub fn drive(&self) -> anyhow::Result<DriveSpec> {
        self.drive.to_drive(&self.params())
    }

    /// Probe and magnon axes in rad/s.
    pub fn axes(&self) -> (twotone_core::SweepAxis, twotone_core::SweepAxis) {
        use twotone_core::SweepAxis;
        let p = self.params();
        let half = 5.0 * p.g_abs;
        let s = &self.sweep;
        let bound = |f: Option<Frequency>, default: f64| f.map(|f| f.angular()).unwrap_or(default);
        let axis = |start: Option<Frequency>, stop: Option<Frequency>, points: usize| {
            let a = bound(start, p.omega_c - half);
            let b = bound(stop, p.omega_c + half);
            if points == 1 {
                SweepAxis::at(a)
            } else {
                SweepAxis::new(a, b, points)
            }
        };
        (
            axis(s.probe_start, s.probe_stop, s.probe_points),
            axis(s.magnon_start, s.magnon_stop, s.magnon_points),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frequency_parsing() {
        let f: Frequency = "10 GHz".parse().unwrap();
        assert_eq!(f, Frequency::new(10.0, FreqUnit::GHz));
        assert_eq!(f.hz(), 1e10);
        let f: Frequency = "2.5e3kHz".parse().unwrap();
        assert_eq!(f.hz(), 2.5e6);
        assert!("10".parse::<Frequency>().is_err());
        assert!("10 THz".parse::<Frequency>().is_err());
        assert!("ten MHz".parse::<Frequency>().is_err());
    }

    #[test]
    fn frequency_display_round_trips() {
        for s in ["10 GHz", "0.1 MHz", "-3 Hz", "12.345678901234567 kHz"] {
            let f: Frequency = s.parse().unwrap();
            assert_eq!(f.to_string().parse::<Frequency>().unwrap(), f);
        }
    }

    #[test]
    fn defaults_are_the_reference_parameters() {
        let c = RunConfig::default();
        let p = c.params();
        let d = SystemParams::default();
        for (a, b) in [(p.omega_c, d.omega_c), (p.g_abs, d.g_abs), (p.kappa_3, d.kappa_3)] {
            assert!((a - b).abs() <= 1e-15 * b);
        }
        assert_eq!(p.g_arg, d.g_arg);
    }

    #[test]
    fn empty_file_gives_defaults() {
        assert_eq!(RunConfig::from_toml("").unwrap(), RunConfig::default());
    }

    #[test]
    fn rejects_both_amplitudes() {
        let e = RunConfig::from_toml("[drive]\ndelta = 1.0\ndelta0 = 1.0\n").unwrap_err();
        assert!(format!("{e:#}").contains("not both"));
    }
}
