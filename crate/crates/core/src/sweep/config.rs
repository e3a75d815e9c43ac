//! Sweep configuration: `key = value` lines with optional `[ed]`, `[fit]`
//! and `[preset figN]` sections.
//!
//! ```text
//! # nearest-neighbour concurrence bounds
//! gamma = 1, 0.8, 0.4
//! lambda_min = 0
//! lambda_max = 3
//! lambda_step = 0.01
//! n = 1
//! states = symmetric, broken
//! output = out/fig8
//!
//! [preset fig8]
//! gamma = 0.6
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use sha2::{Digest, Sha256};

use super::preset::Preset;
use crate::ed::Boundary;
use crate::error::{Error, Result};
use crate::params::StateKind;

/// Quantities a sweep can evaluate beyond the correlators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Measure {
    Concurrence,
    Negativity,
    G1,
    G2,
    Energy,
}

impl Measure {
    pub const ALL: [Measure; 5] = [Measure::Concurrence, Measure::Negativity, Measure::G1, Measure::G2, Measure::Energy];

    pub fn as_str(&self) -> &'static str {
        match self {
            Measure::Concurrence => "concurrence",
            Measure::Negativity => "negativity",
            Measure::G1 => "g1",
            Measure::G2 => "g2",
            Measure::Energy => "energy",
        }
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "concurrence" | "c" => Ok(Measure::Concurrence),
            "negativity" | "n" => Ok(Measure::Negativity),
            "g1" => Ok(Measure::G1),
            "g2" => Ok(Measure::G2),
            "energy" => Ok(Measure::Energy),
            other => Err(Error::Config(format!("unknown measure `{other}`"))),
        }
    }
}

/// Settings of the exact-diagonalization cross-check.
#[derive(Debug, Clone, PartialEq)]
pub struct EdConfig {
    pub sites: usize,
    pub boundary: Boundary,
    pub gammas: Vec<f64>,
    pub lambdas: Vec<f64>,
    pub ns: Vec<usize>,
    /// Allowed |ED − thermodynamic| per correlator.
    pub tolerance: f64,
}

impl Default for EdConfig {
    fn default() -> Self {
        EdConfig {
            sites: 12,
            boundary: Boundary::Periodic,
            gammas: vec![0.4, 1.0],
            lambdas: vec![0.5, 1.5, 2.0],
            ns: vec![1, 2],
            tolerance: 0.05,
        }
    }
}

/// Settings of the entanglement-length fits.
#[derive(Debug, Clone, PartialEq)]
pub struct FitConfig {
    pub gammas: Vec<f64>,
    pub lambdas: Vec<f64>,
    pub state: StateKind,
    pub n_min: usize,
    pub n_max: usize,
}

impl Default for FitConfig {
    fn default() -> Self {
        FitConfig { gammas: vec![1.0], lambdas: vec![1.2, 1.0], state: StateKind::Symmetric, n_min: 4, n_max: 20 }
    }
}

/// Overrides carried by a `[preset figN]` section.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PresetOverride {
    entries: BTreeMap<String, (usize, String)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub gammas: Vec<f64>,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub lambda_step: f64,
    pub ns: Vec<usize>,
    pub states: Vec<StateKind>,
    pub measures: Vec<Measure>,
    pub output: PathBuf,
    pub preset: Option<Preset>,
    /// Write central-difference derivative columns next to the table.
    pub derivatives: bool,
    pub ed: EdConfig,
    pub fit: FitConfig,
    pub preset_overrides: BTreeMap<Preset, PresetOverride>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            gammas: vec![1.0],
            lambda_min: 0.0,
            lambda_max: 3.0,
            lambda_step: 0.01,
            ns: vec![1],
            states: vec![StateKind::Symmetric, StateKind::Broken],
            measures: Measure::ALL.to_vec(),
            output: PathBuf::from("out"),
            preset: None,
            derivatives: false,
            ed: EdConfig::default(),
            fit: FitConfig::default(),
            preset_overrides: BTreeMap::new(),
        }
    }
}

enum Section {
    Main,
    Ed,
    Fit,
    Preset(Preset),
}

fn parse_list<T: FromStr>(value: &str, line: usize, key: &str) -> Result<Vec<T>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<T>().map_err(|_| Error::Config(format!("line {line}: bad value `{s}` for `{key}`"))))
        .collect()
}

fn parse_one<T: FromStr>(value: &str, line: usize, key: &str) -> Result<T> {
    value.trim().parse::<T>().map_err(|_| Error::Config(format!("line {line}: bad value `{value}` for `{key}`")))
}

fn parse_bool(value: &str, line: usize, key: &str) -> Result<bool> {
    match value.trim().to_ascii_lowercase().as_str() {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        _ => Err(Error::Config(format!("line {line}: `{key}` expects a boolean, got `{value}`"))),
    }
}

fn parse_states(value: &str, line: usize) -> Result<Vec<StateKind>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<StateKind>().map_err(|e| Error::Config(format!("line {line}: {e}"))))
        .collect()
}

fn parse_measures(value: &str, line: usize) -> Result<Vec<Measure>> {
    let mut out = value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<Measure>().map_err(|e| Error::Config(format!("line {line}: {e}"))))
        .collect::<Result<Vec<_>>>()?;
    out.sort();
    out.dedup();
    Ok(out)
}

impl SweepConfig {
    /// Parses config text. Relative output paths are resolved against `base`.
    pub fn parse(text: &str, base: Option<&Path>) -> Result<Self> {
        let mut cfg = SweepConfig::default();
        let mut section = Section::Main;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            if let Some(header) = content.strip_prefix('[') {
                let header = header
                    .strip_suffix(']')
                    .ok_or_else(|| Error::Config(format!("line {line}: unterminated section header")))?
                    .trim();
                let mut words = header.split_whitespace();
                section = match (words.next(), words.next(), words.next()) {
                    (Some("ed"), None, None) => Section::Ed,
                    (Some("fit"), None, None) => Section::Fit,
                    (Some("preset"), Some(name), None) => {
                        let p: Preset = name.parse().map_err(|e| Error::Config(format!("line {line}: {e}")))?;
                        cfg.preset_overrides.entry(p).or_default();
                        Section::Preset(p)
                    }
                    _ => return Err(Error::Config(format!("line {line}: unknown section `[{header}]`"))),
                };
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {line}: expected `key = value`")))?;
            let (key, value) = (key.trim(), value.trim());
            match &section {
                Section::Main => cfg.set_main(key, value, line)?,
                Section::Ed => cfg.set_ed(key, value, line)?,
                Section::Fit => cfg.set_fit(key, value, line)?,
                Section::Preset(p) => {
                    // validated when the preset is applied
                    let mut probe = SweepConfig::default();
                    if !probe.set_grid(key, value, line)? {
                        return Err(Error::Config(format!("line {line}: `{key}` cannot be set in a preset section")));
                    }
                    cfg.preset_overrides
                        .get_mut(p)
                        .expect("section registered")
                        .entries
                        .insert(key.to_string(), (line, value.to_string()));
                }
            }
        }
        if let Some(base) = base {
            if cfg.output.is_relative() {
                cfg.output = base.join(&cfg.output);
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads and parses a config file.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text, path.parent())
    }

    fn set_grid(&mut self, key: &str, value: &str, line: usize) -> Result<bool> {
        match key {
            "gamma" => self.gammas = parse_list(value, line, key)?,
            "lambda_min" => self.lambda_min = parse_one(value, line, key)?,
            "lambda_max" => self.lambda_max = parse_one(value, line, key)?,
            "lambda_step" => self.lambda_step = parse_one(value, line, key)?,
            "n" => self.ns = parse_list(value, line, key)?,
            "states" => self.states = parse_states(value, line)?,
            "measures" => self.measures = parse_measures(value, line)?,
            _ => return Ok(false),
        }
        Ok(true)
    }

    fn set_main(&mut self, key: &str, value: &str, line: usize) -> Result<()> {
        if self.set_grid(key, value, line)? {
            return Ok(());
        }
        match key {
            "output" => self.output = PathBuf::from(value),
            "preset" => {
                self.preset = Some(value.parse().map_err(|e| Error::Config(format!("line {line}: {e}")))?);
            }
            "derivatives" => self.derivatives = parse_bool(value, line, key)?,
            _ => return Err(Error::Config(format!("line {line}: unknown key `{key}`"))),
        }
        Ok(())
    }

    fn set_ed(&mut self, key: &str, value: &str, line: usize) -> Result<()> {
        match key {
            "sites" => self.ed.sites = parse_one(value, line, key)?,
            "boundary" => self.ed.boundary = value.parse().map_err(|e| Error::Config(format!("line {line}: {e}")))?,
            "gamma" => self.ed.gammas = parse_list(value, line, key)?,
            "lambda" => self.ed.lambdas = parse_list(value, line, key)?,
            "n" => self.ed.ns = parse_list(value, line, key)?,
            "tolerance" => self.ed.tolerance = parse_one(value, line, key)?,
            _ => return Err(Error::Config(format!("line {line}: unknown key `{key}` in [ed]"))),
        }
        Ok(())
    }

    fn set_fit(&mut self, key: &str, value: &str, line: usize) -> Result<()> {
        match key {
            "gamma" => self.fit.gammas = parse_list(value, line, key)?,
            "lambda" => self.fit.lambdas = parse_list(value, line, key)?,
            "state" => self.fit.state = value.parse().map_err(|e| Error::Config(format!("line {line}: {e}")))?,
            "n_min" => self.fit.n_min = parse_one(value, line, key)?,
            "n_max" => self.fit.n_max = parse_one(value, line, key)?,
            _ => return Err(Error::Config(format!("line {line}: unknown key `{key}` in [fit]"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if !(self.lambda_step > 0.0 && self.lambda_step.is_finite()) {
            return bad(format!("lambda_step must be positive, got {}", self.lambda_step));
        }
        if !(self.lambda_min >= 0.0 && self.lambda_max.is_finite()) {
            return bad(format!("lambda range [{}, {}] must be finite and non-negative", self.lambda_min, self.lambda_max));
        }
        for &g in self.gammas.iter().chain(&self.ed.gammas).chain(&self.fit.gammas) {
            if !(g > 0.0 && g <= 1.0) {
                return bad(format!("gamma {g} outside (0, 1]"));
            }
        }
        if self.ns.iter().chain(&self.ed.ns).any(|&n| n == 0) {
            return bad("separations must be at least 1".into());
        }
        if self.states.is_empty() {
            return bad("no state kinds selected".into());
        }
        if self.ed.lambdas.iter().any(|&l| !(l >= 0.0)) {
            return bad("[ed] lambda values must be non-negative".into());
        }
        if self.ed.ns.iter().any(|&n| n >= self.ed.sites) {
            return bad(format!("[ed] separations must be below sites = {}", self.ed.sites));
        }
        if self.fit.n_min < 1 || self.fit.n_min + 2 > self.fit.n_max {
            return bad(format!("[fit] window {}..={} needs at least three points", self.fit.n_min, self.fit.n_max));
        }
        if self.fit.lambdas.iter().any(|&l| !(l > 0.0)) {
            return bad("[fit] lambda values must be positive".into());
        }
        Ok(())
    }

    /// The λ grid `lambda_min + k·step`, rounded to 12 decimals; empty when
    /// `lambda_max < lambda_min`.
    pub fn lambdas(&self) -> Vec<f64> {
        if self.lambda_max < self.lambda_min {
            return Vec::new();
        }
        let count = ((self.lambda_max - self.lambda_min) / self.lambda_step + 1e-9).floor() as usize + 1;
        (0..count).map(|k| round12(self.lambda_min + k as f64 * self.lambda_step)).collect()
    }

    /// This config with `preset`'s parameter set and any matching
    /// `[preset]` section applied.
    pub fn with_preset(&self, preset: Preset) -> Result<SweepConfig> {
        let mut cfg = self.clone();
        preset.apply(&mut cfg);
        cfg.preset = Some(preset);
        if let Some(ov) = self.preset_overrides.get(&preset) {
            for (key, (line, value)) in &ov.entries {
                cfg.set_grid(key, value, *line)?;
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// The config after applying its own `preset` key, if any.
    pub fn resolved(&self) -> Result<SweepConfig> {
        match self.preset {
            Some(p) => self.with_preset(p),
            None => Ok(self.clone()),
        }
    }

    /// Canonical text of every field that affects table contents.
    pub fn canonical(&self) -> String {
        let mut s = String::new();
        let join_f = |v: &[f64]| v.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(",");
        let _ = writeln!(s, "gamma={}", join_f(&self.gammas));
        let _ = writeln!(s, "lambda={:?}:{:?}:{:?}", self.lambda_min, self.lambda_max, self.lambda_step);
        let _ = writeln!(s, "n={}", self.ns.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(","));
        let _ = writeln!(s, "states={}", self.states.iter().map(|k| k.as_str()).collect::<Vec<_>>().join(","));
        let _ = writeln!(s, "measures={}", self.measures.iter().map(|m| m.as_str()).collect::<Vec<_>>().join(","));
        s
    }

    /// SHA-256 of [`SweepConfig::canonical`], hex encoded.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.canonical().as_bytes()))
    }

    pub fn wants(&self, m: Measure) -> bool {
        self.measures.contains(&m)
    }
}

pub(crate) fn round12(x: f64) -> f64 {
    (x * 1e12).round() / 1e12
}
