//! Sectioned `key = value unit` configuration files.
//!
//! ```text
//! preset = paper-2022        # base values for every key not given here
//!
//! [gain]
//! l = 0.1 um
//!
//! [pump]
//! p_in = 150 W
//! ```
//!
//! Sections are `geometry`, `gain`, `pump`, `losses`, `receiver` and
//! `sweep`. Dimensioned values must carry a unit; values are stored in SI.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rbswipt_core::gain_power::SlopeLossExponent;
use rbswipt_core::sweep::DEFAULT_POINTS;
use rbswipt_core::{LinkModel, Parameter};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::presets;
use crate::units::{self, format_quantity, Dimension, UnitError};

/// Name of the preset used when a file names none.
pub const DEFAULT_PRESET: &str = "paper-2022";

const MAX_PRESET_DEPTH: usize = 8;

const SECTIONS: &[&str] = &["geometry", "gain", "pump", "losses", "receiver", "sweep"];

/// Execution settings for sweeps; they never change computed values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepSettings {
    /// Worker threads; 0 lets the runtime choose.
    pub workers: usize,
    /// Grid points per axis when a sweep does not say otherwise.
    pub points: usize,
}

impl Default for SweepSettings {
    fn default() -> Self {
        Self {
            workers: 0,
            points: DEFAULT_POINTS,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    /// Preset the values were layered on.
    pub preset: String,
    pub model: LinkModel,
    pub sweep: SweepSettings,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unknown section `[{0}]`")]
    UnknownSection(String),
    #[error("unknown key")]
    UnknownKey,
    #[error("key given twice (first on line {0})")]
    Duplicate(usize),
    #[error("{0}")]
    Unit(#[from] UnitError),
    #[error("value {value} out of range: {reason}")]
    Range { value: f64, reason: String },
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("presets nested too deeply (cycle?)")]
    PresetDepth,
    #[error("{0}")]
    Conflict(String),
    #[error("invalid model: {0}")]
    Model(String),
}

/// A configuration problem, located by line (1-based; 0 when the problem is
/// not tied to one line) and key.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}{}: {kind}", key.as_ref().map(|k| format!(", key `{k}`")).unwrap_or_default())]
pub struct ConfigError {
    pub line: usize,
    pub key: Option<String>,
    pub kind: ConfigErrorKind,
}

impl ConfigError {
    fn at(line: usize, key: Option<&str>, kind: ConfigErrorKind) -> Self {
        Self {
            line,
            key: key.map(str::to_string),
            kind,
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Range {
    Finite,
    Positive,
    NonNegative,
    NonZero,
    NonZeroFinite,
    /// `(0, 1]`
    Fraction,
    /// `[0, 1]`
    UnitInterval,
}

impl Range {
    fn check(self, v: f64) -> Result<(), &'static str> {
        let ok = match self {
            Range::Finite => v.is_finite(),
            Range::Positive => v > 0.0 && v.is_finite(),
            Range::NonNegative => v >= 0.0 && v.is_finite(),
            Range::NonZero => v != 0.0,
            Range::NonZeroFinite => v != 0.0 && v.is_finite(),
            Range::Fraction => v > 0.0 && v <= 1.0,
            Range::UnitInterval => (0.0..=1.0).contains(&v),
        };
        if ok {
            return Ok(());
        }
        Err(match self {
            Range::Finite => "must be finite",
            Range::Positive => "must be finite and > 0",
            Range::NonNegative => "must be finite and >= 0",
            Range::NonZero => "must be non-zero",
            Range::NonZeroFinite => "must be finite and non-zero",
            Range::Fraction => "must lie in (0, 1]",
            Range::UnitInterval => "must lie in [0, 1]",
        })
    }
}

/// Physical dimension of a parameter's value.
pub fn dimension(p: Parameter) -> Dimension {
    schema(p).0
}

fn schema(p: Parameter) -> (Dimension, Range) {
    use Dimension as D;
    use Parameter as P;
    match p {
        P::D1 | P::D2 | P::D3 => (D::Length, Range::Positive),
        P::Lt => (D::Length, Range::Finite),
        P::F1 | P::F2 => (D::Length, Range::NonZeroFinite),
        P::Compression => (D::Dimensionless, Range::Positive),
        P::Fr1 | P::Fr2 => (D::Length, Range::NonZero),
        P::R1 | P::R2 => (D::Dimensionless, Range::Fraction),
        P::LambdaBeam | P::LambdaPump => (D::Length, Range::Positive),
        P::G0 => (D::InverseLength, Range::Positive),
        P::N0 => (D::InverseVolume, Range::Positive),
        P::GammaConf => (D::Dimensionless, Range::Positive),
        P::Alpha => (D::InverseTime, Range::NonNegative),
        P::Beta => (D::VolumeRate, Range::NonNegative),
        P::Auger => (D::VolumeSquaredRate, Range::NonNegative),
        P::L | P::A => (D::Length, Range::Positive),
        P::As => (D::Area, Range::Positive),
        P::EtaPc | P::EtaPa => (D::Dimensionless, Range::Fraction),
        P::PIn => (D::Power, Range::Positive),
        P::Vc => (D::Dimensionless, Range::Fraction),
        P::Mu => (D::Dimensionless, Range::UnitInterval),
        P::EtaP => (D::Dimensionless, Range::Finite),
        P::PPth => (D::Power, Range::Finite),
        P::Nu => (D::Responsivity, Range::Positive),
        P::Bx => (D::Frequency, Range::Positive),
        P::IBg => (D::Current, Range::NonNegative),
        P::RL => (D::Resistance, Range::Positive),
        P::TBg => (D::Temperature, Range::Positive),
        P::KB => (D::EntropyPerParticle, Range::Positive),
        P::QE => (D::Charge, Range::Positive),
    }
}

/// Parses a value for `p` (with unit where dimensioned) and range-checks it.
pub fn parse_parameter_value(p: Parameter, text: &str) -> Result<f64, ConfigErrorKind> {
    let (dim, range) = schema(p);
    let value = units::parse_quantity(text, dim)?;
    range.check(value).map_err(|reason| ConfigErrorKind::Range {
        value,
        reason: reason.to_string(),
    })?;
    Ok(value)
}

/// Non-parameter keys.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Setting {
    Afocal,
    SlopeLossExponent,
    Workers,
    Points,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Key {
    Param(Parameter),
    Setting(Setting),
}

fn resolve_key(section: &str, key: &str) -> Option<Key> {
    let setting = match (section, key.to_ascii_lowercase().as_str()) {
        ("geometry", "afocal") => Some(Setting::Afocal),
        ("losses", "slope_loss_exponent") => Some(Setting::SlopeLossExponent),
        ("sweep", "workers") => Some(Setting::Workers),
        ("sweep", "points") => Some(Setting::Points),
        _ => None,
    };
    if let Some(s) = setting {
        return Some(Key::Setting(s));
    }
    Parameter::ALL
        .iter()
        .copied()
        .find(|p| p.section() == section && p.key().eq_ignore_ascii_case(key))
        .map(Key::Param)
}

fn parse_integer(text: &str) -> Result<u64, ConfigErrorKind> {
    text.trim()
        .parse()
        .map_err(|_| ConfigErrorKind::Syntax(format!("`{}` is not a non-negative integer", text.trim())))
}

/// One `key = value` line.
#[derive(Debug, Clone)]
struct Entry {
    line: usize,
    key: String,
    value: String,
}

#[derive(Debug, Default)]
struct Document {
    preset: Option<(usize, String)>,
    entries: BTreeMap<Key, Entry>,
}

fn strip_comment(line: &str) -> &str {
    line.find('#').map_or(line, |i| &line[..i]).trim()
}

fn parse_document(text: &str) -> Result<Document, ConfigError> {
    let mut doc = Document::default();
    let mut section: Option<String> = None;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| {
                    ConfigError::at(line_no, None, ConfigErrorKind::Syntax("unterminated section header".into()))
                })?
                .trim()
                .to_ascii_lowercase();
            if !SECTIONS.contains(&name.as_str()) {
                return Err(ConfigError::at(line_no, None, ConfigErrorKind::UnknownSection(name)));
            }
            section = Some(name);
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            ConfigError::at(line_no, None, ConfigErrorKind::Syntax("expected `key = value`".into()))
        })?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() {
            return Err(ConfigError::at(line_no, None, ConfigErrorKind::Syntax("empty key".into())));
        }
        let Some(sec) = section.as_deref() else {
            if key.eq_ignore_ascii_case("preset") {
                if let Some((first, _)) = doc.preset {
                    return Err(ConfigError::at(line_no, Some(key), ConfigErrorKind::Duplicate(first)));
                }
                doc.preset = Some((line_no, value.to_string()));
                continue;
            }
            return Err(ConfigError::at(line_no, Some(key), ConfigErrorKind::UnknownKey));
        };
        let resolved = resolve_key(sec, key)
            .ok_or_else(|| ConfigError::at(line_no, Some(&format!("{sec}.{key}")), ConfigErrorKind::UnknownKey))?;
        if let Some(first) = doc.entries.get(&resolved) {
            return Err(ConfigError::at(line_no, Some(key), ConfigErrorKind::Duplicate(first.line)));
        }
        doc.entries.insert(
            resolved,
            Entry {
                line: line_no,
                key: format!("{sec}.{key}"),
                value: value.to_string(),
            },
        );
    }
    Ok(doc)
}

/// Section holding `key`, for a bare parameter or setting name.
pub fn section_of(key: &str) -> Option<&'static str> {
    if let Some((section, _)) = key.split_once('.') {
        return SECTIONS.iter().copied().find(|s| s.eq_ignore_ascii_case(section));
    }
    match key.to_ascii_lowercase().as_str() {
        "afocal" => Some("geometry"),
        "slope_loss_exponent" => Some("losses"),
        "workers" | "points" => Some("sweep"),
        _ => key.parse::<Parameter>().ok().map(Parameter::section),
    }
}

/// Applies `key = value` lines (with section headers, no `preset`) on top of
/// an existing configuration.
pub fn apply_text(base: Config, text: &str) -> Result<Config, ConfigError> {
    let doc = parse_document(text)?;
    if let Some((line, _)) = doc.preset {
        return Err(ConfigError::at(
            line,
            Some("preset"),
            ConfigErrorKind::Conflict("overrides cannot change the preset".into()),
        ));
    }
    apply(base, &doc)
}

/// Applies command-line style `key=value` overrides; keys may be bare
/// (`l`) or qualified (`gain.l`).
pub fn apply_overrides(base: Config, overrides: &[(String, String)]) -> Result<Config, ConfigError> {
    let mut text = String::new();
    for (key, value) in overrides {
        let section = section_of(key.trim())
            .ok_or_else(|| ConfigError::at(0, Some(key.trim()), ConfigErrorKind::UnknownKey))?;
        let bare = key.trim().rsplit('.').next().unwrap_or_default();
        let _ = writeln!(text, "[{section}]\n{bare} = {}", value.trim());
    }
    apply_text(base, &text).map_err(|mut e| {
        e.line = 0;
        e
    })
}

/// Parses a configuration, filling unspecified keys from its preset
/// (default [`DEFAULT_PRESET`]).
pub fn parse_config(text: &str) -> Result<Config, ConfigError> {
    parse_config_at_depth(text, 0)
}

fn parse_config_at_depth(text: &str, depth: usize) -> Result<Config, ConfigError> {
    let doc = parse_document(text)?;
    let (preset_line, preset_name) = doc
        .preset
        .clone()
        .unwrap_or((0, DEFAULT_PRESET.to_string()));
    let base = load_preset_at_depth(&preset_name, depth).map_err(|e| {
        if preset_line == 0 {
            e
        } else {
            ConfigError::at(preset_line, Some("preset"), e.kind)
        }
    })?;
    apply(base, &doc)
}

/// Loads a built-in preset by name.
pub fn load_preset(name: &str) -> Result<Config, ConfigError> {
    load_preset_at_depth(name, 0)
}

fn load_preset_at_depth(name: &str, depth: usize) -> Result<Config, ConfigError> {
    if depth >= MAX_PRESET_DEPTH {
        return Err(ConfigError::at(0, Some("preset"), ConfigErrorKind::PresetDepth));
    }
    if name == DEFAULT_PRESET {
        let seed = Config {
            preset: DEFAULT_PRESET.to_string(),
            model: LinkModel::paper_2022(),
            sweep: SweepSettings::default(),
        };
        let doc = parse_document(presets::PAPER_2022)?;
        let mut config = apply(seed, &doc)?;
        config.preset = name.to_string();
        return Ok(config);
    }
    let text = presets::source(name)
        .ok_or_else(|| ConfigError::at(0, Some("preset"), ConfigErrorKind::UnknownPreset(name.to_string())))?;
    let mut config = parse_config_at_depth(text, depth + 1)?;
    config.preset = name.to_string();
    Ok(config)
}

fn apply(base: Config, doc: &Document) -> Result<Config, ConfigError> {
    let mut config = base;
    if let Some((_, name)) = &doc.preset {
        config.preset = name.clone();
    }
    let model = &mut config.model;
    let entries = &doc.entries;
    let lt = entries.get(&Key::Param(Parameter::Lt));

    match entries.get(&Key::Setting(Setting::Afocal)) {
        Some(e) => {
            model.afocal_tim = match e.value.to_ascii_lowercase().as_str() {
                "true" | "yes" | "1" => true,
                "false" | "no" | "0" => false,
                other => {
                    return Err(ConfigError::at(
                        e.line,
                        Some(&e.key),
                        ConfigErrorKind::Syntax(format!("`{other}` is not true/false")),
                    ))
                }
            };
            if model.afocal_tim {
                if let Some(lt) = lt {
                    return Err(ConfigError::at(
                        lt.line,
                        Some(&lt.key),
                        ConfigErrorKind::Conflict("`lt` cannot be set when `afocal = true`".into()),
                    ));
                }
            }
        }
        None if lt.is_some() => model.afocal_tim = false,
        None => {}
    }
    if let (Some(_), Some(m)) = (
        entries.get(&Key::Param(Parameter::F2)),
        entries.get(&Key::Param(Parameter::Compression)),
    ) {
        return Err(ConfigError::at(
            m.line,
            Some(&m.key),
            ConfigErrorKind::Conflict("give either `f2` or `m`, not both".into()),
        ));
    }

    // Parameter::ALL lists f1, f2 before m; lt goes last so the afocal
    // coupling never overwrites an explicit separation.
    let ordered = Parameter::ALL
        .iter()
        .copied()
        .filter(|p| *p != Parameter::Lt)
        .chain([Parameter::Lt]);
    for p in ordered {
        let Some(e) = entries.get(&Key::Param(p)) else { continue };
        let value = parse_parameter_value(p, &e.value).map_err(|k| ConfigError::at(e.line, Some(&e.key), k))?;
        model
            .set(p, value)
            .map_err(|err| ConfigError::at(e.line, Some(&e.key), ConfigErrorKind::Model(err.to_string())))?;
    }

    if let Some(e) = entries.get(&Key::Setting(Setting::SlopeLossExponent)) {
        let power = parse_integer(&e.value).map_err(|k| ConfigError::at(e.line, Some(&e.key), k))?;
        model.slope_loss_exponent = u32::try_from(power)
            .ok()
            .and_then(SlopeLossExponent::from_power)
            .ok_or_else(|| {
                ConfigError::at(
                    e.line,
                    Some(&e.key),
                    ConfigErrorKind::Range {
                        value: power as f64,
                        reason: "must be 1 or 2".into(),
                    },
                )
            })?;
    }
    if let Some(e) = entries.get(&Key::Setting(Setting::Workers)) {
        let n = parse_integer(&e.value).map_err(|k| ConfigError::at(e.line, Some(&e.key), k))?;
        config.sweep.workers = n as usize;
    }
    if let Some(e) = entries.get(&Key::Setting(Setting::Points)) {
        let n = parse_integer(&e.value).map_err(|k| ConfigError::at(e.line, Some(&e.key), k))?;
        if n < 2 {
            return Err(ConfigError::at(
                e.line,
                Some(&e.key),
                ConfigErrorKind::Range {
                    value: n as f64,
                    reason: "a sweep needs at least 2 points".into(),
                },
            ));
        }
        config.sweep.points = n as usize;
    }

    config.model.validate().map_err(|err| {
        let name = match err {
            rbswipt_core::Error::InvalidArgument { name, .. } => Some(name),
            _ => None,
        };
        let entry = name.and_then(|n| {
            entries
                .values()
                .find(|e| e.key.rsplit('.').next().is_some_and(|k| k.eq_ignore_ascii_case(n)))
        });
        ConfigError::at(
            entry.map_or(0, |e| e.line),
            entry.map(|e| e.key.as_str()).or(name),
            ConfigErrorKind::Model(err.to_string()),
        )
    })?;
    Ok(config)
}

impl Config {
    pub fn from_model(preset: impl Into<String>, model: LinkModel) -> Self {
        Self {
            preset: preset.into(),
            model,
            sweep: SweepSettings::default(),
        }
    }

    /// Complete configuration text in SI units. Parsing it back yields
    /// identical values.
    pub fn serialize(&self) -> String {
        let mut out = self.serialize_model();
        let _ = writeln!(out, "\n[sweep]");
        let _ = writeln!(out, "workers = {}", self.sweep.workers);
        let _ = writeln!(out, "points = {}", self.sweep.points);
        out
    }

    /// Everything that determines computed values: the full model, without
    /// execution settings. This is what curve files embed and digest.
    pub fn serialize_model(&self) -> String {
        let m = &self.model;
        let mut out = String::new();
        let _ = writeln!(out, "preset = {}", self.preset);
        let mut section = "";
        for &p in Parameter::ALL {
            let skip = match p {
                Parameter::Compression => true,
                Parameter::Lt => m.afocal_tim,
                _ => false,
            };
            if p.section() != section {
                section = p.section();
                let _ = writeln!(out, "\n[{section}]");
                if section == "geometry" {
                    let _ = writeln!(out, "afocal = {}", m.afocal_tim);
                }
            }
            if !skip {
                let _ = writeln!(out, "{} = {}", p.key(), format_quantity(m.get(p), dimension(p)));
            }
            if p == Parameter::Vc {
                let _ = writeln!(out, "slope_loss_exponent = {}", m.slope_loss_exponent.power());
            }
        }
        out
    }

    /// `sha256:<hex>` of [`Config::serialize_model`].
    pub fn digest(&self) -> String {
        let hash = Sha256::digest(self.serialize_model().as_bytes());
        format!("sha256:{}", hex::encode(hash))
    }
}
