//! Physical units accepted in configuration files and on the command line.
//!
//! Every dimensioned value carries an explicit unit; [`parse_quantity`]
//! converts it to SI and checks the unit against the expected
//! [`Dimension`].

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dimension {
    Dimensionless,
    Length,
    InverseLength,
    InverseVolume,
    Area,
    Time,
    InverseTime,
    /// Bimolecular recombination coefficient (m³/s).
    VolumeRate,
    /// Auger recombination coefficient (m⁶/s).
    VolumeSquaredRate,
    Power,
    Current,
    Responsivity,
    Frequency,
    Resistance,
    Temperature,
    EntropyPerParticle,
    Charge,
}

impl Dimension {
    /// Symbol of the SI unit used when writing values back out.
    pub fn si_symbol(self) -> &'static str {
        match self {
            Dimension::Dimensionless => "",
            Dimension::Length => "m",
            Dimension::InverseLength => "m^-1",
            Dimension::InverseVolume => "m^-3",
            Dimension::Area => "m^2",
            Dimension::Time => "s",
            Dimension::InverseTime => "s^-1",
            Dimension::VolumeRate => "m^3/s",
            Dimension::VolumeSquaredRate => "m^6/s",
            Dimension::Power => "W",
            Dimension::Current => "A",
            Dimension::Responsivity => "A/W",
            Dimension::Frequency => "Hz",
            Dimension::Resistance => "Ohm",
            Dimension::Temperature => "K",
            Dimension::EntropyPerParticle => "J/K",
            Dimension::Charge => "C",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Dimension::Dimensionless => "dimensionless",
            Dimension::Length => "length",
            Dimension::InverseLength => "inverse length",
            Dimension::InverseVolume => "density",
            Dimension::Area => "area",
            Dimension::Time => "time",
            Dimension::InverseTime => "rate",
            Dimension::VolumeRate => "volume rate",
            Dimension::VolumeSquaredRate => "volume² rate",
            Dimension::Power => "power",
            Dimension::Current => "current",
            Dimension::Responsivity => "responsivity",
            Dimension::Frequency => "frequency",
            Dimension::Resistance => "resistance",
            Dimension::Temperature => "temperature",
            Dimension::EntropyPerParticle => "energy per kelvin",
            Dimension::Charge => "charge",
        }
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Accepted unit spellings with their dimension and SI scale as a power
/// of ten.
const UNITS: &[(&str, Dimension, i32)] = &[
    ("1", Dimension::Dimensionless, 0),
    ("%", Dimension::Dimensionless, -2),
    ("m", Dimension::Length, 0),
    ("km", Dimension::Length, 3),
    ("cm", Dimension::Length, -2),
    ("mm", Dimension::Length, -3),
    ("um", Dimension::Length, -6),
    ("µm", Dimension::Length, -6),
    ("nm", Dimension::Length, -9),
    ("m^-1", Dimension::InverseLength, 0),
    ("1/m", Dimension::InverseLength, 0),
    ("cm^-1", Dimension::InverseLength, 2),
    ("1/cm", Dimension::InverseLength, 2),
    ("m^-3", Dimension::InverseVolume, 0),
    ("cm^-3", Dimension::InverseVolume, 6),
    ("m^2", Dimension::Area, 0),
    ("cm^2", Dimension::Area, -4),
    ("mm^2", Dimension::Area, -6),
    ("um^2", Dimension::Area, -12),
    ("s", Dimension::Time, 0),
    ("ms", Dimension::Time, -3),
    ("us", Dimension::Time, -6),
    ("ns", Dimension::Time, -9),
    ("s^-1", Dimension::InverseTime, 0),
    ("1/s", Dimension::InverseTime, 0),
    ("m^3/s", Dimension::VolumeRate, 0),
    ("cm^3/s", Dimension::VolumeRate, -6),
    ("m^6/s", Dimension::VolumeSquaredRate, 0),
    ("cm^6/s", Dimension::VolumeSquaredRate, -12),
    ("W", Dimension::Power, 0),
    ("mW", Dimension::Power, -3),
    ("kW", Dimension::Power, 3),
    ("A", Dimension::Current, 0),
    ("mA", Dimension::Current, -3),
    ("uA", Dimension::Current, -6),
    ("µA", Dimension::Current, -6),
    ("nA", Dimension::Current, -9),
    ("A/W", Dimension::Responsivity, 0),
    ("mA/W", Dimension::Responsivity, -3),
    ("Hz", Dimension::Frequency, 0),
    ("kHz", Dimension::Frequency, 3),
    ("MHz", Dimension::Frequency, 6),
    ("GHz", Dimension::Frequency, 9),
    ("Ohm", Dimension::Resistance, 0),
    ("ohm", Dimension::Resistance, 0),
    ("Ω", Dimension::Resistance, 0),
    ("kOhm", Dimension::Resistance, 3),
    ("kohm", Dimension::Resistance, 3),
    ("kΩ", Dimension::Resistance, 3),
    ("MOhm", Dimension::Resistance, 6),
    ("MΩ", Dimension::Resistance, 6),
    ("K", Dimension::Temperature, 0),
    ("J/K", Dimension::EntropyPerParticle, 0),
    ("C", Dimension::Charge, 0),
];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum UnitError {
    #[error("missing value")]
    Empty,
    #[error("`{0}` is not a number")]
    BadNumber(String),
    #[error("missing unit (expected a {0} unit such as `{1}`)")]
    MissingUnit(Dimension, &'static str),
    #[error("unknown unit `{0}`")]
    UnknownUnit(String),
    #[error("unit `{unit}` is a {found} unit, expected {expected}")]
    WrongDimension {
        unit: String,
        found: Dimension,
        expected: Dimension,
    },
}

/// Looks up a unit spelling: dimension and decimal exponent of its scale.
pub fn lookup(unit: &str) -> Option<(Dimension, i32)> {
    UNITS
        .iter()
        .find(|(name, _, _)| *name == unit)
        .map(|&(_, dim, scale)| (dim, scale))
}

/// Splits `"2000 cm^-1"` or `"150W"` into number and unit text.
fn split_number(text: &str) -> (&str, &str) {
    let text = text.trim();
    if let Some(i) = text.find(char::is_whitespace) {
        return (&text[..i], text[i..].trim());
    }
    let lower = text.to_ascii_lowercase();
    for word in ["-infinity", "+infinity", "infinity", "-inf", "+inf", "inf"] {
        if lower.starts_with(word) {
            return (&text[..word.len()], &text[word.len()..]);
        }
    }
    let bytes = text.as_bytes();
    let mut end = 0;
    while end < bytes.len() {
        let c = bytes[end] as char;
        let exponent_sign = (c == '+' || c == '-') && end > 0 && matches!(bytes[end - 1], b'e' | b'E');
        let exponent = (c == 'e' || c == 'E')
            && end > 0
            && bytes.get(end + 1).is_some_and(|n| n.is_ascii_digit() || *n == b'+' || *n == b'-');
        if c.is_ascii_digit() || c == '.' || exponent || exponent_sign || ((c == '+' || c == '-') && end == 0) {
            end += 1;
        } else {
            break;
        }
    }
    (&text[..end], &text[end..])
}

/// Parses `"<number> [unit]"` into an SI value of dimension `expected`.
///
/// A unit is mandatory unless `expected` is dimensionless. `inf` is accepted
/// as a number (`fr1 = inf m`).
pub fn parse_quantity(text: &str, expected: Dimension) -> Result<f64, UnitError> {
    let (number, unit) = split_number(text);
    if number.is_empty() {
        return Err(if text.trim().is_empty() {
            UnitError::Empty
        } else {
            UnitError::BadNumber(text.trim().to_string())
        });
    }
    let bad = || UnitError::BadNumber(number.to_string());
    let value: f64 = number.parse().map_err(|_| bad())?;
    if value.is_nan() {
        return Err(bad());
    }
    if unit.is_empty() {
        return if expected == Dimension::Dimensionless {
            Ok(value)
        } else {
            Err(UnitError::MissingUnit(expected, expected.si_symbol()))
        };
    }
    let (found, exponent) = lookup(unit).ok_or_else(|| UnitError::UnknownUnit(unit.to_string()))?;
    if found != expected {
        return Err(UnitError::WrongDimension {
            unit: unit.to_string(),
            found,
            expected,
        });
    }
    if !value.is_finite() || exponent == 0 {
        return Ok(value);
    }
    shift_decimal(number, exponent).ok_or_else(bad)
}

/// Parses decimal text multiplied by `10^shift`, rounding only once, so
/// `980 nm` gives exactly the double nearest to `980e-9`.
fn shift_decimal(number: &str, shift: i32) -> Option<f64> {
    let (mantissa, exponent) = match number.find(['e', 'E']) {
        Some(i) => (&number[..i], number[i + 1..].parse::<i32>().ok()?),
        None => (number, 0),
    };
    format!("{mantissa}e{}", exponent.checked_add(shift)?).parse().ok()
}

/// Shortest decimal text that parses back to exactly `value`.
pub fn format_number(value: f64) -> String {
    let magnitude = value.abs();
    if value == 0.0 || !value.is_finite() || (1e-4..1e15).contains(&magnitude) {
        format!("{value}")
    } else {
        format!("{value:e}")
    }
}

/// `value` in SI with its unit symbol, e.g. `2e5 m^-1`.
pub fn format_quantity(value: f64, dim: Dimension) -> String {
    let symbol = dim.si_symbol();
    if symbol.is_empty() {
        format_number(value)
    } else {
        format!("{} {symbol}", format_number(value))
    }
}
