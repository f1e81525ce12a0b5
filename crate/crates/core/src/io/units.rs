//! Physical quantities written as `"<number> <unit>"` strings.

use std::fmt;
use std::marker::PhantomData;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A physical dimension and its accepted unit spellings with SI factors.
/// The first entry is the SI unit used when serializing.
pub trait Dimension {
    const NAME: &'static str;
    const UNITS: &'static [(&'static str, f64)];
}

macro_rules! dimension {
    ($ty:ident, $name:literal, [$(($u:literal, $f:expr)),+ $(,)?]) => {
        #[derive(Debug, Clone, Copy, PartialEq)]
        pub struct $ty;
        impl Dimension for $ty {
            const NAME: &'static str = $name;
            const UNITS: &'static [(&'static str, f64)] = &[$(($u, $f)),+];
        }
    };
}

dimension!(
    Length,
    "length",
    [
        ("m", 1.0),
        ("mm", 1e-3),
        ("um", 1e-6),
        ("μm", 1e-6),
        ("nm", 1e-9),
        ("pm", 1e-12)
    ]
);
dimension!(
    Time,
    "time",
    [
        ("s", 1.0),
        ("ms", 1e-3),
        ("us", 1e-6),
        ("μs", 1e-6),
        ("ns", 1e-9),
        ("ps", 1e-12)
    ]
);
dimension!(
    Frequency,
    "frequency",
    [("Hz", 1.0), ("kHz", 1e3), ("MHz", 1e6), ("GHz", 1e9)]
);
dimension!(
    Field,
    "magnetic field",
    [("T", 1.0), ("mT", 1e-3), ("uT", 1e-6), ("μT", 1e-6)]
);
dimension!(Gradient, "field gradient", [("T/m", 1.0), ("T/um", 1e6), ("T/μm", 1e6)]);
dimension!(
    Temperature,
    "temperature",
    [("K", 1.0), ("mK", 1e-3), ("uK", 1e-6), ("μK", 1e-6)]
);
dimension!(Mass, "mass", [("kg", 1.0), ("g", 1e-3), ("pg", 1e-15), ("fg", 1e-18)]);
dimension!(Pressure, "pressure", [("Pa", 1.0), ("MPa", 1e6), ("GPa", 1e9)]);
dimension!(Density, "density", [("kg/m^3", 1.0), ("g/cm^3", 1e3)]);
dimension!(
    Moment,
    "magnetic moment",
    [("A*m^2", 1.0), ("A m^2", 1.0), ("J/T", 1.0)]
);
dimension!(Stiffness, "exchange stiffness", [("J/m", 1.0), ("pJ/m", 1e-12)]);
dimension!(Angle, "angle", [("rad", 1.0), ("deg", std::f64::consts::PI / 180.0)]);

/// A value stored in SI units.
pub struct Quantity<D> {
    value: f64,
    _dim: PhantomData<D>,
}

impl<D> Quantity<D> {
    pub const fn si(value: f64) -> Self {
        Self {
            value,
            _dim: PhantomData,
        }
    }

    pub fn value(self) -> f64 {
        self.value
    }
}

impl<D> Clone for Quantity<D> {
    fn clone(&self) -> Self {
        *self
    }
}

impl<D> Copy for Quantity<D> {}

impl<D> PartialEq for Quantity<D> {
    fn eq(&self, other: &Self) -> bool {
        self.value.to_bits() == other.value.to_bits()
    }
}

impl<D: Dimension> fmt::Debug for Quantity<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<D: Dimension> fmt::Display for Quantity<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e} {}", self.value, D::UNITS[0].0)
    }
}

/// Why a quantity string was rejected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UnitError {
    MissingUnit,
    BadNumber(String),
    WrongUnit(String),
}

fn expected<D: Dimension>() -> String {
    let list: Vec<&str> = D::UNITS.iter().map(|(u, _)| *u).collect();
    format!("{} unit ({})", D::NAME, list.join(", "))
}

impl fmt::Display for UnitError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnitError::MissingUnit => write!(f, "missing unit suffix"),
            UnitError::BadNumber(s) => write!(f, "`{s}` is not a number"),
            UnitError::WrongUnit(u) => write!(f, "unit `{u}` does not match"),
        }
    }
}

/// Parses `"180 nm"`, `"1.8e-7m"` or `"0.45 MHz"` into SI.
pub fn parse_quantity<D: Dimension>(s: &str) -> Result<f64, UnitError> {
    let s = s.trim();
    let split = s
        .char_indices()
        .find(|&(i, c)| {
            !(c.is_ascii_digit() || c == '.' || c == '+' || c == '-' || ((c == 'e' || c == 'E') && is_exponent(s, i)))
        })
        .map_or(s.len(), |(i, _)| i);
    let (num, unit) = (s[..split].trim(), s[split..].trim());
    if unit.is_empty() {
        return Err(UnitError::MissingUnit);
    }
    let value: f64 = num.parse().map_err(|_| UnitError::BadNumber(num.to_string()))?;
    D::UNITS
        .iter()
        .find(|(u, _)| *u == unit)
        .map(|(_, f)| scale(value, *f))
        .ok_or_else(|| UnitError::WrongUnit(unit.to_string()))
}

/// Divides by exact powers of ten so that `"180 nm"` parses to the same
/// double as `1.8e-7`.
fn scale(value: f64, factor: f64) -> f64 {
    let inv = factor.recip();
    if factor < 1.0 && (inv.round() - inv).abs() <= 1e-9 * inv {
        value / inv.round()
    } else {
        value * factor
    }
}

fn is_exponent(s: &str, i: usize) -> bool {
    let rest = &s[i + 1..];
    let rest = rest.strip_prefix(['+', '-']).unwrap_or(rest);
    i > 0 && rest.starts_with(|c: char| c.is_ascii_digit())
}

impl<D: Dimension> Serialize for Quantity<D> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de, D: Dimension> Deserialize<'de> for Quantity<D> {
    fn deserialize<De: Deserializer<'de>>(d: De) -> Result<Self, De::Error> {
        struct V<D>(PhantomData<D>);
        impl<D: Dimension> Visitor<'_> for V<D> {
            type Value = Quantity<D>;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "a quantity string with a {}", expected::<D>())
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Self::Value, E> {
                parse_quantity::<D>(v)
                    .map(Quantity::si)
                    .map_err(|e| E::custom(format!("unit mismatch: {e} in `{v}`, expected a {}", expected::<D>())))
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Self::Value, E> {
                Err(E::custom(format!(
                    "unit mismatch: `{v}` has no unit suffix, expected a {}",
                    expected::<D>()
                )))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Self::Value, E> {
                self.visit_f64(v as f64)
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Self::Value, E> {
                self.visit_f64(v as f64)
            }
        }
        d.deserialize_any(V(PhantomData))
    }
}
