//! Scalar fields over 1D/2D parameter grids with a provenance record that
//! regenerates them exactly.

use std::io::Write;

use serde::{Deserialize, Serialize};

use super::{DetuningSweep, RadiusSweep, UscSweep};
use crate::error::{Error, Result};
use crate::exec::Execution;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scale {
    #[default]
    Linear,
    Log,
}

/// Evenly spaced samples on a linear or logarithmic scale, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisSpec {
    pub start: f64,
    pub end: f64,
    pub points: usize,
    #[serde(default)]
    pub scale: Scale,
}

impl AxisSpec {
    pub fn linear(start: f64, end: f64, points: usize) -> Self {
        Self {
            start,
            end,
            points,
            scale: Scale::Linear,
        }
    }

    pub fn log(start: f64, end: f64, points: usize) -> Self {
        Self {
            start,
            end,
            points,
            scale: Scale::Log,
        }
    }

    pub fn validate(&self, name: &'static str) -> Result<()> {
        if self.points == 0 {
            return Err(Error::invalid(name, "axis needs at least one point"));
        }
        if !self.start.is_finite() || !self.end.is_finite() {
            return Err(Error::invalid(name, "axis bounds must be finite"));
        }
        if self.scale == Scale::Log && !(self.start > 0.0 && self.end > 0.0) {
            return Err(Error::invalid(name, "logarithmic axis bounds must be positive"));
        }
        Ok(())
    }

    pub fn samples(&self) -> Vec<f64> {
        let n = self.points;
        if n == 1 {
            return vec![self.start];
        }
        (0..n)
            .map(|k| {
                if k == n - 1 {
                    return self.end;
                }
                let u = k as f64 / (n - 1) as f64;
                match self.scale {
                    Scale::Linear => self.start + (self.end - self.start) * u,
                    Scale::Log => self.start * (self.end / self.start).powf(u),
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Axis {
    pub name: String,
    pub unit: String,
    pub samples: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridField {
    pub name: String,
    pub unit: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridMask {
    pub name: String,
    pub values: Vec<bool>,
}

/// Inputs of a sweep; re-running them reproduces the grid bit for bit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "experiment", rename_all = "snake_case")]
pub enum SweepProvenance {
    Radius(RadiusSweep),
    Usc(UscSweep),
    Detuning(DetuningSweep),
}

impl SweepProvenance {
    pub fn run(&self, exec: Execution) -> Result<SweepGrid> {
        match self {
            SweepProvenance::Radius(s) => super::sweep_radius(s, exec),
            SweepProvenance::Usc(s) => super::sweep_usc(s, exec),
            SweepProvenance::Detuning(s) => super::sweep_detuning(s, exec),
        }
    }
}

/// Values are stored row-major with the first axis varying slowest.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepGrid {
    pub axes: Vec<Axis>,
    pub fields: Vec<GridField>,
    pub masks: Vec<GridMask>,
    /// False where the model is outside its validity region.
    pub valid: Vec<bool>,
    pub provenance: SweepProvenance,
}

impl SweepGrid {
    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(|a| a.samples.len()).collect()
    }

    pub fn len(&self) -> usize {
        self.shape().iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Flat index of per-axis indices.
    pub fn flat_index(&self, idx: &[usize]) -> usize {
        assert_eq!(idx.len(), self.axes.len(), "index rank");
        idx.iter().zip(&self.axes).fold(0, |acc, (&i, a)| {
            assert!(i < a.samples.len(), "index out of range on `{}`", a.name);
            acc * a.samples.len() + i
        })
    }

    /// Per-axis indices of a flat index.
    pub fn unflatten(&self, mut flat: usize) -> Vec<usize> {
        let shape = self.shape();
        let mut out = vec![0; shape.len()];
        for k in (0..shape.len()).rev() {
            out[k] = flat % shape[k];
            flat /= shape[k];
        }
        out
    }

    pub fn axis(&self, name: &str) -> Option<&Axis> {
        self.axes.iter().find(|a| a.name == name)
    }

    pub fn field(&self, name: &str) -> Option<&[f64]> {
        self.fields.iter().find(|f| f.name == name).map(|f| f.values.as_slice())
    }

    pub fn mask(&self, name: &str) -> Option<&[bool]> {
        self.masks.iter().find(|m| m.name == name).map(|m| m.values.as_slice())
    }

    /// Shape consistency and the NaN-only-where-invalid rule.
    pub fn validate(&self) -> Result<()> {
        let n = self.len();
        let bad =
            |what: &str, len: usize| Error::DimensionMismatch(format!("{what} has {len} values for a grid of {n}"));
        if self.valid.len() != n {
            return Err(bad("validity mask", self.valid.len()));
        }
        for f in &self.fields {
            if f.values.len() != n {
                return Err(bad(&f.name, f.values.len()));
            }
            if let Some(i) = (0..n).find(|&i| self.valid[i] && !f.values[i].is_finite()) {
                return Err(Error::Invariant {
                    time: 0.0,
                    detail: format!(
                        "field `{}` is not finite at valid grid point {:?}",
                        f.name,
                        self.unflatten(i)
                    ),
                });
            }
        }
        for m in &self.masks {
            if m.values.len() != n {
                return Err(bad(&m.name, m.values.len()));
            }
        }
        Ok(())
    }

    /// Exact equality including NaN payloads.
    pub fn bit_identical(&self, other: &SweepGrid) -> bool {
        let same =
            |a: &[f64], b: &[f64]| a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.to_bits() == y.to_bits());
        self.axes.len() == other.axes.len()
            && self
                .axes
                .iter()
                .zip(&other.axes)
                .all(|(a, b)| a.name == b.name && a.unit == b.unit && same(&a.samples, &b.samples))
            && self.fields.len() == other.fields.len()
            && self
                .fields
                .iter()
                .zip(&other.fields)
                .all(|(a, b)| a.name == b.name && a.unit == b.unit && same(&a.values, &b.values))
            && self.masks == other.masks
            && self.valid == other.valid
            && self.provenance == other.provenance
    }

    /// Re-evaluates the grid from its provenance record.
    pub fn recompute(&self, exec: Execution) -> Result<SweepGrid> {
        self.provenance.run(exec)
    }

    /// Long-format CSV: axis columns, field columns, then masks as 0/1.
    pub fn write_csv<W: Write>(&self, w: W, comments: &[String]) -> std::io::Result<()> {
        use crate::io::csv::number;
        let unit = |name: &str, unit: &str| {
            if unit.is_empty() {
                name.to_string()
            } else {
                format!("{name}_{unit}")
            }
        };
        let mut header: Vec<String> = self.axes.iter().map(|a| unit(&a.name, &a.unit)).collect();
        header.extend(self.fields.iter().map(|f| unit(&f.name, &f.unit)));
        header.extend(self.masks.iter().map(|m| m.name.clone()));
        header.push("valid".into());
        let flag = |b: bool| if b { "1" } else { "0" }.to_string();
        let rows: Vec<Vec<String>> = (0..self.len())
            .map(|i| {
                let mut row: Vec<String> = self
                    .unflatten(i)
                    .into_iter()
                    .enumerate()
                    .map(|(k, ix)| number(self.axes[k].samples[ix]))
                    .collect();
                row.extend(self.fields.iter().map(|f| number(f.values[i])));
                row.extend(self.masks.iter().map(|m| flag(m.values[i])));
                row.push(flag(self.valid[i]));
                row
            })
            .collect();
        let header: Vec<&str> = header.iter().map(String::as_str).collect();
        crate::io::csv::write_records(w, comments, &header, &rows)
    }

    /// Axis values where a 1D field crosses `level`, by linear interpolation
    /// between valid neighbours.
    pub fn crossings(&self, field: &str, level: f64) -> Option<Vec<f64>> {
        if self.axes.len() != 1 {
            return None;
        }
        let v = self.field(field)?;
        let x = &self.axes[0].samples;
        let mut out = Vec::new();
        for i in 1..v.len() {
            if !(self.valid[i - 1] && self.valid[i]) {
                continue;
            }
            let (a, b) = (v[i - 1] - level, v[i] - level);
            if a == 0.0 {
                out.push(x[i - 1]);
            } else if a * b < 0.0 {
                out.push(x[i - 1] + (x[i] - x[i - 1]) * a / (a - b));
            }
        }
        if let (Some(&last), Some(&vl)) = (x.last(), v.last()) {
            if vl == level && self.valid[v.len() - 1] {
                out.push(last);
            }
        }
        Some(out)
    }
}

pub(crate) fn field(name: &str, unit: &str, values: Vec<f64>) -> GridField {
    GridField {
        name: name.into(),
        unit: unit.into(),
        values,
    }
}

pub(crate) fn axis(name: &str, unit: &str, samples: Vec<f64>) -> Axis {
    Axis {
        name: name.into(),
        unit: unit.into(),
        samples,
    }
}

pub(crate) fn mask(name: &str, values: Vec<bool>) -> GridMask {
    GridMask {
        name: name.into(),
        values,
    }
}
