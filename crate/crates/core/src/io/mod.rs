//! Input files, CSV result tables and SVG figures.
//!
//! Fans are stored as `{"rays": [[x, y], ...]}` and divisors as
//! `{"coeffs": [a1, ..., an], "label": "..."}` with coefficients in the order of the
//! rays in the fan file.

mod svg;

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::LatticeVector;
use crate::reduction::{SweepInstance, SweepResult};
use crate::toric::{validate_fan, Fan, TorusDivisor};

pub use svg::{emit_svg, render_svg, PX_PER_UNIT};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanFile {
    pub rays: Vec<[i64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DivisorFile {
    pub coeffs: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn write(path: &Path, contents: &[u8]) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn parse<T: for<'de> Deserialize<'de>>(path: &Path, text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        path: path.display().to_string(),
        message: format!("line {} column {}: {e}", e.line(), e.column()),
    })
}

impl FanFile {
    pub fn from_fan(fan: &Fan) -> Self {
        FanFile {
            rays: fan.input_rays().iter().map(|r| [r.x, r.y]).collect(),
        }
    }

    pub fn to_fan(&self) -> Result<Fan> {
        let rays: Vec<LatticeVector> = self.rays.iter().map(|r| LatticeVector::new(r[0], r[1])).collect();
        validate_fan(&rays)
    }
}

pub fn load_fan(path: impl AsRef<Path>) -> Result<Fan> {
    let path = path.as_ref();
    parse::<FanFile>(path, &read(path)?)?.to_fan()
}

/// Coefficients as written in the file, in fan-file ray order.
pub fn load_divisor_file(path: impl AsRef<Path>) -> Result<DivisorFile> {
    let path = path.as_ref();
    parse(path, &read(path)?)
}

pub fn load_divisor(path: impl AsRef<Path>) -> Result<TorusDivisor> {
    Ok(TorusDivisor::new(load_divisor_file(path)?.coeffs))
}

/// Loads a divisor and aligns it with the stored ray order of `fan`.
pub fn load_divisor_for(fan: &Fan, path: impl AsRef<Path>) -> Result<TorusDivisor> {
    let d = load_divisor(path)?;
    Ok(TorusDivisor::new(fan.align_input_coeffs(d.coeffs())?))
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string(value).map_err(|e| Error::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn fan_to_json(fan: &Fan) -> Result<String> {
    to_json(&FanFile::from_fan(fan))
}

pub fn write_fan(fan: &Fan, path: impl AsRef<Path>) -> Result<()> {
    write(path.as_ref(), fan_to_json(fan)?.as_bytes())
}

pub fn divisor_to_json(d: &TorusDivisor, label: Option<&str>) -> Result<String> {
    to_json(&DivisorFile {
        coeffs: d.coeffs().to_vec(),
        label: label.map(str::to_string),
    })
}

/// Writes coefficients as given; see [`Fan::to_input_order`] for divisors held in
/// stored ray order.
pub fn write_divisor(d: &TorusDivisor, label: Option<&str>, path: impl AsRef<Path>) -> Result<()> {
    write(path.as_ref(), divisor_to_json(d, label)?.as_bytes())
}

pub const CSV_HEADER: [&str; 11] = [
    "fan_id",
    "L_coeffs",
    "E_coeffs",
    "h0_L",
    "h0_E",
    "h0_sum",
    "sumset_size",
    "coker_dim",
    "surjective",
    "structured_fallbacks",
    "seed",
];

/// One line of a sweep table. Coefficient vectors are `|`-joined.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResultRow {
    pub fan_id: String,
    pub l_coeffs: String,
    pub e_coeffs: String,
    pub h0_l: u64,
    pub h0_e: u64,
    pub h0_sum: u64,
    pub sumset_size: u64,
    pub coker_dim: u64,
    pub surjective: bool,
    pub structured_fallbacks: u64,
    pub seed: Option<u64>,
}

impl ResultRow {
    /// Row for one sweep instance, coefficients in the fan file's ray order.
    pub fn from_instance(fan_id: &str, fan: &Fan, sweep: &SweepResult, inst: &SweepInstance) -> Self {
        let key = |d: &TorusDivisor| TorusDivisor::new(fan.to_input_order(d.coeffs())).to_key();
        ResultRow {
            fan_id: fan_id.to_string(),
            l_coeffs: key(&sweep.fixed_l),
            e_coeffs: key(&inst.e),
            h0_l: sweep.h0_l,
            h0_e: inst.h0_e,
            h0_sum: inst.h0_sum,
            sumset_size: inst.sumset_size,
            coker_dim: inst.coker_dim,
            surjective: inst.coker_dim == 0,
            structured_fallbacks: inst.structured_fallbacks,
            seed: sweep.sampled_seed,
        }
    }
}

pub fn sweep_rows(fan_id: &str, fan: &Fan, sweep: &SweepResult) -> Vec<ResultRow> {
    sweep
        .instances
        .iter()
        .map(|i| ResultRow::from_instance(fan_id, fan, sweep, i))
        .collect()
}

pub fn csv_bytes(rows: &[ResultRow]) -> Result<Vec<u8>> {
    let err = |e: csv::Error| Error::Io(e.to_string());
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(Vec::new());
    w.write_record(CSV_HEADER).map_err(err)?;
    for r in rows {
        w.serialize(r).map_err(err)?;
    }
    w.into_inner().map_err(|e| Error::Io(e.to_string()))
}

pub fn write_csv(rows: &[ResultRow], path: impl AsRef<Path>) -> Result<()> {
    write(path.as_ref(), &csv_bytes(rows)?)
}
