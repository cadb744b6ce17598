//! Fixed-width `.par` line-list parser (HITRAN 2004+ record layout).
//!
//! Only the fields the absorption model consumes are extracted; the rest of
//! each 160-character record (Einstein A, quantum assignments, flags, …) is
//! ignored, so records truncated after the pressure-shift field still parse.

use crate::atmosphere::SpectralLine;
use crate::error::{Error, Result};

/// One fixed-column field: byte range plus the 1-based column span and name
/// used in error messages.
struct Field {
    range: std::ops::Range<usize>,
    cols: &'static str,
    name: &'static str,
}

const MOLECULE: Field = Field { range: 0..2, cols: "1-2", name: "molecule id" };
const ISOTOPOLOGUE: Field = Field { range: 2..3, cols: "3", name: "isotopologue" };
const CENTER: Field = Field { range: 3..15, cols: "4-15", name: "line centre" };
const INTENSITY: Field = Field { range: 15..25, cols: "16-25", name: "intensity" };
const AIR_WIDTH: Field = Field { range: 35..40, cols: "36-40", name: "air halfwidth" };
const SELF_WIDTH: Field = Field { range: 40..45, cols: "41-45", name: "self halfwidth" };
const LOWER_ENERGY: Field = Field { range: 45..55, cols: "46-55", name: "lower-state energy" };
const TEMP_EXPONENT: Field = Field { range: 55..59, cols: "56-59", name: "temperature exponent" };
const PRESSURE_SHIFT: Field = Field { range: 59..67, cols: "60-67", name: "pressure shift" };

/// Minimum record length: everything through the pressure-shift field.
const MIN_RECORD_LEN: usize = PRESSURE_SHIFT.range.end;

fn slice<'a>(record: &'a str, line_no: usize, field: &Field) -> Result<&'a str> {
    record.get(field.range.clone()).ok_or_else(|| {
        Error::validation(format!(
            "record {line_no}: columns {} ({}) not addressable", field.cols, field.name
        ))
    })
}

fn float_field(record: &str, line_no: usize, field: &Field) -> Result<f64> {
    let raw = slice(record, line_no, field)?.trim();
    raw.parse().map_err(|_| {
        Error::validation(format!(
            "record {line_no}: columns {} ({}): invalid number {raw:?}",
            field.cols, field.name
        ))
    })
}

fn int_field(record: &str, line_no: usize, field: &Field) -> Result<u32> {
    let raw = slice(record, line_no, field)?.trim();
    raw.parse().map_err(|_| {
        Error::validation(format!(
            "record {line_no}: columns {} ({}): invalid integer {raw:?}",
            field.cols, field.name
        ))
    })
}

/// Parses `.par` text into spectral lines, keeping only water (molecule 1).
///
/// Blank lines are skipped; any other record must reach the pressure-shift
/// field. Errors carry the 1-based record number and the column span of the
/// offending field. Records for other molecules are dropped after reading
/// only the molecule id, so a line list holding several species can be fed
/// through unchanged.
pub fn parse_hitran_records(input: &str) -> Result<Vec<SpectralLine>> {
    let mut out = Vec::new();
    for (idx, record) in input.lines().enumerate() {
        let line_no = idx + 1;
        if record.trim().is_empty() {
            continue;
        }
        if record.len() < MIN_RECORD_LEN {
            return Err(Error::validation(format!(
                "record {line_no}: {} characters, need at least {MIN_RECORD_LEN}",
                record.len()
            )));
        }
        let molecule_id = int_field(record, line_no, &MOLECULE)?;
        if molecule_id != 1 {
            continue;
        }
        let line = SpectralLine {
            center: float_field(record, line_no, &CENTER)?,
            intensity: float_field(record, line_no, &INTENSITY)?,
            air_halfwidth: float_field(record, line_no, &AIR_WIDTH)?,
            self_halfwidth: float_field(record, line_no, &SELF_WIDTH)?,
            lower_state_energy: float_field(record, line_no, &LOWER_ENERGY)?,
            temp_exponent: float_field(record, line_no, &TEMP_EXPONENT)?,
            pressure_shift: float_field(record, line_no, &PRESSURE_SHIFT)?,
            molecule_id,
            isotopologue_id: int_field(record, line_no, &ISOTOPOLOGUE)?,
        };
        line.validate().map_err(|e| {
            Error::validation(format!("record {line_no}: {e}"))
        })?;
        out.push(line);
    }
    Ok(out)
}
