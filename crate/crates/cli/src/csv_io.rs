//! Trajectory CSV files: header `step,t,x,y,V`, one row per point.
//!
//! Numbers are written in shortest round-trip decimal form (at most 17
//! significant digits, never exponent notation), so parsing a file and
//! writing it again reproduces the same bytes. `V` is left empty when either
//! coordinate is not strictly positive.

use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::Path;

use lv_core::model::{first_integral, State};
use lv_core::scheme::Trajectory;

use crate::error::RunError;

pub const HEADER: [&str; 5] = ["step", "t", "x", "y", "V"];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CsvRow {
    pub step: usize,
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub v: Option<f64>,
}

pub fn rows_from_trajectory(traj: &Trajectory) -> Vec<CsvRow> {
    let p = &traj.params;
    traj.points
        .iter()
        .map(|pt| CsvRow {
            step: pt.step,
            t: pt.t,
            x: pt.state.x,
            y: pt.state.y,
            v: first_integral(p, pt.state).ok(),
        })
        .collect()
}

fn to_csv_err(e: csv::Error) -> io::Error {
    match e.into_kind() {
        csv::ErrorKind::Io(e) => e,
        other => io::Error::new(io::ErrorKind::InvalidData, format!("{other:?}")),
    }
}

pub fn write_rows<W: Write>(out: W, rows: &[CsvRow]) -> io::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(HEADER).map_err(to_csv_err)?;
    for r in rows {
        let v = r.v.map(|v| v.to_string()).unwrap_or_default();
        w.write_record([
            r.step.to_string(),
            r.t.to_string(),
            r.x.to_string(),
            r.y.to_string(),
            v,
        ])
        .map_err(to_csv_err)?;
    }
    w.flush()
}

pub fn write_csv<W: Write>(out: W, traj: &Trajectory) -> io::Result<()> {
    write_rows(out, &rows_from_trajectory(traj))
}

pub fn emit_csv(traj: &Trajectory, path: &Path) -> Result<(), RunError> {
    let file = File::create(path).map_err(|e| RunError::io(path, e))?;
    write_csv(BufWriter::new(file), traj).map_err(|e| RunError::io(path, e))
}

fn parse_field<T: std::str::FromStr>(field: Option<&str>, name: &str, line: u64) -> io::Result<T> {
    let raw = field.ok_or_else(|| {
        io::Error::new(
            io::ErrorKind::InvalidData,
            format!("line {line}: missing `{name}`"),
        )
    })?;
    raw.parse().map_err(|_| {
        io::Error::new(
            io::ErrorKind::InvalidData,
            format!("line {line}: bad `{name}` value `{raw}`"),
        )
    })
}

pub fn parse_csv<R: Read>(input: R) -> io::Result<Vec<CsvRow>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(input);
    let header = rdr.headers().map_err(to_csv_err)?;
    if header.iter().ne(HEADER) {
        return Err(io::Error::new(
            io::ErrorKind::InvalidData,
            format!("unexpected header {header:?}"),
        ));
    }
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(to_csv_err)?;
        let line = rec.position().map_or(0, |p| p.line());
        let v = match rec.get(4) {
            Some("") | None => None,
            Some(_) => Some(parse_field(rec.get(4), "V", line)?),
        };
        rows.push(CsvRow {
            step: parse_field(rec.get(0), "step", line)?,
            t: parse_field(rec.get(1), "t", line)?,
            x: parse_field(rec.get(2), "x", line)?,
            y: parse_field(rec.get(3), "y", line)?,
            v,
        });
    }
    Ok(rows)
}

impl CsvRow {
    pub fn state(&self) -> State {
        State {
            x: self.x,
            y: self.y,
        }
    }
}
