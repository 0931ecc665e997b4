//! Coefficient tables: `index,h_re,h_im,g_re,g_im`, one row per power.

use std::io::Read;

use shearconv_core::verify::format_float;
use shearconv_core::{Complex64, HarmonicMap, TruncatedSeries};

use crate::error::{CliError, CliResult};

pub const HEADER: [&str; 5] = ["index", "h_re", "h_im", "g_re", "g_im"];

fn writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new())
}

pub(crate) fn finish(w: csv::Writer<Vec<u8>>) -> CliResult<String> {
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Input(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| CliError::Input(e.to_string()))
}

pub(crate) fn csv_error(e: csv::Error) -> CliError {
    CliError::Input(format!("csv: {e}"))
}

pub(crate) fn new_writer() -> csv::Writer<Vec<u8>> {
    writer()
}

pub fn write_map(map: &HarmonicMap) -> CliResult<String> {
    let mut w = writer();
    w.write_record(HEADER).map_err(csv_error)?;
    for k in 0..=map.order() {
        let (h, g) = (map.h().coeff(k), map.g().coeff(k));
        w.write_record([
            k.to_string(),
            format_float(h.re),
            format_float(h.im),
            format_float(g.re),
            format_float(g.im),
        ])
        .map_err(csv_error)?;
    }
    finish(w)
}

pub fn read_map(source: impl Read, name: &str) -> CliResult<HarmonicMap> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(source);
    let headers = r.headers().map_err(csv_error)?.clone();
    if headers.iter().ne(HEADER) {
        return Err(CliError::Input(format!(
            "{name}: expected header `{}`",
            HEADER.join(",")
        )));
    }
    let mut h = Vec::new();
    let mut g = Vec::new();
    for (row, record) in r.records().enumerate() {
        let record = record.map_err(|e| CliError::Input(format!("{name}: {e}")))?;
        let line = record.position().map_or(row + 2, |p| p.line() as usize);
        let field = |i: usize| -> CliResult<f64> {
            record[i].parse::<f64>().map_err(|_| {
                CliError::Input(format!(
                    "{name}: line {line}, field `{}`: `{}` is not a number",
                    HEADER[i], &record[i]
                ))
            })
        };
        let index: usize = record[0].parse().map_err(|_| {
            CliError::Input(format!("{name}: line {line}: bad index `{}`", &record[0]))
        })?;
        if index != row {
            return Err(CliError::Input(format!(
                "{name}: line {line}: expected index {row}, got {index}"
            )));
        }
        h.push(Complex64::new(field(1)?, field(2)?));
        g.push(Complex64::new(field(3)?, field(4)?));
    }
    if h.is_empty() {
        return Err(CliError::Input(format!("{name}: no coefficient rows")));
    }
    Ok(HarmonicMap::new(TruncatedSeries::new(h), TruncatedSeries::new(g)))
}
