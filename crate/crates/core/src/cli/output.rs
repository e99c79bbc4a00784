//! CSV and JSON row emission.
//!
//! CSV numbers carry 17 significant digits in exponent form; infinities are
//! written as `inf` and zero temperature as `beta_a = inf`. JSON uses `null`
//! plus a boolean flag for the same cases.

use std::io::Write;

use serde::Serialize;

use crate::analysis::{SweepGrid, SweepRecord};
use crate::measures::Parameters;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

pub const PARAMETER_COLUMNS: [&str; 11] = [
    "state",
    "method",
    "x",
    "eta",
    "omega_c",
    "beta_a",
    "k1",
    "k2",
    "omega_sq_a",
    "omega_sq_b",
    "omega_sq_c",
];

pub const RECORD_COLUMNS: [&str; 8] = [
    "measure",
    "t",
    "value",
    "t_p",
    "t_c",
    "t_c_reached",
    "freezing",
    "error",
];

pub const EVOLVE_COLUMNS: [&str; 6] = ["t", "i", "j", "re", "im", "abs"];

/// 17 significant digits, locale independent. Negative zero prints as zero.
pub fn fmt_num(v: f64) -> String {
    if v == 0.0 {
        "0.0000000000000000e0".into()
    } else if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{v:.16e}")
    }
}

/// The full parameter tuple every output row carries.
#[derive(Debug, Clone, Serialize)]
pub struct ParamRow {
    pub state: &'static str,
    pub method: &'static str,
    pub x: f64,
    pub eta: f64,
    pub omega_c: f64,
    pub beta_a: Option<f64>,
    pub zero_temperature: bool,
    pub k1: f64,
    pub k2: f64,
    pub omega_sq_a: f64,
    pub omega_sq_b: f64,
    pub omega_sq_c: f64,
}

impl ParamRow {
    pub fn new(p: &Parameters<f64>, grid: &SweepGrid<f64>, omega_sq: [f64; 3]) -> Self {
        Self {
            state: grid.state.name(),
            method: p.method.name(),
            x: p.x,
            eta: p.eta,
            omega_c: grid.omega_c,
            beta_a: p.beta_a,
            zero_temperature: p.beta_a.is_none(),
            k1: p.k1,
            k2: p.k2,
            omega_sq_a: omega_sq[0],
            omega_sq_b: omega_sq[1],
            omega_sq_c: omega_sq[2],
        }
    }

    fn csv_fields(&self) -> Vec<String> {
        vec![
            self.state.into(),
            self.method.into(),
            fmt_num(self.x),
            fmt_num(self.eta),
            fmt_num(self.omega_c),
            fmt_num(self.beta_a.unwrap_or(f64::INFINITY)),
            fmt_num(self.k1),
            fmt_num(self.k2),
            fmt_num(self.omega_sq_a),
            fmt_num(self.omega_sq_b),
            fmt_num(self.omega_sq_c),
        ]
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EvolveRow {
    #[serde(flatten)]
    pub params: ParamRow,
    pub t: f64,
    pub i: usize,
    pub j: usize,
    pub re: f64,
    pub im: f64,
    pub abs: f64,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "record", rename_all = "snake_case")]
pub enum RecordRow {
    Measure {
        #[serde(flatten)]
        params: ParamRow,
        measure: &'static str,
        t: f64,
        value: f64,
    },
    Timescale {
        #[serde(flatten)]
        params: ParamRow,
        measure: &'static str,
        t_p: Option<f64>,
        t_p_infinite: bool,
        t_c: f64,
        t_c_reached: bool,
        freezing: Vec<[f64; 2]>,
    },
    Failure {
        #[serde(flatten)]
        params: ParamRow,
        measure: Option<&'static str>,
        error: String,
    },
}

impl RecordRow {
    pub fn from_record(r: &SweepRecord<f64>, grid: &SweepGrid<f64>, omega_sq: [f64; 3]) -> Self {
        match r {
            SweepRecord::Measure(m) => Self::Measure {
                params: ParamRow::new(&m.parameters, grid, omega_sq),
                measure: m.kind.name(),
                t: m.t,
                value: m.value,
            },
            SweepRecord::Timescale(ts) => Self::Timescale {
                params: ParamRow::new(&ts.parameters, grid, omega_sq),
                measure: ts.kind.name(),
                t_p: ts.t_p.is_finite().then_some(ts.t_p),
                t_p_infinite: ts.t_p.is_infinite(),
                t_c: ts.t_c,
                t_c_reached: ts.t_c_reached,
                freezing: ts.freezing.iter().map(|&(a, b)| [a, b]).collect(),
            },
            SweepRecord::Failure {
                kind,
                parameters,
                message,
            } => Self::Failure {
                params: ParamRow::new(parameters, grid, omega_sq),
                measure: kind.map(|k| k.name()),
                error: message.clone(),
            },
        }
    }

    fn csv_fields(&self) -> Vec<String> {
        let empty = String::new;
        let (kind, params, rest) = match self {
            Self::Measure {
                params,
                measure,
                t,
                value,
            } => (
                "measure",
                params,
                [
                    measure.to_string(),
                    fmt_num(*t),
                    fmt_num(*value),
                    empty(),
                    empty(),
                    empty(),
                    empty(),
                    empty(),
                ],
            ),
            Self::Timescale {
                params,
                measure,
                t_p,
                t_c,
                t_c_reached,
                freezing,
                ..
            } => {
                let intervals = freezing
                    .iter()
                    .map(|[a, b]| format!("{}:{}", fmt_num(*a), fmt_num(*b)))
                    .collect::<Vec<_>>()
                    .join(";");
                (
                    "timescale",
                    params,
                    [
                        measure.to_string(),
                        empty(),
                        empty(),
                        fmt_num(t_p.unwrap_or(f64::INFINITY)),
                        fmt_num(*t_c),
                        t_c_reached.to_string(),
                        intervals,
                        empty(),
                    ],
                )
            }
            Self::Failure {
                params,
                measure,
                error,
            } => (
                "failure",
                params,
                [
                    measure.unwrap_or("").to_string(),
                    empty(),
                    empty(),
                    empty(),
                    empty(),
                    empty(),
                    empty(),
                    error.clone(),
                ],
            ),
        };
        let mut fields = vec![kind.to_string()];
        fields.extend(params.csv_fields());
        fields.extend(rest);
        fields
    }
}

fn record_header() -> Vec<&'static str> {
    let mut h = vec!["record"];
    h.extend(PARAMETER_COLUMNS);
    h.extend(RECORD_COLUMNS);
    h
}

fn evolve_header() -> Vec<&'static str> {
    let mut h = PARAMETER_COLUMNS.to_vec();
    h.extend(EVOLVE_COLUMNS);
    h
}

fn write_csv(
    out: &mut dyn Write,
    header: &[&str],
    rows: impl Iterator<Item = Vec<String>>,
) -> std::io::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    w.flush()
}

fn write_json<R: Serialize>(out: &mut dyn Write, rows: &[R]) -> std::io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, rows)?;
    out.write_all(b"\n")
}

pub fn write_records(
    out: &mut dyn Write,
    format: Format,
    rows: &[RecordRow],
) -> std::io::Result<()> {
    match format {
        Format::Csv => write_csv(
            out,
            &record_header(),
            rows.iter().map(RecordRow::csv_fields),
        ),
        Format::Json => write_json(out, rows),
    }
}

pub fn write_evolve(
    out: &mut dyn Write,
    format: Format,
    rows: &[EvolveRow],
) -> std::io::Result<()> {
    match format {
        Format::Csv => write_csv(
            out,
            &evolve_header(),
            rows.iter().map(|r| {
                let mut f = r.params.csv_fields();
                f.extend([
                    fmt_num(r.t),
                    r.i.to_string(),
                    r.j.to_string(),
                    fmt_num(r.re),
                    fmt_num(r.im),
                    fmt_num(r.abs),
                ]);
                f
            }),
        ),
        Format::Json => write_json(out, rows),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(fmt_num(0.6459782224702452), "6.4597822247024517e-1");
        assert_eq!(fmt_num(f64::INFINITY), "inf");
        assert_eq!(fmt_num(0.0), "0.0000000000000000e0");
        assert_eq!(fmt_num(-0.0), "0.0000000000000000e0");
        assert_eq!(fmt_num(1.2).parse::<f64>().unwrap(), 1.2);
    }

    #[test]
    fn headers_are_stable() {
        assert_eq!(
            record_header().join(","),
            "record,state,method,x,eta,omega_c,beta_a,k1,k2,omega_sq_a,omega_sq_b,omega_sq_c,\
             measure,t,value,t_p,t_c,t_c_reached,freezing,error"
        );
        assert_eq!(
            evolve_header().join(","),
            "state,method,x,eta,omega_c,beta_a,k1,k2,omega_sq_a,omega_sq_b,omega_sq_c,t,i,j,re,im,abs"
        );
    }
}
