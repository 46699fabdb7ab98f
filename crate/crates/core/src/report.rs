//! Results table, density-curve CSV and number formatting.

use std::fmt::Write as _;
use std::io::{Read, Write};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{GroupName, SpaceGroupSpec};
use crate::optimize::{argmax, optimize, DensityCurve, OptimizationResult, SearchParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Text,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "text" | "txt" => Ok(Format::Text),
            other => Err(Error::InvalidParameter(format!("unknown format {other:?}"))),
        }
    }
}

/// `x` with 17 significant digits in positional notation.
pub fn sig17(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0.0000000000000000".into();
    }
    let exponent = x.abs().log10().floor() as i32;
    let decimals = (16 - exponent).max(0) as usize;
    format!("{x:.decimals$}")
}

/// One row of the results table. Numeric fields are empty for failed rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub group: String,
    pub fractional_parts: String,
    pub q: Option<u32>,
    pub k: Option<u32>,
    pub radius: Option<f64>,
    pub density: Option<f64>,
    pub kissing: Option<usize>,
    pub kernel_x: Option<f64>,
    pub kernel_y: Option<f64>,
    pub kernel_z: Option<f64>,
    pub tau: Option<f64>,
    pub global_max: bool,
    pub error: Option<String>,
}

impl ReportRow {
    pub fn from_result(r: &OptimizationResult) -> Self {
        let k = r.best.kernel.direction();
        Self {
            group: r.spec.name().to_string(),
            fractional_parts: r.spec.fractional_parts_string(),
            q: r.spec.q(),
            k: r.spec.k(),
            radius: Some(r.best.radius),
            density: Some(r.best.density),
            kissing: Some(r.best.kissing),
            kernel_x: Some(k.x),
            kernel_y: Some(k.y),
            kernel_z: Some(k.z),
            tau: Some(r.best.tau),
            global_max: false,
            error: None,
        }
    }

    pub fn failed(spec: &SpaceGroupSpec, err: &Error) -> Self {
        Self {
            group: spec.name().to_string(),
            fractional_parts: spec.fractional_parts_string(),
            q: spec.q(),
            k: spec.k(),
            radius: None,
            density: None,
            kissing: None,
            kernel_x: None,
            kernel_y: None,
            kernel_z: None,
            tau: None,
            global_max: false,
            error: Some(err.to_string()),
        }
    }

    pub fn is_failed(&self) -> bool {
        self.error.is_some()
    }

    pub fn label(&self) -> String {
        match (self.q, self.k) {
            (Some(q), Some(k)) => format!("{} (q={q}, k={k})", self.group),
            (Some(q), None) => format!("{} (q={q})", self.group),
            _ => self.group.clone(),
        }
    }
}

/// Optional `(q, k)` pair.
pub type QkChoice = (Option<u32>, Option<u32>);

/// Parameter choices per catalog row. Rows with several choices report the
/// densest one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TablePlan {
    pub rows: Vec<(GroupName, Vec<QkChoice>)>,
}

impl Default for TablePlan {
    fn default() -> Self {
        let qs = |r: std::ops::RangeInclusive<u32>| r.map(|q| (Some(q), None)).collect::<Vec<_>>();
        let rows = GroupName::ALL
            .into_iter()
            .map(|g| {
                let choices = match g {
                    GroupName::OneQI1 => qs(3..=10),
                    GroupName::OneQI2 => vec![(Some(3), Some(1))],
                    GroupName::ThreeQI1 | GroupName::ThreeQI2 => qs(3..=8),
                    GroupName::ThreeQeI3 => vec![(Some(4), None), (Some(6), None), (Some(8), None)],
                    _ => vec![(None, None)],
                };
                (g, choices)
            })
            .collect();
        Self { rows }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub rows: Vec<ReportRow>,
    /// Group name of the densest successful row.
    pub global_max: Option<String>,
}

impl Table {
    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| r.is_failed()).count()
    }

    pub fn global_max_row(&self) -> Option<&ReportRow> {
        self.rows.iter().find(|r| r.global_max)
    }

    pub fn row(&self, group: GroupName) -> Option<&ReportRow> {
        self.rows.iter().find(|r| r.group == group.as_str())
    }
}

/// Optimizes every planned row. Rows run in parallel; the output keeps
/// catalog order.
pub fn compute_table(plan: &TablePlan, params: &SearchParams) -> Table {
    let jobs: Vec<(usize, SpaceGroupSpec)> = plan
        .rows
        .iter()
        .enumerate()
        .flat_map(|(i, (g, choices))| choices.iter().map(move |&(q, k)| (i, *g, q, k)))
        .filter_map(|(i, g, q, k)| SpaceGroupSpec::new(g, q, k).ok().map(|s| (i, s)))
        .collect();
    let results: Vec<(usize, SpaceGroupSpec, Result<OptimizationResult>)> =
        jobs.into_par_iter().map(|(i, s)| {
            let r = optimize(&s, params);
            (i, s, r)
        }).collect();
    let mut rows = Vec::new();
    for (i, (g, _)) in plan.rows.iter().enumerate() {
        let mine: Vec<&(usize, SpaceGroupSpec, Result<OptimizationResult>)> =
            results.iter().filter(|r| r.0 == i).collect();
        let ok: Vec<OptimizationResult> = mine.iter().filter_map(|r| r.2.as_ref().ok().cloned()).collect();
        let row = match (argmax(&ok), mine.iter().find_map(|r| r.2.as_ref().err().map(|e| (&r.1, e)))) {
            (Some(j), None) => ReportRow::from_result(&ok[j]),
            (_, Some((spec, e))) => ReportRow::failed(spec, e),
            (None, None) => ReportRow::failed(
                &SpaceGroupSpec::catalog(*g),
                &Error::InvalidParameter("no admissible parameters".into()),
            ),
        };
        rows.push(row);
    }
    let best = (0..rows.len())
        .filter(|&i| rows[i].density.is_some())
        .fold(None, |acc: Option<usize>, i| match acc {
            Some(j) if rows[j].density >= rows[i].density => Some(j),
            _ => Some(i),
        });
    if let Some(i) = best {
        rows[i].global_max = true;
    }
    Table { global_max: best.map(|i| rows[i].group.clone()), rows }
}

fn opt_num(x: Option<f64>) -> String {
    x.map(sig17).unwrap_or_default()
}

fn opt_int<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

const TABLE_HEADER: [&str; 13] = [
    "group",
    "fractional_parts",
    "q",
    "k",
    "radius",
    "density",
    "kissing",
    "kernel_x",
    "kernel_y",
    "kernel_z",
    "tau",
    "global_max",
    "error",
];

pub fn write_table<W: Write>(table: &Table, format: Format, mut w: W) -> Result<()> {
    match format {
        Format::Csv => {
            let mut csv = csv::Writer::from_writer(w);
            csv.write_record(TABLE_HEADER)?;
            for r in &table.rows {
                csv.write_record([
                    r.group.clone(),
                    r.fractional_parts.clone(),
                    opt_int(r.q),
                    opt_int(r.k),
                    opt_num(r.radius),
                    opt_num(r.density),
                    opt_int(r.kissing),
                    opt_num(r.kernel_x),
                    opt_num(r.kernel_y),
                    opt_num(r.kernel_z),
                    opt_num(r.tau),
                    r.global_max.to_string(),
                    r.error.clone().unwrap_or_default(),
                ])?;
            }
            csv.flush()?;
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut w, table)?;
            writeln!(w)?;
        }
        Format::Text => w.write_all(table_text(table).as_bytes())?,
    }
    Ok(())
}

fn table_text(table: &Table) -> String {
    let f4 = |x: Option<f64>| x.map(|v| format!("{v:.4}")).unwrap_or_else(|| "-".into());
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:<10} {:<10} {:>3} {:>3} {:>8} {:>8} {:>7} {:>8}  kernel",
        "group", "(t1,t2)", "q", "k", "radius", "density", "kissing", "tau"
    );
    for r in &table.rows {
        if let Some(e) = &r.error {
            let _ = writeln!(s, "{:<10} {:<10} FAILED: {e}", r.group, r.fractional_parts);
            continue;
        }
        let _ = writeln!(
            s,
            "{:<10} {:<10} {:>3} {:>3} {:>8} {:>8} {:>7} {:>8}  ({}, {}, {}){}",
            r.group,
            r.fractional_parts,
            r.q.map(|q| q.to_string()).unwrap_or_else(|| "-".into()),
            r.k.map(|k| k.to_string()).unwrap_or_else(|| "-".into()),
            f4(r.radius),
            f4(r.density),
            r.kissing.map(|k| k.to_string()).unwrap_or_else(|| "-".into()),
            f4(r.tau),
            f4(r.kernel_x),
            f4(r.kernel_y),
            f4(r.kernel_z),
            if r.global_max { "  *" } else { "" }
        );
    }
    match table.global_max_row() {
        Some(r) => {
            let _ = writeln!(s, "global maximum: {} density {}", r.label(), f4(r.density));
        }
        None => {
            let _ = writeln!(s, "global maximum: none");
        }
    }
    s
}

pub fn read_table_csv<R: Read>(r: R) -> Result<Vec<ReportRow>> {
    let mut rdr = csv::Reader::from_reader(r);
    rdr.deserialize().map(|row| row.map_err(Error::from)).collect()
}

pub fn read_table_json<R: Read>(r: R) -> Result<Table> {
    Ok(serde_json::from_reader(r)?)
}

pub fn write_curve_csv<W: Write>(curve: &DensityCurve, w: W) -> Result<()> {
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record(["tau", "density", "radius", "kissing"])?;
    for s in &curve.samples {
        csv.write_record([sig17(s.tau), sig17(s.density), sig17(s.radius), s.kissing.to_string()])?;
    }
    csv.flush()?;
    Ok(())
}

pub fn read_curve_csv<R: Read>(r: R) -> Result<Vec<crate::optimize::CurveSample>> {
    let mut rdr = csv::Reader::from_reader(r);
    rdr.deserialize().map(|row| row.map_err(Error::from)).collect()
}

/// Human-readable summary of one optimization, with its touching
/// neighbours.
pub fn optimization_text(r: &OptimizationResult) -> String {
    let b = &r.best;
    let k = b.kernel.direction();
    let mut s = String::new();
    let _ = writeln!(s, "group     {}  {}", r.spec.label(), r.spec.signature());
    let _ = writeln!(s, "parts     {}", r.spec.fractional_parts_string());
    let _ = writeln!(s, "method    {}", r.method);
    let _ = writeln!(s, "radius    {}", sig17(b.radius));
    let _ = writeln!(s, "density   {}", sig17(b.density));
    let _ = writeln!(s, "tau       {}", sig17(b.tau));
    let _ = writeln!(s, "kernel    ({}, {}, {})", sig17(k.x), sig17(k.y), sig17(k.z));
    let _ = writeln!(s, "kissing   {}", b.kissing);
    let _ = writeln!(
        s,
        "window    k_max = {} certified ({}·tau = {} >= 2R = {})",
        b.k_max,
        b.k_max,
        sig17(b.k_max as f64 * b.tau),
        sig17(2.0 * b.radius)
    );
    let _ = writeln!(s, "touching neighbours:");
    for n in &b.argmin_elements {
        let _ = writeln!(
            s,
            "  word {:?} lattice {:+} shift {} distance {}",
            n.element.word,
            n.element.lattice,
            sig17(n.element.iso.shift()),
            sig17(n.distance)
        );
    }
    let _ = writeln!(s, "evaluations {}  wall time {:.3}s", r.evaluations, r.wall_time);
    s
}
