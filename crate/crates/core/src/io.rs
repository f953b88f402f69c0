//! Point-set file formats: CSV with provenance, SVG for planar sets, XYZ
//! for spatial sets.
//!
//! Data files are deterministic: floats are written with 17 significant
//! digits, which round-trips f64 exactly, and no timestamps are embedded.

use std::io::{BufRead, Write};

use nalgebra::Vector3;

use crate::analysis::CoveringReport;
use crate::error::{Error, Result};
use crate::generator::{QuasiPoint, QuasiSet};

/// One parsed CSV record.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRecord {
    pub pos: Vector3<f64>,
    pub occupation: f64,
    pub source: Vec<i32>,
}

fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes `x,y[,z],occupation,src` rows; `src` is the semicolon-joined
/// source lattice vector.
pub fn write_csv(w: &mut dyn Write, q: &QuasiSet, report: &CoveringReport) -> Result<()> {
    let n = q.cluster.n;
    if n == 3 {
        writeln!(w, "x,y,z,occupation,src")?;
    } else {
        writeln!(w, "x,y,occupation,src")?;
    }
    for (point, occ) in q.points.iter().zip(&report.occupations) {
        let src = point
            .source
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(";");
        for i in 0..n {
            write!(w, "{},", fmt_f64(point.pos[i]))?;
        }
        writeln!(w, "{},{}", fmt_f64(*occ), src)?;
    }
    Ok(())
}

/// Reads back a CSV written by [`write_csv`].
pub fn read_csv(r: impl BufRead) -> Result<Vec<CsvRecord>> {
    let mut lines = r.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::config(1, "empty CSV"))?;
    let header = header?;
    let n = match header.as_str() {
        "x,y,occupation,src" => 2,
        "x,y,z,occupation,src" => 3,
        other => {
            return Err(Error::config(1, format!("unrecognized CSV header: {other}")));
        }
    };
    let mut out = Vec::new();
    for (idx, line) in lines {
        let line = line?;
        if line.is_empty() {
            continue;
        }
        let lineno = idx + 1;
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != n + 2 {
            return Err(Error::config(
                lineno,
                format!("expected {} fields, found {}", n + 2, fields.len()),
            ));
        }
        let mut pos = Vector3::zeros();
        for i in 0..n {
            pos[i] = fields[i]
                .parse::<f64>()
                .map_err(|e| Error::config(lineno, format!("bad coordinate: {e}")))?;
        }
        let occupation = fields[n]
            .parse::<f64>()
            .map_err(|e| Error::config(lineno, format!("bad occupation: {e}")))?;
        let source = fields[n + 1]
            .split(';')
            .map(|tok| {
                tok.parse::<i32>()
                    .map_err(|e| Error::config(lineno, format!("bad source entry: {e}")))
            })
            .collect::<Result<Vec<i32>>>()?;
        out.push(CsvRecord {
            pos,
            occupation,
            source,
        });
    }
    Ok(out)
}

/// One circle per point, radius 0.15 of the smallest pair distance,
/// viewBox fitted to the data. Planar sets only.
pub fn write_svg(w: &mut dyn Write, q: &QuasiSet) -> Result<()> {
    let radius = match crate::analysis::min_pair_distance(q) {
        Ok(d) => 0.15 * d,
        Err(_) => 0.15 * q.kappa.max(1.0),
    };
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for p in q.positions() {
        for i in 0..2 {
            lo[i] = lo[i].min(p[i]);
            hi[i] = hi[i].max(p[i]);
        }
    }
    if q.is_empty() {
        lo = [0.0; 2];
        hi = [0.0; 2];
    }
    let pad = 2.0 * radius;
    // SVG y grows downward; points are written with y negated.
    let min_x = lo[0] - pad;
    let min_y = -hi[1] - pad;
    let width = hi[0] - lo[0] + 2.0 * pad;
    let height = hi[1] - lo[1] + 2.0 * pad;
    writeln!(w, r#"<?xml version="1.0" encoding="UTF-8"?>"#)?;
    writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{min_x:.6} {min_y:.6} {width:.6} {height:.6}">"#
    )?;
    for p in q.positions() {
        writeln!(
            w,
            r#"  <circle cx="{:.6}" cy="{:.6}" r="{radius:.6}"/>"#,
            p[0], -p[1]
        )?;
    }
    writeln!(w, "</svg>")?;
    Ok(())
}

/// Header-less whitespace-separated triplets, one point per line.
pub fn write_xyz(w: &mut dyn Write, q: &QuasiSet) -> Result<()> {
    for p in q.positions() {
        writeln!(
            w,
            "{} {} {}",
            fmt_f64(p[0]),
            fmt_f64(p[1]),
            fmt_f64(p[2])
        )?;
    }
    Ok(())
}

/// Exact-match check between a generated set and re-read CSV records.
pub fn records_match(points: &[QuasiPoint], records: &[CsvRecord]) -> bool {
    points.len() == records.len()
        && points
            .iter()
            .zip(records)
            .all(|(p, r)| p.source == r.source && p.pos == r.pos)
}
