//! Run configuration parsing and the command implementations behind the
//! binary's subcommands.
//!
//! Config files are line oriented:
//!
//! ```text
//! # decagonal two-shell cluster
//! group = D2m:5
//! shell = 1,0
//! shell = tau,0
//! radius = 14
//! format = svg
//! out = decagonal.svg
//! ```
//!
//! `group` is `Y` or `D2m:<m>`; each `shell` gives one orbit seed (two
//! components for dihedral groups, three for `Y`; the token `tau` denotes
//! the golden ratio). Optional keys: `slack`, `max_points`, `format`
//! (csv | svg | xyz), `out`. `#` starts a comment; unknown keys are errors.

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::analysis::{covering_check, min_pair_distance, symmetry_defect};
use crate::cluster::{build_cluster, Cluster, GroupKind, GroupSpec, TAU};
use crate::embedding::{build_embedding, Embedding};
use crate::error::{Error, Result};
use crate::generator::{generate, neighbors, GenerationConfig, QuasiSet, DEFAULT_MAX_POINTS};
use crate::io::{write_csv, write_svg, write_xyz};
use crate::oracle::window_contains_lattice;
use crate::strip::{StripSpec, MEMBERSHIP_REL};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Svg,
    Xyz,
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Svg => "svg",
            OutputFormat::Xyz => "xyz",
        })
    }
}

/// Everything a run needs, parsed and semantically validated.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub group: GroupSpec,
    pub radius: f64,
    pub slack: Option<f64>,
    pub max_points: usize,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn generation(&self) -> GenerationConfig {
        GenerationConfig {
            radius: self.radius,
            slack: self.slack,
            max_points: self.max_points,
        }
    }
}

pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut group_kind: Option<(usize, GroupKind)> = None;
    let mut shells: Vec<(usize, Vec<f64>)> = Vec::new();
    let mut radius: Option<f64> = None;
    let mut slack: Option<f64> = None;
    let mut max_points: Option<usize> = None;
    let mut format: Option<OutputFormat> = None;
    let mut out: Option<PathBuf> = None;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::config(lineno, format!("expected `key = value`, got `{line}`")));
        };
        let key = key.trim();
        let value = value.trim();
        match key {
            "group" => {
                if group_kind.is_some() {
                    return Err(Error::config(lineno, "duplicate key: group"));
                }
                group_kind = Some((lineno, parse_group(lineno, value)?));
            }
            "shell" => shells.push((lineno, parse_shell(lineno, value)?)),
            "radius" => set_scalar(lineno, "radius", &mut radius, parse_float(lineno, value)?)?,
            "slack" => set_scalar(lineno, "slack", &mut slack, parse_float(lineno, value)?)?,
            "max_points" => {
                let v: usize = value
                    .parse()
                    .map_err(|e| Error::config(lineno, format!("bad max_points: {e}")))?;
                set_scalar(lineno, "max_points", &mut max_points, v)?;
            }
            "format" => {
                let v = match value {
                    "csv" => OutputFormat::Csv,
                    "svg" => OutputFormat::Svg,
                    "xyz" => OutputFormat::Xyz,
                    other => {
                        return Err(Error::config(
                            lineno,
                            format!("unknown format `{other}` (expected csv, svg or xyz)"),
                        ));
                    }
                };
                set_scalar(lineno, "format", &mut format, v)?;
            }
            "out" => set_scalar(lineno, "out", &mut out, PathBuf::from(value))?,
            other => {
                return Err(Error::config(lineno, format!("unknown key: {other}")));
            }
        }
    }

    let (group_line, kind) = group_kind.ok_or(Error::ConfigMissing { key: "group" })?;
    if shells.is_empty() {
        return Err(Error::ConfigMissing { key: "shell" });
    }
    let radius = radius.ok_or(Error::ConfigMissing { key: "radius" })?;
    if radius <= 0.0 {
        return Err(Error::config(group_line, "radius must be positive"));
    }
    if let Some(s) = slack {
        if s < 0.0 {
            return Err(Error::config(group_line, "slack must be nonnegative"));
        }
    }

    let n = kind.dim();
    for (lineno, comps) in &shells {
        if comps.len() != n {
            return Err(Error::config(
                *lineno,
                format!("shell has {} components, group needs {n}", comps.len()),
            ));
        }
    }
    let group = match kind {
        GroupKind::Dihedral { m } => {
            let seeds: Vec<[f64; 2]> = shells.iter().map(|(_, c)| [c[0], c[1]]).collect();
            GroupSpec::dihedral(m, &seeds)?
        }
        GroupKind::Icosahedral => {
            let seeds: Vec<[f64; 3]> = shells.iter().map(|(_, c)| [c[0], c[1], c[2]]).collect();
            GroupSpec::icosahedral(&seeds)?
        }
    };

    let format = format.unwrap_or(OutputFormat::Csv);
    match format {
        OutputFormat::Svg if n != 2 => {
            return Err(Error::config(group_line, "svg output needs a planar group"));
        }
        OutputFormat::Xyz if n != 3 => {
            return Err(Error::config(group_line, "xyz output needs a spatial group"));
        }
        _ => {}
    }

    Ok(RunConfig {
        group,
        radius,
        slack,
        max_points: max_points.unwrap_or(DEFAULT_MAX_POINTS),
        format,
        out,
    })
}

fn set_scalar<T>(lineno: usize, key: &str, slot: &mut Option<T>, value: T) -> Result<()> {
    if slot.is_some() {
        return Err(Error::config(lineno, format!("duplicate key: {key}")));
    }
    *slot = Some(value);
    Ok(())
}

fn parse_group(lineno: usize, value: &str) -> Result<GroupKind> {
    if value == "Y" {
        return Ok(GroupKind::Icosahedral);
    }
    if let Some(m) = value.strip_prefix("D2m:") {
        let m: u32 = m
            .parse()
            .map_err(|e| Error::config(lineno, format!("bad dihedral parameter: {e}")))?;
        if m < 2 {
            return Err(Error::config(lineno, "dihedral parameter m must be at least 2"));
        }
        return Ok(GroupKind::Dihedral { m });
    }
    Err(Error::config(
        lineno,
        format!("unknown group `{value}` (expected Y or D2m:<m>)"),
    ))
}

fn parse_shell(lineno: usize, value: &str) -> Result<Vec<f64>> {
    value
        .split(',')
        .map(|tok| parse_component(lineno, tok.trim()))
        .collect()
}

/// A shell component: a float literal, or the golden ratio token.
fn parse_component(lineno: usize, tok: &str) -> Result<f64> {
    match tok {
        "tau" => Ok(TAU),
        "-tau" => Ok(-TAU),
        _ => tok
            .parse::<f64>()
            .map_err(|e| Error::config(lineno, format!("bad shell component `{tok}`: {e}"))),
    }
}

fn parse_float(lineno: usize, value: &str) -> Result<f64> {
    value
        .parse::<f64>()
        .map_err(|e| Error::config(lineno, format!("bad number `{value}`: {e}")))
}

/// Cluster, embedding and strip data for a config.
pub fn build_pipeline(cfg: &RunConfig) -> Result<(Cluster, Embedding, StripSpec)> {
    let cluster = build_cluster(&cfg.group)?;
    let embedding = build_embedding(&cluster)?;
    let strip = StripSpec::build(&cluster, &embedding)?;
    Ok((cluster, embedding, strip))
}

/// Generates the point set and writes it in the configured format.
/// Returns the number of points written.
pub fn cmd_gen(cfg: &RunConfig, out_override: Option<&Path>, log: &mut dyn Write) -> Result<usize> {
    let (cluster, embedding, strip) = build_pipeline(cfg)?;
    for w in cluster.warnings() {
        writeln!(log, "warning: {w}")?;
    }
    let q = generate(&cluster, &embedding, &strip, &cfg.generation())?;
    if q.empty_beyond_origin {
        writeln!(log, "warning: nothing reachable beyond the origin")?;
    }
    if q.collisions > 0 {
        writeln!(log, "warning: {} projection collisions", q.collisions)?;
    }
    let report = covering_check(&q, &strip, &embedding);

    let mut sink: Box<dyn Write> = match out_override.or(cfg.out.as_deref()) {
        Some(path) => Box::new(std::io::BufWriter::new(std::fs::File::create(path)?)),
        None => Box::new(std::io::stdout().lock()),
    };
    match cfg.format {
        OutputFormat::Csv => write_csv(&mut sink, &q, &report)?,
        OutputFormat::Svg => write_svg(&mut sink, &q)?,
        OutputFormat::Xyz => write_xyz(&mut sink, &q)?,
    }
    sink.flush()?;
    Ok(q.len())
}

/// Number of strip-vs-oracle membership comparisons `cmd_validate` runs.
const ORACLE_BUDGET: usize = 10_000;

/// Re-generates the set and checks the covering property, dedupe contract,
/// patch symmetry, and (optionally) agreement with the independent window
/// oracle. Writes a key-value report; returns overall pass/fail.
pub fn cmd_validate(cfg: &RunConfig, oracle: bool, w: &mut dyn Write) -> Result<bool> {
    let (cluster, embedding, strip) = build_pipeline(cfg)?;
    let q = generate(&cluster, &embedding, &strip, &cfg.generation())?;
    let report = covering_check(&q, &strip, &embedding);
    let mut pass = true;

    writeln!(w, "points = {}", q.len())?;
    writeln!(w, "collisions = {}", q.collisions)?;
    writeln!(w, "covering_violations = {}", report.violations)?;
    writeln!(
        w,
        "max_projection_error_rel = {:.3e}",
        report.max_projection_error
    )?;
    pass &= report.violations == 0;

    writeln!(w, "interior_points = {}", report.interior_count)?;
    writeln!(w, "median_occupation = {:.6}", report.median_occupation)?;
    writeln!(
        w,
        "occupation_histogram = {}",
        report
            .histogram
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",")
    )?;

    match min_pair_distance(&q) {
        Ok(d) => {
            writeln!(w, "min_pair_distance = {d:.9}")?;
            pass &= d > crate::generator::PHYS_DEDUPE_REL * q.kappa;
        }
        Err(_) => writeln!(w, "min_pair_distance = n/a")?,
    }

    // Symmetry defects on an interior patch, when one exists.
    let r_test = q.radius - 2.0 * cluster.diameter();
    if r_test > 0.0 && r_test <= q.radius - q.slack {
        let inversion = -nalgebra::Matrix3::identity();
        let d_inv = symmetry_defect(&q, &inversion, r_test)?;
        writeln!(w, "inversion_defect = {d_inv:.3e}")?;
        pass &= d_inv <= 1e-6 * q.kappa;

        let (rot, _) = cluster.spec().generators();
        let d_rot = symmetry_defect(&q, &rot, r_test)?;
        writeln!(w, "rotation_defect = {d_rot:.3e}")?;
        pass &= d_rot <= 1e-6 * q.kappa;
    } else {
        writeln!(w, "inversion_defect = skipped(patch too small)")?;
    }

    if oracle {
        let (checked, disagreements) = oracle_agreement(&q, &strip, &embedding)?;
        writeln!(w, "oracle_checked = {checked}")?;
        writeln!(w, "oracle_disagreements = {disagreements}")?;
        pass &= disagreements == 0;
    }

    writeln!(w, "validate = {}", if pass { "PASS" } else { "FAIL" })?;
    Ok(pass)
}

/// Compares strip membership against the window oracle on the generated
/// sources and their lattice neighbours, up to a fixed budget. Returns
/// (tests run, disagreements not explained by the boundary tolerance).
fn oracle_agreement(
    q: &QuasiSet,
    strip: &StripSpec,
    embedding: &Embedding,
) -> Result<(usize, usize)> {
    let mut checked = 0usize;
    let mut hard_disagreements = 0usize;
    'outer: for point in &q.points {
        for x in std::iter::once(point.source.clone()).chain(neighbors(&point.source)) {
            if checked >= ORACLE_BUDGET {
                break 'outer;
            }
            checked += 1;
            let fast = strip.contains_lattice(&x);
            let slow = window_contains_lattice(embedding, &x)?;
            if fast != slow && !near_boundary(strip, &x) {
                hard_disagreements += 1;
            }
        }
    }
    Ok((checked, hard_disagreements))
}

/// True when some facet functional sits within its boundary tolerance of
/// the half-width, where the two membership paths may legitimately differ.
pub fn near_boundary(strip: &StripSpec, x: &[i32]) -> bool {
    let vals = strip.functionals(x);
    vals.iter()
        .zip(strip.halfwidths())
        .any(|(f, d)| (f.abs() - d).abs() <= MEMBERSHIP_REL * d)
}

/// Prints the facet-family summary: tuple count and half-width range.
pub fn cmd_facets(cfg: &RunConfig, w: &mut dyn Write) -> Result<()> {
    let (cluster, _, strip) = build_pipeline(cfg)?;
    let mut d_min = f64::INFINITY;
    let mut d_max: f64 = 0.0;
    for &d in strip.halfwidths() {
        d_min = d_min.min(d);
        d_max = d_max.max(d);
    }
    writeln!(w, "k = {}", cluster.k())?;
    writeln!(w, "n = {}", cluster.n)?;
    writeln!(w, "tuples = {}", strip.tuple_count())?;
    writeln!(w, "d_min = {d_min:.9}")?;
    writeln!(w, "d_max = {d_max:.9}")?;
    writeln!(w, "degenerate = {}", strip.degenerate_count())?;
    Ok(())
}

/// Times a full generation run.
pub fn cmd_bench(cfg: &RunConfig, w: &mut dyn Write) -> Result<()> {
    let (cluster, embedding, strip) = build_pipeline(cfg)?;
    let start = Instant::now();
    let q = generate(&cluster, &embedding, &strip, &cfg.generation())?;
    let seconds = start.elapsed().as_secs_f64();
    writeln!(w, "points = {}", q.len())?;
    writeln!(w, "seconds = {seconds:.3}")?;
    writeln!(w, "points_per_second = {:.1}", q.len() as f64 / seconds)?;
    Ok(())
}
