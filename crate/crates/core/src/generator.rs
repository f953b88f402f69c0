//! Enumeration of the in-strip lattice points inside a physical radius, and
//! their projection to the quasiperiodic point set.
//!
//! The search walks the lattice breadth-first from the origin along the 2k
//! single-axis steps. Whether the in-strip lattice points inside a ball stay
//! connected under such steps is not guaranteed, so expansion runs out to an
//! extra slack corridor while only points inside the requested radius are
//! emitted.

use std::collections::HashSet;

use nalgebra::Vector3;

use crate::cluster::Cluster;
use crate::embedding::Embedding;
use crate::error::{Error, Result};
use crate::spatial::PointGrid;
use crate::strip::StripSpec;

pub const DEFAULT_MAX_POINTS: usize = 1_000_000;

/// Relative physical-space dedupe tolerance, scaled by kappa.
pub const PHYS_DEDUPE_REL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct GenerationConfig {
    /// Physical radius of the emitted patch.
    pub radius: f64,
    /// Extra expansion radius; defaults to one cluster diameter.
    pub slack: Option<f64>,
    /// Safety cap on emitted points.
    pub max_points: usize,
}

impl GenerationConfig {
    pub fn new(radius: f64) -> Self {
        GenerationConfig {
            radius,
            slack: None,
            max_points: DEFAULT_MAX_POINTS,
        }
    }
}

/// One selected point: its physical position and the lattice vector it came
/// from.
#[derive(Debug, Clone, PartialEq)]
pub struct QuasiPoint {
    pub pos: Vector3<f64>,
    pub source: Vec<i32>,
}

/// The projected point set with generation provenance.
#[derive(Debug, Clone)]
pub struct QuasiSet {
    /// Points sorted lexicographically by source lattice vector.
    pub points: Vec<QuasiPoint>,
    pub cluster: Cluster,
    pub radius: f64,
    /// Resolved slack actually used for expansion.
    pub slack: f64,
    pub max_points: usize,
    pub kappa: f64,
    /// Lattice points whose projection collided with an earlier point.
    pub collisions: usize,
    /// Set when nothing beyond the origin was reachable.
    pub empty_beyond_origin: bool,
}

impl QuasiSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn positions(&self) -> impl Iterator<Item = &Vector3<f64>> {
        self.points.iter().map(|p| &p.pos)
    }
}

/// The 2k single-axis neighbours of `x`, in the fixed order
/// +e1, -e1, +e2, -e2, ...
pub fn neighbors(x: &[i32]) -> Vec<Vec<i32>> {
    let mut out = Vec::with_capacity(2 * x.len());
    for i in 0..x.len() {
        for step in [1, -1] {
            let mut y = x.to_vec();
            y[i] += step;
            out.push(y);
        }
    }
    out
}

/// Breadth-first enumeration of the strip inside the radius budget,
/// projected and deduplicated.
pub fn generate(
    cluster: &Cluster,
    embedding: &Embedding,
    strip: &StripSpec,
    cfg: &GenerationConfig,
) -> Result<QuasiSet> {
    assert!(cfg.radius > 0.0, "radius must be positive");
    assert!(cfg.max_points >= 1, "max_points must be at least 1");
    let k = cluster.k();
    let slack = cfg.slack.unwrap_or_else(|| cluster.diameter());
    let r_emit = cfg.radius;
    let r_expand = cfg.radius + slack;

    let origin = vec![0i32; k];
    debug_assert!(strip.contains_lattice(&origin));

    // Visit order: level by level, lexicographic inside a level. `seen`
    // holds every point ever tested; verdicts never depend on the path.
    let mut seen: HashSet<Vec<i32>> = HashSet::new();
    seen.insert(origin.clone());
    let mut accepted: Vec<(Vec<i32>, Vector3<f64>)> = vec![(origin.clone(), Vector3::zeros())];
    let mut emit_count = 1usize;
    let mut level = vec![origin];

    while !level.is_empty() {
        let mut candidates: Vec<Vec<i32>> = level
            .iter()
            .flat_map(|x| neighbors(x))
            .filter(|y| !seen.contains(y))
            .collect();
        candidates.sort_unstable();
        candidates.dedup();

        let mut next = Vec::new();
        for cand in candidates {
            seen.insert(cand.clone());
            if !strip.contains_lattice(&cand) {
                continue;
            }
            let pos = embedding.project_lattice(&cand);
            if pos.norm() > r_expand {
                continue;
            }
            if pos.norm() <= r_emit {
                emit_count += 1;
            }
            accepted.push((cand.clone(), pos));
            next.push(cand);
        }
        if emit_count > cfg.max_points {
            let partial = assemble(cluster, embedding, cfg, slack, &accepted)?;
            return Err(Error::Truncated {
                max_points: cfg.max_points,
                partial: Box::new(partial),
            });
        }
        level = next;
    }

    assemble(cluster, embedding, cfg, slack, &accepted)
}

fn assemble(
    cluster: &Cluster,
    embedding: &Embedding,
    cfg: &GenerationConfig,
    slack: f64,
    accepted: &[(Vec<i32>, Vector3<f64>)],
) -> Result<QuasiSet> {
    let kappa = embedding.kappa();
    let eps = PHYS_DEDUPE_REL * kappa;

    // Physical dedupe in visit order: the first point wins.
    let mut grid = PointGrid::new(eps.max(f64::MIN_POSITIVE * 1e16));
    let mut kept: Vec<QuasiPoint> = Vec::new();
    let mut collisions = 0usize;
    for (source, pos) in accepted {
        if pos.norm() > cfg.radius {
            continue;
        }
        if grid.nearest_within(pos, eps).is_some() {
            collisions += 1;
            continue;
        }
        grid.insert(*pos);
        kept.push(QuasiPoint {
            pos: *pos,
            source: source.clone(),
        });
    }
    kept.sort_by(|a, b| a.source.cmp(&b.source));

    Ok(QuasiSet {
        empty_beyond_origin: accepted.len() <= 1,
        points: kept,
        cluster: cluster.clone(),
        radius: cfg.radius,
        slack,
        max_points: cfg.max_points,
        kappa,
        collisions,
    })
}
