//! Post-generation checks: the covering-cluster property, occupation
//! statistics, patch symmetry defects and nearest-neighbour distances.

use nalgebra::{Matrix3, Vector3};

use crate::embedding::Embedding;
use crate::error::{Error, Result};
use crate::generator::{neighbors, QuasiSet, PHYS_DEDUPE_REL};
use crate::spatial::{min_pair_distance as grid_min_pair, PointGrid};
use crate::strip::StripSpec;

/// Histogram bin count for occupation fractions.
pub const OCCUPATION_BINS: usize = 10;

/// One position of the surrounding cluster copy: `+v_rep` or `-v_rep`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClusterSite {
    pub rep: u32,
    pub negated: bool,
}

/// Covering and occupation summary for one generated set.
///
/// "Occupation" of a point q is the fraction of the 2k cluster positions
/// q + c that are themselves occupied by generated points.
#[derive(Debug, Clone)]
pub struct CoveringReport {
    /// Arithmetical neighbours that failed to land on a cluster position.
    pub violations: usize,
    /// Largest observed neighbour projection error, in units of kappa.
    pub max_projection_error: f64,
    /// Per-point occupied cluster positions, aligned with the point list.
    pub occupied_sites: Vec<Vec<ClusterSite>>,
    /// Per-point occupation fraction: occupied sites over 2k.
    pub occupations: Vec<f64>,
    /// Per-point count of in-strip arithmetical neighbours.
    pub in_strip_neighbors: Vec<u32>,
    /// Whether each point is far enough from the patch boundary for its
    /// occupation to be meaningful.
    pub interior: Vec<bool>,
    /// Histogram of interior occupation fractions over [0, 1].
    pub histogram: [usize; OCCUPATION_BINS],
    pub interior_count: usize,
    pub median_occupation: f64,
}

/// Verifies that every in-strip arithmetical neighbour of every point
/// projects onto a translated cluster position, and measures occupations.
pub fn covering_check(q: &QuasiSet, strip: &StripSpec, e: &Embedding) -> CoveringReport {
    let k = q.cluster.k();
    let kappa = q.kappa;
    let tol = 1e-12 * kappa;
    let eps = PHYS_DEDUPE_REL * kappa;

    let grid = PointGrid::with_points(eps.max(f64::MIN_POSITIVE * 1e16), q.positions().copied());

    let diameter = q.cluster.diameter();
    let mut violations = 0usize;
    let mut max_err = 0.0f64;
    let mut occupied_sites = Vec::with_capacity(q.len());
    let mut occupations = Vec::with_capacity(q.len());
    let mut in_strip_neighbors = Vec::with_capacity(q.len());
    let mut interior = Vec::with_capacity(q.len());

    for point in &q.points {
        let mut in_strip = 0u32;
        for (i, nb) in neighbors(&point.source).iter().enumerate() {
            if !strip.contains_lattice(nb) {
                continue;
            }
            in_strip += 1;
            let axis = i / 2;
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            let expected = point.pos + sign * q.cluster.reps()[axis];
            let err = (e.project_lattice(nb) - expected).norm();
            max_err = max_err.max(err / kappa);
            if err > tol {
                violations += 1;
            }
        }
        in_strip_neighbors.push(in_strip);

        let mut sites = Vec::new();
        for (j, v) in q.cluster.reps().iter().enumerate() {
            for negated in [false, true] {
                let c = if negated { -v } else { *v };
                if grid.nearest_within(&(point.pos + c), eps).is_some() {
                    sites.push(ClusterSite {
                        rep: j as u32,
                        negated,
                    });
                }
            }
        }
        occupations.push(sites.len() as f64 / (2 * k) as f64);
        occupied_sites.push(sites);
        interior.push(point.pos.norm() <= q.radius - diameter);
    }

    let mut histogram = [0usize; OCCUPATION_BINS];
    let mut interior_fracs: Vec<f64> = occupations
        .iter()
        .zip(&interior)
        .filter(|(_, keep)| **keep)
        .map(|(f, _)| *f)
        .collect();
    for f in &interior_fracs {
        let bin = ((f * OCCUPATION_BINS as f64) as usize).min(OCCUPATION_BINS - 1);
        histogram[bin] += 1;
    }
    interior_fracs.sort_by(f64::total_cmp);
    let median_occupation = if interior_fracs.is_empty() {
        0.0
    } else {
        interior_fracs[interior_fracs.len() / 2]
    };

    CoveringReport {
        violations,
        max_projection_error: max_err,
        occupied_sites,
        occupations,
        in_strip_neighbors,
        interior_count: interior.iter().filter(|b| **b).count(),
        interior,
        histogram,
        median_occupation,
    }
}

/// Worst distance from the image of the interior patch under `g` to the
/// generated set. Zero means the patch is g-invariant at this radius.
pub fn symmetry_defect(q: &QuasiSet, g: &Matrix3<f64>, r_test: f64) -> Result<f64> {
    let bound = q.radius - q.slack;
    if r_test > bound {
        return Err(Error::PatchNotInterior { r_test, bound });
    }
    let patch: Vec<&Vector3<f64>> = q.positions().filter(|p| p.norm() <= r_test).collect();
    if patch.is_empty() {
        return Err(Error::EmptyPatch);
    }

    let cell = nn_scale(q);
    let grid = PointGrid::with_points(cell, q.positions().copied());
    let mut worst = 0.0f64;
    for p in patch {
        let image = g * p;
        let (_, d) = grid.nearest(&image).expect("set is nonempty");
        worst = worst.max(d);
    }
    Ok(worst)
}

/// Minimum pairwise distance of the generated set.
pub fn min_pair_distance(q: &QuasiSet) -> Result<f64> {
    if q.len() < 2 {
        return Err(Error::TooFewPoints);
    }
    let pts: Vec<Vector3<f64>> = q.positions().copied().collect();
    Ok(grid_min_pair(&pts).expect("two or more points"))
}

/// Rough nearest-neighbour spacing used to size search grids.
fn nn_scale(q: &QuasiSet) -> f64 {
    let n = q.cluster.n as f64;
    let radius = q.radius.max(f64::MIN_POSITIVE);
    radius / (q.len() as f64).powf(1.0 / n).max(1.0)
}
