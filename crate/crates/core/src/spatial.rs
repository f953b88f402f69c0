//! Uniform-grid spatial index for dedupe and nearest-neighbour queries on
//! small physical point sets.

use std::collections::HashMap;

use nalgebra::Vector3;

#[derive(Debug, Clone)]
pub struct PointGrid {
    cell: f64,
    buckets: HashMap<(i64, i64, i64), Vec<u32>>,
    points: Vec<Vector3<f64>>,
}

impl PointGrid {
    pub fn new(cell: f64) -> Self {
        assert!(cell > 0.0, "grid cell must be positive");
        PointGrid {
            cell,
            buckets: HashMap::new(),
            points: Vec::new(),
        }
    }

    pub fn with_points(cell: f64, pts: impl IntoIterator<Item = Vector3<f64>>) -> Self {
        let mut g = PointGrid::new(cell);
        for p in pts {
            g.insert(p);
        }
        g
    }

    fn key(&self, p: &Vector3<f64>) -> (i64, i64, i64) {
        (
            (p[0] / self.cell).floor() as i64,
            (p[1] / self.cell).floor() as i64,
            (p[2] / self.cell).floor() as i64,
        )
    }

    pub fn insert(&mut self, p: Vector3<f64>) -> u32 {
        let id = self.points.len() as u32;
        self.buckets.entry(self.key(&p)).or_default().push(id);
        self.points.push(p);
        id
    }

    /// Closest stored point within `radius` of `p`, if any.
    pub fn nearest_within(&self, p: &Vector3<f64>, radius: f64) -> Option<(u32, f64)> {
        let reach = (radius / self.cell).ceil() as i64;
        let (cx, cy, cz) = self.key(p);
        let mut best: Option<(u32, f64)> = None;
        for dx in -reach..=reach {
            for dy in -reach..=reach {
                for dz in -reach..=reach {
                    let Some(ids) = self.buckets.get(&(cx + dx, cy + dy, cz + dz)) else {
                        continue;
                    };
                    for &id in ids {
                        let d = (self.points[id as usize] - p).norm();
                        if d <= radius && best.is_none_or(|(_, b)| d < b) {
                            best = Some((id, d));
                        }
                    }
                }
            }
        }
        best
    }

    /// Closest stored point, searched by expanding rings of cells.
    pub fn nearest(&self, p: &Vector3<f64>) -> Option<(u32, f64)> {
        if self.points.is_empty() {
            return None;
        }
        let mut ring = 1;
        loop {
            let radius = ring as f64 * self.cell;
            if let Some(hit) = self.nearest_within(p, radius) {
                return Some(hit);
            }
            ring *= 2;
            // The grid is finite; once the search radius covers the whole
            // extent a hit is guaranteed.
            if radius > self.extent() + 2.0 * self.cell {
                return self
                    .points
                    .iter()
                    .enumerate()
                    .map(|(i, q)| (i as u32, (q - p).norm()))
                    .min_by(|a, b| a.1.total_cmp(&b.1));
            }
        }
    }

    fn extent(&self) -> f64 {
        let mut lo = Vector3::repeat(f64::INFINITY);
        let mut hi = Vector3::repeat(f64::NEG_INFINITY);
        for p in &self.points {
            lo = lo.inf(p);
            hi = hi.sup(p);
        }
        (hi - lo).norm()
    }
}

/// Minimum pairwise distance by grid sweep: pairs closer than the cell size
/// always share adjacent cells, so the cell is grown until a pair is caught
/// inside it.
pub fn min_pair_distance(points: &[Vector3<f64>]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let mut lo = Vector3::repeat(f64::INFINITY);
    let mut hi = Vector3::repeat(f64::NEG_INFINITY);
    for p in points {
        lo = lo.inf(p);
        hi = hi.sup(p);
    }
    let extent = (hi - lo).max();
    if extent == 0.0 {
        return Some(0.0);
    }
    let mut cell = (extent / (points.len() as f64).cbrt()).max(extent * 1e-12);
    loop {
        let grid = PointGrid::with_points(cell, points.iter().copied());
        let mut best = f64::INFINITY;
        for (i, p) in points.iter().enumerate() {
            let (cx, cy, cz) = grid.key(p);
            for dx in -1..=1i64 {
                for dy in -1..=1i64 {
                    for dz in -1..=1i64 {
                        let Some(ids) = grid.buckets.get(&(cx + dx, cy + dy, cz + dz)) else {
                            continue;
                        };
                        for &id in ids {
                            if id as usize != i {
                                best = best.min((points[id as usize] - p).norm());
                            }
                        }
                    }
                }
            }
        }
        if best <= cell {
            return Some(best);
        }
        cell *= 2.0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_min(points: &[Vector3<f64>]) -> f64 {
        let mut best = f64::INFINITY;
        for (i, p) in points.iter().enumerate() {
            for q in &points[i + 1..] {
                best = best.min((p - q).norm());
            }
        }
        best
    }

    #[test]
    fn min_pair_matches_brute_force() {
        let mut state = 0xdeadbeefu64;
        let mut pts = Vec::new();
        for _ in 0..300 {
            let mut c = [0.0; 3];
            for v in c.iter_mut() {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                *v = (state % 10_000) as f64 / 100.0;
            }
            pts.push(Vector3::new(c[0], c[1], 0.0));
        }
        let got = min_pair_distance(&pts).unwrap();
        assert!((got - brute_min(&pts)).abs() < 1e-12);
    }

    #[test]
    fn nearest_within_and_expanding_agree() {
        let pts = vec![
            Vector3::new(0.0, 0.0, 0.0),
            Vector3::new(1.0, 0.0, 0.0),
            Vector3::new(5.0, 5.0, 0.0),
        ];
        let g = PointGrid::with_points(0.5, pts);
        let q = Vector3::new(0.9, 0.1, 0.0);
        let (id, d) = g.nearest(&q).unwrap();
        assert_eq!(id, 1);
        assert!((d - (0.1f64 * 0.1 + 0.1 * 0.1).sqrt()).abs() < 1e-12);
        let (id2, _) = g.nearest_within(&q, 0.5).unwrap();
        assert_eq!(id2, 1);
        assert!(g.nearest_within(&q, 0.05).is_none());
    }

    #[test]
    fn two_points_min_distance() {
        let pts = vec![Vector3::zeros(), Vector3::new(0.0, 2.5, 0.0)];
        assert!((min_pair_distance(&pts).unwrap() - 2.5).abs() < 1e-15);
    }
}
