//! Window facet data and the strip membership test.
//!
//! Every facet family of the window is labelled by an (n+1)-subset of the k
//! lattice axes. For each subset, the facet normal reduces to n+1 signed
//! n x n minors of the cluster coordinate matrix (the cofactors), and the
//! window half-width along that normal is half the absolute cofactor sum.
//! Membership of a lattice point then costs one fused multiply-add per
//! cofactor, independently of the superspace dimension.

use nalgebra::{Matrix2, Matrix3};

use crate::cluster::Cluster;
use crate::embedding::Embedding;
use crate::error::{Error, Result};

/// Relative boundary tolerance on each |f(x)| <= d constraint.
pub const MEMBERSHIP_REL: f64 = 1e-9;

/// Relative scale (times kappa^n) below which a half-width is treated as a
/// rank-deficient zero.
const DEGENERATE_REL: f64 = 1e-12;

/// One facet family: its column indices, cofactors and half-width.
#[derive(Debug, Clone, PartialEq)]
pub struct FacetTuple {
    /// Strictly increasing 0-based column indices, n+1 of them.
    pub indices: Vec<u32>,
    /// Signed minors c_j; the facet functional is sum_j c_j * x_{i_j}.
    pub cofactors: Vec<f64>,
    /// Window half-width along the facet normal.
    pub halfwidth: f64,
}

/// Precomputed facet data for every (n+1)-subset, flat and tuple-major.
#[derive(Debug, Clone)]
pub struct StripSpec {
    k: usize,
    n: usize,
    indices: Vec<u32>,
    cofactors: Vec<f64>,
    halfwidths: Vec<f64>,
    /// Acceptance threshold per tuple: d grown by the boundary tolerance,
    /// or the absolute noise floor for degenerate tuples.
    bounds: Vec<f64>,
    degenerate: usize,
    /// For each column index, the tuples whose functional depends on it.
    touching: Vec<Vec<u32>>,
}

/// All strictly increasing (n+1)-subsets of {0, ..., k-1} in lexicographic
/// order.
pub fn index_family(k: usize, n: usize) -> Result<Vec<Vec<u32>>> {
    let len = n + 1;
    if k <= n {
        return Err(Error::EmptyStrip { k, n });
    }
    let mut out = Vec::with_capacity(binomial(k, len));
    let mut cur: Vec<u32> = (0..len as u32).collect();
    loop {
        out.push(cur.clone());
        // Advance to the next combination.
        let mut i = len;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if cur[i] < (k - len + i) as u32 {
                cur[i] += 1;
                for j in i + 1..len {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn binomial(k: usize, r: usize) -> usize {
    if r > k {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc * (k - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

/// Cofactors of one tuple: c_j = (-1)^(1+j) times the n x n minor of the
/// cluster columns with column j removed (1-based j).
pub fn facet_functional(c: &Cluster, tuple: &[u32]) -> Vec<f64> {
    let n = c.n;
    debug_assert_eq!(tuple.len(), n + 1);
    let mut cof = Vec::with_capacity(n + 1);
    for drop in 0..=n {
        let det = match n {
            2 => {
                let mut m = Matrix2::zeros();
                let mut col = 0;
                for (j, &idx) in tuple.iter().enumerate() {
                    if j == drop {
                        continue;
                    }
                    for i in 0..2 {
                        m[(i, col)] = c.coord(i, idx as usize);
                    }
                    col += 1;
                }
                m.determinant()
            }
            3 => {
                let mut m = Matrix3::zeros();
                let mut col = 0;
                for (j, &idx) in tuple.iter().enumerate() {
                    if j == drop {
                        continue;
                    }
                    for i in 0..3 {
                        m[(i, col)] = c.coord(i, idx as usize);
                    }
                    col += 1;
                }
                m.determinant()
            }
            other => unreachable!("physical dimension {other} unsupported"),
        };
        let sign = if drop % 2 == 0 { 1.0 } else { -1.0 };
        cof.push(sign * det);
    }
    cof
}

/// Half-width d = max over sign choices of the first-row determinant, which
/// collapses to half the absolute cofactor sum.
pub fn halfwidth(cofactors: &[f64]) -> f64 {
    0.5 * cofactors.iter().map(|c| c.abs()).sum::<f64>()
}

impl StripSpec {
    pub fn build(c: &Cluster, e: &Embedding) -> Result<StripSpec> {
        let k = c.k();
        let n = c.n;
        let family = index_family(k, n)?;
        let count = family.len();
        let tl = n + 1;

        let eps_abs = MEMBERSHIP_REL * e.kappa().powi(n as i32);
        let degenerate_floor = DEGENERATE_REL * e.kappa().powi(n as i32);

        let mut indices = Vec::with_capacity(count * tl);
        let mut cofactors = Vec::with_capacity(count * tl);
        let mut halfwidths = Vec::with_capacity(count);
        let mut bounds = Vec::with_capacity(count);
        let mut degenerate = 0;
        let mut touching = vec![Vec::new(); k];

        for (t, tuple) in family.iter().enumerate() {
            let cof = facet_functional(c, tuple);
            let d = halfwidth(&cof);
            let bound = if d <= degenerate_floor {
                degenerate += 1;
                eps_abs
            } else {
                d * (1.0 + MEMBERSHIP_REL)
            };
            for &idx in tuple {
                touching[idx as usize].push(t as u32);
            }
            indices.extend_from_slice(tuple);
            cofactors.extend_from_slice(&cof);
            halfwidths.push(d);
            bounds.push(bound);
        }

        Ok(StripSpec {
            k,
            n,
            indices,
            cofactors,
            halfwidths,
            bounds,
            degenerate,
            touching,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn tuple_count(&self) -> usize {
        self.halfwidths.len()
    }

    pub fn degenerate_count(&self) -> usize {
        self.degenerate
    }

    pub fn halfwidths(&self) -> &[f64] {
        &self.halfwidths
    }

    pub fn tuple(&self, t: usize) -> FacetTuple {
        let tl = self.n + 1;
        FacetTuple {
            indices: self.indices[t * tl..(t + 1) * tl].to_vec(),
            cofactors: self.cofactors[t * tl..(t + 1) * tl].to_vec(),
            halfwidth: self.halfwidths[t],
        }
    }

    pub fn tuples(&self) -> impl Iterator<Item = FacetTuple> + '_ {
        (0..self.tuple_count()).map(|t| self.tuple(t))
    }

    fn functional(&self, t: usize, x: &[i32]) -> f64 {
        let tl = self.n + 1;
        let base = t * tl;
        let mut f = 0.0;
        for j in 0..tl {
            f += self.cofactors[base + j] * x[self.indices[base + j] as usize] as f64;
        }
        f
    }

    /// Strip membership of an integer lattice point, with early exit on the
    /// first violated facet pair.
    pub fn contains_lattice(&self, x: &[i32]) -> bool {
        debug_assert_eq!(x.len(), self.k);
        let tl = self.n + 1;
        for (t, bound) in self.bounds.iter().enumerate() {
            let base = t * tl;
            let mut f = 0.0;
            for j in 0..tl {
                f += unsafe {
                    self.cofactors.get_unchecked(base + j)
                        * *x.get_unchecked(*self.indices.get_unchecked(base + j) as usize) as f64
                };
            }
            if f.abs() > *bound {
                return false;
            }
        }
        true
    }

    /// All facet functional values at `x`, for callers that want to reuse
    /// them across single-axis steps.
    pub fn functionals(&self, x: &[i32]) -> Vec<f64> {
        (0..self.tuple_count()).map(|t| self.functional(t, x)).collect()
    }

    /// Refresh a functional-value vector after a step along axis `axis`:
    /// only tuples containing that axis are recomputed (from `x_new`), the
    /// rest are carried over unchanged.
    pub fn functionals_after_step(&self, prev: &[f64], axis: usize, x_new: &[i32]) -> Vec<f64> {
        debug_assert_eq!(prev.len(), self.tuple_count());
        let mut vals = prev.to_vec();
        for &t in &self.touching[axis] {
            vals[t as usize] = self.functional(t as usize, x_new);
        }
        vals
    }

    /// Membership decision from a precomputed functional-value vector.
    pub fn contains_from_functionals(&self, vals: &[f64]) -> bool {
        vals.iter()
            .zip(&self.bounds)
            .all(|(f, bound)| f.abs() <= *bound)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cluster::{build_cluster, GroupSpec, TAU};
    use crate::embedding::build_embedding;
    use nalgebra::{Matrix3, Matrix4, Vector3};
    use proptest::prelude::*;

    fn octagon() -> (Cluster, Embedding, StripSpec) {
        let spec = GroupSpec::dihedral(4, &[[1.0, 0.0]]).unwrap();
        let c = build_cluster(&spec).unwrap();
        let e = build_embedding(&c).unwrap();
        let s = StripSpec::build(&c, &e).unwrap();
        (c, e, s)
    }

    /// Brute-force half-width straight from the max-over-signs determinant,
    /// evaluated with a full (n+1) x (n+1) determinant per sign vector.
    fn halfwidth_by_enumeration(c: &Cluster, tuple: &[u32]) -> f64 {
        let n = c.n;
        let len = n + 1;
        let mut best: f64 = 0.0;
        for mask in 0u32..(1 << len) {
            let alpha: Vec<f64> = (0..len)
                .map(|j| if mask >> j & 1 == 1 { 0.5 } else { -0.5 })
                .collect();
            let det = match n {
                2 => {
                    let mut m = Matrix3::zeros();
                    for (j, &idx) in tuple.iter().enumerate() {
                        m[(0, j)] = alpha[j];
                        m[(1, j)] = c.coord(0, idx as usize);
                        m[(2, j)] = c.coord(1, idx as usize);
                    }
                    m.determinant()
                }
                3 => {
                    let mut m = Matrix4::zeros();
                    for (j, &idx) in tuple.iter().enumerate() {
                        m[(0, j)] = alpha[j];
                        for i in 0..3 {
                            m[(i + 1, j)] = c.coord(i, idx as usize);
                        }
                    }
                    m.determinant()
                }
                _ => unreachable!(),
            };
            best = best.max(det.abs());
        }
        best
    }

    #[test]
    fn family_counts_match_binomials() {
        assert_eq!(index_family(10, 2).unwrap().len(), 120);
        assert_eq!(index_family(31, 3).unwrap().len(), 31465);
        assert_eq!(index_family(6, 3).unwrap().len(), 15);
    }

    #[test]
    fn family_k4_n2_is_explicit() {
        let fam = index_family(4, 2).unwrap();
        assert_eq!(
            fam,
            vec![
                vec![0, 1, 2],
                vec![0, 1, 3],
                vec![0, 2, 3],
                vec![1, 2, 3]
            ]
        );
    }

    #[test]
    fn family_too_small_superspace_errors() {
        assert!(matches!(
            index_family(2, 2),
            Err(Error::EmptyStrip { k: 2, n: 2 })
        ));
    }

    #[test]
    fn cofactors_match_hand_expansion() {
        // Columns (1,0), (0,1), (1,1): expansion along the symbol row gives
        // (-1, -1, 1).
        let spec = GroupSpec::dihedral(4, &[[1.0, 0.0]]).unwrap();
        let c = Cluster::from_reps_unchecked(
            spec,
            vec![
                Vector3::new(1.0, 0.0, 0.0),
                Vector3::new(0.0, 1.0, 0.0),
                Vector3::new(1.0, 1.0, 0.0),
            ],
        );
        let cof = facet_functional(&c, &[0, 1, 2]);
        assert_eq!(cof, vec![-1.0, -1.0, 1.0]);
    }

    #[test]
    fn repeated_column_kills_functional() {
        // Two identical columns: the functional vanishes on the first
        // cluster row, as a repeated-row determinant must.
        let spec = GroupSpec::dihedral(4, &[[1.0, 0.0]]).unwrap();
        let c = Cluster::from_reps_unchecked(
            spec,
            vec![
                Vector3::new(0.4, -1.3, 0.0),
                Vector3::new(0.4, -1.3, 0.0),
                Vector3::new(1.0, 2.0, 0.0),
            ],
        );
        let cof = facet_functional(&c, &[0, 1, 2]);
        let on_row: f64 = cof
            .iter()
            .enumerate()
            .map(|(j, cf)| cf * c.coord(0, j))
            .sum();
        assert!(on_row.abs() < 1e-12);
        // And column 0 vs column 1 difference is annihilated.
        assert!((cof[0] - -cof[1]).abs() < 1e-12);
    }

    #[test]
    fn functional_vanishes_on_cluster_rows() {
        let (c, _, s) = octagon();
        for tuple in s.tuples() {
            for i in 0..c.n {
                let on_row: f64 = tuple
                    .cofactors
                    .iter()
                    .zip(&tuple.indices)
                    .map(|(cf, &idx)| cf * c.coord(i, idx as usize))
                    .sum();
                assert!(on_row.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn halfwidth_examples() {
        assert_eq!(halfwidth(&[-1.0, -1.0, 1.0]), 1.5);
        assert_eq!(halfwidth(&[0.0, 0.0, 0.0]), 0.0);
        assert_eq!(halfwidth(&[2.0, 0.0, 0.0, 0.0]), 1.0);
    }

    #[test]
    fn halfwidth_equals_sign_enumeration() {
        let spec = GroupSpec::icosahedral(&[[1.0, TAU, 0.0]]).unwrap();
        let c = build_cluster(&spec).unwrap();
        let e = build_embedding(&c).unwrap();
        let s = StripSpec::build(&c, &e).unwrap();
        for tuple in s.tuples() {
            let brute = halfwidth_by_enumeration(&c, &tuple.indices);
            let rel = if brute > 0.0 { brute } else { 1.0 };
            assert!((tuple.halfwidth - brute).abs() <= 1e-12 * rel);
        }
    }

    #[test]
    fn origin_is_always_inside() {
        let (_, _, s) = octagon();
        assert!(s.contains_lattice(&vec![0; s.k()]));
    }

    #[test]
    fn octagon_axis_points() {
        // Frozen from the independent window-membership oracle: e_1 is in
        // the strip, 3 e_1 is far outside.
        let (_, _, s) = octagon();
        let mut x = vec![0; s.k()];
        x[0] = 1;
        assert!(s.contains_lattice(&x));
        x[0] = 3;
        assert!(!s.contains_lattice(&x));
    }

    #[test]
    fn membership_is_centrally_symmetric() {
        let (_, _, s) = octagon();
        let mut x = vec![0i32; s.k()];
        let mut state = 0x2545f4914f6cdd1du64;
        for _ in 0..200 {
            for xi in x.iter_mut() {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                *xi = (state % 7) as i32 - 3;
            }
            let neg: Vec<i32> = x.iter().map(|v| -v).collect();
            assert_eq!(s.contains_lattice(&x), s.contains_lattice(&neg));
        }
    }

    proptest! {
        #[test]
        fn step_update_matches_full_evaluation(
            coords in proptest::collection::vec(-4i32..=4, 4),
            axis in 0usize..4,
            dir in proptest::bool::ANY,
        ) {
            let (_, _, s) = octagon();
            let base = s.functionals(&coords);
            prop_assert_eq!(s.contains_from_functionals(&base), s.contains_lattice(&coords));

            let mut stepped = coords.clone();
            stepped[axis] += if dir { 1 } else { -1 };
            let inc = s.functionals_after_step(&base, axis, &stepped);
            let full = s.functionals(&stepped);
            // Exact agreement: untouched tuples are carried over, touched
            // ones are recomputed by the same code path.
            prop_assert_eq!(&inc, &full);
            prop_assert_eq!(
                s.contains_from_functionals(&inc),
                s.contains_lattice(&stepped)
            );
        }
    }

    #[test]
    fn decagon_strip_has_no_degenerate_tuples() {
        let spec = GroupSpec::dihedral(5, &[[1.0, 0.0], [TAU, 0.0]]).unwrap();
        let c = build_cluster(&spec).unwrap();
        let e = build_embedding(&c).unwrap();
        let s = StripSpec::build(&c, &e).unwrap();
        assert_eq!(s.tuple_count(), 120);
        assert_eq!(s.degenerate_count(), 0);
    }
}
