//! G-clusters: finite unions of orbits of the dihedral groups D_{2m} and the
//! icosahedral group Y, stored as antipodal representative vectors.
//!
//! Points of a 2D cluster are kept as `Vector3` with a zero third component,
//! so all downstream geometry works on one point type.

use nalgebra::{Matrix2, Matrix3, Vector3};

use crate::error::{Error, Result};

/// Golden ratio, the constant in the icosahedral representation.
pub const TAU: f64 = 1.618033988749894848204586834365638118;

/// Hard cap on orbit closure size; hitting it signals broken generators.
const ORBIT_LIMIT: usize = 10_000;

/// Relative dedupe tolerance: scaled by the largest shell radius.
pub const DEDUPE_REL: f64 = 1e-9;

/// Which finite group acts, in its standard representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupKind {
    /// D_{2m}, the symmetries of a regular 2m-gon, acting on the plane.
    Dihedral { m: u32 },
    /// Y, the icosahedral rotation group, acting on 3-space.
    Icosahedral,
}

impl GroupKind {
    /// Dimension of the physical space the group acts on.
    pub fn dim(&self) -> usize {
        match self {
            GroupKind::Dihedral { .. } => 2,
            GroupKind::Icosahedral => 3,
        }
    }
}

/// A group together with the shell seeds whose orbits form the cluster.
#[derive(Debug, Clone)]
pub struct GroupSpec {
    pub kind: GroupKind,
    shells: Vec<Vector3<f64>>,
}

impl GroupSpec {
    /// Dihedral spec from 2-component shell seeds.
    pub fn dihedral(m: u32, shells: &[[f64; 2]]) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidGroup(m));
        }
        let shells = shells
            .iter()
            .map(|s| check_seed(Vector3::new(s[0], s[1], 0.0)))
            .collect::<Result<_>>()?;
        Ok(GroupSpec {
            kind: GroupKind::Dihedral { m },
            shells,
        })
    }

    /// Icosahedral spec from 3-component shell seeds.
    pub fn icosahedral(shells: &[[f64; 3]]) -> Result<Self> {
        let shells = shells
            .iter()
            .map(|s| check_seed(Vector3::new(s[0], s[1], s[2])))
            .collect::<Result<_>>()?;
        Ok(GroupSpec {
            kind: GroupKind::Icosahedral,
            shells,
        })
    }

    pub fn n(&self) -> usize {
        self.kind.dim()
    }

    pub fn shells(&self) -> &[Vector3<f64>] {
        &self.shells
    }

    /// The two generating matrices, embedded in 3x3 form (2D groups act on
    /// the xy-plane and fix z).
    pub fn generators(&self) -> (Matrix3<f64>, Matrix3<f64>) {
        match self.kind {
            GroupKind::Dihedral { m } => {
                let (a, b) = dihedral_generators(m).expect("validated on construction");
                (embed2(&a), embed2(&b))
            }
            GroupKind::Icosahedral => icosahedral_generators(),
        }
    }
}

fn check_seed(s: Vector3<f64>) -> Result<Vector3<f64>> {
    if s.norm() == 0.0 {
        Err(Error::ZeroShell)
    } else {
        Ok(s)
    }
}

fn embed2(m: &Matrix2<f64>) -> Matrix3<f64> {
    let mut out = Matrix3::identity();
    out.fixed_view_mut::<2, 2>(0, 0).copy_from(m);
    out
}

/// Generators of D_{2m} on the plane: the rotation by pi/m and the
/// reflection (a, b) -> (a, -b).
pub fn dihedral_generators(m: u32) -> Result<(Matrix2<f64>, Matrix2<f64>)> {
    if m < 2 {
        return Err(Error::InvalidGroup(m));
    }
    let t = std::f64::consts::PI / m as f64;
    let rot = Matrix2::new(t.cos(), -t.sin(), t.sin(), t.cos());
    let refl = Matrix2::new(1.0, 0.0, 0.0, -1.0);
    Ok((rot, refl))
}

/// Generators of the icosahedral rotation group Y: a five-fold rotation
/// written over the golden ratio and the two-fold rotation about z.
pub fn icosahedral_generators() -> (Matrix3<f64>, Matrix3<f64>) {
    let a = Matrix3::new(
        (TAU - 1.0) / 2.0,
        -TAU / 2.0,
        0.5,
        TAU / 2.0,
        0.5,
        (TAU - 1.0) / 2.0,
        -0.5,
        (TAU - 1.0) / 2.0,
        TAU / 2.0,
    );
    let b = Matrix3::new(-1.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, 1.0);
    (a, b)
}

/// Closure of a seed under the two group generators, deduplicated within
/// `DEDUPE_REL` times the seed radius.
pub fn orbit(spec: &GroupSpec, seed: Vector3<f64>) -> Result<Vec<Vector3<f64>>> {
    let seed = check_seed(seed)?;
    let (a, b) = spec.generators();
    let eps = DEDUPE_REL * seed.norm();
    let mut points: Vec<Vector3<f64>> = vec![seed];
    let mut frontier = vec![seed];
    while let Some(p) = frontier.pop() {
        for g in [&a, &b] {
            let q = g * p;
            if !points.iter().any(|r| (r - q).norm() <= eps) {
                if points.len() >= ORBIT_LIMIT {
                    return Err(Error::OrbitOverflow { limit: ORBIT_LIMIT });
                }
                points.push(q);
                frontier.push(q);
            }
        }
    }
    Ok(points)
}

/// An inversion-symmetric G-cluster reduced to antipodal representatives.
///
/// The full cluster is `{ +v, -v : v in reps }`; `reps` holds the
/// lexicographically greater member of each pair, sorted.
#[derive(Debug, Clone)]
pub struct Cluster {
    pub n: usize,
    reps: Vec<Vector3<f64>>,
    spec: GroupSpec,
    dedupe_eps: f64,
    warnings: Vec<String>,
}

impl Cluster {
    /// Number of antipodal pairs (the superspace dimension).
    pub fn k(&self) -> usize {
        self.reps.len()
    }

    pub fn reps(&self) -> &[Vector3<f64>] {
        &self.reps
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn dedupe_eps(&self) -> f64 {
        self.dedupe_eps
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// All 2k cluster points.
    pub fn full_points(&self) -> Vec<Vector3<f64>> {
        let mut out = Vec::with_capacity(2 * self.reps.len());
        for v in &self.reps {
            out.push(*v);
            out.push(-v);
        }
        out
    }

    /// Largest distance between two cluster points (twice the outer radius).
    pub fn diameter(&self) -> f64 {
        2.0 * self
            .reps
            .iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max)
    }

    /// Entry v_{ij}: coordinate `i` of representative `j`.
    pub fn coord(&self, i: usize, j: usize) -> f64 {
        self.reps[j][i]
    }

    /// Test-support constructor bypassing orbit generation. The caller is
    /// responsible for the cluster invariants.
    pub fn from_reps_unchecked(spec: GroupSpec, reps: Vec<Vector3<f64>>) -> Self {
        let r = reps.iter().map(|v| v.norm()).fold(0.0, f64::max);
        Cluster {
            n: spec.n(),
            reps,
            spec,
            dedupe_eps: DEDUPE_REL * r,
            warnings: Vec::new(),
        }
    }
}

/// Union of all shell orbits, deduplicated, checked for inversion symmetry
/// and collapsed to canonical antipodal representatives.
pub fn build_cluster(spec: &GroupSpec) -> Result<Cluster> {
    if spec.shells.is_empty() {
        return Err(Error::NotAGCluster("no shells configured".into()));
    }
    let max_radius = spec.shells.iter().map(|s| s.norm()).fold(0.0, f64::max);
    let eps = DEDUPE_REL * max_radius;

    let mut points: Vec<Vector3<f64>> = Vec::new();
    let mut warnings = Vec::new();
    for (si, seed) in spec.shells.iter().enumerate() {
        let orb = orbit(spec, *seed)?;
        let fresh = orb
            .iter()
            .filter(|q| !points.iter().any(|p| (*p - **q).norm() <= eps))
            .count();
        if fresh == 0 {
            warnings.push(format!("shell {} duplicates an earlier orbit", si + 1));
            continue;
        }
        for q in orb {
            if !points.iter().any(|p| (p - q).norm() <= eps) {
                points.push(q);
            }
        }
    }

    // Inversion symmetry, and antipodal pairing in the same pass.
    let mut paired = vec![false; points.len()];
    let mut reps = Vec::with_capacity(points.len() / 2);
    for i in 0..points.len() {
        if paired[i] {
            continue;
        }
        let Some(j) = points
            .iter()
            .enumerate()
            .position(|(j, q)| j != i && !paired[j] && (q + points[i]).norm() <= eps)
        else {
            return Err(Error::AsymmetricCluster);
        };
        paired[i] = true;
        paired[j] = true;
        let (p, q) = (points[i], points[j]);
        reps.push(if lex_greater(&p, &q, eps) { p } else { q });
    }

    // Representatives are pairwise separated by more than eps, so the exact
    // order is the tolerance-aware one; exactness keeps the sort total.
    reps.sort_by(|a, b| {
        (a[0], a[1], a[2])
            .partial_cmp(&(b[0], b[1], b[2]))
            .expect("finite coordinates")
    });
    Ok(Cluster {
        n: spec.n(),
        reps,
        spec: spec.clone(),
        dedupe_eps: eps,
        warnings,
    })
}

/// Tolerance-aware lexicographic comparison for the antipodal pick, so the
/// canonical choice does not flip on coordinates that are zero up to
/// rounding.
fn lex_greater(a: &Vector3<f64>, b: &Vector3<f64>, eps: f64) -> bool {
    for i in 0..3 {
        let d = a[i] - b[i];
        if d.abs() > eps {
            return d > 0.0;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn dihedral_generator_matrices() {
        let (a, b) = dihedral_generators(2).unwrap();
        // Rotation by 90 degrees sends (1,0) to (0,1).
        let img = a * nalgebra::Vector2::new(1.0, 0.0);
        assert!(close(img[0], 0.0, 1e-15) && close(img[1], 1.0, 1e-15));

        let (a5, _) = dihedral_generators(5).unwrap();
        let img = a5 * nalgebra::Vector2::new(1.0, 0.0);
        assert!(close(img[0], (std::f64::consts::PI / 5.0).cos(), 1e-15));
        assert!(close(img[1], (std::f64::consts::PI / 5.0).sin(), 1e-15));

        // Reflection fixes the first coordinate, flips the second.
        let img = b * nalgebra::Vector2::new(0.3, -0.7);
        assert!(close(img[0], 0.3, 0.0) && close(img[1], 0.7, 0.0));

        assert!(close(a.determinant(), 1.0, 1e-15));
        assert!(close(b.determinant(), -1.0, 1e-15));
        assert!((a * a.transpose() - Matrix2::identity()).norm() < 1e-15);
    }

    #[test]
    fn dihedral_rejects_small_m() {
        assert!(matches!(dihedral_generators(1), Err(Error::InvalidGroup(1))));
        assert!(matches!(dihedral_generators(0), Err(Error::InvalidGroup(0))));
    }

    #[test]
    fn icosahedral_generator_relations() {
        let (a, b) = icosahedral_generators();
        assert!(close(a.determinant(), 1.0, 1e-12));
        assert!(close(b.determinant(), 1.0, 1e-12));
        assert!((a * a.transpose() - Matrix3::identity()).norm() < 1e-12);

        // First component of a(alpha, beta, gamma).
        let img = a * Vector3::new(1.0, 0.0, 0.0);
        assert!(close(img[0], (TAU - 1.0) / 2.0, 1e-15));
        let img = a * Vector3::new(0.0, 1.0, 0.0);
        assert!(close(img[0], -TAU / 2.0, 1e-15));

        let img = b * Vector3::new(1.0, 1.0, 1.0);
        assert_eq!((img[0], img[1], img[2]), (-1.0, -1.0, 1.0));

        // a^5 = b^2 = (ab)^3 = identity.
        let id = Matrix3::identity();
        assert!((a * a * a * a * a - id).norm() < 1e-12);
        assert!((b * b - id).norm() < 1e-12);
        let ab = a * b;
        assert!((ab * ab * ab - id).norm() < 1e-12);
    }

    #[test]
    fn icosahedral_shell_sizes() {
        let spec = GroupSpec::icosahedral(&[[1.0, TAU, 0.0]]).unwrap();
        assert_eq!(orbit(&spec, Vector3::new(1.0, TAU, 0.0)).unwrap().len(), 12);
        assert_eq!(orbit(&spec, Vector3::new(1.0, 1.0, 1.0)).unwrap().len(), 20);
        assert_eq!(orbit(&spec, Vector3::new(1.0, 0.0, 0.0)).unwrap().len(), 30);
    }

    #[test]
    fn dihedral_orbit_is_polygon() {
        let spec = GroupSpec::dihedral(5, &[[1.0, 0.0]]).unwrap();
        let orb = orbit(&spec, Vector3::new(1.0, 0.0, 0.0)).unwrap();
        assert_eq!(orb.len(), 10);
        // All on the unit circle, in the plane.
        for p in &orb {
            assert!(close(p.norm(), 1.0, 1e-12));
            assert_eq!(p[2], 0.0);
        }
    }

    #[test]
    fn orbit_invariant_under_generators() {
        let spec = GroupSpec::icosahedral(&[[1.0, TAU, 0.0]]).unwrap();
        let orb = orbit(&spec, Vector3::new(1.0, TAU, 0.0)).unwrap();
        let (a, b) = spec.generators();
        let eps = DEDUPE_REL * Vector3::new(1.0, TAU, 0.0).norm();
        for g in [a, b] {
            for p in &orb {
                let q = g * p;
                assert!(orb.iter().any(|r| (r - q).norm() <= eps));
            }
        }
    }

    #[test]
    fn three_shell_icosahedral_cluster_has_31_pairs() {
        let spec = GroupSpec::icosahedral(&[
            [1.0, TAU, 0.0],
            [1.0, 1.0, 1.0],
            [1.0, 0.0, 0.0],
        ])
        .unwrap();
        let c = build_cluster(&spec).unwrap();
        assert_eq!(c.k(), 31); // 6 + 10 + 15
        assert!(c.warnings().is_empty());
    }

    #[test]
    fn two_shell_decagonal_cluster_has_10_pairs() {
        let spec = GroupSpec::dihedral(5, &[[1.0, 0.0], [TAU, 0.0]]).unwrap();
        let c = build_cluster(&spec).unwrap();
        assert_eq!(c.k(), 10);
    }

    #[test]
    fn one_shell_octagonal_cluster_has_4_pairs() {
        let spec = GroupSpec::dihedral(4, &[[1.0, 0.0]]).unwrap();
        let c = build_cluster(&spec).unwrap();
        assert_eq!(c.k(), 4);
    }

    #[test]
    fn full_cluster_points_are_distinct() {
        let spec = GroupSpec::icosahedral(&[[1.0, TAU, 0.0], [1.0, 1.0, 1.0]]).unwrap();
        let c = build_cluster(&spec).unwrap();
        let pts = c.full_points();
        assert_eq!(pts.len(), 2 * c.k());
        for (i, p) in pts.iter().enumerate() {
            for q in &pts[i + 1..] {
                assert!((p - q).norm() > c.dedupe_eps());
            }
        }
    }

    #[test]
    fn representatives_are_canonical_and_sorted() {
        let spec = GroupSpec::dihedral(4, &[[1.0, 0.0]]).unwrap();
        let c = build_cluster(&spec).unwrap();
        let eps = c.dedupe_eps();
        for v in c.reps() {
            assert!(lex_greater(v, &-v, eps));
        }
        for pair in c.reps().windows(2) {
            let (a, b) = (&pair[0], &pair[1]);
            assert!((a[0], a[1], a[2]) < (b[0], b[1], b[2]));
        }
    }

    #[test]
    fn full_cluster_is_group_invariant() {
        let spec = GroupSpec::icosahedral(&[[1.0, TAU, 0.0], [1.0, 1.0, 1.0]]).unwrap();
        let c = build_cluster(&spec).unwrap();
        let pts = c.full_points();
        let (a, b) = spec.generators();
        for g in [a, b] {
            for p in &pts {
                let q = g * p;
                assert!(pts.iter().any(|r| (r - q).norm() <= c.dedupe_eps()));
            }
        }
    }

    #[test]
    fn build_is_deterministic() {
        let spec = GroupSpec::icosahedral(&[
            [1.0, TAU, 0.0],
            [1.0, 1.0, 1.0],
            [1.0, 0.0, 0.0],
        ])
        .unwrap();
        let c1 = build_cluster(&spec).unwrap();
        let c2 = build_cluster(&spec).unwrap();
        assert_eq!(c1.reps().len(), c2.reps().len());
        for (a, b) in c1.reps().iter().zip(c2.reps()) {
            assert_eq!(a, b); // bit identical
        }
    }

    #[test]
    fn duplicate_shell_is_warned_and_kept_once() {
        let spec = GroupSpec::dihedral(4, &[[1.0, 0.0], [1.0, 0.0]]).unwrap();
        let c = build_cluster(&spec).unwrap();
        assert_eq!(c.k(), 4);
        assert_eq!(c.warnings().len(), 1);
    }

    #[test]
    fn generic_icosahedral_seed_is_rejected() {
        // A generic Y orbit is not inversion-symmetric (Y contains no
        // inversion), so cluster assembly must fail.
        let spec = GroupSpec::icosahedral(&[[1.0, 0.3, 0.1]]).unwrap();
        assert!(matches!(build_cluster(&spec), Err(Error::AsymmetricCluster)));
    }

    #[test]
    fn zero_seed_is_rejected() {
        assert!(GroupSpec::dihedral(4, &[[0.0, 0.0]]).is_err());
        let spec = GroupSpec::dihedral(4, &[[1.0, 0.0]]).unwrap();
        assert!(orbit(&spec, Vector3::zeros()).is_err());
    }
}
