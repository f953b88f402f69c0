//! The superspace picture: row vectors w_i assembled from cluster
//! coordinates, the common norm kappa, and the projectors onto the physical
//! space and its orthogonal complement.
//!
//! The physical projector is expressed in the rescaled basis, so canonical
//! lattice directions project exactly onto cluster vectors.

use nalgebra::Vector3;

use crate::cluster::Cluster;
use crate::error::{Error, Result};

/// Relative tolerance for the orthogonality / equal-norm verification,
/// scaled by kappa^2.
pub const ORTH_REL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct Embedding {
    n: usize,
    k: usize,
    /// Row-major n x k matrix; row i is w_i = (v_{i1}, ..., v_{ik}).
    w: Vec<f64>,
    kappa: f64,
}

impl Embedding {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// Row w_i as a slice of length k.
    pub fn row(&self, i: usize) -> &[f64] {
        &self.w[i * self.k..(i + 1) * self.k]
    }

    /// Entry w_{ij} = v_{ij}.
    pub fn coord(&self, i: usize, j: usize) -> f64 {
        self.w[i * self.k + j]
    }

    fn check_len(&self, x_len: usize) -> Result<()> {
        if x_len != self.k {
            return Err(Error::DimensionMismatch {
                expected: self.k,
                got: x_len,
            });
        }
        Ok(())
    }

    /// Physical projection P x = (<x,w_1>, ..., <x,w_n>), padded to 3D.
    pub fn project_phys(&self, x: &[f64]) -> Result<Vector3<f64>> {
        self.check_len(x.len())?;
        let mut out = Vector3::zeros();
        for i in 0..self.n {
            out[i] = dot(self.row(i), x);
        }
        Ok(out)
    }

    /// `project_phys` for integer lattice vectors.
    pub fn project_lattice(&self, x: &[i32]) -> Vector3<f64> {
        debug_assert_eq!(x.len(), self.k);
        let mut out = Vector3::zeros();
        for i in 0..self.n {
            let row = self.row(i);
            let mut s = 0.0;
            for (w, &xi) in row.iter().zip(x) {
                s += w * xi as f64;
            }
            out[i] = s;
        }
        out
    }

    /// Internal-space projection: x minus its component in the physical
    /// subspace. Orthogonal to every w_i, idempotent.
    pub fn project_perp(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_len(x.len())?;
        let k2 = self.kappa * self.kappa;
        let mut out = x.to_vec();
        for i in 0..self.n {
            let row = self.row(i);
            let coeff = dot(row, x) / k2;
            for (o, w) in out.iter_mut().zip(row) {
                *o -= coeff * w;
            }
        }
        Ok(out)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Assemble the embedding rows from a cluster and verify that they are
/// pairwise orthogonal with a common norm.
pub fn build_embedding(c: &Cluster) -> Result<Embedding> {
    let n = c.n;
    let k = c.k();
    let mut w = vec![0.0; n * k];
    for i in 0..n {
        for j in 0..k {
            w[i * k + j] = c.coord(i, j);
        }
    }
    let e = Embedding {
        n,
        k,
        w,
        kappa: 0.0,
    };
    let k2 = dot(e.row(0), e.row(0));
    if k2 <= 0.0 {
        return Err(Error::NotAGCluster("first row has zero norm".into()));
    }
    let tol = ORTH_REL * k2;
    for i in 0..n {
        for j in i..n {
            let g = dot(e.row(i), e.row(j));
            let want = if i == j { k2 } else { 0.0 };
            if (g - want).abs() > tol {
                return Err(Error::NotAGCluster(format!(
                    "<w_{}, w_{}> = {:e}, expected {:e}",
                    i + 1,
                    j + 1,
                    g,
                    want
                )));
            }
        }
    }
    Ok(Embedding {
        kappa: k2.sqrt(),
        ..e
    })
}
