//! Independent window-membership decision, used to validate the cofactor
//! strip test.
//!
//! A point x lies in the strip iff some physical-space shift brings it into
//! the unit hypercube: there must exist alpha in R^n with
//! |x_j - sum_i alpha_i w_{ij}| <= 1/2 for every j. That is a linear
//! feasibility problem in n <= 3 unknowns, decided here by successive
//! variable elimination. This path shares no code with the strip module.

use crate::embedding::Embedding;
use crate::error::Result;

/// Default absolute widening of the hypercube bounds.
pub const DEFAULT_EPS: f64 = 1e-9;

/// Rounding-noise scale relative to a row's accumulated magnitude.
/// Coefficients below it count as zero, and constant rows contradict only
/// beyond it.
const NOISE_REL: f64 = 1e-12;

/// A linear inequality sum_i a[i] * alpha_i <= b. `mag` accumulates the
/// absolute sizes of everything that went into the row, bounding how much
/// rounding noise its entries can carry.
#[derive(Clone, Copy)]
struct Row {
    a: [f64; 3],
    b: f64,
    mag: f64,
}

impl Row {
    fn noise(&self) -> f64 {
        NOISE_REL * self.mag
    }

    fn is_constant(&self, active: usize) -> bool {
        let tol = self.noise();
        self.a[..active].iter().all(|c| c.abs() <= tol)
    }

    /// For a constant row, 0 <= b must hold beyond rounding noise.
    fn contradicts(&self) -> bool {
        self.b < -self.noise()
    }
}

/// Decides whether the internal projection of `x` lies in the window, by
/// feasibility of the shifted-hypercube system widened by `eps`.
pub fn window_contains(e: &Embedding, x: &[f64], eps: f64) -> Result<bool> {
    let n = e.n();
    let k = e.k();
    if x.len() != k {
        return Err(crate::error::Error::DimensionMismatch {
            expected: k,
            got: x.len(),
        });
    }

    let half = 0.5 + eps;
    let mut rows: Vec<Row> = Vec::with_capacity(2 * k);
    for (j, &xj) in x.iter().enumerate() {
        let mut a = [0.0; 3];
        let mut neg = [0.0; 3];
        let mut mag = half + xj.abs();
        for i in 0..n {
            a[i] = e.coord(i, j);
            neg[i] = -a[i];
            mag += a[i].abs();
        }
        // x_j - <alpha, w_.j> must land in [-half, half].
        rows.push(Row {
            a,
            b: half + xj,
            mag,
        });
        rows.push(Row {
            a: neg,
            b: half - xj,
            mag,
        });
    }

    let mut active = n;
    while active > 1 {
        match eliminate_last(rows, active) {
            Some(next) => rows = next,
            None => return Ok(false),
        }
        active -= 1;
    }
    Ok(interval_feasible(&rows))
}

/// `window_contains` on an integer lattice point with the default widening.
pub fn window_contains_lattice(e: &Embedding, x: &[i32]) -> Result<bool> {
    let xf: Vec<f64> = x.iter().map(|&v| v as f64).collect();
    window_contains(e, &xf, DEFAULT_EPS)
}

/// One Fourier-Motzkin step: remove variable `active - 1` by pairing every
/// lower bound with every upper bound. Returns None on a constant
/// contradiction.
fn eliminate_last(rows: Vec<Row>, active: usize) -> Option<Vec<Row>> {
    let v = active - 1;
    let mut uppers: Vec<Row> = Vec::new();
    let mut lowers: Vec<Row> = Vec::new();
    let mut out: Vec<Row> = Vec::new();
    for row in rows {
        let c = row.a[v];
        if c.abs() <= row.noise() {
            if row.is_constant(v) {
                if row.contradicts() {
                    return None;
                }
            } else {
                out.push(row);
            }
        } else if c > 0.0 {
            uppers.push(normalize(row, v));
        } else {
            lowers.push(normalize(row, v));
        }
    }

    out.reserve(uppers.len() * lowers.len());
    for lo in &lowers {
        for up in &uppers {
            let mut a = [0.0; 3];
            for ((dst, u), l) in a[..v].iter_mut().zip(&up.a[..v]).zip(&lo.a[..v]) {
                *dst = u - l;
            }
            let combined = Row {
                a,
                b: up.b - lo.b,
                mag: up.mag + lo.mag,
            };
            if combined.is_constant(v) {
                if combined.contradicts() {
                    return None;
                }
            } else {
                out.push(combined);
            }
        }
    }
    Some(out)
}

/// Divides a row by its coefficient on variable `v`, so bounds on that
/// variable can be read off directly.
fn normalize(mut row: Row, v: usize) -> Row {
    let c = row.a[v];
    for x in row.a.iter_mut() {
        *x /= c;
    }
    row.b /= c;
    row.mag /= c.abs();
    row
}

/// Feasibility of single-variable rows: the tightest lower bound must not
/// exceed the tightest upper bound.
fn interval_feasible(rows: &[Row]) -> bool {
    let mut lo = f64::NEG_INFINITY;
    let mut hi = f64::INFINITY;
    let mut slack = 0.0f64;
    for row in rows {
        let c = row.a[0];
        if c.abs() <= row.noise() {
            if row.contradicts() {
                return false;
            }
        } else if c > 0.0 {
            hi = hi.min(row.b / c);
            slack = slack.max(row.noise() / c.abs());
        } else {
            lo = lo.max(row.b / c);
            slack = slack.max(row.noise() / c.abs());
        }
    }
    lo <= hi + slack
}
