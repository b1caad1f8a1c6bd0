//! Interpolation and differentiation weights on the 2P-point stencil
//! `{-P+1, ..., P}`.
//!
//! `coeffs(P, k, q)` returns the weights of the k-th derivative of the
//! degree-(2P-1) Lagrange interpolant evaluated at `q`, for unit spacing.
//! Callers divide by `delta^k`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::state::Conserved;

/// Evaluation offset in units of the grid spacing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Offset {
    Node(i32),
    /// The midpoint `1/2` between nodes 0 and 1.
    Half,
}

impl Offset {
    pub fn value(self) -> f64 {
        match self {
            Offset::Node(j) => j as f64,
            Offset::Half => 0.5,
        }
    }
}

/// Stencil node positions `-P+1..=P`.
pub fn nodes(p: usize) -> impl Iterator<Item = i32> + Clone {
    let p = p as i32;
    -p + 1..=p
}

/// Weights `gamma^{k,q}_{P,j}` for `j = -P+1..=P`.
pub fn coeffs(p: usize, k: usize, q: Offset) -> Result<Vec<f64>> {
    if p == 0 {
        return Err(Error::Stencil("half-width must be at least 1".into()));
    }
    let n = 2 * p;
    if k >= n {
        return Err(Error::Stencil(format!(
            "derivative order {k} needs more than {n} nodes"
        )));
    }
    if let Offset::Node(j) = q {
        if !nodes(p).any(|x| x == j) {
            return Err(Error::Stencil(format!("offset {j} outside the stencil of half-width {p}")));
        }
    }
    let qv = q.value();
    let xs: Vec<f64> = nodes(p).map(|x| x as f64).collect();
    Ok(fornberg(&xs, qv, k).pop().expect("k + 1 rows"))
}

/// Weights for derivatives `0..=m` at `z` on arbitrary distinct nodes,
/// built by Fornberg's recurrence. Row `d` holds the d-th derivative
/// weights. Far better conditioned than solving the moment system.
fn fornberg(x: &[f64], z: f64, m: usize) -> Vec<Vec<f64>> {
    let n = x.len();
    let mut c = vec![vec![0.0; n]; m + 1];
    let mut c1 = 1.0;
    let mut c4 = x[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = x[i] - z;
        for j in 0..i {
            let c3 = x[i] - x[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// Midpoint weights for the interface flux on nodes `-P+1..=P`.
///
/// These are not the point-interpolation weights `coeffs(P, 0, Half)`: they
/// are chosen so that the difference of two neighbouring interface values
/// reproduces the first derivative at the cell to order `2P`, which is what a
/// conservative update needs. For `P = 1` both coincide (`[1/2, 1/2]`); for
/// `P = 2` this gives `[-1, 7, 7, -1] / 12`.
pub fn flux_weights(p: usize) -> Result<Vec<f64>> {
    if p == 0 {
        return Err(Error::Stencil("half-width must be at least 1".into()));
    }
    let pi = p as i32;
    let xs: Vec<f64> = (-pi..=pi).map(f64::from).collect();
    let d = fornberg(&xs, 0.0, 1).pop().expect("two rows");
    // h_{1/2} - h_{-1/2} = sum_m d_m f_m fixes the weights by a running sum.
    let mut out = Vec::with_capacity(2 * p);
    let mut c = 0.0;
    for dm in &d[..2 * p] {
        c -= dm;
        out.push(c);
    }
    Ok(out)
}

/// `(1/delta^k) sum_j gamma_j samples_j`.
///
/// Panics if the lengths differ.
pub fn apply<S: Conserved>(coeffs: &[f64], samples: &[S], delta: f64, k: usize) -> S {
    assert_eq!(coeffs.len(), samples.len(), "stencil length mismatch");
    let mut acc = S::zero();
    for (g, s) in coeffs.iter().zip(samples) {
        acc.axpy(*g, s);
    }
    acc * delta.powi(-(k as i32))
}

/// Cache of weights for every `(P, k, q)` a run needs; read-only once built.
#[derive(Clone, Debug, Default)]
pub struct CoeffTable {
    entries: HashMap<(usize, usize, Offset), Vec<f64>>,
}

impl CoeffTable {
    /// All derivative orders and offsets (nodes and midpoint) for the given
    /// half-widths.
    pub fn for_half_widths(ps: &[usize]) -> Result<Self> {
        let mut table = CoeffTable::default();
        for &p in ps {
            for k in 0..2 * p {
                for q in nodes(p).map(Offset::Node).chain([Offset::Half]) {
                    table.entries.insert((p, k, q), coeffs(p, k, q)?);
                }
            }
        }
        Ok(table)
    }

    pub fn get(&self, p: usize, k: usize, q: Offset) -> Option<&[f64]> {
        self.entries.get(&(p, k, q)).map(|v| v.as_slice())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(usize, usize, Offset), &Vec<f64>)> {
        self.entries.iter()
    }
}
