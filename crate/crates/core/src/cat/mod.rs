//! Compact Approximate Taylor interface fluxes.
//!
//! The CAT2P flux at an interface is built from a local space-time block:
//! time derivatives of the solution come from spatial derivatives of the
//! flux (the approximate Cauchy-Kovalevskaya step), flux time derivatives
//! come from fluxes of Taylor-predicted states, and the interface flux is
//! the interpolated Taylor series of the time-averaged flux.

mod kernel1d;
mod kernel2d;
mod reference;

pub use kernel1d::{cat_flux_1d, Cat1d, Scratch1d};
pub use kernel2d::{cat_fluxes_2d, Cat2d, Scratch2d};
pub use reference::{cat2_flux_closed_form, cat4_flux_stepwise, lw_flux_linear};

/// Sink for operation counts. The unit impl compiles to nothing.
pub trait OpCounter: Default + Send {
    fn flops(&mut self, n: u64);
    fn fevals(&mut self, n: u64);
    /// Add the counts of another (per-worker) counter.
    fn absorb(&mut self, other: Self);
}

impl OpCounter for () {
    #[inline(always)]
    fn flops(&mut self, _n: u64) {}
    #[inline(always)]
    fn fevals(&mut self, _n: u64) {}
    #[inline(always)]
    fn absorb(&mut self, _other: Self) {}
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FlopCounter {
    pub flops: u64,
    pub fevals: u64,
}

impl OpCounter for FlopCounter {
    #[inline]
    fn flops(&mut self, n: u64) {
        self.flops += n;
    }
    #[inline]
    fn fevals(&mut self, n: u64) {
        self.fevals += n;
    }
    fn absorb(&mut self, other: Self) {
        *self += other;
    }
}

impl std::ops::AddAssign for FlopCounter {
    fn add_assign(&mut self, rhs: Self) {
        self.flops += rhs.flops;
        self.fevals += rhs.fevals;
    }
}

/// Operation count per cell and time step of the scalar 1D CAT2P scheme:
/// `3.5 N^3 - 1.5 N^2 + N` flops and `N^3 - 2 N^2 + N + 1` flux
/// evaluations with `N = 2P`.
pub fn flop_budget(p: usize) -> (u64, u64) {
    let n = 2 * p as u64;
    let flops = (7 * n * n * n - 3 * n * n + 2 * n) / 2;
    let fevals = n * n * n - 2 * n * n + n + 1;
    (flops, fevals)
}

/// Per-interface share of the per-step precomputations (powers of `dt`,
/// Taylor factors, series weights), chosen so that the itemized loop
/// charges add up to [`flop_budget`].
pub(crate) fn precompute_share(n: u64) -> u64 {
    (n * n * n - n * n + 2 * n - 2) / 2
}

/// Weights shared by the 1D and 2D kernels for one `(P, dt)`.
#[derive(Clone, Debug)]
pub(crate) struct TimeWeights {
    /// `[k * n + r]`: `gamma^{k,0}_r / dt^k` for `k = 1..n`.
    pub dt_deriv: Vec<f64>,
    /// `[k * n + r]`: `(r dt)^k / k!` for `k = 1..n`.
    pub taylor: Vec<f64>,
    /// `gamma^{0,1/2}_j`.
    pub half: Vec<f64>,
    /// `[k]`: `dt^k / (k + 1)!`, the series weight of the k-th flux
    /// time derivative.
    pub series: Vec<f64>,
}

impl TimeWeights {
    pub fn new(table: &crate::stencil::CoeffTable, p: usize, dt: f64) -> crate::Result<Self> {
        use crate::stencil::{nodes, Offset};
        let n = 2 * p;
        let get = |k: usize, q: Offset| {
            table
                .get(p, k, q)
                .ok_or_else(|| crate::Error::Stencil(format!("no weights for P={p} k={k} q={q:?}")))
        };
        let mut dt_deriv = vec![0.0; n * n];
        let mut taylor = vec![0.0; n * n];
        let mut fact = 1.0;
        for k in 1..n {
            fact *= k as f64;
            let w = get(k, Offset::Node(0))?;
            let scale = dt.powi(-(k as i32));
            for (r_idx, r) in nodes(p).enumerate() {
                dt_deriv[k * n + r_idx] = w[r_idx] * scale;
                taylor[k * n + r_idx] = (r as f64 * dt).powi(k as i32) / fact;
            }
        }
        let half = crate::stencil::flux_weights(p)?;
        let mut series = Vec::with_capacity(n);
        let mut f = 1.0;
        for k in 0..n {
            f *= (k + 1) as f64;
            series.push(dt.powi(k as i32) / f);
        }
        Ok(TimeWeights {
            dt_deriv,
            taylor,
            half,
            series,
        })
    }
}
