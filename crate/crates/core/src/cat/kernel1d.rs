use super::{precompute_share, OpCounter, TimeWeights};
use crate::error::Result;
use crate::models::Model;
use crate::state::Conserved;
use crate::stencil::{CoeffTable, Offset};

/// CAT2P flux kernel on a 1D stencil of `2P` points, for fixed `dx, dt`.
#[derive(Clone, Debug)]
pub struct Cat1d {
    p: usize,
    n: usize,
    /// `[j * n + s]`: `gamma^{1,j}_s / dx`.
    d1: Vec<f64>,
    tw: TimeWeights,
}

/// Reusable work arrays for [`Cat1d::flux`].
#[derive(Clone, Debug, Default)]
pub struct Scratch1d<S> {
    /// `[k * n + j]`: k-th flux time derivative at stencil point j.
    fd: Vec<S>,
    /// `[j * n + r]`: Taylor-predicted state at point j, time level r.
    ut: Vec<S>,
    uk: Vec<S>,
}

impl<S: Conserved> Scratch1d<S> {
    pub fn new() -> Self {
        Scratch1d {
            fd: Vec::new(),
            ut: Vec::new(),
            uk: Vec::new(),
        }
    }

    fn ensure(&mut self, n: usize) {
        if self.uk.len() != n {
            self.fd = vec![S::zero(); n * n];
            self.ut = vec![S::zero(); n * n];
            self.uk = vec![S::zero(); n];
        }
    }
}

impl Cat1d {
    pub fn new(table: &CoeffTable, p: usize, dx: f64, dt: f64) -> Result<Self> {
        let n = 2 * p;
        let mut d1 = vec![0.0; n * n];
        for (j_idx, j) in crate::stencil::nodes(p).enumerate() {
            let w = table.get(p, 1, Offset::Node(j)).ok_or_else(|| {
                crate::Error::Stencil(format!("no derivative weights for P={p} at node {j}"))
            })?;
            for s in 0..n {
                d1[j_idx * n + s] = w[s] / dx;
            }
        }
        Ok(Cat1d {
            p,
            n,
            d1,
            tw: TimeWeights::new(table, p, dt)?,
        })
    }

    pub fn half_width(&self) -> usize {
        self.p
    }

    /// Interface flux between stencil points `P-1` and `P` (local offsets
    /// 0 and 1). `u` holds the 2P states and `f0` their fluxes.
    pub fn flux<M: Model, C: OpCounter>(
        &self,
        model: &M,
        u: &[M::State],
        f0: &[M::State],
        scratch: &mut Scratch1d<M::State>,
        counter: &mut C,
    ) -> M::State {
        let n = self.n;
        debug_assert_eq!(u.len(), n);
        debug_assert_eq!(f0.len(), n);
        scratch.ensure(n);
        let r0 = self.p - 1;
        let Scratch1d { fd, ut, uk } = scratch;
        fd[..n].copy_from_slice(f0);
        for j in 0..n {
            for r in 0..n {
                ut[j * n + r] = u[j];
            }
        }
        let nn = n as u64;
        for k in 1..n {
            let (prev, cur) = fd.split_at_mut(k * n);
            let prev = &prev[(k - 1) * n..];
            for j in 0..n {
                let mut acc = M::State::zero();
                for s in 0..n {
                    acc.axpy(self.d1[j * n + s], &prev[s]);
                }
                uk[j] = -acc;
            }
            counter.flops(nn * (nn + 1));

            let tk = &self.tw.taylor[k * n..(k + 1) * n];
            for j in 0..n {
                for r in (0..n).filter(|&r| r != r0) {
                    ut[j * n + r].axpy(tk[r], &uk[j]);
                }
            }
            counter.flops(nn * (nn - 1));

            let wk = &self.tw.dt_deriv[k * n..(k + 1) * n];
            for j in 0..n {
                let mut acc = f0[j] * wk[r0];
                for r in (0..n).filter(|&r| r != r0) {
                    acc.axpy(wk[r], &model.flux(&ut[j * n + r]));
                }
                cur[j] = acc;
            }
            counter.fevals(nn * (nn - 1));
            counter.flops(nn * (nn + 1));
        }

        let mut out = M::State::zero();
        for k in 0..n {
            let mut fk = M::State::zero();
            for j in 0..n {
                fk.axpy(self.tw.half[j], &fd[k * n + j]);
            }
            out.axpy(self.tw.series[k], &fk);
        }
        counter.flops(nn * nn + (nn - 1) + precompute_share(nn));
        out
    }
}

/// CAT2P flux from a stencil of `2P` states `u_{i-P+1}..u_{i+P}`.
pub fn cat_flux_1d<M: Model>(
    p: usize,
    stencil: &[M::State],
    dx: f64,
    dt: f64,
    model: &M,
) -> Result<M::State> {
    let table = CoeffTable::for_half_widths(&[p])?;
    let kernel = Cat1d::new(&table, p, dx, dt)?;
    if stencil.len() != 2 * p {
        return Err(crate::Error::Stencil(format!(
            "expected {} states, got {}",
            2 * p,
            stencil.len()
        )));
    }
    let f0: Vec<_> = stencil.iter().map(|u| model.flux(u)).collect();
    Ok(kernel.flux(model, stencil, &f0, &mut Scratch1d::new(), &mut ()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat::{flop_budget, lw_flux_linear, FlopCounter};
    use crate::models::{Advection, Burgers, EulerModel, EulerPrimitive};
    use crate::state::State;
    use proptest::prelude::*;

    #[test]
    fn constant_stencil_returns_physical_flux() {
        for p in 1..=4 {
            let c = State([0.7]);
            let got = cat_flux_1d(p, &vec![c; 2 * p], 0.1, 0.05, &Burgers).unwrap();
            assert!((got.0[0] - 0.245).abs() < 1e-14, "P={p}: {got:?}");
        }
        let gas = EulerModel::new(1.4).unwrap();
        let c = gas.to_conserved(&EulerPrimitive::new(1.2, 0.3, -0.4, 2.0));
        let got = cat_flux_1d(3, &[c; 6], 0.1, 0.01, &gas).unwrap();
        let want = gas.flux(&c);
        for k in 0..4 {
            assert!((got[k] - want[k]).abs() < 1e-12 * want[k].abs().max(1.0));
        }
    }

    #[test]
    fn burgers_two_point_example() {
        let got = cat_flux_1d(1, &[State([1.0]), State([2.0])], 1.0, 1.0, &Burgers).unwrap();
        assert!((got.0[0] - 0.6875).abs() < 1e-15);
    }

    #[test]
    fn two_point_advection_is_lax_wendroff() {
        let a = 1.3;
        let got = cat_flux_1d(1, &[State([0.2]), State([0.9])], 0.1, 0.04, &Advection::new_1d(a)).unwrap();
        assert!((got.0[0] - lw_flux_linear(0.2, 0.9, a, 0.04, 0.1)).abs() < 1e-15);
    }

    #[test]
    fn counted_charges_match_budget() {
        for p in 1..=4 {
            let table = CoeffTable::for_half_widths(&[p]).unwrap();
            let k = Cat1d::new(&table, p, 0.1, 0.03).unwrap();
            let u: Vec<_> = (0..2 * p).map(|j| State([(j as f64).sin()])).collect();
            let f0: Vec<_> = u.iter().map(|v| Burgers.flux(v)).collect();
            let mut c = FlopCounter::default();
            k.flux(&Burgers, &u, &f0, &mut Scratch1d::new(), &mut c);
            // the caller owns the cell's own flux and the 2-flop update
            let (flops, fevals) = flop_budget(p);
            assert_eq!((c.flops + 2, c.fevals + 1), (flops, fevals), "P={p}");
        }
    }

    /// Taylor series of the exact linear-advection interface flux, with
    /// spatial derivatives replaced by the stencil differentiation matrix.
    fn linear_series(p: usize, u: &[f64], a: f64, dx: f64, dt: f64) -> f64 {
        use crate::stencil::{coeffs, nodes};
        let n = 2 * p;
        let d: Vec<Vec<f64>> = nodes(p).map(|j| coeffs(p, 1, Offset::Node(j)).unwrap()).collect();
        let half = crate::stencil::flux_weights(p).unwrap();
        let mut v = u.to_vec();
        let mut total = 0.0;
        let mut fact = 1.0;
        for k in 0..n {
            fact *= (k + 1) as f64;
            let interp: f64 = half.iter().zip(&v).map(|(w, x)| w * x).sum();
            total += dt.powi(k as i32) / fact * a * interp;
            v = (0..n).map(|j| -a / dx * d[j].iter().zip(&v).map(|(w, x)| w * x).sum::<f64>()).collect();
        }
        total
    }

    proptest! {
        #[test]
        fn linear_flux_collapses_to_series(p in 1usize..=4, seed in prop::collection::vec(-1.0f64..1.0, 8), a in prop_oneof![-2.0f64..-0.1, 0.1f64..2.0], cfl in 0.05f64..0.9) {
            let dx = 0.1;
            let dt = cfl * dx / a.abs();
            let u: Vec<f64> = seed[..2 * p].to_vec();
            let st: Vec<State<1>> = u.iter().map(|v| State([*v])).collect();
            let got = cat_flux_1d(p, &st, dx, dt, &Advection::new_1d(a)).unwrap().0[0];
            let want = linear_series(p, &u, a, dx, dt);
            prop_assert!((got - want).abs() <= 1e-12 * (1.0 + want.abs()), "{} vs {}", got, want);
        }
    }
}
