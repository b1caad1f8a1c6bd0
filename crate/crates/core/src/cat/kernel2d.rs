use super::{OpCounter, TimeWeights};
use crate::error::Result;
use crate::models::Model;
use crate::state::Conserved;
use crate::stencil::{nodes, CoeffTable, Offset};

/// CAT2P kernel on a `2P x 2P` block for fixed `dx, dy, dt`.
///
/// A block anchored at cell `(i1, i2)` covers cells
/// `i1-P+1..=i1+P` by `i2-P+1..=i2+P` and yields the x-flux at
/// `(i1+1/2, i2)` together with the y-flux at `(i1, i2+1/2)`.
/// Block points are stored x-fastest: `b = j2 * n + j1`.
#[derive(Clone, Debug)]
pub struct Cat2d {
    p: usize,
    n: usize,
    /// `[j * n + s]`: `gamma^{1,j}_s / dx`.
    dx1: Vec<f64>,
    /// `[j * n + s]`: `gamma^{1,j}_s / dy`.
    dy1: Vec<f64>,
    tw: TimeWeights,
    /// Points of the row `j2 = 0` and column `j1 = 0`.
    cross: Vec<usize>,
}

#[derive(Clone, Debug, Default)]
pub struct Scratch2d<S> {
    /// `[k * n² + b]`
    fd: Vec<S>,
    gd: Vec<S>,
    /// `[b * n + r]`
    ut: Vec<S>,
}

impl<S: Conserved> Scratch2d<S> {
    pub fn new() -> Self {
        Scratch2d {
            fd: Vec::new(),
            gd: Vec::new(),
            ut: Vec::new(),
        }
    }

    fn ensure(&mut self, n: usize) {
        if self.ut.len() != n * n * n {
            self.fd = vec![S::zero(); n * n * n];
            self.gd = vec![S::zero(); n * n * n];
            self.ut = vec![S::zero(); n * n * n];
        }
    }
}

impl Cat2d {
    pub fn new(table: &CoeffTable, p: usize, dx: f64, dy: f64, dt: f64) -> Result<Self> {
        let n = 2 * p;
        let mut dx1 = vec![0.0; n * n];
        let mut dy1 = vec![0.0; n * n];
        for (j_idx, j) in nodes(p).enumerate() {
            let w = table.get(p, 1, Offset::Node(j)).ok_or_else(|| {
                crate::Error::Stencil(format!("no derivative weights for P={p} at node {j}"))
            })?;
            for s in 0..n {
                dx1[j_idx * n + s] = w[s] / dx;
                dy1[j_idx * n + s] = w[s] / dy;
            }
        }
        let c = p - 1;
        let mut cross: Vec<usize> = (0..n).map(|j1| c * n + j1).collect();
        cross.extend((0..n).filter(|&j2| j2 != c).map(|j2| j2 * n + c));
        cross.sort_unstable();
        Ok(Cat2d {
            p,
            n,
            dx1,
            dy1,
            tw: TimeWeights::new(table, p, dt)?,
            cross,
        })
    }

    pub fn half_width(&self) -> usize {
        self.p
    }

    /// `(F, G)` for one block. `u`, `f0`, `g0` hold the block states and
    /// their x- and y-fluxes, x-fastest.
    pub fn fluxes<M: Model, C: OpCounter>(
        &self,
        model: &M,
        u: &[M::State],
        f0: &[M::State],
        g0: &[M::State],
        scratch: &mut Scratch2d<M::State>,
        counter: &mut C,
    ) -> (M::State, M::State) {
        let n = self.n;
        let nb = n * n;
        debug_assert_eq!(u.len(), nb);
        scratch.ensure(n);
        let r0 = self.p - 1;
        let Scratch2d { fd, gd, ut } = scratch;
        fd[..nb].copy_from_slice(f0);
        gd[..nb].copy_from_slice(g0);
        for b in 0..nb {
            ut[b * n..(b + 1) * n].fill(u[b]);
        }
        for k in 1..n {
            let last = k == n - 1;
            let (fprev, fcur) = fd.split_at_mut(k * nb);
            let fprev = &fprev[(k - 1) * nb..];
            let (gprev, gcur) = gd.split_at_mut(k * nb);
            let gprev = &gprev[(k - 1) * nb..];
            let tk = &self.tw.taylor[k * n..(k + 1) * n];
            let wk = &self.tw.dt_deriv[k * n..(k + 1) * n];
            let mut point = |b: usize| {
                let j1 = b % n;
                let j2 = b / n;
                let mut acc = M::State::zero();
                let row = &fprev[j2 * n..(j2 + 1) * n];
                let dxr = &self.dx1[j1 * n..(j1 + 1) * n];
                for s in 0..n {
                    acc.axpy(dxr[s], &row[s]);
                }
                let dyr = &self.dy1[j2 * n..(j2 + 1) * n];
                for s in 0..n {
                    acc.axpy(dyr[s], &gprev[s * n + j1]);
                }
                let uk = -acc;
                let uts = &mut ut[b * n..(b + 1) * n];
                let mut fa = f0[b] * wk[r0];
                let mut ga = g0[b] * wk[r0];
                for r in 0..n {
                    if r == r0 {
                        continue;
                    }
                    uts[r].axpy(tk[r], &uk);
                    let (f, g) = model.fluxes(&uts[r]);
                    fa.axpy(wk[r], &f);
                    ga.axpy(wk[r], &g);
                }
                fcur[b] = fa;
                gcur[b] = ga;
            };
            if last {
                for &b in &self.cross {
                    point(b);
                }
                counter.fevals((self.cross.len() * (n - 1)) as u64);
            } else {
                for b in 0..nb {
                    point(b);
                }
                counter.fevals((nb * (n - 1)) as u64);
            }
        }

        let c = self.p - 1;
        let mut f_out = M::State::zero();
        let mut g_out = M::State::zero();
        for k in 0..n {
            let mut fk = M::State::zero();
            let mut gk = M::State::zero();
            for j in 0..n {
                fk.axpy(self.tw.half[j], &fd[k * nb + c * n + j]);
                gk.axpy(self.tw.half[j], &gd[k * nb + j * n + c]);
            }
            f_out.axpy(self.tw.series[k], &fk);
            g_out.axpy(self.tw.series[k], &gk);
        }
        (f_out, g_out)
    }
}

/// CAT2P fluxes `(F at (i1+1/2, i2), G at (i1, i2+1/2))` from the
/// `2P x 2P` block anchored at `(i1, i2)`, given x-fastest.
pub fn cat_fluxes_2d<M: Model>(
    p: usize,
    block: &[M::State],
    dx: f64,
    dy: f64,
    dt: f64,
    model: &M,
) -> Result<(M::State, M::State)> {
    let n = 2 * p;
    if block.len() != n * n {
        return Err(crate::Error::Stencil(format!(
            "expected {} states, got {}",
            n * n,
            block.len()
        )));
    }
    let table = CoeffTable::for_half_widths(&[p])?;
    let kernel = Cat2d::new(&table, p, dx, dy, dt)?;
    let (f0, g0): (Vec<_>, Vec<_>) = block.iter().map(|u| model.fluxes(u)).unzip();
    Ok(kernel.fluxes(model, block, &f0, &g0, &mut Scratch2d::new(), &mut ()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat::cat_flux_1d;
    use crate::models::{Advection, Burgers, EulerModel, EulerPrimitive};
    use crate::state::{Euler2, State};

    #[test]
    fn constant_block() {
        let gas = EulerModel::new(1.4).unwrap();
        let c = gas.to_conserved(&EulerPrimitive::new(1.0, 0.5, -0.25, 1.0));
        for p in 1..=3 {
            let (f, g) = cat_fluxes_2d(p, &vec![c; 4 * p * p], 0.1, 0.2, 0.01, &gas).unwrap();
            let (fw, gw) = gas.fluxes(&c);
            for k in 0..4 {
                assert!((f[k] - fw[k]).abs() < 1e-12);
                assert!((g[k] - gw[k]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn y_independent_block_matches_1d() {
        let gas = EulerModel::new(1.4).unwrap();
        for p in 1..=3 {
            let n = 2 * p;
            let row: Vec<Euler2> = (0..n)
                .map(|j| {
                    let x = j as f64 * 0.1;
                    gas.to_conserved(&EulerPrimitive::new(1.0 + 0.2 * x.sin(), 0.3 + 0.1 * x, 0.2, 1.0 + 0.1 * x * x))
                })
                .collect();
            let block: Vec<Euler2> = (0..n).flat_map(|_| row.clone()).collect();
            let (f, _) = cat_fluxes_2d(p, &block, 0.1, 0.1, 0.02, &gas).unwrap();
            let f1 = cat_flux_1d(p, &row, 0.1, 0.02, &gas).unwrap();
            for k in 0..4 {
                assert!((f[k] - f1[k]).abs() < 1e-12 * f1[k].abs().max(1.0), "P={p} comp {k}: {} vs {}", f[k], f1[k]);
            }
        }
    }

    /// Direct transcription of the 2D CAT2 formulas: three distinct first
    /// derivatives on the 2x2 block, each from its own pair of differences.
    fn cat2_2d_oracle<M: Model<State = State<1>>>(m: &M, u: [[f64; 2]; 2], dx: f64, dy: f64, dt: f64) -> (f64, f64) {
        // u[j2][j1], anchor (0,0)
        let f = |v: f64| m.flux(&State([v])).0[0];
        let g = |v: f64| m.flux_g(&State([v])).0[0];
        let mut ud = [[0.0; 2]; 2];
        for j2 in 0..2 {
            for j1 in 0..2 {
                // first-derivative weights on two nodes are [-1, 1] at both nodes
                ud[j2][j1] = -(f(u[j2][1]) - f(u[j2][0])) / dx - (g(u[1][j1]) - g(u[0][j1])) / dy;
            }
        }
        let f_half = |j2: usize| {
            let pts: f64 = (0..2).map(|j1| f(u[j2][j1]) + f(u[j2][j1] + dt * ud[j2][j1])).sum();
            pts / 4.0
        };
        let g_half = |j1: usize| {
            let pts: f64 = (0..2).map(|j2| g(u[j2][j1]) + g(u[j2][j1] + dt * ud[j2][j1])).sum();
            pts / 4.0
        };
        (f_half(0), g_half(0))
    }

    #[test]
    fn two_by_two_block_matches_direct_formulas() {
        let u = [[0.3, 1.1], [-0.4, 0.8]];
        let block: Vec<State<1>> = u.iter().flatten().map(|v| State([*v])).collect();
        for (dx, dy, dt) in [(0.1, 0.1, 0.03), (0.2, 0.05, 0.01)] {
            let (f, g) = cat_fluxes_2d(1, &block, dx, dy, dt, &Burgers).unwrap();
            let (fo, go) = cat2_2d_oracle(&Burgers, u, dx, dy, dt);
            assert!((f.0[0] - fo).abs() < 1e-14, "{} vs {}", f.0[0], fo);
            assert!((g.0[0] - go).abs() < 1e-14, "{} vs {}", g.0[0], go);
            let adv = Advection { ax: 1.0, ay: -0.5 };
            let (f, g) = cat_fluxes_2d(1, &block, dx, dy, dt, &adv).unwrap();
            let (fo, go) = cat2_2d_oracle(&adv, u, dx, dy, dt);
            assert!((f.0[0] - fo).abs() < 1e-14);
            assert!((g.0[0] - go).abs() < 1e-14);
        }
    }

    #[test]
    fn cross_subset_shape() {
        let table = CoeffTable::for_half_widths(&[3]).unwrap();
        let k = Cat2d::new(&table, 3, 0.1, 0.1, 0.01).unwrap();
        assert_eq!(k.cross.len(), 11);
        let mut c = crate::cat::FlopCounter::default();
        let u = vec![State([1.0]); 36];
        k.fluxes(&Burgers, &u, &u, &u, &mut Scratch2d::new(), &mut c);
        assert_eq!(c.fevals, 4 * 36 * 5 + 11 * 5);
    }
}
