//! Interface flux sweeps over a ghosted field and the conservative update.
//!
//! `fx[j * (nx + 1) + i]` is the x-flux at interface `i - 1/2` of row `j`;
//! `gy[j * nx + i]` is the y-flux at interface `j - 1/2` of column `i`.
//! On periodic axes the two copies of the wrapped interface are computed
//! once and shared, so they agree bit for bit.

use crate::acat::{blend, AcatChoice, AcatSelector, Limiter};
use crate::cat::{Cat1d, Cat2d, OpCounter, Scratch1d, Scratch2d};
use crate::error::Result;
use crate::grid::{Field, Mesh};
use crate::models::{Axis, Model};
use crate::par;
use crate::riemann::{riemann_flux, RiemannKind};
use crate::state::Conserved;
use crate::stencil::CoeffTable;

/// Interface flux family used by one sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FluxKind {
    Riemann(RiemannKind),
    /// CAT2P with half-width `P`.
    Cat(usize),
    /// ACAT2P with half-width `P`.
    Acat {
        p: usize,
        limiter: Limiter,
        low: RiemannKind,
    },
}

impl FluxKind {
    /// Ghost layers needed by the stencil.
    pub fn ghost_width(&self) -> usize {
        match *self {
            FluxKind::Riemann(_) => 1,
            FluxKind::Cat(p) => p,
            FluxKind::Acat { p, .. } => p.max(2),
        }
    }

    /// Formal order of accuracy.
    pub fn order(&self) -> usize {
        match *self {
            FluxKind::Riemann(_) => 1,
            FluxKind::Cat(p) | FluxKind::Acat { p, .. } => 2 * p,
        }
    }

    pub fn label(&self) -> String {
        match *self {
            FluxKind::Riemann(k) => k.name().to_string(),
            FluxKind::Cat(p) => format!("cat{}", 2 * p),
            FluxKind::Acat { p, .. } => format!("acat{}", 2 * p),
        }
    }
}

/// Interface fluxes of one sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct Interfaces<S> {
    pub nx: usize,
    pub ny: usize,
    pub fx: Vec<S>,
    /// Empty on 1D meshes.
    pub gy: Vec<S>,
}

impl<S: Conserved> Interfaces<S> {
    pub fn new(mesh: &Mesh) -> Self {
        let (nx, ny) = (mesh.nx, mesh.ny);
        Interfaces {
            nx,
            ny,
            fx: vec![S::zero(); (nx + 1) * ny],
            gy: if mesh.is_1d() { Vec::new() } else { vec![S::zero(); nx * (ny + 1)] },
        }
    }

    #[inline]
    pub fn fx_at(&self, i: usize, j: usize) -> &S {
        &self.fx[j * (self.nx + 1) + i]
    }

    #[inline]
    pub fn gy_at(&self, i: usize, j: usize) -> &S {
        &self.gy[j * self.nx + i]
    }
}

/// Physical fluxes of every stored cell, laid out like the field.
#[derive(Clone, Debug)]
pub struct CellFluxes<S> {
    pub f: Vec<S>,
    /// Empty on 1D meshes.
    pub g: Vec<S>,
}

/// Axis periodicity of the boundary conditions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Periodicity {
    pub x: bool,
    pub y: bool,
}

fn wrap(i: isize, n: usize, periodic: bool) -> isize {
    if periodic {
        i.rem_euclid(n as isize)
    } else {
        i
    }
}

/// Evaluate `f` (and `g` in 2D) on every stored cell. Ghost cells that are
/// periodic images copy the flux of their interior source.
pub fn cell_fluxes<M: Model, C: OpCounter>(
    model: &M,
    field: &Field<M::State>,
    per: Periodicity,
    counter: &mut C,
) -> CellFluxes<M::State> {
    let m = field.mesh;
    let two_d = !m.is_1d();
    let (gx, gy) = (m.gx as isize, m.gy as isize);
    let rows = par::map_range_init(
        m.storage_rows(),
        C::default,
        |c: &mut C, r| {
            let j = r as isize - gy;
            let wj = wrap(j, m.ny, per.y && two_d);
            let mut f = Vec::with_capacity(m.stride());
            let mut g = Vec::with_capacity(if two_d { m.stride() } else { 0 });
            let mut evals = 0;
            for i in -gx..(m.nx as isize + gx) {
                let canonical = wrap(i, m.nx, per.x) == i && wj == j;
                let u = field.get(i, j);
                if !canonical {
                    f.push(M::State::zero());
                    if two_d {
                        g.push(M::State::zero());
                    }
                    continue;
                }
                evals += 1;
                if two_d {
                    let (a, b) = model.fluxes(&u);
                    f.push(a);
                    g.push(b);
                } else {
                    f.push(model.flux(&u));
                }
            }
            c.fevals(evals);
            (f, g, std::mem::take(c))
        },
    );
    let mut cf = CellFluxes {
        f: Vec::with_capacity(field.data.len()),
        g: Vec::with_capacity(if two_d { field.data.len() } else { 0 }),
    };
    for (f, g, c) in rows {
        cf.f.extend(f);
        cf.g.extend(g);
        counter.absorb(c);
    }
    for j in -gy..(m.ny as isize + gy) {
        let wj = wrap(j, m.ny, per.y && two_d);
        for i in -gx..(m.nx as isize + gx) {
            let wi = wrap(i, m.nx, per.x);
            if wi != i || wj != j {
                let (dst, src) = (m.idx(i, j), m.idx(wi, wj));
                cf.f[dst] = cf.f[src];
                if two_d {
                    cf.g[dst] = cf.g[src];
                }
            }
        }
    }
    cf
}

/// Precomputed kernels for one flux family at fixed `dx, dy, dt`.
#[derive(Clone, Debug)]
pub struct FluxEngine {
    kind: FluxKind,
    two_d: bool,
    per: Periodicity,
    /// Indexed by half-width.
    cat1d: Vec<Option<Cat1d>>,
    cat2d: Vec<Option<Cat2d>>,
    selector: Option<AcatSelector>,
}

/// Per-worker buffers for [`FluxEngine`].
#[derive(Clone, Debug, Default)]
pub struct SweepScratch<S> {
    s1: Scratch1d<S>,
    s2: Scratch2d<S>,
    ub: Vec<S>,
    fb: Vec<S>,
    gb: Vec<S>,
    line: Vec<S>,
}

impl<S: Conserved> SweepScratch<S> {
    pub fn new() -> Self {
        SweepScratch {
            s1: Scratch1d::new(),
            s2: Scratch2d::new(),
            ub: Vec::new(),
            fb: Vec::new(),
            gb: Vec::new(),
            line: Vec::new(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Want {
    f: bool,
    g: bool,
}

impl FluxEngine {
    pub fn new(kind: FluxKind, mesh: &Mesh, per: Periodicity, dt: f64) -> Result<Self> {
        let two_d = !mesh.is_1d();
        let halves: Vec<usize> = match kind {
            FluxKind::Riemann(_) => Vec::new(),
            FluxKind::Cat(p) => vec![p],
            FluxKind::Acat { p, .. } => (1..=p).collect(),
        };
        let need = mesh.gx.min(if two_d { mesh.gy } else { mesh.gx });
        if need < kind.ghost_width() {
            return Err(crate::Error::config(format!(
                "{} needs {} ghost layers, mesh has {need}",
                kind.label(),
                kind.ghost_width()
            )));
        }
        let table = CoeffTable::for_half_widths(&halves)?;
        let top = halves.iter().copied().max().unwrap_or(0);
        let mut cat1d = vec![None; top + 1];
        let mut cat2d = vec![None; top + 1];
        for &p in &halves {
            if two_d {
                cat2d[p] = Some(Cat2d::new(&table, p, mesh.dx, mesh.dy, dt)?);
            } else {
                cat1d[p] = Some(Cat1d::new(&table, p, mesh.dx, dt)?);
            }
        }
        let selector = match kind {
            FluxKind::Acat { p, limiter, .. } if p >= 2 => Some(AcatSelector::new(p, limiter)?),
            _ => None,
        };
        Ok(FluxEngine {
            kind,
            two_d,
            per,
            cat1d,
            cat2d,
            selector,
        })
    }

    pub fn kind(&self) -> FluxKind {
        self.kind
    }

    /// All interface fluxes.
    pub fn compute_all<M: Model, C: OpCounter>(
        &self,
        model: &M,
        field: &Field<M::State>,
        cf: &CellFluxes<M::State>,
        out: &mut Interfaces<M::State>,
        counter: &mut C,
    ) {
        let m = field.mesh;
        let (nx, ny) = (m.nx, m.ny);
        let x0 = usize::from(self.per.x);
        if !self.two_d {
            let vals = par::map_range_init(nx + 1 - x0, SweepScratch::new, |s, k| {
                let mut c = C::default();
                (self.x_flux_1d(model, field, cf, k + x0, s, &mut c), c)
            });
            for (k, (v, c)) in vals.into_iter().enumerate() {
                out.fx[k + x0] = v;
                counter.absorb(c);
            }
            if self.per.x {
                out.fx[0] = out.fx[nx];
            }
            return;
        }

        let y0 = usize::from(self.per.y);
        // anchor (i1, i2) yields fx(i1 + 1, i2) and gy(i1, i2 + 1)
        let lo_x = x0 as isize - 1;
        let lo_y = y0 as isize - 1;
        let width = (nx as isize - lo_x) as usize;
        let rows = par::map_range_init(
            (ny as isize - lo_y) as usize,
            SweepScratch::new,
            |s, r| {
                let i2 = lo_y + r as isize;
                let mut c = C::default();
                let vals: Vec<_> = (0..width)
                    .map(|k| {
                        let i1 = lo_x + k as isize;
                        let want = Want {
                            f: i2 >= 0,
                            g: i1 >= 0,
                        };
                        self.anchor_2d(model, field, cf, i1, i2, want, s, &mut c)
                    })
                    .collect();
                (vals, c)
            },
        );
        for (r, (vals, c)) in rows.into_iter().enumerate() {
            counter.absorb(c);
            let i2 = lo_y + r as isize;
            for (k, (f, g)) in vals.into_iter().enumerate() {
                let i1 = lo_x + k as isize;
                if i2 >= 0 {
                    out.fx[i2 as usize * (nx + 1) + (i1 + 1) as usize] = f;
                }
                if i1 >= 0 {
                    out.gy[(i2 + 1) as usize * nx + i1 as usize] = g;
                }
            }
        }
        if self.per.x {
            for j in 0..ny {
                out.fx[j * (nx + 1)] = out.fx[j * (nx + 1) + nx];
            }
        }
        if self.per.y {
            for i in 0..nx {
                out.gy[i] = out.gy[ny * nx + i];
            }
        }
    }

    /// Recompute the listed interfaces; `xs` holds `(i, j)` of x-interface
    /// `i - 1/2` in row `j`, `ys` holds `(i, j)` of y-interface `j - 1/2` in
    /// column `i`. Periodic partners are refreshed as well.
    pub fn compute_subset<M: Model>(
        &self,
        model: &M,
        field: &Field<M::State>,
        cf: &CellFluxes<M::State>,
        xs: &[(usize, usize)],
        ys: &[(usize, usize)],
        out: &mut Interfaces<M::State>,
    ) {
        let m = field.mesh;
        let (nx, ny) = (m.nx, m.ny);
        let canon_x = |(i, j): (usize, usize)| if self.per.x && i == 0 { (nx, j) } else { (i, j) };
        let canon_y = |(i, j): (usize, usize)| if self.per.y && j == 0 { (i, ny) } else { (i, j) };
        let mut anchors: Vec<((isize, isize), Want)> = Vec::with_capacity(xs.len() + ys.len());
        for &x in xs {
            let (i, j) = canon_x(x);
            anchors.push(((j as isize, i as isize - 1), Want { f: true, g: false }));
        }
        if self.two_d {
            for &y in ys {
                let (i, j) = canon_y(y);
                anchors.push(((j as isize - 1, i as isize), Want { f: false, g: true }));
            }
        }
        // sort by (row, column) and merge duplicates
        anchors.sort_unstable_by_key(|a| a.0);
        let mut merged: Vec<((isize, isize), Want)> = Vec::with_capacity(anchors.len());
        for (a, w) in anchors {
            match merged.last_mut() {
                Some((b, v)) if *b == a => {
                    v.f |= w.f;
                    v.g |= w.g;
                }
                _ => merged.push((a, w)),
            }
        }
        let vals = par::map_range_init(merged.len(), SweepScratch::new, |s, k| {
            let ((i2, i1), want) = merged[k];
            if self.two_d {
                self.anchor_2d(model, field, cf, i1, i2, want, s, &mut ())
            } else {
                let f = self.x_flux_1d(model, field, cf, (i1 + 1) as usize, s, &mut ());
                (f, M::State::zero())
            }
        });
        for (((i2, i1), want), (f, g)) in merged.into_iter().zip(vals) {
            if want.f {
                let (i, j) = ((i1 + 1) as usize, i2 as usize);
                out.fx[j * (nx + 1) + i] = f;
                if self.per.x && i == nx {
                    out.fx[j * (nx + 1)] = f;
                }
            }
            if want.g {
                let (i, j) = (i1 as usize, (i2 + 1) as usize);
                out.gy[j * nx + i] = g;
                if self.per.y && j == ny {
                    out.gy[i] = g;
                }
            }
        }
    }

    /// x-flux at interface `i - 1/2` of a 1D field.
    fn x_flux_1d<M: Model, C: OpCounter>(
        &self,
        model: &M,
        field: &Field<M::State>,
        cf: &CellFluxes<M::State>,
        i: usize,
        s: &mut SweepScratch<M::State>,
        counter: &mut C,
    ) -> M::State {
        let m = field.mesh;
        let i = i as isize;
        let slice = |p: usize| {
            let a = m.idx(i - p as isize, 0);
            a..a + 2 * p
        };
        match self.kind {
            FluxKind::Riemann(k) => riemann_flux(k, model, &field.get(i - 1, 0), &field.get(i, 0), Axis::X),
            FluxKind::Cat(p) => {
                let r = slice(p);
                self.k1(p).flux(model, &field.data[r.clone()], &cf.f[r], &mut s.s1, counter)
            }
            FluxKind::Acat { p, limiter, low } => {
                let choice = match &self.selector {
                    Some(sel) => sel.choose(model, &field.data[slice(p)], Axis::X),
                    None => AcatChoice::Blend(acat2_phi(model, &field.data[slice(2)], limiter, Axis::X)),
                };
                match choice {
                    AcatChoice::Order(q) => {
                        let r = slice(q);
                        self.k1(q).flux(model, &field.data[r.clone()], &cf.f[r], &mut s.s1, counter)
                    }
                    AcatChoice::Blend(phi) => {
                        let r = slice(1);
                        let high = self.k1(1).flux(model, &field.data[r.clone()], &cf.f[r], &mut s.s1, counter);
                        let lo = riemann_flux(low, model, &field.get(i - 1, 0), &field.get(i, 0), Axis::X);
                        blend(&phi, &high, &lo)
                    }
                }
            }
        }
    }

    fn k1(&self, p: usize) -> &Cat1d {
        self.cat1d[p].as_ref().expect("kernel built for every half-width in use")
    }

    fn k2(&self, p: usize) -> &Cat2d {
        self.cat2d[p].as_ref().expect("kernel built for every half-width in use")
    }

    /// `(F, G)` from the block anchored at `(i1, i2)`.
    #[allow(clippy::too_many_arguments)]
    fn anchor_2d<M: Model, C: OpCounter>(
        &self,
        model: &M,
        field: &Field<M::State>,
        cf: &CellFluxes<M::State>,
        i1: isize,
        i2: isize,
        want: Want,
        s: &mut SweepScratch<M::State>,
        counter: &mut C,
    ) -> (M::State, M::State) {
        let zero = M::State::zero();
        match self.kind {
            FluxKind::Riemann(k) => {
                let u = field.get(i1, i2);
                let f = if want.f { riemann_flux(k, model, &u, &field.get(i1 + 1, i2), Axis::X) } else { zero };
                let g = if want.g { riemann_flux(k, model, &u, &field.get(i1, i2 + 1), Axis::Y) } else { zero };
                (f, g)
            }
            FluxKind::Cat(p) => self.block(model, field, cf, p, i1, i2, s, counter),
            FluxKind::Acat { p, limiter, low } => {
                let pick = |axis: Axis, s: &mut SweepScratch<M::State>| {
                    let m = field.mesh;
                    let pw = p.max(2);
                    s.line.clear();
                    for k in 0..2 * pw as isize {
                        let off = k - pw as isize + 1;
                        s.line.push(match axis {
                            Axis::X => field.data[m.idx(i1 + off, i2)],
                            Axis::Y => field.data[m.idx(i1, i2 + off)],
                        });
                    }
                    match &self.selector {
                        Some(sel) => sel.choose(model, &s.line[pw - p..pw + p], axis),
                        None => AcatChoice::Blend(acat2_phi(model, &s.line[pw - 2..pw + 2], limiter, axis)),
                    }
                };
                let cx = if want.f { Some(pick(Axis::X, s)) } else { None };
                let cy = if want.g { Some(pick(Axis::Y, s)) } else { None };
                let order = |c: &AcatChoice<M::State>| match c {
                    AcatChoice::Order(q) => *q,
                    AcatChoice::Blend(_) => 1,
                };
                let qx = cx.as_ref().map(order);
                let qy = cy.as_ref().map(order);
                let shared = match (qx, qy) {
                    (Some(a), Some(b)) if a == b => Some(self.block(model, field, cf, a, i1, i2, s, counter)),
                    _ => None,
                };
                let mut f = zero;
                let mut g = zero;
                if let (Some(c), Some(q)) = (cx, qx) {
                    let high = shared.unwrap_or_else(|| self.block(model, field, cf, q, i1, i2, s, counter)).0;
                    f = match c {
                        AcatChoice::Order(_) => high,
                        AcatChoice::Blend(phi) => {
                            let lo = riemann_flux(low, model, &field.get(i1, i2), &field.get(i1 + 1, i2), Axis::X);
                            blend(&phi, &high, &lo)
                        }
                    };
                }
                if let (Some(c), Some(q)) = (cy, qy) {
                    let high = shared.unwrap_or_else(|| self.block(model, field, cf, q, i1, i2, s, counter)).1;
                    g = match c {
                        AcatChoice::Order(_) => high,
                        AcatChoice::Blend(phi) => {
                            let lo = riemann_flux(low, model, &field.get(i1, i2), &field.get(i1, i2 + 1), Axis::Y);
                            blend(&phi, &high, &lo)
                        }
                    };
                }
                (f, g)
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn block<M: Model, C: OpCounter>(
        &self,
        model: &M,
        field: &Field<M::State>,
        cf: &CellFluxes<M::State>,
        p: usize,
        i1: isize,
        i2: isize,
        s: &mut SweepScratch<M::State>,
        counter: &mut C,
    ) -> (M::State, M::State) {
        let m = field.mesh;
        let n = 2 * p;
        s.ub.clear();
        s.fb.clear();
        s.gb.clear();
        for j2 in 0..n as isize {
            let a = m.idx(i1 - p as isize + 1, i2 - p as isize + 1 + j2);
            s.ub.extend_from_slice(&field.data[a..a + n]);
            s.fb.extend_from_slice(&cf.f[a..a + n]);
            s.gb.extend_from_slice(&cf.g[a..a + n]);
        }
        self.k2(p).fluxes(model, &s.ub, &s.fb, &s.gb, &mut s.s2, counter)
    }
}

fn acat2_phi<M: Model>(model: &M, four: &[M::State], limiter: Limiter, axis: Axis) -> M::State {
    crate::acat::upwind_ratio(model, four, axis).map(|r| crate::acat::flux_limiter_phi(r, limiter))
}

/// `u + dt/dx (F_{i-1/2} - F_{i+1/2}) + dt/dy (G_{j-1/2} - G_{j+1/2})` at
/// cell `(i, j)`.
#[inline]
pub fn updated_cell<S: Conserved>(u: &S, fl: &Interfaces<S>, i: usize, j: usize, cx: f64, cy: f64) -> S {
    let mut v = *u;
    v.axpy(cx, &(*fl.fx_at(i, j) - *fl.fx_at(i + 1, j)));
    if !fl.gy.is_empty() {
        v.axpy(cy, &(*fl.gy_at(i, j) - *fl.gy_at(i, j + 1)));
    }
    v
}

/// Conservative update of every interior cell of `old` into `out`.
pub fn apply_update<S: Conserved, C: OpCounter>(
    old: &Field<S>,
    fl: &Interfaces<S>,
    dt: f64,
    out: &mut Field<S>,
    counter: &mut C,
) {
    let m = old.mesh;
    let (cx, cy) = (dt / m.dx, dt / m.dy);
    let stride = m.stride();
    let gx = m.gx;
    let gy = m.gy;
    out.mesh = m;
    out.data.clone_from(&old.data);
    // the chunked loop below touches interior rows only
    let rows = &mut out.data[gy * stride..(gy + m.ny) * stride];
    par::for_each_chunk_mut(rows, stride, |j, row| {
        for i in 0..m.nx {
            row[gx + i] = updated_cell(&old.data[(j + gy) * stride + gx + i], fl, i, j, cx, cy);
        }
    });
    counter.flops(2 * m.cells() as u64);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat::{cat_flux_1d, cat_fluxes_2d, FlopCounter};
    use crate::grid::{fill_ghosts, BoundaryCondition};
    use crate::models::{Advection, Burgers, EulerModel, EulerPrimitive};
    use crate::state::State;

    fn periodic_1d(nx: usize, g: usize) -> Field<State<1>> {
        let mesh = Mesh::new_1d(nx, (0.0, 1.0), g).unwrap();
        let mut f = Field::from_fn(mesh, |x, _| State([0.5 + (2.0 * std::f64::consts::PI * x).sin()]));
        fill_ghosts(&mut f, &BoundaryCondition::periodic()).unwrap();
        f
    }

    const PER: Periodicity = Periodicity { x: true, y: true };

    #[test]
    fn one_d_sweep_matches_pointwise_kernel() {
        let f = periodic_1d(16, 3);
        let dt = 0.01;
        let eng = FluxEngine::new(FluxKind::Cat(3), &f.mesh, PER, dt).unwrap();
        let cf = cell_fluxes(&Burgers, &f, PER, &mut ());
        let mut out = Interfaces::new(&f.mesh);
        eng.compute_all(&Burgers, &f, &cf, &mut out, &mut ());
        for i in 0..=16isize {
            let st: Vec<_> = (i - 3..i + 3).map(|k| f.get(k.rem_euclid(16), 0)).collect();
            let want = cat_flux_1d(3, &st, f.mesh.dx, dt, &Burgers).unwrap();
            assert_eq!(out.fx[i as usize], want, "interface {i}");
        }
        assert_eq!(out.fx[0], out.fx[16]);
    }

    #[test]
    fn counted_periodic_step_matches_budget() {
        for p in 1..=3 {
            let f = periodic_1d(20, p);
            let eng = FluxEngine::new(FluxKind::Cat(p), &f.mesh, PER, 0.01).unwrap();
            let mut c = FlopCounter::default();
            let cf = cell_fluxes(&Burgers, &f, PER, &mut c);
            let mut out = Interfaces::new(&f.mesh);
            eng.compute_all(&Burgers, &f, &cf, &mut out, &mut c);
            let mut next = f.clone();
            apply_update(&f, &out, 0.01, &mut next, &mut c);
            let (flops, fevals) = crate::cat::flop_budget(p);
            assert_eq!((c.flops, c.fevals), (20 * flops, 20 * fevals), "P={p}");
        }
    }

    #[test]
    fn two_d_sweep_matches_block_function() {
        let gas = EulerModel::new(1.4).unwrap();
        let mesh = Mesh::new_2d(6, 5, (0.0, 1.0), (0.0, 1.0), 2).unwrap();
        let mut f = Field::from_fn(mesh, |x, y| {
            gas.to_conserved(&EulerPrimitive::new(1.0 + 0.2 * (6.0 * x).sin() * (5.0 * y).cos(), 0.5, -0.3, 1.0))
        });
        let bc = BoundaryCondition::outflow();
        fill_ghosts(&mut f, &bc).unwrap();
        let per = Periodicity::default();
        let dt = 0.01;
        let eng = FluxEngine::new(FluxKind::Cat(2), &mesh, per, dt).unwrap();
        let cf = cell_fluxes(&gas, &f, per, &mut ());
        let mut out = Interfaces::new(&mesh);
        eng.compute_all(&gas, &f, &cf, &mut out, &mut ());
        let block = |i1: isize, i2: isize| {
            let mut b = Vec::new();
            for j2 in i2 - 1..=i2 + 2 {
                for j1 in i1 - 1..=i1 + 2 {
                    b.push(f.get(j1, j2));
                }
            }
            cat_fluxes_2d(2, &b, mesh.dx, mesh.dy, dt, &gas).unwrap()
        };
        for j in 0..5 {
            for i in 0..=6 {
                assert_eq!(*out.fx_at(i, j), block(i as isize - 1, j as isize).0);
            }
        }
        for j in 0..=5 {
            for i in 0..6 {
                assert_eq!(*out.gy_at(i, j), block(i as isize, j as isize - 1).1);
            }
        }
        // a subset recomputation reproduces the same values
        let mut again = Interfaces::new(&mesh);
        eng.compute_subset(&gas, &f, &cf, &[(0, 0), (3, 2), (6, 4)], &[(1, 0), (2, 5)], &mut again);
        assert_eq!(again.fx_at(3, 2), out.fx_at(3, 2));
        assert_eq!(again.fx_at(6, 4), out.fx_at(6, 4));
        assert_eq!(again.gy_at(2, 5), out.gy_at(2, 5));
        assert_eq!(again.gy_at(1, 0), out.gy_at(1, 0));
    }

    #[test]
    fn periodic_partners_are_shared() {
        let m = Advection { ax: 1.0, ay: 0.5 };
        let mesh = Mesh::new_2d(5, 4, (0.0, 1.0), (0.0, 1.0), 3).unwrap();
        let mut f = Field::from_fn(mesh, |x, y| State([(6.0 * x).sin() + y]));
        fill_ghosts(&mut f, &BoundaryCondition::periodic()).unwrap();
        for kind in [
            FluxKind::Cat(3),
            FluxKind::Riemann(RiemannKind::Hll),
            FluxKind::Acat { p: 3, limiter: Limiter::Minmod, low: RiemannKind::Rusanov },
        ] {
            let eng = FluxEngine::new(kind, &mesh, PER, 0.01).unwrap();
            let cf = cell_fluxes(&m, &f, PER, &mut ());
            let mut out = Interfaces::new(&mesh);
            eng.compute_all(&m, &f, &cf, &mut out, &mut ());
            for j in 0..4 {
                assert_eq!(out.fx_at(0, j), out.fx_at(5, j));
            }
            for i in 0..5 {
                assert_eq!(out.gy_at(i, 0), out.gy_at(i, 4));
            }
            let mut sub = out.clone();
            for v in sub.fx.iter_mut().chain(sub.gy.iter_mut()) {
                *v = State([f64::NAN]);
            }
            let xs: Vec<_> = (0..4).flat_map(|j| (0..=5).map(move |i| (i, j))).collect();
            let ys: Vec<_> = (0..=4).flat_map(|j| (0..5).map(move |i| (i, j))).collect();
            eng.compute_subset(&m, &f, &cf, &xs, &ys, &mut sub);
            assert_eq!(sub, out, "{kind:?}");
        }
    }

    #[test]
    fn ghost_width_is_checked() {
        let mesh = Mesh::new_1d(8, (0.0, 1.0), 2).unwrap();
        assert!(FluxEngine::new(FluxKind::Cat(3), &mesh, PER, 0.1).is_err());
        assert!(FluxEngine::new(FluxKind::Cat(2), &mesh, PER, 0.1).is_ok());
    }
}
