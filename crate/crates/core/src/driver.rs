//! Time marching, scheme dispatch and convergence studies.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::{Duration, Instant};

use crate::acat::Limiter;
use crate::cases::{self, AnyProblem, CaseId, Problem};
use crate::cat::{FlopCounter, OpCounter};
use crate::error::{Error, Result};
use crate::grid::{fill_ghosts, Field};
use crate::io::Frame;
use crate::models::{max_wave_speeds, Model};
use crate::mood::{cad_check, mood_step, pad_check, DetectionParams, Detector, StepStats};
use crate::riemann::RiemannKind;
use crate::state::Conserved;
use crate::sweep::{apply_update, cell_fluxes, FluxEngine, FluxKind, Interfaces, Periodicity};

/// Largest supported CAT half-width.
pub const MAX_HALF_WIDTH: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scheme {
    FirstOrder(RiemannKind),
    /// Unlimited CAT2P, by half-width.
    Cat(usize),
    Acat(usize),
    CatMood(usize),
}

impl Scheme {
    pub fn half_width(self) -> usize {
        match self {
            Scheme::FirstOrder(_) => 0,
            Scheme::Cat(p) | Scheme::Acat(p) | Scheme::CatMood(p) => p,
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Scheme::FirstOrder(k) => f.write_str(k.name()),
            Scheme::Cat(p) => write!(f, "cat{}", 2 * p),
            Scheme::Acat(p) => write!(f, "acat{}", 2 * p),
            Scheme::CatMood(p) => write!(f, "catmood{}", 2 * p),
        }
    }
}

fn parse_order(digits: &str, full: &str) -> Result<usize> {
    let order: usize = digits
        .parse()
        .map_err(|_| Error::config(format!("unknown scheme '{full}'")))?;
    if order < 2 || !order.is_multiple_of(2) || order / 2 > MAX_HALF_WIDTH {
        return Err(Error::config(format!(
            "scheme '{full}': order must be even and between 2 and {}",
            2 * MAX_HALF_WIDTH
        )));
    }
    Ok(order / 2)
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        if let Ok(k) = s.parse::<RiemannKind>() {
            return Ok(Scheme::FirstOrder(k));
        }
        if let Some(d) = s.strip_prefix("catmood") {
            return Ok(Scheme::CatMood(parse_order(d, &s)?));
        }
        if let Some(d) = s.strip_prefix("acat") {
            return Ok(Scheme::Acat(parse_order(d, &s)?));
        }
        if let Some(d) = s.strip_prefix("cat") {
            return Ok(Scheme::Cat(parse_order(d, &s)?));
        }
        Err(Error::config(format!("unknown scheme '{s}'")))
    }
}

/// Everything needed to set up and run one simulation.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub case: CaseId,
    pub scheme: Scheme,
    /// Orders of the MOOD cascade, e.g. `[6, 4, 2, 1]`; `1` is the
    /// parachute. `None` uses `[2P, 2, 1]`.
    pub cascade: Option<Vec<usize>>,
    pub parachute: RiemannKind,
    pub limiter: Limiter,
    pub nx: usize,
    pub ny: usize,
    pub cfl: f64,
    /// `None` uses the case default.
    pub t_final: Option<f64>,
    /// Write a frame every this many steps; 0 writes the final state only.
    pub output_every: usize,
    pub outdir: Option<PathBuf>,
    pub detection: DetectionParams,
    /// `None` uses the case default.
    pub gamma: Option<f64>,
    pub vtk: bool,
}

impl RunConfig {
    pub fn new(case: CaseId, scheme: Scheme, nx: usize, ny: usize) -> Self {
        RunConfig {
            case,
            scheme,
            cascade: None,
            parachute: RiemannKind::Hllc,
            limiter: Limiter::Minmod,
            nx,
            ny,
            cfl: 0.4,
            t_final: None,
            output_every: 0,
            outdir: None,
            detection: DetectionParams::default(),
            gamma: None,
            vtk: false,
        }
    }

    /// Check ranges and cross-field consistency; returns warnings.
    pub fn validate(&self) -> Result<Vec<String>> {
        let mut warnings = Vec::new();
        if !(self.cfl > 0.0 && self.cfl.is_finite()) {
            return Err(Error::config(format!("cfl must be positive, got {}", self.cfl)));
        }
        if self.cfl > 0.5 {
            warnings.push(format!("cfl = {} exceeds the recommended 0.5", self.cfl));
        }
        if let Some(t) = self.t_final {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::config(format!("tfinal must be positive, got {t}")));
            }
        }
        if self.nx == 0 || (!self.case.is_1d() && self.ny == 0) {
            return Err(Error::config("nx and ny must be positive"));
        }
        DetectionParams::new(self.detection.eps1, self.detection.eps2)?;
        if let Some(g) = self.gamma {
            if !(g > 1.0) {
                return Err(Error::config(format!("gamma must exceed 1, got {g}")));
            }
        }
        if self.cascade.is_some() && !matches!(self.scheme, Scheme::CatMood(_)) {
            warnings.push(format!("cascade is ignored by scheme {}", self.scheme));
        }
        self.stages()?;
        Ok(warnings)
    }

    /// Flux families of the scheme: one for unlimited schemes, the
    /// cascade for MOOD.
    pub fn stages(&self) -> Result<Vec<FluxKind>> {
        Ok(match self.scheme {
            Scheme::FirstOrder(k) => vec![FluxKind::Riemann(k)],
            Scheme::Cat(p) => vec![FluxKind::Cat(p)],
            Scheme::Acat(p) => vec![FluxKind::Acat {
                p,
                limiter: self.limiter,
                low: self.parachute,
            }],
            Scheme::CatMood(p) => {
                let orders = match &self.cascade {
                    Some(c) => c.clone(),
                    None if p == 1 => vec![2, 1],
                    None => vec![2 * p, 2, 1],
                };
                cascade_stages(&orders, p, self.parachute)?
            }
        })
    }

    pub fn t_final_or_default(&self) -> f64 {
        self.t_final.unwrap_or_else(|| self.case.default_t_final())
    }

    pub fn ghost_width(&self) -> Result<usize> {
        Ok(self.stages()?.iter().map(FluxKind::ghost_width).max().unwrap_or(1))
    }

    /// The problem at this resolution, with the final time applied.
    pub fn build_problem(&self) -> Result<AnyProblem> {
        let mut p = cases::build(self.case, self.nx, self.ny, self.ghost_width()?, self.gamma)?;
        p.set_t_final(self.t_final_or_default());
        Ok(p)
    }

    pub fn detector(&self) -> Detector {
        Detector::Standard(self.detection)
    }
}

fn cascade_stages(orders: &[usize], p: usize, parachute: RiemannKind) -> Result<Vec<FluxKind>> {
    let bad = |msg: &str| Err(Error::config(format!("cascade {orders:?}: {msg}")));
    if orders.len() < 2 {
        return bad("needs a high-order head and the parachute");
    }
    if orders[0] != 2 * p {
        return bad(&format!("must start with the scheme order {}", 2 * p));
    }
    if *orders.last().unwrap() != 1 {
        return bad("must end with the first-order parachute 1");
    }
    if orders.windows(2).any(|w| w[1] >= w[0]) {
        return bad("orders must decrease strictly");
    }
    let mut out = Vec::with_capacity(orders.len());
    for &o in &orders[..orders.len() - 1] {
        if o % 2 != 0 || o / 2 > MAX_HALF_WIDTH {
            return bad("inner orders must be even CAT orders");
        }
        out.push(FluxKind::Cat(o / 2));
    }
    out.push(FluxKind::Riemann(parachute));
    Ok(out)
}

/// `CFL * min(dx / lambda_x, dy / lambda_y)`, clamped to `remaining`.
pub fn compute_dt<M: Model>(model: &M, field: &Field<M::State>, cfl: f64, remaining: f64) -> Result<f64> {
    let m = field.mesh;
    let (lx, ly) = max_wave_speeds(model, field)?;
    let ly = if m.is_1d() { 0.0 } else { ly };
    if !(lx > 0.0 || ly > 0.0) {
        return Err(Error::config(format!(
            "all wave speeds vanish (lambda_x = {lx}, lambda_y = {ly}); cannot choose a time step"
        )));
    }
    let dt = cfl * (m.dx / lx).min(m.dy / ly);
    Ok(dt.min(remaining))
}

/// One time step's bookkeeping.
#[derive(Clone, Debug, PartialEq)]
pub struct StepRecord {
    pub step: usize,
    /// Time after the step.
    pub time: f64,
    pub dt: f64,
    pub stats: StepStats,
}

#[derive(Clone, Debug)]
pub struct RunOutput<S> {
    /// Final field, ghosts filled.
    pub field: Field<S>,
    pub time: f64,
    pub steps: usize,
    pub records: Vec<StepRecord>,
    /// Interior sums of the conserved variables times the cell area.
    pub initial_totals: Vec<f64>,
    pub final_totals: Vec<f64>,
    /// Largest per-step change of each conserved total, after accounting for
    /// fluxes through non-periodic boundaries, relative to the initial `sum |u| dx dy`.
    pub max_drift: Vec<f64>,
    pub ops: FlopCounter,
    pub wall: Duration,
}

/// Runtime switches that are not part of the configuration file.
#[derive(Clone, Copy, Debug)]
#[derive(Default)]
pub struct RunOptions {
    pub detector: Option<Detector>,
    /// Count flops and flux evaluations (single-stage schemes only).
    pub count_ops: bool,
    /// Stop after this many steps.
    pub max_steps: Option<usize>,
}


pub type FrameSink<'a> = dyn FnMut(&Frame) -> Result<()> + 'a;

fn totals<S: Conserved>(field: &Field<S>) -> Vec<f64> {
    let mut t = vec![0.0; S::LEN];
    for u in field.interior() {
        for (c, v) in t.iter_mut().enumerate() {
            *v += u[c];
        }
    }
    let a = field.mesh.cell_area();
    t.iter().map(|v| v * a).collect()
}

/// `sum |u_c| dx dy` per component; the drift denominator, so that
/// components whose total vanishes (a sine wave, zero net momentum) are
/// still measured against their size.
fn abs_totals<S: Conserved>(field: &Field<S>) -> Vec<f64> {
    let mut t = vec![0.0; S::LEN];
    for u in field.interior() {
        for (c, v) in t.iter_mut().enumerate() {
            *v += u[c].abs();
        }
    }
    let a = field.mesh.cell_area();
    t.iter().map(|v| (v * a).max(f64::MIN_POSITIVE)).collect()
}

/// Net inflow of each conserved variable through the domain boundary
/// over one step.
fn boundary_inflow<S: Conserved>(fl: &Interfaces<S>, dt: f64, dx: f64, dy: f64, per: Periodicity) -> Vec<f64> {
    let mut b = vec![0.0; S::LEN];
    let (nx, ny) = (fl.nx, fl.ny);
    if !per.x {
        for j in 0..ny {
            let d = *fl.fx_at(0, j) - *fl.fx_at(nx, j);
            for (c, v) in b.iter_mut().enumerate() {
                *v += dt * dy * d[c];
            }
        }
    }
    if !fl.gy.is_empty() && !per.y {
        for i in 0..nx {
            let d = *fl.gy_at(i, 0) - *fl.gy_at(i, ny);
            for (c, v) in b.iter_mut().enumerate() {
                *v += dt * dx * d[c];
            }
        }
    }
    b
}

fn admissibility_report<M: Model>(model: &M, field: &Field<M::State>) -> Option<String> {
    let m = field.mesh;
    let mut bad = 0usize;
    let mut first = None;
    for j in 0..m.ny as isize {
        for i in 0..m.nx as isize {
            let u = field.get(i, j);
            if !(cad_check(&u) && pad_check(model, &u)) {
                bad += 1;
                if first.is_none() {
                    let (x, y) = m.cell_center(i, j);
                    first = Some(format!("cell ({i}, {j}) at ({x:.4}, {y:.4}) holds {u:?}"));
                }
            }
        }
    }
    first.map(|f| format!("{bad} non-admissible cell(s); first: {f}"))
}

/// March `problem` to its final time with the scheme of `cfg`.
pub fn run<M: Model>(
    problem: &Problem<M>,
    cfg: &RunConfig,
    opts: RunOptions,
    sink: &mut FrameSink<'_>,
) -> Result<RunOutput<M::State>> {
    if opts.count_ops {
        run_impl::<M, FlopCounter>(problem, cfg, opts, sink)
    } else {
        run_impl::<M, ()>(problem, cfg, opts, sink)
    }
}

fn run_impl<M: Model, C: OpCounter + Into<FlopCounter>>(
    problem: &Problem<M>,
    cfg: &RunConfig,
    opts: RunOptions,
    sink: &mut FrameSink<'_>,
) -> Result<RunOutput<M::State>> {
    let start = Instant::now();
    let model = &problem.model;
    let stages = cfg.stages()?;
    let detector = opts.detector.unwrap_or_else(|| cfg.detector());
    let per = Periodicity {
        x: problem.bc.periodic_x(),
        y: problem.bc.periodic_y(),
    };
    let t_final = problem.t_final;
    let mut field = problem.initial.clone();
    fill_ghosts(&mut field, &problem.bc)?;
    let mesh = field.mesh;
    let mut next = field.clone();
    let mut fl = Interfaces::new(&mesh);
    let initial_totals = totals(&field);
    let mut prev_totals = initial_totals.clone();
    let mut max_drift = vec![0.0; M::State::LEN];
    let scale = abs_totals(&field);
    let mut records = Vec::new();
    let mut counter = C::default();
    let mut t = 0.0;
    let mut step = 0usize;

    let frame = |field: &Field<M::State>, step, t, mask: Option<&[i8]>| Frame::from_field(model, field, step, t, mask);
    if cfg.output_every > 0 {
        sink(&frame(&field, 0, 0.0, None))?;
    }

    let done = |t: f64| t >= t_final * (1.0 - 1e-14);
    let mut last_mask: Vec<i8> = Vec::new();
    while !done(t) {
        if opts.max_steps.is_some_and(|n| step >= n) {
            break;
        }
        let dt = compute_dt(model, &field, cfg.cfl, t_final - t).map_err(|e| match e {
            Error::Admissibility(r) => Error::Solver {
                step,
                time: t,
                report: format!("cannot compute time step: {r}"),
            },
            other => other,
        })?;
        if dt < 1e-14 * t_final {
            return Err(Error::Solver {
                step,
                time: t,
                report: format!("time step underflow: dt = {dt:e}"),
            });
        }
        let cf = cell_fluxes(model, &field, per, &mut counter);
        let engines = stages
            .iter()
            .map(|k| FluxEngine::new(*k, &mesh, per, dt))
            .collect::<Result<Vec<_>>>()?;
        let stats = if engines.len() == 1 {
            engines[0].compute_all(model, &field, &cf, &mut fl, &mut counter);
            apply_update(&field, &fl, dt, &mut next, &mut counter);
            StepStats {
                labels: vec![engines[0].kind().label()],
                counts: vec![mesh.cells()],
                mask: Vec::new(),
            }
        } else {
            mood_step(model, &field, &cf, &engines, &detector, per, dt, &mut next, &mut fl).map_err(|e| {
                Error::Solver {
                    step: step + 1,
                    time: t + dt,
                    report: e.to_string(),
                }
            })?
        };
        step += 1;
        t = if done(t + dt) { t_final } else { t + dt };

        if let Some(report) = admissibility_report(model, &next) {
            return Err(Error::Solver { step, time: t, report });
        }
        let inflow = boundary_inflow(&fl, dt, mesh.dx, mesh.dy, per);
        let now = totals(&next);
        for c in 0..M::State::LEN {
            let d = (now[c] - prev_totals[c] - inflow[c]).abs() / scale[c];
            max_drift[c] = f64::max(max_drift[c], d);
        }
        prev_totals = now;
        std::mem::swap(&mut field, &mut next);
        fill_ghosts(&mut field, &problem.bc)?;
        last_mask.clone_from(&stats.mask);
        if cfg.output_every > 0 && step.is_multiple_of(cfg.output_every) && !done(t) {
            let mask = (!stats.mask.is_empty()).then_some(stats.mask.as_slice());
            sink(&frame(&field, step, t, mask))?;
        }
        log::debug!("step {step} t = {t:.6e} dt = {dt:.3e} {:?}", stats.counts);
        records.push(StepRecord { step, time: t, dt, stats });
    }
    let mask = (!last_mask.is_empty()).then_some(last_mask.as_slice());
    sink(&frame(&field, step, t, mask))?;
    Ok(RunOutput {
        final_totals: totals(&field),
        field,
        time: t,
        steps: step,
        records,
        initial_totals,
        max_drift,
        ops: counter.into(),
        wall: start.elapsed(),
    })
}

impl From<()> for FlopCounter {
    fn from(_: ()) -> Self {
        FlopCounter::default()
    }
}

/// Summary of a run of any model.
#[derive(Clone, Debug)]
pub struct RunSummary {
    pub time: f64,
    pub steps: usize,
    pub records: Vec<StepRecord>,
    pub max_drift: Vec<f64>,
    pub wall: Duration,
    /// L1 error of the first output variable against the exact solution.
    pub l1_error: Option<f64>,
}

/// Build the problem of `cfg` and run it, reporting frames to `sink`.
pub fn run_config(cfg: &RunConfig, opts: RunOptions, sink: &mut FrameSink<'_>) -> Result<RunSummary> {
    fn finish<M: Model>(p: &Problem<M>, cfg: &RunConfig, opts: RunOptions, sink: &mut FrameSink<'_>) -> Result<RunSummary> {
        let out = run(p, cfg, opts, sink)?;
        let l1_error = p.exact.as_ref().map(|e| l1_error(&p.model, &out.field, e.as_ref(), out.time));
        Ok(RunSummary {
            time: out.time,
            steps: out.steps,
            records: out.records,
            max_drift: out.max_drift,
            wall: out.wall,
            l1_error,
        })
    }
    match cfg.build_problem()? {
        AnyProblem::Euler(p) => finish(&p, cfg, opts, sink),
        AnyProblem::Advection(p) => finish(&p, cfg, opts, sink),
        AnyProblem::Burgers(p) => finish(&p, cfg, opts, sink),
    }
}

/// `sum |w - w_exact| dx dy / |domain|` over interior cells, where `w` is
/// the first output variable (density for Euler, the unknown for scalar
/// laws).
pub fn l1_error<M: Model>(
    model: &M,
    field: &Field<M::State>,
    exact: &(dyn Fn(f64, f64, f64) -> M::State + Send + Sync),
    t: f64,
) -> f64 {
    let m = field.mesh;
    let mut sum = 0.0;
    for j in 0..m.ny as isize {
        for i in 0..m.nx as isize {
            let (x, y) = m.cell_center(i, j);
            let a = model.frame_values(&field.get(i, j))[0];
            let b = model.frame_values(&exact(x, y, t))[0];
            sum += (a - b).abs();
        }
    }
    sum / m.cells() as f64
}

/// One line of a convergence table.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConvergenceRow {
    pub n: usize,
    pub l1_error: f64,
    /// `log(e_prev / e) / log(n / n_prev)`; `None` on the first row.
    pub order: Option<f64>,
}

/// Observed orders from `(n, error)` pairs.
pub fn convergence_rows(data: &[(usize, f64)]) -> Vec<ConvergenceRow> {
    data.iter()
        .enumerate()
        .map(|(k, &(n, e))| ConvergenceRow {
            n,
            l1_error: e,
            order: (k > 0).then(|| {
                let (n0, e0) = data[k - 1];
                (e0 / e).ln() / (n as f64 / n0 as f64).ln()
            }),
        })
        .collect()
}

/// Run `base` at each resolution (`nx = ny = n` in 2D) and tabulate L1
/// errors against the exact solution.
pub fn convergence_study(base: &RunConfig, resolutions: &[usize]) -> Result<Vec<ConvergenceRow>> {
    if resolutions.is_empty() {
        return Err(Error::config("no resolutions given"));
    }
    let mut data = Vec::with_capacity(resolutions.len());
    for &n in resolutions {
        let mut cfg = base.clone();
        cfg.nx = n;
        cfg.ny = if cfg.case.is_1d() { 1 } else { n };
        cfg.output_every = 0;
        let summary = run_config(&cfg, RunOptions::default(), &mut |_| Ok(()))?;
        let e = summary
            .l1_error
            .ok_or_else(|| Error::config(format!("case {} has no exact solution", cfg.case)))?;
        log::info!("{} n = {n}: L1 = {e:e} in {:.2?}", cfg.scheme, summary.wall);
        data.push((n, e));
    }
    Ok(convergence_rows(&data))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Mesh;
    use crate::models::{EulerModel, EulerPrimitive};

    #[test]
    fn scheme_names() {
        assert_eq!("catmood6".parse::<Scheme>().unwrap(), Scheme::CatMood(3));
        assert_eq!("CAT4".parse::<Scheme>().unwrap(), Scheme::Cat(2));
        assert_eq!("acat2".parse::<Scheme>().unwrap(), Scheme::Acat(1));
        assert_eq!("hll".parse::<Scheme>().unwrap(), Scheme::FirstOrder(RiemannKind::Hll));
        assert_eq!("cat10".parse::<Scheme>().unwrap(), Scheme::Cat(5));
        for bad in ["cat3", "cat12", "catmood", "weno5", "cat0"] {
            assert!(bad.parse::<Scheme>().is_err(), "{bad}");
        }
        for s in ["cat6", "acat4", "catmood6", "rusanov"] {
            assert_eq!(s.parse::<Scheme>().unwrap().to_string(), s);
        }
    }

    #[test]
    fn cascades() {
        let mut c = RunConfig::new(CaseId::Vortex, Scheme::CatMood(3), 10, 10);
        assert_eq!(c.stages().unwrap(), vec![FluxKind::Cat(3), FluxKind::Cat(1), FluxKind::Riemann(RiemannKind::Hllc)]);
        c.cascade = Some(vec![6, 4, 2, 1]);
        assert_eq!(c.stages().unwrap().len(), 4);
        for bad in [vec![6, 2], vec![4, 2, 1], vec![6, 6, 1], vec![6, 3, 1], vec![6]] {
            c.cascade = Some(bad.clone());
            assert!(c.stages().is_err(), "{bad:?}");
        }
        c.scheme = Scheme::CatMood(1);
        c.cascade = None;
        assert_eq!(c.stages().unwrap(), vec![FluxKind::Cat(1), FluxKind::Riemann(RiemannKind::Hllc)]);
    }

    #[test]
    fn validation() {
        let mut c = RunConfig::new(CaseId::Vortex, Scheme::Cat(3), 10, 10);
        assert!(c.validate().unwrap().is_empty());
        c.cfl = 0.9;
        assert_eq!(c.validate().unwrap().len(), 1);
        c.cfl = 0.0;
        assert!(c.validate().is_err());
        c.cfl = 0.4;
        c.t_final = Some(-1.0);
        assert!(c.validate().is_err());
    }

    #[test]
    fn dt_examples() {
        let gas = EulerModel::new(1.4).unwrap();
        let mesh = Mesh::new_2d(4, 4, (0.0, 0.4), (0.0, 0.4), 1).unwrap();
        let u = gas.to_conserved(&EulerPrimitive::new(1.0, 1.0, 0.0, 1.0));
        let f = Field::filled(mesh, u);
        let dt = compute_dt(&gas, &f, 0.4, 1.0).unwrap();
        let want = 0.4 * 0.1 / (1.0 + 1.4f64.sqrt());
        assert!((dt - want).abs() < 1e-16);
        assert!((compute_dt(&gas, &f, 0.8, 1.0).unwrap() - 2.0 * want).abs() < 1e-16);
        assert_eq!(compute_dt(&gas, &f, 0.4, 1e-3).unwrap(), 1e-3);
        let still = crate::models::Advection { ax: 0.0, ay: 0.0 };
        let z = Field::filled(mesh, crate::State([1.0]));
        assert!(matches!(compute_dt(&still, &z, 0.4, 1.0), Err(Error::Config(_))));
    }

    #[test]
    fn rows_and_orders() {
        let rows = convergence_rows(&[(50, 1e-2), (100, 2.5e-3)]);
        assert_eq!(rows[0].order, None);
        assert!((rows[1].order.unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn short_runs_reach_the_final_time() {
        let mut cfg = RunConfig::new(CaseId::Advection1d, Scheme::Cat(2), 32, 1);
        cfg.t_final = Some(0.1);
        let s = run_config(&cfg, RunOptions::default(), &mut |_| Ok(())).unwrap();
        assert_eq!(s.time, 0.1);
        let last = s.records.last().unwrap();
        assert!(last.dt <= 0.4 / 32.0 + 1e-15);
        cfg.nx = 64;
        let fine = run_config(&cfg, RunOptions::default(), &mut |_| Ok(())).unwrap();
        let rows = convergence_rows(&[(32, s.l1_error.unwrap()), (64, fine.l1_error.unwrap())]);
        let order = rows[1].order.unwrap();
        assert!(order > 3.7, "{rows:?}");
    }
}
