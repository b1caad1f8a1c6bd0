//! Benchmark problems: initial data, boundary conditions, default final
//! times and exact solutions where they exist.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::{BoundaryCondition, BoundaryKind, Field, Mesh};
use crate::models::{Advection, Burgers, EulerModel, EulerPrimitive, Model};
use crate::state::{Euler2, State};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CaseId {
    Vortex,
    Sedov,
    Rp3,
    Rp6,
    Rp11,
    Rp17,
    Jet,
    Advection1d,
    Burgers1d,
}

impl CaseId {
    pub const ALL: [CaseId; 9] = [
        CaseId::Vortex,
        CaseId::Sedov,
        CaseId::Rp3,
        CaseId::Rp6,
        CaseId::Rp11,
        CaseId::Rp17,
        CaseId::Jet,
        CaseId::Advection1d,
        CaseId::Burgers1d,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CaseId::Vortex => "vortex",
            CaseId::Sedov => "sedov",
            CaseId::Rp3 => "rp3",
            CaseId::Rp6 => "rp6",
            CaseId::Rp11 => "rp11",
            CaseId::Rp17 => "rp17",
            CaseId::Jet => "jet",
            CaseId::Advection1d => "advection1d",
            CaseId::Burgers1d => "burgers1d",
        }
    }

    pub fn is_1d(self) -> bool {
        matches!(self, CaseId::Advection1d | CaseId::Burgers1d)
    }

    pub fn default_t_final(self) -> f64 {
        match self {
            CaseId::Vortex => 20.0,
            CaseId::Sedov => 1.0,
            CaseId::Rp3 | CaseId::Rp6 | CaseId::Rp11 | CaseId::Rp17 => 0.3,
            CaseId::Jet => 0.001,
            CaseId::Advection1d => 1.0,
            // before the shock forms at t = 1/(2 pi)
            CaseId::Burgers1d => 0.1,
        }
    }

    pub fn default_gamma(self) -> f64 {
        match self {
            CaseId::Jet => 5.0 / 3.0,
            _ => 1.4,
        }
    }

    pub fn is_periodic(self) -> bool {
        matches!(self, CaseId::Vortex | CaseId::Advection1d | CaseId::Burgers1d)
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CaseId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        CaseId::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::config(format!("unknown case '{s}'")))
    }
}

/// Exact solution as a function of `(x, y, t)`.
pub type ExactFn<S> = Arc<dyn Fn(f64, f64, f64) -> S + Send + Sync>;

/// A ready-to-run problem for one model.
#[derive(Clone)]
pub struct Problem<M: Model> {
    pub case: CaseId,
    pub model: M,
    pub bc: BoundaryCondition<M::State>,
    pub initial: Field<M::State>,
    pub t_final: f64,
    pub exact: Option<ExactFn<M::State>>,
}

impl<M: Model> fmt::Debug for Problem<M> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Problem")
            .field("case", &self.case)
            .field("model", &self.model)
            .field("mesh", &self.initial.mesh)
            .field("t_final", &self.t_final)
            .field("exact", &self.exact.is_some())
            .finish()
    }
}

/// A problem for whichever model the case needs.
#[derive(Clone, Debug)]
pub enum AnyProblem {
    Euler(Problem<EulerModel>),
    Advection(Problem<Advection>),
    Burgers(Problem<Burgers>),
}

impl AnyProblem {
    pub fn mesh(&self) -> Mesh {
        match self {
            AnyProblem::Euler(p) => p.initial.mesh,
            AnyProblem::Advection(p) => p.initial.mesh,
            AnyProblem::Burgers(p) => p.initial.mesh,
        }
    }

    pub fn set_t_final(&mut self, t: f64) {
        match self {
            AnyProblem::Euler(p) => p.t_final = t,
            AnyProblem::Advection(p) => p.t_final = t,
            AnyProblem::Burgers(p) => p.t_final = t,
        }
    }
}

/// Build `case` on an `nx x ny` mesh (`ny` is ignored for 1D cases) with
/// `ghost` layers. `gamma` overrides the case default for Euler cases.
pub fn build(case: CaseId, nx: usize, ny: usize, ghost: usize, gamma: Option<f64>) -> Result<AnyProblem> {
    let gas = || EulerModel::new(gamma.unwrap_or_else(|| case.default_gamma()));
    Ok(match case {
        CaseId::Vortex => AnyProblem::Euler(vortex(nx, ny, ghost, gas()?)?),
        CaseId::Sedov => AnyProblem::Euler(sedov(nx, ny, ghost, gas()?)?),
        CaseId::Rp3 => AnyProblem::Euler(riemann2d(3, nx, ny, ghost, gas()?)?),
        CaseId::Rp6 => AnyProblem::Euler(riemann2d(6, nx, ny, ghost, gas()?)?),
        CaseId::Rp11 => AnyProblem::Euler(riemann2d(11, nx, ny, ghost, gas()?)?),
        CaseId::Rp17 => AnyProblem::Euler(riemann2d(17, nx, ny, ghost, gas()?)?),
        CaseId::Jet => AnyProblem::Euler(jet(nx, ny, ghost, gas()?)?),
        CaseId::Advection1d => AnyProblem::Advection(advection1d(nx, ghost)?),
        CaseId::Burgers1d => AnyProblem::Burgers(burgers1d(nx, ghost)?),
    })
}

// ---------------------------------------------------------------- vortex

pub const VORTEX_BETA: f64 = 5.0;
const VORTEX_HALF: f64 = 10.0;

/// Isentropic vortex centred at the origin on the ambient flow
/// `(rho, u, v, p) = (1, 1, 1, 1)`.
pub fn vortex_ic(x: f64, y: f64, gamma: f64) -> EulerPrimitive {
    let r2 = x * x + y * y;
    let e = ((1.0 - r2) / 2.0).exp();
    let du = -y * VORTEX_BETA / (2.0 * PI) * e;
    let dv = x * VORTEX_BETA / (2.0 * PI) * e;
    let dt = -(gamma - 1.0) * VORTEX_BETA * VORTEX_BETA / (8.0 * gamma * PI * PI) * (1.0 - r2).exp();
    let t = 1.0 + dt;
    let rho = t.powf(1.0 / (gamma - 1.0));
    EulerPrimitive::new(rho, 1.0 + du, 1.0 + dv, rho * t)
}

fn wrap_box(v: f64) -> f64 {
    (v + VORTEX_HALF).rem_euclid(2.0 * VORTEX_HALF) - VORTEX_HALF
}

/// The initial vortex advected by the ambient flow for time `t`.
pub fn vortex_exact(x: f64, y: f64, t: f64, gamma: f64) -> EulerPrimitive {
    vortex_ic(wrap_box(x - t), wrap_box(y - t), gamma)
}

pub fn vortex(nx: usize, ny: usize, ghost: usize, gas: EulerModel) -> Result<Problem<EulerModel>> {
    let mesh = Mesh::new_2d(nx, ny, (-VORTEX_HALF, VORTEX_HALF), (-VORTEX_HALF, VORTEX_HALF), ghost)?;
    let g = gas.gamma;
    let initial = Field::from_fn(mesh, |x, y| gas.to_conserved(&vortex_ic(x, y, g)));
    Ok(Problem {
        case: CaseId::Vortex,
        model: gas,
        bc: BoundaryCondition::periodic(),
        initial,
        t_final: CaseId::Vortex.default_t_final(),
        exact: Some(Arc::new(move |x, y, t| gas.to_conserved(&vortex_exact(x, y, t, g)))),
    })
}

// ---------------------------------------------------------------- Sedov

/// Blast energy per quadrant. Each of the four cells touching the origin
/// holds this much, which is the classic quarter-plane setup mirrored to
/// the full plane: the shock then reaches `r = 1` at `t = 1`.
pub const SEDOV_ENERGY: f64 = 0.244816;
pub const SEDOV_BACKGROUND: EulerPrimitive = EulerPrimitive::new(1.0, 0.0, 0.0, 1e-13);
const SEDOV_HALF: f64 = 1.2;

/// Pressure in each of the four cells touching the origin.
pub fn sedov_origin_pressure(gamma: f64, dx: f64, dy: f64) -> f64 {
    (gamma - 1.0) * SEDOV_ENERGY / (dx * dy)
}

pub fn sedov(nx: usize, ny: usize, ghost: usize, gas: EulerModel) -> Result<Problem<EulerModel>> {
    if !nx.is_multiple_of(2) || !ny.is_multiple_of(2) {
        return Err(Error::config(format!(
            "sedov needs even cell counts so the origin is a vertex, got {nx}x{ny}"
        )));
    }
    let mesh = Mesh::new_2d(nx, ny, (-SEDOV_HALF, SEDOV_HALF), (-SEDOV_HALF, SEDOV_HALF), ghost)?;
    let mut initial = Field::filled(mesh, gas.to_conserved(&SEDOV_BACKGROUND));
    let p0 = sedov_origin_pressure(gas.gamma, mesh.dx, mesh.dy);
    let hot = gas.to_conserved(&EulerPrimitive::new(1.0, 0.0, 0.0, p0));
    let (ci, cj) = ((nx / 2) as isize, (ny / 2) as isize);
    for j in [cj - 1, cj] {
        for i in [ci - 1, ci] {
            initial.set(i, j, hot);
        }
    }
    Ok(Problem {
        case: CaseId::Sedov,
        model: gas,
        bc: BoundaryCondition::outflow(),
        initial,
        t_final: CaseId::Sedov.default_t_final(),
        exact: None,
    })
}

// ---------------------------------------------------------------- 2D Riemann

/// Quadrant states `[Q1, Q2, Q3, Q4]` with Q1 = {x > 0, y > 0} and the
/// others counter-clockwise.
pub fn riemann2d_states(config: u8) -> Result<[EulerPrimitive; 4]> {
    let w = EulerPrimitive::new;
    Ok(match config {
        3 => [
            w(1.5, 0.0, 0.0, 1.5),
            w(0.5323, 1.206, 0.0, 0.3),
            w(0.138, 1.206, 1.206, 0.029),
            w(0.5323, 0.0, 1.206, 0.3),
        ],
        6 => [
            w(1.5, 0.75, -0.5, 1.0),
            w(2.0, 0.75, 0.5, 1.0),
            w(1.0, -0.75, 0.5, 1.0),
            w(3.0, -0.75, -0.5, 1.0),
        ],
        11 => [
            w(1.0, 0.1, 0.0, 1.0),
            w(0.5313, 0.8276, 0.0, 0.4),
            w(0.8, 0.1, 0.0, 0.4),
            w(0.5313, 0.1, 0.0, 0.4),
        ],
        17 => [
            w(1.0, 0.0, -0.4, 1.0),
            w(2.0, 0.0, -0.3, 1.0),
            w(1.0625, 0.0, 0.2145, 0.4),
            w(0.5197, 0.0, -1.1259, 0.4),
        ],
        other => return Err(Error::config(format!("unknown 2D Riemann configuration {other}"))),
    })
}

/// Quadrant index 0..4 of a point.
pub fn quadrant(x: f64, y: f64) -> usize {
    match (x > 0.0, y > 0.0) {
        (true, true) => 0,
        (false, true) => 1,
        (false, false) => 2,
        (true, false) => 3,
    }
}

pub fn riemann2d(config: u8, nx: usize, ny: usize, ghost: usize, gas: EulerModel) -> Result<Problem<EulerModel>> {
    let states = riemann2d_states(config)?;
    let case = match config {
        3 => CaseId::Rp3,
        6 => CaseId::Rp6,
        11 => CaseId::Rp11,
        _ => CaseId::Rp17,
    };
    let mesh = Mesh::new_2d(nx, ny, (-1.0, 1.0), (-1.0, 1.0), ghost)?;
    let initial = Field::from_fn(mesh, |x, y| gas.to_conserved(&states[quadrant(x, y)]));
    Ok(Problem {
        case,
        model: gas,
        bc: BoundaryCondition::outflow(),
        initial,
        t_final: case.default_t_final(),
        exact: None,
    })
}

// ---------------------------------------------------------------- jet

pub const JET_AMBIENT: EulerPrimitive = EulerPrimitive::new(0.5, 0.0, 0.0, 0.4127);
pub const JET_INFLOW: EulerPrimitive = EulerPrimitive::new(5.0, 800.0, 0.0, 0.4127);
pub const JET_HALF_WIDTH: f64 = 0.05;

pub fn jet(nx: usize, ny: usize, ghost: usize, gas: EulerModel) -> Result<Problem<EulerModel>> {
    let mesh = Mesh::new_2d(nx, ny, (0.0, 1.0), (-0.25, 0.25), ghost)?;
    let initial = Field::filled(mesh, gas.to_conserved(&JET_AMBIENT));
    let mut bc: BoundaryCondition<Euler2> = BoundaryCondition::outflow();
    bc.x_lo = BoundaryKind::Inflow {
        state: gas.to_conserved(&JET_INFLOW),
        lo: -JET_HALF_WIDTH,
        hi: JET_HALF_WIDTH,
    };
    Ok(Problem {
        case: CaseId::Jet,
        model: gas,
        bc,
        initial,
        t_final: CaseId::Jet.default_t_final(),
        exact: None,
    })
}

// ---------------------------------------------------------------- 1D scalar

pub fn advection1d(nx: usize, ghost: usize) -> Result<Problem<Advection>> {
    let mesh = Mesh::new_1d(nx, (0.0, 1.0), ghost)?;
    let initial = Field::from_fn(mesh, |x, _| State([(2.0 * PI * x).sin()]));
    Ok(Problem {
        case: CaseId::Advection1d,
        model: Advection::new_1d(1.0),
        bc: BoundaryCondition::periodic(),
        initial,
        t_final: CaseId::Advection1d.default_t_final(),
        exact: Some(Arc::new(|x, _, t| State([(2.0 * PI * (x - t)).sin()]))),
    })
}

/// Smooth Burgers solution from `0.5 + sin(2 pi x)` by Newton iteration on
/// the characteristic relation; valid before the shock time `1/(2 pi)`.
pub fn burgers_exact(x: f64, t: f64) -> f64 {
    let mut u = 0.5 + (2.0 * PI * x).sin();
    for _ in 0..100 {
        let arg = 2.0 * PI * (x - u * t);
        let g = u - 0.5 - arg.sin();
        let dg = 1.0 + 2.0 * PI * t * arg.cos();
        let step = g / dg;
        u -= step;
        if step.abs() < 1e-15 {
            break;
        }
    }
    u
}

pub fn burgers1d(nx: usize, ghost: usize) -> Result<Problem<Burgers>> {
    let mesh = Mesh::new_1d(nx, (0.0, 1.0), ghost)?;
    let initial = Field::from_fn(mesh, |x, _| State([0.5 + (2.0 * PI * x).sin()]));
    Ok(Problem {
        case: CaseId::Burgers1d,
        model: Burgers,
        bc: BoundaryCondition::periodic(),
        initial,
        t_final: CaseId::Burgers1d.default_t_final(),
        exact: Some(Arc::new(|x, _, t| State([burgers_exact(x, t)]))),
    })
}
