//! First-order interface fluxes from approximate Riemann solvers.
//!
//! Signal speeds use Davis bounds; see [`Model::wave_speed_bounds`].

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::models::{Axis, Model};
use crate::state::Conserved;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RiemannKind {
    Rusanov,
    Hll,
    Hllc,
}

impl RiemannKind {
    pub fn name(self) -> &'static str {
        match self {
            RiemannKind::Rusanov => "rusanov",
            RiemannKind::Hll => "hll",
            RiemannKind::Hllc => "hllc",
        }
    }
}

impl FromStr for RiemannKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "rusanov" | "llf" => Ok(RiemannKind::Rusanov),
            "hll" => Ok(RiemannKind::Hll),
            "hllc" => Ok(RiemannKind::Hllc),
            other => Err(Error::config(format!("unknown Riemann solver '{other}'"))),
        }
    }
}

/// `(f(uL) + f(uR))/2 - s_max (uR - uL)/2`.
pub fn rusanov_flux<M: Model>(model: &M, ul: &M::State, ur: &M::State, axis: Axis) -> M::State {
    let fl = model.directional_flux(ul, axis);
    let fr = model.directional_flux(ur, axis);
    let smax = model.max_speed(ul, axis).max(model.max_speed(ur, axis));
    let mut out = (fl + fr) * 0.5;
    out.axpy(-0.5 * smax, &(*ur - *ul));
    out
}

pub fn hll_flux<M: Model>(model: &M, ul: &M::State, ur: &M::State, axis: Axis) -> M::State {
    let (sl, sr) = model.wave_speed_bounds(ul, ur, axis);
    let fl = model.directional_flux(ul, axis);
    if sl >= 0.0 {
        return fl;
    }
    let fr = model.directional_flux(ur, axis);
    if sr <= 0.0 {
        return fr;
    }
    hll_fan(ul, ur, &fl, &fr, sl, sr)
}

fn hll_fan<S: Conserved>(ul: &S, ur: &S, fl: &S, fr: &S, sl: f64, sr: f64) -> S {
    let mut out = *fl * sr - *fr * sl;
    out.axpy(sl * sr, &(*ur - *ul));
    out * (1.0 / (sr - sl))
}

/// HLLC where the model defines a contact wave, HLL otherwise.
pub fn hllc_flux<M: Model>(model: &M, ul: &M::State, ur: &M::State, axis: Axis) -> M::State {
    let (sl, sr) = model.wave_speed_bounds(ul, ur, axis);
    let fl = model.directional_flux(ul, axis);
    if sl >= 0.0 {
        return fl;
    }
    let fr = model.directional_flux(ur, axis);
    if sr <= 0.0 {
        return fr;
    }
    let star = model.contact_speed(ul, ur, sl, sr, axis).and_then(|s_star| {
        if s_star >= 0.0 {
            model.hllc_star(ul, sl, s_star, axis).map(|us| {
                let mut out = fl;
                out.axpy(sl, &(us - *ul));
                out
            })
        } else {
            model.hllc_star(ur, sr, s_star, axis).map(|us| {
                let mut out = fr;
                out.axpy(sr, &(us - *ur));
                out
            })
        }
    });
    star.unwrap_or_else(|| hll_fan(ul, ur, &fl, &fr, sl, sr))
}

pub fn riemann_flux<M: Model>(kind: RiemannKind, model: &M, ul: &M::State, ur: &M::State, axis: Axis) -> M::State {
    match kind {
        RiemannKind::Rusanov => rusanov_flux(model, ul, ur, axis),
        RiemannKind::Hll => hll_flux(model, ul, ur, axis),
        RiemannKind::Hllc => hllc_flux(model, ul, ur, axis),
    }
}

/// [`riemann_flux`] that rejects inadmissible inputs.
pub fn checked_riemann_flux<M: Model>(
    kind: RiemannKind,
    model: &M,
    ul: &M::State,
    ur: &M::State,
    axis: Axis,
) -> Result<M::State> {
    for u in [ul, ur] {
        if !model.is_admissible(u) {
            return Err(Error::Admissibility(format!("{u:?}")));
        }
    }
    Ok(riemann_flux(kind, model, ul, ur, axis))
}
