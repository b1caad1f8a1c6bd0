//! A priori adaptive CAT: flux-limiter blending of CAT2 with a first-order
//! flux, and smoothness-indicator selection of the CAT order.

use std::str::FromStr;

use crate::cat::{Cat1d, Scratch1d};
use crate::error::{Error, Result};
use crate::models::{Axis, Model};
use crate::riemann::{riemann_flux, RiemannKind};
use crate::state::Conserved;
use crate::stencil::{coeffs, CoeffTable, Offset};

/// Threshold below which a Roe-type speed falls back to the
/// characteristic speed, and floor of the lateral smoothness weights.
pub const EPS: f64 = 1e-8;
/// Indicators at or above this value count as smooth.
pub const PSI_CLIP: f64 = 0.95;
/// Stand-in for an infinite slope ratio.
const LARGE: f64 = 1e30;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Limiter {
    Minmod,
    Superbee,
    VanLeer,
}

impl FromStr for Limiter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "minmod" => Ok(Limiter::Minmod),
            "superbee" => Ok(Limiter::Superbee),
            "vanleer" | "van_leer" => Ok(Limiter::VanLeer),
            other => Err(Error::config(format!("unknown limiter '{other}'"))),
        }
    }
}

impl Limiter {
    pub fn name(self) -> &'static str {
        match self {
            Limiter::Minmod => "minmod",
            Limiter::Superbee => "superbee",
            Limiter::VanLeer => "vanleer",
        }
    }
}

/// Limiter value in `[0, 2]`; NaN ratios give 0.
pub fn flux_limiter_phi(r: f64, kind: Limiter) -> f64 {
    if r.is_nan() {
        return 0.0;
    }
    match kind {
        Limiter::Minmod => r.min(1.0).max(0.0),
        Limiter::Superbee => (2.0 * r).min(1.0).max(r.min(2.0)).max(0.0),
        Limiter::VanLeer => {
            if r.is_infinite() {
                return if r > 0.0 { 2.0 } else { 0.0 };
            }
            (r + r.abs()) / (1.0 + r.abs())
        }
    }
}

fn ratio(num: f64, den: f64) -> f64 {
    if den != 0.0 {
        num / den
    } else if num == 0.0 {
        1.0
    } else {
        num.signum() * LARGE
    }
}

/// Upwind slope ratio per component for the interface between `u[1]` and
/// `u[2]` of the four states `u_{i-1}, u_i, u_{i+1}, u_{i+2}`.
pub fn upwind_ratio<M: Model>(model: &M, u: &[M::State], axis: Axis) -> M::State {
    assert_eq!(u.len(), 4, "upwind ratio needs four states");
    let fl = model.directional_flux(&u[1], axis);
    let fr = model.directional_flux(&u[2], axis);
    let mut r = M::State::zero();
    for c in 0..M::State::LEN {
        let du = u[2][c] - u[1][c];
        let a = if du.abs() > EPS {
            (fr[c] - fl[c]) / du
        } else {
            model.char_speed(&u[1], axis)
        };
        r[c] = if a > 0.0 {
            ratio(u[1][c] - u[0][c], du)
        } else {
            ratio(u[3][c] - u[2][c], du)
        };
    }
    r
}

/// Componentwise `phi * high + (1 - phi) * low`.
pub fn blend<S: Conserved>(phi: &S, high: &S, low: &S) -> S {
    let mut out = *low;
    for c in 0..S::LEN {
        out[c] = phi[c] * high[c] + (1.0 - phi[c]) * low[c];
    }
    out
}

/// Indicator `w / (w + tau)` on `2p` samples centred on an interface,
/// clipped to 1 at or above [`PSI_CLIP`].
pub fn smoothness_psi(samples: &[f64], p: usize) -> Result<f64> {
    if p < 2 || samples.len() != 2 * p {
        return Err(Error::Stencil(format!(
            "smoothness indicator needs 2p samples with p >= 2, got {} for p = {p}",
            samples.len()
        )));
    }
    let top = top_difference_weights(p)?;
    Ok(psi_with(samples, &top))
}

/// `(2p-1)! gamma^{2p-1,1/2}_{p,j}`.
fn top_difference_weights(p: usize) -> Result<Vec<f64>> {
    let k = 2 * p - 1;
    let fact: f64 = (1..=k).map(|v| v as f64).product();
    Ok(coeffs(p, k, Offset::Half)?.into_iter().map(|g| g * fact).collect())
}

fn psi_with(samples: &[f64], top: &[f64]) -> f64 {
    let n = samples.len();
    let p = n / 2;
    // differences d_m = f_{m+1} - f_m, m = 0..n-1; the central one is
    // d_{p-1} (between offsets 0 and 1)
    let diff = |m: usize| samples[m + 1] - samples[m];
    let wl: f64 = (0..p - 1).map(|m| diff(m).powi(2)).sum::<f64>() + EPS;
    let wr: f64 = (p..n - 1).map(|m| diff(m).powi(2)).sum::<f64>() + EPS;
    let w = wl * wr / (wl + wr);
    let t: f64 = top.iter().zip(samples).map(|(g, f)| g * f).sum();
    let tau = t * t;
    let psi = w / (w + tau);
    if psi >= PSI_CLIP {
        1.0
    } else {
        psi
    }
}

/// `p_max` from indicators `psi[0] = psi^2, psi[1] = psi^3, ...`: the end
/// of the leading run of values clipped to 1, or `None` when `psi^2 < 1`.
pub fn select_order(psi: &[f64]) -> Option<usize> {
    let run = psi.iter().take_while(|&&v| v >= 1.0).count();
    (run > 0).then_some(run + 1)
}

/// Per-interface decision of the ACAT scheme.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AcatChoice<S> {
    /// Use the CAT flux of half-width `p`.
    Order(usize),
    /// Blend CAT2 with the low-order flux using these limiter values.
    Blend(S),
}

/// Order selection for ACAT2P on interface stencils of `2P` states.
#[derive(Clone, Debug)]
pub struct AcatSelector {
    p_max: usize,
    limiter: Limiter,
    /// `tops[p]`: scaled top-derivative weights for half-width `p`.
    tops: Vec<Vec<f64>>,
}

impl AcatSelector {
    pub fn new(p_max: usize, limiter: Limiter) -> Result<Self> {
        let mut tops = vec![Vec::new(); p_max + 1];
        for (p, slot) in tops.iter_mut().enumerate().skip(2) {
            *slot = top_difference_weights(p)?;
        }
        Ok(AcatSelector { p_max, limiter, tops })
    }

    pub fn p_max(&self) -> usize {
        self.p_max
    }

    /// Smallest indicator over components for half-width `p`, read from
    /// the centred `2p` states of `line` (which has `2 p_max` states).
    pub fn psi<M: Model>(&self, line: &[M::State], p: usize) -> f64 {
        let off = self.p_max - p;
        let sub = &line[off..off + 2 * p];
        let mut buf = [0.0; 20];
        let mut best = 1.0f64;
        for c in 0..M::State::LEN {
            for (k, s) in sub.iter().enumerate() {
                buf[k] = s[c];
            }
            best = best.min(psi_with(&buf[..2 * p], &self.tops[p]));
        }
        best
    }

    /// Largest `p` such that every indicator from 2 to `p` is clipped to 1.
    pub fn select<M: Model>(&self, line: &[M::State]) -> Option<usize> {
        let mut best = None;
        for p in 2..=self.p_max {
            if self.psi::<M>(line, p) >= 1.0 {
                best = Some(p);
            } else {
                break;
            }
        }
        best
    }

    /// Order or blend weights for the interface at the centre of `line`.
    pub fn choose<M: Model>(&self, model: &M, line: &[M::State], axis: Axis) -> AcatChoice<M::State> {
        debug_assert_eq!(line.len(), 2 * self.p_max);
        if let Some(p) = self.select::<M>(line) {
            return AcatChoice::Order(p);
        }
        let c = self.p_max;
        let r = upwind_ratio(model, &line[c - 2..c + 2], axis);
        AcatChoice::Blend(r.map(|v| flux_limiter_phi(v, self.limiter)))
    }
}

/// ACAT2 flux from `u_{i-1}, u_i, u_{i+1}, u_{i+2}`.
pub fn acat2_flux<M: Model>(
    model: &M,
    stencil: &[M::State],
    dx: f64,
    dt: f64,
    limiter: Limiter,
    low: RiemannKind,
) -> M::State {
    assert_eq!(stencil.len(), 4, "ACAT2 needs four states");
    let phi = upwind_ratio(model, stencil, Axis::X).map(|r| flux_limiter_phi(r, limiter));
    let high = crate::cat::cat2_flux_closed_form(&stencil[1], &stencil[2], dx, dt, model);
    let lo = riemann_flux(low, model, &stencil[1], &stencil[2], Axis::X);
    blend(&phi, &high, &lo)
}

/// ACAT2P flux from `2P` states `u_{i-P+1}..u_{i+P}`, `P >= 2`.
pub fn acat2p_flux<M: Model>(
    model: &M,
    stencil: &[M::State],
    dx: f64,
    dt: f64,
    limiter: Limiter,
    low: RiemannKind,
) -> Result<M::State> {
    let n = stencil.len();
    if n < 4 || n % 2 != 0 {
        return Err(Error::Stencil(format!("ACAT2P needs an even stencil of at least 4 states, got {n}")));
    }
    let p_max = n / 2;
    let selector = AcatSelector::new(p_max, limiter)?;
    match selector.choose(model, stencil, Axis::X) {
        AcatChoice::Order(p) => {
            let table = CoeffTable::for_half_widths(&[p])?;
            let kernel = Cat1d::new(&table, p, dx, dt)?;
            let sub = &stencil[p_max - p..p_max + p];
            let f0: Vec<_> = sub.iter().map(|u| model.flux(u)).collect();
            Ok(kernel.flux(model, sub, &f0, &mut Scratch1d::new(), &mut ()))
        }
        AcatChoice::Blend(phi) => {
            let c = p_max;
            let high = crate::cat::cat2_flux_closed_form(&stencil[c - 1], &stencil[c], dx, dt, model);
            let lo = riemann_flux(low, model, &stencil[c - 1], &stencil[c], Axis::X);
            Ok(blend(&phi, &high, &lo))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat::cat_flux_1d;
    use crate::models::{Advection, Burgers};
    use crate::state::State;
    use proptest::prelude::*;

    const KINDS: [Limiter; 3] = [Limiter::Minmod, Limiter::Superbee, Limiter::VanLeer];

    fn s(v: &[f64]) -> Vec<State<1>> {
        v.iter().map(|x| State([*x])).collect()
    }

    #[test]
    fn limiter_values() {
        for k in KINDS {
            assert_eq!(flux_limiter_phi(-0.5, k), 0.0);
            assert_eq!(flux_limiter_phi(0.0, k), 0.0);
            assert_eq!(flux_limiter_phi(1.0, k), 1.0);
            assert_eq!(flux_limiter_phi(f64::NAN, k), 0.0);
        }
        assert_eq!(flux_limiter_phi(2.0, Limiter::Minmod), 1.0);
        assert_eq!(flux_limiter_phi(2.0, Limiter::Superbee), 2.0);
        assert!((flux_limiter_phi(2.0, Limiter::VanLeer) - 4.0 / 3.0).abs() < 1e-15);
        assert_eq!("van_leer".parse::<Limiter>().unwrap(), Limiter::VanLeer);
    }

    #[test]
    fn ratio_examples() {
        let r = upwind_ratio(&Advection::new_1d(1.0), &s(&[0.0, 1.0, 2.0, 3.0]), Axis::X);
        assert_eq!(r.0[0], 1.0);
        let r = upwind_ratio(&Advection::new_1d(1.0), &s(&[0.0, 1.0, 0.0, 1.0]), Axis::X);
        assert!(r.0[0] < 0.0);
        assert_eq!(flux_limiter_phi(r.0[0], Limiter::Minmod), 0.0);
        // equal states: derivative branch, f'(1) = 1 > 0 picks the left ratio
        let r = upwind_ratio(&Burgers, &s(&[0.5, 1.0, 1.0, 7.0]), Axis::X);
        assert_eq!(r.0[0], LARGE);
        let r = upwind_ratio(&Burgers, &s(&[1.0, 1.0, 1.0, 7.0]), Axis::X);
        assert_eq!(r.0[0], 1.0);
        // negative speed reads the right ratio
        let r = upwind_ratio(&Advection::new_1d(-1.0), &s(&[0.0, 1.0, 2.0, 4.0]), Axis::X);
        assert_eq!(r.0[0], 2.0);
    }

    #[test]
    fn psi_examples() {
        assert_eq!(smoothness_psi(&[2.0; 4], 2).unwrap(), 1.0);
        // quadratic data: the third difference vanishes
        let q: Vec<f64> = (0..4).map(|j| (j as f64).powi(2) * 0.3 - j as f64).collect();
        assert_eq!(smoothness_psi(&q, 2).unwrap(), 1.0);
        let quartic: Vec<f64> = (0..6).map(|j| (j as f64 * 0.1).powi(4)).collect();
        assert_eq!(smoothness_psi(&quartic, 3).unwrap(), 1.0);
        // unit step: wL = wR = 1e-8, w = 5e-9, tau = (3! (-1/1 * 3... ))^2 = 144
        let step = smoothness_psi(&[0.0, 0.0, 1.0, 1.0], 2).unwrap();
        let want = 5e-9 / (5e-9 + 144.0);
        assert!((step - want).abs() < 1e-20, "{step}");
        assert!(smoothness_psi(&[0.0; 3], 2).is_err());
        assert!(smoothness_psi(&[0.0; 2], 1).is_err());
    }

    #[test]
    fn blend_endpoints() {
        let h = State([2.0, -1.0]);
        let l = State([0.5, 3.0]);
        assert_eq!(blend(&State([1.0, 1.0]), &h, &l), h);
        assert_eq!(blend(&State([0.0, 0.0]), &h, &l), l);
        assert_eq!(blend(&State([1.0, 0.0]), &h, &l), State([2.0, 3.0]));
    }

    #[test]
    fn acat2_smooth_and_extremum() {
        let m = Advection::new_1d(1.0);
        let lin = s(&[0.0, 0.1, 0.2, 0.3]);
        let got = acat2_flux(&m, &lin, 0.1, 0.05, Limiter::Minmod, RiemannKind::Rusanov);
        let cat = crate::cat::cat2_flux_closed_form(&lin[1], &lin[2], 0.1, 0.05, &m);
        assert_eq!(got, cat);
        let ext = s(&[0.0, 1.0, 0.0, 1.0]);
        let got = acat2_flux(&m, &ext, 0.1, 0.05, Limiter::Minmod, RiemannKind::Rusanov);
        assert_eq!(got, riemann_flux(RiemannKind::Rusanov, &m, &ext[1], &ext[2], Axis::X));
    }

    #[test]
    fn half_blend_is_mean() {
        // r = 1/2 gives minmod phi = 1/2
        let st = s(&[0.0, 0.5, 1.5, 4.0]);
        let phi = upwind_ratio(&Burgers, &st, Axis::X).map(|r| flux_limiter_phi(r, Limiter::Minmod));
        assert_eq!(phi.0[0], 0.5);
        let got = acat2_flux(&Burgers, &st, 0.1, 0.02, Limiter::Minmod, RiemannKind::Hll).0[0];
        let hi = crate::cat::cat2_flux_closed_form(&st[1], &st[2], 0.1, 0.02, &Burgers).0[0];
        let lo = riemann_flux(RiemannKind::Hll, &Burgers, &st[1], &st[2], Axis::X).0[0];
        assert!((got - 0.5 * (hi + lo)).abs() < 1e-15);
    }

    #[test]
    fn order_selection() {
        let m = Advection::new_1d(1.0);
        let smooth: Vec<_> = (0..6).map(|j| State([(0.01 * j as f64).sin()])).collect();
        let sel = AcatSelector::new(3, Limiter::Minmod).unwrap();
        assert_eq!(sel.select::<Advection>(&smooth), Some(3));
        let got = acat2p_flux(&m, &smooth, 0.01, 0.004, Limiter::Minmod, RiemannKind::Rusanov).unwrap();
        assert_eq!(got, cat_flux_1d(3, &smooth, 0.01, 0.004, &m).unwrap());

        let step = s(&[0.0, 0.0, 0.0, 1.0, 1.0, 1.0]);
        assert_eq!(sel.select::<Advection>(&step), None);
        assert!(matches!(sel.choose(&m, &step, Axis::X), AcatChoice::Blend(_)));

        // smooth inner four, kink in the outer pair: p = 2 only
        let mixed = s(&[5.0, 0.0, 0.01, 0.02, 0.03, -4.0]);
        assert_eq!(sel.select::<Advection>(&mixed), Some(2));
        assert_eq!(select_order(&[1.0, 0.2, 1.0]), Some(2));
        assert_eq!(select_order(&[0.9, 1.0]), None);
        let got = acat2p_flux(&m, &mixed, 0.1, 0.04, Limiter::Minmod, RiemannKind::Rusanov).unwrap();
        assert_eq!(got, cat_flux_1d(2, &mixed[1..5], 0.1, 0.04, &m).unwrap());
    }

    proptest! {
        #[test]
        fn psi_shift_invariant(v in prop::collection::vec(-1.0f64..1.0, 6), c in -4.0f64..4.0) {
            // compare on exactly representable data to avoid rounding in the shift
            let q: Vec<f64> = v.iter().map(|x| (x * 1024.0).round() / 1024.0).collect();
            let shifted: Vec<f64> = q.iter().map(|x| x + c.round()).collect();
            prop_assert_eq!(smoothness_psi(&q, 3).unwrap(), smoothness_psi(&shifted, 3).unwrap());
            prop_assert_eq!(smoothness_psi(&q[1..5], 2).unwrap(), smoothness_psi(&shifted[1..5], 2).unwrap());
        }

        #[test]
        fn blend_is_convex_for_unit_limiters(v in prop::collection::vec(-2.0f64..2.0, 4), dt in 0.001f64..0.04) {
            let st = s(&v);
            let f = acat2_flux(&Burgers, &st, 0.1, dt, Limiter::Minmod, RiemannKind::Rusanov).0[0];
            let hi = crate::cat::cat2_flux_closed_form(&st[1], &st[2], 0.1, dt, &Burgers).0[0];
            let lo = riemann_flux(RiemannKind::Rusanov, &Burgers, &st[1], &st[2], Axis::X).0[0];
            prop_assert!(f >= hi.min(lo) - 1e-14 && f <= hi.max(lo) + 1e-14);
        }

        #[test]
        fn selection_is_monotone(smooth in prop::collection::vec(any::<bool>(), 1..6), extra in 0usize..6) {
            let psi: Vec<f64> = smooth.iter().map(|&b| if b { 1.0 } else { 0.3 }).collect();
            let mut more = psi.clone();
            let k = extra % more.len();
            more[k] = 1.0;
            prop_assert!(select_order(&more).unwrap_or(1) >= select_order(&psi).unwrap_or(1));
        }
    }
}
