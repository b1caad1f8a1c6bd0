//! Closed-form and step-by-step transcriptions used as cross-checks for
//! the generic kernels.

use crate::models::Model;
use crate::state::Conserved;

/// Lax-Wendroff flux for `u_t + a u_x = 0`.
pub fn lw_flux_linear(ul: f64, ur: f64, a: f64, dt: f64, dx: f64) -> f64 {
    0.5 * a * (ur + ul) - 0.5 * a * a * dt / dx * (ur - ul)
}

/// CAT2 flux
/// `(f_i + f_{i+1} + f(u_i + dt u') + f(u_{i+1} + dt u')) / 4`
/// with `u' = -(f_{i+1} - f_i) / dx` shared by both points.
pub fn cat2_flux_closed_form<M: Model>(ul: &M::State, ur: &M::State, dx: f64, dt: f64, model: &M) -> M::State {
    let fl = model.flux(ul);
    let fr = model.flux(ur);
    let du = (fr - fl) * (-1.0 / dx);
    let mut pl = *ul;
    pl.axpy(dt, &du);
    let mut pr = *ur;
    pr.axpy(dt, &du);
    (fl + fr + model.flux(&pl) + model.flux(&pr)) * 0.25
}

/// Four-point CAT4 flux written out step by step for the stencil
/// `u_{i-1}, u_i, u_{i+1}, u_{i+2}`.
///
/// The series weights are `dt^k / (k+1)!`, the time average of the flux
/// Taylor polynomial, which is what the two-point closed form reduces to.
pub fn cat4_flux_stepwise<M: Model>(u: &[M::State; 4], dx: f64, dt: f64, model: &M) -> M::State {
    // conservative midpoint weights, nodes -1..2
    const HALF: [f64; 4] = [-1.0 / 12.0, 7.0 / 12.0, 7.0 / 12.0, -1.0 / 12.0];
    // d/dx at node j (rows j = -1..2) on nodes -1..2
    const D1: [[f64; 4]; 4] = [
        [-11.0 / 6.0, 3.0, -3.0 / 2.0, 1.0 / 3.0],
        [-1.0 / 3.0, -1.0 / 2.0, 1.0, -1.0 / 6.0],
        [1.0 / 6.0, -1.0, 1.0 / 2.0, 1.0 / 3.0],
        [-1.0 / 3.0, 3.0 / 2.0, -3.0, 11.0 / 6.0],
    ];
    // d^k/dt^k at r = 0 on levels -1..2, k = 1, 2, 3
    const DT: [[f64; 4]; 3] = [
        [-1.0 / 3.0, -1.0 / 2.0, 1.0, -1.0 / 6.0],
        [1.0, -2.0, 1.0, 0.0],
        [-1.0, 3.0, -3.0, 1.0],
    ];
    const R: [f64; 4] = [-1.0, 0.0, 1.0, 2.0];

    let interp = |v: &[M::State; 4]| {
        let mut acc = M::State::zero();
        for j in 0..4 {
            acc.axpy(HALF[j], &v[j]);
        }
        acc
    };
    let space_derivative = |fk: &[M::State; 4]| {
        let mut out = [M::State::zero(); 4];
        for j in 0..4 {
            for s in 0..4 {
                out[j].axpy(-D1[j][s] / dx, &fk[s]);
            }
        }
        out
    };

    // Step 1
    let f0: [M::State; 4] = std::array::from_fn(|j| model.flux(&u[j]));
    let f0_half = interp(&f0);
    // Step 2
    let u1 = space_derivative(&f0);
    // Step 3: u^{1,n+r}_j = u_j + r dt u1_j
    let t1: [[M::State; 4]; 4] = std::array::from_fn(|j| {
        std::array::from_fn(|r| {
            let mut s = u[j];
            s.axpy(R[r] * dt, &u1[j]);
            s
        })
    });
    // Step 4
    let f1: [M::State; 4] = std::array::from_fn(|j| {
        let mut acc = M::State::zero();
        for r in 0..4 {
            let fr = if r == 1 { f0[j] } else { model.flux(&t1[j][r]) };
            acc.axpy(DT[0][r] / dt, &fr);
        }
        acc
    });
    // Step 5
    let f1_half = interp(&f1);
    // Step 6
    let u2 = space_derivative(&f1);
    // Step 7
    let t2: [[M::State; 4]; 4] = std::array::from_fn(|j| {
        std::array::from_fn(|r| {
            let c = R[r] * dt;
            let mut s = u[j];
            s.axpy(c, &u1[j]);
            s.axpy(c * c / 2.0, &u2[j]);
            s
        })
    });
    // Step 8
    let f2: [M::State; 4] = std::array::from_fn(|j| {
        let mut acc = M::State::zero();
        for r in 0..4 {
            let fr = if r == 1 { f0[j] } else { model.flux(&t2[j][r]) };
            acc.axpy(DT[1][r] / (dt * dt), &fr);
        }
        acc
    });
    // Step 9
    let f2_half = interp(&f2);
    // Step 10
    let u3 = space_derivative(&f2);
    // Step 11
    let t3: [[M::State; 4]; 4] = std::array::from_fn(|j| {
        std::array::from_fn(|r| {
            let c = R[r] * dt;
            let mut s = u[j];
            s.axpy(c, &u1[j]);
            s.axpy(c * c / 2.0, &u2[j]);
            s.axpy(c * c * c / 6.0, &u3[j]);
            s
        })
    });
    // Step 12
    let f3: [M::State; 4] = std::array::from_fn(|j| {
        let mut acc = M::State::zero();
        for r in 0..4 {
            let fr = if r == 1 { f0[j] } else { model.flux(&t3[j][r]) };
            acc.axpy(DT[2][r] / (dt * dt * dt), &fr);
        }
        acc
    });
    // Step 13
    let f3_half = interp(&f3);
    // Step 14
    let mut out = f0_half;
    out.axpy(dt / 2.0, &f1_half);
    out.axpy(dt * dt / 6.0, &f2_half);
    out.axpy(dt * dt * dt / 24.0, &f3_half);
    out
}
