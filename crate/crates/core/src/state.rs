//! Fixed-size conserved-variable vectors.

use std::fmt::Debug;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

/// Operations the flux kernels need from a vector of conserved variables.
pub trait Conserved:
    Copy
    + Send
    + Sync
    + Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Neg<Output = Self>
    + Mul<f64, Output = Self>
    + AddAssign
    + SubAssign
    + Index<usize, Output = f64>
    + IndexMut<usize>
{
    const LEN: usize;

    fn zero() -> Self;

    fn splat(v: f64) -> Self;

    fn as_slice(&self) -> &[f64];

    fn is_finite(&self) -> bool {
        self.as_slice().iter().all(|v| v.is_finite())
    }

    /// `self += a * x`
    #[inline]
    fn axpy(&mut self, a: f64, x: &Self) {
        for c in 0..Self::LEN {
            self[c] += a * x[c];
        }
    }

    /// Componentwise map.
    fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        let mut out = *self;
        for c in 0..Self::LEN {
            out[c] = f(self[c]);
        }
        out
    }
}

/// A state with `N` conserved components.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct State<const N: usize>(pub [f64; N]);

/// Scalar conservation laws.
pub type Scalar = State<1>;
/// Compressible Euler in 2D: (rho, rho u, rho v, rho E).
pub type Euler2 = State<4>;

impl<const N: usize> State<N> {
    pub const fn new(v: [f64; N]) -> Self {
        State(v)
    }
}

impl<const N: usize> Default for State<N> {
    fn default() -> Self {
        State([0.0; N])
    }
}

impl<const N: usize> Conserved for State<N> {
    const LEN: usize = N;

    #[inline]
    fn zero() -> Self {
        State([0.0; N])
    }

    #[inline]
    fn splat(v: f64) -> Self {
        State([v; N])
    }

    #[inline]
    fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

impl<const N: usize> Index<usize> for State<N> {
    type Output = f64;
    #[inline]
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl<const N: usize> IndexMut<usize> for State<N> {
    #[inline]
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.0[i]
    }
}

impl<const N: usize> Add for State<N> {
    type Output = Self;
    #[inline]
    fn add(mut self, rhs: Self) -> Self {
        for c in 0..N {
            self.0[c] += rhs.0[c];
        }
        self
    }
}

impl<const N: usize> Sub for State<N> {
    type Output = Self;
    #[inline]
    fn sub(mut self, rhs: Self) -> Self {
        for c in 0..N {
            self.0[c] -= rhs.0[c];
        }
        self
    }
}

impl<const N: usize> Neg for State<N> {
    type Output = Self;
    #[inline]
    fn neg(mut self) -> Self {
        for c in 0..N {
            self.0[c] = -self.0[c];
        }
        self
    }
}

impl<const N: usize> Mul<f64> for State<N> {
    type Output = Self;
    #[inline]
    fn mul(mut self, rhs: f64) -> Self {
        for c in 0..N {
            self.0[c] *= rhs;
        }
        self
    }
}

impl<const N: usize> AddAssign for State<N> {
    #[inline]
    fn add_assign(&mut self, rhs: Self) {
        for c in 0..N {
            self.0[c] += rhs.0[c];
        }
    }
}

impl<const N: usize> SubAssign for State<N> {
    #[inline]
    fn sub_assign(&mut self, rhs: Self) {
        for c in 0..N {
            self.0[c] -= rhs.0[c];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_is_componentwise() {
        let a = State([1.0, 2.0]);
        let b = State([0.5, -1.0]);
        assert_eq!(a + b, State([1.5, 1.0]));
        assert_eq!(a - b, State([0.5, 3.0]));
        assert_eq!(a * 2.0, State([2.0, 4.0]));
        let mut c = a;
        c.axpy(2.0, &b);
        assert_eq!(c, State([2.0, 0.0]));
    }

    #[test]
    fn finiteness() {
        assert!(State([1.0, 2.0]).is_finite());
        assert!(!State([1.0, f64::NAN]).is_finite());
        assert!(!State([f64::INFINITY]).is_finite());
    }
}
