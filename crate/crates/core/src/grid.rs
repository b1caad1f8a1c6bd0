//! Uniform Cartesian meshes with ghost layers and boundary conditions.
//!
//! Values are point values at cell centers. Interior cells are indexed
//! `0..nx` (and `0..ny`); ghost cells use negative indices or indices past
//! the last interior cell. One-dimensional meshes have `ny == 1` and no
//! ghost rows.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mesh {
    pub nx: usize,
    pub ny: usize,
    pub dx: f64,
    pub dy: f64,
    pub x0: f64,
    pub y0: f64,
    /// Ghost width along x.
    pub gx: usize,
    /// Ghost width along y; zero for 1D meshes.
    pub gy: usize,
}

impl Mesh {
    pub fn new_1d(nx: usize, x_range: (f64, f64), ghost: usize) -> Result<Self> {
        let mesh = Mesh {
            nx,
            ny: 1,
            dx: (x_range.1 - x_range.0) / nx as f64,
            dy: 1.0,
            x0: x_range.0,
            y0: -0.5,
            gx: ghost,
            gy: 0,
        };
        mesh.validate()?;
        Ok(mesh)
    }

    pub fn new_2d(
        nx: usize,
        ny: usize,
        x_range: (f64, f64),
        y_range: (f64, f64),
        ghost: usize,
    ) -> Result<Self> {
        let mesh = Mesh {
            nx,
            ny,
            dx: (x_range.1 - x_range.0) / nx as f64,
            dy: (y_range.1 - y_range.0) / ny as f64,
            x0: x_range.0,
            y0: y_range.0,
            gx: ghost,
            gy: ghost,
        };
        mesh.validate()?;
        Ok(mesh)
    }

    fn validate(&self) -> Result<()> {
        if self.nx == 0 || self.ny == 0 {
            return Err(Error::config("mesh needs at least one cell per direction"));
        }
        if !(self.dx > 0.0 && self.dy > 0.0) {
            return Err(Error::config("mesh spacing must be positive"));
        }
        if self.gx == 0 {
            return Err(Error::config("ghost width must be at least 1"));
        }
        Ok(())
    }

    pub fn is_1d(&self) -> bool {
        self.gy == 0
    }

    pub fn cells(&self) -> usize {
        self.nx * self.ny
    }

    pub fn cell_area(&self) -> f64 {
        self.dx * self.dy
    }

    /// Row stride of the ghosted storage.
    pub fn stride(&self) -> usize {
        self.nx + 2 * self.gx
    }

    pub fn storage_rows(&self) -> usize {
        self.ny + 2 * self.gy
    }

    /// Storage offset of cell `(i, j)`; ghost cells allowed.
    #[inline]
    pub fn idx(&self, i: isize, j: isize) -> usize {
        debug_assert!(i >= -(self.gx as isize) && i < (self.nx + self.gx) as isize);
        debug_assert!(j >= -(self.gy as isize) && j < (self.ny + self.gy) as isize);
        (j + self.gy as isize) as usize * self.stride() + (i + self.gx as isize) as usize
    }

    /// Cell-center coordinates, `(x0 + (i + 1/2) dx, y0 + (j + 1/2) dy)`.
    pub fn cell_center(&self, i: isize, j: isize) -> (f64, f64) {
        (
            self.x0 + (i as f64 + 0.5) * self.dx,
            self.y0 + (j as f64 + 0.5) * self.dy,
        )
    }

    pub fn x_range(&self) -> (f64, f64) {
        (self.x0, self.x0 + self.nx as f64 * self.dx)
    }

    pub fn y_range(&self) -> (f64, f64) {
        (self.y0, self.y0 + self.ny as f64 * self.dy)
    }
}

/// Cell-centered field with ghost layers, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Field<S> {
    pub mesh: Mesh,
    pub data: Vec<S>,
}

impl<S: Copy> Field<S> {
    pub fn filled(mesh: Mesh, value: S) -> Self {
        Field {
            mesh,
            data: vec![value; mesh.stride() * mesh.storage_rows()],
        }
    }

    /// Fill the interior from a function of the cell center; ghosts get the
    /// value of the first interior cell until `fill_ghosts` runs.
    pub fn from_fn(mesh: Mesh, mut f: impl FnMut(f64, f64) -> S) -> Self {
        let first = {
            let (x, y) = mesh.cell_center(0, 0);
            f(x, y)
        };
        let mut field = Field::filled(mesh, first);
        for j in 0..mesh.ny as isize {
            for i in 0..mesh.nx as isize {
                let (x, y) = mesh.cell_center(i, j);
                field.data[mesh.idx(i, j)] = f(x, y);
            }
        }
        field
    }

    #[inline]
    pub fn get(&self, i: isize, j: isize) -> S {
        self.data[self.mesh.idx(i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: isize, j: isize, v: S) {
        let k = self.mesh.idx(i, j);
        self.data[k] = v;
    }

    /// Interior values in row-major order (j outer, i inner).
    pub fn interior(&self) -> impl Iterator<Item = S> + '_ {
        let m = self.mesh;
        (0..m.ny as isize).flat_map(move |j| (0..m.nx as isize).map(move |i| self.get(i, j)))
    }
}

/// Boundary treatment of one side of the domain.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BoundaryKind<S> {
    Periodic,
    /// Outflow: ghosts copy the nearest interior value.
    ZeroNeumann,
    /// Prescribed state on ghosts whose along-side coordinate lies in
    /// `[lo, hi]`; zero-Neumann elsewhere on the side.
    Inflow { state: S, lo: f64, hi: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryCondition<S> {
    pub x_lo: BoundaryKind<S>,
    pub x_hi: BoundaryKind<S>,
    pub y_lo: BoundaryKind<S>,
    pub y_hi: BoundaryKind<S>,
}

impl<S: Copy> BoundaryCondition<S> {
    pub fn periodic() -> Self {
        Self::uniform(BoundaryKind::Periodic)
    }

    pub fn outflow() -> Self {
        Self::uniform(BoundaryKind::ZeroNeumann)
    }

    fn uniform(kind: BoundaryKind<S>) -> Self {
        BoundaryCondition {
            x_lo: kind,
            x_hi: kind,
            y_lo: kind,
            y_hi: kind,
        }
    }

    pub fn periodic_x(&self) -> bool {
        matches!(self.x_lo, BoundaryKind::Periodic)
    }

    pub fn periodic_y(&self) -> bool {
        matches!(self.y_lo, BoundaryKind::Periodic)
    }

    pub fn validate(&self, mesh: &Mesh) -> Result<()> {
        let pair = |a: &BoundaryKind<S>, b: &BoundaryKind<S>, axis: &str| {
            let pa = matches!(a, BoundaryKind::Periodic);
            let pb = matches!(b, BoundaryKind::Periodic);
            if pa != pb {
                Err(Error::config(format!(
                    "periodic boundary on only one {axis} side"
                )))
            } else {
                Ok(())
            }
        };
        pair(&self.x_lo, &self.x_hi, "x")?;
        if !mesh.is_1d() {
            pair(&self.y_lo, &self.y_hi, "y")?;
        }
        let check_extent = |k: &BoundaryKind<S>, range: (f64, f64)| match k {
            BoundaryKind::Inflow { lo, hi, .. } => {
                if lo > hi || *lo < range.0 || *hi > range.1 {
                    Err(Error::config(format!(
                        "inflow extent [{lo}, {hi}] outside side range [{}, {}]",
                        range.0, range.1
                    )))
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        };
        check_extent(&self.x_lo, mesh.y_range())?;
        check_extent(&self.x_hi, mesh.y_range())?;
        if !mesh.is_1d() {
            check_extent(&self.y_lo, mesh.x_range())?;
            check_extent(&self.y_hi, mesh.x_range())?;
        }
        Ok(())
    }
}

/// Populate every ghost cell of `field`.
///
/// The x sides are filled over interior rows first, then the y sides over
/// the full ghosted width, so corner ghosts come from the y sweep.
pub fn fill_ghosts<S: Copy>(field: &mut Field<S>, bc: &BoundaryCondition<S>) -> Result<()> {
    bc.validate(&field.mesh)?;
    let m = field.mesh;
    let (nx, ny) = (m.nx as isize, m.ny as isize);
    let (gx, gy) = (m.gx as isize, m.gy as isize);

    for j in 0..ny {
        let (_, y) = m.cell_center(0, j);
        for g in 1..=gx {
            let lo = match bc.x_lo {
                BoundaryKind::Periodic => field.get((-g).rem_euclid(nx), j),
                BoundaryKind::ZeroNeumann => field.get(0, j),
                BoundaryKind::Inflow { state, lo, hi } => {
                    if y >= lo && y <= hi {
                        state
                    } else {
                        field.get(0, j)
                    }
                }
            };
            field.set(-g, j, lo);
            let hi_v = match bc.x_hi {
                BoundaryKind::Periodic => field.get((nx - 1 + g).rem_euclid(nx), j),
                BoundaryKind::ZeroNeumann => field.get(nx - 1, j),
                BoundaryKind::Inflow { state, lo, hi } => {
                    if y >= lo && y <= hi {
                        state
                    } else {
                        field.get(nx - 1, j)
                    }
                }
            };
            field.set(nx - 1 + g, j, hi_v);
        }
    }

    for i in -gx..nx + gx {
        let (x, _) = m.cell_center(i, 0);
        for g in 1..=gy {
            let lo = match bc.y_lo {
                BoundaryKind::Periodic => field.get(i, (-g).rem_euclid(ny)),
                BoundaryKind::ZeroNeumann => field.get(i, 0),
                BoundaryKind::Inflow { state, lo, hi } => {
                    if x >= lo && x <= hi {
                        state
                    } else {
                        field.get(i, 0)
                    }
                }
            };
            field.set(i, -g, lo);
            let hi_v = match bc.y_hi {
                BoundaryKind::Periodic => field.get(i, (ny - 1 + g).rem_euclid(ny)),
                BoundaryKind::ZeroNeumann => field.get(i, ny - 1),
                BoundaryKind::Inflow { state, lo, hi } => {
                    if x >= lo && x <= hi {
                        state
                    } else {
                        field.get(i, ny - 1)
                    }
                }
            };
            field.set(i, ny - 1 + g, hi_v);
        }
    }
    Ok(())
}
