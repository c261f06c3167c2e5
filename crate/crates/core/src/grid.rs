//! Uniform Cartesian mesh, cell-average storage with ghost layers and
//! boundary-condition fills.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SolverError};

/// Number of ghost layers on every side.
///
/// The reconstruction stencil has radius 2 and the limiter on the outermost
/// interior face looks one face further out, so reconstructed polynomials are
/// needed two layers into the ghost region. Their stencils reach layer four.
pub const N_GHOST: usize = 4;

/// Boundary treatment of one side of the domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BcKind {
    Periodic,
    SolidWall,
    Open,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Z,
}

/// Domain bounds, resolution and boundary kinds used to build a [`Grid`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub z_min: f64,
    pub z_max: f64,
    pub nx: usize,
    pub nz: usize,
    pub bc_x_lo: BcKind,
    pub bc_x_hi: BcKind,
    pub bc_z_lo: BcKind,
    pub bc_z_hi: BcKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub nx: usize,
    pub nz: usize,
    pub x_min: f64,
    pub x_max: f64,
    pub z_min: f64,
    pub z_max: f64,
    pub dx: f64,
    pub dz: f64,
    pub bc_x_lo: BcKind,
    pub bc_x_hi: BcKind,
    pub bc_z_lo: BcKind,
    pub bc_z_hi: BcKind,
}

impl Grid {
    pub fn new(spec: &GridSpec) -> Result<Self> {
        if spec.nx < 4 || spec.nz < 4 {
            return Err(SolverError::InvalidGrid(format!(
                "need at least 4 cells per direction, got {}x{}",
                spec.nx, spec.nz
            )));
        }
        let finite = [spec.x_min, spec.x_max, spec.z_min, spec.z_max]
            .iter()
            .all(|v| v.is_finite());
        if !finite || spec.x_max <= spec.x_min || spec.z_max <= spec.z_min {
            return Err(SolverError::InvalidGrid(format!(
                "bounds must be finite and ordered: [{}, {}] x [{}, {}]",
                spec.x_min, spec.x_max, spec.z_min, spec.z_max
            )));
        }
        let periodic_x = spec.bc_x_lo == BcKind::Periodic || spec.bc_x_hi == BcKind::Periodic;
        let periodic_z = spec.bc_z_lo == BcKind::Periodic || spec.bc_z_hi == BcKind::Periodic;
        if (periodic_x && spec.bc_x_lo != spec.bc_x_hi) || (periodic_z && spec.bc_z_lo != spec.bc_z_hi) {
            return Err(SolverError::InvalidGrid(
                "periodic boundaries must be paired on opposite sides".into(),
            ));
        }
        Ok(Grid {
            nx: spec.nx,
            nz: spec.nz,
            x_min: spec.x_min,
            x_max: spec.x_max,
            z_min: spec.z_min,
            z_max: spec.z_max,
            dx: (spec.x_max - spec.x_min) / spec.nx as f64,
            dz: (spec.z_max - spec.z_min) / spec.nz as f64,
            bc_x_lo: spec.bc_x_lo,
            bc_x_hi: spec.bc_x_hi,
            bc_z_lo: spec.bc_z_lo,
            bc_z_hi: spec.bc_z_hi,
        })
    }

    /// Cell-center x of column `i` (ghost indices are negative or `>= nx`).
    #[inline]
    pub fn x_center(&self, i: isize) -> f64 {
        self.x_min + (i as f64 + 0.5) * self.dx
    }

    #[inline]
    pub fn z_center(&self, j: isize) -> f64 {
        self.z_min + (j as f64 + 0.5) * self.dz
    }

    /// Physical coordinate of the face on the low side of column `i`.
    #[inline]
    pub fn x_face(&self, i: isize) -> f64 {
        self.x_min + i as f64 * self.dx
    }

    #[inline]
    pub fn z_face(&self, j: isize) -> f64 {
        self.z_min + j as f64 * self.dz
    }

    pub fn cell_area(&self) -> f64 {
        self.dx * self.dz
    }

    pub fn spacing(&self, axis: Axis) -> f64 {
        match axis {
            Axis::X => self.dx,
            Axis::Z => self.dz,
        }
    }

    /// Boundary kinds on the (low, high) sides normal to `axis`.
    pub fn bcs(&self, axis: Axis) -> (BcKind, BcKind) {
        match axis {
            Axis::X => (self.bc_x_lo, self.bc_x_hi),
            Axis::Z => (self.bc_z_lo, self.bc_z_hi),
        }
    }
}

/// Cell averages of an `N`-component state over the padded grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Field<const N: usize> {
    nx: usize,
    nz: usize,
    stride: usize,
    data: Vec<[f64; N]>,
}

impl<const N: usize> Field<N> {
    pub fn zeros(grid: &Grid) -> Self {
        let stride = grid.nx + 2 * N_GHOST;
        let rows = grid.nz + 2 * N_GHOST;
        Field { nx: grid.nx, nz: grid.nz, stride, data: vec![[0.0; N]; stride * rows] }
    }

    /// Builds a field whose interior cells are `f(i, j)`; ghosts are zero.
    pub fn from_fn(grid: &Grid, mut f: impl FnMut(usize, usize) -> [f64; N]) -> Self {
        let mut field = Self::zeros(grid);
        for j in 0..grid.nz {
            for i in 0..grid.nx {
                *field.get_mut(i as isize, j as isize) = f(i, j);
            }
        }
        field
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn nz(&self) -> usize {
        self.nz
    }

    pub fn n_comp(&self) -> usize {
        N
    }

    /// Row stride of the padded storage.
    pub fn stride(&self) -> usize {
        self.stride
    }

    #[inline]
    pub fn index(&self, i: isize, j: isize) -> usize {
        debug_assert!(i >= -(N_GHOST as isize) && i < (self.nx + N_GHOST) as isize);
        debug_assert!(j >= -(N_GHOST as isize) && j < (self.nz + N_GHOST) as isize);
        (j + N_GHOST as isize) as usize * self.stride + (i + N_GHOST as isize) as usize
    }

    #[inline]
    pub fn get(&self, i: isize, j: isize) -> &[f64; N] {
        &self.data[self.index(i, j)]
    }

    #[inline]
    pub fn get_mut(&mut self, i: isize, j: isize) -> &mut [f64; N] {
        let k = self.index(i, j);
        &mut self.data[k]
    }

    pub fn raw(&self) -> &[[f64; N]] {
        &self.data
    }

    pub fn raw_mut(&mut self) -> &mut [[f64; N]] {
        &mut self.data
    }

    /// Iterator over `(i, j, state)` for interior cells, x fastest.
    pub fn interior(&self) -> impl Iterator<Item = (usize, usize, &[f64; N])> + '_ {
        (0..self.nz).flat_map(move |j| {
            (0..self.nx).map(move |i| (i, j, self.get(i as isize, j as isize)))
        })
    }

    /// Interior sum of one component, accumulated row by row.
    pub fn interior_sum(&self, comp: usize) -> f64 {
        (0..self.nz)
            .map(|j| {
                (0..self.nx)
                    .map(|i| self.get(i as isize, j as isize)[comp])
                    .sum::<f64>()
            })
            .sum()
    }

    /// `self = a*self + b*other + c*rhs` on interior cells.
    pub fn combine(&mut self, a: f64, other: &Field<N>, b: f64, rhs: &Field<N>, c: f64) {
        for j in 0..self.nz as isize {
            let start = self.index(0, j);
            let end = start + self.nx;
            let dst = &mut self.data[start..end];
            let o = &other.data[start..end];
            let r = &rhs.data[start..end];
            for ((d, o), r) in dst.iter_mut().zip(o).zip(r) {
                for k in 0..N {
                    d[k] = a * d[k] + b * o[k] + c * r[k];
                }
            }
        }
    }
}

/// Per-model hooks needed to fill ghost cells.
pub trait GhostFill<const N: usize> {
    /// Mirror image of `q` across a wall normal to `axis`.
    fn reflect(&self, q: &[f64; N], axis: Axis) -> [f64; N];

    /// Horizontally uniform background state of padded row `j`, if the model
    /// carries one. Solid walls normal to z then mirror the deviation from
    /// this background rather than the state itself.
    fn background_row(&self, _j: isize) -> Option<[f64; N]> {
        None
    }
}

/// Fills every ghost layer. x sides are filled over interior rows first, then
/// z sides over the full padded width so the corner blocks are consistent.
pub fn apply_bc<const N: usize, M: GhostFill<N> + ?Sized>(field: &mut Field<N>, grid: &Grid, model: &M) {
    let nx = grid.nx as isize;
    let nz = grid.nz as isize;
    let g = N_GHOST as isize;

    for j in 0..nz {
        for k in 1..=g {
            let lo = match grid.bc_x_lo {
                BcKind::Periodic => *field.get(nx - k, j),
                BcKind::SolidWall => model.reflect(field.get(k - 1, j), Axis::X),
                BcKind::Open => *field.get(0, j),
            };
            let hi = match grid.bc_x_hi {
                BcKind::Periodic => *field.get(k - 1, j),
                BcKind::SolidWall => model.reflect(field.get(nx - k, j), Axis::X),
                BcKind::Open => *field.get(nx - 1, j),
            };
            *field.get_mut(-k, j) = lo;
            *field.get_mut(nx - 1 + k, j) = hi;
        }
    }

    for i in -g..nx + g {
        for k in 1..=g {
            let lo = match grid.bc_z_lo {
                BcKind::Periodic => *field.get(i, nz - k),
                BcKind::SolidWall => wall_ghost(field.get(i, k - 1), k - 1, -k, model),
                BcKind::Open => *field.get(i, 0),
            };
            let hi = match grid.bc_z_hi {
                BcKind::Periodic => *field.get(i, k - 1),
                BcKind::SolidWall => wall_ghost(field.get(i, nz - k), nz - k, nz - 1 + k, model),
                BcKind::Open => *field.get(i, nz - 1),
            };
            *field.get_mut(i, -k) = lo;
            *field.get_mut(i, nz - 1 + k) = hi;
        }
    }
}

fn wall_ghost<const N: usize, M: GhostFill<N> + ?Sized>(
    q: &[f64; N],
    j_src: isize,
    j_dst: isize,
    model: &M,
) -> [f64; N] {
    match (model.background_row(j_src), model.background_row(j_dst)) {
        (Some(bg_src), Some(bg_dst)) => {
            let mut dev = [0.0; N];
            for k in 0..N {
                dev[k] = q[k] - bg_src[k];
            }
            let dev = model.reflect(&dev, Axis::Z);
            let mut out = [0.0; N];
            for k in 0..N {
                out[k] = bg_dst[k] + dev[k];
            }
            out
        }
        _ => model.reflect(q, Axis::Z),
    }
}
