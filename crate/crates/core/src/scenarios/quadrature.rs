//! Cell averages by tensor Gauss rules.

use crate::grid::Grid;

/// Three-point Gauss-Legendre nodes on `[-1/2, 1/2]` and their weights.
pub const GAUSS3_NODES: [f64; 3] = [-0.387_298_334_620_741_7, 0.0, 0.387_298_334_620_741_7];
pub const GAUSS3_WEIGHTS: [f64; 3] = [5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0];

/// `Σ w_k g(node_k)` with the outer pair summed first, so that a mirrored
/// integrand gives a bitwise mirrored result.
#[inline]
fn gauss3<const N: usize>(g: impl Fn(f64) -> [f64; N]) -> [f64; N] {
    let (lo, mid, hi) = (g(GAUSS3_NODES[0]), g(0.0), g(GAUSS3_NODES[2]));
    let mut out = [0.0; N];
    for k in 0..N {
        out[k] = GAUSS3_WEIGHTS[0] * (lo[k] + hi[k]) + GAUSS3_WEIGHTS[1] * mid[k];
    }
    out
}

/// Average of `f` over cell `(i, j)` with the 3x3 Gauss rule. Ghost indices
/// are allowed.
pub fn cell_average<const N: usize>(grid: &Grid, i: isize, j: isize, f: impl Fn(f64, f64) -> [f64; N]) -> [f64; N] {
    let (xc, zc) = (grid.x_center(i), grid.z_center(j));
    gauss3(|a| {
        let z = zc + a * grid.dz;
        gauss3(|b| f(xc + b * grid.dx, z))
    })
}

/// Same rule in z only, for horizontally uniform profiles.
pub fn row_average<const N: usize>(grid: &Grid, j: isize, f: impl Fn(f64) -> [f64; N]) -> [f64; N] {
    let zc = grid.z_center(j);
    gauss3(|a| f(zc + a * grid.dz))
}
