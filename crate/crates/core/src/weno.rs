//! Quadratic WENO reconstruction in the Legendre basis.
//!
//! Every cell carries one polynomial in local coordinates `[-1/2, 1/2]^2`:
//!
//! ```text
//! Q(x, z) = Q0 + Qx P1(x) + Qxx P2(x) + Qz P1(z) + Qzz P2(z) + Qxz P1(x) P1(z)
//! P1(x) = x,  P2(x) = x^2 - 1/12
//! ```
//!
//! The 1D coefficients come from a nonlinear blend of three three-cell
//! stencils along each axis; the mixed coefficient blends four corner
//! candidates. All sums are written in mirror-symmetric order so that
//! reflecting the input data reflects the output bit for bit.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SolverError};
use crate::grid::{Field, Grid, N_GHOST};

/// Number of ghost layers (per side) in which polynomials are built.
pub const RECON_GHOST: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WenoParams {
    pub epsilon: f64,
    pub r_power: i32,
    /// Linear weight of the two one-sided stencils.
    pub lambda_side: f64,
    /// Linear weight of the central stencil.
    pub lambda_center: f64,
}

impl Default for WenoParams {
    fn default() -> Self {
        WenoParams { epsilon: 1e-12, r_power: 5, lambda_side: 1.0, lambda_center: 100.0 }
    }
}

impl WenoParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0) || self.r_power < 1 {
            return Err(SolverError::InvalidConfig(format!(
                "WENO needs epsilon > 0 and r >= 1 (got {}, {})",
                self.epsilon, self.r_power
            )));
        }
        if !(self.lambda_side > 0.0) || self.lambda_center < self.lambda_side {
            return Err(SolverError::InvalidConfig(format!(
                "WENO linear weights must satisfy center >= side > 0 (got {}, {})",
                self.lambda_center, self.lambda_side
            )));
        }
        Ok(())
    }
}

/// Reconstruction coefficients of one component of one cell.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CellPoly {
    pub q0: f64,
    pub qx: f64,
    pub qxx: f64,
    pub qz: f64,
    pub qzz: f64,
    pub qxz: f64,
}

#[inline]
pub fn legendre_p1(x: f64) -> f64 {
    x
}

#[inline]
pub fn legendre_p2(x: f64) -> f64 {
    x * x - 1.0 / 12.0
}

impl CellPoly {
    pub fn constant(q0: f64) -> Self {
        CellPoly { q0, ..Default::default() }
    }

    /// Value at local coordinates `(x, z)`.
    #[inline]
    pub fn eval(&self, x: f64, z: f64) -> f64 {
        self.q0
            + self.qx * legendre_p1(x)
            + self.qxx * legendre_p2(x)
            + self.qz * legendre_p1(z)
            + self.qzz * legendre_p2(z)
            + self.qxz * (x * z)
    }

    /// Second derivatives in physical units, `(d2/dx2, d2/dz2)`.
    #[inline]
    pub fn second_derivs(&self, dx: f64, dz: f64) -> (f64, f64) {
        (2.0 * self.qxx / (dx * dx), 2.0 * self.qzz / (dz * dz))
    }
}

/// Evaluates every component of a cell polynomial.
#[inline]
pub fn eval_poly<const N: usize>(p: &[CellPoly; N], x: f64, z: f64) -> [f64; N] {
    let mut out = [0.0; N];
    for k in 0..N {
        out[k] = p[k].eval(x, z);
    }
    out
}

/// Candidate `(Qx, Qxx)` pairs of the left, central and right stencils for
/// the averages `q = [Q-2, Q-1, Q0, Q1, Q2]`.
#[inline]
pub fn stencil_coeffs_1d(q: &[f64; 5]) -> [(f64, f64); 3] {
    let [qm2, qm1, q0, q1, q2] = *q;
    let left = (((qm2 - 4.0 * qm1) + 3.0 * q0) * 0.5, ((qm2 + q0) - 2.0 * qm1) * 0.5);
    let center = ((q1 - qm1) * 0.5, ((qm1 + q1) - 2.0 * q0) * 0.5);
    let right = (-(((q2 - 4.0 * q1) + 3.0 * q0) * 0.5), ((q2 + q0) - 2.0 * q1) * 0.5);
    [left, center, right]
}

#[inline]
pub fn smoothness_1d(qx: f64, qxx: f64) -> f64 {
    qx * qx + (13.0 / 3.0) * qxx * qxx
}

/// `x.powi(n)` with the default exponent unrolled (same rounding).
#[inline]
fn ipow(x: f64, n: i32) -> f64 {
    if n == 5 {
        let x2 = x * x;
        x * (x2 * x2)
    } else {
        x.powi(n)
    }
}

/// Nonlinear weights for the left/central/right smoothness indicators.
#[inline]
pub fn weno_weights(is: [f64; 3], params: &WenoParams) -> [f64; 3] {
    let a0 = params.lambda_side / ipow(params.epsilon + is[0], params.r_power);
    let a1 = params.lambda_center / ipow(params.epsilon + is[1], params.r_power);
    let a2 = params.lambda_side / ipow(params.epsilon + is[2], params.r_power);
    normalize3(a0, a1, a2)
}

#[inline]
fn normalize3(a0: f64, a1: f64, a2: f64) -> [f64; 3] {
    let sum = (a0 + a2) + a1;
    if sum.is_finite() && sum > 0.0 {
        [a0 / sum, a1 / sum, a2 / sum]
    } else {
        // Overflow of every alpha: fall back to the ordering of the indicators.
        let m = a0.max(a1).max(a2);
        let hits = [a0 == m, a1 == m, a2 == m];
        let n = hits.iter().filter(|h| **h).count() as f64;
        [hits[0] as u8 as f64 / n, hits[1] as u8 as f64 / n, hits[2] as u8 as f64 / n]
    }
}

/// Blended `(Qd, Qdd)` along one direction.
#[inline]
pub fn reconstruct_1d(q: &[f64; 5], params: &WenoParams) -> (f64, f64) {
    let c = stencil_coeffs_1d(q);
    let is = [
        smoothness_1d(c[0].0, c[0].1),
        smoothness_1d(c[1].0, c[1].1),
        smoothness_1d(c[2].0, c[2].1),
    ];
    let w = weno_weights(is, params);
    let d = (w[0] * c[0].0 + w[2] * c[2].0) + w[1] * c[1].0;
    let dd = (w[0] * c[0].1 + w[2] * c[2].1) + w[1] * c[1].1;
    (d, dd)
}

/// Mixed coefficient from the 3x3 block of averages around the cell,
/// `nb[di + 1][dj + 1]` holding the cell offset `(di, dj)`.
#[inline]
pub fn cross_term(nb: &[[f64; 3]; 3], qx: f64, qz: f64, qxx: f64, qzz: f64, params: &WenoParams) -> f64 {
    let q00 = nb[1][1];
    let curv = qxx + qzz;
    let candidate = |sx: f64, sz: f64, corner: f64| {
        sx * sz * ((((corner - q00) - sx * qx) - sz * qz) - curv)
    };
    let c1 = candidate(1.0, 1.0, nb[2][2]);
    let c2 = candidate(1.0, -1.0, nb[2][0]);
    let c3 = candidate(-1.0, 1.0, nb[0][2]);
    let c4 = candidate(-1.0, -1.0, nb[0][0]);
    let base = 4.0 * qxx * qxx + 4.0 * qzz * qzz;
    let alpha = |c: f64| 1.0 / ipow(params.epsilon + (base + c * c), params.r_power);
    let (a1, a2, a3, a4) = (alpha(c1), alpha(c2), alpha(c3), alpha(c4));
    let sum = (a1 + a2) + (a3 + a4);
    if sum.is_finite() && sum > 0.0 {
        ((a1 * c1 + a2 * c2) + (a3 * c3 + a4 * c4)) / sum
    } else {
        // Identical indicators everywhere overflowed: plain average.
        ((c1 + c2) + (c3 + c4)) * 0.25
    }
}

/// Reconstructs one component at padded index `k` of `data` (row stride `s`).
#[inline]
fn reconstruct_component<const N: usize>(
    data: &[[f64; N]],
    k: usize,
    s: usize,
    comp: usize,
    params: &WenoParams,
) -> CellPoly {
    let at = |o: isize| data[(k as isize + o) as usize][comp];
    let si = s as isize;
    let row = [at(-2), at(-1), at(0), at(1), at(2)];
    let col = [at(-2 * si), at(-si), at(0), at(si), at(2 * si)];
    let (qx, qxx) = reconstruct_1d(&row, params);
    let (qz, qzz) = reconstruct_1d(&col, params);
    let nb = [
        [at(-1 - si), at(-1), at(-1 + si)],
        [at(-si), at(0), at(si)],
        [at(1 - si), at(1), at(1 + si)],
    ];
    let qxz = cross_term(&nb, qx, qz, qxx, qzz, params);
    CellPoly { q0: row[2], qx, qxx, qz, qzz, qxz }
}

/// Polynomials on the padded index space of a [`Field`]. Entries outside the
/// reconstruction region (interior plus [`RECON_GHOST`] layers) are zero.
#[derive(Debug, Clone)]
pub struct PolyField<const N: usize> {
    nx: usize,
    nz: usize,
    stride: usize,
    data: Vec<[CellPoly; N]>,
}

impl<const N: usize> PolyField<N> {
    pub fn new(grid: &Grid) -> Self {
        let stride = grid.nx + 2 * N_GHOST;
        let rows = grid.nz + 2 * N_GHOST;
        PolyField {
            nx: grid.nx,
            nz: grid.nz,
            stride,
            data: vec![[CellPoly::default(); N]; stride * rows],
        }
    }

    #[inline]
    pub fn get(&self, i: isize, j: isize) -> &[CellPoly; N] {
        debug_assert!(i >= -(RECON_GHOST as isize) && i < (self.nx + RECON_GHOST) as isize);
        debug_assert!(j >= -(RECON_GHOST as isize) && j < (self.nz + RECON_GHOST) as isize);
        &self.data[(j + N_GHOST as isize) as usize * self.stride + (i + N_GHOST as isize) as usize]
    }
}

/// Builds polynomials for the interior and the first [`RECON_GHOST`] ghost
/// layers. Ghost cells must already be filled.
pub fn reconstruct_field<const N: usize>(
    field: &Field<N>,
    grid: &Grid,
    params: &WenoParams,
    out: &mut PolyField<N>,
) -> Result<()> {
    let g = N_GHOST as isize;
    for (k, q) in field.raw().iter().enumerate() {
        if q.iter().any(|v| !v.is_finite()) {
            let s = field.stride() as isize;
            let (i, j) = (k as isize % s - g, k as isize / s - g);
            return Err(SolverError::state(i, j, "non-finite cell average entering reconstruction"));
        }
    }
    let s = field.stride();
    let data = field.raw();
    let r = RECON_GHOST as isize;
    let (i_lo, i_hi) = (-r, grid.nx as isize + r);
    let (j_lo, j_hi) = (-r, grid.nz as isize + r);
    out.data
        .par_chunks_mut(s)
        .enumerate()
        .for_each(|(row, polys)| {
            let j = row as isize - g;
            if j < j_lo || j >= j_hi {
                return;
            }
            for i in i_lo..i_hi {
                let k = (j + g) as usize * s + (i + g) as usize;
                let cell = &mut polys[(i + g) as usize];
                for c in 0..N {
                    cell[c] = reconstruct_component(data, k, s, c, params);
                }
            }
        });
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{apply_bc, Axis, BcKind, GhostFill, GridSpec};
    use proptest::prelude::*;

    const P: WenoParams = WenoParams { epsilon: 1e-12, r_power: 5, lambda_side: 1.0, lambda_center: 100.0 };

    // Exact average of x^2 over the unit cell centered at c.
    fn avg_x2(c: f64) -> f64 {
        c * c + 1.0 / 12.0
    }

    #[test]
    fn legendre_values() {
        assert_eq!(legendre_p1(0.0), 0.0);
        assert!((legendre_p2(0.0) + 1.0 / 12.0).abs() < 1e-16);
        assert!((legendre_p2(0.5) - 1.0 / 6.0).abs() < 1e-16);
        // ∫ P2 over [-1/2, 1/2] = [x^3/3 - x/12] = 1/12 - 1/12
        let antideriv = |x: f64| x * x * x / 3.0 - x / 12.0;
        assert!((antideriv(0.5) - antideriv(-0.5)).abs() < 1e-16);
    }

    #[test]
    fn stencils_on_simple_data() {
        for (qx, qxx) in stencil_coeffs_1d(&[3.0; 5]) {
            assert_eq!((qx, qxx), (0.0, 0.0));
        }
        for (qx, qxx) in stencil_coeffs_1d(&[-2.0, -1.0, 0.0, 1.0, 2.0]) {
            assert_eq!((qx, qxx), (1.0, 0.0));
        }
    }

    #[test]
    fn stencils_reproduce_quadratic_averages() {
        let q = [-2.0, -1.0, 0.0, 1.0, 2.0].map(avg_x2);
        let c = stencil_coeffs_1d(&q);
        // Average of the candidate over cell offset m: Q0 + Qx m + Qxx m^2.
        let stencils: [[i32; 3]; 3] = [[-2, -1, 0], [-1, 0, 1], [0, 1, 2]];
        for (s, (qx, qxx)) in stencils.iter().zip(c) {
            for &m in s {
                let m = m as f64;
                let avg = q[2] + qx * m + qxx * m * m;
                assert!((avg - avg_x2(m)).abs() < 1e-14, "stencil {s:?} cell {m}");
            }
        }
    }

    #[test]
    fn smoothness_examples() {
        assert_eq!(smoothness_1d(0.0, 0.0), 0.0);
        assert_eq!(smoothness_1d(1.0, 0.0), 1.0);
        assert!((smoothness_1d(0.0, 1.0) - 13.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn weights_examples() {
        let w = weno_weights([0.0; 3], &P);
        let expect = [1.0 / 102.0, 100.0 / 102.0, 1.0 / 102.0];
        for k in 0..3 {
            assert!((w[k] - expect[k]).abs() < 1e-15);
        }
        let w = weno_weights([0.0, 1e6, 1e6], &P);
        assert!(w[0] > 1.0 - 1e-12 && w[1] < 1e-12 && w[2] < 1e-12);
    }

    #[test]
    fn weights_survive_tiny_epsilon() {
        let p = WenoParams { epsilon: 1e-300, ..P };
        let w = weno_weights([0.0, 0.0, 1.0], &p);
        assert!(w.iter().all(|v| v.is_finite()));
        assert!(((w[0] + w[1] + w[2]) - 1.0).abs() < 1e-15);
        assert!(w[2] == 0.0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]
        #[test]
        fn weights_normalized(a in 0.0f64..1e3, b in 0.0f64..1e3, c in 0.0f64..1e3) {
            let w = weno_weights([a, b, c], &P);
            prop_assert!(w.iter().all(|v| *v >= 0.0));
            prop_assert!(((w[0] + w[1]) + w[2] - 1.0).abs() <= 1e-14);
        }
    }

    #[test]
    fn reconstruct_1d_examples() {
        assert_eq!(reconstruct_1d(&[2.5; 5], &P), (0.0, 0.0));
        // Quadratic data: every candidate is exact, so any blend is exact.
        let q = [-2.0, -1.0, 0.0, 1.0, 2.0].map(|c: f64| {
            let (a, b, d) = (0.3, -1.2, 0.7);
            a + b * c + d * avg_x2(c)
        });
        let (d, dd) = reconstruct_1d(&q, &P);
        assert!((d + 1.2).abs() < 1e-13 && (dd - 0.7).abs() < 1e-13);
    }

    #[test]
    fn step_data_right_face_value() {
        // The flat left stencil takes essentially all the weight.
        let q = [0.0, 0.0, 0.0, 1.0, 1.0];
        let (d, dd) = reconstruct_1d(&q, &P);
        let face = q[2] + 0.5 * d + dd * legendre_p2(0.5);
        assert!(face.abs() < 1e-15, "{face:e}");
    }

    #[test]
    fn cross_term_examples() {
        let flat = [[1.5; 3]; 3];
        assert_eq!(cross_term(&flat, 0.0, 0.0, 0.0, 0.0, &P), 0.0);

        // Averages of x*z on unit cells are the center products (separable).
        let xz = |di: f64, dj: f64| di * dj;
        let nb = [-1.0, 0.0, 1.0].map(|di| [-1.0, 0.0, 1.0].map(|dj| xz(di, dj)));
        assert!((cross_term(&nb, 0.0, 0.0, 0.0, 0.0, &P) - 1.0).abs() < 1e-15);

        // x^2 + z^2: Qxx = Qzz = 1, no mixed part.
        let nb = [-1.0, 0.0, 1.0].map(|di: f64| [-1.0, 0.0, 1.0].map(|dj: f64| avg_x2(di) + avg_x2(dj)));
        let qxz = cross_term(&nb, 0.0, 0.0, 1.0, 1.0, &P);
        assert!(qxz.abs() < 1e-14, "{qxz}");
    }

    #[test]
    fn poly_eval_and_derivatives() {
        let p = CellPoly::constant(4.0);
        assert_eq!(p.eval(0.0, 0.0), 4.0);
        let p = CellPoly { q0: 1.0, qx: 1.0, qzz: 0.6, ..Default::default() };
        assert!((p.eval(0.5, 0.0) - (1.0 + 0.5 - 0.6 / 12.0)).abs() < 1e-15);
        let p = CellPoly { qxx: 1.0, ..Default::default() };
        assert_eq!(p.second_derivs(0.5, 1.0), (8.0, 0.0));
    }

    proptest! {
        #[test]
        fn poly_mean_is_q0(c in proptest::array::uniform6(-10.0f64..10.0)) {
            let p = CellPoly { q0: c[0], qx: c[1], qxx: c[2], qz: c[3], qzz: c[4], qxz: c[5] };
            // 3-point Gauss-Legendre is exact for the quadratic.
            let g = [(-(0.6f64).sqrt() / 2.0, 5.0 / 18.0), (0.0, 8.0 / 18.0), ((0.6f64).sqrt() / 2.0, 5.0 / 18.0)];
            let mut mean = 0.0;
            for (x, wx) in g {
                for (z, wz) in g {
                    mean += wx * wz * p.eval(x, z);
                }
            }
            prop_assert!((mean - p.q0).abs() < 1e-13);
        }
    }

    struct Scalar;
    impl GhostFill<1> for Scalar {
        fn reflect(&self, q: &[f64; 1], _: Axis) -> [f64; 1] {
            *q
        }
    }

    fn grid(n: usize, bc: BcKind) -> Grid {
        Grid::new(&GridSpec {
            x_min: 0.0,
            x_max: n as f64,
            z_min: 0.0,
            z_max: n as f64,
            nx: n,
            nz: n,
            bc_x_lo: bc,
            bc_x_hi: bc,
            bc_z_lo: bc,
            bc_z_hi: bc,
        })
        .unwrap()
    }

    #[test]
    fn quadratic_exactness_2d() {
        // a + bx + cz + dx^2 + ez^2 + fxz on unit cells; exact averages are
        // polynomial in the center coordinates and filled directly into ghosts.
        let (a, b, c, d, e, f) = (0.7, -0.3, 1.1, 0.25, -0.4, 0.6);
        let avg = |x: f64, z: f64| a + b * x + c * z + d * avg_x2(x) + e * avg_x2(z) + f * x * z;
        let g = grid(8, BcKind::Open);
        let mut field = Field::<1>::zeros(&g);
        let gh = N_GHOST as isize;
        for j in -gh..8 + gh {
            for i in -gh..8 + gh {
                *field.get_mut(i, j) = [avg(i as f64 + 0.5, j as f64 + 0.5)];
            }
        }
        let mut polys = PolyField::new(&g);
        reconstruct_field(&field, &g, &P, &mut polys).unwrap();
        for j in -2..10isize {
            for i in -2..10isize {
                let (xc, zc) = (i as f64 + 0.5, j as f64 + 0.5);
                let p = polys.get(i, j)[0];
                assert!((p.qx - (b + 2.0 * d * xc + f * zc)).abs() < 1e-11);
                assert!((p.qz - (c + 2.0 * e * zc + f * xc)).abs() < 1e-11);
                assert!((p.qxx - d).abs() < 1e-11 && (p.qzz - e).abs() < 1e-11);
                assert!((p.qxz - f).abs() < 1e-11, "qxz {} at {i},{j}", p.qxz);
                let exact = |x: f64, z: f64| a + b * x + c * z + d * x * x + e * z * z + f * x * z;
                for (lx, lz) in [(0.0, 0.0), (0.5, 0.0), (-0.5, 0.3), (0.2, -0.5)] {
                    assert!((p.eval(lx, lz) - exact(xc + lx, zc + lz)).abs() < 1e-11);
                }
            }
        }
    }

    #[test]
    fn constant_field_gives_constant_polys() {
        let g = grid(6, BcKind::Periodic);
        let mut field = Field::<1>::from_fn(&g, |_, _| [3.25]);
        apply_bc(&mut field, &g, &Scalar);
        let mut polys = PolyField::new(&g);
        reconstruct_field(&field, &g, &P, &mut polys).unwrap();
        for j in -2..8 {
            for i in -2..8 {
                assert_eq!(polys.get(i, j)[0], CellPoly::constant(3.25));
            }
        }
    }

    #[test]
    fn sharp_front_stays_finite() {
        let g = grid(20, BcKind::Open);
        let mut field = Field::<1>::from_fn(&g, |i, j| [((j as f64 - 9.7 + 0.3 * i as f64) / 1e-6).tanh()]);
        apply_bc(&mut field, &g, &Scalar);
        let mut polys = PolyField::new(&g);
        reconstruct_field(&field, &g, &P, &mut polys).unwrap();
        for j in -2..22 {
            for i in -2..22 {
                let p = polys.get(i, j)[0];
                assert!([p.q0, p.qx, p.qxx, p.qz, p.qzz, p.qxz].iter().all(|v| v.is_finite()));
            }
        }
    }

    #[test]
    fn non_finite_input_names_cell() {
        let g = grid(6, BcKind::Periodic);
        let mut field = Field::<1>::from_fn(&g, |_, _| [1.0]);
        apply_bc(&mut field, &g, &Scalar);
        field.get_mut(2, 3)[0] = f64::NAN;
        let mut polys = PolyField::new(&g);
        let err = reconstruct_field(&field, &g, &P, &mut polys).unwrap_err();
        assert_eq!(err, SolverError::state(2, 3, "non-finite cell average entering reconstruction"));
    }

    #[test]
    fn mirror_in_x_is_exact() {
        let g = grid(9, BcKind::Open);
        let val = |i: isize, j: isize| ((i * 7 + j * 3) as f64 * 0.37).sin() + 0.01 * (i * i) as f64;
        let mut field = Field::<1>::zeros(&g);
        let mut mirror = Field::<1>::zeros(&g);
        let gh = N_GHOST as isize;
        for j in -gh..9 + gh {
            for i in -gh..9 + gh {
                *field.get_mut(i, j) = [val(i, j)];
                *mirror.get_mut(8 - i, j) = [val(i, j)];
            }
        }
        let mut pa = PolyField::new(&g);
        let mut pb = PolyField::new(&g);
        reconstruct_field(&field, &g, &P, &mut pa).unwrap();
        reconstruct_field(&mirror, &g, &P, &mut pb).unwrap();
        for j in -2..11 {
            for i in -2..11 {
                let a = pa.get(i, j)[0];
                let b = pb.get(8 - i, j)[0];
                assert_eq!((a.q0, a.qx, a.qxx, a.qz, a.qzz, a.qxz), (b.q0, -b.qx, b.qxx, b.qz, b.qzz, -b.qxz));
            }
        }
    }
}
