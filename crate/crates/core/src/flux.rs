//! Centred interface fluxes: Lax-Friedrichs, two-step Lax-Wendroff, their
//! GFORCE blend and the flux-limited FLIC combination.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SolverError};
use crate::weno::WenoParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Limiter {
    /// Centred SUPERBEE.
    Superbee,
    /// `ψ ≡ 0`: the flux reduces to plain GFORCE.
    None,
}

impl std::str::FromStr for Limiter {
    type Err = SolverError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "superbee" => Ok(Limiter::Superbee),
            "none" => Ok(Limiter::None),
            other => Err(SolverError::InvalidConfig(format!("unknown limiter '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FluxConfig {
    pub omega: f64,
    pub cfl: f64,
    pub limiter: Limiter,
    pub weno: WenoParams,
}

/// Largest Courant number keeping GFORCE monotone for `omega` in `[0.5, 1]`.
/// Returns `None` outside that range, where no bound applies.
pub fn monotone_cfl_bound(omega: f64) -> Option<f64> {
    (0.5..=1.0).contains(&omega).then(|| ((omega - 1.0) / (2.0 * omega)).abs())
}

impl FluxConfig {
    pub fn new(omega: f64, cfl: f64, limiter: Limiter, weno: WenoParams) -> Result<Self> {
        let cfg = FluxConfig { omega, cfl, limiter, weno };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn advection_default() -> Self {
        FluxConfig { omega: 0.5, cfl: 0.45, limiter: Limiter::Superbee, weno: WenoParams::default() }
    }

    pub fn euler_default() -> Self {
        FluxConfig { omega: 0.5, cfl: 0.4, limiter: Limiter::Superbee, weno: WenoParams::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.omega) {
            return Err(SolverError::InvalidConfig(format!("omega must lie in [0, 1], got {}", self.omega)));
        }
        if !(self.cfl > 0.0 && self.cfl < 1.0) {
            return Err(SolverError::InvalidConfig(format!("CFL must lie in (0, 1), got {}", self.cfl)));
        }
        if let Some(bound) = monotone_cfl_bound(self.omega) {
            if self.cfl > bound {
                return Err(SolverError::InvalidConfig(format!(
                    "CFL {} exceeds the monotonicity bound |(-1+omega)/(2 omega)| = {:.6} for omega = {}",
                    self.cfl, bound, self.omega
                )));
            }
        }
        self.weno.validate()
    }
}

/// Left/right extrapolated states at one quadrature point of a face and the
/// physical fluxes evaluated there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FacePair<const N: usize> {
    pub ql: [f64; N],
    pub qr: [f64; N],
    pub fl: [f64; N],
    pub fr: [f64; N],
}

impl<const N: usize> FacePair<N> {
    pub fn new(ql: [f64; N], qr: [f64; N], flux_fn: impl Fn(&[f64; N]) -> [f64; N]) -> Self {
        FacePair { ql, qr, fl: flux_fn(&ql), fr: flux_fn(&qr) }
    }
}

/// `½(fL + fR) − ¼ (Δ/Δt)(qR − qL)`.
#[inline]
pub fn lax_friedrichs<const N: usize>(fp: &FacePair<N>, dt: f64, dcell: f64) -> [f64; N] {
    let c = 0.25 * dcell / dt;
    let mut out = [0.0; N];
    for k in 0..N {
        out[k] = 0.5 * (fp.fl[k] + fp.fr[k]) - c * (fp.qr[k] - fp.ql[k]);
    }
    out
}

/// Physical flux of the intermediate state `½(qL + qR) − (Δt/Δ)(fR − fL)`.
#[inline]
pub fn lax_wendroff<const N: usize>(
    fp: &FacePair<N>,
    dt: f64,
    dcell: f64,
    flux_fn: impl Fn(&[f64; N]) -> [f64; N],
) -> [f64; N] {
    let c = dt / dcell;
    let mut star = [0.0; N];
    for k in 0..N {
        star[k] = 0.5 * (fp.ql[k] + fp.qr[k]) - c * (fp.fr[k] - fp.fl[k]);
    }
    flux_fn(&star)
}

/// `(1 − w) a + w b`, exact at `w = 0` and `w = 1`.
#[inline]
fn blend<const N: usize>(a: &[f64; N], b: &[f64; N], w: f64) -> [f64; N] {
    let mut out = [0.0; N];
    for k in 0..N {
        out[k] = (1.0 - w) * a[k] + w * b[k];
    }
    out
}

pub fn gforce<const N: usize>(
    fp: &FacePair<N>,
    dt: f64,
    dcell: f64,
    omega: f64,
    flux_fn: impl Fn(&[f64; N]) -> [f64; N],
) -> [f64; N] {
    let lf = lax_friedrichs(fp, dt, dcell);
    let lw = lax_wendroff(fp, dt, dcell, flux_fn);
    blend(&lf, &lw, omega)
}

/// Centred SUPERBEE limiter for Courant number `courant`.
#[inline]
pub fn superbee_centered(r: f64, courant: f64) -> f64 {
    if r <= 0.0 {
        0.0
    } else if r <= 0.5 {
        2.0 * r
    } else if r <= 1.0 {
        1.0
    } else {
        let phi = (1.0 - courant.abs()) / (1.0 + courant.abs());
        (phi + (1.0 - phi) * r).min(2.0)
    }
}

/// Relative size under which the jump across a face counts as zero.
pub const JUMP_TOLERANCE: f64 = 1e-14;

/// Left and right flow parameters from the jumps `eR − eL` at faces
/// `i−½, i+½, i+3/2`. `None` flags a smooth face (central jump below
/// tolerance relative to `scale`), where the limiter takes the value 1.
#[inline]
pub fn flow_parameters(jumps: [f64; 3], scale: f64) -> Option<(f64, f64)> {
    let [left, center, right] = jumps;
    if center.abs() <= JUMP_TOLERANCE * scale.abs().max(1.0) {
        None
    } else {
        Some((left / center, right / center))
    }
}

/// Limiter value of a face.
#[inline]
pub fn face_limiter(jumps: [f64; 3], scale: f64, courant: f64, limiter: Limiter) -> f64 {
    match limiter {
        Limiter::None => 0.0,
        Limiter::Superbee => match flow_parameters(jumps, scale) {
            None => 1.0,
            Some((rl, rr)) => superbee_centered(rl, courant).min(superbee_centered(rr, courant)),
        },
    }
}

/// FLIC flux for an already limited face: `GFORCE + ψ (LW − GFORCE)`.
#[inline]
pub fn flic_with_psi<const N: usize>(
    fp: &FacePair<N>,
    dt: f64,
    dcell: f64,
    omega: f64,
    psi: f64,
    flux_fn: impl Fn(&[f64; N]) -> [f64; N],
) -> [f64; N] {
    let lf = lax_friedrichs(fp, dt, dcell);
    let lw = lax_wendroff(fp, dt, dcell, flux_fn);
    let gf = blend(&lf, &lw, omega);
    blend(&gf, &lw, psi)
}

/// FLIC flux from flow parameters; ψ uses the configured CFL as Courant number.
pub fn flic<const N: usize>(
    fp: &FacePair<N>,
    dt: f64,
    dcell: f64,
    cfg: &FluxConfig,
    rl: f64,
    rr: f64,
    flux_fn: impl Fn(&[f64; N]) -> [f64; N],
) -> [f64; N] {
    let psi = match cfg.limiter {
        Limiter::None => 0.0,
        Limiter::Superbee => superbee_centered(rl, cfg.cfl).min(superbee_centered(rr, cfg.cfl)),
    };
    flic_with_psi(fp, dt, dcell, cfg.omega, psi, flux_fn)
}
