//! Finite-volume form of PSM in an `(r, θ)` plane.
//!
//! Each face flux is the 1D PSM flux along the face normal, fed by the
//! face-center velocity only (first-order feet, no tangential motion), and
//! multiplied by the Jacobian `r` at the face. A constant state therefore
//! moves exactly the swept volumes `r_{k} Δθ Δt a_r` and `r_i Δr Δt a_θ`, whose
//! per-cell sum vanishes when the velocities come from corner potentials.

use ndarray::{Array2, ArrayView2};

use crate::advect1d::{feet_explicit, line_fluxes};
use crate::error::{Error, Result};
use crate::mesh::PolarGrid;

/// Face fluxes of one plane: `r[[k, j]]` at r-node `k` of θ-cell `j`,
/// `theta[[i, k]]` at θ-node `k` of r-cell `i`. Face areas are not included.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneFluxes {
    pub r: Array2<f64>,
    pub theta: Array2<f64>,
}

/// Volumes swept by the faces in one step.
#[derive(Debug, Clone, PartialEq)]
pub struct SweptVolumes {
    /// `r_k Δθ Δt a_r` at r-faces.
    pub r: Array2<f64>,
    /// `r_i Δr Δt a_θ` at θ-faces.
    pub theta: Array2<f64>,
}

fn check_shapes(f: &ArrayView2<f64>, a_r: &ArrayView2<f64>, a_theta: &ArrayView2<f64>, polar: &PolarGrid) -> Result<()> {
    let (nr, nt) = (polar.r.n_cells(), polar.theta.n_cells());
    if f.dim() != (nr, nt) || a_r.dim() != (nr + 1, nt) || a_theta.dim() != (nr, nt) {
        return Err(Error::Param(format!(
            "plane shapes f {:?}, a_r {:?}, a_θ {:?} do not match {nr}×{nt} grid",
            f.dim(),
            a_r.dim(),
            a_theta.dim()
        )));
    }
    Ok(())
}

/// Checks `Δt max|a_r| ≤ Δr` and `Δt max|a_θ| ≤ Δθ`.
pub fn check_cfl(a_r: ArrayView2<f64>, a_theta: ArrayView2<f64>, polar: &PolarGrid, dt: f64) -> Result<()> {
    let max_abs = |a: &ArrayView2<f64>| a.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    for (m, dx) in [(max_abs(&a_r), polar.r.dx()), (max_abs(&a_theta), polar.theta.dx())] {
        if !m.is_finite() {
            return Err(Error::NonFinite("face velocity"));
        }
        if m * dt > dx * (1.0 + 1e-12) {
            return Err(Error::Cfl {
                displacement: m * dt,
                limit: dx,
            });
        }
    }
    Ok(())
}

/// All face fluxes of a plane computed from the same snapshot `f`.
pub fn plane_fluxes(
    f: ArrayView2<f64>,
    a_r: ArrayView2<f64>,
    a_theta: ArrayView2<f64>,
    polar: &PolarGrid,
    dt: f64,
    limiter: Option<f64>,
) -> Result<PlaneFluxes> {
    check_shapes(&f, &a_r, &a_theta, polar)?;
    check_cfl(a_r, a_theta, polar, dt)?;
    let (nr, nt) = (polar.r.n_cells(), polar.theta.n_cells());

    let r_nodes = polar.r.nodes();
    let mut flux_r = Array2::zeros((nr + 1, nt));
    for j in 0..nt {
        let line = f.column(j).to_vec();
        let vel = a_r.column(j).to_vec();
        let feet = feet_explicit(&r_nodes, &vel, dt);
        let phi = line_fluxes(&line, &polar.r, &feet, dt, limiter)?;
        for (k, p) in phi.into_iter().enumerate() {
            flux_r[[k, j]] = r_nodes[k] * p;
        }
    }

    let t_nodes = polar.theta.nodes();
    let mut flux_t = Array2::zeros((nr, nt));
    let mut vel = vec![0.0; nt + 1];
    for i in 0..nr {
        let line = f.row(i).to_vec();
        for k in 0..nt {
            vel[k] = a_theta[[i, k]];
        }
        vel[nt] = vel[0];
        let feet = feet_explicit(&t_nodes, &vel, dt);
        let phi = line_fluxes(&line, &polar.theta, &feet, dt, limiter)?;
        let ri = polar.r.center(i);
        for k in 0..nt {
            flux_t[[i, k]] = ri * phi[k];
        }
    }
    Ok(PlaneFluxes { r: flux_r, theta: flux_t })
}

fn apply_r(f: &mut Array2<f64>, fl: &PlaneFluxes, polar: &PolarGrid, dt: f64) {
    let (nr, nt) = f.dim();
    for i in 0..nr {
        let c = dt / (polar.r.center(i) * polar.r.dx());
        for j in 0..nt {
            f[[i, j]] -= c * (fl.r[[i + 1, j]] - fl.r[[i, j]]);
        }
    }
}

fn apply_theta(f: &mut Array2<f64>, fl: &PlaneFluxes, polar: &PolarGrid, dt: f64) {
    let (nr, nt) = f.dim();
    for i in 0..nr {
        let c = dt / (polar.r.center(i) * polar.theta.dx());
        for j in 0..nt {
            f[[i, j]] -= c * (fl.theta[[i, (j + 1) % nt]] - fl.theta[[i, j]]);
        }
    }
}

/// Unsplit update
/// `Vol (f̄^{n+1} - f̄^n)/Δt + A^r ΔΦ^r + A^θ ΔΦ^θ = 0`.
pub fn fv_update_unsplit(
    f: ArrayView2<f64>,
    a_r: ArrayView2<f64>,
    a_theta: ArrayView2<f64>,
    polar: &PolarGrid,
    dt: f64,
    limiter: Option<f64>,
) -> Result<Array2<f64>> {
    let fl = plane_fluxes(f, a_r, a_theta, polar, dt, limiter)?;
    let (nr, nt) = f.dim();
    let (dr, dth) = (polar.r.dx(), polar.theta.dx());
    let mut out = f.to_owned();
    for i in 0..nr {
        let vol = polar.r.center(i) * dr * dth;
        let c = dt / vol;
        for j in 0..nt {
            let div = dth * (fl.r[[i + 1, j]] - fl.r[[i, j]]) + dr * (fl.theta[[i, (j + 1) % nt]] - fl.theta[[i, j]]);
            out[[i, j]] -= c * div;
        }
    }
    Ok(out)
}

/// Same update applied as an r sub-step followed by a θ sub-step, both
/// using fluxes of the initial snapshot.
pub fn fv_update_split(
    f: ArrayView2<f64>,
    a_r: ArrayView2<f64>,
    a_theta: ArrayView2<f64>,
    polar: &PolarGrid,
    dt: f64,
    limiter: Option<f64>,
) -> Result<Array2<f64>> {
    let fl = plane_fluxes(f, a_r, a_theta, polar, dt, limiter)?;
    let mut out = f.to_owned();
    apply_r(&mut out, &fl, polar, dt);
    apply_theta(&mut out, &fl, polar, dt);
    Ok(out)
}

pub fn swept_volumes(a_r: ArrayView2<f64>, a_theta: ArrayView2<f64>, polar: &PolarGrid, dt: f64) -> SweptVolumes {
    let (dr, dth) = (polar.r.dx(), polar.theta.dx());
    let r = Array2::from_shape_fn(a_r.dim(), |(k, j)| polar.r.node(k) * dth * dt * a_r[[k, j]]);
    let theta = Array2::from_shape_fn(a_theta.dim(), |(i, k)| polar.r.center(i) * dr * dt * a_theta[[i, k]]);
    SweptVolumes { r, theta }
}

/// Per-cell volume closure
/// `δVol^r_{i+1/2} - δVol^r_{i-1/2} + δVol^θ_{j+1/2} - δVol^θ_{j-1/2}`.
pub fn swept_volume_residual(a_r: ArrayView2<f64>, a_theta: ArrayView2<f64>, polar: &PolarGrid, dt: f64) -> Array2<f64> {
    let sv = swept_volumes(a_r, a_theta, polar, dt);
    let (nr, nt) = (polar.r.n_cells(), polar.theta.n_cells());
    Array2::from_shape_fn((nr, nt), |(i, j)| {
        sv.r[[i + 1, j]] - sv.r[[i, j]] + sv.theta[[i, (j + 1) % nt]] - sv.theta[[i, j]]
    })
}

/// `Σ f̄ Vol` over the plane.
pub fn plane_mass(f: ArrayView2<f64>, polar: &PolarGrid) -> f64 {
    let mut acc = crate::diag::Kahan::default();
    for ((i, _), v) in f.indexed_iter() {
        acc.add(v * polar.volume_unchecked(i));
    }
    acc.sum()
}
