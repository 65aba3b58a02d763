//! 4D drift-kinetic driver in `(r, θ, z, v‖)`.
//!
//! The distribution is advanced with a predictor-corrector: the potential at
//! `t^n` moves `f^n` by half a step, the potential of that half-step state
//! then moves `f^n` by the full step. Each transport is either the 7-sweep
//! directional splitting `v‖ z θ r θ z v‖` or the 5-stage sequence
//! `v‖ z (r,θ) z v‖` whose middle stage is the unsplit finite-volume update.

use ndarray::{s, Array1, Array3, Array4, ArrayView2, ArrayViewMut1, Axis as NdAxis};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::advect1d::{
    bsl_advect, feet_implicit_midpoint, flux_advect, psm_advect, LineVelocity,
};
use crate::diag::{self, DiagRecord};
use crate::error::{Error, Result};
use crate::field::{velocity_from_potential, FaceVelocity, NodalPotential, PhysicalParams, QuasiNeutralSolver};
use crate::fv2d::fv_update_unsplit;
use crate::mesh::{Axis, Bc, PhaseGrid4D};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Bsl,
    Psm,
    Sls,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Form {
    DirectionalSplit,
    FiniteVolume,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SchemeConfig {
    pub scheme: Scheme,
    pub form: Form,
    #[serde(rename = "K")]
    pub k: f64,
}

impl Default for SchemeConfig {
    fn default() -> Self {
        Self {
            scheme: Scheme::Psm,
            form: Form::FiniteVolume,
            k: crate::advect1d::DEFAULT_K,
        }
    }
}

impl SchemeConfig {
    pub fn new(scheme: Scheme, form: Form) -> Self {
        Self {
            scheme,
            form,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.scheme == Scheme::Bsl && self.form == Form::FiniteVolume {
            return Err(Error::Param("BSL is only available in directional-split form".into()));
        }
        if !(self.k > 0.0 && self.k.is_finite()) {
            return Err(Error::Param(format!("limiter gain K must be > 0, got {}", self.k)));
        }
        Ok(())
    }

    pub fn limiter(&self) -> Option<f64> {
        (self.scheme == Scheme::Sls).then_some(self.k)
    }

    pub fn label(&self) -> String {
        let s = match self.scheme {
            Scheme::Bsl => "bsl",
            Scheme::Psm => "psm",
            Scheme::Sls => "sls",
        };
        let f = match self.form {
            Form::DirectionalSplit => "ds",
            Form::FiniteVolume => "fv",
        };
        format!("{s}-{f}")
    }
}

/// Phase-space grid extents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridSpec {
    pub n_r: usize,
    pub n_theta: usize,
    pub n_z: usize,
    pub n_vpar: usize,
    pub r_min: f64,
    pub r_max: f64,
    pub z_length: f64,
    /// `v‖ ∈ [-vpar_max, vpar_max]`.
    pub vpar_max: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            n_r: 32,
            n_theta: 128,
            n_z: 16,
            n_vpar: 16,
            r_min: 0.1,
            r_max: 14.5,
            z_length: 1508.0,
            vpar_max: 7.32,
        }
    }
}

impl GridSpec {
    pub fn build(&self) -> Result<PhaseGrid4D> {
        if !(self.z_length > 0.0 && self.vpar_max > 0.0) {
            return Err(Error::Grid("z_length and vpar_max must be positive".into()));
        }
        PhaseGrid4D::new(
            Axis::neumann(self.n_r, self.r_min, self.r_max)?,
            Axis::periodic(self.n_theta, 0.0, 2.0 * PI)?,
            Axis::periodic(self.n_z, 0.0, self.z_length)?,
            Axis::neumann(self.n_vpar, -self.vpar_max, self.vpar_max)?,
        )
    }
}

/// Perturbation, time-step control and run length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BenchmarkSpec {
    /// Poloidal mode number.
    pub m: i64,
    /// Axial mode number.
    pub n: i64,
    pub epsilon: f64,
    /// Width of the radial envelope `g(r) = exp(-(r - r_p)⁴/δr_g⁴)`.
    pub delta_r_g: f64,
    /// CFL coefficients for `r, θ, z, v‖`.
    pub cfl: [f64; 4],
    pub dt_max: f64,
    /// Fixed time step; disables the CFL rule when set.
    pub dt_fixed: Option<f64>,
    pub t_end: f64,
    pub max_steps: usize,
    /// Relative amplitude of seeded uniform noise added at `t = 0`.
    pub noise: f64,
}

impl Default for BenchmarkSpec {
    fn default() -> Self {
        Self {
            m: 8,
            n: 4,
            epsilon: 1e-4,
            delta_r_g: 2.9,
            cfl: [0.5, 0.5, 8.0, 8.0],
            dt_max: 2.0,
            dt_fixed: None,
            t_end: 200.0,
            max_steps: 100_000,
            noise: 0.0,
        }
    }
}

impl BenchmarkSpec {
    pub fn validate(&self, grid: &PhaseGrid4D) -> Result<()> {
        let nt = grid.theta().n_cells() as i64;
        if nt < 8 * self.m.abs() {
            return Err(Error::Param(format!("mode m = {} needs n_theta >= {}", self.m, 8 * self.m.abs())));
        }
        if 2 * self.n.abs() > grid.z.n_cells() as i64 {
            return Err(Error::Param(format!("mode n = {} not resolvable with n_z = {}", self.n, grid.z.n_cells())));
        }
        if !(self.epsilon.is_finite() && self.delta_r_g > 0.0) {
            return Err(Error::Param("epsilon must be finite and delta_r_g positive".into()));
        }
        if self.cfl.iter().any(|c| !(*c > 0.0)) {
            return Err(Error::Param(format!("CFL coefficients must be positive, got {:?}", self.cfl)));
        }
        if !(self.dt_max > 0.0) || self.dt_fixed.is_some_and(|d| !(d > 0.0)) {
            return Err(Error::Param("time steps must be positive".into()));
        }
        if !(self.noise.is_finite() && self.noise.abs() < 1.0) {
            return Err(Error::Param("noise must satisfy |noise| < 1".into()));
        }
        if !(self.t_end >= 0.0) {
            return Err(Error::Param("t_end must be >= 0".into()));
        }
        Ok(())
    }
}

/// Cell values of `f` at one time level, indexed `[r, θ, z, v‖]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Field4D {
    pub data: Array4<f64>,
    pub time: f64,
}

/// `n₀(r)/(2π T_i(r)/m_i)^{1/2} exp(-m_i v²/(2 T_i(r)))`.
pub fn equilibrium(r: f64, v: f64, params: &PhysicalParams, r_p: f64) -> f64 {
    let n0 = params.n0.eval(r, r_p);
    let ti = params.t_i.eval(r, r_p);
    n0 / (2.0 * PI * ti / params.m_i).sqrt() * (-params.m_i * v * v / (2.0 * ti)).exp()
}

/// Initial state `f_eq (1 + g(r) h(v‖) ε cos(2πnz/L_z + mθ))` sampled at
/// cell centers, and the discrete equilibrium density `Σ_v f_eq Δv‖` per
/// radial cell.
pub fn init_distribution(
    bench: &BenchmarkSpec,
    params: &PhysicalParams,
    grid: &PhaseGrid4D,
) -> (Field4D, Array1<f64>) {
    let r_p = params.r_p(grid.r());
    let [nr, _, _, nv] = grid.shape();
    let feq = Array4::from_shape_fn((nr, 1, 1, nv), |(i, _, _, k)| {
        equilibrium(grid.r().center(i), grid.vpar.center(k), params, r_p)
    });
    let n0 = Array1::from_shape_fn(nr, |i| {
        diag::kahan_sum(feq.slice(s![i, 0, 0, ..]).iter().copied()) * grid.vpar.dx()
    });
    let data = Array4::from_shape_fn(grid.shape(), |(i, j, l, k)| {
        let r = grid.r().center(i);
        let v = grid.vpar.center(k);
        let g = (-((r - r_p) / bench.delta_r_g).powi(4)).exp();
        let h = (-0.5 * v * v).exp();
        let phase = 2.0 * PI * bench.n as f64 * grid.z.center(l) / grid.z.length()
            + bench.m as f64 * grid.theta().center(j);
        let fe = feq[[i, 0, 0, k]];
        fe + fe * g * h * bench.epsilon * phase.cos()
    });
    (Field4D { data, time: 0.0 }, n0)
}

/// `Δt = min_d CFL_d Δx_d / max|a_d|`, capped at `dt_max`.
pub fn compute_dt(a: &FaceVelocity, grid: &PhaseGrid4D, cfl: [f64; 4], dt_max: f64) -> f64 {
    let max_abs = |it: &mut dyn Iterator<Item = &f64>| it.fold(0.0f64, |m, v| m.max(v.abs()));
    let v_max = grid.vpar.x_min().abs().max(grid.vpar.x_max().abs()) - 0.5 * grid.vpar.dx();
    let speeds = [
        max_abs(&mut a.a_r.iter()),
        max_abs(&mut a.a_theta.iter()),
        v_max,
        max_abs(&mut a.a_vpar.iter()),
    ];
    let dx = [grid.r().dx(), grid.theta().dx(), grid.z.dx(), grid.vpar.dx()];
    let mut dt = dt_max;
    for d in 0..4 {
        if speeds[d] > 0.0 {
            dt = dt.min(cfl[d] * dx[d] / speeds[d]);
        }
    }
    dt
}

fn sample_points(scheme: Scheme, axis: &Axis) -> Vec<f64> {
    match scheme {
        Scheme::Bsl => axis.centers(),
        _ => axis.nodes(),
    }
}

/// Clamps feet into a Neumann domain. When the feet belong to the nodes
/// (conservative schemes) the two wall nodes stay in place, so no mass
/// crosses the walls.
fn clamp_feet(feet: &mut [f64], axis: &Axis) {
    if axis.bc() == Bc::Neumann {
        for x in feet.iter_mut() {
            *x = x.clamp(axis.x_min(), axis.x_max());
        }
        if feet.len() == axis.n_cells() + 1 {
            feet[0] = axis.x_min();
            feet[axis.n_cells()] = axis.x_max();
        }
    }
}

fn uniform_feet(points: &[f64], a: f64, dt: f64, axis: &Axis) -> Vec<f64> {
    let mut feet: Vec<f64> = points.iter().map(|x| x - a * dt).collect();
    clamp_feet(&mut feet, axis);
    feet
}

fn nodal_feet(points: &[f64], face: &[f64], dt: f64, axis: &Axis) -> Result<Vec<f64>> {
    let vel = LineVelocity::from_nodes(face, axis)?;
    let mut feet = feet_implicit_midpoint(points, &vel, dt, axis.dx())?;
    clamp_feet(&mut feet, axis);
    Ok(feet)
}

fn advect_line(values: &[f64], axis: &Axis, feet: &[f64], dt: f64, scheme: SchemeConfig) -> Result<Vec<f64>> {
    match scheme.scheme {
        Scheme::Bsl => bsl_advect(values, axis, feet),
        Scheme::Psm => psm_advect(values, axis, feet),
        Scheme::Sls => flux_advect(values, axis, feet, dt, Some(scheme.k)),
    }
}

fn advect_lane(mut lane: ArrayViewMut1<f64>, axis: &Axis, feet: &[f64], dt: f64, scheme: SchemeConfig) -> Result<()> {
    let line = lane.to_vec();
    let out = advect_line(&line, axis, feet, dt, scheme)?;
    lane.iter_mut().zip(out).for_each(|(x, y)| *x = y);
    Ok(())
}

/// `v‖` sweep with the acceleration `a_v‖(r, θ, z)`.
pub fn sweep_vpar(f: &mut Array4<f64>, a_vpar: &Array3<f64>, grid: &PhaseGrid4D, dt: f64, scheme: SchemeConfig) -> Result<()> {
    let axis = &grid.vpar;
    let pts = sample_points(scheme.scheme, axis);
    f.axis_iter_mut(NdAxis(0))
        .into_par_iter()
        .enumerate()
        .try_for_each(|(i, mut block)| {
            let (nt, nz) = (block.shape()[0], block.shape()[1]);
            for j in 0..nt {
                for l in 0..nz {
                    let a = a_vpar[[i, j, l]];
                    if a == 0.0 {
                        continue;
                    }
                    let feet = uniform_feet(&pts, a, dt, axis);
                    advect_lane(block.slice_mut(s![j, l, ..]), axis, &feet, dt, scheme)?;
                }
            }
            Ok(())
        })
}

/// z sweep with velocity `v‖`.
pub fn sweep_z(f: &mut Array4<f64>, grid: &PhaseGrid4D, dt: f64, scheme: SchemeConfig) -> Result<()> {
    let axis = &grid.z;
    let pts = sample_points(scheme.scheme, axis);
    let feet: Vec<Vec<f64>> = grid
        .vpar
        .centers()
        .iter()
        .map(|&v| uniform_feet(&pts, v, dt, axis))
        .collect();
    f.axis_iter_mut(NdAxis(0)).into_par_iter().try_for_each(|mut block| {
        let (nt, nv) = (block.shape()[0], block.shape()[2]);
        for j in 0..nt {
            for k in 0..nv {
                advect_lane(block.slice_mut(s![j, .., k]), axis, &feet[k], dt, scheme)?;
            }
        }
        Ok(())
    })
}

/// θ sweep of `∂_t f + ∂_θ(a_θ f) = 0` at fixed `r`.
pub fn sweep_theta(f: &mut Array4<f64>, a_theta: &Array3<f64>, grid: &PhaseGrid4D, dt: f64, scheme: SchemeConfig) -> Result<()> {
    let axis = grid.theta();
    let pts = sample_points(scheme.scheme, axis);
    f.axis_iter_mut(NdAxis(0))
        .into_par_iter()
        .enumerate()
        .try_for_each(|(i, mut block)| {
            let (nz, nv) = (block.shape()[1], block.shape()[2]);
            for l in 0..nz {
                let face = a_theta.slice(s![i, .., l]).to_vec();
                if face.iter().all(|a| *a == 0.0) {
                    continue;
                }
                let feet = nodal_feet(&pts, &face, dt, axis)?;
                for k in 0..nv {
                    advect_lane(block.slice_mut(s![.., l, k]), axis, &feet, dt, scheme)?;
                }
            }
            Ok(())
        })
}

/// r sweep. Conservative schemes transport `r f` so that, combined with
/// the θ sweep, the polar divergence form is respected; BSL moves `f`.
pub fn sweep_r(f: &mut Array4<f64>, a_r: &Array3<f64>, grid: &PhaseGrid4D, dt: f64, scheme: SchemeConfig) -> Result<()> {
    let axis = grid.r();
    let pts = sample_points(scheme.scheme, axis);
    let radii = axis.centers();
    let weighted = scheme.scheme != Scheme::Bsl;
    f.axis_iter_mut(NdAxis(1))
        .into_par_iter()
        .enumerate()
        .try_for_each(|(j, mut block)| {
            let (nz, nv) = (block.shape()[1], block.shape()[2]);
            for l in 0..nz {
                let face = a_r.slice(s![.., j, l]).to_vec();
                if face.iter().all(|a| *a == 0.0) {
                    continue;
                }
                let feet = nodal_feet(&pts, &face, dt, axis)?;
                for k in 0..nv {
                    let mut lane = block.slice_mut(s![.., l, k]);
                    let mut line = lane.to_vec();
                    if weighted {
                        line.iter_mut().zip(&radii).for_each(|(u, r)| *u *= r);
                    }
                    let mut out = advect_line(&line, axis, &feet, dt, scheme)?;
                    if weighted {
                        out.iter_mut().zip(&radii).for_each(|(u, r)| *u /= r);
                    }
                    lane.iter_mut().zip(out).for_each(|(x, y)| *x = y);
                }
            }
            Ok(())
        })
}

/// Unsplit finite-volume update of every `(r, θ)` plane.
pub fn sweep_polar_fv(f: &mut Array4<f64>, a: &FaceVelocity, grid: &PhaseGrid4D, dt: f64, scheme: SchemeConfig) -> Result<()> {
    let limiter = scheme.limiter();
    f.axis_iter_mut(NdAxis(2))
        .into_par_iter()
        .enumerate()
        .try_for_each(|(l, mut block)| {
            let ar: ArrayView2<f64> = a.a_r.index_axis(NdAxis(2), l);
            let at: ArrayView2<f64> = a.a_theta.index_axis(NdAxis(2), l);
            if ar.iter().chain(at.iter()).all(|v| *v == 0.0) {
                return Ok(());
            }
            let nv = block.shape()[2];
            for k in 0..nv {
                let mut plane = block.index_axis_mut(NdAxis(2), k);
                let out = fv_update_unsplit(plane.view(), ar, at, &grid.polar, dt, limiter)?;
                plane.assign(&out);
            }
            Ok(())
        })
}

/// `v‖(½) z(½) θ(½) r(1) θ(½) z(½) v‖(½)`.
pub fn transport_sl_split(f: &mut Array4<f64>, a: &FaceVelocity, grid: &PhaseGrid4D, dt: f64, scheme: SchemeConfig) -> Result<()> {
    let h = 0.5 * dt;
    sweep_vpar(f, &a.a_vpar, grid, h, scheme)?;
    sweep_z(f, grid, h, scheme)?;
    sweep_theta(f, &a.a_theta, grid, h, scheme)?;
    sweep_r(f, &a.a_r, grid, dt, scheme)?;
    sweep_theta(f, &a.a_theta, grid, h, scheme)?;
    sweep_z(f, grid, h, scheme)?;
    sweep_vpar(f, &a.a_vpar, grid, h, scheme)
}

/// `v‖(½) z(½) (r,θ)(1) z(½) v‖(½)` with the unsplit finite-volume core.
pub fn transport_fv(f: &mut Array4<f64>, a: &FaceVelocity, grid: &PhaseGrid4D, dt: f64, scheme: SchemeConfig) -> Result<()> {
    if scheme.scheme == Scheme::Bsl {
        return Err(Error::Param("BSL has no finite-volume form".into()));
    }
    let h = 0.5 * dt;
    sweep_vpar(f, &a.a_vpar, grid, h, scheme)?;
    sweep_z(f, grid, h, scheme)?;
    sweep_polar_fv(f, a, grid, dt, scheme)?;
    sweep_z(f, grid, h, scheme)?;
    sweep_vpar(f, &a.a_vpar, grid, h, scheme)
}

pub fn transport(f: &mut Array4<f64>, a: &FaceVelocity, grid: &PhaseGrid4D, dt: f64, scheme: SchemeConfig) -> Result<()> {
    match scheme.form {
        Form::DirectionalSplit => transport_sl_split(f, a, grid, dt, scheme),
        Form::FiniteVolume => transport_fv(f, a, grid, dt, scheme),
    }
    .and_then(|()| {
        if f.iter().all(|v| v.is_finite()) {
            Ok(())
        } else {
            Err(Error::NonFinite("distribution function"))
        }
    })
}

/// Benchmark state: grid, parameters, field solver and current `f`.
#[derive(Debug)]
pub struct DriftKinetic {
    pub grid: PhaseGrid4D,
    pub params: PhysicalParams,
    pub bench: BenchmarkSpec,
    pub scheme: SchemeConfig,
    pub f: Field4D,
    pub steps: usize,
    /// Potential and velocities of the last field solve at `t^n`.
    pub phi: NodalPotential,
    pub velocity: FaceVelocity,
    pub last_dt: f64,
    n0: Array1<f64>,
    solver: QuasiNeutralSolver,
}

impl DriftKinetic {
    pub fn new(grid: PhaseGrid4D, params: PhysicalParams, bench: BenchmarkSpec, scheme: SchemeConfig) -> Result<Self> {
        scheme.validate()?;
        params.validate(grid.r())?;
        bench.validate(&grid)?;
        let solver = QuasiNeutralSolver::new(&grid.polar, grid.z.n_cells(), &params)?;
        let (f, n0) = init_distribution(&bench, &params, &grid);
        let mut s = Self {
            phi: NodalPotential::zeros(&grid),
            velocity: FaceVelocity::zeros(&grid),
            grid,
            params,
            bench,
            scheme,
            f,
            steps: 0,
            last_dt: 0.0,
            n0,
            solver,
        };
        let (phi, vel) = s.fields(&s.f.data)?;
        s.phi = phi;
        s.velocity = vel;
        Ok(s)
    }

    /// Discrete equilibrium density `Σ_v f_eq Δv‖` per radial cell.
    pub fn equilibrium_density(&self) -> &Array1<f64> {
        &self.n0
    }

    /// Potential and velocities of a distribution.
    pub fn fields(&self, f: &Array4<f64>) -> Result<(NodalPotential, FaceVelocity)> {
        let mut rho = diag::density(f.view(), &self.grid);
        for (mut plane, n0) in rho.axis_iter_mut(NdAxis(0)).zip(self.n0.iter()) {
            plane -= *n0;
        }
        let phi = self.solver.solve(rho.view())?;
        let vel = velocity_from_potential(&phi, &self.grid, &self.params);
        Ok((phi, vel))
    }

    pub fn compute_dt(&self, a: &FaceVelocity) -> f64 {
        match self.bench.dt_fixed {
            Some(dt) => dt,
            None => compute_dt(a, &self.grid, self.bench.cfl, self.bench.dt_max),
        }
    }

    /// One predictor-corrector step; returns the step size.
    pub fn step(&mut self) -> Result<f64> {
        let (phi_n, a_n) = self.fields(&self.f.data)?;
        let dt = self.compute_dt(&a_n);
        let mut half = self.f.data.clone();
        transport(&mut half, &a_n, &self.grid, 0.5 * dt, self.scheme)?;
        let (_, a_h) = self.fields(&half)?;
        let mut next = half;
        next.assign(&self.f.data);
        transport(&mut next, &a_h, &self.grid, dt, self.scheme)?;
        self.f.data = next;
        self.f.time += dt;
        self.steps += 1;
        self.last_dt = dt;
        self.phi = phi_n;
        self.velocity = a_n;
        Ok(dt)
    }

    /// Refreshes `phi` and `velocity` from the current `f`.
    pub fn refresh_fields(&mut self) -> Result<()> {
        let (phi, vel) = self.fields(&self.f.data)?;
        self.phi = phi;
        self.velocity = vel;
        Ok(())
    }

    /// Diagnostics of the current state, using the stored fields.
    pub fn record(&self) -> Result<DiagRecord> {
        let f = self.f.data.view();
        let (min, max) = diag::min_max(f.iter());
        let (slice_min, slice_max) = diag::slice_extrema(f, diag::vpar_zero_index(&self.grid), 0)?;
        let (m, n) = (self.bench.m, self.bench.n);
        Ok(DiagRecord {
            step: self.steps,
            time: self.f.time,
            dt: self.last_dt,
            mass: diag::mass(f, &self.grid),
            l2: diag::l2_norm(f, &self.grid),
            min,
            max,
            slice_min,
            slice_max,
            mode_amplitude: diag::mode_amplitude(f, &self.grid, m, n)?,
            phi_amplitude: diag::mode_amplitude_3d(self.phi.view(), &self.grid, m, n)?,
            max_divergence: self.velocity.max_divergence(&self.grid.polar),
        })
    }
}
