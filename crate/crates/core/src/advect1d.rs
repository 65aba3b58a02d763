//! One-dimensional transport kernels along a single grid line.
//!
//! * [`bsl_advect`]: backward semi-Lagrangian interpolation of point values.
//! * [`psm_advect`]: conservative remap of cell averages through the spline
//!   primitive, `f̄_i^{n+1} Δx = F_h(x*_{i+1/2}) - F_h(x*_{i-1/2})`.
//! * [`line_fluxes`] + [`flux_form_update`]: the same remap written with face
//!   fluxes `(F_h(x) - F_h(x*)) / Δt`, optionally blended with the first-order
//!   upwind flux by the SLS limiter.

use crate::error::{Error, Result};
use crate::mesh::{Axis, Bc};
use crate::spline::{CubicSpline, PrimitiveSpline};

/// Fixed-point iteration cap for the implicit midpoint feet.
pub const FEET_MAX_ITER: usize = 25;

/// Default SLS slope-ratio gain.
pub const DEFAULT_K: f64 = 5.0;

/// SLS limiter settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimiterConfig {
    pub k: f64,
    pub enabled: bool,
}

impl Default for LimiterConfig {
    fn default() -> Self {
        Self {
            k: DEFAULT_K,
            enabled: true,
        }
    }
}

impl LimiterConfig {
    pub fn new(k: f64) -> Result<Self> {
        if !(k > 0.0 && k.is_finite()) {
            return Err(Error::Param(format!("limiter gain K must be > 0, got {k}")));
        }
        Ok(Self { k, enabled: true })
    }

    pub fn disabled() -> Self {
        Self {
            k: DEFAULT_K,
            enabled: false,
        }
    }

    /// The gain when enabled.
    pub fn gain(&self) -> Option<f64> {
        self.enabled.then_some(self.k)
    }
}

/// Advection velocity along one line.
#[derive(Debug, Clone)]
pub enum LineVelocity {
    Uniform(f64),
    /// Spline through face (node) values.
    Nodal(CubicSpline),
}

impl LineVelocity {
    /// Interpolates face values `a_{k}` given at the nodes of `axis`.
    pub fn from_nodes(values: &[f64], axis: &Axis) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("line velocity"));
        }
        Ok(Self::Nodal(CubicSpline::through_nodes(values, axis)?))
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Self::Uniform(c) => *c,
            Self::Nodal(s) => s.eval(x),
        }
    }
}

/// Solves `x* = x - Δt·a((x + x*)/2)` for each point by fixed-point
/// iteration, stopping when the update is below `1e-12·Δx`.
pub fn feet_implicit_midpoint(
    points: &[f64],
    velocity: &LineVelocity,
    dt: f64,
    dx: f64,
) -> Result<Vec<f64>> {
    if let LineVelocity::Uniform(c) = velocity {
        return Ok(points.iter().map(|&x| x - dt * c).collect());
    }
    let tol = 1e-12 * dx;
    points
        .iter()
        .map(|&x| {
            let mut foot = x - dt * velocity.eval(x);
            for _ in 0..FEET_MAX_ITER {
                let next = x - dt * velocity.eval(0.5 * (x + foot));
                let delta = (next - foot).abs();
                foot = next;
                if delta <= tol {
                    return Ok(foot);
                }
            }
            Err(Error::NoConvergence(FEET_MAX_ITER))
        })
        .collect()
}

/// Feet `x_k - Δt·a_k` from face velocities (first-order, per face).
pub fn feet_explicit(nodes: &[f64], face_velocity: &[f64], dt: f64) -> Vec<f64> {
    nodes
        .iter()
        .zip(face_velocity)
        .map(|(&x, &a)| x - dt * a)
        .collect()
}

/// Errors if the feet are not non-decreasing.
pub fn check_monotone(feet: &[f64]) -> Result<()> {
    for (k, w) in feet.windows(2).enumerate() {
        if w[1] < w[0] {
            return Err(Error::FeetCrossing { face: k, next: k + 1 });
        }
    }
    Ok(())
}

/// BSL update: the new point value at center `i` is the spline of the old
/// point values evaluated at `feet[i]`.
pub fn bsl_advect(values: &[f64], axis: &Axis, feet: &[f64]) -> Result<Vec<f64>> {
    let spline = CubicSpline::through_centers(values, axis)?;
    if feet.len() != values.len() {
        return Err(Error::Param(format!(
            "BSL needs one foot per center, got {} for {}",
            feet.len(),
            values.len()
        )));
    }
    Ok(feet.iter().map(|&x| spline.eval(axis.fold(x))).collect())
}

/// PSM remap of cell averages given the feet of all `n + 1` nodes.
///
/// On periodic axes `feet[n]` is taken as `feet[0] + L`.
pub fn psm_advect(averages: &[f64], axis: &Axis, feet: &[f64]) -> Result<Vec<f64>> {
    let n = axis.n_cells();
    check_feet_len(feet.len(), n)?;
    let primitive = PrimitiveSpline::new(averages, axis)?;
    let mut f = feet.to_vec();
    if axis.is_periodic() {
        f[n] = f[0] + axis.length();
    }
    check_monotone(&f)?;
    let inv_dx = 1.0 / axis.dx();
    let inc: Vec<f64> = f.iter().enumerate().map(|(k, &x)| primitive.increment(k as i64, x)).collect();
    Ok(averages
        .iter()
        .zip(inc.windows(2))
        .map(|(a, w)| a + (w[1] - w[0]) * inv_dx)
        .collect())
}

/// PSM flux `(F_h(x_k) - F_h(x*)) / Δt` at node `k`; the foot must lie
/// within one cell.
pub fn psm_flux(primitive: &PrimitiveSpline, k: usize, foot: f64, dt: f64, dx: f64) -> Result<f64> {
    check_cfl(primitive.node(k as i64) - foot, dx)?;
    if dt == 0.0 {
        return Ok(0.0);
    }
    Ok(-primitive.increment(k as i64, foot) / dt)
}

/// First-order upwind flux at the face between `left` and `right`.
#[inline]
pub fn upwind_flux(left: f64, right: f64, a: f64) -> f64 {
    a * (0.5 * (left + right) - a.signum() * 0.5 * (right - left))
}

/// Slope ratio at face `i+1/2` from the stencil `f_{i-1}, f_i, f_{i+1}, f_{i+2}`.
///
/// A vanishing denominator returns `+∞`, which the SLS gain maps to `γ = 1`.
#[inline]
pub fn slope_ratio(fm1: f64, f0: f64, f1: f64, f2: f64, a: f64) -> f64 {
    let den = f1 - f0;
    if den.abs() < f64::MIN_POSITIVE {
        return f64::INFINITY;
    }
    if a >= 0.0 {
        (f0 - fm1) / den
    } else {
        (f2 - f1) / den
    }
}

/// `γ(θ) = max(0, min(K|θ|, 1))`.
#[inline]
pub fn sls_gamma(theta: f64, k: f64) -> f64 {
    (k * theta.abs()).min(1.0).max(0.0)
}

/// Convex blend `γ φ_psm + (1 - γ) φ_upwind`.
#[inline]
pub fn sls_flux(phi_psm: f64, phi_upwind: f64, theta: f64, k: f64) -> f64 {
    let g = sls_gamma(theta, k);
    g * phi_psm + (1.0 - g) * phi_upwind
}

/// Conservative update `f̄_i - Δt/Δx (φ_{i+1} - φ_i)` from `n + 1` face fluxes.
pub fn flux_form_update(averages: &[f64], fluxes: &[f64], dt: f64, dx: f64) -> Result<Vec<f64>> {
    check_feet_len(fluxes.len(), averages.len())?;
    let c = dt / dx;
    Ok(averages
        .iter()
        .zip(fluxes.windows(2))
        .map(|(&f, w)| f - c * (w[1] - w[0]))
        .collect())
}

/// Face fluxes along one line for the flux form of PSM, optionally limited
/// by SLS with gain `limiter`.
///
/// Feet may lie several cells upstream. The whole cells crossed are
/// transferred exactly; only the remaining fraction of a cell is blended
/// with its upwind counterpart, whose velocity is that fraction over `Δt`.
pub fn line_fluxes(
    averages: &[f64],
    axis: &Axis,
    feet: &[f64],
    dt: f64,
    limiter: Option<f64>,
) -> Result<Vec<f64>> {
    let n = axis.n_cells();
    check_feet_len(feet.len(), n)?;
    if dt == 0.0 {
        return Ok(vec![0.0; n + 1]);
    }
    let primitive = PrimitiveSpline::new(averages, axis)?;
    let dx = axis.dx();
    let mut fluxes = Vec::with_capacity(n + 1);
    for (k, &foot) in feet.iter().enumerate() {
        let node = axis.node(k);
        let Some(gain) = limiter else {
            fluxes.push(-primitive.increment(k as i64, foot) / dt);
            continue;
        };
        let s = (node - foot) / dx;
        let whole = if s.abs() <= 1.0 { 0 } else { s.trunc() as i64 };
        let p = k as i64 - whole;
        let x_p = primitive.node(p);
        let exact = -primitive.increment(k as i64, x_p);
        let psm = -primitive.increment(p, foot);
        let a = (x_p - foot) / dt;
        let face = match axis.bc() {
            Bc::Periodic => p.rem_euclid(n as i64) as usize,
            Bc::Neumann => p.clamp(0, n as i64) as usize,
        };
        let (l, r) = face_neighbours(averages, axis.bc(), face);
        let up = upwind_flux(l, r, a) * dt;
        let theta = face_slope_ratio(averages, axis.bc(), face, a);
        fluxes.push((exact + sls_flux(psm, up, theta, gain)) / dt);
    }
    if axis.is_periodic() {
        fluxes[n] = fluxes[0];
    }
    Ok(fluxes)
}

/// Flux-form PSM/SLS step along one line.
pub fn flux_advect(
    averages: &[f64],
    axis: &Axis,
    feet: &[f64],
    dt: f64,
    limiter: Option<f64>,
) -> Result<Vec<f64>> {
    let fluxes = line_fluxes(averages, axis, feet, dt, limiter)?;
    flux_form_update(averages, &fluxes, dt, axis.dx())
}

/// Cell values on either side of face `k`, with even reflection at Neumann
/// boundaries.
#[inline]
pub(crate) fn face_neighbours(f: &[f64], bc: Bc, k: usize) -> (f64, f64) {
    let n = f.len();
    match bc {
        Bc::Periodic => (f[(k + n - 1) % n], f[k % n]),
        Bc::Neumann => (f[k.saturating_sub(1)], f[k.min(n - 1)]),
    }
}

/// Slope ratio at face `k` (between cells `k-1` and `k`). On Neumann axes
/// faces whose stencil leaves the domain reuse the nearest interior ratio.
pub(crate) fn face_slope_ratio(f: &[f64], bc: Bc, k: usize, a: f64) -> f64 {
    let n = f.len();
    match bc {
        Bc::Periodic => {
            let at = |d: isize| f[((k as isize + d).rem_euclid(n as isize)) as usize];
            slope_ratio(at(-2), at(-1), at(0), at(1), a)
        }
        Bc::Neumann => {
            let k = if a >= 0.0 { k.clamp(2, n - 1) } else { k.clamp(1, n - 2) };
            let fm1 = if k >= 2 { f[k - 2] } else { f[0] };
            let f2 = if k + 1 < n { f[k + 1] } else { f[n - 1] };
            slope_ratio(fm1, f[k - 1], f[k], f2, a)
        }
    }
}

#[inline]
fn check_cfl(displacement: f64, dx: f64) -> Result<()> {
    if displacement.abs() > dx * (1.0 + 1e-12) {
        return Err(Error::Cfl {
            displacement: displacement.abs(),
            limit: dx,
        });
    }
    Ok(())
}

fn check_feet_len(got: usize, n: usize) -> Result<()> {
    if got != n + 1 {
        return Err(Error::Param(format!("expected {} face values, got {got}", n + 1)));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn sine_averages(axis: &Axis) -> Vec<f64> {
        // exact cell averages of 1 + 0.5 sin(2πx/L)
        let l = axis.length();
        let w = 2.0 * PI / l;
        (0..axis.n_cells())
            .map(|i| {
                let (a, b) = (axis.node(i), axis.node(i + 1));
                1.0 + 0.5 * ((w * a).cos() - (w * b).cos()) / (w * axis.dx())
            })
            .collect()
    }

    #[test]
    fn feet_constant_and_zero_velocity() {
        let x = [0.0, 0.5, 1.0];
        let c = LineVelocity::Uniform(2.0);
        assert_eq!(feet_implicit_midpoint(&x, &c, 0.1, 0.5).unwrap(), vec![-0.2, 0.3, 0.8]);
        let z = LineVelocity::Uniform(0.0);
        assert_eq!(feet_implicit_midpoint(&x, &z, 0.1, 0.5).unwrap(), x.to_vec());
    }

    #[test]
    fn feet_midpoint_rule_for_linear_field() {
        // a(x) = x: x* = x (1 - Δt/2) / (1 + Δt/2)
        let axis = Axis::neumann(16, 0.0, 4.0).unwrap();
        let a = LineVelocity::from_nodes(&axis.nodes(), &axis).unwrap();
        let dt = 0.3;
        let pts = [0.5, 1.0, 2.25, 3.0];
        let feet = feet_implicit_midpoint(&pts, &a, dt, axis.dx()).unwrap();
        for (x, f) in pts.iter().zip(&feet) {
            let exact = x * (1.0 - dt / 2.0) / (1.0 + dt / 2.0);
            assert!((f - exact).abs() < 1e-11, "{f} vs {exact}");
        }
    }

    #[test]
    fn feet_iteration_reports_divergence() {
        let axis = Axis::neumann(16, 0.0, 4.0).unwrap();
        let vals: Vec<f64> = axis.nodes().iter().map(|x| 40.0 * x).collect();
        let a = LineVelocity::from_nodes(&vals, &axis).unwrap();
        let r = feet_implicit_midpoint(&[1.0], &a, 1.0, axis.dx());
        assert!(matches!(r, Err(Error::NoConvergence(_))));
    }

    #[test]
    fn bsl_whole_cell_shift_is_circular() {
        let axis = Axis::periodic(32, 0.0, 1.0).unwrap();
        let vals: Vec<f64> = axis.centers().iter().map(|x| (2.0 * PI * x).sin().exp()).collect();
        let feet: Vec<f64> = axis.centers().iter().map(|x| x - 3.0 * axis.dx()).collect();
        let out = bsl_advect(&vals, &axis, &feet).unwrap();
        for i in 0..32 {
            assert!((out[i] - vals[(i + 29) % 32]).abs() < 1e-13);
        }
    }

    #[test]
    fn bsl_translated_sine() {
        let axis = Axis::periodic(64, 0.0, 1.0).unwrap();
        let shift = 0.2 * axis.dx();
        let mut v: Vec<f64> = axis.centers().iter().map(|x| (2.0 * PI * x).sin()).collect();
        for _ in 0..100 {
            let feet: Vec<f64> = axis.centers().iter().map(|x| x - shift).collect();
            v = bsl_advect(&v, &axis, &feet).unwrap();
        }
        let err = axis
            .centers()
            .iter()
            .zip(&v)
            .map(|(x, f)| ((2.0 * PI * (x - 100.0 * shift)).sin() - f).abs())
            .fold(0.0, f64::max);
        assert!(err <= 1e-4, "err {err}");
    }

    #[test]
    fn psm_conserves_mass_with_variable_velocity() {
        let axis = Axis::periodic(48, 0.0, 2.0).unwrap();
        let avg = sine_averages(&axis);
        let vel: Vec<f64> = axis.nodes().iter().map(|x| 0.4 + 0.3 * (PI * x).cos()).collect();
        let a = LineVelocity::from_nodes(&vel, &axis).unwrap();
        let feet = feet_implicit_midpoint(&axis.nodes(), &a, 0.05, axis.dx()).unwrap();
        let out = psm_advect(&avg, &axis, &feet).unwrap();
        let m0: f64 = avg.iter().sum();
        let m1: f64 = out.iter().sum();
        assert!(((m1 - m0) / m0).abs() < 1e-14);
        // constants are not preserved when ∂a/∂x ≠ 0
        let c = vec![1.0; 48];
        let outc = psm_advect(&c, &axis, &feet).unwrap();
        assert!(outc.iter().any(|v| (v - 1.0).abs() > 1e-6));
        assert!((outc.iter().sum::<f64>() - 48.0).abs() < 1e-12);
    }

    #[test]
    fn psm_equals_bsl_for_constant_advection() {
        let axis = Axis::periodic(64, 0.0, 1.0).unwrap();
        let f0 = sine_averages(&axis);
        let (mut bsl, mut psm) = (f0.clone(), f0);
        let shift = 0.37 * axis.dx();
        let centers: Vec<f64> = axis.centers().iter().map(|x| x - shift).collect();
        let nodes: Vec<f64> = axis.nodes().iter().map(|x| x - shift).collect();
        for _ in 0..100 {
            bsl = bsl_advect(&bsl, &axis, &centers).unwrap();
            psm = psm_advect(&psm, &axis, &nodes).unwrap();
        }
        let d = bsl.iter().zip(&psm).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(d <= 1e-12, "max diff {d}");
    }

    #[test]
    fn psm_closed_loop_returns_initial_data() {
        let axis = Axis::periodic(70, 0.0, 1.0).unwrap();
        let f0 = sine_averages(&axis);
        let feet: Vec<f64> = axis.nodes().iter().map(|x| x - 0.2 * axis.dx()).collect();
        let mut f = f0.clone();
        for _ in 0..350 {
            f = psm_advect(&f, &axis, &feet).unwrap();
        }
        let err = f.iter().zip(&f0).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        // not exact: the scheme is dissipative at the 5th order
        assert!(err < 1e-4, "loop err {err}");
    }

    #[test]
    fn psm_unit_mass_cell() {
        let axis = Axis::periodic(20, 0.0, 1.0).unwrap();
        let mut f = vec![0.0; 20];
        f[7] = 1.0 / axis.dx();
        let feet: Vec<f64> = axis.nodes().iter().map(|x| x - 0.3 * axis.dx()).collect();
        let out = psm_advect(&f, &axis, &feet).unwrap();
        let mass: f64 = out.iter().map(|v| v * axis.dx()).sum();
        assert!((mass - 1.0).abs() < 1e-15);
    }

    #[test]
    fn psm_rejects_crossing_feet() {
        let axis = Axis::periodic(8, 0.0, 1.0).unwrap();
        let mut feet = axis.nodes();
        feet.swap(3, 4);
        let r = psm_advect(&[1.0; 8], &axis, &feet);
        assert!(matches!(r, Err(Error::FeetCrossing { face: 3, .. })));
    }

    #[test]
    fn psm_flux_cases() {
        let axis = Axis::periodic(10, 0.0, 1.0).unwrap();
        let p = PrimitiveSpline::new(&[2.5; 10], &axis).unwrap();
        let dt = 0.01;
        let x = axis.node(3);
        assert_eq!(psm_flux(&p, 3, x, dt, axis.dx()).unwrap(), 0.0);
        let a = 4.0;
        let phi = psm_flux(&p, 3, x - a * dt, dt, axis.dx()).unwrap();
        assert!((phi - 2.5 * a).abs() < 1e-13);
        assert!(matches!(psm_flux(&p, 3, x - 0.15, dt, axis.dx()), Err(Error::Cfl { .. })));
    }

    #[test]
    fn flux_form_matches_psm_advect() {
        for axis in [Axis::periodic(40, 0.0, 1.0).unwrap(), Axis::neumann(40, 0.0, 1.0).unwrap()] {
            let avg: Vec<f64> = axis.centers().iter().map(|x| 1.0 + (-30.0 * (x - 0.5) * (x - 0.5)).exp()).collect();
            let vel: Vec<f64> = axis.nodes().iter().map(|x| 0.2 * (2.0 * PI * x).sin()).collect();
            let dt = 0.05;
            let feet = feet_explicit(&axis.nodes(), &vel, dt);
            let a = psm_advect(&avg, &axis, &feet).unwrap();
            let b = flux_advect(&avg, &axis, &feet, dt, None).unwrap();
            let d = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
            assert!(d < 1e-13, "diff {d}");
        }
    }

    #[test]
    fn flux_form_basics() {
        let f = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(flux_form_update(&f, &[0.7; 5], 0.1, 0.5).unwrap(), f.to_vec());
        let out = flux_form_update(&f, &[0.3, -1.0, 2.0, 0.1, 0.3], 0.1, 0.5).unwrap();
        assert!((out.iter().sum::<f64>() - 10.0).abs() < 1e-14);
    }

    #[test]
    fn upwind_selection() {
        assert_eq!(upwind_flux(2.0, 4.0, 1.0), 2.0);
        assert_eq!(upwind_flux(2.0, 4.0, -1.0), -4.0);
        assert_eq!(upwind_flux(2.0, 4.0, 0.0), 0.0);
    }

    #[test]
    fn slope_ratio_cases() {
        assert_eq!(slope_ratio(1.0, 2.0, 3.0, 4.0, 1.0), 1.0);
        assert_eq!(slope_ratio(1.0, 2.0, 3.0, 4.0, -1.0), 1.0);
        assert!(slope_ratio(3.0, 4.0, 3.0, 2.0, 1.0) < 0.0);
        let t = slope_ratio(1.0, 2.0, 2.0, 2.0, 1.0);
        assert_eq!(t, f64::INFINITY);
        assert_eq!(sls_gamma(t, 5.0), 1.0);
    }

    #[test]
    fn sls_blend_cases() {
        assert_eq!(sls_flux(3.0, 1.0, 0.0, 5.0), 1.0);
        assert!((sls_flux(3.0, 1.0, 0.1, 5.0) - 2.0).abs() < 1e-15);
        assert_eq!(sls_flux(3.0, 1.0, -1.0, 5.0), 3.0);
        assert_eq!(sls_gamma(-0.1, 5.0), 0.5);
    }

    #[test]
    fn upwind_limit_obeys_maximum_principle() {
        let axis = Axis::periodic(50, 0.0, 1.0).unwrap();
        let mut f: Vec<f64> = (0..50).map(|i| if (10..25).contains(&i) { 1.0 } else { 0.2 }).collect();
        f[30] = 0.6;
        let feet: Vec<f64> = axis.nodes().iter().map(|x| x - 0.7 * axis.dx()).collect();
        let (lo, hi) = (0.2, 1.0);
        let dt = 1.0;
        let fluxes: Vec<f64> = (0..=50)
            .map(|k| {
                let (l, r) = face_neighbours(&f, axis.bc(), k);
                let a = (axis.node(k) - feet[k]) / dt;
                upwind_flux(l, r, a)
            })
            .collect();
        let out = flux_form_update(&f, &fluxes, dt, axis.dx()).unwrap();
        assert!(out.iter().all(|&v| v >= lo - 1e-15 && v <= hi + 1e-15));
    }

    #[test]
    fn multi_cell_limited_flux_is_shift_plus_fraction() {
        let axis = Axis::periodic(20, 0.0, 1.0).unwrap();
        let dx = axis.dx();
        let avg: Vec<f64> = (0..20).map(|i| if (5..11).contains(&i) { 1.0 } else { 0.2 }).collect();
        let dt = 0.1;
        let far: Vec<f64> = axis.nodes().iter().map(|x| x - 3.4 * dx).collect();
        let near: Vec<f64> = axis.nodes().iter().map(|x| x - 0.4 * dx).collect();
        let a = flux_advect(&avg, &axis, &far, dt, Some(5.0)).unwrap();
        let shifted: Vec<f64> = (0..20).map(|i| avg[(i + 17) % 20]).collect();
        let b = flux_advect(&shifted, &axis, &near, dt, Some(5.0)).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-13);
        }
        let (m0, m1): (f64, f64) = (avg.iter().sum(), a.iter().sum());
        assert!((m0 - m1).abs() < 1e-13);
    }

    #[test]
    fn neumann_ghosts() {
        let f = [1.0, 2.0, 4.0, 8.0, 16.0];
        assert_eq!(face_neighbours(&f, Bc::Neumann, 0), (1.0, 1.0));
        assert_eq!(face_neighbours(&f, Bc::Neumann, 5), (16.0, 16.0));
        assert_eq!(face_neighbours(&f, Bc::Periodic, 0), (16.0, 1.0));
        // boundary faces reuse the nearest interior slope ratio
        let inner = slope_ratio(f[0], f[1], f[2], f[3], 1.0);
        assert_eq!(face_slope_ratio(&f, Bc::Neumann, 0, 1.0), inner);
        assert_eq!(face_slope_ratio(&f, Bc::Neumann, 1, 1.0), inner);
    }
}
