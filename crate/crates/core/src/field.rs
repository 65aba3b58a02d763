//! Quasi-neutrality field solve and guiding-center velocities.
//!
//! The potential lives at the corners of the `(r, θ)` grid, one copy per
//! z-plane. Face velocities are first differences of corner potentials, so
//! their discrete polar divergence telescopes to zero for any potential.

use ndarray::{Array2, Array3, ArrayView2, ArrayView3, Axis as NdAxis};
use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::mesh::{Axis, PhaseGrid4D, PolarGrid};
use crate::spline::{CubicSpline, EndCondition};
use crate::tridiag;

/// Radial profile `exp(-κ δr tanh((r - r_p)/δr))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TanhProfile {
    pub kappa: f64,
    pub delta_r: f64,
}

impl TanhProfile {
    #[inline]
    pub fn eval(&self, r: f64, r_p: f64) -> f64 {
        (-self.kappa * self.delta_r * ((r - r_p) / self.delta_r).tanh()).exp()
    }
}

/// Physical constants and equilibrium profiles (normalized units).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PhysicalParams {
    pub b_z: f64,
    pub q_i: f64,
    pub m_i: f64,
    pub omega0: f64,
    pub e_charge: f64,
    /// Profile reference radius; `None` means the middle of the r domain.
    pub r_p: Option<f64>,
    pub n0: TanhProfile,
    pub t_i: TanhProfile,
    pub t_e: TanhProfile,
}

impl Default for PhysicalParams {
    fn default() -> Self {
        Self {
            b_z: 1.0,
            q_i: 1.0,
            m_i: 1.0,
            omega0: 1.0,
            e_charge: 1.0,
            r_p: None,
            n0: TanhProfile {
                kappa: 0.055,
                delta_r: 2.9,
            },
            t_i: TanhProfile {
                kappa: 0.27586,
                delta_r: 1.45,
            },
            t_e: TanhProfile {
                kappa: 0.27586,
                delta_r: 1.45,
            },
        }
    }
}

impl PhysicalParams {
    pub fn validate(&self, r: &Axis) -> Result<()> {
        if self.b_z == 0.0 || !self.b_z.is_finite() {
            return Err(Error::Param("B_z must be finite and non-zero".into()));
        }
        for (name, v) in [
            ("m_i", self.m_i),
            ("omega0", self.omega0),
            ("e_charge", self.e_charge),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Param(format!("{name} must be positive")));
            }
        }
        if !self.q_i.is_finite() {
            return Err(Error::Param("q_i must be finite".into()));
        }
        for p in [self.n0, self.t_i, self.t_e] {
            if !(p.delta_r > 0.0) || !p.kappa.is_finite() {
                return Err(Error::Param("profile δr must be positive".into()));
            }
        }
        let rp = self.r_p(r);
        for k in 0..=r.n_cells() {
            let x = r.node(k);
            let vals = [self.n0.eval(x, rp), self.t_i.eval(x, rp), self.t_e.eval(x, rp)];
            if vals.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
                return Err(Error::Param(format!("non-positive profile at r = {x}")));
            }
        }
        Ok(())
    }

    pub fn r_p(&self, r: &Axis) -> f64 {
        self.r_p.unwrap_or(0.5 * (r.x_min() + r.x_max()))
    }

    pub fn q_over_m(&self) -> f64 {
        self.q_i / self.m_i
    }
}

/// Electric potential at `(r-node, θ-node, z-plane)` corners.
#[derive(Debug, Clone, PartialEq)]
pub struct NodalPotential(pub Array3<f64>);

impl NodalPotential {
    pub fn zeros(grid: &PhaseGrid4D) -> Self {
        let [nr, nt, nz, _] = grid.shape();
        Self(Array3::zeros((nr + 1, nt, nz)))
    }

    pub fn view(&self) -> ArrayView3<'_, f64> {
        self.0.view()
    }

    /// Corner potential of z-plane `l`.
    pub fn plane(&self, l: usize) -> ArrayView2<'_, f64> {
        self.0.index_axis(NdAxis(2), l)
    }
}

/// Face-centered advection velocities of the 4D drift-kinetic flow.
///
/// * `a_r[[k, j, l]]`: `dr/dt` at r-node `k`, θ-cell `j`;
/// * `a_theta[[i, k, l]]`: `dθ/dt` at r-cell `i`, θ-node `k`;
/// * `a_vpar[[i, j, l]]`: `(q/m) E_z` at cell centers, independent of `v‖`.
///
/// The z velocity is the `v‖` coordinate itself.
#[derive(Debug, Clone, PartialEq)]
pub struct FaceVelocity {
    pub a_r: Array3<f64>,
    pub a_theta: Array3<f64>,
    pub a_vpar: Array3<f64>,
}

impl FaceVelocity {
    pub fn zeros(grid: &PhaseGrid4D) -> Self {
        let [nr, nt, nz, _] = grid.shape();
        Self {
            a_r: Array3::zeros((nr + 1, nt, nz)),
            a_theta: Array3::zeros((nr, nt, nz)),
            a_vpar: Array3::zeros((nr, nt, nz)),
        }
    }

    /// Largest discrete divergence residual over all planes, scaled by
    /// `max|a| / Δr` (0 when the flow vanishes).
    pub fn max_divergence(&self, polar: &PolarGrid) -> f64 {
        let nz = self.a_r.shape()[2];
        let scale = self.a_r.iter().fold(0.0f64, |m, v| m.max(v.abs()))
            .max(self.a_theta.iter().fold(0.0f64, |m, v| m.max(v.abs())) * polar.r.x_max())
            / polar.r.dx();
        if scale == 0.0 {
            return 0.0;
        }
        (0..nz)
            .map(|l| {
                let div = discrete_divergence(
                    self.a_r.index_axis(NdAxis(2), l),
                    self.a_theta.index_axis(NdAxis(2), l),
                    polar,
                );
                div.iter().fold(0.0f64, |m, v| m.max(v.abs()))
            })
            .fold(0.0, f64::max)
            / scale
    }
}

/// Face velocities of one `(r, θ)` plane from its corner potential
/// (`(n_r + 1) × n_θ`):
///
/// `a_r(r_k, θ_j) = -(Φ_{k,j+1} - Φ_{k,j}) / (r_k B Δθ)`,
/// `a_θ(r_i, θ_k) = (Φ_{i+1,k} - Φ_{i,k}) / (r_i B Δr)`.
pub fn plane_velocity(phi: ArrayView2<f64>, polar: &PolarGrid, b_z: f64) -> (Array2<f64>, Array2<f64>) {
    let (nr, nt) = (polar.r.n_cells(), polar.theta.n_cells());
    debug_assert_eq!(phi.dim(), (nr + 1, nt));
    let (dr, dth) = (polar.r.dx(), polar.theta.dx());
    let a_r = Array2::from_shape_fn((nr + 1, nt), |(k, j)| {
        -(phi[[k, (j + 1) % nt]] - phi[[k, j]]) / (polar.r.node(k) * b_z * dth)
    });
    let a_theta = Array2::from_shape_fn((nr, nt), |(i, k)| {
        (phi[[i + 1, k]] - phi[[i, k]]) / (polar.r.center(i) * b_z * dr)
    });
    (a_r, a_theta)
}

/// Discrete polar divergence per cell:
/// `(1/r_i)[(r_{i+1/2} a_r - r_{i-1/2} a_r)/Δr + r_i (a_θ^{j+1/2} - a_θ^{j-1/2})/Δθ]`.
pub fn discrete_divergence(a_r: ArrayView2<f64>, a_theta: ArrayView2<f64>, polar: &PolarGrid) -> Array2<f64> {
    let (nr, nt) = (polar.r.n_cells(), polar.theta.n_cells());
    let (dr, dth) = (polar.r.dx(), polar.theta.dx());
    Array2::from_shape_fn((nr, nt), |(i, j)| {
        let ri = polar.r.center(i);
        let radial = (polar.r.node(i + 1) * a_r[[i + 1, j]] - polar.r.node(i) * a_r[[i, j]]) / dr;
        let angular = ri * (a_theta[[i, (j + 1) % nt]] - a_theta[[i, j]]) / dth;
        (radial + angular) / ri
    })
}

/// Guiding-center velocities obtained by differentiating cubic-spline
/// interpolants of the potential at the face centers.
///
/// Consistent with the continuous drift but not with the discrete polar
/// divergence; kept as the contrast case.
pub fn spline_plane_velocity(
    phi: ArrayView2<f64>,
    polar: &PolarGrid,
    b_z: f64,
) -> Result<(Array2<f64>, Array2<f64>)> {
    let (nr, nt) = (polar.r.n_cells(), polar.theta.n_cells());
    let mut a_r = Array2::zeros((nr + 1, nt));
    for k in 0..=nr {
        let row: Vec<f64> = phi.row(k).to_vec();
        let s = CubicSpline::interpolate(polar.theta.x_min(), polar.theta.dx(), &row, EndCondition::Periodic)?;
        for j in 0..nt {
            a_r[[k, j]] = -s.eval_d1(polar.theta.center(j)) / (polar.r.node(k) * b_z);
        }
    }
    let mut a_theta = Array2::zeros((nr, nt));
    for k in 0..nt {
        let col: Vec<f64> = phi.column(k).to_vec();
        let s = CubicSpline::interpolate(polar.r.x_min(), polar.r.dx(), &col, EndCondition::Natural)?;
        for i in 0..nr {
            let r = polar.r.center(i);
            a_theta[[i, k]] = s.eval_d1(r) / (r * b_z);
        }
    }
    Ok((a_r, a_theta))
}

/// Full 4D face velocity from the corner potential.
///
/// `E_z` at cell centers is the centered z-difference of the four-corner
/// average of each plane.
pub fn velocity_from_potential(phi: &NodalPotential, grid: &PhaseGrid4D, params: &PhysicalParams) -> FaceVelocity {
    let [nr, nt, nz, _] = grid.shape();
    let mut v = FaceVelocity::zeros(grid);
    for l in 0..nz {
        let (ar, at) = plane_velocity(phi.plane(l), &grid.polar, params.b_z);
        v.a_r.index_axis_mut(NdAxis(2), l).assign(&ar);
        v.a_theta.index_axis_mut(NdAxis(2), l).assign(&at);
    }
    let p = &phi.0;
    let center_avg = Array3::from_shape_fn((nr, nt, nz), |(i, j, l)| {
        let j1 = (j + 1) % nt;
        0.25 * (p[[i, j, l]] + p[[i, j1, l]] + p[[i + 1, j, l]] + p[[i + 1, j1, l]])
    });
    let qm = params.q_over_m();
    let inv = 1.0 / (2.0 * grid.z.dx());
    for ((i, j, l), a) in v.a_vpar.indexed_iter_mut() {
        let up = center_avg[[i, j, (l + 1) % nz]];
        let down = center_avg[[i, j, (l + nz - 1) % nz]];
        *a = -qm * (up - down) * inv;
    }
    v
}

/// Fourier-in-(θ, z), finite-difference-in-r solver for
/// `-∇⊥·(n₀/(B Ω₀) ∇⊥Φ) + (e n₀/T_e)(Φ - ⟨Φ⟩_{θ,z}) = ρ` at the corner
/// nodes, with `Φ = 0` on both radial walls before gauge fixing.
pub struct QuasiNeutralSolver {
    polar: PolarGrid,
    nz: usize,
    /// `r_i n₀(r_i)/(B Ω₀)` at cell centers (radial flux coefficients).
    flux_coef: Vec<f64>,
    /// `n₀(r_k)/(B Ω₀)` at nodes.
    perp_coef: Vec<f64>,
    /// `e n₀(r_k)/T_e(r_k)` at nodes.
    adiabatic: Vec<f64>,
    fft_theta: Arc<dyn Fft<f64>>,
    ifft_theta: Arc<dyn Fft<f64>>,
    fft_z: Arc<dyn Fft<f64>>,
    ifft_z: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for QuasiNeutralSolver {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("QuasiNeutralSolver")
            .field("polar", &self.polar)
            .field("nz", &self.nz)
            .finish_non_exhaustive()
    }
}

impl QuasiNeutralSolver {
    pub fn new(polar: &PolarGrid, nz: usize, params: &PhysicalParams) -> Result<Self> {
        params.validate(&polar.r)?;
        let r = &polar.r;
        let rp = params.r_p(r);
        let bo = params.b_z * params.omega0;
        let flux_coef = (0..r.n_cells())
            .map(|i| r.center(i) * params.n0.eval(r.center(i), rp) / bo)
            .collect();
        let perp_coef = (0..=r.n_cells()).map(|k| params.n0.eval(r.node(k), rp) / bo).collect();
        let adiabatic = (0..=r.n_cells())
            .map(|k| params.e_charge * params.n0.eval(r.node(k), rp) / params.t_e.eval(r.node(k), rp))
            .collect();
        let mut planner = FftPlanner::new();
        let nt = polar.theta.n_cells();
        Ok(Self {
            polar: polar.clone(),
            nz,
            flux_coef,
            perp_coef,
            adiabatic,
            fft_theta: planner.plan_fft_forward(nt),
            ifft_theta: planner.plan_fft_inverse(nt),
            fft_z: planner.plan_fft_forward(nz),
            ifft_z: planner.plan_fft_inverse(nz),
        })
    }

    /// Eigenvalue of `-∂²_θ` (second-order differences) for θ mode `m`.
    fn theta_symbol(&self, m: usize) -> f64 {
        let nt = self.polar.theta.n_cells();
        let dth = self.polar.theta.dx();
        let s = (std::f64::consts::PI * m as f64 / nt as f64).sin();
        4.0 * s * s / (dth * dth)
    }

    /// Tridiagonal coefficients of the radial operator for one mode at
    /// interior nodes `1..n_r` (length `n_r - 1`).
    fn mode_matrix(&self, m: usize, zonal: bool) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
        let r = &self.polar.r;
        let nr = r.n_cells();
        let dr2 = r.dx() * r.dx();
        let lam = self.theta_symbol(m);
        let mut sub = Vec::with_capacity(nr - 1);
        let mut diag = Vec::with_capacity(nr - 1);
        let mut sup = Vec::with_capacity(nr - 1);
        for k in 1..nr {
            let rk = r.node(k);
            let (lo, hi) = (self.flux_coef[k - 1], self.flux_coef[k]);
            sub.push(-lo / (rk * dr2));
            sup.push(-hi / (rk * dr2));
            let mut d = (lo + hi) / (rk * dr2) + self.perp_coef[k] * lam / (rk * rk);
            if !zonal {
                d += self.adiabatic[k];
            }
            diag.push(d);
        }
        (sub, diag, sup)
    }

    /// Solves for the corner potential given the source `ρ` at corners
    /// (`(n_r + 1) × n_θ × n_z`; boundary rows ignored). The result has zero
    /// mean over all corners.
    pub fn solve_corner_source(&self, rho: ArrayView3<f64>) -> Result<NodalPotential> {
        let (nr, nt, nz) = (self.polar.r.n_cells(), self.polar.theta.n_cells(), self.nz);
        if rho.dim() != (nr + 1, nt, nz) {
            return Err(Error::Param(format!("source shape {:?} does not match grid", rho.dim())));
        }
        if rho.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("quasi-neutrality source"));
        }
        // spectral[k][m][n]
        let mut spec = vec![Complex64::new(0.0, 0.0); (nr + 1) * nt * nz];
        let idx = |k: usize, m: usize, n: usize| (k * nt + m) * nz + n;
        let mut line_t = vec![Complex64::new(0.0, 0.0); nt];
        let mut line_z = vec![Complex64::new(0.0, 0.0); nz];
        for k in 1..nr {
            for n in 0..nz {
                for j in 0..nt {
                    line_t[j] = Complex64::new(rho[[k, j, n]], 0.0);
                }
                self.fft_theta.process(&mut line_t);
                for m in 0..nt {
                    spec[idx(k, m, n)] = line_t[m];
                }
            }
            for m in 0..nt {
                for n in 0..nz {
                    line_z[n] = spec[idx(k, m, n)];
                }
                self.fft_z.process(&mut line_z);
                for n in 0..nz {
                    spec[idx(k, m, n)] = line_z[n];
                }
            }
        }

        let mut re = vec![0.0; nr - 1];
        let mut im = vec![0.0; nr - 1];
        for m in 0..nt {
            for n in 0..nz {
                let (sub, diag, sup) = self.mode_matrix(m, m == 0 && n == 0);
                for k in 1..nr {
                    re[k - 1] = spec[idx(k, m, n)].re;
                    im[k - 1] = spec[idx(k, m, n)].im;
                }
                tridiag::solve(&sub, &diag, &sup, &mut re)?;
                tridiag::solve(&sub, &diag, &sup, &mut im)?;
                for k in 1..nr {
                    spec[idx(k, m, n)] = Complex64::new(re[k - 1], im[k - 1]);
                }
            }
        }

        let norm = 1.0 / (nt * nz) as f64;
        let mut phi = Array3::zeros((nr + 1, nt, nz));
        for k in 1..nr {
            for m in 0..nt {
                for n in 0..nz {
                    line_z[n] = spec[idx(k, m, n)];
                }
                self.ifft_z.process(&mut line_z);
                for n in 0..nz {
                    spec[idx(k, m, n)] = line_z[n];
                }
            }
            for n in 0..nz {
                for m in 0..nt {
                    line_t[m] = spec[idx(k, m, n)];
                }
                self.ifft_theta.process(&mut line_t);
                for j in 0..nt {
                    phi[[k, j, n]] = line_t[j].re * norm;
                }
            }
        }
        let mean = phi.mean().unwrap_or(0.0);
        phi.mapv_inplace(|v| v - mean);
        Ok(NodalPotential(phi))
    }

    /// Solves with the source `n_i - n₀` given at cell centers
    /// (`n_r × n_θ × n_z`), averaged to the corners.
    pub fn solve(&self, source_centers: ArrayView3<f64>) -> Result<NodalPotential> {
        let rho = centers_to_corners(source_centers);
        self.solve_corner_source(rho.view())
    }

    /// Applies the discrete operator in physical space at interior corner
    /// nodes (boundary rows are returned as zero).
    pub fn apply(&self, phi: ArrayView3<f64>) -> Array3<f64> {
        let r = &self.polar.r;
        let (nr, nt, nz) = (r.n_cells(), self.polar.theta.n_cells(), self.nz);
        let dr2 = r.dx() * r.dx();
        let dth2 = self.polar.theta.dx().powi(2);
        let mut out = Array3::zeros((nr + 1, nt, nz));
        for k in 1..nr {
            let rk = r.node(k);
            let avg = phi.index_axis(NdAxis(0), k).mean().unwrap_or(0.0);
            for j in 0..nt {
                let (jm, jp) = ((j + nt - 1) % nt, (j + 1) % nt);
                for l in 0..nz {
                    let p = phi[[k, j, l]];
                    let radial = -(self.flux_coef[k] * (phi[[k + 1, j, l]] - p)
                        - self.flux_coef[k - 1] * (p - phi[[k - 1, j, l]]))
                        / (rk * dr2);
                    let angular = -self.perp_coef[k] * (phi[[k, jp, l]] - 2.0 * p + phi[[k, jm, l]])
                        / (dth2 * rk * rk);
                    out[[k, j, l]] = radial + angular + self.adiabatic[k] * (p - avg);
                }
            }
        }
        out
    }
}

/// Averages a cell-centered `(n_r, n_θ, n_z)` field to the `(n_r + 1, n_θ,
/// n_z)` corners; the two radial boundary rows are left at zero.
pub fn centers_to_corners(c: ArrayView3<f64>) -> Array3<f64> {
    let (nr, nt, nz) = c.dim();
    let mut out = Array3::zeros((nr + 1, nt, nz));
    for k in 1..nr {
        for j in 0..nt {
            let jm = (j + nt - 1) % nt;
            for l in 0..nz {
                out[[k, j, l]] =
                    0.25 * (c[[k - 1, jm, l]] + c[[k - 1, j, l]] + c[[k, jm, l]] + c[[k, j, l]]);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use std::f64::consts::PI;

    fn polar(nr: usize, nt: usize) -> PolarGrid {
        PolarGrid::new(
            Axis::neumann(nr, 1.0, 5.0).unwrap(),
            Axis::periodic(nt, 0.0, 2.0 * PI).unwrap(),
        )
        .unwrap()
    }

    fn max_abs<'a>(it: impl IntoIterator<Item = &'a f64>) -> f64 {
        it.into_iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    #[test]
    fn rigid_rotation_potential() {
        let g = polar(16, 32);
        let b = 2.0;
        let phi = Array2::from_shape_fn((17, 32), |(k, _)| b * g.r.node(k).powi(2) / 2.0);
        let (ar, at) = plane_velocity(phi.view(), &g, b);
        assert!(max_abs(ar.iter()) == 0.0);
        assert!(at.iter().all(|v| (v - 1.0).abs() < 1e-14));
    }

    #[test]
    fn constant_potential_gives_no_flow() {
        let g = polar(8, 8);
        let (ar, at) = plane_velocity(Array2::from_elem((9, 8), 3.3).view(), &g, 1.0);
        assert_eq!(max_abs(ar.iter()) + max_abs(at.iter()), 0.0);
    }

    #[test]
    fn random_potential_is_divergence_free() {
        let g = polar(32, 64);
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        let phi = Array2::from_shape_fn((33, 64), |_| rng.gen_range(-1.0..1.0));
        let (ar, at) = plane_velocity(phi.view(), &g, 1.0);
        let div = discrete_divergence(ar.view(), at.view(), &g);
        let scale = max_abs(ar.iter()).max(max_abs(at.iter()) * g.r.x_max()) / g.r.dx();
        assert!(max_abs(div.iter()) <= 1e-13 * scale);
    }

    #[test]
    fn radial_inverse_r_flow_is_divergence_free() {
        let g = polar(10, 12);
        let ar = Array2::from_shape_fn((11, 12), |(k, _)| 1.0 / g.r.node(k));
        let div = discrete_divergence(ar.view(), Array2::zeros((10, 12)).view(), &g);
        assert!(max_abs(div.iter()) < 1e-14);
    }

    #[test]
    fn spline_velocities_are_not_divergence_free() {
        let g = polar(32, 64);
        let phi = Array2::from_shape_fn((33, 64), |(k, j)| {
            let (r, t) = (g.r.node(k), g.theta.node(j));
            (r - 1.0) * (5.0 - r) * (3.0 * t).sin() + 0.2 * (r * (2.0 * t).cos()).sin()
        });
        let (ar, at) = spline_plane_velocity(phi.view(), &g, 1.0).unwrap();
        let div = discrete_divergence(ar.view(), at.view(), &g);
        assert!(max_abs(div.iter()) > 1e-6);
    }

    fn solver(nr: usize, nt: usize, nz: usize) -> QuasiNeutralSolver {
        QuasiNeutralSolver::new(&polar(nr, nt), nz, &PhysicalParams::default()).unwrap()
    }

    #[test]
    fn zero_source_zero_potential() {
        let s = solver(12, 16, 4);
        let phi = s.solve(Array3::zeros((12, 16, 4)).view()).unwrap();
        assert_eq!(max_abs(phi.0.iter()), 0.0);
    }

    #[test]
    fn manufactured_potential_round_trip() {
        let s = solver(24, 32, 8);
        let g = polar(24, 32);
        let mut target = Array3::from_shape_fn((25, 32, 8), |(k, j, l)| {
            let (r, t) = (g.r.node(k), g.theta.node(j));
            let z = 2.0 * PI * l as f64 / 8.0;
            (r - 1.0) * (5.0 - r) * (1.0 + (2.0 * t + z).cos() + 0.3 * (5.0 * t).sin() + 0.1 * r)
        });
        let mean = target.mean().unwrap();
        target.mapv_inplace(|v| v - mean);
        let rho = s.apply(target.view());
        let phi = s.solve_corner_source(rho.view()).unwrap();
        let scale = max_abs(target.iter());
        let err = max_abs((&phi.0 - &target).iter());
        assert!(err <= 1e-10 * scale, "err {err}");
        // residual check
        let res = &s.apply(phi.view()) - &rho;
        assert!(max_abs(res.iter()) <= 1e-10 * max_abs(rho.iter()));
        assert!(phi.0.mean().unwrap().abs() < 1e-14);
    }

    #[test]
    fn harmonic_source_gives_single_harmonic() {
        let (nr, nt, nz) = (20, 32, 8);
        let s = solver(nr, nt, nz);
        let g = polar(nr, nt);
        let (m, n) = (3usize, 2usize);
        let rho = Array3::from_shape_fn((nr + 1, nt, nz), |(k, j, l)| {
            let chi = (-(g.r.node(k) - 3.0).powi(2)).exp();
            chi * (m as f64 * g.theta.node(j) + 2.0 * PI * (n * l) as f64 / nz as f64).cos()
        });
        let phi = s.solve_corner_source(rho.view()).unwrap();
        // oracle: two-point boundary value problem for the (m, n) profile
        let (sub, diag, sup) = s.mode_matrix(m, false);
        let mut prof: Vec<f64> = (1..nr).map(|k| (-(g.r.node(k) - 3.0).powi(2)).exp()).collect();
        tridiag::solve(&sub, &diag, &sup, &mut prof).unwrap();
        for k in 1..nr {
            for j in 0..nt {
                for l in 0..nz {
                    let want = prof[k - 1]
                        * (m as f64 * g.theta.node(j) + 2.0 * PI * (n * l) as f64 / nz as f64).cos();
                    assert!((phi.0[[k, j, l]] - want).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn ez_and_parallel_acceleration() {
        let grid = PhaseGrid4D::new(
            Axis::neumann(4, 1.0, 2.0).unwrap(),
            Axis::periodic(4, 0.0, 2.0 * PI).unwrap(),
            Axis::periodic(8, 0.0, 8.0).unwrap(),
            Axis::neumann(4, -1.0, 1.0).unwrap(),
        )
        .unwrap();
        // Φ = z_l (linear in the plane index) except across the periodic seam
        let phi = NodalPotential(Array3::from_shape_fn((5, 4, 8), |(_, _, l)| {
            (2.0 * PI * grid.z.center(l) / 8.0).sin()
        }));
        let params = PhysicalParams {
            q_i: 2.0,
            ..Default::default()
        };
        let v = velocity_from_potential(&phi, &grid, &params);
        for ((_, _, l), a) in v.a_vpar.indexed_iter() {
            let zp = grid.z.center((l + 1) % 8);
            let zm = grid.z.center((l + 7) % 8);
            let dphi = (2.0 * PI * zp / 8.0).sin() - (2.0 * PI * zm / 8.0).sin();
            assert!((a + 2.0 * dphi / 2.0).abs() < 1e-14);
        }
        assert_eq!(max_abs(v.a_r.iter()), 0.0);
    }
}
