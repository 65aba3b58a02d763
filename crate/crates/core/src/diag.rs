//! Run diagnostics: mass, L² norm, extrema, Fourier mode amplitudes and
//! growth-rate fits.
//!
//! Sums run in a fixed index order with compensated accumulation, so a given
//! field always yields the same bits.

use ndarray::{Array3, ArrayView3, ArrayView4, Axis as NdAxis};
use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::mesh::PhaseGrid4D;

/// Kahan compensated summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct Kahan {
    sum: f64,
    c: f64,
}

impl Kahan {
    #[inline]
    pub fn add(&mut self, x: f64) {
        let y = x - self.c;
        let t = self.sum + y;
        self.c = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn sum(&self) -> f64 {
        self.sum
    }
}

pub fn kahan_sum<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    let mut k = Kahan::default();
    for x in it {
        k.add(x);
    }
    k.sum()
}

/// `Σ f̄ Vol_i Δz Δv‖`.
pub fn mass(f: ArrayView4<f64>, grid: &PhaseGrid4D) -> f64 {
    let mut k = Kahan::default();
    for (i, plane) in f.axis_iter(NdAxis(0)).enumerate() {
        let w = grid.phase_volume(i);
        for v in plane.iter() {
            k.add(v * w);
        }
    }
    k.sum()
}

/// `(Σ f̄² Vol_i Δz Δv‖)^{1/2}`.
pub fn l2_norm(f: ArrayView4<f64>, grid: &PhaseGrid4D) -> f64 {
    let mut k = Kahan::default();
    for (i, plane) in f.axis_iter(NdAxis(0)).enumerate() {
        let w = grid.phase_volume(i);
        for v in plane.iter() {
            k.add(v * v * w);
        }
    }
    k.sum().sqrt()
}

pub fn min_max<'a>(values: impl IntoIterator<Item = &'a f64>) -> (f64, f64) {
    values
        .into_iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)))
}

/// Extrema of the `(r, θ)` slice at `v‖` index `iv` and z index `iz`.
pub fn slice_extrema(f: ArrayView4<f64>, iv: usize, iz: usize) -> Result<(f64, f64)> {
    let sh = f.shape();
    if iz >= sh[2] {
        return Err(Error::Index { index: iz, len: sh[2] });
    }
    if iv >= sh[3] {
        return Err(Error::Index { index: iv, len: sh[3] });
    }
    let slice = f.index_axis(NdAxis(3), iv);
    let slice = slice.index_axis(NdAxis(2), iz);
    Ok(min_max(slice.iter()))
}

/// Index of the `v‖` cell holding `v‖ = 0` (the upper one of a symmetric
/// even grid).
pub fn vpar_zero_index(grid: &PhaseGrid4D) -> usize {
    let v = &grid.vpar;
    (((0.0 - v.x_min()) / v.dx()).floor().max(0.0) as usize).min(v.n_cells() - 1)
}

/// Density `n(r, θ, z) = Σ f̄ Δv‖`.
pub fn density(f: ArrayView4<f64>, grid: &PhaseGrid4D) -> Array3<f64> {
    let dv = grid.vpar.dx();
    f.map_axis(NdAxis(3), |line| kahan_sum(line.iter().copied()) * dv)
}

/// Modulus of the Fourier coefficient
/// `(1/(N_θ N_z)) Σ_{j,l} u_{i,j,l} e^{-i(m θ_j + 2π n z_l / L_z)}`,
/// averaged over the radial index. A field `ε cos(mθ + 2πnz/L_z)` gives
/// `ε/2`.
pub fn mode_amplitude_3d(u: ArrayView3<f64>, grid: &PhaseGrid4D, m: i64, n: i64) -> Result<f64> {
    let (nr, nt, nz) = u.dim();
    if 2 * m.unsigned_abs() as usize > nt || 2 * n.unsigned_abs() as usize > nz {
        return Err(Error::Param(format!(
            "mode ({m}, {n}) outside the resolvable range of a {nt}×{nz} grid"
        )));
    }
    let th: Vec<(f64, f64)> = (0..nt)
        .map(|j| {
            let a = m as f64 * grid.theta().center(j);
            (a.cos(), a.sin())
        })
        .collect();
    let zz: Vec<(f64, f64)> = (0..nz)
        .map(|l| {
            let a = 2.0 * PI * n as f64 * grid.z.center(l) / grid.z.length();
            (a.cos(), a.sin())
        })
        .collect();
    let norm = 1.0 / (nt * nz) as f64;
    let mut acc = Kahan::default();
    for i in 0..nr {
        let (mut re, mut im) = (Kahan::default(), Kahan::default());
        for j in 0..nt {
            for l in 0..nz {
                let (c, s) = (th[j].0 * zz[l].0 - th[j].1 * zz[l].1, th[j].1 * zz[l].0 + th[j].0 * zz[l].1);
                let x = u[[i, j, l]];
                re.add(x * c);
                im.add(-x * s);
            }
        }
        acc.add(norm * re.sum().hypot(im.sum()));
    }
    Ok(acc.sum() / nr as f64)
}

/// Mode amplitude of the `v‖`-integrated density.
pub fn mode_amplitude(f: ArrayView4<f64>, grid: &PhaseGrid4D, m: i64, n: i64) -> Result<f64> {
    mode_amplitude_3d(density(f, grid).view(), grid, m, n)
}

/// Least-squares slope `γ` of `ln A(t)` and the coefficient of
/// determination `R²` (1 for a perfect line, also when `A` is constant).
pub fn growth_rate_fit(times: &[f64], amplitudes: &[f64]) -> Result<(f64, f64)> {
    if times.len() != amplitudes.len() {
        return Err(Error::Param("times and amplitudes differ in length".into()));
    }
    if times.len() < 10 {
        return Err(Error::Param(format!("growth fit needs at least 10 records, got {}", times.len())));
    }
    if let Some(a) = amplitudes.iter().find(|a| !(**a > 0.0)) {
        return Err(Error::Param(format!("non-positive amplitude {a} in fit window")));
    }
    let n = times.len() as f64;
    let y: Vec<f64> = amplitudes.iter().map(|a| a.ln()).collect();
    let tm = times.iter().sum::<f64>() / n;
    let ym = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (t, v) in times.iter().zip(&y) {
        sxy += (t - tm) * (v - ym);
        sxx += (t - tm) * (t - tm);
        syy += (v - ym) * (v - ym);
    }
    if sxx == 0.0 {
        return Err(Error::Param("growth fit needs distinct times".into()));
    }
    let gamma = sxy / sxx;
    let ss_res: f64 = times
        .iter()
        .zip(&y)
        .map(|(t, v)| {
            let e = v - ym - gamma * (t - tm);
            e * e
        })
        .sum();
    let r2 = if syy <= f64::EPSILON * f64::EPSILON * n * ym.abs().max(1.0) {
        1.0
    } else {
        1.0 - ss_res / syy
    };
    Ok((gamma, r2))
}

/// One diagnostics line.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagRecord {
    pub step: usize,
    pub time: f64,
    pub dt: f64,
    pub mass: f64,
    pub l2: f64,
    pub min: f64,
    pub max: f64,
    pub slice_min: f64,
    pub slice_max: f64,
    pub mode_amplitude: f64,
    pub phi_amplitude: f64,
    pub max_divergence: f64,
}

impl DiagRecord {
    pub const HEADER: &'static str =
        "step,time,dt,mass,l2,min,max,slice_min,slice_max,mode_amplitude,phi_amplitude,max_divergence";

    /// CSV row with 17 significant digits per real.
    pub fn csv_row(&self) -> String {
        let mut s = format!("{}", self.step);
        for v in [
            self.time,
            self.dt,
            self.mass,
            self.l2,
            self.min,
            self.max,
            self.slice_min,
            self.slice_max,
            self.mode_amplitude,
            self.phi_amplitude,
            self.max_divergence,
        ] {
            let _ = write!(s, ",{}", fmt_real(v));
        }
        s
    }
}

/// Scientific notation with 17 significant digits.
pub fn fmt_real(v: f64) -> String {
    format!("{v:.16e}")
}
