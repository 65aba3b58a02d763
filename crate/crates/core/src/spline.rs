//! Cubic splines on uniform knots.
//!
//! Two uses: interpolation of point values (backward semi-Lagrangian and
//! velocity fields) and the reconstruction of the primitive of cell averages
//! used by the conservative PSM remap.
//!
//! Splines are stored as knot values plus second derivatives ("moments").

use crate::error::{Error, Result};
use crate::mesh::{Axis, Bc};
use crate::tridiag;

/// End treatment of a cubic spline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EndCondition {
    /// Knots `0..n` with period `n·h`; the value at `n·h` is the value at 0.
    Periodic,
    /// Zero second derivative at both ends.
    Natural,
    /// Prescribed first derivative at both ends.
    Clamped { left: f64, right: f64 },
}

/// Cubic spline through equally spaced knots `origin + k·h`.
#[derive(Debug, Clone)]
pub struct CubicSpline {
    origin: f64,
    h: f64,
    y: Vec<f64>,
    m: Vec<f64>,
    periodic: bool,
}

impl CubicSpline {
    /// Builds the C² interpolant of `values` at knots `origin + k·h`.
    ///
    /// For [`EndCondition::Periodic`] the `n` values are one period; otherwise
    /// the spline covers `[origin, origin + (n-1)·h]`.
    pub fn interpolate(origin: f64, h: f64, values: &[f64], end: EndCondition) -> Result<Self> {
        let n = values.len();
        if n < 4 {
            return Err(Error::TooFewPoints(n));
        }
        if !(h > 0.0) {
            return Err(Error::Param(format!("knot spacing must be positive, got {h}")));
        }
        let y = values.to_vec();
        let s = 6.0 / (h * h);
        let m = match end {
            EndCondition::Periodic => {
                let mut rhs: Vec<f64> = (0..n)
                    .map(|k| s * (y[(k + n - 1) % n] - 2.0 * y[k] + y[(k + 1) % n]))
                    .collect();
                let ones = vec![1.0; n];
                let fours = vec![4.0; n];
                tridiag::solve_cyclic(&ones, &fours, &ones, &mut rhs)?;
                rhs
            }
            EndCondition::Natural => {
                let inner = n - 2;
                let mut rhs: Vec<f64> = (1..n - 1)
                    .map(|k| s * (y[k - 1] - 2.0 * y[k] + y[k + 1]))
                    .collect();
                let ones = vec![1.0; inner];
                let fours = vec![4.0; inner];
                tridiag::solve(&ones, &fours, &ones, &mut rhs)?;
                let mut m = Vec::with_capacity(n);
                m.push(0.0);
                m.extend_from_slice(&rhs);
                m.push(0.0);
                m
            }
            EndCondition::Clamped { left, right } => {
                let mut rhs: Vec<f64> = (0..n)
                    .map(|k| {
                        if k == 0 {
                            s * (y[1] - y[0] - h * left)
                        } else if k == n - 1 {
                            s * (h * right - (y[n - 1] - y[n - 2]))
                        } else {
                            s * (y[k - 1] - 2.0 * y[k] + y[k + 1])
                        }
                    })
                    .collect();
                let ones = vec![1.0; n];
                let mut diag = vec![4.0; n];
                diag[0] = 2.0;
                diag[n - 1] = 2.0;
                tridiag::solve(&ones, &diag, &ones, &mut rhs)?;
                rhs
            }
        };
        Ok(Self {
            origin,
            h,
            y,
            m,
            periodic: matches!(end, EndCondition::Periodic),
        })
    }

    /// Spline through point values at the cell centers of `axis`.
    ///
    /// Periodic axes get a periodic spline; Neumann axes get zero end slopes
    /// at the first and last centers and are constant beyond them.
    pub fn through_centers(values: &[f64], axis: &Axis) -> Result<Self> {
        check_len(values.len(), axis.n_cells())?;
        let end = match axis.bc() {
            Bc::Periodic => EndCondition::Periodic,
            Bc::Neumann => EndCondition::Clamped {
                left: 0.0,
                right: 0.0,
            },
        };
        Self::interpolate(axis.center(0), axis.dx(), values, end)
    }

    /// Spline through values at the nodes of `axis` (`n_cells + 1` values; on
    /// periodic axes the last one may be omitted). Neumann ends are natural.
    pub fn through_nodes(values: &[f64], axis: &Axis) -> Result<Self> {
        let n = axis.n_cells();
        match axis.bc() {
            Bc::Periodic => {
                if values.len() != n && values.len() != n + 1 {
                    check_len(values.len(), n)?;
                }
                Self::interpolate(axis.x_min(), axis.dx(), &values[..n], EndCondition::Periodic)
            }
            Bc::Neumann => {
                check_len(values.len(), n + 1)?;
                Self::interpolate(axis.x_min(), axis.dx(), values, EndCondition::Natural)
            }
        }
    }

    /// Number of intervals covered (one period for periodic splines).
    fn intervals(&self) -> usize {
        if self.periodic {
            self.y.len()
        } else {
            self.y.len() - 1
        }
    }

    pub fn is_periodic(&self) -> bool {
        self.periodic
    }

    /// Period length, or extent of the knot range.
    pub fn span(&self) -> f64 {
        self.intervals() as f64 * self.h
    }

    #[inline]
    fn locate(&self, z: f64) -> (usize, usize, f64) {
        let n = self.intervals();
        let mut u = (z - self.origin) / self.h;
        if self.periodic {
            u = u.rem_euclid(n as f64);
        } else {
            u = u.clamp(0.0, n as f64);
        }
        let k = (u.floor() as usize).min(n - 1);
        let t = u - k as f64;
        let k1 = if self.periodic && k + 1 == n { 0 } else { k + 1 };
        (k, k1, t)
    }

    /// Value at `z`. Periodic splines wrap; others clamp to the knot range.
    #[inline]
    pub fn eval(&self, z: f64) -> f64 {
        let (k, k1, t) = self.locate(z);
        let s = 1.0 - t;
        s * self.y[k]
            + t * self.y[k1]
            + self.h * self.h / 6.0 * ((s * s * s - s) * self.m[k] + (t * t * t - t) * self.m[k1])
    }

    /// First derivative at `z`.
    pub fn eval_d1(&self, z: f64) -> f64 {
        let (k, k1, t) = self.locate(z);
        let s = 1.0 - t;
        (self.y[k1] - self.y[k]) / self.h
            + self.h / 6.0 * (-(3.0 * s * s - 1.0) * self.m[k] + (3.0 * t * t - 1.0) * self.m[k1])
    }

    /// Second derivative at `z`.
    pub fn eval_d2(&self, z: f64) -> f64 {
        let (k, k1, t) = self.locate(z);
        (1.0 - t) * self.m[k] + t * self.m[k1]
    }

    /// Knot values and second derivatives, in knot order.
    pub fn knots(&self) -> (&[f64], &[f64]) {
        (&self.y, &self.m)
    }
}

fn check_len(got: usize, want: usize) -> Result<()> {
    if got < 4 {
        return Err(Error::TooFewPoints(got));
    }
    if got != want {
        return Err(Error::Param(format!("expected {want} values, got {got}")));
    }
    Ok(())
}

/// Cubic-spline reconstruction of the primitive `F(z) = ∫_{x_min}^{z} f` of a
/// line of cell averages.
///
/// The knots are the cumulative sums `F(x_k) = Σ_{i<k} f̄_i Δx`. The moments
/// are computed from differences of neighbouring averages, so increments
/// `F(z) - F(x_k)` come from the cells between `x_k` and `z` alone, without
/// differencing large cumulative values.
/// Periodic axes give a periodic `F'`. On Neumann axes the spline has natural
/// ends (`F'' = ∂f/∂n = 0`) and beyond the domain `F` continues linearly with
/// the boundary cell average, which is the even-reflection ghost value.
#[derive(Debug, Clone)]
pub struct PrimitiveSpline {
    x0: f64,
    h: f64,
    averages: Vec<f64>,
    /// Second derivatives at the nodes; `n` values on periodic axes.
    m: Vec<f64>,
    knots: Vec<f64>,
    periodic: bool,
}

impl PrimitiveSpline {
    pub fn new(averages: &[f64], axis: &Axis) -> Result<Self> {
        let n = axis.n_cells();
        check_len(averages.len(), n)?;
        let h = axis.dx();
        let mut knots = Vec::with_capacity(n + 1);
        let mut acc = 0.0;
        knots.push(0.0);
        for &a in averages {
            acc += a * h;
            knots.push(acc);
        }
        let s = 6.0 / h;
        let m = match axis.bc() {
            Bc::Periodic => {
                let mut rhs: Vec<f64> = (0..n).map(|k| s * (averages[k] - averages[(k + n - 1) % n])).collect();
                let ones = vec![1.0; n];
                let fours = vec![4.0; n];
                tridiag::solve_cyclic(&ones, &fours, &ones, &mut rhs)?;
                rhs
            }
            Bc::Neumann => {
                let mut rhs: Vec<f64> = (1..n).map(|k| s * (averages[k] - averages[k - 1])).collect();
                let ones = vec![1.0; n - 1];
                let fours = vec![4.0; n - 1];
                tridiag::solve(&ones, &fours, &ones, &mut rhs)?;
                let mut m = Vec::with_capacity(n + 1);
                m.push(0.0);
                m.extend_from_slice(&rhs);
                m.push(0.0);
                m
            }
        };
        Ok(Self {
            x0: axis.x_min(),
            h,
            averages: averages.to_vec(),
            m,
            knots,
            periodic: axis.is_periodic(),
        })
    }

    fn n(&self) -> usize {
        self.averages.len()
    }

    /// Average and end moments of cell `j`, which may lie outside the line.
    #[inline]
    fn cell(&self, j: i64) -> (f64, f64, f64) {
        let n = self.n() as i64;
        if self.periodic {
            let j = j.rem_euclid(n) as usize;
            (self.averages[j], self.m[j], self.m[(j + 1) % n as usize])
        } else if j < 0 {
            (self.averages[0], 0.0, 0.0)
        } else if j >= n {
            (self.averages[n as usize - 1], 0.0, 0.0)
        } else {
            let j = j as usize;
            (self.averages[j], self.m[j], self.m[j + 1])
        }
    }

    /// `F(x_j + t·h) - F(x_j)` for `t ∈ [0, 1]`.
    #[inline]
    fn partial(&self, j: i64, t: f64) -> f64 {
        let (a, m0, m1) = self.cell(j);
        let s = 1.0 - t;
        self.h * (a * t + self.h / 6.0 * ((s * s * s - s) * m0 + (t * t * t - t) * m1))
    }

    /// Position of node `k`; `k` may lie outside `0..=n`.
    pub fn node(&self, k: i64) -> f64 {
        self.x0 + k as f64 * self.h
    }

    /// `F(z) - F(x_k)` for node `k`, which may lie outside `0..=n`.
    pub fn increment(&self, k: i64, z: f64) -> f64 {
        let u = (z - self.node(k)) / self.h;
        let shift = u.floor();
        let t = u - shift;
        let shift = shift as i64;
        let mut whole = 0.0;
        if shift >= 0 {
            for j in k..k + shift {
                whole += self.cell(j).0;
            }
        } else {
            for j in k + shift..k {
                whole -= self.cell(j).0;
            }
        }
        whole * self.h + self.partial(k + shift, t)
    }

    /// `F_h(z)`, with `F_h(x_min) = 0`.
    #[inline]
    pub fn eval(&self, z: f64) -> f64 {
        let n = self.n();
        let u = (z - self.x0) / self.h;
        if self.periodic {
            let periods = (u / n as f64).floor();
            let r = u - periods * n as f64;
            let j = (r.floor() as usize).min(n - 1);
            periods * self.total() + self.knots[j] + self.partial(j as i64, r - j as f64)
        } else if u <= 0.0 {
            self.h * self.averages[0] * u
        } else if u >= n as f64 {
            self.total() + self.h * self.averages[n - 1] * (u - n as f64)
        } else {
            let j = (u.floor() as usize).min(n - 1);
            self.knots[j] + self.partial(j as i64, u - j as f64)
        }
    }

    /// Reconstructed point value `F_h'(z)`.
    pub fn derivative(&self, z: f64) -> f64 {
        let u = (z - self.x0) / self.h;
        let j = u.floor();
        let t = u - j;
        let (a, m0, m1) = self.cell(j as i64);
        let s = 1.0 - t;
        a + self.h / 6.0 * ((1.0 - 3.0 * s * s) * m0 + (3.0 * t * t - 1.0) * m1)
    }

    /// `Σ f̄_i Δx` over the whole line.
    pub fn total(&self) -> f64 {
        self.knots[self.n()]
    }
}
