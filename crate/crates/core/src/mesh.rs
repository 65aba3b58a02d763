//! Uniform structured grids and polar cell geometry.
//!
//! Distribution unknowns live at cell centers as cell averages; the electric
//! potential lives at the corners of the `(r, θ)` grid. Node `k` of an axis sits
//! at `x_min + k·Δx` and cell `i` spans nodes `i` and `i + 1`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Boundary condition carried by an axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Bc {
    Periodic,
    /// Zero normal derivative, realized by even reflection of ghost values.
    Neumann,
}

/// A uniform 1D axis of `n_cells` cells on `[x_min, x_max]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    n_cells: usize,
    x_min: f64,
    x_max: f64,
    bc: Bc,
    dx: f64,
}

impl Axis {
    pub const MIN_CELLS: usize = 4;

    pub fn new(n_cells: usize, x_min: f64, x_max: f64, bc: Bc) -> Result<Self> {
        if n_cells < Self::MIN_CELLS {
            return Err(Error::Grid(format!(
                "axis needs at least {} cells, got {n_cells}",
                Self::MIN_CELLS
            )));
        }
        if !(x_min.is_finite() && x_max.is_finite()) || x_max <= x_min {
            return Err(Error::Grid(format!("bad axis extent [{x_min}, {x_max}]")));
        }
        Ok(Self {
            n_cells,
            x_min,
            x_max,
            bc,
            dx: (x_max - x_min) / n_cells as f64,
        })
    }

    pub fn periodic(n_cells: usize, x_min: f64, x_max: f64) -> Result<Self> {
        Self::new(n_cells, x_min, x_max, Bc::Periodic)
    }

    pub fn neumann(n_cells: usize, x_min: f64, x_max: f64) -> Result<Self> {
        Self::new(n_cells, x_min, x_max, Bc::Neumann)
    }

    #[inline]
    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    #[inline]
    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    #[inline]
    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    #[inline]
    pub fn bc(&self) -> Bc {
        self.bc
    }

    #[inline]
    pub fn dx(&self) -> f64 {
        self.dx
    }

    #[inline]
    pub fn length(&self) -> f64 {
        self.x_max - self.x_min
    }

    #[inline]
    pub fn is_periodic(&self) -> bool {
        self.bc == Bc::Periodic
    }

    /// Coordinate of node `k` (`k = 0..=n_cells`).
    #[inline]
    pub fn node(&self, k: usize) -> f64 {
        self.x_min + k as f64 * self.dx
    }

    /// Coordinate of the center of cell `i`.
    #[inline]
    pub fn center(&self, i: usize) -> f64 {
        self.x_min + (i as f64 + 0.5) * self.dx
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..=self.n_cells).map(|k| self.node(k)).collect()
    }

    pub fn centers(&self) -> Vec<f64> {
        (0..self.n_cells).map(|i| self.center(i)).collect()
    }

    /// Maps a coordinate back into the domain: wrapped on periodic axes,
    /// clamped to the boundary nodes otherwise.
    pub fn fold(&self, x: f64) -> f64 {
        match self.bc {
            Bc::Periodic => self.x_min + (x - self.x_min).rem_euclid(self.length()),
            Bc::Neumann => x.clamp(self.x_min, self.x_max),
        }
    }
}

/// The `(r, θ)` polar cross-section with cell volumes `r_i Δr Δθ`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarGrid {
    pub r: Axis,
    pub theta: Axis,
}

impl PolarGrid {
    pub fn new(r: Axis, theta: Axis) -> Result<Self> {
        if r.x_min() <= 0.0 {
            return Err(Error::Grid(format!(
                "r_min must be positive (Jacobian r vanishes), got {}",
                r.x_min()
            )));
        }
        if !theta.is_periodic() {
            return Err(Error::Grid("θ axis must be periodic".into()));
        }
        if r.is_periodic() {
            return Err(Error::Grid("r axis must be Neumann".into()));
        }
        Ok(Self { r, theta })
    }

    /// `Vol_{i,j} = r_i Δr Δθ`; independent of `j`.
    pub fn cell_volume(&self, i: usize) -> Result<f64> {
        if i >= self.r.n_cells() {
            return Err(Error::Index {
                index: i,
                len: self.r.n_cells(),
            });
        }
        Ok(self.volume_unchecked(i))
    }

    #[inline]
    pub(crate) fn volume_unchecked(&self, i: usize) -> f64 {
        self.r.center(i) * self.r.dx() * self.theta.dx()
    }

    /// Area of an r-face (`A^r = Δθ`).
    #[inline]
    pub fn r_face_area(&self) -> f64 {
        self.theta.dx()
    }

    /// Area of a θ-face (`A^θ = Δr`).
    #[inline]
    pub fn theta_face_area(&self) -> f64 {
        self.r.dx()
    }

    pub fn total_volume(&self) -> f64 {
        (0..self.r.n_cells()).map(|i| self.volume_unchecked(i)).sum::<f64>()
            * self.theta.n_cells() as f64
    }
}

/// Full `(r, θ, z, v‖)` phase-space grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseGrid4D {
    pub polar: PolarGrid,
    pub z: Axis,
    pub vpar: Axis,
}

impl PhaseGrid4D {
    /// Builds the grid; θ and z must be periodic, r and v‖ Neumann.
    pub fn new(r: Axis, theta: Axis, z: Axis, vpar: Axis) -> Result<Self> {
        let polar = PolarGrid::new(r, theta)?;
        if !z.is_periodic() {
            return Err(Error::Grid("z axis must be periodic".into()));
        }
        if vpar.is_periodic() {
            return Err(Error::Grid("v‖ axis must be Neumann".into()));
        }
        Ok(Self { polar, z, vpar })
    }

    #[inline]
    pub fn r(&self) -> &Axis {
        &self.polar.r
    }

    #[inline]
    pub fn theta(&self) -> &Axis {
        &self.polar.theta
    }

    pub fn shape(&self) -> [usize; 4] {
        [
            self.polar.r.n_cells(),
            self.polar.theta.n_cells(),
            self.z.n_cells(),
            self.vpar.n_cells(),
        ]
    }

    pub fn cell_volume(&self, i: usize) -> Result<f64> {
        self.polar.cell_volume(i)
    }

    /// Phase-space measure of cell `(i, ·, ·, ·)`: `r_i Δr Δθ Δz Δv‖`.
    #[inline]
    pub fn phase_volume(&self, i: usize) -> f64 {
        self.polar.volume_unchecked(i) * self.z.dx() * self.vpar.dx()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn nodes_and_centers() {
        let a = Axis::neumann(4, 1.0, 9.0).unwrap();
        assert_eq!(a.nodes(), vec![1.0, 3.0, 5.0, 7.0, 9.0]);
        assert_eq!(a.centers(), vec![2.0, 4.0, 6.0, 8.0]);
        assert_eq!(a.dx(), 2.0);
        for i in 0..4 {
            assert_eq!(a.center(i), 0.5 * (a.node(i) + a.node(i + 1)));
        }
    }

    #[test]
    fn rejects_small_or_degenerate_axes() {
        assert!(Axis::periodic(3, 0.0, 1.0).is_err());
        assert!(Axis::periodic(8, 1.0, 1.0).is_err());
        let r = Axis::neumann(8, 0.0, 1.0).unwrap();
        let t = Axis::periodic(8, 0.0, 2.0 * PI).unwrap();
        assert!(matches!(PolarGrid::new(r, t), Err(Error::Grid(_))));
    }

    #[test]
    fn polar_cell_volumes() {
        // r_i = 2, Δr = 1, Δθ = π/2
        let g = PolarGrid::new(
            Axis::neumann(4, 1.5, 5.5).unwrap(),
            Axis::periodic(4, 0.0, 2.0 * PI).unwrap(),
        )
        .unwrap();
        assert!((g.cell_volume(0).unwrap() - PI).abs() < 1e-15);

        // r_i = 1, Δr = 0.5, Δθ = 0.1
        let g = PolarGrid::new(
            Axis::neumann(4, 0.75, 2.75).unwrap(),
            Axis::periodic(10, 0.0, 1.0).unwrap(),
        )
        .unwrap();
        assert!((g.cell_volume(0).unwrap() - 0.05).abs() < 1e-16);

        // r_i = 2, Δr = 1, Δθ = π
        let g = PolarGrid::new(
            Axis::neumann(4, 1.5, 5.5).unwrap(),
            Axis::periodic(4, 0.0, 4.0 * PI).unwrap(),
        )
        .unwrap();
        assert!((g.cell_volume(0).unwrap() - 2.0 * PI).abs() < 1e-15);
        assert!(matches!(g.cell_volume(4), Err(Error::Index { .. })));
    }

    #[test]
    fn annulus_volume_is_exact() {
        let (r0, r1) = (0.3, 7.1);
        let g = PolarGrid::new(
            Axis::neumann(57, r0, r1).unwrap(),
            Axis::periodic(93, 0.0, 2.0 * PI).unwrap(),
        )
        .unwrap();
        let exact = PI * (r1 * r1 - r0 * r0);
        assert!(((g.total_volume() - exact) / exact).abs() < 1e-14);
        let swept: f64 = (0..93).map(|_| g.theta.dx()).sum();
        assert!((swept - 2.0 * PI).abs() < 1e-13);
    }

    #[test]
    fn fold_wraps_or_clamps() {
        let p = Axis::periodic(8, 0.0, 2.0).unwrap();
        assert!((p.fold(2.25) - 0.25).abs() < 1e-15);
        assert!((p.fold(-0.5) - 1.5).abs() < 1e-15);
        let n = Axis::neumann(8, 0.0, 2.0).unwrap();
        assert_eq!(n.fold(-0.1), 0.0);
        assert_eq!(n.fold(2.1), 2.0);
    }
}
