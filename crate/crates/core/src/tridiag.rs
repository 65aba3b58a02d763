//! Thomas algorithm for tridiagonal systems and its Sherman–Morrison
//! extension to cyclic (periodic) systems.

use crate::error::{Error, Result};

/// Solves `sub[i] x[i-1] + diag[i] x[i] + sup[i] x[i+1] = rhs[i]` in place.
///
/// `sub[0]` and `sup[n-1]` are ignored. On return `rhs` holds the solution.
pub fn solve(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &mut [f64]) -> Result<()> {
    let n = diag.len();
    debug_assert!(sub.len() == n && sup.len() == n && rhs.len() == n);
    if n == 0 {
        return Ok(());
    }
    let mut gam = vec![0.0; n];
    let mut bet = diag[0];
    if bet == 0.0 {
        return Err(Error::Singular { row: 0, pivot: bet });
    }
    rhs[0] /= bet;
    for i in 1..n {
        gam[i] = sup[i - 1] / bet;
        bet = diag[i] - sub[i] * gam[i];
        if bet == 0.0 || !bet.is_finite() {
            return Err(Error::Singular { row: i, pivot: bet });
        }
        rhs[i] = (rhs[i] - sub[i] * rhs[i - 1]) / bet;
    }
    for i in (0..n - 1).rev() {
        rhs[i] -= gam[i + 1] * rhs[i + 1];
    }
    Ok(())
}

/// Solves the cyclic system where row 0 also couples to `x[n-1]` through
/// `sub[0]` and row `n-1` couples to `x[0]` through `sup[n-1]`.
pub fn solve_cyclic(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &mut [f64]) -> Result<()> {
    let n = diag.len();
    debug_assert!(sub.len() == n && sup.len() == n && rhs.len() == n);
    if n < 3 {
        return Err(Error::Param(format!("cyclic system needs n >= 3, got {n}")));
    }
    let alpha = sup[n - 1];
    let beta = sub[0];
    let gamma = -diag[0];

    let mut bb = diag.to_vec();
    bb[0] = diag[0] - gamma;
    bb[n - 1] = diag[n - 1] - alpha * beta / gamma;

    solve(sub, &bb, sup, rhs)?;

    let mut u = vec![0.0; n];
    u[0] = gamma;
    u[n - 1] = alpha;
    solve(sub, &bb, sup, &mut u)?;

    let fact = (rhs[0] + beta * rhs[n - 1] / gamma) / (1.0 + u[0] + beta * u[n - 1] / gamma);
    for (x, z) in rhs.iter_mut().zip(&u) {
        *x -= fact * z;
    }
    Ok(())
}
