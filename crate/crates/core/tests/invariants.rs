use ndarray::{Array2, Array3};
use proptest::prelude::*;
use psm_kinetic::advect1d::{bsl_advect, flux_advect, psm_advect};
use psm_kinetic::diag::{growth_rate_fit, kahan_sum, mode_amplitude_3d};
use psm_kinetic::driftkin::GridSpec;
use psm_kinetic::field::{discrete_divergence, plane_velocity};
use psm_kinetic::fv2d::{fv_update_split, fv_update_unsplit, plane_mass};
use psm_kinetic::mesh::{Axis, PolarGrid};
use psm_kinetic::spline::{CubicSpline, EndCondition, PrimitiveSpline};

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
}

fn polar(nr: usize, nt: usize) -> PolarGrid {
    PolarGrid::new(
        Axis::neumann(nr, 1.0, 5.0).unwrap(),
        Axis::periodic(nt, 0.0, std::f64::consts::TAU).unwrap(),
    )
    .unwrap()
}

fn profile(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.1f64..2.0, len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn spline_is_linear_in_data(u in profile(24), v in profile(24), a in -3.0f64..3.0, b in -3.0f64..3.0) {
        let w: Vec<f64> = u.iter().zip(&v).map(|(x, y)| a * x + b * y).collect();
        for end in [EndCondition::Periodic, EndCondition::Natural] {
            let su = CubicSpline::interpolate(0.0, 0.5, &u, end).unwrap();
            let sv = CubicSpline::interpolate(0.0, 0.5, &v, end).unwrap();
            let sw = CubicSpline::interpolate(0.0, 0.5, &w, end).unwrap();
            for k in 0..50 {
                let z = 0.23 * k as f64;
                let lin = a * su.eval(z) + b * sv.eval(z);
                prop_assert!((sw.eval(z) - lin).abs() <= 1e-12 * (1.0 + lin.abs()));
            }
        }
    }

    #[test]
    fn primitive_reproduces_averages(u in profile(20), periodic in any::<bool>()) {
        let axis = if periodic { Axis::periodic(20, -1.0, 3.0) } else { Axis::neumann(20, -1.0, 3.0) }.unwrap();
        let p = PrimitiveSpline::new(&u, &axis).unwrap();
        for (i, &ui) in u.iter().enumerate() {
            let avg = (p.eval(axis.node(i + 1)) - p.eval(axis.node(i))) / axis.dx();
            prop_assert!((avg - ui).abs() <= 1e-12);
        }
    }

    #[test]
    fn psm_remap_conserves_mass(u in profile(40), shift in -0.99f64..0.99, wobble in 0.0f64..0.3) {
        let axis = Axis::periodic(40, 0.0, 4.0).unwrap();
        let dx = axis.dx();
        let feet: Vec<f64> = (0..=40)
            .map(|k| axis.node(k) - dx * (shift + wobble * (0.7 * k as f64).sin()))
            .collect();
        let out = psm_advect(&u, &axis, &feet).unwrap();
        let (m0, m1) = (kahan_sum(u.iter().copied()), kahan_sum(out.iter().copied()));
        prop_assert!(((m1 - m0) / m0).abs() <= 1e-12);
    }

    #[test]
    fn limited_flux_form_conserves_mass(u in profile(40), shift in -0.99f64..0.99, k in 0.5f64..20.0, periodic in any::<bool>()) {
        let axis = if periodic { Axis::periodic(40, 0.0, 4.0) } else { Axis::neumann(40, 0.0, 4.0) }.unwrap();
        let dx = axis.dx();
        let mut feet: Vec<f64> = (0..=40).map(|j| axis.node(j) - shift * dx).collect();
        if !periodic {
            feet[0] = axis.node(0);
            feet[40] = axis.node(40);
        }
        for limiter in [None, Some(k)] {
            let out = flux_advect(&u, &axis, &feet, 0.3, limiter).unwrap();
            let (m0, m1) = (kahan_sum(u.iter().copied()), kahan_sum(out.iter().copied()));
            prop_assert!(((m1 - m0) / m0).abs() <= 1e-12);
        }
    }

    #[test]
    fn constant_shift_bsl_equals_psm(u in profile(64), shift in -0.99f64..0.99) {
        let axis = Axis::periodic(64, 0.0, 1.0).unwrap();
        let d = shift * axis.dx();
        let centers: Vec<f64> = axis.centers().iter().map(|x| x - d).collect();
        let nodes: Vec<f64> = axis.nodes().iter().map(|x| x - d).collect();
        let b = bsl_advect(&u, &axis, &centers).unwrap();
        let p = psm_advect(&u, &axis, &nodes).unwrap();
        prop_assert!(max_abs_diff(&b, &p) <= 1e-12);
    }

    #[test]
    fn corner_potential_velocities_are_divergence_free(seed in prop::collection::vec(-1.0f64..1.0, 9 * 16)) {
        let g = polar(8, 16);
        let phi = Array2::from_shape_vec((9, 16), seed).unwrap();
        let (ar, at) = plane_velocity(phi.view(), &g, 1.0);
        let div = discrete_divergence(ar.view(), at.view(), &g);
        let scale = ar.iter().chain(at.iter()).fold(0.0f64, |m, v| m.max(v.abs())) / g.r.dx().min(g.r.x_min() * g.theta.dx());
        prop_assert!(div.iter().all(|d| d.abs() <= 1e-13 * scale));
    }

    #[test]
    fn split_and_unsplit_agree(
        f in prop::collection::vec(0.5f64..1.5, 8 * 16),
        phi in prop::collection::vec(-1.0f64..1.0, 9 * 16),
        dt in 0.01f64..1.0,
        limited in any::<bool>(),
    ) {
        let g = polar(8, 16);
        let f = Array2::from_shape_vec((8, 16), f).unwrap();
        let mut phi = Array2::from_shape_vec((9, 16), phi).unwrap();
        phi.row_mut(0).fill(0.0);
        phi.row_mut(8).fill(0.0);
        let (mut ar, mut at) = plane_velocity(phi.view(), &g, 1.0);
        let vmax = ar.iter().chain(at.iter()).fold(0.0f64, |m, v| m.max(v.abs()));
        let c = 0.4 * g.r.dx().min(g.r.x_min() * g.theta.dx()) / (vmax * dt);
        ar.mapv_inplace(|v| v * c);
        at.mapv_inplace(|v| v * c);
        let lim = limited.then_some(5.0);
        let u = fv_update_unsplit(f.view(), ar.view(), at.view(), &g, dt, lim).unwrap();
        let s = fv_update_split(f.view(), ar.view(), at.view(), &g, dt, lim).unwrap();
        let d = u.iter().zip(s.iter()).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        prop_assert!(d <= 1e-13);
        let (m0, m1) = (plane_mass(f.view(), &g), plane_mass(u.view(), &g));
        prop_assert!(((m1 - m0) / m0).abs() <= 1e-13);
    }

    #[test]
    fn mode_amplitude_ignores_phase(phase in 0usize..32, eps in 1e-6f64..1.0) {
        let grid = GridSpec { n_r: 4, n_theta: 32, n_z: 8, n_vpar: 4, ..Default::default() }.build().unwrap();
        let field = |off: usize| {
            Array3::from_shape_fn((4, 32, 8), |(_, j, l)| {
                let th = grid.theta().center((j + off) % 32);
                let z = grid.z.center(l);
                1.0 + eps * (3.0 * th + std::f64::consts::TAU * 2.0 * z / grid.z.length()).cos()
            })
        };
        let a0 = mode_amplitude_3d(field(0).view(), &grid, 3, 2).unwrap();
        let a1 = mode_amplitude_3d(field(phase).view(), &grid, 3, 2).unwrap();
        prop_assert!((a0 - 0.5 * eps).abs() <= 1e-12);
        prop_assert!((a0 - a1).abs() <= 1e-13);
    }

    #[test]
    fn growth_fit_recovers_exponent(gamma in -0.1f64..0.1, a0 in 1e-8f64..1.0, n in 10usize..60) {
        let t: Vec<f64> = (0..n).map(|k| 2.0 * k as f64).collect();
        let a: Vec<f64> = t.iter().map(|t| a0 * (gamma * t).exp()).collect();
        let (g, r2) = growth_rate_fit(&t, &a).unwrap();
        prop_assert!((g - gamma).abs() <= 1e-10);
        prop_assert!(r2 >= 1.0 - 1e-10);
    }
}
