//! Run configuration, experiment drivers and output files.
//!
//! Configuration files are TOML with one table per concern (`[run]`,
//! `[scheme]`, `[grid]`, `[benchmark]`, `[physics]`, `[step1d]`,
//! `[rotation2d]`). Every table is optional and unknown keys are rejected.

use ndarray::{Array2, Axis as NdAxis};
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fs;
use std::io::{BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use crate::advect1d::{face_neighbours, flux_advect, flux_form_update, psm_advect, upwind_flux};
use crate::diag::{self, fmt_real, DiagRecord};
use crate::driftkin::{BenchmarkSpec, DriftKinetic, Form, GridSpec, Scheme, SchemeConfig};
use crate::error::{Error, Result};
use crate::field::{plane_velocity, PhysicalParams};
use crate::fv2d::{fv_update_split, fv_update_unsplit, plane_mass};
use crate::mesh::{Axis, PolarGrid};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Experiment {
    Step1d,
    Rotation2d,
    Driftkinetic,
}

impl Experiment {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Step1d => "step1d",
            Self::Rotation2d => "rotation2d",
            Self::Driftkinetic => "driftkinetic",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub experiment: Option<Experiment>,
    pub out_dir: PathBuf,
    /// Steps between diagnostic records.
    pub diag_stride: usize,
    /// Worker threads; 0 lets the runtime decide.
    pub threads: usize,
    pub seed: u64,
    /// Times at which `(r, θ)` slices are written.
    pub dump_times: Vec<f64>,
}

impl Default for RunSection {
    fn default() -> Self {
        Self {
            experiment: None,
            out_dir: PathBuf::from("out"),
            diag_stride: 1,
            threads: 1,
            seed: 0,
            dump_times: Vec::new(),
        }
    }
}

/// Step-profile test on a periodic line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Step1dConfig {
    pub n_cells: usize,
    pub length: f64,
    /// Displacement per iteration in cells.
    pub displacement: f64,
    pub iterations: usize,
    /// The step occupies `[step_start, step_end)` as fractions of the length.
    pub step_start: f64,
    pub step_end: f64,
    pub low: f64,
    pub high: f64,
    /// Iterations between profile snapshots.
    pub snapshot_stride: usize,
}

impl Default for Step1dConfig {
    fn default() -> Self {
        Self {
            n_cells: 70,
            length: 1.0,
            displacement: 0.2,
            iterations: 350,
            step_start: 0.25,
            step_end: 0.75,
            low: 0.0,
            high: 1.0,
            snapshot_stride: 35,
        }
    }
}

/// Solid-body rotation of a Gaussian blob in an annulus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RotationConfig {
    pub n_r: usize,
    pub n_theta: usize,
    pub r_min: f64,
    pub r_max: f64,
    pub b_z: f64,
    pub blob_r: f64,
    pub blob_theta: f64,
    pub blob_sigma: f64,
    pub cfl: f64,
    pub revolutions: f64,
}

impl Default for RotationConfig {
    fn default() -> Self {
        Self {
            n_r: 64,
            n_theta: 128,
            r_min: 1.0,
            r_max: 5.0,
            b_z: 1.0,
            blob_r: 3.0,
            blob_theta: PI / 2.0,
            blob_sigma: 0.4,
            cfl: 0.5,
            revolutions: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub run: RunSection,
    pub scheme: SchemeConfig,
    pub grid: GridSpec,
    pub benchmark: BenchmarkSpec,
    pub physics: PhysicalParams,
    pub step1d: Step1dConfig,
    pub rotation2d: RotationConfig,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    /// Checks everything needed by `experiment` before any allocation.
    pub fn validate(&self, experiment: Experiment) -> Result<()> {
        if let Some(e) = self.run.experiment {
            if e != experiment {
                return Err(Error::Config(format!(
                    "config is for experiment '{}' but '{}' was requested",
                    e.name(),
                    experiment.name()
                )));
            }
        }
        if self.run.diag_stride == 0 {
            return Err(Error::Config("run.diag_stride must be >= 1".into()));
        }
        let cfg = |e: Error| Error::Config(e.to_string());
        self.scheme.validate().map_err(cfg)?;
        match experiment {
            Experiment::Step1d => {
                let s = &self.step1d;
                if s.n_cells < 4 || !(s.length > 0.0) || s.snapshot_stride == 0 {
                    return Err(Error::Config("step1d needs n_cells >= 4, length > 0, snapshot_stride >= 1".into()));
                }
                if !(s.displacement.abs() <= 1.0) {
                    return Err(Error::Config("step1d.displacement must be at most one cell".into()));
                }
                if !(0.0 <= s.step_start && s.step_start < s.step_end && s.step_end <= 1.0) {
                    return Err(Error::Config("step1d needs 0 <= step_start < step_end <= 1".into()));
                }
            }
            Experiment::Rotation2d => {
                let r = &self.rotation2d;
                if self.scheme.form != Form::FiniteVolume {
                    return Err(Error::Config("rotation2d runs the finite-volume form only".into()));
                }
                if !(r.cfl > 0.0 && r.cfl <= 1.0) || !(r.blob_sigma > 0.0) || !(r.revolutions >= 0.0) || r.b_z == 0.0 {
                    return Err(Error::Config("rotation2d needs 0 < cfl <= 1, blob_sigma > 0, revolutions >= 0, b_z != 0".into()));
                }
                self.rotation_grid().map_err(cfg)?;
            }
            Experiment::Driftkinetic => {
                let grid = self.grid.build().map_err(cfg)?;
                self.physics.validate(grid.r()).map_err(cfg)?;
                self.benchmark.validate(&grid).map_err(cfg)?;
            }
        }
        Ok(())
    }

    fn rotation_grid(&self) -> Result<PolarGrid> {
        let r = &self.rotation2d;
        PolarGrid::new(
            Axis::neumann(r.n_r, r.r_min, r.r_max)?,
            Axis::periodic(r.n_theta, 0.0, 2.0 * PI)?,
        )
    }

    /// Config with derived defaults filled in, as echoed to the output.
    pub fn effective(&self, experiment: Experiment) -> Self {
        let mut c = self.clone();
        c.run.experiment = Some(experiment);
        if c.physics.r_p.is_none() {
            if let Ok(g) = c.grid.build() {
                c.physics.r_p = Some(c.physics.r_p(g.r()));
            }
        }
        c
    }
}

/// Magic bytes of slice dump files.
pub const VPSM_MAGIC: &[u8; 4] = b"VPSM";
pub const VPSM_VERSION: u32 = 1;

/// Writes `VPSM`, version, four dims and row-major values, all little-endian.
pub fn write_vpsm(path: &Path, dims: [u32; 4], values: &[f64]) -> Result<()> {
    let expected: usize = dims.iter().map(|d| *d as usize).product();
    if values.len() != expected {
        return Err(Error::Param(format!("dump holds {} values, dims {:?}", values.len(), dims)));
    }
    let mut w = BufWriter::new(fs::File::create(path)?);
    w.write_all(VPSM_MAGIC)?;
    w.write_all(&VPSM_VERSION.to_le_bytes())?;
    for d in dims {
        w.write_all(&d.to_le_bytes())?;
    }
    for v in values {
        w.write_all(&v.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_vpsm(path: &Path) -> Result<([u32; 4], Vec<f64>)> {
    let mut buf = Vec::new();
    fs::File::open(path)?.read_to_end(&mut buf)?;
    let bad = || Error::Param(format!("{} is not a VPSM v1 file", path.display()));
    if buf.len() < 24 || &buf[..4] != VPSM_MAGIC {
        return Err(bad());
    }
    let word = |i: usize| u32::from_le_bytes(buf[i..i + 4].try_into().unwrap());
    if word(4) != VPSM_VERSION {
        return Err(bad());
    }
    let dims = [word(8), word(12), word(16), word(20)];
    let n: usize = dims.iter().map(|d| *d as usize).product();
    if buf.len() != 24 + 8 * n {
        return Err(bad());
    }
    let values = buf[24..]
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok((dims, values))
}

fn write_sidecar(path: &Path, lines: &[(&str, String)]) -> Result<()> {
    let mut s = String::new();
    for (k, v) in lines {
        s.push_str(&format!("{k} = {v}\n"));
    }
    fs::write(path.with_extension("meta.txt"), s)?;
    Ok(())
}

fn dump_plane(path: &Path, plane: &Array2<f64>, meta: &[(&str, String)]) -> Result<()> {
    let (nr, nt) = plane.dim();
    let values: Vec<f64> = plane.iter().copied().collect();
    write_vpsm(path, [nr as u32, nt as u32, 1, 1], &values)?;
    write_sidecar(path, meta)
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text)?;
    Ok(())
}

fn echo_config(cfg: &RunConfig, experiment: Experiment, out: &Path) -> Result<()> {
    fs::create_dir_all(out)?;
    write_text(&out.join("config.toml"), &cfg.effective(experiment).to_toml()?)
}

/// Per-scheme statistics of the step test.
#[derive(Debug, Clone, PartialEq)]
pub struct StepStats {
    pub scheme: String,
    /// Largest `max f - high` over all iterations.
    pub overshoot: f64,
    /// Largest `low - min f` over all iterations.
    pub undershoot: f64,
    /// Largest relative mass change over all iterations.
    pub mass_error: f64,
    pub final_profile: Vec<f64>,
}

impl StepStats {
    /// Larger of over- and undershoot relative to the step height.
    pub fn peak_relative(&self, height: f64) -> f64 {
        self.overshoot.max(self.undershoot).max(0.0) / height
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Step1dReport {
    pub height: f64,
    pub stats: Vec<StepStats>,
}

impl Step1dReport {
    pub fn get(&self, scheme: &str) -> Option<&StepStats> {
        self.stats.iter().find(|s| s.scheme == scheme)
    }
}

/// Schemes of the step test: `psm`, `sls`, `upwind`.
pub const STEP1D_SCHEMES: [&str; 3] = ["psm", "sls", "upwind"];

fn step_line(name: &str, f: &[f64], axis: &Axis, feet: &[f64], dt: f64, k: f64) -> Result<Vec<f64>> {
    match name {
        "psm" => psm_advect(f, axis, feet),
        "sls" => flux_advect(f, axis, feet, dt, Some(k)),
        _ => {
            let n = axis.n_cells();
            let fluxes: Vec<f64> = (0..=n)
                .map(|kf| {
                    let a = (axis.node(kf) - feet[kf]) / dt;
                    let (l, r) = face_neighbours(f, axis.bc(), kf);
                    upwind_flux(l, r, a)
                })
                .collect();
            flux_form_update(f, &fluxes, dt, axis.dx())
        }
    }
}

/// Periodic step profile moved by a fixed fraction of a cell per iteration.
///
/// With `out` set, writes `profiles.csv` (one snapshot per
/// `snapshot_stride`) and `stats.csv`.
pub fn run_step1d(cfg: &RunConfig, only: Option<&str>, out: Option<&Path>) -> Result<Step1dReport> {
    cfg.validate(Experiment::Step1d)?;
    let s = &cfg.step1d;
    let axis = Axis::periodic(s.n_cells, 0.0, s.length)?;
    let dx = axis.dx();
    let init: Vec<f64> = (0..s.n_cells)
        .map(|i| {
            let (a, b) = (axis.node(i) / s.length, axis.node(i + 1) / s.length);
            let overlap = (b.min(s.step_end) - a.max(s.step_start)).max(0.0) / (b - a);
            s.low + (s.high - s.low) * overlap
        })
        .collect();
    let dt = 1.0;
    let feet: Vec<f64> = axis.nodes().iter().map(|x| x - s.displacement * dx).collect();
    let names: Vec<&str> = match only {
        Some(n) => {
            if !STEP1D_SCHEMES.contains(&n) {
                return Err(Error::Config(format!("unknown step1d scheme '{n}' (psm, sls, upwind)")));
            }
            vec![n]
        }
        None => STEP1D_SCHEMES.to_vec(),
    };
    let m0 = diag::kahan_sum(init.iter().copied());
    let mut snapshots: Vec<Vec<Vec<f64>>> = Vec::new();
    let mut stats = Vec::new();
    for name in &names {
        let mut f = init.clone();
        let (mut over, mut under, mut merr) = (0.0f64, 0.0f64, 0.0f64);
        let mut snaps = vec![f.clone()];
        for it in 1..=s.iterations {
            f = step_line(name, &f, &axis, &feet, dt, cfg.scheme.k)?;
            let (lo, hi) = diag::min_max(f.iter());
            over = over.max(hi - s.high);
            under = under.max(s.low - lo);
            let m = diag::kahan_sum(f.iter().copied());
            merr = merr.max(((m - m0) / m0).abs());
            if it % s.snapshot_stride == 0 {
                snaps.push(f.clone());
            }
        }
        snapshots.push(snaps);
        stats.push(StepStats {
            scheme: name.to_string(),
            overshoot: over,
            undershoot: under,
            mass_error: merr,
            final_profile: f,
        });
    }
    if let Some(out) = out {
        echo_config(cfg, Experiment::Step1d, out)?;
        let mut p = format!("iteration,x,{}\n", names.join(","));
        for (snap, _) in snapshots[0].iter().enumerate() {
            let iteration = snap * s.snapshot_stride;
            for i in 0..s.n_cells {
                p.push_str(&format!("{iteration},{}", fmt_real(axis.center(i))));
                for sn in &snapshots {
                    p.push_str(&format!(",{}", fmt_real(sn[snap][i])));
                }
                p.push('\n');
            }
        }
        write_text(&out.join("profiles.csv"), &p)?;
        let mut t = String::from("scheme,overshoot,undershoot,peak_relative,mass_error\n");
        for st in &stats {
            t.push_str(&format!(
                "{},{},{},{},{}\n",
                st.scheme,
                fmt_real(st.overshoot),
                fmt_real(st.undershoot),
                fmt_real(st.peak_relative(s.high - s.low)),
                fmt_real(st.mass_error)
            ));
        }
        write_text(&out.join("stats.csv"), &t)?;
    }
    Ok(Step1dReport {
        height: s.high - s.low,
        stats,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RotationReport {
    pub steps: usize,
    pub dt: f64,
    /// `‖f - f₀‖₂ / ‖f₀‖₂` with volume weights.
    pub l2_error: f64,
    /// Largest relative mass change over the run.
    pub mass_error: f64,
    pub initial: Array2<f64>,
    pub last: Array2<f64>,
}

/// Jacobian-weighted cell averages of `g(r, θ)` by 3×3 Gauss quadrature.
pub fn polar_cell_averages(polar: &PolarGrid, g: impl Fn(f64, f64) -> f64) -> Array2<f64> {
    let nodes = [-(0.6f64).sqrt(), 0.0, (0.6f64).sqrt()];
    let weights = [5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0];
    let (dr, dth) = (polar.r.dx(), polar.theta.dx());
    Array2::from_shape_fn((polar.r.n_cells(), polar.theta.n_cells()), |(i, j)| {
        let (rc, tc) = (polar.r.center(i), polar.theta.center(j));
        let mut acc = 0.0;
        for (a, wa) in nodes.iter().zip(&weights) {
            let r = rc + 0.5 * dr * a;
            for (b, wb) in nodes.iter().zip(&weights) {
                acc += wa * wb * r * g(r, tc + 0.5 * dth * b);
            }
        }
        acc / rc
    })
}

/// One or more revolutions of a Gaussian blob under `Φ = B r²/2`.
pub fn run_rotation2d(cfg: &RunConfig, out: Option<&Path>) -> Result<RotationReport> {
    cfg.validate(Experiment::Rotation2d)?;
    let rc = &cfg.rotation2d;
    let polar = cfg.rotation_grid()?;
    let phi = Array2::from_shape_fn((rc.n_r + 1, rc.n_theta), |(k, _)| {
        let r = polar.r.node(k);
        0.5 * rc.b_z * r * r
    });
    let (a_r, a_theta) = plane_velocity(phi.view(), &polar, rc.b_z);
    let omega = a_theta.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let period = 2.0 * PI / omega;
    let t_end = rc.revolutions * period;
    let steps = (t_end / (rc.cfl * polar.theta.dx() / omega)).ceil() as usize;
    let dt = if steps == 0 { 0.0 } else { t_end / steps as f64 };
    let (x0, y0) = (rc.blob_r * rc.blob_theta.cos(), rc.blob_r * rc.blob_theta.sin());
    let two_s2 = 2.0 * rc.blob_sigma * rc.blob_sigma;
    let f0 = polar_cell_averages(&polar, |r, t| {
        let (x, y) = (r * t.cos() - x0, r * t.sin() - y0);
        (-(x * x + y * y) / two_s2).exp()
    });
    let limiter = cfg.scheme.limiter();
    let m0 = plane_mass(f0.view(), &polar);
    let mut f = f0.clone();
    let mut mass_error = 0.0f64;
    let mut csv = String::from("step,time,mass\n");
    csv.push_str(&format!("0,{},{}\n", fmt_real(0.0), fmt_real(m0)));
    for step in 1..=steps {
        f = fv_update_unsplit(f.view(), a_r.view(), a_theta.view(), &polar, dt, limiter)?;
        let m = plane_mass(f.view(), &polar);
        mass_error = mass_error.max(((m - m0) / m0).abs());
        if step % cfg.run.diag_stride == 0 || step == steps {
            csv.push_str(&format!("{step},{},{}\n", fmt_real(step as f64 * dt), fmt_real(m)));
        }
    }
    let weighted = |a: &Array2<f64>| {
        diag::kahan_sum(a.indexed_iter().map(|((i, _), v)| v * v * polar.volume_unchecked(i))).sqrt()
    };
    let l2_error = weighted(&(&f - &f0)) / weighted(&f0);
    if let Some(out) = out {
        echo_config(cfg, Experiment::Rotation2d, out)?;
        write_text(&out.join("diagnostics.csv"), &csv)?;
        let meta = |t: f64| {
            vec![
                ("time", fmt_real(t)),
                ("scheme", cfg.scheme.label()),
                ("dims", "n_r n_theta 1 1".to_string()),
                ("r", format!("[{}, {}]", fmt_real(rc.r_min), fmt_real(rc.r_max))),
                ("theta", format!("[0, {}]", fmt_real(2.0 * PI))),
            ]
        };
        dump_plane(&out.join("initial.vpsm"), &f0, &meta(0.0))?;
        dump_plane(&out.join("final.vpsm"), &f, &meta(t_end))?;
        write_text(
            &out.join("summary.txt"),
            &format!(
                "steps = {steps}\ndt = {}\nl2_error = {}\nmass_error = {}\n",
                fmt_real(dt),
                fmt_real(l2_error),
                fmt_real(mass_error)
            ),
        )?;
    }
    Ok(RotationReport {
        steps,
        dt,
        l2_error,
        mass_error,
        initial: f0,
        last: f,
    })
}

/// Split form of the same rotation step, kept for cross-checks.
pub fn rotation_step_split(f: &Array2<f64>, polar: &PolarGrid, b_z: f64, dt: f64, limiter: Option<f64>) -> Result<Array2<f64>> {
    let phi = Array2::from_shape_fn((polar.r.n_cells() + 1, polar.theta.n_cells()), |(k, _)| {
        let r = polar.r.node(k);
        0.5 * b_z * r * r
    });
    let (a_r, a_theta) = plane_velocity(phi.view(), polar, b_z);
    fv_update_split(f.view(), a_r.view(), a_theta.view(), polar, dt, limiter)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DriftKineticReport {
    pub scheme: SchemeConfig,
    pub records: Vec<DiagRecord>,
}

/// Adds seeded uniform noise of relative size `amplitude` to `f`.
pub fn add_noise(f: &mut ndarray::Array4<f64>, amplitude: f64, seed: u64) {
    if amplitude == 0.0 {
        return;
    }
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    for v in f.iter_mut() {
        *v *= 1.0 + amplitude * rng.gen_range(-1.0..1.0);
    }
}

/// Predictor-corrector run until `t_end` or `max_steps`.
///
/// Records are taken at step 0, every `diag_stride` steps and at the last
/// step. With `out` set, writes `diagnostics.csv`, slice dumps at
/// `dump_times` and the effective config.
pub fn run_driftkinetic(cfg: &RunConfig, out: Option<&Path>) -> Result<DriftKineticReport> {
    cfg.validate(Experiment::Driftkinetic)?;
    let grid = cfg.grid.build()?;
    let mut dk = DriftKinetic::new(grid, cfg.physics.clone(), cfg.benchmark.clone(), cfg.scheme)?;
    if cfg.benchmark.noise != 0.0 {
        add_noise(&mut dk.f.data, cfg.benchmark.noise, cfg.run.seed);
        dk.refresh_fields()?;
    }
    let mut csv = None;
    if let Some(out) = out {
        echo_config(cfg, Experiment::Driftkinetic, out)?;
        let mut w = BufWriter::new(fs::File::create(out.join("diagnostics.csv"))?);
        writeln!(w, "{}", DiagRecord::HEADER)?;
        csv = Some(w);
    }
    let mut dumps: Vec<f64> = cfg.run.dump_times.clone();
    dumps.sort_by(f64::total_cmp);
    let mut next_dump = 0;
    let mut records = Vec::new();
    let bench = &cfg.benchmark;
    loop {
        let finished = dk.f.time >= bench.t_end * (1.0 - 1e-12) || dk.steps >= bench.max_steps;
        if dk.steps % cfg.run.diag_stride == 0 || finished {
            let rec = dk.record()?;
            if let Some(w) = csv.as_mut() {
                writeln!(w, "{}", rec.csv_row())?;
            }
            records.push(rec);
        }
        if let Some(out) = out {
            while next_dump < dumps.len() && dk.f.time >= dumps[next_dump] - 1e-12 {
                let iv = diag::vpar_zero_index(&dk.grid);
                let plane = dk
                    .f
                    .data
                    .index_axis(NdAxis(3), iv)
                    .index_axis(NdAxis(2), 0)
                    .to_owned();
                let meta = [
                    ("time", fmt_real(dk.f.time)),
                    ("scheme", cfg.scheme.label()),
                    ("dims", "n_r n_theta 1 1".to_string()),
                    ("slice", format!("z index 0, vpar index {iv}")),
                    ("r", format!("[{}, {}]", fmt_real(cfg.grid.r_min), fmt_real(cfg.grid.r_max))),
                    ("theta", format!("[0, {}]", fmt_real(2.0 * PI))),
                ];
                dump_plane(&out.join(format!("slice_{next_dump:04}.vpsm")), &plane, &meta)?;
                next_dump += 1;
            }
        }
        if finished {
            break;
        }
        if let Some(w) = csv.as_mut() {
            w.flush()?;
        }
        dk.step()?;
        dk.refresh_fields()?;
    }
    if let Some(w) = csv.as_mut() {
        w.flush()?;
    }
    Ok(DriftKineticReport {
        scheme: cfg.scheme,
        records,
    })
}

/// Maps a string to a scheme, as used on the command line.
pub fn parse_scheme(s: &str) -> Result<Scheme> {
    match s.to_ascii_lowercase().as_str() {
        "bsl" => Ok(Scheme::Bsl),
        "psm" => Ok(Scheme::Psm),
        "sls" => Ok(Scheme::Sls),
        other => Err(Error::Config(format!("unknown scheme '{other}' (bsl, psm, sls)"))),
    }
}

pub fn parse_form(s: &str) -> Result<Form> {
    match s.to_ascii_lowercase().replace('-', "_").as_str() {
        "ds" | "directional_split" | "split" => Ok(Form::DirectionalSplit),
        "fv" | "finite_volume" => Ok(Form::FiniteVolume),
        other => Err(Error::Config(format!("unknown form '{other}' (directional_split, finite_volume)"))),
    }
}
