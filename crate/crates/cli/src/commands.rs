use std::f64::consts::PI;

use serde_json::{json, Value};
use skinlab::dynamics::{
    bloch_period, degeneracy_splitting, evolve, make_wave_packet, reconstruct_spectrum, DrivePlan,
    ReconstructedSpectrum, WavePacketSpec,
};
use skinlab::export::{
    band_path_csv, density_csv, gbz_csv, kappa_csv, mask_csv, reconstruction_csv, spectrum_csv, trajectory_csv,
    RECONSTRUCTION_HEADER,
};
use skinlab::gbz::{char_poly, expanded_char_poly, gbz_slice, kappa_map};
use skinlab::lattice::{boundary_shell, make_geometry, GeometryMask, GeometrySpec, HoppingParams, Momentum};
use skinlab::models::{ModelDescriptor, Model};
use skinlab::spectral::{
    average_density, band_path, boundary_statistics, bulk_median_fd, eigensolve_with_cap, fractional_dimension,
    symmetry_residuals, ComplexSpectrum, MomentumPath,
};
use skinlab::wannier::{fit_tight_binding, WannierOptions};
use skinlab::Complex64;

use crate::config::{DriveSection, ModelSection, RunConfig};
use crate::failure::Failure;
use crate::output::Outcome;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Spectrum,
    Density,
    Gbz,
    Dynamics,
    SweepTheta,
    Wannier,
    Check,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::Density => "density",
            Command::Gbz => "gbz",
            Command::Dynamics => "dynamics",
            Command::SweepTheta => "sweep-theta",
            Command::Wannier => "wannier",
            Command::Check => "check",
        }
    }
}

pub struct Context<'a> {
    pub cfg: &'a RunConfig,
    pub threads: usize,
    pub verbose: bool,
}

impl Context<'_> {
    fn log(&self, msg: impl AsRef<str>) {
        if self.verbose {
            eprintln!("skinlab: {}", msg.as_ref());
        }
    }
}

pub fn run(cmd: Command, ctx: &Context) -> Result<Outcome, Failure> {
    match cmd {
        Command::Spectrum => spectrum(ctx),
        Command::Density => density(ctx),
        Command::Gbz => gbz(ctx),
        Command::Dynamics => dynamics(ctx),
        Command::SweepTheta => sweep_theta(ctx),
        Command::Wannier => wannier(ctx),
        Command::Check => check(ctx),
    }
}

fn descriptor(cfg: &RunConfig) -> Result<ModelDescriptor, Failure> {
    let model = cfg.model.lattice_model().ok_or_else(|| Failure::config("this subcommand needs a lattice model"))?;
    Ok(ModelDescriptor::new(model)?)
}

fn ladder(cfg: &RunConfig) -> Result<HoppingParams, Failure> {
    cfg.model.ladder().ok_or_else(|| Failure::config("this subcommand needs model.name = \"sp_ladder\""))
}

fn geometry(cfg: &RunConfig) -> Result<GeometrySpec, Failure> {
    cfg.geometry.ok_or_else(|| Failure::config("this subcommand needs a geometry section"))
}

fn drive(cfg: &RunConfig) -> Result<DriveSection, Failure> {
    cfg.drive.ok_or_else(|| Failure::config("this subcommand needs a drive section"))
}

fn finite_or_null(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

fn open_spectrum(ctx: &Context) -> Result<(GeometryMask, ComplexSpectrum), Failure> {
    let model = descriptor(ctx.cfg)?;
    let mask = make_geometry(&geometry(ctx.cfg)?)?;
    ctx.log(format!("{} cells, {} orbitals each", mask.len(), model.bands));
    let h = model.real_space(&mask);
    let spec = eigensolve_with_cap(&h, ctx.cfg.numerics.eigen_cap)?;
    Ok((mask, spec))
}

fn spectrum(ctx: &Context) -> Result<Outcome, Failure> {
    let n = &ctx.cfg.numerics;
    let (mask, spec) = open_spectrum(ctx)?;
    let shell = boundary_shell(&mask, n.boundary_layers)?;
    let stats = boundary_statistics(&spec, &shell)?;
    let median = bulk_median_fd(&spec, n.bulk_min_abs_re).unwrap_or(f64::NAN);
    Ok(Outcome {
        tables: vec![(None, spectrum_csv(&spec, &stats)?), (Some("mask"), mask_csv(&mask, &shell)?)],
        documents: Vec::new(),
        summary: json!({
            "cells": mask.len(),
            "dimension": spec.len(),
            "shell_cells": shell.count(),
            "mean_rho_b": stats.mean,
            "boundary_modes": stats.boundary_modes,
            "median_bulk_fd": finite_or_null(median),
        }),
    })
}

fn density(ctx: &Context) -> Result<Outcome, Failure> {
    let (mask, spec) = open_spectrum(ctx)?;
    let rho = average_density(&spec, &mask);
    let peak = rho.values.iter().copied().fold(0.0, f64::max);
    Ok(Outcome {
        tables: vec![(None, density_csv(&mask, &rho)?)],
        documents: Vec::new(),
        summary: json!({ "cells": mask.len(), "total": rho.total(), "max": peak }),
    })
}

fn gbz(ctx: &Context) -> Result<Outcome, Failure> {
    let p = ladder(ctx.cfg)?;
    let n = &ctx.cfg.numerics;
    ctx.log(format!("κ map on a {0}x{0} grid", n.kappa_grid));
    let field = kappa_map(&p, n.kappa_grid, n.stripe_len)?;
    let mut tables = vec![(None, kappa_csv(&field))];
    let mut slices = Vec::new();
    for &km in &n.gbz_slices {
        slices.push(gbz_slice(&p, km, n.stripe_len)?);
    }
    if !slices.is_empty() {
        tables.push((Some("slices"), gbz_csv(&slices)));
    }
    let unset = field.values.iter().filter(|v| !v.is_finite()).count();
    Ok(Outcome {
        tables,
        documents: Vec::new(),
        summary: json!({
            "max_abs_kappa": field.max_abs(),
            "unset_cells": unset,
            "failed_lines": field.failed_lines,
            "slice_acceptance": slices.iter().map(|s| s.accepted_share()).collect::<Vec<_>>(),
        }),
    })
}

/// Exact band energies along the drive, continued from `anchor` by nearest
/// eigenvalue; the same schema as the reconstruction.
fn exact_trace(model: &ModelDescriptor, rec: &ReconstructedSpectrum, anchor: Complex64) -> Result<String, Failure> {
    let first = rec.samples.first().ok_or_else(|| Failure::numeric("empty reconstruction"))?;
    let last = rec.samples[rec.samples.len() - 1];
    if let Model::SpLadder(p) = model.model {
        let bp = band_path(&p, MomentumPath::new(first.k, last.k, rec.samples.len()));
        let band = usize::from((bp.bands[0][0] - anchor).norm() > (bp.bands[1][0] - anchor).norm());
        return Ok(band_path_csv(&bp, band)?);
    }
    let mut out = format!("{RECONSTRUCTION_HEADER}\n");
    let mut prev = anchor;
    for s in &rec.samples {
        let bands = model.bands_at(Momentum::new(s.k.0, s.k.1))?;
        let e = bands
            .iter()
            .map(|b| b.0)
            .min_by(|a, b| (a - prev).norm().total_cmp(&(b - prev).norm()))
            .ok_or_else(|| Failure::numeric("model has no bands"))?;
        prev = e;
        out.push_str(&format!("{},{},{},{}\n", s.k.0, s.k.1, e.re, e.im));
    }
    Ok(out)
}

fn splitting_csv(points: &[(f64, f64)]) -> String {
    let mut out = String::from("re_E,splitting\n");
    for (e, d) in points {
        out.push_str(&format!("{e},{d}\n"));
    }
    out
}

fn dynamics(ctx: &Context) -> Result<Outcome, Failure> {
    let d = drive(ctx.cfg)?;
    let geom = geometry(ctx.cfg)?;
    let model = descriptor(ctx.cfg)?;
    let mask = make_geometry(&geom)?;
    let h = model.real_space(&mask);
    let k0 = Momentum::new(d.k0.0, d.k0.1);
    let spec = WavePacketSpec { sigma0: d.sigma0, ..WavePacketSpec::centered(&mask, k0, d.band) };
    let psi = make_wave_packet(&mask, &spec, &model)?;
    let duration = match d.duration {
        Some(t) => t,
        None => bloch_period(d.force)?,
    };
    let dt = d.dt.unwrap_or(DrivePlan::new(d.force, geom.l, None).dt);
    ctx.log(format!("{} steps of dt = {dt}", (duration / dt).ceil()));
    let traj = evolve(&h, k0, d.force, &psi, duration, dt)?;
    let bands = model.bands_at(k0)?;
    let anchor = bands.get(d.band).ok_or_else(|| Failure::config(format!("model has no band {}", d.band)))?.0;
    let rec = reconstruct_spectrum(&traj, anchor)?;
    let split = degeneracy_splitting(&rec);
    let exact = exact_trace(&model, &rec, anchor)?;
    Ok(Outcome {
        tables: vec![
            (None, reconstruction_csv(&rec)),
            (Some("trajectory"), trajectory_csv(&traj)),
            (Some("bands"), exact),
            (Some("splitting"), splitting_csv(&split.points)),
        ],
        documents: Vec::new(),
        summary: json!({
            "samples": rec.samples.len(),
            "dt": dt,
            "duration": duration,
            "anchor": [anchor.re, anchor.im],
            "max_splitting": split.max,
            "final_log_norm": traj.samples.last().map(|s| s.log_norm),
        }),
    })
}

struct SweepRow {
    theta_over_pi: f64,
    l: usize,
    cells: usize,
    rho_b: f64,
    boundary_modes: usize,
    median_fd: f64,
    max_splitting: f64,
}

/// Lifetime splitting of one drive at angle `theta`, truncated at `F_x t = π`.
/// The packet starts on the band that continues into the larger-`Im` band.
fn sweep_splitting(model: &ModelDescriptor, d: &DriveSection, theta: f64, l: usize) -> Result<f64, Failure> {
    let f = d.force.0.hypot(d.force.1);
    let force = (f * theta.cos(), f * theta.sin());
    if force.0 <= 0.0 {
        return Err(Failure::config("the θ sweep needs a drive with positive F_x"));
    }
    let mask = GeometryMask::rectangle(l, l);
    let h = model.real_space(&mask);
    let k0 = Momentum::new(d.k0.0, d.k0.1);
    let ahead = model.bands_at(Momentum::new(k0.kx - 1e-3 * force.0, k0.ky - 1e-3 * force.1))?[0].0;
    let bands = model.bands_at(k0)?;
    let band = usize::from((bands[0].0 - ahead).norm() > (bands[1].0 - ahead).norm());
    let spec = WavePacketSpec { sigma0: d.sigma0, ..WavePacketSpec::centered(&mask, k0, band) };
    let psi = make_wave_packet(&mask, &spec, model)?;
    let dt = d.dt.unwrap_or(DrivePlan::new(force, l, None).dt);
    let traj = evolve(&h, k0, force, &psi, PI / force.0, dt)?;
    Ok(degeneracy_splitting(&reconstruct_spectrum(&traj, bands[band].0)?).max)
}

fn sweep_point(ctx: &Context, p: HoppingParams, theta_over_pi: f64) -> Result<SweepRow, Failure> {
    let n = &ctx.cfg.numerics;
    let theta = theta_over_pi * PI;
    let geom = if theta == 0.0 { GeometrySpec::square(n.sweep_side) } else { GeometrySpec::fixed_side(theta, n.sweep_side) };
    let model = ModelDescriptor::new(Model::SpLadder(p))?;
    let mask = make_geometry(&geom)?;
    let spec = eigensolve_with_cap(&model.real_space(&mask), n.eigen_cap)?;
    let stats = boundary_statistics(&spec, &boundary_shell(&mask, n.boundary_layers)?)?;
    let max_splitting = match &ctx.cfg.drive {
        Some(d) => sweep_splitting(&model, d, theta, n.sweep_drive_l)?,
        None => f64::NAN,
    };
    ctx.log(format!("θ = {theta_over_pi}π done"));
    Ok(SweepRow {
        theta_over_pi,
        l: geom.l,
        cells: mask.len(),
        rho_b: stats.mean,
        boundary_modes: stats.boundary_modes,
        median_fd: bulk_median_fd(&spec, n.bulk_min_abs_re).unwrap_or(f64::NAN),
        max_splitting,
    })
}

fn non_decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] >= w[0])
}

fn sweep_theta(ctx: &Context) -> Result<Outcome, Failure> {
    let p = ladder(ctx.cfg)?;
    let thetas = &ctx.cfg.numerics.thetas_over_pi;
    let workers = ctx.threads.clamp(1, thetas.len().max(1));
    // Round-robin over workers; results are put back in θ order.
    let mut slots: Vec<Option<Result<SweepRow, Failure>>> = (0..thetas.len()).map(|_| None).collect();
    std::thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                s.spawn(move || {
                    (w..thetas.len()).step_by(workers).map(|i| (i, sweep_point(ctx, p, thetas[i]))).collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (i, r) in h.join().expect("sweep worker panicked") {
                slots[i] = Some(r);
            }
        }
    });
    let rows = slots.into_iter().map(|r| r.expect("every angle is assigned")).collect::<Result<Vec<_>, _>>()?;
    let mut csv = String::from("theta_over_pi,L,cells,rho_b,N_b,median_fd,max_splitting\n");
    for r in &rows {
        csv.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.theta_over_pi, r.l, r.cells, r.rho_b, r.boundary_modes, r.median_fd, r.max_splitting
        ));
    }
    let rho: Vec<f64> = rows.iter().map(|r| r.rho_b).collect();
    let split: Vec<f64> = rows.iter().map(|r| r.max_splitting).collect();
    Ok(Outcome {
        tables: vec![(None, csv)],
        documents: Vec::new(),
        summary: json!({
            "rho_b_non_decreasing": non_decreasing(&rho),
            "splitting_non_decreasing": if ctx.cfg.drive.is_some() { json!(non_decreasing(&split)) } else { Value::Null },
        }),
    })
}

fn wannier(ctx: &Context) -> Result<Outcome, Failure> {
    let ModelSection::OpticalLattice(lat) = ctx.cfg.model else {
        return Err(Failure::config("wannier needs model.name = \"optical_lattice\""));
    };
    let n = &ctx.cfg.numerics;
    let opts = WannierOptions { window: n.wannier_window, spacing: n.wannier_spacing, iterations: n.wannier_iterations };
    ctx.log("fitting (two quadrature resolutions)");
    let fit = fit_tight_binding(&lat.potential(), &opts, lat.gamma)?;
    let mut csv = String::from("dx,dy,ss,sp,ps,pp\n");
    for ((dx, dy), b) in &fit.blocks {
        csv.push_str(&format!("{dx},{dy},{},{},{},{}\n", b[0][0], b[0][1], b[1][0], b[1][1]));
    }
    let fragment = json!({ "model": Model::SpLadder(fit.params) });
    Ok(Outcome {
        tables: vec![(None, csv)],
        documents: vec![("model", fragment)],
        summary: json!({
            "params": fit.params,
            "orthonormality_residual": fit.residual,
            "mirrored": fit.mirrored,
        }),
    })
}

/// Low-discrepancy points in `[-π, π)²`.
fn sample_momenta(count: usize) -> Vec<Momentum> {
    const A: f64 = 0.754_877_666_246_692_8;
    const B: f64 = 0.569_840_290_998_053_2;
    (1..=count)
        .map(|i| {
            let i = i as f64;
            Momentum::new(-PI + 2.0 * PI * (A * i).fract(), -PI + 2.0 * PI * (B * i).fract())
        })
        .collect()
}

struct CheckRow {
    name: &'static str,
    value: f64,
    threshold: f64,
}

fn check(ctx: &Context) -> Result<Outcome, Failure> {
    let p = ladder(ctx.cfg)?;
    let mut rows = Vec::new();
    if p.delta_y == 0.0 {
        let res = symmetry_residuals(&p, &sample_momenta(ctx.cfg.numerics.symmetry_samples));
        rows.push(CheckRow { name: "mirror_residual", value: res.mirror, threshold: 1e-13 });
        rows.push(CheckRow { name: "transpose_mirror_residual", value: res.transpose_mirror, threshold: 1e-13 });
    }

    let mut poly = 0.0f64;
    for (i, k) in sample_momenta(16).iter().enumerate() {
        let e = Complex64::new(k.kx, 0.3 * k.ky - 0.2 * i as f64 / 16.0);
        let direct = char_poly(&p, k.kx, e)?;
        let closed = expanded_char_poly(&p, k.kx, e)?;
        for m in -3..=3 {
            poly = poly.max((direct.coeff(m) - closed.coeff(m)).norm());
        }
    }
    rows.push(CheckRow { name: "char_poly_expansion", value: poly, threshold: 1e-12 });

    let sites = 400;
    let mut calib = 0.0f64;
    for (support, d) in [(sites, 2.0), (20, 1.0), (1, 0.0)] {
        let a = 1.0 / (support as f64).sqrt();
        let psi: Vec<Complex64> = (0..sites).map(|i| Complex64::new(if i < support { a } else { 0.0 }, 0.0)).collect();
        calib = calib.max((fractional_dimension(&psi, sites)? - d).abs());
    }
    rows.push(CheckRow { name: "fractional_dimension_calibration", value: calib, threshold: 1e-12 });

    // every Bloch energy on an 8x8 momentum grid appears in the periodic lattice
    let model = ModelDescriptor::new(Model::SpLadder(p))?;
    let torus = eigensolve_with_cap(&model.periodic(8, 8), ctx.cfg.numerics.eigen_cap)?;
    let mut bloch = 0.0f64;
    for i in 0..8 {
        for j in 0..8 {
            let k = Momentum::new(2.0 * PI * i as f64 / 8.0, 2.0 * PI * j as f64 / 8.0);
            for (e, _) in model.bands_at(k)? {
                let nearest = torus.eigenvalues.iter().map(|z| (z - e).norm()).fold(f64::INFINITY, f64::min);
                bloch = bloch.max(nearest);
            }
        }
    }
    rows.push(CheckRow { name: "bloch_vs_periodic_lattice", value: bloch, threshold: 1e-9 });

    let hermitian = ModelDescriptor::new(Model::SpLadder(p.with_gamma(0.0)))?;
    let mask = make_geometry(&GeometrySpec::square(6))?;
    let spec = eigensolve_with_cap(&hermitian.real_space(&mask), ctx.cfg.numerics.eigen_cap)?;
    let im = spec.eigenvalues.iter().map(|e| e.im.abs()).fold(0.0, f64::max);
    rows.push(CheckRow { name: "lossless_spectrum_is_real", value: im, threshold: 1e-9 });

    let failed: Vec<&str> = rows.iter().filter(|r| !(r.value < r.threshold)).map(|r| r.name).collect();
    if !failed.is_empty() {
        return Err(Failure::numeric(format!("checks failed: {}", failed.join(", "))));
    }
    let mut csv = String::from("check,value,threshold,pass\n");
    for r in &rows {
        csv.push_str(&format!("{},{},{},1\n", r.name, r.value, r.threshold));
    }
    Ok(Outcome {
        tables: vec![(None, csv)],
        documents: Vec::new(),
        summary: json!({
            "checks": rows.iter().map(|r| (r.name.to_string(), json!(r.value))).collect::<serde_json::Map<_, _>>(),
            "symmetry_checks_skipped": p.delta_y != 0.0,
        }),
    })
}
