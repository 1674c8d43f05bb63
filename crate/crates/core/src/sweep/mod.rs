//! Viscosity sweeps: one viscous run per `eps`, full diagnostics, tables on disk.

mod config;

pub use config::{
    parse_config, DiagnosticSpec, GridSpec, InitialSpec, ReferenceSpec, RunConfig, SnapshotPolicy, StateSpec,
    OUTPUT_DIR_ENV,
};

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::diagnostics::{
    entropy_residual, gradient_functionals, higher_integrability, l1_distance, local_flux_functional,
    make_reference, total_energy, validate_initial, DiagnosticsReport, L1Row, ResidualSummary,
    StepIntegrals, UniformityRow, REPORT_SCHEMA_VERSION,
};
use crate::entropy::EntropyKernel;
use crate::error::{Error, Result};
use crate::field::{write_snapshot, SnapshotMeta, SolutionField};
use crate::riemann::{solve_riemann, RiemannData};
use crate::viscous::{mollified_riemann_data, preflight_wave_arrival, ViscousParams, ViscousSolver};

/// Everything produced by one viscous run.
#[derive(Debug, Clone)]
pub struct RunRecord {
    pub epsilon: f64,
    pub n_cells: usize,
    pub report: DiagnosticsReport,
    /// Snapshots kept according to the snapshot policy.
    pub snapshots: Vec<SolutionField>,
}

/// Outcome of one row of a sweep.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub epsilon: f64,
    pub outcome: std::result::Result<RunRecord, String>,
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub config: RunConfig,
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    pub fn failures(&self) -> impl Iterator<Item = (f64, &str)> {
        self.rows
            .iter()
            .filter_map(|r| r.outcome.as_ref().err().map(|e| (r.epsilon, e.as_str())))
    }

    pub fn records(&self) -> impl Iterator<Item = &RunRecord> {
        self.rows.iter().filter_map(|r| r.outcome.as_ref().ok())
    }

    /// Run failures and violated run invariants, one line each.
    pub fn invariant_violations(&self) -> Vec<String> {
        let mut out: Vec<String> = self.failures().map(|(e, m)| format!("eps={e:e}: run failed: {m}")).collect();
        for r in self.records() {
            out.extend(check_report(&r.report).into_iter().map(|m| format!("eps={:e}: {m}", r.epsilon)));
        }
        out
    }
}

/// Relative conservation drift tolerated after boundary-flux accounting.
pub const CONSERVATION_TOL: f64 = 1e-12;

/// Invariants every finished run must satisfy.
pub fn check_report(r: &DiagnosticsReport) -> Vec<String> {
    let mut out = Vec::new();
    for (k, name) in ["mass", "momentum"].iter().enumerate() {
        let d = r.conservation.relative_drift[k];
        if !(d <= CONSERVATION_TOL) {
            out.push(format!("{name} drift {d:.3e} exceeds {CONSERVATION_TOL:e}"));
        }
    }
    let monotone = |v: &[f64]| v.windows(2).all(|w| w[1] >= w[0]);
    if !monotone(&r.dissipation) {
        out.push("cumulative dissipation decreased".into());
    }
    if !monotone(&r.grad_functional_cum) {
        out.push("cumulative gradient functional decreased".into());
    }
    let series = [&r.energy_series, &r.dissipation, &r.grad_functional_instant, &r.grad_functional_cum];
    if series.iter().any(|s| s.iter().any(|v| !v.is_finite())) || !r.local_flux.is_finite() || !r.rho_gamma_plus_one.is_finite() {
        out.push("non-finite diagnostic".into());
    }
    out
}

/// One viscous run at viscosity `eps` with full diagnostics.
pub fn run_single(config: &RunConfig, eps: f64) -> Result<RunRecord> {
    config.validate()?;
    let eos = config.eos()?;
    let params = ViscousParams::new(eps, config.alpha)?;
    let far = config.far_field()?;
    let grid = config.grid_for(eps)?;
    let width = config.width_for(eps, &grid);
    let initial = mollified_riemann_data(&grid, &far, width)?;
    preflight_wave_arrival(&eos, &far, &grid, width, config.t_end)?;
    let reference = make_reference(far, config.reference.l0, config.reference.steepness)?;
    let solver = ViscousSolver::new(eos, params, far, config.cfl)?;
    let init_report = validate_initial(&eos, &initial, &reference, &params, solver.rho_floor);

    let mut integrals = StepIntegrals::new(eos, params);
    // (time after step, dissipation, gradient) after each step
    let mut trace: Vec<(f64, f64, f64)> = Vec::new();
    let out = solver.run(&initial, config.t_end, &config.output_times(), |f, dt| {
        integrals.observe(f, dt);
        trace.push((f.t + dt, integrals.dissipation, integrals.grad_cum));
    })?;
    let snaps = &out.snapshots;
    let times: Vec<f64> = snaps.iter().map(|s| s.t).collect();

    let mut dissipation = Vec::with_capacity(snaps.len());
    let mut grad_cum = Vec::with_capacity(snaps.len());
    let mut j = 0;
    let (mut d, mut g) = (0.0, 0.0);
    for &t in &times {
        while j < trace.len() && trace[j].0 <= t * (1.0 + 1e-12) {
            d = trace[j].1;
            g = trace[j].2;
            j += 1;
        }
        dissipation.push(d);
        grad_cum.push(g);
    }
    let energy_series: Vec<f64> = snaps.par_iter().map(|s| total_energy(&eos, s, &reference)).collect();
    let grad_instant: Vec<f64> = snaps.par_iter().map(|s| gradient_functionals(s, &params, &eos).0).collect();

    let diag = &config.diagnostics;
    let rho_gamma_plus_one = higher_integrability(&eos, snaps, diag.integrability_interval.0, diag.integrability_interval.1)?;
    let local_flux = local_flux_functional(&eos, snaps, diag.local_flux_interval)?;

    let kernel = EntropyKernel::new(eos)?;
    let mut entropy_residuals = Vec::with_capacity(diag.generators.len());
    for gen in &diag.generators {
        let r = entropy_residual(&kernel, snaps, gen, &params)?;
        entropy_residuals.push(ResidualSummary {
            generator: gen.to_string(),
            box_x: diag.residual_box.x,
            box_t: diag.residual_box.t,
            negative_sobolev: r.negative_sobolev_norm(&diag.residual_box)?,
            l2: r.l2_norm(&diag.residual_box)?,
            pairing: r.pairing(&diag.test_function),
        });
    }

    let waves = solve_riemann(&eos, &RiemannData { left: far.left, right: far.right })?;
    let l1_distances = snaps[1..]
        .par_iter()
        .map(|s| {
            let (l1_rho, l1_m) = l1_distance(&eos, s, &waves, diag.distance_interval, s.t)?;
            Ok(L1Row { t: s.t, l1_rho, l1_m })
        })
        .collect::<Result<Vec<_>>>()?;

    let report = DiagnosticsReport {
        schema_version: REPORT_SCHEMA_VERSION,
        gamma: config.gamma,
        alpha: config.alpha,
        epsilon: eps,
        n_cells: grid.n_cells,
        dx: grid.dx(),
        in_convergence_range: params.in_convergence_range(config.gamma),
        initial: init_report,
        times,
        energy_series,
        dissipation,
        grad_functional_instant: grad_instant,
        grad_functional_cum: grad_cum,
        integrability_interval: diag.integrability_interval,
        rho_gamma_plus_one,
        local_flux_interval: diag.local_flux_interval,
        local_flux,
        entropy_residuals,
        l1_distances,
        steps: out.steps,
        floor_events: out.floor_events,
        conservation: out.audit,
        warnings: out.warnings,
    };
    let snapshots = match config.snapshots {
        SnapshotPolicy::None => Vec::new(),
        SnapshotPolicy::Final => out.snapshots.last().cloned().into_iter().collect(),
        SnapshotPolicy::All => out.snapshots,
    };
    Ok(RunRecord {
        epsilon: eps,
        n_cells: grid.n_cells,
        report,
        snapshots,
    })
}

/// Runs every viscosity of the config in parallel; failures are recorded per row.
pub fn run_sweep(config: &RunConfig) -> Result<SweepResult> {
    config.validate()?;
    let rows = config
        .epsilons
        .par_iter()
        .map(|&eps| SweepRow {
            epsilon: eps,
            outcome: run_single(config, eps).map_err(|e| e.to_string()),
        })
        .collect();
    Ok(SweepResult {
        config: config.clone(),
        rows,
    })
}

pub const CONVERGENCE_HEADER: &str = "epsilon,n_cells,t,l1_rho,l1_m";

/// `convergence.csv`: one row per successful run, at its final time.
pub fn convergence_csv(result: &SweepResult) -> String {
    let mut s = String::from(CONVERGENCE_HEADER);
    s.push('\n');
    for r in result.records() {
        if let Some(last) = r.report.l1_distances.last() {
            let _ = writeln!(s, "{:e},{},{:e},{:e},{:e}", r.epsilon, r.n_cells, last.t, last.l1_rho, last.l1_m);
        }
    }
    s
}

/// `uniformity.csv`: one column per uniformly bounded functional.
pub fn uniformity_csv(result: &SweepResult) -> String {
    let mut s = UniformityRow::HEADER.join(",");
    s.push('\n');
    for r in result.records() {
        let v = r.report.uniformity_row().values();
        let cells: Vec<String> = v.iter().map(|x| format!("{x:e}")).collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    s
}

/// `max / min` of each uniformity column over the successful runs.
pub fn uniformity_ratios(result: &SweepResult) -> Vec<(&'static str, f64)> {
    let rows: Vec<[f64; 8]> = result.records().map(|r| r.report.uniformity_row().values()).collect();
    (1..UniformityRow::HEADER.len())
        .map(|k| {
            let max = rows.iter().map(|r| r[k]).fold(f64::NEG_INFINITY, f64::max);
            let min = rows.iter().map(|r| r[k]).fold(f64::INFINITY, f64::min);
            (UniformityRow::HEADER[k], if rows.is_empty() { f64::NAN } else { max / min })
        })
        .collect()
}

/// Human-readable summary of a sweep.
pub fn summary_text(result: &SweepResult) -> String {
    let c = &result.config;
    let mut s = String::new();
    let _ = writeln!(s, "cnslab sweep summary");
    let _ = writeln!(s, "gamma = {}, alpha = {}, in convergence range = {}", c.gamma, c.alpha, c.in_convergence_range());
    let _ = writeln!(s, "t_end = {}, cfl = {}", c.t_end, c.cfl);
    let _ = writeln!(s, "runs: {} ok, {} failed", result.records().count(), result.failures().count());
    let _ = writeln!(s);
    let _ = writeln!(s, "{:>12} {:>8} {:>12} {:>12} {:>10} {:>8}", "epsilon", "n_cells", "l1_rho", "l1_m", "floor", "steps");
    for row in &result.rows {
        match &row.outcome {
            Ok(r) => {
                let last = r.report.l1_distances.last();
                let _ = writeln!(
                    s,
                    "{:>12e} {:>8} {:>12.5e} {:>12.5e} {:>10} {:>8}",
                    r.epsilon,
                    r.n_cells,
                    last.map_or(f64::NAN, |l| l.l1_rho),
                    last.map_or(f64::NAN, |l| l.l1_m),
                    r.report.floor_events,
                    r.report.steps
                );
            }
            Err(e) => {
                let _ = writeln!(s, "{:>12e} FAILED: {e}", row.epsilon);
            }
        }
    }
    let _ = writeln!(s);
    let _ = writeln!(s, "max/min across the sweep:");
    for (name, ratio) in uniformity_ratios(result) {
        let _ = writeln!(s, "  {name:<20} {ratio:.4}");
    }
    let _ = writeln!(s);
    let _ = writeln!(s, "entropy residuals (negative-Sobolev norm, L2 norm, pairing):");
    for r in result.records() {
        for e in &r.report.entropy_residuals {
            let _ = writeln!(
                s,
                "  eps={:<10e} {:<8} {:>12.5e} {:>12.5e} {:>13.5e}",
                r.epsilon, e.generator, e.negative_sobolev, e.l2, e.pairing
            );
        }
    }
    let violations = result.invariant_violations();
    let _ = writeln!(s);
    if violations.is_empty() {
        let _ = writeln!(s, "all run invariants hold");
    } else {
        for v in violations {
            let _ = writeln!(s, "VIOLATION {v}");
        }
    }
    let _ = writeln!(s, "output is deterministic: identical configs produce identical files");
    s
}

/// File stem for one viscosity, e.g. `eps_1.25e-3`.
pub fn run_stem(eps: f64) -> String {
    format!("eps_{eps:e}")
}

/// Writes tables, summary, per-run reports and snapshots into `dir`; returns the written paths.
pub fn emit_report(result: &SweepResult, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let put = |name: String, text: String| -> Result<PathBuf> {
        let path = dir.join(name);
        std::fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
        Ok(path)
    };
    let mut written = vec![
        put("convergence.csv".into(), convergence_csv(result))?,
        put("uniformity.csv".into(), uniformity_csv(result))?,
        put("summary.txt".into(), summary_text(result))?,
        put("config.toml".into(), result.config.to_toml())?,
    ];
    for r in result.records() {
        let stem = run_stem(r.epsilon);
        written.push(put(format!("{stem}.report.json"), r.report.to_json() + "\n")?);
        let meta = SnapshotMeta {
            gamma: result.config.gamma,
            alpha: result.config.alpha,
            epsilon: r.epsilon,
        };
        for (k, snap) in r.snapshots.iter().enumerate() {
            let name = if result.config.snapshots == SnapshotPolicy::All {
                format!("{stem}.t{k:05}.dat")
            } else {
                format!("{stem}.final.dat")
            };
            let path = dir.join(name);
            write_snapshot(&path, snap, &meta)?;
            written.push(path);
        }
    }
    Ok(written)
}
