use std::collections::HashSet;

use rayon::prelude::*;

use super::{argument, open_plain, Command, FailedPoint, Manifest, Output, RunConfig};
use crate::basis::{dimension, named_state, BoundaryCondition, ConstrainedBasis, Space};
use crate::error::Result;
use crate::observables::level_statistics;
use crate::operators::{pxp2_operator, ModelParameters};
use crate::quench::{growth_rate_scan, log_times, run_quench_with, QuenchObservable, QuenchSpec};
use crate::scans::{ground_point, overlap_spectrum, pxp2_spectral_point, sector_levels, Branch};
use crate::softspin::{dispersion, solve_constraints};
use crate::solvers::KrylovOptions;
use crate::symmetry::{build_sectors_with, write_sector_summary, SectorLabel, SectorOptions};

const SOFTSPIN_TOL: f64 = 1e-12;

/// Shortest decimal that parses back to the same value.
pub(crate) fn num(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-4..1e6).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

/// Validates, sizes the thread pool and dispatches to the command.
pub fn run(config: &RunConfig) -> Result<Manifest> {
    config.validate()?;
    if let Some(n) = config.threads {
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match config.command {
        Command::GroundScan => ground_scan(config),
        Command::SpectralDensity => spectral_density(config),
        Command::LevelStats => level_stats(config),
        Command::Overlaps => overlaps(config),
        Command::Quench => quench(config),
        Command::GrowthScan => growth_scan(config),
        Command::Softspin => softspin(config),
        Command::BasisInfo => basis_info(config),
    }
}

fn params(config: &RunConfig, delta: f64) -> ModelParameters {
    ModelParameters {
        sites: config.sites,
        delta,
        bc: config.bc,
        chi_drive: config.chi_drive,
        epsilon_break: if config.broken { config.epsilon_break } else { 0.0 },
    }
}

fn basis(config: &RunConfig) -> Result<ConstrainedBasis> {
    ConstrainedBasis::enumerate(config.sites, config.bc)
}

/// Runs `point` for every field value not already in the output, in
/// parallel chunks of the pool size, writing each point as it finishes in
/// sweep order. Returns the sink, the manifest and every data row.
fn sweep<F>(config: &RunConfig, columns: &[&str], point: F) -> Result<(Output, Manifest, Vec<String>)>
where
    F: Fn(f64) -> Result<Vec<String>> + Sync,
{
    let deltas = config.deltas()?;
    let (mut out, previous) = Output::open(config, columns)?;
    let done: HashSet<String> = previous
        .iter()
        .filter_map(|r| r.split(',').next().map(str::to_string))
        .collect();
    let mut manifest = Manifest::default();
    let mut rows = previous;
    let todo: Vec<f64> = deltas
        .iter()
        .copied()
        .filter(|&d| {
            let seen = done.contains(&num(d));
            if seen {
                manifest.completed.push(d);
            }
            !seen
        })
        .collect();
    let chunk = rayon::current_num_threads().max(1);
    for group in todo.chunks(chunk) {
        let results: Vec<Result<Vec<String>>> = group.par_iter().map(|&d| point(d)).collect();
        for (&delta, r) in group.iter().zip(results) {
            match r {
                Ok(lines) => {
                    out.rows(&lines)?;
                    rows.extend(lines);
                    manifest.completed.push(delta);
                }
                Err(e) => manifest.failed.push(FailedPoint {
                    delta,
                    error: e.to_string(),
                }),
            }
        }
    }
    Ok((out, manifest, rows))
}

fn finish(out: Output, manifest: Manifest) -> Result<Manifest> {
    out.finish()?;
    Ok(manifest)
}

fn ground_scan(config: &RunConfig) -> Result<Manifest> {
    let basis = basis(config)?;
    let branches: &[Branch] = if config.broken {
        &[Branch::Symmetric, Branch::Broken]
    } else {
        &[Branch::Symmetric]
    };
    let columns = [
        "delta",
        "branch",
        "energy",
        "entropy_bits",
        "mx",
        "mx_projected",
        "mz_stag",
        "cavity_field",
    ];
    let (out, manifest, _) = sweep(config, &columns, |delta| {
        branches
            .iter()
            .map(|&b| {
                let r = ground_point(&basis, &params(config, delta), b)?;
                Ok([
                    num(delta),
                    b.to_string(),
                    num(r.energy),
                    num(r.entropy_bits),
                    num(r.order.mx),
                    num(r.order.mx_projected),
                    num(r.order.mz_stag),
                    num(r.order.cavity_field),
                ]
                .join(","))
            })
            .collect()
    })?;
    finish(out, manifest)
}

fn spectral_density(config: &RunConfig) -> Result<Manifest> {
    let basis = basis(config)?;
    let k_list = config.momentum_list();
    let grid = config.omega_grid();
    let columns: &[&str] = if config.peaks {
        &["delta", "k_index", "omega", "weight"]
    } else {
        &["delta", "k_index", "omega", "value"]
    };
    let (out, manifest, _) = sweep(config, columns, |delta| {
        let p = pxp2_spectral_point(&basis, delta, &k_list, &grid, config.eta)?;
        let d = &p.density;
        let mut lines = Vec::new();
        for (i, &k) in d.k_list.iter().enumerate() {
            if config.peaks {
                for &(w, weight) in &d.peaks[i] {
                    lines.push(format!("{},{k},{},{}", num(delta), num(w), num(weight)));
                }
            } else {
                for (&w, &v) in d.omega_grid.iter().zip(&d.values[i]) {
                    lines.push(format!("{},{k},{},{}", num(delta), num(w), num(v)));
                }
            }
        }
        Ok(lines)
    })?;
    finish(out, manifest)
}

fn level_label(config: &RunConfig) -> SectorLabel {
    let mut label = SectorLabel::new(config.k_index);
    if config.inversion != 0 {
        label = label.with_inversion(config.inversion);
    }
    if config.parity != 0 {
        label = label.with_parity(config.parity);
    }
    label
}

fn level_stats(config: &RunConfig) -> Result<Manifest> {
    let basis = basis(config)?;
    let label = level_label(config);
    let (out, manifest, _) = sweep(config, &["delta", "s"], |delta| {
        let op = pxp2_operator(&basis, &params(config, delta))?;
        let levels = sector_levels(&basis, &op, label)?;
        let r = level_statistics(&levels, config.trim, config.fit_degree)?;
        let d = r.distances;
        let mut lines = vec![format!(
            "# ks: delta={} sector={label} levels={} mean_spacing={} poisson={} wigner_dyson={} semi_poisson={} closest={}",
            num(delta),
            levels.len(),
            num(r.mean_spacing),
            num(d.poisson),
            num(d.wigner_dyson),
            num(d.semi_poisson),
            d.closest()
        )];
        lines.extend(r.spacings.iter().map(|&s| format!("{},{}", num(delta), num(s))));
        Ok(lines)
    })?;
    finish(out, manifest)
}

fn overlaps(config: &RunConfig) -> Result<Manifest> {
    let basis = basis(config)?;
    let target = named_state(&basis, config.state)?;
    let (out, manifest, _) = sweep(config, &["delta", "energy", "overlap"], |delta| {
        let op = pxp2_operator(&basis, &params(config, delta))?;
        Ok(overlap_spectrum(&basis, &op, &target)?
            .into_iter()
            .map(|(e, w)| format!("{},{},{}", num(delta), num(e), num(w)))
            .collect())
    })?;
    finish(out, manifest)
}

fn quench(config: &RunConfig) -> Result<Manifest> {
    let deltas = config.deltas()?;
    if deltas.len() != 1 {
        return argument("quench takes a single --delta");
    }
    let delta = deltas[0];
    let spec = QuenchSpec {
        model: config.model,
        params: params(config, delta),
        initial: config.state,
        times: log_times(config.t_min, config.t_max, config.n_times),
        observables: vec![
            QuenchObservable::Entropy,
            QuenchObservable::Correlations,
            QuenchObservable::OverlapWithInitial,
        ],
    };
    let krylov = KrylovOptions {
        krylov_dim: config.krylov_dim,
        tol: config.krylov_tol,
    };
    let series = run_quench_with(&spec, &krylov)?;
    let mut out = open_plain(config)?;
    series.write_csv(out.raw())?;
    finish(
        out,
        Manifest {
            completed: vec![delta],
            failed: vec![],
        },
    )
}

fn growth_scan(config: &RunConfig) -> Result<Manifest> {
    let window = config.window_pair();
    let (mut out, manifest, rows) = sweep(config, &["delta", "rate"], |delta| {
        let scan = growth_rate_scan(config.model, &params(config, delta), &[delta], config.state, window)?;
        Ok(vec![format!("{},{}", num(delta), num(scan.rates[0].1))])
    })?;
    let best = rows
        .iter()
        .filter_map(|r| {
            let (d, v) = r.split_once(',')?;
            Some((d.parse::<f64>().ok()?, v.parse::<f64>().ok()?))
        })
        .max_by(|a, b| a.1.total_cmp(&b.1));
    if let Some((d, _)) = best {
        out.comment("argmax_delta", num(d))?;
    }
    finish(out, manifest)
}

fn softspin(config: &RunConfig) -> Result<Manifest> {
    let columns = ["delta", "chi_constraint", "lambda", "k", "omega"];
    let (out, manifest, _) = sweep(config, &columns, |delta| {
        let p = solve_constraints(delta, config.j, config.sites, SOFTSPIN_TOL)?;
        let d = dispersion(&p)?;
        Ok(d.k_list
            .iter()
            .zip(&d.omega)
            .map(|(&k, &w)| {
                format!(
                    "{},{},{},{},{}",
                    num(delta),
                    num(p.chi_constraint),
                    num(p.lambda),
                    num(k),
                    num(w)
                )
            })
            .collect())
    })?;
    finish(out, manifest)
}

fn basis_info(config: &RunConfig) -> Result<Manifest> {
    let basis = basis(config)?;
    let mut out = open_plain(config)?;
    let w = out.raw();
    writeln!(w, "L: {}", config.sites)?;
    writeln!(w, "bc: {}", config.bc)?;
    writeln!(w, "dim: {}", basis.dim())?;
    writeln!(w, "closed_form: {}", dimension(config.sites, config.bc))?;
    writeln!(w, "full_space: {}", 1u64 << config.sites)?;
    if config.bc == BoundaryCondition::Periodic {
        writeln!(w)?;
        let sectors = build_sectors_with(&basis, SectorOptions::default())?;
        write_sector_summary(&sectors, &mut *w)?;
    }
    finish(out, Manifest::default())
}
