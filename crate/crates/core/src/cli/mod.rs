//! Command-line front end: run configuration, validation, sweep execution
//! and CSV output with a `#`-prefixed metadata header.

mod commands;

use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::basis::{dimension, BoundaryCondition, NamedState};
use crate::error::{Error, Result};
use crate::guard;
use crate::quench::QuenchModel;

pub use commands::run;

/// Prefix of the header line holding the JSON-encoded configuration.
pub const CONFIG_PREFIX: &str = "# config: ";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Ground state energy, entanglement and order parameters per field.
    GroundScan,
    /// Sector-resolved dynamical structure factor of sigma^x_k.
    SpectralDensity,
    /// Unfolded level spacings in one symmetry sector.
    LevelStats,
    /// Overlaps of a product state with every eigenstate.
    Overlaps,
    /// Time evolution of a product state.
    Quench,
    /// Logarithmic entanglement growth rate per field.
    GrowthScan,
    /// Soft-spin multipliers and dispersion per field.
    Softspin,
    /// Basis and sector dimensions.
    BasisInfo,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::GroundScan => "ground-scan",
            Command::SpectralDensity => "spectral-density",
            Command::LevelStats => "level-stats",
            Command::Overlaps => "overlaps",
            Command::Quench => "quench",
            Command::GrowthScan => "growth-scan",
            Command::Softspin => "softspin",
            Command::BasisInfo => "basis-info",
        }
    }
}

/// Every flag of every subcommand. Flags not used by a command are ignored
/// but still echoed into the output header.
#[derive(Clone, Debug, PartialEq, Parser, Serialize, Deserialize)]
#[command(name = "pxp2", version, about = "Constrained spin chains with cavity-mediated (PXP)^2 interactions")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    /// Number of sites.
    #[arg(long = "L", global = true, default_value_t = 12)]
    #[serde(rename = "L")]
    pub sites: usize,

    /// Boundary condition: open or periodic.
    #[arg(long, global = true, default_value_t = BoundaryCondition::Periodic)]
    pub bc: BoundaryCondition,

    /// Single field value.
    #[arg(long, global = true, allow_negative_numbers = true, conflicts_with = "delta_range")]
    pub delta: Option<f64>,

    /// Evenly spaced fields: START STOP STEPS (both ends included).
    #[arg(
        long = "delta-range",
        global = true,
        num_args = 3,
        value_names = ["START", "STOP", "STEPS"],
        allow_negative_numbers = true
    )]
    pub delta_range: Option<Vec<f64>>,

    /// Deformation of the pair-creation terms (deformed model).
    #[arg(long = "chi", global = true, default_value_t = 1.0)]
    pub chi_drive: f64,

    /// Strength of the symmetry-breaking field used with --broken.
    #[arg(long = "epsilon", global = true, default_value_t = 1e-4)]
    pub epsilon_break: f64,

    /// Gaussian broadening of spectral densities.
    #[arg(long, global = true, default_value_t = 0.05)]
    pub eta: f64,

    /// Add the symmetry-breaking field.
    #[arg(long, global = true)]
    pub broken: bool,

    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Output file (defaults to stdout).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Krylov subspace dimension for time evolution.
    #[arg(long = "krylov-dim", global = true, default_value_t = 30)]
    pub krylov_dim: usize,

    /// Local error target per Krylov step.
    #[arg(long = "krylov-tol", global = true, default_value_t = 1e-9)]
    pub krylov_tol: f64,

    /// Quench model: pxp2, deformed, lmg or sublattice_lmg_<p>.
    #[arg(long, global = true, default_value = "pxp2")]
    pub model: QuenchModel,

    /// Initial or target product state: vacuum, z2, z2_shifted, z3, z4.
    #[arg(long, global = true, default_value_t = NamedState::Z2)]
    pub state: NamedState,

    #[arg(long = "t-min", global = true, default_value_t = 0.1)]
    pub t_min: f64,

    #[arg(long = "t-max", global = true, default_value_t = 100.0)]
    pub t_max: f64,

    /// Log-spaced times after t = 0.
    #[arg(long = "n-times", global = true, default_value_t = 200)]
    pub n_times: usize,

    /// Fit window T1 T2 for growth rates.
    #[arg(long, global = true, num_args = 2, value_names = ["T1", "T2"], default_values_t = [1.0, 10.0])]
    pub window: Vec<f64>,

    /// Momentum indices n_k of the spectral density (defaults to 0 and L/2).
    #[arg(long, global = true, num_args = 1.., allow_negative_numbers = true)]
    pub momenta: Option<Vec<i32>>,

    #[arg(long = "omega-max", global = true, default_value_t = 6.0)]
    pub omega_max: f64,

    #[arg(long = "omega-points", global = true, default_value_t = 601)]
    pub omega_points: usize,

    /// Write the discrete peaks instead of the broadened density.
    #[arg(long, global = true)]
    pub peaks: bool,

    /// Momentum index of the level-statistics sector.
    #[arg(long = "k-index", global = true, default_value_t = 0, allow_negative_numbers = true)]
    pub k_index: i32,

    /// Inversion sign of the level-statistics sector (0: unresolved).
    #[arg(long, global = true, default_value_t = 1, allow_negative_numbers = true)]
    pub inversion: i8,

    /// Excitation-parity sign of the level-statistics sector (0: unresolved).
    #[arg(long, global = true, default_value_t = 1, allow_negative_numbers = true)]
    pub parity: i8,

    /// Fraction of levels dropped at each spectral edge.
    #[arg(long, global = true, default_value_t = 0.1)]
    pub trim: f64,

    /// Degree of the staircase polynomial used for unfolding.
    #[arg(long = "fit-degree", global = true, default_value_t = 7)]
    pub fit_degree: usize,

    /// Coupling of the soft-spin theory.
    #[arg(long = "J", global = true, default_value_t = 1.0)]
    #[serde(rename = "J")]
    pub j: f64,
}

fn argument<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Argument(msg.into()))
}

impl RunConfig {
    /// Field values of the sweep, in order.
    pub fn deltas(&self) -> Result<Vec<f64>> {
        match (&self.delta, &self.delta_range) {
            (Some(d), _) => Ok(vec![*d]),
            (None, Some(r)) => {
                let (start, stop, steps) = (r[0], r[1], r[2]);
                if steps < 1.0 || steps.fract() != 0.0 {
                    return argument(format!("STEPS must be a positive integer, got {steps}"));
                }
                let n = steps as usize;
                if n == 1 {
                    return Ok(vec![start]);
                }
                // snapped to 12 significant digits so that 0.55 + 0.05 reads 0.6
                Ok((0..n)
                    .map(|i| start + i as f64 * (stop - start) / (n - 1) as f64)
                    .map(|x| format!("{x:.11e}").parse().unwrap())
                    .collect())
            }
            (None, None) => Ok(vec![0.0]),
        }
    }

    pub fn momentum_list(&self) -> Vec<i32> {
        self.momenta.clone().unwrap_or_else(|| {
            let half = (self.sites / 2) as i32;
            if half == 0 {
                vec![0]
            } else {
                vec![0, half]
            }
        })
    }

    pub fn omega_grid(&self) -> Vec<f64> {
        let n = self.omega_points;
        if n == 1 {
            return vec![0.0];
        }
        (0..n).map(|i| self.omega_max * i as f64 / (n - 1) as f64).collect()
    }

    pub fn window_pair(&self) -> (f64, f64) {
        (self.window[0], self.window[1])
    }

    fn uses_constrained_basis(&self) -> bool {
        match self.command {
            Command::Softspin => false,
            Command::Quench | Command::GrowthScan => {
                matches!(self.model, QuenchModel::Pxp2 | QuenchModel::Deformed)
            }
            _ => true,
        }
    }

    /// Checks every flag and the size guards before anything is allocated.
    pub fn validate(&self) -> Result<()> {
        let len = self.sites;
        if !(2..=32).contains(&len) {
            return argument(format!("L must lie in 2..=32, got {len}"));
        }
        let deltas = self.deltas()?;
        if deltas.iter().any(|d| !d.is_finite()) {
            return argument("field values must be finite");
        }
        if !(self.chi_drive.is_finite() && self.epsilon_break.is_finite() && self.epsilon_break >= 0.0) {
            return argument("--chi must be finite and --epsilon finite and non-negative");
        }
        if self.broken && self.epsilon_break == 0.0 {
            return argument("--broken needs a nonzero --epsilon");
        }
        if !(self.eta > 0.0) {
            return argument(format!("--eta must be positive, got {}", self.eta));
        }
        if self.threads == Some(0) {
            return argument("--threads must be at least 1");
        }
        if self.krylov_dim < 2 || !(self.krylov_tol > 0.0) {
            return argument("--krylov-dim must be at least 2 and --krylov-tol positive");
        }
        if !(self.t_min > 0.0 && self.t_max > self.t_min) || self.n_times < 2 {
            return argument("time grid needs 0 < t-min < t-max and n-times >= 2");
        }
        let (t1, t2) = self.window_pair();
        if !(t1 > 0.0 && t2 > t1) {
            return argument(format!("--window needs 0 < T1 < T2, got {t1} {t2}"));
        }
        if !(self.omega_max > 0.0) || self.omega_points == 0 {
            return argument("--omega-max must be positive and --omega-points nonzero");
        }
        if ![-1, 0, 1].contains(&self.inversion) || ![-1, 0, 1].contains(&self.parity) {
            return argument("--inversion and --parity take -1, 0 or 1");
        }
        if !(0.0..0.5).contains(&self.trim) || self.fit_degree == 0 {
            return argument("--trim must lie in [0, 0.5) and --fit-degree be positive");
        }
        let needs_ring = matches!(
            self.command,
            Command::SpectralDensity | Command::LevelStats | Command::Overlaps
        );
        if needs_ring && self.bc != BoundaryCondition::Periodic {
            return argument(format!("{} needs --bc periodic", self.command.name()));
        }
        if self.command == Command::Softspin && (len % 2 == 1 || !(self.j.is_finite())) {
            return argument("softspin needs an even L and a finite --J");
        }
        if self.uses_constrained_basis() {
            guard::check("Krylov dim", dimension(len, self.bc), guard::MAX_KRYLOV_DIM)?;
        }
        Ok(())
    }

    /// Metadata lines that open every output file.
    pub fn header(&self) -> Result<String> {
        Ok(format!(
            "# command: {}\n{CONFIG_PREFIX}{}\n# version: {}\n",
            self.command.name(),
            serde_json::to_string(self)?,
            env!("CARGO_PKG_VERSION")
        ))
    }

    /// The configuration recorded in an output file's header.
    pub fn from_header<R: BufRead>(reader: R) -> Result<Self> {
        for line in reader.lines() {
            let line = line?;
            if let Some(json) = line.strip_prefix(CONFIG_PREFIX) {
                return Ok(serde_json::from_str(json)?);
            }
            if !line.starts_with('#') {
                break;
            }
        }
        argument("no configuration line in header")
    }

    /// Equality up to settings that do not change results.
    fn same_run(&self, other: &RunConfig) -> bool {
        let strip = |c: &RunConfig| RunConfig {
            threads: None,
            out: None,
            ..c.clone()
        };
        strip(self) == strip(other)
    }
}

/// Outcome of a run, reported through the exit code.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub completed: Vec<f64>,
    pub failed: Vec<FailedPoint>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FailedPoint {
    pub delta: f64,
    pub error: String,
}

impl Manifest {
    pub fn is_complete(&self) -> bool {
        self.failed.is_empty()
    }
}

/// Header-aware output sink. Sweeps that write to a file resume from the
/// points already flushed by an earlier run of the same configuration.
pub(crate) struct Output {
    sink: Box<dyn Write>,
    started: Instant,
}

impl Output {
    pub(crate) fn open(config: &RunConfig, columns: &[&str]) -> Result<(Self, Vec<String>)> {
        let started = Instant::now();
        let Some(path) = &config.out else {
            let mut sink: Box<dyn Write> = Box::new(std::io::stdout());
            write!(sink, "{}", config.header()?)?;
            writeln!(sink, "{}", columns.join(","))?;
            return Ok((Self { sink, started }, Vec::new()));
        };
        if path.exists() && std::fs::metadata(path)?.len() > 0 {
            let previous = RunConfig::from_header(BufReader::new(File::open(path)?))?;
            if !config.same_run(&previous) {
                return argument(format!(
                    "{} holds a different run; remove it or choose another --out",
                    path.display()
                ));
            }
            let text = std::fs::read_to_string(path)?;
            let (kept, rows) = resumable_prefix(&text);
            let mut file = OpenOptions::new().write(true).truncate(true).open(path)?;
            if kept.is_empty() {
                write!(file, "{}", config.header()?)?;
                writeln!(file, "{}", columns.join(","))?;
            }
            file.write_all(kept.as_bytes())?;
            file.flush()?;
            return Ok((
                Self {
                    sink: Box::new(file),
                    started,
                },
                rows,
            ));
        }
        let mut sink: Box<dyn Write> = Box::new(File::create(path)?);
        write!(sink, "{}", config.header()?)?;
        writeln!(sink, "{}", columns.join(","))?;
        sink.flush()?;
        Ok((Self { sink, started }, Vec::new()))
    }

    pub(crate) fn rows(&mut self, rows: &[String]) -> Result<()> {
        let mut block = String::new();
        for r in rows {
            block.push_str(r);
            block.push('\n');
        }
        self.sink.write_all(block.as_bytes())?;
        self.sink.flush()?;
        Ok(())
    }

    pub(crate) fn comment(&mut self, key: &str, value: impl std::fmt::Display) -> Result<()> {
        writeln!(self.sink, "# {key}: {value}")?;
        self.sink.flush()?;
        Ok(())
    }

    pub(crate) fn raw(&mut self) -> &mut dyn Write {
        &mut self.sink
    }

    pub(crate) fn finish(mut self) -> Result<()> {
        let wall = self.started.elapsed().as_secs_f64();
        self.comment("wall_time_s", format!("{wall:.3}"))
    }
}

/// Part of an interrupted sweep file that is kept on resume, with its data
/// rows. The last point written may be incomplete, so its rows and the
/// comments interleaved with them are dropped and the point is recomputed.
fn resumable_prefix(text: &str) -> (&str, Vec<String>) {
    let mut offset = 0;
    let mut header_end = None;
    // (key, byte offset where the point's first line starts, data rows)
    let mut groups: Vec<(String, usize, Vec<String>)> = Vec::new();
    let mut pending = None;
    for line in text.split_inclusive('\n') {
        let start = offset;
        offset += line.len();
        if !line.ends_with('\n') {
            break;
        }
        let body = line.trim_end_matches(['\n', '\r']);
        if header_end.is_none() {
            if !body.starts_with('#') {
                header_end = Some(offset);
            }
            continue;
        }
        if body.starts_with('#') {
            pending.get_or_insert(start);
            continue;
        }
        let key = body.split(',').next().unwrap_or_default().to_string();
        let begin = pending.take().unwrap_or(start);
        match groups.last_mut() {
            Some(g) if g.0 == key => g.2.push(body.to_string()),
            _ => groups.push((key, begin, vec![body.to_string()])),
        }
    }
    let Some(header_end) = header_end else {
        return (&text[..0], Vec::new());
    };
    let Some((_, cut, _)) = groups.pop() else {
        return (&text[..header_end], Vec::new());
    };
    (&text[..cut], groups.into_iter().flat_map(|g| g.2).collect())
}

/// Header and column row only, for commands whose body is written by a
/// library routine.
pub(crate) fn open_plain(config: &RunConfig) -> Result<Output> {
    let started = Instant::now();
    let mut sink: Box<dyn Write> = match &config.out {
        Some(path) => Box::new(File::create(path)?),
        None => Box::new(std::io::stdout()),
    };
    write!(sink, "{}", config.header()?)?;
    Ok(Output { sink, started })
}

/// Exit status: 0 when every point completed, 1 for refused or invalid
/// runs, 2 for partial completion.
pub fn exit_code(result: &Result<Manifest>) -> i32 {
    match result {
        Ok(m) if m.is_complete() => 0,
        Ok(_) => 2,
        Err(_) => 1,
    }
}
