//! Command-line front end.
//!
//! Exit status: 0 on success, 1 when the requested result is infeasible
//! (annihilated or stalled trajectory, infeasible layout, empty sweep
//! optimum), 2 on configuration or usage errors. Diagnostics go to the
//! error stream only.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::circuit::{cascade_trace, evaluate_gate, GateKind, GateState};
use crate::config::{parse_config, RunConfig};
use crate::device::thiele_constants;
use crate::dse::{run_sweep, select_best, Objective};
use crate::error::Error;
use crate::performance::{stage_report, PerformanceReport, StageModels};
use crate::planner::{plan, plan_equal_spacing, trigger_ordinate, PlacementMode, RepeaterLayout};
use crate::report;
use crate::trajectory::{simulate_with, Outcome, SimOptions, SkyrmionState, Trajectory};

#[derive(Debug, Parser)]
#[command(name = "skylogic", version, about = "Skyrmion logic device simulator")]
pub struct Cli {
    /// Configuration file (key = value lines under [section] headers).
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Write outputs as files into this directory instead of stdout.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// SHM current density override (A/m^2).
    #[arg(long, global = true)]
    pub jx: Option<f64>,
    /// R-SHM current density override (A/m^2).
    #[arg(long, global = true)]
    pub jy: Option<f64>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Worker threads for the sweep (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Report,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GateArg {
    Inverter,
    Nor2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ObjectiveArg {
    EdpProp,
    EdpCombined,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Skyrmion trajectory along the track.
    Trajectory {
        /// Simulate without any repeaters.
        #[arg(long)]
        no_repeaters: bool,
        /// Samples per segment.
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Repeater layout for the configured drive.
    Plan,
    /// Stage delay, energy and EDP.
    Perf,
    /// Two-stage read-out and nucleation trace.
    Cascade {
        /// Skyrmion present at the first stage output (1) or not (0).
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(0..=1))]
        input: u8,
    },
    /// Gate truth table with the stage delay.
    Gate {
        #[arg(long, value_enum, default_value_t = GateArg::Nor2)]
        kind: GateArg,
    },
    /// Material design-space sweep.
    Dse {
        #[arg(long, value_enum)]
        objective: Option<ObjectiveArg>,
    },
}

/// Why a command did not succeed.
enum Failure {
    Infeasible(String),
    Config(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NoFeasiblePoint => Failure::Infeasible(e.to_string()),
            other => Failure::Config(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Config(e.to_string())
    }
}

struct Output<'a> {
    dir: Option<&'a Path>,
    stdout: &'a mut dyn Write,
    stderr: &'a mut dyn Write,
}

impl Output<'_> {
    /// Data goes to `name` inside the output directory, or to stdout.
    fn data(&mut self, name: &str, content: &str) -> Result<(), Failure> {
        match self.dir {
            Some(dir) => {
                fs::create_dir_all(dir)?;
                let path = dir.join(name);
                fs::write(&path, content)?;
                writeln!(self.stderr, "wrote {}", path.display())?;
            }
            None => self.stdout.write_all(content.as_bytes())?,
        }
        Ok(())
    }

    fn note(&mut self, text: &str) -> Result<(), Failure> {
        writeln!(self.stderr, "{text}")?;
        Ok(())
    }
}

fn load_config(cli: &Cli) -> Result<RunConfig, Failure> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
            parse_config(&text)
                .map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?
        }
        None => RunConfig::default(),
    };
    if let Some(jx) = cli.jx {
        cfg.drive.jx = jx;
        cfg.sweep.jx = jx;
    }
    if let Some(jy) = cli.jy {
        cfg.drive.jy = jy;
        cfg.sweep.jy = jy;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn layout_for(cfg: &RunConfig, tc: &crate::device::ThieleConstants) -> crate::Result<RepeaterLayout> {
    match cfg.planner.mode {
        PlacementMode::EqualSpacing => plan_equal_spacing(tc, &cfg.geometry, cfg.planner.p_max),
        _ => plan(tc, &cfg.geometry, cfg.planner.p_max),
    }
}

fn stage_performance(cfg: &RunConfig, traj: &Trajectory, layout: &RepeaterLayout) -> crate::Result<PerformanceReport> {
    stage_report(
        traj,
        layout,
        &StageModels {
            material: &cfg.material,
            geometry: &cfg.geometry,
            drive: &cfg.drive,
            energy: &cfg.energy,
            nucleation: &cfg.nucleation,
            mtj: &cfg.mtj,
            read: &cfg.read,
        },
    )
}

/// Plans and simulates the configured device; `Err` carries the
/// infeasibility as text.
fn propagate(cfg: &RunConfig) -> Result<(RepeaterLayout, Trajectory), Failure> {
    let tc = thiele_constants(&cfg.material, &cfg.geometry, &cfg.drive, &cfg.constants)?;
    let layout = layout_for(cfg, &tc)?;
    if !layout.feasible {
        return Err(Failure::Infeasible(format!(
            "layout infeasible: {}",
            layout.infeasibility_reason
        )));
    }
    let traj = simulate_with(&tc, &cfg.geometry, &layout, SkyrmionState::default(), &SimOptions::default())?;
    if traj.outcome != Outcome::Reached {
        return Err(Failure::Infeasible(format!("trajectory outcome {}", traj.outcome)));
    }
    Ok((layout, traj))
}

fn execute(cli: &Cli, out: &mut Output<'_>) -> Result<(), Failure> {
    let cfg = load_config(cli)?;
    let format = cli.format;
    match &cli.command {
        Command::Trajectory {
            no_repeaters,
            samples,
        } => {
            let tc = thiele_constants(&cfg.material, &cfg.geometry, &cfg.drive, &cfg.constants)?;
            let layout = if *no_repeaters {
                RepeaterLayout::none()
            } else {
                let planned = layout_for(&cfg, &tc)?;
                if !planned.feasible {
                    return Err(Failure::Infeasible(format!(
                        "layout infeasible: {}",
                        planned.infeasibility_reason
                    )));
                }
                planned
            };
            let traj = simulate_with(
                &tc,
                &cfg.geometry,
                &layout,
                SkyrmionState::default(),
                &SimOptions {
                    samples_per_segment: (*samples).max(1),
                },
            )?;
            let summary = report::trajectory_report(&traj);
            if out.dir.is_some() {
                out.data("trajectory.csv", &traj.to_csv())?;
                out.data("trajectory.txt", &summary)?;
            } else if format == Some(Format::Report) {
                out.data("trajectory.txt", &summary)?;
            } else {
                out.data("trajectory.csv", &traj.to_csv())?;
            }
            out.note(&format!("outcome: {}", traj.outcome))?;
            if traj.outcome != Outcome::Reached {
                return Err(Failure::Infeasible(format!(
                    "skyrmion did not reach the output ({})",
                    traj.outcome
                )));
            }
        }
        Command::Plan => {
            let tc = thiele_constants(&cfg.material, &cfg.geometry, &cfg.drive, &cfg.constants)?;
            let layout = layout_for(&cfg, &tc)?;
            let trigger = trigger_ordinate(&cfg.geometry)?;
            out.data("plan.txt", &report::layout_report(&layout, &cfg.geometry, trigger))?;
            if !layout.feasible {
                return Err(Failure::Infeasible(format!(
                    "layout infeasible: {}",
                    layout.infeasibility_reason
                )));
            }
        }
        Command::Perf => {
            let (layout, traj) = propagate(&cfg)?;
            let perf = stage_performance(&cfg, &traj, &layout)?;
            out.data("perf.txt", &report::performance_report(&perf))?;
        }
        Command::Cascade { input } => {
            let first = cascade_trace(
                *input == 1,
                &cfg.mtj,
                &cfg.read,
                &cfg.transistor,
                &cfg.geometry,
                cfg.drive.j_c_nuc,
            )?;
            let second = cascade_trace(
                first.nucleated,
                &cfg.mtj,
                &cfg.read,
                &cfg.transistor,
                &cfg.geometry,
                cfg.drive.j_c_nuc,
            )?;
            for stage in [&first, &second] {
                if stage.extrapolated {
                    out.note(&format!(
                        "warning: v_out = {} V lies outside the transistor calibration range",
                        stage.v_out
                    ))?;
                }
            }
            out.data("cascade.txt", &report::cascade_report(&[first, second], "negative"))?;
        }
        Command::Gate { kind } => {
            let kind = match kind {
                GateArg::Inverter => GateKind::Inverter,
                GateArg::Nor2 => GateKind::Nor2,
            };
            let arity = kind.arity();
            let mut rows = Vec::with_capacity(1 << arity);
            for bits in 0..(1usize << arity) {
                let inputs: Vec<bool> = (0..arity).rev().map(|i| bits >> i & 1 == 1).collect();
                let output = evaluate_gate(&GateState::new(kind, inputs.clone()))?;
                rows.push((inputs, output));
            }
            let delay = match propagate(&cfg) {
                Ok((layout, traj)) => Some(stage_performance(&cfg, &traj, &layout)?.t_total),
                Err(Failure::Infeasible(reason)) => {
                    out.note(&format!("stage delay unavailable: {reason}"))?;
                    None
                }
                Err(e) => return Err(e),
            };
            out.data("gate.csv", &report::gate_table(kind, &rows, delay))?;
        }
        Command::Dse { objective } => {
            let mut spec = cfg.sweep.clone();
            if let Some(objective) = objective {
                spec.objective = match objective {
                    ObjectiveArg::EdpProp => Objective::EdpProp,
                    ObjectiveArg::EdpCombined => Objective::EdpCombined,
                };
            }
            let results = run_sweep(&spec, &cfg, cli.threads)?;
            let table = report::dse_csv(&results);
            let summary = report::dse_summary(&results, &spec);
            if out.dir.is_some() {
                out.data("dse.csv", &table)?;
                out.data("dse_summary.txt", &summary)?;
            } else if format == Some(Format::Report) {
                out.data("dse_summary.txt", &summary)?;
            } else {
                out.data("dse.csv", &table)?;
            }
            select_best(&results, spec.objective)?;
        }
    }
    Ok(())
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = stderr.write_all(text.as_bytes());
                2
            } else {
                let _ = stdout.write_all(text.as_bytes());
                0
            };
        }
    };
    let mut out = Output {
        dir: cli.out.as_deref(),
        stdout,
        stderr,
    };
    match execute(&cli, &mut out) {
        Ok(()) => 0,
        Err(Failure::Infeasible(msg)) => {
            let _ = writeln!(out.stderr, "infeasible: {msg}");
            1
        }
        Err(Failure::Config(msg)) => {
            let _ = writeln!(out.stderr, "error: {msg}");
            2
        }
    }
}
