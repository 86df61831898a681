//! Text renderings: CSV tables and indented `key: value` reports.
//!
//! Report values are printed in SI base units followed by a prefixed
//! human-readable form, e.g. `4.340000e-10 s (434.000 ps)`.

use std::fmt::Write;

use crate::circuit::{CascadeTrace, GateKind};
use crate::device::DeviceGeometry;
use crate::dse::{select_best, DesignPointResult, Objective, SweepSpec};
use crate::performance::PerformanceReport;
use crate::planner::RepeaterLayout;
use crate::trajectory::Trajectory;

const PREFIXES: [(f64, &str); 10] = [
    (1e9, "G"),
    (1e6, "M"),
    (1e3, "k"),
    (1.0, ""),
    (1e-3, "m"),
    (1e-6, "u"),
    (1e-9, "n"),
    (1e-12, "p"),
    (1e-15, "f"),
    (1e-18, "a"),
];

/// `value` in base units plus a prefixed rendering.
pub fn quantity(value: f64, unit: &str) -> String {
    let magnitude = value.abs();
    if magnitude == 0.0 || !magnitude.is_finite() {
        return format!("{value:e} {unit}");
    }
    let (scale, prefix) = PREFIXES
        .iter()
        .copied()
        .find(|&(scale, _)| magnitude >= scale)
        .unwrap_or(PREFIXES[PREFIXES.len() - 1]);
    format!("{value:.6e} {unit} ({:.3} {prefix}{unit})", value / scale)
}

/// Builder for indented `key: value` text.
#[derive(Debug, Default)]
pub struct Report {
    text: String,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn section(&mut self, depth: usize, name: &str) -> &mut Self {
        let _ = writeln!(self.text, "{}{name}:", "  ".repeat(depth));
        self
    }

    pub fn field(&mut self, depth: usize, key: &str, value: impl std::fmt::Display) -> &mut Self {
        let _ = writeln!(self.text, "{}{key}: {value}", "  ".repeat(depth));
        self
    }

    pub fn finish(&mut self) -> String {
        std::mem::take(&mut self.text)
    }
}

pub fn trajectory_report(traj: &Trajectory) -> String {
    let end = traj.final_state();
    let mut r = Report::new();
    r.section(0, "trajectory")
        .field(1, "outcome", traj.outcome)
        .field(1, "t_prop", quantity(traj.t_prop, "s"))
        .field(1, "r2_residency", quantity(traj.r2_residency, "s"))
        .field(1, "final_x", quantity(end.x, "m"))
        .field(1, "final_y", quantity(end.y, "m"))
        .field(1, "samples", traj.samples.len());
    r.section(1, "segments");
    for seg in &traj.segments {
        r.field(
            2,
            &seg.kind.to_string(),
            format!("[{:e}, {:e}] m", seg.x_start, seg.x_end),
        );
    }
    r.finish()
}

pub fn layout_report(layout: &RepeaterLayout, geometry: &DeviceGeometry, trigger: f64) -> String {
    let mut r = Report::new();
    r.section(0, "layout")
        .field(1, "mode", layout.mode)
        .field(1, "p", layout.p)
        .field(1, "feasible", layout.feasible)
        .field(1, "infeasibility_reason", layout.infeasibility_reason)
        .field(1, "trigger_ordinate", quantity(trigger, "m"))
        .field(1, "annihilation_bound", quantity(geometry.annihilation_bound(), "m"))
        .field(
            1,
            "detector_zone",
            format!(
                "[{:e}, {:e}] m (default footprint l_det = {:e} m)",
                geometry.l_pmafm - geometry.l_det,
                geometry.l_pmafm,
                geometry.l_det
            ),
        );
    r.section(1, "intervals");
    for (i, (start, end)) in layout.intervals.iter().enumerate() {
        r.field(2, &format!("r2_{}", i + 1), format!("[{start:e}, {end:e}] m"));
    }
    r.finish()
}

pub fn performance_report(report: &PerformanceReport) -> String {
    let mut r = Report::new();
    r.section(0, "performance")
        .field(1, "p", report.p)
        .field(1, "v_avg", format!("{:.6e} m/s", report.v_avg));
    r.section(1, "delay")
        .field(2, "t_nuc", quantity(report.t_nuc, "s"))
        .field(2, "t_prop", quantity(report.t_prop, "s"))
        .field(2, "t_det", quantity(report.t_det, "s"))
        .field(2, "t_total", quantity(report.t_total, "s"));
    r.section(1, "energy")
        .field(2, "e_nuc", quantity(report.e_nuc, "J"))
        .field(2, "e_prop", quantity(report.e_prop, "J"))
        .field(2, "e_det", quantity(report.e_det, "J"))
        .field(2, "e_tx", quantity(report.e_tx, "J"))
        .field(2, "e_total", quantity(report.e_total, "J"));
    r.section(1, "edp")
        .field(2, "edp_nuc", format!("{:.6e} J*s", report.edp_nuc))
        .field(2, "edp_prop", format!("{:.6e} J*s", report.edp_prop))
        .field(2, "edp_det", format!("{:.6e} J*s", report.edp_det))
        .field(2, "edp_total", format!("{:.6e} J*s", report.edp_total));
    r.finish()
}

pub fn cascade_report(stages: &[CascadeTrace], v_read_polarity: &str) -> String {
    let mut r = Report::new();
    r.section(0, "cascade")
        .field(1, "v_read_polarity", v_read_polarity);
    for (i, s) in stages.iter().enumerate() {
        r.section(1, &format!("stage_{i}"))
            .field(2, "skyrmion_present", s.skyrmion_present)
            .field(2, "r_mtj", format!("{:.6e} Ohm", s.r_mtj))
            .field(2, "v_out", quantity(s.v_out, "V"))
            .field(2, "i_on", quantity(s.i_on, "A"))
            .field(2, "j_nuc", format!("{:.6e} A/m^2", s.j_nuc))
            .field(2, "extrapolated", s.extrapolated)
            .field(2, "next_stage_nucleated", s.nucleated);
    }
    r.finish()
}

/// Truth table as CSV; `delay` is the stage latency, if known.
pub fn gate_table(kind: GateKind, rows: &[(Vec<bool>, bool)], delay: Option<f64>) -> String {
    let arity = kind.arity();
    let mut out = String::new();
    let inputs: Vec<String> = (1..=arity).map(|i| format!("in{i}")).collect();
    let _ = writeln!(out, "gate,{},out,delay_s", inputs.join(","));
    let delay = delay.map_or_else(String::new, |d| format!("{d:e}"));
    for (ins, output) in rows {
        let bits: Vec<&str> = ins.iter().map(|&b| if b { "1" } else { "0" }).collect();
        let _ = writeln!(
            out,
            "{kind},{},{},{delay}",
            bits.join(","),
            if *output { "1" } else { "0" }
        );
    }
    out
}

pub const DSE_HEADER: &str = "ms,ku,alpha,feasible,reason,v_x,t_prop,e_prop,edp_prop,p";

pub fn dse_csv(results: &[DesignPointResult]) -> String {
    let mut out = String::from(DSE_HEADER);
    out.push('\n');
    for r in results {
        let numbers = r.metrics.map_or_else(
            || ",,,".to_string(),
            |m| format!("{:e},{:e},{:e},{:e}", m.v_x, m.t_prop, m.e_prop, m.edp_prop),
        );
        let _ = writeln!(
            out,
            "{:e},{:e},{},{},{},{},{}",
            r.params.ms, r.params.ku, r.params.alpha, r.feasible, r.reason, numbers, r.p
        );
    }
    out
}

pub fn dse_summary(results: &[DesignPointResult], spec: &SweepSpec) -> String {
    let feasible = results.iter().filter(|r| r.feasible).count();
    let mut r = Report::new();
    r.section(0, "dse")
        .field(1, "points", results.len())
        .field(1, "feasible", feasible)
        .field(1, "objective", spec.objective)
        .field(1, "jx", format!("{:e} A/m^2", spec.jx))
        .field(1, "jy", format!("{:e} A/m^2", spec.jy))
        .field(1, "p_max", spec.p_max);
    for objective in [Objective::EdpProp, Objective::EdpCombined] {
        r.section(1, &format!("best_{objective}"));
        match select_best(results, objective) {
            Ok(best) => {
                let m = best.metrics.expect("selected points are feasible");
                r.field(2, "ms", format!("{:e} A/m", best.params.ms))
                    .field(2, "ku", format!("{:e} J/m^3", best.params.ku))
                    .field(2, "alpha", best.params.alpha)
                    .field(2, "p", best.p)
                    .field(2, "v_x", format!("{:.6e} m/s", m.v_x))
                    .field(2, "t_prop", quantity(m.t_prop, "s"))
                    .field(2, "e_prop", quantity(m.e_prop, "J"))
                    .field(2, "edp_prop", format!("{:.6e} J*s", m.edp_prop))
                    .field(2, "edp_nuc", format!("{:.6e} J*s", m.edp_nuc))
                    .field(2, "score", format!("{:.6e} J*s", best.score(objective).unwrap_or(0.0)));
            }
            Err(e) => {
                r.field(2, "error", e);
            }
        }
    }
    r.finish()
}
