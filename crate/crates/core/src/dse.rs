//! Grid sweep over (Ms, Ku, α) and best-point selection.

use std::cmp::Ordering;
use std::fmt;

use rayon::prelude::*;

use crate::config::RunConfig;
use crate::device::{thiele_constants, DriveConfig, MaterialParams};
use crate::error::{Error, Result};
use crate::performance::{stage_report, PerformanceReport, StageModels};
use crate::planner::{plan, plan_equal_spacing, InfeasibilityReason, PlacementMode};
use crate::trajectory::{simulate, Outcome, SkyrmionState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Objective {
    EdpProp,
    /// Propagation EDP plus nucleation EDP.
    EdpCombined,
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Objective::EdpProp => "edp_prop",
            Objective::EdpCombined => "edp_combined",
        })
    }
}

impl std::str::FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "edp_prop" => Ok(Objective::EdpProp),
            "edp_combined" => Ok(Objective::EdpCombined),
            other => Err(Error::Config(format!(
                "unknown objective '{other}' (expected edp_prop or edp_combined)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub ms_values: Vec<f64>,
    pub ku_values: Vec<f64>,
    pub alpha_values: Vec<f64>,
    pub jx: f64,
    pub jy: f64,
    pub p_max: usize,
    pub objective: Objective,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            ms_values: vec![1e5, 3e5, 5e5, 8e5, 10e5],
            ku_values: vec![5e5, 8e5, 10e5],
            alpha_values: vec![0.05, 0.1, 0.15, 0.2, 0.25],
            jx: 9e10,
            jy: 5e11,
            p_max: 2,
            objective: Objective::EdpProp,
        }
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        for (name, values) in [
            ("ms_values", &self.ms_values),
            ("ku_values", &self.ku_values),
            ("alpha_values", &self.alpha_values),
        ] {
            if values.is_empty() {
                return Err(Error::Config(format!("{name} is empty")));
            }
        }
        for &ms in &self.ms_values {
            crate::error::ensure_positive("ms_values", ms)?;
        }
        for &ku in &self.ku_values {
            crate::error::ensure_positive("ku_values", ku)?;
        }
        for &alpha in &self.alpha_values {
            if !(alpha > 0.0 && alpha < 1.0) {
                return Err(Error::Domain {
                    name: "alpha_values",
                    value: alpha,
                    reason: "must lie in (0, 1)",
                });
            }
        }
        DriveConfig {
            jx: self.jx,
            jy: self.jy,
            ..DriveConfig::default()
        }
        .validate()
    }
}

/// One grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DesignPoint {
    pub ms: f64,
    pub ku: f64,
    pub alpha: f64,
}

impl DesignPoint {
    fn lexicographic(&self, other: &Self) -> Ordering {
        self.ms
            .total_cmp(&other.ms)
            .then(self.ku.total_cmp(&other.ku))
            .then(self.alpha.total_cmp(&other.alpha))
    }
}

/// Performance numbers of a feasible point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointMetrics {
    pub v_x: f64,
    pub t_prop: f64,
    pub e_prop: f64,
    pub edp_prop: f64,
    pub edp_nuc: f64,
    pub report: PerformanceReport,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DesignPointResult {
    pub params: DesignPoint,
    pub feasible: bool,
    pub reason: InfeasibilityReason,
    pub p: usize,
    /// `None` for infeasible points.
    pub metrics: Option<PointMetrics>,
}

impl DesignPointResult {
    pub fn score(&self, objective: Objective) -> Option<f64> {
        self.metrics.map(|m| match objective {
            Objective::EdpProp => m.edp_prop,
            Objective::EdpCombined => m.edp_prop + m.edp_nuc,
        })
    }
}

/// Cartesian product in (Ms, Ku, α) lexicographic order.
pub fn enumerate(spec: &SweepSpec) -> Result<Vec<DesignPoint>> {
    spec.validate()?;
    let mut points = Vec::with_capacity(
        spec.ms_values.len() * spec.ku_values.len() * spec.alpha_values.len(),
    );
    for &ms in &spec.ms_values {
        for &ku in &spec.ku_values {
            for &alpha in &spec.alpha_values {
                points.push(DesignPoint { ms, ku, alpha });
            }
        }
    }
    points.sort_by(DesignPoint::lexicographic);
    Ok(points)
}

/// Plans, simulates and costs one grid point. Planner and simulator
/// failures become infeasible results; malformed inputs are errors.
pub fn evaluate_point(
    point: DesignPoint,
    spec: &SweepSpec,
    cfg: &RunConfig,
) -> Result<DesignPointResult> {
    let material = MaterialParams {
        ms: point.ms,
        ku: point.ku,
        alpha: point.alpha,
        ..cfg.material
    };
    let drive = DriveConfig {
        jx: spec.jx,
        jy: spec.jy,
        ..cfg.drive
    };
    let tc = thiele_constants(&material, &cfg.geometry, &drive, &cfg.constants)?;
    let layout = match cfg.planner.mode {
        PlacementMode::EqualSpacing => plan_equal_spacing(&tc, &cfg.geometry, spec.p_max)?,
        _ => plan(&tc, &cfg.geometry, spec.p_max)?,
    };
    let infeasible = |reason| DesignPointResult {
        params: point,
        feasible: false,
        reason,
        p: layout.p,
        metrics: None,
    };
    if !layout.feasible {
        return Ok(infeasible(layout.infeasibility_reason));
    }
    let traj = simulate(&tc, &cfg.geometry, &layout, SkyrmionState::default())?;
    match traj.outcome {
        Outcome::Reached => {}
        Outcome::Annihilated => return Ok(infeasible(InfeasibilityReason::Annihilated)),
        Outcome::Stalled => return Ok(infeasible(InfeasibilityReason::Stalled)),
    }
    let report = stage_report(
        &traj,
        &layout,
        &StageModels {
            material: &material,
            geometry: &cfg.geometry,
            drive: &drive,
            energy: &cfg.energy,
            nucleation: &cfg.nucleation,
            mtj: &cfg.mtj,
            read: &cfg.read,
        },
    )?;
    Ok(DesignPointResult {
        params: point,
        feasible: true,
        reason: InfeasibilityReason::None,
        p: layout.p,
        metrics: Some(PointMetrics {
            v_x: report.v_avg,
            t_prop: report.t_prop,
            e_prop: report.e_prop,
            edp_prop: report.edp_prop,
            edp_nuc: report.edp_nuc,
            report,
        }),
    })
}

/// Evaluates the whole grid on `threads` workers (0 picks the rayon
/// default). Results come back in [`enumerate`] order regardless of the
/// worker count.
pub fn run_sweep(spec: &SweepSpec, cfg: &RunConfig, threads: usize) -> Result<Vec<DesignPointResult>> {
    let points = enumerate(spec)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    pool.install(|| {
        points
            .par_iter()
            .map(|&point| evaluate_point(point, spec, cfg))
            .collect()
    })
}

/// Feasible result with the lowest objective; ties go to the
/// lexicographically smallest (Ms, Ku, α).
pub fn select_best(results: &[DesignPointResult], objective: Objective) -> Result<&DesignPointResult> {
    results
        .iter()
        .filter_map(|r| r.score(objective).map(|s| (s, r)))
        .min_by(|(sa, a), (sb, b)| sa.total_cmp(sb).then(a.params.lexicographic(&b.params)))
        .map(|(_, r)| r)
        .ok_or(Error::NoFeasiblePoint)
}
