//! Stage delays and energies of one logic stage and their products.

use crate::circuit::{mtj_resistance, MtjModel, ReadCircuit};
use crate::device::{DeviceGeometry, DriveConfig, MaterialParams};
use crate::error::{ensure_positive, Error, Result};
use crate::planner::RepeaterLayout;
use crate::trajectory::{Outcome, Trajectory};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyConfig {
    /// Transistor gate capacitance (F).
    pub cg: f64,
    pub vdd: f64,
    /// Gate drive of the SHM and R–SHM switches (V).
    pub v_prop: f64,
    /// Resistance seen by the nucleation current (Ω).
    pub r_nuc_path: f64,
    pub t_nuc_fixed: f64,
    pub t_det_fixed: f64,
}

impl Default for EnergyConfig {
    fn default() -> Self {
        Self {
            cg: 1e-16,
            vdd: 1.0,
            v_prop: 0.25,
            r_nuc_path: 1722.0,
            t_nuc_fixed: 20e-12,
            t_det_fixed: 25e-12,
        }
    }
}

impl EnergyConfig {
    pub fn validate(&self) -> Result<()> {
        ensure_positive("cg", self.cg)?;
        ensure_positive("vdd", self.vdd)?;
        ensure_positive("v_prop", self.v_prop)?;
        ensure_positive("r_nuc_path", self.r_nuc_path)?;
        ensure_positive("t_nuc", self.t_nuc_fixed)?;
        ensure_positive("t_det", self.t_det_fixed)
    }
}

/// Nucleation current as a function of damping: the critical current grows
/// linearly with α, anchored at `i_ref` for `alpha_ref`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NucleationModel {
    pub i_ref: f64,
    pub alpha_ref: f64,
}

impl Default for NucleationModel {
    fn default() -> Self {
        Self {
            i_ref: 300e-6,
            alpha_ref: 0.2,
        }
    }
}

impl NucleationModel {
    pub fn validate(&self) -> Result<()> {
        ensure_positive("i_nuc_ref", self.i_ref)?;
        ensure_positive("alpha_ref", self.alpha_ref)
    }

    pub fn current(&self, alpha: f64) -> f64 {
        self.i_ref * alpha / self.alpha_ref
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerformanceReport {
    pub t_nuc: f64,
    pub t_prop: f64,
    pub t_det: f64,
    pub e_nuc: f64,
    pub e_prop: f64,
    pub e_det: f64,
    pub e_tx: f64,
    pub t_total: f64,
    pub e_total: f64,
    pub edp_total: f64,
    pub edp_prop: f64,
    pub edp_nuc: f64,
    pub edp_det: f64,
    /// Average speed along the track (m/s).
    pub v_avg: f64,
    pub p: usize,
}

/// Inputs to [`total`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StageComponents {
    pub t_nuc: f64,
    pub t_prop: f64,
    pub t_det: f64,
    pub e_nuc: f64,
    pub e_prop: f64,
    pub e_det: f64,
    pub e_tx: f64,
    pub l_pmafm: f64,
    pub p: usize,
}

/// Joule heating under the SHM for the whole run and under the R–SHMs while
/// occupied, plus one switch event per driven metal layer.
pub fn propagation_energy(
    traj: &Trajectory,
    layout: &RepeaterLayout,
    m: &MaterialParams,
    g: &DeviceGeometry,
    drive: &DriveConfig,
    ec: &EnergyConfig,
) -> Result<f64> {
    if traj.outcome != Outcome::Reached {
        return Err(Error::InvalidInput(format!(
            "propagation energy needs a trajectory that reaches the output, got {}",
            traj.outcome
        )));
    }
    let shm = drive.jx * drive.jx * m.rho_shm * g.shm_volume() * traj.t_prop;
    let rshm = drive.jy * drive.jy * m.rho_rshm * g.rshm_volume() * traj.r2_residency;
    let switching = (1 + layout.p) as f64 * ec.cg * ec.v_prop * ec.v_prop;
    Ok(shm + rshm + switching)
}

pub fn nucleation_energy(i_nuc: f64, ec: &EnergyConfig) -> f64 {
    i_nuc * i_nuc * ec.r_nuc_path * ec.t_nuc_fixed
}

/// Energy drawn by the read divider during detection.
pub fn detection_energy(read: &ReadCircuit, r_mtj: f64, ec: &EnergyConfig) -> f64 {
    read.v_read * read.v_read * ec.t_det_fixed / (read.r_tx + r_mtj + read.r_shm)
}

pub fn total(c: &StageComponents) -> PerformanceReport {
    let t_total = c.t_nuc + c.t_prop + c.t_det;
    let e_total = c.e_nuc + c.e_prop + c.e_det + c.e_tx;
    PerformanceReport {
        t_nuc: c.t_nuc,
        t_prop: c.t_prop,
        t_det: c.t_det,
        e_nuc: c.e_nuc,
        e_prop: c.e_prop,
        e_det: c.e_det,
        e_tx: c.e_tx,
        t_total,
        e_total,
        edp_total: e_total * t_total,
        edp_prop: c.e_prop * c.t_prop,
        edp_nuc: c.e_nuc * c.t_nuc,
        edp_det: c.e_det * c.t_det,
        v_avg: c.l_pmafm / c.t_prop,
        p: c.p,
    }
}

/// Everything a stage report needs beyond the trajectory itself.
#[derive(Debug, Clone, Copy)]
pub struct StageModels<'a> {
    pub material: &'a MaterialParams,
    pub geometry: &'a DeviceGeometry,
    pub drive: &'a DriveConfig,
    pub energy: &'a EnergyConfig,
    pub nucleation: &'a NucleationModel,
    pub mtj: &'a MtjModel,
    pub read: &'a ReadCircuit,
}

/// Full stage report; detection is costed with a skyrmion under the MTJ.
pub fn stage_report(
    traj: &Trajectory,
    layout: &RepeaterLayout,
    models: &StageModels<'_>,
) -> Result<PerformanceReport> {
    let ec = models.energy;
    let e_prop = propagation_energy(
        traj,
        layout,
        models.material,
        models.geometry,
        models.drive,
        ec,
    )?;
    let i_nuc = models.nucleation.current(models.material.alpha);
    let r_mtj = mtj_resistance(models.mtj, true);
    Ok(total(&StageComponents {
        t_nuc: ec.t_nuc_fixed,
        t_prop: traj.t_prop,
        t_det: ec.t_det_fixed,
        e_nuc: nucleation_energy(i_nuc, ec),
        e_prop,
        e_det: detection_energy(models.read, r_mtj, ec),
        e_tx: ec.cg * ec.vdd * ec.vdd,
        l_pmafm: models.geometry.l_pmafm,
        p: layout.p,
    }))
}
