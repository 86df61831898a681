//! MTJ read-out, the voltage divider feeding the next stage, and gate logic.

use std::f64::consts::PI;
use std::fmt;

use crate::device::{DeviceGeometry, MaterialParams};
use crate::error::{ensure_positive, Error, Result};

/// Magnetic tunnel junction above the detector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MtjModel {
    /// Antiparallel resistance (Ω); the skyrmion-free state.
    pub r_ap: f64,
    pub tmr_percent: f64,
    /// Fraction of the detector covered by a skyrmion.
    pub eta: f64,
}

impl Default for MtjModel {
    fn default() -> Self {
        Self {
            r_ap: 4000.0,
            tmr_percent: 300.0,
            eta: 0.5,
        }
    }
}

impl MtjModel {
    pub fn validate(&self) -> Result<()> {
        ensure_positive("r_ap", self.r_ap)?;
        ensure_positive("tmr_percent", self.tmr_percent)?;
        if !(self.eta > 0.0 && self.eta < 1.0) {
            return Err(Error::Domain {
                name: "eta",
                value: self.eta,
                reason: "must lie in (0, 1)",
            });
        }
        Ok(())
    }

    pub fn r_p(&self) -> f64 {
        self.r_ap / (1.0 + self.tmr_percent / 100.0)
    }
}

/// Divider formed by the read transistor, the MTJ and the SHM.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReadCircuit {
    pub r_tx: f64,
    pub r_shm: f64,
    /// Magnitude of the read supply (V); the physical supply is negative.
    pub v_read: f64,
}

impl Default for ReadCircuit {
    fn default() -> Self {
        Self {
            r_tx: 3620.0,
            r_shm: 424.0,
            v_read: 1.0,
        }
    }
}

impl ReadCircuit {
    pub fn validate(&self) -> Result<()> {
        ensure_positive("r_tx", self.r_tx)?;
        ensure_positive("r_shm", self.r_shm)?;
        ensure_positive("v_read", self.v_read)
    }
}

/// Next-stage input transistor as an affine I(V) through two points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransistorModel {
    pub i_slope: f64,
    pub i_offset: f64,
    pub v1: f64,
    pub i1: f64,
    pub v2: f64,
    pub i2: f64,
}

impl Default for TransistorModel {
    fn default() -> Self {
        Self::from_points((0.550, 300e-6), (0.447, 184e-6))
            .expect("default calibration points are valid")
    }
}

impl TransistorModel {
    pub fn from_points((v1, i1): (f64, f64), (v2, i2): (f64, f64)) -> Result<Self> {
        if !(v1.is_finite() && v2.is_finite() && i1.is_finite() && i2.is_finite()) || v1 == v2 {
            return Err(Error::InvalidInput(
                "transistor calibration needs two finite points at distinct voltages".into(),
            ));
        }
        let i_slope = (i2 - i1) / (v2 - v1);
        if i_slope <= 0.0 {
            return Err(Error::Domain {
                name: "i_slope",
                value: i_slope,
                reason: "current must increase with voltage",
            });
        }
        Ok(Self {
            i_slope,
            i_offset: i1 - i_slope * v1,
            v1,
            i1,
            v2,
            i2,
        })
    }

    /// Voltages inside the calibration span widened by half on each side.
    pub fn trusted_range(&self) -> (f64, f64) {
        let lo = self.v1.min(self.v2);
        let hi = self.v1.max(self.v2);
        (0.5 * lo, 1.5 * hi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurrentReading {
    pub current: f64,
    /// True when the voltage lies outside [`TransistorModel::trusted_range`].
    pub extrapolated: bool,
}

pub fn mtj_resistance(mtj: &MtjModel, skyrmion_present: bool) -> f64 {
    if skyrmion_present {
        mtj.eta * mtj.r_ap + (1.0 - mtj.eta) * mtj.r_p()
    } else {
        mtj.r_ap
    }
}

pub fn shm_resistance(m: &MaterialParams, g: &DeviceGeometry) -> f64 {
    m.rho_shm * g.l_shm / (g.w_shm * g.h_shm)
}

pub fn rshm_resistance(m: &MaterialParams, g: &DeviceGeometry) -> f64 {
    m.rho_rshm * g.l_rshm / (g.w_rshm * g.h_rshm)
}

pub fn output_voltage(read: &ReadCircuit, r_mtj: f64) -> f64 {
    let below = r_mtj + read.r_shm;
    read.v_read * below / (read.r_tx + below)
}

pub fn next_stage_current(tx: &TransistorModel, v_out: f64) -> CurrentReading {
    // Anchored on the first calibration point so that point is reproduced exactly.
    let current = tx.i1 + tx.i_slope * (v_out - tx.v1);
    let (lo, hi) = tx.trusted_range();
    CurrentReading {
        current,
        extrapolated: !(lo..=hi).contains(&v_out),
    }
}

/// Current density through the nucleation spot.
pub fn nucleation_density(i_on: f64, g: &DeviceGeometry) -> f64 {
    let radius = g.nucleation_diameter / 2.0;
    i_on / (PI * radius * radius)
}

pub fn nucleation_decision(i_on: f64, g: &DeviceGeometry, j_c_nuc: f64) -> bool {
    i_on > 0.0 && nucleation_density(i_on, g) >= j_c_nuc
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateKind {
    Inverter,
    Nor2,
}

impl GateKind {
    pub fn arity(self) -> usize {
        match self {
            GateKind::Inverter => 1,
            GateKind::Nor2 => 2,
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GateKind::Inverter => "Inverter",
            GateKind::Nor2 => "Nor2",
        })
    }
}

/// Gate inputs; `true` means a skyrmion is present.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GateState {
    pub gate_kind: GateKind,
    pub inputs: Vec<bool>,
}

impl GateState {
    pub fn new(gate_kind: GateKind, inputs: Vec<bool>) -> Self {
        Self { gate_kind, inputs }
    }
}

/// A skyrmion on any input lowers the MTJ resistance and suppresses
/// nucleation in the next stage, so the output is the NOR of the inputs.
pub fn evaluate_gate(state: &GateState) -> Result<bool> {
    let expected = state.gate_kind.arity();
    if state.inputs.len() != expected {
        return Err(Error::Config(format!(
            "{} takes {expected} input(s), got {}",
            state.gate_kind,
            state.inputs.len()
        )));
    }
    Ok(!state.inputs.iter().any(|&b| b))
}

/// Every quantity along the read path of one stage.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CascadeTrace {
    pub skyrmion_present: bool,
    pub r_mtj: f64,
    pub v_out: f64,
    pub i_on: f64,
    pub j_nuc: f64,
    pub extrapolated: bool,
    pub nucleated: bool,
}

pub fn cascade_trace(
    stage_output_present: bool,
    mtj: &MtjModel,
    read: &ReadCircuit,
    tx: &TransistorModel,
    geometry: &DeviceGeometry,
    j_c_nuc: f64,
) -> Result<CascadeTrace> {
    mtj.validate()?;
    read.validate()?;
    ensure_positive("nucleation_diameter", geometry.nucleation_diameter)?;
    ensure_positive("j_c_nuc", j_c_nuc)?;
    let r_mtj = mtj_resistance(mtj, stage_output_present);
    let v_out = output_voltage(read, r_mtj);
    let reading = next_stage_current(tx, v_out);
    let i_on = reading.current.max(0.0);
    Ok(CascadeTrace {
        skyrmion_present: stage_output_present,
        r_mtj,
        v_out,
        i_on,
        j_nuc: nucleation_density(i_on, geometry),
        extrapolated: reading.extrapolated,
        nucleated: nucleation_decision(i_on, geometry, j_c_nuc),
    })
}

/// Whether the next stage nucleates a skyrmion.
pub fn cascade(
    stage_output_present: bool,
    mtj: &MtjModel,
    read: &ReadCircuit,
    tx: &TransistorModel,
    geometry: &DeviceGeometry,
    j_c_nuc: f64,
) -> Result<bool> {
    cascade_trace(stage_output_present, mtj, read, tx, geometry, j_c_nuc).map(|t| t.nucleated)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const J_C: f64 = 7.5e11;

    #[test]
    fn mtj_levels() {
        let mtj = MtjModel::default();
        assert_relative_eq!(mtj_resistance(&mtj, true), 2500.0, max_relative = 1e-12);
        assert_eq!(mtj_resistance(&mtj, false), 4000.0);
        let opaque = MtjModel {
            eta: 1.0 - 1e-12,
            ..mtj
        };
        assert_relative_eq!(mtj_resistance(&opaque, true), 4000.0, max_relative = 1e-9);
        assert!(mtj_resistance(&mtj, true) < mtj_resistance(&mtj, false));
    }

    #[test]
    fn mtj_validation() {
        for bad in [
            MtjModel { eta: 1.0, ..MtjModel::default() },
            MtjModel { eta: 0.0, ..MtjModel::default() },
            MtjModel { r_ap: -1.0, ..MtjModel::default() },
            MtjModel { tmr_percent: 0.0, ..MtjModel::default() },
        ] {
            assert!(bad.validate().is_err());
        }
    }

    #[test]
    fn shm_resistances() {
        let m = MaterialParams::default();
        let g = DeviceGeometry::default();
        assert_relative_eq!(shm_resistance(&m, &g), 424.0, max_relative = 1e-12);
        assert_relative_eq!(rshm_resistance(&m, &g), 53.0, max_relative = 1e-12);
        let long = DeviceGeometry {
            l_shm: 2.0 * g.l_shm,
            ..g
        };
        assert_relative_eq!(shm_resistance(&m, &long), 848.0, max_relative = 1e-12);
    }

    #[test]
    fn divider_levels() {
        let read = ReadCircuit::default();
        assert_eq!(format!("{:.3}", output_voltage(&read, 4000.0)), "0.550");
        assert_eq!(format!("{:.3}", output_voltage(&read, 2500.0)), "0.447");
        let shorted = ReadCircuit { r_tx: 0.0, ..read };
        assert_eq!(output_voltage(&shorted, 2500.0), 1.0);
        let mut prev = 0.0;
        for r in [100.0, 1000.0, 2500.0, 4000.0, 1e5] {
            let v = output_voltage(&read, r);
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn transistor_calibration() {
        let tx = TransistorModel::default();
        assert_eq!(next_stage_current(&tx, 0.550).current, 300e-6);
        assert_relative_eq!(next_stage_current(&tx, 0.447).current, 184e-6, max_relative = 1e-12);
        assert_relative_eq!(next_stage_current(&tx, 0.4985).current, 242e-6, max_relative = 1e-12);
        assert!(!next_stage_current(&tx, 0.5).extrapolated);
        assert!(next_stage_current(&tx, 0.9).extrapolated);
        assert!(TransistorModel::from_points((0.5, 1e-4), (0.5, 2e-4)).is_err());
        assert!(TransistorModel::from_points((0.5, 2e-4), (0.6, 1e-4)).is_err());
    }

    #[test]
    fn nucleation_threshold() {
        let g = DeviceGeometry::default();
        assert_relative_eq!(nucleation_density(300e-6, &g), 9.55e11, max_relative = 1e-3);
        assert_relative_eq!(nucleation_density(184e-6, &g), 5.86e11, max_relative = 1e-3);
        assert!(nucleation_decision(300e-6, &g, J_C));
        assert!(!nucleation_decision(184e-6, &g, J_C));
        assert!(!nucleation_decision(0.0, &g, J_C));
    }

    #[test]
    fn gate_truth_tables() {
        let inv = |a| evaluate_gate(&GateState::new(GateKind::Inverter, vec![a])).unwrap();
        assert!(!inv(true));
        assert!(inv(false));
        let nor = |a, b| evaluate_gate(&GateState::new(GateKind::Nor2, vec![a, b])).unwrap();
        assert_eq!(
            [nor(false, false), nor(false, true), nor(true, false), nor(true, true)],
            [true, false, false, false]
        );
        assert!(evaluate_gate(&GateState::new(GateKind::Nor2, vec![true])).is_err());
        assert!(evaluate_gate(&GateState::new(GateKind::Inverter, vec![])).is_err());
    }

    #[test]
    fn cascade_is_an_inverter() {
        let (mtj, read, tx, g) = (
            MtjModel::default(),
            ReadCircuit::default(),
            TransistorModel::default(),
            DeviceGeometry::default(),
        );
        for present in [false, true] {
            let stage = cascade(present, &mtj, &read, &tx, &g, J_C).unwrap();
            let logic = evaluate_gate(&GateState::new(GateKind::Inverter, vec![present])).unwrap();
            assert_eq!(stage, logic);
            let twice = cascade(stage, &mtj, &read, &tx, &g, J_C).unwrap();
            assert_eq!(twice, present);
        }
    }
}
