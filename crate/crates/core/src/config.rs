//! Run configuration and its line-oriented text format.
//!
//! ```text
//! # comment
//! [material]
//! alpha = 0.2
//! [sweep]
//! ms_values = 1e5, 3e5
//! ```
//!
//! Every value is in SI base units. Keys not set keep their defaults.

use std::collections::HashMap;

use crate::circuit::{MtjModel, ReadCircuit, TransistorModel};
use crate::device::{Chirality, DeviceGeometry, DriveConfig, MaterialParams, PhysicalConstants};
use crate::dse::SweepSpec;
use crate::error::{Error, Result};
use crate::performance::{EnergyConfig, NucleationModel};
use crate::planner::{PlacementMode, DEFAULT_P_MAX};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlannerConfig {
    pub p_max: usize,
    pub mode: PlacementMode,
}

impl Default for PlannerConfig {
    fn default() -> Self {
        Self {
            p_max: DEFAULT_P_MAX,
            mode: PlacementMode::JustInTime,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunConfig {
    pub constants: PhysicalConstants,
    pub material: MaterialParams,
    pub geometry: DeviceGeometry,
    pub drive: DriveConfig,
    pub energy: EnergyConfig,
    pub nucleation: NucleationModel,
    pub mtj: MtjModel,
    pub read: ReadCircuit,
    pub transistor: TransistorModel,
    pub planner: PlannerConfig,
    pub sweep: SweepSpec,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        self.constants.validate()?;
        self.material.validate()?;
        self.geometry.validate()?;
        self.drive.validate()?;
        self.energy.validate()?;
        self.nucleation.validate()?;
        self.mtj.validate()?;
        self.read.validate()?;
        self.sweep.validate()
    }
}

const SECTIONS: [&str; 8] = [
    "constants", "material", "geometry", "drive", "energy", "circuit", "planner", "sweep",
];

fn number(value: &str) -> std::result::Result<f64, String> {
    let v: f64 = value
        .parse()
        .map_err(|_| format!("'{value}' is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("'{value}' is not finite"))
    }
}

fn count(value: &str) -> std::result::Result<usize, String> {
    value
        .parse()
        .map_err(|_| format!("'{value}' is not a non-negative integer"))
}

fn boolean(value: &str) -> std::result::Result<bool, String> {
    match value {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(format!("'{value}' is not true or false")),
    }
}

fn list(value: &str) -> std::result::Result<Vec<f64>, String> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(number)
        .collect()
}

/// Transistor calibration points, assembled into a model after parsing.
struct TxPoints {
    v1: f64,
    i1: f64,
    v2: f64,
    i2: f64,
}

fn apply(
    cfg: &mut RunConfig,
    tx: &mut TxPoints,
    section: &str,
    key: &str,
    value: &str,
) -> std::result::Result<(), String> {
    let c = &mut cfg.constants;
    let m = &mut cfg.material;
    let g = &mut cfg.geometry;
    let d = &mut cfg.drive;
    let e = &mut cfg.energy;
    match (section, key) {
        ("constants", "hbar") => c.hbar = number(value)?,
        ("constants", "e_charge") => c.e_charge = number(value)?,
        ("constants", "gamma0") => c.gamma0 = number(value)?,
        ("constants", "mu0") => c.mu0 = number(value)?,

        ("material", "ms") => m.ms = number(value)?,
        ("material", "ku") => m.ku = number(value)?,
        ("material", "alpha") => m.alpha = number(value)?,
        ("material", "exchange_a") => m.exchange_a = number(value)?,
        ("material", "theta_she") => m.theta_she = number(value)?,
        ("material", "rho_shm") => m.rho_shm = number(value)?,
        ("material", "rho_rshm") => m.rho_rshm = number(value)?,
        ("material", "rho_pmafm") => m.rho_pmafm = number(value)?,
        ("material", "p_pfm") => m.p_pfm = number(value)?,
        ("material", "demag_correction") => m.demag_correction = boolean(value)?,

        ("geometry", "l_pmafm") => g.l_pmafm = number(value)?,
        ("geometry", "w_pmafm") => g.w_pmafm = number(value)?,
        ("geometry", "h_pmafm") => g.h_pmafm = number(value)?,
        ("geometry", "l_shm") => g.l_shm = number(value)?,
        ("geometry", "w_shm") => g.w_shm = number(value)?,
        ("geometry", "h_shm") => g.h_shm = number(value)?,
        ("geometry", "l_rshm") => g.l_rshm = number(value)?,
        ("geometry", "w_rshm") => g.w_rshm = number(value)?,
        ("geometry", "h_rshm") => g.h_rshm = number(value)?,
        ("geometry", "r_sk") => g.r_sk = number(value)?,
        ("geometry", "k_confine") => g.k_confine = number(value)?,
        ("geometry", "l_det") => g.l_det = number(value)?,
        ("geometry", "w_det") => g.w_det = number(value)?,
        ("geometry", "nucleation_diameter") => g.nucleation_diameter = number(value)?,
        ("geometry", "annihilation_slack") => g.annihilation_slack = number(value)?,
        ("geometry", "trigger_buffer") => g.trigger_buffer = number(value)?,

        ("drive", "jx") => d.jx = number(value)?,
        ("drive", "jy") => d.jy = number(value)?,
        ("drive", "j_nuc") => d.j_nuc = number(value)?,
        ("drive", "j_c_nuc") => d.j_c_nuc = number(value)?,
        ("drive", "chirality_q") => {
            d.chirality_q = Chirality::from_sign(number(value)?).map_err(|e| e.to_string())?
        }

        ("energy", "cg") => e.cg = number(value)?,
        ("energy", "vdd") => e.vdd = number(value)?,
        ("energy", "v_prop") => e.v_prop = number(value)?,
        ("energy", "r_nuc_path") => e.r_nuc_path = number(value)?,
        ("energy", "t_nuc") => e.t_nuc_fixed = number(value)?,
        ("energy", "t_det") => e.t_det_fixed = number(value)?,
        ("energy", "i_nuc_ref") => cfg.nucleation.i_ref = number(value)?,
        ("energy", "alpha_ref") => cfg.nucleation.alpha_ref = number(value)?,

        ("circuit", "r_ap") => cfg.mtj.r_ap = number(value)?,
        ("circuit", "tmr_percent") => cfg.mtj.tmr_percent = number(value)?,
        ("circuit", "eta") => cfg.mtj.eta = number(value)?,
        ("circuit", "r_tx") => cfg.read.r_tx = number(value)?,
        ("circuit", "r_shm") => cfg.read.r_shm = number(value)?,
        ("circuit", "v_read") => cfg.read.v_read = number(value)?,
        ("circuit", "tx_v1") => tx.v1 = number(value)?,
        ("circuit", "tx_i1") => tx.i1 = number(value)?,
        ("circuit", "tx_v2") => tx.v2 = number(value)?,
        ("circuit", "tx_i2") => tx.i2 = number(value)?,

        ("planner", "p_max") => cfg.planner.p_max = count(value)?,
        ("planner", "mode") => {
            cfg.planner.mode = match value {
                "just-in-time" => PlacementMode::JustInTime,
                "equal-spacing" => PlacementMode::EqualSpacing,
                _ => return Err(format!("'{value}' is not just-in-time or equal-spacing")),
            }
        }

        ("sweep", "ms_values") => cfg.sweep.ms_values = list(value)?,
        ("sweep", "ku_values") => cfg.sweep.ku_values = list(value)?,
        ("sweep", "alpha_values") => cfg.sweep.alpha_values = list(value)?,
        ("sweep", "jx") => cfg.sweep.jx = number(value)?,
        ("sweep", "jy") => cfg.sweep.jy = number(value)?,
        ("sweep", "p_max") => cfg.sweep.p_max = count(value)?,
        ("sweep", "objective") => cfg.sweep.objective = value.parse().map_err(|e: Error| e.to_string())?,

        _ => return Err(format!("unknown key in [{section}]")),
    }
    Ok(())
}

/// Parses `text` over the default configuration and validates the result.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    let defaults = TransistorModel::default();
    let mut tx = TxPoints {
        v1: defaults.v1,
        i1: defaults.i1,
        v2: defaults.v2,
        i2: defaults.i2,
    };
    // key -> line where it was last set, for naming invariant violations
    let mut origin: HashMap<String, usize> = HashMap::new();
    let mut section: Option<String> = None;

    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(name) = content.strip_prefix('[') {
            let name = name.strip_suffix(']').map(str::trim).ok_or_else(|| Error::Parse {
                line,
                key: content.to_string(),
                message: "unterminated section header".into(),
            })?;
            if !SECTIONS.contains(&name) {
                return Err(Error::Parse {
                    line,
                    key: name.to_string(),
                    message: "unknown section".into(),
                });
            }
            section = Some(name.to_string());
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| Error::Parse {
            line,
            key: content.to_string(),
            message: "expected 'key = value'".into(),
        })?;
        let (key, value) = (key.trim(), value.trim());
        let Some(sec) = section.as_deref() else {
            return Err(Error::Parse {
                line,
                key: key.to_string(),
                message: "key outside of any [section]".into(),
            });
        };
        apply(&mut cfg, &mut tx, sec, key, value).map_err(|message| Error::Parse {
            line,
            key: key.to_string(),
            message,
        })?;
        origin.insert(key.to_string(), line);
    }

    let located = |e: Error| {
        let key = match &e {
            Error::Domain { name, .. } => (*name).to_string(),
            Error::Geometry(_) => "geometry".to_string(),
            _ => String::new(),
        };
        Error::Parse {
            line: origin.get(&key).copied().unwrap_or(0),
            key,
            message: e.to_string(),
        }
    };
    cfg.transistor =
        TransistorModel::from_points((tx.v1, tx.i1), (tx.v2, tx.i2)).map_err(located)?;
    cfg.validate().map_err(located)?;
    Ok(cfg)
}
