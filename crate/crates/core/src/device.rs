//! Material, geometry and drive parameters, and the derived Thiele constants.
//!
//! Everything is kept in SI base units. Defaults reproduce the simulation
//! parameter table of the SkyLogic device together with the reference
//! material point (Ms = 1e5 A/m, Ku = 8e5 J/m³, α = 0.25).

use std::f64::consts::PI;

use crate::error::{ensure_positive, Error, Result};

/// Vacuum permeability used by the optional demagnetisation correction (T·m/A).
pub const MU0: f64 = 4.0 * PI * 1e-7;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Reduced Planck constant (J·s).
    pub hbar: f64,
    /// Elementary charge (C).
    pub e_charge: f64,
    /// Gyromagnetic ratio (rad·s⁻¹·T⁻¹).
    pub gamma0: f64,
    /// Vacuum permeability (T·m/A).
    pub mu0: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self {
            hbar: 1.0546e-34,
            e_charge: 1.6022e-19,
            gamma0: 1.76e11,
            mu0: MU0,
        }
    }
}

impl PhysicalConstants {
    pub fn validate(&self) -> Result<()> {
        ensure_positive("hbar", self.hbar)?;
        ensure_positive("e_charge", self.e_charge)?;
        ensure_positive("gamma0", self.gamma0)?;
        ensure_positive("mu0", self.mu0)
    }
}

/// Per-design-point description of the PMA ferromagnet and the metal layers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaterialParams {
    /// Saturation magnetisation (A/m).
    pub ms: f64,
    /// Uniaxial anisotropy (J/m³).
    pub ku: f64,
    /// Gilbert damping.
    pub alpha: f64,
    /// Exchange stiffness (J/m).
    pub exchange_a: f64,
    /// Spin Hall angle of the SHM and R–SHM.
    pub theta_she: f64,
    /// SHM resistivity (Ω·m).
    pub rho_shm: f64,
    /// R–SHM resistivity (Ω·m).
    pub rho_rshm: f64,
    /// PMA–FM resistivity (Ω·m).
    pub rho_pmafm: f64,
    /// Spin polarisation of the polariser ferromagnet. Stored only; the
    /// threshold nucleation model does not use it.
    pub p_pfm: f64,
    /// Use Ku − μ0·Ms²/2 instead of Ku in the domain-wall width.
    pub demag_correction: bool,
}

impl Default for MaterialParams {
    fn default() -> Self {
        Self {
            ms: 1e5,
            ku: 8e5,
            alpha: 0.25,
            exchange_a: 15e-12,
            theta_she: 0.33,
            rho_shm: 1.06e-7,
            rho_rshm: 1.06e-7,
            rho_pmafm: 1.7e-7,
            p_pfm: 1.0,
            demag_correction: false,
        }
    }
}

impl MaterialParams {
    pub fn validate(&self) -> Result<()> {
        ensure_positive("ms", self.ms)?;
        ensure_positive("ku", self.ku)?;
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::Domain {
                name: "alpha",
                value: self.alpha,
                reason: "must lie in (0, 1)",
            });
        }
        ensure_positive("exchange_a", self.exchange_a)?;
        if !(self.theta_she > 0.0 && self.theta_she <= 1.0) {
            return Err(Error::Domain {
                name: "theta_she",
                value: self.theta_she,
                reason: "must lie in (0, 1]",
            });
        }
        ensure_positive("rho_shm", self.rho_shm)?;
        ensure_positive("rho_rshm", self.rho_rshm)?;
        ensure_positive("rho_pmafm", self.rho_pmafm)?;
        if !(self.p_pfm > 0.0 && self.p_pfm <= 1.0) {
            return Err(Error::Domain {
                name: "p_pfm",
                value: self.p_pfm,
                reason: "must lie in (0, 1]",
            });
        }
        Ok(())
    }

    /// Anisotropy entering the wall width, with the optional shape correction.
    pub fn effective_ku(&self) -> f64 {
        if self.demag_correction {
            self.ku - 0.5 * MU0 * self.ms * self.ms
        } else {
            self.ku
        }
    }
}

/// Track, metal-layer and detector dimensions plus the edge model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeviceGeometry {
    pub l_pmafm: f64,
    pub w_pmafm: f64,
    pub h_pmafm: f64,
    pub l_shm: f64,
    pub w_shm: f64,
    pub h_shm: f64,
    pub l_rshm: f64,
    pub w_rshm: f64,
    pub h_rshm: f64,
    /// Skyrmion radius (m).
    pub r_sk: f64,
    /// Edge confinement constant (N/m); negative.
    pub k_confine: f64,
    /// MTJ fixed-layer footprint at the output end (m).
    pub l_det: f64,
    pub w_det: f64,
    /// Diameter of the P–FM injection spot (m).
    pub nucleation_diameter: f64,
    /// Extra distance beyond w/2 − r_sk the centre may travel before the
    /// skyrmion is annihilated (m).
    pub annihilation_slack: f64,
    /// Distance below w/2 − r_sk at which the planner starts a repeater (m).
    /// Negative values put the trigger beyond the one-radius line.
    pub trigger_buffer: f64,
}

impl Default for DeviceGeometry {
    fn default() -> Self {
        Self {
            l_pmafm: 200e-9,
            w_pmafm: 50e-9,
            h_pmafm: 0.4e-9,
            l_shm: 200e-9,
            w_shm: 50e-9,
            h_shm: 1e-9,
            l_rshm: 25e-9,
            w_rshm: 50e-9,
            h_rshm: 1e-9,
            r_sk: 8e-9,
            k_confine: -3.6e-5,
            l_det: 25e-9,
            w_det: 50e-9,
            nucleation_diameter: 20e-9,
            annihilation_slack: 1.6e-9,
            trigger_buffer: -1.4e-9,
        }
    }
}

impl DeviceGeometry {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("l_pmafm", self.l_pmafm),
            ("w_pmafm", self.w_pmafm),
            ("h_pmafm", self.h_pmafm),
            ("l_shm", self.l_shm),
            ("w_shm", self.w_shm),
            ("h_shm", self.h_shm),
            ("l_rshm", self.l_rshm),
            ("w_rshm", self.w_rshm),
            ("h_rshm", self.h_rshm),
            ("r_sk", self.r_sk),
            ("l_det", self.l_det),
            ("w_det", self.w_det),
            ("nucleation_diameter", self.nucleation_diameter),
        ] {
            ensure_positive(name, v)?;
        }
        if !(self.k_confine < 0.0 && self.k_confine.is_finite()) {
            return Err(Error::Domain {
                name: "k_confine",
                value: self.k_confine,
                reason: "must be finite and < 0",
            });
        }
        if 2.0 * self.r_sk >= self.w_pmafm {
            return Err(Error::Geometry(format!(
                "skyrmion diameter {:e} m does not fit in track width {:e} m",
                2.0 * self.r_sk,
                self.w_pmafm
            )));
        }
        if self.l_rshm >= self.l_pmafm {
            return Err(Error::Geometry("l_rshm must be shorter than l_pmafm".into()));
        }
        if self.l_det > self.l_pmafm {
            return Err(Error::Geometry("l_det must not exceed l_pmafm".into()));
        }
        if !self.annihilation_slack.is_finite() || !self.trigger_buffer.is_finite() {
            return Err(Error::Geometry("edge margins must be finite".into()));
        }
        if self.annihilation_bound() <= 0.0 {
            return Err(Error::Geometry("annihilation bound must be positive".into()));
        }
        Ok(())
    }

    /// |y| at which the skyrmion centre is considered destroyed at the edge.
    pub fn annihilation_bound(&self) -> f64 {
        0.5 * self.w_pmafm - self.r_sk + self.annihilation_slack
    }

    pub fn shm_volume(&self) -> f64 {
        self.l_shm * self.w_shm * self.h_shm
    }

    pub fn rshm_volume(&self) -> f64 {
        self.l_rshm * self.w_rshm * self.h_rshm
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Chirality {
    Positive,
    Negative,
}

impl Chirality {
    pub fn sign(self) -> f64 {
        match self {
            Chirality::Positive => 1.0,
            Chirality::Negative => -1.0,
        }
    }

    pub fn from_sign(q: f64) -> Result<Self> {
        if q == 1.0 {
            Ok(Chirality::Positive)
        } else if q == -1.0 {
            Ok(Chirality::Negative)
        } else {
            Err(Error::Domain {
                name: "chirality_q",
                value: q,
                reason: "must be +1 or -1",
            })
        }
    }
}

/// Current densities applied to the device.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveConfig {
    /// SHM current density (A/m²).
    pub jx: f64,
    /// R–SHM current density (A/m²).
    pub jy: f64,
    /// Nucleation current density (A/m²).
    pub j_nuc: f64,
    /// Critical nucleation current density (A/m²).
    pub j_c_nuc: f64,
    pub chirality_q: Chirality,
}

impl Default for DriveConfig {
    fn default() -> Self {
        Self {
            jx: 9e10,
            jy: 5e11,
            j_nuc: 9.55e11,
            j_c_nuc: 7.5e11,
            chirality_q: Chirality::Positive,
        }
    }
}

impl DriveConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.jx >= 0.0 && self.jx.is_finite()) {
            return Err(Error::Domain {
                name: "jx",
                value: self.jx,
                reason: "must be finite and >= 0",
            });
        }
        if !(self.jy >= 0.0 && self.jy.is_finite()) {
            return Err(Error::Domain {
                name: "jy",
                value: self.jy,
                reason: "must be finite and >= 0",
            });
        }
        ensure_positive("j_nuc", self.j_nuc)?;
        ensure_positive("j_c_nuc", self.j_c_nuc)
    }
}

/// Every derived symbol of the Thiele model for one design point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThieleConstants {
    /// Gyrovector z-component G (N·s/m).
    pub g_gyro: f64,
    /// Dissipative tensor diagonal D (N·s/m).
    pub d_diss: f64,
    /// Domain-wall width Δ (m).
    pub delta_dw: f64,
    /// Relaxation time τ (s).
    pub tau: f64,
    /// αD/(G² + (αD)²) (m/(N·s)).
    pub a_const: f64,
    /// G/(G² + (αD)²) (m/(N·s)).
    pub b_const: f64,
    /// Spin Hall force from Jx (N).
    pub f_she_x: f64,
    /// Spin Hall force from Jy (N), applied only under an R–SHM.
    pub f_she_y: f64,
    pub alpha: f64,
    pub k_confine: f64,
}

impl ThieleConstants {
    /// G/(αD): ratio of gyrotropic to dissipative coefficients.
    pub fn magnus_ratio(&self) -> f64 {
        self.g_gyro / (self.alpha * self.d_diss)
    }

    /// Transverse position the centre relaxes to under the given y-force.
    pub fn steady_deflection(&self, f_y: f64) -> f64 {
        -self.magnus_ratio() * self.f_she_x / self.k_confine + f_y / self.k_confine
    }

    /// Constants with a different Jx/Jy drive but identical material and geometry.
    pub fn with_forces(&self, f_she_x: f64, f_she_y: f64) -> Self {
        Self {
            f_she_x,
            f_she_y,
            ..*self
        }
    }
}

/// Bloch-wall width Δ = sqrt(A / Ku).
pub fn domain_wall_width(m: &MaterialParams) -> Result<f64> {
    ensure_positive("exchange_a", m.exchange_a)?;
    ensure_positive("ku", m.ku)?;
    let ku = m.effective_ku();
    if ku <= 0.0 {
        return Err(Error::Domain {
            name: "ku",
            value: ku,
            reason: "demagnetisation-corrected anisotropy must be > 0",
        });
    }
    Ok((m.exchange_a / ku).sqrt())
}

/// Spin Hall driving force ħ·θ·J·Q·π²·r_sk / (2e).
pub fn spin_hall_force(
    j: f64,
    m: &MaterialParams,
    g: &DeviceGeometry,
    q: Chirality,
    c: &PhysicalConstants,
) -> f64 {
    c.hbar * m.theta_she * j * q.sign() * PI * PI * g.r_sk / (2.0 * c.e_charge)
}

pub fn thiele_constants(
    m: &MaterialParams,
    g: &DeviceGeometry,
    d: &DriveConfig,
    c: &PhysicalConstants,
) -> Result<ThieleConstants> {
    m.validate()?;
    g.validate()?;
    d.validate()?;
    c.validate()?;

    let delta = domain_wall_width(m)?;
    if delta == 0.0 {
        return Err(Error::Singularity("domain-wall width is zero"));
    }
    if g.k_confine == 0.0 {
        return Err(Error::Singularity("confinement constant is zero"));
    }
    let q = d.chirality_q.sign();
    let g_gyro = -4.0 * PI * q * m.ms * g.h_pmafm / c.gamma0;
    let d_diss = -m.ms * g.h_pmafm * PI.powi(3) * g.r_sk / (delta * c.gamma0);
    let alpha_d = m.alpha * d_diss;
    let denom = g_gyro * g_gyro + alpha_d * alpha_d;
    let a_const = alpha_d / denom;
    let b_const = g_gyro / denom;
    // A·k is the decay rate of y; it must be positive for a confined track.
    if a_const * g.k_confine <= 0.0 {
        return Err(Error::Singularity("confinement does not restore the skyrmion"));
    }
    let tau = denom / (alpha_d * g.k_confine).abs();

    Ok(ThieleConstants {
        g_gyro,
        d_diss,
        delta_dw: delta,
        tau,
        a_const,
        b_const,
        f_she_x: spin_hall_force(d.jx, m, g, d.chirality_q, c),
        f_she_y: spin_hall_force(d.jy, m, g, d.chirality_q, c),
        alpha: m.alpha,
        k_confine: g.k_confine,
    })
}
