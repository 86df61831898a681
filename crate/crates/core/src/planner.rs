//! Repeater (R–SHM) placement along the track.

use std::fmt;

use crate::device::{DeviceGeometry, ThieleConstants};
use crate::error::{Error, Result};
use crate::trajectory::{
    position, position_under, r2_validity, simulate, time_to_cross, time_to_edge,
    time_to_ordinate, Outcome, SegmentKind, SkyrmionState,
};

/// Default repeater budget.
pub const DEFAULT_P_MAX: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InfeasibilityReason {
    None,
    TooManyRepeaters,
    DetectorOverlap,
    R2Invalid,
    /// The skyrmion stops making forward progress.
    Stalled,
    /// The planned layout still lets the skyrmion reach the edge.
    Annihilated,
}

impl fmt::Display for InfeasibilityReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InfeasibilityReason::None => "None",
            InfeasibilityReason::TooManyRepeaters => "TooManyRepeaters",
            InfeasibilityReason::DetectorOverlap => "DetectorOverlap",
            InfeasibilityReason::R2Invalid => "R2Invalid",
            InfeasibilityReason::Stalled => "Stalled",
            InfeasibilityReason::Annihilated => "Annihilated",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PlacementMode {
    /// Each repeater starts where the skyrmion crosses the trigger ordinate.
    JustInTime,
    /// The fewest equally spaced repeaters that get the skyrmion through.
    EqualSpacing,
    /// Intervals supplied by the caller.
    Manual,
}

impl fmt::Display for PlacementMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PlacementMode::JustInTime => "just-in-time",
            PlacementMode::EqualSpacing => "equal-spacing",
            PlacementMode::Manual => "manual",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RepeaterLayout {
    pub p: usize,
    /// Sorted, disjoint `(x_start, x_end)` pairs (m).
    pub intervals: Vec<(f64, f64)>,
    pub feasible: bool,
    pub infeasibility_reason: InfeasibilityReason,
    pub mode: PlacementMode,
}

impl RepeaterLayout {
    /// A track without repeaters.
    pub fn none() -> Self {
        Self::fixed(Vec::new())
    }

    /// A caller-supplied layout; checked when it is simulated.
    pub fn fixed(intervals: Vec<(f64, f64)>) -> Self {
        Self {
            p: intervals.len(),
            intervals,
            feasible: true,
            infeasibility_reason: InfeasibilityReason::None,
            mode: PlacementMode::Manual,
        }
    }

    fn infeasible(intervals: Vec<(f64, f64)>, reason: InfeasibilityReason, mode: PlacementMode) -> Self {
        Self {
            p: intervals.len(),
            intervals,
            feasible: false,
            infeasibility_reason: reason,
            mode,
        }
    }
}

/// The |y| at which the planner starts a repeater.
pub fn trigger_ordinate(geometry: &DeviceGeometry) -> Result<f64> {
    let y = geometry.w_pmafm / 2.0 - geometry.r_sk - geometry.trigger_buffer;
    // rounding residue of an exactly degenerate width counts as zero
    if y <= 1e-12 * geometry.w_pmafm {
        return Err(Error::Geometry(format!(
            "trigger ordinate {y:e} m is not positive; the track is too narrow for r_sk and the buffer"
        )));
    }
    Ok(y)
}

/// Greedy forward construction: follow the skyrmion through R1 and start a
/// repeater wherever |y| reaches the trigger ordinate before the track end.
pub fn plan(tc: &ThieleConstants, geometry: &DeviceGeometry, p_max: usize) -> Result<RepeaterLayout> {
    geometry.validate()?;
    let mode = PlacementMode::JustInTime;
    let trigger = trigger_ordinate(geometry)?;
    let bound = geometry.annihilation_bound();
    let length = geometry.l_pmafm;
    let detector_start = length - geometry.l_det;

    let mut intervals: Vec<(f64, f64)> = Vec::new();
    let (mut x, mut y) = (0.0, 0.0);
    loop {
        let entry = SkyrmionState::at(x, y);
        let t_end = match time_to_cross(tc, &entry, SegmentKind::R1, length) {
            Ok(t) => t,
            Err(Error::Stalled(_)) => {
                return Ok(RepeaterLayout::infeasible(intervals, InfeasibilityReason::Stalled, mode))
            }
            Err(e) => return Err(e),
        };
        let t_trigger = match time_to_ordinate(tc, y, 0.0, trigger) {
            Some(t) if t < t_end => t,
            _ => {
                return Ok(RepeaterLayout {
                    p: intervals.len(),
                    intervals,
                    feasible: true,
                    infeasibility_reason: InfeasibilityReason::None,
                    mode,
                })
            }
        };

        let (xs, ys) = position_under(tc, x, y, 0.0, t_trigger);
        let xe = xs + geometry.l_rshm;
        intervals.push((xs, xe));
        if intervals.len() > p_max {
            return Ok(RepeaterLayout::infeasible(intervals, InfeasibilityReason::TooManyRepeaters, mode));
        }
        if xe > detector_start {
            return Ok(RepeaterLayout::infeasible(intervals, InfeasibilityReason::DetectorOverlap, mode));
        }
        let r2_entry = SkyrmionState::at(xs, ys);
        if !r2_validity(tc, &r2_entry) {
            return Ok(RepeaterLayout::infeasible(intervals, InfeasibilityReason::R2Invalid, mode));
        }
        let t_r2 = match time_to_cross(tc, &r2_entry, SegmentKind::R2, xe) {
            Ok(t) => t,
            Err(Error::Stalled(_)) => {
                return Ok(RepeaterLayout::infeasible(intervals, InfeasibilityReason::R2Invalid, mode))
            }
            Err(e) => return Err(e),
        };
        // Jy strong enough to push the skyrmion into the opposite edge.
        if matches!(time_to_edge(tc, ys, tc.f_she_y, bound), Some(t) if t < t_r2) {
            return Ok(RepeaterLayout::infeasible(intervals, InfeasibilityReason::R2Invalid, mode));
        }
        (x, y) = position(tc, &r2_entry, SegmentKind::R2, t_r2);
    }
}

/// Equally spaced repeaters over `[0, l_pmafm - l_det]`, using the fewest
/// (up to `p_max`) with which the skyrmion reaches the end.
pub fn plan_equal_spacing(
    tc: &ThieleConstants,
    geometry: &DeviceGeometry,
    p_max: usize,
) -> Result<RepeaterLayout> {
    geometry.validate()?;
    let mode = PlacementMode::EqualSpacing;
    let usable = geometry.l_pmafm - geometry.l_det;
    let mut last = Vec::new();
    for p in 0..=p_max {
        let pitch = usable / (p + 1) as f64;
        let intervals: Vec<(f64, f64)> = (1..=p)
            .map(|i| {
                let centre = pitch * i as f64;
                let start = (centre - geometry.l_rshm / 2.0).max(0.0);
                (start, start + geometry.l_rshm)
            })
            .collect();
        let overlapping = intervals.windows(2).any(|w| w[1].0 < w[0].1)
            || intervals.last().is_some_and(|iv| iv.1 > usable);
        if overlapping {
            return Ok(RepeaterLayout::infeasible(intervals, InfeasibilityReason::DetectorOverlap, mode));
        }
        let layout = RepeaterLayout {
            p,
            intervals: intervals.clone(),
            feasible: true,
            infeasibility_reason: InfeasibilityReason::None,
            mode,
        };
        let traj = simulate(tc, geometry, &layout, SkyrmionState::default())?;
        match traj.outcome {
            Outcome::Reached => return Ok(layout),
            Outcome::Stalled => {
                return Ok(RepeaterLayout::infeasible(intervals, InfeasibilityReason::Stalled, mode))
            }
            Outcome::Annihilated => last = intervals,
        }
    }
    Ok(RepeaterLayout::infeasible(last, InfeasibilityReason::TooManyRepeaters, mode))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::device::*;

    fn constants(jx: f64, jy: f64) -> ThieleConstants {
        let d = DriveConfig {
            jx,
            jy,
            ..DriveConfig::default()
        };
        thiele_constants(
            &MaterialParams::default(),
            &DeviceGeometry::default(),
            &d,
            &PhysicalConstants::default(),
        )
        .unwrap()
    }

    fn geometry_with_buffer(buffer: f64) -> DeviceGeometry {
        DeviceGeometry {
            trigger_buffer: buffer,
            ..DeviceGeometry::default()
        }
    }

    #[test]
    fn trigger_ordinate_arithmetic() {
        let y = trigger_ordinate(&geometry_with_buffer(1e-9)).unwrap();
        assert!((y - 16e-9).abs() < 1e-20);
        let y = trigger_ordinate(&geometry_with_buffer(0.0)).unwrap();
        assert!((y - 17e-9).abs() < 1e-20);
        let narrow = DeviceGeometry {
            w_pmafm: 2.0 * (8e-9 + 1e-9),
            trigger_buffer: 1e-9,
            ..DeviceGeometry::default()
        };
        assert!(matches!(trigger_ordinate(&narrow), Err(Error::Geometry(_))));
    }

    #[test]
    fn repeater_counts_follow_drive() {
        let g = DeviceGeometry::default();
        let counts: Vec<_> = [6.5e10, 9e10, 1.2e11]
            .iter()
            .map(|&jx| {
                let l = plan(&constants(jx, 5e11), &g, DEFAULT_P_MAX).unwrap();
                assert!(l.feasible, "{jx}: {:?}", l.infeasibility_reason);
                l.p
            })
            .collect();
        assert_eq!(counts, [0, 1, 2]);
    }

    #[test]
    fn feasible_layouts_reach_the_end() {
        let g = DeviceGeometry::default();
        for jx in [6.5e10, 9e10, 1.2e11] {
            let tc = constants(jx, 5e11);
            let layout = plan(&tc, &g, DEFAULT_P_MAX).unwrap();
            let traj = simulate(&tc, &g, &layout, SkyrmionState::default()).unwrap();
            assert_eq!(traj.outcome, Outcome::Reached);
        }
    }

    #[test]
    fn budget_exceeded_is_reported() {
        let l = plan(&constants(1.2e11, 5e11), &DeviceGeometry::default(), 1).unwrap();
        assert!(!l.feasible);
        assert_eq!(l.infeasibility_reason, InfeasibilityReason::TooManyRepeaters);
    }

    #[test]
    fn missing_jy_is_r2_invalid() {
        let l = plan(&constants(9e10, 0.0), &DeviceGeometry::default(), 2).unwrap();
        assert_eq!(l.infeasibility_reason, InfeasibilityReason::R2Invalid);
    }

    #[test]
    fn no_drive_stalls() {
        let l = plan(&constants(0.0, 5e11), &DeviceGeometry::default(), 2).unwrap();
        assert_eq!(l.infeasibility_reason, InfeasibilityReason::Stalled);
    }

    #[test]
    fn equal_spacing_mode_reaches() {
        let g = DeviceGeometry::default();
        let tc = constants(9e10, 5e11);
        let layout = plan_equal_spacing(&tc, &g, 2).unwrap();
        if layout.feasible {
            let traj = simulate(&tc, &g, &layout, SkyrmionState::default()).unwrap();
            assert_eq!(traj.outcome, Outcome::Reached);
        } else {
            assert_ne!(layout.infeasibility_reason, InfeasibilityReason::None);
        }
    }
}
