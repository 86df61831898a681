//! Closed-form skyrmion motion inside a single region.
//!
//! Positions are expressed in the track frame: x runs from the nucleation
//! point towards the detector, y across the track. The track frame is the
//! x-mirror of the frame in which G and D carry their literal signs, so a
//! positive Jx with Q = +1 moves the skyrmion towards +x and deflects it
//! towards +y.
//!
//! Within a region y relaxes exponentially towards its steady deflection,
//! and x is the exact time integral of the longitudinal velocity.

use super::{SegmentKind, SkyrmionState};
use crate::device::ThieleConstants;
use crate::error::{Error, Result};

/// x tolerance of the crossing-time search (m).
pub const CROSSING_TOLERANCE: f64 = 1e-13;
/// Iteration cap of the crossing-time bisection.
pub const MAX_BISECTION_STEPS: usize = 200;

fn y_force(tc: &ThieleConstants, kind: SegmentKind) -> f64 {
    match kind {
        SegmentKind::R1 => 0.0,
        SegmentKind::R2 => tc.f_she_y,
    }
}

/// Position after local time `t` under a transverse force `f_y`.
pub(crate) fn position_under(
    tc: &ThieleConstants,
    x0: f64,
    y0: f64,
    f_y: f64,
    t: f64,
) -> (f64, f64) {
    if t == 0.0 {
        return (x0, y0);
    }
    let tau = tc.tau;
    let k = tc.k_confine;
    let ratio = tc.magnus_ratio();
    let y_inf = tc.steady_deflection(f_y);
    let decay = (-t / tau).exp();
    let rise = -(-t / tau).exp_m1();

    let y = y_inf + (y0 - y_inf) * decay;
    let y_integral = y_inf * t + (y0 - y_inf) * tau * rise;
    let drift = (tc.f_she_x / k + ratio * f_y / k) * t - ratio * y_integral;
    (x0 - drift / tau, y)
}

/// Velocity after local time `t` under a transverse force `f_y`.
pub(crate) fn velocity_under(
    tc: &ThieleConstants,
    y0: f64,
    f_y: f64,
    t: f64,
) -> (f64, f64) {
    let tau = tc.tau;
    let k = tc.k_confine;
    let ratio = tc.magnus_ratio();
    let y_inf = tc.steady_deflection(f_y);
    let decay = (-t / tau).exp();
    let y = y_inf + (y0 - y_inf) * decay;
    let vx = -(tc.f_she_x / k + ratio * f_y / k - ratio * y) / tau;
    let vy = -(y0 - y_inf) * decay / tau;
    (vx, vy)
}

/// Position in a region driven by Jx only, `t` after `state0`.
pub fn position_r1(tc: &ThieleConstants, state0: &SkyrmionState, t: f64) -> (f64, f64) {
    position_under(tc, state0.x, state0.y, 0.0, t)
}

/// Position under an R–SHM (Jx and Jy), `t` after the entry state.
pub fn position_r2(tc: &ThieleConstants, state1: &SkyrmionState, t: f64) -> (f64, f64) {
    position_under(tc, state1.x, state1.y, tc.f_she_y, t)
}

pub fn position(tc: &ThieleConstants, state0: &SkyrmionState, kind: SegmentKind, t: f64) -> (f64, f64) {
    position_under(tc, state0.x, state0.y, y_force(tc, kind), t)
}

pub fn velocity(tc: &ThieleConstants, state0: &SkyrmionState, kind: SegmentKind, t: f64) -> (f64, f64) {
    velocity_under(tc, state0.y, y_force(tc, kind), t)
}

/// True when the R–SHM drive pushes the skyrmion forward and back towards
/// the track interior immediately after entry.
pub fn r2_validity(tc: &ThieleConstants, state1: &SkyrmionState) -> bool {
    let (vx, vy) = velocity_under(tc, state1.y, tc.f_she_y, 0.0);
    let inward = if state1.y < 0.0 { vy > 0.0 } else { vy < 0.0 };
    vx > 0.0 && inward
}

/// Local time at which the skyrmion centre reaches `x_target`.
///
/// Requires x to increase monotonically between the entry state and the
/// target. Since y is monotone inside a region, v_x is monotone as well, so
/// a positive velocity at both ends of the bracket is sufficient.
pub fn time_to_cross(
    tc: &ThieleConstants,
    state0: &SkyrmionState,
    kind: SegmentKind,
    x_target: f64,
) -> Result<f64> {
    let f_y = y_force(tc, kind);
    let x_at = |t: f64| position_under(tc, state0.x, state0.y, f_y, t).0;
    let vx_at = |t: f64| velocity_under(tc, state0.y, f_y, t).0;

    if x_target == state0.x {
        return Ok(0.0);
    }
    if x_target < state0.x {
        return Err(Error::InvalidInput(format!(
            "target x {x_target:e} lies behind the current position {:e}",
            state0.x
        )));
    }
    if vx_at(0.0) <= 0.0 {
        return Err(Error::Stalled(format!(
            "no forward drift at x = {:e} m",
            state0.x
        )));
    }

    let mut hi = ((x_target - state0.x) / vx_at(0.0)).max(tc.tau * 1e-6);
    let mut doublings = 0;
    while x_at(hi) < x_target {
        if vx_at(hi) <= 0.0 || doublings > MAX_BISECTION_STEPS {
            return Err(Error::Stalled(format!(
                "x stops increasing before reaching {x_target:e} m"
            )));
        }
        hi *= 2.0;
        doublings += 1;
    }
    if vx_at(hi) <= 0.0 {
        return Err(Error::Stalled("x is not monotone over the bracket".into()));
    }

    let mut lo = 0.0;
    for _ in 0..MAX_BISECTION_STEPS {
        if x_at(hi) - x_target < CROSSING_TOLERANCE {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if x_at(mid) < x_target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}

/// Local time at which |y| first reaches `bound`, if it ever does.
pub(crate) fn time_to_edge(
    tc: &ThieleConstants,
    y0: f64,
    f_y: f64,
    bound: f64,
) -> Option<f64> {
    if y0.abs() >= bound {
        return Some(0.0);
    }
    let y_inf = tc.steady_deflection(f_y);
    if y_inf.abs() <= bound {
        return None;
    }
    let edge = bound.copysign(y_inf);
    // y(t) - y_inf = (y0 - y_inf) e^{-t/τ}
    let ratio = (edge - y_inf) / (y0 - y_inf);
    if ratio <= 0.0 || ratio >= 1.0 {
        return None;
    }
    Some(-tc.tau * ratio.ln())
}

/// Local time at which |y| first reaches `level`.
pub(crate) fn time_to_ordinate(
    tc: &ThieleConstants,
    y0: f64,
    f_y: f64,
    level: f64,
) -> Option<f64> {
    if y0.abs() >= level {
        return Some(0.0);
    }
    let y_inf = tc.steady_deflection(f_y);
    if y_inf.abs() <= level {
        return None;
    }
    let target = level.copysign(y_inf);
    let ratio = (target - y_inf) / (y0 - y_inf);
    Some(-tc.tau * ratio.ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::device::*;
    use approx::assert_relative_eq;

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

    fn origin() -> SkyrmionState {
        SkyrmionState::default()
    }

    #[test]
    fn initial_condition_exact() {
        let tc = constants(9e10, 5e11);
        let s = SkyrmionState {
            x: 3e-8,
            y: -2e-9,
            ..SkyrmionState::default()
        };
        assert_eq!(position_r1(&tc, &s, 0.0), (s.x, s.y));
        assert_eq!(position_r2(&tc, &s, 0.0), (s.x, s.y));
    }

    #[test]
    fn steady_deflection_limit() {
        let tc = constants(9e10, 5e11);
        let (_, y) = position_r1(&tc, &origin(), 60.0 * tc.tau);
        let expected = (tc.g_gyro * tc.f_she_x / (tc.alpha * tc.d_diss * tc.k_confine)).abs();
        assert_relative_eq!(expected, 1.88e-8, max_relative = 5e-3);
        assert_relative_eq!(y, expected, max_relative = 1e-9);
        assert!(y > 0.0);
    }

    #[test]
    fn initial_velocity() {
        let tc = constants(9e10, 5e11);
        let (vx, _) = velocity(&tc, &origin(), SegmentKind::R1, 0.0);
        assert_relative_eq!(vx, (tc.f_she_x / (tc.k_confine * tc.tau)).abs(), max_relative = 1e-12);
        assert_relative_eq!(vx, 134.0, max_relative = 5e-3);
        // finite difference of the position agrees with the velocity
        let h = 1e-16;
        let (x1, _) = position_r1(&tc, &origin(), h);
        assert_relative_eq!(x1 / h, vx, max_relative = 1e-6);
    }

    #[test]
    fn r2_reduces_to_r1_without_jy() {
        let tc = constants(9e10, 0.0);
        let s = SkyrmionState {
            x: 5e-8,
            y: 1.2e-8,
            ..SkyrmionState::default()
        };
        for i in 0..10 {
            let t = (i as f64 + 0.37) * 3.1e-11;
            let a = position_r1(&tc, &s, t);
            let b = position_r2(&tc, &s, t);
            assert_relative_eq!(a.0, b.0, max_relative = 1e-12);
            assert_relative_eq!(a.1, b.1, max_relative = 1e-12);
        }
    }

    #[test]
    fn r2_moves_forward_and_inward() {
        let tc = constants(9e10, 5e11);
        let s = SkyrmionState {
            x: 6e-8,
            y: 1.84e-8,
            ..SkyrmionState::default()
        };
        assert!(r2_validity(&tc, &s));
        let exit = time_to_cross(&tc, &s, SegmentKind::R2, s.x + 25e-9).unwrap();
        let mut prev = position_r2(&tc, &s, 0.0);
        for i in 1..=50 {
            let p = position_r2(&tc, &s, exit * i as f64 / 50.0);
            assert!(p.0 > prev.0);
            assert!(p.1 < prev.1);
            prev = p;
        }
    }

    #[test]
    fn r2_validity_degenerate_drives() {
        let s = SkyrmionState {
            y: 1.84e-8,
            ..SkyrmionState::default()
        };
        assert!(!r2_validity(&constants(9e10, 0.0), &s));
        let reversed = constants(9e10, 5e11);
        let reversed = reversed.with_forces(reversed.f_she_x, -reversed.f_she_y);
        assert!(!r2_validity(&reversed, &s));
    }

    #[test]
    fn crossing_time_properties() {
        let tc = constants(9e10, 5e11);
        let s = origin();
        assert_eq!(time_to_cross(&tc, &s, SegmentKind::R1, 0.0).unwrap(), 0.0);
        for target in [1e-9, 5e-8, 2e-7] {
            let t = time_to_cross(&tc, &s, SegmentKind::R1, target).unwrap();
            let (x, _) = position_r1(&tc, &s, t);
            assert!((x - target).abs() < CROSSING_TOLERANCE);
            assert!(x >= target);
        }
    }

    #[test]
    fn crossing_stalls_without_drive() {
        let tc = constants(0.0, 0.0);
        let err = time_to_cross(&tc, &origin(), SegmentKind::R1, 1e-8).unwrap_err();
        assert!(matches!(err, Error::Stalled(_)));
    }

    #[test]
    fn reversing_jx_mirrors_trajectory() {
        let fwd = constants(9e10, 0.0);
        let back = fwd.with_forces(-fwd.f_she_x, 0.0);
        for i in 1..8 {
            let t = i as f64 * 7e-11;
            let a = position_r1(&fwd, &origin(), t);
            let b = position_r1(&back, &origin(), t);
            assert_relative_eq!(a.0, -b.0, max_relative = 1e-12);
            assert_relative_eq!(a.1, -b.1, max_relative = 1e-12);
        }
    }

    #[test]
    fn steady_deflection_scaling() {
        let base = constants(9e10, 0.0).steady_deflection(0.0);
        let doubled = constants(18e10, 0.0).steady_deflection(0.0);
        assert_relative_eq!(doubled, 2.0 * base, max_relative = 1e-12);
        for gamma0 in [1.0e11, 1.76e11, 3.0e11] {
            let c = PhysicalConstants {
                gamma0,
                ..PhysicalConstants::default()
            };
            let tc = thiele_constants(
                &MaterialParams::default(),
                &DeviceGeometry::default(),
                &DriveConfig::default(),
                &c,
            )
            .unwrap();
            assert_relative_eq!(tc.steady_deflection(0.0), base, max_relative = 1e-12);
        }
    }

    #[test]
    fn edge_and_ordinate_times() {
        let tc = constants(9e10, 5e11);
        let t = time_to_edge(&tc, 0.0, 0.0, 18e-9).unwrap();
        let (_, y) = position_r1(&tc, &origin(), t);
        assert_relative_eq!(y, 18e-9, max_relative = 1e-12);
        assert!(time_to_edge(&tc, 0.0, 0.0, 19e-9).is_none());
        let t = time_to_ordinate(&tc, 0.0, 0.0, 16e-9).unwrap();
        let (_, y) = position_r1(&tc, &origin(), t);
        assert_relative_eq!(y, 16e-9, max_relative = 1e-12);
        assert!(time_to_ordinate(&tc, 0.0, 0.0, 20e-9).is_none());
    }
}
