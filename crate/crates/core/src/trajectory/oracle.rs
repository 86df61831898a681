//! Fixed-step RK4 integration of the velocity form of the Thiele equation.
//!
//! This path uses only the A and B constants and the raw forces, never the
//! closed-form solutions, so it can serve as a reference for them.

use super::{tile_track, Outcome, Sample, SegmentKind, SegmentRun, SkyrmionState, Trajectory};
use crate::device::{DeviceGeometry, ThieleConstants};
use crate::error::{ensure_positive, Result};
use crate::planner::RepeaterLayout;

pub const DEFAULT_ORACLE_DT: f64 = 1e-14;

/// Upper bound on the simulated time of one segment before giving up (s).
const MAX_SEGMENT_TIME: f64 = 1e-6;
const EVENT_BISECTIONS: usize = 80;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleOptions {
    pub dt: f64,
    /// Record one sample every this many steps (events are always recorded).
    pub record_every: usize,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self {
            dt: DEFAULT_ORACLE_DT,
            record_every: 1,
        }
    }
}

struct Rhs {
    a: f64,
    b: f64,
    k: f64,
    fx: f64,
    fy: f64,
}

impl Rhs {
    /// Track-frame velocity; the track x axis is the mirror of the Thiele x axis.
    fn eval(&self, y: f64) -> (f64, f64) {
        let transverse = self.fy - self.k * y;
        let vx = -(self.a * self.fx + self.b * transverse);
        let vy = -self.b * self.fx + self.a * transverse;
        (vx, vy)
    }

    fn step(&self, x: f64, y: f64, h: f64) -> (f64, f64) {
        let (k1x, k1y) = self.eval(y);
        let (k2x, k2y) = self.eval(y + 0.5 * h * k1y);
        let (k3x, k3y) = self.eval(y + 0.5 * h * k2y);
        let (k4x, k4y) = self.eval(y + h * k3y);
        (
            x + h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x),
            y + h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y),
        )
    }
}

/// Smallest sub-step in `(0, h]` at which `event` holds, by bisection.
fn locate(rhs: &Rhs, x: f64, y: f64, h: f64, event: impl Fn(f64, f64) -> bool) -> f64 {
    let (mut lo, mut hi) = (0.0, h);
    for _ in 0..EVENT_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let (mx, my) = rhs.step(x, y, mid);
        if event(mx, my) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

pub fn numeric_oracle(
    tc: &ThieleConstants,
    geometry: &DeviceGeometry,
    layout: &RepeaterLayout,
    start: SkyrmionState,
    dt: f64,
) -> Result<Trajectory> {
    numeric_oracle_with(
        tc,
        geometry,
        layout,
        start,
        &OracleOptions {
            dt,
            ..OracleOptions::default()
        },
    )
}

pub fn numeric_oracle_with(
    tc: &ThieleConstants,
    geometry: &DeviceGeometry,
    layout: &RepeaterLayout,
    start: SkyrmionState,
    options: &OracleOptions,
) -> Result<Trajectory> {
    ensure_positive("dt", options.dt)?;
    geometry.validate()?;
    let segments = tile_track(geometry, layout)?;
    let bound = geometry.annihilation_bound();
    let every = options.record_every.max(1);
    let dt = options.dt;

    let first_kind = segments
        .iter()
        .find(|s| s.x_end > start.x)
        .map_or(SegmentKind::R1, |s| s.kind);
    let mut traj = Trajectory {
        samples: vec![Sample {
            state: SkyrmionState {
                t_local: 0.0,
                ..start
            },
            kind: first_kind,
        }],
        segments,
        runs: Vec::new(),
        outcome: Outcome::Reached,
        t_prop: 0.0,
        r2_residency: 0.0,
    };

    let (mut x, mut y) = (start.x, start.y);
    for index in 0..traj.segments.len() {
        let seg = traj.segments[index];
        if seg.x_end <= x {
            continue;
        }
        let rhs = Rhs {
            a: tc.a_const,
            b: tc.b_const,
            k: tc.k_confine,
            fx: tc.f_she_x,
            fy: match seg.kind {
                SegmentKind::R1 => 0.0,
                SegmentKind::R2 => tc.f_she_y,
            },
        };
        let entry = SkyrmionState {
            x,
            y,
            t_local: 0.0,
            t_global: start.t_global + traj.t_prop,
        };
        let mut t = 0.0;
        let mut steps = 0usize;
        let outcome = loop {
            if y.abs() >= bound {
                break Some(Outcome::Annihilated);
            }
            let (nx, ny) = rhs.step(x, y, dt);
            let crosses = nx >= seg.x_end;
            let hits_edge = ny.abs() >= bound;
            if crosses || hits_edge {
                let h_cross = if crosses {
                    locate(&rhs, x, y, dt, |ex, _| ex >= seg.x_end)
                } else {
                    f64::INFINITY
                };
                let h_edge = if hits_edge {
                    locate(&rhs, x, y, dt, |_, ey| ey.abs() >= bound)
                } else {
                    f64::INFINITY
                };
                let h = h_cross.min(h_edge);
                (x, y) = rhs.step(x, y, h);
                t += h;
                traj.samples.push(Sample {
                    state: SkyrmionState {
                        x,
                        y,
                        t_local: t,
                        t_global: entry.t_global + t,
                    },
                    kind: seg.kind,
                });
                break if h_edge < h_cross {
                    Some(Outcome::Annihilated)
                } else {
                    None
                };
            }
            if nx <= x || t > MAX_SEGMENT_TIME {
                break Some(Outcome::Stalled);
            }
            (x, y) = (nx, ny);
            t += dt;
            steps += 1;
            if steps.is_multiple_of(every) {
                traj.samples.push(Sample {
                    state: SkyrmionState {
                        x,
                        y,
                        t_local: t,
                        t_global: entry.t_global + t,
                    },
                    kind: seg.kind,
                });
            }
        };

        traj.runs.push(SegmentRun {
            segment: index,
            entry,
            duration: t,
        });
        traj.t_prop += t;
        if seg.kind == SegmentKind::R2 {
            traj.r2_residency += t;
        }
        if let Some(outcome) = outcome {
            traj.outcome = outcome;
            return Ok(traj);
        }
    }
    Ok(traj)
}
