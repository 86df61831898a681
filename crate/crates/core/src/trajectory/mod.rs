//! Piecewise skyrmion trajectories across R1 (Jx only) and R2 (repeater)
//! regions, plus an RK4 reference integrator.

mod closed_form;
mod oracle;

pub use closed_form::{
    position, position_r1, position_r2, r2_validity, time_to_cross, velocity,
    CROSSING_TOLERANCE, MAX_BISECTION_STEPS,
};
pub(crate) use closed_form::{position_under, time_to_edge, time_to_ordinate};
pub use oracle::{numeric_oracle, numeric_oracle_with, OracleOptions, DEFAULT_ORACLE_DT};

use std::fmt;

use crate::device::{DeviceGeometry, ThieleConstants};
use crate::error::{Error, Result};
use crate::planner::RepeaterLayout;

/// Skyrmion centre and clocks.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SkyrmionState {
    pub x: f64,
    pub y: f64,
    /// Time since entering the current segment (s).
    pub t_local: f64,
    /// Time since the start of the run (s).
    pub t_global: f64,
}

impl SkyrmionState {
    pub fn at(x: f64, y: f64) -> Self {
        Self {
            x,
            y,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SegmentKind {
    /// Driven by Jx only.
    R1,
    /// Under a repeater: driven by Jx and Jy.
    R2,
}

impl fmt::Display for SegmentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SegmentKind::R1 => "R1",
            SegmentKind::R2 => "R2",
        })
    }
}

/// A stretch of track `[x_start, x_end)` of one kind.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub kind: SegmentKind,
    pub x_start: f64,
    pub x_end: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Reached,
    Annihilated,
    Stalled,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Reached => "Reached",
            Outcome::Annihilated => "Annihilated",
            Outcome::Stalled => "Stalled",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub state: SkyrmionState,
    pub kind: SegmentKind,
}

/// One traversal of a segment, starting from `entry`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentRun {
    /// Index into [`Trajectory::segments`].
    pub segment: usize,
    pub entry: SkyrmionState,
    pub duration: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub segments: Vec<Segment>,
    pub runs: Vec<SegmentRun>,
    pub outcome: Outcome,
    /// Elapsed time until the run terminated (s).
    pub t_prop: f64,
    /// Time spent under repeaters (s).
    pub r2_residency: f64,
}

impl Trajectory {
    pub fn final_state(&self) -> SkyrmionState {
        self.samples
            .last()
            .map(|s| s.state)
            .unwrap_or_default()
    }

    /// Closed-form position at absolute time `t_global`, if the run covers it.
    pub fn position_at(&self, tc: &ThieleConstants, t_global: f64) -> Option<(f64, f64)> {
        let run = self.runs.iter().find(|r| {
            t_global >= r.entry.t_global && t_global <= r.entry.t_global + r.duration
        })?;
        let kind = self.segments[run.segment].kind;
        let t = (t_global - run.entry.t_global).max(0.0);
        Some(position(tc, &run.entry, kind, t))
    }

    /// Comma-separated samples with a header row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t_global,x,y,segment_kind\n");
        for s in &self.samples {
            out.push_str(&format!(
                "{:e},{:e},{:e},{}\n",
                s.state.t_global, s.state.x, s.state.y, s.kind
            ));
        }
        out
    }
}

/// Splits the track into R1 gaps and the layout's R2 intervals.
pub fn tile_track(geometry: &DeviceGeometry, layout: &RepeaterLayout) -> Result<Vec<Segment>> {
    let length = geometry.l_pmafm;
    let width_tol = 1e-9 * geometry.l_rshm;
    let mut segments = Vec::with_capacity(2 * layout.intervals.len() + 1);
    let mut cursor = 0.0;
    for &(start, end) in &layout.intervals {
        if !(start.is_finite() && end.is_finite()) || start < cursor || end > length {
            return Err(Error::Config(format!(
                "repeater interval [{start:e}, {end:e}] is unsorted, overlapping or off the track"
            )));
        }
        if ((end - start) - geometry.l_rshm).abs() > width_tol {
            return Err(Error::Config(format!(
                "repeater interval [{start:e}, {end:e}] is not {:e} m wide",
                geometry.l_rshm
            )));
        }
        if start > cursor {
            segments.push(Segment {
                kind: SegmentKind::R1,
                x_start: cursor,
                x_end: start,
            });
        }
        segments.push(Segment {
            kind: SegmentKind::R2,
            x_start: start,
            x_end: end,
        });
        cursor = end;
    }
    if cursor < length {
        segments.push(Segment {
            kind: SegmentKind::R1,
            x_start: cursor,
            x_end: length,
        });
    }
    Ok(segments)
}

/// Sampling resolution of [`simulate_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimOptions {
    pub samples_per_segment: usize,
}

impl Default for SimOptions {
    fn default() -> Self {
        Self {
            samples_per_segment: 100,
        }
    }
}

pub fn simulate(
    tc: &ThieleConstants,
    geometry: &DeviceGeometry,
    layout: &RepeaterLayout,
    start: SkyrmionState,
) -> Result<Trajectory> {
    simulate_with(tc, geometry, layout, start, &SimOptions::default())
}

/// Stitches the closed forms over the layout, resetting local time at
/// every segment boundary.
pub fn simulate_with(
    tc: &ThieleConstants,
    geometry: &DeviceGeometry,
    layout: &RepeaterLayout,
    start: SkyrmionState,
    options: &SimOptions,
) -> Result<Trajectory> {
    geometry.validate()?;
    let segments = tile_track(geometry, layout)?;
    let bound = geometry.annihilation_bound();
    let n = options.samples_per_segment.max(1);

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

    let mut x = start.x;
    let mut y = start.y;
    for index in 0..traj.segments.len() {
        let seg = traj.segments[index];
        if seg.x_end <= x {
            continue;
        }
        let entry = SkyrmionState {
            x,
            y,
            t_local: 0.0,
            t_global: start.t_global + traj.t_prop,
        };
        let f_y = match seg.kind {
            SegmentKind::R1 => 0.0,
            SegmentKind::R2 => tc.f_she_y,
        };
        let edge = time_to_edge(tc, y, f_y, bound);
        let (duration, outcome) = match time_to_cross(tc, &entry, seg.kind, seg.x_end) {
            Ok(t_cross) => match edge {
                Some(t_edge) if t_edge < t_cross => (t_edge, Some(Outcome::Annihilated)),
                _ => (t_cross, None),
            },
            Err(Error::Stalled(_)) => match edge {
                Some(t_edge) => (t_edge, Some(Outcome::Annihilated)),
                None => (0.0, Some(Outcome::Stalled)),
            },
            Err(e) => return Err(e),
        };

        for j in 1..=n {
            if duration == 0.0 {
                break;
            }
            let t = if j == n {
                duration
            } else {
                duration * j as f64 / n as f64
            };
            let (sx, sy) = position(tc, &entry, seg.kind, t);
            traj.samples.push(Sample {
                state: SkyrmionState {
                    x: sx,
                    y: sy,
                    t_local: t,
                    t_global: entry.t_global + t,
                },
                kind: seg.kind,
            });
        }
        traj.runs.push(SegmentRun {
            segment: index,
            entry,
            duration,
        });
        traj.t_prop += duration;
        if seg.kind == SegmentKind::R2 {
            traj.r2_residency += duration;
        }
        (x, y) = position(tc, &entry, seg.kind, duration);

        if let Some(outcome) = outcome {
            traj.outcome = outcome;
            return Ok(traj);
        }
    }
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::device::*;
    use crate::planner::RepeaterLayout;

    fn setup(jx: f64) -> (ThieleConstants, DeviceGeometry) {
        let g = DeviceGeometry::default();
        let d = DriveConfig {
            jx,
            ..DriveConfig::default()
        };
        let tc = thiele_constants(
            &MaterialParams::default(),
            &g,
            &d,
            &PhysicalConstants::default(),
        )
        .unwrap();
        (tc, g)
    }

    #[test]
    fn tiling_covers_track() {
        let g = DeviceGeometry::default();
        let layout = RepeaterLayout::fixed(vec![(50e-9, 75e-9), (75e-9, 100e-9)]);
        let segs = tile_track(&g, &layout).unwrap();
        let kinds: Vec<_> = segs.iter().map(|s| s.kind).collect();
        assert_eq!(
            kinds,
            [SegmentKind::R1, SegmentKind::R2, SegmentKind::R2, SegmentKind::R1]
        );
        assert_eq!(segs[0].x_start, 0.0);
        assert_eq!(segs.last().unwrap().x_end, g.l_pmafm);
    }

    #[test]
    fn tiling_rejects_bad_layouts() {
        let g = DeviceGeometry::default();
        for intervals in [
            vec![(50e-9, 75e-9), (60e-9, 85e-9)],
            vec![(50e-9, 60e-9)],
            vec![(190e-9, 215e-9)],
            vec![(-5e-9, 20e-9)],
        ] {
            let err = tile_track(&g, &RepeaterLayout::fixed(intervals)).unwrap_err();
            assert!(matches!(err, Error::Config(_)));
        }
    }

    #[test]
    fn no_repeater_annihilates_at_9e10() {
        let (tc, g) = setup(9e10);
        let traj = simulate(&tc, &g, &RepeaterLayout::none(), SkyrmionState::default()).unwrap();
        assert_eq!(traj.outcome, Outcome::Annihilated);
        assert!(traj.final_state().y.abs() >= g.annihilation_bound() * (1.0 - 1e-12));
    }

    #[test]
    fn no_repeater_reaches_at_6_5e10() {
        let (tc, g) = setup(6.5e10);
        let traj = simulate(&tc, &g, &RepeaterLayout::none(), SkyrmionState::default()).unwrap();
        assert_eq!(traj.outcome, Outcome::Reached);
        assert!(traj.final_state().x >= g.l_pmafm);
        let max_y = traj
            .samples
            .iter()
            .map(|s| s.state.y.abs())
            .fold(0.0, f64::max);
        assert!(max_y < g.annihilation_bound());
    }

    #[test]
    fn stationary_without_drive() {
        let (tc, g) = setup(0.0);
        let traj = simulate(&tc, &g, &RepeaterLayout::none(), SkyrmionState::default()).unwrap();
        assert_eq!(traj.outcome, Outcome::Stalled);
        assert_eq!(traj.final_state().x, 0.0);
    }

    #[test]
    fn csv_has_header_and_rows() {
        let (tc, g) = setup(6.5e10);
        let traj = simulate_with(
            &tc,
            &g,
            &RepeaterLayout::none(),
            SkyrmionState::default(),
            &SimOptions {
                samples_per_segment: 4,
            },
        )
        .unwrap();
        let csv = traj.to_csv();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], "t_global,x,y,segment_kind");
        assert_eq!(lines.len(), 1 + 5);
        assert!(lines[1].ends_with(",R1"));
    }
}
