//! Cross-module behaviour: planner, simulator, energy model and sweep.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use skylogic::config::RunConfig;
use skylogic::device::{thiele_constants, DriveConfig, MaterialParams};
use skylogic::dse::{enumerate, evaluate_point, run_sweep, select_best, Objective, SweepSpec};
use skylogic::performance::{propagation_energy, EnergyConfig};
use skylogic::planner::{plan, InfeasibilityReason, RepeaterLayout};
use skylogic::trajectory::{simulate, SkyrmionState};

#[test]
fn sweep_is_order_and_worker_independent() {
    let cfg = RunConfig::default();
    let spec = SweepSpec::default();
    let reference = run_sweep(&spec, &cfg, 1).unwrap();
    assert_eq!(run_sweep(&spec, &cfg, 5).unwrap(), reference);

    let mut points = enumerate(&spec).unwrap();
    points.shuffle(&mut ChaCha8Rng::seed_from_u64(7));
    for point in points {
        let single = evaluate_point(point, &spec, &cfg).unwrap();
        let expected = reference.iter().find(|r| r.params == point).unwrap();
        assert_eq!(&single, expected);
    }
}

#[test]
fn infeasibility_reproduces_in_isolation() {
    let cfg = RunConfig::default();
    let spec = SweepSpec::default();
    for r in run_sweep(&spec, &cfg, 0).unwrap() {
        let m = MaterialParams {
            ms: r.params.ms,
            ku: r.params.ku,
            alpha: r.params.alpha,
            ..cfg.material
        };
        let tc = thiele_constants(&m, &cfg.geometry, &cfg.drive, &cfg.constants).unwrap();
        let layout = plan(&tc, &cfg.geometry, spec.p_max).unwrap();
        assert_eq!(layout.feasible, r.feasible);
        assert_eq!(layout.infeasibility_reason, r.reason);
        if r.feasible {
            let m = r.metrics.unwrap();
            assert_eq!(m.v_x, cfg.geometry.l_pmafm / m.t_prop);
        } else {
            assert!(r.metrics.is_none());
            assert_ne!(r.reason, InfeasibilityReason::None);
        }
    }
}

#[test]
fn grid_feasibility_map() {
    let results = run_sweep(&SweepSpec::default(), &RunConfig::default(), 0).unwrap();
    for r in &results {
        let p = r.params;
        if p.alpha <= 0.15 || p.ku == 5e5 {
            assert_eq!(r.reason, InfeasibilityReason::TooManyRepeaters, "{p:?}");
        }
        if p.alpha == 0.2 && p.ku == 10e5 {
            assert_eq!(r.reason, InfeasibilityReason::DetectorOverlap, "{p:?}");
        }
    }
    let combined = select_best(&results, Objective::EdpCombined).unwrap();
    assert_eq!((combined.params.ms, combined.params.ku, combined.params.alpha), (1e5, 8e5, 0.2));
}

#[test]
fn propagation_energy_grows_with_repeaters() {
    let cfg = RunConfig::default();
    let tc = thiele_constants(&cfg.material, &cfg.geometry, &cfg.drive, &cfg.constants).unwrap();
    let layout = plan(&tc, &cfg.geometry, 2).unwrap();
    let traj = simulate(&tc, &cfg.geometry, &layout, SkyrmionState::default()).unwrap();
    let ec = EnergyConfig::default();
    let mut prev = 0.0;
    for p in 0..4 {
        let counted = RepeaterLayout { p, ..layout.clone() };
        let e = propagation_energy(&traj, &counted, &cfg.material, &cfg.geometry, &cfg.drive, &ec).unwrap();
        assert!(e > prev);
        prev = e;
    }
}

#[test]
fn propagation_energy_terms() {
    let cfg = RunConfig::default();
    let drive = DriveConfig {
        jx: 9e10,
        jy: 0.0,
        ..DriveConfig::default()
    };
    let mut traj = {
        let tc = thiele_constants(&cfg.material, &cfg.geometry, &DriveConfig { jx: 6.5e10, ..drive }, &cfg.constants).unwrap();
        simulate(&tc, &cfg.geometry, &RepeaterLayout::none(), SkyrmionState::default()).unwrap()
    };
    traj.t_prop = 389e-12;
    traj.r2_residency = 0.0;
    let ec = EnergyConfig::default();
    let e = propagation_energy(&traj, &RepeaterLayout::none(), &cfg.material, &cfg.geometry, &drive, &ec).unwrap();
    let joule = e - ec.cg * ec.v_prop * ec.v_prop;
    assert!((joule - 3.34e-18).abs() / 3.34e-18 < 2e-3, "{joule:e}");
    assert!((ec.cg * ec.v_prop * ec.v_prop - 6.25e-18).abs() < 1e-30);
}

#[test]
fn unreached_trajectory_has_no_propagation_energy() {
    let cfg = RunConfig::default();
    let tc = thiele_constants(&cfg.material, &cfg.geometry, &cfg.drive, &cfg.constants).unwrap();
    let traj = simulate(&tc, &cfg.geometry, &RepeaterLayout::none(), SkyrmionState::default()).unwrap();
    assert!(propagation_energy(&traj, &RepeaterLayout::none(), &cfg.material, &cfg.geometry, &cfg.drive, &EnergyConfig::default()).is_err());
}
