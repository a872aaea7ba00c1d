use cp_entangle::greens::DipoleConfig;
use cp_entangle::media::SurfaceModel;
use cp_entangle::sweeps::*;
use cp_entangle::Error;

fn small(model: SurfaceModel) -> SweepSpec {
    let mut spec = SweepSpec::decay_map(model, DipoleConfig::Xx);
    spec.x = AxisRange::new(0.2, 2.0, 7);
    spec.z = AxisRange::new(0.1, 1.0, 5);
    spec
}

fn bits(r: &SweepResult) -> Vec<Vec<u64>> {
    r.values
        .iter()
        .map(|row| row.iter().map(|v| v.to_bits()).collect())
        .collect()
}

#[test]
fn repeated_runs_are_bit_identical() {
    let spec = small(SurfaceModel::gold());
    let a = decay_map(&spec).unwrap();
    let b = decay_map(&spec).unwrap();
    assert_eq!(bits(&a), bits(&b));
}

#[test]
fn serial_and_parallel_agree() {
    for model in [SurfaceModel::PerfectConductor, SurfaceModel::niobium(0.01)] {
        let spec = small(model);
        let serial = evaluate(&spec, Execution::Serial).unwrap();
        let parallel = evaluate(&spec, Execution::Parallel).unwrap();
        assert_eq!(bits(&serial), bits(&parallel));
        assert_eq!(serial.x, parallel.x);
        assert_eq!(serial.z, parallel.z);
    }
}

#[test]
fn refinement_keeps_shared_cells() {
    let coarse = small(SurfaceModel::gold());
    let mut fine = coarse;
    fine.x.count = 2 * coarse.x.count - 1;
    fine.z.count = 2 * coarse.z.count - 1;
    let a = decay_map(&coarse).unwrap();
    let b = decay_map(&fine).unwrap();
    for iz in 0..coarse.z.count {
        for ix in 0..coarse.x.count {
            assert_eq!(a.get(ix, iz).to_bits(), b.get(2 * ix, 2 * iz).to_bits());
        }
    }
}

#[test]
fn result_shape_and_metadata() {
    let r = decay_map(&small(SurfaceModel::PerfectConductor)).unwrap();
    assert_eq!(r.z.len(), 5);
    assert!(r.values.iter().all(|row| row.len() == 7 && row.iter().all(|v| v.is_finite())));
    assert_eq!(r.metadata.observable, Observable::RelativeDecay);
    assert_eq!(r.metadata.code_version, env!("CARGO_PKG_VERSION"));
}

#[test]
fn free_space_line_matches_closed_form() {
    let mut spec = SweepSpec::decay_map(SurfaceModel::FreeSpace, DipoleConfig::Zz);
    spec.x = AxisRange::new(0.05, 3.0, 40);
    spec.z = AxisRange::single(0.5);
    let r = decay_map(&spec).unwrap();
    for (i, &x) in r.x.iter().enumerate() {
        assert!((r.get(i, 0) - (1.0 + 1.5 * ((1.0 - x * x) * x.sin() - x * x.cos()) / x.powi(3))).abs() < 1e-8, "x = {x}");
    }
}

#[test]
fn gold_decay_rises_close_to_surface() {
    let mut spec = SweepSpec::decay_map(SurfaceModel::gold(), DipoleConfig::Xx);
    spec.x = AxisRange::single(1.0);
    spec.z = AxisRange::new(0.05, 0.2, 6);
    let r = decay_map(&spec).unwrap();
    for iz in 1..6 {
        assert!(r.get(0, iz - 1) > r.get(0, iz));
    }
}

#[test]
fn perfect_conductor_optimum_is_at_lower_bound() {
    let search = ZSearch::new(SurfaceModel::PerfectConductor, DipoleConfig::Xx, 1.0, 0.01, 1.0);
    let best = find_optimal_z(&search).unwrap();
    assert!(best.at_boundary);
    assert_eq!(best.z, 0.01);
    // dense oracle scan: D grows with z̃ across the interval
    let dense: Vec<f64> = AxisRange::new(0.01, 1.0, 200)
        .values()
        .iter()
        .map(|&z| {
            let g = cp_entangle::greens::Geometry::new(1.0, z, DipoleConfig::Xx);
            cp_entangle::greens::coupling_set(&g, &SurfaceModel::PerfectConductor)
                .unwrap()
                .relative_decay()
                .total()
        })
        .collect();
    assert!(dense.windows(2).all(|w| w[0] < w[1]));
    assert!(best.relative_decay <= dense[0] + 1e-15);
}

#[test]
fn gold_optimum_is_interior() {
    let search = ZSearch::new(SurfaceModel::gold(), DipoleConfig::Xx, 1.0, 0.1, 1.5);
    let best = find_optimal_z(&search).unwrap();
    assert!(!best.at_boundary);
    assert_eq!(best.scan.len(), BRACKET_SCAN_POINTS);
    let min_scan = best.scan.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    assert!(best.relative_decay <= min_scan);
}

#[test]
fn oscillating_objective_is_a_bracket_failure() {
    // zz above a perfect conductor oscillates in z̃ with period ~π
    let search = ZSearch::new(SurfaceModel::PerfectConductor, DipoleConfig::Zz, 1.0, 0.5, 30.0);
    match find_optimal_z(&search) {
        Err(Error::Bracket { samples }) => assert_eq!(samples.len(), BRACKET_SCAN_POINTS),
        other => panic!("expected a bracket failure, got {other:?}"),
    }
}

#[test]
fn concurrence_observable_matches_trace() {
    let mut spec = small(SurfaceModel::PerfectConductor);
    spec.observable = Observable::ConcurrenceAt { t: 30.0 };
    spec.x = AxisRange::single(1.0);
    spec.z = AxisRange::single(0.2);
    let r = evaluate(&spec, Execution::Serial).unwrap();
    let g = cp_entangle::greens::Geometry::new(1.0, 0.2, DipoleConfig::Xx);
    let trace = concurrence_trace(&g, &SurfaceModel::PerfectConductor, 30.0, 11, &Default::default()).unwrap();
    assert_eq!(r.get(0, 0), *trace.concurrence.last().unwrap());
}
