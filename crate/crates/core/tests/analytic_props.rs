mod common;

use common::*;
use otto_core::analytic::*;
use otto_core::*;
use proptest::prelude::*;

fn assert_records_match(
    sim: &CycleRecord,
    cf: &CycleRecord,
) -> std::result::Result<(), TestCaseError> {
    let pairs = [
        (sim.e0, cf.e0),
        (sim.e1, cf.e1),
        (sim.e2, cf.e2),
        (sim.e3, cf.e3),
        (sim.w1, cf.w1),
        (sim.w2, cf.w2),
        (sim.w_total, cf.w_total),
        (sim.q_c, cf.q_c),
        (sim.q_h, cf.q_h),
    ];
    for (x, y) in pairs {
        prop_assert!((x - y).abs() <= 1e-10, "{x} vs {y}");
    }
    match (sim.eta, cf.eta) {
        (Some(a), Some(b)) => prop_assert!((a - b).abs() <= 1e-8),
        (None, None) => {}
        // both sides sit on the engine threshold
        _ => prop_assert!(sim.w_total.abs() < 1e-9 || sim.q_h.abs() < 1e-9),
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn closed_forms_match_simulator(
        params in params_with_hot_bath(),
        drive in drive(),
        basis in basis(),
    ) {
        let sim = run_conventional_cycle(&params, &drive).unwrap();
        let cf = conventional_record(&params, drive.p).unwrap();
        assert_records_match(&sim, &cf)?;
        prop_assert!(cf.first_law_residual().abs() <= 1e-12);

        let sim = run_pvm_cycle(&params, &drive, &basis).unwrap();
        let cf = pvm_nonadiabatic_record(&params, &drive, &basis);
        assert_records_match(&sim, &cf)?;
        prop_assert!(cf.first_law_residual().abs() <= 1e-12);
        prop_assert!((pvm_nonadiabatic_work(&params, &drive, &basis) - cf.w_total).abs() <= 1e-14);

        let sim = run_pvm_cycle(&params, &DriveSpec::adiabatic(), &basis).unwrap();
        let cf = pvm_adiabatic_record(&params, basis.theta).unwrap();
        assert_records_match(&sim, &cf)?;
    }

    #[test]
    fn pvm_optimum_dominates_sampled_bases(params in params(), drive in drive(), basis in basis()) {
        let opt = pvm_optimal(&params, &drive);
        prop_assert!(pvm_nonadiabatic_work(&params, &drive, &basis) <= opt.work + 1e-12);
        let at_opt = run_pvm_cycle(&params, &drive, &opt.basis).unwrap();
        prop_assert!((at_opt.w_total - opt.work).abs() <= 1e-10);
        prop_assert!((at_opt.q_h - opt.heat).abs() <= 1e-10);
        prop_assert!(opt.hessian[0][0] < 0.0);
        prop_assert!(opt.hessian[1][1] <= 1e-12);
    }

    #[test]
    fn adiabatic_boundary_consistency(params in params(), basis in basis()) {
        let drive = DriveSpec::new(1.0, basis.phi).unwrap();
        let na = pvm_nonadiabatic_work(&params, &drive, &basis);
        let ad = pvm_adiabatic_record(&params, basis.theta).unwrap().w_total;
        prop_assert!((na - ad).abs() <= 1e-12);
    }

    #[test]
    fn pvm_advantage_over_hot_bath_nonnegative(params in params(), p in 0.5f64..=1.0) {
        let dw = delta_w_pvm_conventional(&params, p).unwrap();
        prop_assert!(dw >= -1e-15);
        let hot_inf = params.with_hot_bath(0.0).unwrap();
        let direct = pvm_optimal(&params, &DriveSpec::new(p, 0.0).unwrap()).work
            - conventional_record(&hot_inf, p).unwrap().w_total;
        prop_assert!((dw - direct).abs() <= 1e-12);
    }
}

#[test]
fn advantage_zero_only_at_adiabatic_end() {
    for (wx, wz, bc) in [
        (3.0, 2.0, 1.0),
        (5.0, 2.0, 1.0),
        (2.2, 2.0, 0.3),
        (9.0, 1.0, 3.0),
    ] {
        let params = EngineParams::new(wx, wz, bc).unwrap();
        assert!(delta_w_pvm_conventional(&params, 1.0).unwrap().abs() < 1e-15);
        for i in 0..100 {
            let p = 0.5 + 0.005 * i as f64;
            assert!(delta_w_pvm_conventional(&params, p).unwrap() > 0.0);
        }
    }
}

#[test]
fn povm_pvm_gap_is_temperature_independent() {
    for (wx, wz) in [(3.0, 2.0), (5.0, 2.0)] {
        for bc in [0.2, 0.5, 1.0, 2.0, 5.0] {
            let params = EngineParams::new(wx, wz, bc).unwrap();
            let (povm, _) = povm_adiabatic_optimal(&params);
            let pvm = pvm_optimal(&params, &DriveSpec::adiabatic()).work;
            assert!((povm - pvm - 0.5 * (wx - wz)).abs() < 1e-12);
            let c = aux_cost_record(&params, 1.0 / bc).unwrap();
            assert_eq!(c.delta_w, 0.5 * (wx - wz));
        }
    }
}

#[test]
fn swap_reset_cost_matches_simulated_entropy() {
    for (wx, wz, bc) in [(3.0, 2.0, 1.0), (5.0, 2.0, 0.4), (5.0, 2.0, 3.0)] {
        let params = EngineParams::new(wx, wz, bc).unwrap();
        let (work, v0) = povm_adiabatic_optimal(&params);
        let povm = PovmSpec::with_plus_aux(v0, MeasurementBasis::plus_minus()).unwrap();
        for t_c in [0.3, 1.0, 2.5] {
            let rec = run_povm_cycle(&params, &DriveSpec::adiabatic(), &povm, t_c).unwrap();
            let c = aux_cost_record(&params, t_c).unwrap();
            assert!((rec.w_total - work).abs() < 1e-10);
            assert!((rec.aux_reset_cost - c.min_cost).abs() < 1e-10);
            assert!((rec.net_work() - c.net_work_v0).abs() < 1e-10);
            assert!(rec.aux_reset_cost <= c.max_cost + 1e-12);
        }
    }
}
