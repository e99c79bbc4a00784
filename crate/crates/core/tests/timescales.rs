mod common;

use common::{ohmic_env, rel};
use tripartite::analysis::{
    characteristic_time, low_t_preservation_relation, preservation_time_numeric,
    preservation_time_zero_t, run_sweep, InitialState, SweepGrid, SweepRecord, TimeGrid,
};
use tripartite::evolution::{Environment, QubitTriple};
use tripartite::measures::{gmc_x_state, MeasureKind};
use tripartite::reservoir::{GammaMethod, Temperature};
use tripartite::states::{ghz_state, werner};

fn ghz_curve(env: &Environment<f64>, x: f64) -> impl Fn(f64) -> tripartite::Result<f64> + '_ {
    let rho0 = werner(&ghz_state(), x).unwrap();
    move |t| gmc_x_state(&env.evolve(&rho0, t)?)
}

fn zero_t(eta: f64, omega_sq_each: f64) -> Environment<f64> {
    ohmic_env(
        [omega_sq_each; 3],
        eta,
        [Temperature::Zero; 3],
        GammaMethod::ZeroTClosedForm,
    )
}

fn grid(
    x: f64,
    beta_a: Temperature<f64>,
    k1: &[f64],
    k2: &[f64],
    method: GammaMethod,
) -> SweepGrid<f64> {
    SweepGrid {
        x: vec![x],
        eta: vec![0.2],
        beta_a: vec![beta_a],
        k1: k1.to_vec(),
        k2: k2.to_vec(),
        time: TimeGrid::new(0.0, 0.01, 21).unwrap(),
        measures: vec![MeasureKind::Gmc],
        method,
        state: InitialState::GhzWerner,
        omega_c: 1.0,
        curves: true,
        timescales: true,
        epsilon: 0.01,
        freeze_fraction: 0.1,
    }
}

fn timescale_rows(records: &[SweepRecord<f64>]) -> Vec<(f64, f64, f64, f64)> {
    records
        .iter()
        .filter_map(|r| match r {
            SweepRecord::Timescale(ts) => {
                Some((ts.parameters.k1, ts.parameters.k2, ts.t_p, ts.t_c))
            }
            _ => None,
        })
        .collect()
}

#[test]
fn zero_t_preservation_time_value() {
    let env = zero_t(0.2, 4.0);
    let tp = preservation_time_numeric(ghz_curve(&env, 0.8), 10.0).unwrap();
    assert!(rel(tp, 0.6459782224702452) < 1e-8, "{tp}");
}

#[test]
fn characteristic_time_matches_algebraic_inversion() {
    for (x, eta, eps) in [(0.8f64, 0.2, 0.01), (0.6, 0.1, 0.05), (0.95, 0.4, 0.2)] {
        let env = zero_t(eta, 4.0);
        let a = 2.0 * eta * 12.0;
        let c0 = x - 0.75 * (1.0 - x);
        let expected = (((x - eps * c0) / x).powf(-1.0 / a) - 1.0).sqrt();
        let tc = characteristic_time(ghz_curve(&env, x), eps, 10.0).unwrap();
        assert!(tc.reached);
        assert!(rel(tc.t_c, expected) < 1e-8, "{} vs {expected}", tc.t_c);
    }
}

#[test]
fn near_total_decay_characteristic_time_approaches_preservation_time() {
    let env = zero_t(0.2, 4.0);
    let tp = preservation_time_numeric(ghz_curve(&env, 0.8), 10.0).unwrap();
    let tc = characteristic_time(ghz_curve(&env, 0.8), 0.999, 10.0).unwrap();
    assert!(tc.t_c <= tp);
    assert!(rel(tc.t_c, tp) < 2e-3, "{} vs {tp}", tc.t_c);
}

#[test]
fn low_t_relation_example() {
    let beta = 0.004;
    let env = ohmic_env(
        [12.0; 3],
        0.2,
        [Temperature::inverse(beta).unwrap(); 3],
        GammaMethod::LowTClosedForm,
    );
    let tp = preservation_time_numeric(ghz_curve(&env, 0.8), 1.0).unwrap();
    let (lhs, rhs) = low_t_preservation_relation(tp, 0.8, 0.2, 1.0, &env.qubits, [beta; 3]);
    assert!(rel(lhs, rhs) < 1e-6, "{lhs} vs {rhs}");
}

#[test]
fn preservation_time_nonincreasing_in_coupling_and_splitting() {
    for x in [0.5, 0.7, 0.9] {
        let by_eta: Vec<f64> = [0.05, 0.1, 0.2, 0.4]
            .iter()
            .map(|&e| preservation_time_zero_t(x, e, 12.0, 1.0))
            .collect();
        assert!(by_eta.windows(2).all(|w| w[1] <= w[0]), "{by_eta:?}");
        let by_omega: Vec<f64> = [3.0, 12.0, 27.0]
            .iter()
            .map(|&o| preservation_time_zero_t(x, 0.2, o, 1.0))
            .collect();
        assert!(by_omega.windows(2).all(|w| w[1] <= w[0]), "{by_omega:?}");
    }
}

#[test]
fn hotter_reservoirs_shorten_preservation() {
    let tps: Vec<f64> = [0.02, 0.01, 0.004, 0.002]
        .iter()
        .map(|&beta| {
            let env = ohmic_env(
                [12.0; 3],
                0.2,
                [Temperature::inverse(beta).unwrap(); 3],
                GammaMethod::LowTClosedForm,
            );
            preservation_time_numeric(ghz_curve(&env, 0.8), 1.0).unwrap()
        })
        .collect();
    assert!(tps.windows(2).all(|w| w[1] < w[0]), "{tps:?}");
}

#[test]
fn unmixed_state_has_no_gmc_anywhere() {
    let q = QubitTriple::uniform(2.0).unwrap();
    let g = grid(
        0.0,
        Temperature::Zero,
        &[1.0],
        &[1.0],
        GammaMethod::ZeroTClosedForm,
    );
    let records = run_sweep(&g, &q).unwrap();
    let values: Vec<f64> = records
        .iter()
        .filter_map(|r| match r {
            SweepRecord::Measure(m) => Some(m.value),
            _ => None,
        })
        .collect();
    assert_eq!(values.len(), 21);
    assert!(values.iter().all(|&v| v == 0.0));
    assert!(matches!(records.last(), Some(SweepRecord::Timescale(ts)) if ts.t_p == 0.0));
}

#[test]
fn gradient_sweep_orders_and_grows() {
    let q = QubitTriple::from_squares(12.0, 12.0, 12.0).unwrap();
    let beta = Temperature::inverse(0.004).unwrap();
    let g = grid(
        0.8,
        beta,
        &[1.0, 2.0],
        &[1.0, 32.0],
        GammaMethod::LowTClosedForm,
    );
    let rows = timescale_rows(&run_sweep(&g, &q).unwrap());
    let order: Vec<(f64, f64)> = rows.iter().map(|r| (r.0, r.1)).collect();
    assert_eq!(
        order,
        vec![(1.0, 1.0), (1.0, 32.0), (2.0, 1.0), (2.0, 32.0)]
    );
    let tp = |k1, k2| rows.iter().find(|r| r.0 == k1 && r.1 == k2).unwrap().2;
    // products 1, 2, 64
    assert!(tp(1.0, 1.0) < tp(2.0, 1.0));
    assert!(tp(2.0, 1.0) < tp(2.0, 32.0));
    for r in &rows {
        assert!(r.3 <= r.2, "t_c {} exceeds t_p {}", r.3, r.2);
    }
}

#[test]
fn saturation_of_gradient_gain() {
    let q = QubitTriple::from_squares(12.0, 12.0, 12.0).unwrap();
    let beta = Temperature::inverse(0.004).unwrap();
    let g = grid(
        0.8,
        beta,
        &[2.0, 4.0, 8.0],
        &[2.0, 4.0, 8.0],
        GammaMethod::LowTClosedForm,
    );
    let rows = timescale_rows(&run_sweep(&g, &q).unwrap());
    let tp = |k| rows.iter().find(|r| r.0 == k && r.1 == k).unwrap().2;
    assert!(tp(8.0) - tp(4.0) < tp(4.0) - tp(2.0));
}

#[test]
fn point_failures_are_recorded_not_fatal() {
    let q = QubitTriple::uniform(2.0).unwrap();
    let mut g = grid(
        0.6,
        Temperature::Zero,
        &[1.0],
        &[1.0],
        GammaMethod::ZeroTClosedForm,
    );
    g.state = InitialState::WWerner;
    g.measures = vec![MeasureKind::Gmc, MeasureKind::L1Coherence];
    let records = run_sweep(&g, &q).unwrap();
    assert!(matches!(
        records[0],
        SweepRecord::Failure {
            kind: Some(MeasureKind::Gmc),
            ..
        }
    ));
    assert!(records[1..]
        .iter()
        .all(|r| !matches!(r, SweepRecord::Failure { .. })));
}

#[test]
fn sweep_is_independent_of_thread_count() {
    let q = QubitTriple::from_squares(12.0, 12.0, 12.0).unwrap();
    let g = grid(
        0.8,
        Temperature::inverse(0.004).unwrap(),
        &[1.0, 2.0, 4.0],
        &[1.0, 8.0],
        GammaMethod::LowTClosedForm,
    );
    let parallel = run_sweep(&g, &q).unwrap();
    let serial = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| run_sweep(&g, &q).unwrap());
    assert_eq!(parallel, serial);
}
