mod common;

use proptest::prelude::*;

use common::{ohmic_env, random_density, random_x_state, rel, rng};
use tripartite::evolution::{evolve, DephasingFactors, QubitTriple};
use tripartite::measures::{gmc_x_state, l1_coherence, tripartite_negativity, MeasureKind};
use tripartite::reservoir::{gamma, GammaMethod, ReservoirSpec, Temperature};
use tripartite::states::DIM;

fn methods() -> impl Strategy<Value = (Temperature<f64>, GammaMethod)> {
    prop_oneof![
        Just((Temperature::Zero, GammaMethod::ZeroTClosedForm)),
        (50.0..5000.0f64).prop_map(|b| (
            Temperature::inverse(b).unwrap(),
            GammaMethod::LowTClosedForm
        )),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn map_keeps_states_physical(
        seed in any::<u64>(),
        gammas in proptest::array::uniform3(0.0..30.0f64),
        t in 0.0..50.0f64,
        w in proptest::array::uniform3(0.1..5.0f64),
    ) {
        let rho0 = random_density(&mut rng(seed));
        let q = QubitTriple::new(w[0], w[1], w[2]).unwrap();
        let rho = evolve(&rho0, &DephasingFactors::from_gammas(&q, gammas, t).unwrap());
        for i in 0..DIM {
            prop_assert_eq!(rho.get(i, i), rho0.get(i, i));
            for j in 0..DIM {
                prop_assert!(rho.get(i, j).norm() <= rho0.get(i, j).norm() * (1.0 + 1e-15));
            }
        }
        prop_assert!(rho.matrix().hermiticity_deviation() == 0.0);
        prop_assert!(rho.matrix().min_eigenvalue().unwrap() >= -1e-10);
    }

    #[test]
    fn decoherence_grows_with_time((temp, method) in methods(), eta in 0.01..0.5f64, omega in 0.2..4.0f64,
                                   t in 0.0..10.0f64, dt in 1e-3..5.0f64) {
        let res = ReservoirSpec::ohmic(eta, 1.0, temp, omega).unwrap();
        let g0 = gamma(&res, t, method).unwrap();
        let g1 = gamma(&res, t + dt, method).unwrap();
        prop_assert!(g0 >= 0.0);
        prop_assert!(g1 >= g0);
    }

    #[test]
    fn decoherence_scales_with_splitting_squared((temp, method) in methods(), eta in 0.01..0.5f64,
                                                 omega in 0.2..4.0f64, t in 0.01..10.0f64) {
        let one = ReservoirSpec::ohmic(eta, 1.0, temp, omega).unwrap();
        let two = ReservoirSpec::ohmic(eta, 1.0, temp, 2.0 * omega).unwrap();
        let ratio = gamma(&two, t, method).unwrap() / gamma(&one, t, method).unwrap();
        prop_assert!(rel(ratio, 4.0) < 1e-12);
    }

    #[test]
    fn measures_never_increase_under_dephasing(seed in any::<u64>(), x_state in any::<bool>(),
                                               t0 in 0.0..2.0f64, dt in 0.0..2.0f64) {
        let mut r = rng(seed);
        let rho0 = if x_state { random_x_state(&mut r) } else { random_density(&mut r) };
        let env = ohmic_env([4.0, 2.0, 1.0], 0.2, [Temperature::Zero; 3], GammaMethod::ZeroTClosedForm);
        let a = env.evolve(&rho0, t0).unwrap();
        let b = env.evolve(&rho0, t0 + dt).unwrap();
        prop_assert!(l1_coherence(&b) <= l1_coherence(&a) + 1e-12);
        if x_state {
            let (ga, gb) = (gmc_x_state(&a).unwrap(), gmc_x_state(&b).unwrap());
            prop_assert!((0.0..=1.0).contains(&ga));
            prop_assert!(gb <= ga + 1e-12);
            prop_assert!(tripartite_negativity(&b).unwrap() <= tripartite_negativity(&a).unwrap() + 1e-10);
        }
    }

    #[test]
    fn measures_are_bounded(seed in any::<u64>()) {
        let rho = random_x_state(&mut rng(seed));
        for kind in MeasureKind::ALL {
            let v = kind.evaluate(&rho).unwrap();
            prop_assert!(v >= 0.0 && v.is_finite(), "{} = {}", kind, v);
        }
    }
}
