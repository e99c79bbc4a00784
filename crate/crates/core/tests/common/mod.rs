#![allow(dead_code)]

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use tripartite::evolution::{Environment, QubitTriple};
use tripartite::linalg::ComplexMatrix;
use tripartite::reservoir::{GammaMethod, ReservoirSpec, Temperature};
use tripartite::states::{DensityMatrix, DIM};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Full-rank ρ = A A† / tr(A A†) from a uniformly filled A.
pub fn random_density(rng: &mut StdRng) -> DensityMatrix<f64> {
    let a: Vec<Complex64> = (0..DIM * DIM)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let a = ComplexMatrix::from_row_major(DIM, a).unwrap();
    let m = &a * &a.adjoint();
    let tr = m.trace().re;
    DensityMatrix::new(m.scale(1.0 / tr).hermitian_part()).unwrap()
}

/// Random X state: positive diagonal and anti-diagonal entries with
/// |ρ_{j,7-j}| ≤ √(ρ_jj ρ_{7-j,7-j}).
pub fn random_x_state(rng: &mut StdRng) -> DensityMatrix<f64> {
    let mut p: Vec<f64> = (0..DIM).map(|_| rng.gen_range(0.01..1.0)).collect();
    let s: f64 = p.iter().sum();
    p.iter_mut().for_each(|v| *v /= s);
    let mut m = ComplexMatrix::from_real_diagonal(&p);
    for j in 0..DIM / 2 {
        let bound = (p[j] * p[DIM - 1 - j]).sqrt();
        let c = Complex64::from_polar(
            bound * rng.gen_range(0.0..1.0),
            rng.gen_range(0.0..std::f64::consts::TAU),
        );
        m[(j, DIM - 1 - j)] = c;
        m[(DIM - 1 - j, j)] = c.conj();
    }
    DensityMatrix::new(m).unwrap()
}

/// Conjugation by diag(e^{iφ_k}).
pub fn phase_conjugate(rho: &DensityMatrix<f64>, phases: &[f64; DIM]) -> DensityMatrix<f64> {
    let mut m = rho.matrix().clone();
    for i in 0..DIM {
        for j in 0..DIM {
            m[(i, j)] *= Complex64::from_polar(1.0, phases[i] - phases[j]);
        }
    }
    DensityMatrix::new(m).unwrap()
}

pub fn ohmic_env(
    omega_sq: [f64; 3],
    eta: f64,
    temps: [Temperature<f64>; 3],
    method: GammaMethod,
) -> Environment<f64> {
    let q = QubitTriple::from_squares(omega_sq[0], omega_sq[1], omega_sq[2]).unwrap();
    let w = q.as_array();
    let res = |i: usize| ReservoirSpec::ohmic(eta, 1.0, temps[i], w[i]).unwrap();
    Environment::new(q, [res(0), res(1), res(2)], method).unwrap()
}

pub fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs()
    }
}
