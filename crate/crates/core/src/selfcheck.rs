//! Embedded oracle suite: every check compares two independent routes to the
//! same number and reports the worst relative disagreement.

use std::fmt;

use crate::analysis::{
    low_t_preservation_relation, ohmic_environment, preservation_time_numeric,
    preservation_time_zero_t, GradientSpec,
};
use crate::error::Result;
use crate::evolution::QubitTriple;
use crate::measures::{gmc_ghz_werner, gmc_x_state};
use crate::reservoir::{
    gamma_low_t, gamma_numeric, gamma_zero_t, GammaMethod, ReservoirSpec, Temperature,
};
use crate::states::{ghz_state, werner};

/// The quadrature route under test. Swappable so a broken integrator can be
/// shown to be caught.
pub type NumericGamma<'a> = &'a (dyn Fn(&ReservoirSpec<f64>, f64) -> Result<f64> + Sync);

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub cases: usize,
    pub max_rel_error: f64,
    pub tolerance: f64,
    /// Set when a case could not be evaluated at all.
    pub failure: Option<String>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.failure.is_none() && self.max_rel_error <= self.tolerance
    }
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(
            f,
            "{status} {:<26} cases={:<4} max_rel_err={:.3e} tol={:.0e}",
            self.name, self.cases, self.max_rel_error, self.tolerance
        )?;
        if let Some(msg) = &self.failure {
            write!(f, " error: {msg}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub checks: Vec<CheckOutcome>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckOutcome::passed)
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

fn rel_err(a: f64, b: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let err = (a - b).abs() / b.abs().max(f64::MIN_POSITIVE);
    if err.is_nan() {
        f64::INFINITY
    } else {
        err
    }
}

/// Folds `(got, want)` pairs into a check outcome.
fn collect(
    name: &'static str,
    tolerance: f64,
    cases: impl IntoIterator<Item = Result<(f64, f64)>>,
    metric: fn(f64, f64) -> f64,
) -> CheckOutcome {
    let mut out = CheckOutcome {
        name,
        cases: 0,
        max_rel_error: 0.0,
        tolerance,
        failure: None,
    };
    for case in cases {
        out.cases += 1;
        match case {
            Ok((got, want)) => out.max_rel_error = out.max_rel_error.max(metric(got, want)),
            Err(e) => {
                out.failure.get_or_insert_with(|| e.to_string());
            }
        }
    }
    out
}

fn quadrature_vs_zero_t(numeric: NumericGamma) -> CheckOutcome {
    let mut cases = Vec::new();
    for eta in [0.1, 0.4] {
        for omega in [1.0, 2.0] {
            for t in [0.01, 0.1, 1.0, 5.0, 20.0] {
                cases.push((|| {
                    let res = ReservoirSpec::ohmic(eta, 1.0, Temperature::Zero, omega)?;
                    Ok((numeric(&res, t)?, gamma_zero_t(&res, t)?))
                })());
            }
        }
    }
    collect("quadrature_vs_zero_t", 1e-6, cases, rel_err)
}

fn low_t_vs_quadrature(numeric: NumericGamma) -> CheckOutcome {
    let mut cases = Vec::new();
    for beta in [100.0, 1000.0] {
        for t in [0.01, 0.1, 0.5, 1.0, 2.0, 5.0] {
            cases.push((|| {
                let res = ReservoirSpec::ohmic(0.2, 1.0, Temperature::inverse(beta)?, 1.0)?;
                Ok((gamma_low_t(&res, t)?, numeric(&res, t)?))
            })());
        }
    }
    collect("low_t_vs_quadrature", 1e-2, cases, rel_err)
}

fn gmc_pipeline() -> CheckOutcome {
    let mut cases = Vec::new();
    for x in [0.5, 0.7, 0.9, 1.0] {
        for (beta_a, k1, k2) in [(200.0, 1.0, 1.0), (50.0, 2.0, 8.0)] {
            for t in [0.0, 0.003, 0.05, 0.4] {
                cases.push((|| {
                    let q = QubitTriple::new(1.0, 1.5, 2.0)?;
                    let g = GradientSpec::new(Temperature::inverse(beta_a)?, k1, k2)?;
                    let env = ohmic_environment(&q, 0.2, 1.0, &g, GammaMethod::LowTClosedForm)?;
                    let rho = env.evolve(&werner(&ghz_state(), x)?, t)?;
                    let total: f64 = env.gammas(t)?.iter().sum();
                    Ok((gmc_x_state(&rho)?, gmc_ghz_werner(x, total)?))
                })());
            }
        }
    }
    // values pass through zero, so compare absolutely
    collect("gmc_pipeline", 1e-12, cases, |a, b| (a - b).abs())
}

fn preservation_time() -> CheckOutcome {
    let mut cases = Vec::new();
    for x in [0.5, 0.6, 0.7, 0.8, 0.9] {
        for eta in [0.1, 0.2, 0.4] {
            cases.push((|| {
                let q = QubitTriple::uniform(2.0)?;
                let g = GradientSpec::new(Temperature::Zero, 1.0, 1.0)?;
                let env = ohmic_environment(&q, eta, 1.0, &g, GammaMethod::ZeroTClosedForm)?;
                let curve = |t: f64| gmc_ghz_werner(x, env.gammas(t)?.iter().sum());
                let numeric = preservation_time_numeric(curve, 50.0)?;
                Ok((numeric, preservation_time_zero_t(x, eta, q.omega_sq(), 1.0)))
            })());
        }
    }
    collect("preservation_time", 1e-8, cases, rel_err)
}

fn low_t_relation() -> CheckOutcome {
    let mut cases = Vec::new();
    for beta in [0.004, 0.01, 0.05] {
        for x in [0.6, 0.8] {
            cases.push((|| {
                let (eta, w) = (0.2, 12f64.sqrt());
                let q = QubitTriple::uniform(w)?;
                let g = GradientSpec::new(Temperature::inverse(beta)?, 1.0, 1.0)?;
                let env = ohmic_environment(&q, eta, 1.0, &g, GammaMethod::LowTClosedForm)?;
                let curve = |t: f64| gmc_ghz_werner(x, env.gammas(t)?.iter().sum());
                let tp = preservation_time_numeric(curve, 10.0)?;
                Ok(low_t_preservation_relation(tp, x, eta, 1.0, &q, [beta; 3]))
            })());
        }
    }
    collect("low_t_relation", 1e-6, cases, rel_err)
}

/// Runs every check with the given quadrature route.
pub fn run_with(numeric: NumericGamma) -> Report {
    Report {
        checks: vec![
            quadrature_vs_zero_t(numeric),
            low_t_vs_quadrature(numeric),
            gmc_pipeline(),
            preservation_time(),
            low_t_relation(),
        ],
    }
}

pub fn run() -> Report {
    run_with(&|res, t| gamma_numeric(res, t))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fresh_build_passes() {
        let report = run();
        assert!(report.passed(), "{report}");
        assert_eq!(report.exit_code(), 0);
        assert!(report
            .checks
            .iter()
            .all(|c| c.cases > 0 && c.max_rel_error.is_finite()));
    }

    #[test]
    fn negated_gamma_is_caught() {
        let report = run_with(&|res, t| gamma_numeric(res, t).map(|g| -g));
        let quad = &report.checks[0];
        assert_eq!(quad.name, "quadrature_vs_zero_t");
        assert!(!quad.passed());
        assert!((quad.max_rel_error - 2.0).abs() < 1e-6);
        assert_eq!(report.exit_code(), 1);
    }
}
