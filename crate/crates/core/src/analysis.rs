//! Preservation and characteristic times, correlation-freezing detection and
//! batch sweeps over mixing, coupling and temperature-gradient parameters.
//!
//! Times handed to and returned from this module are in units of 1/ω_c.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::evolution::{Environment, QubitTriple};
use crate::measures::{MeasureKind, MeasureResult, Parameters};
use crate::reservoir::{GammaMethod, ReservoirSpec, Temperature};
use crate::scalar::{ln_sinhc, Real};
use crate::states::{ghz_state, w_state, werner, DensityMatrix};

/// A measure at or below this value counts as vanished.
pub const ALIVE_THRESHOLD: f64 = 1e-12;
pub const BISECTION_REL_TOL: f64 = 1e-9;
pub const DEFAULT_EPSILON: f64 = 0.01;
/// A sample is frozen when its log-slope is below this fraction of the
/// steepest log-slope in the window.
pub const DEFAULT_FREEZE_FRACTION: f64 = 0.1;

const FIRST_PROBE_FRACTION: f64 = 1.0 / (1u64 << 40) as f64;
const MAX_BISECTIONS: usize = 200;

/// β_A together with the ratios β_B = k1 β_A and β_C = k2 β_A.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradientSpec<T> {
    pub beta_a: Temperature<T>,
    pub k1: T,
    pub k2: T,
}

impl<T: Real> GradientSpec<T> {
    pub fn new(beta_a: Temperature<T>, k1: T, k2: T) -> Result<Self> {
        for (name, k) in [("k1", k1), ("k2", k2)] {
            if !(k > T::zero()) || !k.is_finite() {
                return Err(Error::Parameter(format!("{name} = {k} must be positive")));
            }
        }
        Ok(Self { beta_a, k1, k2 })
    }

    pub fn temperatures(&self) -> Result<[Temperature<T>; 3]> {
        Ok([
            self.beta_a,
            self.beta_a.scaled(self.k1)?,
            self.beta_a.scaled(self.k2)?,
        ])
    }
}

/// Ohmic reservoirs with common η and ω_c at the gradient's temperatures.
pub fn ohmic_environment<T: Real>(
    qubits: &QubitTriple<T>,
    eta: T,
    omega_c: T,
    gradient: &GradientSpec<T>,
    method: GammaMethod,
) -> Result<Environment<T>> {
    let temps = gradient.temperatures()?;
    let w = qubits.as_array();
    let reservoirs = [
        ReservoirSpec::ohmic(eta, omega_c, temps[0], w[0])?,
        ReservoirSpec::ohmic(eta, omega_c, temps[1], w[1])?,
        ReservoirSpec::ohmic(eta, omega_c, temps[2], w[2])?,
    ];
    Environment::new(*qubits, reservoirs, method)
}

/// Zero-temperature Ohmic preservation time of the GHZ-Werner GMC,
/// `(1/ω_c) √((4x / 3(1−x))^{1/(2ηΩ²)} − 1)`. Returns 0 for x ≤ 3/7 and +∞
/// for x = 1.
pub fn preservation_time_zero_t<T: Real>(x: T, eta: T, omega_sq: T, omega_c: T) -> T {
    let three = T::lit(3.0);
    if x <= three / T::lit(7.0) {
        return T::zero();
    }
    if x >= T::one() {
        return T::infinity();
    }
    let ratio = T::lit(4.0) * x / (three * (T::one() - x));
    let radicand = (ratio.ln() / (T::lit(2.0) * eta * omega_sq)).exp_m1();
    radicand.max(T::zero()).sqrt() / omega_c
}

/// `sup{t ≤ t_max : curve(t) > 1e-12}` for a nonincreasing curve, by
/// bracket doubling and bisection. Returns +∞ if the curve is still alive at
/// `t_max`.
pub fn preservation_time_numeric<T, F>(mut curve: F, t_max: T) -> Result<T>
where
    T: Real,
    F: FnMut(T) -> Result<T>,
{
    let alive = T::lit(ALIVE_THRESHOLD);
    if !(curve(T::zero())? > alive) {
        return Err(Error::NoCorrelation);
    }
    let mut lo = T::zero();
    let mut hi = t_max * T::lit(FIRST_PROBE_FRACTION);
    loop {
        if hi >= t_max {
            if curve(t_max)? > alive {
                return Ok(T::infinity());
            }
            hi = t_max;
            break;
        }
        if curve(hi)? > alive {
            lo = hi;
            hi = hi + hi;
        } else {
            break;
        }
    }
    bisect(&mut curve, lo, hi, |v| v > alive)
}

/// Narrows `[lo, hi]` where `keep(curve(lo))` holds and `keep(curve(hi))`
/// does not.
fn bisect<T, F, P>(curve: &mut F, mut lo: T, mut hi: T, keep: P) -> Result<T>
where
    T: Real,
    F: FnMut(T) -> Result<T>,
    P: Fn(T) -> bool,
{
    let rel = T::tol(BISECTION_REL_TOL);
    for _ in 0..MAX_BISECTIONS {
        if hi - lo <= rel * hi {
            break;
        }
        let mid = lo + (hi - lo) * T::lit(0.5);
        if keep(curve(mid)?) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo + (hi - lo) * T::lit(0.5))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharacteristicTime<T> {
    pub t_c: T,
    /// `false` when the curve never dropped below the plateau level before
    /// `t_max`; `t_c` is then `t_max`.
    pub reached: bool,
}

/// First time the curve falls below `(1 − ε)` of its initial value.
pub fn characteristic_time<T, F>(
    mut curve: F,
    epsilon: T,
    t_max: T,
) -> Result<CharacteristicTime<T>>
where
    T: Real,
    F: FnMut(T) -> Result<T>,
{
    if !(epsilon > T::zero() && epsilon < T::one()) {
        return Err(Error::Parameter(format!(
            "epsilon = {epsilon} must lie in (0, 1)"
        )));
    }
    let initial = curve(T::zero())?;
    if !(initial > T::zero()) {
        return Err(Error::NoCorrelation);
    }
    let level = (T::one() - epsilon) * initial;
    if curve(t_max)? >= level {
        return Ok(CharacteristicTime {
            t_c: t_max,
            reached: false,
        });
    }
    let t_c = bisect(&mut curve, T::zero(), t_max, |v| v >= level)?;
    Ok(CharacteristicTime { t_c, reached: true })
}

/// Maximal runs of samples whose logarithmic slope |d ln C/dt| stays below
/// `fraction` times the steepest log-slope over the window.
///
/// Slopes are central differences on the sample grid. Samples at or below the
/// vanishing threshold, and their neighbours, are never frozen. Runs need at
/// least two samples.
pub fn freezing_intervals<T: Real>(times: &[T], values: &[T], fraction: T) -> Vec<(T, T)> {
    assert_eq!(times.len(), values.len(), "times and values must align");
    let n = times.len();
    if n < 2 {
        return Vec::new();
    }
    let alive = T::lit(ALIVE_THRESHOLD);
    let slope = |i: usize| -> Option<T> {
        let (a, b) = (i.saturating_sub(1), (i + 1).min(n - 1));
        if values[a] <= alive || values[i] <= alive || values[b] <= alive {
            return None;
        }
        Some(((values[b].ln() - values[a].ln()) / (times[b] - times[a])).abs())
    };
    let slopes: Vec<Option<T>> = (0..n).map(slope).collect();
    let steepest = slopes
        .iter()
        .flatten()
        .fold(T::zero(), |acc, &s| acc.max(s));
    let threshold = fraction * steepest;

    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    for i in 0..=n {
        let frozen = i < n && matches!(slopes[i], Some(s) if s <= threshold);
        match (frozen, start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                if i - s >= 2 {
                    out.push((times[s], times[i - 1]));
                }
                start = None;
            }
            _ => {}
        }
    }
    out
}

/// Both sides of the implicit low-temperature preservation-time relation for
/// the GHZ-Werner GMC,
///
/// ```text
/// Π_X (β_X sinh(π t/β_X))^{2 Ω_X²/Ω²} = π² t² / (1 + ω_c² t²) · (4x / 3(1−x))^{1/(2ηΩ²)}
/// ```
///
/// which is what summing the per-reservoir low-temperature Γ_X gives. With
/// equal splittings the left side is the squared geometric mean of
/// `β_X sinh(π t/β_X)`.
pub fn low_t_preservation_relation<T: Real>(
    t: T,
    x: T,
    eta: T,
    omega_c: T,
    qubits: &QubitTriple<T>,
    betas: [T; 3],
) -> (T, T) {
    let omega_sq = qubits.omega_sq();
    let pi = T::PI();
    let ln_lhs = qubits
        .as_array()
        .iter()
        .zip(betas)
        .fold(T::zero(), |acc, (&w, beta)| {
            let z = pi * t / beta;
            // ln(β sinh z) = ln(β z) + ln(sinh z / z)
            let ln_term = (beta * z).ln() + ln_sinhc(z);
            acc + T::lit(2.0) * w * w / omega_sq * ln_term
        });
    let ratio = T::lit(4.0) * x / (T::lit(3.0) * (T::one() - x));
    let wt = omega_c * t;
    let ln_rhs = (pi * t).ln() * T::lit(2.0) - (wt * wt).ln_1p()
        + ratio.ln() / (T::lit(2.0) * eta * omega_sq);
    (ln_lhs.exp(), ln_rhs.exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InitialState {
    GhzWerner,
    WWerner,
}

impl InitialState {
    pub fn name(self) -> &'static str {
        match self {
            Self::GhzWerner => "ghz",
            Self::WWerner => "w",
        }
    }

    pub fn build<T: Real>(self, x: T) -> Result<DensityMatrix<T>> {
        match self {
            Self::GhzWerner => werner(&ghz_state(), x),
            Self::WWerner => werner(&w_state(), x),
        }
    }
}

impl std::str::FromStr for InitialState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ghz" | "ghz_werner" => Ok(Self::GhzWerner),
            "w" | "w_werner" => Ok(Self::WWerner),
            other => Err(Error::Parameter(format!(
                "unknown state {other:?} (expected ghz or w)"
            ))),
        }
    }
}

/// Uniform time samples in units of 1/ω_c.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid<T> {
    pub start: T,
    pub stop: T,
    pub count: usize,
}

impl<T: Real> TimeGrid<T> {
    pub fn new(start: T, stop: T, count: usize) -> Result<Self> {
        if count < 2 {
            return Err(Error::Parameter(format!(
                "t_count = {count} must be at least 2"
            )));
        }
        if !(start >= T::zero()) || !(stop > start) || !stop.is_finite() {
            return Err(Error::Parameter(format!(
                "time window [{start}, {stop}] must satisfy 0 <= start < stop"
            )));
        }
        Ok(Self { start, stop, count })
    }

    pub fn samples(&self) -> Vec<T> {
        let last = T::from_usize(self.count - 1).expect("count fits scalar");
        (0..self.count)
            .map(|i| {
                if i + 1 == self.count {
                    self.stop
                } else {
                    let f = T::from_usize(i).expect("index fits scalar") / last;
                    self.start + (self.stop - self.start) * f
                }
            })
            .collect()
    }
}

/// Cartesian parameter grid for batch evaluation.
#[derive(Debug, Clone)]
pub struct SweepGrid<T> {
    pub x: Vec<T>,
    pub eta: Vec<T>,
    pub beta_a: Vec<Temperature<T>>,
    pub k1: Vec<T>,
    pub k2: Vec<T>,
    pub time: TimeGrid<T>,
    pub measures: Vec<MeasureKind>,
    pub method: GammaMethod,
    pub state: InitialState,
    pub omega_c: T,
    /// Emit sampled curves.
    pub curves: bool,
    /// Emit preservation/characteristic times and freezing intervals.
    pub timescales: bool,
    pub epsilon: T,
    pub freeze_fraction: T,
}

impl<T: Real> SweepGrid<T> {
    pub fn validate(&self) -> Result<()> {
        let lists = [
            ("x", self.x.len()),
            ("eta", self.eta.len()),
            ("beta_a", self.beta_a.len()),
            ("k1", self.k1.len()),
            ("k2", self.k2.len()),
            ("measures", self.measures.len()),
        ];
        if let Some((name, _)) = lists.iter().find(|(_, len)| *len == 0) {
            return Err(Error::Parameter(format!("sweep list {name} is empty")));
        }
        TimeGrid::new(self.time.start, self.time.stop, self.time.count)?;
        if !(self.omega_c > T::zero()) {
            return Err(Error::Parameter(format!(
                "omega_c = {} must be positive",
                self.omega_c
            )));
        }
        Ok(())
    }

    /// Grid points in lexicographic order of (x, eta, beta_a, k1, k2) indices.
    pub fn points(&self) -> Vec<GridPoint<T>> {
        let mut out = Vec::new();
        for &x in &self.x {
            for &eta in &self.eta {
                for &beta_a in &self.beta_a {
                    for &k1 in &self.k1 {
                        for &k2 in &self.k2 {
                            out.push(GridPoint {
                                x,
                                eta,
                                beta_a,
                                k1,
                                k2,
                            });
                        }
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint<T> {
    pub x: T,
    pub eta: T,
    pub beta_a: Temperature<T>,
    pub k1: T,
    pub k2: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimescaleResult<T> {
    pub kind: MeasureKind,
    /// Preservation time, +∞ if the measure outlives the window.
    pub t_p: T,
    pub t_c: T,
    pub t_c_reached: bool,
    pub freezing: Vec<(T, T)>,
    pub parameters: Parameters<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SweepRecord<T> {
    Measure(MeasureResult<T>),
    Timescale(TimescaleResult<T>),
    Failure {
        kind: Option<MeasureKind>,
        parameters: Parameters<T>,
        message: String,
    },
}

fn parameters_for<T: Real>(
    point: &GridPoint<T>,
    grid: &SweepGrid<T>,
    qubits: &QubitTriple<T>,
) -> Parameters<T> {
    Parameters {
        x: point.x,
        eta: point.eta,
        beta_a: point.beta_a.beta(),
        k1: point.k1,
        k2: point.k2,
        omega_sq: qubits.omega_sq(),
        method: grid.method,
    }
}

/// Evaluates every grid point. Points run in parallel; the output order is
/// the lexicographic grid order regardless of scheduling, and a failing
/// point yields a `Failure` record instead of aborting the sweep.
pub fn run_sweep<T: Real>(
    grid: &SweepGrid<T>,
    qubits: &QubitTriple<T>,
) -> Result<Vec<SweepRecord<T>>> {
    grid.validate()?;
    let times = grid.time.samples();
    let rows: Vec<Vec<SweepRecord<T>>> = grid
        .points()
        .par_iter()
        .map(|point| evaluate_point(point, grid, qubits, &times))
        .collect();
    Ok(rows.into_iter().flatten().collect())
}

fn evaluate_point<T: Real>(
    point: &GridPoint<T>,
    grid: &SweepGrid<T>,
    qubits: &QubitTriple<T>,
    times: &[T],
) -> Vec<SweepRecord<T>> {
    let parameters = parameters_for(point, grid, qubits);
    let failure = |kind, e: Error| SweepRecord::Failure {
        kind,
        parameters: parameters.clone(),
        message: e.to_string(),
    };
    let setup = GradientSpec::new(point.beta_a, point.k1, point.k2)
        .and_then(|g| ohmic_environment(qubits, point.eta, grid.omega_c, &g, grid.method))
        .and_then(|env| Ok((env, grid.state.build(point.x)?)));
    let (env, rho0) = match setup {
        Ok(v) => v,
        Err(e) => return vec![failure(None, e)],
    };
    let omega_c = grid.omega_c;
    let mut out = Vec::new();
    for &kind in &grid.measures {
        let curve = |tau: T| -> Result<T> { kind.evaluate(&env.evolve(&rho0, tau / omega_c)?) };
        let sampled: Result<Vec<T>> = times.iter().map(|&tau| curve(tau)).collect();
        let values = match sampled {
            Ok(v) => v,
            Err(e) => {
                out.push(failure(Some(kind), e));
                continue;
            }
        };
        if grid.curves {
            out.extend(times.iter().zip(&values).map(|(&t, &value)| {
                SweepRecord::Measure(MeasureResult {
                    kind,
                    value,
                    t,
                    parameters: parameters.clone(),
                })
            }));
        }
        if grid.timescales {
            out.push(match timescales(curve, grid) {
                Ok((t_p, tc)) => SweepRecord::Timescale(TimescaleResult {
                    kind,
                    t_p,
                    t_c: tc.t_c,
                    t_c_reached: tc.reached,
                    freezing: freezing_intervals(times, &values, grid.freeze_fraction),
                    parameters: parameters.clone(),
                }),
                Err(Error::NoCorrelation) => SweepRecord::Timescale(TimescaleResult {
                    kind,
                    t_p: T::zero(),
                    t_c: T::zero(),
                    t_c_reached: true,
                    freezing: Vec::new(),
                    parameters: parameters.clone(),
                }),
                Err(e) => failure(Some(kind), e),
            });
        }
    }
    out
}

fn timescales<T: Real, F: Fn(T) -> Result<T>>(
    curve: F,
    grid: &SweepGrid<T>,
) -> Result<(T, CharacteristicTime<T>)> {
    let t_max = grid.time.stop;
    let t_p = preservation_time_numeric(&curve, t_max)?;
    let tc = characteristic_time(&curve, grid.epsilon, t_max)?;
    Ok((t_p, tc))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_preservation_time_boundaries() {
        assert_eq!(preservation_time_zero_t(1.0, 0.2, 12.0, 1.0), f64::INFINITY);
        assert_eq!(preservation_time_zero_t(3.0 / 7.0, 0.2, 12.0, 1.0), 0.0);
        assert_eq!(preservation_time_zero_t(0.2, 0.2, 12.0, 1.0), 0.0);
        let tp: f64 = preservation_time_zero_t(0.8, 0.2, 12.0, 1.0);
        assert!((tp - 0.64598).abs() < 1e-5, "{tp}");
    }

    #[test]
    fn closed_form_matches_bisection_oracle() {
        // direct bisection on x(1+t²)^{-2ηΩ²} − ¾(1−x), independent of the root finder
        let (x, eta, om2) = (0.8f64, 0.2, 12.0);
        let f = |t: f64| x * (1.0 + t * t).powf(-2.0 * eta * om2) - 0.75 * (1.0 - x);
        let (mut lo, mut hi) = (0.0, 10.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) > 0.0 {
                lo = mid
            } else {
                hi = mid
            }
        }
        assert!((preservation_time_zero_t(x, eta, om2, 1.0) - lo).abs() < 1e-13);
        assert!((lo - 0.6459782224702452).abs() < 1e-13);
    }

    #[test]
    fn numeric_preservation_time_signals() {
        let inf = preservation_time_numeric(|_| Ok(0.5), 3.0).unwrap();
        assert_eq!(inf, f64::INFINITY);
        assert_eq!(
            preservation_time_numeric(|_| Ok(0.0f64), 3.0),
            Err(Error::NoCorrelation)
        );
        // linear decay to zero at t = 2
        let tp = preservation_time_numeric(|t: f64| Ok((2.0 - t).max(0.0)), 5.0).unwrap();
        assert!((tp - 2.0).abs() < 1e-8);
    }

    #[test]
    fn characteristic_time_cases() {
        let flat = characteristic_time(|_| Ok(0.4), 0.01, 7.0).unwrap();
        assert_eq!(
            flat,
            CharacteristicTime {
                t_c: 7.0,
                reached: false
            }
        );
        let lin = characteristic_time(|t: f64| Ok(1.0 - t), 0.01, 0.5).unwrap();
        assert!(lin.reached && (lin.t_c - 0.01).abs() < 1e-10);
        assert!(characteristic_time(|_| Ok(1.0), 1.5, 1.0).is_err());
    }

    #[test]
    fn freezing_on_synthetic_staircase() {
        // two plateaus separated by a steep drop, then a second drop
        let times: Vec<f64> = (0..=400).map(|i| i as f64 * 0.01).collect();
        let step = |t: f64, c: f64| 1.0 / (1.0 + ((t - c) * 40.0).exp());
        let values: Vec<f64> = times
            .iter()
            .map(|&t| 0.5 * step(t, 1.0) + 0.5 * step(t, 3.0) + 1e-3)
            .collect();
        let iv = freezing_intervals(&times, &values, 0.1);
        assert_eq!(iv.len(), 3, "{iv:?}");
        assert_eq!(iv[0].0, 0.0);
        assert!(iv[1].0 > 1.0 && iv[1].1 < 3.0);
    }

    #[test]
    fn freezing_ignores_dead_samples() {
        let times = [0.0, 1.0, 2.0, 3.0, 4.0];
        let values = [1.0, 1.0, 0.0, 0.0, 0.0];
        assert!(freezing_intervals(&times, &values, 0.1).is_empty());
    }

    #[test]
    fn time_grid_validation() {
        assert!(TimeGrid::new(0.0, 1.0, 1).is_err());
        assert!(TimeGrid::new(1.0, 1.0, 5).is_err());
        assert!(TimeGrid::new(-1.0, 1.0, 5).is_err());
        let g = TimeGrid::new(0.0, 1.0, 5).unwrap().samples();
        assert_eq!(g, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    }
}
