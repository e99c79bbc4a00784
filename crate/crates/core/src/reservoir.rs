//! Thermal bosonic reservoirs and the decoherence function
//!
//! ```text
//! Γ(t) = 8 Ω² ∫_0^∞ dω J(ω)/ω² coth(βω/2) sin²(ωt/2)
//! ```
//!
//! evaluated either by adaptive quadrature or, for Ohmic densities, by the
//! zero-temperature and low-temperature closed forms. Units are ħ = k_B = 1.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quad::{self, QuadConfig};
use crate::scalar::{coth, ln_sinhc, Real};

/// Ohmic integrand truncation in units of the cutoff; e^{-60} < 1e-26.
pub const OHMIC_SUPPORT_CUTOFFS: f64 = 60.0;
/// Below this fraction of the low-frequency scale the integrand is replaced
/// by its analytic ω → 0 behaviour.
pub const SMALL_FREQUENCY_FRACTION: f64 = 1e-8;
const MAX_INITIAL_PANELS: usize = 4096;

/// `J(ω) = η ω e^{-ω/ω_c}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ohmic<T> {
    eta: T,
    omega_c: T,
}

impl<T: Real> Ohmic<T> {
    pub fn new(eta: T, omega_c: T) -> Result<Self> {
        if !(eta >= T::zero()) || !eta.is_finite() {
            return Err(Error::Parameter(format!(
                "coupling eta = {eta} must be >= 0"
            )));
        }
        if !(omega_c > T::zero()) || !omega_c.is_finite() {
            return Err(Error::Parameter(format!(
                "cutoff omega_c = {omega_c} must be > 0"
            )));
        }
        Ok(Self { eta, omega_c })
    }

    pub fn eta(&self) -> T {
        self.eta
    }

    pub fn omega_c(&self) -> T {
        self.omega_c
    }

    pub fn density(&self, omega: T) -> T {
        self.eta * omega * (-omega / self.omega_c).exp()
    }
}

/// A user-supplied positive spectral density with finite declared support.
#[derive(Clone)]
pub struct CustomSpectralDensity<T> {
    density: Arc<dyn Fn(T) -> T + Send + Sync>,
    support: T,
}

impl<T: Real> CustomSpectralDensity<T> {
    /// `density` is integrated over `(0, support]`.
    pub fn new(density: impl Fn(T) -> T + Send + Sync + 'static, support: T) -> Result<Self> {
        if !(support > T::zero()) || !support.is_finite() {
            return Err(Error::Parameter(format!(
                "spectral support cutoff {support} must be positive and finite"
            )));
        }
        Ok(Self {
            density: Arc::new(density),
            support,
        })
    }
}

impl<T> fmt::Debug for CustomSpectralDensity<T>
where
    T: fmt::Debug,
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomSpectralDensity")
            .field("support", &self.support)
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Clone)]
pub enum SpectralDensity<T> {
    Ohmic(Ohmic<T>),
    Custom(CustomSpectralDensity<T>),
}

impl<T: Real> SpectralDensity<T> {
    pub fn ohmic(eta: T, omega_c: T) -> Result<Self> {
        Ok(Self::Ohmic(Ohmic::new(eta, omega_c)?))
    }

    pub fn eval(&self, omega: T) -> T {
        match self {
            Self::Ohmic(o) => o.density(omega),
            Self::Custom(c) => (c.density)(omega),
        }
    }

    /// Upper integration limit.
    pub fn support(&self) -> T {
        match self {
            Self::Ohmic(o) => o.omega_c * T::lit(OHMIC_SUPPORT_CUTOFFS),
            Self::Custom(c) => c.support,
        }
    }

    fn low_frequency_scale(&self) -> T {
        match self {
            Self::Ohmic(o) => o.omega_c,
            Self::Custom(c) => c.support / T::lit(OHMIC_SUPPORT_CUTOFFS),
        }
    }
}

/// Reservoir temperature. Zero temperature is a distinct value rather than
/// an infinite β so that coth(βω/2) is never evaluated at overflow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Temperature<T> {
    Zero,
    Finite { beta: T },
}

impl<T: Real> Temperature<T> {
    pub fn inverse(beta: T) -> Result<Self> {
        if !(beta > T::zero()) || !beta.is_finite() {
            return Err(Error::Parameter(format!(
                "inverse temperature beta = {beta} must be positive and finite"
            )));
        }
        Ok(Self::Finite { beta })
    }

    pub fn beta(&self) -> Option<T> {
        match self {
            Self::Zero => None,
            Self::Finite { beta } => Some(*beta),
        }
    }

    /// Multiplies β by `k`; zero temperature stays at zero temperature.
    pub fn scaled(&self, k: T) -> Result<Self> {
        match self {
            Self::Zero => Ok(Self::Zero),
            Self::Finite { beta } => Self::inverse(*beta * k),
        }
    }
}

/// One reservoir as seen by the qubit it dephases.
#[derive(Debug, Clone)]
pub struct ReservoirSpec<T> {
    pub spectral: SpectralDensity<T>,
    pub temperature: Temperature<T>,
    /// Level splitting Ω of the attached qubit.
    pub omega_qubit: T,
}

impl<T: Real> ReservoirSpec<T> {
    pub fn new(
        spectral: SpectralDensity<T>,
        temperature: Temperature<T>,
        omega_qubit: T,
    ) -> Result<Self> {
        if !(omega_qubit > T::zero()) || !omega_qubit.is_finite() {
            return Err(Error::Parameter(format!(
                "qubit splitting {omega_qubit} must be positive"
            )));
        }
        Ok(Self {
            spectral,
            temperature,
            omega_qubit,
        })
    }

    pub fn ohmic(eta: T, omega_c: T, temperature: Temperature<T>, omega_qubit: T) -> Result<Self> {
        Self::new(
            SpectralDensity::ohmic(eta, omega_c)?,
            temperature,
            omega_qubit,
        )
    }

    fn ohmic_parts(&self, method: &str) -> Result<&Ohmic<T>> {
        match &self.spectral {
            SpectralDensity::Ohmic(o) => Ok(o),
            SpectralDensity::Custom(_) => Err(Error::Method(format!(
                "{method} closed form exists only for Ohmic spectral densities"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GammaMethod {
    ZeroTClosedForm,
    LowTClosedForm,
    NumericQuadrature,
}

impl GammaMethod {
    pub fn name(&self) -> &'static str {
        match self {
            Self::ZeroTClosedForm => "zero_t",
            Self::LowTClosedForm => "low_t",
            Self::NumericQuadrature => "numeric",
        }
    }
}

impl std::str::FromStr for GammaMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "zero_t" | "zero_t_closed_form" => Ok(Self::ZeroTClosedForm),
            "low_t" | "low_t_closed_form" => Ok(Self::LowTClosedForm),
            "numeric" | "numeric_quadrature" | "quadrature" => Ok(Self::NumericQuadrature),
            other => Err(Error::Parameter(format!(
                "unknown method {other:?} (expected zero_t, low_t or numeric)"
            ))),
        }
    }
}

fn check_time<T: Real>(t: T) -> Result<()> {
    if !(t >= T::zero()) || !t.is_finite() {
        return Err(Error::Parameter(format!(
            "time t = {t} must be finite and >= 0"
        )));
    }
    Ok(())
}

/// Γ(t) by the requested method.
pub fn gamma<T: Real>(res: &ReservoirSpec<T>, t: T, method: GammaMethod) -> Result<T> {
    match method {
        GammaMethod::ZeroTClosedForm => gamma_zero_t(res, t),
        GammaMethod::LowTClosedForm => gamma_low_t(res, t),
        GammaMethod::NumericQuadrature => gamma_numeric(res, t),
    }
}

/// `2 Ω² η ln(1 + (ω_c t)²)`; requires a zero-temperature Ohmic reservoir.
pub fn gamma_zero_t<T: Real>(res: &ReservoirSpec<T>, t: T) -> Result<T> {
    check_time(t)?;
    if res.temperature != Temperature::Zero {
        return Err(Error::Method(
            "zero-temperature closed form requested for a finite-temperature reservoir".into(),
        ));
    }
    let o = res.ohmic_parts("zero-temperature")?;
    if t == T::zero() {
        return Ok(T::zero());
    }
    let wt = o.omega_c * t;
    let omega_sq = res.omega_qubit * res.omega_qubit;
    Ok(T::lit(2.0) * omega_sq * o.eta * (wt * wt).ln_1p())
}

/// `2 Ω² η ln[(1 + (ω_c t)²) β²/(π²t²) sinh²(πt/β)]`; requires finite β.
///
/// Accurate for ω_c β ≫ 1. The t → 0 limit of the thermal factor is taken
/// analytically.
pub fn gamma_low_t<T: Real>(res: &ReservoirSpec<T>, t: T) -> Result<T> {
    check_time(t)?;
    let beta = res.temperature.beta().ok_or_else(|| {
        Error::Method("low-temperature closed form requires a finite inverse temperature".into())
    })?;
    let o = res.ohmic_parts("low-temperature")?;
    if t == T::zero() {
        return Ok(T::zero());
    }
    let wt = o.omega_c * t;
    let z = T::PI() * t / beta;
    let omega_sq = res.omega_qubit * res.omega_qubit;
    Ok(T::lit(2.0) * omega_sq * o.eta * ((wt * wt).ln_1p() + T::lit(2.0) * ln_sinhc(z)))
}

/// Γ(t) by adaptive quadrature with the default tolerances
/// (absolute 1e-10, relative 1e-8).
pub fn gamma_numeric<T: Real>(res: &ReservoirSpec<T>, t: T) -> Result<T> {
    gamma_numeric_with(res, t, &QuadConfig::default())
}

pub fn gamma_numeric_with<T: Real>(res: &ReservoirSpec<T>, t: T, cfg: &QuadConfig) -> Result<T> {
    check_time(t)?;
    if t == T::zero() {
        return Ok(T::zero());
    }
    let half = T::lit(0.5);
    let prefactor = T::lit(8.0) * res.omega_qubit * res.omega_qubit;
    let thermal = |w: T| match res.temperature {
        Temperature::Zero => T::one(),
        Temperature::Finite { beta } => coth(half * beta * w),
    };
    let integrand = |w: T| {
        let s = (half * w * t).sin();
        prefactor * res.spectral.eval(w) / (w * w) * thermal(w) * s * s
    };

    let upper = res.spectral.support();
    let w0 = res.spectral.low_frequency_scale() * T::lit(SMALL_FREQUENCY_FRACTION);
    // Near ω = 0: sin² ≈ ω²t²/4 and coth ≈ 2/(βω), so the integrand tends to
    // 4Ω² J'(0) t²/β at finite temperature and to 0 at zero temperature.
    let f0 = match res.temperature {
        Temperature::Zero => T::zero(),
        Temperature::Finite { beta } => {
            T::lit(4.0) * res.omega_qubit * res.omega_qubit * (res.spectral.eval(w0) / w0) * t * t
                / beta
        }
    };
    let head = half * w0 * (f0 + integrand(w0));

    // one panel per half period of sin²(ωt/2)
    let periods = (upper * t / T::PI())
        .ceil()
        .to_usize()
        .unwrap_or(MAX_INITIAL_PANELS);
    let cfg = QuadConfig {
        initial_panels: cfg.initial_panels.max(periods.clamp(1, MAX_INITIAL_PANELS)),
        ..*cfg
    };
    let body = quad::integrate(integrand, w0, upper, &cfg)?;
    Ok(head + body.value)
}
