//! Tripartite correlation quantifiers.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::reservoir::GammaMethod;
use crate::scalar::Real;
use crate::states::{DensityMatrix, PureState, DIM, DIMS, QUBITS};

/// Off-X elements below this modulus are treated as zero.
pub const X_SHAPE_TOL: f64 = 1e-12;
/// Partial-transpose eigenvalues of smaller magnitude count as zero.
pub const EIGEN_ZERO_TOL: f64 = 1e-12;

/// One side of a single-qubit bipartition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Party {
    A,
    B,
    C,
}

impl Party {
    pub const ALL: [Party; 3] = [Party::A, Party::B, Party::C];

    pub fn index(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MeasureKind {
    Gmc,
    TripartiteNegativity,
    NegativityABc,
    NegativityBAc,
    NegativityCAb,
    L1Coherence,
}

impl MeasureKind {
    pub const ALL: [MeasureKind; 6] = [
        MeasureKind::Gmc,
        MeasureKind::TripartiteNegativity,
        MeasureKind::NegativityABc,
        MeasureKind::NegativityBAc,
        MeasureKind::NegativityCAb,
        MeasureKind::L1Coherence,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Gmc => "gmc",
            Self::TripartiteNegativity => "tripartite_negativity",
            Self::NegativityABc => "negativity_a_bc",
            Self::NegativityBAc => "negativity_b_ac",
            Self::NegativityCAb => "negativity_c_ab",
            Self::L1Coherence => "l1_coherence",
        }
    }

    pub fn evaluate<T: Real>(self, rho: &DensityMatrix<T>) -> Result<T> {
        match self {
            Self::Gmc => gmc_x_state(rho),
            Self::TripartiteNegativity => tripartite_negativity(rho),
            Self::NegativityABc => negativity(rho, Party::A),
            Self::NegativityBAc => negativity(rho, Party::B),
            Self::NegativityCAb => negativity(rho, Party::C),
            Self::L1Coherence => Ok(l1_coherence(rho)),
        }
    }
}

impl fmt::Display for MeasureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MeasureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Parameter(format!("unknown measure {s:?}")))
    }
}

/// The configuration a measure value was produced under.
#[derive(Debug, Clone, PartialEq)]
pub struct Parameters<T> {
    pub x: T,
    pub eta: T,
    /// `None` at zero temperature.
    pub beta_a: Option<T>,
    pub k1: T,
    pub k2: T,
    pub omega_sq: T,
    pub method: GammaMethod,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasureResult<T> {
    pub kind: MeasureKind,
    pub value: T,
    pub t: T,
    pub parameters: Parameters<T>,
}

/// Genuine multipartite concurrence of a pure state:
/// the minimum over single-qubit cuts of √(2(1 − tr ρ_X²)).
pub fn gmc_pure<T: Real>(psi: &PureState<T>) -> Result<T> {
    let rho = psi.projector();
    let mut best = T::infinity();
    for q in 0..QUBITS {
        let purity = rho.reduced_qubit(q)?.purity();
        let c = (T::lit(2.0) * (T::one() - purity)).max(T::zero()).sqrt();
        best = best.min(c);
    }
    Ok(best)
}

/// Closed-form GMC of an X-shaped three-qubit state:
/// `2 max{0, max_j [|ρ_{j,7-j}| − Σ_{k≠j} √(ρ_kk ρ_{7-k,7-k})]}` (0-based).
pub fn gmc_x_state<T: Real>(rho: &DensityMatrix<T>) -> Result<T> {
    let mut worst = (T::zero(), 0usize, 0usize);
    for i in 0..DIM {
        for j in 0..DIM {
            if j == i || j == DIM - 1 - i {
                continue;
            }
            let m = rho.get(i, j).norm();
            if m > worst.0 {
                worst = (m, i, j);
            }
        }
    }
    if worst.0 >= T::tol(X_SHAPE_TOL) {
        return Err(Error::Shape(format!(
            "state is not X-shaped: |rho[{}][{}]| = {:e}",
            worst.1, worst.2, worst.0
        )));
    }
    let half = DIM / 2;
    let pair_roots: Vec<T> = (0..half)
        .map(|k| {
            let a = rho.get(k, k).re.max(T::zero());
            let b = rho.get(DIM - 1 - k, DIM - 1 - k).re.max(T::zero());
            (a * b).sqrt()
        })
        .collect();
    let total: T = pair_roots.iter().fold(T::zero(), |acc, &r| acc + r);
    let mut best = T::zero();
    for (j, &root) in pair_roots.iter().enumerate() {
        let candidate = rho.get(j, DIM - 1 - j).norm() - (total - root);
        best = best.max(candidate);
    }
    Ok(T::lit(2.0) * best)
}

/// GMC of the dephased GHZ-Werner state in terms of the summed exponent:
/// `max{0, x e^{-Γ} − ¾(1 − x)}`.
pub fn gmc_ghz_werner<T: Real>(x: T, gamma_total: T) -> Result<T> {
    if !(x >= T::zero() && x <= T::one()) {
        return Err(Error::Parameter(format!(
            "mixing parameter x = {x} outside [0, 1]"
        )));
    }
    Ok((x * (-gamma_total).exp() - T::lit(0.75) * (T::one() - x)).max(T::zero()))
}

/// `−2 Σ λ_neg` over the partial transpose on `party`.
pub fn negativity<T: Real>(rho: &DensityMatrix<T>, party: Party) -> Result<T> {
    let pt = rho.matrix().partial_transpose(&DIMS, party.index())?;
    let zero = T::tol(EIGEN_ZERO_TOL);
    let negative_sum = pt
        .hermitian_eigenvalues()?
        .into_iter()
        .filter(|&l| l < -zero)
        .fold(T::zero(), |acc, l| acc + l);
    Ok(-T::lit(2.0) * negative_sum)
}

/// The three bipartition negativities `[A|BC, B|AC, C|AB]`.
pub fn bipartition_negativities<T: Real>(rho: &DensityMatrix<T>) -> Result<[T; 3]> {
    Ok([
        negativity(rho, Party::A)?,
        negativity(rho, Party::B)?,
        negativity(rho, Party::C)?,
    ])
}

/// Geometric mean of the three bipartition negativities.
pub fn tripartite_negativity<T: Real>(rho: &DensityMatrix<T>) -> Result<T> {
    let [a, b, c] = bipartition_negativities(rho)?;
    let product = a * b * c;
    if product == T::zero() {
        return Ok(T::zero());
    }
    Ok(product.cbrt())
}

/// `Σ_{i≠j} |ρ_ij|`.
pub fn l1_coherence<T: Real>(rho: &DensityMatrix<T>) -> T {
    let mut acc = T::zero();
    for i in 0..DIM {
        for j in 0..DIM {
            if i != j {
                acc = acc + rho.get(i, j).norm();
            }
        }
    }
    acc
}

/// Closed-form expressions for the bipartition negativities of the dephased
/// W-Werner state, assuming Γ_A = Γ_B = `gamma`.
///
/// Kept as a cross-check only; [`negativity`] is authoritative. The B|AC
/// expression in particular does not agree with the partial-transpose
/// spectrum (see the tests).
pub fn w_werner_negativity_closed_form<T: Real>(x: T, gamma: T, gamma_c: T) -> Result<[T; 3]> {
    if !(x >= T::zero() && x <= T::one()) {
        return Err(Error::Parameter(format!(
            "mixing parameter x = {x} outside [0, 1]"
        )));
    }
    let two = T::lit(2.0);
    let three = T::lit(3.0);
    let eighth = (T::one() - x) / T::lit(8.0);
    let a_bc = x * (-gamma).exp() / three * ((-two * gamma_c).exp() + (-two * gamma).exp()).sqrt()
        - eighth;
    let m = x * (-(gamma_c + gamma)).exp() / three;
    let n = x * (-two * gamma).exp() / three;
    let radical = (T::lit(36.0) * m * m * n * n
        + T::lit(4.0) * m * m * x * x
        + T::lit(9.0) * n * n
        + n * n / two
        + x * x / T::lit(36.0))
    .sqrt();
    let b_ac = x * x * (-two * (gamma + gamma_c)).exp() / T::lit(9.0)
        - radical
        - (x + three) / T::lit(24.0);
    let c_ab = T::SQRT_2() * x * (-(gamma + gamma_c)).exp() / three - eighth;
    Ok([a_bc, b_ac, c_ab].map(|v| two * v.max(T::zero())))
}
