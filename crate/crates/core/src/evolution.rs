//! The exact dephasing map for three qubits in independent reservoirs.
//!
//! Every element of the density matrix evolves independently:
//! `ρ_uv(t) = ρ_uv(0) F_uv(t) exp(-i (E_u - E_v) t)`, where `F_uv` multiplies
//! `exp(-Γ_X(t))` for each qubit X whose bit differs between `u` and `v`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::reservoir::{gamma, GammaMethod, ReservoirSpec};
use crate::scalar::Real;
use crate::states::{basis_bits, DensityMatrix, DIM};

/// Level splittings Ω_A, Ω_B, Ω_C.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitTriple<T> {
    pub omega_a: T,
    pub omega_b: T,
    pub omega_c: T,
}

impl<T: Real> QubitTriple<T> {
    pub fn new(omega_a: T, omega_b: T, omega_c: T) -> Result<Self> {
        for (name, w) in [
            ("omega_a", omega_a),
            ("omega_b", omega_b),
            ("omega_c", omega_c),
        ] {
            if !(w > T::zero()) || !w.is_finite() {
                return Err(Error::Parameter(format!("{name} = {w} must be positive")));
            }
        }
        Ok(Self {
            omega_a,
            omega_b,
            omega_c,
        })
    }

    pub fn uniform(omega: T) -> Result<Self> {
        Self::new(omega, omega, omega)
    }

    /// Splittings from their squares.
    pub fn from_squares(sq_a: T, sq_b: T, sq_c: T) -> Result<Self> {
        Self::new(sq_a.sqrt(), sq_b.sqrt(), sq_c.sqrt())
    }

    pub fn as_array(&self) -> [T; 3] {
        [self.omega_a, self.omega_b, self.omega_c]
    }

    /// Ω² = Ω_A² + Ω_B² + Ω_C².
    pub fn omega_sq(&self) -> T {
        self.as_array()
            .iter()
            .fold(T::zero(), |acc, &w| acc + w * w)
    }
}

/// `E_mnl = (-1)^m Ω_A + (-1)^n Ω_B + (-1)^l Ω_C`.
pub fn energy<T: Real>(m: u8, n: u8, l: u8, q: &QubitTriple<T>) -> T {
    let signed = |bit: u8, w: T| if bit == 0 { w } else { -w };
    signed(m, q.omega_a) + signed(n, q.omega_b) + signed(l, q.omega_c)
}

fn energy_of_index<T: Real>(index: usize, q: &QubitTriple<T>) -> T {
    let (m, n, l) = basis_bits(index);
    energy(m, n, l, q)
}

/// Damping and phase matrices of the map at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct DephasingFactors<T> {
    pub t: T,
    /// Γ_A, Γ_B, Γ_C at `t`.
    pub gammas: [T; 3],
    pub damping: [[T; DIM]; DIM],
    /// `-(E_u - E_v) t`.
    pub phase: [[T; DIM]; DIM],
}

impl<T: Real> DephasingFactors<T> {
    /// Builds the factors from already-evaluated Γ values.
    pub fn from_gammas(q: &QubitTriple<T>, gammas: [T; 3], t: T) -> Result<Self> {
        if let Some(g) = gammas
            .iter()
            .find(|g| !(**g >= T::zero()) || !g.is_finite())
        {
            return Err(Error::Parameter(format!(
                "decoherence exponent {g} must be finite and >= 0"
            )));
        }
        let decay = gammas.map(|g| (-g).exp());
        let mut damping = [[T::one(); DIM]; DIM];
        let mut phase = [[T::zero(); DIM]; DIM];
        for u in 0..DIM {
            for v in 0..DIM {
                if u == v {
                    continue;
                }
                let differs = u ^ v;
                let mut d = T::one();
                for (qubit, &factor) in decay.iter().enumerate() {
                    if differs >> (2 - qubit) & 1 == 1 {
                        d = d * factor;
                    }
                }
                damping[u][v] = d;
                phase[u][v] = -(energy_of_index(u, q) - energy_of_index(v, q)) * t;
            }
        }
        Ok(Self {
            t,
            gammas,
            damping,
            phase,
        })
    }

    /// The identity map.
    pub fn identity(q: &QubitTriple<T>) -> Self {
        Self::from_gammas(q, [T::zero(); 3], T::zero()).expect("zero exponents are valid")
    }
}

/// Γ_A, Γ_B, Γ_C at `t`.
pub fn gammas_at<T: Real>(
    reservoirs: &[ReservoirSpec<T>; 3],
    t: T,
    method: GammaMethod,
) -> Result<[T; 3]> {
    Ok([
        gamma(&reservoirs[0], t, method)?,
        gamma(&reservoirs[1], t, method)?,
        gamma(&reservoirs[2], t, method)?,
    ])
}

pub fn dephasing_factors<T: Real>(
    q: &QubitTriple<T>,
    reservoirs: &[ReservoirSpec<T>; 3],
    t: T,
    method: GammaMethod,
) -> Result<DephasingFactors<T>> {
    let pairs = [q.omega_a, q.omega_b, q.omega_c];
    for (i, (res, w)) in reservoirs.iter().zip(pairs).enumerate() {
        if res.omega_qubit != w {
            return Err(Error::Parameter(format!(
                "reservoir {i} is attached to splitting {} but the qubit has {w}",
                res.omega_qubit
            )));
        }
    }
    DephasingFactors::from_gammas(q, gammas_at(reservoirs, t, method)?, t)
}

/// Applies the map elementwise; populations are left bit-for-bit unchanged.
pub fn evolve<T: Real>(rho0: &DensityMatrix<T>, factors: &DephasingFactors<T>) -> DensityMatrix<T> {
    let mut m = rho0.matrix().clone();
    for u in 0..DIM {
        for v in u + 1..DIM {
            let (s, c) = factors.phase[u][v].sin_cos();
            let w = Complex::new(c, s).scale(factors.damping[u][v]);
            m[(u, v)] = m[(u, v)] * w;
            m[(v, u)] = m[(v, u)] * w.conj();
        }
    }
    DensityMatrix::from_trusted(m)
}

/// Three qubits, their reservoirs and the Γ evaluation method.
#[derive(Debug, Clone)]
pub struct Environment<T> {
    pub qubits: QubitTriple<T>,
    pub reservoirs: [ReservoirSpec<T>; 3],
    pub method: GammaMethod,
}

impl<T: Real> Environment<T> {
    pub fn new(
        qubits: QubitTriple<T>,
        reservoirs: [ReservoirSpec<T>; 3],
        method: GammaMethod,
    ) -> Result<Self> {
        let env = Self {
            qubits,
            reservoirs,
            method,
        };
        // surfaces splitting mismatches and method/temperature conflicts early
        env.factors(T::zero())?;
        for res in &env.reservoirs {
            gamma(res, T::one(), method)?;
        }
        Ok(env)
    }

    pub fn gammas(&self, t: T) -> Result<[T; 3]> {
        gammas_at(&self.reservoirs, t, self.method)
    }

    pub fn factors(&self, t: T) -> Result<DephasingFactors<T>> {
        dephasing_factors(&self.qubits, &self.reservoirs, t, self.method)
    }

    pub fn evolve(&self, rho0: &DensityMatrix<T>, t: T) -> Result<DensityMatrix<T>> {
        Ok(evolve(rho0, &self.factors(t)?))
    }
}
