//! Three-qubit states: validated density matrices, pure states, and the
//! GHZ/W Werner families used as initial conditions.
//!
//! Basis ordering is `|mnl> -> 4m + 2n + l`, qubit A most significant.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, HERMITIAN_TOL};
use crate::scalar::Real;

pub const QUBITS: usize = 3;
pub const DIM: usize = 8;
pub const DIMS: [usize; QUBITS] = [2, 2, 2];

const TRACE_TOL: f64 = 1e-12;
const PSD_TOL: f64 = 1e-10;
const NORM_TOL: f64 = 1e-12;

/// Row index of the basis ket `|mnl>`.
pub fn basis_index(m: u8, n: u8, l: u8) -> usize {
    debug_assert!(m < 2 && n < 2 && l < 2);
    4 * m as usize + 2 * n as usize + l as usize
}

/// Bits `(m, n, l)` of a basis index.
pub fn basis_bits(index: usize) -> (u8, u8, u8) {
    debug_assert!(index < DIM);
    (
        (index >> 2 & 1) as u8,
        (index >> 1 & 1) as u8,
        (index & 1) as u8,
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct PureState<T> {
    amplitudes: [Complex<T>; DIM],
}

impl<T: Real> PureState<T> {
    pub fn new(amplitudes: [Complex<T>; DIM]) -> Result<Self> {
        let norm: T = amplitudes
            .iter()
            .fold(T::zero(), |acc, a| acc + a.norm_sqr());
        if (norm - T::one()).abs() > T::tol(NORM_TOL) {
            return Err(Error::InvalidState(format!(
                "pure state squared norm is {norm}, expected 1"
            )));
        }
        Ok(Self { amplitudes })
    }

    /// Normalizes arbitrary nonzero amplitudes.
    pub fn normalized(mut amplitudes: [Complex<T>; DIM]) -> Result<Self> {
        let norm = amplitudes
            .iter()
            .fold(T::zero(), |acc, a| acc + a.norm_sqr())
            .sqrt();
        if norm <= T::zero() || !norm.is_finite() {
            return Err(Error::InvalidState("cannot normalize zero vector".into()));
        }
        for a in amplitudes.iter_mut() {
            *a = a.unscale(norm);
        }
        Ok(Self { amplitudes })
    }

    /// `|a> ⊗ |b> ⊗ |c>` for single-qubit amplitude pairs.
    pub fn product(a: [Complex<T>; 2], b: [Complex<T>; 2], c: [Complex<T>; 2]) -> Result<Self> {
        let mut amps = [Complex::new(T::zero(), T::zero()); DIM];
        for (i, amp) in amps.iter_mut().enumerate() {
            let (m, n, l) = basis_bits(i);
            *amp = a[m as usize] * b[n as usize] * c[l as usize];
        }
        Self::normalized(amps)
    }

    pub fn amplitudes(&self) -> &[Complex<T>; DIM] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> T {
        self.amplitudes
            .iter()
            .fold(T::zero(), |acc, a| acc + a.norm_sqr())
    }

    pub fn projector(&self) -> DensityMatrix<T> {
        DensityMatrix {
            matrix: ComplexMatrix::outer(&self.amplitudes),
        }
    }
}

/// `(|000> + |111>)/√2`.
pub fn ghz_state<T: Real>() -> PureState<T> {
    let mut amps = [Complex::new(T::zero(), T::zero()); DIM];
    amps[0] = Complex::new(T::FRAC_1_SQRT_2(), T::zero());
    amps[7] = Complex::new(T::FRAC_1_SQRT_2(), T::zero());
    PureState { amplitudes: amps }
}

/// `(|001> + |010> + |100>)/√3`.
pub fn w_state<T: Real>() -> PureState<T> {
    let a = T::lit(3.0).sqrt().recip();
    let mut amps = [Complex::new(T::zero(), T::zero()); DIM];
    for i in [1, 2, 4] {
        amps[i] = Complex::new(a, T::zero());
    }
    PureState { amplitudes: amps }
}

/// An 8×8 Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T> {
    matrix: ComplexMatrix<T>,
}

impl<T: Real> DensityMatrix<T> {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(matrix: ComplexMatrix<T>) -> Result<Self> {
        if matrix.dim() != DIM {
            return Err(Error::Shape(format!(
                "three-qubit density matrix must be 8x8, got {0}x{0}",
                matrix.dim()
            )));
        }
        let dev = matrix.hermiticity_deviation();
        if dev > T::tol(HERMITIAN_TOL) {
            return Err(Error::HermiticityViolation {
                deviation: dev.to_f64_lossy(),
            });
        }
        let tr = matrix.trace();
        if (tr.re - T::one()).abs() > T::tol(TRACE_TOL) || tr.im.abs() > T::tol(TRACE_TOL) {
            return Err(Error::InvalidState(format!("trace is {tr}, expected 1")));
        }
        let min = matrix.min_eigenvalue()?;
        if min < -T::tol(PSD_TOL) {
            return Err(Error::InvalidState(format!(
                "minimum eigenvalue {min:e} is negative"
            )));
        }
        Ok(Self { matrix })
    }

    /// Wraps a matrix the caller has already established to be a valid state.
    pub(crate) fn from_trusted(matrix: ComplexMatrix<T>) -> Self {
        debug_assert_eq!(matrix.dim(), DIM);
        Self { matrix }
    }

    pub fn maximally_mixed() -> Self {
        Self {
            matrix: ComplexMatrix::identity(DIM).scale(T::lit(0.125)),
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix<T> {
        self.matrix
    }

    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        self.matrix[(i, j)]
    }

    pub fn purity(&self) -> T {
        self.matrix.purity()
    }

    /// Single-qubit reduced state of `qubit` (0 = A, 1 = B, 2 = C).
    pub fn reduced_qubit(&self, qubit: usize) -> Result<ComplexMatrix<T>> {
        self.matrix.partial_trace(&DIMS, &[qubit])
    }
}

/// `x |ψ><ψ| + (1 - x) I / 8`.
pub fn werner<T: Real>(psi: &PureState<T>, x: T) -> Result<DensityMatrix<T>> {
    if !(x >= T::zero() && x <= T::one()) {
        return Err(Error::Parameter(format!(
            "mixing parameter x = {x} outside [0, 1]"
        )));
    }
    let mixed = ComplexMatrix::identity(DIM).scale((T::one() - x) / T::lit(8.0));
    let pure = ComplexMatrix::outer(psi.amplitudes()).scale(x);
    Ok(DensityMatrix::from_trusted(pure.add(&mixed)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ghz_amplitudes() {
        let ghz = ghz_state::<f64>();
        assert!((ghz.amplitudes()[0].re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert_eq!(ghz.amplitudes()[0], ghz.amplitudes()[7]);
        assert!((ghz.norm_sqr() - 1.0).abs() < 1e-15);
        assert!((ghz.projector().purity() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn w_amplitudes_and_off_diagonal() {
        let w = w_state::<f64>();
        for i in [1, 2, 4] {
            assert!((w.amplitudes()[i].re - 0.577_350_269_189_625_8).abs() < 1e-15);
        }
        assert!((w.norm_sqr() - 1.0).abs() < 1e-15);
        let p = w.projector();
        let e = p.get(basis_index(0, 0, 1), basis_index(0, 1, 0));
        assert!((e.re - 1.0 / 3.0).abs() < 1e-15 && e.im == 0.0);
    }

    #[test]
    fn werner_endpoints_and_interior() {
        let ghz = ghz_state::<f64>();
        let mixed = werner(&ghz, 0.0).unwrap();
        assert!(
            mixed
                .matrix()
                .add(&DensityMatrix::maximally_mixed().matrix().scale(-1.0))
                .max_abs()
                < 1e-16
        );
        let pure = werner(&ghz, 1.0).unwrap();
        assert_eq!(pure, ghz.projector());

        let rho = werner(&ghz, 0.8).unwrap();
        assert!((rho.get(0, 7).re - 0.4).abs() < 1e-15);
        let expected = [0.425, 0.025, 0.025, 0.025, 0.025, 0.025, 0.025, 0.425];
        for (i, d) in expected.iter().enumerate() {
            assert!((rho.get(i, i).re - d).abs() < 1e-15);
        }
        assert!(DensityMatrix::new(rho.into_matrix()).is_ok());
    }

    #[test]
    fn werner_rejects_out_of_range() {
        let ghz = ghz_state::<f64>();
        assert!(matches!(werner(&ghz, 1.5), Err(Error::Parameter(_))));
        assert!(matches!(werner(&ghz, -0.1), Err(Error::Parameter(_))));
        assert!(matches!(werner(&ghz, f64::NAN), Err(Error::Parameter(_))));
    }

    #[test]
    fn validation_catches_bad_matrices() {
        let bad_trace = ComplexMatrix::<f64>::identity(8).scale(0.2);
        assert!(matches!(
            DensityMatrix::new(bad_trace),
            Err(Error::InvalidState(_))
        ));
        let mut negative = ComplexMatrix::<f64>::identity(8).scale(0.125);
        negative[(0, 7)] = Complex::new(0.5, 0.0);
        negative[(7, 0)] = Complex::new(0.5, 0.0);
        assert!(matches!(
            DensityMatrix::new(negative),
            Err(Error::InvalidState(_))
        ));
        let mut skew = ComplexMatrix::<f64>::identity(8).scale(0.125);
        skew[(0, 1)] = Complex::new(0.01, 0.0);
        assert!(matches!(
            DensityMatrix::new(skew),
            Err(Error::HermiticityViolation { .. })
        ));
        assert!(matches!(
            DensityMatrix::new(ComplexMatrix::<f64>::identity(4).scale(0.25)),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn product_state_and_bits() {
        let one = Complex::new(1.0, 0.0);
        let zero = Complex::new(0.0, 0.0);
        let psi = PureState::product([zero, one], [one, zero], [zero, one]).unwrap();
        assert_eq!(psi.amplitudes()[basis_index(1, 0, 1)], one);
        assert_eq!(basis_bits(5), (1, 0, 1));
        assert!(PureState::<f64>::new([zero; 8]).is_err());
    }
}
