//! Dense complex matrices of the sizes a three-qubit register needs.
//!
//! Storage is row-major. Subsystem indexing follows the register convention
//! used throughout the crate: for subsystem dimensions `[d0, d1, ..., dk]` the
//! first subsystem is the most significant digit of the row index.

use std::ops::{Index, IndexMut, Mul};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Hermiticity tolerance for eigensolver and density matrix inputs.
pub const HERMITIAN_TOL: f64 = 1e-10;

const JACOBI_MAX_SWEEPS: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix<T> {
    dim: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> ComplexMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "matrix dimension must be positive");
        Self {
            dim,
            data: vec![Complex::new(T::zero(), T::zero()); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex::new(T::one(), T::zero());
        }
        m
    }

    pub fn from_real_diagonal(diag: &[T]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex::new(d, T::zero());
        }
        m
    }

    /// Builds a matrix from row-major entries; `entries.len()` must be a square.
    pub fn from_row_major(dim: usize, entries: Vec<Complex<T>>) -> Result<Self> {
        if dim == 0 || entries.len() != dim * dim {
            return Err(Error::Shape(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                entries.len()
            )));
        }
        Ok(Self { dim, data: entries })
    }

    /// The rank-one projector `|v><v|`.
    pub fn outer(v: &[Complex<T>]) -> Self {
        let n = v.len();
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = v[i] * v[j].conj();
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out[(i, j)] = self[(j, i)].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.dim).fold(Complex::new(T::zero(), T::zero()), |acc, i| {
            acc + self[(i, i)]
        })
    }

    pub fn scale(&self, s: T) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z.scale(s)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// Largest `|m_ij - conj(m_ji)|`.
    pub fn hermiticity_deviation(&self) -> T {
        let mut worst = T::zero();
        for i in 0..self.dim {
            for j in i..self.dim {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// `(M + M†) / 2`.
    pub fn hermitian_part(&self) -> Self {
        let half = T::lit(0.5);
        let mut out = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out[(i, j)] = (self[(i, j)] + self[(j, i)].conj()).scale(half);
            }
        }
        out
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, z| acc.max(z.norm()))
    }

    /// Ascending eigenvalues of a Hermitian matrix.
    ///
    /// The input is symmetrized before a cyclic complex Jacobi iteration, so
    /// roundoff-level asymmetry is absorbed. The sweep order is fixed, which
    /// makes the result bitwise reproducible for a given input.
    pub fn hermitian_eigenvalues(&self) -> Result<Vec<T>> {
        let deviation = self.hermiticity_deviation();
        if deviation > T::tol(HERMITIAN_TOL) {
            return Err(Error::HermiticityViolation {
                deviation: deviation.to_f64_lossy(),
            });
        }
        let mut a = self.hermitian_part();
        jacobi_diagonalize(&mut a);
        let mut eig: Vec<T> = (0..a.dim).map(|i| a[(i, i)].re).collect();
        eig.sort_by(|x, y| x.partial_cmp(y).expect("eigenvalues are finite"));
        Ok(eig)
    }

    pub fn min_eigenvalue(&self) -> Result<T> {
        Ok(self.hermitian_eigenvalues()?[0])
    }

    /// Transposes the indices of one subsystem:
    /// `<..i..|M^T|..l..> = <..l..|M|..i..>` with every other digit untouched.
    pub fn partial_transpose(&self, dims: &[usize], subsystem: usize) -> Result<Self> {
        check_dims(self.dim, dims)?;
        if subsystem >= dims.len() {
            return Err(Error::Shape(format!(
                "subsystem {subsystem} out of range for {} subsystems",
                dims.len()
            )));
        }
        let stride: usize = dims[subsystem + 1..].iter().product();
        let d = dims[subsystem];
        let digit = |idx: usize| (idx / stride) % d;
        let mut out = Self::zeros(self.dim);
        for row in 0..self.dim {
            for col in 0..self.dim {
                let (r, c) = (digit(row), digit(col));
                let src_row = row - r * stride + c * stride;
                let src_col = col - c * stride + r * stride;
                out[(row, col)] = self[(src_row, src_col)];
            }
        }
        Ok(out)
    }

    /// Reduced matrix over the subsystems in `keep` (in ascending subsystem order).
    pub fn partial_trace(&self, dims: &[usize], keep: &[usize]) -> Result<Self> {
        check_dims(self.dim, dims)?;
        if let Some(&bad) = keep.iter().find(|&&k| k >= dims.len()) {
            return Err(Error::Shape(format!(
                "kept subsystem {bad} out of range for {} subsystems",
                dims.len()
            )));
        }
        let n = dims.len();
        let kept: Vec<bool> = (0..n).map(|s| keep.contains(&s)).collect();
        let kept_dims: Vec<usize> = (0..n).filter(|&s| kept[s]).map(|s| dims[s]).collect();
        let out_dim: usize = kept_dims.iter().product();
        let mut out = Self::zeros(out_dim);

        let digits = |mut idx: usize| {
            let mut ds = vec![0usize; n];
            for s in (0..n).rev() {
                ds[s] = idx % dims[s];
                idx /= dims[s];
            }
            ds
        };
        let reduced = |ds: &[usize]| {
            (0..n)
                .filter(|&s| kept[s])
                .fold(0usize, |acc, s| acc * dims[s] + ds[s])
        };

        for row in 0..self.dim {
            let rd = digits(row);
            for col in 0..self.dim {
                let cd = digits(col);
                if (0..n).all(|s| kept[s] || rd[s] == cd[s]) {
                    let (r, c) = (reduced(&rd), reduced(&cd));
                    out[(r, c)] = out[(r, c)] + self[(row, col)];
                }
            }
        }
        Ok(out)
    }

    /// `Re tr(M²)`; for a Hermitian unit-trace matrix this is the purity.
    pub fn purity(&self) -> T {
        let mut acc = T::zero();
        for i in 0..self.dim {
            for j in 0..self.dim {
                // tr(M M) = sum_ij M_ij M_ji
                acc = acc + (self[(i, j)] * self[(j, i)]).re;
            }
        }
        acc
    }
}

fn check_dims(dim: usize, dims: &[usize]) -> Result<()> {
    let prod: usize = dims.iter().product();
    if dims.is_empty() || prod != dim {
        return Err(Error::Shape(format!(
            "subsystem dimensions {dims:?} do not multiply to matrix dimension {dim}"
        )));
    }
    Ok(())
}

/// In-place cyclic Jacobi on a Hermitian matrix; leaves eigenvalues on the diagonal.
fn jacobi_diagonalize<T: Real>(a: &mut ComplexMatrix<T>) {
    let n = a.dim;
    let scale = a.max_abs().max(T::min_positive_value());
    let threshold = T::epsilon() * scale * T::lit(1e-2);
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut off = T::zero();
        for p in 0..n {
            for q in p + 1..n {
                off = off.max(a[(p, q)].norm());
            }
        }
        if off <= threshold {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let g = a[(p, q)].norm();
                if g <= threshold {
                    continue;
                }
                let phase = a[(p, q)].unscale(g);
                let tau = (a[(q, q)].re - a[(p, p)].re) / (g + g);
                let sgn = if tau >= T::zero() {
                    T::one()
                } else {
                    -T::one()
                };
                let t = sgn / (tau.abs() + (T::one() + tau * tau).sqrt());
                let c = (T::one() + t * t).sqrt().recip();
                let s = t * c;
                let se = phase.scale(s); // s e^{iφ}
                let se_conj = se.conj();
                // A <- A U, U = [[c, s e^{iφ}], [-s e^{-iφ}, c]] on (p, q)
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp.scale(c) - se_conj * akq;
                    a[(k, q)] = se * akp + akq.scale(c);
                }
                // A <- U† A
                for l in 0..n {
                    let apl = a[(p, l)];
                    let aql = a[(q, l)];
                    a[(p, l)] = apl.scale(c) - se * aql;
                    a[(q, l)] = se_conj * apl + aql.scale(c);
                }
                a[(p, q)] = Complex::new(T::zero(), T::zero());
                a[(q, p)] = Complex::new(T::zero(), T::zero());
                a[(p, p)].im = T::zero();
                a[(q, q)].im = T::zero();
            }
        }
    }
}

impl<T> Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = Complex<T>;

    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        assert!(
            i < self.dim && j < self.dim,
            "index ({i}, {j}) out of range"
        );
        &self.data[i * self.dim + j]
    }
}

impl<T> IndexMut<(usize, usize)> for ComplexMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        assert!(
            i < self.dim && j < self.dim,
            "index ({i}, {j}) out of range"
        );
        &mut self.data[i * self.dim + j]
    }
}

impl<T: Real> Mul for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn mul(self, rhs: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        assert_eq!(self.dim, rhs.dim);
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self[(i, k)];
                for j in 0..n {
                    out[(i, j)] = out[(i, j)] + aik * rhs[(k, j)];
                }
            }
        }
        out
    }
}
