//! Dense complex matrices and induced matrix norms.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("matrix dimension must be at least 1")]
    EmptyDimension,
    #[error("expected {expected} entries for a square matrix, got {got}")]
    BadLength { expected: usize, got: usize },
    #[error("row {row} has {got} entries, expected {expected}")]
    RaggedRow { row: usize, expected: usize, got: usize },
    #[error("entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },
    #[error("dimension mismatch: {left}x{left} vs {right}x{right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("singular value iteration did not converge for a {dim}x{dim} matrix")]
    SvdNoConvergence { dim: usize },
}

/// Matrix norms understood by the crate.
///
/// The three induced norms are submultiplicative and are the only ones
/// accepted by certification. `MaxEntry` (`max |a_ij|`) is kept for the
/// norm-equivalence chain `‖A‖₀ ≤ ‖A‖₂ ≤ d‖A‖₀`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NormKind {
    InducedOne,
    InducedInf,
    InducedTwo,
    MaxEntry,
}

impl NormKind {
    pub const INDUCED: [NormKind; 3] = [
        NormKind::InducedOne,
        NormKind::InducedInf,
        NormKind::InducedTwo,
    ];

    pub fn is_submultiplicative(self) -> bool {
        !matches!(self, NormKind::MaxEntry)
    }

    /// Short name used on the command line and in CSV output.
    pub fn name(self) -> &'static str {
        match self {
            NormKind::InducedOne => "one",
            NormKind::InducedInf => "inf",
            NormKind::InducedTwo => "two",
            NormKind::MaxEntry => "max",
        }
    }
}

impl fmt::Display for NormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Dense `d×d` complex matrix, row-major, all entries finite.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(dim: usize, data: Vec<Complex64>) -> Result<Self, LinalgError> {
        if dim == 0 {
            return Err(LinalgError::EmptyDimension);
        }
        if data.len() != dim * dim {
            return Err(LinalgError::BadLength {
                expected: dim * dim,
                got: data.len(),
            });
        }
        if let Some(pos) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(LinalgError::NonFinite {
                row: pos / dim,
                col: pos % dim,
            });
        }
        Ok(Self { dim, data })
    }

    /// Builds a matrix from real row-major entries.
    pub fn from_real(dim: usize, data: &[f64]) -> Result<Self, LinalgError> {
        Self::new(dim, data.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self, LinalgError> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(LinalgError::RaggedRow {
                    row: i,
                    expected: dim,
                    got: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Self::new(dim, data)
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "matrix dimension must be at least 1");
        Self {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn diag(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            assert!(v.is_finite(), "diagonal entry {i} is not finite");
            m.data[i * values.len() + i] = Complex64::new(v, 0.0);
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Complex64]> {
        self.data.chunks(self.dim)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    /// Largest entry modulus.
    pub fn max_modulus(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest absolute value over all real and imaginary parts. Exact,
    /// unlike [`Self::max_modulus`].
    pub fn max_component(&self) -> f64 {
        self.data
            .iter()
            .map(|z| z.re.abs().max(z.im.abs()))
            .fold(0.0, f64::max)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * c).collect(),
        }
    }

    pub fn scale_real(&self, c: f64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * c).collect(),
        }
    }

    /// Multiplies every entry by `2^k`. Exact as long as no entry leaves the
    /// normal range.
    pub fn scale_pow2(&self, k: i32) -> Self {
        let f = pow2(k);
        self.scale_real(f)
    }

    /// `self · rhs` with row-major, left-to-right accumulation.
    pub fn mul(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
        if self.dim != rhs.dim {
            return Err(LinalgError::DimensionMismatch {
                left: self.dim,
                right: rhs.dim,
            });
        }
        Ok(self.mul_unchecked(rhs))
    }

    pub(crate) fn mul_unchecked(&self, rhs: &ComplexMatrix) -> ComplexMatrix {
        let d = self.dim;
        let mut out = vec![Complex64::new(0.0, 0.0); d * d];
        for i in 0..d {
            let row = &self.data[i * d..(i + 1) * d];
            for j in 0..d {
                let mut acc = Complex64::new(0.0, 0.0);
                for (k, a) in row.iter().enumerate() {
                    acc += a * rhs.data[k * d + j];
                }
                out[i * d + j] = acc;
            }
        }
        ComplexMatrix { dim: d, data: out }
    }

    pub fn add(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
        if self.dim != rhs.dim {
            return Err(LinalgError::DimensionMismatch {
                left: self.dim,
                right: rhs.dim,
            });
        }
        Ok(ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.data[i * self.dim + i]).sum()
    }

    /// `self^n` by repeated left multiplication (`n = 0` gives `I`).
    pub fn pow(&self, n: usize) -> ComplexMatrix {
        let mut acc = ComplexMatrix::identity(self.dim);
        for _ in 0..n {
            acc = self.mul_unchecked(&acc);
        }
        acc
    }
}

/// `2^k` as an `f64`, exact over the whole representable range.
pub(crate) fn pow2(k: i32) -> f64 {
    if k > 1023 {
        f64::INFINITY
    } else if k >= -1022 {
        f64::from_bits(((k + 1023) as u64) << 52)
    } else if k >= -1074 {
        f64::from_bits(1u64 << (k + 1074))
    } else {
        0.0
    }
}

pub fn mat_mul(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
    a.mul(b)
}

/// Evaluates `‖a‖` for the requested kind.
///
/// `InducedTwo` is the largest singular value. Failure of the singular value
/// iteration is reported, never truncated.
pub fn matrix_norm(a: &ComplexMatrix, kind: NormKind) -> Result<f64, LinalgError> {
    let d = a.dim;
    Ok(match kind {
        NormKind::InducedOne => (0..d)
            .map(|j| (0..d).map(|i| a.get(i, j).norm()).sum::<f64>())
            .fold(0.0, f64::max),
        NormKind::InducedInf => a
            .rows()
            .map(|row| row.iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max),
        NormKind::MaxEntry => a.max_modulus(),
        NormKind::InducedTwo => spectral_norm(a)?,
    })
}

const SVD_MAX_ITERATIONS: usize = 10_000;

fn spectral_norm(a: &ComplexMatrix) -> Result<f64, LinalgError> {
    let d = a.dim;
    if d == 1 {
        return Ok(a.data[0].norm());
    }
    let peak = a.max_component();
    if peak == 0.0 {
        return Ok(0.0);
    }
    // feed the SVD a power-of-two normalized copy so the result scales exactly
    let (_, e) = crate::wide::frexp(peak);
    let scaled = a.scale_pow2(-e as i32);
    let m = DMatrix::from_row_slice(d, d, &scaled.data);
    let svd = nalgebra::linalg::SVD::try_new(m, false, false, f64::EPSILON, SVD_MAX_ITERATIONS)
        .ok_or(LinalgError::SvdNoConvergence { dim: d })?;
    let sigma_max = svd.singular_values.iter().copied().fold(0.0, f64::max);
    Ok(crate::wide::WideReal::from_f64(sigma_max).mul_pow2(e).to_f64())
}
