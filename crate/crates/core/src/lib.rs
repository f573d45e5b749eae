//! Certified two-sided enclosures of the spectral radius of a matrix and of
//! the joint spectral radius of a finite matrix set.
//!
//! The upper side is the generalized Gelfand quantity `‖𝒜ⁿ‖^{1/n}`; the lower
//! side divides it by an explicit, computable convergence factor built from
//! the Bochi constant `C_d` and the base-`d` digits of `n`.
//!
//! Module map:
//!
//! * [`linalg`]: dense complex matrices, induced norms.
//! * [`eigen`]: characteristic-polynomial spectral radius, used only as a
//!   validation oracle.
//! * [`semigroup`]: exact `‖𝒜ⁿ‖` by branch-and-bound enumeration,
//!   nilpotency detection, product-based lower estimates.
//! * [`bounds`]: the constants, digit sums and the certifier itself.
//!
//! All arithmetic is IEEE-754 binary64 with round-to-nearest. The
//! enclosures are exact statements about the computed norms; directed
//! rounding is not used, so the last few ulps are not rigorously accounted
//! for.

pub mod bounds;
pub mod eigen;
pub mod linalg;
pub mod semigroup;
pub mod wide;

pub use bounds::{
    base_d_digits, bochi_check, bochi_constant, certify, omega_recursion_check, sigma_nu_closed,
    sigma_nu_exact, sweep, BochiReport, BoundMode, BoundParams, BoundSequence, BoundsError,
    CertifiedInterval, CertifyOptions, DigitDecomposition, NormEvidence, OmegaReport, OmegaRow, SweepEntry,
};
pub use eigen::{characteristic_polynomial, eigen_spectral_radius, EigenError};
pub use linalg::{mat_mul, matrix_norm, ComplexMatrix, LinalgError, NormKind};
pub use num_complex::Complex64;
pub use semigroup::{
    gsr_lower_estimate, nilpotency_check, power_set_norm, real_set, set_norm, Budget, MatrixSet, PowerNorm,
    ProductWord, ScaledMatrix, SemigroupError,
};
pub use wide::WideReal;
