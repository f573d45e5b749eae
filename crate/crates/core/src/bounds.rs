//! Explicit convergence-rate bounds for the generalized Gelfand formula.
//!
//! For `d ≥ 2`, every finite set `𝒜` of `d×d` matrices, every induced norm
//! and every `n ≥ 1`:
//!
//! ```text
//! C_d^{-σ/n} · (‖𝒜‖^d / ‖𝒜^d‖)^{-ν/n} · ‖𝒜ⁿ‖^{1/n}  ≤  ρ(𝒜)  ≤  ‖𝒜ⁿ‖^{1/n}
//! ```
//!
//! where `C_d` is the Bochi constant and `(σ, ν) = (σ_d(n), ν_d(n))` are
//! weighted base-`d` digit sums of `n` ([`BoundMode::ExactDigits`]) or their
//! closed-form upper estimates ([`BoundMode::ClosedForm`]). The lower factor
//! is assembled as a single sum of logarithms.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::NormKind;
use crate::semigroup::{power_set_norm, set_norm, Budget, MatrixSet, SemigroupError};
use crate::wide::WideReal;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundsError {
    #[error("the bound needs d >= 2, got d = {0}")]
    DimensionTooSmall(usize),
    #[error("digit sums for n = {n}, d = {d} overflow 128-bit integers; use the closed form")]
    DigitSumOverflow { n: u64, d: u64 },
    #[error("reference spectral radius must be nonnegative and finite, got {0}")]
    BadReference(f64),
    #[error("enumeration budget exhausted at n = {n}; upper bound {}", upper.map(|u| u.to_string()).unwrap_or_else(|| "unavailable".into()))]
    BudgetExhausted {
        n: usize,
        /// Still valid when the `‖𝒜ⁿ‖` enumeration itself finished.
        upper: Option<f64>,
        source: SemigroupError,
    },
    #[error(transparent)]
    Semigroup(#[from] SemigroupError),
}

/// Which `(σ, ν)` pair enters the lower bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum BoundMode {
    /// Exact weighted digit sums; the tighter certified bound.
    #[default]
    ExactDigits,
    /// Closed-form estimates growing like `n^{ln(d-1)/ln d}`.
    ClosedForm,
}

impl BoundMode {
    pub fn name(self) -> &'static str {
        match self {
            BoundMode::ExactDigits => "exact",
            BoundMode::ClosedForm => "closed",
        }
    }
}

impl fmt::Display for BoundMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `C_d`: `2^d − 1` for a single matrix, `d^{3d/2}` for `r > 1`.
pub fn bochi_constant(d: usize, r: usize) -> Result<f64, BoundsError> {
    if d < 2 {
        return Err(BoundsError::DimensionTooSmall(d));
    }
    Ok(if r == 1 {
        2f64.powi(d as i32) - 1.0
    } else {
        (d as f64).powf(1.5 * d as f64)
    })
}

/// `ln C_d`, without overflow for large `d`.
fn ln_bochi_constant(d: usize, r: usize) -> f64 {
    if r == 1 {
        // ln(2^d - 1) = d ln 2 + ln(1 - 2^{-d})
        d as f64 * std::f64::consts::LN_2 + (-(0.5f64).powi(d as i32)).ln_1p()
    } else {
        1.5 * d as f64 * (d as f64).ln()
    }
}

/// `n = Σ_j digits[j]·d^j`, least significant digit first, top digit nonzero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DigitDecomposition {
    pub n: u64,
    pub d: u64,
    pub digits: Vec<u64>,
}

impl DigitDecomposition {
    /// `k = ⌊log_d n⌋`.
    pub fn top_index(&self) -> usize {
        self.digits.len() - 1
    }

    pub fn reconstruct(&self) -> u128 {
        self.digits
            .iter()
            .rev()
            .fold(0u128, |acc, &digit| acc * self.d as u128 + digit as u128)
    }
}

pub fn base_d_digits(n: u64, d: u64) -> DigitDecomposition {
    assert!(n >= 1, "n must be positive");
    assert!(d >= 2, "base must be at least 2");
    let mut digits = Vec::new();
    let mut rest = n;
    while rest > 0 {
        digits.push(rest % d);
        rest /= d;
    }
    DigitDecomposition { n, d, digits }
}

/// `σ_d(n) = Σ_j n_j Σ_{i≤j} (d−1)^i` and `ν_d(n) = Σ_j n_j (d−1)^j`.
pub fn sigma_nu_exact(n: u64, d: u64) -> Result<(u128, u128), BoundsError> {
    let overflow = || BoundsError::DigitSumOverflow { n, d };
    let digits = base_d_digits(n, d);
    let mut sigma = 0u128;
    let mut nu = 0u128;
    let mut power = 1u128; // (d-1)^j
    let mut partial = 0u128; // Σ_{i≤j} (d-1)^i
    for (j, &digit) in digits.digits.iter().enumerate() {
        if j > 0 {
            power = power.checked_mul(d as u128 - 1).ok_or_else(overflow)?;
        }
        partial = partial.checked_add(power).ok_or_else(overflow)?;
        let digit = digit as u128;
        sigma = digit
            .checked_mul(partial)
            .and_then(|t| sigma.checked_add(t))
            .ok_or_else(overflow)?;
        nu = digit
            .checked_mul(power)
            .and_then(|t| nu.checked_add(t))
            .ok_or_else(overflow)?;
    }
    Ok((sigma, nu))
}

/// Closed-form upper estimates of `(σ_d(n), ν_d(n))`.
pub fn sigma_nu_closed(n: u64, d: u64) -> (f64, f64) {
    assert!(n >= 1, "n must be positive");
    assert!(d >= 2, "d must be at least 2");
    let nf = n as f64;
    if d == 2 {
        let l = nf.log2();
        (0.5 * (l + 1.0) * (l + 2.0), l + 1.0)
    } else {
        let df = d as f64;
        let growth = nf.powf((df - 1.0).ln() / df.ln());
        (
            (df - 1.0).powi(3) / (df - 2.0).powi(2) * growth,
            (df - 1.0).powi(2) / (df - 2.0) * growth,
        )
    }
}

/// Smallest `f64` not below `x`, so rounding never loosens the exponents.
fn u128_to_f64_up(x: u128) -> f64 {
    let f = x as f64;
    if f as u128 >= x || f.is_infinite() {
        f
    } else {
        f.next_up()
    }
}

/// The constants entering one lower bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundParams {
    pub d: usize,
    pub r: usize,
    pub n: usize,
    /// `d^{3d/2}` was used although `r = 1`.
    pub forced_multi_constant: bool,
    pub c_d: f64,
    pub sigma: f64,
    pub nu: f64,
    pub mode: BoundMode,
}

impl BoundParams {
    pub fn new(d: usize, r: usize, n: usize, mode: BoundMode, force_multi_constant: bool) -> Result<Self, BoundsError> {
        let forced = force_multi_constant && r == 1;
        let c_d = bochi_constant(d, if forced { 2 } else { r })?;
        let (sigma, nu) = match mode {
            BoundMode::ExactDigits => {
                let (s, v) = sigma_nu_exact(n as u64, d as u64)?;
                (u128_to_f64_up(s), u128_to_f64_up(v))
            }
            BoundMode::ClosedForm => sigma_nu_closed(n as u64, d as u64),
        };
        Ok(Self {
            d,
            r,
            n,
            forced_multi_constant: forced,
            c_d,
            sigma,
            nu,
            mode,
        })
    }

    fn ln_c_d(&self) -> f64 {
        ln_bochi_constant(self.d, if self.forced_multi_constant { 2 } else { self.r })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertifyOptions {
    pub norm: NormKind,
    pub mode: BoundMode,
    pub budget: Budget,
    /// Use `d^{3d/2}` even for a single matrix.
    pub force_multi_constant: bool,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self {
            norm: NormKind::InducedTwo,
            mode: BoundMode::ExactDigits,
            budget: Budget::default(),
            force_multi_constant: false,
        }
    }
}

impl CertifyOptions {
    pub fn new(norm: NormKind, mode: BoundMode) -> Self {
        Self {
            norm,
            mode,
            ..Self::default()
        }
    }
}

/// The norms a certified interval was computed from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormEvidence {
    /// `‖𝒜‖`.
    pub set_norm: f64,
    /// `ln ‖𝒜^d‖`.
    pub ln_power_norm_d: f64,
    /// `ln ‖𝒜ⁿ‖`.
    pub ln_power_norm_n: f64,
    /// `ln(‖𝒜‖^d / ‖𝒜^d‖)` as it enters the bound (clamped at 0).
    pub ln_ratio: f64,
    /// Maximizing word for `‖𝒜ⁿ‖`, rightmost factor first.
    pub argmax_word: Vec<usize>,
    #[serde(skip)]
    pub power_norm_d_wide: WideReal,
    #[serde(skip)]
    pub power_norm_n_wide: WideReal,
}

impl NormEvidence {
    /// `‖𝒜^d‖`, saturating at `f64::MAX` range.
    pub fn power_norm_d(&self) -> f64 {
        self.power_norm_d_wide.to_f64()
    }

    pub fn power_norm_n(&self) -> f64 {
        self.power_norm_n_wide.to_f64()
    }
}

/// `ln(‖𝒜‖^d / ‖𝒜^d‖)` with the power and quotient taken in wide arithmetic,
/// so exact cases such as `2²/4` give exactly 0.
fn ln_norm_ratio(s: f64, d: usize, power_d: WideReal) -> f64 {
    let s_wide = WideReal::from_f64(s);
    let s_d = (1..d).fold(s_wide, |acc, _| acc * s_wide);
    (s_d.mantissa() / power_d.mantissa()).ln() + (s_d.exponent() - power_d.exponent()) as f64 * std::f64::consts::LN_2
}

/// `lower ≤ ρ(𝒜) ≤ upper` for one product length `n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertifiedInterval {
    pub n: usize,
    pub lower: f64,
    pub upper: f64,
    pub norm: NormKind,
    pub mode: BoundMode,
    /// `𝒜^d = {0}`, hence `ρ(𝒜) = 0` exactly.
    pub exact_zero: bool,
    /// Set for `d = 1`, where `ρ(𝒜) = max |a|` is computed directly.
    pub exact_scalar: bool,
    /// Absent for the exact-zero and scalar cases.
    pub params: Option<BoundParams>,
    pub evidence: Option<NormEvidence>,
}

impl CertifiedInterval {
    pub fn contains(&self, rho: f64, rel_slack: f64) -> bool {
        let slack = rel_slack * rho.abs().max(self.upper);
        self.lower <= rho + slack && rho <= self.upper + slack
    }

    pub fn width_ratio(&self) -> f64 {
        self.upper / self.lower
    }
}

fn require_induced(kind: NormKind) -> Result<(), BoundsError> {
    if kind.is_submultiplicative() {
        Ok(())
    } else {
        Err(SemigroupError::NonSubmultiplicative(kind).into())
    }
}

/// Two-sided enclosure of `ρ(𝒜)` from products of length `n`.
pub fn certify(set: &MatrixSet, n: usize, opts: &CertifyOptions) -> Result<CertifiedInterval, BoundsError> {
    assert!(n >= 1, "n must be positive");
    require_induced(opts.norm)?;
    let d = set.dim();
    let base = CertifiedInterval {
        n,
        lower: 0.0,
        upper: 0.0,
        norm: opts.norm,
        mode: opts.mode,
        exact_zero: false,
        exact_scalar: false,
        params: None,
        evidence: None,
    };

    if d == 1 {
        let rho = set
            .members()
            .iter()
            .map(|m| m.get(0, 0).norm())
            .fold(0.0, f64::max);
        return Ok(CertifiedInterval {
            lower: rho,
            upper: rho,
            exact_zero: rho == 0.0,
            exact_scalar: true,
            ..base
        });
    }

    let power_d = power_set_norm(set, d, opts.norm, &opts.budget).map_err(|e| match e {
        SemigroupError::BudgetExhausted { .. } => {
            // the upper side may still be reachable on its own when n < d
            let upper = if n < d {
                power_set_norm(set, n, opts.norm, &opts.budget)
                    .ok()
                    .map(|p| p.norm.root(n as u64))
            } else {
                None
            };
            BoundsError::BudgetExhausted { n, upper, source: e }
        }
        other => other.into(),
    })?;
    if power_d.norm.is_zero() {
        return Ok(CertifiedInterval {
            exact_zero: true,
            ..base
        });
    }

    let power_n = if n == d {
        power_d.clone()
    } else {
        power_set_norm(set, n, opts.norm, &opts.budget).map_err(|e| match e {
            SemigroupError::BudgetExhausted { .. } => BoundsError::BudgetExhausted {
                n,
                upper: None,
                source: e,
            },
            other => other.into(),
        })?
    };
    let s = set_norm(set, opts.norm)?;
    let params = BoundParams::new(d, set.len(), n, opts.mode, opts.force_multi_constant)?;

    let upper = power_n.norm.root(n as u64);
    // ‖𝒜^d‖ ≤ ‖𝒜‖^d, so the ratio is ≥ 1; rounding below that is clamped away
    let ln_ratio = ln_norm_ratio(s, d, power_d.norm).max(0.0);
    let ln_shrink = (params.sigma * params.ln_c_d() + params.nu * ln_ratio) / n as f64;
    let lower = (upper.ln() - ln_shrink).exp().max(0.0).min(upper);

    Ok(CertifiedInterval {
        lower,
        upper,
        params: Some(params),
        evidence: Some(NormEvidence {
            set_norm: s,
            ln_power_norm_d: power_d.norm.ln(),
            ln_power_norm_n: power_n.norm.ln(),
            ln_ratio,
            argmax_word: power_n.argmax.map(|w| w.indices).unwrap_or_default(),
            power_norm_d_wide: power_d.norm,
            power_norm_n_wide: power_n.norm,
        }),
        ..base
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepEntry {
    pub n: usize,
    pub result: Result<CertifiedInterval, BoundsError>,
}

/// Per-`n` intervals for `n = 1..=n_max` with their running best.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundSequence {
    pub entries: Vec<SweepEntry>,
    /// Max of the certified lowers; `None` if no `n` succeeded.
    pub best_lower: Option<f64>,
    /// Min of the certified uppers (the running `inf_n ‖𝒜ⁿ‖^{1/n}`).
    pub best_upper: Option<f64>,
}

impl BoundSequence {
    pub fn intervals(&self) -> impl Iterator<Item = &CertifiedInterval> {
        self.entries.iter().filter_map(|e| e.result.as_ref().ok())
    }

    pub fn failures(&self) -> impl Iterator<Item = (usize, &BoundsError)> {
        self.entries.iter().filter_map(|e| e.result.as_ref().err().map(|err| (e.n, err)))
    }
}

/// Certifies every `n` in `1..=n_max`; failures are kept per entry.
pub fn sweep(set: &MatrixSet, n_max: usize, opts: &CertifyOptions) -> BoundSequence {
    let entries: Vec<SweepEntry> = (1..=n_max)
        .map(|n| SweepEntry {
            n,
            result: certify(set, n, opts),
        })
        .collect();
    let mut best_lower: Option<f64> = None;
    let mut best_upper: Option<f64> = None;
    for entry in &entries {
        match &entry.result {
            Ok(iv) => {
                best_lower = Some(best_lower.map_or(iv.lower, |b| b.max(iv.lower)));
                best_upper = Some(best_upper.map_or(iv.upper, |b| b.min(iv.upper)));
            }
            Err(BoundsError::BudgetExhausted { upper: Some(u), .. }) => {
                best_upper = Some(best_upper.map_or(*u, |b| b.min(*u)));
            }
            Err(_) => {}
        }
    }
    BoundSequence {
        entries,
        best_lower,
        best_upper,
    }
}

const CHECK_SLACK: f64 = 1e-9;

/// Both sides of `‖𝒜^d‖ ≤ C_d·ρ·‖𝒜‖^{d−1}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BochiReport {
    pub c_d: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// Checks the Bochi inequality against a reference spectral radius.
pub fn bochi_check(set: &MatrixSet, rho_ref: f64, opts: &CertifyOptions) -> Result<BochiReport, BoundsError> {
    if !(rho_ref >= 0.0 && rho_ref.is_finite()) {
        return Err(BoundsError::BadReference(rho_ref));
    }
    require_induced(opts.norm)?;
    let d = set.dim();
    let r = if opts.force_multi_constant { set.len().max(2) } else { set.len() };
    let c_d = bochi_constant(d, r)?;
    let lhs = power_set_norm(set, d, opts.norm, &opts.budget)?.norm;
    let s = set_norm(set, opts.norm)?;
    let rhs_ln = ln_bochi_constant(d, r) + rho_ref.ln() + (d - 1) as f64 * s.ln();
    let holds = lhs.is_zero() || lhs.ln() <= rhs_ln + CHECK_SLACK.ln_1p();
    Ok(BochiReport {
        c_d,
        lhs: lhs.to_f64(),
        rhs: rhs_ln.exp(),
        holds,
    })
}

/// One row of the `ω_{d^k}` check, in natural logs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OmegaRow {
    pub k: u32,
    pub length: usize,
    /// `ln ω_{d^k} = ln ‖𝒜^{d^k}‖ − d^k ln ρ`.
    pub ln_omega: f64,
    /// `Σ_{i≤k} (d−1)^i ln C_d + (d−1)^k ln(‖𝒜‖^d/‖𝒜^d‖)`.
    pub ln_bound: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OmegaReport {
    pub rows: Vec<OmegaRow>,
}

impl OmegaReport {
    pub fn all_hold(&self) -> bool {
        self.rows.iter().all(|r| r.holds)
    }
}

/// Verifies `ω_{d^k} ≤ C_d^{Σ_{i=0}^{k}(d−1)^i} (‖𝒜‖^d/‖𝒜^d‖)^{(d−1)^k}` for
/// `k = 0..=k_max`, with `ω_m = ‖𝒜^m‖/ρ^m` and `ρ` supplied by the caller.
pub fn omega_recursion_check(
    set: &MatrixSet,
    rho_ref: f64,
    k_max: u32,
    opts: &CertifyOptions,
) -> Result<OmegaReport, BoundsError> {
    if !(rho_ref > 0.0 && rho_ref.is_finite()) {
        return Err(BoundsError::BadReference(rho_ref));
    }
    require_induced(opts.norm)?;
    let d = set.dim();
    let r = if opts.force_multi_constant { set.len().max(2) } else { set.len() };
    bochi_constant(d, r)?;
    let ln_c = ln_bochi_constant(d, r);
    let s = set_norm(set, opts.norm)?;
    let power_d = power_set_norm(set, d, opts.norm, &opts.budget)?.norm;
    let ln_ratio = ln_norm_ratio(s, d, power_d);
    let mut rows = Vec::with_capacity(k_max as usize + 1);
    for k in 0..=k_max {
        let length = d.pow(k);
        let power = power_set_norm(set, length, opts.norm, &opts.budget)?.norm;
        let ln_omega = power.ln() - length as f64 * rho_ref.ln();
        let geometric: f64 = (0..=k).map(|i| ((d - 1) as f64).powi(i as i32)).sum();
        let ln_bound = geometric * ln_c + ((d - 1) as f64).powi(k as i32) * ln_ratio;
        // the reference ρ enters with multiplicity d^k
        let slack = CHECK_SLACK * (1.0 + length as f64 + ln_bound.abs());
        rows.push(OmegaRow {
            k,
            length,
            ln_omega,
            ln_bound,
            holds: ln_omega <= ln_bound + slack,
        });
    }
    Ok(OmegaReport { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ComplexMatrix;
    use crate::semigroup::real_set;

    fn diag21() -> MatrixSet {
        MatrixSet::singleton(ComplexMatrix::diag(&[2.0, 1.0]))
    }

    fn nil_pair() -> MatrixSet {
        real_set(2, &[&[0.0, 1.0, 0.0, 0.0], &[0.0, 2.0, 0.0, 0.0]]).unwrap()
    }

    fn inf(mode: BoundMode) -> CertifyOptions {
        CertifyOptions::new(NormKind::InducedInf, mode)
    }

    #[test]
    fn bochi_constant_cases() {
        assert_eq!(bochi_constant(2, 1).unwrap(), 3.0);
        assert_eq!(bochi_constant(2, 2).unwrap(), 8.0);
        let c = bochi_constant(3, 5).unwrap();
        assert!((c - 3f64.powf(4.5)).abs() < 1e-12 * c);
        assert!((c - 140.296_115_413_079_6).abs() < 1e-9);
        assert_eq!(bochi_constant(1, 1).unwrap_err(), BoundsError::DimensionTooSmall(1));
        for d in 2..40 {
            for r in [1, 3] {
                let c = bochi_constant(d, r).unwrap();
                assert!((ln_bochi_constant(d, r) - c.ln()).abs() < 1e-12 * c.ln());
            }
        }
    }

    #[test]
    fn digit_examples() {
        assert_eq!(base_d_digits(4, 2).digits, vec![0, 0, 1]);
        assert_eq!(base_d_digits(5, 3).digits, vec![2, 1]);
        assert_eq!(base_d_digits(1, 7).digits, vec![1]);
        assert_eq!(base_d_digits(4, 2).top_index(), 2);
    }

    #[test]
    fn exact_sigma_nu_examples() {
        assert_eq!(sigma_nu_exact(4, 2).unwrap(), (3, 1));
        assert_eq!(sigma_nu_exact(5, 3).unwrap(), (5, 4));
        assert_eq!(sigma_nu_exact(1, 2).unwrap(), (1, 1));
    }

    #[test]
    fn exact_sigma_nu_fits_for_any_u64() {
        // σ ≤ (k+1)·n and ν ≤ n, so 128 bits always suffice for 64-bit n
        for d in [2u64, 3, 17, u64::MAX] {
            let (sigma, nu) = sigma_nu_exact(u64::MAX, d).unwrap();
            assert!(nu <= u64::MAX as u128 && sigma >= nu);
        }
    }

    #[test]
    fn closed_sigma_nu_examples() {
        assert_eq!(sigma_nu_closed(1, 2), (1.0, 1.0));
        assert_eq!(sigma_nu_closed(4, 2), (6.0, 3.0));
        let (s, v) = sigma_nu_closed(5, 3);
        let g = 5f64.powf(2f64.ln() / 3f64.ln());
        assert!((s - 8.0 * g).abs() < 1e-12 && (v - 4.0 * g).abs() < 1e-12);
        assert!((s - 22.084_672_307_673_64).abs() < 1e-10 && (v - 11.042_336_153_836_82).abs() < 1e-10);
    }

    #[test]
    fn certify_diag_exact() {
        let iv = certify(&diag21(), 4, &inf(BoundMode::ExactDigits)).unwrap();
        assert_eq!(iv.upper, 2.0);
        assert!((iv.lower - 2.0 * 3f64.powf(-0.75)).abs() < 1e-12);
        assert!((iv.lower - 0.87738).abs() < 1e-5);
        let p = iv.params.unwrap();
        assert_eq!((p.c_d, p.sigma, p.nu), (3.0, 3.0, 1.0));
    }

    #[test]
    fn certify_diag_closed() {
        let iv = certify(&diag21(), 4, &inf(BoundMode::ClosedForm)).unwrap();
        assert_eq!(iv.upper, 2.0);
        assert!((iv.lower - 2.0 * 3f64.powf(-1.5)).abs() < 1e-12);
    }

    #[test]
    fn certify_nilpotent_pair_is_exact_zero() {
        for n in 1..6 {
            let iv = certify(&nil_pair(), n, &inf(BoundMode::ExactDigits)).unwrap();
            assert!(iv.exact_zero);
            assert_eq!((iv.lower, iv.upper), (0.0, 0.0));
        }
    }

    #[test]
    fn certify_scalar_case() {
        let s = real_set(1, &[&[-3.0], &[2.0]]).unwrap();
        let iv = certify(&s, 5, &CertifyOptions::default()).unwrap();
        assert!(iv.exact_scalar && !iv.exact_zero);
        assert_eq!((iv.lower, iv.upper), (3.0, 3.0));
        let z = real_set(1, &[&[0.0]]).unwrap();
        assert!(certify(&z, 1, &CertifyOptions::default()).unwrap().exact_zero);
    }

    #[test]
    fn certify_rejects_max_entry() {
        let opts = CertifyOptions::new(NormKind::MaxEntry, BoundMode::ExactDigits);
        assert!(matches!(
            certify(&diag21(), 2, &opts),
            Err(BoundsError::Semigroup(SemigroupError::NonSubmultiplicative(NormKind::MaxEntry)))
        ));
    }

    #[test]
    fn certify_budget_exhaustion_keeps_upper() {
        let s = real_set(3, &[&[1.0, 0.0, 0.0, 0.0, 0.5, 0.0, 0.0, 0.0, 0.2], &[0.3, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.1]])
            .unwrap();
        let mut opts = inf(BoundMode::ExactDigits);
        opts.budget = Budget { max_nodes: 6, prune: false };
        match certify(&s, 2, &opts) {
            Err(BoundsError::BudgetExhausted { n: 2, upper: Some(u), .. }) => assert_eq!(u, 1.0),
            other => panic!("unexpected {other:?}"),
        }
        match certify(&s, 3, &opts) {
            Err(BoundsError::BudgetExhausted { n: 3, upper: None, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn forced_multi_constant() {
        let mut opts = inf(BoundMode::ExactDigits);
        opts.force_multi_constant = true;
        let iv = certify(&diag21(), 4, &opts).unwrap();
        assert_eq!(iv.params.as_ref().unwrap().c_d, 8.0);
        assert!((iv.lower - 2.0 * 8f64.powf(-0.75)).abs() < 1e-12);
    }

    #[test]
    fn sweep_examples() {
        let seq = sweep(&diag21(), 3, &inf(BoundMode::ExactDigits));
        let uppers: Vec<f64> = seq.intervals().map(|iv| iv.upper).collect();
        assert_eq!(uppers, vec![2.0, 2.0, 2.0]);
        assert_eq!(seq.best_upper, Some(2.0));

        let id = MatrixSet::singleton(ComplexMatrix::identity(2));
        let seq = sweep(&id, 4, &inf(BoundMode::ExactDigits));
        for iv in seq.intervals() {
            assert_eq!(iv.upper, 1.0);
            let (sigma, _) = sigma_nu_exact(iv.n as u64, 2).unwrap();
            let expect = 3f64.powf(-(sigma as f64) / iv.n as f64);
            assert!((iv.lower - expect).abs() < 1e-14, "n={}", iv.n);
        }

        let zero = MatrixSet::singleton(ComplexMatrix::zeros(3));
        assert!(sweep(&zero, 5, &CertifyOptions::default()).intervals().all(|iv| iv.exact_zero));
    }

    #[test]
    fn bochi_examples() {
        let opts = inf(BoundMode::ExactDigits);
        let rep = bochi_check(&diag21(), 2.0, &opts).unwrap();
        assert!(rep.holds);
        assert_eq!(rep.lhs, 4.0);
        assert!((rep.rhs - 12.0).abs() < 1e-12);
        let id = MatrixSet::singleton(ComplexMatrix::identity(2));
        let rep = bochi_check(&id, 1.0, &opts).unwrap();
        assert!(rep.holds && (rep.rhs - 3.0).abs() < 1e-12);
        let nil = real_set(2, &[&[0.0, 1.0, 0.0, 0.0]]).unwrap();
        let rep = bochi_check(&nil, 0.0, &opts).unwrap();
        assert!(rep.holds);
        assert_eq!((rep.lhs, rep.rhs), (0.0, 0.0));
        assert!(bochi_check(&id, -1.0, &opts).is_err());
    }

    #[test]
    fn omega_examples() {
        let opts = inf(BoundMode::ExactDigits);
        let rep = omega_recursion_check(&diag21(), 2.0, 0, &opts).unwrap();
        let row = &rep.rows[0];
        assert_eq!(row.ln_omega, 0.0);
        assert!((row.ln_bound - 3f64.ln()).abs() < 1e-14);
        assert!(row.holds);

        let id = MatrixSet::singleton(ComplexMatrix::identity(2));
        let rep = omega_recursion_check(&id, 1.0, 4, &opts).unwrap();
        assert!(rep.all_hold());
        let scaled = omega_recursion_check(&id.scaled(7.0), 7.0, 4, &opts).unwrap();
        for (a, b) in rep.rows.iter().zip(&scaled.rows) {
            assert!((a.ln_omega - b.ln_omega).abs() < 1e-12);
            assert!((a.ln_bound - b.ln_bound).abs() < 1e-12);
        }
    }
}
