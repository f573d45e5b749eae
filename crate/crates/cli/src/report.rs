//! Report records shared by the output formats.

use jsr_core::{CertifiedInterval, MatrixSet, WideReal};
use serde::Serialize;

pub const CSV_HEADER: &str = "n,lower,upper,sigma,nu,norm,mode";

/// Everything needed to re-derive one interval by hand.
#[derive(Debug, Clone, Serialize)]
pub struct CertifyReport {
    pub d: usize,
    pub r: usize,
    pub n: usize,
    pub norm: &'static str,
    pub mode: &'static str,
    pub lower: f64,
    pub upper: f64,
    pub exact_zero: bool,
    pub exact_scalar: bool,
    pub c_d: Option<f64>,
    pub forced_multi_constant: bool,
    pub sigma: Option<f64>,
    pub nu: Option<f64>,
    pub set_norm: Option<f64>,
    /// `None` when outside the `f64` range; the log and the exact binary
    /// form `[m, e]` (value `m·2^e`, `1 ≤ m < 2`) are always present.
    pub power_norm_d: Option<f64>,
    pub ln_power_norm_d: Option<f64>,
    pub power_norm_d_binary: Option<(f64, i64)>,
    pub power_norm_n: Option<f64>,
    pub ln_power_norm_n: Option<f64>,
    pub power_norm_n_binary: Option<(f64, i64)>,
    /// `‖𝒜ⁿ‖^{1/n}`, equal to `upper`.
    pub root_power_norm_n: Option<f64>,
    pub ratio: Option<f64>,
    pub ln_ratio: Option<f64>,
    /// Leftmost factor first.
    pub argmax_word: Option<Vec<usize>>,
    pub tol: f64,
    /// Result of the entry-tolerance nilpotency test when `tol > 0`.
    pub nilpotent_within_tol: Option<bool>,
}

fn binary(w: WideReal) -> (f64, i64) {
    if w.is_zero() {
        (0.0, 0)
    } else {
        (w.mantissa() * 2.0, w.exponent() - 1)
    }
}

/// `v` if representable, otherwise the exact `m·2^e` form.
pub fn exact_value(value: Option<f64>, binary: Option<(f64, i64)>) -> String {
    match (value, binary) {
        (Some(v), _) => num(v),
        (None, Some((m, e))) => format!("{m}·2^{e}"),
        _ => String::new(),
    }
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

impl CertifyReport {
    pub fn new(set: &MatrixSet, iv: &CertifiedInterval, tol: f64, nilpotent_within_tol: Option<bool>) -> Self {
        let params = iv.params.as_ref();
        let ev = iv.evidence.as_ref();
        Self {
            d: set.dim(),
            r: set.len(),
            n: iv.n,
            norm: iv.norm.name(),
            mode: iv.mode.name(),
            lower: iv.lower,
            upper: iv.upper,
            exact_zero: iv.exact_zero,
            exact_scalar: iv.exact_scalar,
            c_d: params.map(|p| p.c_d),
            forced_multi_constant: params.is_some_and(|p| p.forced_multi_constant),
            sigma: params.map(|p| p.sigma),
            nu: params.map(|p| p.nu),
            set_norm: ev.map(|e| e.set_norm),
            power_norm_d: ev.and_then(|e| finite(e.power_norm_d())),
            ln_power_norm_d: ev.map(|e| e.ln_power_norm_d),
            power_norm_d_binary: ev.map(|e| binary(e.power_norm_d_wide)),
            power_norm_n: ev.and_then(|e| finite(e.power_norm_n())),
            ln_power_norm_n: ev.map(|e| e.ln_power_norm_n),
            power_norm_n_binary: ev.map(|e| binary(e.power_norm_n_wide)),
            root_power_norm_n: ev.map(|_| iv.upper),
            ratio: ev.and_then(|e| finite(e.ln_ratio.exp())),
            ln_ratio: ev.map(|e| e.ln_ratio),
            argmax_word: ev.map(|e| e.argmax_word.iter().rev().copied().collect()),
            tol,
            nilpotent_within_tol,
        }
    }

    pub fn csv_row(&self) -> String {
        csv_row(self.n, Some(self.lower), Some(self.upper), self.sigma, self.nu, self.norm, self.mode)
    }
}

pub fn csv_row(
    n: usize,
    lower: Option<f64>,
    upper: Option<f64>,
    sigma: Option<f64>,
    nu: Option<f64>,
    norm: &str,
    mode: &str,
) -> String {
    format!(
        "{n},{},{},{},{},{norm},{mode}",
        opt(lower),
        opt(upper),
        opt(sigma),
        opt(nu)
    )
}

pub fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

/// Shortest round-trip form; exponent notation for very large or small values.
pub fn num(x: f64) -> String {
    let a = x.abs();
    if a != 0.0 && a.is_finite() && !(1e-5..1e15).contains(&a) {
        format!("{x:e}")
    } else {
        x.to_string()
    }
}

/// A positive quantity given by its natural log, printed even past the
/// `f64` range.
pub fn from_ln(ln: f64) -> String {
    if ln == f64::NEG_INFINITY {
        return "0".into();
    }
    if ln.abs() < 700.0 {
        return num(ln.exp());
    }
    let l10 = ln / std::f64::consts::LN_10;
    let e = l10.floor();
    format!("{:.15}e{}", 10f64.powf(l10 - e), e as i64)
}

/// Factors left to right, with runs written as powers: `A0^3·A1`.
pub fn word_string(word: &[usize], labels: Option<&[String]>) -> String {
    let name = |i: usize| match labels {
        Some(l) => l[i].clone(),
        None => format!("A{i}"),
    };
    word.chunk_by(|a, b| a == b)
        .map(|run| match run.len() {
            1 => name(run[0]),
            k => format!("{}^{k}", name(run[0])),
        })
        .collect::<Vec<_>>()
        .join("·")
}
