use std::fs;
use std::io::Write;
use std::path::Path;

use jsr_core::{
    bochi_check, certify, eigen_spectral_radius, gsr_lower_estimate, nilpotency_check, omega_recursion_check, sweep, BoundsError,
    CertifiedInterval, MatrixSet,
};
use serde::Serialize;

use crate::args::{Common, Format};
use crate::error::{is_budget, CliError};
use crate::input::InputDocument;
use crate::report::{csv_row, exact_value, from_ln, num, opt, word_string, CertifyReport, CSV_HEADER};

pub const NILPOTENT_MESSAGE: &str = "exact zero (nilpotent by d-product test)";

pub fn load(path: &Path) -> Result<InputDocument, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_owned(),
        source,
    })?;
    Ok(InputDocument::parse(&text)?)
}

fn members_phrase(r: usize) -> String {
    if r == 1 {
        "1 matrix".into()
    } else {
        format!("{r} matrices")
    }
}

/// The entry-tolerance nilpotency test, only run when asked for.
fn tolerant_nilpotency(set: &MatrixSet, iv: &CertifiedInterval, common: &Common) -> Result<Option<bool>, CliError> {
    if common.tol > 0.0 && !iv.exact_zero {
        Ok(Some(nilpotency_check(set, common.tol, &common.options().budget)?))
    } else {
        Ok(None)
    }
}

pub fn cmd_certify(path: &Path, n: usize, common: &Common, out: &mut dyn Write) -> Result<(), CliError> {
    let doc = load(path)?;
    let set = doc.to_set();
    let iv = certify(&set, n, &common.options())?;
    let report = CertifyReport::new(&set, &iv, common.tol, tolerant_nilpotency(&set, &iv, common)?);
    match common.format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&report).expect("report serializes"))?,
        Format::Csv => {
            writeln!(out, "{CSV_HEADER}")?;
            writeln!(out, "{}", report.csv_row())?;
        }
        Format::Human => write_certify_human(&report, doc.labels.as_deref(), out)?,
    }
    Ok(())
}

fn write_certify_human(rep: &CertifyReport, labels: Option<&[String]>, out: &mut dyn Write) -> Result<(), CliError> {
    writeln!(
        out,
        "{}, d = {}, n = {}, norm = {}, mode = {}",
        members_phrase(rep.r),
        rep.d,
        rep.n,
        rep.norm,
        rep.mode
    )?;
    if rep.exact_zero {
        writeln!(out, "rho = 0: {NILPOTENT_MESSAGE}")?;
        return Ok(());
    }
    if rep.exact_scalar {
        writeln!(out, "rho = {} exactly (d = 1)", num(rep.upper))?;
        return Ok(());
    }
    let row = |out: &mut dyn Write, name: &str, value: String| writeln!(out, "  {name:<20} = {value}");
    row(out, "C_d", opt(rep.c_d))?;
    if rep.forced_multi_constant {
        writeln!(out, "  (multi-matrix constant d^(3d/2) forced)")?;
    }
    row(out, "sigma_d(n)", opt(rep.sigma))?;
    row(out, "nu_d(n)", opt(rep.nu))?;
    row(out, "‖A‖", opt(rep.set_norm))?;
    row(out, "‖A^d‖", exact_value(rep.power_norm_d, rep.power_norm_d_binary))?;
    row(out, "‖A^n‖", exact_value(rep.power_norm_n, rep.power_norm_n_binary))?;
    row(out, "‖A^n‖^(1/n)", opt(rep.root_power_norm_n))?;
    row(out, "‖A‖^d / ‖A^d‖", exact_or_ln(rep.ratio, rep.ln_ratio))?;
    if let Some(word) = &rep.argmax_word {
        row(out, "argmax word", word_string(word, labels))?;
    }
    if let Some(nil) = rep.nilpotent_within_tol {
        let verdict = if nil { "yes" } else { "no" };
        writeln!(out, "  nilpotent within tol {}: {verdict} (not certified)", rep.tol)?;
    }
    writeln!(out, "{} <= rho <= {}", num(rep.lower), num(rep.upper))?;
    Ok(())
}

#[derive(Debug, Serialize)]
struct SweepRow {
    n: usize,
    lower: Option<f64>,
    upper: Option<f64>,
    sigma: Option<f64>,
    nu: Option<f64>,
    exact_zero: bool,
    error: Option<String>,
}

#[derive(Debug, Serialize)]
struct SweepReport {
    d: usize,
    r: usize,
    norm: &'static str,
    mode: &'static str,
    rows: Vec<SweepRow>,
    best_lower: Option<f64>,
    best_upper: Option<f64>,
    /// `max ρ(P)^{1/|P|}` over short products; reported, never merged into
    /// the certified bounds.
    product_estimate: Option<f64>,
    product_estimate_length: usize,
}

/// Longest product length with at most 10⁴ words, capped at `n_max`.
fn estimate_length(r: usize, n_max: usize) -> usize {
    let mut len = 1;
    while len < n_max && (r as f64).powi(len as i32 + 1) <= 1e4 {
        len += 1;
    }
    len
}

fn exact_or_ln(value: Option<f64>, ln: Option<f64>) -> String {
    match (value, ln) {
        (Some(v), _) if v > 0.0 => num(v),
        (_, Some(l)) => from_ln(l),
        _ => String::new(),
    }
}

pub fn cmd_sweep(
    path: &Path,
    n_max: usize,
    common: &Common,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), CliError> {
    let doc = load(path)?;
    let set = doc.to_set();
    let opts = common.options();
    let seq = sweep(&set, n_max, &opts);

    let mut exhausted = 0;
    let mut rows = Vec::with_capacity(seq.entries.len());
    for entry in seq.entries {
        let row = match entry.result {
            Ok(iv) => SweepRow {
                n: entry.n,
                lower: Some(iv.lower),
                upper: Some(iv.upper),
                sigma: iv.params.as_ref().map(|p| p.sigma),
                nu: iv.params.as_ref().map(|p| p.nu),
                exact_zero: iv.exact_zero,
                error: None,
            },
            Err(e) if is_budget(&e) => {
                exhausted += 1;
                let upper = match &e {
                    BoundsError::BudgetExhausted { upper, .. } => *upper,
                    _ => None,
                };
                SweepRow {
                    n: entry.n,
                    lower: None,
                    upper,
                    sigma: None,
                    nu: None,
                    exact_zero: false,
                    error: Some(e.to_string()),
                }
            }
            Err(e) => return Err(e.into()),
        };
        rows.push(row);
    }
    let product_estimate_length = estimate_length(set.len(), n_max);
    let product_estimate = if set.dim() <= jsr_core::eigen::MAX_ORACLE_DIM {
        gsr_lower_estimate(&set, product_estimate_length, &opts.budget).ok()
    } else {
        None
    };
    let report = SweepReport {
        d: set.dim(),
        r: set.len(),
        norm: opts.norm.name(),
        mode: opts.mode.name(),
        rows,
        best_lower: seq.best_lower,
        best_upper: seq.best_upper,
        product_estimate,
        product_estimate_length,
    };

    match common.format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&report).expect("report serializes"))?,
        Format::Csv => {
            writeln!(out, "{CSV_HEADER}")?;
            for row in &report.rows {
                writeln!(
                    out,
                    "{}",
                    csv_row(row.n, row.lower, row.upper, row.sigma, row.nu, report.norm, report.mode)
                )?;
            }
            // keep stdout a plain table
            writeln!(
                err,
                "best_lower={},best_upper={},product_estimate={}",
                opt(report.best_lower),
                opt(report.best_upper),
                opt(report.product_estimate)
            )?;
        }
        Format::Human => {
            writeln!(
                out,
                "{}, d = {}, norm = {}, mode = {}",
                members_phrase(report.r),
                report.d,
                report.norm,
                report.mode
            )?;
            writeln!(out, "{:>6}  {:>22}  {:>22}  {:>10}  {:>10}", "n", "lower", "upper", "sigma", "nu")?;
            for row in &report.rows {
                if row.exact_zero {
                    writeln!(out, "{:>6}  {NILPOTENT_MESSAGE}", row.n)?;
                } else if let Some(e) = &row.error {
                    writeln!(out, "{:>6}  {e}", row.n)?;
                } else {
                    writeln!(
                        out,
                        "{:>6}  {:>22}  {:>22}  {:>10}  {:>10}",
                        row.n,
                        opt(row.lower),
                        opt(row.upper),
                        opt(row.sigma),
                        opt(row.nu)
                    )?;
                }
            }
            writeln!(out, "best lower = {}", opt(report.best_lower))?;
            writeln!(out, "best upper = {}", opt(report.best_upper))?;
            if let Some(g) = report.product_estimate {
                writeln!(
                    out,
                    "product estimate = {} (max rho(P)^(1/|P|), |P| <= {}; not certified)",
                    num(g),
                    report.product_estimate_length
                )?;
            }
        }
    }
    if exhausted > 0 {
        return Err(CliError::PartialBudget(exhausted));
    }
    Ok(())
}

#[derive(Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub holds: bool,
    pub lhs: f64,
    /// Present for the two-sided enclosure checks.
    pub middle: Option<f64>,
    pub rhs: f64,
}

impl Check {
    fn line(&self) -> String {
        let verdict = if self.holds { "PASS" } else { "FAIL" };
        match self.middle {
            Some(m) => format!("{verdict}  {}: {} <= {} <= {}", self.name, num(self.lhs), num(m), num(self.rhs)),
            None => format!("{verdict}  {}: {} <= {}", self.name, num(self.lhs), num(self.rhs)),
        }
    }
}

#[derive(Debug, Serialize)]
struct VerifyReport {
    d: usize,
    norm: &'static str,
    mode: &'static str,
    rho: f64,
    checks: Vec<Check>,
    skipped: Vec<String>,
}

pub fn cmd_verify(
    path: &Path,
    n_max: usize,
    k_max: u32,
    slack: f64,
    common: &Common,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let doc = load(path)?;
    let set = doc.to_set();
    if set.len() != 1 {
        return Err(CliError::Rejected(format!(
            "verify compares against the eigenvalue oracle, which needs a single matrix; the input has r = {}",
            set.len()
        )));
    }
    let opts = common.options();
    let d = set.dim();
    let rho = eigen_spectral_radius(&set.members()[0])?;

    let mut checks = Vec::new();
    let mut skipped = Vec::new();
    for n in 1..=n_max {
        let iv = certify(&set, n, &opts)?;
        checks.push(Check {
            name: format!("enclosure n={n}"),
            holds: iv.contains(rho, slack),
            lhs: iv.lower,
            middle: Some(rho),
            rhs: iv.upper,
        });
    }
    if d == 1 {
        skipped.push("bochi and omega checks need d >= 2".to_string());
    } else {
        let bochi = bochi_check(&set, rho, &opts)?;
        checks.push(Check {
            name: format!("bochi ‖A^d‖ <= C_d·rho·‖A‖^(d-1), C_d = {}", num(bochi.c_d)),
            holds: bochi.holds,
            lhs: bochi.lhs,
            middle: None,
            rhs: bochi.rhs,
        });
        if rho > 0.0 {
            let omega = omega_recursion_check(&set, rho, k_max, &opts)?;
            for row in omega.rows {
                checks.push(Check {
                    name: format!("omega k={} (length {}, natural logs)", row.k, row.length),
                    holds: row.holds,
                    lhs: row.ln_omega,
                    middle: None,
                    rhs: row.ln_bound,
                });
            }
        } else {
            skipped.push("omega check needs rho > 0".to_string());
        }
    }

    let failed = checks.iter().filter(|c| !c.holds).count();
    let total = checks.len();
    let report = VerifyReport {
        d,
        norm: opts.norm.name(),
        mode: opts.mode.name(),
        rho,
        checks,
        skipped,
    };
    match common.format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&report).expect("report serializes"))?,
        Format::Csv => {
            writeln!(out, "check,holds,lhs,middle,rhs")?;
            for c in &report.checks {
                writeln!(out, "\"{}\",{},{},{},{}", c.name, c.holds, num(c.lhs), opt(c.middle), num(c.rhs))?;
            }
        }
        Format::Human => {
            writeln!(out, "oracle rho = {}  (d = {}, norm = {}, mode = {})", num(rho), d, report.norm, report.mode)?;
            for c in &report.checks {
                writeln!(out, "{}", c.line())?;
            }
            for s in &report.skipped {
                writeln!(out, "SKIP  {s}")?;
            }
            writeln!(out, "{} checks, {failed} failed", total)?;
        }
    }
    if failed > 0 {
        return Err(CliError::VerificationFailed { failed, total });
    }
    Ok(())
}
