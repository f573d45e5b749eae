//! Finite matrix sets and their product semigroup.
//!
//! `‖𝒜ⁿ‖ = max ‖A_{i_n}⋯A_{i_1}‖` over all `rⁿ` words is evaluated exactly by
//! depth-first enumeration with branch-and-bound pruning. Prefix products are
//! carried as `M·2^e` and renormalized by powers of two after every
//! multiplication, which is exact in binary floating point; long products
//! therefore neither overflow nor underflow and agree bit for bit with the
//! naive product whenever the latter is representable.

use thiserror::Error;

use crate::eigen::{eigen_spectral_radius, EigenError};
use crate::linalg::{matrix_norm, ComplexMatrix, LinalgError, NormKind};
use crate::wide::{frexp, WideReal};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SemigroupError {
    #[error("matrix set must have at least one member")]
    Empty,
    #[error("member {index} is {got}x{got}, expected {expected}x{expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        got: usize,
    },
    #[error("norm `{0}` is not submultiplicative and cannot be used here")]
    NonSubmultiplicative(NormKind),
    #[error(
        "enumeration budget of {budget} word extensions exhausted at length {n}{}",
        best_so_far.map(|b| format!(" (best so far {b})")).unwrap_or_default()
    )]
    BudgetExhausted {
        n: usize,
        budget: u64,
        /// Largest norm seen among completed words: a lower estimate of `‖𝒜ⁿ‖`,
        /// not the exact value.
        best_so_far: Option<WideReal>,
    },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Eigen(#[from] EigenError),
}

/// Resource limits for product enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Maximum number of word extensions (matrix multiplications).
    pub max_nodes: u64,
    /// Branch-and-bound pruning; turning it off gives plain brute force.
    pub prune: bool,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            max_nodes: 10_000_000,
            prune: true,
        }
    }
}

impl Budget {
    pub fn with_nodes(max_nodes: u64) -> Self {
        Self {
            max_nodes,
            ..Self::default()
        }
    }
}

/// A nonempty finite set of `d×d` matrices (`𝒜`, with `r` members).
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixSet {
    dim: usize,
    members: Vec<ComplexMatrix>,
}

impl MatrixSet {
    pub fn new(members: Vec<ComplexMatrix>) -> Result<Self, SemigroupError> {
        let first = members.first().ok_or(SemigroupError::Empty)?;
        let dim = first.dim();
        if let Some((index, m)) = members.iter().enumerate().find(|(_, m)| m.dim() != dim) {
            return Err(SemigroupError::DimensionMismatch {
                index,
                expected: dim,
                got: m.dim(),
            });
        }
        Ok(Self { dim, members })
    }

    pub fn singleton(a: ComplexMatrix) -> Self {
        Self {
            dim: a.dim(),
            members: vec![a],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of members, `r`.
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn members(&self) -> &[ComplexMatrix] {
        &self.members
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            dim: self.dim,
            members: self.members.iter().map(|m| m.scale_real(c)).collect(),
        }
    }
}

/// `value = matrix · 2^exponent`, with the largest real/imaginary component
/// of `matrix` in `[0.5, 1)` unless it is zero.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaledMatrix {
    pub matrix: ComplexMatrix,
    pub exponent: i64,
}

impl ScaledMatrix {
    fn normalized(matrix: ComplexMatrix, exponent: i64) -> Self {
        let peak = matrix.max_component();
        if peak == 0.0 || !peak.is_finite() {
            return Self { matrix, exponent };
        }
        let (_, e) = frexp(peak);
        if e == 0 {
            return Self { matrix, exponent };
        }
        Self {
            matrix: matrix.scale_pow2(-e as i32),
            exponent: exponent + e,
        }
    }

    pub fn norm(&self, kind: NormKind) -> Result<WideReal, LinalgError> {
        Ok(WideReal::from_f64(matrix_norm(&self.matrix, kind)?).mul_pow2(self.exponent))
    }

    /// The product as a plain matrix; entries may overflow to infinity.
    pub fn to_matrix(&self) -> ComplexMatrix {
        let f = WideReal::from_f64(1.0).mul_pow2(self.exponent).to_f64();
        self.matrix.scale_real(f)
    }
}

/// One realized product `A_{i_n}⋯A_{i_1}`; `indices[0]` is the rightmost factor.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductWord {
    pub indices: Vec<usize>,
    pub value: ScaledMatrix,
    pub norm: WideReal,
}

/// Result of an exact `‖𝒜ⁿ‖` evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerNorm {
    pub n: usize,
    pub norm: WideReal,
    /// A maximizing word; `None` only when `‖𝒜‖ = 0` short-circuits.
    pub argmax: Option<ProductWord>,
    /// Word extensions performed.
    pub nodes: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Step {
    Descend,
    Skip,
    Halt,
}

/// Depth-first walk over all words of length `1..=max_depth`, lower member
/// indices first. `visit` sees every realized prefix and decides whether to
/// extend it. Returns the number of extensions performed.
fn walk<E, F>(set: &MatrixSet, max_depth: usize, budget: &Budget, mut visit: F) -> Result<u64, WalkError<E>>
where
    F: FnMut(&[usize], &ScaledMatrix) -> Result<Step, E>,
{
    let r = set.len();
    let mut word: Vec<usize> = Vec::with_capacity(max_depth);
    let mut products: Vec<ScaledMatrix> = Vec::with_capacity(max_depth);
    let mut next: Vec<usize> = vec![0];
    let mut nodes = 0u64;
    if max_depth == 0 {
        return Ok(0);
    }
    loop {
        let depth = word.len();
        let i = next[depth];
        if i == r {
            if depth == 0 {
                return Ok(nodes);
            }
            word.pop();
            products.pop();
            next.pop();
            continue;
        }
        next[depth] += 1;
        if nodes >= budget.max_nodes {
            return Err(WalkError::Budget);
        }
        nodes += 1;
        let member = &set.members[i];
        let product = match products.last() {
            None => ScaledMatrix::normalized(member.clone(), 0),
            Some(prev) => ScaledMatrix::normalized(member.mul_unchecked(&prev.matrix), prev.exponent),
        };
        word.push(i);
        products.push(product);
        let step = visit(&word, products.last().expect("just pushed")).map_err(WalkError::Visit)?;
        match step {
            Step::Halt => return Ok(nodes),
            Step::Descend if depth + 1 < max_depth => next.push(0),
            _ => {
                word.pop();
                products.pop();
            }
        }
    }
}

enum WalkError<E> {
    Budget,
    Visit(E),
}

fn require_induced(kind: NormKind) -> Result<(), SemigroupError> {
    if kind.is_submultiplicative() {
        Ok(())
    } else {
        Err(SemigroupError::NonSubmultiplicative(kind))
    }
}

/// `‖𝒜‖ = max_i ‖A_i‖`.
pub fn set_norm(set: &MatrixSet, kind: NormKind) -> Result<f64, SemigroupError> {
    require_induced(kind)?;
    let mut best = 0.0f64;
    for m in &set.members {
        best = best.max(matrix_norm(m, kind)?);
    }
    Ok(best)
}

/// Exact `‖𝒜ⁿ‖` over all `rⁿ` products of length `n`.
///
/// A prefix with `m` factors still to go is discarded when
/// `‖P‖·‖𝒜‖^m` falls below the best completed word by more than a rounding
/// margin, so discarded subtrees cannot contain the maximizer. Ties are
/// always explored; the first maximizer in enumeration order is reported.
pub fn power_set_norm(
    set: &MatrixSet,
    n: usize,
    kind: NormKind,
    budget: &Budget,
) -> Result<PowerNorm, SemigroupError> {
    assert!(n >= 1, "product length must be positive");
    let base = set_norm(set, kind)?;
    if base == 0.0 {
        return Ok(PowerNorm {
            n,
            norm: WideReal::ZERO,
            argmax: None,
            nodes: 0,
        });
    }
    let ln_base = base.ln();
    let d = set.dim() as f64;
    let mut best: Option<ProductWord> = None;
    let mut best_ln = f64::NEG_INFINITY;

    let walked = walk(set, n, budget, |word, product| -> Result<Step, LinalgError> {
        let norm = product.norm(kind)?;
        let depth = word.len();
        if depth == n {
            if best.as_ref().is_none_or(|b| norm > b.norm) {
                best_ln = norm.ln();
                best = Some(ProductWord {
                    indices: word.to_vec(),
                    value: product.clone(),
                    norm,
                });
            }
            return Ok(Step::Skip);
        }
        if budget.prune && best.is_some() {
            let remaining = (n - depth) as f64;
            let ln_bound = norm.ln() + remaining * ln_base;
            let margin = 1e-12
                + 8.0 * f64::EPSILON * d * (remaining + 1.0)
                + 4.0 * f64::EPSILON * (ln_bound.abs() + best_ln.abs());
            if ln_bound < best_ln - margin {
                return Ok(Step::Skip);
            }
        }
        Ok(Step::Descend)
    });

    match walked {
        Ok(nodes) => {
            let argmax = best.expect("at least one full word");
            Ok(PowerNorm {
                n,
                norm: argmax.norm,
                argmax: Some(argmax),
                nodes,
            })
        }
        Err(WalkError::Budget) => Err(SemigroupError::BudgetExhausted {
            n,
            budget: budget.max_nodes,
            best_so_far: best.map(|b| b.norm),
        }),
        Err(WalkError::Visit(e)) => Err(e.into()),
    }
}

/// True iff every product of length `d` has all entry moduli `≤ tol`.
///
/// With `tol = 0` this is the exact test `𝒜^d = {0}`, equivalent to
/// `ρ(𝒜) = 0`. Prefixes that are exactly zero are not extended.
pub fn nilpotency_check(set: &MatrixSet, tol: f64, budget: &Budget) -> Result<bool, SemigroupError> {
    assert!(tol >= 0.0, "tolerance must be nonnegative");
    let d = set.dim();
    let mut nilpotent = true;
    let walked = walk(set, d, budget, |word, product| -> Result<Step, SemigroupError> {
        if product.matrix.is_zero() {
            return Ok(Step::Skip);
        }
        if word.len() < d {
            return Ok(Step::Descend);
        }
        let peak = WideReal::from_f64(product.matrix.max_modulus()).mul_pow2(product.exponent);
        if peak > WideReal::from_f64(tol) {
            nilpotent = false;
            return Ok(Step::Halt);
        }
        Ok(Step::Skip)
    });
    match walked {
        Ok(_) => Ok(nilpotent),
        Err(WalkError::Budget) => Err(SemigroupError::BudgetExhausted {
            n: d,
            budget: budget.max_nodes,
            best_so_far: None,
        }),
        Err(WalkError::Visit(e)) => Err(e),
    }
}

/// `max ρ(P)^{1/|P|}` over all products of length `1..=n_max`.
///
/// Always `≤ ρ(𝒜)`. Spectral radii come from the eigenvalue oracle, so this
/// is an independent cross-check on the certified intervals, not part of
/// them.
pub fn gsr_lower_estimate(set: &MatrixSet, n_max: usize, budget: &Budget) -> Result<f64, SemigroupError> {
    assert!(n_max >= 1, "n_max must be positive");
    let mut best = 0.0f64;
    let walked = walk(set, n_max, budget, |word, product| -> Result<Step, SemigroupError> {
        if product.matrix.is_zero() {
            return Ok(Step::Skip);
        }
        let rho = WideReal::from_f64(eigen_spectral_radius(&product.matrix)?).mul_pow2(product.exponent);
        best = best.max(rho.root(word.len() as u64));
        Ok(Step::Descend)
    });
    match walked {
        Ok(_) => Ok(best),
        Err(WalkError::Budget) => Err(SemigroupError::BudgetExhausted {
            n: n_max,
            budget: budget.max_nodes,
            best_so_far: None,
        }),
        Err(WalkError::Visit(e)) => Err(e),
    }
}

/// Convenience for building sets from real row-major data.
pub fn real_set(dim: usize, members: &[&[f64]]) -> Result<MatrixSet, SemigroupError> {
    let mats = members
        .iter()
        .map(|m| ComplexMatrix::from_real(dim, m))
        .collect::<Result<Vec<_>, _>>()?;
    MatrixSet::new(mats)
}
