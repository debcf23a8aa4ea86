//! Powers of cubic order-3 hypermatrices and their linear spans.
//!
//! Two families of powers are supported:
//!
//! - **first formulation**: every ternary parenthesization of a BM product
//!   of copies of `A`. Only odd degrees occur; degree `2k+1` has
//!   `C(3k, k) / (2k+1)` distinct parenthesizations.
//! - **second formulation**: `A^[0] = Δ`, `A^[1] = A`,
//!   `A^[k+2] = Prod_{A^[k]}(A, A, A)`.
//!
//! Terms are always taken in a canonical order so that "the first linearly
//! dependent term", and therefore the Cayley-Hamilton coefficients, are
//! deterministic.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypermatrix::{delta, Hypermatrix, ShapeError};
use crate::linalg::{Echelon, Eliminate};
use crate::product::{bm_product, general_bm_product, Convention, ProductError};
use crate::scalar::{Backend, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PowerError {
    #[error("powers exist only in odd degrees, got {0}")]
    EvenDegree(usize),
    #[error(transparent)]
    Shape(#[from] ShapeError),
    #[error(transparent)]
    Product(#[from] ProductError),
    #[error("terms disagree in dims or backend (term {0})")]
    MixedTerms(usize),
    #[error("no terms given")]
    NoTerms,
    #[error("coefficient solve failed in {backend}; retry with another prime")]
    SolveFailed { backend: Backend },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Formulation {
    First,
    #[default]
    Second,
}

impl fmt::Display for Formulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Formulation::First => "first",
            Formulation::Second => "second",
        })
    }
}

impl FromStr for Formulation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "first" => Ok(Formulation::First),
            "second" => Ok(Formulation::Second),
            other => Err(format!("unknown formulation `{other}` (first|second)")),
        }
    }
}

// ---------------------------------------------------------------------------
// Fuss-Catalan counts

/// Number of distinct ternary parenthesizations with `degree` leaves,
/// computed by the convolution recurrence over the three subtrees.
pub fn fuss_catalan_count(degree: usize) -> Result<BigUint, PowerError> {
    if degree.is_multiple_of(2) {
        return Err(PowerError::EvenDegree(degree));
    }
    let mut c = vec![BigUint::zero(); degree + 1];
    c[1] = BigUint::one();
    for d in (3..=degree).step_by(2) {
        let mut total = BigUint::zero();
        for i in (1..d).step_by(2) {
            for j in (1..d - i).step_by(2) {
                let rest = d - i - j;
                if rest >= 1 && !c[rest].is_zero() {
                    total += &c[i] * &c[j] * &c[rest];
                }
            }
        }
        c[d] = total;
    }
    Ok(c.swap_remove(degree))
}

/// `C(3k, k) / (2k + 1)` for `degree = 2k + 1`.
pub fn fuss_catalan_closed_form(degree: usize) -> Result<BigUint, PowerError> {
    if degree.is_multiple_of(2) {
        return Err(PowerError::EvenDegree(degree));
    }
    let k = (degree - 1) / 2;
    let mut binom = BigUint::one();
    for i in 0..k {
        binom = binom * BigUint::from(3 * k - i) / BigUint::from(i + 1);
    }
    Ok(binom / BigUint::from(2 * k + 1))
}

/// Smallest odd degree whose cumulative parenthesization count exceeds
/// `n³`, i.e. the point where a linear dependence among first-formulation
/// powers of an `n×n×n` hypermatrix is forced by dimension.
pub fn first_formulation_degree_bound(n: usize) -> usize {
    let target = BigUint::from(n * n * n + 1);
    let mut total = BigUint::zero();
    let mut degree = 1;
    loop {
        total += fuss_catalan_count(degree).expect("odd degree");
        if total >= target {
            return degree;
        }
        degree += 2;
    }
}

// ---------------------------------------------------------------------------
// Ternary trees

/// A parenthesization of a ternary product: a leaf (`A`) or a node with
/// three children.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum TernaryTree {
    Leaf,
    Node(Arc<[TernaryTree; 3]>),
}

impl TernaryTree {
    pub fn node(a: TernaryTree, b: TernaryTree, c: TernaryTree) -> TernaryTree {
        TernaryTree::Node(Arc::new([a, b, c]))
    }

    /// Number of leaves.
    pub fn degree(&self) -> usize {
        match self {
            TernaryTree::Leaf => 1,
            TernaryTree::Node(ch) => ch.iter().map(TernaryTree::degree).sum(),
        }
    }

    /// Pre-order string with `P` for a node and `A` for a leaf.
    pub fn preorder(&self) -> String {
        let mut s = String::new();
        self.write_preorder(&mut s);
        s
    }

    fn write_preorder(&self, out: &mut String) {
        match self {
            TernaryTree::Leaf => out.push('A'),
            TernaryTree::Node(ch) => {
                out.push('P');
                for c in ch.iter() {
                    c.write_preorder(out);
                }
            }
        }
    }

    /// Evaluates the parenthesization with BM products.
    pub fn evaluate<S: Scalar>(&self, a: &Hypermatrix<S>) -> Result<Hypermatrix<S>, ProductError> {
        match self {
            TernaryTree::Leaf => Ok(a.clone()),
            TernaryTree::Node(ch) => {
                let x = ch[0].evaluate(a)?;
                let y = ch[1].evaluate(a)?;
                let z = ch[2].evaluate(a)?;
                bm_product(&[&x, &y, &z])
            }
        }
    }

    /// All trees of the given degree in canonical order.
    pub fn all_of_degree(degree: usize) -> Result<Vec<TernaryTree>, PowerError> {
        if degree.is_multiple_of(2) {
            return Err(PowerError::EvenDegree(degree));
        }
        let mut classes: Vec<Vec<TernaryTree>> = vec![Vec::new(); degree + 1];
        classes[1].push(TernaryTree::Leaf);
        for d in (3..=degree).step_by(2) {
            let mut class = Vec::new();
            for_each_split(d, |i, j, k| {
                for a in &classes[i] {
                    for b in &classes[j] {
                        for c in &classes[k] {
                            class.push(TernaryTree::node(a.clone(), b.clone(), c.clone()));
                        }
                    }
                }
            });
            class.sort();
            classes[d] = class;
        }
        Ok(classes.swap_remove(degree))
    }
}

/// Calls `f(i, j, k)` for every split of `d` into three odd positive parts.
fn for_each_split(d: usize, mut f: impl FnMut(usize, usize, usize)) {
    for i in (1..d).step_by(2) {
        for j in (1..d - i).step_by(2) {
            let k = d - i - j;
            if k >= 1 && k % 2 == 1 {
                f(i, j, k);
            }
        }
    }
}

impl Ord for TernaryTree {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.preorder().cmp(&other.preorder()))
    }
}

impl PartialOrd for TernaryTree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for TernaryTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TernaryTree::Leaf => f.write_str("A"),
            TernaryTree::Node(ch) => write!(f, "Prod({},{},{})", ch[0], ch[1], ch[2]),
        }
    }
}

impl fmt::Debug for TernaryTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

// ---------------------------------------------------------------------------
// First formulation

/// Generates first-formulation powers one degree class at a time, reusing
/// lower-degree values.
pub struct FirstPowers<S: Scalar> {
    base: Hypermatrix<S>,
    classes: Vec<Vec<(TernaryTree, Hypermatrix<S>)>>,
}

impl<S: Scalar> FirstPowers<S> {
    pub fn new(base: &Hypermatrix<S>) -> Result<Self, PowerError> {
        base.require_cubic(3)?;
        Ok(FirstPowers {
            base: base.clone(),
            classes: Vec::new(),
        })
    }

    /// Degree of the next class `next_class` will produce.
    pub fn next_degree(&self) -> usize {
        2 * self.classes.len() + 1
    }

    /// Computes and returns the next odd-degree class, canonically ordered.
    pub fn next_class(&mut self) -> Result<&[(TernaryTree, Hypermatrix<S>)], PowerError> {
        let d = self.next_degree();
        let class = if d == 1 {
            vec![(TernaryTree::Leaf, self.base.clone())]
        } else {
            let mut class = Vec::new();
            let mut failure = None;
            for_each_split(d, |i, j, k| {
                let (ci, cj, ck) = (&self.classes[i / 2], &self.classes[j / 2], &self.classes[k / 2]);
                for (ta, a) in ci {
                    for (tb, b) in cj {
                        for (tc, c) in ck {
                            match bm_product(&[a, b, c]) {
                                Ok(h) => class.push((
                                    TernaryTree::node(ta.clone(), tb.clone(), tc.clone()),
                                    h,
                                )),
                                Err(e) => failure = Some(e),
                            }
                        }
                    }
                }
            });
            if let Some(e) = failure {
                return Err(e.into());
            }
            class.sort_by(|x, y| x.0.cmp(&y.0));
            class
        };
        self.classes.push(class);
        Ok(self.classes.last().expect("just pushed"))
    }
}

/// All first-formulation powers of degree ≤ `max_degree`, in canonical order.
pub fn enumerate_powers_first<S: Scalar>(
    a: &Hypermatrix<S>,
    max_degree: usize,
) -> Result<Vec<(TernaryTree, Hypermatrix<S>)>, PowerError> {
    let mut gen = FirstPowers::new(a)?;
    let mut out = Vec::new();
    while gen.next_degree() <= max_degree {
        out.extend(gen.next_class()?.iter().cloned());
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Second formulation

/// The delta-initialised recurrence `A^[k+2] = Prod_{A^[k]}(A, A, A)`.
#[derive(Clone, Debug)]
pub struct PowerSequence<S: Scalar> {
    base: Hypermatrix<S>,
    convention: Convention,
    terms: Vec<Hypermatrix<S>>,
}

impl<S: Scalar> PowerSequence<S> {
    pub fn new(base: &Hypermatrix<S>, convention: Convention) -> Result<Self, PowerError> {
        let n = base.require_cubic(3)?;
        let d = delta(3, n, base.context().clone())?;
        Ok(PowerSequence {
            base: base.clone(),
            convention,
            terms: vec![d, base.clone()],
        })
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn extend_to(&mut self, count: usize) -> Result<(), PowerError> {
        while self.terms.len() < count {
            let k = self.terms.len();
            let a = &self.base;
            let next = general_bm_product(&[a, a, a], &self.terms[k - 2], self.convention)?;
            self.terms.push(next);
        }
        Ok(())
    }

    pub fn term(&mut self, k: usize) -> Result<&Hypermatrix<S>, PowerError> {
        self.extend_to(k + 1)?;
        Ok(&self.terms[k])
    }

    pub fn terms(&self) -> &[Hypermatrix<S>] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<Hypermatrix<S>> {
        self.terms
    }
}

/// Terms `A^[0..count]` of the second formulation.
pub fn power_sequence_second<S: Scalar>(
    a: &Hypermatrix<S>,
    count: usize,
    convention: Convention,
) -> Result<Vec<Hypermatrix<S>>, PowerError> {
    let mut seq = PowerSequence::new(a, convention)?;
    seq.extend_to(count)?;
    let mut terms = seq.into_terms();
    terms.truncate(count);
    Ok(terms)
}

/// Total degree of `A^[k]` as a polynomial in the entries of `A`.
pub fn second_term_degree(k: usize) -> usize {
    match k {
        0 => 0,
        1 => 1,
        _ => second_term_degree(k - 2) + 3,
    }
}

// ---------------------------------------------------------------------------
// Spans and coefficients

/// Dimension of the span of the row-major flattenings of `terms`.
pub fn span_dimension<S: Eliminate>(terms: &[&Hypermatrix<S>]) -> Result<usize, PowerError> {
    let first = terms.first().ok_or(PowerError::NoTerms)?;
    let mut ech = S::echelon(first.len(), first.context());
    for (i, t) in terms.iter().enumerate() {
        if t.dims() != first.dims() || t.context() != first.context() {
            return Err(PowerError::MixedTerms(i));
        }
        ech.insert(t.entries());
    }
    Ok(ech.rank())
}

/// Coefficients of the first linear dependence in a power sequence:
/// `term_r = Σ_{k<r} alphas[k] · term_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientVector<S: Scalar> {
    /// `None` for classical matrix powers.
    pub formulation: Option<Formulation>,
    /// Only meaningful for the second formulation.
    pub convention: Option<Convention>,
    pub backend: Backend,
    /// Index of the dependent term; also the number of coefficients.
    pub r: usize,
    pub alphas: Vec<S>,
    /// Human-readable name of the dependent term.
    pub dependent: String,
}

impl<S: Scalar> CoefficientVector<S> {
    pub fn alpha_strings(&self) -> Vec<String> {
        self.alphas.iter().map(ToString::to_string).collect()
    }
}

/// Result of walking a bounded prefix of a power sequence.
#[derive(Debug, Clone)]
pub struct PowerAnalysis<S: Scalar> {
    pub coefficients: CoefficientVector<S>,
    /// Span dimension of the whole bounded prefix.
    pub span: usize,
    /// Number of terms examined.
    pub terms_examined: usize,
}

/// Finds the first dependent term in `terms` and solves for its
/// coefficients. Returns `None` if the terms are independent.
fn first_dependence<S: Eliminate>(
    terms: &[&Hypermatrix<S>],
    ech: &mut S::Echelon,
    start: usize,
) -> Option<usize> {
    (start..terms.len()).find(|&i| !ech.insert(terms[i].entries()))
}

fn solve_for<S: Eliminate>(terms: &[&Hypermatrix<S>], r: usize) -> Result<Vec<S>, PowerError> {
    let ctx = terms[r].context();
    let columns: Vec<&[S]> = terms[..r].iter().map(|t| t.entries()).collect();
    S::solve_combination(&columns, terms[r].entries(), ctx).ok_or(PowerError::SolveFailed {
        backend: S::backend(ctx),
    })
}

/// Cayley-Hamilton coefficients of a cubic order-3 hypermatrix.
///
/// Terms are generated in canonical order until the first one that lies in
/// the span of its predecessors.
pub fn ch_coefficients<S: Eliminate>(
    a: &Hypermatrix<S>,
    formulation: Formulation,
    convention: Convention,
) -> Result<CoefficientVector<S>, PowerError> {
    Ok(analyze(a, formulation, convention, false)?.coefficients)
}

/// Like [`ch_coefficients`], and also reports the span dimension of the
/// bounded term prefix (`n³ + 1` terms for the second formulation, all
/// degree classes through [`first_formulation_degree_bound`] for the first).
pub fn analyze_powers<S: Eliminate>(
    a: &Hypermatrix<S>,
    formulation: Formulation,
    convention: Convention,
) -> Result<PowerAnalysis<S>, PowerError> {
    analyze(a, formulation, convention, true)
}

fn analyze<S: Eliminate>(
    a: &Hypermatrix<S>,
    formulation: Formulation,
    convention: Convention,
    full_span: bool,
) -> Result<PowerAnalysis<S>, PowerError> {
    let n = a.require_cubic(3)?;
    let volume = n * n * n;
    let mut ech = S::echelon(volume, a.context());
    let backend = a.backend();
    match formulation {
        Formulation::Second => {
            let mut seq = PowerSequence::new(a, convention)?;
            let mut dependent = None;
            let mut k = 0;
            let limit = volume + 1;
            while k < limit && (dependent.is_none() || full_span) {
                let term = seq.term(k)?;
                let independent = ech.insert(term.entries());
                if !independent && dependent.is_none() {
                    dependent = Some(k);
                }
                k += 1;
            }
            let r = dependent.expect("n³ + 1 terms in an n³-dimensional space are dependent");
            let terms: Vec<&Hypermatrix<S>> = seq.terms().iter().take(r + 1).collect();
            let alphas = solve_for(&terms, r)?;
            Ok(PowerAnalysis {
                coefficients: CoefficientVector {
                    formulation: Some(Formulation::Second),
                    convention: Some(convention),
                    backend,
                    r,
                    alphas,
                    dependent: format!("A^[{r}]"),
                },
                span: ech.rank(),
                terms_examined: k,
            })
        }
        Formulation::First => {
            let mut gen = FirstPowers::new(a)?;
            let bound = first_formulation_degree_bound(n);
            let mut all: Vec<(TernaryTree, Hypermatrix<S>)> = Vec::new();
            let mut dependent = None;
            let mut examined = 0;
            loop {
                let class = gen.next_class()?.to_vec();
                let start = all.len();
                all.extend(class);
                let refs: Vec<&Hypermatrix<S>> = all.iter().map(|(_, h)| h).collect();
                if dependent.is_none() {
                    if let Some(r) = first_dependence(&refs, &mut ech, start) {
                        dependent = Some(r);
                        examined = r + 1;
                        if full_span {
                            for h in &refs[r + 1..] {
                                ech.insert(h.entries());
                            }
                            examined = refs.len();
                        }
                    }
                } else {
                    for h in &refs[start..] {
                        ech.insert(h.entries());
                    }
                    examined = refs.len();
                }
                let done_span = !full_span || gen.next_degree() > bound;
                if dependent.is_some() && done_span {
                    break;
                }
                if gen.next_degree() > bound && dependent.is_none() {
                    // cannot happen: the bound forces a dependence
                    unreachable!("degree bound passed without a dependence");
                }
            }
            let r = dependent.expect("loop exits with a dependence");
            let refs: Vec<&Hypermatrix<S>> = all.iter().take(r + 1).map(|(_, h)| h).collect();
            let alphas = solve_for(&refs, r)?;
            Ok(PowerAnalysis {
                coefficients: CoefficientVector {
                    formulation: Some(Formulation::First),
                    convention: None,
                    backend,
                    r,
                    alphas,
                    dependent: all[r].0.to_string(),
                },
                span: ech.rank(),
                terms_examined: examined,
            })
        }
    }
}

/// Minimal linear dependence among `I, M, M², ...` for a square matrix.
pub fn matrix_ch_coefficients<S: Eliminate>(m: &Hypermatrix<S>) -> Result<CoefficientVector<S>, PowerError> {
    let n = m.require_cubic(2)?;
    let ctx = m.context().clone();
    let mut powers = vec![delta(2, n, ctx.clone())?];
    let mut ech = S::echelon(n * n, &ctx);
    let r = loop {
        let k = powers.len() - 1;
        if !ech.insert(powers[k].entries()) {
            break k;
        }
        let next = bm_product(&[&powers[k], m])?;
        powers.push(next);
    };
    let refs: Vec<&Hypermatrix<S>> = powers.iter().collect();
    let alphas = solve_for(&refs, r)?;
    Ok(CoefficientVector {
        formulation: None,
        convention: None,
        backend: m.backend(),
        r,
        alphas,
        dependent: format!("M^{r}"),
    })
}
