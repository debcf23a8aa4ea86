//! Directed tripartite 3-uniform hypergraphs and tetrahedral counts.
//!
//! An `m×n×p` hypermatrix `A` is the weight function of a hypergraph with
//! red vertices `R_0..R_m`, green `G_0..G_n` and blue `B_0..B_p`; hyperedge
//! `(R_i, G_j, B_k)` carries weight `a[i,j,k]`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypermatrix::{Hypermatrix, ShapeError};
use crate::power::{PowerError, PowerSequence, TernaryTree};
use crate::product::{Convention, ProductError};
use crate::scalar::{Rational, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KoenigError {
    #[error(transparent)]
    Shape(#[from] ShapeError),
    #[error(transparent)]
    Product(#[from] ProductError),
    #[error(transparent)]
    Power(#[from] PowerError),
    #[error("counting needs 0/1 weights; entry {index:?} is {value}")]
    NotBinary { index: Vec<usize>, value: String },
    #[error("index ({r},{g},{b}) out of range for side {n}")]
    IndexOutOfRange { r: usize, g: usize, b: usize, n: usize },
    #[error("{pair}: {what} counts differ ({left} vs {right})")]
    Size {
        pair: &'static str,
        what: &'static str,
        left: usize,
        right: usize,
    },
    #[error("hypergraphs use different scalar backends")]
    Backend,
    #[error("k = {k} outside 1..={max}")]
    KOutOfRange { k: usize, max: usize },
}

/// Sparse weighted tripartite hypergraph. Absent triples weigh zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KoenigHypergraph<S: Scalar> {
    red: usize,
    green: usize,
    blue: usize,
    weights: BTreeMap<(usize, usize, usize), S>,
    ctx: S::Context,
}

impl<S: Scalar> KoenigHypergraph<S> {
    pub fn from_hypermatrix(a: &Hypermatrix<S>) -> Result<Self, KoenigError> {
        if a.order() != 3 {
            return Err(ShapeError::NotCubic {
                dims: a.dims().to_vec(),
                order: 3,
            }
            .into());
        }
        let weights = a
            .indexed()
            .filter(|(_, w)| !w.is_zero())
            .map(|(i, w)| ((i[0], i[1], i[2]), w.clone()))
            .collect();
        Ok(KoenigHypergraph {
            red: a.dims()[0],
            green: a.dims()[1],
            blue: a.dims()[2],
            weights,
            ctx: a.context().clone(),
        })
    }

    pub fn to_hypermatrix(&self) -> Hypermatrix<S> {
        let mut h = Hypermatrix::zeros(vec![self.red, self.green, self.blue], self.ctx.clone())
            .expect("partition sizes are positive");
        for (&(r, g, b), w) in &self.weights {
            h.set(&[r, g, b], w.clone()).expect("stored triples are in range");
        }
        h
    }

    /// `(red, green, blue)` partition sizes.
    pub fn vertex_counts(&self) -> (usize, usize, usize) {
        (self.red, self.green, self.blue)
    }

    pub fn weight(&self, r: usize, g: usize, b: usize) -> S {
        self.weights
            .get(&(r, g, b))
            .cloned()
            .unwrap_or_else(|| S::zero(&self.ctx))
    }

    /// Hyperedges with nonzero weight, ordered by `(red, green, blue)`.
    pub fn hyperedges(&self) -> impl Iterator<Item = ((usize, usize, usize), &S)> + '_ {
        self.weights.iter().map(|(&k, w)| (k, w))
    }

    pub fn hyperedge_count(&self) -> usize {
        self.weights.len()
    }
}

fn check(pair: &'static str, what: &'static str, left: usize, right: usize) -> Result<(), KoenigError> {
    if left == right {
        Ok(())
    } else {
        Err(KoenigError::Size {
            pair,
            what,
            left,
            right,
        })
    }
}

/// Identification scheme: red vertices of `H1`,`H2` are merged by label,
/// green of `H2`,`H3`, blue of `H1`,`H3`; the remaining green of `H1`, blue
/// of `H2` and red of `H3` become white vertices and are summed out.
pub fn compose<S: Scalar>(
    h1: &KoenigHypergraph<S>,
    h2: &KoenigHypergraph<S>,
    h3: &KoenigHypergraph<S>,
) -> Result<KoenigHypergraph<S>, KoenigError> {
    if h1.ctx != h2.ctx || h1.ctx != h3.ctx {
        return Err(KoenigError::Backend);
    }
    check("H1/H2", "red", h1.red, h2.red)?;
    check("H2/H3", "green", h2.green, h3.green)?;
    check("H1/H3", "blue", h1.blue, h3.blue)?;
    check("H1/H2", "white (H1 green, H2 blue)", h1.green, h2.blue)?;
    check("H1/H3", "white (H1 green, H3 red)", h1.green, h3.red)?;

    // H2 hyperedges (r, g, w) grouped by (r, w).
    let mut by_rw: HashMap<(usize, usize), Vec<(usize, &S)>> = HashMap::new();
    for (&(r, g, w), x) in &h2.weights {
        by_rw.entry((r, w)).or_default().push((g, x));
    }
    let mut weights: BTreeMap<(usize, usize, usize), S> = BTreeMap::new();
    for (&(r, w, b), x1) in &h1.weights {
        let Some(mids) = by_rw.get(&(r, w)) else { continue };
        for &(g, x2) in mids {
            if let Some(x3) = h3.weights.get(&(w, g, b)) {
                let term = x1.mul(x2).mul(x3);
                let slot = weights.entry((r, g, b)).or_insert_with(|| S::zero(&h1.ctx));
                *slot = slot.add(&term);
            }
        }
    }
    weights.retain(|_, w| !w.is_zero());
    Ok(KoenigHypergraph {
        red: h1.red,
        green: h2.green,
        blue: h1.blue,
        weights,
        ctx: h1.ctx.clone(),
    })
}

/// The three degree-5 parenthesizations, named by which slot holds the
/// inner product. Each glues two tetrahedra along one face type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GluingVariant {
    /// `Prod(Prod(A,A,A),A,A)`, glued along `(r, w1, b)`.
    First,
    /// `Prod(A,Prod(A,A,A),A)`, glued along `(r, g, w1)`.
    Second,
    /// `Prod(A,A,Prod(A,A,A))`, glued along `(w1, g, b)`.
    Third,
}

impl GluingVariant {
    pub const ALL: [GluingVariant; 3] = [GluingVariant::First, GluingVariant::Second, GluingVariant::Third];

    pub fn tree(self) -> TernaryTree {
        let cube = TernaryTree::node(TernaryTree::Leaf, TernaryTree::Leaf, TernaryTree::Leaf);
        let a = TernaryTree::Leaf;
        match self {
            GluingVariant::First => TernaryTree::node(cube, a.clone(), a),
            GluingVariant::Second => TernaryTree::node(a.clone(), cube, a),
            GluingVariant::Third => TernaryTree::node(a.clone(), a, cube),
        }
    }

    pub fn from_tree(tree: &TernaryTree) -> Option<GluingVariant> {
        GluingVariant::ALL.into_iter().find(|v| &v.tree() == tree)
    }

    /// Labels of the shared face.
    pub fn face(self) -> &'static str {
        match self {
            GluingVariant::First => "(r,w1,b)",
            GluingVariant::Second => "(r,g,w1)",
            GluingVariant::Third => "(w1,g,b)",
        }
    }

    /// Colour the shared face is drawn in.
    pub fn face_color(self) -> &'static str {
        match self {
            GluingVariant::First => "blue",
            GluingVariant::Second => "red",
            GluingVariant::Third => "green",
        }
    }
}

impl fmt::Display for GluingVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GluingVariant::First => "first",
            GluingVariant::Second => "second",
            GluingVariant::Third => "third",
        })
    }
}

impl FromStr for GluingVariant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "first" => Ok(GluingVariant::First),
            "second" => Ok(GluingVariant::Second),
            "third" => Ok(GluingVariant::Third),
            other => Err(format!("unknown gluing variant `{other}` (first|second|third)")),
        }
    }
}

/// Checks for 0/1 weights and a cubic shape, returning an exact copy.
fn binary_cube<S: Scalar>(a: &Hypermatrix<S>) -> Result<(usize, Hypermatrix<Rational>), KoenigError> {
    let n = a.require_cubic(3)?;
    if let Some((index, value)) = a.indexed().find(|(_, x)| !x.is_zero() && !x.is_one()) {
        return Err(KoenigError::NotBinary {
            index,
            value: value.to_string(),
        });
    }
    Ok((n, a.map((), |x| Rational::from(i64::from(x.is_one())))))
}

fn count(x: &Rational) -> BigUint {
    debug_assert!(x.is_integer());
    x.numer().to_biguint().expect("products of 0/1 entries are non-negative")
}

fn check_index(n: usize, (r, g, b): (usize, usize, usize)) -> Result<(), KoenigError> {
    if r < n && g < n && b < n {
        Ok(())
    } else {
        Err(KoenigError::IndexOutOfRange { r, g, b, n })
    }
}

/// Σ over `r < g < b` of `Prod(A,A,A)[r,g,b]`: tetrahedra built from
/// hyperedges of `H(A)` whose boundary face is strictly increasing.
pub fn count_tetrahedra<S: Scalar>(a: &Hypermatrix<S>) -> Result<BigUint, KoenigError> {
    let (n, q) = binary_cube(a)?;
    let cube = crate::product::bm_product(&[&q, &q, &q])?;
    let mut total = BigInt::from(0);
    for r in 0..n {
        for g in r + 1..n {
            for b in g + 1..n {
                total += cube.get(&[r, g, b])?.numer();
            }
        }
    }
    Ok(total.to_biguint().expect("non-negative"))
}

/// Two-tetrahedron complexes glued along the variant's face, with boundary
/// triangle `(r, g, b)`.
pub fn count_glued<S: Scalar>(
    a: &Hypermatrix<S>,
    variant: GluingVariant,
    at: (usize, usize, usize),
) -> Result<BigUint, KoenigError> {
    let (n, q) = binary_cube(a)?;
    check_index(n, at)?;
    let h = variant.tree().evaluate(&q)?;
    Ok(count(h.get(&[at.0, at.1, at.2])?))
}

/// Sum of [`count_glued`] over every boundary triangle.
pub fn count_glued_total<S: Scalar>(a: &Hypermatrix<S>, variant: GluingVariant) -> Result<BigUint, KoenigError> {
    let (_, q) = binary_cube(a)?;
    let h = variant.tree().evaluate(&q)?;
    Ok(h.entries().iter().map(count).sum())
}

/// Largest `k` accepted by [`count_k_complexes`] for side `n`.
pub fn max_complex_order(n: usize) -> usize {
    n * n * n + 1
}

/// `(r,g,b)` entry of `A^[k+1]`, the `k`-th term after `A` in the
/// delta-initialised sequence (literal convention). `k = 1` is
/// `Prod(A,A,A)`.
pub fn count_k_complexes<S: Scalar>(
    a: &Hypermatrix<S>,
    k: usize,
    at: (usize, usize, usize),
) -> Result<BigUint, KoenigError> {
    let (n, q) = binary_cube(a)?;
    let max = max_complex_order(n);
    if k == 0 || k > max {
        return Err(KoenigError::KOutOfRange { k, max });
    }
    check_index(n, at)?;
    let mut seq = PowerSequence::new(&q, Convention::Literal)?;
    Ok(count(seq.term(k + 1)?.get(&[at.0, at.1, at.2])?))
}
