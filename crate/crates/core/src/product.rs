//! Bhattacharya-Mesner products.
//!
//! For `m` operands and result dims `(n_1, ..., n_m)`, operand `t`
//! (0-based) carries the shared summation index in slot `(t + 1) mod m`
//! and is sized like the result with that slot replaced by `k`:
//!
//! ```text
//! b[i1,i2,i3] = Σ_j a1[i1,j,i3] · a2[i1,i2,j] · a3[j,i2,i3]
//! ```
//!
//! The general product gives every operand its own index `j_s` and weights
//! each term with a cubic background entry `bg[j_1, ..., j_m]` (literal) or
//! `bg[j_m, ..., j_1]` (reversed). A delta background recovers the plain
//! product under both conventions.
//!
//! Terms are accumulated in ascending summation-index order.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypermatrix::Hypermatrix;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProductError {
    #[error("product arity must be at least 2, got {0}")]
    Arity(usize),
    #[error("operand {operand} has order {actual}, expected {expected}")]
    Order {
        operand: usize,
        expected: usize,
        actual: usize,
    },
    #[error("operand {operand} axis {axis} has size {actual}, expected {expected}")]
    Dimension {
        operand: usize,
        axis: usize,
        expected: usize,
        actual: usize,
    },
    #[error("operand {operand} uses a different scalar backend")]
    Backend { operand: usize },
    #[error("background must be cubic of order {order} and side {side}, got dims {dims:?}")]
    BackgroundShape {
        order: usize,
        side: usize,
        dims: Vec<usize>,
    },
    #[error("background uses a different scalar backend")]
    BackgroundBackend,
}

/// How the background hypermatrix is indexed by the summation tuple.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// `bg[j_1, ..., j_m]`
    #[default]
    Literal,
    /// `bg[j_m, ..., j_1]`
    Reversed,
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Convention::Literal => "literal",
            Convention::Reversed => "reversed",
        })
    }
}

impl FromStr for Convention {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "literal" => Ok(Convention::Literal),
            "reversed" => Ok(Convention::Reversed),
            other => Err(format!("unknown convention `{other}` (literal|reversed)")),
        }
    }
}

/// Validated shape information for an `m`-operand product.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductSpec {
    pub arity: usize,
    pub result_dims: Vec<usize>,
    /// Length of the shared summation range.
    pub inner: usize,
}

impl ProductSpec {
    /// Slot of operand `t` that carries the summation index.
    #[inline]
    pub fn slot(&self, t: usize) -> usize {
        (t + 1) % self.arity
    }

    pub fn operand_dims(&self, t: usize) -> Vec<usize> {
        let mut dims = self.result_dims.clone();
        dims[self.slot(t)] = self.inner;
        dims
    }

    pub fn infer<S: Scalar>(operands: &[&Hypermatrix<S>]) -> Result<Self, ProductError> {
        let m = operands.len();
        if m < 2 {
            return Err(ProductError::Arity(m));
        }
        for (t, op) in operands.iter().enumerate() {
            if op.order() != m {
                return Err(ProductError::Order {
                    operand: t + 1,
                    expected: m,
                    actual: op.order(),
                });
            }
            if op.context() != operands[0].context() {
                return Err(ProductError::Backend { operand: t + 1 });
            }
        }
        // the last operand fixes n_2..n_m and k; the first fixes n_1
        let last = operands[m - 1].dims();
        let mut result_dims = last.to_vec();
        result_dims[0] = operands[0].dims()[0];
        let spec = ProductSpec {
            arity: m,
            inner: last[0],
            result_dims,
        };
        for (t, op) in operands.iter().enumerate() {
            let expected = spec.operand_dims(t);
            for (axis, (&want, &got)) in expected.iter().zip(op.dims()).enumerate() {
                if want != got {
                    return Err(ProductError::Dimension {
                        operand: t + 1,
                        axis,
                        expected: want,
                        actual: got,
                    });
                }
            }
        }
        Ok(spec)
    }

    fn check_background<S: Scalar>(
        &self,
        operands: &[&Hypermatrix<S>],
        background: &Hypermatrix<S>,
    ) -> Result<(), ProductError> {
        if background.order() != self.arity || background.dims().iter().any(|&n| n != self.inner) {
            return Err(ProductError::BackgroundShape {
                order: self.arity,
                side: self.inner,
                dims: background.dims().to_vec(),
            });
        }
        if background.context() != operands[0].context() {
            return Err(ProductError::BackgroundBackend);
        }
        Ok(())
    }
}

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for a in (0..dims.len().saturating_sub(1)).rev() {
        s[a] = s[a + 1] * dims[a + 1];
    }
    s
}

/// The BM product `Prod(A1, ..., Am)`.
pub fn bm_product<S: Scalar>(operands: &[&Hypermatrix<S>]) -> Result<Hypermatrix<S>, ProductError> {
    let spec = ProductSpec::infer(operands)?;
    Ok(match spec.arity {
        3 => bm3(&spec, operands[0], operands[1], operands[2]),
        _ => bm_generic(&spec, operands),
    })
}

/// Order-3 kernel: for each depth `i3` the depth slices of the first and
/// third operand are gathered once and combined against the second.
fn bm3<S: Scalar>(
    spec: &ProductSpec,
    a1: &Hypermatrix<S>,
    a2: &Hypermatrix<S>,
    a3: &Hypermatrix<S>,
) -> Hypermatrix<S> {
    let (n1, n2, n3) = (spec.result_dims[0], spec.result_dims[1], spec.result_dims[2]);
    let k = spec.inner;
    let (e1, e2, e3) = (a1.entries(), a2.entries(), a3.entries());
    let zero = S::zero(a1.context());
    let mut out = vec![zero.clone(); n1 * n2 * n3];
    // a1: n1 × k × n3, a2: n1 × n2 × k, a3: k × n2 × n3
    let mut x: Vec<&S> = Vec::with_capacity(n1 * k);
    let mut y: Vec<&S> = Vec::with_capacity(k * n2);
    for i3 in 0..n3 {
        x.clear();
        for i1 in 0..n1 {
            for j in 0..k {
                x.push(&e1[(i1 * k + j) * n3 + i3]);
            }
        }
        y.clear();
        for j in 0..k {
            for i2 in 0..n2 {
                y.push(&e3[(j * n2 + i2) * n3 + i3]);
            }
        }
        for i1 in 0..n1 {
            let xrow = &x[i1 * k..(i1 + 1) * k];
            for i2 in 0..n2 {
                let mid = &e2[(i1 * n2 + i2) * k..(i1 * n2 + i2 + 1) * k];
                let mut acc = zero.clone();
                for j in 0..k {
                    if xrow[j].is_zero() || mid[j].is_zero() {
                        continue;
                    }
                    acc.add_product(&xrow[j].mul(&mid[j]), y[j * n2 + i2]);
                }
                out[(i1 * n2 + i2) * n3 + i3] = acc;
            }
        }
    }
    Hypermatrix::new(spec.result_dims.clone(), out, a1.context().clone())
        .expect("product dims are consistent")
}

fn bm_generic<S: Scalar>(spec: &ProductSpec, operands: &[&Hypermatrix<S>]) -> Hypermatrix<S> {
    let m = spec.arity;
    let op_strides: Vec<Vec<usize>> = operands.iter().map(|o| strides(o.dims())).collect();
    let ctx = operands[0].context().clone();
    Hypermatrix::from_fn(spec.result_dims.clone(), ctx.clone(), |idx| {
        // base offsets with the summation slot at 0
        let bases: Vec<usize> = (0..m)
            .map(|t| {
                let slot = spec.slot(t);
                idx.iter()
                    .enumerate()
                    .filter(|&(a, _)| a != slot)
                    .map(|(a, &i)| i * op_strides[t][a])
                    .sum()
            })
            .collect();
        let mut acc = S::zero(&ctx);
        for j in 0..spec.inner {
            let mut term = S::one(&ctx);
            for t in 0..m {
                let e = &operands[t].entries()[bases[t] + j * op_strides[t][spec.slot(t)]];
                if e.is_zero() {
                    term = S::zero(&ctx);
                    break;
                }
                term = term.mul(e);
            }
            if !term.is_zero() {
                acc = acc.add(&term);
            }
        }
        acc
    })
    .expect("product dims are consistent")
}

/// The general BM product `Prod_B(A1, ..., Am)` with background `B`.
pub fn general_bm_product<S: Scalar>(
    operands: &[&Hypermatrix<S>],
    background: &Hypermatrix<S>,
    convention: Convention,
) -> Result<Hypermatrix<S>, ProductError> {
    let spec = ProductSpec::infer(operands)?;
    spec.check_background(operands, background)?;
    Ok(match spec.arity {
        3 => general3(&spec, operands, background, convention),
        _ => general_generic(&spec, operands, background, convention),
    })
}

/// Order-3 kernel. With `c[i1,i2,i3] = Σ a1[i1,j2,i3] a2[i1,i2,j3] a3[j1,i2,i3] bg(j1,j2,j3)`
/// the `j3` sum only involves `(i1, i2)`, so it is contracted once per pair
/// before looping over `i3`: O(n1·n2·(k³ + n3·k²)) instead of O(n1·n2·n3·k³).
fn general3<S: Scalar>(
    spec: &ProductSpec,
    operands: &[&Hypermatrix<S>],
    background: &Hypermatrix<S>,
    convention: Convention,
) -> Hypermatrix<S> {
    let (n1, n2, n3) = (spec.result_dims[0], spec.result_dims[1], spec.result_dims[2]);
    let k = spec.inner;
    let (e1, e2, e3) = (operands[0].entries(), operands[1].entries(), operands[2].entries());
    let bg = background.entries();
    let bg_at = |j1: usize, j2: usize, j3: usize| match convention {
        Convention::Literal => &bg[(j1 * k + j2) * k + j3],
        Convention::Reversed => &bg[(j3 * k + j2) * k + j1],
    };
    let zero = S::zero(operands[0].context());
    let mut out = vec![zero.clone(); n1 * n2 * n3];
    let mut t = vec![zero.clone(); k * k];
    let mut u = vec![zero.clone(); k];
    for i1 in 0..n1 {
        for i2 in 0..n2 {
            let mid = &e2[(i1 * n2 + i2) * k..(i1 * n2 + i2 + 1) * k];
            for j1 in 0..k {
                for j2 in 0..k {
                    let mut acc = zero.clone();
                    for (j3, m) in mid.iter().enumerate() {
                        if !m.is_zero() {
                            acc.add_product(m, bg_at(j1, j2, j3));
                        }
                    }
                    t[j1 * k + j2] = acc;
                }
            }
            for i3 in 0..n3 {
                for j1 in 0..k {
                    let mut acc = zero.clone();
                    for j2 in 0..k {
                        let a = &e1[(i1 * k + j2) * n3 + i3];
                        if !a.is_zero() {
                            acc.add_product(a, &t[j1 * k + j2]);
                        }
                    }
                    u[j1] = acc;
                }
                let mut acc = zero.clone();
                for (j1, uj) in u.iter().enumerate() {
                    let a = &e3[(j1 * n2 + i2) * n3 + i3];
                    if !a.is_zero() {
                        acc.add_product(a, uj);
                    }
                }
                out[(i1 * n2 + i2) * n3 + i3] = acc;
            }
        }
    }
    Hypermatrix::new(spec.result_dims.clone(), out, operands[0].context().clone())
        .expect("product dims are consistent")
}

fn general_generic<S: Scalar>(
    spec: &ProductSpec,
    operands: &[&Hypermatrix<S>],
    background: &Hypermatrix<S>,
    convention: Convention,
) -> Hypermatrix<S> {
    let m = spec.arity;
    let k = spec.inner;
    let ctx = operands[0].context().clone();
    let cube = vec![k; m];
    let tuples = k.pow(m as u32);
    let mut op_index = vec![0; m];
    let mut bg_index = vec![0; m];
    Hypermatrix::from_fn(spec.result_dims.clone(), ctx.clone(), |idx| {
        let mut acc = S::zero(&ctx);
        let mut js = vec![0; m];
        for _ in 0..tuples {
            for (b, slot) in bg_index.iter_mut().zip(0..m) {
                *b = match convention {
                    Convention::Literal => js[slot],
                    Convention::Reversed => js[m - 1 - slot],
                };
            }
            let mut term = background.entries()[background.offset_unchecked(&bg_index)].clone();
            for (t, op) in operands.iter().enumerate() {
                if term.is_zero() {
                    break;
                }
                op_index.copy_from_slice(idx);
                let slot = spec.slot(t);
                op_index[slot] = js[slot];
                term = term.mul(&op.entries()[op.offset_unchecked(&op_index)]);
            }
            if !term.is_zero() {
                acc = acc.add(&term);
            }
            crate::hypermatrix::advance(&mut js, &cube);
        }
        acc
    })
    .expect("product dims are consistent")
}

/// Unoptimised full-loop products, kept as the comparison path for
/// benchmarks. They share no code with the kernels above beyond shape
/// inference.
pub mod reference {
    use super::*;

    pub fn bm_product<S: Scalar>(operands: &[&Hypermatrix<S>]) -> Result<Hypermatrix<S>, ProductError> {
        let spec = ProductSpec::infer(operands)?;
        Ok(bm_generic(&spec, operands))
    }

    pub fn general_bm_product<S: Scalar>(
        operands: &[&Hypermatrix<S>],
        background: &Hypermatrix<S>,
        convention: Convention,
    ) -> Result<Hypermatrix<S>, ProductError> {
        let spec = ProductSpec::infer(operands)?;
        spec.check_background(operands, background)?;
        Ok(general_generic(&spec, operands, background, convention))
    }
}
