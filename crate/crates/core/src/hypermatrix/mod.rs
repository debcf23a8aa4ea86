//! Dense hypermatrices of arbitrary order.
//!
//! Entries are stored row-major (last index fastest). All indices are
//! 0-based.

mod hmx;
mod permutation;

use thiserror::Error;

use crate::scalar::{Backend, Fp, Modulus, Rational, Scalar, ScalarError};

pub use hmx::{parse_any, HmxError};
pub use permutation::{Permutation, PermutationError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShapeError {
    #[error("order must be at least 1")]
    ZeroOrder,
    #[error("dimension {axis} is zero")]
    ZeroDimension { axis: usize },
    #[error("expected {expected} entries for dims {dims:?}, got {actual}")]
    EntryCount {
        dims: Vec<usize>,
        expected: usize,
        actual: usize,
    },
    #[error("expected a cubic hypermatrix of order {order}, got dims {dims:?}")]
    NotCubic { order: usize, dims: Vec<usize> },
    #[error("index {index:?} out of bounds for dims {dims:?}")]
    OutOfBounds { index: Vec<usize>, dims: Vec<usize> },
    #[error("permutation of size {perm} does not match side {side}")]
    PermutationSize { perm: usize, side: usize },
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Hypermatrix<S: Scalar> {
    dims: Vec<usize>,
    entries: Vec<S>,
    ctx: S::Context,
}

impl<S: Scalar> Hypermatrix<S> {
    pub fn new(dims: Vec<usize>, entries: Vec<S>, ctx: S::Context) -> Result<Self, ShapeError> {
        check_dims(&dims)?;
        let expected: usize = dims.iter().product();
        if entries.len() != expected {
            return Err(ShapeError::EntryCount {
                dims,
                expected,
                actual: entries.len(),
            });
        }
        Ok(Hypermatrix { dims, entries, ctx })
    }

    pub fn zeros(dims: Vec<usize>, ctx: S::Context) -> Result<Self, ShapeError> {
        check_dims(&dims)?;
        let len = dims.iter().product();
        let entries = vec![S::zero(&ctx); len];
        Ok(Hypermatrix { dims, entries, ctx })
    }

    /// Builds a hypermatrix entrywise from its multi-index.
    pub fn from_fn(
        dims: Vec<usize>,
        ctx: S::Context,
        mut f: impl FnMut(&[usize]) -> S,
    ) -> Result<Self, ShapeError> {
        check_dims(&dims)?;
        let len: usize = dims.iter().product();
        let mut entries = Vec::with_capacity(len);
        let mut index = vec![0; dims.len()];
        for _ in 0..len {
            entries.push(f(&index));
            advance(&mut index, &dims);
        }
        Ok(Hypermatrix { dims, entries, ctx })
    }

    /// Integer-valued convenience constructor.
    pub fn from_i64(dims: Vec<usize>, values: &[i64], ctx: S::Context) -> Result<Self, ShapeError> {
        let entries = values.iter().map(|&v| S::from_i64(v, &ctx)).collect();
        Hypermatrix::new(dims, entries, ctx)
    }

    pub fn order(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn context(&self) -> &S::Context {
        &self.ctx
    }

    pub fn backend(&self) -> Backend {
        S::backend(&self.ctx)
    }

    pub fn is_cubic(&self) -> bool {
        self.dims.windows(2).all(|w| w[0] == w[1])
    }

    /// Side length when cubic.
    pub fn side(&self) -> Option<usize> {
        self.is_cubic().then(|| self.dims[0])
    }

    pub fn require_cubic(&self, order: usize) -> Result<usize, ShapeError> {
        match self.side() {
            Some(n) if self.order() == order => Ok(n),
            _ => Err(ShapeError::NotCubic {
                order,
                dims: self.dims.clone(),
            }),
        }
    }

    /// Row-major flattening.
    pub fn entries(&self) -> &[S] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<S> {
        self.entries
    }

    pub fn offset(&self, index: &[usize]) -> Result<usize, ShapeError> {
        if index.len() != self.dims.len() || index.iter().zip(&self.dims).any(|(i, n)| i >= n) {
            return Err(ShapeError::OutOfBounds {
                index: index.to_vec(),
                dims: self.dims.clone(),
            });
        }
        Ok(self.offset_unchecked(index))
    }

    #[inline]
    pub(crate) fn offset_unchecked(&self, index: &[usize]) -> usize {
        index
            .iter()
            .zip(&self.dims)
            .fold(0, |acc, (&i, &n)| acc * n + i)
    }

    pub fn get(&self, index: &[usize]) -> Result<&S, ShapeError> {
        Ok(&self.entries[self.offset(index)?])
    }

    pub fn set(&mut self, index: &[usize], value: S) -> Result<(), ShapeError> {
        let at = self.offset(index)?;
        self.entries[at] = value;
        Ok(())
    }

    /// Iterates `(multi-index, entry)` in row-major order.
    pub fn indexed(&self) -> impl Iterator<Item = (Vec<usize>, &S)> + '_ {
        let mut index = vec![0; self.dims.len()];
        self.entries.iter().map(move |s| {
            let current = index.clone();
            advance(&mut index, &self.dims);
            (current, s)
        })
    }

    pub fn map<T: Scalar>(&self, ctx: T::Context, f: impl Fn(&S) -> T) -> Hypermatrix<T> {
        Hypermatrix {
            dims: self.dims.clone(),
            entries: self.entries.iter().map(f).collect(),
            ctx,
        }
    }

    pub fn scale(&self, c: &S) -> Hypermatrix<S> {
        self.map(self.ctx.clone(), |x| x.mul(c))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    /// Every entry is 0 or 1.
    pub fn is_binary(&self) -> bool {
        self.entries.iter().all(|x| x.is_zero() || x.is_one())
    }

    /// View with axis `axis` fixed at `value`.
    pub fn slice(&self, axis: usize, value: usize) -> Result<Slice<'_, S>, ShapeError> {
        if axis >= self.order() || value >= self.dims[axis] || self.order() < 2 {
            let mut index = vec![0; self.order()];
            if axis < index.len() {
                index[axis] = value;
            }
            return Err(ShapeError::OutOfBounds {
                index,
                dims: self.dims.clone(),
            });
        }
        Ok(Slice {
            parent: self,
            axis,
            value,
        })
    }

    /// Simultaneous relabelling of every axis of a cubic hypermatrix:
    /// `b[i1, ..., id] = a[σ(i1), ..., σ(id)]`.
    pub fn permute_indices(&self, sigma: &Permutation) -> Result<Hypermatrix<S>, ShapeError> {
        let side = self.side().ok_or_else(|| ShapeError::NotCubic {
            order: self.order(),
            dims: self.dims.clone(),
        })?;
        if sigma.len() != side {
            return Err(ShapeError::PermutationSize {
                perm: sigma.len(),
                side,
            });
        }
        let mut source = vec![0; self.order()];
        Hypermatrix::from_fn(self.dims.clone(), self.ctx.clone(), |index| {
            for (s, &i) in source.iter_mut().zip(index) {
                *s = sigma.apply(i);
            }
            self.entries[self.offset_unchecked(&source)].clone()
        })
    }

    /// `Σ coeffs[k] · terms[k]`; all terms must share dims.
    pub fn linear_combination(terms: &[&Hypermatrix<S>], coeffs: &[S]) -> Option<Hypermatrix<S>> {
        let first = terms.first()?;
        if terms.len() != coeffs.len() || terms.iter().any(|t| t.dims != first.dims) {
            return None;
        }
        let mut acc = Hypermatrix::<S>::zeros(first.dims.clone(), first.ctx.clone()).ok()?;
        for (t, c) in terms.iter().zip(coeffs) {
            for (a, x) in acc.entries.iter_mut().zip(&t.entries) {
                a.add_product(c, x);
            }
        }
        Some(acc)
    }

    pub fn sub(&self, rhs: &Hypermatrix<S>) -> Option<Hypermatrix<S>> {
        (self.dims == rhs.dims).then(|| Hypermatrix {
            dims: self.dims.clone(),
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a.sub(b))
                .collect(),
            ctx: self.ctx.clone(),
        })
    }
}

impl Hypermatrix<Rational> {
    /// Reduces every entry modulo `p`.
    pub fn reduce_mod(&self, modulus: Modulus) -> Result<Hypermatrix<Fp>, ScalarError> {
        let entries = self
            .entries
            .iter()
            .map(|x| Fp::from_rational(x, &modulus))
            .collect::<Result<_, _>>()?;
        Ok(Hypermatrix {
            dims: self.dims.clone(),
            entries,
            ctx: modulus,
        })
    }
}

/// The Kronecker delta hypermatrix: 1 where all indices agree, else 0.
pub fn delta<S: Scalar>(order: usize, side: usize, ctx: S::Context) -> Result<Hypermatrix<S>, ShapeError> {
    let one = S::one(&ctx);
    let zero = S::zero(&ctx);
    Hypermatrix::from_fn(vec![side; order], ctx, |idx| {
        if idx.iter().all(|&i| i == idx[0]) {
            one.clone()
        } else {
            zero.clone()
        }
    })
}

fn check_dims(dims: &[usize]) -> Result<(), ShapeError> {
    if dims.is_empty() {
        return Err(ShapeError::ZeroOrder);
    }
    if let Some(axis) = dims.iter().position(|&n| n == 0) {
        return Err(ShapeError::ZeroDimension { axis });
    }
    Ok(())
}

/// Row-major odometer step.
#[inline]
pub(crate) fn advance(index: &mut [usize], dims: &[usize]) {
    for axis in (0..dims.len()).rev() {
        index[axis] += 1;
        if index[axis] < dims[axis] {
            return;
        }
        index[axis] = 0;
    }
}

/// An order-(d-1) view of a hypermatrix with one axis fixed.
#[derive(Clone, Copy)]
pub struct Slice<'a, S: Scalar> {
    parent: &'a Hypermatrix<S>,
    axis: usize,
    value: usize,
}

impl<'a, S: Scalar> Slice<'a, S> {
    pub fn dims(&self) -> Vec<usize> {
        let mut dims = self.parent.dims.clone();
        dims.remove(self.axis);
        dims
    }

    pub fn axis(&self) -> usize {
        self.axis
    }

    pub fn value(&self) -> usize {
        self.value
    }

    pub fn get(&self, index: &[usize]) -> Result<&'a S, ShapeError> {
        let mut full = index.to_vec();
        if full.len() + 1 != self.parent.order() {
            return Err(ShapeError::OutOfBounds {
                index: full,
                dims: self.dims(),
            });
        }
        full.insert(self.axis, self.value);
        self.parent.get(&full)
    }

    pub fn to_hypermatrix(&self) -> Hypermatrix<S> {
        Hypermatrix::from_fn(self.dims(), self.parent.ctx.clone(), |idx| {
            self.get(idx).expect("index within slice dims").clone()
        })
        .expect("slice dims are nonzero")
    }
}

/// A hypermatrix whose backend is only known at runtime (e.g. from a file).
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum AnyHypermatrix {
    Exact(Hypermatrix<Rational>),
    ModP(Hypermatrix<Fp>),
}

impl AnyHypermatrix {
    pub fn backend(&self) -> Backend {
        match self {
            AnyHypermatrix::Exact(h) => h.backend(),
            AnyHypermatrix::ModP(h) => h.backend(),
        }
    }

    pub fn dims(&self) -> &[usize] {
        match self {
            AnyHypermatrix::Exact(h) => h.dims(),
            AnyHypermatrix::ModP(h) => h.dims(),
        }
    }

    pub fn to_hmx(&self) -> String {
        match self {
            AnyHypermatrix::Exact(h) => h.to_hmx(),
            AnyHypermatrix::ModP(h) => h.to_hmx(),
        }
    }

    /// Exact data may be reduced to any prime; prime-field data only moves to
    /// the same prime.
    pub fn into_modp(self, modulus: Modulus) -> Result<Hypermatrix<Fp>, ScalarError> {
        match self {
            AnyHypermatrix::Exact(h) => h.reduce_mod(modulus),
            AnyHypermatrix::ModP(h) if *h.context() == modulus => Ok(h),
            AnyHypermatrix::ModP(h) => Err(ScalarError::ModulusMismatch {
                left: h.context().get(),
                right: modulus.get(),
            }),
        }
    }
}

impl From<Hypermatrix<Rational>> for AnyHypermatrix {
    fn from(h: Hypermatrix<Rational>) -> Self {
        AnyHypermatrix::Exact(h)
    }
}

impl From<Hypermatrix<Fp>> for AnyHypermatrix {
    fn from(h: Hypermatrix<Fp>) -> Self {
        AnyHypermatrix::ModP(h)
    }
}

/// Exact order-3 cubic hypermatrix from its depth slices `slices[k][i][j] = a[i, j, k]`.
pub fn from_depth_slices(slices: &[&[&[i64]]]) -> Result<Hypermatrix<Rational>, ShapeError> {
    let n = slices.len();
    for (k, s) in slices.iter().enumerate() {
        if s.len() != n || s.iter().any(|row| row.len() != n) {
            return Err(ShapeError::NotCubic {
                order: 3,
                dims: vec![s.len(), s.first().map_or(0, |r| r.len()), k],
            });
        }
    }
    Hypermatrix::from_fn(vec![n, n, n], (), |idx| {
        Rational::from(slices[idx[2]][idx[0]][idx[1]])
    })
}
