//! Exact elimination over both scalar backends.
//!
//! Exact rows are scaled to integers and eliminated fraction-free: a
//! reduction step cross-multiplies by the two pivot cofactors and the result
//! is divided by its content, so no rational arithmetic happens during
//! elimination. Prime-field rows use ordinary Gaussian elimination with
//! unit pivots. Pivots are always the first nonzero column of a row.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::scalar::{Fp, Rational, Scalar};

/// Incrementally built row-echelon basis.
pub trait Echelon<S>: Send {
    /// Adds `row` if it is independent of the rows already present.
    /// Returns whether it was added.
    fn insert(&mut self, row: &[S]) -> bool;
    fn rank(&self) -> usize;
}

/// Scalars that support exact elimination.
pub trait Eliminate: Scalar {
    type Echelon: Echelon<Self>;

    fn echelon(width: usize, ctx: &Self::Context) -> Self::Echelon;

    /// Coefficients `x` with `Σ x[k] · columns[k] = target`, assuming the
    /// columns are linearly independent. `None` when that assumption fails
    /// or `target` is outside their span.
    fn solve_combination(columns: &[&[Self]], target: &[Self], ctx: &Self::Context) -> Option<Vec<Self>>;

    fn determinant(rows: &[Vec<Self>], ctx: &Self::Context) -> Self;
}

/// Rank of a list of equal-length rows.
pub fn rank<S: Eliminate>(rows: &[&[S]], ctx: &S::Context) -> usize {
    let width = rows.first().map_or(0, |r| r.len());
    let mut ech = S::echelon(width, ctx);
    for r in rows {
        ech.insert(r);
    }
    ech.rank()
}

/// Integer row proportional to a rational row.
pub fn integer_row(row: &[Rational]) -> Vec<BigInt> {
    let lcm = row
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    row.iter()
        .map(|x| x.numer() * (&lcm / x.denom()))
        .collect()
}

fn make_primitive(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g > BigInt::one() {
        for x in row.iter_mut() {
            *x /= &g;
        }
    }
}

/// Fraction-free echelon over the integers.
#[derive(Debug, Clone, Default)]
pub struct IntegerEchelon {
    rows: Vec<(usize, Vec<BigInt>)>,
}

impl IntegerEchelon {
    pub fn new() -> Self {
        IntegerEchelon::default()
    }

    /// Reduces `row` against the basis; returns its pivot column if nonzero.
    fn reduce(&self, row: &mut [BigInt]) -> Option<usize> {
        for (pivot, basis) in &self.rows {
            if row[*pivot].is_zero() {
                continue;
            }
            let g = row[*pivot].gcd(&basis[*pivot]);
            let row_scale = &basis[*pivot] / &g;
            let basis_scale = &row[*pivot] / &g;
            for (x, b) in row.iter_mut().zip(basis) {
                if b.is_zero() {
                    if !x.is_zero() {
                        *x *= &row_scale;
                    }
                } else {
                    *x = &*x * &row_scale - b * &basis_scale;
                }
            }
            make_primitive(row);
        }
        row.iter().position(|x| !x.is_zero())
    }

    pub fn insert_integer(&mut self, mut row: Vec<BigInt>) -> bool {
        make_primitive(&mut row);
        match self.reduce(&mut row) {
            Some(pivot) => {
                self.rows.push((pivot, row));
                true
            }
            None => false,
        }
    }
}

impl Echelon<Rational> for IntegerEchelon {
    fn insert(&mut self, row: &[Rational]) -> bool {
        self.insert_integer(integer_row(row))
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }
}

/// Gaussian elimination modulo a prime.
#[derive(Debug, Clone)]
pub struct FieldEchelon {
    rows: Vec<(usize, Vec<Fp>)>,
}

impl Echelon<Fp> for FieldEchelon {
    fn insert(&mut self, row: &[Fp]) -> bool {
        let mut row = row.to_vec();
        for (pivot, basis) in &self.rows {
            let c = row[*pivot];
            if c.is_zero() {
                continue;
            }
            for (x, b) in row.iter_mut().zip(basis).skip(*pivot) {
                *x = x.sub(&c.mul(b));
            }
        }
        match row.iter().position(|x| !x.is_zero()) {
            Some(pivot) => {
                let inv = row[pivot].inv().expect("pivot is nonzero");
                for x in row.iter_mut() {
                    *x = x.mul(&inv);
                }
                self.rows.push((pivot, row));
                true
            }
            None => false,
        }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }
}

/// Fraction-free (Bareiss) forward elimination of the first `cols`
/// columns. Returns `false` if some column has no pivot.
fn bareiss_forward(m: &mut [Vec<BigInt>], cols: usize) -> bool {
    let mut prev = BigInt::one();
    for k in 0..cols {
        let Some(p) = (k..m.len()).find(|&i| !m[i][k].is_zero()) else {
            return false;
        };
        m.swap(k, p);
        let (head, tail) = m.split_at_mut(k + 1);
        let pivot_row = &head[k];
        for row in tail.iter_mut() {
            let factor = row[k].clone();
            for j in k + 1..row.len() {
                let v = &pivot_row[k] * &row[j] - &factor * &pivot_row[j];
                row[j] = v / &prev;
            }
            row[k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    true
}

/// Determinant of a square integer matrix by Bareiss elimination.
pub fn bareiss_determinant(rows: &[Vec<BigInt>]) -> BigInt {
    let n = rows.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m = rows.to_vec();
    let mut sign = false;
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            m.swap(k, p);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[k][k] * &m[i][j] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    if sign {
        -prev
    } else {
        prev
    }
}

impl Eliminate for Rational {
    type Echelon = IntegerEchelon;

    fn echelon(_width: usize, _: &()) -> IntegerEchelon {
        IntegerEchelon::new()
    }

    fn solve_combination(columns: &[&[Rational]], target: &[Rational], _: &()) -> Option<Vec<Rational>> {
        let r = columns.len();
        let height = target.len();
        if columns.iter().any(|c| c.len() != height) {
            return None;
        }
        // augmented system, one equation per coordinate, scaled to integers
        let mut m: Vec<Vec<BigInt>> = (0..height)
            .map(|i| {
                let row: Vec<Rational> = columns
                    .iter()
                    .map(|c| c[i].clone())
                    .chain(std::iter::once(target[i].clone()))
                    .collect();
                integer_row(&row)
            })
            .collect();
        if !bareiss_forward(&mut m, r) {
            return None;
        }
        if m[r..].iter().any(|row| !row[r].is_zero()) {
            return None;
        }
        let mut x = vec![Rational::zero(); r];
        for i in (0..r).rev() {
            let mut rhs = Rational::from_integer(m[i][r].clone());
            for j in i + 1..r {
                rhs = &rhs - &(&Rational::from_integer(m[i][j].clone()) * &x[j]);
            }
            x[i] = rhs
                .checked_div(&Rational::from_integer(m[i][i].clone()))
                .ok()?;
        }
        Some(x)
    }

    fn determinant(rows: &[Vec<Rational>], _: &()) -> Rational {
        let mut scale = Rational::one();
        let ints: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|row| {
                let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                scale = &scale * &Rational::from_integer(lcm.clone());
                row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect()
            })
            .collect();
        Rational::from_integer(bareiss_determinant(&ints))
            .checked_div(&scale)
            .expect("row scales are nonzero")
    }
}

impl Eliminate for Fp {
    type Echelon = FieldEchelon;

    fn echelon(_width: usize, _: &crate::scalar::Modulus) -> FieldEchelon {
        FieldEchelon { rows: Vec::new() }
    }

    fn solve_combination(
        columns: &[&[Fp]],
        target: &[Fp],
        ctx: &crate::scalar::Modulus,
    ) -> Option<Vec<Fp>> {
        let r = columns.len();
        let height = target.len();
        if columns.iter().any(|c| c.len() != height) {
            return None;
        }
        let mut m: Vec<Vec<Fp>> = (0..height)
            .map(|i| {
                columns
                    .iter()
                    .map(|c| c[i])
                    .chain(std::iter::once(target[i]))
                    .collect()
            })
            .collect();
        for k in 0..r {
            let p = (k..height).find(|&i| !m[i][k].is_zero())?;
            m.swap(k, p);
            let inv = m[k][k].inv().ok()?;
            for x in m[k].iter_mut() {
                *x = x.mul(&inv);
            }
            let pivot_row = m[k].clone();
            for (i, row) in m.iter_mut().enumerate() {
                if i == k || row[k].is_zero() {
                    continue;
                }
                let c = row[k];
                for (x, b) in row.iter_mut().zip(&pivot_row) {
                    *x = x.sub(&c.mul(b));
                }
            }
        }
        if m[r..].iter().any(|row| !row[r].is_zero()) {
            return None;
        }
        let _ = ctx;
        Some((0..r).map(|i| m[i][r]).collect())
    }

    fn determinant(rows: &[Vec<Fp>], ctx: &crate::scalar::Modulus) -> Fp {
        let n = rows.len();
        let mut m = rows.to_vec();
        let mut det = Fp::one(ctx);
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else {
                return Fp::zero(ctx);
            };
            if p != k {
                m.swap(k, p);
                det = det.neg();
            }
            det = det.mul(&m[k][k]);
            let inv = m[k][k].inv().expect("pivot is nonzero");
            for i in k + 1..n {
                let c = m[i][k].mul(&inv);
                if c.is_zero() {
                    continue;
                }
                let (top, bottom) = m.split_at_mut(i);
                for (x, y) in bottom[0][k..].iter_mut().zip(&top[k][k..]) {
                    *x = x.sub(&c.mul(y));
                }
            }
        }
        det
    }
}

/// Plain rational Gaussian elimination, used as the slow comparison path in
/// benchmarks.
pub fn reference_rank(rows: &[Vec<Rational>]) -> usize {
    let mut m = rows.to_vec();
    let width = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..width {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank][col].clone();
        for i in rank + 1..m.len() {
            if m[i][col].is_zero() {
                continue;
            }
            let f = m[i][col].checked_div(&pivot).expect("nonzero pivot");
            let (top, bottom) = m.split_at_mut(i);
            for (x, y) in bottom[0][col..width].iter_mut().zip(&top[rank][col..width]) {
                *x = &*x - &(&f * y);
            }
        }
        rank += 1;
    }
    rank
}
