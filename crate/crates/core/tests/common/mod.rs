//! Naive reference implementations used as test oracles. Written directly
//! from the defining sums, sharing no code with the library kernels.
#![allow(dead_code)]

use hyperalg_core::hypermatrix::Hypermatrix;
use hyperalg_core::scalar::{Rational, Scalar};

pub type Q = Hypermatrix<Rational>;

fn q(v: i64) -> Rational {
    Rational::from(v)
}

/// All index tuples of `dims`, last index fastest.
pub fn tuples(dims: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for &n in dims {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..n).map(move |i| {
                    let mut p = p.clone();
                    p.push(i);
                    p
                })
            })
            .collect();
    }
    out
}

fn at(h: &Q, idx: &[usize]) -> Rational {
    h.get(idx).unwrap().clone()
}

/// `Prod(A1..Am)` or, with a background, `Prod_B(A1..Am)`: operand `t`
/// (0-based) receives summation index `j_{(t+1) mod m}` in slot `(t+1) mod m`.
pub fn oracle_product(ops: &[&Q], background: Option<(&Q, bool)>) -> Q {
    let m = ops.len();
    let dims: Vec<usize> = (0..m).map(|s| ops[s].dims()[s]).collect();
    let k = ops[0].dims()[1 % m];
    let mut entries = Vec::new();
    for i in tuples(&dims) {
        let mut acc = q(0);
        let js: Vec<Vec<usize>> = match background {
            Some(_) => tuples(&vec![k; m]),
            None => (0..k).map(|j| vec![j; m]).collect(),
        };
        for j in js {
            let mut term = match background {
                Some((b, false)) => at(b, &j),
                Some((b, true)) => at(b, &j.iter().rev().copied().collect::<Vec<_>>()),
                None => q(1),
            };
            for (t, op) in ops.iter().enumerate() {
                let slot = (t + 1) % m;
                let mut idx = i.clone();
                idx[slot] = j[slot];
                term = &term * &at(op, &idx);
            }
            acc = &acc + &term;
        }
        entries.push(acc);
    }
    Q::new(dims, entries, ()).unwrap()
}

pub fn oracle_matmul(a: &Q, b: &Q) -> Q {
    let (n, k, p) = (a.dims()[0], a.dims()[1], b.dims()[1]);
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..p {
            let mut s = q(0);
            for l in 0..k {
                s = &s + &(&at(a, &[i, l]) * &at(b, &[l, j]));
            }
            out.push(s);
        }
    }
    Q::new(vec![n, p], out, ()).unwrap()
}

/// Dense boolean view of a binary cube.
pub fn bits(a: &Q) -> (usize, impl Fn(usize, usize, usize) -> u64 + '_) {
    let n = a.dims()[0];
    (n, move |i, j, k| u64::from(a.get(&[i, j, k]).unwrap().is_one()))
}

/// Quadruples `(r,g,b,w)` with `r<g<b` and all three faces present.
pub fn oracle_tetrahedra(a: &Q) -> u64 {
    let (n, x) = bits(a);
    let mut c = 0;
    for r in 0..n {
        for g in r + 1..n {
            for b in g + 1..n {
                for w in 0..n {
                    c += x(r, w, b) * x(r, g, w) * x(w, g, b);
                }
            }
        }
    }
    c
}

/// Two-tetrahedron complexes over `(r,g,b)`, written out per gluing face.
pub fn oracle_glued(a: &Q, variant: usize, r: usize, g: usize, b: usize) -> u64 {
    let (n, x) = bits(a);
    let mut c = 0;
    for w1 in 0..n {
        for w0 in 0..n {
            c += match variant {
                // shared face (r, w1, b)
                0 => x(r, w0, b) * x(r, w1, w0) * x(w0, w1, b) * x(r, g, w1) * x(w1, g, b),
                // shared face (r, g, w1)
                1 => x(r, w1, b) * x(r, w0, w1) * x(r, g, w0) * x(w0, g, w1) * x(w1, g, b),
                // shared face (w1, g, b)
                _ => x(r, w1, b) * x(r, g, w1) * x(w1, w0, b) * x(w1, g, w0) * x(w0, g, b),
            };
        }
    }
    c
}

/// Entry `(r,g,b)` of `Prod_A(A,A,A)`: three interior vertices `j0, j1, j2`
/// with the background hyperedge `(j0, j1, j2)`.
pub fn oracle_second_cubed(a: &Q, r: usize, g: usize, b: usize) -> u64 {
    let (n, x) = bits(a);
    let mut c = 0;
    for j0 in 0..n {
        for j1 in 0..n {
            for j2 in 0..n {
                c += x(r, j1, b) * x(r, g, j2) * x(j0, g, b) * x(j0, j1, j2);
            }
        }
    }
    c
}

// ---------------------------------------------------------------------------
// Polynomials with integer coefficients, ascending.

type Poly = Vec<i64>;

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_add(a: &Poly, b: &Poly, sign: i64) -> Poly {
    let mut out = vec![0; a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] += sign * y;
    }
    out
}

fn det_poly(m: &[Vec<Poly>]) -> Poly {
    if m.is_empty() {
        return vec![1];
    }
    let mut acc = vec![0];
    for col in 0..m.len() {
        let minor: Vec<Vec<Poly>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(c, _)| c != col).map(|(_, p)| p.clone()).collect())
            .collect();
        let term = poly_mul(&m[0][col], &det_poly(&minor));
        acc = poly_add(&acc, &term, if col % 2 == 0 { 1 } else { -1 });
    }
    acc
}

/// `det(xI − M)` by cofactor expansion, ascending coefficients, trimmed.
pub fn cofactor_charpoly(adj: &[Vec<i64>]) -> Vec<i64> {
    let n = adj.len();
    let m: Vec<Vec<Poly>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { vec![-adj[i][j], 1] } else { vec![-adj[i][j]] })
                .collect()
        })
        .collect();
    let mut p = det_poly(&m);
    while p.len() > 1 && *p.last().unwrap() == 0 {
        p.pop();
    }
    p
}

// ---------------------------------------------------------------------------
// Leibniz determinants and Cramer's rule over the rationals.

fn permutations(n: usize) -> Vec<(Vec<usize>, bool)> {
    if n == 0 {
        return vec![(vec![], true)];
    }
    let mut out = Vec::new();
    for (p, even) in permutations(n - 1) {
        for pos in 0..n {
            let mut v = p.clone();
            v.insert(pos, n - 1);
            // inserting at `pos` moves the new maximum past n-1-pos entries
            out.push((v, even == (n - 1 - pos).is_multiple_of(2)));
        }
    }
    out
}

pub fn leibniz_det(m: &[Vec<Rational>]) -> Rational {
    let mut acc = q(0);
    for (p, even) in permutations(m.len()) {
        let mut term = q(1);
        for (i, &j) in p.iter().enumerate() {
            term = &term * &m[i][j];
        }
        acc = if even { &acc + &term } else { &acc - &term };
    }
    acc
}

/// Solves `Σ_k x_k · columns[k] = target` for an overdetermined consistent
/// system: greedily picks rows with a nonsingular square minor, applies
/// Cramer's rule, then checks every equation.
pub fn cramer_solve(columns: &[Vec<Rational>], target: &[Rational]) -> Option<Vec<Rational>> {
    let r = columns.len();
    let rows = target.len();
    let row = |i: usize| -> Vec<Rational> { columns.iter().map(|c| c[i].clone()).collect() };
    let mut chosen: Vec<usize> = Vec::new();
    for i in 0..rows {
        if chosen.len() == r {
            break;
        }
        let mut trial = chosen.clone();
        trial.push(i);
        // rows are independent iff their Gram matrix is nonsingular
        let t: Vec<Vec<Rational>> = trial.iter().map(|&t| row(t)).collect();
        let gram: Vec<Vec<Rational>> = t
            .iter()
            .map(|x| t.iter().map(|y| x.iter().zip(y).fold(q(0), |s, (a, b)| &s + &(a * b))).collect())
            .collect();
        let independent = !leibniz_det(&gram).is_zero();
        if independent {
            chosen = trial;
        }
    }
    if chosen.len() < r {
        return None;
    }
    let base: Vec<Vec<Rational>> = chosen.iter().map(|&i| row(i)).collect();
    let d = leibniz_det(&base);
    let mut x = Vec::new();
    for k in 0..r {
        let mut mk = base.clone();
        for (pos, &i) in chosen.iter().enumerate() {
            mk[pos][k] = target[i].clone();
        }
        x.push(leibniz_det(&mk).checked_div(&d).ok()?);
    }
    for i in 0..rows {
        let mut s = q(0);
        for k in 0..r {
            s = &s + &(&x[k] * &columns[k][i]);
        }
        if s != target[i] {
            return None;
        }
    }
    Some(x)
}
