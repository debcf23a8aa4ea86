mod common;

use common::{oracle_matmul, oracle_product, tuples, Q};
use hyperalg_core::hypermatrix::delta;
use hyperalg_core::product::{bm_product, general_bm_product, reference, Convention};
use hyperalg_core::random::{random_hypermatrix, seeded};
use hyperalg_core::scalar::{Fp, Modulus, Rational};
use proptest::prelude::*;
use rand::Rng;

/// Operand shapes for an `m`-ary product with result dims `n` and inner `k`.
fn operand_dims(n: &[usize], k: usize) -> Vec<Vec<usize>> {
    let m = n.len();
    (0..m)
        .map(|t| {
            let mut d = n.to_vec();
            d[(t + 1) % m] = k;
            d
        })
        .collect()
}

fn random_operands(rng: &mut impl Rng, m: usize, max_side: usize) -> (Vec<Q>, usize) {
    let n: Vec<usize> = (0..m).map(|_| rng.gen_range(1..=max_side)).collect();
    let k = rng.gen_range(1..=max_side);
    let ops = operand_dims(&n, k)
        .iter()
        .map(|d| random_hypermatrix::<Rational, _>(d, -5, 5, (), rng))
        .collect();
    (ops, k)
}

#[test]
fn delta_background_reduces_to_plain_product() {
    let mut rng = seeded(4);
    for case in 0..200 {
        let m = 2 + case % 2;
        let (ops, k) = random_operands(&mut rng, m, 4);
        let refs: Vec<&Q> = ops.iter().collect();
        let d = delta(m, k, ()).unwrap();
        let plain = bm_product(&refs).unwrap();
        for conv in [Convention::Literal, Convention::Reversed] {
            assert_eq!(general_bm_product(&refs, &d, conv).unwrap(), plain, "case {case}");
        }
        if m == 2 {
            assert_eq!(plain, oracle_matmul(&ops[0], &ops[1]), "case {case}");
        }
    }
}

#[test]
fn exhaustive_binary_cubes_match_oracle() {
    for mask in 0u32..256 {
        let a = Q::from_fn(vec![2, 2, 2], (), |i| Rational::from(i64::from(mask >> (i[0] * 4 + i[1] * 2 + i[2]) & 1))).unwrap();
        let ops = [&a, &a, &a];
        assert_eq!(bm_product(&ops).unwrap(), oracle_product(&ops, None), "mask {mask}");
        for (conv, rev) in [(Convention::Literal, false), (Convention::Reversed, true)] {
            assert_eq!(
                general_bm_product(&ops, &a, conv).unwrap(),
                oracle_product(&ops, Some((&a, rev))),
                "mask {mask} {conv}"
            );
        }
    }
}

#[test]
fn random_cubes_match_oracle() {
    let mut rng = seeded(5);
    for case in 0..50 {
        let [a, b, c, bg] = [0; 4].map(|_| random_hypermatrix::<Rational, _>(&[4, 4, 4], -9, 9, (), &mut rng));
        let ops = [&a, &b, &c];
        assert_eq!(bm_product(&ops).unwrap(), oracle_product(&ops, None), "case {case}");
        for (conv, rev) in [(Convention::Literal, false), (Convention::Reversed, true)] {
            let fast = general_bm_product(&ops, &bg, conv).unwrap();
            assert_eq!(fast, oracle_product(&ops, Some((&bg, rev))), "case {case}");
            assert_eq!(fast, reference::general_bm_product(&ops, &bg, conv).unwrap());
        }
    }
}

#[test]
fn higher_orders_match_oracle() {
    let mut rng = seeded(6);
    for case in 0..20 {
        let (ops, k) = random_operands(&mut rng, 4, 2);
        let refs: Vec<&Q> = ops.iter().collect();
        assert_eq!(bm_product(&refs).unwrap(), oracle_product(&refs, None), "case {case}");
        let bg = random_hypermatrix::<Rational, _>(&[k; 4], -3, 3, (), &mut rng);
        for (conv, rev) in [(Convention::Literal, false), (Convention::Reversed, true)] {
            assert_eq!(
                general_bm_product(&refs, &bg, conv).unwrap(),
                oracle_product(&refs, Some((&bg, rev))),
                "case {case}"
            );
        }
    }
}

#[test]
fn matrix_conventions() {
    // Literal contracts the background as M·Bᵀ·N, reversed as M·B·N.
    let mut rng = seeded(7);
    for _ in 0..20 {
        let [m, b, n] = [0; 3].map(|_| random_hypermatrix::<Rational, _>(&[3, 3], -4, 4, (), &mut rng));
        let bt = Q::from_fn(vec![3, 3], (), |i| b.get(&[i[1], i[0]]).unwrap().clone()).unwrap();
        let lit = general_bm_product(&[&m, &n], &b, Convention::Literal).unwrap();
        let rev = general_bm_product(&[&m, &n], &b, Convention::Reversed).unwrap();
        assert_eq!(lit, oracle_matmul(&oracle_matmul(&m, &bt), &n));
        assert_eq!(rev, oracle_matmul(&oracle_matmul(&m, &b), &n));
    }
}

#[test]
fn modular_products_commute_with_reduction() {
    let p = Modulus::new(1_000_003).unwrap();
    let mut rng = seeded(8);
    for _ in 0..20 {
        let [a, b, c] = [0; 3].map(|_| random_hypermatrix::<Rational, _>(&[3, 3, 3], -50, 50, (), &mut rng));
        let exact = bm_product(&[&a, &b, &c]).unwrap().reduce_mod(p).unwrap();
        let [ap, bp, cp] = [&a, &b, &c].map(|h| h.reduce_mod(p).unwrap());
        let modular: hyperalg_core::hypermatrix::Hypermatrix<Fp> = bm_product(&[&ap, &bp, &cp]).unwrap();
        assert_eq!(exact, modular);
    }
}

proptest! {
    #[test]
    fn product_is_multilinear(seed in any::<u64>(), c in -6i64..6) {
        let mut rng = seeded(seed);
        let (ops, _) = random_operands(&mut rng, 3, 3);
        let scaled = ops[1].scale(&Rational::from(c));
        let lhs = bm_product(&[&ops[0], &scaled, &ops[2]]).unwrap();
        let rhs = bm_product(&[&ops[0], &ops[1], &ops[2]]).unwrap().scale(&Rational::from(c));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn product_matches_oracle(seed in any::<u64>(), m in 2usize..=3) {
        let mut rng = seeded(seed);
        let (ops, _) = random_operands(&mut rng, m, 3);
        let refs: Vec<&Q> = ops.iter().collect();
        prop_assert_eq!(bm_product(&refs).unwrap(), oracle_product(&refs, None));
    }

    #[test]
    fn result_has_declared_shape(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let (ops, _) = random_operands(&mut rng, 3, 4);
        let refs: Vec<&Q> = ops.iter().collect();
        let out = bm_product(&refs).unwrap();
        let expect: Vec<usize> = (0..3).map(|s| ops[s].dims()[s]).collect();
        prop_assert_eq!(out.dims(), &expect[..]);
        prop_assert_eq!(tuples(out.dims()).len(), out.len());
    }
}
