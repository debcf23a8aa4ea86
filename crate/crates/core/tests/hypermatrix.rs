use hyperalg_core::fixtures;
use hyperalg_core::hypermatrix::{from_depth_slices, parse_any, AnyHypermatrix, Hypermatrix, Permutation};
use hyperalg_core::random::{random_hypermatrix, seeded};
use hyperalg_core::scalar::{Fp, Modulus, Rational};
use proptest::prelude::*;

#[test]
fn fixtures_round_trip_bit_exact() {
    for (name, text) in fixtures::ALL.iter().filter(|(n, _)| n.ends_with(".hmx")) {
        let h = parse_any(text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(&h.to_hmx(), text, "{name}");
    }
}

#[test]
fn fixtures_match_slice_tables() {
    let a1 = from_depth_slices(&[&[&[1, 1], &[-1, 1]], &[&[1, 1], &[1, 1]]]).unwrap();
    assert_eq!(fixtures::first_witness(1), a1);
    let b1 = from_depth_slices(&[&[&[-7, -7], &[1, -1]], &[&[2, 4], &[1, -2]]]).unwrap();
    assert_eq!(fixtures::second_witness(1), b1);
    let b3 = fixtures::second_witness(3);
    // bottom-left entry of the last slice
    assert_eq!(b3.get(&[3, 0, 3]).unwrap(), &Rational::from(155));
    assert_eq!(fixtures::first_witness(2).get(&[2, 1, 0]).unwrap(), &Rational::from(-79));
}

#[test]
fn permutation_action_composes_on_the_right() {
    let mut rng = seeded(41);
    for _ in 0..20 {
        let a = random_hypermatrix::<Rational, _>(&[3, 3, 3], -5, 5, (), &mut rng);
        let s = Permutation::random(3, &mut rng);
        let t = Permutation::random(3, &mut rng);
        let lhs = a.permute_indices(&s.compose(&t)).unwrap();
        let rhs = a.permute_indices(&s).unwrap().permute_indices(&t).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(a.permute_indices(&Permutation::identity(3)).unwrap(), a);
    }
}

proptest! {
    #[test]
    fn hmx_round_trip_exact(seed in any::<u64>(), d in proptest::collection::vec(1usize..4, 1..4)) {
        let mut rng = seeded(seed);
        let h = random_hypermatrix::<Rational, _>(&d, -1000, 1000, (), &mut rng);
        let scaled = h.scale(&Rational::new(1, 7).unwrap());
        for x in [h, scaled] {
            let text = x.to_hmx();
            prop_assert_eq!(parse_any(&text).unwrap(), AnyHypermatrix::Exact(x));
        }
    }

    #[test]
    fn hmx_round_trip_modular(seed in any::<u64>(), p in prop::sample::select(vec![2u64, 3, 1_000_003, 4_611_686_018_427_387_847])) {
        let mut rng = seeded(seed);
        let m = Modulus::new(p).unwrap();
        let h: Hypermatrix<Fp> = random_hypermatrix(&[2, 3], i64::MIN / 2, i64::MAX / 2, m, &mut rng);
        prop_assert_eq!(parse_any(&h.to_hmx()).unwrap(), AnyHypermatrix::ModP(h));
    }
}
