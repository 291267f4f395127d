use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use dqmod::diffop::{Ambient, Cochain};
use dqmod::hochschild::{d_hoch, gerstenhaber};
use dqmod::ideal::{BuchbergerLimits, Ideal};
use dqmod::parse::parse_poly;
use dqmod::poisson::{schouten_jacobi, Bivector};
use dqmod::poly::{Poly, Rat};
use dqmod::quantize::moyal;

fn poly(n: usize, deg: u32) -> impl Strategy<Value = Poly> {
    prop::collection::vec(
        (prop::collection::vec(0..=deg, n), -5i64..=5, 1i64..=3),
        0..5,
    )
    .prop_map(move |terms| {
        let mut p = Poly::zero(n);
        for (e, a, b) in terms {
            p = &p + &Poly::monomial(n, e, Rat::new(a.into(), b.into()));
        }
        p
    })
}

fn names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{}", i)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ring_axioms(a in poly(3, 2), b in poly(3, 2), c in poly(3, 2)) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
    }

    #[test]
    fn format_parse_round_trip(a in poly(3, 3)) {
        let text = a.fmt_with(&names(3));
        prop_assert_eq!(parse_poly(&text, &names(3)).unwrap(), a);
    }

    #[test]
    fn normal_form_is_idempotent_and_kills_the_ideal(a in poly(3, 2), g in poly(3, 1), h in poly(3, 2)) {
        let x = Poly::var(3, 0);
        let y = Poly::var(3, 1);
        let gen = &(&x * &x) - &(&y * &g);
        let ideal = Ideal::new(3, vec![gen.clone(), y.clone()], BuchbergerLimits::default()).unwrap();
        let nf = ideal.normal_form(&a).unwrap();
        prop_assert_eq!(ideal.normal_form(&nf).unwrap(), nf.clone());
        let shifted = &a + &(&h * &gen);
        prop_assert_eq!(ideal.normal_form(&shifted).unwrap(), nf);
    }

    #[test]
    fn moyal_is_associative_to_second_order(
        a in poly(2, 3), b in poly(2, 3), c in poly(2, 3), k in -3i64..=3,
    ) {
        let mut p = Bivector::zero(2);
        p.set(0, 1, Poly::constant(2, Rat::from_integer(k.into()))).unwrap();
        let s = moyal(&p).unwrap();
        let star = |x: &Poly, y: &Poly| -> Vec<Poly> {
            vec![x * y, s.apply(1, x, y).unwrap(), s.apply(2, x, y).unwrap()]
        };
        let left = star(&a, &b);
        let right = star(&b, &c);
        for n in 0..=2 {
            let mut l = Poly::zero(2);
            let mut r = Poly::zero(2);
            for i in 0..=n {
                l = &l + &star(&left[i], &c)[n - i];
                r = &r + &star(&a, &right[i])[n - i];
            }
            prop_assert_eq!(l, r, "order {}", n);
        }
    }

    #[test]
    fn constant_bivectors_satisfy_jacobi(entries in prop::collection::vec(-3i64..=3, 6)) {
        let mut p = Bivector::zero(4);
        let mut it = entries.into_iter();
        for i in 0..4 {
            for j in i + 1..4 {
                let c = Rat::from_integer(it.next().unwrap().into());
                p.set(i, j, Poly::constant(4, c)).unwrap();
            }
        }
        prop_assert!(schouten_jacobi(&p).holds);
    }

    #[test]
    fn hochschild_differential_squares_to_zero(seed in any::<u64>(), arity in 0usize..3) {
        let amb = Ambient::new(3, &[2], 2);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = Cochain::random(&amb, arity, 2, 2, 3, &mut rng);
        prop_assert!(d_hoch(&d_hoch(&c).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn gerstenhaber_is_graded_antisymmetric(seed in any::<u64>(), i in 0usize..3, j in 0usize..3) {
        let amb = Ambient::new(2, &[1], 1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = Cochain::random(&amb, i, 2, 1, 2, &mut rng);
        let b = Cochain::random(&amb, j, 2, 1, 2, &mut rng);
        let ab = gerstenhaber(&a, &b).unwrap();
        let ba = gerstenhaber(&b, &a).unwrap();
        if (i * j) % 2 == 0 {
            prop_assert_eq!(ab, ba.neg());
        } else {
            prop_assert_eq!(ab, ba);
        }
    }

    #[test]
    fn d_hoch_is_a_derivation_of_the_bracket(seed in any::<u64>(), i in 0usize..2, j in 0usize..2) {
        let amb = Ambient::new(2, &[1], 1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = Cochain::random(&amb, i, 2, 1, 2, &mut rng);
        let b = Cochain::random(&amb, j, 2, 1, 2, &mut rng);
        let lhs = d_hoch(&gerstenhaber(&a, &b).unwrap()).unwrap();
        let t1 = gerstenhaber(&d_hoch(&a).unwrap(), &b).unwrap();
        let t2 = gerstenhaber(&a, &d_hoch(&b).unwrap()).unwrap();
        let rhs = if i % 2 == 0 { t1.add(&t2) } else { t1.sub(&t2) };
        prop_assert_eq!(lhs, rhs);
    }
}
