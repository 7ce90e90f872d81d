//! Property tests: Weyl arithmetic, field and matrix identities, k[Γ]
//! associativity, quiver serialisation and Q5 monotonicity.

use lencat::linalg::Matrix;
use lencat::pointed::build_k_gamma;
use lencat::quiver::{GabrielQuiver, OrderedQuiver, Quiver};
use lencat::weyl::WeylElement;
use lencat::{Field, Fp, Q};
use proptest::prelude::*;

type F7 = Fp<7>;

fn weyl() -> impl Strategy<Value = WeylElement<Q>> {
    prop::collection::vec((0u32..3, 0u32..3, -3i64..=3), 0..4).prop_map(|terms| {
        terms.into_iter().fold(WeylElement::zero(), |acc, (i, j, c)| acc.add(&WeylElement::monomial(i, j, Q::from_i64(c))))
    })
}

fn matrix7(n: usize) -> impl Strategy<Value = Matrix<F7>> {
    prop::collection::vec(0i64..7, n * n).prop_map(move |v| Matrix::from_fn(n, n, |r, c| F7::new(v[r * n + c])))
}

fn order_vector() -> impl Strategy<Value = Vec<usize>> {
    (1usize..=3).prop_flat_map(|p| prop::collection::vec(1..=p, 1..=5))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn weyl_multiplication_is_associative(a in weyl(), b in weyl(), c in weyl()) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    }

    #[test]
    fn weyl_multiplication_distributes(a in weyl(), b in weyl(), c in weyl()) {
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
    }

    #[test]
    fn weights_add_on_monomials(i in 0u32..4, j in 0u32..4, k in 0u32..4, l in 0u32..4) {
        let p = WeylElement::<Q>::monomial(i, j, Q::from_i64(1));
        let q = WeylElement::<Q>::monomial(k, l, Q::from_i64(1));
        prop_assert_eq!(p.mul(&q).weight(), Some(p.weight().unwrap() + q.weight().unwrap()));
    }

    #[test]
    fn weyl_render_parses_back(a in weyl()) {
        prop_assert_eq!(WeylElement::<Q>::parse(&a.render()).unwrap(), a);
    }

    #[test]
    fn prime_field_axioms(a in 0i64..7, b in 0i64..7, c in 0i64..7) {
        let (a, b, c) = (F7::new(a), F7::new(b), F7::new(c));
        prop_assert_eq!(a * (b + c), a * b + a * c);
        if b != F7::new(0) {
            prop_assert_eq!(a / b * b, a);
        }
    }

    #[test]
    fn rationals_print_and_parse(n in -50i64..50, d in 1i64..50) {
        let x = Q::from_ratio(n, d);
        prop_assert_eq!(Q::parse_exact(&x.to_string()), Some(x));
    }

    #[test]
    fn rank_is_submultiplicative(a in matrix7(4), b in matrix7(4)) {
        prop_assert!(a.mul(&b).rank() <= a.rank().min(b.rank()));
    }

    #[test]
    fn determinant_is_multiplicative(a in matrix7(3), b in matrix7(3)) {
        prop_assert_eq!(a.mul(&b).det(), a.det() * b.det());
    }

    #[test]
    fn inverse_and_nullspace(a in matrix7(4)) {
        match a.inverse() {
            Some(inv) => {
                prop_assert!(a.mul(&inv).is_identity());
                prop_assert!(a.nullspace().is_empty());
            }
            None => {
                prop_assert!(a.rank() < 4);
                for v in a.nullspace() {
                    prop_assert!(a.mul_vec(&v).iter().all(|x| *x == F7::new(0)));
                }
                prop_assert_eq!(a.nullspace().len(), 4 - a.rank());
            }
        }
    }

    #[test]
    fn k_gamma_is_associative(order in order_vector(), seed in prop::collection::vec(-2i64..=2, 96)) {
        let s = build_k_gamma::<Q>(&OrderedQuiver::from_order_vector(order)).unwrap();
        let d = s.dim();
        prop_assume!(3 * d <= seed.len());
        let v = |k: usize| -> Vec<Q> { (0..d).map(|i| Q::from_i64(seed[k * d + i])).collect() };
        let (a, b, c) = (v(0), v(1), v(2));
        prop_assert_eq!(s.multiply(&s.multiply(&a, &b), &c), s.multiply(&a, &s.multiply(&b, &c)));
        prop_assert_eq!(s.multiply(&s.one(), &a), a.clone());
        prop_assert_eq!(s.multiply(&a, &s.one()), a);
    }

    #[test]
    fn quiver_json_round_trips(n in 1usize..6, arrows in prop::collection::vec((0usize..6, 0usize..6), 0..8)) {
        let arrows: Vec<(usize, usize)> = arrows.into_iter().filter(|&(s, t)| s < n && t < n).collect();
        let labels: Vec<String> = (1..=n).map(|i| format!("v{i}")).collect();
        let q = Quiver::new(labels, arrows).unwrap();
        prop_assert_eq!(Quiver::from_json(&q.to_json()).unwrap(), q);
    }

    #[test]
    fn q5_is_monotone_under_adding_arrows(
        n in 1usize..=6,
        arrows in prop::collection::vec((0usize..6, 0usize..6), 0..=7),
        extra in (0usize..6, 0usize..6),
    ) {
        let arrows: Vec<(usize, usize)> = arrows.into_iter().filter(|&(s, t)| s < n && t < n).collect();
        let labels: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
        let before = GabrielQuiver::from_quiver(&Quiver::new(labels.clone(), arrows.clone()).unwrap());
        let mut more = arrows;
        more.push((extra.0 % n, extra.1 % n));
        let after = GabrielQuiver::from_quiver(&Quiver::new(labels, more).unwrap());
        prop_assert!(!before.contains_q5() || after.contains_q5());
    }
}
