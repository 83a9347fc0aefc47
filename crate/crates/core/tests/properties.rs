use std::cmp::Ordering;

use gbgen::dataset::{parse_prefix_tokens, read_jsonl, to_prefix_tokens, write_jsonl, Header};
use gbgen::{
    generate_dataset, normal_form, rat, Field, FieldSpec, GenerationConfig, Polynomial, Rational, Ring, Term,
    TermOrder, F31, F7,
};
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ORDERS: [TermOrder; 3] = [TermOrder::Lex, TermOrder::GrLex, TermOrder::GrevLex];

fn random_term(rng: &mut impl Rng, n: usize) -> Term {
    Term::new((0..n).map(|_| rng.gen_range(0..5)))
}

#[test]
fn order_axioms_on_random_triples() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for k in 0..100_000 {
        let n = 1 + k % 5;
        let (a, b, c) = (random_term(&mut rng, n), random_term(&mut rng, n), random_term(&mut rng, n));
        let one = Term::one(n);
        for o in ORDERS {
            // Total and antisymmetric.
            assert_eq!(o.cmp(&a, &b), o.cmp(&b, &a).reverse());
            assert_eq!(o.cmp(&a, &b) == Ordering::Equal, a == b);
            // Multiplicative.
            assert_eq!(o.cmp(&a, &b), o.cmp(&a.mul(&c), &b.mul(&c)), "{o} {a} {b} {c}");
            // 1 is the minimum.
            assert_ne!(o.cmp(&a, &one), Ordering::Less);
            // Transitive.
            if o.cmp(&a, &b) == Ordering::Less && o.cmp(&b, &c) == Ordering::Less {
                assert_eq!(o.cmp(&a, &c), Ordering::Less);
            }
        }
    }
}

#[test]
fn order_examples() {
    let t = |e: &[u32]| Term::new(e.iter().copied());
    assert_eq!(TermOrder::Lex.cmp(&t(&[1, 0]), &t(&[0, 5])), Ordering::Greater);
    assert_eq!(TermOrder::GrLex.cmp(&t(&[1, 0]), &t(&[0, 5])), Ordering::Less);
    // x0*x2 vs x1^2: grlex prefers x0*x2, grevlex prefers x1^2.
    assert_eq!(TermOrder::GrLex.cmp(&t(&[1, 0, 1]), &t(&[0, 2, 0])), Ordering::Greater);
    assert_eq!(TermOrder::GrevLex.cmp(&t(&[1, 0, 1]), &t(&[0, 2, 0])), Ordering::Less);
}

fn check_field_axioms<C: Field>(a: C, b: C, c: C) {
    assert_eq!(a.add_ref(&b), b.add_ref(&a));
    assert_eq!(a.mul_ref(&b), b.mul_ref(&a));
    assert_eq!(a.add_ref(&b).add_ref(&c), a.add_ref(&b.add_ref(&c)));
    assert_eq!(a.mul_ref(&b).mul_ref(&c), a.mul_ref(&b.mul_ref(&c)));
    assert_eq!(a.mul_ref(&b.add_ref(&c)), a.mul_ref(&b).add_ref(&a.mul_ref(&c)));
    assert_eq!(a.add_ref(&C::zero()), a);
    assert_eq!(a.mul_ref(&C::one()), a);
    assert!(a.add_ref(&-a.clone()).is_zero());
    assert_eq!(a.sub_ref(&b).add_ref(&b), a);
    if a.is_zero() {
        assert!(a.inv().is_err());
    } else {
        assert!(a.mul_ref(&a.inv().unwrap()).is_one());
    }
}

fn arb_rational() -> impl Strategy<Value = Rational> + Clone {
    (-50i64..50, 1i64..20).prop_map(|(a, b)| rat(a, b))
}

fn arb_poly<C: Field>(n: usize, coeff: impl Strategy<Value = C> + Clone) -> impl Strategy<Value = Polynomial<C>> {
    let ring = Ring::new(n, TermOrder::Lex);
    prop::collection::vec((coeff, prop::collection::vec(0u32..4, n)), 0..6).prop_map(move |ts| {
        Polynomial::from_terms(ring, ts.into_iter().map(|(c, e)| (c, Term::new(e))).collect::<Vec<_>>())
    })
}

fn f7() -> impl Strategy<Value = F7> + Clone {
    (0i64..7).prop_map(F7::new)
}

/// Product by explicit convolution over all term pairs.
fn naive_mul<C: Field>(a: &Polynomial<C>, b: &Polynomial<C>) -> Polynomial<C> {
    let mut acc = Vec::new();
    for (ca, ta) in a.terms() {
        for (cb, tb) in b.terms() {
            acc.push((ca.mul_ref(cb), ta.mul(tb)));
        }
    }
    Polynomial::from_terms(a.ring(), acc)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn fp7_axioms(a in 0i64..7, b in 0i64..7, c in 0i64..7) {
        check_field_axioms(F7::new(a), F7::new(b), F7::new(c));
    }

    #[test]
    fn fp31_axioms(a in any::<i64>(), b in any::<i64>(), c in any::<i64>()) {
        check_field_axioms(F31::from_i64(a), F31::from_i64(b), F31::from_i64(c));
    }

    #[test]
    fn rational_axioms(a in arb_rational(), b in arb_rational(), c in arb_rational()) {
        check_field_axioms(a, b, c);
    }

    #[test]
    fn mul_matches_convolution(a in arb_poly(3, f7()), b in arb_poly(3, f7())) {
        prop_assert_eq!(&a * &b, naive_mul(&a, &b));
    }

    #[test]
    fn ring_identities(a in arb_poly(2, arb_rational()), b in arb_poly(2, arb_rational()), c in arb_poly(2, arb_rational())) {
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &Polynomial::one(a.ring()), a.clone());
    }

    #[test]
    fn division_reconstructs(
        f in arb_poly(2, f7()),
        gs in prop::collection::vec(arb_poly(2, f7()), 1..4),
    ) {
        let gs: Vec<_> = gs.into_iter().filter(|g| !g.is_zero()).collect();
        prop_assume!(!gs.is_empty());
        let div = normal_form(&f, &gs).unwrap();
        let mut back = div.remainder.clone();
        for (q, g) in div.quotients.iter().zip(&gs) {
            back = &back + &(q * g);
        }
        prop_assert_eq!(back, f);
        for (_, t) in div.remainder.terms() {
            prop_assert!(gs.iter().all(|g| !g.lt().unwrap().divides(t)));
        }
    }

    #[test]
    fn display_parses_back(p in arb_poly(3, arb_rational())) {
        let q: Polynomial<Rational> = gbgen::parse_poly(p.ring(), &p.to_string()).unwrap();
        prop_assert_eq!(q, p);
    }

    #[test]
    fn tokens_round_trip_fp(ps in prop::collection::vec(arb_poly(3, f7()), 1..4)) {
        let toks = to_prefix_tokens(&ps);
        let back: Vec<Polynomial<F7>> = parse_prefix_tokens(ps[0].ring(), &toks).unwrap();
        prop_assert_eq!(back, ps);
    }

    #[test]
    fn tokens_round_trip_q(ps in prop::collection::vec(arb_poly(2, arb_rational()), 1..4)) {
        let toks = to_prefix_tokens(&ps);
        let back: Vec<Polynomial<Rational>> = parse_prefix_tokens(ps[0].ring(), &toks).unwrap();
        prop_assert_eq!(back, ps);
    }
}

#[test]
fn rational_inverse_and_one() {
    assert_eq!(rat(3, 4).inv().unwrap(), rat(4, 3));
    assert!(Rational::one().is_one());
    assert!(Rational::zero().inv().is_err());
}

fn jsonl_round_trip<C: Field>(field: FieldSpec, n: usize, seed: u64) {
    let mut cfg = GenerationConfig::new(n, field);
    cfg.m = 25;
    cfg.seed = seed;
    cfg.verify_fraction = 0.0;
    let (samples, _) = generate_dataset::<C>(&cfg).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.jsonl");
    let header = Header::new(field, n, cfg.order);
    write_jsonl(&path, &header, &samples).unwrap();
    let (h, back) = read_jsonl::<C>(&path).unwrap();
    assert_eq!(h, header);
    assert_eq!(back, samples);

    for s in &samples {
        let ring = s.g[0].ring();
        let toks = to_prefix_tokens(&s.f);
        assert_eq!(parse_prefix_tokens::<C, _>(ring, &toks).unwrap(), s.f);
    }
}

#[test]
fn jsonl_round_trips() {
    jsonl_round_trip::<F7>(FieldSpec::prime(7).unwrap(), 2, 3);
    jsonl_round_trip::<F31>(FieldSpec::prime(31).unwrap(), 3, 4);
    jsonl_round_trip::<Rational>(FieldSpec::rationals(), 3, 5);
}
