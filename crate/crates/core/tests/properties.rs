use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use drwk::relmilnor::RelSymbol;
use drwk::scalars::gcd::gcd;
use drwk::scalars::{FieldElem, MultiPoly, Rational, Vars};
use drwk::trunc::TruncElem;
use drwk::witt::WittVector;

fn xy() -> Vars {
    Vars::new(&["x", "y"]).unwrap()
}

fn big(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn edge_i64() -> impl Strategy<Value = i64> {
    prop_oneof![-20i64..20, Just(i64::MAX), Just(i64::MIN), Just(i64::MIN + 1), any::<i64>()]
}

fn nonzero_den() -> impl Strategy<Value = i64> {
    prop_oneof![1i64..12, Just(i64::MAX), any::<i64>()].prop_filter("nonzero", |d| *d != 0)
}

/// Polynomial in x,y from (x-exp, y-exp, coefficient) triples.
fn poly() -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec((0u32..3, 0u32..3, -5i64..=5), 1..4).prop_map(|ts| {
        MultiPoly::from_terms(&xy(), ts.into_iter().map(|(a, b, c)| (vec![a, b], Rational::from_int(c))))
    })
}

fn nonconstant_poly() -> impl Strategy<Value = MultiPoly> {
    poly().prop_filter("nonconstant", |p| !p.is_constant())
}

fn field() -> impl Strategy<Value = FieldElem> {
    (poly(), prop::option::of(nonconstant_poly()))
        .prop_filter_map("nonzero denominator", |(n, d)| match d {
            Some(d) => FieldElem::from_fraction(n, d).ok(),
            None => Some(FieldElem::from_poly(n)),
        })
}

fn witt(level: usize) -> impl Strategy<Value = WittVector> {
    prop::collection::vec(field(), level).prop_map(|c| WittVector::new(&xy(), c))
}

fn nilpotent(level: usize) -> impl Strategy<Value = TruncElem> {
    prop::collection::vec(field(), level).prop_map(move |mut c| {
        c.insert(0, FieldElem::zero(&xy()));
        TruncElem::from_coeffs(&xy(), c, level)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rational_matches_bigrational(a in edge_i64(), b in nonzero_den(), c in edge_i64(), d in nonzero_den()) {
        let (p, q) = (Rational::new(a, b).unwrap(), Rational::new(c, d).unwrap());
        let (bp, bq) = (big(a, b), big(c, d));
        prop_assert_eq!((&p + &q).as_big(), &bp + &bq);
        prop_assert_eq!((&p - &q).as_big(), &bp - &bq);
        prop_assert_eq!((&p * &q).as_big(), &bp * &bq);
        prop_assert_eq!(p.cmp(&q), bp.cmp(&bq));
        prop_assert_eq!((-&p).as_big(), -&bp);
        if !q.is_zero() {
            prop_assert_eq!(q.inv().unwrap().as_big(), bq.recip());
        }
        prop_assert_eq!(p.to_string().parse::<Rational>().unwrap(), p);
    }

    #[test]
    fn gcd_divides_and_contains_common_factor(a in poly(), b in poly(), c in nonconstant_poly()) {
        prop_assume!(!a.is_zero() && !b.is_zero());
        let (ac, bc) = (a.mul(&c), b.mul(&c));
        let g = gcd(&ac, &bc);
        prop_assert!(ac.div_exact(&g).is_some());
        prop_assert!(bc.div_exact(&g).is_some());
        prop_assert!(g.div_exact(&c.monic()).is_some());
    }

    #[test]
    fn field_inverse_and_distributivity(a in field(), b in field(), c in field()) {
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        if !a.is_zero() {
            prop_assert!(a.mul(&a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn ghost_is_additive_and_invertible(a in witt(4), b in witt(4)) {
        prop_assert_eq!(a.add(&b).ghost(), a.ghost().add(&b.ghost()));
        prop_assert_eq!(a.mul(&b).ghost(), a.ghost().mul(&b.ghost()));
        prop_assert_eq!(WittVector::unghost(&a.ghost()), a);
    }

    #[test]
    fn gamma_is_a_homomorphism(a in witt(3), b in witt(3)) {
        prop_assert_eq!(a.add(&b).gamma(), a.gamma().mul(&b.gamma()));
        prop_assert_eq!(WittVector::gamma_inv(&a.gamma()).unwrap(), a);
    }

    #[test]
    fn exp_and_log_are_inverse(n in nilpotent(4)) {
        let u = n.exp().unwrap();
        prop_assert!(u.is_principal());
        prop_assert_eq!(u.log().unwrap(), n.clone());
        let one = TruncElem::one(&xy(), 4);
        prop_assert_eq!(one.add(&n).log().unwrap().exp().unwrap(), one.add(&n));
    }

    #[test]
    fn symbol_with_itself_vanishes(n in nilpotent(3)) {
        let u = TruncElem::one(&xy(), 3).add(&n);
        let s = RelSymbol::from_elems(Rational::one(), vec![u.clone(), u]).unwrap();
        prop_assert!(s.normal_form().unwrap().is_zero());
    }
}
