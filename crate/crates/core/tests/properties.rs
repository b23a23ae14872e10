mod common;

use common::*;
use hyperdmod::comalg::{comm_groebner, is_groebner, reduce, CommIdeal};
use hyperdmod::correlator::Families;
use hyperdmod::exactmath::{QPoly, TermOrder, Universe};
use hyperdmod::weyl::{
    d_groebner, d_is_groebner, d_normal_form, rweyl_groebner, rweyl_is_groebner, rweyl_normal_form,
    weight01_order, weyl_universe, Budget, WeylElement,
};
use proptest::prelude::*;

const M: usize = 2;

fn universe() -> Universe {
    weyl_universe::<&str>(M, &[])
}

/// Normally ordered terms `k c1^a c2^b d1^e d2^f`.
fn arb_weyl() -> impl Strategy<Value = WeylElement> {
    prop::collection::vec((-4i64..=4, 0u32..3, 0u32..3, 0u32..3, 0u32..3), 1..5).prop_map(|terms| {
        let s: Vec<String> =
            terms.iter().map(|(k, a, b, e, f)| format!("({k})*c1^{a}*c2^{b}*d1^{e}*d2^{f}")).collect();
        WeylElement::parse(&s.join(" + "), &universe(), M).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn weyl_ring_axioms(a in arb_weyl(), b in arb_weyl(), c in arb_weyl()) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&(&b + &c)), &a.mul(&b) + &a.mul(&c));
        prop_assert_eq!((&a + &b).mul(&c), &a.mul(&c) + &b.mul(&c));
        let one = WeylElement::one(&universe(), M);
        prop_assert_eq!(a.mul(&one), a.clone());
        prop_assert_eq!(one.mul(&a), a.clone());
        prop_assert!((&a - &a).is_zero());
    }
}

#[test]
fn canonical_commutation_relations() {
    let u = universe();
    for i in 0..M {
        for j in 0..M {
            let (c, d) = (WeylElement::c(&u, M, j), WeylElement::d(&u, M, i));
            let comm = &d.mul(&c) - &c.mul(&d);
            let want = if i == j { WeylElement::one(&u, M) } else { WeylElement::zero(&u, M) };
            assert_eq!(comm, want);
        }
    }
}

#[test]
fn rational_weyl_bases_self_reduce() {
    let b = Budget::default();
    for &(name, _) in RANKED {
        let arr = fixture(name);
        // The L-only bases for m = 3 are large; their S-pair check is slow.
        let families: &[Families] = if arr.m() <= 2 { &[Families::ALL, HL, L_ONLY] } else { &[Families::ALL, HL] };
        for &fam in families {
            let i = ideal(&arr, 4, fam);
            let gb = rweyl_groebner(&i.gens, &b).unwrap();
            assert!(rweyl_is_groebner(&gb, &b).unwrap(), "{name}");
            for g in i.gens.iter().chain(&gb) {
                assert!(rweyl_normal_form(g, &gb, &b).unwrap().is_zero(), "{name}");
            }
            // Reduced: no element reduces further modulo the others.
            for k in 0..gb.len() {
                let others: Vec<_> = gb.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, g)| g.clone()).collect();
                assert!(!rweyl_normal_form(&gb[k], &others, &b).unwrap().is_zero(), "{name}");
            }
        }
    }
}

#[test]
fn weyl_bases_self_reduce() {
    let b = Budget::default();
    for name in ["two_points", "two_lines", "axes"] {
        let arr = fixture(name);
        let i = ideal(&arr, 4, Families::ALL);
        let order = weight01_order(arr.m());
        let gb = d_groebner(&i.gens, &order, &b).unwrap();
        assert!(d_is_groebner(&gb, &order, &b).unwrap(), "{name}");
        for g in i.gens.iter().chain(&gb) {
            assert!(d_normal_form(g, &gb, &order, &b).unwrap().is_zero(), "{name}");
        }
    }
}

fn arb_poly() -> impl Strategy<Value = QPoly> {
    prop::collection::vec((-5i64..=5, 0u32..3, 0u32..3, 0u32..3), 1..4).prop_map(|terms| {
        let s: Vec<String> = terms.iter().map(|(k, a, b, c)| format!("({k})*x^{a}*y^{b}*z^{c}")).collect();
        QPoly::parse(&s.join(" + "), &Universe::new(&["x", "y", "z"])).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn commutative_bases_self_reduce(gens in prop::collection::vec(arb_poly(), 1..4)) {
        let b = Budget::default();
        let u = Universe::new(&["x", "y", "z"]);
        let gens: Vec<QPoly> = gens.into_iter().filter(|g| !g.is_zero()).collect();
        prop_assume!(!gens.is_empty());
        let ideal = CommIdeal::new(&u, gens.clone()).unwrap();
        for order in [TermOrder::DegRevLex, TermOrder::Lex] {
            let gb = comm_groebner(&ideal, &order, &b).unwrap();
            prop_assert!(is_groebner(&gb, &order, &b).unwrap());
            for g in gens.iter().chain(&gb) {
                prop_assert!(reduce(g, &gb, &order, &b).unwrap().is_zero());
            }
        }
    }
}
