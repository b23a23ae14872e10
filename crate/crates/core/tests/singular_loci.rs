mod common;

use common::*;
use hyperdmod::arrangement::{circuits, discriminantal};
use hyperdmod::comalg::{factor_match, radical_equal, singular_locus, CommIdeal};
use hyperdmod::correlator::Families;
use hyperdmod::exactmath::QPoly;
use hyperdmod::weyl::Budget;
use hyperdmod::Arrangement;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn locus(arr: &Arrangement) -> CommIdeal {
    singular_locus(&ideal(arr, 1, Families::ALL), &Budget::default()).expect("within budget")
}

fn expected(arr: &Arrangement, product: &str) -> CommIdeal {
    let u = arr.c_universe();
    CommIdeal::principal(&QPoly::parse(product, &u).expect("valid product"))
}

#[test]
fn loci_match_printed_products() {
    let cases = [
        ("two_points", "c1*c2*(2*c1 - c2)"),
        ("three_points", "c1*c2*c3*(3*c2 - 2*c3)*(2*c1 - c2)*(3*c1 - c3)"),
        ("two_lines", "c1*c2*(3*c1 + 5*c2)*(7*c1 - 3*c2)"),
        ("axes", "c1*c2"),
        ("two_site", "c1*c2*c3*(c1 - c2)*(c1 - c3)*(c1 - c2 - c3)"),
        ("two_site_b", "c1*c2*c3*(c1 - c2)*(c1 + c3)*(c1 - c2 + c3)"),
        (
            "three_lines",
            "c1*c2*c3*(3*c1 + 5*c2)*(7*c1 - 3*c2)*(2*c1 + 5*c3)*(c1 - 3*c3)*(2*c2 - 3*c3)*(c2 - 7*c3)*(c1 - c2 + 4*c3)",
        ),
    ];
    let b = Budget::default();
    for (name, product) in cases {
        let arr = fixture(name);
        let got = locus(&arr);
        assert!(radical_equal(&got, &expected(&arr, product), &b).expect("within budget"), "{name}");
    }
}

#[test]
fn five_lines_locus_exhausts_small_budget() {
    let arr = fixture("five_lines");
    let b = Budget { max_steps: 20_000, max_degree: 30 };
    assert!(singular_locus(&ideal(&arr, 1, Families::ALL), &b).is_err());
}

#[test]
fn same_matroid_different_loci() {
    let a = fixture("two_site");
    let b = fixture("two_site_b");
    // B = diag(-1, 1) A diag(-1, -1, 1).
    let m = a.matrix();
    for j in 0..3 {
        let col_sign = if j < 2 { -1 } else { 1 };
        for i in 0..2 {
            let row_sign = if i == 0 { -1 } else { 1 };
            let v = m[(i, j)].clone() * hyperdmod::exactmath::rat(row_sign * col_sign, 1);
            assert_eq!(b.matrix()[(i, j)], v);
        }
    }
    let idx = |x: &Arrangement| circuits(x).into_iter().map(|c| c.indices).collect::<Vec<_>>();
    assert_eq!(idx(&a), idx(&b));
    let (la, lb) = (locus(&a), locus(&b));
    let (ga, gb) = (la.gens(), lb.gens());
    assert!(!radical_equal(&la, &lb, &Budget::default()).expect("within budget"));
    assert_ne!(ga, gb);
}

#[test]
fn locus_inside_discriminantal_on_fixtures() {
    let b = Budget::default();
    for name in ["two_lines", "axes", "two_site", "two_site_b", "three_lines", "two_points", "three_points"] {
        let arr = fixture(name);
        let fm = factor_match(&locus(&arr), &discriminantal(&arr), &b).expect("within budget");
        assert!(fm.product_in_radical, "{name}");
    }
}

#[test]
fn locus_inside_discriminantal_on_random_arrangements() {
    let b = Budget::default();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut done = 0;
    while done < 20 {
        let m = 2 + done % 3;
        let rows: Vec<Vec<i64>> = (0..2).map(|_| (0..m).map(|_| rng.gen_range(-4..=4)).collect()).collect();
        let r: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
        let Ok(arr) = Arrangement::from_int_rows(&r) else { continue };
        let fm = factor_match(&locus(&arr), &discriminantal(&arr), &b).expect("within budget");
        assert!(fm.product_in_radical, "{rows:?}");
        done += 1;
    }
}
