mod common;

use common::*;
use hyperdmod::arrangement::bounded_regions;
use hyperdmod::correlator::Families;
use hyperdmod::exactmath::{rat, QPoly};
use hyperdmod::weyl::{holonomic_rank, holonomic_rank_modular, rweyl_is_groebner, Budget, DIdeal};

fn exact(i: &DIdeal) -> Option<usize> {
    holonomic_rank(i, &Budget::default()).expect("within budget").rank
}

fn modular(i: &DIdeal, seed: u64) -> Option<usize> {
    holonomic_rank_modular(i, &Budget::default(), seed).expect("within budget").rank
}

#[test]
fn exact_ranks_of_fixtures() {
    for &(name, rank) in RANKED {
        let i = ideal(&fixture(name), 1, Families::ALL);
        assert_eq!(exact(&i), Some(rank), "{name}");
    }
}

#[test]
fn modular_ranks_agree_with_exact() {
    for &(name, _) in RANKED {
        let arr = fixture(name);
        for fam in [Families::ALL, HL, L_ONLY] {
            let i = ideal(&arr, 3, fam);
            let e = holonomic_rank(&i, &Budget::default()).expect("within budget");
            if e.rank.is_none() {
                // No finite staircase ever stabilizes.
                let low = Budget { max_steps: 1_000_000, max_degree: 12 };
                assert!(holonomic_rank_modular(&i, &low, 5).is_err(), "{name}");
                continue;
            }
            let m = holonomic_rank_modular(&i, &Budget::default(), 5).expect("within budget");
            assert_eq!(e.rank, m.rank, "{name}");
            {
                let mut a = e.standard_monomials.clone();
                let mut b = m.standard_monomials.clone();
                a.sort();
                b.sort();
                assert_eq!(a, b, "{name}: staircases differ");
            }
        }
    }
}

#[test]
fn rank_of_hyperplane_operators_alone() {
    let two_lines = fixture("two_lines");
    assert_eq!(exact(&ideal(&two_lines, 1, L_ONLY)), Some(7));
    assert_eq!(exact(&ideal(&two_lines, 1, HL)), Some(3));
    let axes = fixture("axes");
    assert_eq!(exact(&ideal(&axes, 1, L_ONLY)), Some(4));
    assert_eq!(exact(&ideal(&axes, 1, HL)), Some(1));
}

#[test]
fn five_lines_modular_rank() {
    let arr = fixture("five_lines");
    for seed in [1, 2] {
        assert_eq!(modular(&ideal(&arr, seed, Families::ALL), seed), Some(15));
    }
}

#[test]
fn rank_independent_of_specialization() {
    for &(name, rank) in RANKED {
        let arr = fixture(name);
        for seed in [11, 12] {
            assert_eq!(exact(&ideal(&arr, seed, Families::ALL)), Some(rank), "{name} seed {seed}");
        }
    }
}

#[test]
fn rank_invariant_under_rescaling_and_combination() {
    for &(name, rank) in RANKED {
        let arr = fixture(name);
        let i = ideal(&arr, 1, Families::ALL);
        let u = i.gens[0].universe().clone();
        let m = i.m;
        let mut gens: Vec<_> = i.gens.iter().enumerate().map(|(k, g)| g.scale(&rat(2 * k as i64 + 3, 7))).collect();
        // g_0 + c_1^2 g_1 replaces g_0; the generated ideal is unchanged.
        if gens.len() > 1 {
            let c1 = QPoly::var(&u, 0);
            let comb = &gens[0] + &gens[1].left_mul_coeff(&(&c1 * &c1));
            gens[0] = comb;
        }
        gens.reverse();
        let j = DIdeal::new(m, gens).expect("same universe");
        assert_eq!(exact(&j), Some(rank), "{name}");
        assert_eq!(modular(&j, 9), Some(rank), "{name}");
    }
}

#[test]
fn rank_equals_bounded_regions() {
    for (name, fam) in [("axes", Families::ALL), ("two_lines", HL), ("two_site", Families::ALL), ("three_lines", Families::ALL)]
    {
        let arr = fixture(name);
        assert_eq!(exact(&ideal(&arr, 1, fam)), Some(bounded_regions(&arr) as usize), "{name}");
    }
    let a5 = fixture("five_lines");
    assert_eq!(modular(&ideal(&a5, 1, Families::ALL), 1), Some(bounded_regions(&a5) as usize));
}

#[test]
fn computed_bases_are_groebner() {
    let b = Budget::default();
    for &(name, _) in RANKED {
        let i = ideal(&fixture(name), 1, Families::ALL);
        let r = holonomic_rank(&i, &b).expect("within budget");
        assert!(rweyl_is_groebner(&r.groebner_basis, &b).expect("within budget"), "{name}");
    }
}
