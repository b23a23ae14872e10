#![allow(dead_code)]

use std::path::PathBuf;

use hyperdmod::correlator::{build_ideal, Families, ParameterBlock};
use hyperdmod::weyl::DIdeal;
use hyperdmod::Arrangement;

/// Fixtures with exact expected holonomic rank of the full ideal.
pub const RANKED: &[(&str, usize)] = &[
    ("two_points", 2),
    ("three_points", 3),
    ("two_lines", 3),
    ("axes", 1),
    ("two_site", 4),
    ("two_site_b", 4),
    ("three_lines", 6),
];

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(format!("{name}.json"))
}

pub fn fixture(name: &str) -> Arrangement {
    let text = std::fs::read_to_string(fixture_path(name)).expect("fixture file");
    Arrangement::from_json(&text).expect("fixture parses")
}

pub fn ideal(arr: &Arrangement, seed: u64, families: Families) -> DIdeal {
    build_ideal(arr, &ParameterBlock::random(arr.m(), arr.n(), seed), families, false)
}

pub const HL: Families = Families { h: true, l: true, p: false, q: false };
pub const HLP: Families = Families { h: true, l: true, p: true, q: false };
pub const L_ONLY: Families = Families { h: false, l: true, p: false, q: false };
