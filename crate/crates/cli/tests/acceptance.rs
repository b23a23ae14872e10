//! Acceptance suite: one PASS/FAIL line per criterion, driven through the
//! `hyperdmod` binary where the CLI covers the check.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::Command;
use std::time::Instant;

use hyperdmod::arrangement::discriminantal;
use hyperdmod::comalg::{comm_groebner, is_groebner, radical_equal, reduce, CommIdeal};
use hyperdmod::correlator::{build_ideal, Families, ParameterBlock};
use hyperdmod::exactmath::{rat, QPoly, TermOrder};
use hyperdmod::numcheck::{eval_phi, find_chamber, NumericSetting};
use hyperdmod::weyl::{
    d_groebner, d_is_groebner, d_normal_form, holonomic_rank, holonomic_rank_modular, rweyl_groebner,
    rweyl_is_groebner, rweyl_normal_form, weight01_order, weyl_universe, Budget, DIdeal, WeylElement,
};
use hyperdmod::Arrangement;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(format!("{name}.json"))
}

fn fixture(name: &str) -> Arrangement {
    Arrangement::from_json(&std::fs::read_to_string(fixture_path(name)).unwrap()).unwrap()
}

/// Runs the binary; returns the exit code and the parsed report.
fn cli(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_hyperdmod")).args(args).output().expect("binary runs");
    let report = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap_or(-1), report)
}

fn on(name: &str, cmd: &str, extra: &[&str]) -> (i32, Value) {
    let path = fixture_path(name);
    let mut args = vec![cmd, "--arrangement", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    cli(&args)
}

fn rank_of(name: &str, extra: &[&str]) -> Option<u64> {
    let (code, r) = on(name, "rank", extra);
    (code == 0).then(|| r["rank"].as_u64()).flatten()
}

type Checks = Vec<String>;

fn check(fails: &mut Checks, ok: bool, what: impl Into<String>) {
    if !ok {
        fails.push(what.into());
    }
}

const SMALL: &[(&str, u64)] = &[
    ("two_points", 2),
    ("three_points", 3),
    ("two_lines", 3),
    ("axes", 1),
    ("two_site", 4),
    ("two_site_b", 4),
    ("three_lines", 6),
];

const N2: &[&str] = &["two_lines", "axes", "two_site", "two_site_b", "three_lines", "five_lines"];

fn criterion_1() -> Checks {
    let mut f = Checks::new();
    for &(name, want) in SMALL {
        let got = rank_of(name, &["--exact"]);
        check(&mut f, got == Some(want), format!("{name}: rank {got:?}, want {want}"));
    }
    for (name, fam, want) in [
        ("two_lines", ["--with-L"].as_slice(), 7),
        ("two_lines", &["--with-L", "--with-H"], 3),
        ("axes", &["--with-L"], 4),
        ("axes", &["--with-L", "--with-H"], 1),
    ] {
        let mut args = vec!["--exact"];
        args.extend_from_slice(fam);
        let got = rank_of(name, &args);
        check(&mut f, got == Some(want), format!("{name} {fam:?}: rank {got:?}, want {want}"));
    }
    let t = Instant::now();
    let got = rank_of("five_lines", &[]);
    check(&mut f, got == Some(15), format!("five_lines: rank {got:?}, want 15"));
    check(&mut f, t.elapsed().as_secs() < 600, "five_lines over 10 min");
    f
}

fn expected_locus(arr: &Arrangement, product: &str) -> CommIdeal {
    CommIdeal::principal(&QPoly::parse(product, &arr.c_universe()).unwrap())
}

fn criterion_2() -> Checks {
    let mut f = Checks::new();
    let cases = [
        ("two_points", "c1*c2*(2*c1 - c2)"),
        ("three_points", "c1*c2*c3*(3*c2 - 2*c3)*(2*c1 - c2)*(3*c1 - c3)"),
        ("two_lines", "c1*c2*(3*c1 + 5*c2)*(7*c1 - 3*c2)"),
        ("two_site", "c1*c2*c3*(c1 - c2)*(c1 - c3)*(c1 - c2 - c3)"),
        ("two_site_b", "c1*c2*c3*(c1 - c2)*(c1 + c3)*(c1 - c2 + c3)"),
        (
            "three_lines",
            "c1*c2*c3*(3*c1 + 5*c2)*(7*c1 - 3*c2)*(2*c1 + 5*c3)*(c1 - 3*c3)*(2*c2 - 3*c3)*(c2 - 7*c3)*(c1 - c2 + 4*c3)",
        ),
    ];
    for (name, product) in cases {
        let arr = fixture(name);
        let (code, r) = on(name, "singloc", &[]);
        if code != 0 {
            f.push(format!("{name}: exit {code}"));
            continue;
        }
        let u = arr.c_universe();
        let gens: Vec<QPoly> =
            r["generators"].as_array().unwrap().iter().map(|g| QPoly::parse(g.as_str().unwrap(), &u).unwrap()).collect();
        let got = CommIdeal::new(&u, gens).unwrap();
        let eq = radical_equal(&got, &expected_locus(&arr, product), &Budget::default()).unwrap();
        check(&mut f, eq, format!("{name}: locus differs"));
    }
    let (code, r) = on("five_lines", "singloc", &["--budget-steps", "20000"]);
    check(&mut f, code == 3 && r["status"] == "undetermined", format!("five_lines: exit {code}, want 3"));
    f
}

fn criterion_3() -> Checks {
    let mut f = Checks::new();
    for (name, fam) in [
        ("axes", [].as_slice()),
        ("two_lines", &["--with-H", "--with-L"]),
        ("two_site", &[]),
        ("three_lines", &[]),
        ("five_lines", &[]),
    ] {
        let rank = rank_of(name, fam);
        let (_, r) = on(name, "regions", &[]);
        let bounded = r["bounded"].as_u64();
        check(&mut f, rank.is_some() && rank == bounded, format!("{name}: rank {rank:?}, bounded {bounded:?}"));
    }
    f
}

fn criterion_4() -> Checks {
    let mut f = Checks::new();
    for name in N2.iter().filter(|n| **n != "five_lines") {
        let (code, r) = on(name, "singloc", &[]);
        check(&mut f, code == 0 && r["locus_in_candidates"] == true, format!("{name}: not inside"));
    }
    let dir = tempfile::tempdir().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut done = 0;
    while done < 20 {
        let m = 2 + done % 3;
        let rows: Vec<Vec<i64>> = (0..2).map(|_| (0..m).map(|_| rng.gen_range(-4..=4)).collect()).collect();
        let r: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
        let Ok(arr) = Arrangement::from_int_rows(&r) else { continue };
        let path = dir.path().join(format!("random{done}.json"));
        std::fs::write(&path, arr.to_json().to_string()).unwrap();
        let (code, rep) = cli(&["singloc", "--arrangement", path.to_str().unwrap()]);
        // Every c_j is itself a maximal minor, so the candidates of the
        // report are exactly the discriminantal forms.
        let same = rep["candidates"].as_array().is_some_and(|c| c.len() == discriminantal(&arr).len());
        let inside = code == 0 && rep["locus_in_candidates"] == true;
        check(&mut f, inside && same, format!("random {rows:?}: exit {code}"));
        done += 1;
    }
    f
}

fn criterion_5() -> Checks {
    let mut f = Checks::new();
    for name in ["two_points", "three_points"].iter().chain(N2) {
        let (code, r) = on(name, "verify", &["--points", "3"]);
        let worst = r["worst_relative_residual"].as_f64().unwrap_or(f64::NAN);
        check(&mut f, code == 0 && worst < 1e-3, format!("{name}: exit {code}, worst {worst:e}"));
    }
    let arr = Arrangement::from_int_rows(&[&[2]]).unwrap();
    for (s, nu, c) in [(1.3, 2.7, 1.9), (0.5, 1.5, 3.0), (2.5, 3.5, 0.7)] {
        let st = NumericSetting::new(vec![c], vec![s], vec![nu]);
        let ch = find_chamber(&arr, &st.c, &[c / 4.0]).unwrap();
        let got = eval_phi(&arr, &st, &ch).unwrap();
        let want = 2f64.powf(-nu) * f64::powf(c, s + nu) * statrs::function::beta::beta(nu, s + 1.0);
        let rel = ((got - want) / want).abs();
        check(&mut f, rel < 1e-8, format!("beta oracle s={s} nu={nu}: {rel:e}"));
    }
    f
}

fn criterion_6() -> Checks {
    let mut f = Checks::new();
    for &(name, _) in SMALL {
        let (code, r) = on(name, "compare-ideals", &["--left", "HLPQ", "--right", "HLP", "--exact"]);
        check(&mut f, code == 0 && r["equal"] == true, format!("{name}: HLPQ vs HLP exit {code}"));
    }
    let (code, r) = on("five_lines", "compare-ideals", &["--left", "HLPQ", "--right", "HLP"]);
    check(&mut f, code == 0 && r["equal"] == true, format!("five_lines: HLPQ vs HLP exit {code}"));
    let n = fixture_path("two_site_integration");
    let n = n.to_str().unwrap();
    let (code, r) = on("two_site", "compare-ideals", &["--left", "HLPQ", "--right", n, "--exact"]);
    check(&mut f, code == 0 && r["equal"] == true, format!("two_site vs N exit {code}"));
    let with_hlp = format!("{n},HLP");
    let (code, r) = on("two_site", "compare-ideals", &["--left", "HLPQ", "--right", &with_hlp, "--exact"]);
    check(&mut f, code == 0 && r["equal"] == true, format!("two_site vs N + HLP exit {code}"));
    f
}

fn random_weyl(rng: &mut ChaCha8Rng) -> WeylElement {
    let u = weyl_universe::<&str>(2, &[]);
    let terms: Vec<String> = (0..rng.gen_range(1..5))
        .map(|_| {
            let k: i64 = rng.gen_range(-4..=4);
            let e: Vec<u32> = (0..4).map(|_| rng.gen_range(0..3)).collect();
            format!("({k})*c1^{}*c2^{}*d1^{}*d2^{}", e[0], e[1], e[2], e[3])
        })
        .collect();
    WeylElement::parse(&terms.join(" + "), &u, 2).unwrap()
}

fn criterion_7() -> Checks {
    let mut f = Checks::new();
    let b = Budget::default();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut bad = 0;
    for _ in 0..1000 {
        let (x, y, z) = (random_weyl(&mut rng), random_weyl(&mut rng), random_weyl(&mut rng));
        let assoc = x.mul(&y).mul(&z) == x.mul(&y.mul(&z));
        let dist = x.mul(&(&y + &z)) == &x.mul(&y) + &x.mul(&z);
        bad += usize::from(!(assoc && dist));
    }
    check(&mut f, bad == 0, format!("Weyl axioms failed on {bad} triples"));
    for &(name, rank) in SMALL {
        let arr = fixture(name);
        let i = build_ideal(&arr, &ParameterBlock::random(arr.m(), arr.n(), 1), Families::ALL, false);
        let gb = rweyl_groebner(&i.gens, &b).unwrap();
        let reduces = i.gens.iter().chain(&gb).all(|g| rweyl_normal_form(g, &gb, &b).unwrap().is_zero());
        check(&mut f, reduces && rweyl_is_groebner(&gb, &b).unwrap(), format!("{name}: R_m basis check"));
        if arr.m() <= 2 {
            let order = weight01_order(arr.m());
            let dgb = d_groebner(&i.gens, &order, &b).unwrap();
            let ok = d_is_groebner(&dgb, &order, &b).unwrap()
                && i.gens.iter().all(|g| d_normal_form(g, &dgb, &order, &b).unwrap().is_zero());
            check(&mut f, ok, format!("{name}: D_m basis check"));
        }
        // Rescaled generators, with g0 replaced by g0 + c1 g1.
        let u = i.gens[0].universe().clone();
        let mut gens: Vec<_> = i.gens.iter().enumerate().map(|(k, g)| g.scale(&rat(k as i64 + 2, 3))).collect();
        if gens.len() > 1 {
            gens[0] = &gens[0] + &gens[1].left_mul_coeff(&QPoly::var(&u, 0));
        }
        let j = DIdeal::new(arr.m(), gens).unwrap();
        let r1 = holonomic_rank(&j, &b).unwrap().rank;
        let r2 = holonomic_rank_modular(&j, &b, 4).unwrap().rank;
        check(&mut f, r1 == Some(rank as usize) && r2 == r1, format!("{name}: rank not invariant"));
        for seed in [2, 3] {
            let got = rank_of(name, &["--exact", "--seed", &seed.to_string()]);
            check(&mut f, got == Some(rank), format!("{name} seed {seed}: rank {got:?}"));
        }
    }
    for seed in [2, 3] {
        let got = rank_of("five_lines", &["--seed", &seed.to_string()]);
        check(&mut f, got == Some(15), format!("five_lines seed {seed}: rank {got:?}"));
    }
    // Commutative bases of the singular loci.
    for name in ["two_lines", "two_site", "three_lines"] {
        let arr = fixture(name);
        let (_, r) = on(name, "singloc", &[]);
        let u = arr.c_universe();
        let gens: Vec<QPoly> =
            r["generators"].as_array().unwrap().iter().map(|g| QPoly::parse(g.as_str().unwrap(), &u).unwrap()).collect();
        let ideal = CommIdeal::new(&u, gens.clone()).unwrap();
        let gb = comm_groebner(&ideal, &TermOrder::DegRevLex, &b).unwrap();
        let ok = is_groebner(&gb, &TermOrder::DegRevLex, &b).unwrap()
            && gens.iter().all(|g| reduce(g, &gb, &TermOrder::DegRevLex, &b).unwrap().is_zero());
        check(&mut f, ok, format!("{name}: commutative basis check"));
    }
    f
}

fn cli_contract() -> Checks {
    let mut f = Checks::new();
    let (_, a) = on("two_site", "rank", &["--seed", "5"]);
    let (_, b) = on("two_site", "rank", &["--seed", "5"]);
    check(&mut f, a == b && a["seed"] == 5, "reports differ for identical runs");
    check(&mut f, a["rank"] == 4, "two_site rank report");
    check(&mut f, a["specialization"].as_object().is_some_and(|m| m.len() == 5), "specialization missing");
    let (code, _) = cli(&["rank", "--arrangement", "/nonexistent.json"]);
    check(&mut f, code == 2, format!("missing file exit {code}"));
    let (code, _) = on("three_site", "verify", &[]);
    check(&mut f, code == 2, format!("verify with n = 3 exit {code}"));
    let (code, _) = on("two_site", "verify", &["--points", "1", "--tol", "1e-14"]);
    check(&mut f, code == 4, format!("verify failure exit {code}"));
    f
}

type Suite = (&'static str, &'static str, fn() -> Checks);

fn main() {
    let suites: [Suite; 8] = [
        ("1", "holonomic ranks", criterion_1),
        ("2", "singular loci", criterion_2),
        ("3", "rank equals bounded regions", criterion_3),
        ("4", "singular locus inside the discriminantal arrangement", criterion_4),
        ("5", "numerical annihilation and Beta oracle", criterion_5),
        ("6", "ideal identities", criterion_6),
        ("7", "property suites", criterion_7),
        ("cli", "determinism and exit codes", cli_contract),
    ];
    let mut failed = 0;
    for (id, desc, run) in suites {
        let t = Instant::now();
        let fails = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| vec!["panicked".into()]);
        let secs = t.elapsed().as_secs_f64();
        if fails.is_empty() {
            println!("criterion {id}: PASS  {desc} ({secs:.1} s)");
        } else {
            failed += 1;
            println!("criterion {id}: FAIL  {desc} ({secs:.1} s): {}", fails.join("; "));
        }
    }
    // Not required: the three-site chain.
    let got = rank_of("three_site", &[]);
    let verdict = if got == Some(30) { "PASS" } else { "FAIL" };
    println!("stretch: {verdict}  three-site rank {got:?}, printed value 30 (not required)");
    if failed > 0 {
        std::process::exit(1);
    }
}
