//! Command-line surface: every subcommand produces a JSON report and an exit
//! code (0 success, 2 invalid input, 3 budget exhausted, 4 verification
//! failure).

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use hyperdmod::arrangement::{bounded_regions, discriminantal, regions_at, Arrangement};
use hyperdmod::comalg::{factor_match, singular_locus};
use hyperdmod::correlator::{build_ideal, operator_universe, operators, Families, ParameterBlock};
use hyperdmod::exactmath::{format_rational, parse_rational, QPoly, Rational};
use hyperdmod::numcheck::{random_exponents, random_point, setting_for, Stencil};
use hyperdmod::weyl::{
    holonomic_rank, holonomic_rank_modular, rweyl_groebner, rweyl_normal_form, Budget, BudgetExhausted, DIdeal,
    WeylElement,
};
use hyperdmod::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_UNDETERMINED: i32 = 3;
pub const EXIT_VERIFY_FAILED: i32 = 4;

#[derive(Parser, Debug, Clone)]
#[command(name = "hyperdmod", version, about = "Annihilating D-ideals of hyperplane-arrangement correlators")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Emit the operators, symbolic and specialized.
    Construct,
    /// Holonomic rank of the specialized ideal.
    Rank,
    /// Singular locus, compared with the discriminantal arrangement and the
    /// coordinate hyperplanes.
    Singloc,
    /// Discriminantal arrangement as linear forms in c.
    Discriminantal,
    /// Bounded and total region counts of the displaced arrangement.
    Regions {
        /// Displacement `c` as comma-separated rationals; generic when absent.
        #[arg(long, value_delimiter = ',')]
        c: Option<Vec<String>>,
    },
    /// Numerical annihilation check at random generic points (n <= 2).
    Verify,
    /// Equality of two left ideals of the rational Weyl algebra.
    CompareIdeals {
        /// Comma-separated parts, each a family string such as `HLP` or a
        /// generators JSON file.
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Arrangement JSON file `{"n": .., "m": .., "A": [[..], ..]}`.
    #[arg(long, global = true)]
    pub arrangement: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Family selection; with none of these flags all four are used.
    #[arg(long = "with-H", global = true)]
    pub with_h: bool,
    #[arg(long = "with-L", global = true)]
    pub with_l: bool,
    #[arg(long = "with-P", global = true)]
    pub with_p: bool,
    #[arg(long = "with-Q", global = true)]
    pub with_q: bool,
    /// Add one operator per kernel column of each non-circuit dependent set.
    #[arg(long = "nonminimal-deps", global = true)]
    pub nonminimal_deps: bool,
    #[arg(long, global = true, default_value_t = 1_000_000)]
    pub budget_steps: u64,
    #[arg(long, global = true, default_value_t = 30)]
    pub budget_degree: u32,
    /// Residual threshold for `verify`.
    #[arg(long, global = true, default_value_t = 1e-3)]
    pub tol: f64,
    /// Relative finite-difference step for `verify`.
    #[arg(long, global = true, default_value_t = 1e-3)]
    pub h_rel: f64,
    /// Number of random points for `verify`.
    #[arg(long, global = true, default_value_t = 3)]
    pub points: u64,
    /// Use exact rational-Weyl Gröbner bases instead of the modular method.
    #[arg(long, global = true)]
    pub exact: bool,
    /// Print a short human-readable summary instead of JSON.
    #[arg(long, global = true)]
    pub human: bool,
    /// Write the report to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

impl Common {
    pub fn families(&self) -> Families {
        if self.with_h || self.with_l || self.with_p || self.with_q {
            Families { h: self.with_h, l: self.with_l, p: self.with_p, q: self.with_q }
        } else {
            Families::ALL
        }
    }

    pub fn budget(&self) -> Budget {
        Budget { max_steps: self.budget_steps, max_degree: self.budget_degree }
    }
}

/// Report and exit code of one run.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub code: i32,
    pub report: Value,
}

enum Failure {
    Invalid(String),
    Undetermined(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Undetermined { reason } => Failure::Undetermined(reason),
            other => Failure::Invalid(other.to_string()),
        }
    }
}

impl From<BudgetExhausted> for Failure {
    fn from(e: BudgetExhausted) -> Self {
        Failure::Undetermined(e.reason)
    }
}

type Step<T> = std::result::Result<T, Failure>;

fn family_string(f: Families) -> String {
    [(f.h, 'H'), (f.l, 'L'), (f.p, 'P'), (f.q, 'Q')].iter().filter(|x| x.0).map(|x| x.1).collect()
}

fn parse_families(s: &str) -> Option<Families> {
    let mut f = Families::NONE;
    for ch in s.chars() {
        match ch {
            'H' => f.h = true,
            'L' => f.l = true,
            'P' => f.p = true,
            'Q' => f.q = true,
            _ => return None,
        }
    }
    (!s.is_empty()).then_some(f)
}

fn load_arrangement(path: Option<&Path>) -> Step<Arrangement> {
    let path = path.ok_or_else(|| Failure::Invalid("--arrangement FILE is required".into()))?;
    let text = fs::read_to_string(path).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))?;
    Ok(Arrangement::from_json(&text)?)
}

/// Runs one command.
pub fn run(cli: &Cli) -> Outcome {
    let common = &cli.common;
    let mut report = Map::new();
    report.insert("command".into(), command_name(&cli.command).into());
    report.insert("seed".into(), common.seed.into());
    let result = load_arrangement(common.arrangement.as_deref()).and_then(|arr| {
        report.insert("arrangement".into(), arr.to_json());
        dispatch(&cli.command, common, &arr, &mut report)
    });
    let code = match result {
        Ok(code) => code,
        Err(Failure::Invalid(msg)) => {
            report.insert("error".into(), msg.into());
            EXIT_INVALID
        }
        Err(Failure::Undetermined(reason)) => {
            report.insert("reason".into(), reason.into());
            EXIT_UNDETERMINED
        }
    };
    let status = match code {
        EXIT_OK => "ok",
        EXIT_INVALID => "invalid",
        EXIT_UNDETERMINED => "undetermined",
        _ => "failed",
    };
    report.insert("status".into(), status.into());
    Outcome { code, report: Value::Object(report) }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Construct => "construct",
        Command::Rank => "rank",
        Command::Singloc => "singloc",
        Command::Discriminantal => "discriminantal",
        Command::Regions { .. } => "regions",
        Command::Verify => "verify",
        Command::CompareIdeals { .. } => "compare-ideals",
    }
}

fn dispatch(cmd: &Command, common: &Common, arr: &Arrangement, report: &mut Map<String, Value>) -> Step<i32> {
    let families = common.families();
    let budget = common.budget();
    let params = ParameterBlock::random(arr.m(), arr.n(), common.seed);
    let needs_ideal = matches!(cmd, Command::Construct | Command::Rank | Command::Singloc);
    if needs_ideal {
        report.insert("families".into(), family_string(families).into());
        report.insert("nonminimal_deps".into(), common.nonminimal_deps.into());
    }
    let ideal = || {
        let i = build_ideal(arr, &params, families, common.nonminimal_deps);
        let spec = i.specialization_json();
        (i, spec)
    };
    match cmd {
        Command::Construct => {
            let sym = operators(arr, &ParameterBlock::Symbolic, families, common.nonminimal_deps);
            let spec = operators(arr, &params, families, common.nonminimal_deps);
            let ops: Vec<Value> = sym
                .iter()
                .zip(&spec)
                .map(|(a, b)| {
                    json!({
                        "family": a.family.to_string(),
                        "indices": a.indices.iter().map(|i| i + 1).collect::<Vec<_>>(),
                        "order": a.op.order(),
                        "symbolic": a.op.to_string(),
                        "specialized": b.op.to_string(),
                    })
                })
                .collect();
            let (_, spec_json) = ideal();
            report.insert("specialization".into(), spec_json);
            report.insert("operators".into(), ops.into());
            Ok(EXIT_OK)
        }
        Command::Rank => {
            let (i, spec_json) = ideal();
            report.insert("specialization".into(), spec_json);
            report.insert("method".into(), method(common).into());
            let r = if common.exact {
                holonomic_rank(&i, &budget)?
            } else {
                holonomic_rank_modular(&i, &budget, common.seed)?
            };
            if let Value::Object(fields) = r.to_json() {
                for (k, v) in fields {
                    if !(k == "groebner_basis" && !common.exact) {
                        report.insert(k, v);
                    }
                }
            }
            Ok(EXIT_OK)
        }
        Command::Singloc => {
            let (i, spec_json) = ideal();
            report.insert("specialization".into(), spec_json);
            let locus = singular_locus(&i, &budget)?;
            let gens: Vec<String> = locus.gens().iter().map(ToString::to_string).collect();
            report.insert("generators".into(), gens.into());
            let candidates = candidates(arr);
            let fm = factor_match(&locus, &candidates, &budget)?;
            let rows: Vec<Value> = candidates
                .iter()
                .zip(&fm.active)
                .map(|(f, a)| json!({ "factor": f.to_string(), "in_locus": a }))
                .collect();
            report.insert("candidates".into(), rows.into());
            report.insert("locus_in_candidates".into(), fm.product_in_radical.into());
            report.insert(
                "equals_candidates".into(),
                (fm.product_in_radical && fm.active.iter().all(|x| *x)).into(),
            );
            Ok(EXIT_OK)
        }
        Command::Discriminantal => {
            let forms: Vec<String> = discriminantal(arr).iter().map(ToString::to_string).collect();
            let with_axes: Vec<String> = candidates(arr).iter().map(ToString::to_string).collect();
            report.insert("forms".into(), forms.into());
            report.insert("with_coordinate_hyperplanes".into(), with_axes.into());
            Ok(EXIT_OK)
        }
        Command::Regions { c } => {
            match c {
                None => {
                    report.insert("generic".into(), true.into());
                    report.insert("bounded".into(), bounded_regions(arr).into());
                }
                Some(vals) => {
                    let c: Vec<Rational> =
                        vals.iter().map(|s| parse_rational(s.trim())).collect::<hyperdmod::Result<_>>()?;
                    if c.len() != arr.m() {
                        return Err(Failure::Invalid(format!("--c needs {} values", arr.m())));
                    }
                    let r = regions_at(arr, &c);
                    report.insert("generic".into(), false.into());
                    report.insert("c".into(), c.iter().map(format_rational).collect::<Vec<_>>().into());
                    report.insert("bounded".into(), r.bounded.into());
                    report.insert("total".into(), r.total.into());
                    report.insert("flats_by_dim".into(), r.flats_by_dim.into());
                }
            }
            Ok(EXIT_OK)
        }
        Command::Verify => verify(common, arr, report),
        Command::CompareIdeals { left, right } => {
            let (_, spec_json) = ideal();
            report.insert("specialization".into(), spec_json);
            report.insert("method".into(), method(common).into());
            report.insert("left".into(), left.clone().into());
            report.insert("right".into(), right.clone().into());
            let l = ideal_from_spec(left, arr, &params, common)?;
            let r = ideal_from_spec(right, arr, &params, common)?;
            if common.exact {
                let gl = rweyl_groebner(&l.gens, &budget)?;
                let gr = rweyl_groebner(&r.gens, &budget)?;
                let contained = |gens: &[WeylElement], gb: &[WeylElement]| -> Step<bool> {
                    for g in gens {
                        if !rweyl_normal_form(g, gb, &budget)?.is_zero() {
                            return Ok(false);
                        }
                    }
                    Ok(true)
                };
                let lr = contained(&l.gens, &gr)?;
                let rl = contained(&r.gens, &gl)?;
                report.insert("left_in_right".into(), lr.into());
                report.insert("right_in_left".into(), rl.into());
                report.insert("equal".into(), (lr && rl).into());
            } else {
                let sum = DIdeal::new(arr.m(), l.gens.iter().chain(&r.gens).cloned().collect())?;
                let rank = |i: &DIdeal| -> Step<Option<usize>> {
                    Ok(holonomic_rank_modular(i, &budget, common.seed)?.rank)
                };
                let (rl, rr, rs) = (rank(&l)?, rank(&r)?, rank(&sum)?);
                let js = |x: Option<usize>| x.map_or(Value::from("infinite"), Value::from);
                report.insert("rank_left".into(), js(rl));
                report.insert("rank_right".into(), js(rr));
                report.insert("rank_sum".into(), js(rs));
                if rs.is_none() {
                    return Err(Failure::Undetermined("sum ideal has infinite rank".into()));
                }
                report.insert("equal".into(), (rl == rs && rr == rs).into());
            }
            Ok(EXIT_OK)
        }
    }
}

fn method(common: &Common) -> &'static str {
    if common.exact {
        "exact"
    } else {
        "modular"
    }
}

/// Discriminantal forms followed by the coordinate hyperplanes `c_i` that
/// are not already among them.
pub fn candidates(arr: &Arrangement) -> Vec<QPoly> {
    let mut out = discriminantal(arr);
    let u = arr.c_universe();
    for i in 0..arr.m() {
        let ci = QPoly::var(&u, i);
        if !out.contains(&ci) {
            out.push(ci);
        }
    }
    out
}

/// Generators JSON: `{"generators": ["c1*d1 + ...", ...]}` over
/// `c1..cm, d1..dm` and the parameters `s1..sm, nu1..nun`.
fn load_generators(path: &Path, arr: &Arrangement) -> Step<Vec<WeylElement>> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))?;
    let v: Value =
        serde_json::from_str(&text).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))?;
    let gens = v
        .get("generators")
        .and_then(Value::as_array)
        .ok_or_else(|| Failure::Invalid(format!("{}: missing \"generators\" array", path.display())))?;
    let u = operator_universe(arr);
    gens.iter()
        .map(|g| {
            let s = g.as_str().ok_or_else(|| Failure::Invalid("generators must be strings".into()))?;
            Ok(WeylElement::parse(s, &u, arr.m())?)
        })
        .collect()
}

fn ideal_from_spec(spec: &str, arr: &Arrangement, params: &ParameterBlock, common: &Common) -> Step<DIdeal> {
    let values = params.values().expect("random parameters are specialized");
    let mut gens = Vec::new();
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match parse_families(part) {
            Some(f) => gens.extend(build_ideal(arr, params, f, common.nonminimal_deps).gens),
            None => {
                for g in load_generators(Path::new(part), arr)? {
                    gens.push(g.specialize(&values));
                }
            }
        }
    }
    if gens.is_empty() {
        return Err(Failure::Invalid(format!("empty ideal specification {spec:?}")));
    }
    Ok(DIdeal::new(arr.m(), gens)?)
}

fn verify(common: &Common, arr: &Arrangement, report: &mut Map<String, Value>) -> Step<i32> {
    if arr.n() > 2 {
        return Err(Failure::Invalid("numerical verification needs n <= 2".into()));
    }
    let families = common.families();
    report.insert("families".into(), family_string(families).into());
    report.insert("tol".into(), common.tol.into());
    report.insert("h_rel".into(), common.h_rel.into());
    let mut all_pass = true;
    let mut worst: f64 = 0.0;
    let mut points = Vec::new();
    for k in 0..common.points {
        let params = random_exponents(arr.m(), arr.n(), common.seed.wrapping_add(k));
        let (c, seed_point) = random_point(arr, common.seed.wrapping_add(1000 + k))?;
        let mut setting = setting_for(&c, &params)?;
        setting.h_rel = common.h_rel;
        let mut stencil = Stencil::new(arr, &setting, &seed_point)?;
        let ideal = build_ideal(arr, &params, families, common.nonminimal_deps);
        let mut rows = Vec::new();
        for op in operators(arr, &params, families, common.nonminimal_deps) {
            let mut row = json!({
                "family": op.family.to_string(),
                "indices": op.indices.iter().map(|i| i + 1).collect::<Vec<_>>(),
                "order": op.op.order(),
            });
            if op.op.order() > 3 {
                row["skipped"] = "d-order above 3".into();
            } else {
                let r = stencil.residual(&op.op)?;
                let pass = r.relative < common.tol;
                all_pass &= pass;
                worst = worst.max(r.relative);
                row["residual"] = serde_json::to_value(&r).expect("serializable");
                row["pass"] = pass.into();
            }
            rows.push(row);
        }
        points.push(json!({
            "c": c.iter().map(format_rational).collect::<Vec<_>>(),
            "seed_point": seed_point,
            "specialization": ideal.specialization_json(),
            "phi": stencil.phi(),
            "operators": rows,
        }));
    }
    report.insert("points".into(), points.into());
    report.insert("worst_relative_residual".into(), worst.into());
    report.insert("pass".into(), all_pass.into());
    Ok(if all_pass { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

/// Short text rendering of a report.
pub fn human(report: &Value) -> String {
    let mut out = String::new();
    let Value::Object(map) = report else { return report.to_string() };
    for key in [
        "command", "status", "families", "method", "rank", "bounded", "total", "equal", "equals_candidates",
        "locus_in_candidates", "pass", "worst_relative_residual", "reason", "error",
    ] {
        if let Some(v) = map.get(key) {
            out.push_str(&format!("{key}: {}\n", v.as_str().map_or_else(|| v.to_string(), str::to_string)));
        }
    }
    for key in ["generators", "forms"] {
        if let Some(Value::Array(items)) = map.get(key) {
            out.push_str(&format!("{key}:\n"));
            for it in items {
                out.push_str(&format!("  {}\n", it.as_str().unwrap_or_default()));
            }
        }
    }
    out
}

/// Renders a report as pretty JSON with a trailing newline.
pub fn render(report: &Value) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("serializable");
    s.push('\n');
    s
}
