//! The `tstruct` command line: JSON in, JSON out.

use std::ffi::OsString;
use std::io::Read;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use tstruct_core::corpus::{
    cofinite_universe, finite_universe, fg_object_corpus, split_poset, two_chain, vee_poset, DEFAULT_SEED,
};
use tstruct_core::derived::{
    engine_report, in_aisle, in_coaisle, orthogonality_check, tau_filtration, CechOracle, FormalObject, HomKind,
    OrthogonalityWitness,
};
use tstruct_core::duality::{
    cm_membership_ways, dual_filtration_validate, dualizing_codim, kashiwara1_conditions, kashiwara2_conditions,
};
use tstruct_core::filtration::{cm_filtration, dual_filtration, enumerate_filtrations, CensusFilter};
use tstruct_core::json::{self as js, AnyFiltration};
use tstruct_core::suites::{resolve_suite, run_suite, SuiteConfig, SuiteReport};
use tstruct_core::{Error, FinPoset, FreeComplex, SpFiltration, SpecZ, Spectrum, ZSubset};

pub const SEED_VAR: &str = "TSTRUCT_SEED";

#[derive(Parser, Debug)]
#[command(name = "tstruct", version, about = "Compactly generated t-structures over finite posets and over Z")]
pub struct Cli {
    /// Seed for generated corpora (the TSTRUCT_SEED variable sets the default).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Suppress progress messages on stderr.
    #[arg(long, short, global = true)]
    pub quiet: bool,
    /// Indent the JSON output.
    #[arg(long, global = true)]
    pub pretty: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct FiltrationInput {
    /// Filtration JSON file ("-" or absent: stdin).
    #[arg(short = 'f', long = "filtration")]
    pub file: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Engine {
    Profile,
    Cech,
    Both,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Side {
    Aisle,
    Coaisle,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Filter {
    All,
    Weak,
    Violating,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Weak and strong Cousin conditions and the stabilization report.
    CheckCousin(FiltrationInput),
    /// The Cohen-Macaulay filtration of a codimension function.
    Cm {
        /// {"spectrum": "Z" | poset, "codim": {...}} ("-" or absent: stdin).
        #[arg(short = 'f', long = "input")]
        file: Option<PathBuf>,
    },
    /// The dual filtration, validated against dualization over Z.
    Dual {
        #[command(flatten)]
        input: FiltrationInput,
        /// Codimension function JSON; defaults to the one of the dualizing complex Z.
        #[arg(long)]
        codim: Option<PathBuf>,
    },
    /// Restriction of a filtration to the generalizations of a point.
    Localize {
        #[command(flatten)]
        input: FiltrationInput,
        /// Point name, e.g. "(3)", "0" or a poset id.
        #[arg(long)]
        at: String,
    },
    /// Enumerates filtrations with levels in a universe of subsets on a window.
    Census {
        /// Degree window a..b.
        #[arg(long, default_value = "-3..3", allow_hyphen_values = true)]
        window: String,
        /// "Z", "two-chain", "split", "vee" or a poset JSON file.
        #[arg(long, default_value = "Z")]
        spectrum: String,
        /// Primes spanning the universe over Z.
        #[arg(long, value_delimiter = ',', default_value = "2,3,5")]
        primes: Vec<u64>,
        /// Also use cofinite subsets over Z.
        #[arg(long)]
        cofinite: bool,
        #[arg(long, value_enum, default_value = "all")]
        filter: Filter,
        #[arg(long)]
        count_only: bool,
        /// Refuse universes with more than this many raw sequences.
        #[arg(long, default_value_t = 1u128 << 24)]
        cap: u128,
    },
    /// Truncation of a complex or object with respect to a filtration over Z.
    Truncate {
        #[command(flatten)]
        input: FiltrationInput,
        /// Complex or object JSON file.
        #[arg(short = 'x', long = "object")]
        object: PathBuf,
        #[arg(long, value_enum, default_value = "profile")]
        engine: Engine,
        /// Also check orthogonality of the upper vertex on this window.
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
        /// Largest sampling level of the Cech oracle.
        #[arg(long, default_value_t = 48)]
        exponent_cap: u32,
    },
    /// Aisle or co-aisle membership over Z.
    Member {
        #[command(flatten)]
        input: FiltrationInput,
        #[arg(short = 'x', long = "object")]
        object: PathBuf,
        #[arg(long, value_enum)]
        side: Side,
        /// Window for the orthogonality witness on the co-aisle side.
        #[arg(long, default_value = "-4..4", allow_hyphen_values = true)]
        window: String,
    },
    /// The conditions of the two localization lemmas for a subset of Spec(Z).
    Kashiwara {
        #[arg(long)]
        lemma: u8,
        /// Subset JSON file.
        #[arg(short = 'z', long = "subset")]
        subset: PathBuf,
        #[arg(short = 'x', long = "object")]
        object: PathBuf,
        #[arg(short = 'n', allow_hyphen_values = true)]
        n: i64,
    },
    /// Membership in the Cohen-Macaulay heart over Z, computed two ways.
    CmCheck {
        #[arg(short = 'x', long = "object")]
        object: PathBuf,
    },
    /// Runs property suites; exit code 1 when any check fails.
    Verify {
        /// Suite name, criterionN, N, a group or "all".
        #[arg(long, default_value = "all")]
        suite: String,
        /// Size of the random complex corpus.
        #[arg(long, default_value_t = 500)]
        complexes: usize,
    },
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Input/usage problems exit with 2, everything else with 1.
fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_)
        | Error::Usage(_)
        | Error::NotPrime(_)
        | Error::UnknownPoint(_)
        | Error::InvalidPoset(_)
        | Error::NotSpStable(_)
        | Error::NotDecreasing(_)
        | Error::InvalidComplex(_)
        | Error::InvalidCodim { .. }
        | Error::SpectrumMismatch
        | Error::WindowTooLarge { .. } => 2,
        _ => 1,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::NotPrime(_) => "not-prime",
        Error::UnknownPoint(_) => "unknown-point",
        Error::InvalidPoset(_) => "invalid-poset",
        Error::NotSpStable(_) => "not-sp-stable",
        Error::NotDecreasing(_) => "not-decreasing",
        Error::SpectrumMismatch => "spectrum-mismatch",
        Error::NonFinite(_) => "non-finite",
        Error::InvalidCodim { .. } => "invalid-codim",
        Error::Unsupported(_) => "unsupported",
        Error::UnresolvedCertificate(_) => "unresolved-certificate",
        Error::InvalidComplex(_) => "invalid-complex",
        Error::WindowTooLarge { .. } => "window-too-large",
        Error::Hypothesis(_) => "hypothesis",
        Error::NotFinitelyGenerated(_) => "not-finitely-generated",
        Error::Inconsistent(_) => "inconsistent",
        Error::NotStabilized(_) => "not-stabilized",
        Error::Parse(_) => "parse",
        Error::Usage(_) => "usage",
    }
}

struct Ctx<'a> {
    stdin: &'a mut dyn Read,
    stdin_used: bool,
    seed: u64,
    quiet: bool,
    log: String,
}

impl Ctx<'_> {
    fn read(&mut self, path: Option<&PathBuf>) -> Result<Value, Error> {
        let text = match path {
            Some(p) if p.as_os_str() != "-" => std::fs::read_to_string(p)
                .map_err(|e| Error::Usage(format!("cannot read {}: {e}", p.display())))?,
            _ => {
                if self.stdin_used {
                    return Err(Error::Usage("stdin can feed only one input".into()));
                }
                self.stdin_used = true;
                let mut s = String::new();
                self.stdin.read_to_string(&mut s).map_err(|e| Error::Usage(format!("cannot read stdin: {e}")))?;
                s
            }
        };
        let source = path.map(|p| p.display().to_string()).unwrap_or_else(|| "stdin".into());
        js::parse(&text).map_err(|e| match e {
            Error::Parse(m) => Error::Parse(format!("{source}: {m}")),
            other => other,
        })
    }

    fn progress(&mut self, msg: impl AsRef<str>) {
        if !self.quiet {
            self.log.push_str(msg.as_ref());
            self.log.push('\n');
        }
    }
}

/// Parses "a..b" (also "a,b").
pub fn parse_window(s: &str) -> Result<(i64, i64), Error> {
    let (a, b) = s
        .split_once("..")
        .or_else(|| s.split_once(','))
        .ok_or_else(|| Error::Usage(format!("window \"{s}\" is not of the form a..b")))?;
    let num = |t: &str| t.trim().parse::<i64>().map_err(|_| Error::Usage(format!("window bound \"{t}\" is not an integer")));
    let (a, b) = (num(a)?, num(b)?);
    if a > b {
        return Err(Error::Usage(format!("empty window {a}..{b}")));
    }
    Ok((a, b))
}

fn z_filtration(f: AnyFiltration) -> Result<SpFiltration<SpecZ>, Error> {
    match f {
        AnyFiltration::Z(f) => Ok(f),
        AnyFiltration::Poset(_) => Err(Error::Usage("this command works over Spec(Z) only".into())),
    }
}

fn witness_json(w: &OrthogonalityWitness) -> Value {
    json!({
        "point": w.point.to_string(),
        "degree": js::int(w.degree),
        "shift": js::int(w.shift),
        "kind": match w.kind { HomKind::Hom => "hom", HomKind::Ext1 => "ext1" },
        "class": js::module_to_json(&w.class),
    })
}

fn cousin_json<S: Spectrum>(f: &SpFiltration<S>, sub: impl Fn(&S::Subset) -> Value) -> Value {
    let sp = f.spectrum();
    let name = |p: &S::Point| sp.point_name(p);
    let weak = f.weak_cousin();
    let strong = f.strong_cousin();
    json!({
        "weak": weak.holds,
        "witnesses": js::cousin_to_json(&weak, name),
        "strong": strong.holds,
        "strongWitnesses": js::cousin_to_json(&strong, name),
        "stabilization": js::stabilization_to_json(&f.stabilization_report(), sub),
    })
}

fn check_cousin(ctx: &mut Ctx, input: &FiltrationInput) -> Result<(Value, i32), Error> {
    let f = js::filtration_from_json(&ctx.read(input.file.as_ref())?)?;
    let out = match &f {
        AnyFiltration::Z(f) => cousin_json(f, js::zsubset_to_json),
        AnyFiltration::Poset(f) => {
            let sp = f.spectrum().clone();
            cousin_json(f, |z| js::point_set_to_json(&sp, z))
        }
    };
    Ok((out, 0))
}

fn cm(ctx: &mut Ctx, file: Option<&PathBuf>) -> Result<(Value, i32), Error> {
    let v = ctx.read(file)?;
    let codim = v.get("codim");
    let f = match v.get("spectrum") {
        None => AnyFiltration::Z(cm_filtration(&SpecZ, &codim.map(js::zcodim_from_json).transpose()?.unwrap_or_else(dualizing_codim))?),
        Some(Value::String(s)) if s == "Z" => {
            AnyFiltration::Z(cm_filtration(&SpecZ, &codim.map(js::zcodim_from_json).transpose()?.unwrap_or_else(dualizing_codim))?)
        }
        Some(Value::String(s)) => return Err(Error::Parse(format!("spectrum: unknown spectrum \"{s}\""))),
        Some(p) => {
            let sp = js::poset_from_json(p)?;
            let d = js::poset_codim_from_json(&sp, codim.ok_or_else(|| Error::Parse("codim: missing".into()))?)?;
            AnyFiltration::Poset(cm_filtration(&sp, &d)?)
        }
    };
    Ok((json!({ "filtration": js::filtration_to_json(&f) }), 0))
}

fn dual(ctx: &mut Ctx, input: &FiltrationInput, codim: Option<&PathBuf>) -> Result<(Value, i32), Error> {
    let fv = ctx.read(input.file.as_ref())?;
    let f = js::filtration_from_json(&fv)?;
    let codim_v = match codim {
        Some(p) => Some(ctx.read(Some(p))?),
        None => fv.get("codim").cloned(),
    };
    match f {
        AnyFiltration::Z(f) => {
            let d = codim_v.as_ref().map(js::zcodim_from_json).transpose()?.unwrap_or_else(dualizing_codim);
            let dual = dual_filtration(&f, &d)?;
            let mut out = json!({ "dual": js::zfiltration_to_json(&dual) });
            if d == dualizing_codim() {
                let samples = fg_object_corpus(ctx.seed, 200);
                let v = dual_filtration_validate(&f, &samples)?;
                out["validation"] = json!({
                    "trials": v.trials,
                    "passed": v.passed(),
                    "mismatches": v.mismatches.iter().map(|m| json!({
                        "object": js::object_to_json(&m.object),
                        "inCoaisle": m.in_coaisle,
                        "dualInAisle": m.dual_in_aisle,
                    })).collect::<Vec<_>>(),
                });
                return Ok((out, if v.passed() { 0 } else { 1 }));
            }
            Ok((out, 0))
        }
        AnyFiltration::Poset(f) => {
            let cv = codim_v.ok_or_else(|| Error::Usage("a codimension function is required over a poset".into()))?;
            let d = js::poset_codim_from_json(f.spectrum(), &cv)?;
            let dual = dual_filtration(&f, &d)?;
            Ok((json!({ "dual": js::poset_filtration_to_json(&dual) }), 0))
        }
    }
}

fn localize(ctx: &mut Ctx, input: &FiltrationInput, at: &str) -> Result<(Value, i32), Error> {
    let f = js::filtration_from_json(&ctx.read(input.file.as_ref())?)?;
    let local = match &f {
        AnyFiltration::Z(f) => f.localize(&SpecZ.parse_point(at)?)?,
        AnyFiltration::Poset(f) => f.localize(&f.spectrum().parse_point(at)?)?,
    };
    Ok((
        json!({
            "at": at,
            "filtration": js::poset_filtration_to_json(&local),
            "weak": local.weak_cousin().holds,
        }),
        0,
    ))
}

fn builtin_poset(name: &str) -> Option<FinPoset> {
    match name {
        "two-chain" | "chain2" => Some(two_chain()),
        "split" => Some(split_poset()),
        "vee" => Some(vee_poset()),
        _ => None,
    }
}

#[allow(clippy::too_many_arguments)]
fn census(
    ctx: &mut Ctx,
    window: &str,
    spectrum: &str,
    primes: &[u64],
    cofinite: bool,
    filter: Filter,
    count_only: bool,
    cap: u128,
) -> Result<(Value, i32), Error> {
    let window = parse_window(window)?;
    let filter = match filter {
        Filter::All => CensusFilter::All,
        Filter::Weak => CensusFilter::WeakCousin,
        Filter::Violating => CensusFilter::ViolatesWeakCousin,
    };
    let (count, list) = if spectrum == "Z" {
        for &p in primes {
            tstruct_core::Prime::new(p)?;
        }
        let universe = if cofinite { cofinite_universe(primes) } else { finite_universe(primes) };
        let fs = enumerate_filtrations(&SpecZ, &universe, window, filter, cap)?;
        (fs.len(), if count_only { vec![] } else { fs.iter().map(js::zfiltration_to_json).collect() })
    } else {
        let sp = match builtin_poset(spectrum) {
            Some(p) => p,
            None => {
                let v = ctx.read(Some(&PathBuf::from(spectrum)))?;
                js::poset_from_json(v.get("spectrum").unwrap_or(&v))?
            }
        };
        let ups = sp.up_sets(20)?;
        let fs = enumerate_filtrations(&sp, &ups, window, filter, cap)?;
        (fs.len(), if count_only { vec![] } else { fs.iter().map(js::poset_filtration_to_json).collect() })
    };
    ctx.progress(format!("census: {count} filtrations"));
    let mut out = json!({ "window": [js::int(window.0), js::int(window.1)], "count": count });
    if !count_only {
        out["filtrations"] = Value::Array(list);
    }
    Ok((out, 0))
}

fn read_object(ctx: &mut Ctx, path: &PathBuf) -> Result<(FormalObject, Option<FreeComplex>), Error> {
    let v = ctx.read(Some(path))?;
    js::object_or_complex_from_json(&v)
}

fn truncate(
    ctx: &mut Ctx,
    input: &FiltrationInput,
    object: &PathBuf,
    engine: Engine,
    window: Option<&str>,
    cap: u32,
) -> Result<(Value, i32), Error> {
    let f = z_filtration(js::filtration_from_json(&ctx.read(input.file.as_ref())?)?)?;
    let (x, cx) = read_object(ctx, object)?;
    let mut code = 0;
    let engine_result = tau_filtration(&f, &x)?;
    let mut out = if engine == Engine::Cech {
        json!({})
    } else {
        js::truncation_to_json(&engine_result)
    };
    if engine != Engine::Profile {
        let cx = cx.ok_or_else(|| Error::Usage("the Cech engine needs a free complex (with minDeg)".into()))?;
        let oracle = CechOracle { start_level: 12.min(cap), max_level: cap };
        let (lower, upper) = oracle.tau_filtration(&f, &cx)?;
        let oracle_json = json!({
            "lower": js::oracle_report_to_json(&lower),
            "upper": js::oracle_report_to_json(&upper),
        });
        if engine == Engine::Cech {
            out = json!({
                "lower": oracle_json["lower"],
                "upper": oracle_json["upper"],
                "determinate": true,
                "fg": {
                    "lower": lower.values().all(|d| d.prufer.is_empty()),
                    "upper": upper.values().all(|d| d.prufer.is_empty()),
                },
            });
        } else {
            let agree = engine_report(&engine_result.lower)? == lower && engine_report(&engine_result.upper)? == upper;
            out["oracle"] = oracle_json;
            out["agree"] = Value::from(agree);
            if !agree {
                code = 1;
            }
        }
    }
    if let Some(w) = window {
        let w = parse_window(w)?;
        let witness = orthogonality_check(&f, &engine_result.upper, w)?;
        out["orthogonality"] = json!({
            "window": [js::int(w.0), js::int(w.1)],
            "holds": witness.is_none(),
            "witness": witness.as_ref().map(witness_json),
        });
        if witness.is_some() {
            code = 1;
        }
    }
    Ok((out, code))
}

fn member(ctx: &mut Ctx, input: &FiltrationInput, object: &PathBuf, side: Side, window: &str) -> Result<(Value, i32), Error> {
    let f = z_filtration(js::filtration_from_json(&ctx.read(input.file.as_ref())?)?)?;
    let (x, _) = read_object(ctx, object)?;
    let out = match side {
        Side::Aisle => json!({ "side": "aisle", "member": in_aisle(&f, &x)? }),
        Side::Coaisle => {
            let w = parse_window(window)?;
            let witness = orthogonality_check(&f, &x, w)?;
            json!({
                "side": "coaisle",
                "member": in_coaisle(&f, &x)?,
                "witness": witness.as_ref().map(witness_json),
            })
        }
    };
    Ok((out, 0))
}

fn kashiwara(ctx: &mut Ctx, lemma: u8, subset: &PathBuf, object: &PathBuf, n: i64) -> Result<(Value, i32), Error> {
    let z: ZSubset = js::zsubset_from_json(&ctx.read(Some(subset))?, "subset")?;
    let (x, _) = read_object(ctx, object)?;
    let (conditions, equivalent) = match lemma {
        1 => {
            let k = kashiwara1_conditions(&z, &x, n)?;
            (json!({ "c1": k.c1, "c2": k.c2, "c3": k.c3 }), k.equivalent())
        }
        2 => {
            let k = kashiwara2_conditions(&z, &x, n)?;
            (json!({ "c1": k.c1, "c2": k.c2 }), k.equivalent())
        }
        other => return Err(Error::Usage(format!("--lemma must be 1 or 2, got {other}"))),
    };
    Ok((
        json!({ "lemma": lemma, "n": js::int(n), "conditions": conditions, "equivalent": equivalent }),
        if equivalent { 0 } else { 1 },
    ))
}

fn cm_check(ctx: &mut Ctx, object: &PathBuf) -> Result<(Value, i32), Error> {
    let (x, _) = read_object(ctx, object)?;
    let w = cm_membership_ways(&x)?;
    let agree = w.by_duality == w.by_supports;
    Ok((
        json!({ "member": w.by_supports, "byDuality": w.by_duality, "bySupports": w.by_supports, "agree": agree }),
        if agree { 0 } else { 1 },
    ))
}

fn report_json(r: &SuiteReport) -> Value {
    json!({
        "id": r.id,
        "title": r.title,
        "passed": r.passed(),
        "checked": r.tally.checked,
        "failed": r.tally.failed,
        "examples": r.tally.examples,
        "stats": r.tally.stats,
    })
}

/// Runs the same commands twice and compares their output bytes.
fn determinism_report(seed: u64) -> Value {
    let fixture = r#"{"spectrum":"Z","tail":{"kind":"whole"},"window":{"start":0,"end":1},"levels":[[2],[2]]}"#;
    let runs: [&[&str]; 3] = [
        &["census", "--window", "-1..1", "--count-only"],
        &["census", "--spectrum", "two-chain", "--window", "0..1"],
        &["dual"],
    ];
    let mut checked = 0;
    let mut failed = Vec::new();
    for args in runs {
        let seed_s = seed.to_string();
        let argv: Vec<&str> = ["tstruct", "--quiet", "--seed", seed_s.as_str()].into_iter().chain(args.iter().copied()).collect();
        let a = run(argv.clone(), &mut fixture.as_bytes());
        let b = run(argv, &mut fixture.as_bytes());
        checked += 1;
        if a != b || a.code != 0 {
            failed.push(format!("{args:?}"));
        }
    }
    json!({
        "id": "cli",
        "title": "byte-identical output",
        "passed": failed.is_empty(),
        "checked": checked,
        "failed": failed.len(),
        "examples": failed,
        "stats": {},
    })
}

fn verify(ctx: &mut Ctx, suite: &str, complexes: usize) -> Result<(Value, i32), Error> {
    let cfg = SuiteConfig { seed: ctx.seed, complexes, ..SuiteConfig::default() };
    let mut ids = if suite == "cli" { vec![] } else { resolve_suite(suite)? };
    ids.dedup();
    let mut reports = Vec::new();
    let mut ok = true;
    for id in ids {
        let r = run_suite(id, &cfg)?;
        ctx.progress(format!(
            "{:<11} {} {:>8} checks {:>9.2?}",
            r.id,
            if r.passed() { "pass" } else { "FAIL" },
            r.tally.checked,
            r.elapsed
        ));
        ok &= r.passed();
        reports.push(report_json(&r));
    }
    if suite == "all" || suite == "cli" {
        let d = determinism_report(ctx.seed);
        ok &= d["passed"] == Value::Bool(true);
        reports.push(d);
    }
    Ok((json!({ "suite": suite, "seed": js::uint(ctx.seed), "passed": ok, "suites": reports }), if ok { 0 } else { 1 }))
}

fn dispatch(ctx: &mut Ctx, cmd: &Command) -> Result<(Value, i32), Error> {
    match cmd {
        Command::CheckCousin(input) => check_cousin(ctx, input),
        Command::Cm { file } => cm(ctx, file.as_ref()),
        Command::Dual { input, codim } => dual(ctx, input, codim.as_ref()),
        Command::Localize { input, at } => localize(ctx, input, at),
        Command::Census { window, spectrum, primes, cofinite, filter, count_only, cap } => {
            census(ctx, window, spectrum, primes, *cofinite, *filter, *count_only, *cap)
        }
        Command::Truncate { input, object, engine, window, exponent_cap } => {
            truncate(ctx, input, object, *engine, window.as_deref(), *exponent_cap)
        }
        Command::Member { input, object, side, window } => member(ctx, input, object, *side, window),
        Command::Kashiwara { lemma, subset, object, n } => kashiwara(ctx, *lemma, subset, object, *n),
        Command::CmCheck { object } => cm_check(ctx, object),
        Command::Verify { suite, complexes } => verify(ctx, suite, *complexes),
    }
}

fn seed_from_env() -> Result<Option<u64>, Error> {
    match std::env::var(SEED_VAR) {
        Ok(s) => s.trim().parse().map(Some).map_err(|_| Error::Usage(format!("{SEED_VAR}=\"{s}\" is not an integer"))),
        Err(_) => Ok(None),
    }
}

fn render(v: &Value, pretty: bool) -> String {
    let mut s = if pretty { serde_json::to_string_pretty(v) } else { serde_json::to_string(v) }.expect("JSON values serialize");
    s.push('\n');
    s
}

/// Runs one command line, reading inputs named "-" (or omitted) from `stdin`.
pub fn run<I, T>(argv: I, stdin: &mut dyn Read) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let fail = |e: Error, log: String, pretty: bool| Outcome {
        code: exit_code(&e),
        stdout: String::new(),
        stderr: log + &render(&js::with_schema(json!({ "error": { "kind": error_kind(&e), "message": e.to_string() } })), pretty),
    };
    let seed = match cli.seed.map(Ok).or_else(|| seed_from_env().transpose()).unwrap_or(Ok(DEFAULT_SEED)) {
        Ok(s) => s,
        Err(e) => return fail(e, String::new(), cli.pretty),
    };
    let mut ctx = Ctx { stdin, stdin_used: false, seed, quiet: cli.quiet, log: String::new() };
    match dispatch(&mut ctx, &cli.command) {
        Ok((v, code)) => Outcome { code, stdout: render(&js::with_schema(v), cli.pretty), stderr: ctx.log },
        Err(e) => fail(e, ctx.log, cli.pretty),
    }
}

/// Convenience for callers holding a filtration value.
pub fn z_filtration_json(f: &SpFiltration<SpecZ>) -> Value {
    js::zfiltration_to_json(f)
}
