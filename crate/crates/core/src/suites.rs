//! Runners for the acceptance criteria and for the invariants of each module.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::corpus::{
    cofinite_universe, complex_corpus, fg_object_corpus, finite_universe, poset_census, prop47_corpus, random_object,
    rng, split_poset, two_chain, vee_poset, z_census, z_cofinite_census, CENSUS_PRIMES, CENSUS_WINDOW, DEFAULT_SEED,
};
use crate::derived::{
    engine_report, first_violation_witness, in_aisle, in_coaisle, orthogonality_check, prop47_crosscheck, rgamma, rq,
    tau_filtration, tau_single, CechOracle, ElementaryModule, FormalObject, OracleReport,
};
use crate::duality::{
    cm_filtration_z, cm_membership_ways, codim_from_dualizing, dual_filtration_validate, dualize, dualizing_codim,
    kashiwara1_conditions, kashiwara2_conditions,
};
use crate::error::{Error, Result};
use crate::filtration::{cm_filtration, dual_filtration, enumerate_filtrations, CensusFilter, SpFiltration};
use crate::spectrum::poset::PointSet;
use crate::spectrum::{FinPoset, SpecZ, Spectrum, ZCodim, ZPoint, ZSubset};
use crate::zmodules::primes::factor;
use crate::zmodules::{hom_ext_tables, top_indices, FgZModule, FreeComplex, Prime};

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Size of the random complex corpus.
    pub complexes: usize,
    pub prop47_pairs: usize,
    pub duality_samples: usize,
    pub orthogonality_window: (i64, i64),
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { seed: DEFAULT_SEED, complexes: 500, prop47_pairs: 200, duality_samples: 200, orthogonality_window: (-4, 4) }
    }
}

const MAX_EXAMPLES: usize = 8;

/// Counts of checks and failures, with the first few failure messages.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Tally {
    pub checked: usize,
    pub failed: usize,
    pub examples: Vec<String>,
    pub stats: BTreeMap<String, u64>,
}

impl Tally {
    pub fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.fail(msg());
        }
    }

    fn fail(&mut self, msg: String) {
        self.failed += 1;
        if self.examples.len() < MAX_EXAMPLES {
            self.examples.push(msg);
        }
    }

    /// Unwraps `r`, recording an error as a failed check.
    pub fn ok<T>(&mut self, r: Result<T>, ctx: impl FnOnce() -> String) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.checked += 1;
                self.fail(format!("{}: {e}", ctx()));
                None
            }
        }
    }

    pub fn count(&mut self, key: &str) {
        *self.stats.entry(key.to_string()).or_default() += 1;
    }

    pub fn merge(&mut self, other: Tally) {
        self.checked += other.checked;
        self.failed += other.failed;
        let room = MAX_EXAMPLES.saturating_sub(self.examples.len());
        self.examples.extend(other.examples.into_iter().take(room));
        for (k, v) in other.stats {
            *self.stats.entry(k).or_default() += v;
        }
    }
}

/// Runs `f` on every item in parallel and merges the tallies in item order.
fn par_tally<T: Sync>(items: &[T], f: impl Fn(&T, &mut Tally) + Sync + Send) -> Tally {
    let parts: Vec<Tally> = items
        .par_iter()
        .map(|it| {
            let mut t = Tally::default();
            f(it, &mut t);
            t
        })
        .collect();
    parts.into_iter().fold(Tally::default(), |mut acc, t| {
        acc.merge(t);
        acc
    })
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub id: &'static str,
    pub title: &'static str,
    pub tally: Tally,
    pub elapsed: Duration,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.tally.failed == 0 && self.tally.checked > 0
    }
}

type Runner = fn(&SuiteConfig) -> Result<Tally>;

pub const SUITES: &[(&str, &str, Runner)] = &[
    ("criterion1", "classification round-trip", criterion1),
    ("criterion2", "weak Cousin necessity", criterion2),
    ("criterion3", "weak Cousin sufficiency over Z", criterion3),
    ("criterion4", "engine and Cech oracle agreement", criterion4),
    ("criterion5", "complex/object orthogonality equivalence", criterion5),
    ("criterion6", "top indices", criterion6),
    ("criterion7", "duality", criterion7),
    ("criterion8", "dual filtration validation", criterion8),
    ("criterion9", "discreteness", criterion9),
    ("spectrum", "spectrum invariants", spectrum_suite),
    ("filtration", "filtration invariants", filtration_suite),
    ("zmodules", "Z-module invariants", zmodules_suite),
    ("derived", "truncation invariants", derived_suite),
];

pub fn suite_ids() -> Vec<&'static str> {
    SUITES.iter().map(|(id, _, _)| *id).collect()
}

/// Expands `all`, the group names and `criterionN`/`N`.
pub fn resolve_suite(name: &str) -> Result<Vec<&'static str>> {
    let ids = match name {
        "all" => suite_ids(),
        "duality" => vec!["criterion7", "criterion8"],
        "truncation" => vec!["criterion3", "derived"],
        "orthogonality" => vec!["criterion3", "criterion5"],
        "oracle" => vec!["criterion2", "criterion4"],
        _ => {
            let want = if name.chars().all(|c| c.is_ascii_digit()) { format!("criterion{name}") } else { name.to_string() };
            match SUITES.iter().find(|(id, _, _)| *id == want) {
                Some((id, _, _)) => vec![*id],
                None => return Err(Error::Usage(format!("unknown suite '{name}'"))),
            }
        }
    };
    Ok(ids)
}

pub fn run_suite(id: &str, cfg: &SuiteConfig) -> Result<SuiteReport> {
    let (id, title, run) =
        SUITES.iter().find(|(s, _, _)| *s == id).ok_or_else(|| Error::Usage(format!("unknown suite '{id}'")))?;
    let t0 = Instant::now();
    let tally = run(cfg)?;
    Ok(SuiteReport { id, title, tally, elapsed: t0.elapsed() })
}

fn census_probes() -> Vec<ZPoint> {
    CENSUS_PRIMES.iter().map(|p| ZPoint::Maximal(Prime::new(*p).expect("prime"))).collect()
}

/// R/p placed in degree j.
pub fn stalk_generator(p: &ZPoint, j: i64) -> FormalObject {
    let m = match p {
        ZPoint::Generic => ElementaryModule::free(1),
        ZPoint::Maximal(q) => ElementaryModule::torsion(*q, 1, 1),
    };
    FormalObject::stalk(m, j)
}

/// A free resolution of R/p placed in degree j.
pub fn stalk_generator_complex(p: &ZPoint, j: i64) -> FreeComplex {
    match p {
        ZPoint::Generic => FreeComplex::stalk(1, j),
        ZPoint::Maximal(q) => FreeComplex::koszul(&[q.get() as i64]).shift(-j),
    }
}

/// Rebuilds a filtration from aisle membership of the stalks R/p[-j] on the
/// degrees window.0 - 2 ..= window.1 + 2, probing the points `probes` and the
/// points they force.
pub fn read_back_z(phi: &SpFiltration<SpecZ>, window: (i64, i64), probes: &[ZPoint]) -> Result<SpFiltration<SpecZ>> {
    let sp = SpecZ;
    let reps = sp.representatives(&[], probes);
    let read = |j: i64| -> Result<ZSubset> {
        let mut inside = BTreeSet::new();
        for p in &reps {
            if in_aisle(phi, &stalk_generator(p, j))? {
                inside.insert(p.clone());
            }
        }
        sp.subset_where(&[], probes, &|p| inside.contains(p))
    };
    let (a, b) = window;
    let levels = (a - 1..=b + 1).map(read).collect::<Result<Vec<_>>>()?;
    SpFiltration::new(sp, read(a - 2)?, a - 1, levels, read(b + 2)?)
}

/// The same reconstruction on a finite poset, where R/p[-j] lies in the aisle
/// exactly when V(p) ⊆ φ(j).
pub fn read_back_poset(phi: &SpFiltration<FinPoset>, window: (i64, i64)) -> Result<SpFiltration<FinPoset>> {
    let sp = phi.spectrum();
    let read = |j: i64| -> PointSet {
        sp.points().filter(|p| sp.is_subset(&sp.closure_of_point(p), phi.value(j))).collect()
    };
    let (a, b) = window;
    let levels = (a - 1..=b + 1).map(read).collect();
    SpFiltration::new(sp.clone(), read(a - 2), a - 1, levels, read(b + 2))
}

pub fn criterion1(_cfg: &SuiteConfig) -> Result<Tally> {
    let probes = census_probes();
    let mut t = Tally::default();
    for (census, window, label) in [
        (z_census(CensusFilter::All)?, CENSUS_WINDOW, "Z"),
        (z_cofinite_census(CensusFilter::All)?, (-1, 1), "Z cofinite"),
    ] {
        let part = par_tally(&census, |phi, t| {
            if let Some(back) = t.ok(read_back_z(phi, window, &probes), || phi.describe()) {
                t.check(&back == phi, || format!("{label}: {} read back as {}", phi.describe(), back.describe()));
            }
        });
        t.stats.insert(format!("filtrations {label}"), census.len() as u64);
        t.merge(part);
    }
    for (sp, window, label) in [(two_chain(), CENSUS_WINDOW, "2-chain"), (split_poset(), (-2, 2), "split")] {
        let census = poset_census(&sp, window, CensusFilter::All)?;
        let part = par_tally(&census, |phi, t| {
            if let Some(back) = t.ok(read_back_poset(phi, window), || phi.describe()) {
                t.check(&back == phi, || format!("{label}: {} read back as {}", phi.describe(), back.describe()));
            }
        });
        t.stats.insert(format!("filtrations {label}"), census.len() as u64);
        t.merge(part);
    }
    Ok(t)
}

fn oracle_has_prufer(r: &OracleReport) -> bool {
    r.values().any(|d| !d.prufer.is_empty())
}

pub fn criterion2(_cfg: &SuiteConfig) -> Result<Tally> {
    let violating = z_census(CensusFilter::ViolatesWeakCousin)?;
    let oracle = CechOracle::default();
    let mut t = par_tally(&violating, |phi, t| {
        let Some(report) = t.ok(first_violation_witness(phi), || phi.describe()) else { return };
        let Some(report) = report else {
            t.check(false, || format!("no witness for {}", phi.describe()));
            return;
        };
        t.check(report.holds(), || format!("finitely generated vertex for {}", phi.describe()));
        let (j, _, p) = phi.weak_cousin().witnesses[0].clone();
        let cx = stalk_generator_complex(&p, j - 1);
        t.check(FormalObject::from_free_complex(&cx) == report.object, || format!("resolution mismatch at {p}"));
        if let Some((lower, upper)) = t.ok(oracle.tau_filtration(phi, &cx), || phi.describe()) {
            t.check(oracle_has_prufer(&lower) || oracle_has_prufer(&upper), || {
                format!("oracle sees no divisible summand for {}", phi.describe())
            });
            if oracle_has_prufer(&lower) {
                t.count("oracle divisible in lower");
            }
            if oracle_has_prufer(&upper) {
                t.count("oracle divisible in upper");
            }
        }
    });
    t.stats.insert("violating filtrations".into(), violating.len() as u64);
    Ok(t)
}

fn sufficiency_filtrations() -> Result<Vec<SpFiltration<SpecZ>>> {
    Ok(z_census(CensusFilter::WeakCousin)?.into_iter().filter(|f| f.is_finite()).collect())
}

pub fn criterion3(cfg: &SuiteConfig) -> Result<Tally> {
    let phis = sufficiency_filtrations()?;
    let complexes = complex_corpus(cfg.seed, cfg.complexes);
    let window = cfg.orthogonality_window;
    let mut t = par_tally(&complexes, |x, t| {
        let xo = FormalObject::from_free_complex(x);
        for phi in &phis {
            let Some(tr) = t.ok(tau_filtration(phi, &xo), || phi.describe()) else { continue };
            let ctx = || format!("{} on {xo}", phi.describe());
            t.check(tr.determinate, || format!("indeterminate: {}", ctx()));
            t.check(tr.lower.is_fg() && tr.upper.is_fg(), || format!("not finitely generated: {}", ctx()));
            if let Some(a) = t.ok(in_aisle(phi, &tr.lower), ctx) {
                t.check(a, || format!("lower outside the aisle: {}", ctx()));
            }
            if let Some(c) = t.ok(in_coaisle(phi, &tr.upper), ctx) {
                t.check(c, || format!("upper outside the co-aisle: {}", ctx()));
            }
            if let Some(w) = t.ok(orthogonality_check(phi, &tr.upper, window), ctx) {
                t.check(w.is_none(), || format!("orthogonality fails: {} ({w:?})", ctx()));
            }
        }
    });
    t.stats.insert("filtrations".into(), phis.len() as u64);
    t.stats.insert("complexes".into(), complexes.len() as u64);
    Ok(t)
}

fn compare_reports(t: &mut Tally, what: impl Fn() -> String, engine: Result<FormalObject>, oracle: Result<OracleReport>) {
    let Some(e) = t.ok(engine, &what) else { return };
    let Some(o) = t.ok(oracle, &what) else { return };
    let Some(e) = t.ok(engine_report(&e), &what) else { return };
    t.check(e == o, || format!("{}: engine {e:?} oracle {o:?}", what()));
}

fn agreement_on(
    t: &mut Tally,
    oracle: &CechOracle,
    x: &FreeComplex,
    phis: &[&SpFiltration<SpecZ>],
    steps: &BTreeSet<(i64, ZSubset)>,
) {
    let xo = FormalObject::from_free_complex(x);
    let zs: BTreeSet<&ZSubset> = steps.iter().map(|(_, z)| z).collect();
    for z in zs {
        let what = || format!("RΓ at {z} on {xo}");
        compare_reports(t, what, rgamma(z, &xo), oracle.rgamma(z, x));
        let what = || format!("RQ at {z} on {xo}");
        compare_reports(t, what, rq(z, &xo), oracle.rq(z, x));
    }
    for (i, z) in steps {
        let what = || format!("τ at ({i}, {z}) on {xo}");
        let engine = tau_single(*i, z, &xo);
        let o = oracle.tau_single(*i, z, x);
        let (el, eu) = match engine {
            Ok(r) => (Ok(r.lower), Ok(r.upper)),
            Err(e) => (Err(e.clone()), Err(e)),
        };
        let (ol, ou) = match o {
            Ok((l, u)) => (Ok(l), Ok(u)),
            Err(e) => (Err(e.clone()), Err(e)),
        };
        compare_reports(t, || format!("lower of {}", what()), el, ol);
        compare_reports(t, || format!("upper of {}", what()), eu, ou);
    }
    for phi in phis {
        let what = || format!("τ for {} on {xo}", phi.describe());
        let engine = tau_filtration(phi, &xo);
        let o = oracle.tau_filtration(phi, x);
        let (el, eu) = match engine {
            Ok(r) => (Ok(r.lower), Ok(r.upper)),
            Err(e) => (Err(e.clone()), Err(e)),
        };
        let (ol, ou) = match o {
            Ok((l, u)) => (Ok(l), Ok(u)),
            Err(e) => (Err(e.clone()), Err(e)),
        };
        compare_reports(t, || format!("lower of {}", what()), el, ol);
        compare_reports(t, || format!("upper of {}", what()), eu, ou);
    }
}

fn steps_of<'a>(phis: impl IntoIterator<Item = &'a SpFiltration<SpecZ>>) -> BTreeSet<(i64, ZSubset)> {
    phis.into_iter().filter(|f| !f.is_constant()).filter_map(|f| f.steps().ok()).flatten().collect()
}

pub fn criterion4(cfg: &SuiteConfig) -> Result<Tally> {
    let oracle = CechOracle::default();
    let phis = sufficiency_filtrations()?;
    let refs: Vec<&SpFiltration<SpecZ>> = phis.iter().collect();
    let steps = steps_of(phis.iter());
    let complexes = complex_corpus(cfg.seed, cfg.complexes);
    let mut t = par_tally(&complexes, |x, t| agreement_on(t, &oracle, x, &refs, &steps));
    let violating = z_census(CensusFilter::ViolatesWeakCousin)?;
    let part = par_tally(&violating, |phi, t| {
        let (j, _, p) = phi.weak_cousin().witnesses[0].clone();
        let cx = stalk_generator_complex(&p, j - 1);
        agreement_on(t, &oracle, &cx, &[phi], &steps_of([phi]));
    });
    t.merge(part);
    t.stats.insert("sufficiency cases".into(), (phis.len() * complexes.len()) as u64);
    t.stats.insert("necessity cases".into(), violating.len() as u64);
    Ok(t)
}

pub fn criterion5(cfg: &SuiteConfig) -> Result<Tally> {
    let pairs = prop47_corpus(cfg.seed, cfg.prop47_pairs)?;
    Ok(par_tally(&pairs, |(x, y), t| {
        let Some(r) = t.ok(prop47_crosscheck(x, y), || format!("{y}")) else { return };
        t.check(r.agree(), || format!("conditions differ on {y}: {r:?}"));
        t.count(if r.cond1 { "orthogonal" } else { "not orthogonal" });
    }))
}

pub fn criterion6(cfg: &SuiteConfig) -> Result<Tally> {
    let complexes = complex_corpus(cfg.seed, cfg.complexes);
    let mut points = vec![ZPoint::Generic];
    points.extend(census_probes());
    Ok(par_tally(&complexes, |x, t| {
        for p in &points {
            if let Some(ti) = t.ok(top_indices(x, p), || format!("{p}")) {
                t.check(ti.m == ti.h, || format!("{p}: {ti:?}"));
                t.count(if ti.m.is_some() { "finite" } else { "minus infinity" });
            }
        }
    }))
}

fn kashiwara_universe() -> Vec<ZSubset> {
    cofinite_universe(&CENSUS_PRIMES)
}

pub fn criterion7(cfg: &SuiteConfig) -> Result<Tally> {
    let samples = fg_object_corpus(cfg.seed, cfg.duality_samples);
    let zs = kashiwara_universe();
    let mut t = par_tally(&samples, |x, t| {
        if let Some(d) = t.ok(dualize(x), || format!("{x}")) {
            if let Some(dd) = t.ok(dualize(&d), || format!("{d}")) {
                t.check(&dd == x, || format!("double dual of {x} is {dd}"));
            }
        }
        if let Some(w) = t.ok(cm_membership_ways(x), || format!("{x}")) {
            t.check(w.by_duality == w.by_supports, || format!("membership differs on {x}: {w:?}"));
            t.count(if w.by_supports { "in CM heart" } else { "outside CM heart" });
        }
        for z in &zs {
            for n in -3..=3 {
                if let Some(k) = t.ok(kashiwara1_conditions(z, x, n), || format!("{z} {n} {x}")) {
                    t.check(k.equivalent(), || format!("first lemma at {z}, {n}, {x}: {k:?}"));
                }
                if let Some(k) = t.ok(kashiwara2_conditions(z, x, n), || format!("{z} {n} {x}")) {
                    t.check(k.equivalent(), || format!("second lemma at {z}, {n}, {x}: {k:?}"));
                }
            }
        }
    });
    let mut primes: Vec<Prime> = [2u64, 3, 5, 7, 11, 97].iter().map(|p| Prime::new(*p).expect("prime")).collect();
    primes.push(Prime::next_after(1_000_003));
    let points: Vec<ZPoint> = std::iter::once(ZPoint::Generic).chain(primes.iter().copied().map(ZPoint::Maximal)).collect();
    let mut derived = ZCodim { generic: 0, maximal: 0, exceptions: Default::default() };
    for p in &points {
        let Some(v) = t.ok(codim_from_dualizing(p), || format!("{p}")) else { continue };
        let want = if matches!(p, ZPoint::Generic) { 0 } else { 1 };
        t.check(v == want, || format!("codimension at {p} is {v}"));
        match p {
            ZPoint::Generic => derived.generic = v,
            ZPoint::Maximal(q) => {
                derived.maximal = v;
                derived.exceptions.insert(*q, v);
            }
        }
    }
    t.check(SpecZ.validate_codim_fn(&derived).is_ok(), || format!("derived codimension {derived:?} is not valid"));
    t.check(derived.value(&ZPoint::Generic) == dualizing_codim().value(&ZPoint::Generic), || "generic value".into());
    Ok(t)
}

/// Finitely generated samples for dual validation: the corpus and the stalks
/// ℤ[-j], ℤ/p^e[-j].
fn dual_samples(cfg: &SuiteConfig) -> Vec<FormalObject> {
    let mut out = fg_object_corpus(cfg.seed, cfg.duality_samples);
    for j in -5..=5 {
        out.push(FormalObject::stalk(ElementaryModule::free(1), j));
        for p in [2u64, 3, 5, 7] {
            for e in 1..=2 {
                out.push(FormalObject::stalk(ElementaryModule::torsion(Prime::new(p).expect("prime"), e, 1), j));
            }
        }
    }
    out
}

pub fn criterion8(cfg: &SuiteConfig) -> Result<Tally> {
    let mut t = Tally::default();
    let canonical = SpFiltration::standard(SpecZ, 0);
    if let Some(d) = t.ok(dual_filtration(&canonical, &dualizing_codim()), || "canonical".into()) {
        t.check(d == cm_filtration_z(), || format!("dual of the canonical filtration is {}", d.describe()));
    }
    let samples = dual_samples(cfg);
    for (census, label) in
        [(z_census(CensusFilter::All)?, "finite"), (z_cofinite_census(CensusFilter::All)?, "cofinite")]
    {
        let part = par_tally(&census, |phi, t| {
            if let Some(v) = t.ok(dual_filtration_validate(phi, &samples), || phi.describe()) {
                t.check(v.passed(), || format!("{}: {:?}", phi.describe(), v.mismatches.first()));
            }
        });
        t.stats.insert(format!("{label} filtrations"), census.len() as u64);
        t.merge(part);
    }
    Ok(t)
}

fn discreteness_checks<S: Spectrum>(sp: &S, census: &[SpFiltration<S>], universe: &[S::Subset], label: &str) -> Tally {
    let connected = sp.is_connected();
    let weak: Vec<&SpFiltration<S>> = census.iter().filter(|f| f.weak_cousin().holds).collect();
    let mut t = par_tally(&weak, |phi, t| {
        let r = phi.stabilization_report();
        let ctx = || format!("{label}: {}", phi.describe());
        t.check(&r.bottom == phi.value(phi.end() + 1), || format!("bottom of {}", ctx()));
        t.check(sp.is_open_closed(&r.bottom).is_ok() && r.bottom_open_closed, || format!("bottom not open-closed: {}", ctx()));
        t.check(sp.is_open_closed(&r.top).is_ok() && r.top_open_closed, || format!("top not open-closed: {}", ctx()));
        if connected && !phi.is_constant() {
            let hits = *phi.value(phi.start() - 1) == sp.whole() && *phi.head() == sp.empty();
            t.check(hits && r.discreteness == Some(true), || format!("not discrete: {}", ctx()));
        }
    });
    for z in universe {
        let c = SpFiltration::constant(sp.clone(), z.clone()).expect("valid subset");
        t.check(c.weak_cousin().holds == sp.is_open_closed(z).is_ok(), || {
            format!("{label}: constant {} misclassified", sp.describe_subset(z))
        });
    }
    t.stats.insert(format!("weak Cousin {label}"), weak.len() as u64);
    t
}

pub fn criterion9(_cfg: &SuiteConfig) -> Result<Tally> {
    let mut t = Tally::default();
    t.merge(discreteness_checks(&SpecZ, &z_census(CensusFilter::All)?, &finite_universe(&CENSUS_PRIMES), "Z"));
    t.merge(discreteness_checks(
        &SpecZ,
        &z_cofinite_census(CensusFilter::All)?,
        &cofinite_universe(&CENSUS_PRIMES),
        "Z cofinite",
    ));
    for (sp, window, label) in
        [(two_chain(), CENSUS_WINDOW, "2-chain"), (split_poset(), (-2, 2), "split"), (vee_poset(), (-1, 1), "vee")]
    {
        let census = poset_census(&sp, window, CensusFilter::All)?;
        let ups = sp.up_sets(1 << 12)?;
        t.merge(discreteness_checks(&sp, &census, &ups, label));
    }
    Ok(t)
}

/// Every poset on 1..=n labelled points whose order extends the labelling.
pub fn small_posets(n_max: usize) -> Vec<FinPoset> {
    let mut out = Vec::new();
    for n in 1..=n_max {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        for mask in 0u32..(1 << pairs.len()) {
            let mut rel = vec![vec![false; n]; n];
            for (k, &(i, j)) in pairs.iter().enumerate() {
                rel[i][j] = mask >> k & 1 == 1;
            }
            let transitive =
                (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| !(rel[i][j] && rel[j][k]) || rel[i][k])));
            if !transitive {
                continue;
            }
            let ids: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
            let covers: Vec<(String, String)> = pairs
                .iter()
                .filter(|&&(i, j)| rel[i][j] && !(0..n).any(|k| rel[i][k] && rel[k][j]))
                .map(|&(i, j)| (ids[i].clone(), ids[j].clone()))
                .collect();
            out.push(FinPoset::new(&ids, &covers).expect("strict order"));
        }
    }
    out
}

fn strictly_below(sp: &FinPoset, p: usize, q: usize) -> bool {
    p != q && sp.leq(p, q)
}

fn brute_covers(sp: &FinPoset) -> BTreeSet<(usize, usize)> {
    let n = sp.len();
    let mut out = BTreeSet::new();
    for p in 0..n {
        for q in 0..n {
            if strictly_below(sp, p, q) && !(0..n).any(|r| strictly_below(sp, p, r) && strictly_below(sp, r, q)) {
                out.insert((p, q));
            }
        }
    }
    out
}

fn brute_components(sp: &FinPoset) -> Vec<PointSet> {
    let n = sp.len();
    let mut comp: Vec<usize> = (0..n).collect();
    loop {
        let mut changed = false;
        for p in 0..n {
            for q in 0..n {
                if (sp.leq(p, q) || sp.leq(q, p)) && comp[p] != comp[q] {
                    let m = comp[p].min(comp[q]);
                    comp[p] = m;
                    comp[q] = m;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let mut by: BTreeMap<usize, PointSet> = BTreeMap::new();
    for (p, c) in comp.into_iter().enumerate() {
        by.entry(c).or_default().insert(p);
    }
    by.into_values().collect()
}

fn saturated_chain_lengths(covers: &BTreeSet<(usize, usize)>, p: usize, q: usize) -> Vec<usize> {
    if p == q {
        return vec![0];
    }
    covers
        .iter()
        .filter(|(a, _)| *a == p)
        .flat_map(|&(_, b)| saturated_chain_lengths(covers, b, q).into_iter().map(|l| l + 1))
        .collect()
}

fn all_codims(n: usize, max: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out.into_iter().flat_map(|d| (0..=max).map(move |v| [d.clone(), vec![v]].concat())).collect();
    }
    out
}

fn points_of(mask: u32, n: usize) -> Vec<usize> {
    (0..n).filter(|i| mask >> i & 1 == 1).collect()
}

pub fn spectrum_suite(_cfg: &SuiteConfig) -> Result<Tally> {
    let posets = small_posets(4);
    let mut t = par_tally(&posets, |sp, t| {
        let n = sp.len();
        let name = format!("{:?}", sp.covers());
        let cl = |mask: u32| sp.specialization_closure(&points_of(mask, n)).expect("valid points");
        for s in 0u32..(1 << n) {
            let c = cl(s);
            t.check(points_of(s, n).iter().all(|p| c.contains(p)), || format!("{name}: closure not extensive"));
            let again = sp.specialization_closure(&c.iter().copied().collect::<Vec<_>>()).expect("valid points");
            t.check(again == c, || format!("{name}: closure not idempotent"));
            t.check(sp.is_up_set(&c), || format!("{name}: closure not an up-set"));
            for sup in 0u32..(1 << n) {
                if sup & s == s {
                    t.check(c.is_subset(&cl(sup)), || format!("{name}: closure not monotone"));
                }
            }
        }
        let comps = brute_components(sp);
        for z in sp.up_sets(16).expect("small poset") {
            let union = comps.iter().all(|c| c.is_subset(&z) || c.is_disjoint(&z));
            t.check(sp.is_open_closed(&z).is_ok() == union, || format!("{name}: open-closed {z:?}"));
        }
        let covers = brute_covers(sp);
        for q in 0..n {
            let gens: BTreeSet<usize> = sp.immediate_generalizations(&q).expect("point").into_iter().collect();
            let want: BTreeSet<usize> = covers.iter().filter(|(_, b)| *b == q).map(|(a, _)| *a).collect();
            t.check(gens == want, || format!("{name}: generalizations of {q}"));
        }
        for d in all_codims(n, 3) {
            if sp.validate_codim_fn(&d).is_err() {
                continue;
            }
            for p in 0..n {
                for q in 0..n {
                    if sp.leq(p, q) {
                        let lens = saturated_chain_lengths(&covers, p, q);
                        t.check(lens.iter().all(|&l| l as i64 == d[q] - d[p]), || format!("{name}: chains {p}..{q} {d:?}"));
                    }
                }
            }
        }
    });
    let sp = SpecZ;
    let mut pts = vec![ZPoint::Generic];
    pts.extend(census_probes());
    for p in &pts {
        let c = sp.closure_of_point(p);
        t.check(sp.contains(&c, p), || format!("{p} not in its closure"));
        t.check(sp.specialization_closure(&[p.clone()])? == c, || format!("closure of {p}"));
        let gens = sp.immediate_generalizations(p)?;
        let want = if matches!(p, ZPoint::Generic) { vec![] } else { vec![ZPoint::Generic] };
        t.check(gens == want, || format!("generalizations of {p}"));
    }
    t.check(sp.is_open_closed(&ZSubset::Whole).is_ok() && sp.is_open_closed(&ZSubset::empty()).is_ok(), || {
        "trivial subsets of Spec Z".into()
    });
    t.check(sp.is_open_closed(&ZSubset::primes(&[2])?).is_err(), || "(2) is open-closed".into());
    t.stats.insert("posets".into(), posets.len() as u64);
    Ok(t)
}

/// Weak Cousin by direct inspection of covering pairs on the degrees where
/// the filtration can change.
fn brute_weak_cousin(phi: &SpFiltration<FinPoset>) -> bool {
    let sp = phi.spectrum();
    let covers = brute_covers(sp);
    let (lo, hi) = if phi.is_constant() { (0, 0) } else { (phi.start() - 2, phi.end() + 2) };
    (lo..=hi).all(|j| covers.iter().all(|&(p, q)| !phi.value(j).contains(&q) || phi.value(j - 1).contains(&p)))
}

type FiltrationKey = (i64, PointSet, Vec<PointSet>, PointSet);

fn key_of(f: &SpFiltration<FinPoset>) -> FiltrationKey {
    (f.start(), f.tail().clone(), f.levels().to_vec(), f.head().clone())
}

fn brute_census(sp: &FinPoset, window: (i64, i64)) -> BTreeSet<FiltrationKey> {
    let n = sp.len();
    let ups: Vec<PointSet> = (0u32..(1 << n))
        .map(|m| points_of(m, n).into_iter().collect::<PointSet>())
        .filter(|z| z.iter().all(|&p| (0..n).all(|q| !sp.leq(p, q) || z.contains(&q))))
        .collect();
    let width = (window.1 - window.0 + 1) as usize;
    let mut seqs: Vec<Vec<PointSet>> = ups.iter().map(|z| vec![z.clone()]).collect();
    for _ in 1..width {
        seqs = seqs
            .into_iter()
            .flat_map(|s| {
                let last = s.last().expect("nonempty").clone();
                ups.iter().filter(move |z| z.is_subset(&last)).map(move |z| [s.clone(), vec![z.clone()]].concat())
            })
            .collect();
    }
    let mut out = BTreeSet::new();
    for s in seqs {
        let f = SpFiltration::new(sp.clone(), s[0].clone(), window.0, s, PointSet::new()).expect("decreasing");
        out.insert(key_of(&f));
    }
    for z in &ups {
        out.insert(key_of(&SpFiltration::constant(sp.clone(), z.clone()).expect("up-set")));
    }
    out
}

pub fn filtration_suite(_cfg: &SuiteConfig) -> Result<Tally> {
    let posets = small_posets(4);
    let mut t = par_tally(&posets, |sp, t| {
        let name = format!("{:?}", sp.covers());
        for d in all_codims(sp.len(), 3) {
            if sp.validate_codim_fn(&d).is_err() {
                continue;
            }
            if let Some(cm) = t.ok(cm_filtration(sp, &d), || format!("{name} {d:?}")) {
                t.check(cm.weak_cousin().holds && cm.strong_cousin().holds, || format!("{name}: CM filtration of {d:?}"));
            }
        }
        for window in [(0, 0), (0, 1), (0, 2)] {
            let brute = brute_census(sp, window);
            let Some(all) = t.ok(enumerate_filtrations(sp, &sp.up_sets(16).expect("small"), window, CensusFilter::All, 1 << 20), || name.clone()) else { continue };
            let got: BTreeSet<FiltrationKey> = all.iter().map(key_of).collect();
            t.check(got.len() == all.len() && got == brute, || format!("{name}: census on {window:?}"));
            for f in &all {
                t.check(f.weak_cousin().holds == brute_weak_cousin(f), || format!("{name}: weak Cousin of {}", f.describe()));
            }
            let weak = enumerate_filtrations(sp, &sp.up_sets(16).expect("small"), window, CensusFilter::WeakCousin, 1 << 20);
            let bad = enumerate_filtrations(sp, &sp.up_sets(16).expect("small"), window, CensusFilter::ViolatesWeakCousin, 1 << 20);
            if let (Some(weak), Some(bad)) = (t.ok(weak, || name.clone()), t.ok(bad, || name.clone())) {
                let w: BTreeSet<FiltrationKey> = weak.iter().filter(|f| brute_weak_cousin(f)).map(key_of).collect();
                let b: BTreeSet<FiltrationKey> = bad.iter().filter(|f| !brute_weak_cousin(f)).map(key_of).collect();
                t.check(w.len() == weak.len() && b.len() == bad.len() && w.len() + b.len() == brute.len(), || {
                    format!("{name}: census filters on {window:?}")
                });
            }
            if window == (0, 1) && sp.len() <= 3 {
                for f in &all {
                    let local = sp.points().all(|q| f.localize(&q).map(|l| l.weak_cousin().holds).unwrap_or(false));
                    t.check(f.weak_cousin().holds == local, || format!("{name}: localization of {}", f.describe()));
                }
            }
        }
    });
    let census = z_census(CensusFilter::All)?;
    let d = dualizing_codim();
    let part = par_tally(&census, |phi, t| {
        let weak = phi.weak_cousin().holds;
        let reps = SpecZ.representatives(&phi.subsets(), &[]);
        let local = reps.iter().all(|q| phi.localize(q).map(|l| l.weak_cousin().holds).unwrap_or(false));
        t.check(weak == local, || format!("localization of {}", phi.describe()));
        if weak {
            let r = phi.stabilization_report();
            t.check(r.bottom_open_closed && SpecZ.is_open_closed(&r.bottom).is_ok(), || format!("bottom of {}", phi.describe()));
            if phi.is_finite() {
                let dd = dual_filtration(phi, &d).and_then(|x| dual_filtration(&x, &d));
                if let Some(dd) = t.ok(dd, || phi.describe()) {
                    t.check(&dd == phi, || format!("double dual of {} is {}", phi.describe(), dd.describe()));
                }
            }
        }
        for k in -2..=2 {
            let s = phi.shift(k);
            t.check((-7..=7).all(|i| s.value(i) == phi.value(i - k)), || format!("shift {k} of {}", phi.describe()));
        }
    });
    t.merge(part);
    let sample: Vec<&SpFiltration<SpecZ>> = census.iter().step_by(25).collect();
    let part = par_tally(&sample, |a, t| {
        if let Some(aa) = t.ok(a.meet(a), || a.describe()) {
            t.check(&aa == *a, || format!("meet not idempotent on {}", a.describe()));
        }
        for b in &sample {
            let (ab, ba) = (a.meet(b), b.meet(a));
            if let (Some(ab), Some(ba)) = (t.ok(ab, || a.describe()), t.ok(ba, || b.describe())) {
                t.check(ab == ba, || format!("meet not commutative on {} and {}", a.describe(), b.describe()));
                t.check((-7..=7).all(|i| *ab.value(i) == a.value(i).intersection(b.value(i))), || {
                    format!("meet not pointwise on {} and {}", a.describe(), b.describe())
                });
            }
        }
        for b in sample.iter().take(12) {
            for c in sample.iter().take(12) {
                let l = a.meet(b).and_then(|x| x.meet(c));
                let r = b.meet(c).and_then(|x| a.meet(&x));
                if let (Some(l), Some(r)) = (t.ok(l, || a.describe()), t.ok(r, || a.describe())) {
                    t.check(l == r, || format!("meet not associative at {}", a.describe()));
                }
            }
        }
    });
    t.merge(part);
    for cd in [
        dualizing_codim(),
        ZCodim { generic: -1, maximal: 0, exceptions: Default::default() },
        ZCodim { generic: 2, maximal: 3, exceptions: Default::default() },
    ] {
        if let Some(cm) = t.ok(cm_filtration(&SpecZ, &cd), || format!("{cd:?}")) {
            t.check(cm.weak_cousin().holds && cm.strong_cousin().holds, || format!("CM filtration of {cd:?}"));
        }
    }
    t.stats.insert("posets".into(), posets.len() as u64);
    Ok(t)
}

fn brute_hom_ext(a: u64, b: u64) -> (FgZModule, FgZModule) {
    let cyc = |n: u64| if n == 0 { FgZModule::free(1) } else { FgZModule::cyclic(n) };
    let hom = match (a, b) {
        (0, _) => cyc(b),
        (_, 0) => FgZModule::zero(),
        _ => cyc((0..b).filter(|x| (a * x) % b == 0).count() as u64),
    };
    let ext = match (a, b) {
        (0, _) => FgZModule::zero(),
        (_, 0) => cyc(a),
        _ => {
            let image: BTreeSet<u64> = (0..b).map(|x| (a * x) % b).collect();
            cyc(b / image.len() as u64)
        }
    };
    (hom, ext)
}

fn koszul_sequences() -> Vec<Vec<i64>> {
    vec![vec![0], vec![1], vec![2], vec![12], vec![4, 6], vec![6, 10, 15], vec![3, 9], vec![2, 3], vec![0, 8], vec![30, 42]]
}

fn gcd_all(seq: &[i64]) -> u64 {
    seq.iter().fold(0u64, |g, &a| num_integer::gcd(g, a.unsigned_abs()))
}

pub fn zmodules_suite(cfg: &SuiteConfig) -> Result<Tally> {
    let complexes = complex_corpus(cfg.seed, cfg.complexes);
    let mut t = par_tally(&complexes, |x, t| {
        let h: i64 = x.homology().iter().map(|(j, m)| if j % 2 == 0 { m.rank as i64 } else { -(m.rank as i64) }).sum();
        t.check(x.euler_characteristic() == h, || format!("Euler characteristic of {x:?}"));
    });
    for seq in koszul_sequences() {
        let k = FreeComplex::koszul(&seq);
        let g = gcd_all(&seq);
        let v = if g == 0 {
            ZSubset::Whole
        } else {
            ZSubset::primes(&factor(g).iter().map(|(p, _)| p.get()).collect::<Vec<_>>())?
        };
        let h = k.homology();
        for (j, m) in &h {
            t.check(m.support().is_subset(&v), || format!("support of H^{j} of K{seq:?}"));
        }
        let h0 = h.get(&0).cloned().unwrap_or_default();
        let want = if g == 0 { FgZModule::free(1) } else { FgZModule::cyclic(g) };
        t.check(h0 == want, || format!("H^0 of K{seq:?} is {h0:?}"));
    }
    let mut orders = vec![0u64];
    for p in [2u64, 3, 5, 7] {
        let mut q = p;
        while q <= 1 << 10 {
            orders.push(q);
            q *= p;
        }
    }
    let pairs: Vec<(u64, u64)> = orders.iter().flat_map(|&a| orders.iter().map(move |&b| (a, b))).collect();
    let part = par_tally(&pairs, |&(a, b), t| {
        let em = |n: u64| ElementaryModule::from_fg(&if n == 0 { FgZModule::free(1) } else { FgZModule::cyclic(n) });
        let Some((hom, ext)) = t.ok(hom_ext_tables(&em(a), &em(b)), || format!("{a} {b}")) else { return };
        let (bh, be) = brute_hom_ext(a, b);
        t.check(hom.to_fg() == Some(bh) && ext.to_fg() == Some(be), || format!("Hom/Ext of Z/{a}, Z/{b}"));
    });
    t.merge(part);
    Ok(t)
}

/// Whether every Hom from A[-k], k ≤ i, to Y vanishes, for A = ℤ/m.
fn orthogonal_to_cyclic(m: u64, i: i64, y: &FormalObject) -> Result<bool> {
    let a = ElementaryModule::from_fg(&FgZModule::cyclic(m));
    for (k, h) in y.iter() {
        if k <= i && !hom_ext_tables(&a, h)?.0.is_zero() {
            return Ok(false);
        }
        if k < i && !hom_ext_tables(&a, h)?.1.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn radical(m: u64) -> u64 {
    factor(m).iter().map(|(p, _)| p.get()).product()
}

fn local_in_aisle(phi_q: &SpFiltration<FinPoset>, emb: &[ZPoint], xq: &FormalObject) -> bool {
    xq.iter().all(|(j, m)| {
        let s = m.support();
        emb.iter().enumerate().all(|(k, p)| !s.contains(p) || phi_q.value(j).contains(&k))
    })
}

pub fn derived_suite(cfg: &SuiteConfig) -> Result<Tally> {
    let weak = sufficiency_filtrations()?;
    let all = z_census(CensusFilter::All)?;
    let complexes = complex_corpus(cfg.seed, cfg.complexes);
    let objects: Vec<FormalObject> = complexes.iter().map(FormalObject::from_free_complex).collect();
    let mut t = par_tally(&objects, |x, t| {
        for phi in &weak {
            let ctx = || format!("{} on {x}", phi.describe());
            let Some(tr) = t.ok(tau_filtration(phi, x), ctx) else { continue };
            if let Some(a) = t.ok(tau_filtration(phi, &tr.lower), ctx) {
                t.check(a.lower == tr.lower && a.upper.is_zero(), || format!("lower not fixed: {}", ctx()));
            }
            if let Some(b) = t.ok(tau_filtration(phi, &tr.upper), ctx) {
                t.check(b.lower.is_zero() && b.upper == tr.upper, || format!("upper not fixed: {}", ctx()));
            }
            if let Some(s) = t.ok(tau_filtration(&phi.shift(-1), &x.shift(1)), ctx) {
                t.check(s.lower == tr.lower.shift(1) && s.upper == tr.upper.shift(1), || format!("shift: {}", ctx()));
            }
            if phi.length() <= 2 {
                t.check(tr.lower.is_fg() && tr.upper.is_fg(), || format!("two-step filtration: {}", ctx()));
                t.count("two-step cases");
            }
        }
    });
    let sample: Vec<&FormalObject> = objects.iter().take(100).collect();
    let part = par_tally(&sample, |x, t| {
        let Some(j) = x.min_degree() else { return };
        for phi in all.iter().step_by(7) {
            let ctx = || format!("{} on {x}", phi.describe());
            if let Some(tr) = t.ok(tau_filtration(phi, x), ctx) {
                t.check(tr.lower.concentrated_in(j, i64::MAX) && tr.upper.concentrated_in(j, i64::MAX), || {
                    format!("degrees below {j}: {}", ctx())
                });
            }
        }
    });
    t.merge(part);
    let mut r = rng(cfg.seed ^ 0xad);
    let mut ys: Vec<FormalObject> = (0..150).map(|_| random_object(&mut r, false, (-3, 3))).collect();
    for (k, x) in objects.iter().take(100).enumerate() {
        if let Ok(tr) = tau_filtration(&weak[k % weak.len()], x) {
            ys.push(tr.upper);
        }
    }
    let part = par_tally(&ys, |y, t| {
        for m in [4u64, 8, 9, 12, 18, 25, 27, 50, 72, 100] {
            for i in -4..=4 {
                let (a, b) = (orthogonal_to_cyclic(m, i, y), orthogonal_to_cyclic(radical(m), i, y));
                if let (Some(a), Some(b)) = (t.ok(a, || format!("{y}")), t.ok(b, || format!("{y}"))) {
                    t.check(a == b, || format!("Z/{m} and its radical differ at {i} on {y}"));
                }
            }
        }
    });
    t.merge(part);
    let mut locals: Vec<FormalObject> = fg_object_corpus(cfg.seed, 60);
    locals.extend((0..40).map(|_| random_object(&mut r, false, (-3, 3))));
    let part = par_tally(&all, |phi, t| {
        for x in &locals {
            let Some(global) = t.ok(in_aisle(phi, x), || phi.describe()) else { continue };
            let mut every = true;
            for q in SpecZ.representatives(&phi.subsets(), &x.mentioned_points()) {
                let (Some(fq), Some((_, emb))) = (t.ok(phi.localize(&q), || phi.describe()), t.ok(SpecZ.local_spectrum(&q), || format!("{q}"))) else { continue };
                let local = local_in_aisle(&fq, &emb, &x.localize(&q));
                t.check(!global || local, || format!("localization at {q} leaves the aisle: {} on {x}", phi.describe()));
                every &= local;
            }
            t.check(global == every, || format!("local membership differs: {} on {x}", phi.describe()));
        }
    });
    t.merge(part);
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn read_back_simple() {
        let f = SpFiltration::new(SpecZ, ZSubset::Whole, 0, vec![ZSubset::primes(&[2]).unwrap()], ZSubset::empty())
            .unwrap();
        assert_eq!(read_back_z(&f, (-1, 1), &census_probes()).unwrap(), f);
    }

    #[test]
    fn brute_hom_ext_examples() {
        let (h, e) = brute_hom_ext(4, 8);
        assert_eq!(h, FgZModule::cyclic(4));
        assert_eq!(e, FgZModule::cyclic(4));
        assert_eq!(brute_hom_ext(0, 0), (FgZModule::free(1), FgZModule::zero()));
        assert_eq!(brute_hom_ext(3, 0), (FgZModule::zero(), FgZModule::cyclic(3)));
    }

    #[test]
    fn small_poset_counts() {
        // Naturally labelled posets on 1, 2, 3 points.
        assert_eq!(small_posets(1).len(), 1);
        assert_eq!(small_posets(2).len(), 1 + 2);
        assert_eq!(small_posets(3).len(), 1 + 2 + 7);
    }

    #[test]
    fn suite_names_resolve() {
        assert_eq!(resolve_suite("3").unwrap(), vec!["criterion3"]);
        assert_eq!(resolve_suite("all").unwrap().len(), SUITES.len());
        assert!(resolve_suite("nope").is_err());
    }
}
