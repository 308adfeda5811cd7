//! Verification sweeps: every check of the engine run over exhaustive
//! enumerations and seeded random instances, aggregated into one report.
//!
//! Instances are evaluated in parallel chunks and recorded in enumeration
//! order, so a report depends only on its configuration.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::bijection::{enumerate_trees, ColoredTernaryTree};
use crate::bounds::{
    corollary_bound, find_remainders, strip_remainders, theorem_bound, verify_main_lemma,
    verify_small_props, BoundVariant, MainLemmaOutcome, SmallPropClass,
};
use crate::error::{Error, Result};
use crate::oracles::count_satisfying_by_class;
use crate::transfer::{
    combine_children, degeneracy, degeneracy_vector, degeneracy_vector_by_faces, root_vector,
};
use crate::triangulation::{
    enumerate_histories, random_history_with, GrowthHistory, StackTriangulation,
};

const CHUNK: usize = 1 << 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Lemma1,
    Prop2,
    Remainders,
    SmallProps,
    MainLemma,
    Theorem,
    Corollary,
    All,
}

impl Suite {
    /// The suites `all` runs, in order.
    pub const PARTS: [Suite; 7] = [
        Suite::Lemma1,
        Suite::Prop2,
        Suite::Remainders,
        Suite::SmallProps,
        Suite::MainLemma,
        Suite::Theorem,
        Suite::Corollary,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Lemma1 => "lemma1",
            Suite::Prop2 => "prop2",
            Suite::Remainders => "remainders",
            Suite::SmallProps => "small-props",
            Suite::MainLemma => "main-lemma",
            Suite::Theorem => "theorem",
            Suite::Corollary => "corollary",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::PARTS
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Contract(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepConfig {
    /// Largest history length, or tree size, of the exhaustive part.
    pub max_n: usize,
    /// Bound violations on triangulations with fewer vertices are reported
    /// but do not count as failures.
    pub allow_below: Option<usize>,
    pub random_count: usize,
    pub random_max_n: usize,
    pub seed: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            max_n: 5,
            allow_below: None,
            random_count: 500,
            random_max_n: 60,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub instance: Value,
    pub check: String,
    pub expected: String,
    pub got: String,
    pub whitelisted: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CheckTally {
    pub instances: usize,
    pub pass: usize,
    pub fail: usize,
    pub whitelisted: usize,
}

/// Where a size-dependent bound stops failing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundMapping {
    pub check: String,
    pub bound: String,
    pub denominator: u32,
    /// Triangulation sizes `|Δ|` with a violation in the exhaustive part.
    pub violating_sizes: Vec<usize>,
    /// Largest violating size in the exhaustive part, `N0`.
    pub threshold: Option<usize>,
    pub random_instances: usize,
    pub random_violating_sizes: Vec<usize>,
    /// Random violations strictly above `threshold`.
    pub random_violations_above_threshold: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualSizeRelation {
    pub instances: usize,
    /// `|G| = 2|Δ| - 4`.
    pub twice_minus_four: usize,
    /// `2|Δ| = |G| - 4`.
    pub printed: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub suite: Suite,
    pub config: SweepConfig,
    pub instance_count: usize,
    pub pass_count: usize,
    pub fail_count: usize,
    pub whitelisted_count: usize,
    pub failures: Vec<Failure>,
    pub checks: BTreeMap<String, CheckTally>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub bound_mappings: Vec<BoundMapping>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dual_size_relation: Option<DualSizeRelation>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub parts: Vec<SweepReport>,
    pub wall_time_secs: f64,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.fail_count == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

struct CheckResult {
    name: &'static str,
    pass: bool,
    /// Triangulation size, for checks that may be whitelisted by size.
    bound_size: Option<usize>,
    detail: Option<(String, String)>,
}

fn check(name: &'static str, pass: bool, detail: impl FnOnce() -> (String, String)) -> CheckResult {
    CheckResult {
        name,
        pass,
        bound_size: None,
        detail: (!pass).then(detail),
    }
}

fn errored(name: &'static str, err: Error) -> CheckResult {
    CheckResult {
        name,
        pass: false,
        bound_size: None,
        detail: Some(("no error".into(), err.to_string())),
    }
}

#[derive(Default)]
struct Violations {
    exhaustive: BTreeSet<usize>,
    random: Vec<usize>,
    random_instances: usize,
}

struct Builder {
    suite: Suite,
    config: SweepConfig,
    instance_count: usize,
    pass_count: usize,
    fail_count: usize,
    whitelisted_count: usize,
    failures: Vec<Failure>,
    checks: BTreeMap<String, CheckTally>,
    violations: BTreeMap<&'static str, Violations>,
    random_phase: bool,
}

impl Builder {
    fn new(suite: Suite, config: &SweepConfig) -> Self {
        Builder {
            suite,
            config: config.clone(),
            instance_count: 0,
            pass_count: 0,
            fail_count: 0,
            whitelisted_count: 0,
            failures: Vec::new(),
            checks: BTreeMap::new(),
            violations: BTreeMap::new(),
            random_phase: false,
        }
    }

    fn record<T: Serialize>(&mut self, item: &T, results: Vec<CheckResult>) {
        self.instance_count += 1;
        let mut failed = false;
        let mut whitelisted_any = false;
        for r in results {
            let tally = self.checks.entry(r.name.to_string()).or_default();
            tally.instances += 1;
            if let Some(size) = r.bound_size {
                let v = self.violations.entry(r.name).or_default();
                if self.random_phase {
                    v.random_instances += 1;
                    if !r.pass {
                        v.random.push(size);
                    }
                } else if !r.pass {
                    v.exhaustive.insert(size);
                }
            }
            if r.pass {
                tally.pass += 1;
                continue;
            }
            let whitelisted = r
                .bound_size
                .zip(self.config.allow_below)
                .is_some_and(|(size, limit)| size < limit);
            if whitelisted {
                tally.whitelisted += 1;
                whitelisted_any = true;
            } else {
                tally.fail += 1;
                failed = true;
            }
            let (expected, got) = r.detail.unwrap_or_default();
            self.failures.push(Failure {
                instance: serde_json::to_value(item).expect("instances serialize"),
                check: r.name.to_string(),
                expected,
                got,
                whitelisted,
            });
        }
        if failed {
            self.fail_count += 1;
        } else {
            self.pass_count += 1;
            if whitelisted_any {
                self.whitelisted_count += 1;
            }
        }
    }

    fn run<T, F>(&mut self, items: Vec<T>, f: F)
    where
        T: Serialize + Sync,
        F: Fn(&T) -> Vec<CheckResult> + Sync,
    {
        let results: Vec<Vec<CheckResult>> = items.par_iter().map(&f).collect();
        for (item, r) in items.iter().zip(results) {
            self.record(item, r);
        }
    }

    fn run_histories<F>(&mut self, ns: std::ops::RangeInclusive<usize>, f: F)
    where
        F: Fn(&GrowthHistory) -> Vec<CheckResult> + Sync,
    {
        for n in ns {
            let mut it = enumerate_histories(n).peekable();
            while it.peek().is_some() {
                let chunk: Vec<GrowthHistory> = it.by_ref().take(CHUNK).collect();
                self.run(chunk, &f);
            }
        }
    }

    fn finish(self, started: Instant) -> SweepReport {
        let bound_mappings = self
            .violations
            .into_iter()
            .map(|(name, v)| {
                let (bound, denominator) = describe_bound(name);
                let threshold = v.exhaustive.last().copied();
                let above = v
                    .random
                    .iter()
                    .filter(|&&s| threshold.is_none_or(|t| s > t))
                    .count();
                let random_sizes: BTreeSet<usize> = v.random.iter().copied().collect();
                BoundMapping {
                    check: name.to_string(),
                    bound,
                    denominator,
                    violating_sizes: v.exhaustive.into_iter().collect(),
                    threshold,
                    random_instances: v.random_instances,
                    random_violating_sizes: random_sizes.into_iter().collect(),
                    random_violations_above_threshold: above,
                }
            })
            .collect();
        SweepReport {
            suite: self.suite,
            config: self.config,
            instance_count: self.instance_count,
            pass_count: self.pass_count,
            fail_count: self.fail_count,
            whitelisted_count: self.whitelisted_count,
            failures: self.failures,
            checks: self.checks,
            bound_mappings,
            dual_size_relation: None,
            notes: Vec::new(),
            parts: Vec::new(),
            wall_time_secs: started.elapsed().as_secs_f64(),
        }
    }
}

const THEOREM_CHECKS: [(&str, BoundVariant); 2] = [
    ("theorem-36", BoundVariant::Printed),
    ("theorem-72", BoundVariant::Halved),
];
const COROLLARY_CHECKS: [(&str, BoundVariant); 2] = [
    ("corollary-72", BoundVariant::Printed),
    ("corollary-144", BoundVariant::Halved),
];

fn describe_bound(name: &str) -> (String, u32) {
    for (n, v) in THEOREM_CHECKS {
        if n == name {
            let q = v.theorem_denominator();
            return (format!("degeneracy >= 6 phi^((|D| + 3) / {q})"), q);
        }
    }
    for (n, v) in COROLLARY_CHECKS {
        if n == name {
            let q = v.corollary_denominator();
            return (format!("matchings >= 3 phi^(|G| / {q})"), q);
        }
    }
    unreachable!("bound checks are listed above")
}

fn tri(h: &GrowthHistory) -> Result<StackTriangulation> {
    StackTriangulation::from_history(h)
}

fn lemma1_checks(h: &GrowthHistory) -> Vec<CheckResult> {
    let t = match tri(h) {
        Ok(t) => t,
        Err(e) => return vec![errored("lemma1", e)],
    };
    let by_tree = degeneracy_vector(&t);
    let by_faces = degeneracy_vector_by_faces(&t);
    let mut out = vec![check("faces-path", by_tree == by_faces, || {
        (by_faces.to_string(), by_tree.to_string())
    })];
    out.push(match count_satisfying_by_class(&t) {
        Ok(oracle) => check("lemma1", oracle == by_tree, || {
            (oracle.to_string(), by_tree.to_string())
        }),
        Err(e) => errored("lemma1", e),
    });
    out
}

fn prop2_checks(h: &GrowthHistory) -> Vec<CheckResult> {
    let run = || -> Result<CheckResult> {
        let t = tri(h)?;
        let whole = count_satisfying_by_class(&t)?;
        let mut parts = Vec::with_capacity(3);
        for position in 1..=3 {
            parts.push(count_satisfying_by_class(
                &t.sub_triangulation(position)?.triangulation,
            )?);
        }
        let combined = combine_children(&parts[0], &parts[1], &parts[2]);
        Ok(check("prop2", combined == whole, || {
            (whole.to_string(), combined.to_string())
        }))
    };
    vec![run().unwrap_or_else(|e| errored("prop2", e))]
}

fn remainder_checks(t: &ColoredTernaryTree) -> Vec<CheckResult> {
    let report = find_remainders(t);
    let distinct: BTreeSet<_> = report.generators.iter().collect();
    let prop3 = report.remainders.len() == report.generators.len()
        && distinct.len() == report.generators.len();
    let stripped = strip_remainders(t);
    let left = find_remainders(&stripped);
    let (full, reduced) = (root_vector(t), root_vector(&stripped));
    vec![
        check("prop3", prop3, || {
            (
                "one distinct generator per remainder".into(),
                format!("{report:?}"),
            )
        }),
        check("lemma2", left.is_empty(), || {
            ("no remainders".into(), format!("{left:?}"))
        }),
        check("lemma3", 3 * stripped.size() >= t.size(), || {
            (
                format!(">= {}/3 nodes", t.size()),
                stripped.size().to_string(),
            )
        }),
        check("domination", full.dominates(&reduced), || {
            (format!("<= {full}"), reduced.to_string())
        }),
    ]
}

fn main_lemma_checks(t: &ColoredTernaryTree) -> Vec<CheckResult> {
    match verify_main_lemma(t) {
        Ok(MainLemmaOutcome::Witness(_)) => vec![check("main-lemma", true, Default::default)],
        Ok(MainLemmaOutcome::NoWitness { candidates }) => vec![check("main-lemma", false, || {
            (
                "a witness".into(),
                serde_json::to_string(&candidates).expect("candidates serialize"),
            )
        })],
        Err(e) => vec![errored("main-lemma", e)],
    }
}

fn bound_check(
    name: &'static str,
    size: usize,
    pass: bool,
    detail: impl FnOnce() -> (String, String),
) -> CheckResult {
    CheckResult {
        bound_size: Some(size),
        ..check(name, pass, detail)
    }
}

fn theorem_checks(h: &GrowthHistory) -> Vec<CheckResult> {
    let t = match tri(h) {
        Ok(t) => t,
        Err(e) => return vec![errored("theorem", e)],
    };
    let size = t.vertex_count();
    let d = degeneracy(&degeneracy_vector(&t));
    THEOREM_CHECKS
        .iter()
        .map(|&(name, variant)| {
            bound_check(name, size, theorem_bound(size, &d, variant), || {
                let q = variant.theorem_denominator();
                (format!(">= 6 phi^({}/{q})", size + 3), d.to_string())
            })
        })
        .collect()
}

fn corollary_checks(h: &GrowthHistory) -> Vec<CheckResult> {
    let t = match tri(h) {
        Ok(t) => t,
        Err(e) => return vec![errored("corollary", e)],
    };
    let size = t.vertex_count();
    let g = t.dual().vertex_count();
    let matchings: BigUint = degeneracy(&degeneracy_vector(&t)) >> 1;
    let mut out = vec![check("dual-size", g + 4 == 2 * size, || {
        (format!("2 * {size} - 4"), g.to_string())
    })];
    out.extend(COROLLARY_CHECKS.iter().map(|&(name, variant)| {
        bound_check(name, size, corollary_bound(g, &matchings, variant), || {
            let q = variant.corollary_denominator();
            (format!(">= 3 phi^({g}/{q})"), matchings.to_string())
        })
    }));
    out
}

/// The seeded random histories shared by the bound suites.
pub fn random_histories(config: &SweepConfig) -> Vec<GrowthHistory> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    (0..config.random_count)
        .map(|_| {
            let n = rng.random_range(0..=config.random_max_n);
            random_history_with(n, &mut rng)
        })
        .collect()
}

const ASYMPTOTIC_NOTE: &str = "The bound is checked as an exact predicate per instance. It is \
     asymptotic in character and fails on the smallest triangulations, so this suite maps the \
     size above which no tested instance violates it rather than asserting it universally.";

pub fn run_suite(suite: Suite, config: &SweepConfig) -> SweepReport {
    let started = Instant::now();
    if suite == Suite::All {
        return run_all(config, started);
    }
    let mut b = Builder::new(suite, config);
    let max_n = config.max_n;
    match suite {
        Suite::Lemma1 => b.run_histories(0..=max_n, lemma1_checks),
        Suite::Prop2 => b.run_histories(1..=max_n.max(1), prop2_checks),
        Suite::Remainders => {
            for n in 1..=max_n {
                b.run(enumerate_trees(n).collect(), remainder_checks);
            }
        }
        Suite::SmallProps => {
            for class in SmallPropClass::ALL {
                let report = verify_small_props(class);
                for r in report.records {
                    let result = check(class.name(), r.pass, || {
                        let relation = if class.is_exact() { "=" } else { ">=" };
                        (format!("psi {relation} {}", r.bound), r.psi.to_string())
                    });
                    b.record(&r.instance, vec![result]);
                }
            }
        }
        Suite::MainLemma => {
            for n in 4..=max_n {
                let free: Vec<ColoredTernaryTree> = enumerate_trees(n)
                    .filter(|t| find_remainders(t).is_empty())
                    .collect();
                b.run(free, main_lemma_checks);
            }
        }
        Suite::Theorem | Suite::Corollary => {
            let f = if suite == Suite::Theorem {
                theorem_checks
            } else {
                corollary_checks
            };
            b.run_histories(0..=max_n, f);
            b.random_phase = true;
            b.run(random_histories(config), f);
        }
        Suite::All => unreachable!("handled above"),
    }
    let mut report = b.finish(started);
    if suite == Suite::Prop2 && max_n == 0 {
        report
            .notes
            .push("prop2 needs at least one growing step; ran n = 1".into());
    }
    if matches!(suite, Suite::Theorem | Suite::Corollary) {
        report.notes.push(ASYMPTOTIC_NOTE.into());
    }
    if suite == Suite::Corollary {
        let relation = dual_size_relation(config);
        report.notes.push(format!(
            "dual size: |G| = 2|D| - 4 held on {} of {} instances; 2|D| = |G| - 4 held on {}",
            relation.twice_minus_four, relation.instances, relation.printed
        ));
        report.dual_size_relation = Some(relation);
    }
    report
}

fn dual_size_relation(config: &SweepConfig) -> DualSizeRelation {
    let sizes: Vec<(usize, usize)> = (0..=config.max_n)
        .flat_map(enumerate_histories)
        .chain(random_histories(config))
        .collect::<Vec<_>>()
        .par_iter()
        .filter_map(|h| tri(h).ok())
        .map(|t| (t.vertex_count(), t.dual().vertex_count()))
        .collect();
    DualSizeRelation {
        instances: sizes.len(),
        twice_minus_four: sizes.iter().filter(|&&(d, g)| g + 4 == 2 * d).count(),
        printed: sizes.iter().filter(|&&(d, g)| 2 * d + 4 == g).count(),
    }
}

fn run_all(config: &SweepConfig, started: Instant) -> SweepReport {
    let parts: Vec<SweepReport> = Suite::PARTS.iter().map(|&s| run_suite(s, config)).collect();
    let mut checks: BTreeMap<String, CheckTally> = BTreeMap::new();
    for p in &parts {
        for (name, t) in &p.checks {
            let into = checks.entry(name.clone()).or_default();
            into.instances += t.instances;
            into.pass += t.pass;
            into.fail += t.fail;
            into.whitelisted += t.whitelisted;
        }
    }
    SweepReport {
        suite: Suite::All,
        config: config.clone(),
        instance_count: parts.iter().map(|p| p.instance_count).sum(),
        pass_count: parts.iter().map(|p| p.pass_count).sum(),
        fail_count: parts.iter().map(|p| p.fail_count).sum(),
        whitelisted_count: parts.iter().map(|p| p.whitelisted_count).sum(),
        failures: parts.iter().flat_map(|p| p.failures.clone()).collect(),
        checks,
        bound_mappings: parts
            .iter()
            .flat_map(|p| p.bound_mappings.clone())
            .collect(),
        dual_size_relation: parts.iter().find_map(|p| p.dual_size_relation.clone()),
        notes: parts.iter().flat_map(|p| p.notes.clone()).collect(),
        wall_time_secs: started.elapsed().as_secs_f64(),
        parts,
    }
}
