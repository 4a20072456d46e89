//! Reproduction suites: each instance GP(n,k) gets the cheap bounds, an
//! optional construction check and an optional exact solve, and the proven
//! interval is compared against the value claimed for that instance.

use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;
use std::time::Duration;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::constructions::{catalog, labels, lemma_set, Family};
use crate::error::{Error, Result};
use crate::graph::{all_pairs_distances, GpParams, Graph};
use crate::resolution::{build_constraints, mmd_pairs, redundant_member, verify_resolving_set};
use crate::solver::{bound_report, solve_exact, BoundReport, DEFAULT_BUDGET};
use crate::vertex_set::VertexSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Catalog,
    Theorem4k2,
    Theorem4k,
    Corollary4k1,
    Hypothesis4k3,
    GpN1,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Catalog,
        Suite::Theorem4k2,
        Suite::Theorem4k,
        Suite::Corollary4k1,
        Suite::Hypothesis4k3,
        Suite::GpN1,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Suite::Catalog => "table4",
            Suite::Theorem4k2 => "thm-4k2",
            Suite::Theorem4k => "thm-4k",
            Suite::Corollary4k1 => "cor-4k1",
            Suite::Hypothesis4k3 => "hyp-4k3",
            Suite::GpN1 => "gp-n1",
        }
    }

    /// Range used when none is given: k for the family suites, n for gp-n1,
    /// nothing for table4 (it always runs the whole catalog).
    pub fn default_range(self) -> Option<RangeInclusive<usize>> {
        match self {
            Suite::Catalog => None,
            Suite::Theorem4k2 => Some(1..=6),
            Suite::Theorem4k => Some(3..=10),
            Suite::Corollary4k1 => Some(3..=8),
            Suite::Hypothesis4k3 => Some(1..=6),
            Suite::GpN1 => Some(3..=10),
        }
    }

    /// Whether the range selects `n` rather than `k`.
    pub fn ranges_over_n(self) -> bool {
        self == Suite::GpN1
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.id() == s)
            .ok_or_else(|| Error::UnknownSuite(s.to_string()))
    }
}

impl Serialize for Suite {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.id())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    /// The proven value matches the claim.
    Confirms,
    /// The proven interval excludes the claimed value.
    Contradicts,
    /// Budget ran out before the claim could be settled.
    Unproven,
    /// Settled, but for a parameter the claim is not stated for.
    OutsideHypothesisRange,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Equals,
    AtMost,
}

/// The value an instance is compared against.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Claim {
    pub relation: Relation,
    pub value: usize,
    pub source: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Plan {
    /// Bounds plus an exact solve.
    Exact,
    /// Bounds plus the construction only.
    Bounds,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExactSummary {
    pub optimum: Option<usize>,
    pub proven: bool,
    pub lb: usize,
    pub ub: usize,
    pub nodes: u64,
    pub basis: Vec<String>,
    /// No single member can be dropped.
    pub basis_minimal: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub millis: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConstructionCheck {
    pub id: String,
    pub size: usize,
    pub verified: bool,
    pub touches_all_mmd: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_unresolved: Option<[String; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjectureCheck {
    pub claim: Claim,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExperimentReport {
    pub suite: Suite,
    pub family: String,
    pub n: usize,
    pub k: usize,
    pub family_k: Option<usize>,
    pub plan: Plan,
    pub claim: Claim,
    pub bounds: BoundReport,
    pub exact: Option<ExactSummary>,
    pub construction: Option<ConstructionCheck>,
    pub lb: usize,
    pub ub: usize,
    pub proven: bool,
    pub verdict: Verdict,
    /// A further conjectured value checked against the same interval.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conjecture: Option<ConjectureCheck>,
    /// MMD cover bound equals the proven optimum; `None` without one.
    pub mmd_tight: Option<bool>,
    pub notes: Vec<String>,
}

impl ExperimentReport {
    pub fn optimum(&self) -> Option<usize> {
        self.proven.then_some(self.lb)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunConfig {
    /// Per solver call.
    pub budget: Duration,
    /// Instances solved concurrently; 0 lets rayon decide.
    pub workers: usize,
    /// Record wall times in the exact summaries (breaks byte-identical output).
    pub timings: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self { budget: DEFAULT_BUDGET, workers: 0, timings: false }
    }
}

/// What to run on one GP(n,k).
#[derive(Debug, Clone)]
struct Job {
    suite: Suite,
    family: String,
    family_k: Option<usize>,
    params: GpParams,
    plan: Plan,
    claim: Claim,
    /// The claim is stated for this parameter.
    in_range: bool,
    construction: Option<(String, VertexSet)>,
    /// Second claim and whether it is stated for this parameter.
    conjecture: Option<(Claim, bool)>,
    notes: Vec<String>,
}

fn equals(value: usize, source: impl Into<String>) -> Claim {
    Claim { relation: Relation::Equals, value, source: source.into() }
}

fn family_job(suite: Suite, family: Family, k: usize, plan: Plan, claim: Claim) -> Result<Job> {
    let set = lemma_set(family, k)?;
    let mut notes = Vec::new();
    if set.below_range {
        notes.push(format!("k={k} is below the range the {family} construction is stated for"));
    }
    Ok(Job {
        suite,
        family: family.to_string(),
        family_k: Some(k),
        params: set.params,
        plan,
        claim,
        in_range: true,
        construction: Some((format!("lemma:{family}"), set.vertices)),
        conjecture: None,
        notes,
    })
}

fn catalog_value(n: usize) -> Option<usize> {
    catalog().iter().find(|e| e.n == n).map(|e| e.sdim)
}

fn catalog_jobs() -> Result<Vec<Job>> {
    catalog()
        .iter()
        .map(|e| {
            let mut notes = Vec::new();
            if e.has_discrepancy() {
                notes.push(format!("listed basis has {} elements but the listed dimension is {}", e.basis.len(), e.sdim));
            }
            Ok(Job {
                suite: Suite::Catalog,
                family: "catalog".into(),
                family_k: None,
                params: e.params(),
                plan: Plan::Exact,
                claim: equals(e.sdim, "catalog"),
                in_range: true,
                construction: Some((format!("catalog:{}", e.n), e.basis.clone())),
                conjecture: None,
                notes,
            })
        })
        .collect()
}

fn theorem_4k2_jobs(ks: RangeInclusive<usize>) -> Result<Vec<Job>> {
    ks.map(|k| {
        let family = Family::FourKPlus2;
        let n = family.order(k);
        // below the construction's range, and cheap instances, are solved outright
        let plan = if n <= 14 || k < family.min_k() { Plan::Exact } else { Plan::Bounds };
        family_job(Suite::Theorem4k2, family, k, plan, equals(n, "4k+2"))
    })
    .collect()
}

fn theorem_4k_jobs(ks: RangeInclusive<usize>) -> Result<Vec<Job>> {
    ks.map(|k| {
        let family = Family::FourK;
        if k < 3 {
            return Err(Error::LemmaParam(k));
        }
        if k < 5 {
            // the 5k formula is stated from k=5; smaller k compare with the catalog
            let n = family.order(k);
            let value = catalog_value(n).ok_or(Error::NotInCatalog(n))?;
            let mut job = family_job(Suite::Theorem4k, family, k, Plan::Exact, equals(value, "catalog"))?;
            job.notes.push(format!("5k={} differs from the catalog value {value}", 5 * k));
            Ok(job)
        } else {
            family_job(Suite::Theorem4k, family, k, Plan::Bounds, equals(5 * k, "5k"))
        }
    })
    .collect()
}

fn corollary_4k1_jobs(ks: RangeInclusive<usize>) -> Result<Vec<Job>> {
    ks.map(|k| {
        if k < 3 {
            return Err(Error::LemmaParam(k));
        }
        let claim = Claim { relation: Relation::AtMost, value: 5 * k + 5, source: "5k+5".into() };
        let mut job = family_job(Suite::Corollary4k1, Family::FourKPlus1, k, Plan::Exact, claim)?;
        // equality is conjectured from k=5 on
        job.conjecture = Some((equals(5 * k + 5, "5k+5"), k >= 5));
        Ok(job)
    })
    .collect()
}

/// Conjectured value for GP(4k+3,2), stated for k >= 5.
pub fn hypothesis_4k3_value(k: usize) -> usize {
    if k % 5 == 3 {
        5 * k + 6
    } else {
        5 * k + 4
    }
}

fn hypothesis_4k3_jobs(ks: RangeInclusive<usize>) -> Result<Vec<Job>> {
    ks.map(|k| {
        if k < 1 {
            return Err(Error::LemmaParam(k));
        }
        let n = 4 * k + 3;
        let mut notes = Vec::new();
        if let Some(c) = catalog_value(n) {
            notes.push(format!("catalog value {c}"));
        }
        Ok(Job {
            suite: Suite::Hypothesis4k3,
            family: "4k+3".into(),
            family_k: Some(k),
            params: GpParams::new(n, 2)?,
            plan: Plan::Exact,
            claim: equals(hypothesis_4k3_value(k), if k % 5 == 3 { "5k+6" } else { "5k+4" }),
            in_range: k >= 5,
            construction: None,
            conjecture: None,
            notes,
        })
    })
    .collect()
}

fn gp_n1_jobs(ns: RangeInclusive<usize>) -> Result<Vec<Job>> {
    ns.map(|n| {
        Ok(Job {
            suite: Suite::GpN1,
            family: "gp-n1".into(),
            family_k: None,
            params: GpParams::new(n, 1)?,
            plan: Plan::Exact,
            claim: equals(n, "n"),
            in_range: true,
            construction: None,
            conjecture: None,
            notes: Vec::new(),
        })
    })
    .collect()
}

fn judge(claim: &Claim, lb: usize, ub: usize, in_range: bool) -> Verdict {
    let settled = match claim.relation {
        Relation::Equals if lb == ub => Some(lb == claim.value),
        Relation::Equals if claim.value < lb || claim.value > ub => Some(false),
        Relation::AtMost if ub <= claim.value => Some(true),
        Relation::AtMost if lb > claim.value => Some(false),
        _ => None,
    };
    match settled {
        None => Verdict::Unproven,
        Some(_) if !in_range => Verdict::OutsideHypothesisRange,
        Some(true) => Verdict::Confirms,
        Some(false) => Verdict::Contradicts,
    }
}

fn analyze(job: Job, cfg: &RunConfig) -> Result<ExperimentReport> {
    let p = job.params;
    let g = Graph::generalized_petersen(p);
    let dm = all_pairs_distances(&g)?;
    let cs = build_constraints(&dm);
    let mmd = mmd_pairs(&g, &dm);
    let mut bounds = bound_report(&g, &dm, &cs, cfg.budget);
    let violation = |message: String| Error::Invariant { instance: format!("{} {p}", job.suite), message };

    let construction = job.construction.as_ref().map(|(id, set)| {
        let verdict = verify_resolving_set(&cs, set);
        let first_unresolved = match verdict {
            crate::resolution::Verdict::Ok => None,
            crate::resolution::Verdict::Unresolved { u, v } => {
                Some([p.label_of(u).to_string(), p.label_of(v).to_string()])
            }
        };
        ConstructionCheck {
            id: id.clone(),
            size: set.len(),
            verified: first_unresolved.is_none(),
            touches_all_mmd: mmd.first_untouched(set).is_none(),
            first_unresolved,
        }
    });
    if let Some(c) = &construction {
        if c.verified {
            if !c.touches_all_mmd {
                return Err(violation(format!("{} resolves but misses an MMD pair", c.id)));
            }
            bounds.construction_ub = Some(c.size);
        }
    }

    let exact = (job.plan == Plan::Exact).then(|| solve_exact(&cs, cfg.budget));
    let mut lb = bounds.diametral_lb.max(bounds.mmd_cover_lb);
    let mut ub = bounds.greedy_ub.min(bounds.construction_ub.unwrap_or(usize::MAX));
    let exact_summary = match &exact {
        None => None,
        Some(r) => {
            if !verify_resolving_set(&cs, &r.basis).is_ok() {
                return Err(violation("solver basis does not resolve".into()));
            }
            lb = lb.max(r.lower_bound);
            ub = ub.min(r.upper_bound());
            Some(ExactSummary {
                optimum: r.optimum,
                proven: r.proven,
                lb: r.lower_bound,
                ub: r.upper_bound(),
                nodes: r.nodes_explored,
                basis: labels(&p, &r.basis),
                basis_minimal: redundant_member(&cs, &r.basis).is_none(),
                millis: cfg.timings.then_some(r.wall_time.as_millis() as u64),
            })
        }
    };
    if bounds.diametral_lb > bounds.mmd_cover_lb {
        return Err(violation(format!(
            "diametral bound {} exceeds MMD bound {}",
            bounds.diametral_lb, bounds.mmd_cover_lb
        )));
    }
    if lb > ub {
        return Err(violation(format!("lower bound {lb} exceeds upper bound {ub}")));
    }
    let proven = lb == ub;
    if let Some(s) = &exact_summary {
        if let Some(opt) = s.optimum {
            if opt != lb || opt != ub {
                return Err(violation(format!("optimum {opt} outside the bound interval [{lb}, {ub}]")));
            }
            if !s.basis_minimal {
                return Err(violation("optimal basis has a redundant member".into()));
            }
        }
    }

    let mmd_tight = proven.then_some(bounds.mmd_exact && bounds.mmd_cover_lb == lb);
    let verdict = judge(&job.claim, lb, ub, job.in_range);
    let conjecture = job.conjecture.map(|(claim, in_range)| {
        let verdict = judge(&claim, lb, ub, in_range);
        ConjectureCheck { claim, verdict }
    });
    let mut notes = job.notes;
    if let Some(c) = conjecture.as_ref().filter(|c| c.verdict == Verdict::Contradicts) {
        notes.push(format!("proven {lb} differs from the conjectured {}={}", c.claim.source, c.claim.value));
    }
    Ok(ExperimentReport {
        suite: job.suite,
        family: job.family,
        n: p.n,
        k: p.k,
        family_k: job.family_k,
        plan: job.plan,
        claim: job.claim,
        bounds,
        exact: exact_summary,
        construction,
        lb,
        ub,
        proven,
        verdict,
        conjecture,
        mmd_tight,
        notes,
    })
}

fn run_jobs(jobs: Vec<Job>, cfg: &RunConfig) -> Result<Vec<ExperimentReport>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .expect("thread pool");
    let results: Vec<Result<ExperimentReport>> =
        pool.install(|| jobs.into_par_iter().map(|j| analyze(j, cfg)).collect());
    let mut reports = results.into_iter().collect::<Result<Vec<_>>>()?;
    reports.sort_by_key(|r| (r.n, r.k));
    Ok(reports)
}

pub fn run_catalog(cfg: &RunConfig) -> Result<Vec<ExperimentReport>> {
    run_jobs(catalog_jobs()?, cfg)
}

pub fn run_theorem_4k2(ks: RangeInclusive<usize>, cfg: &RunConfig) -> Result<Vec<ExperimentReport>> {
    run_jobs(theorem_4k2_jobs(ks)?, cfg)
}

pub fn run_theorem_4k(ks: RangeInclusive<usize>, cfg: &RunConfig) -> Result<Vec<ExperimentReport>> {
    run_jobs(theorem_4k_jobs(ks)?, cfg)
}

pub fn run_corollary_4k1(ks: RangeInclusive<usize>, cfg: &RunConfig) -> Result<Vec<ExperimentReport>> {
    run_jobs(corollary_4k1_jobs(ks)?, cfg)
}

pub fn run_hypothesis_4k3(ks: RangeInclusive<usize>, cfg: &RunConfig) -> Result<Vec<ExperimentReport>> {
    run_jobs(hypothesis_4k3_jobs(ks)?, cfg)
}

pub fn run_gp_n1(ns: RangeInclusive<usize>, cfg: &RunConfig) -> Result<Vec<ExperimentReport>> {
    run_jobs(gp_n1_jobs(ns)?, cfg)
}

/// Runs `suite` over `range`, or its default range.
pub fn run_suite(suite: Suite, range: Option<RangeInclusive<usize>>, cfg: &RunConfig) -> Result<Vec<ExperimentReport>> {
    let range = range.or_else(|| suite.default_range());
    match (suite, range) {
        (Suite::Catalog, _) => run_catalog(cfg),
        (Suite::Theorem4k2, Some(r)) => run_theorem_4k2(r, cfg),
        (Suite::Theorem4k, Some(r)) => run_theorem_4k(r, cfg),
        (Suite::Corollary4k1, Some(r)) => run_corollary_4k1(r, cfg),
        (Suite::Hypothesis4k3, Some(r)) => run_hypothesis_4k3(r, cfg),
        (Suite::GpN1, Some(r)) => run_gp_n1(r, cfg),
        (_, None) => unreachable!("every family suite has a default range"),
    }
}

/// One JSON object per line.
pub fn to_json_lines(reports: &[ExperimentReport]) -> Result<String> {
    let mut out = String::new();
    for r in reports {
        out.push_str(&serde_json::to_string(r)?);
        out.push('\n');
    }
    Ok(out)
}

pub const CSV_HEADER: &str = "n,k,family,lb,ub,exact,proven,verdict";

pub fn to_csv(reports: &[ExperimentReport]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in reports {
        let exact = r.optimum().map(|v| v.to_string()).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.n, r.k, r.family, r.lb, r.ub, exact, r.proven, r.verdict
        ));
    }
    out
}

pub fn to_text(reports: &[ExperimentReport]) -> String {
    let mut out = format!(
        "{:<8} {:>4} {:>3} {:>5} {:>5} {:>5} {:>8} {:<22} {}\n",
        "suite", "n", "k", "lb", "ub", "claim", "mmd-tight", "verdict", "notes"
    );
    for r in reports {
        let tight = match r.mmd_tight {
            Some(true) => "yes",
            Some(false) => "no",
            None => "-",
        };
        let claim = match r.claim.relation {
            Relation::Equals => format!("{}", r.claim.value),
            Relation::AtMost => format!("<={}", r.claim.value),
        };
        out.push_str(&format!(
            "{:<8} {:>4} {:>3} {:>5} {:>5} {:>5} {:>8} {:<22} {}\n",
            r.suite.id(),
            r.n,
            r.k,
            r.lb,
            r.ub,
            claim,
            tight,
            r.verdict.to_string(),
            r.notes.join("; ")
        ));
    }
    out
}
