//! Instance-by-instance sweeps over group and graph families.
//!
//! A sweep expands its family into jobs, one per (theorem, item) pair, runs
//! them in parallel and folds the results in job order. Sampled jobs draw
//! from `ChaCha8Rng::seed_from_u64(seed)` on stream `job index`, so reports do
//! not depend on scheduling or thread count.

mod graphs;
mod report;
mod sumset;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::{graph_family, group_family, parse_graph_spec, GraphInstance};
use crate::error::{Error, Result};
use crate::group::{parse_group_spec, FiniteGroup};

pub use graphs::{MAIN_TABLE_CAP, PAIR_TABLE_CAP, SUBSET_TABLE_CAP};
pub use report::{Counts, Record, RecordLevel, Summary, VerificationReport, REPORT_SCHEMA};

use report::{merge_summary, Collector};

/// Exhaustive sweeps estimated above this many instances need `force`.
pub const DEFAULT_BUDGET: u128 = 1 << 28;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Theorem {
    Scherk,
    Kemperman,
    Main,
    Mainomega,
    Lemmas,
    Mader,
    Submodular,
    BoundaryInclusion,
}

impl Theorem {
    pub const ALL: [Theorem; 8] = [
        Theorem::Scherk,
        Theorem::Kemperman,
        Theorem::Main,
        Theorem::Mainomega,
        Theorem::Lemmas,
        Theorem::Mader,
        Theorem::Submodular,
        Theorem::BoundaryInclusion,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Theorem::Scherk => "scherk",
            Theorem::Kemperman => "kemperman",
            Theorem::Main => "main",
            Theorem::Mainomega => "mainomega",
            Theorem::Lemmas => "lemmas",
            Theorem::Mader => "mader",
            Theorem::Submodular => "submodular",
            Theorem::BoundaryInclusion => "boundary-inclusion",
        }
    }

    /// Whether the theorem is stated for group subsets rather than graphs.
    pub fn on_groups(self) -> bool {
        matches!(self, Theorem::Scherk | Theorem::Kemperman)
    }

    /// Largest group order or vertex count an exhaustive sweep accepts
    /// without `force`.
    pub fn exhaustive_cap(self) -> usize {
        match self {
            Theorem::Scherk | Theorem::Kemperman => 8,
            Theorem::Main => 16,
            Theorem::Submodular => 10,
            Theorem::BoundaryInclusion => 16,
            Theorem::Mainomega | Theorem::Lemmas => crate::moser::LEMMA_CAP,
            Theorem::Mader => usize::MAX,
        }
    }

    fn estimate(self, size: usize) -> u128 {
        let n = size as u32;
        let pow2 = |k: u32| 1u128.checked_shl(k).unwrap_or(u128::MAX);
        match self {
            Theorem::Scherk => pow2(2 * n.saturating_sub(1)),
            Theorem::Kemperman => pow2(2 * n).saturating_mul(size as u128),
            Theorem::Main | Theorem::Lemmas => {
                pow2(n.saturating_sub(1)).saturating_mul(size as u128)
            }
            Theorem::Mainomega | Theorem::Mader => size as u128,
            Theorem::Submodular => pow2(2 * n) / 2,
            Theorem::BoundaryInclusion => pow2(n),
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Theorem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "main-finite" => Ok(Theorem::Main),
            _ => Theorem::ALL
                .into_iter()
                .find(|t| t.name() == s)
                .ok_or_else(|| Error::InvalidSpec {
                    spec: s.to_string(),
                    reason: "unknown theorem".into(),
                }),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exhaustive,
    /// `count` random instances per job. Theorems checked per vertex
    /// (`mainomega`, `lemmas`, `mader`) ignore the count and run in full.
    Sampled {
        count: usize,
        seed: u64,
    },
}

/// A group or graph family name, or a single group/graph spec.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Groups(String),
    Graphs(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepSpec {
    pub family: Family,
    pub mode: Mode,
    pub theorems: Vec<Theorem>,
    pub records: RecordLevel,
    /// Add loops to every graph before sweeping.
    pub reflexive_closure: bool,
}

impl SweepSpec {
    pub fn new(family: Family, mode: Mode, theorems: Vec<Theorem>) -> Self {
        Self {
            family,
            mode,
            theorems,
            records: RecordLevel::default(),
            reflexive_closure: false,
        }
    }

    pub fn with_records(mut self, level: RecordLevel) -> Self {
        self.records = level;
        self
    }
}

/// Execution settings that do not affect report content (except `timing`).
#[derive(Clone, Debug)]
pub struct SweepOptions {
    pub jobs: Option<usize>,
    pub force: bool,
    pub budget: u128,
    /// Put the wall-clock runtime in the summary. Breaks byte-determinism.
    pub timing: bool,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            jobs: None,
            force: false,
            budget: DEFAULT_BUDGET,
            timing: false,
        }
    }
}

enum Item {
    Group(String, Arc<FiniteGroup>),
    Graph(Box<GraphInstance>),
}

impl Item {
    fn size(&self) -> usize {
        match self {
            Item::Group(_, g) => g.order(),
            Item::Graph(inst) => inst.graph.vertex_count(),
        }
    }

    fn name(&self) -> &str {
        match self {
            Item::Group(name, _) => name,
            Item::Graph(inst) => &inst.key,
        }
    }
}

fn resolve(spec: &SweepSpec) -> Result<Vec<Item>> {
    match &spec.family {
        Family::Groups(name) => match group_family(name) {
            Ok(groups) => Ok(groups.into_iter().map(|(s, g)| Item::Group(s, g)).collect()),
            Err(_) => Ok(vec![Item::Group(
                name.clone(),
                Arc::new(parse_group_spec(name)?),
            )]),
        },
        Family::Graphs(name) => {
            let graphs = match graph_family(name) {
                Ok(graphs) => graphs,
                Err(_) => vec![parse_graph_spec(name)?],
            };
            graphs
                .into_iter()
                .map(|g| {
                    let g = if spec.reflexive_closure {
                        g.reflexive_closure()?
                    } else {
                        g
                    };
                    Ok(Item::Graph(Box::new(g)))
                })
                .collect()
        }
    }
}

fn invalid(spec: &SweepSpec, reason: String) -> Error {
    let name = match &spec.family {
        Family::Groups(s) | Family::Graphs(s) => s.clone(),
    };
    Error::InvalidSpec { spec: name, reason }
}

fn run_job(
    theorem: Theorem,
    item: &Item,
    mode: Mode,
    index: usize,
    level: RecordLevel,
) -> Result<Collector> {
    let mut out = Collector::new(level, theorem);
    let mut rng = match mode {
        Mode::Sampled { seed, .. } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(index as u64);
            Some(rng)
        }
        Mode::Exhaustive => None,
    };
    let count = match mode {
        Mode::Sampled { count, .. } => count,
        Mode::Exhaustive => 0,
    };
    match (item, theorem, rng.as_mut()) {
        (Item::Group(name, g), Theorem::Scherk, None) => {
            sumset::scherk_exhaustive(name, g, &mut out)
        }
        (Item::Group(name, g), Theorem::Scherk, Some(rng)) => {
            sumset::scherk_sampled(name, g, count, rng, &mut out)
        }
        (Item::Group(name, g), Theorem::Kemperman, None) => {
            sumset::kemperman_exhaustive(name, g, &mut out)
        }
        (Item::Group(name, g), Theorem::Kemperman, Some(rng)) => {
            sumset::kemperman_sampled(name, g, count, rng, &mut out)
        }
        (Item::Graph(inst), Theorem::Main, None) => graphs::main_exhaustive(inst, &mut out)?,
        (Item::Graph(inst), Theorem::Main, Some(rng)) => {
            graphs::main_sampled(inst, count, rng, &mut out)?
        }
        (Item::Graph(inst), Theorem::Submodular, None) => {
            graphs::submodular_exhaustive(inst, &mut out)?
        }
        (Item::Graph(inst), Theorem::Submodular, Some(rng)) => {
            graphs::submodular_sampled(inst, count, rng, &mut out)?
        }
        (Item::Graph(inst), Theorem::BoundaryInclusion, None) => {
            graphs::inclusion_exhaustive(inst, &mut out)?
        }
        (Item::Graph(inst), Theorem::BoundaryInclusion, Some(rng)) => {
            graphs::inclusion_sampled(inst, count, rng, &mut out)?
        }
        (Item::Graph(inst), Theorem::Mainomega, _) => graphs::mainomega(inst, &mut out)?,
        (Item::Graph(inst), Theorem::Lemmas, _) => graphs::lemmas(inst, &mut out)?,
        (Item::Graph(inst), Theorem::Mader, _) => graphs::mader(inst, &mut out)?,
        _ => {
            return Err(Error::Internal(format!(
                "{theorem} cannot run on {}",
                item.name()
            )))
        }
    }
    Ok(out)
}

/// Runs a sweep. Records are sorted by instance key, then check name.
pub fn run_sweep(spec: &SweepSpec, options: &SweepOptions) -> Result<VerificationReport> {
    let started = Instant::now();
    let on_groups = matches!(spec.family, Family::Groups(_));
    if let Some(t) = spec.theorems.iter().find(|t| t.on_groups() != on_groups) {
        let kind = if on_groups { "group" } else { "graph" };
        return Err(invalid(
            spec,
            format!("{t} does not apply to a {kind} family"),
        ));
    }
    let items = resolve(spec)?;
    let mut theorems = spec.theorems.clone();
    theorems.dedup();
    let jobs: Vec<(Theorem, &Item)> = theorems
        .iter()
        .flat_map(|&t| items.iter().map(move |item| (t, item)))
        .collect();

    if spec.mode == Mode::Exhaustive && !options.force {
        if let Some((t, item)) = jobs
            .iter()
            .find(|(t, item)| item.size() > t.exhaustive_cap())
        {
            return Err(invalid(
                spec,
                format!(
                    "exhaustive {t} is limited to size {} without --force ({} has {})",
                    t.exhaustive_cap(),
                    item.name(),
                    item.size()
                ),
            ));
        }
        let estimate = jobs.iter().fold(0u128, |acc, (t, item)| {
            acc.saturating_add(t.estimate(item.size()))
        });
        if estimate > options.budget {
            return Err(Error::BudgetExceeded {
                estimate,
                budget: options.budget,
            });
        }
    }

    let work = || -> Result<Vec<Collector>> {
        jobs.par_iter()
            .enumerate()
            .map(|(index, &(t, item))| run_job(t, item, spec.mode, index, spec.records))
            .collect()
    };
    let outputs = match options.jobs {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k.max(1))
            .build()
            .map_err(|e| Error::Internal(e.to_string()))?
            .install(work)?,
        None => work()?,
    };

    let mut summary = Summary::default();
    let mut records = Vec::new();
    for out in outputs {
        let (s, r) = out.into_parts();
        merge_summary(&mut summary, s);
        records.extend(r);
    }
    records.sort_by(|a, b| (&a.key, &a.check).cmp(&(&b.key, &b.check)));
    if options.timing {
        summary.runtime_ms = Some(started.elapsed().as_millis() as u64);
    }
    Ok(VerificationReport {
        schema: REPORT_SCHEMA,
        spec: spec.clone(),
        summary,
        records,
    })
}

fn single(family: Family, theorem: Theorem, mode: Mode) -> Result<VerificationReport> {
    run_sweep(
        &SweepSpec::new(family, mode, vec![theorem]),
        &SweepOptions::default(),
    )
}

/// `|AB| ≥ |A|+|B|−1` whenever `A ∩ B⁻¹ = {1}`, over one group.
pub fn verify_scherk(group: &str, mode: Mode) -> Result<VerificationReport> {
    single(Family::Groups(group.to_string()), Theorem::Scherk, mode)
}

/// `|AB| ≥ |A|+|B|−|A ∩ cB⁻¹|` for every `c ∈ AB`, over one group.
pub fn verify_kemperman(group: &str, mode: Mode) -> Result<VerificationReport> {
    single(Family::Groups(group.to_string()), Theorem::Kemperman, mode)
}

/// `|Γ(F)| ≥ |F|+|Γ(v)|−|Γ⁻(v) ∩ F|` for every `v ∈ F`, over one graph.
pub fn verify_main_finite(graph: &str, mode: Mode) -> Result<VerificationReport> {
    single(Family::Graphs(graph.to_string()), Theorem::Main, mode)
}
