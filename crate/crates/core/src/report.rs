//! Command pipelines and the reports they produce.
//!
//! Every pipeline returns a [`RunReport`] listing each assertion with its
//! verdict. A report passes iff it has at least one assertion and all of them
//! pass. Wall time is kept apart from the content so that identical inputs
//! give identical report JSON.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::equivariant::{self, EquivariantError, OrbitGraphSpec, PairColouring};
use crate::graph::{ColouredGraph, GraphError};
use crate::perm::{self, PermError};
use crate::spin::{self, CoverKind, SpinError};

/// Vertex count of the random graph used for the even-palette obstruction.
pub const OBSTRUCTION_SAMPLE_VERTICES: usize = 5;
/// Citations listed in a report; the rest are only counted.
const CITATION_LIMIT: usize = 10;

#[derive(Debug, Error)]
pub enum CommandError {
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Equivariant(#[from] EquivariantError),
    #[error(transparent)]
    Spin(#[from] SpinError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub parameters: BTreeMap<String, Value>,
    pub seed: u64,
    /// Short verdict, e.g. "complement verified".
    pub outcome: String,
    pub assertions: Vec<Assertion>,
    pub citations: Vec<String>,
    /// Free-form lines for the text rendering (tables and the like).
    pub notes: Vec<String>,
    pub data: Value,
    #[serde(skip)]
    pub wall_time_ms: f64,
}

impl RunReport {
    pub fn new(command: &str, seed: u64) -> Self {
        RunReport {
            command: command.to_string(),
            parameters: BTreeMap::new(),
            seed,
            outcome: String::new(),
            assertions: Vec::new(),
            citations: Vec::new(),
            notes: Vec::new(),
            data: Value::Null,
            wall_time_ms: 0.0,
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.parameters.insert(key.to_string(), value.into());
        self
    }

    pub fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) -> bool {
        self.assertions.push(Assertion {
            name: name.to_string(),
            passed,
            detail: detail.into(),
        });
        passed
    }

    pub fn passed(&self) -> bool {
        !self.assertions.is_empty() && self.assertions.iter().all(|a| a.passed)
    }

    pub fn assertion(&self, name: &str) -> Option<&Assertion> {
        self.assertions.iter().find(|a| a.name == name)
    }

    /// Report content without wall time; stable across identical runs.
    pub fn to_json(&self) -> String {
        let mut value = serde_json::to_value(self).expect("report serialization is infallible");
        value["passed"] = Value::Bool(self.passed());
        serde_json::to_string_pretty(&value).expect("report serialization is infallible")
    }

    /// Content plus `wall_time_ms`.
    pub fn to_json_timed(&self) -> String {
        let mut value = serde_json::to_value(self).expect("report serialization is infallible");
        value["passed"] = Value::Bool(self.passed());
        value["wall_time_ms"] = json!(self.wall_time_ms);
        serde_json::to_string_pretty(&value).expect("report serialization is infallible")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let params: Vec<String> = self
            .parameters
            .iter()
            .map(|(k, v)| match v {
                Value::String(s) => format!("{k}={s}"),
                other => format!("{k}={other}"),
            })
            .collect();
        let _ = writeln!(out, "{} ({}) seed={}", self.command, params.join(" "), self.seed);
        for note in &self.notes {
            let _ = writeln!(out, "{note}");
        }
        for a in &self.assertions {
            let verdict = if a.passed { "PASS" } else { "FAIL" };
            let _ = writeln!(out, "{verdict} {}: {}", a.name, a.detail);
        }
        for c in &self.citations {
            let _ = writeln!(out, "  cite: {c}");
        }
        let _ = writeln!(
            out,
            "{}: {} ({:.1} ms)",
            if self.passed() { "ok" } else { "failed" },
            self.outcome,
            self.wall_time_ms
        );
        out
    }
}

fn timed<T>(
    f: impl FnOnce() -> Result<(RunReport, T), CommandError>,
) -> Result<(RunReport, T), CommandError> {
    let start = Instant::now();
    let (mut report, extra) = f()?;
    report.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok((report, extra))
}

pub fn gen_random(n: usize, m: usize, seed: u64) -> Result<(RunReport, ColouredGraph), CommandError> {
    timed(|| {
        let graph = ColouredGraph::random(n, m, seed)?;
        let mut report = RunReport::new("gen-random", seed).param("n", n).param("m", m);
        let histogram = graph.histogram();
        let total: usize = histogram.iter().sum();
        report.check(
            "every pair coloured",
            total == n * n.saturating_sub(1) / 2,
            format!("{total} pairs, histogram {histogram:?}"),
        );
        report.data = json!({ "n": n, "m": m, "histogram": histogram });
        report.outcome = "graph generated".into();
        Ok((report, graph))
    })
}

/// Odd `m`: builds and verifies the Sym(m) complement. Even `m`: verifies
/// that the pair colouring is blocked by a fixed-point-free involution and
/// that no graph admits such a colour action.
pub fn complement(
    m: usize,
    orbits: usize,
    seed: u64,
) -> Result<(RunReport, Option<OrbitGraphSpec>), CommandError> {
    timed(|| {
        let mut report = RunReport::new("complement", seed)
            .param("m", m)
            .param("orbits", orbits);
        if m < 2 {
            return Err(CommandError::Invalid(format!("palette size {m} is below 2")));
        }
        if m % 2 == 1 {
            let (spec, verification) = equivariant::sym_complement(m, orbits, seed)?;
            let laws = spec.colouring().default_law_check(100_000, seed);
            report.check(
                "pair colouring laws",
                laws.passed(),
                format!(
                    "{} symmetry and {} equivariance checks",
                    laws.symmetry_checked, laws.equivariance_checked
                ),
            );
            record_verification(&mut report, &verification);
            report.check(
                "trivial kernel",
                verification.kernel_size() == 1,
                format!("|K| = {}", verification.kernel_size()),
            );
            report.data = json!({
                "vertices": verification.vertices,
                "group_size": verification.group_size,
                "kernel": verification.kernel,
                "exhaustive": verification.exhaustive,
            });
            report.outcome = "complement verified".into();
            Ok((report, Some(spec)))
        } else {
            let group = std::sync::Arc::new(equivariant::FiniteGroup::from_perms(
                &perm::enumerate_sym(m)?,
            )?);
            match PairColouring::build(group, seed) {
                Err(EquivariantError::FixedPointFreeInvolution { element, perm }) => {
                    report.check(
                        "pair colouring blocked",
                        true,
                        format!("involution {perm} fixes no colour"),
                    );
                    report
                        .citations
                        .push(format!("element {element} acts as {perm}"));
                }
                Err(other) => return Err(other.into()),
                Ok(_) => {
                    report.check(
                        "pair colouring blocked",
                        false,
                        "a pair colouring was built for an even palette",
                    );
                }
            }
            let graph = ColouredGraph::random(OBSTRUCTION_SAMPLE_VERTICES, m, seed)?;
            let obstruction = graph.check_no_fpf_colour_involution()?;
            report.check(
                "no vertex permutation induces a fixed-point-free colour involution",
                obstruction.passed(),
                format!(
                    "{} (s, pi) pairs on a random {}-vertex graph",
                    obstruction.pairs_checked, OBSTRUCTION_SAMPLE_VERTICES
                ),
            );
            report.data = json!({
                "pairs_checked": obstruction.pairs_checked,
                "colour_involutions": obstruction.colour_involutions.len(),
            });
            report.outcome = "obstruction verified".into();
            Ok((report, None))
        }
    })
}

fn record_verification(report: &mut RunReport, v: &equivariant::ColourGroupReport) {
    report.check(
        "colour-consistent action",
        v.failures.is_empty(),
        format!(
            "{} of {} elements checked on {} vertices{}",
            v.checked_elements - v.failures.len(),
            v.checked_elements,
            v.vertices,
            if v.exhaustive { "" } else { " (sampled)" }
        ),
    );
    for f in v.failures.iter().take(CITATION_LIMIT) {
        report.citations.push(format!(
            "element {} (phi = {}) breaks pair {:?}",
            f.element, f.phi, f.pair
        ));
    }
    report.check(
        "kernel preserves colours",
        v.kernel_colour_preserving,
        format!("kernel {:?}", v.kernel),
    );
}

/// Builds the orbit graph for a double cover of Sym(m) when every
/// involution of the cover fixes a colour; otherwise cites the blocker.
pub fn supplement(
    m: usize,
    kind: CoverKind,
    orbits: usize,
    seed: u64,
) -> Result<(RunReport, Option<OrbitGraphSpec>), CommandError> {
    timed(|| {
        let mut report = RunReport::new("supplement", seed)
            .param("m", m)
            .param("cover", kind.to_string())
            .param("orbits", orbits);
        let condition = spin::supplement_condition_auto(m, kind)?;
        let condition_detail = format!(
            "{} order-2 element(s) checked ({:?} mode)",
            condition.involutions_checked, condition.mode
        );
        report.check("supplement condition", condition.holds, condition_detail);
        let mut data = json!({ "condition": condition });
        if m >= 8 && m.is_multiple_of(8) {
            let other = match kind {
                CoverKind::Tilde => CoverKind::Hat,
                CoverKind::Hat => CoverKind::Tilde,
            };
            let other_check = spin::supplement_condition_auto(m, other)?;
            if !condition.holds && !other_check.holds {
                report.citations.push("no supplement from either cover".into());
            }
            data["other_cover"] = json!(other_check);
        }
        if let Some(b) = &condition.blocking {
            report.citations.push(format!(
                "involution {} of cycle type {:?} lifts to order 2 and fixes no colour",
                b.perm, b.cycle_type
            ));
        }
        if !condition.holds {
            report.data = data;
            report.outcome = "supplement blocked".into();
            return Ok((report, None));
        }
        let cover = spin::enumerate_cover(m, kind)?;
        report.check(
            "cover group axioms",
            cover.group.check_axioms(),
            format!("{} elements", cover.group.size()),
        );
        let colouring = PairColouring::build(cover.group.clone(), seed)?;
        let spec = OrbitGraphSpec::new(colouring, orbits, seed)?;
        let verification = spec.verify_colour_group()?;
        record_verification(&mut report, &verification);
        let expected_kernel = vec![0, cover.central_involution()];
        report.check(
            "kernel is {+1, -1}",
            verification.kernel == expected_kernel,
            format!("|K| = {}", verification.kernel_size()),
        );
        data["vertices"] = json!(verification.vertices);
        data["group_size"] = json!(verification.group_size);
        data["kernel"] = json!(verification.kernel);
        report.data = data;
        report.outcome = "supplement verified".into();
        Ok((report, Some(spec)))
    })
}

pub fn cover_table(m: usize, kind: CoverKind) -> Result<RunReport, CommandError> {
    let (report, ()) = timed(|| {
        let mut report = RunReport::new("cover-table", 0)
            .param("m", m)
            .param("cover", kind.to_string());
        let table = spin::order_rule_table(m, kind, spin::default_table_mode(m))?;
        report.notes.push(table.to_text().trim_end().to_string());
        report.check(
            "order rule",
            table.passed(),
            format!("{} rows, {:?} mode", table.rows.len(), table.mode),
        );
        if m >= 8 && m.is_multiple_of(8) {
            let blocked = CoverKind::ALL
                .iter()
                .map(|&k| spin::supplement_condition_direct(m, k).map(|c| !c.holds))
                .collect::<Result<Vec<_>, _>>()?;
            if blocked.iter().all(|&b| b) {
                report.citations.push("no supplement from either cover".into());
            }
        }
        report.data = json!(table);
        report.outcome = "order rule checked".into();
        Ok((report, ()))
    })?;
    Ok(report)
}

pub fn saturate(
    graph: &ColouredGraph,
    k: usize,
    seed: u64,
    rounds: usize,
) -> Result<(RunReport, ColouredGraph), CommandError> {
    timed(|| {
        let mut report = RunReport::new("saturate", seed)
            .param("k", k)
            .param("rounds", rounds)
            .param("start_n", graph.n())
            .param("m", graph.m());
        let outcome = graph.saturate(k, seed, rounds)?;
        report.check(
            "saturation reached",
            outcome.achieved,
            format!(
                "{} vertices after {} sweep(s), {} added",
                outcome.graph.n(),
                outcome.sweeps,
                outcome.added
            ),
        );
        let missing = outcome.graph.unsatisfied_queries(k);
        report.check(
            "independent witness sweep",
            missing.is_empty(),
            format!("{} unsatisfied queries of size <= {k}", missing.len()),
        );
        for q in missing.iter().take(CITATION_LIMIT) {
            report.citations.push(format!("no witness for {:?}", q.parts()));
        }
        report.data = json!({
            "n": outcome.graph.n(),
            "sweeps": outcome.sweeps,
            "added": outcome.added,
            "achieved": outcome.achieved,
        });
        report.outcome = if outcome.achieved {
            "saturated".into()
        } else {
            "round limit reached".into()
        };
        Ok((report, outcome.graph))
    })
}

pub fn obstruction(graph: &ColouredGraph, seed: u64) -> Result<RunReport, CommandError> {
    let (report, ()) = timed(|| {
        let mut report = RunReport::new("obstruction", seed)
            .param("n", graph.n())
            .param("m", graph.m());
        let result = graph.check_no_fpf_colour_involution()?;
        report.check(
            "no fixed-point-free colour involution is induced",
            result.passed(),
            format!(
                "{} vertex permutations x {} colour involutions",
                result.vertex_perms,
                result.colour_involutions.len()
            ),
        );
        for c in result.citations.iter().take(CITATION_LIMIT) {
            report.citations.push(format!(
                "s = {}, pi = {}: edge {:?} has colour {} but pi sends it to {}",
                c.vertex_perm, c.colour_perm, c.edge, c.colour, c.image
            ));
        }
        for (s, pi) in result.consistent_pairs.iter().take(CITATION_LIMIT) {
            report
                .citations
                .push(format!("counterexample: s = {s}, pi = {pi} is consistent"));
        }
        report.data = json!({
            "pairs_checked": result.pairs_checked,
            "citations": result.citations.len(),
            "vacuous": result.is_vacuous(),
        });
        report.outcome = "obstruction checked".into();
        Ok((report, ()))
    })?;
    Ok(report)
}

/// Sweeps `2 <= m <= max_m`, `1 <= k <= max_k`: the bound must hold for
/// `k >= 2` and fail for `k = 1`.
pub fn coset_bound(max_m: usize, max_k: usize) -> Result<RunReport, CommandError> {
    if max_m < 2 || max_k < 1 {
        return Err(CommandError::Invalid("need m >= 2 and k >= 1".into()));
    }
    let (report, ()) = timed(|| {
        let mut report = RunReport::new("coset-bound", 0)
            .param("m", max_m)
            .param("k", max_k);
        let mut grid = BTreeMap::new();
        let mut bad_large = Vec::new();
        let mut bad_one = Vec::new();
        for m in 2..=max_m {
            let row: Vec<bool> = (1..=max_k).map(|k| perm::double_coset_lower_bound(m, k)).collect();
            for (i, &holds) in row.iter().enumerate() {
                let k = i + 1;
                if k == 1 && holds {
                    bad_one.push(m);
                }
                if k >= 2 && !holds {
                    bad_large.push((m, k));
                }
            }
            grid.insert(m.to_string(), row);
        }
        report.check(
            "bound holds for k >= 2",
            bad_large.is_empty(),
            format!("{} failures", bad_large.len()),
        );
        report.check(
            "bound fails for k = 1",
            bad_one.is_empty(),
            format!("{} unexpected passes", bad_one.len()),
        );
        report.data = json!({ "grid": grid });
        report.outcome = "bound swept".into();
        Ok((report, ()))
    })?;
    Ok(report)
}
