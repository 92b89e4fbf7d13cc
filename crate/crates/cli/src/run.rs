//! Task execution and report rendering.

use std::fmt::Write as _;
use std::ops::RangeInclusive;

use serde::Serialize;
use sha2::{Digest, Sha256};
use tweq_core::algebra::{format_rational, GradedElement, Parity};
use tweq_core::cohomology::{
    completed_vs_tensored_check, compute_cohomology, inverse_limit, omega_tower, truncate, uncompleted_cohomology,
    ComplexSpec, InverseLimit, RankProfile, Tower, TruncatedComplex, TruncationParams,
};
use tweq_core::linalg::Dense;
use tweq_core::models::{
    extended_to_twisted, invariant_splitting, validate_extended_action, weil_three_form, ModelContext, SignConvention,
    TorusRotation,
};
use tweq_core::verifier::{run_suite, CheckSuiteConfig, NamedInstance, Suite};
use tweq_core::Error;

use crate::spec::{build_element, build_instance, to_json, BuildError, ComplexKind, ManifoldSpec, ProblemSpec};

/// Tasks in the order they are executed.
pub const TASKS: [&str; 8] = ["validate", "cohomology", "tower", "limit", "uncompleted", "compare", "verify", "average"];

pub fn canonical_task(name: &str) -> Option<&'static str> {
    match name {
        "compare-completed-uncompleted" => Some("compare"),
        "averaging" => Some("average"),
        _ => TASKS.iter().find(|t| **t == name).copied(),
    }
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub levels: Option<u32>,
    pub mode_cap: Option<u32>,
    pub seed: Option<u64>,
    pub probes: usize,
    /// Range of `k` for the `S¹ × CPᵏ` preset.
    pub k_range: Option<RangeInclusive<usize>>,
    pub suites: Vec<Suite>,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { levels: None, mode_cap: None, seed: None, probes: 200, k_range: None, suites: Suite::ALL.to_vec() }
    }
}

pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    pub spec_sha256: String,
    pub seed: u64,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct LevelReport {
    pub label: String,
    pub dims: [usize; 2],
    pub even: Vec<String>,
    pub odd: Vec<String>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct MapReport {
    pub from: String,
    pub to: String,
    pub even: Vec<Vec<String>>,
    pub odd: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct LimitReport {
    pub ranks: [Option<usize>; 2],
    pub stabilized: [bool; 2],
    pub finitely_generated: bool,
    pub image_ranks: [Vec<usize>; 2],
    pub window: usize,
    pub generators: [Vec<String>; 2],
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ModuleBlockReport {
    pub generator: usize,
    pub parity: usize,
    pub block: Option<Vec<i64>>,
    pub minimal_polynomial: String,
    pub annihilators: Vec<String>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct UncompletedSummary {
    pub dims: Vec<[usize; 2]>,
    pub stable: bool,
    pub module: Vec<ModuleBlockReport>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CheckLine {
    pub name: String,
    pub passed: bool,
    pub probes: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TaskOutput {
    Empty,
    Checks { checks: Vec<CheckLine> },
    Levels { levels: Vec<LevelReport>, maps: Vec<MapReport>, limit: Option<LimitReport> },
    Uncompleted { uncompleted: UncompletedSummary },
    Compare {
        completed: [String; 2],
        tensored: [String; 2],
        equal: bool,
        limit: LimitReport,
        uncompleted: UncompletedSummary,
        notes: Vec<String>,
    },
    Average { alpha: String, b: String, residual: String },
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct TaskReport {
    pub task: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub output: TaskOutput,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct RunReport {
    pub name: String,
    pub provenance: Provenance,
    pub tasks: Vec<TaskReport>,
    pub passed: bool,
}

pub fn spec_digest(spec: &ProblemSpec) -> String {
    Sha256::digest(to_json(spec).as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

fn matrix(m: &Dense) -> Vec<Vec<String>> {
    m.iter().map(|r| r.iter().map(format_rational).collect()).collect()
}

fn elements(xs: &[GradedElement]) -> Vec<String> {
    xs.iter().map(|x| x.to_string()).collect()
}

fn level(label: String, c: &TruncatedComplex) -> LevelReport {
    let h = compute_cohomology(c);
    let (e, o) = h.dims();
    LevelReport {
        label,
        dims: [e, o],
        even: elements(&h.representative_elements(c, Parity::Even)),
        odd: elements(&h.representative_elements(c, Parity::Odd)),
    }
}

fn limit_report(l: &InverseLimit) -> LimitReport {
    LimitReport {
        ranks: l.ranks,
        stabilized: l.stabilized,
        finitely_generated: l.finitely_generated(),
        image_ranks: l.image_ranks.clone(),
        window: l.window,
        generators: [elements(&l.generators[0]), elements(&l.generators[1])],
    }
}

fn tower_report(t: &Tower, labels: &[String]) -> (Vec<LevelReport>, Vec<MapReport>, LimitReport) {
    let levels = t
        .levels
        .iter()
        .zip(labels)
        .map(|(l, lab)| {
            let h = &l.cohomology;
            let (e, o) = h.dims();
            LevelReport {
                label: lab.clone(),
                dims: [e, o],
                even: elements(&h.representative_elements(&l.complex, Parity::Even)),
                odd: elements(&h.representative_elements(&l.complex, Parity::Odd)),
            }
        })
        .collect();
    let maps = t
        .maps
        .iter()
        .enumerate()
        .map(|(i, m)| MapReport {
            from: labels[i + 1].clone(),
            to: labels[i].clone(),
            even: matrix(m.matrix(Parity::Even)),
            odd: matrix(m.matrix(Parity::Odd)),
        })
        .collect();
    (levels, maps, limit_report(&inverse_limit(t)))
}

fn profile(p: &RankProfile) -> String {
    match p {
        RankProfile::Finite(r) => format!("finite rank {r}"),
        RankProfile::FormalSeries { slope } => format!("formal series, {slope} new class(es) per level"),
        RankProfile::InfinitelyGenerated => "not finitely generated".into(),
    }
}

struct Ctx<'a> {
    spec: &'a ProblemSpec,
    opts: &'a RunOptions,
    seed: u64,
}

impl Ctx<'_> {
    fn levels(&self) -> u32 {
        self.opts.levels.unwrap_or(self.spec.truncation.levels)
    }

    fn params(&self, n: u32) -> TruncationParams {
        TruncationParams::new(n, self.opts.mode_cap.unwrap_or(self.spec.truncation.mode_cap))
            .with_blocks(self.spec.truncation.blocks)
    }

    fn k_values(&self) -> Option<Vec<usize>> {
        match (&self.spec.manifold, &self.opts.k_range) {
            (ManifoldSpec::S1Cp { .. }, Some(r)) => Some(r.clone().collect()),
            _ => None,
        }
    }

    fn model(&self, k: Option<usize>) -> Result<ModelContext, String> {
        let inst = build_instance(self.spec, k).map_err(|e| e.to_string())?;
        ModelContext::new(inst.data).map_err(|e| e.to_string())
    }

    fn complex(&self, m: &ModelContext) -> tweq_core::Result<ComplexSpec> {
        match self.spec.truncation.complex {
            ComplexKind::Extended => ComplexSpec::extended(m, SignConvention::Minus),
            ComplexKind::Cartan => ComplexSpec::twisted_cartan(m, &extended_to_twisted(m)?.element()?),
            ComplexKind::Weil => ComplexSpec::weil(m, &weil_three_form(m, &extended_to_twisted(m)?)?),
        }
    }

    /// One complex per `k` for the preset with a range.
    fn k_tower(&self, ks: &[usize]) -> Result<(Tower, Vec<String>), String> {
        let mut cs = Vec::new();
        for k in ks {
            let m = self.model(Some(*k))?;
            let c = self.complex(&m).and_then(|c| truncate(&c, self.params(0))).map_err(|e| e.to_string())?;
            cs.push(c);
        }
        let labels = ks.iter().map(|k| format!("k={k}")).collect();
        Ok((Tower::new(cs).map_err(|e| e.to_string())?, labels))
    }

    fn omega_tower(&self) -> Result<(Tower, Vec<String>), String> {
        let m = self.model(None)?;
        let spec = self.complex(&m).map_err(|e| e.to_string())?;
        let p = self.params(0);
        let t = omega_tower(&spec, self.levels(), p).map_err(|e| e.to_string())?;
        let labels = (0..=self.levels()).map(|n| format!("N={n}, K={}", p.mode_cap)).collect();
        Ok((t, labels))
    }

    fn run_task(&self, task: &str) -> Result<(bool, TaskOutput), String> {
        match task {
            "validate" => {
                let inst = build_instance(self.spec, None).map_err(|e| match e {
                    BuildError::Core(Error::InvalidLieAlgebra { kind, indices }) => {
                        format!("lie.structure_constants: {kind} fails at indices {indices:?}")
                    }
                    e => e.to_string(),
                })?;
                let r = validate_extended_action(&inst.data).map_err(|e| e.to_string())?;
                let checks = r
                    .entries
                    .iter()
                    .map(|e| CheckLine { name: e.name.clone(), passed: e.passed, probes: 1, witness: e.witness.clone() })
                    .collect();
                Ok((r.passed(), TaskOutput::Checks { checks }))
            }
            "cohomology" => {
                if let Some(ks) = self.k_values() {
                    let (t, labels) = self.k_tower(&ks)?;
                    let (levels, maps, limit) = tower_report(&t, &labels);
                    return Ok((true, TaskOutput::Levels { levels, maps, limit: Some(limit) }));
                }
                let m = self.model(None)?;
                let n = self.levels();
                let c = self.complex(&m).and_then(|c| truncate(&c, self.params(n))).map_err(|e| e.to_string())?;
                let lvl = level(format!("N={n}, K={}", c.params().mode_cap), &c);
                Ok((true, TaskOutput::Levels { levels: vec![lvl], maps: vec![], limit: None }))
            }
            "tower" | "limit" => {
                let (t, labels) = match self.k_values() {
                    Some(ks) => self.k_tower(&ks)?,
                    None => self.omega_tower()?,
                };
                let (levels, maps, limit) = tower_report(&t, &labels);
                if task == "limit" {
                    return Ok((true, TaskOutput::Levels { levels: vec![], maps: vec![], limit: Some(limit) }));
                }
                Ok((true, TaskOutput::Levels { levels, maps, limit: Some(limit) }))
            }
            "uncompleted" => {
                let m = self.model(None)?;
                let spec = self.complex(&m).map_err(|e| e.to_string())?;
                let u = uncompleted_cohomology(&spec, self.params(self.levels())).map_err(|e| e.to_string())?;
                Ok((true, TaskOutput::Uncompleted { uncompleted: summary(&u) }))
            }
            "compare" => {
                let m = self.model(None)?;
                let spec = self.complex(&m).map_err(|e| e.to_string())?;
                let r = completed_vs_tensored_check(&spec, self.levels(), self.params(0)).map_err(|e| e.to_string())?;
                Ok((
                    true,
                    TaskOutput::Compare {
                        completed: [profile(&r.parities[0].completed), profile(&r.parities[1].completed)],
                        tensored: [profile(&r.parities[0].tensored), profile(&r.parities[1].tensored)],
                        equal: r.equal,
                        limit: limit_report(&r.limit),
                        uncompleted: summary(&r.uncompleted),
                        notes: r.notes.clone(),
                    },
                ))
            }
            "verify" => {
                let inst = build_instance(self.spec, None).map_err(|e| e.to_string())?;
                let cfg = CheckSuiteConfig { seed: self.seed, probes: self.opts.probes, suites: self.opts.suites.clone(), ..Default::default() };
                let res = run_suite(&cfg, &[NamedInstance::new(&self.spec.name, inst.data)]).map_err(|e| e.to_string())?;
                let checks: Vec<CheckLine> = res
                    .iter()
                    .map(|r| CheckLine {
                        name: format!("{} / {} / {}", r.suite, r.instance, r.check),
                        passed: r.passed,
                        probes: r.probes,
                        witness: r.witness.as_ref().map(|w| format!("probe {} leaves {}", w.probe, w.residual)),
                    })
                    .collect();
                Ok((checks.iter().all(|c| c.passed), TaskOutput::Checks { checks }))
            }
            "average" => {
                let c = self.spec.action.cocycle.as_ref().ok_or("no cocycle in action.cocycle")?;
                let n = match self.spec.manifold {
                    ManifoldSpec::Torus { n } => n,
                    _ => return Err("averaging needs a torus manifold".into()),
                };
                let rot = TorusRotation::new(n, c.weights.clone()).map_err(|e| e.to_string())?;
                let pctx = rot.parametrized_ctx();
                let alpha = match (&c.alpha, &c.b0) {
                    (Some(a), _) => build_element("action.cocycle.alpha", &pctx, a).map_err(|e| e.to_string())?,
                    (None, Some(b)) => {
                        let base = tweq_core::AlgebraContext::torus(n, 0);
                        let b0 = build_element("action.cocycle.b0", &base, b).map_err(|e| e.to_string())?;
                        rot.embed(&b0, &pctx).and_then(|x| rot.coboundary(&x)).map_err(|e| e.to_string())?
                    }
                    (None, None) => return Err("cocycle needs alpha or b0".into()),
                };
                let b = invariant_splitting(&rot, &alpha).map_err(|e| e.to_string())?;
                let r = rot.cocycle_residual(&alpha, &b).map_err(|e| e.to_string())?;
                Ok((r.is_zero(), TaskOutput::Average { alpha: alpha.to_string(), b: b.to_string(), residual: r.to_string() }))
            }
            other => Err(format!("unknown task {other}")),
        }
    }
}

fn summary(u: &tweq_core::cohomology::UncompletedReport) -> UncompletedSummary {
    let module = u
        .actions
        .iter()
        .flatten()
        .flat_map(|a| {
            a.blocks.iter().map(move |b| ModuleBlockReport {
                generator: a.generator,
                parity: b.parity.index(),
                block: b.block.clone(),
                minimal_polynomial: b.minimal_polynomial.to_string(),
                annihilators: b.annihilators.iter().map(|p| p.to_string()).collect(),
            })
        })
        .collect();
    UncompletedSummary { dims: u.dims().into_iter().map(|(a, b)| [a, b]).collect(), stable: u.stable, module }
}

/// Runs the requested tasks (or the spec's list) in dependency order.
pub fn run(spec: &ProblemSpec, tasks: &[String], opts: &RunOptions) -> Result<RunReport, String> {
    let requested: Vec<String> = if tasks.is_empty() { spec.tasks.clone() } else { tasks.to_vec() };
    let mut wanted = Vec::new();
    for t in &requested {
        wanted.push(canonical_task(t).ok_or_else(|| format!("unknown task {t}; expected one of {}", TASKS.join(", ")))?);
    }
    let seed = opts.seed.or(spec.seed).unwrap_or(DEFAULT_SEED);
    let ctx = Ctx { spec, opts, seed };
    let mut reports = Vec::new();
    let mut blocked = None;
    for task in TASKS.iter().filter(|t| wanted.contains(t)) {
        let out = match &blocked {
            Some(why) => Err(format!("skipped: {why}")),
            None => ctx.run_task(task),
        };
        let r = match out {
            Ok((passed, output)) => TaskReport { task: task.to_string(), passed, error: None, output },
            Err(e) => TaskReport { task: task.to_string(), passed: false, error: Some(e), output: TaskOutput::Empty },
        };
        if *task == "validate" && r.error.is_some() {
            blocked = Some("the model could not be built".to_string());
        }
        reports.push(r);
    }
    let passed = reports.iter().all(|r| r.passed);
    Ok(RunReport {
        name: spec.name.clone(),
        provenance: Provenance {
            tool: "tweq".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            spec_sha256: spec_digest(spec),
            seed,
        },
        tasks: reports,
        passed,
    })
}

pub fn render_json(r: &RunReport) -> String {
    serde_json::to_string_pretty(r).expect("report serializes")
}

fn pair<T: std::fmt::Debug>(x: &[T; 2]) -> String {
    format!("even {:?}, odd {:?}", x[0], x[1])
}

fn opt_rank(r: Option<usize>) -> String {
    r.map(|x| x.to_string()).unwrap_or_else(|| "unstable".into())
}

fn write_limit(s: &mut String, l: &LimitReport) {
    let _ = writeln!(s, "  limit ranks: ({}, {})", opt_rank(l.ranks[0]), opt_rank(l.ranks[1]));
    let _ = writeln!(s, "  finitely generated: {}", l.finitely_generated);
    let _ = writeln!(s, "  image ranks: {}", pair(&l.image_ranks));
    let _ = writeln!(s, "  stabilization window: {} levels (heuristic)", l.window);
    for (p, g) in l.generators.iter().enumerate() {
        if !g.is_empty() {
            let _ = writeln!(s, "  generators H{p}: {}", g.join("; "));
        }
    }
}

fn write_uncompleted(s: &mut String, u: &UncompletedSummary) {
    let dims: Vec<String> = u.dims.iter().map(|d| format!("({}, {})", d[0], d[1])).collect();
    let _ = writeln!(s, "  uncompleted dims by level: {}", dims.join(" "));
    let _ = writeln!(s, "  stable: {}", u.stable);
    for b in &u.module {
        let block = b.block.as_ref().map(|m| format!("{m:?}")).unwrap_or_else(|| "all".into());
        let _ = writeln!(
            s,
            "  Ω{} on H{} block {block}: minimal polynomial {}; annihilators {}",
            b.generator + 1,
            b.parity,
            b.minimal_polynomial,
            b.annihilators.join(", ")
        );
    }
}

pub fn render_text(r: &RunReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "problem: {}", r.name);
    let p = &r.provenance;
    let _ = writeln!(s, "{} {} | spec sha256 {} | seed {}", p.tool, p.version, p.spec_sha256, p.seed);
    for t in &r.tasks {
        let _ = writeln!(s, "\n[{}] {}", t.task, if t.passed { "ok" } else { "FAILED" });
        if let Some(e) = &t.error {
            let _ = writeln!(s, "  error: {e}");
        }
        match &t.output {
            TaskOutput::Empty => {}
            TaskOutput::Checks { checks } => {
                for c in checks {
                    let _ = writeln!(s, "  {} {} ({} probes)", if c.passed { "pass" } else { "FAIL" }, c.name, c.probes);
                    if let Some(w) = &c.witness {
                        let _ = writeln!(s, "    witness: {w}");
                    }
                }
            }
            TaskOutput::Levels { levels, maps, limit } => {
                for l in levels {
                    let _ = writeln!(s, "  {}: ranks ({}, {})", l.label, l.dims[0], l.dims[1]);
                    if !l.even.is_empty() {
                        let _ = writeln!(s, "    H0: {}", l.even.join("; "));
                    }
                    if !l.odd.is_empty() {
                        let _ = writeln!(s, "    H1: {}", l.odd.join("; "));
                    }
                }
                for m in maps {
                    let _ = writeln!(s, "  map {} -> {}: even {:?}, odd {:?}", m.from, m.to, m.even, m.odd);
                }
                if let Some(l) = limit {
                    write_limit(&mut s, l);
                }
            }
            TaskOutput::Uncompleted { uncompleted } => write_uncompleted(&mut s, uncompleted),
            TaskOutput::Compare { completed, tensored, equal, limit, uncompleted, notes } => {
                for p in 0..2 {
                    let _ = writeln!(s, "  H{p}: completed {} | tensored {}", completed[p], tensored[p]);
                }
                let _ = writeln!(s, "  equal: {equal}");
                write_limit(&mut s, limit);
                write_uncompleted(&mut s, uncompleted);
                for n in notes {
                    let _ = writeln!(s, "  note: {n}");
                }
            }
            TaskOutput::Average { alpha, b, residual } => {
                let _ = writeln!(s, "  alpha: {alpha}");
                let _ = writeln!(s, "  B: {b}");
                let _ = writeln!(s, "  residual: {residual}");
            }
        }
    }
    let _ = writeln!(s, "\nresult: {}", if r.passed { "all requested checks passed" } else { "FAILED" });
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn task_aliases() {
        assert_eq!(canonical_task("compare-completed-uncompleted"), Some("compare"));
        assert_eq!(canonical_task("tower"), Some("tower"));
        assert_eq!(canonical_task("nope"), None);
    }

    #[test]
    fn profiles_read_plainly() {
        assert_eq!(profile(&RankProfile::Finite(2)), "finite rank 2");
        assert_eq!(profile(&RankProfile::InfinitelyGenerated), "not finitely generated");
    }
}
