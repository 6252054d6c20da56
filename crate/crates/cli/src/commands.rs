//! The four commands as library calls returning serializable reports.

use std::fmt::Write as _;

use lqu_core::lqu::LquResult;
use lqu_core::optimize::Phase;
use lqu_core::protocol::{
    optimize_filters, run_protocol, sweep_surface, FilterOptimization, FilterSet, ProtocolResult,
    ReferenceCase, Surface,
};
use serde::Serialize;

use crate::error::Result;
use crate::formats::{full, sig6, write_csv, MatrixJson};
use crate::reference::{reference, Target};
use crate::spec::{FilterPlan, Resolved, ScenarioSpec};

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub scenario: &'static str,
    pub quantity: &'static str,
    pub got: f64,
    pub expected: f64,
    pub tol: f64,
    pub delta: f64,
    pub pass: bool,
}

impl Check {
    fn new(scenario: &'static str, quantity: &'static str, got: f64, target: Target) -> Self {
        Self {
            scenario,
            quantity,
            got,
            expected: target.value,
            tol: target.tol,
            delta: target.delta(got),
            pass: target.accepts(got),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Table1Column {
    pub scenario: &'static str,
    pub initial: f64,
    pub protected: f64,
    pub unprotected: f64,
    pub fidelity_protected: f64,
    pub fidelity_unprotected: f64,
}

type ColumnField = fn(&Table1Column) -> f64;

#[derive(Debug, Clone, Serialize)]
pub struct Table1Report {
    pub columns: Vec<Table1Column>,
    pub checks: Vec<Check>,
    pub pass: bool,
}

/// Runs the three reference scenarios at their quoted filter strengths.
pub fn table1() -> Result<Table1Report> {
    let mut columns = Vec::new();
    let mut checks = Vec::new();
    for case in ReferenceCase::ALL {
        let r = run_protocol(&case.config())?;
        let want = reference(case);
        let col = Table1Column {
            scenario: case.name(),
            initial: r.lqu_0.value,
            protected: r.lqu_3.value,
            unprotected: r.lqu_unprotected.value,
            fidelity_protected: r.fidelity_final,
            fidelity_unprotected: r.fidelity_unprotected,
        };
        let name = case.name();
        checks.extend([
            Check::new(name, "initial LQU", col.initial, want.initial),
            Check::new(name, "LQU with M, N", col.protected, want.protected),
            Check::new(name, "LQU without M, N", col.unprotected, want.unprotected),
            Check::new(name, "fidelity with M, N", col.fidelity_protected, want.fidelity_protected),
            Check::new(name, "fidelity without M, N", col.fidelity_unprotected, want.fidelity_unprotected),
        ]);
        columns.push(col);
    }
    let pass = checks.iter().all(|c| c.pass);
    Ok(Table1Report {
        columns,
        checks,
        pass,
    })
}

impl Table1Report {
    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = write!(s, "{:<24}", "");
        for c in &self.columns {
            let _ = write!(s, "{:>20}", c.scenario);
        }
        s.push('\n');
        let rows: [(&str, ColumnField); 5] = [
            ("Initial state", |c| c.initial),
            ("Perform M and N", |c| c.protected),
            ("Without M and N", |c| c.unprotected),
            ("Fidelity with M, N", |c| c.fidelity_protected),
            ("Fidelity without M, N", |c| c.fidelity_unprotected),
        ];
        for (label, get) in rows {
            let _ = write!(s, "{label:<24}");
            for c in &self.columns {
                let _ = write!(s, "{:>20}", sig6(get(c)));
            }
            s.push('\n');
        }
        s.push('\n');
        for c in &self.checks {
            let _ = writeln!(
                s,
                "{} {:<20} {:<22} got {:>10}  expected {:>6} ± {:<5.0e} delta {:+.2e}",
                if c.pass { "PASS" } else { "FAIL" },
                c.scenario,
                c.quantity,
                sig6(c.got),
                c.expected,
                c.tol,
                c.delta
            );
        }
        s
    }

    pub fn to_csv(&self) -> Result<String> {
        let rows: Vec<Vec<String>> = self
            .checks
            .iter()
            .map(|c| {
                vec![
                    c.scenario.to_owned(),
                    c.quantity.to_owned(),
                    full(c.got),
                    full(c.expected),
                    full(c.tol),
                    c.pass.to_string(),
                ]
            })
            .collect();
        csv_string(&["scenario", "quantity", "value", "expected", "tol", "pass"], &rows)
    }
}

fn csv_string(header: &[&str], rows: &[Vec<String>]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(&mut buf, header, rows)?;
    Ok(String::from_utf8(buf).expect("csv output is UTF-8"))
}

#[derive(Debug, Clone, Serialize)]
pub struct FilterStrengths {
    pub m: Vec<f64>,
    pub n: Vec<f64>,
}

impl From<&FilterSet> for FilterStrengths {
    fn from(f: &FilterSet) -> Self {
        Self {
            m: f.weak_strengths(),
            n: f.reversal_strengths(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct StageReport {
    pub stage: &'static str,
    pub lqu: f64,
    pub lambda_max: f64,
    pub top_eigvec: Vec<f64>,
    pub degeneracy_gap: f64,
    pub degenerate: bool,
    pub state: MatrixJson,
}

fn stage(name: &'static str, rho: &lqu_core::DensityMatrix, l: &LquResult) -> StageReport {
    StageReport {
        stage: name,
        lqu: l.value,
        lambda_max: l.lambda_max,
        top_eigvec: l.top_eigvec.clone(),
        degeneracy_gap: l.degeneracy_gap,
        degenerate: l.degenerate,
        state: MatrixJson::from_matrix(rho.matrix()),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuccessReport {
    pub weak: f64,
    pub weak_physical: f64,
    pub reversal: f64,
    pub reversal_physical: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct OptimizationSummary {
    pub budget: usize,
    pub seed: u64,
    pub evaluations: usize,
    pub best_lqu: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub config: ScenarioSpec,
    pub filters: FilterStrengths,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub optimization: Option<OptimizationSummary>,
    pub stages: Vec<StageReport>,
    pub unprotected: StageReport,
    pub fidelity_final: f64,
    pub fidelity_unprotected: f64,
    pub success: SuccessReport,
    pub warnings: Vec<String>,
}

/// Warnings for filter choices outside the nominal domain.
pub fn filter_warnings(f: &FilterSet) -> Vec<String> {
    let mut w = Vec::new();
    for (side, filt) in [("A", &f.reversal_a), ("B", &f.reversal_b)] {
        if filt.dim() == 3 && filt.exceeds_unit() {
            w.push(format!(
                "qutrit reversal on {side} has entries above 1 {:?}; the output equals that of the filter rescaled by 1/{}",
                filt.diag(),
                filt.max_entry()
            ));
        }
    }
    w
}

fn degeneracy_warnings(r: &ProtocolResult) -> Vec<String> {
    [
        ("rho_0", &r.lqu_0),
        ("rho_1", &r.lqu_1),
        ("rho_2", &r.lqu_2),
        ("rho_3", &r.lqu_3),
        ("unprotected", &r.lqu_unprotected),
    ]
    .into_iter()
    .filter(|(_, l)| l.degenerate)
    .map(|(name, l)| {
        format!(
            "optimal observable for {name} is degenerate (spectral gap {:.3e}); the closed-form LQU may not be attained",
            l.degeneracy_gap
        )
    })
    .collect()
}

fn resolve_filters(res: &Resolved) -> Result<(FilterSet, Option<FilterOptimization>)> {
    Ok(match &res.plan {
        FilterPlan::Fixed(f) => (f.clone(), None),
        FilterPlan::Optimize { budget, seed } => {
            let opt = optimize_filters(&res.scenario, *budget, *seed)?;
            (opt.filters.clone(), Some(opt))
        }
    })
}

pub fn run(res: &Resolved) -> Result<RunReport> {
    let (filters, opt) = resolve_filters(res)?;
    let r = run_protocol(&res.scenario.with_filters(filters.clone())?)?;
    let mut warnings = filter_warnings(&filters);
    warnings.extend(degeneracy_warnings(&r));
    let optimization = match (&res.plan, &opt) {
        (FilterPlan::Optimize { budget, seed }, Some(o)) => Some(OptimizationSummary {
            budget: *budget,
            seed: *seed,
            evaluations: o.outcome.evaluations,
            best_lqu: o.best_lqu,
        }),
        _ => None,
    };
    Ok(RunReport {
        config: res.spec.clone(),
        filters: (&filters).into(),
        optimization,
        stages: vec![
            stage("rho_0", &r.rho_0, &r.lqu_0),
            stage("rho_1", &r.rho_1, &r.lqu_1),
            stage("rho_2", &r.rho_2, &r.lqu_2),
            stage("rho_3", &r.rho_3, &r.lqu_3),
        ],
        unprotected: stage("unprotected", &r.rho_unprotected, &r.lqu_unprotected),
        fidelity_final: r.fidelity_final,
        fidelity_unprotected: r.fidelity_unprotected,
        success: SuccessReport {
            weak: r.weak_success,
            weak_physical: r.weak_success_physical,
            reversal: r.reversal_success,
            reversal_physical: r.reversal_success_physical,
        },
        warnings,
    })
}

impl RunReport {
    pub fn to_csv(&self) -> Result<String> {
        let rows: Vec<Vec<String>> = self
            .stages
            .iter()
            .chain([&self.unprotected])
            .map(|s| vec![s.stage.to_owned(), full(s.lqu), s.degenerate.to_string()])
            .collect();
        csv_string(&["stage", "lqu", "degenerate"], &rows)
    }

    pub fn summary(&self) -> String {
        let mut s = String::new();
        for st in self.stages.iter().chain([&self.unprotected]) {
            let _ = writeln!(s, "LQU({:<11}) = {}", st.stage, sig6(st.lqu));
        }
        let _ = writeln!(s, "F(rho_0, rho_3)       = {}", sig6(self.fidelity_final));
        let _ = writeln!(s, "F(rho_0, unprotected) = {}", sig6(self.fidelity_unprotected));
        let _ = writeln!(
            s,
            "success probability   = {} (weak), {} (reversal)",
            sig6(self.success.weak_physical),
            sig6(self.success.reversal_physical)
        );
        s
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TracePoint {
    pub phase: String,
    pub evaluations: usize,
    pub best_lqu: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct OptimizeReport {
    pub config: ScenarioSpec,
    pub budget: usize,
    pub seed: u64,
    pub best: FilterStrengths,
    pub best_lqu: f64,
    pub evaluations: usize,
    pub trace: Vec<TracePoint>,
    pub warnings: Vec<String>,
}

fn phase_label(p: Phase) -> String {
    match p {
        Phase::Initial => "initial".into(),
        Phase::Generation(g) => format!("generation {g}"),
        Phase::Refinement(k) => format!("refinement {k}"),
    }
}

/// Optimizes with the plan's budget and seed; call
/// [`Resolved::force_optimize`] first for fixed-filter scenarios.
pub fn optimize(res: &Resolved) -> Result<OptimizeReport> {
    let (budget, seed) = match res.plan {
        FilterPlan::Optimize { budget, seed } => (budget, seed),
        FilterPlan::Fixed(_) => {
            let mut r = res.clone();
            r.force_optimize(None, None);
            return optimize(&r);
        }
    };
    let opt = optimize_filters(&res.scenario, budget, seed)?;
    Ok(OptimizeReport {
        config: res.spec.clone(),
        budget,
        seed,
        best: (&opt.filters).into(),
        best_lqu: opt.best_lqu,
        evaluations: opt.outcome.evaluations,
        trace: opt
            .outcome
            .trace
            .iter()
            .map(|p| TracePoint {
                phase: phase_label(p.phase),
                evaluations: p.evaluations,
                best_lqu: p.best_value,
            })
            .collect(),
        warnings: filter_warnings(&opt.filters),
    })
}

impl OptimizeReport {
    pub fn to_csv(&self) -> Result<String> {
        let rows: Vec<Vec<String>> = self
            .trace
            .iter()
            .map(|p| vec![p.phase.clone(), p.evaluations.to_string(), full(p.best_lqu)])
            .collect();
        csv_string(&["phase", "evaluations", "best_lqu"], &rows)
    }

    pub fn summary(&self) -> String {
        let fmt = |v: &[f64]| v.iter().map(|x| sig6(*x)).collect::<Vec<_>>().join(", ");
        format!(
            "best LQU(rho_3) = {} after {} evaluations (seed {})\nm = [{}]\nn = [{}]\n",
            sig6(self.best_lqu),
            self.evaluations,
            self.seed,
            fmt(&self.best.m),
            fmt(&self.best.n)
        )
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Argmax {
    pub n1: f64,
    pub n2: f64,
    pub lqu: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub config: ScenarioSpec,
    pub n1: Vec<f64>,
    pub n2: Vec<f64>,
    /// `lqu[i][j]` at `(n1[i], n2[j])`; `null` where evaluation failed.
    pub lqu: Vec<Vec<Option<f64>>>,
    pub argmax: Option<Argmax>,
    #[serde(skip)]
    pub surface: Surface,
}

/// Sweeps the first reversal entries on A and B; other filter strengths come
/// from the scenario (fixed, or optimized first).
pub fn sweep(res: &Resolved) -> Result<SweepReport> {
    let (filters, _) = resolve_filters(res)?;
    let cfg = res.scenario.with_filters(filters)?;
    let s = sweep_surface(&cfg, res.sweep.0, res.sweep.1)?;
    let lqu = s
        .values
        .chunks(s.n2.len())
        .map(<[Option<f64>]>::to_vec)
        .collect();
    Ok(SweepReport {
        config: res.spec.clone(),
        n1: s.n1.clone(),
        n2: s.n2.clone(),
        lqu,
        argmax: s.argmax().map(|(n1, n2, lqu)| Argmax { n1, n2, lqu }),
        surface: s,
    })
}

impl SweepReport {
    /// `n1,n2,lqu` rows; failed points leave `lqu` empty.
    pub fn to_csv(&self) -> Result<String> {
        let rows: Vec<Vec<String>> = self
            .surface
            .rows()
            .map(|(a, b, v)| vec![full(a), full(b), v.map(full).unwrap_or_default()])
            .collect();
        csv_string(&["n1", "n2", "lqu"], &rows)
    }

    pub fn summary(&self) -> String {
        match &self.argmax {
            Some(a) => format!(
                "{}×{} grid; maximum LQU(rho_3) = {} at n1 = {}, n2 = {}\n",
                self.n1.len(),
                self.n2.len(),
                sig6(a.lqu),
                sig6(a.n1),
                sig6(a.n2)
            ),
            None => "no grid point could be evaluated\n".into(),
        }
    }
}
