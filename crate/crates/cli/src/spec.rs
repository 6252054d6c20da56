//! Scenario files: what to simulate and where to write it.
//!
//! ```json
//! {
//!   "state": "bell_qubit",
//!   "channel_a": {"family": "gad2", "r": 0.5, "p": 0.5},
//!   "channel_b": {"family": "gad2", "r": 0.5, "p": 0.5},
//!   "filters": {"m": [1.285, 0.760], "n": [1.606, 0.830]},
//!   "sweep": {"n1": {"lo": 0, "hi": 2, "points": 101}},
//!   "output": {"path": "fig4.csv", "format": "csv"}
//! }
//! ```
//!
//! `state` is a named state or a path to a state file; relative paths are
//! resolved against the scenario file's directory.

use std::path::{Path, PathBuf};

use lqu_core::channels::{gad_qubit, gad_qutrit_v, KrausChannel};
use lqu_core::protocol::{default_budget, reversal_param_count, weak_param_count, FilterSet, GridAxis, Scenario};
use lqu_core::{states, DensityMatrix};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::formats::{parse_json, read_channel, read_state};

pub const NAMED_STATES: [&str; 3] = ["bell_qubit", "nonsym_qubit", "nonsym_qutrit"];

pub fn named_state(name: &str) -> Option<DensityMatrix> {
    match name {
        "bell_qubit" => Some(states::bell_qubit()),
        "nonsym_qubit" => Some(states::nonsym_qubit()),
        "nonsym_qutrit" => Some(states::nonsym_qutrit()),
        _ => None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase", deny_unknown_fields)]
pub enum ChannelSpec {
    Gad2 { r: f64, p: f64 },
    Gad3 { r: f64, p1: f64, p2: f64 },
    /// Custom Kraus operators from a channel file.
    File { path: PathBuf },
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizeSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// Either fixed strengths `m`/`n` (missing ones default to identity) or
/// `optimize`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiltersSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub optimize: Option<OptimizeSpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisSpec {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl From<AxisSpec> for GridAxis {
    fn from(a: AxisSpec) -> Self {
        GridAxis {
            lo: a.lo,
            hi: a.hi,
            points: a.points,
        }
    }
}

impl From<GridAxis> for AxisSpec {
    fn from(a: GridAxis) -> Self {
        AxisSpec {
            lo: a.lo,
            hi: a.hi,
            points: a.points,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n1: Option<AxisSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n2: Option<AxisSpec>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    pub state: String,
    pub channel_a: ChannelSpec,
    pub channel_b: ChannelSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub filters: Option<FiltersSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputSpec>,
}

impl ScenarioSpec {
    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        parse_json(text, origin)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(crate::error::io_err(path))?;
        Self::parse(&text, path)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FilterPlan {
    Fixed(FilterSet),
    Optimize { budget: usize, seed: u64 },
}

/// A scenario with files loaded and every default filled in.
#[derive(Debug, Clone)]
pub struct Resolved {
    /// The input spec with defaults expanded; echoed into reports.
    pub spec: ScenarioSpec,
    pub scenario: Scenario,
    pub plan: FilterPlan,
    pub sweep: (GridAxis, GridAxis),
    /// Directory relative paths were resolved against.
    pub base_dir: PathBuf,
}

fn resolve_path(base: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

fn existing(path: PathBuf) -> Result<PathBuf> {
    if path.is_file() {
        Ok(path)
    } else {
        Err(CliError::Config(format!("referenced file {} does not exist", path.display())))
    }
}

fn build_channel(spec: &ChannelSpec, base: &Path) -> Result<KrausChannel> {
    Ok(match spec {
        ChannelSpec::Gad2 { r, p } => gad_qubit(*r, *p)?,
        ChannelSpec::Gad3 { r, p1, p2 } => gad_qutrit_v(*r, *p1, *p2)?,
        ChannelSpec::File { path } => read_channel(&existing(resolve_path(base, path))?)?,
    })
}

fn identity_strengths(count: usize) -> Vec<f64> {
    vec![1.0; count]
}

impl Resolved {
    pub fn from_file(path: &Path) -> Result<Self> {
        let spec = ScenarioSpec::load(path)?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::new(spec, &base)
    }

    pub fn new(spec: ScenarioSpec, base_dir: &Path) -> Result<Self> {
        let state = match named_state(&spec.state) {
            Some(s) => s,
            None => {
                let p = resolve_path(base_dir, Path::new(&spec.state));
                if !p.is_file() {
                    return Err(CliError::Config(format!(
                        "state `{}` is neither a named state ({}) nor an existing file",
                        spec.state,
                        NAMED_STATES.join(", ")
                    )));
                }
                read_state(&p)?
            }
        };
        let ch_a = build_channel(&spec.channel_a, base_dir)?;
        let ch_b = build_channel(&spec.channel_b, base_dir)?;
        let scenario = Scenario::new(state, ch_a, ch_b)?;
        let (da, db) = (scenario.dim_a(), scenario.dim_b());
        for d in [da, db] {
            if d != 2 && d != 3 {
                return Err(CliError::Config(format!(
                    "subsystem dimension {d} is not supported (qubits and qutrits only)"
                )));
            }
        }

        let mut spec = spec;
        let filters = spec.filters.take().unwrap_or_default();
        let (plan, filters) = match filters.optimize {
            Some(opt) => {
                if filters.m.is_some() || filters.n.is_some() {
                    return Err(CliError::Config(
                        "filters: give either `m`/`n` or `optimize`, not both".into(),
                    ));
                }
                let budget = opt.budget.unwrap_or_else(|| default_budget(da.max(db)));
                let seed = opt.seed.unwrap_or(0);
                let echo = FiltersSpec {
                    optimize: Some(OptimizeSpec {
                        budget: Some(budget),
                        seed: Some(seed),
                    }),
                    ..Default::default()
                };
                (FilterPlan::Optimize { budget, seed }, echo)
            }
            None => {
                let m = filters
                    .m
                    .unwrap_or_else(|| identity_strengths(weak_param_count(da) + weak_param_count(db)));
                let n = filters.n.unwrap_or_else(|| {
                    identity_strengths(reversal_param_count(da) + reversal_param_count(db))
                });
                let set = FilterSet::from_strengths(da, db, &m, &n).map_err(|e| {
                    CliError::Config(format!(
                        "filters: {e} (expected {} weak and {} reversal strengths)",
                        weak_param_count(da) + weak_param_count(db),
                        reversal_param_count(da) + reversal_param_count(db)
                    ))
                })?;
                let echo = FiltersSpec {
                    m: Some(m),
                    n: Some(n),
                    optimize: None,
                };
                (FilterPlan::Fixed(set), echo)
            }
        };
        spec.filters = Some(filters);

        let sweep = spec.sweep.take().unwrap_or_default();
        let n1 = sweep.n1.map(GridAxis::from).unwrap_or_default();
        let n2 = sweep.n2.map(GridAxis::from).unwrap_or_default();
        spec.sweep = Some(SweepSpec {
            n1: Some(n1.into()),
            n2: Some(n2.into()),
        });

        Ok(Self {
            spec,
            scenario,
            plan,
            sweep: (n1, n2),
            base_dir: base_dir.to_path_buf(),
        })
    }

    /// Overrides the optimizer budget and/or seed; switches a fixed-filter
    /// scenario to optimization.
    pub fn force_optimize(&mut self, budget: Option<usize>, seed: Option<u64>) {
        let (b0, s0) = match self.plan {
            FilterPlan::Optimize { budget, seed } => (budget, seed),
            FilterPlan::Fixed(_) => (
                default_budget(self.scenario.dim_a().max(self.scenario.dim_b())),
                0,
            ),
        };
        let (budget, seed) = (budget.unwrap_or(b0), seed.unwrap_or(s0));
        self.plan = FilterPlan::Optimize { budget, seed };
        self.spec.filters = Some(FiltersSpec {
            optimize: Some(OptimizeSpec {
                budget: Some(budget),
                seed: Some(seed),
            }),
            ..Default::default()
        });
    }

    /// Sets the number of points on both sweep axes.
    pub fn set_grid(&mut self, points: usize) {
        self.sweep.0.points = points;
        self.sweep.1.points = points;
        self.spec.sweep = Some(SweepSpec {
            n1: Some(self.sweep.0.into()),
            n2: Some(self.sweep.1.into()),
        });
    }

    /// Output path from the spec, resolved against the spec directory.
    pub fn output_path(&self) -> Option<PathBuf> {
        self.spec
            .output
            .as_ref()
            .and_then(|o| o.path.as_deref())
            .map(|p| resolve_path(&self.base_dir, p))
    }

    pub fn output_format(&self) -> Option<Format> {
        self.spec.output.as_ref().and_then(|o| o.format)
    }
}
