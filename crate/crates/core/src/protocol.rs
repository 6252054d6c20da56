//! Two-step protection pipeline: weak measurement `M`, decoherence through a
//! product of local channels, then measurement reversal `N`.
//!
//! ```text
//! ρ0 ──M──▶ ρ1 ──E_A⊗E_B──▶ ρ2 ──N──▶ ρ3
//! ```
//!
//! The unprotected baseline is the channel applied directly to `ρ0`.

use alloc::string::String;
use alloc::vec::Vec;

use crate::channels::{apply_product, gad_qubit, gad_qutrit_v, KrausChannel};
use crate::lqu::{LquCalculator, LquResult};
use crate::measure::{apply_filter_pair, FilterOutcome, LocalFilter};
use crate::optimize::{maximize, GaSettings, OptimizationOutcome};
use crate::states::{fidelity, DensityMatrix};
use crate::{states, Error, Result};

/// Upper bound of every filter entry in the optimizer's search box.
pub const FILTER_BOX_MAX: f64 = 3.0;
pub const DEFAULT_BUDGET: usize = 20_000;

/// Evaluation budget used when none is given: four times larger for
/// qutrits, which have 10 filter parameters instead of 4.
pub fn default_budget(dim: usize) -> usize {
    if dim >= 3 {
        4 * DEFAULT_BUDGET
    } else {
        DEFAULT_BUDGET
    }
}

/// Free parameters of the weak measurement on a `dim`-level system.
pub fn weak_param_count(dim: usize) -> usize {
    dim - 1
}

/// Free parameters of the reversal: `diag(n, 1)` for a qubit, a full
/// diagonal otherwise.
pub fn reversal_param_count(dim: usize) -> usize {
    if dim == 2 {
        1
    } else {
        dim
    }
}

fn weak_filter(dim: usize, m: &[f64]) -> Result<LocalFilter> {
    let mut diag = alloc::vec![1.0];
    diag.extend_from_slice(m);
    check_len(dim, diag.len())?;
    LocalFilter::new(diag)
}

fn reversal_filter(dim: usize, n: &[f64]) -> Result<LocalFilter> {
    let diag = if dim == 2 {
        alloc::vec![n[0], 1.0]
    } else {
        n.to_vec()
    };
    check_len(dim, diag.len())?;
    LocalFilter::new(diag)
}

fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

fn check_supported(dim: usize) -> Result<()> {
    if dim == 2 || dim == 3 {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension(dim))
    }
}

/// The four local filters of the pipeline.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterSet {
    pub weak_a: LocalFilter,
    pub weak_b: LocalFilter,
    pub reversal_a: LocalFilter,
    pub reversal_b: LocalFilter,
}

impl FilterSet {
    pub fn identity(dim_a: usize, dim_b: usize) -> Self {
        Self {
            weak_a: LocalFilter::identity(dim_a),
            weak_b: LocalFilter::identity(dim_b),
            reversal_a: LocalFilter::identity(dim_a),
            reversal_b: LocalFilter::identity(dim_b),
        }
    }

    /// Builds filters from the weak-measurement strengths `m = [m_A…, m_B…]`
    /// and reversal strengths `n = [n_A…, n_B…]`.
    ///
    /// Qubit: `m = [m_A, m_B]`, `n = [n_A, n_B]`.
    /// Qutrit: `m = [m_A¹, m_A², m_B¹, m_B²]`, `n = [n_A¹, n_A², n_A³, n_B¹, n_B², n_B³]`.
    pub fn from_strengths(dim_a: usize, dim_b: usize, m: &[f64], n: &[f64]) -> Result<Self> {
        check_supported(dim_a)?;
        check_supported(dim_b)?;
        let (wa, wb) = (weak_param_count(dim_a), weak_param_count(dim_b));
        let (ra, rb) = (reversal_param_count(dim_a), reversal_param_count(dim_b));
        check_len(wa + wb, m.len())?;
        check_len(ra + rb, n.len())?;
        Ok(Self {
            weak_a: weak_filter(dim_a, &m[..wa])?,
            weak_b: weak_filter(dim_b, &m[wa..])?,
            reversal_a: reversal_filter(dim_a, &n[..ra])?,
            reversal_b: reversal_filter(dim_b, &n[ra..])?,
        })
    }

    /// Flat parameter vector `m ++ n`.
    pub fn from_params(dim_a: usize, dim_b: usize, params: &[f64]) -> Result<Self> {
        let split = weak_param_count(dim_a) + weak_param_count(dim_b);
        if params.len() < split {
            return Err(Error::DimensionMismatch {
                expected: param_count(dim_a, dim_b),
                found: params.len(),
            });
        }
        Self::from_strengths(dim_a, dim_b, &params[..split], &params[split..])
    }

    pub fn weak_strengths(&self) -> Vec<f64> {
        self.weak_a.diag()[1..]
            .iter()
            .chain(&self.weak_b.diag()[1..])
            .copied()
            .collect()
    }

    pub fn reversal_strengths(&self) -> Vec<f64> {
        let side = |f: &LocalFilter| -> Vec<f64> {
            if f.dim() == 2 {
                alloc::vec![f.diag()[0]]
            } else {
                f.diag().to_vec()
            }
        };
        let mut n = side(&self.reversal_a);
        n.extend(side(&self.reversal_b));
        n
    }

    pub fn params(&self) -> Vec<f64> {
        let mut p = self.weak_strengths();
        p.extend(self.reversal_strengths());
        p
    }
}

pub fn param_count(dim_a: usize, dim_b: usize) -> usize {
    weak_param_count(dim_a)
        + weak_param_count(dim_b)
        + reversal_param_count(dim_a)
        + reversal_param_count(dim_b)
}

/// Initial state and environment, without filters.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub initial_state: DensityMatrix,
    pub channel_a: KrausChannel,
    pub channel_b: KrausChannel,
}

impl Scenario {
    pub fn new(
        initial_state: DensityMatrix,
        channel_a: KrausChannel,
        channel_b: KrausChannel,
    ) -> Result<Self> {
        check_len(initial_state.dim_a(), channel_a.dim())?;
        check_len(initial_state.dim_b(), channel_b.dim())?;
        Ok(Self {
            initial_state,
            channel_a,
            channel_b,
        })
    }

    pub fn dim_a(&self) -> usize {
        self.initial_state.dim_a()
    }

    pub fn dim_b(&self) -> usize {
        self.initial_state.dim_b()
    }

    pub fn with_filters(&self, filters: FilterSet) -> Result<ProtocolConfig> {
        ProtocolConfig::new(self.clone(), filters)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolConfig {
    pub scenario: Scenario,
    pub filters: FilterSet,
}

impl ProtocolConfig {
    pub fn new(scenario: Scenario, filters: FilterSet) -> Result<Self> {
        check_len(scenario.dim_a(), filters.weak_a.dim())?;
        check_len(scenario.dim_a(), filters.reversal_a.dim())?;
        check_len(scenario.dim_b(), filters.weak_b.dim())?;
        check_len(scenario.dim_b(), filters.reversal_b.dim())?;
        Ok(Self { scenario, filters })
    }
}

/// The three worked examples with their quoted filter strengths.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReferenceCase {
    /// Bell state, both qubits through GAD(r = 0.5, p = 0.5).
    BellQubit,
    /// `½|ψ⟩⟨ψ| + I/8`, both qubits through GAD(r = 0.5, p = 0.5).
    NonsymQubit,
    /// `½|ψ⟩⟨ψ| + I/18`, both qutrits through V-GAD(r = 0.5, p1 = 0.1, p2 = 0.4).
    NonsymQutrit,
}

impl ReferenceCase {
    pub const ALL: [ReferenceCase; 3] = [Self::BellQubit, Self::NonsymQubit, Self::NonsymQutrit];

    pub fn name(self) -> &'static str {
        match self {
            Self::BellQubit => "2D Bell",
            Self::NonsymQubit => "Non-symmetrical 2D",
            Self::NonsymQutrit => "3D",
        }
    }

    pub fn initial_state(self) -> DensityMatrix {
        match self {
            Self::BellQubit => states::bell_qubit(),
            Self::NonsymQubit => states::nonsym_qubit(),
            Self::NonsymQutrit => states::nonsym_qutrit(),
        }
    }

    pub fn channel(self) -> KrausChannel {
        match self {
            Self::BellQubit | Self::NonsymQubit => gad_qubit(0.5, 0.5),
            Self::NonsymQutrit => gad_qutrit_v(0.5, 0.1, 0.4),
        }
        .expect("reference channel parameters are valid")
    }

    pub fn scenario(self) -> Scenario {
        let ch = self.channel();
        Scenario::new(self.initial_state(), ch.clone(), ch).expect("consistent dims")
    }

    /// Quoted `(m, n)` strengths in the [`FilterSet::from_strengths`] layout.
    pub fn quoted_strengths(self) -> (Vec<f64>, Vec<f64>) {
        match self {
            Self::BellQubit => (alloc::vec![1.285, 0.760], alloc::vec![1.606, 0.830]),
            Self::NonsymQubit => (alloc::vec![1.65, 1.20], alloc::vec![0.85, 0.90]),
            Self::NonsymQutrit => (
                alloc::vec![1.2745, 1.29, 1.1175, 0.939],
                alloc::vec![0.751, 0.564, 0.480, 0.954, 0.884, 0.759],
            ),
        }
    }

    pub fn quoted_filters(self) -> FilterSet {
        let (m, n) = self.quoted_strengths();
        let d = self.initial_state().dim_a();
        FilterSet::from_strengths(d, d, &m, &n).expect("quoted strengths are valid")
    }

    pub fn config(self) -> ProtocolConfig {
        ProtocolConfig::new(self.scenario(), self.quoted_filters()).expect("consistent dims")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolResult {
    pub rho_0: DensityMatrix,
    pub rho_1: DensityMatrix,
    pub rho_2: DensityMatrix,
    pub rho_3: DensityMatrix,
    pub lqu_0: LquResult,
    pub lqu_1: LquResult,
    pub lqu_2: LquResult,
    pub lqu_3: LquResult,
    /// Channel applied directly to `ρ0`.
    pub rho_unprotected: DensityMatrix,
    pub lqu_unprotected: LquResult,
    /// `F(ρ0, ρ3)`.
    pub fidelity_final: f64,
    /// `F(ρ0, E(ρ0))`.
    pub fidelity_unprotected: f64,
    pub weak_success: f64,
    pub weak_success_physical: f64,
    pub reversal_success: f64,
    pub reversal_success_physical: f64,
}

impl ProtocolResult {
    pub fn states(&self) -> [&DensityMatrix; 5] {
        [&self.rho_0, &self.rho_1, &self.rho_2, &self.rho_3, &self.rho_unprotected]
    }
}

fn filtered(fa: &LocalFilter, fb: &LocalFilter, rho: &DensityMatrix) -> Result<FilterOutcome> {
    apply_filter_pair(fa, fb, rho)
}

pub fn run_protocol(cfg: &ProtocolConfig) -> Result<ProtocolResult> {
    let sc = &cfg.scenario;
    let f = &cfg.filters;
    let calc = LquCalculator::new(sc.dim_a(), sc.dim_b())?;
    let rho_0 = sc.initial_state.clone();
    let weak = filtered(&f.weak_a, &f.weak_b, &rho_0)?;
    let rho_2 = apply_product(&sc.channel_a, &sc.channel_b, &weak.state)?;
    let rev = filtered(&f.reversal_a, &f.reversal_b, &rho_2)?;
    let rho_unprotected = apply_product(&sc.channel_a, &sc.channel_b, &rho_0)?;
    Ok(ProtocolResult {
        lqu_0: calc.compute(&rho_0)?,
        lqu_1: calc.compute(&weak.state)?,
        lqu_2: calc.compute(&rho_2)?,
        lqu_3: calc.compute(&rev.state)?,
        lqu_unprotected: calc.compute(&rho_unprotected)?,
        fidelity_final: fidelity(&rho_0, &rev.state)?,
        fidelity_unprotected: fidelity(&rho_0, &rho_unprotected)?,
        weak_success: weak.success_prob,
        weak_success_physical: weak.physical_success_prob,
        reversal_success: rev.success_prob,
        reversal_success_physical: rev.physical_success_prob,
        rho_1: weak.state,
        rho_2,
        rho_3: rev.state,
        rho_0,
        rho_unprotected,
    })
}

/// Evaluates `LQU(ρ3)` for many filter choices on one scenario.
#[derive(Debug, Clone)]
pub struct Evaluator {
    scenario: Scenario,
    calc: LquCalculator,
}

impl Evaluator {
    pub fn new(scenario: Scenario) -> Result<Self> {
        check_supported(scenario.dim_a())?;
        check_supported(scenario.dim_b())?;
        let calc = LquCalculator::new(scenario.dim_a(), scenario.dim_b())?;
        Ok(Self { scenario, calc })
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn final_lqu(&self, filters: &FilterSet) -> Result<f64> {
        let sc = &self.scenario;
        let weak = filtered(&filters.weak_a, &filters.weak_b, &sc.initial_state)?;
        let rho_2 = apply_product(&sc.channel_a, &sc.channel_b, &weak.state)?;
        let rev = filtered(&filters.reversal_a, &filters.reversal_b, &rho_2)?;
        Ok(self.calc.compute(&rev.state)?.value)
    }

    pub fn final_lqu_params(&self, params: &[f64]) -> Result<f64> {
        let filters = FilterSet::from_params(self.scenario.dim_a(), self.scenario.dim_b(), params)?;
        self.final_lqu(&filters)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FilterOptimization {
    pub filters: FilterSet,
    pub best_lqu: f64,
    pub outcome: OptimizationOutcome,
}

pub fn optimize_filters(scenario: &Scenario, budget: usize, seed: u64) -> Result<FilterOptimization> {
    optimize_filters_with(scenario, budget, seed, &GaSettings::default())
}

/// Maximizes `LQU(ρ3)` over all filter strengths in `[0, FILTER_BOX_MAX]`.
/// Identity filters are always part of the first generation, so the result
/// is never worse than bare decoherence.
pub fn optimize_filters_with(
    scenario: &Scenario,
    budget: usize,
    seed: u64,
    settings: &GaSettings,
) -> Result<FilterOptimization> {
    if budget == 0 {
        return Err(Error::ParamOutOfRange {
            name: "budget",
            value: 0.0,
            range: ">= 1",
        });
    }
    let eval = Evaluator::new(scenario.clone())?;
    let (da, db) = (scenario.dim_a(), scenario.dim_b());
    let n = param_count(da, db);
    let bounds = alloc::vec![(0.0, FILTER_BOX_MAX); n];
    let identity = FilterSet::identity(da, db).params();
    let outcome = maximize(
        |x| eval.final_lqu_params(x).unwrap_or(f64::NEG_INFINITY),
        &bounds,
        &[identity],
        budget,
        seed,
        settings,
    );
    let filters = FilterSet::from_params(da, db, &outcome.best_params)?;
    Ok(FilterOptimization {
        filters,
        best_lqu: outcome.best_value,
        outcome,
    })
}

/// Evenly spaced grid axis, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridAxis {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl Default for GridAxis {
    fn default() -> Self {
        Self {
            lo: 0.0,
            hi: 2.0,
            points: 101,
        }
    }
}

impl GridAxis {
    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return alloc::vec![self.lo];
        }
        let step = (self.hi - self.lo) / (self.points - 1) as f64;
        (0..self.points).map(|i| self.lo + step * i as f64).collect()
    }

    pub fn spacing(&self) -> f64 {
        if self.points <= 1 {
            0.0
        } else {
            (self.hi - self.lo) / (self.points - 1) as f64
        }
    }

    fn check(&self) -> Result<()> {
        if self.points == 0 || !self.lo.is_finite() || !self.hi.is_finite() || self.hi < self.lo {
            return Err(Error::ParamOutOfRange {
                name: "grid axis",
                value: self.points as f64,
                range: "points >= 1, finite lo <= hi",
            });
        }
        Ok(())
    }
}

/// `LQU(ρ3)` on a grid of the first reversal entry of A (`n1`) and of B
/// (`n2`); `None` where the evaluation failed.
#[derive(Debug, Clone, PartialEq)]
pub struct Surface {
    pub n1: Vec<f64>,
    pub n2: Vec<f64>,
    /// Row-major: `values[i * n2.len() + j]` is at `(n1[i], n2[j])`.
    pub values: Vec<Option<f64>>,
}

impl Surface {
    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        self.values[i * self.n2.len() + j]
    }

    pub fn rows(&self) -> impl Iterator<Item = (f64, f64, Option<f64>)> + '_ {
        self.n1.iter().enumerate().flat_map(move |(i, &a)| {
            self.n2.iter().enumerate().map(move |(j, &b)| (a, b, self.get(i, j)))
        })
    }

    /// First grid point attaining the maximum, as `(n1, n2, lqu)`.
    pub fn argmax(&self) -> Option<(f64, f64, f64)> {
        self.rows()
            .filter_map(|(a, b, v)| v.map(|v| (a, b, v)))
            .fold(None, |best, cur| match best {
                Some(b) if b.2 >= cur.2 => Some(b),
                _ => Some(cur),
            })
    }
}

/// Sweeps the first diagonal entry of each reversal filter; the weak
/// measurement, the channels and the remaining reversal entries come from
/// `cfg`.
pub fn sweep_surface(cfg: &ProtocolConfig, n1: GridAxis, n2: GridAxis) -> Result<Surface> {
    n1.check()?;
    n2.check()?;
    let sc = &cfg.scenario;
    let calc = LquCalculator::new(sc.dim_a(), sc.dim_b())?;
    let weak = filtered(&cfg.filters.weak_a, &cfg.filters.weak_b, &sc.initial_state)?;
    let rho_2 = apply_product(&sc.channel_a, &sc.channel_b, &weak.state)?;
    let (xs, ys) = (n1.values(), n2.values());
    let mut values = Vec::with_capacity(xs.len() * ys.len());
    for &x in &xs {
        for &y in &ys {
            let v = with_first_entry(&cfg.filters.reversal_a, x)
                .and_then(|fa| Ok((fa, with_first_entry(&cfg.filters.reversal_b, y)?)))
                .and_then(|(fa, fb)| filtered(&fa, &fb, &rho_2))
                .and_then(|out| calc.compute(&out.state))
                .map(|r| r.value)
                .ok();
            values.push(v);
        }
    }
    Ok(Surface {
        n1: xs,
        n2: ys,
        values,
    })
}

fn with_first_entry(f: &LocalFilter, v: f64) -> Result<LocalFilter> {
    let mut d = f.diag().to_vec();
    d[0] = v;
    LocalFilter::new(d)
}

/// Short human-readable label of a scenario's channels.
pub fn channel_labels(sc: &Scenario) -> (String, String) {
    (String::from(sc.channel_a.label()), String::from(sc.channel_b.label()))
}
