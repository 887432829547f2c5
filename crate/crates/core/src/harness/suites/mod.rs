//! Suite registry, shared grid context, and the refine machinery.
//!
//! A suite body produces a [`SuiteOutcome`]: rows, verdicts derived from
//! those rows, and the named summary entries. `run_suite` wraps the body
//! in a scoped thread pool, optionally reruns it on the refined grid
//! (half spacing, doubled box), and assembles the final [`SuiteReport`].

pub(crate) mod decay;
pub(crate) mod hardy;
pub(crate) mod heisenberg;
pub(crate) mod interpolation;
pub(crate) mod iu_bound;
pub(crate) mod kernel_constant;
pub(crate) mod local_bound;
pub(crate) mod olsen;
pub(crate) mod roundtrip;

use super::config::SuiteConfig;
use super::report::{Provenance, Row, Stability, SuiteReport, Summary, Verdict};
use super::{sweep, tol, HarnessError};
use crate::grid::GridSpec;
use crate::norms::BallFamily;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuiteId {
    KernelConstant,
    IuBound,
    Interpolation,
    UniformLocalBound,
    Olsen,
    Hardy,
    Decay,
    Roundtrip,
    HeisenbergSmall,
    HeisenbergGeneral,
}

impl SuiteId {
    pub const ALL: [SuiteId; 10] = [
        SuiteId::KernelConstant,
        SuiteId::IuBound,
        SuiteId::Interpolation,
        SuiteId::UniformLocalBound,
        SuiteId::Olsen,
        SuiteId::Hardy,
        SuiteId::Decay,
        SuiteId::Roundtrip,
        SuiteId::HeisenbergSmall,
        SuiteId::HeisenbergGeneral,
    ];

    pub fn id(self) -> &'static str {
        match self {
            SuiteId::KernelConstant => "kernel-constant",
            SuiteId::IuBound => "iu-bound",
            SuiteId::Interpolation => "interpolation",
            SuiteId::UniformLocalBound => "uniform-local-bound",
            SuiteId::Olsen => "olsen",
            SuiteId::Hardy => "hardy",
            SuiteId::Decay => "decay",
            SuiteId::Roundtrip => "roundtrip",
            SuiteId::HeisenbergSmall => "heisenberg-small",
            SuiteId::HeisenbergGeneral => "heisenberg-general",
        }
    }

    pub fn blurb(self) -> &'static str {
        match self {
            SuiteId::KernelConstant => "growth exponent of the imaginary-power kernel constant",
            SuiteId::IuBound => "imaginary powers bounded on Morrey norms",
            SuiteId::Interpolation => "derivative interpolation between Morrey norms",
            SuiteId::UniformLocalBound => "local norms uniform in the power and the local exponent",
            SuiteId::Olsen => "weighted Riesz-potential (Olsen) inequality",
            SuiteId::Hardy => "Hardy-type inequality in Morrey norms",
            SuiteId::Decay => "far-field decay of fractional-Laplacian images",
            SuiteId::Roundtrip => "round trip through the fractional Laplacian",
            SuiteId::HeisenbergSmall => "uncertainty inequality, small derivative order",
            SuiteId::HeisenbergGeneral => "uncertainty inequality, unrestricted derivative order",
        }
    }

    pub fn parse(text: &str) -> Result<Self, HarnessError> {
        Self::ALL
            .iter()
            .copied()
            .find(|s| s.id() == text)
            .ok_or_else(|| HarnessError::UnknownSuite {
                given: text.to_string(),
                valid: Self::ALL
                    .iter()
                    .map(|s| s.id())
                    .collect::<Vec<_>>()
                    .join(", "),
            })
    }

    /// Every suite except the kernel-constant sweep works on a lattice.
    fn uses_grid(self) -> bool {
        !matches!(self, SuiteId::KernelConstant)
    }
}

impl fmt::Display for SuiteId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// What one execution of a suite body yields; the mandatory report fields
/// are assembled around it by `run_suite`.
#[derive(Debug, Default)]
pub(crate) struct SuiteOutcome {
    pub rows: Vec<Row>,
    pub verdicts: Vec<Verdict>,
    pub tuples: Vec<serde_json::Value>,
    pub invariance_spreads: BTreeMap<String, f64>,
    pub slopes: BTreeMap<String, f64>,
    pub metrics: BTreeMap<String, f64>,
    pub ball_families: BTreeMap<String, String>,
    pub zero_mode_policy: String,
}

/// Lattice plus the shared stride-1 ball family both sides of every
/// inequality are scanned with.
pub(crate) struct Ctx {
    pub spec: GridSpec,
    pub family: BallFamily,
}

impl Ctx {
    pub fn new(cfg: &SuiteConfig) -> Result<Self, HarnessError> {
        let spec = GridSpec::new(cfg.n_dims, cfg.extent, cfg.points_per_axis)?;
        let family = BallFamily::geometric(&spec);
        Ok(Self { spec, family })
    }

    /// Stamp the same family descriptor for both sides of the inequality.
    pub fn families_both_sides(&self) -> BTreeMap<String, String> {
        let mut map = BTreeMap::new();
        map.insert("lhs".to_string(), self.family.describe());
        map.insert("rhs".to_string(), self.family.describe());
        map
    }
}

fn dispatch(id: SuiteId, cfg: &SuiteConfig) -> Result<SuiteOutcome, HarnessError> {
    match id {
        SuiteId::KernelConstant => kernel_constant::run(cfg),
        SuiteId::IuBound => iu_bound::run(cfg),
        SuiteId::Interpolation => interpolation::run(cfg),
        SuiteId::UniformLocalBound => local_bound::run(cfg),
        SuiteId::Olsen => olsen::run(cfg),
        SuiteId::Hardy => hardy::run(cfg),
        SuiteId::Decay => decay::run(cfg),
        SuiteId::Roundtrip => roundtrip::run(cfg),
        SuiteId::HeisenbergSmall => heisenberg::run_small(cfg),
        SuiteId::HeisenbergGeneral => heisenberg::run_general(cfg),
    }
}

/// First row attaining the maximum ratio, in sweep order; NaN rows never
/// win, so a poisoned sweep surfaces as `-inf` rather than a silent pass.
fn max_ratio_row(rows: &[Row]) -> (f64, String) {
    if rows.is_empty() {
        return (0.0, String::new());
    }
    let mut best = f64::NEG_INFINITY;
    let mut id = String::new();
    for row in rows {
        if row.ratio > best {
            best = row.ratio;
            id = row.function_id.clone();
        }
    }
    (best, id)
}

fn worst_spread(spreads: &BTreeMap<String, f64>) -> f64 {
    spreads.values().fold(0.0_f64, |acc, &v| acc.max(v))
}

/// Run a suite, optionally with the two-resolution stability block.
pub fn run_suite(
    id: SuiteId,
    cfg: &SuiteConfig,
    refine: bool,
) -> Result<SuiteReport, HarnessError> {
    if cfg.suite != id.id() {
        return Err(HarnessError::Config(format!(
            "config names suite `{}` but `{}` was requested",
            cfg.suite,
            id.id()
        )));
    }
    let base = sweep::with_pool(cfg.threads, || dispatch(id, cfg))?;
    let (base_max, argmax) = max_ratio_row(&base.rows);
    let base_worst = worst_spread(&base.invariance_spreads);
    let mut verdicts = base.verdicts;
    let mut stability = None;

    if refine {
        let refined_cfg = cfg.refined();
        let refined = sweep::with_pool(cfg.threads, || dispatch(id, &refined_cfg))?;
        let (refined_max, _) = max_ratio_row(&refined.rows);
        let drift = if base_max == 0.0 {
            refined_max.abs()
        } else {
            (refined_max / base_max - 1.0).abs()
        };
        let refined_worst = worst_spread(&refined.invariance_spreads);
        let tightened = refined_worst
            <= base_worst * (1.0 + tol::REFINE_TIGHTENING_SLACK) + tol::REFINE_TIGHTENING_FLOOR;
        verdicts.push(Verdict::bounded(
            "refine-drift",
            drift,
            cfg.tolerances.refine_drift,
            format!("sup ratio {base_max:.6e} -> {refined_max:.6e} under refinement"),
        ));
        if !base.invariance_spreads.is_empty() {
            verdicts.push(Verdict::bounded(
                "refined-spread",
                refined_worst,
                cfg.tolerances.dilation_spread_refined,
                "worst invariance spread on the refined grid",
            ));
            verdicts.push(Verdict::claim(
                "spreads-tightened",
                tightened,
                refined_worst,
                format!("base worst spread {base_worst:.3e}"),
            ));
        }
        stability = Some(Stability {
            base_max_ratio: base_max,
            refined_max_ratio: refined_max,
            drift,
            base_worst_spread: base_worst,
            refined_worst_spread: refined_worst,
            spreads_tightened: tightened,
        });
    }

    let grid = if id.uses_grid() {
        GridSpec::new(cfg.n_dims, cfg.extent, cfg.points_per_axis)?.to_string()
    } else {
        "analytic (no lattice)".to_string()
    };

    Ok(SuiteReport {
        suite: id.id().to_string(),
        config_hash: cfg.hash(),
        threads: cfg.threads,
        refined: refine,
        tuples: base.tuples,
        rows: base.rows,
        summary: Summary {
            max_ratio: base_max,
            argmax_function: argmax,
            invariance_spreads: base.invariance_spreads,
            slopes: base.slopes,
            metrics: base.metrics,
        },
        verdicts,
        provenance: Provenance {
            config_hash: cfg.hash(),
            grid,
            morrey_values_are_lower_bounds: true,
            zero_mode_policy: base.zero_mode_policy,
            ball_families: base.ball_families,
        },
        stability,
    })
}
