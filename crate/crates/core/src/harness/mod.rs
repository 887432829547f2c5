//! Verification harness: suite configs, deterministic sweeps, reports.
//!
//! A suite takes a [`SuiteConfig`], runs a deterministic parameter sweep
//! over a generated corpus, and emits a [`SuiteReport`] whose verdicts are
//! derived only from the rows it contains. `--refine` reruns the suite with
//! half the spacing and twice the box and appends a stability block.

pub mod config;
pub mod corpus;
pub mod report;
pub mod suites;
pub mod sweep;
pub mod tol;

pub use config::SuiteConfig;
pub use report::{Row, SuiteReport, Verdict};
pub use suites::{run_suite, SuiteId};

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("unknown suite `{given}`; valid ids: {valid}")]
    UnknownSuite { given: String, valid: String },
    #[error("config: {0}")]
    Config(String),
    #[error(
        "corpus function {id} has effective radius {radius} and may dilate by {inflation}; \
         the box only accommodates {limit}"
    )]
    SeamViolation {
        id: String,
        radius: f64,
        inflation: f64,
        limit: f64,
    },
    #[error("far-field annulus holds {count} lattice points; need at least {needed} for a fit")]
    AnnulusTooSmall { count: usize, needed: usize },
    #[error("output directory {0} already holds a report; pass --force to overwrite")]
    OutputCollision(std::path::PathBuf),
    #[error("thread pool: {0}")]
    ThreadPool(String),
    #[error(transparent)]
    Grid(#[from] crate::grid::GridError),
    #[error(transparent)]
    Norms(#[from] crate::norms::NormsError),
    #[error(transparent)]
    Spectral(#[from] crate::spectral::SpectralError),
    #[error(transparent)]
    Exponents(#[from] crate::exponents::ExponentError),
    #[error(transparent)]
    TestFns(#[from] crate::testfns::TestFnError),
    #[error(transparent)]
    Special(#[from] crate::special::SpecialError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("serialization: {0}")]
    Serde(#[from] serde_json::Error),
}
