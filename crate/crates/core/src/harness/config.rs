//! Suite configuration: a flat, fully serializable description of one run.
//!
//! Two runs with equal configs and thread counts must produce byte-identical
//! reports, so everything that influences a suite lives here and the config
//! hash (SHA-256 of the compact JSON form) is stamped into every artifact.
//! Unknown keys are rejected to keep configs honest.

use super::tol;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Suite-level tolerance knobs. Exact-identity tolerances (1e-9 .. 1e-12
/// lattice identities) are pinned in [`super::tol`] and are deliberately not
/// configurable; these are the discretisation-limited ones.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// Per-function dilation-invariance spread on the base grid.
    pub dilation_spread: f64,
    /// Same spread after `--refine`.
    pub dilation_spread_refined: f64,
    /// Allowed sup-ratio drift between base and refined grids.
    pub refine_drift: f64,
    /// Scalar homogeneity audit tolerance.
    pub homogeneity_rel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            dilation_spread: tol::DILATION_SPREAD,
            dilation_spread_refined: tol::DILATION_SPREAD_REFINED,
            refine_drift: tol::REFINE_DRIFT,
            homogeneity_rel: tol::HOMOGENEITY_REL,
        }
    }
}

fn default_beta() -> f64 {
    1.0
}

/// Everything a suite run depends on. Fields a given suite does not use are
/// simply ignored by it; `default_for` fills suite-appropriate values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    pub suite: String,
    pub n_dims: usize,
    pub extent: f64,
    pub points_per_axis: usize,
    /// Number of corpus functions the suite draws from the deterministic
    /// generator.
    pub corpus_size: usize,
    /// Base seed for the mollified-noise members of the corpus.
    pub corpus_seed: u64,
    /// Imaginary-power sweep values.
    #[serde(default)]
    pub u_values: Vec<f64>,
    /// Fractional orders swept by interpolation / decay / roundtrip.
    #[serde(default)]
    pub alpha_values: Vec<f64>,
    #[serde(default)]
    pub theta_values: Vec<f64>,
    /// Dilation factors for the invariance sweeps.
    #[serde(default)]
    pub lambda_values: Vec<f64>,
    /// Derivative orders for the general Heisenberg sweep.
    #[serde(default)]
    pub delta_values: Vec<f64>,
    /// Main Morrey pair (meaning varies per suite; see `default_for`).
    pub p: f64,
    pub q: f64,
    /// Weight exponent for Hardy / Olsen, or the order in the local bound.
    pub alpha: f64,
    /// Moment-side Morrey pair for the Heisenberg suites.
    #[serde(default = "default_beta")]
    pub p2: f64,
    #[serde(default = "default_beta")]
    pub q2: f64,
    #[serde(default = "default_beta")]
    pub beta: f64,
    /// Small-regime derivative order (`heisenberg-small` only).
    #[serde(default = "default_beta")]
    pub gamma: f64,
    /// Interpolation endpoint pairs `(p0, q0, p1, q1)`.
    #[serde(default)]
    pub interpolation_tuples: Vec<(f64, f64, f64, f64)>,
    pub threads: usize,
    pub out_dir: String,
    #[serde(default)]
    pub tolerances: Tolerances,
}

impl SuiteConfig {
    /// The built-in configuration for a suite id; this is what
    /// `--config default` resolves to.
    pub fn default_for(suite: &str) -> Self {
        let mut cfg = Self {
            suite: suite.to_string(),
            n_dims: 1,
            extent: 32.0,
            points_per_axis: 512,
            corpus_size: 12,
            corpus_seed: 7,
            u_values: Vec::new(),
            alpha_values: Vec::new(),
            theta_values: Vec::new(),
            lambda_values: vec![0.25, 0.5, 1.0, 2.0, 4.0],
            delta_values: Vec::new(),
            p: 1.5,
            q: 3.0,
            alpha: 0.25,
            p2: 2.0,
            q2: 2.0,
            beta: 1.0,
            gamma: 0.25,
            interpolation_tuples: Vec::new(),
            threads: 2,
            out_dir: "out".to_string(),
            tolerances: Tolerances::default(),
        };
        match suite {
            "kernel-constant" => {
                cfg.u_values = (0..=45).map(|k| 10.0 + 2.0 * k as f64).collect();
            }
            "iu-bound" => {
                cfg.corpus_size = 20;
                cfg.u_values = vec![
                    -40.0, -30.0, -20.0, -15.0, -10.0, -6.0, -3.0, -1.0, 0.0, 1.0, 3.0, 6.0, 10.0,
                    15.0, 20.0, 30.0, 40.0,
                ];
            }
            "interpolation" => {
                cfg.corpus_size = 10;
                // Fractional images of low order decay slowly, so the box
                // must outrun the periodized tail and the spacing must
                // resolve the small-ball witnesses of the q = 5, 6 norms
                // across the 16x dilation window.
                cfg.extent = 128.0;
                cfg.points_per_axis = 16384;
                cfg.alpha_values = vec![0.5, 1.0, 2.0];
                cfg.theta_values = vec![0.0, 0.25, 0.5, 0.75, 1.0];
                cfg.interpolation_tuples = vec![(2.0, 4.0, 3.0, 6.0), (1.5, 3.0, 2.0, 5.0)];
            }
            "uniform-local-bound" => {
                cfg.alpha = 0.75;
            }
            "olsen" => {
                cfg.p = 2.0;
                cfg.q = 2.0;
                cfg.lambda_values = vec![0.5, 1.0, 2.0];
                cfg.corpus_size = 8;
                // The weight's singular cell converges like h^(1 - alpha p),
                // so the dilation window needs this much resolution.
                cfg.points_per_axis = 4096;
                cfg.tolerances.refine_drift = 0.05;
            }
            "hardy" => {
                cfg.corpus_size = 30;
                // The ratio inherits two slow lattice modes: the weighted
                // numerator's singular cell (improves with h) and the image
                // tail lost to periodization (improves with the box). The
                // 16x dilation window samples both, hence the large default
                // geometry and a pair sitting well inside alpha < n/q.
                cfg.extent = 256.0;
                cfg.points_per_axis = 16384;
                cfg.p = 1.8;
                cfg.q = 2.0;
                cfg.alpha = 0.15;
            }
            "decay" => {
                // The far-field fit needs box-to-support headroom: images of
                // the periodized tail sit a fixed multiple of L away, and the
                // fit window reaches L/4, so the measured slope carries a
                // scale-free tail lift that only a large box keeps inside
                // the slope tolerance.
                cfg.extent = 256.0;
                cfg.points_per_axis = 4096;
                cfg.alpha_values = vec![0.5, 1.0];
            }
            "roundtrip" => {
                cfg.alpha_values = vec![0.25, 0.5, 0.9];
            }
            "heisenberg-small" => {
                cfg.p = 2.0;
                cfg.q = 3.0;
                cfg.corpus_size = 10;
                // The gamma = 0.25 image tail decays like |x|^(-n-1/4); the
                // dilation window needs the box and spacing below.
                cfg.extent = 128.0;
                cfg.points_per_axis = 8192;
            }
            "heisenberg-general" => {
                cfg.p = 2.0;
                cfg.q = 3.0;
                cfg.corpus_size = 10;
                // Worst spread sits in the small-regime deltas; same lattice
                // modes (and therefore the same geometry) as above.
                cfg.extent = 128.0;
                cfg.points_per_axis = 8192;
                cfg.delta_values = vec![0.25, 0.5, 1.0, 2.0, 4.0];
            }
            _ => {}
        }
        cfg
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// SHA-256 of the compact JSON form, as lowercase hex.
    pub fn hash(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("config serializes");
        let digest = Sha256::digest(&bytes);
        let mut out = String::with_capacity(64);
        for b in digest {
            use std::fmt::Write;
            write!(out, "{b:02x}").expect("writing to a String cannot fail");
        }
        out
    }

    /// The refined variant: half the spacing and double the box.
    pub fn refined(&self) -> Self {
        let mut cfg = self.clone();
        cfg.extent = self.extent * 2.0;
        cfg.points_per_axis = self.points_per_axis * 4;
        cfg
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_configs_roundtrip_through_json() {
        for suite in [
            "kernel-constant",
            "iu-bound",
            "interpolation",
            "uniform-local-bound",
            "olsen",
            "hardy",
            "decay",
            "roundtrip",
            "heisenberg-small",
            "heisenberg-general",
        ] {
            let cfg = SuiteConfig::default_for(suite);
            let json = serde_json::to_string_pretty(&cfg).unwrap();
            let back = SuiteConfig::from_json(&json).unwrap();
            assert_eq!(cfg, back, "{suite}");
            assert_eq!(cfg.hash(), back.hash());
            assert_eq!(cfg.hash().len(), 64);
        }
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let mut value: serde_json::Value =
            serde_json::to_value(SuiteConfig::default_for("hardy")).unwrap();
        value
            .as_object_mut()
            .unwrap()
            .insert("surprise".into(), serde_json::json!(1));
        let text = serde_json::to_string(&value).unwrap();
        let err = SuiteConfig::from_json(&text).unwrap_err();
        assert!(err.to_string().contains("surprise"));
    }

    #[test]
    fn hash_changes_with_content() {
        let a = SuiteConfig::default_for("hardy");
        let mut b = a.clone();
        b.alpha = 0.3;
        assert_ne!(a.hash(), b.hash());
    }

    #[test]
    fn refinement_halves_spacing_and_doubles_extent() {
        let a = SuiteConfig::default_for("hardy");
        let r = a.refined();
        assert_eq!(r.extent, 512.0);
        assert_eq!(r.points_per_axis, 65536);
        // spacing = extent / points halves.
        assert!((r.extent / r.points_per_axis as f64) * 2.0 == a.extent / a.points_per_axis as f64);
    }
}
