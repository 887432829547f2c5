//! Closed grammar of analytic test functions.
//!
//! Corpus functions are pure data (serde-friendly descriptors) built from
//! four leaves and five combinators:
//!
//! * `bump`: `A exp(-1 / (1 - |x - c|^2 / r^2))` inside `|x - c| < r`, zero
//!   outside; smooth with compact support.
//! * `gaussian`: `exp(-|x - c|^2 / (2 sigma^2))` with the exact transform
//!   `(2 pi sigma^2)^(n/2) exp(-sigma^2 |xi|^2 / 2) exp(-i c . xi)` under the
//!   crate's forward convention.
//! * `power_weight`: `|x|^(-alpha)`; the origin lattice cell is sampled at
//!   the offset point `(h/2, 0, 0)` instead of the singularity.
//! * `mollified_noise`: seeded lattice white noise restricted to a ball,
//!   discretely convolved with a bump kernel of the given width and cut off
//!   by a bump at `support_radius + smoothing_width`; deterministic given the
//!   seed.
//! * `product`, `sum`, `dilate`, `translate`, `scalar` close the grammar.
//!
//! Dilation and translation act at the analytic level, so
//! `dilate(bump(0, 1), 2)` is exactly `bump(0, 1/2)` and sampled dilation
//! sweeps carry no extra interpolation error. Descriptors do not know the
//! grid; sampling realises them on a [`GridSpec`] and is exactly linear.

use crate::grid::{GridFunction, GridSpec, Point};
use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum TestFnError {
    #[error("bump radius must be positive and finite, got {0}")]
    BumpRadius(f64),
    #[error("gaussian sigma must be positive and finite, got {0}")]
    GaussianSigma(f64),
    #[error("power weight exponent must be positive and finite, got {0}")]
    PowerExponent(f64),
    #[error(
        "mollified noise needs positive support radius and width, got r = {radius}, w = {width}"
    )]
    NoiseShape { radius: f64, width: f64 },
    #[error("dilation factor must be positive and finite, got {0}")]
    DilationFactor(f64),
    #[error("scalar factor must be finite, got {0}")]
    ScalarFactor(f64),
    #[error("coordinate vector {0:?} has more than 3 entries")]
    CoordinateArity(Vec<f64>),
    #[error("coordinate vector {0:?} contains a non-finite entry")]
    CoordinateValue(Vec<f64>),
    #[error(transparent)]
    Grid(#[from] crate::grid::GridError),
}

/// Descriptor of an analytic test function. See the module docs for the
/// semantics of each node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AnalyticFunction {
    Bump {
        center: Vec<f64>,
        radius: f64,
        amplitude: f64,
    },
    Gaussian {
        center: Vec<f64>,
        sigma: f64,
    },
    PowerWeight {
        alpha: f64,
    },
    MollifiedNoise {
        seed: u64,
        support_radius: f64,
        smoothing_width: f64,
    },
    Product {
        factors: Vec<AnalyticFunction>,
    },
    Sum {
        terms: Vec<AnalyticFunction>,
    },
    Dilate {
        lambda: f64,
        inner: Box<AnalyticFunction>,
    },
    Translate {
        shift: Vec<f64>,
        inner: Box<AnalyticFunction>,
    },
    Scalar {
        factor: f64,
        inner: Box<AnalyticFunction>,
    },
}

/// One Gaussian term of a closed-form transform:
/// `amplitude * exp(-|x - center|^2 / (2 sigma^2))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianComponent {
    pub amplitude: f64,
    pub center: Point,
    pub sigma: f64,
}

impl GaussianComponent {
    /// Transform value at frequency `xi` in dimension `n`.
    pub fn transform(&self, xi: Point, n_dims: usize) -> Complex64 {
        let xi_sq: f64 = xi[..n_dims].iter().map(|c| c * c).sum();
        let phase: f64 = self.center[..n_dims]
            .iter()
            .zip(&xi[..n_dims])
            .map(|(c, x)| c * x)
            .sum();
        let magnitude = self.amplitude
            * (2.0 * std::f64::consts::PI * self.sigma * self.sigma).powf(n_dims as f64 / 2.0)
            * (-0.5 * self.sigma * self.sigma * xi_sq).exp();
        magnitude * Complex64::from_polar(1.0, -phase)
    }
}

fn pad3(v: &[f64]) -> Result<Point, TestFnError> {
    if v.len() > 3 {
        return Err(TestFnError::CoordinateArity(v.to_vec()));
    }
    if v.iter().any(|c| !c.is_finite()) {
        return Err(TestFnError::CoordinateValue(v.to_vec()));
    }
    let mut out = [0.0; 3];
    out[..v.len()].copy_from_slice(v);
    Ok(out)
}

fn dist_sq(a: Point, b: Point, n: usize) -> f64 {
    a[..n]
        .iter()
        .zip(&b[..n])
        .map(|(x, y)| (x - y) * (x - y))
        .sum()
}

/// Normalised mollifier `exp(1 - 1/(1 - s^2))` for `s^2 < 1`, zero outside.
fn mollifier(s_sq: f64) -> f64 {
    if s_sq < 1.0 {
        (1.0 - 1.0 / (1.0 - s_sq)).exp()
    } else {
        0.0
    }
}

impl AnalyticFunction {
    /// Convenience constructors mirroring the descriptor grammar.
    pub fn bump(center: &[f64], radius: f64, amplitude: f64) -> Self {
        Self::Bump {
            center: center.to_vec(),
            radius,
            amplitude,
        }
    }

    pub fn gaussian(center: &[f64], sigma: f64) -> Self {
        Self::Gaussian {
            center: center.to_vec(),
            sigma,
        }
    }

    pub fn power_weight(alpha: f64) -> Self {
        Self::PowerWeight { alpha }
    }

    pub fn mollified_noise(seed: u64, support_radius: f64, smoothing_width: f64) -> Self {
        Self::MollifiedNoise {
            seed,
            support_radius,
            smoothing_width,
        }
    }

    pub fn product(factors: Vec<AnalyticFunction>) -> Self {
        Self::Product { factors }
    }

    pub fn sum(terms: Vec<AnalyticFunction>) -> Self {
        Self::Sum { terms }
    }

    pub fn dilate(self, lambda: f64) -> Self {
        Self::Dilate {
            lambda,
            inner: Box::new(self),
        }
    }

    pub fn translate(self, shift: &[f64]) -> Self {
        Self::Translate {
            shift: shift.to_vec(),
            inner: Box::new(self),
        }
    }

    pub fn scaled(self, factor: f64) -> Self {
        Self::Scalar {
            factor,
            inner: Box::new(self),
        }
    }

    /// Realises the descriptor for evaluation in dimension `n_dims`,
    /// validating parameters and materialising noise tables.
    pub fn evaluator(&self, n_dims: usize) -> Result<Evaluator, TestFnError> {
        Ok(Evaluator {
            n_dims,
            root: EvalNode::build(self, n_dims)?,
        })
    }

    /// Closed-form transform as a sum of Gaussian components, when the tree
    /// consists of Gaussians under sum/dilate/translate/scalar.
    pub fn gaussian_components(&self) -> Option<Vec<GaussianComponent>> {
        match self {
            Self::Gaussian { center, sigma } => Some(vec![GaussianComponent {
                amplitude: 1.0,
                center: pad3(center).ok()?,
                sigma: *sigma,
            }]),
            Self::Sum { terms } => {
                let mut all = Vec::new();
                for t in terms {
                    all.extend(t.gaussian_components()?);
                }
                Some(all)
            }
            Self::Dilate { lambda, inner } => {
                let comps = inner.gaussian_components()?;
                Some(
                    comps
                        .into_iter()
                        .map(|c| GaussianComponent {
                            amplitude: c.amplitude,
                            center: c.center.map(|x| x / lambda),
                            sigma: c.sigma / lambda,
                        })
                        .collect(),
                )
            }
            Self::Translate { shift, inner } => {
                let comps = inner.gaussian_components()?;
                let s = pad3(shift).ok()?;
                Some(
                    comps
                        .into_iter()
                        .map(|c| {
                            let mut center = c.center;
                            for (slot, d) in center.iter_mut().zip(&s) {
                                *slot += d;
                            }
                            GaussianComponent { center, ..c }
                        })
                        .collect(),
                )
            }
            Self::Scalar { factor, inner } => {
                let comps = inner.gaussian_components()?;
                Some(
                    comps
                        .into_iter()
                        .map(|c| GaussianComponent {
                            amplitude: factor * c.amplitude,
                            ..c
                        })
                        .collect(),
                )
            }
            _ => None,
        }
    }

    /// Radius of a ball around the origin containing the support, `None` for
    /// functions without compact support (Gaussian tails, power weights).
    pub fn support_radius(&self) -> Option<f64> {
        match self {
            Self::Bump { center, radius, .. } => Some(norm_slice(center) + radius),
            Self::Gaussian { .. } | Self::PowerWeight { .. } => None,
            Self::MollifiedNoise {
                support_radius,
                smoothing_width,
                ..
            } => Some(support_radius + smoothing_width),
            Self::Product { factors } => factors
                .iter()
                .filter_map(|f| f.support_radius())
                .fold(None, |acc: Option<f64>, r| {
                    Some(acc.map_or(r, |a| a.min(r)))
                }),
            Self::Sum { terms } => {
                let mut worst: f64 = 0.0;
                for t in terms {
                    worst = worst.max(t.support_radius()?);
                }
                Some(worst)
            }
            Self::Dilate { lambda, inner } => Some(inner.support_radius()? / lambda),
            Self::Translate { shift, inner } => Some(inner.support_radius()? + norm_slice(shift)),
            Self::Scalar { inner, .. } => inner.support_radius(),
        }
    }

    /// Radius beyond which the function is negligible at working precision:
    /// the support radius where one exists, `|c| + 9 sigma` for Gaussians.
    /// `None` means the function genuinely spans the box (power weights).
    pub fn effective_radius(&self) -> Option<f64> {
        match self {
            Self::Gaussian { center, sigma } => Some(norm_slice(center) + 9.0 * sigma),
            Self::PowerWeight { .. } => None,
            Self::Product { factors } => factors
                .iter()
                .filter_map(|f| f.effective_radius())
                .fold(None, |acc: Option<f64>, r| {
                    Some(acc.map_or(r, |a| a.min(r)))
                }),
            Self::Sum { terms } => {
                let mut worst: f64 = 0.0;
                for t in terms {
                    worst = worst.max(t.effective_radius()?);
                }
                Some(worst)
            }
            Self::Dilate { lambda, inner } => Some(inner.effective_radius()? / lambda),
            Self::Translate { shift, inner } => Some(inner.effective_radius()? + norm_slice(shift)),
            Self::Scalar { inner, .. } => inner.effective_radius(),
            _ => self.support_radius(),
        }
    }
}

fn norm_slice(v: &[f64]) -> f64 {
    v.iter().map(|c| c * c).sum::<f64>().sqrt()
}

/// A descriptor realised for pointwise evaluation in a fixed dimension.
#[derive(Debug, Clone)]
pub struct Evaluator {
    n_dims: usize,
    root: EvalNode,
}

#[derive(Debug, Clone)]
enum EvalNode {
    Bump {
        center: Point,
        radius: f64,
        amplitude: f64,
    },
    Gaussian {
        center: Point,
        sigma: f64,
    },
    PowerWeight {
        alpha: f64,
    },
    Noise {
        nodes: Vec<(Point, f64)>,
        width: f64,
        cutoff_radius: f64,
    },
    Product(Vec<EvalNode>),
    Sum(Vec<EvalNode>),
    Dilate {
        lambda: f64,
        inner: Box<EvalNode>,
    },
    Translate {
        shift: Point,
        inner: Box<EvalNode>,
    },
    Scalar {
        factor: f64,
        inner: Box<EvalNode>,
    },
}

impl EvalNode {
    fn build(f: &AnalyticFunction, n: usize) -> Result<Self, TestFnError> {
        Ok(match f {
            AnalyticFunction::Bump {
                center,
                radius,
                amplitude,
            } => {
                if !(radius.is_finite() && *radius > 0.0) {
                    return Err(TestFnError::BumpRadius(*radius));
                }
                if !amplitude.is_finite() {
                    return Err(TestFnError::ScalarFactor(*amplitude));
                }
                EvalNode::Bump {
                    center: pad3(center)?,
                    radius: *radius,
                    amplitude: *amplitude,
                }
            }
            AnalyticFunction::Gaussian { center, sigma } => {
                if !(sigma.is_finite() && *sigma > 0.0) {
                    return Err(TestFnError::GaussianSigma(*sigma));
                }
                EvalNode::Gaussian {
                    center: pad3(center)?,
                    sigma: *sigma,
                }
            }
            AnalyticFunction::PowerWeight { alpha } => {
                if !(alpha.is_finite() && *alpha > 0.0) {
                    return Err(TestFnError::PowerExponent(*alpha));
                }
                EvalNode::PowerWeight { alpha: *alpha }
            }
            AnalyticFunction::MollifiedNoise {
                seed,
                support_radius,
                smoothing_width,
            } => {
                if !(support_radius.is_finite()
                    && *support_radius > 0.0
                    && smoothing_width.is_finite()
                    && *smoothing_width > 0.0)
                {
                    return Err(TestFnError::NoiseShape {
                        radius: *support_radius,
                        width: *smoothing_width,
                    });
                }
                EvalNode::Noise {
                    nodes: realise_noise(*seed, *support_radius, *smoothing_width, n),
                    width: *smoothing_width,
                    cutoff_radius: support_radius + smoothing_width,
                }
            }
            AnalyticFunction::Product { factors } => EvalNode::Product(
                factors
                    .iter()
                    .map(|f| Self::build(f, n))
                    .collect::<Result<_, _>>()?,
            ),
            AnalyticFunction::Sum { terms } => EvalNode::Sum(
                terms
                    .iter()
                    .map(|f| Self::build(f, n))
                    .collect::<Result<_, _>>()?,
            ),
            AnalyticFunction::Dilate { lambda, inner } => {
                if !(lambda.is_finite() && *lambda > 0.0) {
                    return Err(TestFnError::DilationFactor(*lambda));
                }
                EvalNode::Dilate {
                    lambda: *lambda,
                    inner: Box::new(Self::build(inner, n)?),
                }
            }
            AnalyticFunction::Translate { shift, inner } => EvalNode::Translate {
                shift: pad3(shift)?,
                inner: Box::new(Self::build(inner, n)?),
            },
            AnalyticFunction::Scalar { factor, inner } => {
                if !factor.is_finite() {
                    return Err(TestFnError::ScalarFactor(*factor));
                }
                EvalNode::Scalar {
                    factor: *factor,
                    inner: Box::new(Self::build(inner, n)?),
                }
            }
        })
    }

    fn value(&self, x: Point, n: usize) -> f64 {
        match self {
            EvalNode::Bump {
                center,
                radius,
                amplitude,
            } => {
                let s_sq = dist_sq(x, *center, n) / (radius * radius);
                if s_sq < 1.0 {
                    amplitude * (-1.0 / (1.0 - s_sq)).exp()
                } else {
                    0.0
                }
            }
            EvalNode::Gaussian { center, sigma } => {
                (-dist_sq(x, *center, n) / (2.0 * sigma * sigma)).exp()
            }
            EvalNode::PowerWeight { alpha } => {
                let r_sq = dist_sq(x, [0.0; 3], n);
                r_sq.powf(-alpha / 2.0)
            }
            EvalNode::Noise {
                nodes,
                width,
                cutoff_radius,
            } => {
                let r_sq = dist_sq(x, [0.0; 3], n);
                let cutoff = mollifier(r_sq / (cutoff_radius * cutoff_radius));
                if cutoff == 0.0 {
                    return 0.0;
                }
                let w_sq = width * width;
                let mut acc = 0.0;
                for (node, coeff) in nodes {
                    let d_sq = dist_sq(x, *node, n);
                    if d_sq < w_sq {
                        acc += coeff * mollifier(d_sq / w_sq);
                    }
                }
                cutoff * acc
            }
            EvalNode::Product(factors) => factors.iter().map(|f| f.value(x, n)).product(),
            EvalNode::Sum(terms) => terms.iter().map(|f| f.value(x, n)).sum(),
            EvalNode::Dilate { lambda, inner } => inner.value(x.map(|c| lambda * c), n),
            EvalNode::Translate { shift, inner } => {
                let mut y = x;
                for (slot, s) in y.iter_mut().zip(shift) {
                    *slot -= s;
                }
                inner.value(y, n)
            }
            EvalNode::Scalar { factor, inner } => factor * inner.value(x, n),
        }
    }

    fn singular_at_origin(&self) -> bool {
        match self {
            EvalNode::PowerWeight { .. } => true,
            EvalNode::Product(fs) => fs.iter().any(|f| f.singular_at_origin()),
            EvalNode::Sum(fs) => fs.iter().any(|f| f.singular_at_origin()),
            EvalNode::Dilate { inner, .. }
            | EvalNode::Translate { inner, .. }
            | EvalNode::Scalar { inner, .. } => inner.singular_at_origin(),
            _ => false,
        }
    }
}

/// Deterministic noise table: standard-normal coefficients on an internal
/// lattice of spacing `width / 2` covering the support ball. Coefficients
/// are drawn in row-major site order before the ball filter, so the
/// realisation does not depend on floating-point inclusion tests.
fn realise_noise(seed: u64, support_radius: f64, width: f64, n: usize) -> Vec<(Point, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let step = width / 2.0;
    let per_axis = (2.0 * support_radius / step).floor() as usize + 1;
    let start = -0.5 * (per_axis - 1) as f64 * step;
    let mut nodes = Vec::new();
    let counts = [
        per_axis,
        if n >= 2 { per_axis } else { 1 },
        if n >= 3 { per_axis } else { 1 },
    ];
    for i0 in 0..counts[0] {
        for i1 in 0..counts[1] {
            for i2 in 0..counts[2] {
                let coeff = standard_normal(&mut rng);
                let p = [
                    start + i0 as f64 * step,
                    if n >= 2 {
                        start + i1 as f64 * step
                    } else {
                        0.0
                    },
                    if n >= 3 {
                        start + i2 as f64 * step
                    } else {
                        0.0
                    },
                ];
                if dist_sq(p, [0.0; 3], n) <= support_radius * support_radius {
                    nodes.push((p, coeff));
                }
            }
        }
    }
    nodes
}

/// Box-Muller from raw 64-bit draws; self-contained so realisations are
/// pinned by the seed alone, not by a distributions crate.
fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    let u1 = (rng.next_u64() as f64 + 1.0) / (u64::MAX as f64 + 2.0);
    let u2 = rng.next_u64() as f64 / (u64::MAX as f64 + 1.0);
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

impl Evaluator {
    pub fn n_dims(&self) -> usize {
        self.n_dims
    }

    /// Pointwise value; singular descriptors return non-finite values at the
    /// singularity itself (sampling applies the origin-cell policy instead).
    pub fn value(&self, x: Point) -> f64 {
        self.root.value(x, self.n_dims)
    }

    /// True when the tree contains a power-weight leaf, in which case the
    /// exact lattice origin must be sampled at the offset point.
    pub fn singular_at_origin(&self) -> bool {
        self.root.singular_at_origin()
    }
}

/// Samples a descriptor on a grid.
///
/// The only special case is the power-weight origin policy: when the tree is
/// singular at the origin, the lattice point at the exact origin (index
/// `N/2` per axis, identified by index rather than by floating-point
/// comparison) is evaluated at `(h/2, 0, 0)`.
pub fn sample(f: &AnalyticFunction, spec: &GridSpec) -> Result<GridFunction, TestFnError> {
    let eval = f.evaluator(spec.n_dims())?;
    let singular = eval.singular_at_origin();
    let origin = [spec.points_per_axis() / 2; 3];
    let offset_point = [spec.spacing() / 2.0, 0.0, 0.0];
    let mut values = Vec::with_capacity(spec.total_points());
    for idx in spec.indices() {
        let at_origin = (0..spec.n_dims()).all(|a| idx[a] == origin[a]);
        let x = if singular && at_origin {
            offset_point
        } else {
            spec.point(idx)
        };
        values.push(Complex64::new(eval.value(x), 0.0));
    }
    Ok(GridFunction::from_values(*spec, values)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bump_support_is_exact() {
        let f = AnalyticFunction::bump(&[0.0], 1.0, 1.0);
        let e = f.evaluator(1).unwrap();
        assert_eq!(e.value([1.0, 0.0, 0.0]), 0.0);
        assert_eq!(e.value([1.5, 0.0, 0.0]), 0.0);
        assert!(e.value([0.999, 0.0, 0.0]) > 0.0);
        assert!((e.value([0.0; 3]) - (-1.0f64).exp()).abs() < 1e-16);
    }

    #[test]
    fn dilated_bump_equals_shrunk_bump() {
        // dilate(bump(0,1), 2) == bump(0, 1/2): both reduce to
        // exp(-1/(1 - 4 x^2)) and the factor-of-two arithmetic is exact.
        let dilated = AnalyticFunction::bump(&[0.0], 1.0, 1.0).dilate(2.0);
        let shrunk = AnalyticFunction::bump(&[0.0], 0.5, 1.0);
        let (ed, es) = (dilated.evaluator(1).unwrap(), shrunk.evaluator(1).unwrap());
        for k in -20..=20 {
            let x = [k as f64 * 0.03, 0.0, 0.0];
            assert_eq!(ed.value(x).to_bits(), es.value(x).to_bits());
        }
    }

    #[test]
    fn dilated_gaussian_rescales_sigma() {
        let dilated = AnalyticFunction::gaussian(&[0.0], 1.0).dilate(2.0);
        let narrow = AnalyticFunction::gaussian(&[0.0], 0.5);
        let (ed, en) = (dilated.evaluator(1).unwrap(), narrow.evaluator(1).unwrap());
        for k in -10..=10 {
            let x = [k as f64 * 0.17, 0.0, 0.0];
            let (a, b) = (ed.value(x), en.value(x));
            assert!((a - b).abs() <= 1e-15 * b.abs());
        }
    }

    #[test]
    fn translate_shifts_argument() {
        // Dyadic offsets keep (3 + x) - 3 exact so the match is bitwise.
        let f = AnalyticFunction::bump(&[0.0], 1.0, 2.0);
        let g = f.clone().translate(&[3.0]);
        let (ef, eg) = (f.evaluator(1).unwrap(), g.evaluator(1).unwrap());
        for k in -5..=5 {
            let x = k as f64 * 0.25;
            assert_eq!(eg.value([3.0 + x, 0.0, 0.0]), ef.value([x, 0.0, 0.0]));
        }
    }

    #[test]
    fn gaussian_components_track_the_calculus() {
        let f = AnalyticFunction::gaussian(&[1.0], 0.8)
            .translate(&[0.5])
            .dilate(2.0)
            .scaled(3.0);
        let comps = f.gaussian_components().unwrap();
        assert_eq!(comps.len(), 1);
        let c = comps[0];
        assert!((c.amplitude - 3.0).abs() < 1e-15);
        assert!((c.sigma - 0.4).abs() < 1e-15);
        assert!((c.center[0] - 0.75).abs() < 1e-15);
        // Spatial evaluation agrees with the component formula.
        let e = f.evaluator(1).unwrap();
        for k in -6..=6 {
            let x = k as f64 * 0.3;
            let direct =
                c.amplitude * (-(x - c.center[0]).powi(2) / (2.0 * c.sigma * c.sigma)).exp();
            assert!((e.value([x, 0.0, 0.0]) - direct).abs() < 1e-14 * direct.abs().max(1.0));
        }
        // Bumps have no closed-form transform.
        assert!(AnalyticFunction::bump(&[0.0], 1.0, 1.0)
            .gaussian_components()
            .is_none());
    }

    #[test]
    fn sampling_applies_origin_policy_to_power_weights() {
        let spec = GridSpec::new(1, 32.0, 64).unwrap();
        let h = spec.spacing();
        let alpha = 0.5;
        let w = sample(&AnalyticFunction::power_weight(alpha), &spec).unwrap();
        let origin_value = w.value_at([32, 0, 0]).re;
        assert!((origin_value - (h / 2.0).powf(-alpha)).abs() < 1e-12 * origin_value);
        // Every other point is the plain evaluation.
        let x = spec.coordinate(40);
        assert_eq!(w.value_at([40, 0, 0]).re, x.abs().powf(-alpha));
    }

    #[test]
    fn origin_policy_value_relates_to_cell_average() {
        // On the origin cell [-h/2, h/2] the policy value (h/2)^(-alpha)
        // equals (1 - alpha) times the exact cell average of |x|^(-alpha).
        // The average is computed by quadrature after the substitution
        // x = u^4, which removes the singularity.
        let spec = GridSpec::new(1, 32.0, 512).unwrap();
        let h = spec.spacing();
        for &alpha in &[0.25_f64, 0.5] {
            let policy = (h / 2.0_f64).powf(-alpha);
            let top = (h / 2.0_f64).powf(0.25);
            let m = 20_000;
            let du = top / m as f64;
            let mut integral = 0.0;
            for i in 0..m {
                let u = (i as f64 + 0.5) * du;
                integral += 4.0 * u.powf(3.0 - 4.0 * alpha) * du;
            }
            let cell_average = 2.0 * integral / h;
            let ratio = policy / cell_average;
            assert!(
                (ratio - (1.0 - alpha)).abs() < 1e-5,
                "alpha = {alpha}: ratio = {ratio}"
            );
        }
    }

    #[test]
    fn product_sampling_matches_pointwise_product_off_origin() {
        let spec = GridSpec::new(1, 32.0, 64).unwrap();
        let w = AnalyticFunction::power_weight(0.25);
        let b = AnalyticFunction::bump(&[0.0], 2.0, 1.0);
        let prod = sample(
            &AnalyticFunction::product(vec![w.clone(), b.clone()]),
            &spec,
        )
        .unwrap();
        let separate = sample(&w, &spec)
            .unwrap()
            .pointwise_multiply(&sample(&b, &spec).unwrap())
            .unwrap();
        for idx in spec.indices() {
            if idx[0] == 32 {
                continue;
            }
            let (a, b) = (prod.value_at(idx).re, separate.value_at(idx).re);
            assert!((a - b).abs() <= 1e-15 * b.abs().max(1e-300), "idx {idx:?}");
        }
    }

    #[test]
    fn sampling_is_linear_bitwise() {
        let spec = GridSpec::new(1, 16.0, 64).unwrap();
        let f = AnalyticFunction::bump(&[1.0], 1.5, 1.0);
        let g = AnalyticFunction::gaussian(&[0.0], 0.7);
        let combo = AnalyticFunction::sum(vec![f.clone().scaled(2.5), g.clone().scaled(-0.75)]);
        let sampled = sample(&combo, &spec).unwrap();
        let fa = sample(&f, &spec).unwrap();
        let ga = sample(&g, &spec).unwrap();
        for idx in spec.indices() {
            let direct = 2.5 * fa.value_at(idx).re + (-0.75) * ga.value_at(idx).re;
            assert_eq!(sampled.value_at(idx).re.to_bits(), direct.to_bits());
        }
    }

    #[test]
    fn noise_is_deterministic_and_supported() {
        let f = AnalyticFunction::mollified_noise(42, 2.0, 0.5);
        let e1 = f.evaluator(1).unwrap();
        let e2 = f.evaluator(1).unwrap();
        let other = AnalyticFunction::mollified_noise(43, 2.0, 0.5)
            .evaluator(1)
            .unwrap();
        let mut saw_nonzero = false;
        let mut differs = false;
        for k in -60..=60 {
            let x = [k as f64 * 0.05, 0.0, 0.0];
            assert_eq!(e1.value(x).to_bits(), e2.value(x).to_bits());
            if e1.value(x) != 0.0 {
                saw_nonzero = true;
            }
            if e1.value(x) != other.value(x) {
                differs = true;
            }
            if x[0].abs() >= 2.5 {
                assert_eq!(e1.value(x), 0.0, "outside support at {}", x[0]);
            }
        }
        assert!(saw_nonzero);
        assert!(differs);
        assert_eq!(f.support_radius(), Some(2.5));
    }

    #[test]
    fn descriptors_roundtrip_through_json() {
        let f = AnalyticFunction::sum(vec![
            AnalyticFunction::bump(&[0.5], 1.0, 2.0).dilate(2.0),
            AnalyticFunction::mollified_noise(7, 2.0, 0.5).scaled(0.1),
        ]);
        let text = serde_json::to_string(&f).unwrap();
        let back: AnalyticFunction = serde_json::from_str(&text).unwrap();
        assert_eq!(f, back);
        assert!(text.contains("\"kind\":\"mollified_noise\""));
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        assert!(matches!(
            AnalyticFunction::bump(&[0.0], -1.0, 1.0).evaluator(1),
            Err(TestFnError::BumpRadius(_))
        ));
        assert!(matches!(
            AnalyticFunction::gaussian(&[0.0], 0.0).evaluator(1),
            Err(TestFnError::GaussianSigma(_))
        ));
        assert!(matches!(
            AnalyticFunction::power_weight(-0.5).evaluator(1),
            Err(TestFnError::PowerExponent(_))
        ));
        assert!(matches!(
            AnalyticFunction::bump(&[0.0], 1.0, 1.0)
                .dilate(0.0)
                .evaluator(1),
            Err(TestFnError::DilationFactor(_))
        ));
        assert!(matches!(
            AnalyticFunction::bump(&[0.0, 0.0, 0.0, 0.0], 1.0, 1.0).evaluator(3),
            Err(TestFnError::CoordinateArity(_))
        ));
    }

    #[test]
    fn support_radius_tracks_combinators() {
        let f = AnalyticFunction::bump(&[1.0], 2.0, 1.0);
        assert_eq!(f.support_radius(), Some(3.0));
        assert_eq!(f.clone().dilate(2.0).support_radius(), Some(1.5));
        assert_eq!(f.clone().translate(&[4.0]).support_radius(), Some(7.0));
        let g = AnalyticFunction::gaussian(&[0.0], 1.0);
        assert_eq!(g.support_radius(), None);
        assert_eq!(g.effective_radius(), Some(9.0));
        let prod = AnalyticFunction::product(vec![g, f]);
        assert_eq!(prod.support_radius(), Some(3.0));
    }
}
