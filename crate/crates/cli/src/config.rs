//! Analysis configuration: JSON input with defaults and validation.

use salem_core::bounds::CaseParams;
use salem_core::substitution::SubstitutionSpec;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisConfig {
    pub substitution: SubstitutionSpec,
    #[serde(default = "default_precision")]
    pub precision_bits: usize,
    #[serde(default)]
    pub seed: u64,
    /// Last n of the orbit dump; also the horizon of the residue search.
    #[serde(default = "default_horizon")]
    pub horizon: usize,
    /// Field elements in the form `"l0,...,l{d-1}/L"`.
    #[serde(default)]
    pub eta: Vec<String>,
    /// Closed intervals `[a, b] ⊆ [0, 1]`.
    #[serde(default = "default_intervals")]
    pub intervals: Vec<[f64; 2]>,
    /// N for the empirical frequencies.
    #[serde(default = "default_equidist_n")]
    pub equidist_n: usize,
    /// Degrees N of the Selberg polynomials.
    #[serde(default = "default_selberg_degrees")]
    pub selberg_degrees: Vec<usize>,
    #[serde(default)]
    pub spectral: SpectralConfig,
    #[serde(default)]
    pub bounds: BoundsConfig,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SpectralConfig {
    pub omega: Vec<f64>,
    /// Increasing window lengths R.
    pub r_grid: Vec<f64>,
    /// One-based letter whose indicator is the observable.
    pub letter: usize,
    pub num_samples: usize,
    pub kappa: f64,
    /// Supplying both λ and C₁ checks the product bound with them.
    pub lambda: Option<f64>,
    pub c1: Option<f64>,
    pub c2: f64,
    /// Fit (λ, C₁) when they are not both supplied.
    pub fit: bool,
}

impl Default for SpectralConfig {
    fn default() -> Self {
        SpectralConfig {
            omega: vec![0.5, 1.0],
            r_grid: (3..=10).map(|k| f64::from(1u32 << k)).collect(),
            letter: 1,
            num_samples: 32,
            kappa: 1.0,
            lambda: None,
            c1: None,
            c2: 0.0,
            fit: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Theorem {
    /// Positive-frequency constant `1/3`.
    General,
    /// Constant `1/(3A^d)`, uniform in B and C.
    Uniform,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BoundsConfig {
    pub lambda: f64,
    pub tau: f64,
    pub d_const: f64,
    pub c_alpha: f64,
    /// Bound on the denominator L.
    #[serde(rename = "A")]
    pub a: f64,
    /// `|η| ∈ [1/B, B]`.
    #[serde(rename = "B")]
    pub b: f64,
    /// `|σ₀(η)| ≤ C`.
    #[serde(rename = "C")]
    pub c: f64,
    pub theorem: Theorem,
    /// Explicit case inputs evaluated besides the η list.
    pub case_params: Vec<CaseParams>,
}

impl Default for BoundsConfig {
    fn default() -> Self {
        BoundsConfig {
            lambda: 0.5,
            tau: 2.0,
            d_const: 1.0,
            c_alpha: 1.0,
            a: 4.0,
            b: 4.0,
            c: 4.0,
            theorem: Theorem::General,
            case_params: Vec::new(),
        }
    }
}

fn default_precision() -> usize {
    256
}

fn default_horizon() -> usize {
    200
}

fn default_intervals() -> Vec<[f64; 2]> {
    vec![[0.0, 0.5], [0.25, 0.75], [0.0, 1.0]]
}

fn default_equidist_n() -> usize {
    100_000
}

fn default_selberg_degrees() -> Vec<usize> {
    vec![8, 32]
}

pub const MIN_PRECISION: usize = 64;

impl AnalysisConfig {
    pub fn from_json(text: &str) -> CliResult<Self> {
        let cfg: AnalysisConfig =
            serde_json::from_str(text).map_err(|e| CliError::Config(format!("invalid config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> CliResult<()> {
        let bad = |msg: String| Err(CliError::Config(msg));
        if self.precision_bits < MIN_PRECISION {
            return bad(format!("precision_bits must be at least {MIN_PRECISION}"));
        }
        if self.equidist_n == 0 {
            return bad("equidist_n must be positive".into());
        }
        for &[a, b] in &self.intervals {
            if !(0.0 <= a && a < b && b <= 1.0) {
                return bad(format!("interval [{a}, {b}] is not a subinterval of [0, 1] with a < b"));
            }
        }
        if self.selberg_degrees.contains(&0) {
            return bad("selberg_degrees must be positive".into());
        }
        let s = &self.spectral;
        if s.omega.iter().any(|w| !w.is_finite()) {
            return bad("omega values must be finite".into());
        }
        if s.r_grid.is_empty() || s.r_grid[0] <= 0.0 || s.r_grid.windows(2).any(|w| w[1] <= w[0]) {
            return bad("r_grid must be positive and strictly increasing".into());
        }
        if s.letter == 0 || s.letter > self.substitution.alphabet {
            return bad(format!("letter {} outside alphabet 1..={}", s.letter, self.substitution.alphabet));
        }
        if s.num_samples == 0 {
            return bad("num_samples must be positive".into());
        }
        if !(s.kappa > 0.0) {
            return bad("kappa must be positive".into());
        }
        if s.lambda.is_some_and(|l| !(0.0 < l && l < 1.0)) {
            return bad("lambda must lie in (0, 1)".into());
        }
        if s.c1.is_some_and(|c| !(c > 0.0)) {
            return bad("c1 must be positive".into());
        }
        let b = &self.bounds;
        if !(0.0 < b.lambda && b.lambda < 1.0) {
            return bad("bounds.lambda must lie in (0, 1)".into());
        }
        for (name, v) in [("tau", b.tau), ("d_const", b.d_const), ("c_alpha", b.c_alpha)] {
            if !(v > 0.0 && v.is_finite()) {
                return bad(format!("bounds.{name} must be positive"));
            }
        }
        for (name, v) in [("A", b.a), ("B", b.b), ("C", b.c)] {
            if !(v > 1.0 && v.is_finite()) {
                return bad(format!("bounds.{name} must exceed 1"));
            }
        }
        Ok(())
    }

    /// Hex SHA-256 of the canonical JSON of the effective configuration.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_vec(self).expect("config serializes");
        format!("{:x}", Sha256::digest(canonical))
    }

    /// Decimal digits for high-precision output: a third of the bits,
    /// capped at the digits the binary precision carries.
    pub fn hp_digits(&self) -> usize {
        let carried = (self.precision_bits as f64 * std::f64::consts::LOG10_2).floor() as usize;
        (self.precision_bits / 3).min(carried)
    }
}
