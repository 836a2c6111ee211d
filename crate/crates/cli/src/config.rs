//! Problem-description schema.  Strict: unknown keys are rejected
//! everywhere, rationals are `"p/q"` strings, complex numbers `{re, im}`
//! objects, lattice points `{s, t}` rational coordinates in the
//! `(1, lattice_tau)` basis.

use serde::Deserialize;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub surface: SurfaceConfig,
    pub ns: NsConfig,
    pub chern: ChernConfig,
    #[serde(default)]
    pub bundle: Option<BundleConfig>,
    #[serde(default)]
    pub graph: Option<GraphConfig>,
    #[serde(default)]
    pub options: OptionsConfig,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexConfig {
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceConfig {
    pub base_genus: u32,
    /// Required exactly when `base_genus` is 1.
    #[serde(default)]
    pub base_tau: Option<ComplexConfig>,
    pub fibre_tau: ComplexConfig,
    pub theta_degree: u32,
    pub tau: ComplexConfig,
    #[serde(default)]
    pub multiple_fibres: Vec<MultipleFibreConfig>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MultipleFibreConfig {
    pub multiplicity: u32,
    pub base_point: ComplexConfig,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NsConfig {
    pub gram: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChernConfig {
    pub c1: Vec<i64>,
    pub c2: i64,
}

/// Lattice point in the `(1, lattice_tau)` basis, exact coordinates.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticePointConfig {
    pub s: String,
    pub t: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, tag = "type", rename_all = "snake_case")]
pub enum SectionConfig {
    Constant {
        point: LatticePointConfig,
    },
    Affine {
        u: ComplexConfig,
        offset: LatticePointConfig,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LineBundleConfig {
    pub base_chern: i64,
    pub alpha: ComplexConfig,
    #[serde(default)]
    pub fibre_coeffs: Vec<i64>,
    pub section: SectionConfig,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields, tag = "mode", rename_all = "snake_case")]
pub enum SplittingConfig {
    SplitsEverywhere,
    SplitsOnFinitely { n: u32 },
    NontrivialOnFinitely { n: u32 },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtensionConfig {
    pub destab_section: SectionConfig,
    pub destab_bundle: LineBundleConfig,
    pub other_section: SectionConfig,
    pub splitting: SplittingConfig,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JumpConfig {
    pub base_point: ComplexConfig,
    #[serde(default)]
    pub over_multiple_fibre: Option<u32>,
    pub jumping_sequence: Vec<u32>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerticalConfig {
    pub base_point: ComplexConfig,
    pub multiplicity: u32,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, tag = "type", rename_all = "snake_case")]
pub enum P1Config {
    Finite { value: ComplexConfig },
    Infinity,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleConfig {
    pub base_point: ComplexConfig,
    pub value: P1Config,
}

/// Horizontal part of a spectral cover or graph divisor.
/// `from_sections` builds the reducible bisection out of the extension's
/// two sections and is only valid inside a bundle.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, tag = "type", rename_all = "snake_case")]
pub enum HorizontalConfig {
    FromSections,
    Rational {
        numerator: Vec<ComplexConfig>,
        denominator: Vec<ComplexConfig>,
    },
    Sampled {
        samples: Vec<SampleConfig>,
        degree: u32,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverConfig {
    #[serde(default)]
    pub vertical: Vec<VerticalConfig>,
    pub horizontal: HorizontalConfig,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleConfig {
    pub determinant: LineBundleConfig,
    pub cover: CoverConfig,
    #[serde(default)]
    pub extension: Option<ExtensionConfig>,
    #[serde(default)]
    pub jumps: Vec<JumpConfig>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DegreeConfig {
    pub rational: String,
    pub real: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphConfig {
    #[serde(default)]
    pub vertical: Vec<VerticalConfig>,
    pub section: HorizontalConfig,
    /// The excluded constant set I, as quotient-chart values.
    #[serde(default)]
    pub excluded_constants: Option<Vec<P1Config>>,
    /// Candidate torus points; the CLI projects them through the quotient
    /// chart and merges the values into the excluded set.
    #[serde(default)]
    pub candidate_constants: Option<Vec<LatticePointConfig>>,
    /// Degree datum for the set-J congruence / regularity flag.
    #[serde(default)]
    pub component_degree: Option<DegreeConfig>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputMode {
    Json,
    Text,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptionsConfig {
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default = "default_wp_terms")]
    pub wp_terms: u32,
    #[serde(default = "default_output")]
    pub output: OutputMode,
    /// Optional `"p/q"` threshold for the sufficient-smoothness test in
    /// moduli reports.
    #[serde(default)]
    pub gamma: Option<String>,
}

fn default_epsilon() -> f64 {
    1e-9
}

fn default_wp_terms() -> u32 {
    200
}

fn default_output() -> OutputMode {
    OutputMode::Json
}

impl Default for OptionsConfig {
    fn default() -> Self {
        OptionsConfig {
            epsilon: default_epsilon(),
            wp_terms: default_wp_terms(),
            output: default_output(),
            gamma: None,
        }
    }
}

impl OptionsConfig {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.epsilon > 0.0 && self.epsilon < 1e-2) {
            return Err(format!(
                "options.epsilon must lie in (0, 1e-2), got {}",
                self.epsilon
            ));
        }
        if !(8..=400).contains(&self.wp_terms) {
            return Err(format!(
                "options.wp_terms must lie in [8, 400], got {}",
                self.wp_terms
            ));
        }
        Ok(())
    }
}

/// Parses a config file, rejecting unknown keys and malformed values.
pub fn load(path: &std::path::Path) -> Result<ProblemConfig, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let cfg: ProblemConfig =
        serde_json::from_str(&text).map_err(|e| format!("invalid config: {e}"))?;
    cfg.options.validate()?;
    Ok(cfg)
}
