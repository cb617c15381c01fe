use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use shearcert::dyadic::{Dyadic, Exact};
use shearcert::independence::{QuadratureSettings, DEFAULT_SEED};
use shearcert::shearlet2d::{DomainRule, Rect, ShearletSystemSpec};
use shearcert::{Error, Result};

/// Everything a run depends on. Every report embeds the resolved copy.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub order: usize,
    pub c1: String,
    pub c2: String,
    pub j_max: u32,
    /// `[x_min, y_min, x_max, y_max]` as dyadic strings.
    pub domain: [String; 4],
    pub rule: DomainRule,
    /// Cascade level; `None` picks the smallest level each command needs.
    pub cascade_level: Option<u32>,
    pub quadrature_levels: [u32; 2],
    pub tolerance: f64,
    pub seed: u64,
    pub output_dir: PathBuf,
    pub allow_inadmissible: bool,
    pub lemma31: Lemma31Config,
    pub prop33: Prop33Config,
    pub cones: ConesConfig,
    pub hypotheses: HypothesesConfig,
    pub frame_bounds: FrameBoundsConfig,
    pub oversampling: OversamplingConfig,
    pub admissibility: AdmissibilityConfig,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Lemma31Config {
    pub orders: Vec<usize>,
    pub scales: Vec<u32>,
    pub trials: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Prop33Config {
    pub order: usize,
    pub offsets: Vec<String>,
    pub scales: Vec<u32>,
    pub window: i64,
    pub cascade_level: u32,
    pub quadrature_levels: [u32; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConesConfig {
    pub j_max: u32,
    /// Random three-element combinations per cone.
    pub combinations: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HypothesesConfig {
    pub orders: Vec<usize>,
    pub level: u32,
    pub alpha: f64,
    pub gamma: f64,
    pub xi_max: f64,
    /// Orders whose `m0` positivity is checked.
    pub m0_orders: Vec<usize>,
    /// Count failed decay bounds against the suite.
    pub require_decay: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FrameBoundsConfig {
    pub sizes: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OversamplingConfig {
    pub factors: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AdmissibilityConfig {
    pub desk_scale: u32,
    pub window: i64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            order: 2,
            c1: "1/3".into(),
            c2: "1/3".into(),
            j_max: 1,
            domain: ["0", "0", "3", "3"].map(String::from),
            rule: DomainRule::Contained,
            cascade_level: None,
            quadrature_levels: [5, 7],
            tolerance: shearcert::independence::DEFAULT_TOLERANCE,
            seed: DEFAULT_SEED,
            output_dir: PathBuf::from("shearcert-out"),
            allow_inadmissible: false,
            lemma31: Lemma31Config::default(),
            prop33: Prop33Config::default(),
            cones: ConesConfig::default(),
            hypotheses: HypothesesConfig::default(),
            frame_bounds: FrameBoundsConfig::default(),
            oversampling: OversamplingConfig::default(),
            admissibility: AdmissibilityConfig::default(),
        }
    }
}

impl Default for Lemma31Config {
    fn default() -> Self {
        Lemma31Config {
            orders: vec![1, 2, 3],
            scales: vec![0, 1, 2, 3],
            trials: 100,
        }
    }
}

impl Default for Prop33Config {
    fn default() -> Self {
        Prop33Config {
            order: 2,
            offsets: ["0", "1/3", "2/3"].map(String::from).to_vec(),
            scales: vec![0, 1],
            window: 3,
            cascade_level: 12,
            quadrature_levels: [8, 10],
        }
    }
}

impl Default for ConesConfig {
    fn default() -> Self {
        ConesConfig {
            j_max: 3,
            combinations: 20,
        }
    }
}

impl Default for HypothesesConfig {
    fn default() -> Self {
        HypothesesConfig {
            orders: vec![1, 2, 3],
            level: 10,
            alpha: 6.0,
            gamma: 5.0,
            xi_max: shearcert::mra1d::spectral::XI_MAX,
            m0_orders: (1..=8).collect(),
            require_decay: false,
        }
    }
}

impl Default for FrameBoundsConfig {
    fn default() -> Self {
        FrameBoundsConfig {
            sizes: vec![5, 10, 15, 20, 25],
        }
    }
}

impl Default for OversamplingConfig {
    fn default() -> Self {
        OversamplingConfig {
            factors: vec![2, 3],
        }
    }
}

impl Default for AdmissibilityConfig {
    fn default() -> Self {
        AdmissibilityConfig {
            desk_scale: 1,
            window: 4,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn sampling(&self) -> Result<(Exact, Exact)> {
        Ok((self.c1.parse()?, self.c2.parse()?))
    }

    pub fn domain_rect(&self) -> Result<Rect> {
        let d: Vec<Dyadic> = self
            .domain
            .iter()
            .map(|s| s.parse())
            .collect::<Result<_>>()?;
        Rect::new(d[0].clone(), d[1].clone(), d[2].clone(), d[3].clone())
    }

    /// The system spec; even denominators are rejected unless
    /// `allow_inadmissible` is set.
    pub fn spec(&self) -> Result<ShearletSystemSpec> {
        self.spec_with_j_max(self.j_max)
    }

    pub fn spec_with_j_max(&self, j_max: u32) -> Result<ShearletSystemSpec> {
        let c = self.sampling()?;
        let domain = self.domain_rect()?;
        let spec = if self.allow_inadmissible {
            ShearletSystemSpec::new_unchecked(self.order, c, j_max, domain)
        } else {
            ShearletSystemSpec::new(self.order, c, j_max, domain)
        };
        Ok(spec?.with_rule(self.rule))
    }

    pub fn levels(&self) -> (u32, u32) {
        (self.quadrature_levels[0], self.quadrature_levels[1])
    }

    /// Cascade level for a Gram at the configured quadrature levels.
    pub fn gram_cascade_level(&self, j_max: u32) -> u32 {
        self.cascade_level
            .unwrap_or(self.quadrature_levels[1] + j_max + 2)
    }

    pub fn prop33_offsets(&self) -> Result<Vec<Exact>> {
        self.prop33.offsets.iter().map(|s| s.parse()).collect()
    }

    pub fn prop33_settings(&self) -> QuadratureSettings {
        QuadratureSettings {
            cascade_level: self.prop33.cascade_level,
            levels: (
                self.prop33.quadrature_levels[0],
                self.prop33.quadrature_levels[1],
            ),
            tolerance: self.tolerance,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (l0, l1) = self.levels();
        if l1 < l0 + 2 {
            return Err(Error::QuadratureLevels(l0, l1));
        }
        self.spec().map(|_| ())
    }
}
