//! Scenario files.
//!
//! A scenario is a TOML document with unit-suffixed keys:
//!
//! ```toml
//! horizon_s = 50.0
//! steps = 1000
//! policy = "osg"
//! master_seed = 0
//! instances = 50
//! reward_scale = 0.05          # or "auto"
//! output_path = "out/line_20hz.csv"
//! robots_units = [[0.0, -3.0], [0.0, 3.0]]
//! targets_units = [[5.0, -3.0], [5.0, 3.0]]
//!
//! [scenario]
//! kind = "straight_line"
//! velocity_units_per_s = [1.0, 0.0]
//! ```

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context};
use osg_core::baselines::PolicyKind;
use osg_core::sim::{
    AdversarialParams, SimConfig, TargetBehavior, TargetSpec, Vec2, DEFAULT_MIN_DISTANCE,
};
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize};

/// Divisor for OSG rewards.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum RewardScale {
    /// The environment's a-priori bound on single-action gains.
    #[default]
    Auto,
    Fixed(f64),
}

impl RewardScale {
    pub fn as_option(self) -> Option<f64> {
        match self {
            RewardScale::Auto => None,
            RewardScale::Fixed(s) => Some(s),
        }
    }
}

impl fmt::Display for RewardScale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RewardScale::Auto => f.write_str("auto"),
            RewardScale::Fixed(s) => write!(f, "{s}"),
        }
    }
}

impl Serialize for RewardScale {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            RewardScale::Auto => s.serialize_str("auto"),
            RewardScale::Fixed(v) => s.serialize_f64(*v),
        }
    }
}

impl<'de> Deserialize<'de> for RewardScale {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct ScaleVisitor;
        impl Visitor<'_> for ScaleVisitor {
            type Value = RewardScale;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str(r#"a positive number or "auto""#)
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<RewardScale, E> {
                if v.eq_ignore_ascii_case("auto") {
                    Ok(RewardScale::Auto)
                } else {
                    Err(E::invalid_value(de::Unexpected::Str(v), &self))
                }
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<RewardScale, E> {
                Ok(RewardScale::Fixed(v))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<RewardScale, E> {
                Ok(RewardScale::Fixed(v as f64))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<RewardScale, E> {
                Ok(RewardScale::Fixed(v as f64))
            }
        }
        d.deserialize_any(ScaleVisitor)
    }
}

fn policy_from_str<'de, D: Deserializer<'de>>(d: D) -> Result<PolicyKind, D::Error> {
    let s = String::deserialize(d)?;
    s.parse().map_err(de::Error::custom)
}

fn policy_to_str<S: serde::Serializer>(p: &PolicyKind, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(p.name())
}

fn default_policy() -> PolicyKind {
    PolicyKind::Osg
}
fn default_instances() -> usize {
    1
}
fn default_d_min() -> f64 {
    DEFAULT_MIN_DISTANCE
}
fn default_tail_fraction() -> f64 {
    0.4
}
fn default_output_path() -> PathBuf {
    PathBuf::from("trace.csv")
}
fn default_velocity() -> [f64; 2] {
    [1.0, 0.0]
}
fn default_rect_side() -> f64 {
    10.0
}
fn one() -> f64 {
    1.0
}
fn two() -> f64 {
    2.0
}

/// Target motion shared by every target of a scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ScenarioKind {
    StraightLine {
        #[serde(default = "default_velocity")]
        velocity_units_per_s: [f64; 2],
    },
    NoisyRect {
        #[serde(default = "default_rect_side")]
        width_units: f64,
        #[serde(default = "default_rect_side")]
        height_units: f64,
        #[serde(default = "one")]
        speed_units_per_s: f64,
        #[serde(default = "two")]
        lateral_variance_units2_per_s2: f64,
    },
    Adversarial {
        #[serde(default)]
        trigger_radius_units: Option<f64>,
        #[serde(default)]
        dodge_speed_units_per_s: Option<f64>,
        #[serde(default)]
        dodge_duration_s: Option<f64>,
        #[serde(default)]
        return_duration_s: Option<f64>,
        #[serde(default)]
        return_vertical_units_per_s: Option<f64>,
        #[serde(default)]
        return_horizontal_units_per_s: Option<f64>,
        #[serde(default)]
        forward_speed_units_per_s: Option<f64>,
    },
}

impl ScenarioKind {
    pub fn behavior(&self) -> TargetBehavior {
        match *self {
            ScenarioKind::StraightLine {
                velocity_units_per_s: [x, y],
            } => TargetBehavior::StraightLine {
                velocity: Vec2::new(x, y),
            },
            ScenarioKind::NoisyRect {
                width_units,
                height_units,
                speed_units_per_s,
                lateral_variance_units2_per_s2,
            } => TargetBehavior::NoisyRect {
                width: width_units,
                height: height_units,
                speed: speed_units_per_s,
                lateral_variance: lateral_variance_units2_per_s2,
            },
            ScenarioKind::Adversarial {
                trigger_radius_units,
                dodge_speed_units_per_s,
                dodge_duration_s,
                return_duration_s,
                return_vertical_units_per_s,
                return_horizontal_units_per_s,
                forward_speed_units_per_s,
            } => {
                let d = AdversarialParams::default();
                TargetBehavior::Adversarial(AdversarialParams {
                    trigger_radius: trigger_radius_units.unwrap_or(d.trigger_radius),
                    dodge_speed: dodge_speed_units_per_s.unwrap_or(d.dodge_speed),
                    dodge_duration: dodge_duration_s.unwrap_or(d.dodge_duration),
                    return_duration: return_duration_s.unwrap_or(d.return_duration),
                    return_vertical_speed: return_vertical_units_per_s
                        .unwrap_or(d.return_vertical_speed),
                    return_horizontal_speed: return_horizontal_units_per_s
                        .unwrap_or(d.return_horizontal_speed),
                    nominal_speed: forward_speed_units_per_s.unwrap_or(d.nominal_speed),
                })
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub horizon_s: f64,
    pub steps: usize,
    pub scenario: ScenarioKind,
    pub robots_units: Vec<[f64; 2]>,
    pub targets_units: Vec<[f64; 2]>,
    #[serde(
        default = "default_policy",
        deserialize_with = "policy_from_str",
        serialize_with = "policy_to_str"
    )]
    pub policy: PolicyKind,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default = "default_instances")]
    pub instances: usize,
    #[serde(default)]
    pub reward_scale: RewardScale,
    #[serde(default = "default_d_min")]
    pub d_min_units: f64,
    /// Fraction of the final steps averaged in the distance summary.
    #[serde(default = "default_tail_fraction")]
    pub tail_fraction: f64,
    /// Record the per-step optimum (needed for regret).
    #[serde(default)]
    pub brute_force_opt: bool,
    #[serde(default = "default_output_path")]
    pub output_path: PathBuf,
}

impl FromStr for ScenarioConfig {
    type Err = anyhow::Error;

    fn from_str(text: &str) -> anyhow::Result<Self> {
        let config: ScenarioConfig = toml::from_str(text)?;
        config.validate()?;
        Ok(config)
    }
}

impl ScenarioConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        text.parse()
            .with_context(|| format!("invalid config {}", path.display()))
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        if self.steps < 1 {
            bail!("steps must be at least 1");
        }
        if !(self.horizon_s > 0.0 && self.horizon_s.is_finite()) {
            bail!("horizon_s must be positive, got {}", self.horizon_s);
        }
        if self.instances < 1 {
            bail!("instances must be at least 1");
        }
        if !(0.0..=1.0).contains(&self.tail_fraction) {
            bail!(
                "tail_fraction must lie in [0, 1], got {}",
                self.tail_fraction
            );
        }
        if let RewardScale::Fixed(s) = self.reward_scale {
            if !(s > 0.0 && s.is_finite()) {
                bail!("reward_scale must be positive or \"auto\", got {s}");
            }
        }
        self.sim_config(self.master_seed).validate()?;
        Ok(())
    }

    /// Replanning frequency `T / H`.
    pub fn frequency_hz(&self) -> f64 {
        self.steps as f64 / self.horizon_s
    }

    /// Number of final steps averaged in the summary (at least one).
    pub fn tail_steps(&self) -> usize {
        ((self.steps as f64 * self.tail_fraction).round() as usize).clamp(1, self.steps)
    }

    pub fn sim_config(&self, seed: u64) -> SimConfig {
        let behavior = self.scenario.behavior();
        SimConfig {
            horizon_s: self.horizon_s,
            steps: self.steps,
            robots: self
                .robots_units
                .iter()
                .map(|&[x, y]| Vec2::new(x, y))
                .collect(),
            targets: self
                .targets_units
                .iter()
                .map(|&[x, y]| TargetSpec {
                    position: Vec2::new(x, y),
                    behavior,
                })
                .collect(),
            d_min: self.d_min_units,
            seed,
        }
    }

    /// Two robots 3 units either side of the x axis chasing two targets
    /// that start 5 units ahead of them and move right at 1 unit/s.
    pub fn straight_line(frequency_hz: f64) -> Self {
        let horizon_s = 50.0;
        Self {
            horizon_s,
            steps: (horizon_s * frequency_hz).round() as usize,
            scenario: ScenarioKind::StraightLine {
                velocity_units_per_s: default_velocity(),
            },
            robots_units: vec![[0.0, -3.0], [0.0, 3.0]],
            targets_units: vec![[5.0, -3.0], [5.0, 3.0]],
            policy: PolicyKind::Osg,
            master_seed: 0,
            instances: 50,
            reward_scale: RewardScale::Fixed(0.05),
            d_min_units: DEFAULT_MIN_DISTANCE,
            tail_fraction: default_tail_fraction(),
            brute_force_opt: false,
            output_path: default_output_path(),
        }
    }

    /// Same start geometry with evasive targets, 20 Hz over 50 s.
    pub fn adversarial() -> Self {
        Self {
            scenario: ScenarioKind::Adversarial {
                trigger_radius_units: None,
                dodge_speed_units_per_s: None,
                dodge_duration_s: None,
                return_duration_s: None,
                return_vertical_units_per_s: None,
                return_horizontal_units_per_s: None,
                forward_speed_units_per_s: None,
            },
            ..Self::straight_line(20.0)
        }
    }

    /// Noisy rectangles of 10 × 10 units over 100 s.
    pub fn noisy_rect(frequency_hz: f64) -> Self {
        let horizon_s = 100.0;
        Self {
            horizon_s,
            steps: (horizon_s * frequency_hz).round() as usize,
            scenario: ScenarioKind::NoisyRect {
                width_units: default_rect_side(),
                height_units: default_rect_side(),
                speed_units_per_s: 1.0,
                lateral_variance_units2_per_s2: 2.0,
            },
            ..Self::straight_line(frequency_hz)
        }
    }
}
