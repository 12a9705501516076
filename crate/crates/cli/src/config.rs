//! The JSON run configuration and the systems it describes.

use std::path::{Path, PathBuf};

use maxsat_core::special::Polynomial;
use maxsat_core::systems::{
    examples, CsParams, CsSystem, DegreeDistribution, DicodeErasure, GldpcSystem, IsiSystem, LdgmSystem, LdpcSystem,
    Pathological, Prior,
};
use maxsat_core::{ParamSystem, ScalarSystem};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;

/// A complete run: the system and the command parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema: u32,
    #[serde(default)]
    pub system: Option<SystemConfig>,
    #[serde(default)]
    pub command: CommandConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum SystemConfig {
    Ldpc { lambda: DegreeConfig, rho: DegreeConfig },
    Ldgm { lambda: DegreeConfig, rho: DegreeConfig },
    Gldpc { n: u32, t: u32 },
    Isi { channel: Channel, lambda: DegreeConfig, rho: DegreeConfig },
    Cs { prior: PriorConfig, sigma2: f64, delta: f64 },
    Builtin { name: Builtin },
}

/// A degree distribution in edge form (`λ`, `ρ`) or node form (`L`, `R`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum DegreeConfig {
    Edge(PolyConfig),
    Node(PolyConfig),
}

/// `"0.2 x + 0.8 x^3"` or ascending coefficients `[0, 0.2, 0, 0.8]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PolyConfig {
    Text(String),
    Coeffs(Vec<f64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Channel {
    Dicode,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum PriorConfig {
    Gaussian { variance: f64 },
    TwoPoint { mass: f64, prob: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Builtin {
    Example1,
    Example2,
    Example3,
    Example8,
    Example9,
    #[serde(rename = "gldpc_31_4")]
    #[value(name = "gldpc_31_4")]
    Gldpc31_4,
    #[serde(rename = "gldpc_63_5")]
    #[value(name = "gldpc_63_5")]
    Gldpc63_5,
}

impl Builtin {
    pub const ALL: [Builtin; 7] = [
        Builtin::Example1,
        Builtin::Example2,
        Builtin::Example3,
        Builtin::Example8,
        Builtin::Example9,
        Builtin::Gldpc31_4,
        Builtin::Gldpc63_5,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Builtin::Example1 => "example1",
            Builtin::Example2 => "example2",
            Builtin::Example3 => "example3",
            Builtin::Example8 => "example8",
            Builtin::Example9 => "example9",
            Builtin::Gldpc31_4 => "gldpc_31_4",
            Builtin::Gldpc63_5 => "gldpc_63_5",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdName {
    EpsS,
    EpsStab,
    EpsC,
    EpsMaxwell,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InjectedBug {
    NegatedGradient,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

/// Evenly spaced grid `start, …, stop` with `points` entries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl GridConfig {
    pub fn values(&self) -> Vec<f64> {
        let n = self.points;
        (0..n)
            .map(|i| if i + 1 == n { self.stop } else { self.start + (self.stop - self.start) * i as f64 / (n - 1) as f64 })
            .collect()
    }
}

/// Command parameters; every field is optional and flags take precedence.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CommandConfig {
    pub name: Option<String>,
    pub eps: Option<f64>,
    pub eps_grid: Option<GridConfig>,
    pub x_grid: Option<GridConfig>,
    pub n: Option<usize>,
    pub w: Option<usize>,
    pub tol: Option<f64>,
    pub max_iters: Option<usize>,
    pub delta_offset: Option<f64>,
    pub threshold: Option<ThresholdName>,
    pub inject_bug: Option<InjectedBug>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| CliError::Config(format!("invalid config: {e}")))?;
        if cfg.schema != SCHEMA_VERSION {
            return Err(CliError::Config(format!(
                "unsupported schema {}, expected {SCHEMA_VERSION}",
                cfg.schema
            )));
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }
}

pub type DynParam = Box<dyn ParamSystem + Send + Sync>;
pub type DynScalar = Box<dyn ScalarSystem + Send + Sync>;

/// A constructed system: a parameterized family or a fixed scalar system.
pub enum BuiltSystem {
    Family { sys: DynParam, default_eps: Option<f64> },
    Scalar(DynScalar),
}

fn parse_poly(p: &PolyConfig) -> Result<Polynomial, CliError> {
    match p {
        PolyConfig::Text(s) => s.parse().map_err(|e| CliError::Config(format!("polynomial {s:?}: {e}"))),
        PolyConfig::Coeffs(c) => Ok(Polynomial::new(c.clone())),
    }
}

fn degree(d: &DegreeConfig, what: &str) -> Result<DegreeDistribution, CliError> {
    let r = match d {
        DegreeConfig::Edge(p) => DegreeDistribution::from_edge_poly(&parse_poly(p)?),
        DegreeConfig::Node(p) => DegreeDistribution::from_node_poly(&parse_poly(p)?),
    };
    r.map_err(|e| CliError::Config(format!("{what}: {e}")))
}

fn finite_positive(v: f64, what: &str) -> Result<(), CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(CliError::Config(format!("{what} must be positive and finite, got {v}")))
    }
}

pub fn builtin_system(b: Builtin) -> BuiltSystem {
    match b {
        Builtin::Example1 => BuiltSystem::Family { sys: Box::new(examples::example1_family()), default_eps: Some(0.97) },
        Builtin::Example2 => BuiltSystem::Family { sys: Box::new(examples::example2_family()), default_eps: Some(0.5) },
        Builtin::Example3 => BuiltSystem::Scalar(Box::new(Pathological)),
        Builtin::Example8 => BuiltSystem::Family { sys: Box::new(examples::example8()), default_eps: None },
        Builtin::Example9 => BuiltSystem::Family { sys: Box::new(examples::example9()), default_eps: None },
        Builtin::Gldpc31_4 => BuiltSystem::Family { sys: Box::new(examples::gldpc_31_4()), default_eps: None },
        Builtin::Gldpc63_5 => BuiltSystem::Family { sys: Box::new(examples::gldpc_63_5()), default_eps: None },
    }
}

impl SystemConfig {
    pub fn build(&self) -> Result<BuiltSystem, CliError> {
        let cons = |e: maxsat_core::Error| CliError::Config(format!("system: {e}"));
        Ok(match self {
            SystemConfig::Ldpc { lambda, rho } => BuiltSystem::Family {
                sys: Box::new(LdpcSystem::new(degree(lambda, "lambda")?, degree(rho, "rho")?)),
                default_eps: None,
            },
            SystemConfig::Ldgm { lambda, rho } => BuiltSystem::Family {
                sys: Box::new(LdgmSystem::new(degree(lambda, "lambda")?, degree(rho, "rho")?).map_err(cons)?),
                default_eps: None,
            },
            SystemConfig::Gldpc { n, t } => {
                BuiltSystem::Family { sys: Box::new(GldpcSystem::new(*n, *t).map_err(cons)?), default_eps: None }
            }
            SystemConfig::Isi { channel: Channel::Dicode, lambda, rho } => BuiltSystem::Family {
                sys: Box::new(IsiSystem::new(DicodeErasure, degree(lambda, "lambda")?, degree(rho, "rho")?).map_err(cons)?),
                default_eps: None,
            },
            SystemConfig::Cs { prior, sigma2, delta } => {
                let prior = match *prior {
                    PriorConfig::Gaussian { variance } => {
                        finite_positive(variance, "prior variance")?;
                        Prior::Gaussian { variance }
                    }
                    PriorConfig::TwoPoint { mass, prob } => Prior::TwoPoint { mass, prob },
                };
                let params = CsParams { prior, sigma2: *sigma2, delta: *delta };
                BuiltSystem::Scalar(Box::new(CsSystem::new(params).map_err(cons)?))
            }
            SystemConfig::Builtin { name } => builtin_system(*name),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_each_system_kind() {
        let texts = [
            r#"{"type":"ldpc","lambda":{"edge":"0.2 x + 0.8 x^2"},"rho":{"edge":[0,0,0,0,0,1]}}"#,
            r#"{"type":"ldgm","lambda":{"edge":"x^5"},"rho":{"node":"2/15 x + 1/15 x^2 + 7/15 x^3 + 1/3 x^4"}}"#,
            r#"{"type":"gldpc","n":31,"t":4}"#,
            r#"{"type":"isi","channel":"dicode","lambda":{"node":"x^3"},"rho":{"node":"x^6"}}"#,
            r#"{"type":"cs","prior":{"two_point":{"mass":1,"prob":0.1}},"sigma2":0.01,"delta":0.3}"#,
            r#"{"type":"builtin","name":"gldpc_31_4"}"#,
        ];
        for t in texts {
            let s: SystemConfig = serde_json::from_str(t).unwrap();
            s.build().unwrap();
        }
    }

    #[test]
    fn rejects_unknown_keys() {
        let bad = [
            r#"{"schema":1,"system":{"type":"gldpc","n":31,"t":4,"x":1}}"#,
            r#"{"schema":1,"extra":0}"#,
            r#"{"schema":1,"command":{"epsilon":0.5}}"#,
            r#"{"schema":1,"system":{"type":"ldpc","lambda":{"edge":"x^2","foo":1},"rho":{"edge":"x^5"}}}"#,
        ];
        for t in bad {
            assert!(matches!(RunConfig::from_json(t), Err(CliError::Config(_))), "{t}");
        }
        assert!(RunConfig::from_json(r#"{"schema":2}"#).is_err());
    }

    #[test]
    fn invalid_parameters_are_config_errors() {
        let bad = [
            r#"{"type":"cs","prior":{"gaussian":{"variance":1}},"sigma2":0,"delta":0.5}"#,
            r#"{"type":"ldpc","lambda":{"edge":"0.5 x"},"rho":{"edge":"x^5"}}"#,
            r#"{"type":"gldpc","n":31,"t":40}"#,
            r#"{"type":"ldpc","lambda":{"edge":"x +"},"rho":{"edge":"x^5"}}"#,
        ];
        for t in bad {
            let s: SystemConfig = serde_json::from_str(t).unwrap();
            assert!(matches!(s.build(), Err(CliError::Config(_))), "{t}");
        }
    }

    #[test]
    fn grid_endpoints_are_exact() {
        let g = GridConfig { start: 0.1, stop: 0.7, points: 7 };
        let v = g.values();
        assert_eq!(v.len(), 7);
        assert_eq!(v[0], 0.1);
        assert_eq!(v[6], 0.7);
    }
}
