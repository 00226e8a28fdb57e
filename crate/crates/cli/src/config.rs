//! JSON analysis configuration and command-line overrides.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use whstab_core::dynamics::StateSpaceDoc;
use whstab_core::{
    systems, ActuatorMode, BoundParams, Constraint, ConstraintSet, EstimatorRegistry, StateSpace,
    Strategy,
};

/// On-disk shape. Every field except the models has a default so a config
/// can name a built-in system and a constraint list only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub system: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plant: Option<StateSpaceDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub controller: Option<StateSpaceDoc>,
    #[serde(default = "default_strategy")]
    pub strategy: Strategy,
    #[serde(default = "default_actuator")]
    pub actuator: ActuatorMode,
    #[serde(default)]
    pub constraints: Vec<Constraint>,
    #[serde(default)]
    pub jsr: JsrDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JsrDoc {
    #[serde(default = "default_method")]
    pub method: String,
    #[serde(default = "default_delta")]
    pub delta: f64,
    #[serde(default = "default_max_depth")]
    pub max_depth: usize,
    #[serde(default = "default_budget")]
    pub budget: u64,
    #[serde(default = "default_cycle_len")]
    pub cycle_len: usize,
}

fn default_strategy() -> Strategy {
    Strategy::Kill
}
fn default_actuator() -> ActuatorMode {
    ActuatorMode::Zero
}
fn default_method() -> String {
    EstimatorRegistry::DEFAULT_METHOD.to_string()
}
fn default_delta() -> f64 {
    BoundParams::default().delta
}
fn default_max_depth() -> usize {
    BoundParams::default().max_depth
}
fn default_budget() -> u64 {
    BoundParams::default().budget
}
fn default_cycle_len() -> usize {
    BoundParams::default().cycle_len
}

impl Default for JsrDoc {
    fn default() -> Self {
        JsrDoc::from_params(EstimatorRegistry::DEFAULT_METHOD, &BoundParams::default())
    }
}

impl JsrDoc {
    fn from_params(method: &str, p: &BoundParams) -> Self {
        JsrDoc {
            method: method.to_string(),
            delta: p.delta,
            max_depth: p.max_depth,
            budget: p.budget,
            cycle_len: p.cycle_len,
        }
    }

    fn params(&self) -> BoundParams {
        BoundParams {
            delta: self.delta,
            max_depth: self.max_depth,
            budget: self.budget,
            cycle_len: self.cycle_len,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Dot,
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Dot => "dot",
        })
    }
}

/// Validated configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisConfig {
    pub plant: StateSpace,
    pub controller: StateSpace,
    pub strategy: Strategy,
    pub actuator: ActuatorMode,
    pub constraints: Vec<Constraint>,
    pub method: String,
    pub params: BoundParams,
    pub format: Option<Format>,
}

/// A configuration problem, reported with exit status 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Values given on the command line. They win over the file.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub system: Option<String>,
    pub strategy: Option<Strategy>,
    pub actuator: Option<ActuatorMode>,
    pub constraints: Vec<Constraint>,
    pub method: Option<String>,
    pub delta: Option<f64>,
    pub depth: Option<usize>,
    pub budget: Option<u64>,
}

pub fn read_doc(path: &Path) -> Result<ConfigDoc, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError(format!("{}: {e}", path.display())))?;
    parse_doc(&text).map_err(|e| ConfigError(format!("{}:{e}", path.display())))
}

/// serde_json errors carry `line N column M`; reshape them as `N:M: msg`.
pub fn parse_doc(text: &str) -> Result<ConfigDoc, String> {
    serde_json::from_str(text).map_err(|e| {
        let msg = e.to_string();
        let msg = msg.split(" at line ").next().unwrap_or(&msg).to_string();
        format!("{}:{}: {msg}", e.line(), e.column())
    })
}

impl AnalysisConfig {
    pub fn resolve(doc: Option<ConfigDoc>, o: &Overrides) -> Result<Self, ConfigError> {
        let doc = doc.unwrap_or(ConfigDoc {
            system: None,
            plant: None,
            controller: None,
            strategy: default_strategy(),
            actuator: default_actuator(),
            constraints: Vec::new(),
            jsr: JsrDoc::default(),
            format: None,
        });
        let system = o.system.as_ref().or(doc.system.as_ref());
        let (plant, controller) = match (system, &doc.plant, &doc.controller) {
            (Some(name), _, _) => systems::by_name(name).ok_or_else(|| {
                ConfigError(format!(
                    "unknown system `{name}` (built in: {})",
                    systems::NAMES.join(", ")
                ))
            })?,
            (None, Some(p), Some(c)) => (model("plant", p)?, model("controller", c)?),
            (None, _, _) => {
                return Err(ConfigError(
                    "no system: give --system or both `plant` and `controller`".into(),
                ))
            }
        };
        let constraints = if o.constraints.is_empty() {
            doc.constraints
        } else {
            o.constraints.clone()
        };
        if constraints.is_empty() {
            return Err(ConfigError(
                "no constraints: give --constraint or `constraints`".into(),
            ));
        }
        let mut params = doc.jsr.params();
        params.delta = o.delta.unwrap_or(params.delta);
        params.max_depth = o.depth.unwrap_or(params.max_depth);
        params.budget = o.budget.unwrap_or(params.budget);
        params
            .validate()
            .map_err(|e| ConfigError(format!("jsr: {e}")))?;
        Ok(AnalysisConfig {
            plant,
            controller,
            strategy: o.strategy.unwrap_or(doc.strategy),
            actuator: o.actuator.unwrap_or(doc.actuator),
            constraints,
            method: o.method.clone().unwrap_or(doc.jsr.method),
            params,
            format: doc.format,
        })
    }

    pub fn constraint_set(&self) -> whstab_core::Result<ConstraintSet> {
        ConstraintSet::new(self.constraints.clone(), self.strategy)
    }

    /// Fully explicit document; models are always written out.
    pub fn to_doc(&self) -> ConfigDoc {
        ConfigDoc {
            system: None,
            plant: Some(StateSpaceDoc::from(&self.plant)),
            controller: Some(StateSpaceDoc::from(&self.controller)),
            strategy: self.strategy,
            actuator: self.actuator,
            constraints: self.constraints.clone(),
            jsr: JsrDoc::from_params(&self.method, &self.params),
            format: self.format,
        }
    }
}

fn model(name: &str, doc: &StateSpaceDoc) -> Result<StateSpace, ConfigError> {
    StateSpace::try_from(doc).map_err(|e| ConfigError(format!("{name}: {e}")))
}
