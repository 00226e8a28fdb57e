use std::fmt::Write as _;
use std::path::Path;

use nalgebra::DVector;
use whstab_core::automaton::{export_dot, GraphDocument};
use whstab_core::{
    analyze_with, build_graph, closed_loop_set, dominant_set, dominates, minimize,
    simulate as run_simulation, Constraint, ConstraintSet, Error, EstimatorRegistry, OutcomeString,
    StabilityReport, Strategy, Verdict,
};

use crate::config::{AnalysisConfig, ConfigError, Format};
use crate::status;

/// Error message plus the exit status it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: status::USAGE,
            message: message.into(),
        }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::usage(e.0)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::EmptyLanguage => status::EMPTY_LANGUAGE,
            Error::StrategyMismatch { .. }
            | Error::InvalidConstraint(_)
            | Error::InvalidParameter(_)
            | Error::UnknownEstimator { .. }
            | Error::Parse(_)
            | Error::DimensionMismatch(_) => status::USAGE,
            Error::MalformedSequence(_) => status::INFEASIBLE,
            _ => status::FAILURE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

pub fn emit(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure {
            code: status::FAILURE,
            message: format!("{}: {e}", p.display()),
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn fsm(
    cfg: &AnalysisConfig,
    raw: bool,
    format: Option<Format>,
    output: Option<&Path>,
) -> Result<u8, Failure> {
    let cs = dominant_set(&cfg.constraint_set()?)?;
    let built = build_graph(&cs)?;
    let g = if raw { built } else { minimize(&built) };
    let text = match format.unwrap_or(Format::Dot) {
        Format::Dot => export_dot(&g),
        Format::Json => {
            let doc = GraphDocument::from(&g);
            format!(
                "{}\n",
                serde_json::to_string_pretty(&doc).expect("graph serializes")
            )
        }
        Format::Csv => return Err(Failure::usage("fsm writes dot or json")),
    };
    emit(output, &text)?;
    Ok(status::OK)
}

pub fn stability(
    cfg: &AnalysisConfig,
    each: bool,
    format: Option<Format>,
    output: Option<&Path>,
) -> Result<u8, Failure> {
    let registry = EstimatorRegistry::default();
    let estimator = registry.get(&cfg.method)?;
    let sets: Vec<ConstraintSet> = if each {
        cfg.constraints
            .iter()
            .map(|c| ConstraintSet::single(*c, cfg.strategy))
            .collect()
    } else {
        vec![cfg.constraint_set()?]
    };
    let mut reports = Vec::with_capacity(sets.len());
    for cs in &sets {
        let report = analyze_with(
            estimator,
            &cfg.plant,
            &cfg.controller,
            cfg.strategy,
            cfg.actuator,
            cs,
            &cfg.params,
        )?;
        eprintln!("{cs}: {}", report.summary());
        reports.push(report);
    }
    let text = match format.unwrap_or(Format::Json) {
        Format::Json if each => {
            serde_json::to_string_pretty(&reports).expect("reports serialize") + "\n"
        }
        Format::Json => {
            serde_json::to_string_pretty(&reports[0]).expect("report serializes") + "\n"
        }
        Format::Csv => csv_rows(&reports),
        Format::Dot => return Err(Failure::usage("stability writes json or csv")),
    };
    emit(output, &text)?;
    Ok(exit_status(reports.iter().map(|r| r.verdict)))
}

/// Unstable beats inconclusive beats stable.
fn exit_status(verdicts: impl Iterator<Item = Verdict>) -> u8 {
    let mut code = status::OK;
    for v in verdicts {
        match v {
            Verdict::Unstable => return status::UNSTABLE,
            Verdict::Inconclusive => code = status::INCONCLUSIVE,
            Verdict::Stable => {}
        }
    }
    code
}

fn csv_rows(reports: &[StabilityReport]) -> String {
    let mut out = String::from("m,k,strategy,mode,lb,ub,verdict,depth,walltime_ms\n");
    for r in reports {
        let (m, k) = match r.constraints.as_slice() {
            [c] => (c.count().to_string(), c.window().to_string()),
            _ => (String::new(), String::new()),
        };
        let ub = if r.bounds.ub.is_finite() {
            r.bounds.ub.to_string()
        } else {
            "inf".into()
        };
        let _ = writeln!(
            out,
            "{m},{k},{},{},{},{ub},{},{},{}",
            r.strategy, r.actuator, r.bounds.lb, r.verdict, r.bounds.depth, r.walltime_ms
        );
    }
    out
}

pub fn dominance(
    left: Vec<Constraint>,
    left_strategy: Strategy,
    right: Vec<Constraint>,
    right_strategy: Strategy,
    output: Option<&Path>,
) -> Result<u8, Failure> {
    let l = ConstraintSet::new(left, left_strategy)?;
    let r = ConstraintSet::new(right, right_strategy)?;
    let relation = dominates(&l, &r)?;
    emit(output, &format!("{relation}\n"))?;
    Ok(status::OK)
}

pub fn simulate(
    cfg: &AnalysisConfig,
    sequence: &str,
    x0: &[f64],
    steps: Option<usize>,
    unchecked: bool,
    output: Option<&Path>,
) -> Result<u8, Failure> {
    let base: OutcomeString = sequence
        .parse()
        .map_err(|e: Error| Failure::usage(e.to_string()))?;
    let seq = match steps {
        None => base,
        Some(0) => OutcomeString::default(),
        Some(_) if base.is_empty() => {
            return Err(Failure::usage("--steps needs a non-empty --sequence"))
        }
        Some(n) => OutcomeString::new(base.symbols().iter().copied().cycle().take(n).collect()),
    };
    if !unchecked {
        let g = minimize(&build_graph(&dominant_set(&cfg.constraint_set()?)?)?);
        let symbols = seq.symbols();
        if let Some(bad) =
            (1..=symbols.len()).find(|&i| g.walk_from(g.initial(), &symbols[..i]).is_none())
        {
            return Err(Failure {
                code: status::INFEASIBLE,
                message: format!(
                    "sequence leaves the constraint graph at step {bad} (`{}`)",
                    OutcomeString::new(symbols[..bad].to_vec())
                ),
            });
        }
    }
    let cl = closed_loop_set(&cfg.plant, &cfg.controller, cfg.strategy, cfg.actuator)?;
    let d = cl.dim();
    let n = cfg.plant.states();
    let start = match x0.len() {
        0 => DVector::from_fn(d, |i, _| if i < n { 1.0 } else { 0.0 }),
        len if len == d => DVector::from_column_slice(x0),
        len if len == n => DVector::from_fn(d, |i, _| if i < n { x0[i] } else { 0.0 }),
        len => {
            return Err(Failure::usage(format!(
                "--x0 has {len} entries; give {n} (plant) or {d} (closed loop)"
            )))
        }
    };
    let trajectory = run_simulation(&cl, &seq, &start)?;
    let mut out = String::from("t,outcome");
    for i in 0..d {
        let _ = write!(out, ",x{i}");
    }
    out.push('\n');
    for (t, (x, o)) in trajectory.iter().skip(1).zip(seq.symbols()).enumerate() {
        let _ = write!(out, "{},{o}", t + 1);
        for v in x.iter() {
            let _ = write!(out, ",{v}");
        }
        out.push('\n');
    }
    emit(output, &out)?;
    Ok(status::OK)
}

pub fn methods() -> Result<u8, Failure> {
    let registry = EstimatorRegistry::default();
    let mut out = String::new();
    for e in registry.iter() {
        let default = if e.name() == EstimatorRegistry::DEFAULT_METHOD {
            " (default)"
        } else {
            ""
        };
        let _ = writeln!(out, "{}{default}: {}", e.name(), e.description());
    }
    emit(None, &out)?;
    Ok(status::OK)
}
