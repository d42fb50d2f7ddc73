use std::fs;
use std::path::Path;

use measure_core::{MeasureDoc, SpaceDoc};
use property_engine::{
    check_all, check_axioms, infer_properties, Axiom, CheckConfig, EngineError,
};
use serde_json::{json, Value};
use transfun_core::{parse_spec_str, spec_to_string, SpecDocError, TransfunError, Transfunction};

#[derive(Debug, Clone)]
pub enum AxiomSelector {
    All,
    One(Axiom),
}

/// Error plus the process exit code: 2 for parse errors, 3 for invalid specs
/// and space mismatches, 4 for internal inconsistencies.
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    fn parse(message: impl Into<String>) -> CliError {
        CliError {
            code: 2,
            message: message.into(),
        }
    }

    fn invalid(message: impl Into<String>) -> CliError {
        CliError {
            code: 3,
            message: message.into(),
        }
    }
}

impl From<SpecDocError> for CliError {
    fn from(error: SpecDocError) -> CliError {
        match error {
            SpecDocError::Schema { .. } | SpecDocError::Json(_) => {
                CliError::parse(error.to_string())
            }
            SpecDocError::Invalid { .. } => CliError::invalid(error.to_string()),
        }
    }
}

impl From<TransfunError> for CliError {
    fn from(error: TransfunError) -> CliError {
        CliError::invalid(error.to_string())
    }
}

impl From<EngineError> for CliError {
    fn from(error: EngineError) -> CliError {
        match &error {
            EngineError::InternalInconsistency { .. } => CliError {
                code: 4,
                message: error.to_string(),
            },
            _ => CliError::invalid(error.to_string()),
        }
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::parse(format!("cannot read '{}': {e}", path.display())))
}

fn load_spec(path: &Path) -> Result<Transfunction, CliError> {
    Ok(parse_spec_str(&read_file(path)?)?)
}

fn write_output(output: Option<&Path>, text: &str) -> Result<(), CliError> {
    match output {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::parse(format!("cannot write '{}': {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("plain JSON");
    text.push('\n');
    text
}

pub fn cmd_apply(
    spec_path: &Path,
    measure_path: &Path,
    output: Option<&Path>,
) -> Result<(), CliError> {
    let spec = load_spec(spec_path)?;
    let doc: MeasureDoc = serde_json::from_str(&read_file(measure_path)?)
        .map_err(|e| CliError::parse(format!("measure document: {e}")))?;
    let mu = doc.bind(spec.domain()).map_err(|e| {
        CliError::invalid(format!("measure does not fit the spec domain: {e}"))
    })?;
    let out = spec.apply(&mu)?;
    let out_doc = MeasureDoc::from_measure(&out);
    write_output(
        output,
        &pretty(&serde_json::to_value(&out_doc).expect("measure doc")),
    )
}

pub fn cmd_check(
    spec_path: &Path,
    trials: u32,
    tolerance: f64,
    seed: u64,
    selector: AxiomSelector,
    output: Option<&Path>,
) -> Result<(), CliError> {
    let spec = load_spec(spec_path)?;
    let cfg = CheckConfig {
        trials,
        tolerance,
        seed,
        ..CheckConfig::default()
    };
    let report = match selector {
        AxiomSelector::All => check_all(&spec, &cfg)?,
        AxiomSelector::One(axiom) => check_axioms(&spec, &[axiom], &cfg)?,
    };
    write_output(output, &report.to_json_string())
}

pub fn cmd_infer(spec_path: &Path, output: Option<&Path>) -> Result<(), CliError> {
    let spec = load_spec(spec_path)?;
    let report = infer_properties(&spec)?;
    write_output(output, &report.to_json_string())
}

pub fn cmd_compose(
    outer_path: &Path,
    inner_path: &Path,
    output: Option<&Path>,
) -> Result<(), CliError> {
    let outer = load_spec(outer_path)?;
    let inner = load_spec(inner_path)?;
    let composed = Transfunction::compose(outer, inner)?;
    write_output(output, &spec_to_string(&composed))
}

pub fn cmd_info(path: &Path) -> Result<(), CliError> {
    let text = read_file(path)?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| CliError::parse(format!("document: {e}")))?;
    let Some(object) = value.as_object() else {
        return Err(CliError::parse("document must be a JSON object"));
    };

    let summary = if object.contains_key("kind") {
        let spec = parse_spec_str(&text)?;
        json!({
            "type": "spec",
            "kind": spec.kind(),
            "node_count": spec.node_count(),
            "linear": spec.is_linear(),
            "domain": {"id": spec.domain().id(), "atoms": spec.domain().atom_count()},
            "codomain": {"id": spec.codomain().id(), "atoms": spec.codomain().atom_count()},
        })
    } else if object.contains_key("masses") {
        let doc: MeasureDoc = serde_json::from_str(&text)
            .map_err(|e| CliError::parse(format!("measure document: {e}")))?;
        for (label, &mass) in &doc.masses {
            if !mass.is_finite() || mass < 0.0 {
                return Err(CliError::invalid(format!(
                    "measure document has invalid mass {mass} for atom '{label}'"
                )));
            }
        }
        let total: f64 = doc.masses.values().sum();
        let support = doc.masses.values().filter(|&&m| m > 0.0).count();
        json!({
            "type": "measure",
            "space": doc.space,
            "support_size": support,
            "total_mass": total,
        })
    } else if object.contains_key("atoms") {
        let doc: SpaceDoc = serde_json::from_str(&text)
            .map_err(|e| CliError::parse(format!("space document: {e}")))?;
        doc.to_space()
            .map_err(|e| CliError::invalid(e.to_string()))?;
        json!({
            "type": "space",
            "id": doc.id,
            "atom_count": doc.atoms.len(),
        })
    } else {
        return Err(CliError::parse(
            "unrecognized document: expected a spec, measure, or space",
        ));
    };
    write_output(None, &pretty(&summary))
}
