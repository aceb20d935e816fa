use std::fs;
use std::path::Path;

use chainlayer_core::agents::{export_trace, AgentError, AgentSystem};
use chainlayer_core::cost::objective;
use chainlayer_core::files::{load_chain, load_scenario, ChainFile, FileError};
use chainlayer_core::layering::{assign_layers, LayerAssignment, LayeringError};
use chainlayer_core::scenario::{compare as compare_states, Decision, Scenario, ScenarioError};
use chainlayer_core::SupplyChainGraph;

use crate::render::{self, Style};

pub const EXIT_PARSE: u8 = 1;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_SELF_CHECK: u8 = 3;

/// Successful outcomes. Dimensioning gets its own code per decision.
pub enum Status {
    Ok,
    Decided(Decision),
}

impl Status {
    pub fn code(&self) -> u8 {
        match self {
            Status::Ok | Status::Decided(Decision::KeepBaseline) => 0,
            Status::Decided(Decision::AdoptScenario) => 10,
        }
    }
}

pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    fn new(code: u8, message: impl Into<String>) -> CliError {
        CliError { code, message: message.into() }
    }
}

impl From<FileError> for CliError {
    fn from(e: FileError) -> CliError {
        let code = match e {
            FileError::Parse { .. } => EXIT_PARSE,
            FileError::Invalid(_) => EXIT_INVALID,
        };
        CliError::new(code, e.to_string())
    }
}

impl From<LayeringError> for CliError {
    fn from(e: LayeringError) -> CliError {
        CliError::new(EXIT_INVALID, e.to_string())
    }
}

impl From<ScenarioError> for CliError {
    fn from(e: ScenarioError) -> CliError {
        CliError::new(EXIT_INVALID, e.to_string())
    }
}

impl From<AgentError> for CliError {
    fn from(e: AgentError) -> CliError {
        let code = match e {
            AgentError::Layering(_) | AgentError::Scenario(_) => EXIT_INVALID,
            _ => EXIT_SELF_CHECK,
        };
        CliError::new(code, e.to_string())
    }
}

type CmdResult = Result<Status, CliError>;

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::new(EXIT_PARSE, format!("cannot read {}: {e}", path.display())))
}

fn prefixed(path: &Path, e: impl Into<CliError>) -> CliError {
    let mut e = e.into();
    e.message = format!("{}: {}", path.display(), e.message);
    e
}

fn load_layered(path: &Path) -> Result<(SupplyChainGraph, LayerAssignment), CliError> {
    let graph = load_chain(&read(path)?).map_err(|e| prefixed(path, e))?;
    let assignment = assign_layers(&graph).map_err(|e| prefixed(path, e))?;
    Ok((graph, assignment))
}

pub fn validate(path: &Path, verbose: bool, style: Style) -> CmdResult {
    let doc = ChainFile::parse(&read(path)?).map_err(|e| prefixed(path, e))?;
    let findings = doc.check();
    let mut failed = false;
    for f in &findings {
        if f.violation.is_error() {
            failed = true;
            println!("{}: {f}", style.error("error"));
        } else {
            println!("{}: {f}", style.warning("warning"));
        }
    }
    if failed {
        return Err(CliError::new(EXIT_INVALID, format!("{} is not a valid chain", path.display())));
    }
    if verbose {
        println!(
            "ok: {} actors, {} edges",
            doc.actors.len() + 1,
            doc.edges.len()
        );
    }
    Ok(Status::Ok)
}

pub fn layers(path: &Path, json: bool) -> CmdResult {
    let (_, assignment) = load_layered(path)?;
    let matrix = assignment.build_matrix();
    if json {
        print!("{}", render::layers_json(&matrix, &assignment));
    } else {
        print!("{}", render::matrix_text(&matrix));
    }
    Ok(Status::Ok)
}

fn print_cost(b: &chainlayer_core::CostBreakdown, breakdown: bool, json: bool) {
    if json {
        print!("{}", render::cost_json(b));
    } else {
        print!("{}", render::cost_text(b, breakdown));
    }
}

pub fn cost(path: &Path, breakdown: bool, json: bool) -> CmdResult {
    let (graph, assignment) = load_layered(path)?;
    print_cost(&objective(&graph, &assignment), breakdown, json);
    Ok(Status::Ok)
}

pub fn simulate(path: &Path, trace: Option<&Path>, breakdown: bool, json: bool) -> CmdResult {
    let (graph, assignment) = load_layered(path)?;
    let mut system = AgentSystem::instantiate(&graph, &assignment)?;
    let collection = system.run_cost_collection()?;
    let central = objective(&graph, &assignment);
    if collection.breakdown != central {
        return Err(CliError::new(
            EXIT_SELF_CHECK,
            format!(
                "agent total {} disagrees with the centralized total {}",
                collection.breakdown.total, central.total
            ),
        ));
    }
    if let Some(trace_path) = trace {
        fs::write(trace_path, export_trace(system.trace()))
            .map_err(|e| CliError::new(EXIT_PARSE, format!("cannot write {}: {e}", trace_path.display())))?;
    }
    print_cost(&collection.breakdown, breakdown, json);
    Ok(Status::Ok)
}

pub fn compare(chain: &Path, scenario_path: &Path, json: bool, via_agents: bool, style: Style) -> CmdResult {
    let graph = load_chain(&read(chain)?).map_err(|e| prefixed(chain, e))?;
    let scenario: Scenario = load_scenario(&read(scenario_path)?).map_err(|e| prefixed(scenario_path, e))?;

    let mut report = compare_states(&graph, &scenario)?;
    if via_agents {
        let mut system = AgentSystem::from_graph(&graph)?;
        let outcome = system.run_dimensioning(&scenario)?;
        if outcome.report.cost_st1 != report.cost_st1
            || outcome.report.cost_st2 != report.cost_st2
            || outcome.decision != report.decision
        {
            return Err(CliError::new(
                EXIT_SELF_CHECK,
                format!(
                    "agent decision {} ({} vs {}) disagrees with the centralized decision {}",
                    outcome.decision, outcome.report.cost_st1.total, outcome.report.cost_st2.total, report.decision
                ),
            ));
        }
        report = outcome.report;
    }
    if let Some(stem) = chain.file_stem() {
        report.baseline_name = stem.to_string_lossy().into_owned();
    }
    if json {
        print!("{}", render::comparison_json(&report));
    } else {
        print!("{}", render::comparison_text(&report, style));
    }
    Ok(Status::Decided(report.decision))
}
