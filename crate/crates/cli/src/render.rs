//! Human-readable and JSON renderings of results.

use chainlayer_core::cost::CostBreakdown;
use chainlayer_core::layering::{LayerAssignment, Side, SupplyChainMatrix};
use chainlayer_core::scenario::{ComparisonReport, Decision};
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Copy)]
pub struct Style {
    color: bool,
}

impl Style {
    /// Coloring is on only when `CHAINLAYER_COLOR=1`.
    pub fn from_env() -> Style {
        Style {
            color: std::env::var("CHAINLAYER_COLOR").is_ok_and(|v| v == "1"),
        }
    }

    fn paint(&self, code: &str, text: &str) -> String {
        if self.color {
            format!("\x1b[{code}m{text}\x1b[0m")
        } else {
            text.to_owned()
        }
    }

    pub fn error(&self, text: &str) -> String {
        self.paint("1;31", text)
    }

    pub fn warning(&self, text: &str) -> String {
        self.paint("33", text)
    }

    pub fn decision(&self, decision: Decision) -> String {
        match decision {
            Decision::KeepBaseline => self.paint("36", decision.as_str()),
            Decision::AdoptScenario => self.paint("32", decision.as_str()),
        }
    }
}

pub fn cost_text(b: &CostBreakdown, breakdown: bool) -> String {
    let mut out = String::new();
    if breakdown {
        for (name, value) in b.components() {
            out.push_str(&format!("{name}: {value}\n"));
        }
    }
    out.push_str(&format!("total: {}\n", b.total));
    out
}

pub fn cost_json(b: &CostBreakdown) -> String {
    let mut s = serde_json::to_string_pretty(b).expect("breakdown serializes");
    s.push('\n');
    s
}

/// Aligned matrix with a `S3 S2 S1 | M | D1 D2 D3` style header.
pub fn matrix_text(matrix: &SupplyChainMatrix) -> String {
    // (header, cells) per printed column; None marks a group separator
    let mut cols: Vec<Option<(String, Vec<String>)>> = Vec::new();
    let cells = |ids: &[chainlayer_core::ActorId]| ids.iter().map(|id| id.to_string()).collect::<Vec<_>>();
    let up: Vec<_> = matrix.upstream_columns().collect();
    let down: Vec<_> = matrix.downstream_columns().collect();
    for c in &up {
        cols.push(Some((c.coord.label(), cells(&c.actors))));
    }
    if !up.is_empty() {
        cols.push(None);
    }
    cols.push(Some(("M".to_owned(), vec![matrix.manufacturer.to_string()])));
    if !down.is_empty() {
        cols.push(None);
    }
    for c in &down {
        cols.push(Some((c.coord.label(), cells(&c.actors))));
    }

    let widths: Vec<usize> = cols
        .iter()
        .map(|c| match c {
            Some((h, cells)) => cells.iter().map(String::len).chain([h.len()]).max().unwrap_or(0),
            None => 1,
        })
        .collect();
    let height = matrix.height().max(1);
    let mut out = String::new();
    for row in 0..=height {
        let mut parts = Vec::with_capacity(cols.len());
        for (c, w) in cols.iter().zip(&widths) {
            let text = match c {
                None => "|",
                Some((h, _)) if row == 0 => h.as_str(),
                Some((_, cells)) => cells.get(row - 1).map(String::as_str).unwrap_or(""),
            };
            parts.push(format!("{text:<w$}"));
        }
        out.push_str(parts.join(" ").trim_end());
        out.push('\n');
    }
    out
}

pub fn layers_json(matrix: &SupplyChainMatrix, assignment: &LayerAssignment) -> String {
    let side = |s: Side| match s {
        Side::Upstream => "upstream",
        Side::Downstream => "downstream",
    };
    let columns: Vec<Value> = matrix
        .columns
        .iter()
        .map(|c| {
            json!({
                "label": c.coord.label(),
                "side": side(c.coord.side),
                "depth": c.coord.depth,
                "actors": c.actors,
            })
        })
        .collect();
    let mut coords = Map::new();
    for (id, c) in assignment.coords() {
        coords.insert(
            id.to_string(),
            json!({ "layer": c.label(), "side": side(c.side), "depth": c.depth }),
        );
    }
    let value = json!({
        "manufacturer": matrix.manufacturer,
        "layer_count": matrix.columns.len(),
        "columns": columns,
        "assignment": coords,
    });
    let mut s = serde_json::to_string_pretty(&value).expect("json value serializes");
    s.push('\n');
    s
}

pub fn comparison_text(r: &ComparisonReport, style: Style) -> String {
    format!(
        "baseline: {}\nscenario: {}\nCSt1: {}\nCSt2: {}\ndelta: {}\ndecision: {}\n",
        r.baseline_name,
        r.scenario_name,
        r.cost_st1.total,
        r.cost_st2.total,
        r.delta_total,
        style.decision(r.decision)
    )
}

pub fn comparison_json(r: &ComparisonReport) -> String {
    let mut s = serde_json::to_string_pretty(r).expect("report serializes");
    s.push('\n');
    s
}
