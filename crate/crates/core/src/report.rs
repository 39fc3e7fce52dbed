//! The full analysis pipeline and its JSON report.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::decomposition::{decide_convergence_with, decompose, Convergence, Decomposition, Verdict, WitnessOrbit};
use crate::error::Result;
use crate::graph::{build_graph, communication_classes, AccessGraph, ClassInfo};
use crate::operator::OperatorHandle;
use crate::orbit::{OracleReport, OrbitParams};
use crate::reachability::StatePartition;
use crate::state::{StateSet, StateSpace};

/// Everything the pipeline computes for one operator.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub operator: OperatorHandle,
    pub graph: AccessGraph,
    pub classes: Vec<ClassInfo>,
    pub decomposition: Decomposition,
    pub verdict: Verdict,
}

impl Analysis {
    pub fn partition(&self) -> &StatePartition {
        &self.decomposition.levels[0].partition
    }

    pub fn report(&self, source: &str, evidence: Option<OracleReport>) -> AnalysisReport {
        let st = self.operator.states();
        let labels = |s: &StateSet| st.labels_of(s);
        let p = self.partition();
        let v = &self.verdict;
        AnalysisReport {
            tool: ToolInfo { name: env!("CARGO_PKG_NAME").into(), version: env!("CARGO_PKG_VERSION").into() },
            model: ModelSummary {
                source: source.to_string(),
                states: st.labels().to_vec(),
                finitely_generated: self.operator.is_finitely_generated(),
            },
            graph: GraphReport {
                edges: self
                    .graph
                    .edges()
                    .into_iter()
                    .map(|(x, y)| (st.label(x).to_string(), st.label(y).to_string()))
                    .collect(),
                classes: self.classes.iter().map(|c| ClassReport::new(c, st)).collect(),
            },
            partition: PartitionReport::new(p, st),
            decomposition: DecompositionReport {
                depth: self.decomposition.depth(),
                levels: self
                    .decomposition
                    .levels
                    .iter()
                    .map(|l| LevelReport {
                        level: l.index,
                        domain: labels(&l.domain),
                        classes: l.partition.classes.iter().map(|c| ClassReport::new(c, st)).collect(),
                        partition: PartitionReport::new(&l.partition, st),
                    })
                    .collect(),
            },
            verdict: VerdictReport {
                convergent: v.convergent,
                ergodic: v.ergodic,
                convergent_on_xm: v.convergent_on_xm,
                basis: BasisReport {
                    convergent: v.convergent_basis.into(),
                    ergodic: v.ergodic_basis.into(),
                    convergent_on_xm: v.convergent_on_xm_basis.into(),
                },
                witnesses: v
                    .witnesses
                    .iter()
                    .map(|w| WitnessReport { level: w.level, class: labels(&w.class), cyclicity: w.cyclicity.period() })
                    .collect(),
                witness_orbit: v.witness_orbit.clone(),
                finitely_generated: v.finitely_generated,
                notes: v.notes.clone(),
            },
            orbit_evidence: evidence,
        }
    }
}

/// Graph, classes, partition, decomposition and verdicts, in that order.
pub fn analyze(op: &OperatorHandle, params: &OrbitParams) -> Result<Analysis> {
    let graph = build_graph(op.as_ref())?;
    let classes = communication_classes(&graph);
    let decomposition = decompose(op)?;
    let verdict = decide_convergence_with(op, &decomposition, params);
    Ok(Analysis { operator: op.clone(), graph, classes, decomposition, verdict })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisReport {
    pub tool: ToolInfo,
    pub model: ModelSummary,
    pub graph: GraphReport,
    pub partition: PartitionReport,
    pub decomposition: DecompositionReport,
    pub verdict: VerdictReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orbit_evidence: Option<OracleReport>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToolInfo {
    pub name: String,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelSummary {
    pub source: String,
    pub states: Vec<String>,
    pub finitely_generated: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphReport {
    pub edges: Vec<(String, String)>,
    pub classes: Vec<ClassReport>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassReport {
    pub members: Vec<String>,
    pub maximal: bool,
    pub closed: bool,
    /// `null` for a singleton without a self-loop.
    pub cyclicity: Option<usize>,
    pub regular: bool,
}

impl ClassReport {
    fn new(c: &ClassInfo, st: &StateSpace) -> Self {
        Self {
            members: st.labels_of(&c.members),
            maximal: c.is_maximal,
            closed: c.is_closed,
            cyclicity: c.cyclicity.period(),
            regular: c.is_regular(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionReport {
    pub maximal_classes: Vec<Vec<String>>,
    pub x_m: Vec<String>,
    pub x_t_abs: Vec<String>,
    pub x_t_non: Vec<String>,
    pub reach_sequence: Vec<Vec<String>>,
}

impl PartitionReport {
    fn new(p: &StatePartition, st: &StateSpace) -> Self {
        Self {
            maximal_classes: p.maximal_classes.iter().map(|c| st.labels_of(c)).collect(),
            x_m: st.labels_of(&p.x_m),
            x_t_abs: st.labels_of(&p.x_t_abs),
            x_t_non: st.labels_of(&p.x_t_non),
            reach_sequence: p.reach_sequence.iter().map(|c| st.labels_of(c)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub depth: usize,
    pub levels: Vec<LevelReport>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelReport {
    pub level: usize,
    pub domain: Vec<String>,
    pub classes: Vec<ClassReport>,
    pub partition: PartitionReport,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisReport {
    pub convergent: String,
    pub ergodic: String,
    pub convergent_on_xm: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub level: usize,
    pub class: Vec<String>,
    pub cyclicity: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictReport {
    pub convergent: Convergence,
    pub ergodic: bool,
    pub convergent_on_xm: bool,
    pub basis: BasisReport,
    pub witnesses: Vec<WitnessReport>,
    #[serde(default)]
    pub witness_orbit: Option<WitnessOrbit>,
    pub finitely_generated: bool,
    pub notes: Vec<String>,
}

fn braces(s: &[String]) -> String {
    format!("{{{}}}", s.join(","))
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn exit_code(&self) -> i32 {
        self.verdict.convergent.exit_code()
    }

    /// Plain-text summary for terminals.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "model: {} ({} states)", self.model.source, self.model.states.len());
        let _ = writeln!(out, "communication classes:");
        for c in &self.graph.classes {
            let period = c.cyclicity.map_or("acyclic".to_string(), |p| format!("period {p}"));
            let kind = if c.maximal { "maximal" } else { "transient" };
            let _ = writeln!(out, "  {} {kind}, {period}", braces(&c.members));
        }
        for l in &self.decomposition.levels {
            let p = &l.partition;
            let maximal: Vec<String> = p.maximal_classes.iter().map(|c| braces(c)).collect();
            let _ = writeln!(
                out,
                "level {}: domain {} maximal {} lower-reached {} unreached {}",
                l.level,
                braces(&l.domain),
                maximal.join(" "),
                braces(&p.x_t_abs),
                braces(&p.x_t_non)
            );
        }
        let v = &self.verdict;
        let _ = writeln!(out, "convergent: {} ({})", v.convergent.as_str(), v.basis.convergent);
        let _ = writeln!(out, "ergodic: {}", if v.ergodic { "yes" } else { "no" });
        let _ = writeln!(out, "convergent on maximal states: {}", if v.convergent_on_xm { "yes" } else { "no" });
        for w in &v.witnesses {
            let period = w.cyclicity.map_or("acyclic".to_string(), |p| format!("period {p}"));
            let _ = writeln!(out, "  witness: level {} class {} {period}", w.level, braces(&w.class));
        }
        if let Some(w) = &v.witness_orbit {
            let _ = writeln!(out, "  cycling orbit: {} has period {}", w.function, w.period);
        }
        for n in &v.notes {
            let _ = writeln!(out, "  note: {n}");
        }
        if let Some(e) = &self.orbit_evidence {
            let settled = e.runs.iter().filter(|r| r.period == Some(1)).count();
            let _ = writeln!(out, "orbit suite: {}/{} orbits settled, {} discrepancies", settled, e.runs.len(), e.discrepancies.len());
            for n in &e.notes {
                let _ = writeln!(out, "  note: {n}");
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::{builtin, running_example};
    use std::sync::Arc;

    #[test]
    fn report_round_trips() {
        let op: OperatorHandle = Arc::new(running_example());
        let a = analyze(&op, &OrbitParams::default()).unwrap();
        let r = a.report("builtin:running-example", None);
        let back: AnalysisReport = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert_eq!(r.exit_code(), 0);
        assert_eq!(r.partition.x_t_non, ["d", "e"]);
        assert!(r.render_text().contains("convergent: yes"));
    }

    #[test]
    fn counterexample_exit_code() {
        let op = builtin("counterexample").unwrap();
        let a = analyze(&op, &OrbitParams::default()).unwrap();
        assert_eq!(a.report("builtin:counterexample", None).exit_code(), 3);
    }
}
