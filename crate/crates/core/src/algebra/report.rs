use serde_json::{json, Value};

use crate::json::Sig17;

#[derive(Clone, Debug, PartialEq)]
pub struct RelationResult {
    pub relation_id: String,
    pub residual: f64,
    pub passed: bool,
    /// Informational entries are reported but never fail a report.
    pub gating: bool,
}

impl RelationResult {
    pub fn new(relation_id: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        RelationResult {
            relation_id: relation_id.into(),
            residual,
            passed: residual.is_finite() && residual <= tolerance,
            gating: true,
        }
    }

    pub fn informational(mut self) -> Self {
        self.gating = false;
        self
    }
}

/// Per-relation residuals for one generator set.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraReport {
    pub subject: String,
    pub cutoffs: Option<(usize, usize)>,
    pub j: Option<usize>,
    pub margin: Option<usize>,
    /// Zero for exact arithmetic.
    pub tolerance: f64,
    pub relations: Vec<RelationResult>,
    pub notes: Vec<String>,
}

impl AlgebraReport {
    pub fn new(subject: impl Into<String>, tolerance: f64) -> Self {
        AlgebraReport {
            subject: subject.into(),
            cutoffs: None,
            j: None,
            margin: None,
            tolerance,
            relations: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.relations.iter().all(|r| r.passed || !r.gating)
    }

    pub fn failures(&self) -> impl Iterator<Item = &RelationResult> {
        self.relations.iter().filter(|r| r.gating && !r.passed)
    }

    /// Gating relation with the largest residual.
    pub fn worst(&self) -> Option<&RelationResult> {
        self.relations
            .iter()
            .filter(|r| r.gating)
            .max_by(|a, b| a.residual.total_cmp(&b.residual))
    }

    pub fn max_residual(&self) -> f64 {
        self.worst().map_or(0.0, |r| r.residual)
    }

    pub fn find(&self, relation_id: &str) -> Option<&RelationResult> {
        self.relations.iter().find(|r| r.relation_id == relation_id)
    }

    pub fn to_json(&self) -> Value {
        let cutoffs = self.cutoffs.map(|(a, b)| json!([a, b]));
        let relations: Vec<Value> = self
            .relations
            .iter()
            .map(|r| {
                json!({
                    "relation_id": r.relation_id,
                    "residual": Sig17(r.residual).to_value(),
                    "passed": r.passed,
                    "gating": r.gating,
                    "margin": self.margin,
                    "cutoffs": cutoffs,
                })
            })
            .collect();
        json!({
            "subject": self.subject,
            "cutoffs": cutoffs,
            "j": self.j,
            "margin": self.margin,
            "tolerance": Sig17(self.tolerance).to_value(),
            "passed": self.passed(),
            "worst_relation": self.worst().map(|r| r.relation_id.clone()),
            "relations": relations,
            "notes": self.notes,
        })
    }
}
