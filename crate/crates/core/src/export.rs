//! Lossless JSON export of a model's structure constants.
//!
//! Layout: `{"label", "params", "dim", "omega", "trip", "grading", "seed"}`
//! plus an optional `"summary"` with the verified invariants. Rationals are
//! strings `"p/q"` (or `"p"`), indices are 0-based, only nonzero entries are
//! listed and entries are sorted by index tuple. The writer emits one entry per
//! line with no other whitespace choices, so the output is byte-stable.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::{mode_seed, Analysis};
use crate::linalg::{Matrix, SparseVec};
use crate::models::Model;
use crate::scalar::Rational;
use crate::sts::{CheckMode, ModelLabel, StsError, TripleSystem, Z4Grading};

#[derive(Debug, Error)]
pub enum ExportError {
    #[error("JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid record: {0}")]
    Invalid(String),
    #[error(transparent)]
    System(#[from] StsError),
}

/// Verified invariants stored next to the structure constants.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub dim_inder: usize,
    pub dim_envelope: usize,
    pub envelope_signature: i64,
    pub inder_signature: i64,
    pub odd_signature: i64,
    pub envelope_name: String,
    pub inder_name: String,
    /// `"exhaustive"` or `"sampled"`.
    pub mode: String,
    pub samples: usize,
    pub passed: bool,
}

impl Summary {
    /// `None` unless the structural checks completed.
    pub fn from_analysis(a: &Analysis) -> Option<Self> {
        let s = a.structure.as_ref().ok()?;
        Some(Self {
            dim_inder: s.computed.dim_inder,
            dim_envelope: s.computed.dim_envelope,
            envelope_signature: s.computed.envelope_signature,
            inder_signature: s.computed.inder_signature,
            odd_signature: s.computed.odd_signature,
            envelope_name: a.row.envelope_name.clone(),
            inder_name: a.row.inder_name.clone(),
            mode: match a.axioms.mode {
                CheckMode::Exhaustive if a.axioms.samples == 0 => "exhaustive".into(),
                _ => "sampled".into(),
            },
            samples: a.axioms.samples,
            passed: a.passed(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradingRecord {
    pub deg1: Vec<usize>,
    pub deg3: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExportRecord {
    pub label: String,
    pub params: BTreeMap<String, usize>,
    pub dim: usize,
    pub omega: Vec<(usize, usize, String)>,
    pub trip: Vec<(usize, usize, usize, usize, String)>,
    pub grading: GradingRecord,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub summary: Option<Summary>,
}

impl ExportRecord {
    pub fn from_model(model: &Model, mode: CheckMode, summary: Option<Summary>) -> Self {
        let t = &model.system;
        let n = t.n();
        let label = t.label();
        let gram = t.omega().gram();
        let mut omega = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let v = gram.get(i, j);
                if !v.is_zero() {
                    omega.push((i, j, v.to_string()));
                }
            }
        }
        let mut trip = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for (l, c) in t.trip(i, j, k).iter() {
                        trip.push((i, j, k, *l, c.to_string()));
                    }
                }
            }
        }
        Self {
            label: label.name().to_string(),
            params: label.params().into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
            dim: n,
            omega,
            trip,
            grading: GradingRecord { deg1: model.grading.deg1.clone(), deg3: model.grading.deg3.clone() },
            seed: mode_seed(mode),
            summary,
        }
    }

    pub fn label(&self) -> Result<ModelLabel, ExportError> {
        let get = |k: &str| self.params.get(k).copied();
        let label = ModelLabel::from_parts(&self.label, get("n"), get("p"), get("q"))?;
        let expected: BTreeMap<String, usize> = label.params().into_iter().map(|(k, v)| (k.to_string(), v)).collect();
        if expected != self.params {
            return Err(ExportError::Invalid(format!("unexpected parameters for {}", self.label)));
        }
        Ok(label)
    }

    /// Rebuilds the model. Zero entries are dropped; repeated or out-of-range indices are rejected.
    pub fn to_model(&self) -> Result<Model, ExportError> {
        let label = self.label()?;
        let n = self.dim;
        if n != label.dim() {
            return Err(ExportError::Invalid(format!("{label} has dimension {}, record says {n}", label.dim())));
        }
        let parse = |s: &str| s.parse::<Rational>().map_err(|e| ExportError::Invalid(e.to_string()));
        let range = |idx: &[usize]| -> Result<(), ExportError> {
            match idx.iter().find(|&&i| i >= n) {
                Some(i) => Err(ExportError::Invalid(format!("index {i} out of range"))),
                None => Ok(()),
            }
        };
        let mut gram = Matrix::zeros(n, n);
        let mut seen = std::collections::HashSet::new();
        for (i, j, v) in &self.omega {
            range(&[*i, *j])?;
            if !seen.insert((*i, *j)) {
                return Err(ExportError::Invalid(format!("repeated form entry ({i},{j})")));
            }
            gram.set(*i, *j, parse(v)?);
        }
        let mut cells: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); n * n * n];
        let mut seen = std::collections::HashSet::new();
        for (i, j, k, l, v) in &self.trip {
            range(&[*i, *j, *k, *l])?;
            if !seen.insert((*i, *j, *k, *l)) {
                return Err(ExportError::Invalid(format!("repeated product entry ({i},{j},{k},{l})")));
            }
            cells[(i * n + j) * n + k].push((*l, parse(v)?));
        }
        let trip = cells.into_iter().map(SparseVec::from_entries).collect();
        let system = TripleSystem::new(label, gram, trip)?;
        let grading = Z4Grading::new(self.grading.deg1.clone(), self.grading.deg3.clone());
        Ok(Model { system, grading })
    }

    /// Deterministic JSON text.
    pub fn to_json(&self) -> Result<String, ExportError> {
        let mut out = String::new();
        let mut omega = self.omega.clone();
        omega.sort_by_key(|a| (a.0, a.1));
        let mut trip = self.trip.clone();
        trip.sort_by_key(|a| (a.0, a.1, a.2, a.3));
        let lines = |items: Vec<String>| -> String {
            if items.is_empty() {
                "[]".to_string()
            } else {
                format!("[\n    {}\n  ]", items.join(",\n    "))
            }
        };
        let omega_lines = omega.iter().map(serde_json::to_string).collect::<Result<Vec<_>, _>>()?;
        let trip_lines = trip.iter().map(serde_json::to_string).collect::<Result<Vec<_>, _>>()?;
        out.push_str("{\n");
        let _ = writeln!(out, "  \"label\": {},", serde_json::to_string(&self.label)?);
        let _ = writeln!(out, "  \"params\": {},", serde_json::to_string(&self.params)?);
        let _ = writeln!(out, "  \"dim\": {},", self.dim);
        let _ = writeln!(out, "  \"omega\": {},", lines(omega_lines));
        let _ = writeln!(out, "  \"trip\": {},", lines(trip_lines));
        let _ = writeln!(out, "  \"grading\": {},", serde_json::to_string(&self.grading)?);
        match &self.summary {
            Some(s) => {
                let _ = writeln!(out, "  \"seed\": {},", self.seed);
                let _ = writeln!(out, "  \"summary\": {}", serde_json::to_string(s)?);
            }
            None => {
                let _ = writeln!(out, "  \"seed\": {}", self.seed);
            }
        }
        out.push_str("}\n");
        Ok(out)
    }

    pub fn from_json(s: &str) -> Result<Self, ExportError> {
        Ok(serde_json::from_str(s)?)
    }
}

/// `export(import(text))`, which must reproduce `text` for any text produced by the writer.
pub fn round_trip(text: &str) -> Result<String, ExportError> {
    let rec = ExportRecord::from_json(text)?;
    let model = rec.to_model()?;
    let again = ExportRecord {
        seed: rec.seed,
        summary: rec.summary.clone(),
        ..ExportRecord::from_model(&model, CheckMode::Exhaustive, None)
    };
    again.to_json()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::build;

    #[test]
    fn symplectic_record() {
        let m = build(ModelLabel::Symplectic { n: 1 }).unwrap();
        let rec = ExportRecord::from_model(&m, CheckMode::Exhaustive, None);
        assert_eq!(rec.dim, 2);
        assert_eq!(rec.params.get("n"), Some(&1));
        let text = rec.to_json().unwrap();
        assert!(text.starts_with("{\n  \"label\": \"symplectic\",\n  \"params\": {\"n\":1},\n  \"dim\": 2,"));
        assert_eq!(round_trip(&text).unwrap(), text);
        let back = ExportRecord::from_json(&text).unwrap().to_model().unwrap();
        assert_eq!(back.system, m.system);
        assert_eq!(back.grading, m.grading);
    }

    #[test]
    fn rejects_bad_records() {
        let m = build(ModelLabel::Symplectic { n: 1 }).unwrap();
        let mut rec = ExportRecord::from_model(&m, CheckMode::Exhaustive, None);
        rec.trip.push(rec.trip[0].clone());
        assert!(matches!(rec.to_model(), Err(ExportError::Invalid(_))));
        let mut rec = ExportRecord::from_model(&m, CheckMode::Exhaustive, None);
        rec.omega[0].0 = 5;
        assert!(rec.to_model().is_err());
        let mut rec = ExportRecord::from_model(&m, CheckMode::Exhaustive, None);
        rec.dim = 4;
        assert!(rec.to_model().is_err());
        assert!(ExportRecord::from_json("{").is_err());
    }
}
