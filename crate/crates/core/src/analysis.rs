//! End-to-end verification of one model: axioms, grading, inner derivations,
//! envelope, Jacobi identity and Killing signatures, compared against the
//! classification table.

use serde::{Deserialize, Serialize};

use crate::envelope::{
    build_envelope, classification_row, killing, ClassificationRow, ComputedInvariants, JacobiReport,
    JACOBI_EXHAUSTIVE_LIMIT,
};
use crate::models::Model;
use crate::sts::{
    check_axioms, check_z4_grading, inder_span, invariant_alternating_forms, is_isomorphism, AxiomReport, CheckMode,
    StsError, DEFAULT_SAMPLES, DEFAULT_SEED, EXHAUSTIVE_LIMIT,
};

/// Exhaustive where affordable, otherwise the default seeded sample.
pub fn default_mode(n: usize) -> CheckMode {
    if n <= EXHAUSTIVE_LIMIT {
        CheckMode::Exhaustive
    } else {
        CheckMode::Sampled { seed: DEFAULT_SEED, count: DEFAULT_SAMPLES }
    }
}

/// Seed carried by a mode (the default seed for exhaustive runs).
pub fn mode_seed(mode: CheckMode) -> u64 {
    match mode {
        CheckMode::Exhaustive => DEFAULT_SEED,
        CheckMode::Sampled { seed, .. } => seed,
    }
}

/// Everything computed past the axiom check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Structure {
    pub computed: ComputedInvariants,
    /// Dimension of the inder-invariant alternating forms on `T`.
    pub invariant_forms: usize,
    /// Whether the grading sign map is an isomorphism `T → T^[−1]`.
    pub weak_iso: bool,
    pub jacobi: JacobiReport,
    pub envelope_nondegenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Analysis {
    pub row: ClassificationRow,
    pub axioms: AxiomReport,
    pub grading: bool,
    /// The reason the structural checks did not run, or did not complete.
    pub structure: Result<Structure, String>,
}

impl Analysis {
    pub fn passed(&self) -> bool {
        self.axioms.passed()
            && self.grading
            && match &self.structure {
                Ok(s) => {
                    self.row.matches(&s.computed)
                        && s.invariant_forms == 1
                        && s.weak_iso
                        && s.jacobi.passed()
                        && s.envelope_nondegenerate
                }
                Err(_) => false,
            }
    }

    /// First failing check, in the order the checks run.
    pub fn first_failure(&self) -> Option<String> {
        if let Some(f) = self.axioms.first_failure() {
            return Some(format!("axiom {} fails at {}", f.axiom, f.counterexample.as_deref().unwrap_or("?")));
        }
        if !self.grading {
            return Some("the Z/4-grading is not compatible with the form and product".into());
        }
        let s = match &self.structure {
            Ok(s) => s,
            Err(e) => return Some(e.clone()),
        };
        if let Some((i, j, k)) = s.jacobi.counterexample {
            return Some(format!("Jacobi identity fails on envelope basis triple ({i},{j},{k})"));
        }
        if !s.weak_iso {
            return Some("the grading sign map is not an isomorphism onto the (-1)-shift".into());
        }
        if s.invariant_forms != 1 {
            return Some(format!("{} independent invariant alternating forms (expected 1)", s.invariant_forms));
        }
        if !s.envelope_nondegenerate {
            return Some("Killing form of the envelope is degenerate".into());
        }
        (!self.row.matches(&s.computed)).then(|| {
            format!("classification mismatch: computed {:?}, expected {:?}", s.computed, self.row)
        })
    }
}

/// Runs every check on a model. Axiom failures short-circuit the structural part.
pub fn analyze(model: &Model, mode: CheckMode) -> Analysis {
    let t = &model.system;
    let row = classification_row(t.label());
    let axioms = check_axioms(t, mode);
    let grading = check_z4_grading(t, &model.grading);
    let structure = if axioms.passed() {
        structure(model, mode).map_err(|e| e.to_string())
    } else {
        Err("skipped: axioms fail".into())
    };
    Analysis { row, axioms, grading, structure }
}

fn structure(model: &Model, mode: CheckMode) -> Result<Structure, StsError> {
    let t = &model.system;
    let inder = inder_span(t)?;
    let invariant_forms = invariant_alternating_forms(t, &inder)?.len();
    let weak_iso = model.grading.degrees(t.n()).is_some() && is_isomorphism(t, &t.shift(-1), &t.sign_map(&model.grading));
    let env = build_envelope(t, &inder).map_err(|e| StsError::Malformed(e.to_string()))?;
    let jmode = if env.dim() <= JACOBI_EXHAUSTIVE_LIMIT {
        CheckMode::Exhaustive
    } else {
        CheckMode::Sampled { seed: mode_seed(mode), count: DEFAULT_SAMPLES }
    };
    let jacobi = env.algebra.check_jacobi(jmode);
    let k = killing(&env);
    Ok(Structure {
        computed: ComputedInvariants {
            dim_t: t.n(),
            dim_inder: inder.dim(),
            dim_envelope: env.dim(),
            envelope_signature: k.signature,
            inder_signature: inder.algebra().killing_signature(),
            odd_signature: k.odd_signature,
        },
        invariant_forms,
        weak_iso,
        jacobi,
        envelope_nondegenerate: k.nondegenerate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::build;
    use crate::sts::ModelLabel;

    #[test]
    fn g2_passes() {
        let m = build(ModelLabel::G2).unwrap();
        let a = analyze(&m, CheckMode::Exhaustive);
        assert!(a.passed(), "{:?}", a.first_failure());
        let s = a.structure.unwrap();
        assert_eq!(s.computed.dim_envelope, 14);
        assert!(s.jacobi.exhaustive);
    }

    #[test]
    fn wrong_grading_is_reported() {
        let mut m = build(ModelLabel::Symplectic { n: 1 }).unwrap();
        m.grading = crate::sts::Z4Grading::new(vec![0, 1], vec![]);
        let a = analyze(&m, CheckMode::Exhaustive);
        assert!(!a.passed());
        assert!(a.first_failure().unwrap().contains("Z/4"));
    }
}
