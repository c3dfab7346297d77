//! Plain-text rendering of verification reports and the classification table.

use std::fmt::Write as _;

use sts_core::analysis::Analysis;
use sts_core::envelope::ClassificationRow;
use sts_core::{CheckMode, Model};

fn verdict(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

pub fn verification(model: &Model, a: &Analysis) -> String {
    let t = &model.system;
    let mut s = String::new();
    let _ = writeln!(s, "model:      {}  (dim T = {})", t.label(), t.n());
    let mode = match (a.axioms.mode, a.axioms.seed) {
        (CheckMode::Exhaustive, None) => "exhaustive".to_string(),
        (_, seed) => format!(
            "sampled, seed {}, {} samples{}",
            seed.unwrap_or_default(),
            a.axioms.samples,
            if a.axioms.operator_identity { " + operator identity on a basis of inder" } else { "" }
        ),
    };
    let _ = writeln!(s, "mode:       {mode}");
    for o in &a.axioms.outcomes {
        let _ = writeln!(s, "axiom:      {:<14} {}  ({} checks)", format!("{:?}", o.axiom), verdict(o.passed()), o.checked);
    }
    let _ = writeln!(s, "grading:    {}", verdict(a.grading));
    match &a.structure {
        Ok(st) => {
            let c = &st.computed;
            let _ = writeln!(s, "inder:      dim {}  (expected {}, {})", c.dim_inder, a.row.dim_inder, a.row.inder_name);
            let _ = writeln!(s, "invariant:  {} alternating form(s)", st.invariant_forms);
            let _ = writeln!(s, "weak iso:   {}", verdict(st.weak_iso));
            let _ = writeln!(
                s,
                "envelope:   dim {}  (expected {}, {})",
                c.dim_envelope, a.row.dim_envelope, a.row.envelope_name
            );
            let _ = writeln!(
                s,
                "jacobi:     {}  ({} {})",
                verdict(st.jacobi.passed()),
                st.jacobi.checked,
                if st.jacobi.exhaustive { "basis triples" } else { "sampled basis triples" }
            );
            let _ = writeln!(
                s,
                "signature:  g {} (expected {}), inder {} (expected {}), odd block {}",
                c.envelope_signature, a.row.envelope_signature, c.inder_signature, a.row.inder_signature, c.odd_signature
            );
        }
        Err(e) => {
            let _ = writeln!(s, "structure:  {e}");
        }
    }
    if let Some(f) = a.first_failure() {
        let _ = writeln!(s, "first failure: {f}");
    }
    let _ = writeln!(s, "result: {}", if a.passed() { "PASS" } else { "FAIL" });
    s
}

pub fn table_header() -> String {
    format!(
        "{:<22} {:<10} {:<26} {:>5} {:>6} {:>6} {:>9} {:>9}  {}",
        "model", "g(T)", "inder(T)", "dim T", "inder", "g", "sign g", "sign in", "status"
    )
}

pub fn table_line(row: &ClassificationRow, a: &Analysis) -> String {
    let (inder, env, sg, sh) = match &a.structure {
        Ok(st) => (
            st.computed.dim_inder.to_string(),
            st.computed.dim_envelope.to_string(),
            format!("{}/{}", st.computed.envelope_signature, row.envelope_signature),
            format!("{}/{}", st.computed.inder_signature, row.inder_signature),
        ),
        Err(_) => ("?".into(), "?".into(), "?".into(), "?".into()),
    };
    format!(
        "{:<22} {:<10} {:<26} {:>5} {:>6} {:>6} {:>9} {:>9}  {}",
        row.label.to_string(),
        row.envelope_name,
        row.inder_name,
        row.dim_t,
        inder,
        env,
        sg,
        sh,
        if a.passed() { "MATCH" } else { "MISMATCH" }
    )
}
