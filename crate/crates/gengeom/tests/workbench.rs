//! Document-level behaviour of the packaged examples.

use gengeom::workbench::{cmd_example, execute, execute_document, heisenberg_document, lens_document, Command, ProblemDocument, ReportDocument, RunOptions};
use serde_json::json;
use std::collections::BTreeMap;

fn params(kv: &[(&str, &str)]) -> BTreeMap<String, String> {
    kv.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
}

#[test]
fn examples_rerun_byte_identically() {
    for (name, p) in [("lens", params(&[("m", "1"), ("k", "1"), ("n", "1")])), ("heisenberg", params(&[("m", "3")])), ("circle", params(&[("R", "5/2")]))] {
        let doc = cmd_example(name, &p).unwrap();
        let reparsed = ProblemDocument::from_json(&doc.to_json()).unwrap();
        let opts = RunOptions { seed: Some(42), ..RunOptions::default() };
        let a = execute_document(&reparsed, &opts).unwrap().to_json();
        let b = execute_document(&doc, &opts).unwrap().to_json();
        assert_eq!(a, b, "{name}");
        assert_eq!(ReportDocument::from_json(&a).unwrap().to_json(), a);
    }
}

#[test]
fn hopf_fibration_is_dual_to_s2_times_s1_with_flux() {
    let r = execute(&lens_document(1, 0, 0), Command::Tdualize, &RunOptions::default()).unwrap();
    assert!(r.passed());
    assert_eq!(r.outputs["K1.H"], json!([]));
    assert_eq!(r.outputs["K2.H"], json!([[["x", "y", "zt"], "1"]]));
    assert_eq!(r.outputs["dual.g"], json!([["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]]));
}

#[test]
fn l11_is_self_dual() {
    let r = execute(&lens_document(1, 1, 1), Command::Tdualize, &RunOptions::default()).unwrap();
    assert!(r.passed());
    assert_eq!(r.outputs["K1.H"], json!([[["x", "y", "z"], "1"]]));
    assert_eq!(r.outputs["K2.H"], json!([[["x", "y", "zt"], "1"]]));
}

#[test]
fn heisenberg_check_passes() {
    let r = execute(&heisenberg_document(1), Command::Check, &RunOptions { samples: Some(5), ..RunOptions::default() }).unwrap();
    assert!(r.passed(), "{}", r.render_text());
}

#[test]
fn heisenberg_document_lists_the_single_flux() {
    let r = execute(&heisenberg_document(1), Command::ParaCheck, &RunOptions::default()).unwrap();
    assert_eq!(r.outputs["fluxes"], json!(["f_{x z}^{y} = 1"]));
    assert_eq!(r.outputs["admissible_directions"], json!({"x": false, "y": true, "z": false}));
}
