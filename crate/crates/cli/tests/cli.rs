//! End-to-end checks of the `smod` binary: subcommand behaviour, exit
//! codes, output pins, batch mode.

mod common;

use common::*;
use serde_json::json;

#[test]
fn surface_info_reports_poisson_type_in_text_mode() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = base_config(hopf_surface(), json!([[-2]]), json!([1]), 1);
    let path = write_config(dir.path(), "s.json", &cfg);
    let (code, out, _) = smod(&[
        "surface-info",
        "--config",
        path.to_str().unwrap(),
        "--output",
        "text",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("Poisson: degenerate"), "got: {out}");

    let cfg = base_config(kodaira_surface(), json!([[-2]]), json!([1]), 1);
    let path = write_config(dir.path(), "k.json", &cfg);
    let (code, out, _) = smod(&[
        "surface-info",
        "--config",
        path.to_str().unwrap(),
        "--output",
        "text",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("Poisson: symplectic"), "got: {out}");

    let cfg = base_config(multiple_fibre_surface(), json!([[-2]]), json!([1]), 1);
    let path = write_config(dir.path(), "m.json", &cfg);
    let (code, out, _) = smod(&[
        "surface-info",
        "--config",
        path.to_str().unwrap(),
        "--output",
        "text",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("Poisson: none"), "got: {out}");
    assert!(out.contains("Multiple fibres: 2, 3"), "got: {out}");
}

#[test]
fn m2_pins_one_quarter_for_the_odd_rank_one_lattice() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = base_config(hopf_surface(), json!([[-2]]), json!([1]), 0);
    let path = write_config(dir.path(), "m2.json", &cfg);
    let (code, out, _) = smod(&["m2", "--config", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["m"], "1/4");
    assert_eq!(v["delta_class"], json!([-1]));
    assert_eq!(v["band"]["lower"], "-1/2");
    smod_cli::validate_report(smod_cli::CommandKind::M2, &v).unwrap();
}

#[test]
fn stability_exit_codes_track_the_verdict() {
    let dir = tempfile::tempdir().unwrap();
    // nu = 1 > deg omega = 0: stable.
    let mut cfg = base_config(hopf_surface(), json!([[0]]), json!([0]), 1);
    cfg["bundle"] = case_i_bundle(1, -0.5);
    let path = write_config(dir.path(), "stable.json", &cfg);
    let (code, out, _) = smod(&["stability", "--config", path.to_str().unwrap()]);
    assert_eq!(code, 0, "got: {out}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["stable"], json!(true));
    assert_eq!(v["case"], "(i)");
    smod_cli::validate_report(smod_cli::CommandKind::Stability, &v).unwrap();

    // nu = 0: the interval collapses and the descriptor is unstable.
    let mut cfg = base_config(hopf_surface(), json!([[0]]), json!([0]), 0);
    cfg["bundle"] = case_i_bundle(0, 0.0);
    let path = write_config(dir.path(), "unstable.json", &cfg);
    let (code, out, _) = smod(&["stability", "--config", path.to_str().unwrap()]);
    assert_eq!(code, 1, "got: {out}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["stable"], json!(false));
    assert!(v["witness"].is_object());
    smod_cli::validate_report(smod_cli::CommandKind::Stability, &v).unwrap();
}

#[test]
fn inconsistent_descriptors_are_rejected_with_findings() {
    let dir = tempfile::tempdir().unwrap();
    // Coincident sections with jump-free c2 = 1 violate the
    // multiple-section discriminant identity.
    let mut cfg = base_config(hopf_surface(), json!([[0]]), json!([0]), 1);
    cfg["bundle"] = case_i_bundle(0, 0.0);
    let path = write_config(dir.path(), "bad.json", &cfg);
    let (code, out, _) = smod(&["stability", "--config", path.to_str().unwrap()]);
    assert_eq!(code, 2, "got: {out}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let findings = v["findings"].as_array().unwrap();
    assert!(findings
        .iter()
        .any(|f| f["rule"] == "multiple-section"));
}

#[test]
fn psi_reports_the_first_tower_step() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = base_config(hopf_surface(), json!([[0]]), json!([0]), 3);
    cfg["bundle"] = json!({
        "determinant": trivial_line_bundle(),
        "cover": {
            "vertical": [{"base_point": {"re": 0.1, "im": 0.0}, "multiplicity": 3}],
            "horizontal": {"type": "from_sections"}
        },
        "extension": {
            "destab_section": zero_section(),
            "destab_bundle": trivial_line_bundle(),
            "other_section": zero_section(),
            "splitting": {"mode": "splits_everywhere"}
        },
        "jumps": [{"base_point": {"re": 0.1, "im": 0.0}, "jumping_sequence": [2, 1]}]
    });
    let path = write_config(dir.path(), "psi.json", &cfg);
    let (code, out, _) = smod(&["psi", "--config", path.to_str().unwrap()]);
    assert_eq!(code, 0, "got: {out}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["fibre"], "Pic^{-2}(T) x Aut");
    assert_eq!(v["tower"], json!(["Pic^{-2}(T) x Aut", "Pic^{-1}(T)"]));
    smod_cli::validate_report(smod_cli::CommandKind::Psi, &v).unwrap();
}

#[test]
fn graph_image_pins_the_empty_moduli_row() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = base_config(hopf_surface(), json!([[-2]]), json!([0]), 0);
    cfg["graph"] = json!({ "section": constant_section(0.3) });
    let path = write_config(dir.path(), "g.json", &cfg);
    let (code, out, _) = smod(&["graph-image", "--config", path.to_str().unwrap()]);
    assert_eq!(code, 0, "got: {out}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["result"], "NotInImage");
    assert_eq!(v["reason"], "moduli empty");
    smod_cli::validate_report(smod_cli::CommandKind::GraphImage, &v).unwrap();
}

#[test]
fn graph_queries_on_multiple_fibre_surfaces_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = base_config(multiple_fibre_surface(), json!([[-2]]), json!([0]), 1);
    cfg["graph"] = json!({ "section": power_section(1) });
    let path = write_config(dir.path(), "nd.json", &cfg);
    let (code, out, _) = smod(&["graph-image", "--config", path.to_str().unwrap()]);
    assert_eq!(code, 3, "got: {out}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["result"], "NeedsData");
}

#[test]
fn fibre_description_over_an_irreducible_graph() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = base_config(hopf_surface(), json!([[-2]]), json!([1]), 1);
    cfg["graph"] = json!({ "section": power_section(1) });
    let path = write_config(dir.path(), "f.json", &cfg);
    let (code, out, _) = smod(&["fibre", "--config", path.to_str().unwrap()]);
    assert_eq!(code, 0, "got: {out}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["type"], "Prym");
    assert_eq!(v["dim"], "2/1");
    smod_cli::validate_report(smod_cli::CommandKind::Fibre, &v).unwrap();
}

#[test]
fn moduli_report_keeps_the_fixed_key_set() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = base_config(hopf_surface(), json!([[-2]]), json!([1]), 2);
    cfg["options"] = json!({"gamma": "8/1"});
    let path = write_config(dir.path(), "mod.json", &cfg);
    let (code, out, _) = smod(&["moduli", "--config", path.to_str().unwrap()]);
    assert_eq!(code, 0, "got: {out}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(|k| k.as_str()).collect();
    assert_eq!(
        keys,
        [
            "audit",
            "empty",
            "expected_dim",
            "fibre",
            "graph_image",
            "poisson",
            "reason",
            "smoothness"
        ]
    );
    assert!(v["smoothness"]["gamma"]["holds"].is_boolean());
    smod_cli::validate_report(smod_cli::CommandKind::Moduli, &v).unwrap();
}

#[test]
fn unknown_config_keys_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = base_config(hopf_surface(), json!([[-2]]), json!([1]), 1);
    cfg["chern"]["c3"] = json!(7);
    let path = write_config(dir.path(), "bad.json", &cfg);
    let (code, out, _) = smod(&["m2", "--config", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(out.contains("unknown field"), "got: {out}");
}

#[test]
fn option_validation_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = base_config(hopf_surface(), json!([[-2]]), json!([1]), 1);
    cfg["options"] = json!({"output": "text"});
    let path = write_config(dir.path(), "t.json", &cfg);

    // config picks text, flag forces JSON back on
    let (code, out, _) = smod(&["m2", "--config", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.starts_with("m = "), "got: {out}");
    let (code, out, _) = smod(&[
        "m2",
        "--config",
        path.to_str().unwrap(),
        "--output",
        "json",
    ]);
    assert_eq!(code, 0);
    assert!(serde_json::from_str::<serde_json::Value>(&out).is_ok());

    let (code, out, _) = smod(&[
        "m2",
        "--config",
        path.to_str().unwrap(),
        "--epsilon",
        "0.0",
    ]);
    assert_eq!(code, 2, "got: {out}");

    let (code, _, _) = smod(&["m2", "--config", "/nonexistent/x.json"]);
    assert_eq!(code, 2);

    let (code, _, _) = smod(&["no-such-command"]);
    assert_eq!(code, 2);
}

#[test]
fn batch_directories_run_in_sorted_order_with_max_exit() {
    let dir = tempfile::tempdir().unwrap();
    let ok = base_config(hopf_surface(), json!([[-2]]), json!([1]), 1);
    let mut nd = base_config(multiple_fibre_surface(), json!([[-2]]), json!([0]), 1);
    nd["graph"] = json!({ "section": power_section(1) });
    let mut ok_graph = base_config(hopf_surface(), json!([[-2]]), json!([0]), 0);
    ok_graph["graph"] = json!({ "section": constant_section(0.3) });
    write_config(dir.path(), "b_needs_data.json", &nd);
    write_config(dir.path(), "a_ok.json", &ok_graph);
    write_config(dir.path(), "c_ok.json", &ok_graph);
    let _ = ok;

    let (code, out, _) = smod(&["graph-image", "--config", dir.path().to_str().unwrap()]);
    assert_eq!(code, 3, "got: {out}");
    let a = out.find("a_ok.json").unwrap();
    let b = out.find("b_needs_data.json").unwrap();
    let c = out.find("c_ok.json").unwrap();
    assert!(a < b && b < c, "batch output out of order: {out}");

    // worker count must not change the bytes
    let (code2, out2, _) = smod(&[
        "graph-image",
        "--config",
        dir.path().to_str().unwrap(),
        "--jobs",
        "3",
    ]);
    assert_eq!(code2, 3);
    assert_eq!(out, out2);
}
