//! Helpers shared by the CLI test binaries: run the built `smod` binary
//! and assemble config files.

use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::{json, Value};

pub fn smod(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_smod"))
        .args(args)
        .output()
        .expect("smod binary runs");
    (
        out.status.code().expect("smod exits normally"),
        String::from_utf8(out.stdout).expect("stdout is utf-8"),
        String::from_utf8(out.stderr).expect("stderr is utf-8"),
    )
}

pub fn write_config(dir: &Path, name: &str, cfg: &Value) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string_pretty(cfg).unwrap()).unwrap();
    path
}

pub fn hopf_surface() -> Value {
    json!({
        "base_genus": 0,
        "fibre_tau": {"re": 0.0, "im": 1.0},
        "theta_degree": 1,
        "tau": {"re": 2.0, "im": 0.0}
    })
}

pub fn multiple_fibre_surface() -> Value {
    json!({
        "base_genus": 0,
        "fibre_tau": {"re": 0.0, "im": 1.0},
        "theta_degree": 1,
        "tau": {"re": 2.0, "im": 0.0},
        "multiple_fibres": [
            {"multiplicity": 2, "base_point": {"re": 0.5, "im": 0.0}},
            {"multiplicity": 3, "base_point": {"re": 0.7, "im": 0.0}}
        ]
    })
}

pub fn kodaira_surface() -> Value {
    json!({
        "base_genus": 1,
        "base_tau": {"re": 0.0, "im": 1.0},
        "fibre_tau": {"re": 0.0, "im": 1.0},
        "theta_degree": 1,
        "tau": {"re": 2.0, "im": 0.0}
    })
}

pub fn zero_section() -> Value {
    json!({"type": "constant", "point": {"s": "0/1", "t": "0/1"}})
}

pub fn trivial_line_bundle() -> Value {
    json!({
        "base_chern": 0,
        "alpha": {"re": 1.0, "im": 0.0},
        "section": zero_section()
    })
}

/// Degree-`n` horizontal section `b -> b^n` of the ruled quotient.
pub fn power_section(n: usize) -> Value {
    let mut numerator = vec![json!({"re": 0.0, "im": 0.0}); n + 1];
    numerator[n] = json!({"re": 1.0, "im": 0.0});
    json!({
        "type": "rational",
        "numerator": numerator,
        "denominator": [{"re": 1.0, "im": 0.0}]
    })
}

/// Constant horizontal section with the given chart value.
pub fn constant_section(value: f64) -> Value {
    json!({
        "type": "rational",
        "numerator": [{"re": value, "im": 0.0}],
        "denominator": [{"re": 1.0, "im": 0.0}]
    })
}

pub fn base_config(surface: Value, gram: Value, c1: Value, c2: i64) -> Value {
    json!({
        "surface": surface,
        "ns": {"gram": gram},
        "chern": {"c1": c1, "c2": c2}
    })
}

/// Coincident-sections descriptor splitting everywhere, with `nu` single
/// smooth jumps and the destabilising degree pinned to the closed form.
/// `c2` must equal `nu` for the descriptor to be consistent when `q(c1)=0`.
pub fn case_i_bundle(nu: usize, pin: f64) -> Value {
    let alpha = (2.0_f64).powf(-pin);
    let jumps: Vec<Value> = (0..nu)
        .map(|k| {
            json!({
                "base_point": {"re": 0.1 + 0.05 * k as f64, "im": 0.0},
                "jumping_sequence": [1]
            })
        })
        .collect();
    let vertical: Vec<Value> = (0..nu)
        .map(|k| {
            json!({
                "base_point": {"re": 0.1 + 0.05 * k as f64, "im": 0.0},
                "multiplicity": 1
            })
        })
        .collect();
    json!({
        "determinant": trivial_line_bundle(),
        "cover": {
            "vertical": vertical,
            "horizontal": {"type": "from_sections"}
        },
        "extension": {
            "destab_section": zero_section(),
            "destab_bundle": {
                "base_chern": 0,
                "alpha": {"re": alpha, "im": 0.0},
                "section": zero_section()
            },
            "other_section": zero_section(),
            "splitting": {"mode": "splits_everywhere"}
        },
        "jumps": jumps
    })
}
