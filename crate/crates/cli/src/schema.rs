//! Structural validation of emitted JSON reports.  Used by the test suite
//! to round-trip every report the CLI produces; kept in the library so the
//! schema lives next to the code that emits it.

use serde_json::Value;

use crate::commands::CommandKind;

type Check = std::result::Result<(), String>;

fn fail(path: &str, what: &str) -> Check {
    Err(format!("{path}: {what}"))
}

/// `"p/q"` with integer `p`, positive integer `q`.
pub fn is_rational_str(s: &str) -> bool {
    let Some((p, q)) = s.split_once('/') else {
        return false;
    };
    let p = p.strip_prefix('-').unwrap_or(p);
    !p.is_empty()
        && p.chars().all(|c| c.is_ascii_digit())
        && !q.is_empty()
        && q.chars().all(|c| c.is_ascii_digit())
        && q.chars().any(|c| c != '0')
}

/// Scientific notation with eleven fractional digits, `d.ddddddddddde[-]k`.
pub fn is_real_str(s: &str) -> bool {
    let Some((mantissa, exponent)) = s.split_once('e') else {
        return false;
    };
    let m = mantissa.strip_prefix('-').unwrap_or(mantissa);
    let Some((int, frac)) = m.split_once('.') else {
        return false;
    };
    let e = exponent.strip_prefix('-').unwrap_or(exponent);
    int.len() == 1
        && int.chars().all(|c| c.is_ascii_digit())
        && frac.len() == 11
        && frac.chars().all(|c| c.is_ascii_digit())
        && !e.is_empty()
        && e.chars().all(|c| c.is_ascii_digit())
}

fn object<'v>(v: &'v Value, path: &str, keys: &[&str]) -> Result<&'v serde_json::Map<String, Value>, String> {
    let map = v
        .as_object()
        .ok_or_else(|| format!("{path}: expected an object"))?;
    let got: Vec<&str> = map.keys().map(|k| k.as_str()).collect();
    if got.as_slice() != keys {
        return Err(format!("{path}: keys {got:?}, expected {keys:?}"));
    }
    Ok(map)
}

fn rational(v: &Value, path: &str) -> Check {
    match v.as_str() {
        Some(s) if is_rational_str(s) => Ok(()),
        _ => fail(path, "expected a \"p/q\" string"),
    }
}

fn real(v: &Value, path: &str) -> Check {
    match v.as_str() {
        Some(s) if is_real_str(s) => Ok(()),
        _ => fail(path, "expected a scientific-notation string"),
    }
}

fn complex(v: &Value, path: &str) -> Check {
    let map = object(v, path, &["im", "re"])?;
    real(&map["im"], &format!("{path}.im"))?;
    real(&map["re"], &format!("{path}.re"))
}

fn degree(v: &Value, path: &str) -> Check {
    let map = object(v, path, &["rational", "real"])?;
    rational(&map["rational"], &format!("{path}.rational"))?;
    real(&map["real"], &format!("{path}.real"))
}

fn boolean(v: &Value, path: &str) -> Check {
    if v.is_boolean() {
        Ok(())
    } else {
        fail(path, "expected a boolean")
    }
}

fn string(v: &Value, path: &str) -> Check {
    if v.is_string() {
        Ok(())
    } else {
        fail(path, "expected a string")
    }
}

fn unsigned(v: &Value, path: &str) -> Check {
    if v.as_u64().is_some() {
        Ok(())
    } else {
        fail(path, "expected an unsigned integer")
    }
}

fn surface_info(v: &Value) -> Check {
    let map = object(
        v,
        "$",
        &[
            "base_genus",
            "multiple_fibres",
            "poisson",
            "relative_dualising_degree",
            "tau_abs",
            "theta_degree",
        ],
    )?;
    unsigned(&map["base_genus"], "$.base_genus")?;
    unsigned(&map["theta_degree"], "$.theta_degree")?;
    real(&map["tau_abs"], "$.tau_abs")?;
    degree(
        &map["relative_dualising_degree"],
        "$.relative_dualising_degree",
    )?;
    match map["poisson"].as_str() {
        Some("none" | "symplectic" | "degenerate") => {}
        _ => return fail("$.poisson", "expected none|symplectic|degenerate"),
    }
    let fibres = map["multiple_fibres"]
        .as_array()
        .ok_or("$.multiple_fibres: expected an array")?;
    for (i, f) in fibres.iter().enumerate() {
        let path = format!("$.multiple_fibres[{i}]");
        let fm = object(f, &path, &["base_point", "multiplicity"])?;
        complex(&fm["base_point"], &format!("{path}.base_point"))?;
        unsigned(&fm["multiplicity"], &format!("{path}.multiplicity"))?;
    }
    Ok(())
}

fn verdict(v: &Value) -> Check {
    let map = object(v, "$", &["case", "route", "stable", "warnings", "witness"])?;
    match map["case"].as_str() {
        Some("(i)" | "(ii)" | "(iii)") => {}
        _ if map["case"].is_null() => {}
        _ => return fail("$.case", "expected (i)|(ii)|(iii)|null"),
    }
    match map["route"].as_str() {
        Some("degrees" | "closed-form" | "unfiltrable") => {}
        _ => return fail("$.route", "expected a route name"),
    }
    boolean(&map["stable"], "$.stable")?;
    let warnings = map["warnings"]
        .as_array()
        .ok_or("$.warnings: expected an array")?;
    for (i, w) in warnings.iter().enumerate() {
        string(w, &format!("$.warnings[{i}]"))?;
    }
    if !map["witness"].is_null() {
        let wm = object(&map["witness"], "$.witness", &["degree", "threshold"])?;
        degree(&wm["degree"], "$.witness.degree")?;
        degree(&wm["threshold"], "$.witness.threshold")?;
    }
    Ok(())
}

fn m2(v: &Value) -> Check {
    let map = object(v, "$", &["band", "c2_min", "delta_class", "m"])?;
    rational(&map["m"], "$.m")?;
    rational(&map["c2_min"], "$.c2_min")?;
    let class = map["delta_class"]
        .as_array()
        .ok_or("$.delta_class: expected an array")?;
    for (i, c) in class.iter().enumerate() {
        if c.as_i64().is_none() {
            return fail(&format!("$.delta_class[{i}]"), "expected an integer");
        }
    }
    if !map["band"].is_null() {
        let bm = object(&map["band"], "$.band", &["lower", "upper"])?;
        rational(&bm["lower"], "$.band.lower")?;
        rational(&bm["upper"], "$.band.upper")?;
    }
    Ok(())
}

fn psi(v: &Value) -> Check {
    let map = object(v, "$", &["fibre", "tower"])?;
    string(&map["fibre"], "$.fibre")?;
    let tower = map["tower"].as_array().ok_or("$.tower: expected an array")?;
    if tower.is_empty() {
        return fail("$.tower", "expected at least one step");
    }
    for (i, s) in tower.iter().enumerate() {
        string(s, &format!("$.tower[{i}]"))?;
    }
    Ok(())
}

fn graph_image(v: &Value) -> Check {
    let map = v.as_object().ok_or("$: expected an object")?;
    match map.get("result").and_then(Value::as_str) {
        Some("InImage") => object(v, "$", &["result"]).map(|_| ()),
        Some("NotInImage") => {
            let m = object(v, "$", &["reason", "result"])?;
            string(&m["reason"], "$.reason")
        }
        Some("NeedsData") => {
            let m = object(v, "$", &["result", "what"])?;
            string(&m["what"], "$.what")
        }
        _ => fail("$.result", "expected InImage|NotInImage|NeedsData"),
    }
}

fn towers(v: &Value, path: &str) -> Check {
    let arr = v
        .as_array()
        .ok_or_else(|| format!("{path}: expected an array"))?;
    for (i, t) in arr.iter().enumerate() {
        let tp = format!("{path}[{i}]");
        let tm = object(t, &tp, &["base_point", "steps"])?;
        complex(&tm["base_point"], &format!("{tp}.base_point"))?;
        let steps = tm["steps"]
            .as_array()
            .ok_or_else(|| format!("{tp}.steps: expected an array"))?;
        for (k, s) in steps.iter().enumerate() {
            string(s, &format!("{tp}.steps[{k}]"))?;
        }
    }
    Ok(())
}

fn fibre_description(v: &Value, path: &str) -> Check {
    let map = v
        .as_object()
        .ok_or_else(|| format!("{path}: expected an object"))?;
    match map.get("type").and_then(Value::as_str) {
        Some("Prym") => {
            let m = object(v, path, &["copies", "dim", "type"])?;
            string(&m["copies"], &format!("{path}.copies"))?;
            rational(&m["dim"], &format!("{path}.dim"))
        }
        Some("ExtensionComponents") => {
            let m = object(
                v,
                path,
                &["component_degree", "parametrised_by", "regularity", "type"],
            )?;
            degree(&m["component_degree"], &format!("{path}.component_degree"))?;
            string(&m["regularity"], &format!("{path}.regularity"))?;
            string(&m["parametrised_by"], &format!("{path}.parametrised_by"))
        }
        Some("Indeterminate") => {
            let m = object(v, path, &["type", "what"])?;
            string(&m["what"], &format!("{path}.what"))
        }
        _ => fail(
            &format!("{path}.type"),
            "expected Prym|ExtensionComponents|Indeterminate",
        ),
    }
}

fn fibre(v: &Value) -> Check {
    if let Some(map) = v.as_object() {
        if map.contains_key("towers") {
            object(v, "$", &["towers"])?;
            return towers(&map["towers"], "$.towers");
        }
    }
    fibre_description(v, "$")
}

fn poisson(v: &Value, path: &str) -> Check {
    let map = v
        .as_object()
        .ok_or_else(|| format!("{path}: expected an object"))?;
    match map.get("structure").and_then(Value::as_str) {
        Some("none") => {
            let m = object(v, path, &["reason", "structure"])?;
            string(&m["reason"], &format!("{path}.reason"))
        }
        Some("symplectic") => {
            let m = object(v, path, &["rank", "structure"])?;
            rational(&m["rank"], &format!("{path}.rank"))
        }
        Some("degenerate") => {
            let m = object(
                v,
                path,
                &[
                    "drop_locus",
                    "generic_rank",
                    "rank_formula_discrepancy",
                    "stated_rank",
                    "structure",
                ],
            )?;
            string(&m["drop_locus"], &format!("{path}.drop_locus"))?;
            rational(&m["generic_rank"], &format!("{path}.generic_rank"))?;
            boolean(
                &m["rank_formula_discrepancy"],
                &format!("{path}.rank_formula_discrepancy"),
            )?;
            if !m["stated_rank"].is_null() {
                rational(&m["stated_rank"], &format!("{path}.stated_rank"))?;
            }
            Ok(())
        }
        _ => fail(
            &format!("{path}.structure"),
            "expected none|symplectic|degenerate",
        ),
    }
}

fn audit(v: &Value, path: &str) -> Check {
    let m = object(
        v,
        path,
        &["base_dim", "dim_m", "fibre_dim", "lagrangian_balance"],
    )?;
    rational(&m["base_dim"], &format!("{path}.base_dim"))?;
    rational(&m["dim_m"], &format!("{path}.dim_m"))?;
    rational(&m["fibre_dim"], &format!("{path}.fibre_dim"))?;
    if !m["lagrangian_balance"].is_null() {
        boolean(&m["lagrangian_balance"], &format!("{path}.lagrangian_balance"))?;
    }
    Ok(())
}

fn moduli(v: &Value) -> Check {
    let map = object(
        v,
        "$",
        &[
            "audit",
            "empty",
            "expected_dim",
            "fibre",
            "graph_image",
            "poisson",
            "reason",
            "smoothness",
        ],
    )?;
    boolean(&map["empty"], "$.empty")?;
    rational(&map["expected_dim"], "$.expected_dim")?;
    if !map["reason"].is_null() {
        string(&map["reason"], "$.reason")?;
    }
    poisson(&map["poisson"], "$.poisson")?;
    if !map["audit"].is_null() {
        audit(&map["audit"], "$.audit")?;
    }
    if !map["graph_image"].is_null() {
        graph_image(&map["graph_image"])?;
    }
    if !map["fibre"].is_null() {
        if let Some(fm) = map["fibre"].as_object() {
            if fm.contains_key("towers") {
                towers(&fm["towers"], "$.fibre.towers")?;
            } else {
                fibre_description(&map["fibre"], "$.fibre")?;
            }
        } else {
            return fail("$.fibre", "expected an object");
        }
    }
    let sm = object(
        &map["smoothness"],
        "$.smoothness",
        &["everywhere", "gamma", "regular_locus"],
    )?;
    boolean(&sm["everywhere"], "$.smoothness.everywhere")?;
    boolean(&sm["regular_locus"], "$.smoothness.regular_locus")?;
    if !sm["gamma"].is_null() {
        let gm = object(&sm["gamma"], "$.smoothness.gamma", &["gamma", "holds"])?;
        rational(&gm["gamma"], "$.smoothness.gamma.gamma")?;
        boolean(&gm["holds"], "$.smoothness.gamma.holds")?;
    }
    Ok(())
}

/// Validate a success report against the schema for its command.
pub fn validate_report(kind: CommandKind, v: &Value) -> Check {
    match kind {
        CommandKind::SurfaceInfo => surface_info(v),
        CommandKind::Stability => verdict(v),
        CommandKind::M2 => m2(v),
        CommandKind::Psi => psi(v),
        CommandKind::GraphImage => graph_image(v),
        CommandKind::Fibre => fibre(v),
        CommandKind::Moduli => moduli(v),
    }
}
