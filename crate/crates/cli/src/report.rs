use serde::Serialize;
use serde_json::{json, Map, Value};

pub const SCHEMA_VERSION: u32 = 1;

/// Settings echoed into every report. The thread count is left out so that
/// output does not depend on it.
#[derive(Clone, Debug, Serialize)]
pub struct Echo {
    pub precision_bits: u32,
    pub max_coeff: u64,
    pub length_bound: Option<String>,
    pub depth: usize,
    pub seed: u64,
    pub node_budget: u64,
}

pub fn envelope(command: &str, echo: &Echo, result: Value) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "tool": { "name": "flatveech", "version": flatveech::VERSION },
        "command": command,
        "config": echo,
        "result": decimalize(result),
    })
}

pub fn error_envelope(command: &str, echo: &Echo, kind: &str, message: &str, exit_code: i32) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "tool": { "name": "flatveech", "version": flatveech::VERSION },
        "command": command,
        "config": echo,
        "error": { "kind": kind, "message": message, "exit_code": exit_code },
    })
}

/// Replaces every non-integer number by a decimal string with an error
/// radius of one unit in the last place.
pub fn decimalize(v: Value) -> Value {
    match v {
        Value::Number(n) if !(n.is_i64() || n.is_u64()) => {
            let x = n.as_f64().unwrap_or(f64::NAN);
            let radius = if x == 0.0 { 0.0 } else { x.abs() * f64::EPSILON };
            json!({ "value": format!("{x:?}"), "radius": format!("{radius:.1e}") })
        }
        Value::Array(a) => Value::Array(a.into_iter().map(decimalize).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, decimalize(v))).collect::<Map<_, _>>()),
        other => other,
    }
}

pub fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("report values serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_become_strings() {
        let v = decimalize(json!({ "a": 0.5, "b": [3, 0.0] }));
        assert_eq!(v["a"]["value"], "0.5");
        assert_eq!(v["b"][0], 3);
        assert_eq!(v["b"][1]["radius"], "0.0e0");
    }
}
