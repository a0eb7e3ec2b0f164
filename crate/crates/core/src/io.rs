//! Deterministic number formatting shared by the JSON and CSV writers.

/// Rounds to 12 significant digits.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// 12-significant-digit text form, without trailing zeros.
pub fn fmt_float(x: f64) -> String {
    let r = round_sig(x);
    if r == 0.0 || (1e-5..1e15).contains(&r.abs()) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

/// Recursively rounds every float in a JSON value to 12 significant digits.
pub fn round_json(v: &mut serde_json::Value) {
    match v {
        serde_json::Value::Number(n) => {
            if n.is_f64() {
                if let Some(x) = n.as_f64() {
                    if let Some(r) = serde_json::Number::from_f64(round_sig(x)) {
                        *n = r;
                    }
                }
            }
        }
        serde_json::Value::Array(a) => a.iter_mut().for_each(round_json),
        serde_json::Value::Object(o) => o.values_mut().for_each(round_json),
        _ => {}
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formatting() {
        assert_eq!(fmt_float(0.0), "0");
        assert_eq!(fmt_float(-0.0), "0");
        assert_eq!(fmt_float(std::f64::consts::PI), "3.14159265359");
        assert_eq!(fmt_float(2.0), "2");
        assert_eq!(fmt_float(1.0e-20 / 3.0), "3.33333333333e-21");
        let mut v = serde_json::json!({"a": [1.0000000000001, 2], "b": {"c": 0.1}});
        round_json(&mut v);
        assert_eq!(v.to_string(), r#"{"a":[1.0,2],"b":{"c":0.1}}"#);
    }
}
