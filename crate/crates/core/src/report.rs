//! Deterministic number formatting for CSV and JSON outputs: 12 significant
//! digits, '.' decimal separator, no locale.

/// Rounds to 12 significant digits. Non-finite values pass through.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// Formats with 12 significant digits, trimming trailing zeros. Uses plain
/// notation for magnitudes in [1e-4, 1e12) and scientific otherwise.
pub fn fmt_real(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let mag = x.abs();
    if (1e-4..1e12).contains(&mag) {
        let digits_before = mag.log10().floor() as i32 + 1;
        let decimals = (12 - digits_before).max(0) as usize;
        let s = format!("{x:.decimals$}");
        trim_fraction(&s)
    } else {
        let s = format!("{x:.11e}");
        let (mant, exp) = s.split_once('e').expect("scientific format");
        format!("{}e{}", trim_fraction(mant), exp)
    }
}

fn trim_fraction(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

/// Optional real as a CSV cell (empty when absent).
pub fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_real).unwrap_or_default()
}

/// Rounds every number in a JSON tree to 12 significant digits.
pub fn rounded_json(value: serde_json::Value) -> serde_json::Value {
    use serde_json::Value;
    match value {
        Value::Number(n) if n.is_f64() => n
            .as_f64()
            .and_then(|x| serde_json::Number::from_f64(round_sig(x)))
            .map_or(Value::Null, Value::Number),
        Value::Array(items) => Value::Array(items.into_iter().map(rounded_json).collect()),
        Value::Object(map) => {
            Value::Object(map.into_iter().map(|(k, v)| (k, rounded_json(v))).collect())
        }
        other => other,
    }
}

/// Pretty JSON with rounded numbers and a trailing newline.
pub fn to_json_string<T: serde::Serialize>(value: &T) -> String {
    let tree = serde_json::to_value(value).expect("serializable report");
    let mut s = serde_json::to_string_pretty(&rounded_json(tree)).expect("JSON tree");
    s.push('\n');
    s
}
