/// Render a float with at most six significant digits, in the shortest form
/// that parses back to the rounded value. Negative zero prints as `0`.
pub fn sig6(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    if v == 0.0 {
        return "0".to_string();
    }
    let rounded: f64 = format!("{v:.5e}").parse().unwrap_or(v);
    format!("{rounded}")
}

pub fn opt_sig6(v: Option<f64>) -> String {
    v.map(sig6).unwrap_or_default()
}
