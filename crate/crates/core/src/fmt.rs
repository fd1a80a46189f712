//! Float text encoding shared by every file format.

/// Formats with 17 significant digits, which round-trips every `f64`.
/// Infinities are written as `inf` / `-inf`.
pub fn format_float(x: f64) -> String {
    if x.is_infinite() {
        if x > 0.0 { "inf".to_string() } else { "-inf".to_string() }
    } else if x.is_nan() {
        "nan".to_string()
    } else {
        format!("{:.16e}", x)
    }
}

pub fn parse_float(s: &str) -> Option<f64> {
    match s.trim() {
        "inf" | "+inf" | "Inf" | "infinity" => Some(f64::INFINITY),
        "-inf" | "-Inf" | "-infinity" => Some(f64::NEG_INFINITY),
        t => t.parse().ok(),
    }
}

/// Looks up `key=value` among whitespace-separated tokens of a comment line.
pub(crate) fn comment_value<'a>(line: &'a str, key: &str) -> Option<&'a str> {
    line.trim_start_matches('#')
        .split_whitespace()
        .find_map(|tok| tok.strip_prefix(key)?.strip_prefix('='))
}
