//! Number formatting for reports and printed-table comparisons.

use crate::kendall::Rational;

/// Decimal rendering of `value` rounded half away from zero, computed
/// exactly on the rational.
pub fn round_half_up(value: Rational, decimals: u32) -> String {
    let scale = 10i128.pow(decimals);
    let num = *value.numer() as i128 * scale;
    let den = *value.denom() as i128;
    let magnitude = (2 * num.abs() + den) / (2 * den);
    let sign = if num < 0 && magnitude != 0 { "-" } else { "" };
    if decimals == 0 {
        return format!("{sign}{magnitude}");
    }
    let int = magnitude / scale;
    let frac = magnitude % scale;
    format!("{sign}{int}.{frac:0width$}", width = decimals as usize)
}

/// Whether `value` rounds to the number printed as `printed`, at the
/// precision `printed` shows (`"0.8"` has one decimal, `"0.867"` three).
pub fn matches_printed(value: Rational, printed: &str) -> bool {
    let printed = printed.trim();
    let decimals = printed
        .split_once('.')
        .map(|(_, frac)| frac.len() as u32)
        .unwrap_or(0);
    let Ok(target) = printed.parse::<f64>() else {
        return false;
    };
    let ours: f64 = round_half_up(value, decimals).parse().expect("numeric");
    ours == target || (ours == 0.0 && target == 0.0)
}

/// Three decimals for moderate p-values, scientific notation below 0.01.
pub fn format_p(p: f64) -> String {
    if p == 0.0 || p >= 0.01 {
        format!("{p:.3}")
    } else {
        format!("{p:.2e}")
    }
}
