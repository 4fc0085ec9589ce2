//! Numeric formatting for emitted files.
//!
//! All reals printed by the CLI are rounded to 12 significant digits and
//! then written in the shortest round-trip form, so identical runs print
//! byte-identical values and every sweep class stays distinguishable.

/// Round to 12 significant digits.
pub fn round_sig12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let magnitude = x.abs().log10().floor() as i32;
    let scale = 10f64.powi(11 - magnitude);
    (x * scale).round() / scale
}

/// Shortest decimal form of the 12-significant-digit rounding of `x`.
pub fn sig12(x: f64) -> String {
    format!("{}", round_sig12(x))
}
