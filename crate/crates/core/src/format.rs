//! Locale-independent number formatting shared by every CSV and JSON writer.

/// Scientific notation with 17 significant digits, enough to round-trip any
/// `f64`. Non-finite values print as `inf`, `-inf`, `NaN`.
pub fn float17(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

/// `x` rounded to 15 significant digits, for human-facing JSON.
pub fn round15(x: f64) -> f64 {
    if x.is_finite() {
        format!("{x:.14e}").parse().unwrap_or(x)
    } else {
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0] {
            assert_eq!(float17(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(float17(1.5), "1.5000000000000000e0");
        assert_eq!(float17(f64::INFINITY), "inf");
        assert_eq!(round15(0.1 + 0.2), 0.3);
    }
}
