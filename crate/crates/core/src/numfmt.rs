//! Locale-free number formatting for CLI and CSV output.

/// `v` with `digits` significant digits, dot decimal separator. Plain
/// notation for moderate magnitudes, scientific otherwise.
pub fn fmt_sig(v: f64, digits: usize) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let digits = digits.max(1);
    let exp = v.abs().log10().floor() as i32;
    if (-5..15).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        format!("{v:.decimals$}")
    } else {
        format!("{:.*e}", digits - 1, v)
    }
}

#[cfg(test)]
mod tests {
    use super::fmt_sig;

    #[test]
    fn significant_digits() {
        assert_eq!(fmt_sig(10.450583572185565, 10), "10.45058357");
        assert_eq!(fmt_sig(-0.0566200, 4), "-0.05662");
        assert_eq!(fmt_sig(1382.0707317, 6), "1382.07");
        assert_eq!(fmt_sig(0.0, 10), "0");
        assert_eq!(fmt_sig(1.5e-9, 3), "1.50e-9");
        assert_eq!(fmt_sig(123456789012.0, 3), "123456789012");
    }
}
