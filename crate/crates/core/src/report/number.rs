/// Formats `v` with 9 significant digits in the style of C's `%.9g`:
/// positional notation for decimal exponents in `[-4, 9)`, scientific
/// otherwise, trailing zeros removed. Always uses `.` as the decimal point.
/// Negative zero is written as `0`.
pub fn format_sig9(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return if v.is_nan() {
            "nan".into()
        } else if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{v:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        trim_zeros(format!("{v:.decimals$}"))
    } else {
        format!(
            "{}e{}{:02}",
            trim_zeros(mantissa.to_string()),
            if exp < 0 { '-' } else { '+' },
            exp.abs()
        )
    }
}

fn trim_zeros(mut s: String) -> String {
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    s
}

/// Rounds `v` to the value its 9-significant-digit rendering parses back to.
pub fn round_sig9(v: f64) -> f64 {
    format_sig9(v).parse().unwrap_or(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        assert_eq!(format_sig9(0.0), "0");
        assert_eq!(format_sig9(-0.0), "0");
        assert_eq!(format_sig9(1.5), "1.5");
        assert_eq!(format_sig9(-2.0), "-2");
        assert_eq!(format_sig9(1.0 / 3.0), "0.333333333");
        assert_eq!(format_sig9(123456.789012), "123456.789");
        assert_eq!(format_sig9(9.9999999996), "10");
        assert_eq!(format_sig9(123456789.4), "123456789");
        assert_eq!(format_sig9(1234567891.0), "1.23456789e+09");
        assert_eq!(format_sig9(0.00001234), "1.234e-05");
        assert_eq!(format_sig9(0.0001234), "0.0001234");
        assert_eq!(format_sig9(0.946394630357186), "0.94639463");
    }

    proptest! {
        #[test]
        fn reformatting_is_stable(v in prop::num::f64::NORMAL) {
            let once = format_sig9(v);
            let parsed: f64 = once.parse().unwrap();
            prop_assert_eq!(format_sig9(parsed), once);
        }
    }
}
