/// `x` rounded to `digits` significant digits, in plain decimal notation
/// for moderate exponents and scientific notation otherwise. Trailing zeros
/// are dropped. Output depends only on the value, never on locale.
pub fn format_sig(x: f64, digits: usize) -> String {
    let digits = digits.max(1);
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..digits as i32).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{:.*}", decimals, x))
    } else {
        format!("{}e{}", trim_zeros(mantissa.to_string()), exp)
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

#[cfg(test)]
mod tests {
    use super::format_sig;

    #[test]
    fn plain_and_scientific() {
        assert_eq!(format_sig(0.0439, 9), "0.0439");
        assert_eq!(format_sig(1.0 / 3.0, 9), "0.333333333");
        assert_eq!(format_sig(-2.5, 12), "-2.5");
        assert_eq!(format_sig(123456.0, 3), "1.23e5");
        assert_eq!(format_sig(1.5e-9, 9), "1.5e-9");
        assert_eq!(format_sig(std::f64::consts::PI, 12), "3.14159265359");
        assert_eq!(format_sig(0.0, 9), "0");
        assert_eq!(format_sig(f64::NAN, 9), "nan");
    }

    #[test]
    fn rounding_carries_into_exponent() {
        assert_eq!(format_sig(9.9999999999, 3), "10");
        assert_eq!(format_sig(0.000099999, 2), "0.0001");
    }

    #[test]
    fn parses_back() {
        for x in [1e-300, 6.02e23, -0.1, 7.0 / 9.0] {
            let y: f64 = format_sig(x, 12).parse().unwrap();
            assert!(((y - x) / x).abs() < 1e-11);
        }
    }
}
