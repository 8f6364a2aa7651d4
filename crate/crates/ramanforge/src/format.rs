//! CSV numeric formatting compatible with C's `%.12g`.

/// Formats `x` like `printf("%.12g", x)`: 12 significant digits, trailing
/// zeros stripped, scientific notation outside the fixed-point window, and
/// at least two exponent digits.
pub fn format_g12(x: f64) -> String {
    format_g(x, 12)
}

pub fn format_g(x: f64, significant: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    let precision = significant.max(1);
    // round to the target significant digits first, then classify
    let sci = format!("{:.*e}", precision - 1, x);
    let exp: i32 = sci
        .split('e')
        .nth(1)
        .and_then(|e| e.parse().ok())
        .unwrap_or(0);
    if exp < -4 || exp >= precision as i32 {
        let (mantissa, _) = sci.split_once('e').unwrap();
        let mantissa = strip_trailing_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (precision as i32 - 1 - exp).max(0) as usize;
        let fixed = format!("{x:.decimals$}");
        strip_trailing_zeros(&fixed).to_string()
    }
}

fn strip_trailing_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
