/// Formats `x` with `digits` significant digits, `%g` style: fixed notation
/// for moderate exponents, scientific otherwise, trailing zeros removed.
/// Independent of locale.
pub fn sig(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".into();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci
        .split_once('e')
        .expect("LowerExp output has an exponent");
    let exp: i32 = exp.parse().expect("LowerExp exponent is an integer");
    if exp < -5 || exp >= digits as i32 {
        format!("{}e{exp}", trim_zeros(mantissa))
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::sig;

    #[test]
    fn significant_digits() {
        assert_eq!(sig(0.0, 12), "0");
        assert_eq!(sig(0.25, 12), "0.25");
        assert_eq!(sig(40.0 / 154.0, 12), "0.25974025974");
        assert_eq!(sig(1.0 / 3.0, 4), "0.3333");
        assert_eq!(sig(10.517091807564771, 4), "10.52");
        assert_eq!(sig(0.99999999999999, 12), "1");
        assert_eq!(sig(-0.125, 12), "-0.125");
        assert_eq!(sig(1.5e-9, 4), "1.5e-9");
        assert_eq!(sig(123456.0, 4), "1.235e5");
    }
}
