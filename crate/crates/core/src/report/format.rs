/// Six significant digits, trailing zeros kept: `1.00000`, `0.00800000`,
/// `-12.3457`. Magnitudes outside `[1e-5, 1e15)` use exponent notation
/// (`1.23457e-7`). Infinities print as `inf`/`-inf`.
pub fn sig6(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0.00000".into();
    }
    let sci = format!("{x:.5e}");
    let exp: i32 = sci
        .rsplit_once('e')
        .and_then(|(_, e)| e.parse().ok())
        .expect("exponent in {:e} output");
    if (-5..15).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        sci
    }
}

pub fn opt_sig6(x: Option<f64>) -> String {
    x.map(sig6).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_significant_digits() {
        assert_eq!(sig6(1.0), "1.00000");
        assert_eq!(sig6(0.008), "0.00800000");
        assert_eq!(sig6(-1.3416407864998738), "-1.34164");
        assert_eq!(sig6(200.0), "200.000");
        assert_eq!(sig6(0.7979797979797979), "0.797980");
        assert_eq!(sig6(123456.7), "123457");
        assert_eq!(sig6(9.9999996), "10.0000");
        assert_eq!(sig6(0.0), "0.00000");
        assert_eq!(sig6(-0.0), "0.00000");
        assert_eq!(sig6(1.234567e-7), "1.23457e-7");
        assert_eq!(sig6(f64::INFINITY), "inf");
        assert_eq!(opt_sig6(None), "");
    }
}
