//! Number formatting for CSV output: 12 significant digits, '.' separator.

const SIG: i32 = 12;

/// Formats `x` with 12 significant digits. Magnitudes in `[1e-4, 1e12)` use
/// positional notation, others scientific; trailing zeros are dropped.
pub fn sig12(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..12).contains(&exp) {
        let decimals = (SIG - 1 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        // Rounding can carry into a new digit (9.99… → 10.0); that is still 12 digits or fewer.
        trim_zeros(s)
    } else {
        let s = format!("{:.*e}", (SIG - 1) as usize, x);
        let (mantissa, exponent) = s.split_once('e').expect("scientific format");
        format!("{}e{}", trim_zeros(mantissa.to_string()), exponent)
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    let t = s.trim_end_matches('0').trim_end_matches('.');
    t.to_string()
}

/// Optional values print as an empty field.
pub fn sig12_opt(x: Option<f64>) -> String {
    x.map(sig12).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formatting() {
        assert_eq!(sig12(0.0), "0");
        assert_eq!(sig12(1.0), "1");
        assert_eq!(sig12(-0.5), "-0.5");
        assert_eq!(sig12(1.0 / 3.0), "0.333333333333");
        assert_eq!(sig12(130.28222953345474), "130.282229533");
        assert_eq!(sig12(1.234e-7), "1.234e-7");
        assert_eq!(sig12(f64::NEG_INFINITY), "-inf");
        assert_eq!(sig12_opt(None), "");
    }
}
