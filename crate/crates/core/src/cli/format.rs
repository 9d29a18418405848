//! Number formatting for the CSV outputs.

/// Probability: three decimals, or three significant digits in scientific
/// notation at or below `1e-3`.
pub fn prob(p: f64) -> String {
    if p > 0.0 && p <= 1e-3 {
        sci3(p)
    } else {
        format!("{p:.3}")
    }
}

/// Three significant digits with a signed two-digit exponent, e.g. `5.13e-09`.
pub fn sci3(x: f64) -> String {
    let s = format!("{x:.2e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}

/// Estimates, standard errors and limits.
pub fn value(x: f64) -> String {
    if x == f64::INFINITY {
        "Inf".into()
    } else if x == f64::NEG_INFINITY {
        "-Inf".into()
    } else {
        format!("{x:.4}")
    }
}

/// Shortest representation that parses back to `x`.
pub fn input(x: f64) -> String {
    format!("{x}")
}
