//! Literal syntax for numeric command-line arguments.

use std::f64::consts::PI;

use motionkit::DualNumber;

/// Real literal: a float, or a multiple of `pi` with an optional denominator,
/// e.g. `pi/2`, `-3pi/4`, `2*pi`.
pub fn number(s: &str) -> Result<f64, String> {
    let s = s.trim();
    if let Ok(v) = s.parse::<f64>() {
        return finite(v, s);
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim().parse::<f64>().map_err(|_| bad(s))?),
        None => (s, 1.0),
    };
    let (sign, num) = match num.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, num.strip_prefix('+').unwrap_or(num)),
    };
    let v = match num.strip_suffix("pi") {
        Some(coef) => {
            let coef = coef.trim().trim_end_matches('*').trim();
            let c = if coef.is_empty() { 1.0 } else { coef.parse::<f64>().map_err(|_| bad(s))? };
            c * PI
        }
        None => num.parse::<f64>().map_err(|_| bad(s))?,
    };
    if den == 0.0 {
        return Err(bad(s));
    }
    finite(sign * v / den, s)
}

fn finite(v: f64, s: &str) -> Result<f64, String> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad(s))
    }
}

fn bad(s: &str) -> String {
    format!("invalid number '{s}'")
}

/// Comma separated list of exactly `N` numbers.
pub fn numbers<const N: usize>(s: &str) -> Result<[f64; N], String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != N {
        return Err(format!("expected {N} comma separated numbers, got '{s}'"));
    }
    let mut out = [0.0; N];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = number(p)?;
    }
    Ok(out)
}

/// `a,b` meaning `a + εb`.
pub fn dual(s: &str) -> Result<DualNumber, String> {
    let [a, b] = numbers::<2>(s)?;
    Ok(DualNumber::new(a, b))
}

pub fn pair(s: &str) -> Result<(f64, f64), String> {
    let [a, b] = numbers::<2>(s)?;
    Ok((a, b))
}

pub fn vec3(s: &str) -> Result<[f64; 3], String> {
    numbers::<3>(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_literals() {
        assert_eq!(number("pi/2").unwrap(), PI / 2.0);
        assert_eq!(number("-3pi/4").unwrap(), -3.0 * PI / 4.0);
        assert_eq!(number("2*pi").unwrap(), 2.0 * PI);
        assert_eq!(number("1e-3").unwrap(), 1e-3);
        assert_eq!(number("1/4").unwrap(), 0.25);
        assert!(number("pie").is_err());
        assert!(number("1/0").is_err());
        assert!(number("inf").is_err());
    }

    #[test]
    fn lists() {
        assert_eq!(dual("1,-0.5").unwrap(), DualNumber::new(1.0, -0.5));
        assert_eq!(pair("0,2pi").unwrap(), (0.0, 2.0 * PI));
        assert!(vec3("1,2").is_err());
    }
}
