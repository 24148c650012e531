//! Command-line value syntax: comma lists of reals and complex numbers
//! written `a+bi` without spaces.

use num_complex::Complex64;

fn real(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("not a number: {s:?}"))?;
    if v.is_nan() {
        return Err(format!("not a number: {s:?}"));
    }
    Ok(v)
}

/// `"0,1,2.5"` → `[0, 1, 2.5]`. The empty string is the empty list.
pub fn reals(s: &str) -> Result<Vec<f64>, String> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(real).collect()
}

/// `a+bi`, `a-bi`, `bi`, `i`, `-i` or a plain real `a`.
pub fn complex(s: &str) -> Result<Complex64, String> {
    let s = s.trim();
    let bad = || format!("not a complex number (expected a+bi): {s:?}");
    let Some(body) = s.strip_suffix('i') else {
        return real(s).map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    // The sign separating the parts is the last one not inside an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&p| matches!(bytes[p], b'+' | b'-') && !matches!(bytes[p - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(p) => (&body[..p], &body[p..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => real(other).map_err(|_| bad())?,
    };
    let re = real(re).map_err(|_| bad())?;
    if !(re.is_finite() && im.is_finite()) {
        return Err(bad());
    }
    Ok(Complex64::new(re, im))
}

/// Comma list of `+1`/`-1` convexity signs.
pub fn signs(s: &str) -> Result<Vec<i8>, String> {
    s.split(',')
        .map(|t| match t.trim() {
            "1" | "+1" | "+" => Ok(1),
            "-1" | "-" => Ok(-1),
            other => Err(format!("convexity sign must be +1 or -1, got {other:?}")),
        })
        .collect()
}
