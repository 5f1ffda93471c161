use std::f64::consts::PI;

/// Parses one angle: a decimal (`0.5236`) or a multiple of π such as
/// `pi`, `pi/6`, `2pi/3`, `2*pi/3` or `π/6`.
pub fn parse_angle(s: &str) -> Result<f64, String> {
    let t = s
        .trim()
        .to_ascii_lowercase()
        .replace('π', "pi")
        .replace(' ', "");
    if let Ok(x) = t.parse::<f64>() {
        return Ok(x);
    }
    let Some(at) = t.find("pi") else {
        return Err(format!("cannot parse angle {s:?}"));
    };
    let coef = t[..at].trim_end_matches('*');
    let coef = if coef.is_empty() {
        1.0
    } else {
        coef.parse::<f64>()
            .map_err(|_| format!("bad coefficient in angle {s:?}"))?
    };
    let rest = &t[at + 2..];
    let denom = match rest.strip_prefix('/') {
        Some(d) => d
            .parse::<f64>()
            .map_err(|_| format!("bad denominator in angle {s:?}"))?,
        None if rest.is_empty() => 1.0,
        None => return Err(format!("cannot parse angle {s:?}")),
    };
    if denom == 0.0 {
        return Err(format!("zero denominator in angle {s:?}"));
    }
    Ok(coef * PI / denom)
}

/// One value means a regular tetrahedron; otherwise exactly six.
pub fn parse_angles(args: &[String]) -> Result<[f64; 6], String> {
    let values = args
        .iter()
        .map(|a| parse_angle(a))
        .collect::<Result<Vec<_>, _>>()?;
    match values.len() {
        1 => Ok([values[0]; 6]),
        6 => Ok(std::array::from_fn(|i| values[i])),
        k => Err(format!("expected 1 or 6 angles, got {k}")),
    }
}
