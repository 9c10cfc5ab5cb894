//! Parsing of numeric list flags.

/// `a,b,c` as given, or `start:stop:count` spaced logarithmically
/// (both ends included).
pub fn parse_log_list(text: &str) -> Result<Vec<f64>, String> {
    parse_list(text, Spacing::Log)
}

/// `a,b,c` as given, or `start:stop:count` spaced linearly (both ends
/// included).
pub fn parse_linear_list(text: &str) -> Result<Vec<f64>, String> {
    parse_list(text, Spacing::Linear)
}

/// Comma-separated positive integers.
pub fn parse_usize_list(text: &str) -> Result<Vec<usize>, String> {
    text.split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|e| format!("{t:?}: {e}")))
        .collect()
}

#[derive(Clone, Copy)]
enum Spacing {
    Linear,
    Log,
}

fn parse_f64(t: &str) -> Result<f64, String> {
    let x: f64 = t.trim().parse().map_err(|e| format!("{t:?}: {e}"))?;
    if !x.is_finite() {
        return Err(format!("{t:?} is not finite"));
    }
    Ok(x)
}

fn parse_list(text: &str, spacing: Spacing) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [single] => single.split(',').map(parse_f64).collect(),
        [start, stop, count] => {
            let (start, stop) = (parse_f64(start)?, parse_f64(stop)?);
            let count: usize = count
                .trim()
                .parse()
                .map_err(|e| format!("{count:?}: {e}"))?;
            if count == 0 {
                return Err("range count must be at least 1".into());
            }
            if count == 1 {
                return Ok(vec![start]);
            }
            if let Spacing::Log = spacing {
                if !(start > 0.0 && stop > 0.0) {
                    return Err("log-spaced range needs positive end points".into());
                }
            }
            let last = (count - 1) as f64;
            Ok((0..count)
                .map(|i| {
                    let t = i as f64 / last;
                    match (i, spacing) {
                        (0, _) => start,
                        (i, _) if i == count - 1 => stop,
                        (_, Spacing::Linear) => start + (stop - start) * t,
                        (_, Spacing::Log) => (start.ln() + (stop.ln() - start.ln()) * t).exp(),
                    }
                })
                .collect())
        }
        _ => Err(format!(
            "{text:?}: expected a comma list or start:stop:count"
        )),
    }
}
