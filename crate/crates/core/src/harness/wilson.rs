use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};

/// Two-sided 97.5% standard normal quantile.
pub const Z_95: f64 = 1.959964;

fn z_for(confidence: f64) -> Result<f64> {
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::Domain(format!(
            "confidence {confidence} not in (0, 1)"
        )));
    }
    if confidence == 0.95 {
        return Ok(Z_95);
    }
    let normal = Normal::standard();
    Ok(normal.inverse_cdf(1.0 - (1.0 - confidence) / 2.0))
}

/// Wilson score interval for `failures` out of `frames` trials.
pub fn wilson_interval(failures: u64, frames: u64, confidence: f64) -> Result<(f64, f64)> {
    if frames == 0 || failures > frames {
        return Err(Error::Domain(format!(
            "need 0 ≤ failures ≤ frames, frames ≥ 1; got {failures}/{frames}"
        )));
    }
    let z = z_for(confidence)?;
    let n = frames as f64;
    let p = failures as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let low = if failures == 0 {
        0.0
    } else {
        (center - half).clamp(0.0, p)
    };
    let high = if failures == frames {
        1.0
    } else {
        (center + half).clamp(p, 1.0)
    };
    Ok((low, high))
}

/// `(high − low) / (2·p̂)`; infinite when there are no failures.
pub fn relative_half_width(failures: u64, frames: u64, confidence: f64) -> Result<f64> {
    let (lo, hi) = wilson_interval(failures, frames, confidence)?;
    let p = failures as f64 / frames as f64;
    Ok((hi - lo) / (2.0 * p))
}
