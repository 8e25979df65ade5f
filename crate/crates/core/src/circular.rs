use crate::error::CoreError;
use crate::geometry::AngleDeg;

/// Shifts `raw` by a whole number of turns into `(reference - 180, reference + 180]`.
pub fn unwrap_angle(reference: AngleDeg, raw: AngleDeg) -> Result<AngleDeg, CoreError> {
    for x in [reference.0, raw.0] {
        if !x.is_finite() {
            return Err(CoreError::NonFinite(x));
        }
    }
    let (r, x) = (reference.0, raw.0);
    let mut k = ((r + 180.0 - x) / 360.0).floor();
    // floor can land one turn off when the quotient rounds across an integer
    while x + 360.0 * k > r + 180.0 {
        k -= 1.0;
    }
    while x + 360.0 * k <= r - 180.0 {
        k += 1.0;
    }
    Ok(AngleDeg(x + 360.0 * k))
}

/// Mean and sample standard deviation of angles unwrapped around a reference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngularSpread {
    pub mean: AngleDeg,
    /// Sample (n - 1) standard deviation in degrees; 0 for a single value.
    pub std: f64,
    pub n: usize,
}

pub fn circular_mean_std(reference: AngleDeg, raws: &[AngleDeg]) -> Result<AngularSpread, CoreError> {
    if raws.is_empty() {
        return Err(CoreError::Empty("no angles to average"));
    }
    let unwrapped = raws
        .iter()
        .map(|&a| unwrap_angle(reference, a).map(|u| u.0))
        .collect::<Result<Vec<_>, _>>()?;
    let n = unwrapped.len();
    let mean = unwrapped.iter().sum::<f64>() / n as f64;
    let std = if n == 1 {
        0.0
    } else {
        let ss: f64 = unwrapped.iter().map(|u| (u - mean).powi(2)).sum();
        (ss / (n - 1) as f64).sqrt()
    };
    Ok(AngularSpread {
        mean: AngleDeg(mean),
        std,
        n,
    })
}
