//! Sequence acceleration for slowly converging limits.

/// Limit estimate of a sequence with the magnitude of the final correction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extrapolated {
    pub value: f64,
    pub error: f64,
}

/// One Aitken Δ² pass. Triples whose second difference vanishes (already
/// converged, or exactly linear) pass the last element through.
pub fn aitken_pass(seq: &[f64]) -> Vec<f64> {
    seq.windows(3)
        .map(|w| {
            let d1 = w[1] - w[0];
            let d2 = w[2] - w[1];
            let denom = d2 - d1;
            if denom.abs() <= 1e-300 || !denom.is_finite() {
                w[2]
            } else {
                w[2] - d2 * d2 / denom
            }
        })
        .collect()
}

/// Iterated Aitken acceleration. Passes are applied while at least three
/// terms remain; the error is the last difference in the final row (or
/// between the last two raw terms when fewer than three are given).
pub fn iterated_aitken(seq: &[f64]) -> Extrapolated {
    match seq.len() {
        0 => return Extrapolated { value: f64::NAN, error: f64::INFINITY },
        1 => return Extrapolated { value: seq[0], error: f64::INFINITY },
        _ => {}
    }
    let mut row = seq.to_vec();
    let mut prev_last = row[row.len() - 2];
    while row.len() >= 3 {
        prev_last = *row.last().unwrap();
        row = aitken_pass(&row);
    }
    let value = *row.last().unwrap();
    let error = if row.len() >= 2 {
        (row[row.len() - 1] - row[row.len() - 2]).abs()
    } else {
        (value - prev_last).abs()
    };
    Extrapolated { value, error }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_series_is_exact() {
        let s: Vec<f64> = (0..4).map(|k| 2.0 + 0.5f64.powi(k)).collect();
        let e = iterated_aitken(&s);
        assert!((e.value - 2.0).abs() < 1e-14);
    }

    #[test]
    fn leibniz_pi() {
        let mut partial = 0.0;
        let s: Vec<f64> = (0..9)
            .map(|k| {
                partial += 4.0 * (-1f64).powi(k) / (2 * k + 1) as f64;
                partial
            })
            .collect();
        let e = iterated_aitken(&s);
        assert!((e.value - std::f64::consts::PI).abs() < 1e-7, "{}", e.value);
    }

    #[test]
    fn constant_sequence() {
        let e = iterated_aitken(&[0.7; 4]);
        assert_eq!(e.value, 0.7);
        assert_eq!(e.error, 0.0);
    }
}
