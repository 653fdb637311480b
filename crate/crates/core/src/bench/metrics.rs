use super::BenchError;

/// One decimal, ties away from zero.
pub fn round1(x: f64) -> f64 {
    let r = (x * 10.0).round() / 10.0;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// `correct / n × 100` to one decimal; 0 questions scores 0.
pub fn accuracy_pct(correct: usize, n: usize) -> f64 {
    if n == 0 {
        0.0
    } else {
        round1(correct as f64 / n as f64 * 100.0)
    }
}

/// `(new − base) / base × 100` to one decimal.
pub fn relative_change(new_pct: f64, base_pct: f64) -> Result<f64, BenchError> {
    if base_pct.is_nan() || base_pct <= 0.0 {
        return Err(BenchError::UndefinedBaseline(base_pct));
    }
    Ok(round1((new_pct - base_pct) / base_pct * 100.0))
}
