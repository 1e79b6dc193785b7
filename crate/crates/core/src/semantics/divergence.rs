use crate::math;
use crate::{Error, Result};

/// Jensen-Shannon divergence in bits, in `[0, 1]`.
pub fn jensen_shannon_divergence(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::InvalidArgument(alloc::format!(
            "distributions differ in length ({} vs {})",
            a.len(),
            b.len()
        )));
    }
    for (what, xs) in [("distribution a", a), ("distribution b", b)] {
        if let Some((i, &v)) = xs.iter().enumerate().find(|(_, v)| !v.is_finite() || **v < 0.0) {
            return Err(Error::Domain { what, index: i, value: v });
        }
        let total: f64 = xs.iter().sum();
        if (total - 1.0).abs() > 1e-6 {
            return Err(Error::InvalidArgument(alloc::format!("{what} sums to {total}, not 1")));
        }
    }
    let mut d = 0.0;
    for (&p, &q) in a.iter().zip(b) {
        let m = 0.5 * (p + q);
        if p > 0.0 {
            d += 0.5 * p * math::log2(p / m);
        }
        if q > 0.0 {
            d += 0.5 * q * math::log2(q / m);
        }
    }
    Ok(d.clamp(0.0, 1.0))
}

/// Jensen-Shannon distance: square root of the base-2 divergence.
pub fn jsd(a: &[f64], b: &[f64]) -> Result<f64> {
    jensen_shannon_divergence(a, b).map(math::sqrt)
}
