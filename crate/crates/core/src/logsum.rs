//! Log-domain accumulation.
//!
//! Orbit norms mix terms that differ by thousands of orders of magnitude,
//! so sums of squares are formed as `ln Σ exp(t_i)` with a running maximum.

/// `ln Σ exp(t_i)`.
///
/// Terms are accumulated in descending order after the largest one is
/// factored out. Returns `-∞` for an empty slice or when every term is `-∞`.
pub fn log_sum_exp(terms: &[f64]) -> f64 {
    let mut sorted: Vec<f64> = terms.iter().copied().filter(|t| *t != f64::NEG_INFINITY).collect();
    if sorted.is_empty() {
        return f64::NEG_INFINITY;
    }
    sorted.sort_unstable_by(|a, b| b.total_cmp(a));
    let max = sorted[0];
    if !max.is_finite() {
        return max;
    }
    let tail: f64 = sorted[1..].iter().map(|t| (t - max).exp()).sum();
    max + tail.ln_1p()
}

/// `ln(e^a + e^b)`.
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if !hi.is_finite() {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// `ln ‖·‖` from the log-magnitudes of orthogonal components:
/// `(1/2) ln Σ exp(2 m_i)`.
pub fn log_norm_from_log_magnitudes(log_mags: &[f64]) -> f64 {
    let doubled: Vec<f64> = log_mags.iter().map(|m| 2.0 * m).collect();
    0.5 * log_sum_exp(&doubled)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn empty_and_neg_infinite_terms() {
        assert_eq!(log_sum_exp(&[]), f64::NEG_INFINITY);
        assert_eq!(log_sum_exp(&[f64::NEG_INFINITY; 3]), f64::NEG_INFINITY);
        assert_eq!(log_sum_exp(&[f64::NEG_INFINITY, 2.5]), 2.5);
    }

    #[test]
    fn wide_dynamic_range() {
        // exp(5000) overflows, the log-domain sum does not.
        let v = log_sum_exp(&[5000.0, 5000.0, -5000.0]);
        assert!((v - (5000.0 + 2f64.ln())).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn matches_naive_sum(xs in prop::collection::vec(-30f64..30.0, 1..20)) {
            let naive = xs.iter().map(|x| x.exp()).sum::<f64>().ln();
            let lse = log_sum_exp(&xs);
            prop_assert!((naive - lse).abs() <= 1e-12 * naive.abs().max(1.0));
        }

        #[test]
        fn add_exp_agrees_with_slice_form(a in -50f64..50.0, b in -50f64..50.0) {
            prop_assert!((log_add_exp(a, b) - log_sum_exp(&[a, b])).abs() < 1e-13);
        }
    }
}
