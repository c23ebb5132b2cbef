//! Weight families for bilateral shifts.
//!
//! A shift `U: b_n ↦ (u_{n+1}/u_n) b_{n+1}` is determined by a nowhere-zero
//! two-sided sequence `u_n`. All families here are exposed only through
//! their log-weights `L(n) = ln u_n`; raw weights overflow long before the
//! indices the witnesses need (`u_8191 = 3^8191` for the oscillating family
//! at `c = 1`).

use std::f64::consts::{FRAC_PI_2, LN_2, PI};
use std::fmt;
use std::sync::Arc;

use crate::error::{checked_shift, Error, Result};

/// `α = 1 + π / (2 ln 2)`, the sup of the derivative of
/// `x ↦ |x| sin((π/2) log₂(1 + |x|))`.
pub const KREIN_ALPHA: f64 = 1.0 + PI / (2.0 * LN_2);

/// Half-width of the index window probed when a custom family is built.
pub const DEFAULT_CUSTOM_PROBE: i64 = 1000;

type LogWeightFn = dyn Fn(i64) -> f64 + Send + Sync;

/// A user-supplied family. The closure returns the log-weight directly.
#[derive(Clone)]
pub struct CustomWeights {
    name: String,
    log_weight: Arc<LogWeightFn>,
}

impl fmt::Debug for CustomWeights {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomWeights").field("name", &self.name).finish_non_exhaustive()
    }
}

/// The weight families.
#[derive(Debug, Clone)]
pub enum WeightFamily {
    /// `u_n = (c+2)^{|n| sin((π/2) log₂(1+|n|))}`, `c > 0`.
    Krein {
        c: f64,
    },
    /// `v_n = (2c)^{-|n|}`, `c ≥ 1`.
    Geometric {
        c: f64,
    },
    /// `w_n = 2^n` for `n ≤ 0`, `1/(n+1)` for `n > 0`.
    Mixed,
    Custom(CustomWeights),
}

/// Which checkpoint sequence of the oscillating family to generate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Checkpoint {
    /// `n_k = 2^{1+4k} - 1`, where `L(±n_k) = n_k ln(c+2)`.
    Peak,
    /// `m_k = 2^{3+4k} - 1`, where `L(±m_k) = -m_k ln(c+2)`.
    Trough,
}

/// A validated weight family together with its step-ratio bound.
///
/// Immutable after construction; cheap to clone.
#[derive(Debug, Clone)]
pub struct WeightSequence {
    family: WeightFamily,
    /// `ln(c+2)` for KREIN, `ln(2c)` for GEOMETRIC, unused otherwise.
    log_base: f64,
    ratio_bound: f64,
}

impl WeightSequence {
    pub fn krein(c: f64) -> Result<Self> {
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::Argument(format!("krein family needs c > 0, got {c}")));
        }
        let log_base = (c + 2.0).ln();
        Ok(Self { family: WeightFamily::Krein { c }, log_base, ratio_bound: KREIN_ALPHA * log_base })
    }

    pub fn geometric(c: f64) -> Result<Self> {
        if !(c.is_finite() && c >= 1.0) {
            return Err(Error::Argument(format!("geometric family needs c >= 1, got {c}")));
        }
        let log_base = (2.0 * c).ln();
        Ok(Self { family: WeightFamily::Geometric { c }, log_base, ratio_bound: log_base })
    }

    pub fn mixed() -> Self {
        Self { family: WeightFamily::Mixed, log_base: LN_2, ratio_bound: LN_2 }
    }

    /// Builds a custom family from its log-weight function.
    ///
    /// `ratio_bound` is the claimed sup of `|L(n+1) - L(n)|`; it is checked on
    /// `[-probe, probe]` and the family is rejected if any probed log-weight
    /// is non-finite or any step exceeds the bound. Unbounded shifts are not
    /// supported.
    pub fn custom<F>(name: impl Into<String>, log_weight: F, ratio_bound: f64, probe: i64) -> Result<Self>
    where
        F: Fn(i64) -> f64 + Send + Sync + 'static,
    {
        if !(ratio_bound.is_finite() && ratio_bound >= 0.0) {
            return Err(Error::Argument(format!("ratio bound must be finite and >= 0, got {ratio_bound}")));
        }
        if probe < 0 {
            return Err(Error::Argument("probe radius must be >= 0".into()));
        }
        let seq = Self {
            family: WeightFamily::Custom(CustomWeights { name: name.into(), log_weight: Arc::new(log_weight) }),
            log_base: 0.0,
            ratio_bound,
        };
        let mut prev = seq.log_weight(-probe)?;
        for n in -probe..probe {
            let next = seq.log_weight(n + 1)?;
            let step = (next - prev).abs();
            if step > ratio_bound * (1.0 + 1e-12) + 1e-12 {
                return Err(Error::UnboundedWeights { index: n, step, bound: ratio_bound });
            }
            prev = next;
        }
        Ok(seq)
    }

    pub fn family(&self) -> &WeightFamily {
        &self.family
    }

    /// sup over n of `|L(n+1) - L(n)|` (closed form for the built-in families).
    pub fn ratio_bound(&self) -> f64 {
        self.ratio_bound
    }

    /// Short identifier used in reports, e.g. `krein(c=1)`.
    pub fn label(&self) -> String {
        match &self.family {
            WeightFamily::Krein { c } => format!("krein(c={c})"),
            WeightFamily::Geometric { c } => format!("geometric(c={c})"),
            WeightFamily::Mixed => "mixed".to_string(),
            WeightFamily::Custom(w) => format!("custom({})", w.name),
        }
    }

    /// `L(n) = ln u_n`, evaluated from the closed form in the log domain.
    pub fn log_weight(&self, n: i64) -> Result<f64> {
        match &self.family {
            WeightFamily::Krein { .. } => Ok(krein_exponent(n) * self.log_base),
            WeightFamily::Geometric { .. } => Ok(-(n.unsigned_abs() as f64) * self.log_base),
            WeightFamily::Mixed => Ok(if n <= 0 { n as f64 * LN_2 } else { -(n as f64).ln_1p() }),
            WeightFamily::Custom(w) => {
                let value = (w.log_weight)(n);
                if value.is_finite() {
                    Ok(value)
                } else {
                    Err(Error::InvalidWeight { index: n, value })
                }
            }
        }
    }

    /// `L(n+1) - L(n)`, the log of the multiplier `U` applies to `b_n`.
    ///
    /// The geometric and mixed families use their closed-form step, which
    /// avoids cancellation between two large log-weights.
    pub fn ratio_log(&self, n: i64) -> Result<f64> {
        let next = checked_shift(n, 1)?;
        match &self.family {
            WeightFamily::Geometric { .. } => Ok(if n < 0 { self.log_base } else { -self.log_base }),
            WeightFamily::Mixed => Ok(if n < 0 {
                LN_2
            } else if n == 0 {
                -LN_2
            } else {
                -(1.0 / (n as f64 + 1.0)).ln_1p()
            }),
            _ => Ok(self.log_weight(next)? - self.log_weight(n)?),
        }
    }
}

/// `|n| sin((π/2) log₂(1+|n|))`, with `1+|n|` formed in integer arithmetic.
fn krein_exponent(n: i64) -> f64 {
    let m = n.unsigned_abs();
    if m == 0 {
        return 0.0;
    }
    let log2 = ((m + 1) as f64).ln() / LN_2;
    m as f64 * (FRAC_PI_2 * log2).sin()
}

/// Checkpoint indices `k = 1..=k_max` of the oscillating family.
pub fn checkpoint_indices(kind: Checkpoint, k_max: u32) -> Result<Vec<i64>> {
    if k_max == 0 {
        return Err(Error::Argument("k_max must be >= 1".into()));
    }
    let offset = match kind {
        Checkpoint::Peak => 1u32,
        Checkpoint::Trough => 3u32,
    };
    (1..=k_max)
        .map(|k| {
            let exponent = k.checked_mul(4).and_then(|e| e.checked_add(offset));
            match exponent {
                Some(e) if e <= 62 => Ok((1i64 << e) - 1),
                _ => Err(Error::Range(format!("2^(4*{k}+{offset}) - 1 does not fit in i64"))),
            }
        })
        .collect()
}
