//! Powers of the weighted bilateral shift and their norms.
//!
//! `U^N b_n = (u_{n+N}/u_n) b_{n+N}` and `U^{*-N} b_n = (u_n/u_{n+N}) b_{n+N}`
//! (the weights are real and positive, so conjugation is the identity).
//! Both send basis vectors to orthogonal basis vectors, which makes every
//! orbit norm a weighted ℓ² sum that can be evaluated in closed form.

mod vector;

pub use vector::{inner_product, pair_lognorm, ScaledVector, CANCELLATION_FLOOR};

use crate::error::{checked_shift, Error, Result};
use crate::logsum::log_sum_exp;
use crate::weights::{WeightFamily, WeightSequence};

/// Which power family acts: `U^N` or `(U^{*-1})^N = U^{*-N}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PowerMode {
    Forward,
    AdjointInverse,
}

impl PowerMode {
    pub fn label(self) -> &'static str {
        match self {
            PowerMode::Forward => "forward",
            PowerMode::AdjointInverse => "adjoint-inverse",
        }
    }
}

/// A power `N` (possibly negative) of `U` or of `U^{*-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PowerAction {
    pub exponent: i64,
    pub mode: PowerMode,
}

impl PowerAction {
    pub fn forward(exponent: i64) -> Self {
        Self { exponent, mode: PowerMode::Forward }
    }

    pub fn adjoint_inverse(exponent: i64) -> Self {
        Self { exponent, mode: PowerMode::AdjointInverse }
    }
}

/// `ln ‖T b_n‖` for `T = U^N` (`L(n+N) - L(n)`) or `T = U^{*-N}` (`L(n) - L(n+N)`).
pub fn basis_power_lognorm(seq: &WeightSequence, n: i64, exponent: i64, mode: PowerMode) -> Result<f64> {
    let target = checked_shift(n, exponent)?;
    let gain = seq.log_weight(target)? - seq.log_weight(n)?;
    Ok(match mode {
        PowerMode::Forward => gain,
        PowerMode::AdjointInverse => -gain,
    })
}

/// Applies `U^N` or `U^{*-N}` to `f`.
pub fn apply_power(seq: &WeightSequence, f: &ScaledVector, action: PowerAction) -> Result<ScaledVector> {
    if f.is_zero() || action.exponent == 0 {
        return Ok(f.clone());
    }
    let mut support = Vec::with_capacity(f.len());
    let mut gains = Vec::with_capacity(f.len());
    let mut top = f64::NEG_INFINITY;
    for (n, c) in f.iter() {
        support.push(checked_shift(n, action.exponent)?);
        let gain = basis_power_lognorm(seq, n, action.exponent, action.mode)?;
        top = top.max(c.norm().ln() + gain);
        gains.push(gain);
    }
    // every |c| e^{gain - top} is at most 1, so nothing overflows
    let coeffs = f.coeffs().iter().zip(&gains).map(|(c, g)| c * (g - top).exp()).collect();
    Ok(ScaledVector::from_parts(support, coeffs, f.log_scale() + top))
}

/// `ln ‖T f‖` via `‖U^N f‖² = Σ |(b_n, f)|² |u_{n+N}/u_n|²`, without
/// materializing `T f`.
pub fn orbit_lognorm(seq: &WeightSequence, f: &ScaledVector, exponent: i64, mode: PowerMode) -> Result<f64> {
    if f.is_zero() {
        return Err(Error::UndefinedNorm);
    }
    let terms = f
        .iter()
        .map(|(n, c)| Ok(2.0 * (c.norm().ln() + basis_power_lognorm(seq, n, exponent, mode)?)))
        .collect::<Result<Vec<f64>>>()?;
    Ok(0.5 * log_sum_exp(&terms) + f.log_scale())
}

/// A closed index interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndexWindow {
    lo: i64,
    hi: i64,
}

impl IndexWindow {
    pub fn new(lo: i64, hi: i64) -> Result<Self> {
        if lo > hi {
            return Err(Error::Argument(format!("empty window [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }

    /// `[-radius, radius]`.
    pub fn symmetric(radius: i64) -> Result<Self> {
        Self::new(-radius, radius)
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    pub fn contains(&self, n: i64) -> bool {
        self.lo <= n && n <= self.hi
    }
}

/// A windowed lower bound for `ln ‖T‖`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowedNorm {
    pub lognorm: f64,
    /// The basis index attaining the maximum inside the window.
    pub argmax: i64,
    /// True when the family's closed-form analysis places the supremum over
    /// all of ℤ inside the window, so `lognorm` is the exact operator norm.
    pub exact: bool,
}

/// An index where `sup_n ‖T b_n‖` is attained, when the family admits a
/// closed-form case analysis.
///
/// For the geometric and mixed families the forward supremum is attained
/// at `n = -N` and the adjoint-inverse supremum at `n = 0`, for either
/// sign of `N`.
pub fn supremum_index(seq: &WeightSequence, exponent: i64, mode: PowerMode) -> Option<i64> {
    match seq.family() {
        WeightFamily::Geometric { .. } | WeightFamily::Mixed => match mode {
            PowerMode::Forward => exponent.checked_neg(),
            PowerMode::AdjointInverse => Some(0),
        },
        WeightFamily::Krein { .. } | WeightFamily::Custom(_) => None,
    }
}

/// `max_{n ∈ window} ln ‖T b_n‖`, a lower bound for `ln ‖T‖` (the norm of a
/// weighted shift is the sup of its basis gains).
pub fn window_operator_lognorm(
    seq: &WeightSequence,
    exponent: i64,
    window: IndexWindow,
    mode: PowerMode,
) -> Result<WindowedNorm> {
    let mut best = (f64::NEG_INFINITY, window.lo);
    for n in window.lo..=window.hi {
        let gain = basis_power_lognorm(seq, n, exponent, mode)?;
        if gain > best.0 {
            best = (gain, n);
        }
    }
    let exact = exponent == 0 || supremum_index(seq, exponent, mode).is_some_and(|s| window.contains(s));
    Ok(WindowedNorm { lognorm: best.0, argmax: best.1, exact })
}

/// Gelfand-formula estimate `‖T^N‖^{1/N}` at a single horizon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralEstimate {
    pub estimate: f64,
    pub horizon: i64,
    pub norm: WindowedNorm,
}

pub fn spectral_radius_estimate(
    seq: &WeightSequence,
    horizon: i64,
    window: IndexWindow,
    mode: PowerMode,
) -> Result<SpectralEstimate> {
    if horizon < 1 {
        return Err(Error::Argument(format!("spectral horizon must be >= 1, got {horizon}")));
    }
    let norm = window_operator_lognorm(seq, horizon, window, mode)?;
    Ok(SpectralEstimate { estimate: (norm.lognorm / horizon as f64).exp(), horizon, norm })
}
