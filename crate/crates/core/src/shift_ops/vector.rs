use std::f64::consts::LN_2;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::logsum::{log_norm_from_log_magnitudes, log_sum_exp};

/// Relative size below which a cancelled sum is reported as exactly zero.
pub const CANCELLATION_FLOOR: f64 = 1e-15;

/// A finite-support element of ℓ²(ℤ) with a shared log-scale:
/// `e^{log_scale} · Σ coeffs[i] · b_{support[i]}`.
///
/// Invariants: `support` is strictly increasing, no stored coefficient is
/// zero, the largest coefficient magnitude lies in `[1/2, 2]`, and the zero
/// vector has empty support and `log_scale == 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaledVector {
    support: Vec<i64>,
    coeffs: Vec<Complex64>,
    log_scale: f64,
}

impl Default for ScaledVector {
    fn default() -> Self {
        Self::zero()
    }
}

impl ScaledVector {
    pub fn zero() -> Self {
        Self { support: Vec::new(), coeffs: Vec::new(), log_scale: 0.0 }
    }

    /// The basis vector `b_n`.
    pub fn basis(n: i64) -> Self {
        Self { support: vec![n], coeffs: vec![Complex64::new(1.0, 0.0)], log_scale: 0.0 }
    }

    /// Builds a vector from `(index, coefficient)` pairs in any order.
    /// Zero coefficients are dropped; duplicate indices and non-finite
    /// coefficients are rejected.
    pub fn from_entries<I>(entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, Complex64)>,
    {
        let mut pairs: Vec<(i64, Complex64)> = entries.into_iter().collect();
        if let Some((n, c)) = pairs.iter().find(|(_, c)| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::Argument(format!("non-finite coefficient {c} at index {n}")));
        }
        pairs.sort_unstable_by_key(|(n, _)| *n);
        if let Some(w) = pairs.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::Argument(format!("duplicate index {}", w[0].0)));
        }
        let (support, coeffs) = pairs.into_iter().unzip();
        Ok(Self::from_parts(support, coeffs, 0.0))
    }

    pub fn from_real<I>(entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, f64)>,
    {
        Self::from_entries(entries.into_iter().map(|(n, c)| (n, Complex64::new(c, 0.0))))
    }

    /// The truncated fast-growth vector `Σ_{0<|n|≤k} |n|^{-1} b_n`.
    pub fn harmonic(k: i64) -> Result<Self> {
        if k < 1 {
            return Err(Error::Argument(format!("harmonic truncation must be >= 1, got {k}")));
        }
        Self::from_real((-k..=k).filter(|n| *n != 0).map(|n| (n, 1.0 / n.unsigned_abs() as f64)))
    }

    /// Assembles a vector from sorted parts and restores the invariants.
    pub(crate) fn from_parts(support: Vec<i64>, coeffs: Vec<Complex64>, log_scale: f64) -> Self {
        debug_assert_eq!(support.len(), coeffs.len());
        debug_assert!(support.windows(2).all(|w| w[0] < w[1]));
        let (support, coeffs): (Vec<i64>, Vec<Complex64>) =
            support.into_iter().zip(coeffs).filter(|(_, c)| c.norm_sqr() > 0.0).unzip();
        if support.is_empty() {
            return Self::zero();
        }
        let max = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        // Power-of-two rescaling is exact in binary floating point.
        let k = max.log2().round() as i32;
        let (coeffs, log_scale) = if k == 0 {
            (coeffs, log_scale)
        } else {
            let factor = 2f64.powi(-k);
            (coeffs.into_iter().map(|c| c * factor).collect(), log_scale + f64::from(k) * LN_2)
        };
        Self { support, coeffs, log_scale }
    }

    /// Multiplies the vector by `e^{delta}`.
    pub fn scale_log(mut self, delta: f64) -> Self {
        if !self.is_zero() {
            self.log_scale += delta;
        }
        self
    }

    /// Multiplies every coefficient by a nonzero complex scalar.
    pub fn scale(self, factor: Complex64) -> Self {
        let coeffs = self.coeffs.into_iter().map(|c| c * factor).collect();
        Self::from_parts(self.support, coeffs, self.log_scale)
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn support(&self) -> &[i64] {
        &self.support
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn log_scale(&self) -> f64 {
        self.log_scale
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.support.iter().copied().zip(self.coeffs.iter().copied())
    }

    /// `ln |(b_n, f)|` for each stored index, log-scale included.
    pub fn log_magnitudes(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.iter().map(move |(n, c)| (n, c.norm().ln() + self.log_scale))
    }

    /// `(b_n, f)` as a plain complex number (may overflow for huge scales).
    pub fn coefficient(&self, n: i64) -> Complex64 {
        match self.support.binary_search(&n) {
            Ok(i) => self.coeffs[i] * self.log_scale.exp(),
            Err(_) => Complex64::new(0.0, 0.0),
        }
    }

    /// `ln ‖f‖`.
    pub fn lognorm(&self) -> Result<f64> {
        if self.is_zero() {
            return Err(Error::UndefinedNorm);
        }
        let mags: Vec<f64> = self.coeffs.iter().map(|c| c.norm().ln()).collect();
        Ok(log_norm_from_log_magnitudes(&mags) + self.log_scale)
    }

    /// `f + g`, aligned on the larger of the two log-scales.
    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let scale = self.log_scale.max(other.log_scale);
        let a = (self.log_scale - scale).exp();
        let b = (other.log_scale - scale).exp();
        let mut support = Vec::with_capacity(self.len() + other.len());
        let mut coeffs = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.len() || j < other.len() {
            let left = self.support.get(i).copied();
            let right = other.support.get(j).copied();
            match (left, right) {
                (Some(n), Some(m)) if n == m => {
                    let sum = self.coeffs[i] * a + other.coeffs[j] * b;
                    let largest = (self.coeffs[i].norm() * a).max(other.coeffs[j].norm() * b);
                    if sum.norm() > CANCELLATION_FLOOR * largest {
                        support.push(n);
                        coeffs.push(sum);
                    }
                    i += 1;
                    j += 1;
                }
                (Some(n), Some(m)) if n < m => {
                    support.push(n);
                    coeffs.push(self.coeffs[i] * a);
                    i += 1;
                }
                (Some(n), None) => {
                    support.push(n);
                    coeffs.push(self.coeffs[i] * a);
                    i += 1;
                }
                (_, Some(m)) => {
                    support.push(m);
                    coeffs.push(other.coeffs[j] * b);
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        Self::from_parts(support, coeffs, scale)
    }
}

/// `(x, y) = Σ_n conj(x_n) y_n`.
///
/// Products are formed in the log domain so that `x` and `y` carrying
/// opposite extreme scales (as `U^N x` and `U^{*-N} y` do) do not underflow.
/// A sum smaller than [`CANCELLATION_FLOOR`] times its largest term is
/// returned as exact zero.
pub fn inner_product(x: &ScaledVector, y: &ScaledVector) -> Complex64 {
    let mut log_mags = Vec::new();
    let mut phases = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < x.len() && j < y.len() {
        match x.support[i].cmp(&y.support[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                let (a, b) = (x.coeffs[i], y.coeffs[j]);
                let (na, nb) = (a.norm(), b.norm());
                log_mags.push(na.ln() + nb.ln() + x.log_scale + y.log_scale);
                phases.push((a.conj() / na) * (b / nb));
                i += 1;
                j += 1;
            }
        }
    }
    if log_mags.is_empty() {
        return Complex64::new(0.0, 0.0);
    }
    let top = log_mags.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let sum: Complex64 = log_mags.iter().zip(&phases).map(|(m, p)| p * (m - top).exp()).sum();
    if sum.norm() < CANCELLATION_FLOOR {
        return Complex64::new(0.0, 0.0);
    }
    sum * top.exp()
}

/// `ln ‖x ⊕ y‖` from the two component log-norms (`-∞` for a zero component).
pub fn pair_lognorm(a: f64, b: f64) -> f64 {
    0.5 * log_sum_exp(&[2.0 * a, 2.0 * b])
}
