//! The doubled operator `Û = U ⊕ U^{*-1}` on `H ⊕ H`.
//!
//! `Û` preserves both the indefinite form of `J: x ⊕ y ↦ y ⊕ x` and the
//! symplectic form of `𝒥: x ⊕ y ↦ y ⊕ (-x)`; the restriction of `Û` to
//! `H ⊕ {0}` is a copy of `U` and its restriction to `{0} ⊕ H` a copy of
//! `U^{*-1}`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::growth::{orbit_profile, Orbit, OrbitRecord, TimeRange};
use crate::logsum::log_norm_from_log_magnitudes;
use crate::sampling::{sample_doubled, seeded_rng};
use crate::shift_ops::{
    apply_power, inner_product, orbit_lognorm, pair_lognorm, PowerAction, PowerMode, ScaledVector, CANCELLATION_FLOOR,
};
use crate::weights::WeightSequence;

/// `x ⊕ y`. The components keep independent log-scales.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DoubledVector {
    pub x: ScaledVector,
    pub y: ScaledVector,
}

impl DoubledVector {
    pub fn new(x: ScaledVector, y: ScaledVector) -> Self {
        Self { x, y }
    }

    /// `f ⊕ 0`.
    pub fn first(f: ScaledVector) -> Self {
        Self { x: f, y: ScaledVector::zero() }
    }

    /// `0 ⊕ f`.
    pub fn second(f: ScaledVector) -> Self {
        Self { x: ScaledVector::zero(), y: f }
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    /// `ln ‖x ⊕ y‖`, summed over the entries of both components at once.
    pub fn lognorm(&self) -> Result<f64> {
        if self.is_zero() {
            return Err(Error::UndefinedNorm);
        }
        let mags: Vec<f64> = self.x.log_magnitudes().chain(self.y.log_magnitudes()).map(|(_, m)| m).collect();
        Ok(log_norm_from_log_magnitudes(&mags))
    }
}

/// Which of the two invariant forms to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormKind {
    /// `⟨v, J w⟩ = (x_v, y_w) + (y_v, x_w)`.
    JForm,
    /// `⟨v, 𝒥 w⟩ = (x_v, y_w) - (y_v, x_w)`.
    Symplectic,
}

impl FormKind {
    pub fn label(self) -> &'static str {
        match self {
            FormKind::JForm => "j-form",
            FormKind::Symplectic => "symplectic",
        }
    }
}

/// Which summand of `H ⊕ H` a vector is placed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Component {
    /// `H ⊕ {0}`, where `Û` acts as `U`.
    First,
    /// `{0} ⊕ H`, where `Û` acts as `U^{*-1}`.
    Second,
}

/// `Û^N v = U^N x ⊕ U^{*-N} y`.
pub fn apply_doubled(seq: &WeightSequence, v: &DoubledVector, exponent: i64) -> Result<DoubledVector> {
    Ok(DoubledVector {
        x: apply_power(seq, &v.x, PowerAction::forward(exponent))?,
        y: apply_power(seq, &v.y, PowerAction::adjoint_inverse(exponent))?,
    })
}

pub fn evaluate_form(kind: FormKind, v: &DoubledVector, w: &DoubledVector) -> Complex64 {
    let a = inner_product(&v.x, &w.y);
    let b = inner_product(&v.y, &w.x);
    let value = match kind {
        FormKind::JForm => a + b,
        FormKind::Symplectic => a - b,
    };
    if value.norm() < CANCELLATION_FLOOR * a.norm().max(b.norm()) {
        Complex64::new(0.0, 0.0)
    } else {
        value
    }
}

/// Outcome of a seeded verification sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub check: String,
    pub max_violation: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub samples: usize,
    pub horizon: i64,
    /// `(sample, N)` at the largest violation.
    pub worst: Option<(usize, i64)>,
}

/// Checks `|form(Û^N v, Û^N w) - form(v, w)| ≤ tolerance · (1 + |form(v, w)|)`
/// for `samples` seeded random pairs and every `|N| ≤ horizon`.
pub fn verify_form_preservation(
    seq: &WeightSequence,
    kind: FormKind,
    samples: usize,
    horizon: i64,
    seed: u64,
    tolerance: f64,
) -> Result<VerificationReport> {
    if samples == 0 {
        return Err(Error::Argument("at least one sample is required".into()));
    }
    if horizon < 0 {
        return Err(Error::Argument(format!("horizon must be >= 0, got {horizon}")));
    }
    let mut rng = seeded_rng(seed);
    let pairs: Vec<(DoubledVector, DoubledVector)> =
        (0..samples).map(|_| (sample_doubled(&mut rng, true), sample_doubled(&mut rng, true))).collect();

    let per_sample = pairs
        .par_iter()
        .enumerate()
        .map(|(i, (v, w))| {
            let reference = evaluate_form(kind, v, w);
            let mut worst = (0.0f64, 0i64);
            for n in -horizon..=horizon {
                let value = evaluate_form(kind, &apply_doubled(seq, v, n)?, &apply_doubled(seq, w, n)?);
                let violation = (value - reference).norm() / (1.0 + reference.norm());
                if violation > worst.0 {
                    worst = (violation, n);
                }
            }
            Ok((worst.0, i, worst.1))
        })
        .collect::<Result<Vec<_>>>()?;

    let (max_violation, worst) =
        per_sample.iter().fold((0.0, None), |acc, &(v, i, n)| if v > acc.0 { (v, Some((i, n))) } else { acc });
    Ok(VerificationReport {
        check: format!("{}-preservation/{}", kind.label(), seq.label()),
        max_violation,
        tolerance,
        pass: max_violation <= tolerance,
        samples,
        horizon,
        worst,
    })
}

/// The orbit of a doubled vector under `Û`, sampled through the closed-form
/// component norms.
#[derive(Debug, Clone)]
pub struct DoubledOrbit<'a> {
    pub seq: &'a WeightSequence,
    pub v: &'a DoubledVector,
    pub label: String,
}

impl Orbit for DoubledOrbit<'_> {
    fn lognorm_at(&self, exponent: i64) -> Result<f64> {
        if self.v.is_zero() {
            return Err(Error::UndefinedNorm);
        }
        let component = |f: &ScaledVector, mode| {
            if f.is_zero() {
                Ok(f64::NEG_INFINITY)
            } else {
                orbit_lognorm(self.seq, f, exponent, mode)
            }
        };
        let a = component(&self.v.x, PowerMode::Forward)?;
        let b = component(&self.v.y, PowerMode::AdjointInverse)?;
        Ok(pair_lognorm(a, b))
    }

    fn system_id(&self) -> String {
        format!("{}/doubled", self.seq.label())
    }

    fn vector_label(&self) -> String {
        self.label.clone()
    }
}

/// Orbit record of `f ⊕ 0` or `0 ⊕ f` under `Û`.
pub fn component_growth_profile(
    seq: &WeightSequence,
    component: Component,
    f: &ScaledVector,
    range: TimeRange,
) -> Result<OrbitRecord> {
    if f.is_zero() {
        return Err(Error::UndefinedNorm);
    }
    let (v, label) = match component {
        Component::First => (DoubledVector::first(f.clone()), "f+0"),
        Component::Second => (DoubledVector::second(f.clone()), "0+f"),
    };
    orbit_profile(&DoubledOrbit { seq, v: &v, label: label.to_string() }, range)
}
