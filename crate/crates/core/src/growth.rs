//! Orbit profiles, Lyapunov surrogates and finite-horizon growth-class
//! evidence.
//!
//! The classes are `S₀(T)` (orbits tending to zero), `S(T)` (bounded orbits)
//! and `S₊(T)` (orbits below `C a^N` for every `a > 1`). Membership
//! quantifies over all `N ≥ 0`, so a verdict computed from a finite record
//! is evidence only: a VIOLATED verdict certifies that no bound with
//! `C = e^{slack} ‖f‖` holds, a CONSISTENT verdict certifies nothing.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::shift_ops::{inner_product, orbit_lognorm, PowerMode, ScaledVector};
use crate::weights::{checkpoint_indices, Checkpoint, WeightFamily, WeightSequence};

/// Default slack, in natural-log units.
pub const DEFAULT_SLACK: f64 = 10.0;
/// Default number of checkpoint pairs (`n_3 = 8191`, `m_3 = 32767`).
pub const DEFAULT_K_MAX: u32 = 3;
/// Fraction of a record treated as the tail by the `S₀` test.
pub const S_ZERO_TAIL_FRACTION: f64 = 0.25;
/// Relative slack of the duality inequality check.
pub const DUALITY_TOLERANCE: f64 = 1e-10;

/// Something whose norm along an orbit can be sampled at integer times.
pub trait Orbit: Sync {
    /// `ln ‖T^N f‖`.
    fn lognorm_at(&self, exponent: i64) -> Result<f64>;
    fn system_id(&self) -> String;
    fn vector_label(&self) -> String;
}

/// The orbit of `f` under `U` (forward) or under `U^{*-1}` (adjoint-inverse).
#[derive(Debug, Clone)]
pub struct ShiftOrbit<'a> {
    pub seq: &'a WeightSequence,
    pub f: &'a ScaledVector,
    pub mode: PowerMode,
    pub label: String,
}

impl<'a> ShiftOrbit<'a> {
    pub fn new(seq: &'a WeightSequence, f: &'a ScaledVector, mode: PowerMode, label: impl Into<String>) -> Self {
        Self { seq, f, mode, label: label.into() }
    }
}

impl Orbit for ShiftOrbit<'_> {
    fn lognorm_at(&self, exponent: i64) -> Result<f64> {
        orbit_lognorm(self.seq, self.f, exponent, self.mode)
    }

    fn system_id(&self) -> String {
        format!("{}/{}", self.seq.label(), self.mode.label())
    }

    fn vector_label(&self) -> String {
        self.label.clone()
    }
}

/// Sampling times `min, min + stride, ... ≤ max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TimeRange {
    pub min: i64,
    pub max: i64,
    pub stride: i64,
}

impl TimeRange {
    pub fn new(min: i64, max: i64, stride: i64) -> Result<Self> {
        if min > max {
            return Err(Error::Argument(format!("empty time range [{min}, {max}]")));
        }
        if stride < 1 {
            return Err(Error::Argument(format!("stride must be >= 1, got {stride}")));
        }
        Ok(Self { min, max, stride })
    }

    pub fn times(&self) -> impl Iterator<Item = i64> {
        let Self { min, max, stride } = *self;
        (0..)
            .map(move |k: i64| k.checked_mul(stride).and_then(|d| min.checked_add(d)))
            .take_while(move |t| t.is_some_and(|t| t <= max))
            .flatten()
    }

    pub fn coverage(&self) -> Coverage {
        if self.min >= 0 {
            Coverage::Forward
        } else if self.max <= 0 {
            Coverage::Backward
        } else {
            Coverage::TwoSided
        }
    }
}

/// Which time directions a record covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coverage {
    TwoSided,
    Forward,
    Backward,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitSample {
    pub exponent: i64,
    pub lognorm: f64,
}

/// `N ↦ ln ‖T^N f‖` at strictly increasing times.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitRecord {
    pub system: String,
    pub vector: String,
    pub coverage: Coverage,
    samples: Vec<OrbitSample>,
}

impl OrbitRecord {
    /// Builds a record from samples, which must have strictly increasing times.
    pub fn new(system: impl Into<String>, vector: impl Into<String>, samples: Vec<OrbitSample>) -> Result<Self> {
        if samples.windows(2).any(|w| w[0].exponent >= w[1].exponent) {
            return Err(Error::Argument("record times must be strictly increasing".into()));
        }
        let coverage = match (samples.first(), samples.last()) {
            (Some(first), Some(last)) if first.exponent < 0 && last.exponent > 0 => Coverage::TwoSided,
            (Some(first), _) if first.exponent >= 0 => Coverage::Forward,
            (Some(_), _) => Coverage::Backward,
            (None, _) => Coverage::Forward,
        };
        Ok(Self { system: system.into(), vector: vector.into(), coverage, samples })
    }

    pub fn samples(&self) -> &[OrbitSample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn lognorm_at(&self, exponent: i64) -> Option<f64> {
        self.samples.binary_search_by_key(&exponent, |s| s.exponent).ok().map(|i| self.samples[i].lognorm)
    }

    /// The last sampled time.
    pub fn horizon(&self) -> i64 {
        self.samples.last().map_or(0, |s| s.exponent)
    }
}

/// Samples `ln ‖T^N f‖` over `range` through the closed-form norm, so each
/// sample costs `O(|support|)` regardless of `N`.
pub fn orbit_profile<O: Orbit>(orbit: &O, range: TimeRange) -> Result<OrbitRecord> {
    let times: Vec<i64> = range.times().collect();
    let samples = times
        .par_iter()
        .map(|&exponent| Ok(OrbitSample { exponent, lognorm: orbit.lognorm_at(exponent)? }))
        .collect::<Result<Vec<_>>>()?;
    let mut record = OrbitRecord::new(orbit.system_id(), orbit.vector_label(), samples)?;
    record.coverage = range.coverage();
    Ok(record)
}

/// Finite-horizon Lyapunov surrogates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LyapunovEstimate {
    /// `max ln‖T^N f‖ / N` over the forward tail window.
    pub forward: Option<f64>,
    /// `max ln‖T^N f‖ / |N|` over the backward tail window.
    pub backward: Option<f64>,
    /// Least-squares slope of `ln‖T^N f‖` against `|N|` on the same windows
    /// (diagnostic only).
    pub forward_slope: Option<f64>,
    pub backward_slope: Option<f64>,
}

impl LyapunovEstimate {
    /// `(λ̂₊, λ̂₋)`, with `NaN` for an uncovered side.
    pub fn pair(&self) -> (f64, f64) {
        (self.forward.unwrap_or(f64::NAN), self.backward.unwrap_or(f64::NAN))
    }
}

fn least_squares_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// The last `fraction` of a side (by `|N|`), as `(|N|, lognorm)` pairs.
fn tail_window(side: &[(f64, f64)], fraction: f64) -> &[(f64, f64)] {
    let keep = ((side.len() as f64 * fraction).ceil() as usize).clamp(1, side.len());
    &side[side.len() - keep..]
}

fn side_estimate(side: &[(f64, f64)], fraction: f64) -> (f64, Option<f64>) {
    let tail = tail_window(side, fraction);
    let limsup = tail.iter().map(|(t, l)| l / t).fold(f64::NEG_INFINITY, f64::max);
    (limsup, least_squares_slope(tail))
}

/// `(λ̂₊, λ̂₋)` from the tail `fit_window` fraction of each covered side.
/// Every covered side needs at least 3 samples with `N ≠ 0`.
pub fn lyapunov_estimate(record: &OrbitRecord, fit_window: f64) -> Result<LyapunovEstimate> {
    if !(fit_window > 0.0 && fit_window <= 1.0) {
        return Err(Error::Argument(format!("fit window must lie in (0, 1], got {fit_window}")));
    }
    let forward: Vec<(f64, f64)> =
        record.samples.iter().filter(|s| s.exponent > 0).map(|s| (s.exponent as f64, s.lognorm)).collect();
    let mut backward: Vec<(f64, f64)> = record
        .samples
        .iter()
        .filter(|s| s.exponent < 0)
        .map(|s| (s.exponent.unsigned_abs() as f64, s.lognorm))
        .collect();
    backward.reverse();

    let (need_forward, need_backward) = match record.coverage {
        Coverage::TwoSided => (true, true),
        Coverage::Forward => (true, false),
        Coverage::Backward => (false, true),
    };
    for (needed, side, name) in [(need_forward, &forward, "forward"), (need_backward, &backward, "backward")] {
        if needed && side.len() < 3 {
            return Err(Error::Argument(format!("{name} side has {} samples, need at least 3", side.len())));
        }
    }
    let mut estimate = LyapunovEstimate { forward: None, backward: None, forward_slope: None, backward_slope: None };
    if need_forward {
        let (l, s) = side_estimate(&forward, fit_window);
        estimate.forward = Some(l);
        estimate.forward_slope = s;
    }
    if need_backward {
        let (l, s) = side_estimate(&backward, fit_window);
        estimate.backward = Some(l);
        estimate.backward_slope = s;
    }
    Ok(estimate)
}

/// The growth class a record is tested against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GrowthTest {
    /// `‖T^N f‖ → 0`.
    SZero,
    /// `‖T^N f‖ ≤ C`.
    SBounded,
    /// `‖T^N f‖ ≤ C a^N` for the given `a > 1`.
    SPlus { rate: f64 },
}

impl GrowthTest {
    pub fn label(&self) -> &'static str {
        match self {
            GrowthTest::SZero => "S_ZERO",
            GrowthTest::SBounded => "S_BOUNDED",
            GrowthTest::SPlus { .. } => "S_PLUS",
        }
    }

    pub fn rate(&self) -> Option<f64> {
        match self {
            GrowthTest::SPlus { rate } => Some(*rate),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Consistent,
    Violated,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::Consistent => "CONSISTENT",
            Verdict::Violated => "VIOLATED",
        }
    }
}

/// Finite-horizon evidence for or against membership in a growth class.
/// `margin > 0` exactly when the verdict is VIOLATED.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthVerdict {
    pub test: GrowthTest,
    pub slack: f64,
    pub verdict: Verdict,
    /// Time at which `margin` is attained.
    pub witness: i64,
    pub margin: f64,
    pub horizon: i64,
    pub lyapunov: Option<LyapunovEstimate>,
}

/// Tests the forward part of `record` (which must include `N = 0`).
///
/// - `S_PLUS(a)`: VIOLATED iff `max_N [ln‖T^N f‖ - N ln a] - ln‖f‖ > slack`.
/// - `S_BOUNDED`: VIOLATED iff `max_N ln‖T^N f‖ - ln‖f‖ > slack`.
/// - `S_ZERO`: CONSISTENT iff every sample in the last quarter lies below
///   `ln‖f‖ - slack` and the least-squares trend over that quarter is not
///   increasing.
pub fn classify_growth(record: &OrbitRecord, test: GrowthTest, slack: f64) -> Result<GrowthVerdict> {
    if !slack.is_finite() {
        return Err(Error::Argument(format!("slack must be finite, got {slack}")));
    }
    let forward: Vec<OrbitSample> = record.samples.iter().copied().filter(|s| s.exponent >= 0).collect();
    let origin = match forward.first() {
        Some(s) if s.exponent == 0 => s.lognorm,
        _ => return Err(Error::Argument("record must contain the sample at N = 0".into())),
    };
    if forward.len() < 2 {
        return Err(Error::Argument("record needs at least one sample with N > 0".into()));
    }

    let peak_excess = |penalty: f64| {
        forward
            .iter()
            .map(|s| (s.lognorm - s.exponent as f64 * penalty - origin, s.exponent))
            .fold((f64::NEG_INFINITY, 0), |a, b| if b.0 > a.0 { b } else { a })
    };
    let (margin, witness) = match test {
        GrowthTest::SPlus { rate } => {
            if !(rate.is_finite() && rate > 1.0) {
                return Err(Error::Argument(format!("S_PLUS rate must be > 1, got {rate}")));
            }
            let (excess, at) = peak_excess(rate.ln());
            (excess - slack, at)
        }
        GrowthTest::SBounded => {
            let (excess, at) = peak_excess(0.0);
            (excess - slack, at)
        }
        GrowthTest::SZero => {
            let keep = ((forward.len() as f64 * S_ZERO_TAIL_FRACTION).ceil() as usize).clamp(2, forward.len());
            let tail = &forward[forward.len() - keep..];
            let threshold = origin - slack;
            let (excess, at) = tail
                .iter()
                .map(|s| (s.lognorm - threshold, s.exponent))
                .fold((f64::NEG_INFINITY, 0), |a, b| if b.0 > a.0 { b } else { a });
            let points: Vec<(f64, f64)> = tail.iter().map(|s| (s.exponent as f64, s.lognorm)).collect();
            let span = (tail[tail.len() - 1].exponent - tail[0].exponent) as f64;
            let trend = least_squares_slope(&points).unwrap_or(0.0) * span;
            if trend > excess {
                (trend, tail[tail.len() - 1].exponent)
            } else {
                (excess, at)
            }
        }
    };
    let verdict = if margin > 0.0 { Verdict::Violated } else { Verdict::Consistent };
    let lyapunov = lyapunov_estimate(record, 0.5).ok();
    Ok(GrowthVerdict { test, slack, verdict, witness, margin, horizon: record.horizon(), lyapunov })
}

/// Margins of the oscillating family at one checkpoint pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WitnessRow {
    pub k: u32,
    pub peak: i64,
    pub trough: i64,
    /// `L(n_k) - n_k ln(c+1)`: `|u_N| ≤ M (c+1)^N` fails.
    pub growth: f64,
    /// `-L(m_k) - m_k ln(c+1)`: `|u_N|^{-1} ≤ M (c+1)^N` fails.
    pub decay: f64,
    /// `L(-n_k) - n_k ln(c+1)`: `|u_{-N}| ≤ M (c+1)^N` fails.
    pub mirrored_growth: f64,
    /// `-L(-m_k) - m_k ln(c+1)`: `|u_{-N}|^{-1} ≤ M (c+1)^N` fails.
    pub mirrored_decay: f64,
}

impl WitnessRow {
    pub fn margins(&self) -> [f64; 4] {
        [self.growth, self.decay, self.mirrored_growth, self.mirrored_decay]
    }

    /// The weakest of the four margins.
    pub fn min_margin(&self) -> f64 {
        self.margins().into_iter().fold(f64::INFINITY, f64::min)
    }
}

/// Checkpoint margins against the bound `M (c+1)^N` for the oscillating
/// family. Positive margins that grow without bound in `k` rule out every
/// such bound for `U`, `U^{*-1}`, `U^{-1}` and `U^*` simultaneously.
pub fn krein_witness(seq: &WeightSequence, k_max: u32) -> Result<Vec<WitnessRow>> {
    let c = match seq.family() {
        WeightFamily::Krein { c } => *c,
        _ => return Err(Error::Argument(format!("checkpoint witness needs the krein family, got {}", seq.label()))),
    };
    let rate = (c + 1.0).ln();
    let peaks = checkpoint_indices(Checkpoint::Peak, k_max)?;
    let troughs = checkpoint_indices(Checkpoint::Trough, k_max)?;
    peaks
        .into_iter()
        .zip(troughs)
        .zip(1..)
        .map(|((peak, trough), k)| {
            let (nf, mf) = (peak as f64, trough as f64);
            Ok(WitnessRow {
                k,
                peak,
                trough,
                growth: seq.log_weight(peak)? - nf * rate,
                decay: -seq.log_weight(trough)? - mf * rate,
                mirrored_growth: seq.log_weight(-peak)? - nf * rate,
                mirrored_decay: -seq.log_weight(-trough)? - mf * rate,
            })
        })
        .collect()
}

/// True when every margin is positive and each of the four strictly
/// increases with `k`.
pub fn witness_holds(rows: &[WitnessRow]) -> bool {
    let positive = rows.iter().all(|r| r.margins().iter().all(|m| *m > 0.0));
    let increasing = rows.windows(2).all(|w| w[0].margins().iter().zip(w[1].margins()).all(|(a, b)| b > *a));
    !rows.is_empty() && positive && increasing
}

/// Result of checking `|(x, y)| ≤ ‖U^N x‖ ‖U^{*-N} y‖` for `0 ≤ N ≤ N_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct DualityReport {
    /// `ln |(x, y)|` (`-∞` when orthogonal).
    pub log_inner: f64,
    /// `(N, ln bound - ln |(x, y)|)` at the tightest bound.
    pub tightest: Option<(i64, f64)>,
    /// Largest relative change of `|(U^N x, U^{*-N} y)|` against `|(x, y)|`.
    pub max_identity_deviation: f64,
    pub violations: usize,
    pub holds: bool,
}

pub fn duality_check(seq: &WeightSequence, x: &ScaledVector, y: &ScaledVector, horizon: i64) -> Result<DualityReport> {
    if horizon < 0 {
        return Err(Error::Argument(format!("horizon must be >= 0, got {horizon}")));
    }
    let inner = inner_product(x, y);
    let log_inner = inner.norm().ln();
    if x.is_zero() || y.is_zero() {
        return Ok(DualityReport {
            log_inner,
            tightest: None,
            max_identity_deviation: 0.0,
            violations: 0,
            holds: true,
        });
    }
    let allowance = DUALITY_TOLERANCE.ln_1p();
    let mut tightest: Option<(i64, f64)> = None;
    let mut violations = 0;
    let mut max_identity_deviation: f64 = 0.0;
    for n in 0..=horizon {
        let bound =
            orbit_lognorm(seq, x, n, PowerMode::Forward)? + orbit_lognorm(seq, y, n, PowerMode::AdjointInverse)?;
        let gap = bound - log_inner;
        if gap < -allowance {
            violations += 1;
        }
        if tightest.is_none_or(|(_, g)| gap < g) {
            tightest = Some((n, gap));
        }
        let moved = inner_product(
            &crate::shift_ops::apply_power(seq, x, crate::PowerAction::forward(n))?,
            &crate::shift_ops::apply_power(seq, y, crate::PowerAction::adjoint_inverse(n))?,
        );
        max_identity_deviation =
            max_identity_deviation.max((moved.norm() - inner.norm()).abs() / inner.norm().max(1.0));
    }
    Ok(DualityReport { log_inner, tightest, max_identity_deviation, violations, holds: violations == 0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{sample_vector, seeded_rng};
    use num_complex::Complex64;
    use proptest::prelude::*;
    use std::f64::consts::LN_2;

    fn profile(seq: &WeightSequence, f: &ScaledVector, mode: PowerMode, min: i64, max: i64) -> OrbitRecord {
        orbit_profile(&ShiftOrbit::new(seq, f, mode, "f"), TimeRange::new(min, max, 1).unwrap()).unwrap()
    }

    #[test]
    fn time_ranges() {
        let r = TimeRange::new(-4, 5, 3).unwrap();
        assert_eq!(r.times().collect::<Vec<_>>(), vec![-4, -1, 2, 5]);
        assert_eq!(r.coverage(), Coverage::TwoSided);
        assert_eq!(TimeRange::new(0, 3, 1).unwrap().coverage(), Coverage::Forward);
        assert_eq!(TimeRange::new(-3, 0, 1).unwrap().coverage(), Coverage::Backward);
        assert!(TimeRange::new(2, 1, 1).is_err());
        assert!(TimeRange::new(0, 1, 0).is_err());
        let edge = TimeRange::new(i64::MAX - 2, i64::MAX, 2).unwrap();
        assert_eq!(edge.times().count(), 2);
    }

    #[test]
    fn record_times_must_increase() {
        let s = |exponent| OrbitSample { exponent, lognorm: 0.0 };
        assert!(OrbitRecord::new("s", "v", vec![s(0), s(0)]).is_err());
        assert!(OrbitRecord::new("s", "v", vec![s(1), s(0)]).is_err());
        assert!(OrbitRecord::new("s", "v", vec![s(-1), s(0), s(2)]).is_ok());
    }

    #[test]
    fn orbit_profile_examples() {
        let geo = WeightSequence::geometric(1.0).unwrap();
        let b0 = ScaledVector::basis(0);
        let rec = profile(&geo, &b0, PowerMode::Forward, 0, 10);
        assert_eq!(rec.len(), 11);
        for s in rec.samples() {
            assert!((s.lognorm + s.exponent as f64 * LN_2).abs() < 1e-13);
        }
        assert_eq!(rec.system, "geometric(c=1)/forward");

        let krein = WeightSequence::krein(1.0).unwrap();
        let rec = profile(&krein, &b0, PowerMode::Forward, 0, 127);
        assert!((rec.lognorm_at(31).unwrap() - 31.0 * 3f64.ln()).abs() < 1e-11);
        assert!((rec.lognorm_at(127).unwrap() + 127.0 * 3f64.ln()).abs() < 1e-10);
        assert_eq!(rec.lognorm_at(0).unwrap(), 0.0);
    }

    #[test]
    fn geometric_records_are_exact() {
        for c in [1.0, 2.0] {
            let geo = WeightSequence::geometric(c).unwrap();
            let base = (2.0 * c).ln();
            for n in -20i64..=20 {
                let rec = profile(&geo, &ScaledVector::basis(n), PowerMode::Forward, -60, 60);
                for s in rec.samples() {
                    let want = (n.abs() - (n + s.exponent).abs()) as f64 * base;
                    assert!((s.lognorm - want).abs() <= 1e-12 * want.abs().max(1.0));
                }
            }
        }
    }

    #[test]
    fn harmonic_record_is_symmetric() {
        let geo = WeightSequence::geometric(1.0).unwrap();
        let f = ScaledVector::harmonic(10_000).unwrap();
        let rec = profile(&geo, &f, PowerMode::Forward, -60, 60);
        for n in 1..=60 {
            let (up, down) = (rec.lognorm_at(n).unwrap(), rec.lognorm_at(-n).unwrap());
            assert!((up - down).abs() <= 1e-12 * up.abs().max(1.0));
        }
    }

    #[test]
    fn lyapunov_examples() {
        let geo = WeightSequence::geometric(1.0).unwrap();
        let rec = profile(&geo, &ScaledVector::basis(0), PowerMode::Forward, 0, 200);
        let est = lyapunov_estimate(&rec, 0.5).unwrap();
        assert!((est.forward.unwrap() + LN_2).abs() < 1e-13);
        assert!((est.forward_slope.unwrap() + LN_2).abs() < 1e-12);
        assert_eq!(est.backward, None);

        let f = ScaledVector::harmonic(10_000).unwrap();
        let rec = profile(&geo, &f, PowerMode::Forward, 0, 50);
        let est = lyapunov_estimate(&rec, 0.5).unwrap();
        assert!(est.forward.unwrap() >= LN_2 - 51f64.ln() / 100.0);

        let flat = WeightSequence::custom("flat", |_| 0.0, 0.0, 10).unwrap();
        let rec = profile(&flat, &ScaledVector::basis(0), PowerMode::Forward, -30, 30);
        assert_eq!(lyapunov_estimate(&rec, 0.5).unwrap().pair(), (0.0, 0.0));
    }

    #[test]
    fn lyapunov_needs_samples() {
        let geo = WeightSequence::geometric(1.0).unwrap();
        let rec = profile(&geo, &ScaledVector::basis(0), PowerMode::Forward, -2, 10);
        assert!(lyapunov_estimate(&rec, 0.5).is_err());
        let rec = profile(&geo, &ScaledVector::basis(0), PowerMode::Forward, 0, 2);
        assert!(lyapunov_estimate(&rec, 0.5).is_err());
        let rec = profile(&geo, &ScaledVector::basis(0), PowerMode::Forward, 0, 20);
        assert!(lyapunov_estimate(&rec, 0.0).is_err());
        assert!(lyapunov_estimate(&rec, 1.5).is_err());
    }

    #[test]
    fn classify_examples() {
        let mixed = WeightSequence::mixed();
        let b0 = ScaledVector::basis(0);
        let fwd = profile(&mixed, &b0, PowerMode::Forward, 0, 200);
        let v = classify_growth(&fwd, GrowthTest::SZero, 1.0).unwrap();
        assert_eq!(v.verdict, Verdict::Consistent);
        assert!(v.margin <= 0.0);

        let adj = profile(&mixed, &b0, PowerMode::AdjointInverse, 0, 200);
        let v = classify_growth(&adj, GrowthTest::SBounded, 1.0).unwrap();
        assert_eq!(v.verdict, Verdict::Violated);
        assert!((v.margin - (201f64.ln() - 1.0)).abs() < 1e-12);
        assert_eq!(v.witness, 200);

        let krein = WeightSequence::krein(1.0).unwrap();
        let rec = profile(&krein, &b0, PowerMode::Forward, 0, 8191);
        let v = classify_growth(&rec, GrowthTest::SPlus { rate: 2.0 }, DEFAULT_SLACK).unwrap();
        assert_eq!(v.verdict, Verdict::Violated);
        assert!(v.margin >= 3000.0);
        assert!((v.margin - (8191.0 * 1.5f64.ln() - 10.0)).abs() < 1e-6);
        assert_eq!(v.witness, 8191);
    }

    #[test]
    fn classify_rejects_bad_input() {
        let mixed = WeightSequence::mixed();
        let b0 = ScaledVector::basis(0);
        let rec = profile(&mixed, &b0, PowerMode::Forward, 1, 20);
        assert!(classify_growth(&rec, GrowthTest::SBounded, 1.0).is_err());
        let rec = profile(&mixed, &b0, PowerMode::Forward, 0, 20);
        assert!(classify_growth(&rec, GrowthTest::SPlus { rate: 1.0 }, 1.0).is_err());
        assert!(classify_growth(&rec, GrowthTest::SBounded, f64::NAN).is_err());
    }

    #[test]
    fn s_zero_flags_flat_tails() {
        let flat = WeightSequence::custom("flat", |_| 0.0, 0.0, 10).unwrap();
        let rec = profile(&flat, &ScaledVector::basis(0), PowerMode::Forward, 0, 40);
        let v = classify_growth(&rec, GrowthTest::SZero, 1.0).unwrap();
        assert_eq!(v.verdict, Verdict::Violated);
        assert!(v.margin > 0.0);
    }

    #[test]
    fn witness_examples() {
        let seq = WeightSequence::krein(1.0).unwrap();
        let rows = krein_witness(&seq, 3).unwrap();
        let step = 1.5f64.ln();
        assert!((rows[0].growth - 31.0 * step).abs() < 1e-11);
        assert!((rows[1].growth - 511.0 * step).abs() < 1e-9);
        assert!((rows[0].decay - 127.0 * step).abs() < 1e-10);
        assert_eq!(rows[0].growth, rows[0].mirrored_growth);
        assert_eq!(rows[0].min_margin(), rows[0].growth);
        assert!(witness_holds(&rows));
        assert!(krein_witness(&WeightSequence::mixed(), 2).is_err());
    }

    #[test]
    fn witness_monotone_for_several_c() {
        for c in [0.5, 1.0, 2.0] {
            let rows = krein_witness(&WeightSequence::krein(c).unwrap(), 4).unwrap();
            assert!(witness_holds(&rows), "c = {c}");
        }
    }

    #[test]
    fn duality_examples() {
        let b0 = ScaledVector::basis(0);
        for seq in [WeightSequence::krein(1.0).unwrap(), WeightSequence::mixed()] {
            let r = duality_check(&seq, &b0, &b0, 30).unwrap();
            assert!(r.holds);
            assert!(r.tightest.unwrap().1.abs() < 1e-12);
            let r = duality_check(&seq, &b0, &ScaledVector::basis(1), 30).unwrap();
            assert!(r.holds);
            assert_eq!(r.log_inner, f64::NEG_INFINITY);
        }

        let mixed = WeightSequence::mixed();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let x = ScaledVector::from_real([(0, s), (1, s)]).unwrap();
        let r = duality_check(&mixed, &x, &x, 50).unwrap();
        assert!(r.holds);
        // brute force: ‖W^N x‖² = (w_N² + w_{N+1}²)/2, ‖W^{*-N} x‖² = ((1/w_N)² + (w_1/w_{N+1})²)/2
        let (n, gap) = r.tightest.unwrap();
        let w = |k: i64| 1.0 / (k as f64 + 1.0);
        let brute = |k: i64| {
            let a = ((w(k).powi(2) + (w(k + 1) / w(1)).powi(2)) / 2.0).sqrt();
            let b = ((1.0 / w(k)).powi(2) + (w(1) / w(k + 1)).powi(2)) / 2.0;
            (a * b.sqrt()).ln()
        };
        assert!((gap - brute(n)).abs() < 1e-12);
        assert!(gap > 0.0 || n == 0);
        assert!(r.max_identity_deviation < 1e-12);
    }

    #[test]
    fn duality_on_random_pairs() {
        let mut rng = seeded_rng(77);
        for seq in
            [WeightSequence::krein(1.0).unwrap(), WeightSequence::geometric(1.0).unwrap(), WeightSequence::mixed()]
        {
            for _ in 0..30 {
                let x = sample_vector(&mut rng, true);
                let y = sample_vector(&mut rng, true);
                let r = duality_check(&seq, &x, &y, 50).unwrap();
                assert!(r.holds, "{r:?}");
                assert!(r.max_identity_deviation < 1e-10);
            }
        }
    }

    fn decreasing_record() -> impl Strategy<Value = OrbitRecord> {
        (
            prop_oneof![
                (1.0f64..3.0).prop_map(|c| WeightSequence::geometric(c).unwrap()),
                Just(WeightSequence::mixed()),
            ],
            0i64..20,
            20i64..400,
        )
            .prop_map(|(seq, n, horizon)| profile(&seq, &ScaledVector::basis(n), PowerMode::Forward, 0, horizon))
    }

    fn any_record() -> impl Strategy<Value = OrbitRecord> {
        (
            prop_oneof![
                (0.2f64..3.0).prop_map(|c| WeightSequence::krein(c).unwrap()),
                (1.0f64..3.0).prop_map(|c| WeightSequence::geometric(c).unwrap()),
                Just(WeightSequence::mixed()),
            ],
            -30i64..30,
            any::<bool>(),
            8i64..300,
        )
            .prop_map(|(seq, n, adjoint, horizon)| {
                let mode = if adjoint { PowerMode::AdjointInverse } else { PowerMode::Forward };
                profile(&seq, &ScaledVector::basis(n).scale(Complex64::new(0.7, 0.0)), mode, 0, horizon)
            })
    }

    proptest! {
        // S₀ ⊂ S ⊂ S₊ on records without a transient above the slack.
        #[test]
        fn classification_chain(rec in decreasing_record(), slack in 0.1f64..5.0, rate in 1.01f64..4.0) {
            let zero = classify_growth(&rec, GrowthTest::SZero, slack).unwrap();
            let bounded = classify_growth(&rec, GrowthTest::SBounded, slack).unwrap();
            let plus = classify_growth(&rec, GrowthTest::SPlus { rate }, slack).unwrap();
            if zero.verdict == Verdict::Consistent {
                prop_assert_eq!(bounded.verdict, Verdict::Consistent);
            }
            if bounded.verdict == Verdict::Consistent {
                prop_assert_eq!(plus.verdict, Verdict::Consistent);
            }
        }

        #[test]
        fn bounded_implies_subexponential(rec in any_record(), slack in 0.0f64..20.0, rate in 1.01f64..4.0) {
            let bounded = classify_growth(&rec, GrowthTest::SBounded, slack).unwrap();
            let plus = classify_growth(&rec, GrowthTest::SPlus { rate }, slack).unwrap();
            if bounded.verdict == Verdict::Consistent {
                prop_assert_eq!(plus.verdict, Verdict::Consistent);
            }
            for v in [&bounded, &plus] {
                prop_assert_eq!(v.margin > 0.0, v.verdict == Verdict::Violated);
            }
        }
    }
}
