//! The continuous-time transport semigroup
//! `(V(t) f)(x) = (v(x) / v(x - t)) f(x - t)` on a uniform grid, and its
//! generator `H f = -f' + (v'/v) f`.
//!
//! On a grid whose spacing divides `t` the semigroup is an exact index shift
//! followed by a pointwise multiplier, so no interpolation is involved and
//! the composition law `V(t) V(τ) = V(t + τ)` holds to rounding.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::logsum::log_sum_exp;

/// Default grid: `[-100, 100]` with spacing `2^-7`.
pub const DEFAULT_X_MIN: f64 = -100.0;
pub const DEFAULT_X_MAX: f64 = 100.0;
pub const DEFAULT_DX: f64 = 1.0 / 128.0;

/// Relative tolerance for deciding that `t` is a multiple of `dx`.
const ALIGNMENT_TOLERANCE: f64 = 1e-9;

/// The three continuous weights `v(x)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ContinuousWeight {
    /// `v(x) = e^{|x| sin(ln(1+|x|))}`.
    Oscillating,
    /// `v(x) = e^{-|x|}`.
    Geometric,
    /// `v(x) = e^x` for `x < 0`, `1/(x+1)` for `x ≥ 0`.
    Mixed,
}

impl ContinuousWeight {
    pub const ALL: [ContinuousWeight; 3] = [Self::Oscillating, Self::Geometric, Self::Mixed];

    pub fn label(self) -> &'static str {
        match self {
            Self::Oscillating => "oscillating",
            Self::Geometric => "geometric",
            Self::Mixed => "mixed",
        }
    }

    /// `ln v(x)`.
    pub fn log_weight(self, x: f64) -> f64 {
        match self {
            Self::Oscillating => x.abs() * x.abs().ln_1p().sin(),
            Self::Geometric => -x.abs(),
            Self::Mixed => {
                if x < 0.0 {
                    x
                } else {
                    -x.ln_1p()
                }
            }
        }
    }

    /// `v'(x) / v(x)` from the differentiated closed form. At `x = 0` the
    /// oscillating and geometric drifts take `sgn 0 = 0`; the mixed drift
    /// takes its left limit `1`.
    pub fn drift(self, x: f64) -> f64 {
        let sgn = if x > 0.0 {
            1.0
        } else if x < 0.0 {
            -1.0
        } else {
            0.0
        };
        match self {
            Self::Oscillating => {
                let a = x.abs();
                let phase = a.ln_1p();
                (phase.sin() + a / (1.0 + a) * phase.cos()) * sgn
            }
            Self::Geometric => -sgn,
            Self::Mixed => {
                if x <= 0.0 {
                    1.0
                } else {
                    -1.0 / (x + 1.0)
                }
            }
        }
    }
}

/// How [`evolve`] treats a time that is not a multiple of the grid spacing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Alignment {
    /// Reject non-aligned times.
    #[default]
    Strict,
    /// Linearly interpolate the transported samples and mark the output.
    Permissive,
}

/// Samples `e^{log_scale} · values[i]` at `x_min + i·dx`.
///
/// `filled[i]` marks points whose value was transported in from outside the
/// grid (and set to zero) at some earlier step.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    x_min: f64,
    dx: f64,
    values: Vec<Complex64>,
    log_scale: f64,
    filled: Vec<bool>,
    interpolated: bool,
}

impl GridFunction {
    pub fn new(x_min: f64, dx: f64, values: Vec<Complex64>) -> Result<Self> {
        if !(dx.is_finite() && dx > 0.0) || !x_min.is_finite() {
            return Err(Error::Argument(format!("invalid grid x_min = {x_min}, dx = {dx}")));
        }
        if values.len() < 2 {
            return Err(Error::Argument(format!("a grid needs at least 2 points, got {}", values.len())));
        }
        if values.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::Argument("grid values must be finite".into()));
        }
        let filled = vec![false; values.len()];
        Ok(Self { x_min, dx, values, log_scale: 0.0, filled, interpolated: false })
    }

    /// Samples `f` at `x_min, x_min + dx, ...` up to and including `x_max`.
    pub fn sample<F: Fn(f64) -> f64>(x_min: f64, x_max: f64, dx: f64, f: F) -> Result<Self> {
        if !(dx.is_finite() && dx > 0.0) || x_max.is_nan() || x_min.is_nan() || x_max <= x_min {
            return Err(Error::Argument(format!("invalid grid [{x_min}, {x_max}] with dx = {dx}")));
        }
        let count = ((x_max - x_min) / dx + 1e-9).floor() as usize + 1;
        let values = (0..count).map(|i| Complex64::new(f(x_min + i as f64 * dx), 0.0)).collect();
        Self::new(x_min, dx, values)
    }

    /// A Gaussian bump `exp(-(x - center)² / (2 width²))`.
    pub fn gaussian(x_min: f64, x_max: f64, dx: f64, center: f64, width: f64) -> Result<Self> {
        if width.is_nan() || width <= 0.0 {
            return Err(Error::Argument(format!("bump width must be > 0, got {width}")));
        }
        Self::sample(x_min, x_max, dx, |x| (-(x - center).powi(2) / (2.0 * width * width)).exp())
    }

    /// The indicator of `[lo, hi]`.
    pub fn indicator(x_min: f64, x_max: f64, dx: f64, lo: f64, hi: f64) -> Result<Self> {
        Self::sample(x_min, x_max, dx, |x| if lo <= x && x <= hi { 1.0 } else { 0.0 })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.dx
    }

    pub fn log_scale(&self) -> f64 {
        self.log_scale
    }

    /// Stored mantissas; the represented value is `values[i] · e^{log_scale}`.
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn filled(&self) -> &[bool] {
        &self.filled
    }

    /// True if any step used linear interpolation.
    pub fn interpolated(&self) -> bool {
        self.interpolated
    }

    /// The represented value at grid point `i`.
    pub fn value(&self, i: usize) -> Complex64 {
        self.values[i] * self.log_scale.exp()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.norm_sqr() == 0.0)
    }

    /// Multiplies the function by `e^{delta}`.
    pub fn scale_log(mut self, delta: f64) -> Self {
        self.log_scale += delta;
        self
    }
}

fn shift_alignment(t: f64, dx: f64) -> Option<i64> {
    let steps = t / dx;
    let rounded = steps.round();
    ((steps - rounded).abs() <= ALIGNMENT_TOLERANCE * rounded.abs().max(1.0)).then_some(rounded as i64)
}

/// Assembles an evolved function from per-point `(value, log multiplier)`
/// pairs, factoring the largest magnitude into the log-scale.
fn assemble(template: &GridFunction, points: Vec<Option<(Complex64, f64)>>, interpolated: bool) -> GridFunction {
    let top = points
        .iter()
        .flatten()
        .filter(|(v, _)| v.norm_sqr() > 0.0)
        .map(|(v, m)| v.norm().ln() + m)
        .fold(f64::NEG_INFINITY, f64::max);
    let shift = if top.is_finite() { top } else { 0.0 };
    let filled = points.iter().map(Option::is_none).collect();
    let values = points
        .into_iter()
        .map(|p| match p {
            Some((v, m)) if v.norm_sqr() > 0.0 => v * (m - shift).exp(),
            _ => Complex64::new(0.0, 0.0),
        })
        .collect();
    GridFunction {
        x_min: template.x_min,
        dx: template.dx,
        values,
        log_scale: template.log_scale + shift,
        filled,
        interpolated: template.interpolated || interpolated,
    }
}

/// `V(t) f`. Points whose source lies outside the grid (or was itself
/// filled) are zero-filled and flagged.
pub fn evolve(weight: ContinuousWeight, f: &GridFunction, t: f64, alignment: Alignment) -> Result<GridFunction> {
    if !t.is_finite() {
        return Err(Error::Argument(format!("time must be finite, got {t}")));
    }
    let len = f.len() as i64;
    match (shift_alignment(t, f.dx), alignment) {
        (Some(steps), _) => {
            if steps.unsigned_abs() >= f.len() as u64 {
                return Err(Error::Argument(format!(
                    "shift by {steps} points leaves no overlap with a {len}-point grid"
                )));
            }
            let points = (0..len)
                .map(|i| {
                    let src = i - steps;
                    if src < 0 || src >= len || f.filled[src as usize] {
                        return None;
                    }
                    let m = weight.log_weight(f.x(i as usize)) - weight.log_weight(f.x(src as usize));
                    Some((f.values[src as usize], m))
                })
                .collect();
            Ok(assemble(f, points, false))
        }
        (None, Alignment::Strict) => Err(Error::Argument(format!("t = {t} is not a multiple of dx = {}", f.dx))),
        (None, Alignment::Permissive) => {
            let points: Vec<_> = (0..f.len())
                .map(|i| {
                    let x = f.x(i);
                    let pos = (x - t - f.x_min) / f.dx;
                    let j = pos.floor();
                    if j < 0.0 || j + 1.0 > (f.len() - 1) as f64 {
                        return None;
                    }
                    let j = j as usize;
                    if f.filled[j] || f.filled[j + 1] {
                        return None;
                    }
                    let frac = pos - j as f64;
                    let v = f.values[j] * (1.0 - frac) + f.values[j + 1] * frac;
                    Some((v, weight.log_weight(x) - weight.log_weight(x - t)))
                })
                .collect();
            if points.iter().all(Option::is_none) {
                return Err(Error::Argument(format!("t = {t} leaves no overlap with the grid")));
            }
            Ok(assemble(f, points, true))
        }
    }
}

/// `V(τ)^{-1} f = V(-τ) f`.
pub fn evolve_inverse(
    weight: ContinuousWeight,
    f: &GridFunction,
    tau: f64,
    alignment: Alignment,
) -> Result<GridFunction> {
    evolve(weight, f, -tau, alignment)
}

/// `H f = -f' + d(x) f`, with `f'` by central differences in the interior
/// and one-sided differences at the two ends.
pub fn generator_apply(weight: ContinuousWeight, f: &GridFunction) -> Result<GridFunction> {
    let n = f.len();
    if n < 3 {
        return Err(Error::Argument(format!("generator needs at least 3 grid points, got {n}")));
    }
    let v = &f.values;
    let mut values = Vec::with_capacity(n);
    let mut filled = Vec::with_capacity(n);
    for i in 0..n {
        let (lo, hi) = match i {
            0 => (0, 1),
            i if i == n - 1 => (n - 2, n - 1),
            i => (i - 1, i + 1),
        };
        let derivative = (v[hi] - v[lo]) / ((hi - lo) as f64 * f.dx);
        values.push(-derivative + v[i] * weight.drift(f.x(i)));
        filled.push(f.filled[lo] || f.filled[hi] || f.filled[i]);
    }
    Ok(GridFunction { x_min: f.x_min, dx: f.dx, values, log_scale: f.log_scale, filled, interpolated: f.interpolated })
}

/// `max |(V(dt) f - f) / dt - H f|` over interior, non-filled grid points.
/// `dt` must be a nonzero multiple of the grid spacing.
pub fn generator_consistency(weight: ContinuousWeight, f: &GridFunction, dt: f64) -> Result<f64> {
    if dt == 0.0 {
        return Err(Error::Argument("dt must be nonzero".into()));
    }
    let moved = evolve(weight, f, dt, Alignment::Strict)?;
    let generated = generator_apply(weight, f)?;
    let mut residual: f64 = 0.0;
    for i in 1..f.len() - 1 {
        if moved.filled[i] || generated.filled[i] {
            continue;
        }
        let quotient = (moved.value(i) - f.value(i)) / dt;
        residual = residual.max((quotient - generated.value(i)).norm());
    }
    Ok(residual)
}

/// `ln ‖f‖_{L²}` by the Riemann sum `dx Σ |f_i|²`.
pub fn l2_lognorm(f: &GridFunction) -> Result<f64> {
    let terms: Vec<f64> = f.values.iter().filter(|v| v.norm_sqr() > 0.0).map(|v| 2.0 * v.norm().ln()).collect();
    if terms.is_empty() {
        return Err(Error::UndefinedNorm);
    }
    Ok(0.5 * (f.dx.ln() + log_sum_exp(&terms)) + f.log_scale)
}
