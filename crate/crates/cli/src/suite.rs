//! The acceptance battery, one row per check.

use std::f64::consts::{LN_2, PI};
use std::path::Path;
use std::time::Instant;

use shiftdyn::continuous::{self, Alignment, ContinuousWeight, GridFunction};
use shiftdyn::doubled::{self, Component, DoubledVector, FormKind};
use shiftdyn::growth::{self, GrowthTest, ShiftOrbit, TimeRange, Verdict};
use shiftdyn::sampling::{random_vector, sample_vector, seeded_rng};
use shiftdyn::shift_ops::{self, IndexWindow};
use shiftdyn::{Complex64, PowerMode, ScaledVector, WeightSequence};

use crate::error::{CliError, CliResult};
use crate::output::{float, write_csv};

struct Row {
    check: &'static str,
    /// Passes when `max_violation <= tolerance`.
    max_violation: f64,
    tolerance: f64,
}

impl Row {
    fn new(check: &'static str, max_violation: f64, tolerance: f64) -> Self {
        Self { check, max_violation, tolerance }
    }

    fn pass(&self) -> bool {
        self.max_violation <= self.tolerance
    }
}

fn families() -> CliResult<[WeightSequence; 3]> {
    Ok([WeightSequence::krein(1.0)?, WeightSequence::geometric(1.0)?, WeightSequence::mixed()])
}

fn peak_trough(rows: &mut Vec<Row>) -> CliResult<()> {
    let seq = WeightSequence::krein(1.0)?;
    let ln3 = 3f64.ln();
    let mut worst: f64 = 0.0;
    for (peak, trough) in [(31i64, 127i64), (511, 2047), (8191, 32767)] {
        worst = worst.max((seq.log_weight(peak)? / (peak as f64 * ln3) - 1.0).abs());
        worst = worst.max((seq.log_weight(trough)? / (-(trough as f64) * ln3) - 1.0).abs());
    }
    rows.push(Row::new("peak-trough", worst, 1e-9));

    let bound = (1.0 + PI / (2.0 * LN_2)) * ln3;
    let mut step: f64 = 0.0;
    let mut prev = seq.log_weight(-100_000)?;
    for n in -100_000..100_000 {
        let next = seq.log_weight(n + 1)?;
        step = step.max((next - prev).abs());
        prev = next;
    }
    rows.push(Row::new("ratio-bound", step - bound, 1e-9));
    Ok(())
}

fn krein_witness(rows: &mut Vec<Row>) -> CliResult<()> {
    let seq = WeightSequence::krein(1.0)?;
    let f = ScaledVector::basis(0);
    let record =
        growth::orbit_profile(&ShiftOrbit::new(&seq, &f, PowerMode::Forward, "e0"), TimeRange::new(0, 8191, 1)?)?;
    let v = growth::classify_growth(&record, GrowthTest::SPlus { rate: 2.0 }, 0.0)?;
    rows.push(Row::new("splus-margin", 3000.0 - v.margin, 0.0));

    let witness = growth::krein_witness(&seq, 3)?;
    let weakest = witness.iter().map(|r| r.min_margin()).fold(f64::INFINITY, f64::min);
    let smallest_rise = witness
        .windows(2)
        .flat_map(|w| w[0].margins().into_iter().zip(w[1].margins()).map(|(a, b)| b - a))
        .fold(f64::INFINITY, f64::min);
    rows.push(Row::new("krein-witness", -weakest.min(smallest_rise), 0.0));
    Ok(())
}

fn geometric(rows: &mut Vec<Row>) -> CliResult<()> {
    let (mut closed, mut spectral): (f64, f64) = (0.0, 0.0);
    for c in [1.0, 2.0] {
        let seq = WeightSequence::geometric(c)?;
        for n in -50i64..=50 {
            let f = ScaledVector::basis(n);
            for big_n in -100i64..=100 {
                let got = shift_ops::orbit_lognorm(&seq, &f, big_n, PowerMode::Forward)?;
                closed = closed.max((got - (n.abs() - (n + big_n).abs()) as f64 * (2.0 * c).ln()).abs());
            }
        }
        let est = shift_ops::spectral_radius_estimate(&seq, 100, IndexWindow::symmetric(300)?, PowerMode::Forward)?;
        spectral = spectral.max((est.estimate - 2.0 * c).abs());
    }
    rows.push(Row::new("geometric-closed-form", closed, 1e-12));
    rows.push(Row::new("geometric-spectral", spectral, 1e-12));

    let seq = WeightSequence::geometric(1.0)?;
    let f = ScaledVector::harmonic(10_000)?;
    let (mut shortfall, mut asym) = (f64::NEG_INFINITY, 0.0f64);
    for n in 1i64..=60 {
        let plus = shift_ops::orbit_lognorm(&seq, &f, n, PowerMode::Forward)?;
        let minus = shift_ops::orbit_lognorm(&seq, &f, -n, PowerMode::Forward)?;
        shortfall = shortfall.max(n as f64 * LN_2 - 0.5 * ((n + 1) as f64).ln() - plus);
        asym = asym.max((plus - minus).abs());
    }
    rows.push(Row::new("fast-growth-bound", shortfall, 0.0));
    rows.push(Row::new("fast-growth-symmetry", asym, 1e-12));
    Ok(())
}

fn mixed(rows: &mut Vec<Row>) -> CliResult<()> {
    let seq = WeightSequence::mixed();
    let window = IndexWindow::new(-300, 300)?;
    let mut worst: f64 = 0.0;
    for n in 1i64..=100 {
        let adj = shift_ops::window_operator_lognorm(&seq, n, window, PowerMode::AdjointInverse)?;
        let fwd = shift_ops::window_operator_lognorm(&seq, n, window, PowerMode::Forward)?;
        worst = worst.max((adj.lognorm - ((n + 1) as f64).ln()).abs()).max((fwd.lognorm - n as f64 * LN_2).abs());
    }
    rows.push(Row::new("mixed-norms", worst, 1e-12));
    let fwd = shift_ops::spectral_radius_estimate(&seq, 100, window, PowerMode::Forward)?;
    let adj = shift_ops::spectral_radius_estimate(&seq, 100, window, PowerMode::AdjointInverse)?;
    rows.push(Row::new(
        "mixed-spectral",
        (fwd.estimate - 2.0).abs().max((adj.estimate - 101f64.powf(0.01)).abs()),
        1e-12,
    ));
    rows.push(Row::new("mixed-adjoint-radius", adj.estimate - 1.05, 0.0));

    let slack = 1.0;
    let range = TimeRange::new(0, 500, 1)?;
    let mut s_zero = f64::NEG_INFINITY;
    for n in -5i64..=5 {
        let record = doubled::component_growth_profile(&seq, Component::First, &ScaledVector::basis(n), range)?;
        let v = growth::classify_growth(&record, GrowthTest::SZero, slack)?;
        s_zero = s_zero.max(v.margin);
    }
    rows.push(Row::new("doubled-s-zero", s_zero, 0.0));
    let record = doubled::component_growth_profile(&seq, Component::Second, &ScaledVector::basis(0), range)?;
    let v = growth::classify_growth(&record, GrowthTest::SBounded, slack)?;
    let shortfall = if v.verdict == Verdict::Violated { 501f64.ln() - slack - v.margin } else { f64::INFINITY };
    rows.push(Row::new("doubled-s-bounded", shortfall, 1e-12));
    Ok(())
}

fn forms_and_duality(rows: &mut Vec<Row>, seed: u64) -> CliResult<()> {
    let (mut forms, mut neutral, mut violations): (f64, f64, usize) = (0.0, 0.0, 0);
    for seq in families()? {
        for kind in [FormKind::JForm, FormKind::Symplectic] {
            forms = forms.max(doubled::verify_form_preservation(&seq, kind, 100, 50, seed, 1e-10)?.max_violation);
        }
        let mut rng = seeded_rng(seed);
        for _ in 0..100 {
            let f = DoubledVector::first(sample_vector(&mut rng, true));
            let g = DoubledVector::first(sample_vector(&mut rng, true));
            for n in -50..=50 {
                let a = doubled::apply_doubled(&seq, &f, n)?;
                let b = doubled::apply_doubled(&seq, &g, n)?;
                neutral = neutral.max(doubled::evaluate_form(FormKind::JForm, &a, &b).norm());
            }
            let x = sample_vector(&mut rng, true);
            let y = sample_vector(&mut rng, true);
            violations += growth::duality_check(&seq, &x, &y, 50)?.violations;
        }
    }
    rows.push(Row::new("form-preservation", forms, 1e-10));
    rows.push(Row::new("j-neutrality", neutral, 0.0));
    rows.push(Row::new("duality", violations as f64, 0.0));
    Ok(())
}

fn continuous_model(rows: &mut Vec<Row>) -> CliResult<()> {
    let (mut cocycle, mut order): (f64, f64) = (0.0, 0.0);
    for w in ContinuousWeight::ALL {
        let f = GridFunction::gaussian(
            continuous::DEFAULT_X_MIN,
            continuous::DEFAULT_X_MAX,
            continuous::DEFAULT_DX,
            3.0,
            4.0,
        )?;
        for (t, tau) in [(2.5, 1.0), (-3.0, 7.25), (10.0, -4.5)] {
            let lhs = continuous::evolve(w, &continuous::evolve(w, &f, tau, Alignment::Strict)?, t, Alignment::Strict)?;
            let rhs = continuous::evolve(w, &f, t + tau, Alignment::Strict)?;
            let scale = (0..rhs.len()).map(|i| rhs.value(i).norm()).fold(0.0, f64::max);
            for i in (0..lhs.len()).filter(|&i| !lhs.filled()[i] && !rhs.filled()[i]) {
                cocycle = cocycle.max((lhs.value(i) - rhs.value(i)).norm() / scale);
            }
        }
        for center in [-5.0, 5.0] {
            let residuals = (6..10)
                .map(|level| {
                    let dx = 2f64.powi(-level);
                    let g = GridFunction::gaussian(center - 7.0, center + 7.0, dx, center, 0.5)?;
                    continuous::generator_consistency(w, &g, dx)
                })
                .collect::<Result<Vec<f64>, _>>()?;
            for pair in residuals.windows(2) {
                order = order.max((pair[0] / pair[1] - 2.0).abs());
            }
        }
    }
    rows.push(Row::new("continuous-cocycle", cocycle, 1e-12));
    rows.push(Row::new("continuous-order", order, 0.3));
    Ok(())
}

/// `ln ‖T^N f‖` by stepping a dense array on `[-40, 40]` one power at a time.
fn dense_lognorms(seq: &WeightSequence, f: &ScaledVector, mode: PowerMode, up: bool) -> CliResult<Vec<f64>> {
    const R: i64 = 40;
    let u = (-R - 1..=R + 1).map(|m| Ok(seq.log_weight(m)?.exp())).collect::<CliResult<Vec<f64>>>()?;
    let w = |m: i64| u[(m + R + 1) as usize];
    let mut x: Vec<Complex64> = (-R..=R).map(|m| f.coefficient(m)).collect();
    let at = |x: &[Complex64], m: i64| if m.abs() > R { Complex64::new(0.0, 0.0) } else { x[(m + R) as usize] };
    let mut out = Vec::with_capacity(20);
    for _ in 0..20 {
        x = (-R..=R)
            .map(|m| match (mode, up) {
                (PowerMode::Forward, true) => at(&x, m - 1) * (w(m) / w(m - 1)),
                (PowerMode::Forward, false) => at(&x, m + 1) * (w(m) / w(m + 1)),
                (PowerMode::AdjointInverse, true) => at(&x, m - 1) * (w(m - 1) / w(m)),
                (PowerMode::AdjointInverse, false) => at(&x, m + 1) * (w(m + 1) / w(m)),
            })
            .collect();
        out.push(0.5 * x.iter().map(|c| c.norm_sqr()).sum::<f64>().ln());
    }
    Ok(out)
}

fn dense_oracle(rows: &mut Vec<Row>, seed: u64) -> CliResult<()> {
    let mut worst: f64 = 0.0;
    for seq in families()? {
        let mut rng = seeded_rng(seed);
        for i in 0..50 {
            let f = random_vector(&mut rng, i % 8 + 1, -20, 20, true)?;
            for mode in [PowerMode::Forward, PowerMode::AdjointInverse] {
                for up in [true, false] {
                    for (k, dense) in dense_lognorms(&seq, &f, mode, up)?.into_iter().enumerate() {
                        let n = (k + 1) as i64 * if up { 1 } else { -1 };
                        worst = worst.max((shift_ops::orbit_lognorm(&seq, &f, n, mode)? - dense).abs());
                    }
                }
            }
        }
    }
    rows.push(Row::new("dense-oracle", worst, 1e-10));
    Ok(())
}

pub fn run(out: &Path, seed: u64) -> CliResult<()> {
    let start = Instant::now();
    let mut rows = Vec::new();
    peak_trough(&mut rows)?;
    krein_witness(&mut rows)?;
    geometric(&mut rows)?;
    mixed(&mut rows)?;
    forms_and_duality(&mut rows, seed)?;
    continuous_model(&mut rows)?;
    dense_oracle(&mut rows, seed)?;

    let csv_rows = rows
        .iter()
        .map(|r| vec![r.check.to_string(), float(r.max_violation), float(r.tolerance), r.pass().to_string()]);
    let path = write_csv(out, "suite.csv", &["check", "max_violation", "tolerance", "pass"], csv_rows)?;
    for r in &rows {
        println!(
            "{} {:<24} {:>12.3e} <= {:.1e}",
            if r.pass() { "PASS" } else { "FAIL" },
            r.check,
            r.max_violation,
            r.tolerance
        );
    }
    let failed: Vec<&str> = rows.iter().filter(|r| !r.pass()).map(|r| r.check).collect();
    println!("{} of {} checks passed in {:.2} s", rows.len() - failed.len(), rows.len(), start.elapsed().as_secs_f64());
    println!("wrote {}", path.display());
    if !failed.is_empty() {
        return Err(CliError::Assertion(format!("failed checks: {}", failed.join(", "))));
    }
    Ok(())
}
