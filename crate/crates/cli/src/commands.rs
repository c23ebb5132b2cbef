use std::path::Path;

use shiftdyn::continuous::{self, Alignment, ContinuousWeight, GridFunction};
use shiftdyn::doubled::{self, Component, FormKind};
use shiftdyn::growth::{self, GrowthTest, OrbitRecord, ShiftOrbit, TimeRange, Verdict};
use shiftdyn::shift_ops::{self, IndexWindow};
use shiftdyn::{Error, PowerMode, WeightFamily, WeightSequence};

use crate::args::{
    check_positive, ClassifyArgs, ComponentArg, ContinuousArgs, ExpectArg, FamilyArgs, ModeArg, OrbitArgs, TestArg,
};
use crate::error::{CliError, CliResult};
use crate::output::{float, write_csv};
use crate::vector_spec::parse_vector;

fn record_for(args: &OrbitArgs, seq: &WeightSequence, doubled: Option<ComponentArg>) -> CliResult<OrbitRecord> {
    let f = parse_vector(&args.vector)?;
    let range = TimeRange::new(args.nmin, args.nmax, args.stride)?;
    Ok(match doubled {
        None => growth::orbit_profile(&ShiftOrbit::new(seq, &f, args.mode.into(), args.vector.clone()), range)?,
        Some(c) => {
            let component = match c {
                ComponentArg::First => Component::First,
                ComponentArg::Second => Component::Second,
            };
            doubled::component_growth_profile(seq, component, &f, range)?
        }
    })
}

pub fn orbit(out: &Path, args: &OrbitArgs) -> CliResult<()> {
    let seq = args.family.sequence()?;
    let record = record_for(args, &seq, None)?;
    let rows = record.samples().iter().map(|s| vec![s.exponent.to_string(), float(s.lognorm)]);
    let path = write_csv(out, "orbit.csv", &["N", "lognorm"], rows)?;
    let (lo, hi) = record
        .samples()
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| (lo.min(s.lognorm), hi.max(s.lognorm)));
    println!("system   {}", record.system);
    println!("vector   {}", record.vector);
    println!("samples  {} (N = {}..={})", record.len(), args.nmin, args.nmax);
    println!("lognorm  min {lo:.6}  max {hi:.6}");
    println!("wrote    {}", path.display());
    Ok(())
}

pub fn lyapunov(out: &Path, args: &OrbitArgs, fit_window: f64) -> CliResult<()> {
    let seq = args.family.sequence()?;
    let record = record_for(args, &seq, None)?;
    let est = growth::lyapunov_estimate(&record, fit_window)?;
    let opt = |v: Option<f64>| float(v.unwrap_or(f64::NAN));
    let row = vec![
        record.system.clone(),
        record.vector.clone(),
        opt(est.forward),
        opt(est.backward),
        opt(est.forward_slope),
        opt(est.backward_slope),
    ];
    let header = ["system", "vector", "forward", "backward", "forward_slope", "backward_slope"];
    let path = write_csv(out, "lyapunov.csv", &header, [row])?;
    let show = |v: Option<f64>| v.map_or("-".to_string(), |v| format!("{v:.6}"));
    println!("system     {}", record.system);
    println!("vector     {}", record.vector);
    println!("forward    {} (slope {})", show(est.forward), show(est.forward_slope));
    println!("backward   {} (slope {})", show(est.backward), show(est.backward_slope));
    println!("wrote      {}", path.display());
    Ok(())
}

pub fn classify(out: &Path, args: &ClassifyArgs) -> CliResult<()> {
    let seq = args.orbit.family.sequence()?;
    let record = record_for(&args.orbit, &seq, args.doubled)?;
    let test = match (args.test, args.rate) {
        (TestArg::SZero, _) => GrowthTest::SZero,
        (TestArg::SBounded, _) => GrowthTest::SBounded,
        (TestArg::SPlus, Some(rate)) => GrowthTest::SPlus { rate },
        (TestArg::SPlus, None) => return Err(CliError::Usage("--test s-plus needs --rate".into())),
    };
    let v = growth::classify_growth(&record, test, args.slack)?;
    let row = vec![
        record.system.clone(),
        record.vector.clone(),
        test.label().to_string(),
        float(test.rate().unwrap_or(f64::NAN)),
        float(v.slack),
        v.verdict.label().to_string(),
        v.witness.to_string(),
        float(v.margin),
        v.horizon.to_string(),
    ];
    let header = ["system", "vector", "test", "rate", "slack", "verdict", "witness", "margin", "horizon"];
    let path = write_csv(out, "verdict.csv", &header, [row])?;
    println!("system   {}", record.system);
    println!("vector   {}", record.vector);
    println!("test     {} (slack {})", test.label(), v.slack);
    println!("verdict  {} (margin {:.6} at N = {}, horizon {})", v.verdict.label(), v.margin, v.witness, v.horizon);
    println!("wrote    {}", path.display());
    if let Some(expect) = args.expect {
        let want = match expect {
            ExpectArg::Consistent => Verdict::Consistent,
            ExpectArg::Violated => Verdict::Violated,
        };
        if v.verdict != want {
            return Err(CliError::Assertion(format!(
                "{} for {} expected {}, got {}",
                test.label(),
                record.vector,
                want.label(),
                v.verdict.label()
            )));
        }
    }
    Ok(())
}

pub fn witness(out: &Path, family: &FamilyArgs, kmax: u32) -> CliResult<()> {
    let seq = family.sequence()?;
    let rows = growth::krein_witness(&seq, kmax)?;
    let csv_rows = rows.iter().map(|r| vec![r.k.to_string(), r.peak.to_string(), float(r.min_margin())]);
    let path = write_csv(out, "witness.csv", &["k", "checkpoint", "margin"], csv_rows)?;
    println!(
        "{:>3} {:>12} {:>12} {:>14} {:>14} {:>14} {:>14}",
        "k", "peak", "trough", "growth", "decay", "growth(-n)", "decay(-n)"
    );
    for r in &rows {
        println!(
            "{:>3} {:>12} {:>12} {:>14.6} {:>14.6} {:>14.6} {:>14.6}",
            r.k, r.peak, r.trough, r.growth, r.decay, r.mirrored_growth, r.mirrored_decay
        );
    }
    println!("wrote {}", path.display());
    if !growth::witness_holds(&rows) {
        return Err(CliError::Assertion("checkpoint margins are not all positive and strictly increasing".into()));
    }
    Ok(())
}

pub fn verify_forms(
    out: &Path,
    family: &FamilyArgs,
    samples: usize,
    horizon: i64,
    seed: u64,
    tolerance: f64,
) -> CliResult<()> {
    let seq = family.sequence()?;
    let reports = [FormKind::JForm, FormKind::Symplectic]
        .into_iter()
        .map(|kind| doubled::verify_form_preservation(&seq, kind, samples, horizon, seed, tolerance))
        .collect::<Result<Vec<_>, _>>()?;
    let rows =
        reports.iter().map(|r| vec![r.check.clone(), float(r.max_violation), float(r.tolerance), r.pass.to_string()]);
    let path = write_csv(out, "verify_forms.csv", &["check", "max_violation", "tolerance", "pass"], rows)?;
    for r in &reports {
        println!(
            "{:<40} {:>12.3e} <= {:<8.1e} {}",
            r.check,
            r.max_violation,
            r.tolerance,
            if r.pass { "PASS" } else { "FAIL" }
        );
    }
    println!("wrote {}", path.display());
    if let Some(r) = reports.iter().find(|r| !r.pass) {
        let at = r.worst.map_or(String::new(), |(i, n)| format!(" (sample {i}, N = {n})"));
        return Err(CliError::Assertion(format!(
            "{}: violation {:.3e} > {:.1e}{at}",
            r.check, r.max_violation, r.tolerance
        )));
    }
    Ok(())
}

/// The spectral radius, where a closed form is known.
fn closed_form_radius(seq: &WeightSequence, mode: PowerMode) -> Option<f64> {
    match (seq.family(), mode) {
        (WeightFamily::Geometric { c }, _) => Some(2.0 * c),
        (WeightFamily::Mixed, PowerMode::Forward) => Some(2.0),
        (WeightFamily::Mixed, PowerMode::AdjointInverse) => Some(1.0),
        _ => None,
    }
}

/// `‖T^N‖^{1/N}` from the closed-form operator norm.
fn closed_form_estimate(seq: &WeightSequence, mode: PowerMode, n: i64) -> Option<f64> {
    match (seq.family(), mode) {
        (WeightFamily::Mixed, PowerMode::AdjointInverse) => Some(((n + 1) as f64).powf(1.0 / n as f64)),
        _ => closed_form_radius(seq, mode),
    }
}

pub fn spectral(
    out: &Path,
    family: &FamilyArgs,
    mode: ModeArg,
    nmax: i64,
    window: i64,
    tolerance: f64,
) -> CliResult<()> {
    check_positive("nmax", nmax)?;
    let seq = family.sequence()?;
    let mode = PowerMode::from(mode);
    let window = IndexWindow::symmetric(window)?;
    let estimates = (1..=nmax)
        .map(|n| shift_ops::spectral_radius_estimate(&seq, n, window, mode))
        .collect::<Result<Vec<_>, _>>()?;
    let rows = estimates.iter().map(|e| {
        vec![
            e.horizon.to_string(),
            float(e.estimate),
            float(e.norm.lognorm),
            e.norm.argmax.to_string(),
            e.norm.exact.to_string(),
        ]
    });
    let path = write_csv(out, "spectral.csv", &["N", "estimate", "lognorm", "argmax", "exact"], rows)?;
    let last = estimates.last().expect("nmax >= 1");
    println!("system    {}/{}", seq.label(), mode.label());
    println!(
        "estimate  {:.12} at N = {} ({})",
        last.estimate,
        last.horizon,
        if last.norm.exact { "exact norm" } else { "windowed lower bound" }
    );
    match closed_form_radius(&seq, mode) {
        Some(r) => println!("note      r = {r} (exact, closed form)"),
        None => println!("note      no closed form for r"),
    }
    println!("wrote     {}", path.display());
    for e in estimates.iter().filter(|e| e.norm.exact) {
        if let Some(want) = closed_form_estimate(&seq, mode, e.horizon) {
            if (e.estimate - want).abs() > tolerance * want {
                return Err(CliError::Assertion(format!(
                    "estimate {} at N = {} differs from closed form {want}",
                    e.estimate, e.horizon
                )));
            }
        }
    }
    Ok(())
}

pub fn continuous(out: &Path, args: &ContinuousArgs) -> CliResult<()> {
    let weight = ContinuousWeight::from(args.weight);
    let f = GridFunction::gaussian(args.x_min, args.x_max, args.dx, args.center, args.width)?;
    let steps = args.t_max / args.t_step;
    if args.t_step.is_nan() || args.t_step <= 0.0 || (steps - steps.round()).abs() > 1e-9 * steps.abs().max(1.0) {
        return Err(CliError::Usage(format!("--t-max {} is not a multiple of --t-step {}", args.t_max, args.t_step)));
    }
    let steps = steps.round() as i64;
    let dt = args.t_step * steps.signum() as f64;
    let lognorm = |g: &GridFunction| match continuous::l2_lognorm(g) {
        Err(Error::UndefinedNorm) => Ok(f64::NEG_INFINITY),
        other => other,
    };

    let mut profile = Vec::with_capacity(steps.unsigned_abs() as usize + 1);
    let mut state = f.clone();
    profile.push((0.0, lognorm(&f)?));
    for k in 1..=steps.abs() {
        state = continuous::evolve(weight, &state, dt, Alignment::Strict)?;
        profile.push((k as f64 * dt, lognorm(&state)?));
    }
    let direct = continuous::evolve(weight, &f, args.t_max, Alignment::Strict)?;
    let scale = (0..direct.len()).map(|i| direct.value(i).norm()).fold(0.0, f64::max);
    let cocycle = (0..direct.len())
        .filter(|&i| scale > 0.0 && !direct.filled()[i] && !state.filled()[i])
        .map(|i| (direct.value(i) - state.value(i)).norm() / scale)
        .fold(0.0, f64::max);
    let residual = continuous::generator_consistency(weight, &f, args.dx)?;

    let lognorm_path = write_csv(
        out,
        "continuous_lognorm.csv",
        &["t", "lognorm"],
        profile.iter().map(|(t, l)| vec![float(*t), float(*l)]),
    )?;
    let profile_path = write_csv(
        out,
        "continuous_profile.csv",
        &["x", "value"],
        (0..state.len()).map(|i| vec![float(state.x(i)), float(state.value(i).re)]),
    )?;
    let (first, last) = (profile[0].1, profile[profile.len() - 1].1);
    println!("weight     {}", weight.label());
    println!("grid       [{}, {}] dx = {} ({} points)", args.x_min, args.x_max, args.dx, f.len());
    println!("lognorm    {first:.6} -> {last:.6} over t = 0..{}", args.t_max);
    if args.t_max != 0.0 && last.is_finite() {
        println!("mean rate  {:.6}", (last - first) / args.t_max);
    }
    println!("cocycle    {cocycle:.3e} (stepped vs direct)");
    println!("generator  residual {residual:.3e} at dt = dx");
    println!("wrote      {}", lognorm_path.display());
    println!("wrote      {}", profile_path.display());
    if cocycle > crate::args::CLOSED_FORM_TOLERANCE {
        return Err(CliError::Assertion(format!("cocycle identity off by {cocycle:.3e}")));
    }
    Ok(())
}
