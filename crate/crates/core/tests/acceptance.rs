//! Acceptance battery: one line per criterion, nonzero exit on any failure.

use std::f64::consts::{LN_2, PI};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use shiftdyn::continuous::{self, Alignment, ContinuousWeight, GridFunction};
use shiftdyn::doubled::{self, Component, DoubledVector, FormKind};
use shiftdyn::growth::{self, GrowthTest, TimeRange, Verdict};
use shiftdyn::shift_ops::{self, IndexWindow};
use shiftdyn::{Complex64, PowerMode, ScaledVector, WeightSequence};

const SEED: u64 = 0x5eed_2024;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lib<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

// ---------------------------------------------------------------- oracles

/// Weights `u_n` straight from the defining formulas, in plain `powf` form.
#[derive(Clone, Copy)]
enum DenseWeights {
    Krein(f64),
    Geometric(f64),
    Mixed,
}

impl DenseWeights {
    fn u(self, n: i64) -> f64 {
        let a = n.unsigned_abs() as f64;
        match self {
            Self::Krein(c) => (c + 2.0).powf(a * (PI / 2.0 * (1.0 + a).log2()).sin()),
            Self::Geometric(c) => (2.0 * c).powf(-a),
            Self::Mixed => {
                if n <= 0 {
                    2f64.powi(n as i32)
                } else {
                    1.0 / (n as f64 + 1.0)
                }
            }
        }
    }

    fn sequence(self) -> WeightSequence {
        match self {
            Self::Krein(c) => WeightSequence::krein(c).unwrap(),
            Self::Geometric(c) => WeightSequence::geometric(c).unwrap(),
            Self::Mixed => WeightSequence::mixed(),
        }
    }
}

/// A dense coefficient array on `[-R, R]` advanced one step at a time.
struct Dense {
    radius: i64,
    x: Vec<Complex64>,
}

impl Dense {
    fn new(radius: i64, entries: &[(i64, Complex64)]) -> Self {
        let mut x = vec![Complex64::new(0.0, 0.0); (2 * radius + 1) as usize];
        for &(n, c) in entries {
            x[(n + radius) as usize] = c;
        }
        Self { radius, x }
    }

    fn at(&self, m: i64) -> Complex64 {
        if m.abs() > self.radius {
            Complex64::new(0.0, 0.0)
        } else {
            self.x[(m + self.radius) as usize]
        }
    }

    /// One step of `U` (`up`, forward) or of `U^{*-1}` (adjoint-inverse), or
    /// of their inverses (`!up`).
    fn step(&mut self, w: DenseWeights, mode: PowerMode, up: bool) {
        let r = self.radius;
        let next = (-r..=r)
            .map(|m| match (mode, up) {
                (PowerMode::Forward, true) => self.at(m - 1) * (w.u(m) / w.u(m - 1)),
                (PowerMode::Forward, false) => self.at(m + 1) * (w.u(m) / w.u(m + 1)),
                (PowerMode::AdjointInverse, true) => self.at(m - 1) * (w.u(m - 1) / w.u(m)),
                (PowerMode::AdjointInverse, false) => self.at(m + 1) * (w.u(m + 1) / w.u(m)),
            })
            .collect();
        self.x = next;
    }

    /// `ln ‖x‖` with Neumaier-compensated summation of `|x_m|²`.
    fn lognorm(&self) -> f64 {
        let (mut sum, mut comp) = (0.0f64, 0.0f64);
        for v in &self.x {
            let term = v.norm_sqr();
            let t = sum + term;
            comp += if sum.abs() >= term { (sum - t) + term } else { (term - t) + sum };
            sum = t;
        }
        0.5 * (sum + comp).ln()
    }
}

fn random_entries(rng: &mut ChaCha8Rng, radius: i64) -> Vec<(i64, Complex64)> {
    let size = rng.gen_range(1..=8);
    sample(rng, (2 * radius + 1) as usize, size)
        .into_iter()
        .map(|i| {
            let mag = rng.gen_range(0.5..2.0);
            let phase = rng.gen_range(0.0..2.0 * PI);
            (i as i64 - radius, Complex64::from_polar(mag, phase))
        })
        .collect()
}

fn families() -> [(&'static str, DenseWeights); 3] {
    [("krein", DenseWeights::Krein(1.0)), ("geometric", DenseWeights::Geometric(1.0)), ("mixed", DenseWeights::Mixed)]
}

// --------------------------------------------------------------- criteria

fn peak_trough() -> Outcome {
    let seq = lib(WeightSequence::krein(1.0))?;
    let ln3 = 3f64.ln();
    let mut worst: f64 = 0.0;
    for (peak, trough) in [(31i64, 127i64), (511, 2047), (8191, 32767)] {
        let want_peak = peak as f64 * ln3;
        let want_trough = -(trough as f64) * ln3;
        worst = worst.max(((lib(seq.log_weight(peak))? - want_peak) / want_peak).abs());
        worst = worst.max(((lib(seq.log_weight(trough))? - want_trough) / want_trough).abs());
    }
    ensure(worst <= 1e-9, || format!("max relative error {worst:.3e} > 1e-9"))?;
    Ok(format!("max relative error {worst:.3e}"))
}

fn ratio_bound() -> Outcome {
    let seq = lib(WeightSequence::krein(1.0))?;
    let bound = (1.0 + PI / (2.0 * LN_2)) * 3f64.ln() + 1e-9;
    let mut prev = lib(seq.log_weight(-100_000))?;
    let mut worst: (f64, i64) = (0.0, 0);
    for n in -100_000..100_000 {
        let next = lib(seq.log_weight(n + 1))?;
        let step = (next - prev).abs();
        if step > worst.0 {
            worst = (step, n);
        }
        prev = next;
    }
    ensure(worst.0 <= bound, || format!("step {:.12} at n = {} exceeds {bound:.12}", worst.0, worst.1))?;
    Ok(format!("max |L(n+1) - L(n)| = {:.9} (bound {bound:.9})", worst.0))
}

fn splus_witness() -> Outcome {
    let seq = lib(WeightSequence::krein(1.0))?;
    let f = ScaledVector::basis(0);
    let orbit = growth::ShiftOrbit::new(&seq, &f, PowerMode::Forward, "e0");
    let record = lib(growth::orbit_profile(&orbit, lib(TimeRange::new(0, 8191, 1))?))?;
    let verdict = lib(growth::classify_growth(&record, GrowthTest::SPlus { rate: 2.0 }, 0.0))?;
    let closed_form = 8191.0 * 1.5f64.ln();
    ensure(verdict.margin >= 3000.0, || format!("margin {:.6} < 3000", verdict.margin))?;
    ensure((verdict.margin - closed_form).abs() <= 1e-9 * closed_form, || {
        format!("margin {:.9} differs from 8191 ln 1.5 = {closed_form:.9}", verdict.margin)
    })?;

    let rows = lib(growth::krein_witness(&seq, 3))?;
    ensure(rows.len() == 3 && growth::witness_holds(&rows), || format!("witness rows fail: {rows:?}"))?;
    for row in &rows {
        let want = row.peak as f64 * 1.5f64.ln();
        ensure((row.growth - want).abs() <= 1e-9 * want, || {
            format!("k = {} growth margin {} != {want}", row.k, row.growth)
        })?;
    }
    let mins: Vec<String> = rows.iter().map(|r| format!("{:.3}", r.min_margin())).collect();
    Ok(format!("margin {:.6} at N = {}; checkpoint margins [{}]", verdict.margin, verdict.witness, mins.join(", ")))
}

fn geometric_closed_form() -> Outcome {
    let mut worst: f64 = 0.0;
    for c in [1.0, 2.0] {
        let seq = lib(WeightSequence::geometric(c))?;
        let rate = (2.0 * c).ln();
        for n in -50i64..=50 {
            let f = ScaledVector::basis(n);
            for big_n in -100i64..=100 {
                let got = lib(shift_ops::orbit_lognorm(&seq, &f, big_n, PowerMode::Forward))?;
                let want = (n.abs() - (n + big_n).abs()) as f64 * rate;
                worst = worst.max((got - want).abs());
            }
        }
        let est =
            lib(shift_ops::spectral_radius_estimate(&seq, 100, lib(IndexWindow::symmetric(300))?, PowerMode::Forward))?;
        ensure((est.estimate - 2.0 * c).abs() <= 1e-12, || {
            format!("c = {c}: spectral estimate {} != {}", est.estimate, 2.0 * c)
        })?;
    }
    ensure(worst <= 1e-12, || format!("max log error {worst:.3e} > 1e-12"))?;
    Ok(format!("max log error {worst:.3e}; spectral estimates 2 and 4"))
}

fn fast_growth() -> Outcome {
    let seq = lib(WeightSequence::geometric(1.0))?;
    let f = lib(ScaledVector::harmonic(10_000))?;
    let mut tightest = f64::INFINITY;
    let mut asym: f64 = 0.0;
    for n in 1i64..=60 {
        let plus = lib(shift_ops::orbit_lognorm(&seq, &f, n, PowerMode::Forward))?;
        let minus = lib(shift_ops::orbit_lognorm(&seq, &f, -n, PowerMode::Forward))?;
        let lower = n as f64 * LN_2 - 0.5 * ((n + 1) as f64).ln();
        ensure(plus >= lower, || format!("N = {n}: lognorm {plus} below {lower}"))?;
        tightest = tightest.min(plus - lower);
        asym = asym.max((plus - minus).abs());
    }
    ensure(asym <= 1e-12, || format!("|lognorm(N) - lognorm(-N)| reaches {asym:.3e}"))?;
    Ok(format!("smallest excess over bound {tightest:.4}; max asymmetry {asym:.3e}"))
}

fn mixed_norms() -> Outcome {
    let seq = WeightSequence::mixed();
    let window = lib(IndexWindow::new(-300, 300))?;
    let mut worst: f64 = 0.0;
    for n in 1i64..=100 {
        let adj = lib(shift_ops::window_operator_lognorm(&seq, n, window, PowerMode::AdjointInverse))?;
        let fwd = lib(shift_ops::window_operator_lognorm(&seq, n, window, PowerMode::Forward))?;
        worst = worst.max((adj.lognorm - ((n + 1) as f64).ln()).abs());
        worst = worst.max((fwd.lognorm - n as f64 * LN_2).abs());
        ensure(adj.exact && fwd.exact, || format!("N = {n}: supremum not certified inside the window"))?;
    }
    ensure(worst <= 1e-12, || format!("max log error {worst:.3e} > 1e-12"))?;
    let fwd = lib(shift_ops::spectral_radius_estimate(&seq, 100, window, PowerMode::Forward))?;
    let adj = lib(shift_ops::spectral_radius_estimate(&seq, 100, window, PowerMode::AdjointInverse))?;
    ensure((fwd.estimate - 2.0).abs() <= 1e-12 && fwd.norm.exact, || format!("forward estimate {}", fwd.estimate))?;
    let want = 101f64.powf(0.01);
    ensure(adj.estimate <= 1.05 && (adj.estimate - want).abs() <= 1e-12, || {
        format!("adjoint-inverse estimate {}", adj.estimate)
    })?;
    Ok(format!("max log error {worst:.3e}; estimates {:.12} and {:.6}", fwd.estimate, adj.estimate))
}

fn doubled_growth_classes() -> Outcome {
    let seq = WeightSequence::mixed();
    let slack = 1.0;
    let range = lib(TimeRange::new(0, 500, 1))?;
    let mut worst_margin = f64::NEG_INFINITY;
    for n in -5i64..=5 {
        let record = lib(doubled::component_growth_profile(&seq, Component::First, &ScaledVector::basis(n), range))?;
        let v = lib(growth::classify_growth(&record, GrowthTest::SZero, slack))?;
        ensure(v.verdict == Verdict::Consistent, || {
            format!("b_{n} + 0: S_ZERO {:?} with margin {}", v.verdict, v.margin)
        })?;
        worst_margin = worst_margin.max(v.margin);
    }
    let record = lib(doubled::component_growth_profile(&seq, Component::Second, &ScaledVector::basis(0), range))?;
    let v = lib(growth::classify_growth(&record, GrowthTest::SBounded, slack))?;
    let floor = 501f64.ln() - slack;
    ensure(v.verdict == Verdict::Violated, || format!("0 + b_0: S_BOUNDED {:?}", v.verdict))?;
    ensure(v.margin >= floor - 1e-12, || format!("0 + b_0: margin {} < ln 501 - slack = {floor}", v.margin))?;
    Ok(format!("S_ZERO worst margin {worst_margin:.4}; S_BOUNDED margin {:.12} (floor {floor:.12})", v.margin))
}

fn form_preservation() -> Outcome {
    let mut worst: f64 = 0.0;
    for (name, w) in families() {
        let seq = w.sequence();
        for kind in [FormKind::JForm, FormKind::Symplectic] {
            let report = lib(doubled::verify_form_preservation(&seq, kind, 100, 50, SEED, 1e-10))?;
            ensure(report.pass, || format!("{name} {}: violation {:.3e}", kind.label(), report.max_violation))?;
            worst = worst.max(report.max_violation);
        }
        // H ⊕ {0} is J-neutral along the whole orbit
        let mut rng = ChaCha8Rng::seed_from_u64(SEED);
        for _ in 0..100 {
            let f = lib(ScaledVector::from_entries(random_entries(&mut rng, 20)))?;
            let g = lib(ScaledVector::from_entries(random_entries(&mut rng, 20)))?;
            for n in -50..=50 {
                let a = lib(doubled::apply_doubled(&seq, &DoubledVector::first(f.clone()), n))?;
                let b = lib(doubled::apply_doubled(&seq, &DoubledVector::first(g.clone()), n))?;
                let value = doubled::evaluate_form(FormKind::JForm, &a, &b);
                ensure(value == Complex64::new(0.0, 0.0), || format!("{name}: J(f+0, g+0) = {value} at N = {n}"))?;
            }
        }
    }
    Ok(format!("max relative violation {worst:.3e}; H + 0 exactly neutral"))
}

fn duality() -> Outcome {
    let mut tightest = f64::INFINITY;
    for (name, w) in families() {
        let seq = w.sequence();
        let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 0xd0a1);
        for i in 0..100 {
            let x = lib(ScaledVector::from_entries(random_entries(&mut rng, 30)))?;
            let y = lib(ScaledVector::from_entries(random_entries(&mut rng, 30)))?;
            let report = lib(growth::duality_check(&seq, &x, &y, 50))?;
            ensure(report.holds && report.violations == 0, || {
                format!("{name} pair {i}: {} violations", report.violations)
            })?;
            if let Some((_, gap)) = report.tightest {
                tightest = tightest.min(gap);
            }
        }
    }
    Ok(format!("no violations; tightest log gap {tightest:.3e}"))
}

fn continuous_model() -> Outcome {
    let mut worst_cocycle: f64 = 0.0;
    let mut ratios = Vec::new();
    for w in ContinuousWeight::ALL {
        let f = lib(GridFunction::gaussian(
            continuous::DEFAULT_X_MIN,
            continuous::DEFAULT_X_MAX,
            continuous::DEFAULT_DX,
            3.0,
            4.0,
        ))?;
        for (t, tau) in [(2.5, 1.0), (-3.0, 7.25), (10.0, -4.5)] {
            let lhs = lib(continuous::evolve(
                w,
                &lib(continuous::evolve(w, &f, tau, Alignment::Strict))?,
                t,
                Alignment::Strict,
            ))?;
            let rhs = lib(continuous::evolve(w, &f, t + tau, Alignment::Strict))?;
            let scale = (0..rhs.len()).map(|i| rhs.value(i).norm()).fold(0.0, f64::max);
            for i in 0..lhs.len() {
                if lhs.filled()[i] || rhs.filled()[i] {
                    continue;
                }
                worst_cocycle = worst_cocycle.max((lhs.value(i) - rhs.value(i)).norm() / scale);
            }
        }
        for center in [-5.0, 5.0] {
            let residuals = (6..10)
                .map(|level| {
                    let dx = 2f64.powi(-level);
                    let g = lib(GridFunction::gaussian(center - 7.0, center + 7.0, dx, center, 0.5))?;
                    lib(continuous::generator_consistency(w, &g, dx))
                })
                .collect::<Result<Vec<f64>, String>>()?;
            for pair in residuals.windows(2) {
                let ratio = pair[0] / pair[1];
                ensure((1.7..=2.3).contains(&ratio), || {
                    format!("{} bump at {center}: residuals {residuals:?}", w.label())
                })?;
                ratios.push(ratio);
            }
        }
    }
    ensure(worst_cocycle <= 1e-12, || format!("cocycle error {worst_cocycle:.3e} > 1e-12"))?;
    let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().copied().fold(0.0, f64::max);
    Ok(format!("cocycle error {worst_cocycle:.3e}; residual ratios in [{lo:.3}, {hi:.3}]"))
}

fn oracle_equivalence() -> Outcome {
    let mut worst: f64 = 0.0;
    for (name, w) in families() {
        let seq = w.sequence();
        let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 0x0aac);
        for _ in 0..50 {
            let entries = random_entries(&mut rng, 20);
            let f = lib(ScaledVector::from_entries(entries.clone()))?;
            for mode in [PowerMode::Forward, PowerMode::AdjointInverse] {
                for up in [true, false] {
                    let mut dense = Dense::new(40, &entries);
                    for step in 1i64..=20 {
                        dense.step(w, mode, up);
                        let n = if up { step } else { -step };
                        let got = lib(shift_ops::orbit_lognorm(&seq, &f, n, mode))?;
                        let err = (got - dense.lognorm()).abs();
                        ensure(err <= 1e-10, || {
                            format!("{name} {} N = {n}: {got} vs dense {}", mode.label(), dense.lognorm())
                        })?;
                        worst = worst.max(err);
                    }
                }
            }
        }
    }
    Ok(format!("max log discrepancy {worst:.3e}"))
}

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: 1, name: "peak/trough identities", limit: Duration::from_millis(100), run: peak_trough },
        Criterion { id: 2, name: "ratio bound", limit: Duration::from_millis(500), run: ratio_bound },
        Criterion { id: 3, name: "S+ violation witness", limit: Duration::from_secs(1), run: splus_witness },
        Criterion { id: 4, name: "geometric closed form", limit: Duration::from_secs(1), run: geometric_closed_form },
        Criterion { id: 5, name: "fast-growth vector", limit: Duration::from_secs(1), run: fast_growth },
        Criterion { id: 6, name: "mixed-family norms", limit: Duration::from_secs(1), run: mixed_norms },
        Criterion { id: 7, name: "doubled growth classes", limit: Duration::from_secs(1), run: doubled_growth_classes },
        Criterion { id: 8, name: "form preservation", limit: Duration::from_secs(2), run: form_preservation },
        Criterion { id: 9, name: "duality inequality", limit: Duration::from_secs(1), run: duality },
        Criterion { id: 10, name: "continuous model", limit: Duration::from_secs(5), run: continuous_model },
        Criterion { id: 11, name: "dense oracle equivalence", limit: Duration::from_secs(2), run: oracle_equivalence },
    ];
    let mut failures = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let (pass, detail) = match outcome {
            Ok(d) if elapsed <= c.limit => (true, d),
            Ok(d) => (
                false,
                format!("{d}; runtime {:.3} s over {:.3} s limit", elapsed.as_secs_f64(), c.limit.as_secs_f64()),
            ),
            Err(e) => (false, e),
        };
        if !pass {
            failures += 1;
        }
        println!(
            "{} [{:>2}] {:<26} {:>8.3} s  {detail}",
            if pass { "PASS" } else { "FAIL" },
            c.id,
            c.name,
            elapsed.as_secs_f64()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
