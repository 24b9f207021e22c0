//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so the verdict lines are always shown;
//! the process fails if any criterion does.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use skcap::bounds::{lower_bound_1, lower_bound_3, maximize_lower_bound_2, upper_bound};
use skcap::numerics::{
    density_trunc_gauss_conv, density_uniform_conv, differential_entropy, integrate,
    mixed_gaussian_entropy_integral, monte_carlo_secret_key_oracle, mutual_information,
    QuadratureSpec,
};
use skcap::schemes::{
    best_maxentropic, heuristic_truncated_gaussian_rate, optimize_truncated_gaussian,
    uniform_scheme_rate, DEFAULT_K_MAX,
};
use skcap::{
    equivalent_channel, plain_capacity, secret_key_capacity, secret_key_rate, ChannelParams,
    DiscreteDistribution, InputScheme, SolverConfig,
};
use std::f64::consts::{E, PI};
use std::panic::{self, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

type Outcome = (bool, String);
type Criterion = (&'static str, &'static str, fn() -> Outcome);

fn c01_equivalent_channel() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    let mut ordered = true;
    for _ in 0..100 {
        let vd = 10f64.powf(rng.random_range(-2.0..2.0));
        let ve = 10f64.powf(rng.random_range(-2.0..2.0));
        let p = ChannelParams::new(1.0, vd, ve).unwrap();
        let eq = equivalent_channel(&p).var_eq();
        let expect = 1.0 / (1.0 / vd + 1.0 / ve);
        worst = worst.max((eq - expect).abs());
        ordered &= eq < vd.min(ve);
    }
    (
        worst <= 1e-14 && ordered,
        format!("max |var_eq - formula| = {worst:.1e}, below min: {ordered}"),
    )
}

fn c02_density_normalisation() -> Outcome {
    let t0 = Instant::now();
    let q = QuadratureSpec::default();
    let mass = |d: &skcap::numerics::OutputDensity| {
        integrate(|t| d.eval(t), &d.breakpoints(), &q)
            .unwrap()
            .value
    };
    let mut worst: f64 = 0.0;
    for a in [0.3, 1.0, 4.0] {
        for sigma in [0.5, 1.0, 2.0] {
            worst = worst.max((mass(&density_uniform_conv(a, sigma).unwrap()) - 1.0).abs());
            for sx in [0.2 * a, a, 5.0 * a] {
                worst =
                    worst.max((mass(&density_trunc_gauss_conv(a, sx, sigma).unwrap()) - 1.0).abs());
            }
        }
    }
    // A / sigma_x large: no truncation, a plain Gaussian of variance sigma_x^2 + sigma^2
    let (a, sx, sigma) = (50.0, 1.0, 0.7);
    let d = density_trunc_gauss_conv(a, sx, sigma).unwrap();
    let v = sx * sx + sigma * sigma;
    let gauss = (-4.0f64..=4.0)
        .step_by_f(0.1)
        .map(|t| (d.eval(t) - (-t * t / (2.0 * v)).exp() / (2.0 * PI * v).sqrt()).abs())
        .fold(0.0, f64::max);
    // sigma_x >> A: flat input, the uniform-input density
    let (a, sigma) = (1.5, 1.0);
    let wide = density_trunc_gauss_conv(a, 1e3 * a, sigma).unwrap();
    let uni = density_uniform_conv(a, sigma).unwrap();
    let flat = (-6.0f64..=6.0)
        .step_by_f(0.05)
        .map(|t| (wide.eval(t) - uni.eval(t)).abs())
        .fold(0.0, f64::max);
    let dt = t0.elapsed();
    let pass = worst < 1e-9 && gauss < 1e-12 && flat < 1e-3 && dt < Duration::from_secs(10);
    (
        pass,
        format!("max |mass - 1| = {worst:.1e}, untruncated limit {gauss:.1e}, wide limit {flat:.1e}, {dt:.2?}"),
    )
}

fn c03_two_point_entropy() -> Outcome {
    let t0 = Instant::now();
    let q = QuadratureSpec::default();
    let mut worst_h: f64 = 0.0;
    let mut worst_r: f64 = 0.0;
    for a in [0.1, 0.5, 1.0, 2.0] {
        let two =
            InputScheme::Discrete(DiscreteDistribution::new(vec![-a, a], vec![0.5, 0.5]).unwrap());
        let i = mixed_gaussian_entropy_integral(a, &q).unwrap();
        let h = differential_entropy(&two.output_density(1.0).unwrap(), &q)
            .unwrap()
            .nats;
        worst_h = worst_h.max((h - (0.5 * (2.0 * PI * E).ln() + a * a - i)).abs());
        let r = mutual_information(&two, 1.0, &q).unwrap().nats;
        worst_r = worst_r.max((r - (a * a - i)).abs());
    }
    let dt = t0.elapsed();
    let pass = worst_h < 1e-7 && worst_r < 1e-7 && dt < Duration::from_secs(10);
    (
        pass,
        format!("entropy error {worst_h:.1e}, rate error {worst_r:.1e}, {dt:.2?}"),
    )
}

fn c04_small_amplitude_capacity() -> Outcome {
    let t0 = Instant::now();
    let a = 0.5;
    let r = plain_capacity(a, 1.0, &SolverConfig::default()).unwrap();
    let d = &r.distribution;
    let law = d.len() == 2
        && d.points().iter().all(|x| (x.abs() - a).abs() < 1e-9)
        && d.probs().iter().all(|p| (p - 0.5).abs() < 1e-9);
    let i = mixed_gaussian_entropy_integral(a, &QuadratureSpec::default()).unwrap();
    let (lo, hi) = (a * a / 2.0 - i, 0.5 * (1.0 + a * a).ln());
    let c = r.rate_nats;
    let dt = t0.elapsed();
    let pass = r.num_points_k == 2
        && law
        && r.kkt_max_violation < 1e-6
        && lo <= c
        && c <= hi
        && dt < Duration::from_secs(60);
    (
        pass,
        format!(
            "K = {}, law {:?} / {:?}, KKT {:.1e}, {lo:.6} <= {c:.6} <= {hi:.6}, {dt:.2?}",
            r.num_points_k,
            d.points(),
            d.probs(),
            r.kkt_max_violation
        ),
    )
}

fn c05_solver_chain() -> Outcome {
    let t0 = Instant::now();
    let cfg = SolverConfig::default();
    let mut pass = true;
    let mut detail = Vec::new();
    for a2 in [0.5, 2.0, 5.0, 10.0] {
        let p = ChannelParams::from_a_squared(a2, 1.0, 2.0).unwrap();
        let c = secret_key_capacity(&p, &cfg).unwrap().rate_nats;
        let lb = maximize_lower_bound_2(&p).1.max(lower_bound_3(&p));
        let ub = upper_bound(&p);
        pass &= lb <= c + 1e-6 && c <= ub + 1e-6;
        let mut s = format!("A^2={a2}: {lb:.4} <= {c:.4} <= {ub:.4}");
        if a2 <= 1.0 {
            let lb1 = lower_bound_1(&p, &cfg).unwrap();
            pass &= (c - lb1).abs() < 1e-3;
            s += &format!(" |C - LB1| = {:.1e}", (c - lb1).abs());
        }
        detail.push(s);
    }
    let dt = t0.elapsed();
    pass &= dt < Duration::from_secs(600);
    (pass, format!("{}; {dt:.2?}", detail.join("; ")))
}

fn c06_scheme_ordering() -> Outcome {
    let t0 = Instant::now();
    let cfg = SolverConfig::default();
    let (vd, ve) = (1.0, 1.5f64.powi(2));
    let mut pass = true;
    let mut detail = Vec::new();
    for a2 in [0.25, 0.5, 1.0] {
        let p = ChannelParams::from_a_squared(a2, vd, ve).unwrap();
        let c = secret_key_capacity(&p, &cfg).unwrap().rate_nats;
        let (k, m) = best_maxentropic(&p, DEFAULT_K_MAX).unwrap();
        pass &= (c - m.nats).abs() < 5e-3;
        detail.push(format!("A^2={a2}: C - maxent(K={k}) = {:.1e}", c - m.nats));
    }
    let p = ChannelParams::from_a_squared(10.0, vd, ve).unwrap();
    let c = secret_key_capacity(&p, &cfg).unwrap().rate_nats;
    let (sx, tg) = optimize_truncated_gaussian(&p).unwrap();
    let heur = heuristic_truncated_gaussian_rate(&p).unwrap().nats;
    let uni = uniform_scheme_rate(&p).unwrap().nats;
    let (k, maxent) = best_maxentropic(&p, DEFAULT_K_MAX).unwrap();
    let others = [heur, uni, maxent.nats];
    let dominates = others.iter().all(|r| tg.nats >= *r);
    let below = [tg.nats, heur, uni, maxent.nats]
        .iter()
        .all(|r| *r <= c + 1e-6);
    let heuristic_close = (tg.nats - heur) / tg.nats <= 0.02;
    pass &= dominates && below && heuristic_close;
    detail.push(format!(
        "A^2=10: C={c:.5} TG*(sx={sx:.3})={:.5} TG(sx=A)={heur:.5} uniform={uni:.5} maxent(K={k})={:.5}; \
         TG* best: {dominates}, all <= C: {below}, heuristic within 2%: {heuristic_close}",
        tg.nats, maxent.nats
    ));
    let dt = t0.elapsed();
    pass &= dt < Duration::from_secs(600);
    (pass, format!("{}; {dt:.2?}", detail.join("; ")))
}

fn c07_high_amplitude_convergence() -> Outcome {
    let t0 = Instant::now();
    let target = 0.5 * 3f64.ln();
    let rows: Vec<(f64, f64, f64)> = [10.0, 100.0, 1000.0]
        .iter()
        .map(|&a| {
            let p = ChannelParams::new(a, 1.0, 2.0).unwrap();
            (a, maximize_lower_bound_2(&p).1, upper_bound(&p))
        })
        .collect();
    let gaps: Vec<f64> = rows.iter().map(|(_, lb, ub)| (lb - ub).abs()).collect();
    let decreasing = gaps.windows(2).all(|w| w[1] < w[0]);
    let (_, lb, ub) = rows[2];
    let near = (lb - target).abs() < 0.05 && (ub - target).abs() < 0.05;
    let dt = t0.elapsed();
    let pass = decreasing && gaps[1] < 0.05 && near && dt < Duration::from_secs(60);
    (
        pass,
        format!(
            "gaps {:.4} / {:.4} / {:.4} (A = 10 / 100 / 1000), at A=1000 LB2* = {lb:.4}, UB = {ub:.4}, limit {target:.4}, {dt:.2?}",
            gaps[0], gaps[1], gaps[2]
        ),
    )
}

fn c08_low_amplitude_ratio() -> Outcome {
    let t0 = Instant::now();
    let (vd, ve) = (1.0, 2.0);
    let sigma_de = (1.0f64 / (1.0 / vd + 1.0 / ve)).sqrt();
    let ratios: Vec<f64> = [0.5, 0.2, 0.1]
        .iter()
        .map(|f| {
            let a = f * sigma_de;
            let p = ChannelParams::new(a, vd, ve).unwrap();
            let c = secret_key_capacity(&p, &SolverConfig::default())
                .unwrap()
                .rate_nats;
            c / (a * a / (2.0 * vd))
        })
        .collect();
    let increasing = ratios.windows(2).all(|w| w[1] > w[0] && w[1] <= 1.0 + 1e-9);
    let dt = t0.elapsed();
    let pass = (0.9..=1.05).contains(&ratios[2]) && increasing && dt < Duration::from_secs(600);
    (
        pass,
        format!(
            "ratios {:.5} / {:.5} / {:.5} at A = 0.5 / 0.2 / 0.1 sigma_DE, {dt:.2?}",
            ratios[0], ratios[1], ratios[2]
        ),
    )
}

fn c09_monte_carlo_agreement() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst: f64 = 0.0;
    let mut detail = Vec::new();
    for i in 0..5u64 {
        let a2 = rng.random_range(0.5..8.0);
        let p = ChannelParams::from_a_squared(
            a2,
            rng.random_range(0.5..2.0),
            rng.random_range(0.5..3.0),
        )
        .unwrap();
        let a = p.amplitude();
        let scheme = match i % 3 {
            0 => {
                let k = rng.random_range(2..6usize);
                let mut xs: Vec<f64> = (0..k)
                    .map(|j| -a + 2.0 * a * j as f64 / (k - 1) as f64)
                    .collect();
                xs.iter_mut()
                    .skip(1)
                    .take(k.saturating_sub(2))
                    .for_each(|x| *x += rng.random_range(-0.2..0.2) * a / k as f64);
                let w: Vec<f64> = (0..k).map(|_| rng.random_range(0.2..1.0)).collect();
                let total: f64 = w.iter().sum();
                InputScheme::Discrete(
                    DiscreteDistribution::new(xs, w.iter().map(|v| v / total).collect()).unwrap(),
                )
            }
            1 => InputScheme::TruncatedGaussian {
                amplitude: a,
                sigma_x: rng.random_range(0.3..3.0) * a,
            },
            _ => InputScheme::ContinuousUniform { amplitude: a },
        };
        let exact = secret_key_rate(&p, &scheme).unwrap().nats;
        let mc = monte_carlo_secret_key_oracle(&p, &scheme, 10_000_000, 1000 + i);
        worst = worst.max((exact - mc).abs());
        detail.push(format!("{exact:.4}/{mc:.4}"));
    }
    (
        worst < 1e-2,
        format!(
            "quadrature/sampling {}; max diff {worst:.1e}",
            detail.join(" ")
        ),
    )
}

fn c10_determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_skcap"))
            .args([
                "sweep",
                "--var-d",
                "1",
                "--var-e",
                "2",
                "--a2-grid",
                "0.5:10:0.5",
            ])
            .args(["--outputs", "capacity,bounds", "--seed", "17", "--out"])
            .arg(&out)
            .status()
            .unwrap();
        let meta = std::fs::read(skcap_cli::companion(&out, "meta.json")).unwrap();
        (status.code(), std::fs::read(&out).unwrap(), meta)
    };
    let (s1, csv1, meta1) = run("first.csv");
    let (s2, csv2, meta2) = run("second.csv");
    let pass = s1 == Some(0) && s2 == Some(0) && csv1 == csv2 && meta1 == meta2;
    (
        pass,
        format!(
            "exit {s1:?}/{s2:?}, {} CSV bytes, identical CSV: {}, identical metadata: {}",
            csv1.len(),
            csv1 == csv2,
            meta1 == meta2
        ),
    )
}

trait StepBy {
    fn step_by_f(self, h: f64) -> Box<dyn Iterator<Item = f64>>;
}

impl StepBy for std::ops::RangeInclusive<f64> {
    fn step_by_f(self, h: f64) -> Box<dyn Iterator<Item = f64>> {
        let (a, b) = self.into_inner();
        let n = ((b - a) / h).round() as usize;
        Box::new((0..=n).map(move |i| a + i as f64 * h))
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("c01", "equivalent channel", c01_equivalent_channel),
        ("c02", "density normalisation", c02_density_normalisation),
        ("c03", "two-point entropy", c03_two_point_entropy),
        ("c04", "small-A capacity", c04_small_amplitude_capacity),
        ("c05", "secret-key bound chain", c05_solver_chain),
        ("c06", "scheme ordering", c06_scheme_ordering),
        ("c07", "high-A convergence", c07_high_amplitude_convergence),
        ("c08", "low-A ratio", c08_low_amplitude_ratio),
        ("c09", "Monte Carlo agreement", c09_monte_carlo_agreement),
        ("c10", "sweep determinism", c10_determinism),
    ];
    let filter: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .collect();
    let mut failed = 0;
    for (id, name, check) in criteria {
        if !filter.is_empty()
            && !filter
                .iter()
                .any(|f| id.contains(f.as_str()) || name.contains(f.as_str()))
        {
            continue;
        }
        let (pass, detail) = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            (false, format!("panicked: {msg}"))
        });
        println!(
            "{} {id} {name}: {detail}",
            if pass { "PASS" } else { "FAIL" }
        );
        failed += usize::from(!pass);
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
