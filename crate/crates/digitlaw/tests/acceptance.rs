//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::fs;
use std::process::{Command, ExitCode};
use std::time::Instant;

use digitlaw::io::Table1Column;
use digitlaw_core::gof::{mean_absolute_deviation, total_variation};
use digitlaw_core::linalg::SymMatrix;
use digitlaw_core::rmt::sample_goe_matrix;
use digitlaw_core::samplers::{
    multiplicative_cascade, porter_thomas_cdf, porter_thomas_density, sample_porter_thomas,
    FactorLaw,
};
use digitlaw_core::{
    benford_prob_first, conformance_report, digit_histogram, significant_digits,
    significant_digits_scaled, simulate_transition_array, symmetric_eigen, DigitDistribution,
    Ensemble, GoeConfig, RandomStream,
};

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn benford_first() -> Vec<f64> {
    (1..10)
        .map(|k| benford_prob_first(k, 10).unwrap())
        .collect()
}

fn benford_reference() -> Outcome {
    let expected = [
        "0.301", "0.176", "0.125", "0.097", "0.079", "0.067", "0.058", "0.051", "0.046",
    ];
    let got: Vec<String> = benford_first().iter().map(|p| format!("{p:.3}")).collect();
    check(got == expected, format!("rounded: {}", got.join(" ")))
}

fn fixture_statistics() -> Outcome {
    let benford = Table1Column::Benford.fractions();
    let mut ok = true;
    let mut parts = Vec::new();
    for column in [
        Table1Column::T1,
        Table1Column::T2,
        Table1Column::T3,
        Table1Column::T4,
    ] {
        let f = column.fractions();
        let mad = mean_absolute_deviation(&f, &benford);
        let tv = total_variation(&f, &benford);
        ok &= mad < 0.006 && tv < 0.03;
        parts.push(format!("{} MAD {mad:.6} TV {tv:.4}", column.name()));
    }
    check(ok, parts.join(", "))
}

fn rmt_reproduction(sums: &mut Vec<(f64, f64)>) -> Outcome {
    let runs = 100;
    let mut under = 0;
    let mut worst: f64 = 0.0;
    let mut pooled = digitlaw_core::DigitHistogram::new(10, 1, 0.0).unwrap();
    for seed in 0..runs {
        let array =
            simulate_transition_array(&GoeConfig::goe(60, 60, seed)).map_err(|e| e.to_string())?;
        let strengths = array.strengths();
        sums.push((strengths.iter().sum(), array.dipole_norm_sq));
        let hist = digit_histogram(&strengths, 1, 10, 0.0).unwrap();
        let mad = mean_absolute_deviation(&hist.fractions(), &benford_first());
        worst = worst.max(mad);
        if mad < 0.015 {
            under += 1;
        }
        pooled.merge(&hist).unwrap();
    }
    let pooled_mad = mean_absolute_deviation(&pooled.fractions(), &benford_first());
    check(
        under >= 95 && pooled_mad < 0.005,
        format!("{under}/{runs} runs with MAD < 0.015 (worst {worst:.5}), pooled MAD {pooled_mad:.5} over {} lines", pooled.total_included()),
    )
}

fn strength_conservation(sums: &mut Vec<(f64, f64)>) -> Outcome {
    let ensembles = [
        Ensemble::Goe,
        Ensemble::BiGaussian {
            p: 0.9,
            sigma1: 1.0,
            sigma2: 5.0,
            diag_sigma: std::f64::consts::SQRT_2,
        },
    ];
    for (i, ensemble) in ensembles.into_iter().enumerate() {
        for (nl, nu) in [(1, 1), (7, 3), (40, 25)] {
            let config = GoeConfig {
                dim_lower: nl,
                dim_upper: nu,
                sigma_offdiag: 0.5,
                ensemble,
                dipole_sigma: 2.0,
                seed: 1000 + i as u64,
            };
            let array = simulate_transition_array(&config).map_err(|e| e.to_string())?;
            sums.push((array.strengths().iter().sum(), array.dipole_norm_sq));
        }
    }
    let worst = sums
        .iter()
        .map(|(s, d)| (s - d).abs() / d)
        .fold(0.0, f64::max);
    check(
        worst <= 1e-8,
        format!("{} arrays, worst relative error {worst:.2e}", sums.len()),
    )
}

/// ∫ density over [a, b] by Gauss-Legendre in u = √s, which removes the
/// 1/√s singularity at the origin.
fn integrate_density(a: f64, b: f64) -> f64 {
    const NODES: [(f64, f64); 5] = [
        (0.0, 0.568_888_888_888_888_9),
        (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
        (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
        (-0.906_179_845_938_664, 0.236_926_885_056_189_1),
        (0.906_179_845_938_664, 0.236_926_885_056_189_1),
    ];
    let (ua, ub) = (a.sqrt(), b.sqrt());
    let panels = 64;
    let h = (ub - ua) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let mid = ua + (p as f64 + 0.5) * h;
        for (x, w) in NODES {
            let u = mid + 0.5 * h * x;
            if u > 0.0 {
                total += 0.5 * h * w * porter_thomas_density(u * u, 1.0, 1).unwrap() * 2.0 * u;
            }
        }
    }
    total
}

fn quantile(p: f64) -> f64 {
    let (mut lo, mut hi) = (0.0, 100.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if porter_thomas_cdf(mid, 1.0) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn porter_thomas() -> Outcome {
    let n = 1_000_000;
    let sample =
        sample_porter_thomas(1.0, n, &mut RandomStream::new(2024)).map_err(|e| e.to_string())?;
    let mean = sample.mean();
    let var = sample.variance();

    let bins = 50;
    let mut edges: Vec<f64> = (0..bins)
        .map(|i| quantile(i as f64 / bins as f64))
        .collect();
    edges.push(80.0);
    let mut counts = vec![0u64; bins];
    for &v in &sample.values {
        let i = edges
            .partition_point(|&e| e <= v)
            .saturating_sub(1)
            .min(bins - 1);
        counts[i] += 1;
    }
    let mut worst_rel: f64 = 0.0;
    let mut used = 0;
    for i in 0..bins {
        if counts[i] < 1000 {
            continue;
        }
        used += 1;
        let width = edges[i + 1] - edges[i];
        let empirical = counts[i] as f64 / (n as f64 * width);
        let model = integrate_density(edges[i], edges[i + 1]) / width;
        worst_rel = worst_rel.max((empirical - model).abs() / model);
    }

    let hist = digit_histogram(&sample.values, 1, 10, 0.0).unwrap();
    let tv = total_variation(&hist.fractions(), &benford_first());
    check(
        (mean - 1.0).abs() <= 0.005 && (var - 2.0).abs() <= 0.03 && worst_rel < 0.05 && used == bins && tv < 0.02,
        format!("mean {mean:.5}, variance {var:.4}, density rel err {worst_rel:.4} over {used} bins, TV {tv:.5}"),
    )
}

fn cascade() -> Outcome {
    let factors = [1usize, 2, 5, 10, 20, 50];
    let slack = 0.002;
    let mut mads = Vec::new();
    for (i, &k) in factors.iter().enumerate() {
        let mut stream = RandomStream::new(77).split(i as u64);
        let sample = multiplicative_cascade(k, 100_000, FactorLaw::UniformUnit, &mut stream)
            .map_err(|e| e.to_string())?;
        let report = conformance_report(&sample.values, 1, 10, 0.0).map_err(|e| e.to_string())?;
        mads.push(report.mad);
    }
    let monotone = mads.windows(2).all(|w| w[1] <= w[0] + slack);
    let last = *mads.last().unwrap();
    let listing: Vec<String> = factors
        .iter()
        .zip(&mads)
        .map(|(k, m)| format!("{k}:{m:.5}"))
        .collect();
    check(
        last < 0.005 && monotone,
        format!(
            "MAD by factor count {} (monotone within {slack}: {monotone})",
            listing.join(" ")
        ),
    )
}

/// Leading `n` digits of `x` read from a long decimal rendering, or `None`
/// when rounding in the rendering could reach them.
fn decimal_digits(x: f64, n: usize) -> Option<Vec<u8>> {
    let text = format!("{:.40e}", x);
    let mantissa: Vec<u8> = text
        .split('e')
        .next()
        .unwrap()
        .bytes()
        .filter(u8::is_ascii_digit)
        .map(|b| b - b'0')
        .collect();
    if mantissa[n..].iter().all(|&d| d == 9) || mantissa[n..].iter().all(|&d| d == 0) {
        return None;
    }
    Some(mantissa[..n].to_vec())
}

fn digit_invariance() -> Outcome {
    let mut stream = RandomStream::new(99);
    let mut checks = 0u64;
    let mut oracle_checks = 0u64;
    let mut failures = Vec::new();
    let mut record = |x: f64, m: i32, what: &str| {
        if failures.len() < 5 {
            failures.push(format!("{what} x={x:e} m={m}"));
        }
    };

    let mut boundary = Vec::new();
    for e in -300..=300 {
        let p: f64 = format!("1e{e}").parse().unwrap();
        boundary.extend([
            f64::from_bits(p.to_bits() - 1),
            p,
            f64::from_bits(p.to_bits() + 1),
        ]);
    }

    for i in 0..1_000_000u64 {
        let x = 10f64.powf(580.0 * stream.uniform() - 290.0);
        let m = (stream.next_u64() % 61) as i32 - 30;
        let n = 1 + (i % 3) as usize;
        let plain = significant_digits(x, n, 10).unwrap();
        let scaled = significant_digits_scaled(x, m, n, 10).unwrap();
        checks += 1;
        if plain != scaled {
            record(x, m, "scaled");
        }
        if i % 10 == 0 {
            if let Some(d) = decimal_digits(x, n) {
                oracle_checks += 1;
                if d != plain.digits() {
                    record(x, 0, "oracle");
                }
            }
        }
    }
    for &x in &boundary {
        for n in 1..=3 {
            let plain = significant_digits(x, n, 10).unwrap();
            if let Some(d) = decimal_digits(x, n) {
                oracle_checks += 1;
                if d != plain.digits() {
                    record(x, 0, "oracle");
                }
            }
            for m in -30..=30 {
                checks += 1;
                if significant_digits_scaled(x, m, n, 10).unwrap() != plain {
                    record(x, m, "scaled");
                }
            }
        }
    }
    check(
        failures.is_empty(),
        format!("{checks} scaled comparisons, {oracle_checks} decimal-oracle comparisons; failures: {failures:?}"),
    )
}

fn eigensolver() -> Outcome {
    let two = SymMatrix::from_rows(2, vec![2.0, 1.0, 1.0, 2.0]).unwrap();
    let eig = symmetric_eigen(&two).map_err(|e| e.to_string())?;
    let hand = (eig.eigenvalues[0] - 1.0)
        .abs()
        .max((eig.eigenvalues[1] - 3.0).abs());
    let mut worst_rec: f64 = 0.0;
    let mut worst_orth: f64 = 0.0;
    let stream = RandomStream::new(5);
    for (i, dim) in [2usize, 10, 60, 256].into_iter().enumerate() {
        let a =
            sample_goe_matrix(dim, 1.0, &mut stream.split(i as u64)).map_err(|e| e.to_string())?;
        let eig = symmetric_eigen(&a).map_err(|e| e.to_string())?;
        worst_rec = worst_rec.max(eig.reconstruction_error(&a));
        worst_orth = worst_orth.max(eig.orthonormality_error());
    }
    check(
        hand <= 1e-12 && worst_rec < 1e-10 && worst_orth < 1e-10,
        format!(
            "2x2 error {hand:.1e}, reconstruction {worst_rec:.2e}, orthonormality {worst_orth:.2e}"
        ),
    )
}

fn determinism() -> Outcome {
    let dir = std::env::temp_dir().join(format!("digitlaw-acceptance-{}", std::process::id()));
    fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let commands: [&[&str]; 3] = [
        &["simulate", "--seed", "17"],
        &[
            "simulate",
            "--ensemble",
            "bigaussian",
            "--dim-lower",
            "30",
            "--dim-upper",
            "45",
            "--seed",
            "4",
        ],
        &["sample", "--law", "cascade", "-n", "20000", "--seed", "9"],
    ];
    let mut result = Ok(format!(
        "{} commands run twice, outputs identical",
        commands.len()
    ));
    'outer: for (c, args) in commands.iter().enumerate() {
        let mut outputs = Vec::new();
        for run in 0..2 {
            let path = dir.join(format!("{c}-{run}.txt"));
            let out = Command::new(env!("CARGO_BIN_EXE_digitlaw"))
                .args(*args)
                .arg("--out")
                .arg(&path)
                .output()
                .map_err(|e| e.to_string())?;
            if !out.status.success() {
                result = Err(format!("{args:?} exited with {}", out.status));
                break 'outer;
            }
            outputs.push((out.stdout, fs::read(&path).map_err(|e| e.to_string())?));
        }
        if outputs[0] != outputs[1] {
            result = Err(format!("{args:?} differs between runs"));
            break;
        }
    }
    let _ = fs::remove_dir_all(&dir);
    result
}

fn main() -> ExitCode {
    // the reference distribution is the same table the library uses
    assert_eq!(
        DigitDistribution::benford(10, 1).unwrap().probabilities(),
        benford_first().as_slice()
    );

    let mut sums = Vec::new();
    let mut failed = 0;
    let mut run = |id: u32, name: &str, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        let (tag, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("[{tag}] {id}. {name} ({secs:.2} s): {detail}");
    };
    run(1, "Benford reference exactness", &mut benford_reference);
    run(2, "fixture statistics", &mut fixture_statistics);
    run(3, "RMT first-digit conformance", &mut || {
        rmt_reproduction(&mut sums)
    });
    run(4, "strength-sum conservation", &mut || {
        strength_conservation(&mut sums)
    });
    run(5, "Porter-Thomas consistency", &mut porter_thomas);
    run(6, "multiplicative cascade convergence", &mut cascade);
    run(7, "digit extraction invariance", &mut digit_invariance);
    run(8, "eigensolver quality", &mut eigensolver);
    run(9, "determinism", &mut determinism);
    if failed == 0 {
        println!("acceptance: all 9 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} of 9 criteria failed");
        ExitCode::FAILURE
    }
}
