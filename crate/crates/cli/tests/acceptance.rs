//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any failed.

mod common;

use std::cell::RefCell;
use std::fs;
use std::path::Path;
use std::time::{Duration, Instant};

use common::{assert_same_artifacts, ok, s, write_csv};
use glasd::benchmarks::{sumsquares, BenchmarkName};
use glasd::corr::{
    corr_from_angles, corr_to_angles, default_angle_box, minimize_over_corr, CorrSearch,
    CorrelationMatrix,
};
use glasd::data::DataMatrix;
use glasd::losses::{
    iqr_threshold, loss_gaussian, loss_robust, mahalanobis_sq_all, rho_huber, rho_tukey, LossKind,
    LossSpec, Threshold,
};
use glasd::optimizer::{glasd_minimize, BoxDomain, OptimizerConfig, Search};
use glasd::seed::{derive_seed, rng_from_seed};
use glasd::sim::{sample_data, Distribution};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn within(elapsed: Duration, limit_secs: u64) -> bool {
    elapsed <= Duration::from_secs(limit_secs)
}

fn interior_box(m: usize, margin: f64) -> BoxDomain {
    let b = default_angle_box(m).unwrap();
    BoxDomain::new(
        b.lower().iter().map(|a| a + margin).collect(),
        b.upper().iter().map(|u| u - margin).collect(),
    )
    .unwrap()
}

fn bijection() -> Outcome {
    let started = Instant::now();
    let mut rng = rng_from_seed(derive_seed(1, 1));
    let (mut angle_err, mut matrix_err) = (0.0f64, 0.0f64);
    for m in [2, 3, 5, 10, 20] {
        let domain = interior_box(m, 1e-3);
        for _ in 0..1000 {
            let w = domain.sample_uniform(&mut rng);
            let c = corr_from_angles(m, &w).unwrap();
            let back = corr_to_angles(&c);
            angle_err = back
                .as_slice()
                .iter()
                .zip(&w)
                .map(|(a, b)| (a - b).abs())
                .fold(angle_err, f64::max);
            let again = corr_from_angles(m, back.as_slice()).unwrap();
            matrix_err = matrix_err.max(again.max_abs_diff(&c));
        }
    }
    let t = started.elapsed();
    outcome(
        angle_err <= 1e-8 && matrix_err <= 1e-8 && within(t, 30),
        format!(
            "angle error {angle_err:.2e}, matrix error {matrix_err:.2e}, {:.1} s",
            t.as_secs_f64()
        ),
    )
}

fn manifold_validity() -> Outcome {
    let started = Instant::now();
    let mut rng = rng_from_seed(derive_seed(1, 2));
    let mut violations = 0;
    let mut worst_diag = 0.0f64;
    let mut smallest = f64::INFINITY;
    for k in 0..100_000usize {
        let m = 2 + k % 19;
        let c =
            corr_from_angles(m, &default_angle_box(m).unwrap().sample_uniform(&mut rng)).unwrap();
        let a = c.as_matrix();
        let symmetric = (0..m).all(|i| (0..i).all(|j| a[(i, j)] == a[(j, i)]));
        let diag = (0..m).map(|i| (a[(i, i)] - 1.0).abs()).fold(0.0, f64::max);
        let lambda = c.min_eigenvalue();
        worst_diag = worst_diag.max(diag);
        smallest = smallest.min(lambda);
        if !symmetric || diag > 1e-12 || lambda.is_nan() || lambda <= 0.0 {
            violations += 1;
        }
    }
    let t = started.elapsed();
    outcome(
        violations == 0 && within(t, 60),
        format!(
            "{violations} violations in 1e5 draws (M = 2..20), max diagonal error {worst_diag:.1e}, smallest eigenvalue {smallest:.1e}, {:.1} s",
            t.as_secs_f64()
        ),
    )
}

fn convex_sanity() -> Outcome {
    let started = Instant::now();
    let domain = BenchmarkName::Sumsquares.box_domain(10).unwrap();
    let finals: Vec<f64> = (0..10)
        .map(|seed| {
            let cfg = OptimizerConfig::for_dimension(10).with_seed(seed);
            glasd_minimize(sumsquares, &domain, None, &cfg)
                .unwrap()
                .f_best
        })
        .collect();
    let hits = finals.iter().filter(|&&f| f <= 1e-6).count();
    let t = started.elapsed();
    let worst = finals.iter().copied().fold(0.0, f64::max);
    outcome(
        hits >= 9 && within(t, 10),
        format!(
            "{hits}/10 seeds reach 1e-6 (worst {worst:.2e}), {:.2} s",
            t.as_secs_f64()
        ),
    )
}

fn table_one() -> Outcome {
    let started = Instant::now();
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, bound) in [
        (BenchmarkName::Ackley, 0.5),
        (BenchmarkName::Rastrigin, 30.0),
        (BenchmarkName::Rosenbrock, 1.0),
    ] {
        let search = CorrSearch::new(5, 10, 7).unwrap();
        let found = minimize_over_corr(
            |c: &CorrelationMatrix| Ok::<_, std::convert::Infallible>(name.eval_corr(c)),
            &search,
        )
        .unwrap();
        let min = found.runs[found.best_run].f_best;
        pass &= min <= bound;
        parts.push(format!("{name} {min:.3e} (<= {bound})"));
    }
    let t = started.elapsed();
    pass &= within(t, 300);
    outcome(
        pass,
        format!("{}, {:.1} s", parts.join(", "), t.as_secs_f64()),
    )
}

fn loss_values() -> Outcome {
    let id = CorrelationMatrix::identity(2).unwrap();
    let half = corr_from_angles(2, &[std::f64::consts::FRAC_PI_6]).unwrap();
    // a zero row adds nothing, so two-row data reproduces the one-row examples
    let x = DataMatrix::from_rows(&[vec![3.0, 4.0], vec![0.0, 0.0]]).unwrap();
    let ones = DataMatrix::from_rows(&[vec![1.0, 1.0], vec![0.0, 0.0]]).unwrap();
    let checks = [
        ("gaussian", loss_gaussian(&x, &id).unwrap(), 12.5),
        (
            "distance",
            mahalanobis_sq_all(&ones, &half).unwrap()[0],
            4.0 / 3.0,
        ),
        ("huber", rho_huber(9.0, 4.0), 8.0),
        ("tukey", rho_tukey(4.5, 3.0), 1.3125),
        (
            "truncated",
            loss_robust(
                &x,
                &id,
                &LossSpec::new(LossKind::Truncated, Threshold::Fixed(5.0)),
            )
            .unwrap(),
            2.5,
        ),
        (
            "iqr",
            iqr_threshold(&[1.0, 2.0, 3.0, 4.0], 3.0).unwrap(),
            7.75,
        ),
    ];
    let worst = checks
        .iter()
        .map(|(_, got, want)| (got - want).abs())
        .fold(0.0, f64::max);
    let failed: Vec<_> = checks
        .iter()
        .filter(|(_, g, w)| (g - w).abs() > 1e-12)
        .map(|c| c.0)
        .collect();
    outcome(
        failed.is_empty(),
        format!("max deviation {worst:.1e} {failed:?}"),
    )
}

/// Runs the scenario through the CLI and returns `(loss, mean, se)` rows.
fn simulate(dir: &Path, name: &str, scenario: &str) -> (Vec<(String, f64, f64)>, Duration) {
    let cfg = dir.join(format!("{name}.toml"));
    fs::write(&cfg, scenario).unwrap();
    let out = dir.join(name);
    let started = Instant::now();
    ok(&["simulate", s(&cfg), "--out", s(&out)]);
    let elapsed = started.elapsed();
    let table = fs::read_to_string(out.join("rmse_table.csv")).unwrap();
    let rows = table
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (
                f[0].to_string(),
                f[1].parse().unwrap(),
                f[2].parse().unwrap(),
            )
        })
        .collect();
    (rows, elapsed)
}

fn row<'a>(rows: &'a [(String, f64, f64)], loss: &str) -> &'a (String, f64, f64) {
    rows.iter().find(|r| r.0 == loss).unwrap()
}

fn fmt_rows(rows: &[(String, f64, f64)]) -> String {
    rows.iter()
        .map(|(l, m, se)| format!("{l} {m:.4} ({se:.4})"))
        .collect::<Vec<_>>()
        .join(", ")
}

fn row_contamination(dir: &Path) -> Outcome {
    let (rows, t) = simulate(
        dir,
        "rows",
        "p = 20\nn = 100\nreplicates = 10\nstarts = 10\n[structure]\nkind = \"sparse-uniform\"\n[contamination]\nkind = \"rows\"\n",
    );
    let g = row(&rows, "gaussian");
    let h = row(&rows, "huber");
    let pooled = (g.2 * g.2 + h.2 * h.2).sqrt();
    outcome(
        h.1 < g.1 && g.1 - h.1 > pooled && within(t, 1800),
        format!(
            "{}; pooled se {pooled:.4}, {:.0} s",
            fmt_rows(&rows),
            t.as_secs_f64()
        ),
    )
}

fn heavy_tails(dir: &Path) -> Outcome {
    let (rows, t) = simulate(
        dir,
        "t3",
        "p = 20\nn = 100\nreplicates = 10\nstarts = 10\n[structure]\nkind = \"block-toeplitz\"\n[distribution]\nkind = \"t\"\ndf = 3.0\n",
    );
    let g = row(&rows, "gaussian");
    let tr = row(&rows, "truncated");
    outcome(
        tr.1 < g.1 && within(t, 1800),
        format!("{}, {:.0} s", fmt_rows(&rows), t.as_secs_f64()),
    )
}

fn linear_fit(y: &[f64]) -> (f64, f64) {
    let n = y.len() as f64;
    let mx = (n - 1.0) / 2.0;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (i, v) in y.iter().enumerate() {
        let dx = i as f64 - mx;
        sxy += dx * (v - my);
        sxx += dx * dx;
        syy += (v - my).powi(2);
    }
    let slope = sxy / sxx;
    (slope, sxy * sxy / (sxx * syy))
}

fn geometric_decay() -> Outcome {
    let n = 5;
    let eig: Vec<f64> = (0..n)
        .map(|i| 1.0 + 9.0 * i as f64 / (n - 1) as f64)
        .collect();
    // minimizer off the dyadic lattice that the step sizes generate from x0
    let target = [0.3711, -0.2093, 0.1357, 0.2919, -0.4271];
    let f = |x: &[f64]| {
        x.iter()
            .zip(&target)
            .zip(&eig)
            .map(|((a, b), l)| l * (a - b).powi(2))
            .sum::<f64>()
    };
    let domain = BoxDomain::cube(-5.0, 5.0, n).unwrap();
    let x0 = vec![3.0; n];
    let mut paths = Vec::new();
    for seed in 0..20 {
        let cfg = OptimizerConfig {
            explore: false,
            ..OptimizerConfig::for_dimension(n).with_seed(seed)
        };
        let mut search = Search::new(f, &domain, Some(&x0), &cfg).unwrap();
        let mut path = vec![search.state().f_current.ln()];
        while let Some(step) = search.step().unwrap() {
            if step.accepted {
                path.push(step.proposal_value.ln());
            }
        }
        paths.push(path);
    }
    let len = paths.iter().map(Vec::len).min().unwrap();
    let median: Vec<f64> = (0..len)
        .map(|j| {
            let mut v: Vec<f64> = paths.iter().map(|p| p[j]).collect();
            v.sort_by(f64::total_cmp);
            0.5 * (v[9] + v[10])
        })
        .collect();
    let (slope, r2) = linear_fit(&median);
    outcome(
        slope < 0.0 && r2 >= 0.9,
        format!("slope {slope:.3} per accepted step, R^2 {r2:.3} over {len} steps"),
    )
}

fn determinism(dir: &Path) -> Outcome {
    let d = dir.join("determinism");
    fs::create_dir_all(&d).unwrap();
    let truth = corr_from_angles(4, &[0.5, 0.4, 1.0, 0.3, 1.2, 2.0]).unwrap();
    let x = sample_data(
        &truth,
        120,
        Distribution::T { df: 3.0 },
        &mut rng_from_seed(5),
    )
    .unwrap();
    write_csv(&d.join("x.csv"), &x);
    let scenario = d.join("s.toml");
    fs::write(&scenario, "p = 5\nn = 60\nreplicates = 3\nstarts = 3\nseed = 2\n[structure]\nkind = \"sparse-uniform\"\n[contamination]\nkind = \"random\"\n").unwrap();
    let x_csv = d.join("x.csv");
    let commands: Vec<Vec<&str>> = vec![
        vec![
            "optimize", "--fn", "ackley", "--M", "5", "--starts", "10", "--seed", "7",
        ],
        vec![
            "optimize",
            "--fn",
            "rastrigin",
            "--variant",
            "box",
            "--dim",
            "4",
            "--starts",
            "3",
        ],
        vec![
            "estimate",
            s(&x_csv),
            "--loss",
            "huber",
            "--threshold",
            "iqr",
            "--starts",
            "4",
            "--seed",
            "9",
        ],
        vec![
            "benchmark",
            "--fn",
            "griewank,rosenbrock",
            "--sizes",
            "3,4",
            "--starts",
            "2",
        ],
        vec!["simulate", s(&scenario)],
        vec!["outlier-report", s(&x_csv)],
    ];
    let mut files = 0;
    let mut failures = Vec::new();
    for (k, cmd) in commands.iter().enumerate() {
        let a = d.join(format!("a{k}"));
        let b = d.join(format!("b{k}"));
        for out in [&a, &b] {
            let mut args = cmd.clone();
            args.extend(["--out", s(out)]);
            ok(&args);
        }
        match std::panic::catch_unwind(|| assert_same_artifacts(&a, &b)) {
            Ok(n) => files += n,
            Err(_) => failures.push(cmd[0]),
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "{files} artifacts from {} commands compared byte for byte; differing: {failures:?}",
            commands.len()
        ),
    )
}

fn invariants_fuzz() -> Outcome {
    type Objective = fn(&[f64]) -> f64;
    let objectives: [(&str, Objective); 5] = [
        ("sphere", |x| x.iter().map(|v| v * v).sum()),
        ("rastrigin", |x| BenchmarkName::Rastrigin.eval(x)),
        ("abs", |x| x.iter().map(|v| (v - 0.7).abs()).sum()),
        ("staircase", |x| {
            x.iter().map(|v| (3.0 * v).floor().abs()).sum()
        }),
        ("ackley", |x| BenchmarkName::Ackley.eval(x)),
    ];
    let domains = [
        BoxDomain::cube(-5.0, 5.0, 2).unwrap(),
        BoxDomain::cube(0.0, 1.0, 5).unwrap(),
        BoxDomain::new(vec![-1.0, 2.0, -30.0], vec![1.0, 2.5, 30.0]).unwrap(),
        BoxDomain::cube(-0.01, 0.02, 8).unwrap(),
    ];
    let mut cases = 0;
    let mut violations = Vec::new();
    for (name, f) in objectives {
        for (di, d) in domains.iter().enumerate() {
            for seed in 0..5 {
                cases += 1;
                let seen = RefCell::new(Vec::new());
                let objective = |x: &[f64]| {
                    let v = f(x);
                    seen.borrow_mut().push((d.contains(x), v));
                    v
                };
                let cfg = OptimizerConfig {
                    max_iterations: 2000,
                    ..OptimizerConfig::for_dimension(d.dim()).with_seed(seed)
                };
                let rec = glasd_minimize(objective, d, None, &cfg).unwrap();
                let seen = seen.into_inner();
                let min = seen.iter().map(|s| s.1).fold(f64::INFINITY, f64::min);
                let feasible = seen.iter().all(|s| s.0) && d.contains(&rec.x_best);
                let monotone = rec.trace.windows(2).all(|w| w[1].f_best <= w[0].f_best);
                if !(feasible && monotone && rec.f_best == min) {
                    violations.push(format!("{name}/{di}/{seed}"));
                }
            }
        }
    }
    outcome(
        violations.is_empty(),
        format!(
            "{cases} cases, {} violations {violations:?}",
            violations.len()
        ),
    )
}

fn main() {
    let dir = tempfile::tempdir().unwrap();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        ("1 bijection round trip", Box::new(bijection)),
        ("2 manifold validity", Box::new(manifold_validity)),
        (
            "3 convex sanity (sumsquares, n = 10)",
            Box::new(convex_sanity),
        ),
        ("4 correlation benchmarks, M = 5", Box::new(table_one)),
        ("5 loss unit values", Box::new(loss_values)),
        (
            "6 row contamination ordering",
            Box::new(|| row_contamination(dir.path())),
        ),
        (
            "7 heavy-tail ordering",
            Box::new(|| heavy_tails(dir.path())),
        ),
        ("8 ASD geometric decay", Box::new(geometric_decay)),
        ("9 determinism", Box::new(|| determinism(dir.path()))),
        (
            "10 monotone best and feasibility",
            Box::new(invariants_fuzz),
        ),
    ];
    let mut failed = 0;
    for (name, check) in &criteria {
        let result = check();
        if !result.pass {
            failed += 1;
        }
        println!(
            "criterion {name}: {} - {}",
            if result.pass { "PASS" } else { "FAIL" },
            result.detail
        );
    }
    println!(
        "\n{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
