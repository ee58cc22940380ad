use std::convert::Infallible;
use std::io::Write;
use std::time::Instant;

use glasd::benchmarks::{BenchmarkName, Variant};
use glasd::corr::{angle_dim, corr_to_angles, minimize_over_corr, CorrSearch, CorrelationMatrix};
use glasd::io::{
    fmt_f64, read_data_csv, write_corr_csv, write_heatmap_csv, write_rows_csv, write_trace_csv,
};
use glasd::losses::{outlier_report as count_outliers, pilot_correlation, RobustObjective};
use glasd::optimizer::{minimize, OptimizerOverrides, RunRecord, Termination};
use glasd::seed::derive_seed;
use glasd::sim::{loss_label, run_scenario, ScenarioSpec};
use serde::Serialize;
use serde_json::json;

use crate::error::CliError;
use crate::output::{short, OutDir, RECORD};
use crate::spec::{BenchmarkSuiteSpec, EstimateSpec, OptimizeSpec, OutlierSpec, RunSpec};

fn write_record<T: Serialize>(out: &OutDir, run: RunSpec, outcome: T) -> Result<(), CliError> {
    out.write_json(
        RECORD,
        &json!({
            "version": env!("CARGO_PKG_VERSION"),
            "run": run,
            "outcome": outcome,
        }),
    )
}

fn mean_and_se(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    if v.len() < 2 {
        return (mean, 0.0);
    }
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[derive(Serialize)]
struct RunSummary {
    start: usize,
    seed: u64,
    f_best: f64,
    evaluations: u64,
    iterations: u64,
    termination: Termination,
}

fn summaries(runs: &[RunRecord]) -> Vec<RunSummary> {
    runs.iter()
        .enumerate()
        .map(|(start, r)| RunSummary {
            start,
            seed: r.seed,
            f_best: r.f_best,
            evaluations: r.evaluations,
            iterations: r.iterations,
            termination: r.termination,
        })
        .collect()
}

/// Multi-start minimization of one benchmark.
struct MultiStart {
    runs: Vec<RunRecord>,
    best_run: usize,
    best_matrix: Option<CorrelationMatrix>,
    runtimes: Vec<f64>,
}

impl MultiStart {
    fn values(&self) -> Vec<f64> {
        self.runs.iter().map(|r| r.f_best).collect()
    }
}

fn run_benchmark(
    function: BenchmarkName,
    variant: Variant,
    dim: usize,
    starts: usize,
    seed: u64,
    overrides: &OptimizerOverrides,
) -> Result<MultiStart, CliError> {
    match variant {
        Variant::Box => {
            let domain = function.box_domain(dim)?;
            let mut runs = Vec::with_capacity(starts);
            let mut runtimes = Vec::with_capacity(starts);
            for k in 0..starts {
                let config = overrides.config_for(dim, derive_seed(seed, k as u64));
                let started = Instant::now();
                runs.push(minimize(
                    |x: &[f64]| function.eval(x),
                    &domain,
                    None,
                    &config,
                )?);
                runtimes.push(started.elapsed().as_secs_f64());
            }
            let best_run = argmin(&runs);
            Ok(MultiStart {
                runs,
                best_run,
                best_matrix: None,
                runtimes,
            })
        }
        Variant::Corr => {
            let search = CorrSearch {
                dim,
                config: overrides.config_for(angle_dim(dim)?, seed),
                starts,
                warm_start: None,
            };
            let found = minimize_over_corr(
                |c: &CorrelationMatrix| Ok::<_, Infallible>(function.eval_corr(c)),
                &search,
            )?;
            Ok(MultiStart {
                runs: found.runs,
                best_run: found.best_run,
                best_matrix: Some(found.best),
                runtimes: found.runtimes,
            })
        }
    }
}

fn argmin(runs: &[RunRecord]) -> usize {
    (0..runs.len()).fold(0, |b, k| {
        if runs[k].f_best < runs[b].f_best {
            k
        } else {
            b
        }
    })
}

fn write_timing(out: &OutDir, runtimes: &[f64]) -> Result<(), CliError> {
    let (mean, _) = mean_and_se(runtimes);
    out.write_json(
        "timing.json",
        &json!({ "runtimes": runtimes, "mean_runtime": mean }),
    )
}

pub fn optimize(s: &OptimizeSpec, out: &OutDir) -> Result<(), CliError> {
    let ms = run_benchmark(s.function, s.variant, s.dim, s.starts, s.seed, &s.optimizer)?;
    let values = ms.values();
    let (mean, se) = mean_and_se(&values);
    let best = &ms.runs[ms.best_run];
    out.write_json(
        "result.json",
        &json!({
            "function": s.function,
            "variant": s.variant,
            "dim": s.dim,
            "starts": s.starts,
            "seed": s.seed,
            "min_value": best.f_best,
            "mean_value": mean,
            "se": se,
            "best_run": ms.best_run,
            "best_point": best.x_best,
            "runs": summaries(&ms.runs),
        }),
    )?;
    for (k, run) in ms.runs.iter().enumerate() {
        out.write_with(&format!("trace_{k}.csv"), |w| {
            write_trace_csv(w, &run.trace)
        })?;
    }
    if let Some(c) = &ms.best_matrix {
        let names: Vec<String> = (1..=c.dim()).map(|j| format!("V{j}")).collect();
        out.write_with("best_matrix.csv", |w| write_corr_csv(w, c, &names))?;
    }
    write_timing(out, &ms.runtimes)?;
    write_record(
        out,
        RunSpec::Optimize(s.clone()),
        json!({ "start_seeds": ms.runs.iter().map(|r| r.seed).collect::<Vec<_>>() }),
    )?;
    println!(
        "{} ({}, {}): min {} over {} starts, mean {} (se {})",
        s.function,
        format!("{:?}", s.variant).to_lowercase(),
        s.dim,
        short(best.f_best),
        s.starts,
        short(mean),
        short(se)
    );
    Ok(())
}

pub fn estimate(s: &EstimateSpec, out: &OutDir) -> Result<(), CliError> {
    let raw = read_data_csv(&s.input)?;
    if raw.n() < 2 || raw.p() < 2 {
        return Err(CliError::Usage(format!(
            "{}: need at least 2 rows and 2 columns, got {} x {}",
            s.input.display(),
            raw.n(),
            raw.p()
        )));
    }
    let names = raw.names_or_default();
    let x = raw.standardized()?;
    let objective = RobustObjective::new(&x, &s.loss)?;
    let p = x.p();
    let search = CorrSearch {
        dim: p,
        config: s.optimizer.config_for(angle_dim(p)?, s.seed),
        starts: s.starts,
        warm_start: if s.warm_start {
            let pilot = pilot_correlation(&x, s.loss.pilot_shrinkage_floor)?;
            Some(corr_to_angles(&pilot).into_vec())
        } else {
            None
        },
    };
    let found = minimize_over_corr(|c: &CorrelationMatrix| objective.evaluate(c), &search)?;
    out.write_with("corr.csv", |w| write_corr_csv(w, &found.best, &names))?;
    out.write_with("heatmap.csv", |w| write_heatmap_csv(w, &found.best, &names))?;
    write_timing(out, &found.runtimes)?;
    let best = &found.runs[found.best_run];
    write_record(
        out,
        RunSpec::Estimate(s.clone()),
        json!({
            "loss": loss_label(&s.loss),
            "threshold": objective.threshold(),
            "loss_value": best.f_best,
            "best_run": found.best_run,
            "start_seeds": search.start_seeds(),
            "runs": summaries(&found.runs),
        }),
    )?;
    println!(
        "{} loss {} on {} x {} data (threshold {}), best of {} starts",
        loss_label(&s.loss),
        short(best.f_best),
        x.n(),
        p,
        objective.threshold().map_or("-".into(), short),
        s.starts
    );
    Ok(())
}

pub fn benchmark(s: &BenchmarkSuiteSpec, out: &OutDir) -> Result<(), CliError> {
    let mut table = String::from("function,size,min_value,mean_value,se\n");
    let mut cells = Vec::new();
    let mut timing = Vec::new();
    for (i, &function) in s.functions.iter().enumerate() {
        for (j, &size) in s.sizes.iter().enumerate() {
            // each cell gets its own stream so adding cells leaves others unchanged
            let seed = derive_seed(derive_seed(s.seed, i as u64), j as u64);
            let ms = run_benchmark(function, s.variant, size, s.starts, seed, &s.optimizer)?;
            let values = ms.values();
            let (mean, se) = mean_and_se(&values);
            let min = ms.runs[ms.best_run].f_best;
            table.push_str(&format!(
                "{function},{size},{},{},{}\n",
                fmt_f64(min),
                fmt_f64(mean),
                fmt_f64(se)
            ));
            println!(
                "{function:<11} {size:>4}  min {}  mean {}  se {}",
                short(min),
                short(mean),
                short(se)
            );
            cells.push(json!({
                "function": function,
                "size": size,
                "seed": seed,
                "min_value": min,
                "mean_value": mean,
                "se": se,
                "best_run": ms.best_run,
                "runs": summaries(&ms.runs),
            }));
            timing.push(json!({
                "function": function,
                "size": size,
                "mean_runtime": mean_and_se(&ms.runtimes).0,
            }));
        }
    }
    let mut w = out.create("benchmark_table.csv")?;
    w.write_all(table.as_bytes())?;
    w.flush()?;
    out.write_json("results.json", &cells)?;
    out.write_json("timing.json", &timing)?;
    write_record(out, RunSpec::Benchmark(s.clone()), json!({}))
}

pub fn simulate(s: &ScenarioSpec, out: &OutDir) -> Result<(), CliError> {
    let (result, timing) = run_scenario(s)?;
    let rows: Vec<(String, Vec<f64>)> = result
        .summary
        .iter()
        .map(|l| (l.loss.clone(), vec![l.mean_rmse, l.se]))
        .collect();
    out.write_with("rmse_table.csv", |w| {
        write_rows_csv(w, &["loss", "mean_rmse", "se"], &rows)
    })?;
    out.write_json("scenario.json", &result)?;
    let runtime_rows: Vec<(String, Vec<f64>)> = result
        .summary
        .iter()
        .enumerate()
        .map(|(k, l)| (l.loss.clone(), vec![timing.mean_runtime(k)]))
        .collect();
    out.write_with("timing.csv", |w| {
        write_rows_csv(w, &["loss", "mean_runtime"], &runtime_rows)
    })?;
    out.write_json("timing.json", &timing)?;
    write_record(
        out,
        RunSpec::Simulate(s.clone()),
        json!({
            "replicate_seeds": result.replicates.iter().map(|r| r.seed).collect::<Vec<_>>(),
        }),
    )?;
    for l in &result.summary {
        println!(
            "{:<16} rmse {} (se {})",
            l.loss,
            short(l.mean_rmse),
            short(l.se)
        );
    }
    Ok(())
}

pub fn outlier_report(s: &OutlierSpec, out: &OutDir) -> Result<(), CliError> {
    let x = read_data_csv(&s.input)?;
    let names = x.names_or_default();
    let counts = count_outliers(&x);
    let mut w = out.create("outliers.csv")?;
    writeln!(w, "column,count")?;
    for (name, count) in names.iter().zip(&counts) {
        writeln!(w, "{name},{count}")?;
        println!("{name:<20} {count}");
    }
    w.flush()?;
    write_record(
        out,
        RunSpec::OutlierReport(s.clone()),
        json!({ "total": counts.iter().sum::<usize>() }),
    )
}
