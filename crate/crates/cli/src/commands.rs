use std::fmt::Write as _;
use std::time::Instant;

use margin_mcmc::{
    build_kernel, datasets, enumerate_state_space, estimate_statistic, fraction_string, run_benchmark, run_chain,
    strip_matrix, swap_efficiency_report, tv_distance_curve, Algorithm, BinaryMatrix, EfficiencyReport, EstimateConfig,
    Margins, MatrixError, Reduction, RngStream, RunOptions, StateSpace,
};

use crate::args::{BenchmarkArgs, ChainArgs, EnumerateArgs, EstimateArgs, KernelArgs, MarginArgs, SampleArgs, TvArgs};
use crate::error::CliError;
use crate::output::{emit, float, metadata_line, Csv};

/// An embedded dataset by name, otherwise a matrix file in the text format.
pub fn load_dataset(source: &str) -> Result<BinaryMatrix, CliError> {
    if let Some(m) = datasets::by_name(source) {
        return Ok(m);
    }
    let text = std::fs::read_to_string(source).map_err(|e| CliError::Data(format!("cannot read {source}: {e}")))?;
    BinaryMatrix::from_text(&text).map_err(|e| match e {
        MatrixError::Parse { .. } => CliError::Data(format!("{source}: {e}")),
        other => CliError::Data(format!("{source}: {other}")),
    })
}

fn state_space(args: &MarginArgs) -> Result<StateSpace, CliError> {
    let margins =
        Margins::new(args.row_sums.clone(), args.col_sums.clone()).map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(enumerate_state_space(&margins, args.cap)?)
}

fn nonempty_space(args: &MarginArgs) -> Result<StateSpace, CliError> {
    let space = state_space(args)?;
    if space.is_empty() {
        return Err(CliError::Data(format!("no binary matrix has margins {}", space.margins())));
    }
    Ok(space)
}

pub fn enumerate(args: &EnumerateArgs) -> Result<(), CliError> {
    let space = state_space(&args.margins)?;
    let mut text = format!("{}\n", space.len());
    if args.dump {
        for a in space.states() {
            let _ = write!(text, "\n{a}");
        }
    }
    emit(&text, None)
}

pub fn kernel(args: &KernelArgs) -> Result<(), CliError> {
    let space = nonempty_space(&args.margins)?;
    let p = build_kernel(&space, args.algorithm)?;
    let keys: Vec<String> = space.states().iter().map(|a| a.canonical_key().to_string()).collect();
    let mut header = vec!["state".to_string()];
    header.extend(keys.iter().cloned());
    let mut csv = Csv::with_header(None, header);
    for (i, key) in keys.iter().enumerate() {
        csv.row(std::iter::once(key.clone()).chain((0..space.len()).map(|j| fraction_string(&p.get(i, j)))));
    }
    emit(&csv.into_string(), args.output.as_deref())
}

pub fn tv(args: &TvArgs) -> Result<(), CliError> {
    let space = nonempty_space(&args.margins)?;
    let algorithms = if args.algorithm.is_empty() { Algorithm::ALL.to_vec() } else { args.algorithm.clone() };
    let mut csv = Csv::new(None, &["algorithm", "k", "tv", "log10_tv"]);
    for algorithm in algorithms {
        let curve = tv_distance_curve(&build_kernel(&space, algorithm)?, args.k_max);
        for point in &curve.points {
            csv.row([algorithm.name().to_string(), point.k.to_string(), float(point.tv), float(point.log10_tv())]);
        }
    }
    emit(&csv.into_string(), args.output.as_deref())
}

fn run_options(args: &ChainArgs) -> RunOptions {
    RunOptions { iterations: args.iterations, burn_in: args.burn_in, thin: args.thin }
}

pub fn sample(args: &SampleArgs) -> Result<(), CliError> {
    let chain = &args.chain;
    let input = load_dataset(&chain.input)?;
    let (reduction, start): (Option<Reduction>, Option<BinaryMatrix>) = if chain.no_strip {
        (None, Some(input.clone()))
    } else {
        let (r, s) = strip_matrix(&input)?;
        (Some(r), s)
    };
    let opts = run_options(chain);
    let mut text = metadata_line(Some(chain.seed));
    let mut first = true;
    let mut push = |text: &mut String, a: &BinaryMatrix| {
        if !first {
            text.push('\n');
        }
        first = false;
        let _ = write!(text, "{a}");
    };

    let clock = Instant::now();
    let report = match start {
        Some(start) => {
            let mut rng = RngStream::new(chain.seed);
            let mut failure = None;
            let state = run_chain(start, chain.algorithm, opts, &mut rng, |s| {
                let full = match &reduction {
                    Some(r) => r.expand(Some(s.matrix())),
                    None => Ok(s.matrix().clone()),
                };
                match full {
                    Ok(a) => push(&mut text, &a),
                    Err(e) => failure = failure.take().or(Some(e)),
                }
            })?;
            if let Some(e) = failure {
                return Err(CliError::Internal(e.to_string()));
            }
            swap_efficiency_report(&state, clock.elapsed())
        }
        None => {
            // Every cell is forced: the chain can only stay put.
            for t in 1..=opts.iterations {
                if opts.observes(t) {
                    push(&mut text, &input);
                }
            }
            EfficiencyReport {
                algorithm: chain.algorithm,
                iterations: opts.iterations,
                swaps: 0,
                cells_changed: 0,
                wall_seconds: clock.elapsed().as_secs_f64(),
                time_per_swap: None,
            }
        }
    };
    emit(&text, chain.output.as_deref())?;
    if args.report {
        let per_swap = report.time_per_swap.map_or_else(|| "NA".to_string(), float);
        emit(
            &format!(
                "iterations={} successful_swaps={} wall_seconds={} time_per_swap={per_swap}\n",
                report.iterations,
                report.swaps,
                float(report.wall_seconds)
            ),
            None,
        )?;
    }
    Ok(())
}

pub fn estimate(args: &EstimateArgs) -> Result<(), CliError> {
    let chain = &args.chain;
    let input = load_dataset(&chain.input)?;
    let config = EstimateConfig {
        algorithm: chain.algorithm,
        run: run_options(chain),
        seed: chain.seed,
        strip: !chain.no_strip,
    };
    let est = estimate_statistic(&input, args.stat, &config)?;
    let mut csv = Csv::new(Some(chain.seed), &["iteration", "value", "running_mean", "running_std"]);
    for p in est.trace.points() {
        csv.row([p.iteration.to_string(), float(p.value), float(p.running_mean), float(p.running_std)]);
    }
    emit(&csv.into_string(), chain.output.as_deref())?;
    let summary = match (est.trace.mean(), est.trace.std()) {
        (Some(mean), Some(std)) => format!("mean={} std={}", float(mean), float(std)),
        _ => "mean=NA std=NA".to_string(),
    };
    eprintln!(
        "{}: observed={} {summary} successful_swaps={} chain_dims={}x{}",
        args.stat,
        float(est.observed),
        est.successful_swaps,
        est.rows,
        est.cols
    );
    Ok(())
}

pub fn benchmark(args: &BenchmarkArgs) -> Result<(), CliError> {
    if let Some(p) = args.fill.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(CliError::Usage(format!("fill probability {p} is outside [0, 1]")));
    }
    let algorithms = if args.algorithm.is_empty() {
        vec![Algorithm::Swap, Algorithm::RectangleLoop]
    } else {
        args.algorithm.clone()
    };
    let mut csv = Csv::new(
        Some(args.seed),
        &[
            "fill",
            "seed",
            "algorithm",
            "rows",
            "cols",
            "iterations",
            "successful_swaps",
            "wall_seconds",
            "time_per_swap",
            "perturbation",
        ],
    );
    for &fill in &args.fill {
        for r in 0..args.replicates {
            let seed = args.seed.wrapping_add(r);
            for &algorithm in &algorithms {
                let rec = run_benchmark(args.rows, args.cols, fill, algorithm, args.iterations, seed)?;
                csv.row([
                    float(fill),
                    seed.to_string(),
                    algorithm.name().to_string(),
                    rec.rows.to_string(),
                    rec.cols.to_string(),
                    rec.report.iterations.to_string(),
                    rec.report.swaps.to_string(),
                    float(rec.report.wall_seconds),
                    rec.report.time_per_swap.map_or_else(|| "NA".to_string(), float),
                    float(rec.perturbation),
                ]);
            }
        }
    }
    emit(&csv.into_string(), args.output.as_deref())
}
