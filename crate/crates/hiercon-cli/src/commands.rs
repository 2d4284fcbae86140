//! Subcommand implementations: flag validation, defaults, and output.

use std::path::Path;

use hiercon_core::closedform::{analytic_spectrum_l2, rate_autonomous_l2};
use hiercon_core::dynamics::{simulate, InputSpec, SimConfig};
use hiercon_core::hierarchy::{build_weight_matrix, HierarchyConfig};
use hiercon_core::spectral::{numeric_spectrum, rate_autonomous, rate_with_input};
use hiercon_core::sweep::{
    classify_lambda_region, sweep_autonomous_rate, sweep_input_rate, tradeoff_report, GridSpec,
};
use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::args::{
    BuildArgs, Cli, Command, GridRange, NetArgs, OutFormat, RateArgs, SimulateArgs, SpectrumArgs,
    SweepArgs, SweepMode,
};
use crate::{formats, verify, CliError};

pub(crate) fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Build(args) => build(args),
        Command::Simulate(args) => run_simulate(args),
        Command::Spectrum(args) => spectrum(args),
        Command::Rate(args) => rate(args),
        Command::Sweep(args) => sweep(args),
        Command::Verify(args) => verify::run(args),
    }
}

fn net_config(net: &NetArgs) -> Result<HierarchyConfig, CliError> {
    Ok(HierarchyConfig::new(net.layers, net.breadth, net.alpha, net.beta)?)
}

pub(crate) fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            use std::io::Write;
            match std::io::stdout().write_all(text.as_bytes()) {
                // A consumer that stops reading (`| head`) is not an error.
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                other => other.map_err(|e| CliError::Io(format!("cannot write output: {e}"))),
            }
        }
    }
}

fn build(args: BuildArgs) -> Result<(), CliError> {
    let config = net_config(&args.net)?;
    let w = build_weight_matrix(&config)?;
    let text = match args.format.unwrap_or(OutFormat::Csv) {
        OutFormat::Csv => formats::matrix_csv(&w),
        OutFormat::Json => formats::matrix_json(&w),
    };
    emit(args.out.as_deref(), &text)
}

/// Builds the input specification from the three optional flags. The
/// intensity and value both require a node; each defaults to 1 at one.
fn input_from_flags(
    n: usize,
    node: Option<usize>,
    gamma: Option<f64>,
    value: Option<f64>,
) -> Result<InputSpec, CliError> {
    match node {
        Some(node) => Ok(InputSpec::single(n, node, gamma.unwrap_or(1.0), value.unwrap_or(1.0))?),
        None if gamma.is_some() => Err(CliError::Usage("--gamma needs --gamma-node".into())),
        None if value.is_some() => {
            Err(CliError::Usage("--input-value needs --gamma-node".into()))
        }
        None => Ok(InputSpec::none(n)),
    }
}

fn seeded_x0(n: usize, seed: u64) -> DVector<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    DVector::from_fn(n, |_, _| rng.random::<f64>())
}

fn read_x0(path: &Path, n: usize) -> Result<DVector<f64>, CliError> {
    let raw = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    let mut values = Vec::new();
    for (k, line) in raw.lines().enumerate() {
        let cell = line.trim();
        if cell.is_empty() {
            continue;
        }
        let x: f64 = cell.parse().map_err(|_| {
            CliError::Usage(format!("initial-state file line {}: `{cell}` is not a number", k + 1))
        })?;
        values.push(x);
    }
    if values.len() != n {
        return Err(CliError::Usage(format!(
            "initial-state file holds {} values; the network has {n} nodes",
            values.len()
        )));
    }
    Ok(DVector::from_vec(values))
}

fn run_simulate(args: SimulateArgs) -> Result<(), CliError> {
    if args.format == Some(OutFormat::Json) {
        return Err(CliError::Usage("trajectories support only --format csv".into()));
    }
    let config = net_config(&args.net)?;
    let w = build_weight_matrix(&config)?;
    let input = input_from_flags(w.n(), args.gamma_node, args.gamma, args.input_value)?;
    let x0 = match &args.x0_file {
        Some(path) => read_x0(path, w.n())?,
        None => seeded_x0(w.n(), args.seed),
    };
    let sim = SimConfig { dt: args.dt, t_end: args.t_end, record_every: args.record_every };
    let traj = simulate(&w, &input, &x0, &sim)?;
    emit(args.out.as_deref(), &formats::trajectory_csv(&traj))
}

fn spectrum(args: SpectrumArgs) -> Result<(), CliError> {
    if args.format == Some(OutFormat::Csv) {
        return Err(CliError::Usage("spectra support only --format json".into()));
    }
    let config = net_config(&args.net)?;
    let text = if args.analytic {
        formats::analytic_spectrum_json(&analytic_spectrum_l2(&config)?)
    } else {
        let w = build_weight_matrix(&config)?;
        formats::numeric_spectrum_json(&numeric_spectrum(w.entries())?)
    };
    emit(args.out.as_deref(), &text)
}

fn rate(args: RateArgs) -> Result<(), CliError> {
    let config = net_config(&args.net)?;
    if args.gamma.is_some() && args.gamma_node.is_none() {
        return Err(CliError::Usage("--gamma needs --gamma-node".into()));
    }
    let autonomous = args.gamma_node.is_none();
    let (value, method, gamma, input_node);
    if autonomous && config.layers == 2 && !args.force_numeric {
        value = rate_autonomous_l2(&config)?;
        (method, gamma, input_node) = ("analytic", None, None);
    } else {
        let w = build_weight_matrix(&config)?;
        match args.gamma_node {
            None => {
                value = rate_autonomous(&w)?;
                (method, gamma, input_node) = ("numeric", None, None);
            }
            Some(node) => {
                let g = args.gamma.unwrap_or(1.0);
                let input = InputSpec::single(w.n(), node, g, 0.0)?;
                value = rate_with_input(&w, &input)?;
                (method, gamma, input_node) = ("numeric", Some(g), Some(node));
            }
        }
    }
    let text = match args.format {
        None => format!("{value:.7}\n"),
        Some(OutFormat::Csv) => formats::rate_csv(value, method),
        Some(OutFormat::Json) => formats::rate_json(&formats::RateJson {
            rate: value,
            method,
            layers: config.layers,
            breadth: config.breadth,
            alpha: config.alpha,
            beta: config.beta,
            gamma,
            input_node,
        }),
    };
    emit(args.out.as_deref(), &text)
}

fn default_rate_axis() -> Vec<f64> {
    GridRange { lo: 0.1, hi: 10.0, n: 40 }.values(true).expect("static range")
}

fn axis(explicit: Option<GridRange>, log: bool, default: fn() -> Vec<f64>) -> Result<Vec<f64>, CliError> {
    match explicit {
        Some(range) => range.values(log).map_err(CliError::Usage),
        None => Ok(default()),
    }
}

fn sweep(args: SweepArgs) -> Result<(), CliError> {
    if args.mode != SweepMode::Tradeoff && args.beta.is_some() {
        return Err(CliError::Usage("--beta is for tradeoff sweeps; use --beta-grid".into()));
    }
    if matches!(args.mode, SweepMode::Autonomous | SweepMode::Region) && args.gamma.is_some() {
        return Err(CliError::Usage("--gamma applies only to input and tradeoff sweeps".into()));
    }
    let format = args.format.unwrap_or(OutFormat::Csv);

    if args.mode == SweepMode::Tradeoff {
        if args.layers != 2 {
            return Err(CliError::Usage("tradeoff sweeps need --layers 2".into()));
        }
        if args.beta_grid.is_some() {
            return Err(CliError::Usage("tradeoff sweeps fix --beta and take no --beta-grid".into()));
        }
        let beta = args
            .beta
            .ok_or_else(|| CliError::Usage("tradeoff sweeps need --beta".into()))?;
        let alphas = axis(args.alpha_grid, args.log_spacing, default_rate_axis)?;
        let report = tradeoff_report(args.breadth, beta, args.gamma.unwrap_or(1.0), &alphas)?;
        let text = match format {
            OutFormat::Csv => formats::tradeoff_csv(&report),
            OutFormat::Json => formats::tradeoff_json(&report),
        };
        return emit(args.out.as_deref(), &text);
    }

    let (alphas, betas) = if args.mode == SweepMode::Region {
        (
            axis(args.alpha_grid, args.log_spacing, || (1..=35).map(f64::from).collect())?,
            axis(args.beta_grid, args.log_spacing, || {
                (0..40).map(|k| 0.01 + 0.05 * f64::from(k)).collect()
            })?,
        )
    } else {
        (
            axis(args.alpha_grid, args.log_spacing, default_rate_axis)?,
            axis(args.beta_grid, args.log_spacing, default_rate_axis)?,
        )
    };
    let grid = GridSpec::new(args.layers, args.breadth, alphas, betas)?;
    let result = match args.mode {
        SweepMode::Autonomous => sweep_autonomous_rate(&grid)?,
        SweepMode::Region => classify_lambda_region(&grid)?,
        SweepMode::Input => {
            let node = grid.input_node;
            sweep_input_rate(&grid.with_input(args.gamma.unwrap_or(1.0), node)?)?
        }
        SweepMode::Tradeoff => unreachable!("handled above"),
    };
    let text = match format {
        OutFormat::Csv => formats::sweep_csv(&result),
        OutFormat::Json => formats::sweep_json(&result),
    };
    emit(args.out.as_deref(), &text)
}
