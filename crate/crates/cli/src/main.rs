use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use delaysplit::{
    blocked_moments_full, blocked_moments_literal, build_set_splitting_device,
    build_subset_sum_device, generate_split_instance, max_n_for_cable, max_n_for_total_time,
    parse_instance, parse_subset_sum_instance, published_figures, report, simulate, solve_optical,
    solve_oracle, solve_subset_sum, synthesize_trace, DelayDevice, Instance, PhysicalParams,
    SplitInstance, TraceParams,
};

/// Simulate time-delay optical devices for set splitting and subset sum.
#[derive(Parser)]
#[command(name = "delaysplit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide an instance. Exit 0 when solvable, 1 when not, 2 on errors
    Solve {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = SolveMethod::Optical)]
        method: SolveMethod,
    },
    /// Print the arrival timeline of a device
    Simulate(SimulateArgs),
    /// Print the blocked moment set of a set-splitting instance
    Moments {
        file: PathBuf,
        /// Only the moments of supersets of family members
        #[arg(long, conflicts_with = "full")]
        literal: bool,
        /// Include the reflected moments as well (default)
        #[arg(long)]
        full: bool,
    },
    /// Write a sampled oscilloscope trace as CSV
    Trace {
        file: PathBuf,
        #[arg(long)]
        rise_time: f64,
        #[arg(long)]
        unit_delay: f64,
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 4)]
        samples_per_rise: u32,
    },
    /// Physical size, time and power envelope of the device
    Feasibility(FeasibilityArgs),
    /// Print a random set-splitting instance
    Gen {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        max_set_size: u32,
        #[arg(long)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SolveMethod {
    Optical,
    Oracle,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    source: DeviceSource,
    /// Print the arc table before the timeline
    #[arg(long)]
    dump_device: bool,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct DeviceSource {
    /// Instance file of either kind
    file: Option<PathBuf>,
    /// Bare set-splitting device of this size
    #[arg(long)]
    set_splitting_n: Option<u32>,
    /// Subset-sum instance file
    #[arg(long)]
    subset_sum_file: Option<PathBuf>,
}

#[derive(Args)]
struct FeasibilityArgs {
    #[arg(long, default_value_t = delaysplit::feasibility::DEFAULT_RISE_TIME)]
    rise_time: f64,
    #[arg(long, default_value_t = delaysplit::feasibility::DEFAULT_LIGHT_SPEED)]
    light_speed: f64,
    #[command(flatten)]
    size: SizeArg,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct SizeArg {
    #[arg(long)]
    n: Option<u32>,
    /// Largest n whose full sweep fits in this many seconds
    #[arg(long)]
    total_time: Option<f64>,
    /// Largest n whose longest cable fits in this many meters
    #[arg(long)]
    max_cable: Option<f64>,
}

fn read_instance(path: &Path) -> Result<Instance> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_instance(&text).with_context(|| format!("parsing {}", path.display()))
}

fn split_only(path: &Path) -> Result<SplitInstance> {
    match read_instance(path)? {
        Instance::Split(inst) => Ok(inst),
        Instance::SubsetSum(_) => bail!("{} is a subset-sum instance", path.display()),
    }
}

fn device_for(inst: &Instance) -> Result<DelayDevice> {
    Ok(match inst {
        Instance::Split(s) => build_set_splitting_device(s.n())?,
        Instance::SubsetSum(s) => build_subset_sum_device(s),
    })
}

fn solve(file: &Path, method: SolveMethod) -> Result<ExitCode> {
    let solved = match read_instance(file)? {
        Instance::Split(inst) => {
            let ans = match method {
                SolveMethod::Optical => solve_optical(&inst)?,
                SolveMethod::Oracle => solve_oracle(&inst)?,
            };
            println!("{ans}");
            ans.is_solvable()
        }
        Instance::SubsetSum(inst) => {
            let ans = match method {
                SolveMethod::Optical => solve_subset_sum(&inst)?,
                SolveMethod::Oracle => delaysplit::subset_sum_oracle(&inst)?,
            };
            println!("{ans}");
            ans.found
        }
    };
    Ok(if solved {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn run_simulate(args: &SimulateArgs) -> Result<()> {
    let src = &args.source;
    let device = match (&src.file, src.set_splitting_n, &src.subset_sum_file) {
        (Some(f), _, _) => device_for(&read_instance(f)?)?,
        (_, Some(n), _) => build_set_splitting_device(n)?,
        (_, _, Some(f)) => {
            let text = fs::read_to_string(f).with_context(|| format!("reading {}", f.display()))?;
            build_subset_sum_device(&parse_subset_sum_instance(&text)?)
        }
        _ => bail!("no device given"),
    };
    let timeline = simulate(&device)?;
    let mut out = BufWriter::new(io::stdout().lock());
    if args.dump_device {
        write!(out, "{}", device.dump())?;
        writeln!(out)?;
    }
    write!(out, "{timeline}")?;
    out.flush()?;
    Ok(())
}

fn moments(file: &Path, literal: bool) -> Result<()> {
    let inst = split_only(file)?;
    if literal {
        println!("literal: {}", blocked_moments_literal(&inst)?);
    } else {
        println!("full: {}", blocked_moments_full(&inst)?);
    }
    Ok(())
}

fn trace(file: &Path, params: &TraceParams, out: &Path) -> Result<()> {
    let timeline = simulate(&device_for(&read_instance(file)?)?)?;
    let trace = synthesize_trace(&timeline, params)?;
    let sink = File::create(out).with_context(|| format!("creating {}", out.display()))?;
    trace.write_csv(BufWriter::new(sink))?;
    Ok(())
}

fn feasibility(args: &FeasibilityArgs) -> Result<()> {
    let p = PhysicalParams::new(args.rise_time, args.light_speed)?;
    let n = match (args.size.n, args.size.total_time, args.size.max_cable) {
        (Some(n), _, _) => {
            print!("{}", report(n, &p)?);
            0
        }
        (_, Some(t), _) => {
            let n = max_n_for_total_time(t, &p)?;
            println!("max_n_for_total_time: {n}");
            n
        }
        (_, _, Some(c)) => {
            let n = max_n_for_cable(c, &p)?;
            println!("max_n_for_cable: {n}");
            n
        }
        _ => bail!("one of --n, --total-time, --max-cable is required"),
    };
    // derived sizes can exceed what a mask holds for very short rise times
    if n >= 1 {
        print!("{}", report(n.min(delaysplit::MAX_N), &p)?);
    }
    for fig in published_figures(&p)? {
        println!("{fig}");
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Solve { file, method } => return solve(&file, method),
        Command::Simulate(args) => run_simulate(&args)?,
        Command::Moments { file, literal, .. } => moments(&file, literal)?,
        Command::Trace {
            file,
            rise_time,
            unit_delay,
            epsilon,
            out,
            samples_per_rise,
        } => {
            let params = TraceParams {
                unit_delay,
                epsilon,
                rise_time,
                samples_per_rise,
            };
            trace(&file, &params, &out)?
        }
        Command::Feasibility(args) => feasibility(&args)?,
        Command::Gen {
            n,
            m,
            max_set_size,
            seed,
        } => print!("{}", generate_split_instance(n, m, max_set_size, seed)?),
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
