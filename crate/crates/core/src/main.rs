use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use equifit::bench::{self, MethodConfig, MethodId};
use equifit::testlib::TestFunctionId;
use equifit::verify;

#[derive(Parser)]
#[command(name = "equifit", about = "Rational approximation of equispaced data", version)]
struct Cli {
    /// Run the built-in verification suite and exit.
    #[arg(long, global = true)]
    seedcheck: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Convergence sweep over n for a set of methods; writes a CSV.
    Converge(ConvergeArgs),
    /// Complex-plane error map of the rational fit; writes a CSV plus a pole list.
    Cmap(CmapArgs),
}

#[derive(Args, Default)]
struct ConvergeArgs {
    /// Optional key=value config file; command-line flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    function: Option<String>,
    /// Comma-separated list, e.g. aaa,fh,spline. Default: all comparison methods.
    #[arg(long)]
    methods: Option<String>,
    #[arg(long)]
    nmax: Option<usize>,
    #[arg(long)]
    nstep: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    /// Dense evaluation grid size for error measurement.
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write a gnuplot-style plot-data file next to the CSV.
    #[arg(long)]
    plot: Option<PathBuf>,
}

#[derive(Args, Default)]
struct CmapArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    function: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    /// Region as re0,re1,im0,im1.
    #[arg(long = "box", allow_hyphen_values = true)]
    boxspec: Option<String>,
    /// Grid resolution per axis.
    #[arg(long)]
    res: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn read_config(path: &PathBuf) -> Result<Vec<(String, String)>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))?;
    let mut pairs = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .with_context(|| format!("config line {}: expected key=value", lineno + 1))?;
        pairs.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(pairs)
}

/// Fill unset CLI fields from the config file (CLI wins).
fn apply_converge_config(args: &mut ConvergeArgs) -> Result<()> {
    let Some(path) = &args.config else { return Ok(()) };
    for (k, v) in read_config(path)? {
        match k.as_str() {
            "function" => drop(args.function.get_or_insert(v)),
            "methods" => drop(args.methods.get_or_insert(v)),
            "nmax" => drop(args.nmax.get_or_insert(v.parse()?)),
            "nstep" => drop(args.nstep.get_or_insert(v.parse()?)),
            "tol" => drop(args.tol.get_or_insert(v.parse()?)),
            "grid" => drop(args.grid.get_or_insert(v.parse()?)),
            "out" => drop(args.out.get_or_insert(PathBuf::from(v))),
            "plot" => drop(args.plot.get_or_insert(PathBuf::from(v))),
            other => bail!("unknown config key '{other}'"),
        }
    }
    Ok(())
}

fn apply_cmap_config(args: &mut CmapArgs) -> Result<()> {
    let Some(path) = &args.config else { return Ok(()) };
    for (k, v) in read_config(path)? {
        match k.as_str() {
            "function" => drop(args.function.get_or_insert(v)),
            "n" => drop(args.n.get_or_insert(v.parse()?)),
            "box" => drop(args.boxspec.get_or_insert(v)),
            "res" => drop(args.res.get_or_insert(v.parse()?)),
            "out" => drop(args.out.get_or_insert(PathBuf::from(v))),
            other => bail!("unknown config key '{other}'"),
        }
    }
    Ok(())
}

fn parse_function(s: &str) -> Result<TestFunctionId> {
    s.parse::<TestFunctionId>()
        .map_err(|e| anyhow::anyhow!("{e}"))
}

fn run_converge(mut args: ConvergeArgs) -> Result<()> {
    apply_converge_config(&mut args)?;
    let function = parse_function(args.function.as_deref().context("missing --function")?)?;
    let tol = args.tol.unwrap_or(1e-13);
    let methods: Vec<MethodConfig> = match args.methods.as_deref() {
        None => MethodId::COMPARISON
            .iter()
            .map(|&m| MethodConfig { tol, ..MethodConfig::new(m) })
            .collect(),
        Some(listing) => listing
            .split(',')
            .map(|s| {
                let id = s.trim().parse::<MethodId>().map_err(|e| anyhow::anyhow!("{e}"))?;
                Ok(MethodConfig { tol, ..MethodConfig::new(id) })
            })
            .collect::<Result<_>>()?,
    };
    let nmax = args.nmax.unwrap_or(200);
    let nstep = args.nstep.unwrap_or(4);
    let grid = args.grid.unwrap_or(1000);
    let ns = bench::default_sweep(nmax, nstep);
    let curves = bench::run_convergence(function, &methods, &ns, grid)?;
    match &args.out {
        Some(path) => {
            bench::emit_convergence(path, &curves, args.plot.as_deref())
                .with_context(|| format!("writing {}", path.display()))?;
            eprintln!("wrote {}", path.display());
            if let Some(p) = &args.plot {
                eprintln!("wrote {}", p.display());
            }
        }
        None => {
            print!("{}", bench::convergence_csv(&curves));
            if let Some(p) = &args.plot {
                std::fs::write(p, bench::plot_data(&curves))
                    .with_context(|| format!("writing {}", p.display()))?;
                eprintln!("wrote {}", p.display());
            }
        }
    }
    Ok(())
}

fn run_cmap(mut args: CmapArgs) -> Result<()> {
    apply_cmap_config(&mut args)?;
    let function = parse_function(args.function.as_deref().context("missing --function")?)?;
    let n = args.n.context("missing --n")?;
    let boxspec = args.boxspec.as_deref().unwrap_or("-1.5,1.5,-1.5,1.5");
    let parts: Vec<f64> = boxspec
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .context("--box expects re0,re1,im0,im1")?;
    if parts.len() != 4 {
        bail!("--box expects re0,re1,im0,im1");
    }
    let res = args.res.unwrap_or(101);
    let out = args.out.clone().context("missing --out")?;
    let map = bench::run_complex_map(function, n, (parts[0], parts[1]), (parts[2], parts[3]), res)?;
    bench::emit_map(&out, &map).with_context(|| format!("writing {}", out.display()))?;
    eprintln!("wrote {} and {}.poles.csv", out.display(), out.display());
    Ok(())
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    if cli.seedcheck {
        let outcomes = verify::run_all();
        if outcomes.iter().any(|o| !o.pass) {
            std::process::exit(1);
        }
        return Ok(());
    }
    match cli.command {
        Some(Command::Converge(args)) => run_converge(args),
        Some(Command::Cmap(args)) => run_cmap(args),
        None => bail!("no command given; see --help"),
    }
}
