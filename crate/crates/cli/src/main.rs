use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use sympn_core::cohomology::{h0, h1, parse_action, shapiro_reduce};
use sympn_core::report::{run_suite, SuiteParams, SUITES};
use sympn_core::stubborn::{build, commutant_dimension, structural_parts, GroupSpec};

/// Finite verification suites for the maximal torus normalizer of Sp(n).
#[derive(Parser)]
#[command(name = "sympn", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite and report each check.
    Suite(SuiteArgs),
    /// List the known suites.
    List,
    /// Build a group from a spec and print its structure.
    Group {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        json: bool,
    },
    /// Compute H⁰ and H¹ of an action read from a file (`-` for stdin).
    Cohomology {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct SuiteArgs {
    /// Suite name, positionally or with --suite.
    name: Option<String>,
    #[arg(long = "suite")]
    suite: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    depth: Option<u32>,
    #[arg(long = "max-degree")]
    max_degree: Option<usize>,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    spec: Option<String>,
    /// Write the JSON report here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print JSON instead of the table.
    #[arg(long)]
    json: bool,
    /// Record wall-clock times (reports then differ between runs).
    #[arg(long)]
    timings: bool,
}

fn suite(args: SuiteArgs) -> anyhow::Result<bool> {
    let name = match (args.name, args.suite) {
        (Some(a), Some(b)) if a != b => bail!("suite given twice: `{a}` and `{b}`"),
        (Some(a), _) | (None, Some(a)) => a,
        (None, None) => bail!("no suite given; known suites: {}", SUITES.join(", ")),
    };
    let params = SuiteParams {
        n: args.n,
        depth: args.depth,
        max_degree: args.max_degree,
        k: args.k,
        spec: args.spec,
        timings: args.timings,
    };
    let report = run_suite(&name, &params)?;
    let json = report.to_json();
    if let Some(path) = &args.out {
        fs::write(path, &json).with_context(|| format!("writing {}", path.display()))?;
    }
    if args.json {
        print!("{json}");
    } else {
        print!("{}", report.to_table());
    }
    Ok(report.passed())
}

fn group(spec: &str, json: bool) -> anyhow::Result<()> {
    let spec: GroupSpec = spec.parse()?;
    let p = build(&spec)?;
    let parts = structural_parts(&p);
    let inv = p.invariants();
    let lipschitz = p.generators().iter().all(|g| g.is_lipschitz());
    let commutant = |g: &sympn_core::stubborn::MonomialGroup| {
        lipschitz.then(|| commutant_dimension(p.rank(), g.generators())).transpose()
    };
    let c_t = commutant(&parts.torus)?;
    let c_d = commutant(&parts.diagonal)?;
    if json {
        let v = serde_json::json!({
            "spec": spec.to_string(),
            "rank": p.rank(),
            "order": inv.order,
            "exponent": inv.exponent,
            "center_order": inv.center_order,
            "derived_order": inv.derived_order,
            "diagonal_order": parts.diagonal.order(),
            "torus_order": parts.torus.order(),
            "commutant_torus": c_t,
            "commutant_diagonal": c_d,
        });
        println!("{}", serde_json::to_string_pretty(&v)?);
    } else {
        println!("spec      {spec}");
        println!("rank      {}", p.rank());
        println!("order     {}", inv.order);
        println!("exponent  {}", inv.exponent);
        println!("center    {}", inv.center_order);
        println!("derived   {}", inv.derived_order);
        println!("P_D       {}", parts.diagonal.order());
        println!("P_T       {}", parts.torus.order());
        let show = |c: Option<usize>| c.map_or("n/a (entries outside the Lipschitz units)".into(), |d| d.to_string());
        println!("dim C(P_T) {}", show(c_t));
        println!("dim C(P_D) {}", show(c_d));
    }
    Ok(())
}

fn cohomology(file: &PathBuf, json: bool) -> anyhow::Result<()> {
    let text = if file.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin())?
    } else {
        fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?
    };
    let input = parse_action(&text)?;
    let a = &input.action;
    let reduced = match &input.blocks {
        Some(b) => Some(shapiro_reduce(a, b)?),
        None => None,
    };
    let (z0, z1) = (h0(a), h1(a));
    let r1 = reduced.as_ref().map(h1);
    if json {
        let v = serde_json::json!({
            "group_order": a.order(),
            "module": a.module_shape().to_string(),
            "h0": z0.to_string(),
            "h1": z1.to_string(),
            "h1_divisors": z1.divisors(),
            "reduced": reduced.as_ref().map(|r| serde_json::json!({
                "group_order": r.order(),
                "module": r.module_shape().to_string(),
                "h1": r1.as_ref().map(ToString::to_string),
            })),
        });
        println!("{}", serde_json::to_string_pretty(&v)?);
    } else {
        println!("|G| = {}, M = {}", a.order(), a.module_shape());
        println!("H0 = {z0}");
        println!("H1 = {z1}");
        if let (Some(r), Some(r1)) = (&reduced, &r1) {
            println!("block stabilizer: |G_0| = {}, M_0 = {}, H1 = {r1}", r.order(), r.module_shape());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Suite(args) => suite(args),
        Command::List => {
            for s in SUITES {
                println!("{s}");
            }
            Ok(true)
        }
        Command::Group { spec, json } => group(&spec, json).map(|_| true),
        Command::Cohomology { file, json } => cohomology(&file, json).map(|_| true),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
