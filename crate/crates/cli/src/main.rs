use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use crn_realize_cli::formats::{
    parse_vertex_list, sorted_by_source, with_extra_vertices, MatrixFile, NetworkFile,
};
use crn_realize_cli::{emit_ode, parse_ode, report};
use crn_realize_core::network::{dynamically_equivalent, linkage_classes};
use crn_realize_core::{
    generate, net_reaction_data, realize_def_one, structure_report, Flag, GenSpec,
    MassActionSystem, NetReactionData, TargetType,
};

const EXIT_NEGATIVE: u8 = 10;
const EXIT_ERROR: u8 = 2;

/// Decide whether a polynomial dynamical system is generated by a weakly
/// reversible deficiency-one mass-action system.
#[derive(Parser)]
#[command(name = "crn-realize", version)]
struct Cli {
    /// Human-readable diagnostics on standard error.
    #[arg(long, short, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Search for a weakly reversible deficiency-one realization.
    Check(CheckArgs),
    /// Generate a random system of a prescribed type.
    Gen(GenArgs),
    /// Structural report of a network file.
    Analyze(AnalyzeArgs),
    /// Test two network files for dynamical equivalence.
    Equiv(EquivArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Ode,
    Matrices,
    Network,
}

#[derive(Args)]
struct CheckArgs {
    /// Input file, or `-` for standard input.
    input: PathBuf,
    /// Inferred from the file when omitted.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Zero-net-vector vertices to add, e.g. "3,1;0,2".
    #[arg(long)]
    extra_vertices: Option<String>,
    /// Write the realization as Graphviz DOT.
    #[arg(long)]
    dot: Option<PathBuf>,
    /// Also write the JSON outcome to this file.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenType {
    #[value(alias = "type0", alias = "single-class")]
    Single,
    #[value(alias = "type-i")]
    Type1,
    #[value(alias = "type-ii")]
    Type2,
    #[value(alias = "def-zero")]
    Def0,
    #[value(alias = "def-two")]
    Def2,
}

impl From<GenType> for TargetType {
    fn from(t: GenType) -> Self {
        match t {
            GenType::Single => TargetType::SingleClass,
            GenType::Type1 => TargetType::TypeI,
            GenType::Type2 => TargetType::TypeII,
            GenType::Def0 => TargetType::DefZero,
            GenType::Def2 => TargetType::DefTwoPlus,
        }
    }
}

#[derive(Args)]
struct GenArgs {
    #[arg(long = "type", value_enum)]
    kind: GenType,
    /// Number of linkage classes; sizes default to the smallest valid ones.
    #[arg(long, conflicts_with = "sizes")]
    classes: Option<usize>,
    /// Vertices per linkage class, e.g. "2,3".
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
    /// Ambient dimension; the minimal one when omitted.
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "network")]
    format: Format,
    /// Output file; standard output when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long)]
    dot: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Network file.
    input: PathBuf,
    #[arg(long)]
    dot: Option<PathBuf>,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct EquivArgs {
    first: PathBuf,
    second: PathBuf,
    #[arg(long)]
    json: Option<PathBuf>,
}

fn read_input(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
    }
}

fn write_output(path: Option<&Path>, content: &str) -> Result<()> {
    match path {
        Some(p) if p.as_os_str() != "-" => {
            fs::write(p, content).with_context(|| format!("writing {}", p.display()))
        }
        _ => {
            std::io::stdout().write_all(content.as_bytes())?;
            Ok(())
        }
    }
}

fn infer_format(path: &Path, text: &str) -> Format {
    let json_like =
        path.extension().is_some_and(|e| e == "json") || text.trim_start().starts_with('{');
    if !json_like {
        Format::Ode
    } else if serde_json::from_str::<serde_json::Value>(text)
        .is_ok_and(|v| v.get("edges").is_some())
    {
        Format::Network
    } else {
        Format::Matrices
    }
}

fn read_network(path: &Path) -> Result<MassActionSystem> {
    let file: NetworkFile = serde_json::from_str(&read_input(path)?)
        .with_context(|| format!("parsing network file {}", path.display()))?;
    Ok(file.to_system()?)
}

fn load_data(args: &CheckArgs) -> Result<NetReactionData> {
    let text = read_input(&args.input)?;
    let format = args
        .format
        .unwrap_or_else(|| infer_format(&args.input, &text));
    let data = match format {
        Format::Ode => parse_ode(&text)?,
        Format::Matrices => serde_json::from_str::<MatrixFile>(&text)
            .context("parsing matrix file")?
            .to_data()?,
        Format::Network => net_reaction_data(
            &serde_json::from_str::<NetworkFile>(&text)
                .context("parsing network file")?
                .to_system()?,
        ),
    };
    let Some(extra) = &args.extra_vertices else {
        return Ok(data);
    };
    let extended = with_extra_vertices(&data, &parse_vertex_list(extra)?)?;
    // ODE columns stay in monomial order; matrix columns keep their positions
    Ok(if format == Format::Ode {
        sorted_by_source(&extended)
    } else {
        extended
    })
}

fn to_json_text(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn check(args: &CheckArgs, verbose: bool) -> Result<u8> {
    let data = load_data(args)?;
    let out = realize_def_one(&data)?;
    if verbose {
        eprint!("{}", report::outcome_text(&out));
    }
    let text = to_json_text(&report::outcome_json(&data, &out));
    write_output(None, &text)?;
    if let Some(p) = &args.json {
        write_output(Some(p), &text)?;
    }
    if let Some(p) = &args.dot {
        match &out.realization {
            Some(r) => write_output(Some(p), &report::dot(&r.system, &r.linkage_classes))?,
            None => eprintln!("no realization; {} not written", p.display()),
        }
    }
    Ok(if out.flag == Flag::None {
        EXIT_NEGATIVE
    } else {
        0
    })
}

fn default_sizes(kind: GenType, classes: usize) -> Result<Vec<usize>> {
    if classes == 0 {
        bail!("--classes must be at least 1");
    }
    let mut sizes = vec![2; classes];
    match kind {
        GenType::Single if classes != 1 => bail!("--type single needs --classes 1"),
        GenType::Single => sizes[0] = 3,
        GenType::Type1 | GenType::Def2 if classes == 1 => sizes[0] = 4,
        GenType::Type1 => sizes[classes - 1] = 3,
        GenType::Def2 => {
            sizes[classes - 1] = 3;
            sizes[classes - 2] = 3;
        }
        GenType::Type2 | GenType::Def0 => {}
    }
    Ok(sizes)
}

fn run_gen(args: &GenArgs, verbose: bool) -> Result<u8> {
    let sizes = match (&args.sizes, args.classes) {
        (Some(s), _) => s.clone(),
        (None, Some(c)) => default_sizes(args.kind, c)?,
        (None, None) => default_sizes(
            args.kind,
            if matches!(args.kind, GenType::Single) {
                1
            } else {
                2
            },
        )?,
    };
    let mut spec = GenSpec::new(args.kind.into(), sizes, args.seed);
    if let Some(d) = args.dim {
        spec = spec.with_dim(d);
    }
    let sys = generate(&spec)?;
    if verbose {
        eprintln!(
            "{}",
            to_json_text(&report::structure_json(
                &sys,
                &structure_report(sys.graph())
            ))
        );
    }
    let text = match args.format {
        Format::Network => to_json_text(&serde_json::to_value(NetworkFile::from_system(&sys))?),
        Format::Matrices => to_json_text(&serde_json::to_value(MatrixFile::from_data(
            &net_reaction_data(&sys),
        ))?),
        Format::Ode => emit_ode(&net_reaction_data(&sys)).map_err(anyhow::Error::msg)?,
    };
    write_output(args.output.as_deref(), &text)?;
    if let Some(p) = &args.dot {
        write_output(Some(p), &report::dot(&sys, &linkage_classes(sys.graph())))?;
    }
    Ok(0)
}

fn analyze(args: &AnalyzeArgs, verbose: bool) -> Result<u8> {
    let sys = read_network(&args.input)?;
    let rep = structure_report(sys.graph());
    let text = to_json_text(&report::structure_json(&sys, &rep));
    if verbose {
        eprintln!(
            "m = {}, l = {}, s = {}, deficiency = {}",
            rep.vertex_count(),
            rep.linkage_classes.len(),
            rep.stoichiometric_dim,
            rep.deficiency
        );
    }
    write_output(None, &text)?;
    if let Some(p) = &args.json {
        write_output(Some(p), &text)?;
    }
    if let Some(p) = &args.dot {
        write_output(Some(p), &report::dot(&sys, &rep.linkage_classes))?;
    }
    Ok(0)
}

fn equiv(args: &EquivArgs) -> Result<u8> {
    let a = read_network(&args.first)?;
    let b = read_network(&args.second)?;
    let same = dynamically_equivalent(&a, &b);
    let text = to_json_text(&serde_json::json!({
        "schema_version": report::SCHEMA_VERSION,
        "equivalent": same,
    }));
    write_output(None, &text)?;
    if let Some(p) = &args.json {
        write_output(Some(p), &text)?;
    }
    Ok(if same { 0 } else { EXIT_NEGATIVE })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Check(a) => check(a, cli.verbose),
        Command::Gen(a) => run_gen(a, cli.verbose),
        Command::Analyze(a) => analyze(a, cli.verbose),
        Command::Equiv(a) => equiv(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
