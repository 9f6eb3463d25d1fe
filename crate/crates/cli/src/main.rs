use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qdouble::anyon::{anyon_table, enumerate_anyons};
use qdouble::group::FiniteGroup;
use qdouble::hamiltonian::{build_kitaev, build_refined, site_refined, CouplingConfig, Couplings, KitaevForm};
use qdouble::io::group_from_file;
use qdouble::lattice::build_torus;
use qdouble::operators::{OperatorBuilder, Region, SiteOperators};
use qdouble::rep::character_table;
use qdouble::sectors::splitting_diagram;
use qdouble::spectrum::{check_capacity, spectrum_tagged, SpectrumMode};
use qdouble::verify::{run_checks, VerifyOptions};
use qdouble::QdError;

mod render;

#[derive(Parser)]
#[command(name = "qd", version, about = "Quantum double models D(G): groups, anyons, spectra and energy sectors")]
struct Cli {
    /// Output format; `dot` is only available for `diagram`.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Numerical tolerance for `verify`, in (0, 1e-3].
    #[arg(long, env = "QD_TOLERANCE", default_value_t = 1e-10, global = true)]
    tolerance: f64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Dot,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct GroupSource {
    /// Built-in group: s3, trivial, zN, dN, sN.
    #[arg(long)]
    builtin: Option<String>,

    /// JSON group file with a Cayley table or permutation generators.
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Order, conjugacy classes, normalizers and character table.
    Group {
        #[command(flatten)]
        source: GroupSource,
    },
    /// Anyon types with flux class, charge and quantum dimension.
    Anyons {
        #[command(flatten)]
        source: GroupSource,
    },
    /// Numerical checks of the model's identities.
    Verify {
        #[command(flatten)]
        source: GroupSource,
        /// Run only these checks (repeatable).
        #[arg(long = "check", value_name = "NAME")]
        checks: Vec<String>,
    },
    /// Spectrum of a Hamiltonian on a torus or on one site.
    Spectrum(SpectrumArgs),
    /// Energy-sector grid with anyon content.
    Diagram {
        #[command(flatten)]
        source: GroupSource,
        /// Couplings file; sector energies are omitted without it.
        #[arg(long)]
        couplings: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SpectrumArgs {
    #[command(flatten)]
    source: GroupSource,

    /// Periodic lattice size, e.g. 2x2.
    #[arg(long, value_name = "RxC", conflicts_with = "site", required_unless_present = "site")]
    torus: Option<String>,

    /// The six edges of a single site.
    #[arg(long)]
    site: bool,

    /// Vacuum (Kitaev) Hamiltonian.
    #[arg(long, conflicts_with = "couplings", required_unless_present = "couplings")]
    kitaev: bool,

    /// Normalization of the Kitaev Hamiltonian on a torus.
    #[arg(long, value_enum, default_value_t = FormArg::Stabilizer, requires = "kitaev")]
    form: FormArg,

    /// Refined Hamiltonian couplings file.
    #[arg(long)]
    couplings: Option<PathBuf>,

    /// Full diagonalization or the lowest `--k` eigenvalues.
    #[arg(long, value_enum, default_value_t = ModeArg::Full)]
    mode: ModeArg,

    /// Number of eigenvalues in low-k mode.
    #[arg(long, default_value_t = 8)]
    k: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormArg {
    Literal,
    Projector,
    Stabilizer,
}

impl From<FormArg> for KitaevForm {
    fn from(f: FormArg) -> Self {
        match f {
            FormArg::Literal => KitaevForm::Literal,
            FormArg::Projector => KitaevForm::Projector,
            FormArg::Stabilizer => KitaevForm::Stabilizer,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Full,
    Lowk,
}

/// Failure with the exit code it maps to.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Library(QdError),
    ChecksFailed,
}

impl From<QdError> for Failure {
    fn from(e: QdError) -> Self {
        Failure::Library(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::ChecksFailed => 1,
            Failure::Usage(_) => 2,
            Failure::Library(QdError::Capacity(_)) => 3,
            Failure::Library(QdError::Argument(_) | QdError::Config(_) | QdError::Parse(_)) => 2,
            Failure::Library(_) => 1,
        }
    }
}

type CmdResult = Result<String, Failure>;

fn load_group(source: &GroupSource) -> Result<FiniteGroup, Failure> {
    match (&source.builtin, &source.file) {
        (Some(name), None) => Ok(FiniteGroup::builtin(name)?),
        (None, Some(path)) => Ok(group_from_file(path)?),
        _ => Err(Failure::Usage("give exactly one of --builtin or --file".into())),
    }
}

fn load_couplings(path: &PathBuf, group: &FiniteGroup) -> Result<Couplings, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let table = character_table(group)?;
    Ok(CouplingConfig::from_json(&text)?.resolve(group, &table)?)
}

fn to_json(value: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(value).expect("reports serialize") + "\n"
}

fn no_dot(format: Format) -> Result<(), Failure> {
    if format == Format::Dot {
        return Err(Failure::Usage("--format dot is only available for `diagram`".into()));
    }
    Ok(())
}

fn cmd_group(source: &GroupSource, format: Format) -> CmdResult {
    no_dot(format)?;
    let group = load_group(source)?;
    let table = character_table(&group)?;
    let report = render::group_report(&group, &table)?;
    Ok(match format {
        Format::Json => to_json(&report),
        _ => render::group_text(&group, &table, &report),
    })
}

fn cmd_anyons(source: &GroupSource, format: Format) -> CmdResult {
    no_dot(format)?;
    let model = enumerate_anyons(&load_group(source)?)?;
    let rows = anyon_table(&model);
    Ok(match format {
        Format::Json => to_json(&rows),
        _ => render::anyon_text(&rows),
    })
}

fn cmd_verify(source: &GroupSource, checks: &[String], format: Format, tolerance: f64) -> CmdResult {
    no_dot(format)?;
    let group = load_group(source)?;
    let options = VerifyOptions { tolerance, checks: (!checks.is_empty()).then(|| checks.to_vec()) };
    let results = run_checks(&group, &options).map_err(|e| match e {
        QdError::Argument(msg) => Failure::Usage(msg),
        e => Failure::Library(e),
    })?;
    let passed = results.iter().all(|r| r.passed);
    let out = match format {
        Format::Json => to_json(&serde_json::json!({
            "group": group.name(),
            "tolerance": tolerance,
            "passed": passed,
            "checks": results,
        })),
        _ => render::verify_text(&group, tolerance, &results, !checks.is_empty()),
    };
    if passed {
        Ok(out)
    } else {
        print!("{out}");
        Err(Failure::ChecksFailed)
    }
}

fn parse_torus(spec: &str) -> Result<(usize, usize), Failure> {
    let bad = || Failure::Usage(format!("--torus expects RxC such as 2x2, got {spec:?}"));
    let (r, c) = spec.split_once(['x', 'X']).ok_or_else(bad)?;
    Ok((r.trim().parse().map_err(|_| bad())?, c.trim().parse().map_err(|_| bad())?))
}

fn cmd_spectrum(args: &SpectrumArgs, format: Format) -> CmdResult {
    no_dot(format)?;
    let group = load_group(&args.source)?;
    let table = character_table(&group)?;
    let mode = match args.mode {
        ModeArg::Full => SpectrumMode::Full,
        ModeArg::Lowk => SpectrumMode::LowK(args.k),
    };
    let couplings = match &args.couplings {
        Some(path) => Some(load_couplings(path, &group)?),
        None => None,
    };
    let (lattice, description) = match &args.torus {
        Some(spec) => {
            let (rows, cols) = parse_torus(spec)?;
            (build_torus(rows, cols)?, format!("{rows}x{cols} torus"))
        }
        None => (build_torus(2, 2)?, "single site".to_string()),
    };
    let (hamiltonian, report) = if args.site {
        let site = lattice.site_of(0)?;
        let region = Region::site(&site, group.order())?;
        check_capacity(region.dim(), mode)?;
        let builder = OperatorBuilder::new(&group, &lattice, region)?;
        let ops = SiteOperators::new(&builder, &site)?;
        let (name, couplings) = match couplings {
            Some(c) => ("refined", c),
            None => ("kitaev", CouplingConfig::kitaev(&group, &table).resolve(&group, &table)?),
        };
        let h = site_refined(&ops, &couplings)?;
        let mut tags = Vec::new();
        for (k, flux) in ops.flux_projectors()?.iter().enumerate() {
            for (i, charge) in ops.charge_projectors()?.iter().enumerate() {
                tags.push((format!("({}, {})", group.class_label(k), table.labels[i]), charge.matmul(flux)?));
            }
        }
        (name.to_string(), spectrum_tagged(&h, mode, &tags)?)
    } else {
        let region = Region::full(&lattice, group.order())?;
        check_capacity(region.dim(), mode)?;
        let builder = OperatorBuilder::new(&group, &lattice, region)?;
        match couplings {
            Some(c) => ("refined".to_string(), spectrum_tagged(&build_refined(&builder, &c)?, mode, &[])?),
            None => {
                let name =
                    format!("kitaev ({})", args.form.to_possible_value().expect("no skipped variants").get_name());
                (name, spectrum_tagged(&build_kitaev(&builder, args.form.into())?, mode, &[])?)
            }
        }
    };
    Ok(match format {
        Format::Json => to_json(&serde_json::json!({
            "group": group.name(),
            "lattice": description,
            "hamiltonian": hamiltonian,
            "spectrum": report,
        })),
        _ => render::spectrum_text(group.name(), &description, &hamiltonian, &report),
    })
}

fn cmd_diagram(source: &GroupSource, couplings: Option<&PathBuf>, format: Format) -> CmdResult {
    let group = load_group(source)?;
    let couplings = match couplings {
        Some(path) => Some(load_couplings(path, &group)?),
        None => None,
    };
    let model = enumerate_anyons(&group)?;
    let diagram = splitting_diagram(&model, couplings.as_ref())?;
    Ok(match format {
        Format::Json => to_json(&diagram),
        Format::Text => diagram.to_text(),
        Format::Dot => diagram.to_dot(),
    })
}

fn run(cli: &Cli) -> CmdResult {
    if !(cli.tolerance > 0.0 && cli.tolerance <= 1e-3) {
        return Err(Failure::Usage(format!("tolerance must lie in (0, 1e-3], got {}", cli.tolerance)));
    }
    match &cli.command {
        Command::Group { source } => cmd_group(source, cli.format),
        Command::Anyons { source } => cmd_anyons(source, cli.format),
        Command::Verify { source, checks } => cmd_verify(source, checks, cli.format, cli.tolerance),
        Command::Spectrum(args) => cmd_spectrum(args, cli.format),
        Command::Diagram { source, couplings } => cmd_diagram(source, couplings.as_ref(), cli.format),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(failure) => {
            match &failure {
                Failure::Usage(msg) => eprintln!("qd: {msg}"),
                Failure::Library(e) => eprintln!("qd: {e}"),
                Failure::ChecksFailed => eprintln!("qd: some checks exceeded the tolerance"),
            }
            ExitCode::from(failure.exit_code())
        }
    }
}
