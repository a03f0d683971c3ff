//! Command line front end.

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use infotopo_core::identities::{check_identities, IDENTITY_VARIABLE_LIMIT};
use infotopo_core::lattice::{undersampling_dimension, UndersamplingReport};
use infotopo_core::oracle::{make_named, sample_from, Family};
use infotopo_core::paths::extremal_paths;
use infotopo_core::scan::{mean_path_scan, ScanOptions};
use infotopo_core::stats::{
    dependence_test, null_distributions, per_tuple_nulls, per_tuple_test, SignificanceLevels, DEFAULT_SHUFFLES,
};
use infotopo_core::{
    compute_landscape, discretize, estimate_joint, make_bin_spec, Bins, DataMatrix, Direction, DiscretizedSample,
    JointDistribution, Landscape, LandscapeOptions, SubsetMask,
};

use crate::ingest::{load_matrix, write_matrix, LoadOptions};
use crate::output::{self, OutputSet, PathsMeta, TestMeta};
use crate::parallel::RayonExecutor;

#[derive(Debug, Parser)]
#[command(name = "infotopo", version, about = "Information landscapes, paths and k-dependence tests of tabular data")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Entropy and information of every variable subset, with summaries and the undersampling report.
    Landscape(LandscapeArgs),
    /// Greedy extremal information paths.
    Paths(PathsArgs),
    /// Shuffle test of k-dependence.
    Test(TestArgs),
    /// Mean information curves over a grid of bin counts and sample sizes.
    Scan(ScanArgs),
    /// Samples a named exact law into a CSV file.
    Synth(SynthArgs),
    /// Residuals of the information identities on the loaded data.
    CheckIdentities(CheckArgs),
}

/// Comma-separated list of non-negative integers; `a-b` expands to an inclusive range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexList(pub Vec<usize>);

impl FromStr for IndexList {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let mut out = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("invalid index {t:?}"));
            match part.split_once('-') {
                Some((a, b)) => {
                    let (a, b) = (num(a)?, num(b)?);
                    if a > b {
                        return Err(format!("empty range {part:?}"));
                    }
                    out.extend(a..=b);
                }
                None => out.push(num(part)?),
            }
        }
        if out.is_empty() {
            return Err("empty list".into());
        }
        Ok(IndexList(out))
    }
}

fn parse_delimiter(s: &str) -> std::result::Result<u8, String> {
    match s {
        "tab" | "\\t" | "\t" => Ok(b'\t'),
        _ if s.len() == 1 && s.is_ascii() => Ok(s.as_bytes()[0]),
        _ => Err(format!("delimiter must be one ASCII character or \"tab\", got {s:?}")),
    }
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Delimited text file, variables as columns unless --transpose.
    pub input: PathBuf,
    #[arg(long, default_value = ",", value_parser = parse_delimiter)]
    pub delimiter: u8,
    /// Treat every cell as a value; labels are generated.
    #[arg(long)]
    pub no_header: bool,
    /// Use rows as variables and columns as observations.
    #[arg(long)]
    pub transpose: bool,
    /// Observations to keep (0-based, after --transpose), e.g. `0-19,25`.
    #[arg(long)]
    pub rows: Option<IndexList>,
    /// Variables to keep (0-based, after --transpose).
    #[arg(long)]
    pub cols: Option<IndexList>,
    /// Bins per variable: one count for all, or one per variable.
    #[arg(long, default_value = "9")]
    pub bins: IndexList,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output directory.
    #[arg(long, env = "INFOTOPO_OUT", default_value = ".")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
}

#[derive(Debug, Args)]
pub struct UndersamplingArgs {
    /// Largest saturated fraction tolerated below the undersampling dimension.
    #[arg(long, default_value_t = 0.05)]
    pub pu: f64,
    /// Saturation tolerance in bits.
    #[arg(long, default_value_t = 1e-9)]
    pub eps: f64,
}

#[derive(Debug, Args)]
pub struct LandscapeArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    #[command(flatten)]
    pub undersampling: UndersamplingArgs,
    /// Largest subset size (default: all variables).
    #[arg(long)]
    pub kmax: Option<usize>,
    /// Lift the 25-variable guard.
    #[arg(long)]
    pub allow_large: bool,
    /// Bin width of the per-degree I_k histograms, in bits.
    #[arg(long, default_value_t = 0.05)]
    pub hist_width: f64,
    /// Also write the occupied boxes of the joint law.
    #[arg(long)]
    pub dump_joint: bool,
    /// Print identity residuals on the first variables.
    #[arg(long)]
    pub check_identities: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DirectionArg {
    Maximal,
    Minimal,
    Both,
}

#[derive(Debug, Args)]
pub struct PathsArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    #[command(flatten)]
    pub undersampling: UndersamplingArgs,
    #[arg(long)]
    pub kmax: Option<usize>,
    #[arg(long, value_enum, default_value_t = DirectionArg::Both)]
    pub direction: DirectionArg,
    /// Paths reported per direction.
    #[arg(long, default_value_t = 2)]
    pub count: usize,
    /// Largest path length (default: the undersampling dimension).
    #[arg(long)]
    pub kstop: Option<usize>,
    /// Let paths run past the undersampling dimension up to --kmax.
    #[arg(long, conflicts_with = "kstop")]
    pub past_ku: bool,
}

#[derive(Debug, Args)]
pub struct TestArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    #[arg(long)]
    pub kmax: Option<usize>,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_SHUFFLES)]
    pub shuffles: usize,
    /// One-sided level of the pairwise test.
    #[arg(long, default_value_t = 0.05)]
    pub p2: f64,
    /// Two-sided level for degrees of three and more.
    #[arg(long, default_value_t = 0.1)]
    pub p: f64,
    /// Judge each subset against its own shuffles instead of the pooled null.
    #[arg(long)]
    pub per_tuple: bool,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    #[command(flatten)]
    pub undersampling: UndersamplingArgs,
    /// Bin counts to scan.
    #[arg(long)]
    pub bins_list: IndexList,
    /// Sample sizes to scan.
    #[arg(long)]
    pub m_list: IndexList,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub kmax: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    IdenticalCoins,
    OppositeCoins,
    EvenParity,
    OddParity,
    ProductOfMarginals,
    Uniform,
    SingleAtom,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    /// Number of binary variables (coin and parity families).
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    /// Marginal weights, `;` between variables, e.g. `1,3;2,1,1`.
    #[arg(long)]
    pub marginals: Option<String>,
    /// Alphabet sizes (uniform, single-atom).
    #[arg(long)]
    pub alphabet: Option<IndexList>,
    /// 0-based values of the single atom.
    #[arg(long)]
    pub atom: Option<IndexList>,
    /// Number of draws.
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, env = "INFOTOPO_OUT", default_value = ".")]
    pub out: PathBuf,
    /// File name inside the output directory.
    #[arg(long, default_value = "synth.csv")]
    pub name: String,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, env = "INFOTOPO_OUT", default_value = ".")]
    pub out: PathBuf,
    /// Number of leading variables checked.
    #[arg(long, default_value_t = 8)]
    pub max_vars: usize,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

/// Runs one command; on failure every file it wrote is removed.
pub fn run(cli: Cli) -> Result<()> {
    let (dir, threads) = match &cli.command {
        Command::Landscape(a) => (&a.output.out, a.output.threads),
        Command::Paths(a) => (&a.output.out, a.output.threads),
        Command::Test(a) => (&a.output.out, a.output.threads),
        Command::Scan(a) => (&a.output.out, a.output.threads),
        Command::Synth(a) => (&a.out, 1),
        Command::CheckIdentities(a) => (&a.out, 1),
    };
    let exec = RayonExecutor::new(threads).context("cannot start the thread pool")?;
    let mut out = OutputSet::new(dir).with_context(|| format!("cannot create output directory {}", dir.display()))?;
    let result = match &cli.command {
        Command::Landscape(a) => cmd_landscape(a, &exec, &mut out),
        Command::Paths(a) => cmd_paths(a, &exec, &mut out),
        Command::Test(a) => cmd_test(a, &exec, &mut out),
        Command::Scan(a) => cmd_scan(a, &exec, &mut out),
        Command::Synth(a) => cmd_synth(a, &mut out),
        Command::CheckIdentities(a) => cmd_check(a, &mut out),
    };
    match result {
        Ok(()) => {
            for f in out.files() {
                println!("wrote {}", f.display());
            }
            Ok(())
        }
        Err(e) => {
            out.discard();
            Err(e)
        }
    }
}

fn load(a: &InputArgs) -> Result<DataMatrix> {
    let opts = LoadOptions { delimiter: a.delimiter, has_header: !a.no_header };
    let mut d = load_matrix(&a.input, opts)?;
    if a.transpose {
        d = d.transpose();
    }
    if a.rows.is_some() || a.cols.is_some() {
        let rows = a.rows.as_ref().map_or_else(|| (0..d.rows()).collect(), |r| r.0.clone());
        let cols = a.cols.as_ref().map_or_else(|| (0..d.cols()).collect(), |c| c.0.clone());
        d = d.select(&rows, &cols).context("invalid --rows/--cols selection")?;
    }
    Ok(d)
}

fn bins_of(a: &InputArgs) -> Result<Bins> {
    let to_u32 = |b: usize| u32::try_from(b).context("bin count too large");
    Ok(match a.bins.0.as_slice() {
        [one] => Bins::Uniform(to_u32(*one)?),
        many => Bins::PerVariable(many.iter().map(|&b| to_u32(b)).collect::<Result<_>>()?),
    })
}

struct Prepared {
    labels: Vec<String>,
    sample: DiscretizedSample,
    joint: JointDistribution,
}

fn prepare(a: &InputArgs) -> Result<Prepared> {
    let d = load(a)?;
    let spec = make_bin_spec(&d, &bins_of(a)?)?;
    let sample = discretize(&d, &spec)?;
    let joint = estimate_joint(&sample);
    Ok(Prepared { labels: d.col_labels().to_vec(), sample, joint })
}

fn landscape(p: &Prepared, kmax: Option<usize>, allow_large: bool, exec: &RayonExecutor) -> Result<Landscape> {
    let opts = LandscapeOptions { k_max: kmax.unwrap_or(p.joint.n()), allow_large };
    Ok(compute_landscape(&p.joint, opts, exec)?)
}

fn undersampling(l: &Landscape, a: &UndersamplingArgs) -> Result<UndersamplingReport> {
    Ok(undersampling_dimension(l, l.m(), a.pu, a.eps)?)
}

fn report_identities(p: &Prepared, max_vars: usize, tol: f64) -> Result<(infotopo_core::identities::IdentityResiduals, Vec<String>)> {
    let k = p.joint.n().min(max_vars).min(IDENTITY_VARIABLE_LIMIT);
    let j = p.joint.marginalize(SubsetMask::full(k))?;
    let r = check_identities(&j)?;
    for (name, v) in r.named() {
        let flag = if v <= tol { "" } else { "  exceeds tolerance" };
        println!("{name:>20}  {v:.3e}{flag}");
    }
    Ok((r, p.labels[..k].to_vec()))
}

fn cmd_landscape(a: &LandscapeArgs, exec: &RayonExecutor, out: &mut OutputSet) -> Result<()> {
    let p = prepare(&a.input)?;
    let l = landscape(&p, a.kmax, a.allow_large, exec)?;
    let u = undersampling(&l, &a.undersampling)?;
    match a.output.format {
        Format::Json => out.write("landscape.json", |w| output::write_landscape_json(&l, &p.labels, w))?,
        Format::Csv => out.write("landscape.csv", |w| output::write_landscape_csv(&l, &p.labels, w))?,
    };
    out.write("summary.csv", |w| output::write_summary_csv(&l, &p.labels, w))?;
    out.write("histograms.csv", |w| output::write_histograms_csv(&l, a.hist_width, w))?;
    out.write("scatter.csv", |w| output::write_scatter_csv(&l, &p.labels, w))?;
    out.write("undersampling.json", |w| output::write_undersampling_json(&u, l.m(), w))?;
    if a.dump_joint {
        out.write("joint.json", |w| output::write_joint_json(&p.joint, w))?;
    }
    if a.check_identities {
        report_identities(&p, 8, 1e-9)?;
    }
    Ok(())
}

fn cmd_paths(a: &PathsArgs, exec: &RayonExecutor, out: &mut OutputSet) -> Result<()> {
    let p = prepare(&a.input)?;
    let l = landscape(&p, a.kmax, false, exec)?;
    let u = undersampling(&l, &a.undersampling)?;
    let k_stop = match (a.kstop, a.past_ku) {
        (Some(k), _) => k,
        (None, true) => l.k_max(),
        (None, false) => u.k_u.max(1),
    };
    let directions: &[Direction] = match a.direction {
        DirectionArg::Maximal => &[Direction::Maximal],
        DirectionArg::Minimal => &[Direction::Minimal],
        DirectionArg::Both => &[Direction::Maximal, Direction::Minimal],
    };
    let paths: Vec<_> = directions.iter().flat_map(|&d| extremal_paths(&l, d, k_stop, a.count)).collect();
    let meta = PathsMeta { k_stop, k_u: u.k_u, count: a.count };
    match a.output.format {
        Format::Json => out.write("paths.json", |w| output::write_paths_json(&paths, &meta, &p.labels, w))?,
        Format::Csv => out.write("paths.csv", |w| output::write_paths_csv(&paths, &p.labels, w))?,
    };
    Ok(())
}

fn cmd_test(a: &TestArgs, exec: &RayonExecutor, out: &mut OutputSet) -> Result<()> {
    let p = prepare(&a.input)?;
    let l = landscape(&p, a.kmax, false, exec)?;
    let levels = SignificanceLevels { pairwise: a.p2, higher: a.p };
    let meta = TestMeta { mode: if a.per_tuple { "per-tuple" } else { "pooled" }, shuffles: a.shuffles, seed: a.seed };
    let report = if a.per_tuple {
        let nulls = per_tuple_nulls(&p.sample, a.shuffles, l.k_max(), a.seed, exec)?;
        per_tuple_test(&l, &nulls, levels)?
    } else {
        let nulls = null_distributions(&p.sample, a.shuffles, l.k_max(), a.seed, exec)?;
        out.write("null_pool.csv", |w| output::write_null_pool_csv(&nulls, w))?;
        dependence_test(&l, &nulls, levels)?
    };
    match a.output.format {
        Format::Json => out.write("report.json", |w| output::write_report_json(&report, &meta, &p.labels, w))?,
        Format::Csv => out.write("report.csv", |w| output::write_report_csv(&report, &p.labels, w))?,
    };
    Ok(())
}

fn cmd_scan(a: &ScanArgs, exec: &RayonExecutor, out: &mut OutputSet) -> Result<()> {
    let d = load(&a.input)?;
    let bins: Vec<u32> = a.bins_list.0.iter().map(|&b| u32::try_from(b)).collect::<std::result::Result<_, _>>()?;
    let opts = ScanOptions { k_max: a.kmax.unwrap_or(d.cols()), p_u: a.undersampling.pu, epsilon: a.undersampling.eps };
    let grid = mean_path_scan(&d, &bins, &a.m_list.0, a.seed, opts, exec)?;
    for cell in &grid.cells {
        out.write(&output::scan_cell_name(cell), |w| output::write_scan_cell_csv(cell, w))?;
    }
    out.write("scan.csv", |w| output::write_scan_summary_csv(&grid, w))?;
    Ok(())
}

fn parse_marginals(s: &str) -> Result<Vec<Vec<u64>>> {
    s.split(';')
        .map(|var| {
            var.split(',')
                .map(|w| w.trim().parse::<u64>().with_context(|| format!("invalid marginal weight {w:?}")))
                .collect()
        })
        .collect()
}

fn family(a: &SynthArgs) -> Result<Family> {
    let u32s = |l: &IndexList| -> Result<Vec<u32>> { Ok(l.0.iter().map(|&v| u32::try_from(v)).collect::<std::result::Result<_, _>>()?) };
    Ok(match a.family {
        FamilyArg::IdenticalCoins => Family::IdenticalCoins(a.n),
        FamilyArg::OppositeCoins => Family::OppositeCoins(a.n),
        FamilyArg::EvenParity => Family::EvenParity(a.n),
        FamilyArg::OddParity => Family::OddParity(a.n),
        FamilyArg::ProductOfMarginals => match &a.marginals {
            Some(m) => Family::ProductOfMarginals(parse_marginals(m)?),
            None => bail!("product-of-marginals needs --marginals"),
        },
        FamilyArg::Uniform => match &a.alphabet {
            Some(al) => Family::Uniform(u32s(al)?),
            None => bail!("uniform needs --alphabet"),
        },
        FamilyArg::SingleAtom => match (&a.alphabet, &a.atom) {
            (Some(al), Some(at)) => Family::SingleAtom { bins: u32s(al)?, atom: u32s(at)? },
            _ => bail!("single-atom needs --alphabet and --atom"),
        },
    })
}

fn cmd_synth(a: &SynthArgs, out: &mut OutputSet) -> Result<()> {
    let law = make_named(&family(a)?)?;
    let s = sample_from(&law, a.m, a.seed)?;
    let mut values = Vec::with_capacity(s.m() * s.n());
    for r in 0..s.m() {
        values.extend((0..s.n()).map(|v| f64::from(s.value(r, v) - 1)));
    }
    let d = DataMatrix::new(values, s.row_labels().to_vec(), s.col_labels().to_vec())?;
    out.write(&a.name, |w| write_matrix(&d, w, b',').map_err(std::io::Error::from))?;
    Ok(())
}

fn cmd_check(a: &CheckArgs, out: &mut OutputSet) -> Result<()> {
    let p = prepare(&a.input)?;
    let (r, vars) = report_identities(&p, a.max_vars, a.tol)?;
    out.write("identities.json", |w| output::write_identities_json(&r, &vars, a.tol, w))?;
    Ok(())
}
