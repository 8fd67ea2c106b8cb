use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use slicerank::generate;
use slicerank::json::{
    self, NormalizedJson, RankReportJson, RankResultJson, SplitTraceJson, TensorJson,
    TriangularReportJson,
};
use slicerank::normalize::triangular_normalize;
use slicerank::rank::{
    cover_rank_result, decomposition_from_certificate, dual_search, matrix_rank_result, verify_certificate,
    DEFAULT_LIMIT,
};
use slicerank::split::{
    check_additivity, check_triangular, levi_civita_obstruction_demo, split_certificate, split_certificate_theorem2,
    verify_split, OptionChoice, PivotOption, Status,
};
use slicerank::{BlockStructure, DualCertificate, Error, PrimeField, RankOutcome, SearchConfig, Tensor};

mod exit {
    pub const OK: u8 = 0;
    pub const INPUT: u8 = 2;
    pub const LIMIT: u8 = 3;
    pub const VERIFY: u8 = 4;
    pub const PRECONDITION: u8 = 5;
    pub const BUDGET: u8 = 6;
}

/// Exact slice rank of small tensors over prime fields.
///
/// Exit status: 0 ok, 2 input or parse error, 3 enumeration limit exceeded,
/// 4 verification failure or theorem violation, 5 precondition violated,
/// 6 rank exceeds the budget.
#[derive(Parser)]
#[command(name = "slicerank", version)]
struct Cli {
    /// Worker threads for the search and trial loops (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write output here instead of standard output.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    DualSearch,
    Cover,
    Matrix,
}

#[derive(clap::Args, Clone)]
struct SearchArgs {
    /// Maximum number of enumerated subspace tuples.
    #[arg(long, default_value_t = DEFAULT_LIMIT)]
    limit: u128,
}

impl SearchArgs {
    fn config(&self) -> SearchConfig {
        SearchConfig::default().with_limit(self.limit)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Compute σ(T) with a certificate and a decomposition of that length.
    Rank {
        #[arg(short, long)]
        input: PathBuf,
        /// Report "exceeds budget" (status 6) instead of searching past this rank.
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long, value_enum, default_value = "dual-search")]
        method: MethodArg,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Check a certificate or a decomposition against a tensor.
    Verify {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long, conflicts_with = "decomposition", required_unless_present = "decomposition")]
        certificate: Option<PathBuf>,
        #[arg(long)]
        decomposition: Option<PathBuf>,
    },
    /// Split a certificate of a two-block tensor into certificates of its diagonal blocks.
    Split {
        #[arg(short, long)]
        input: PathBuf,
        /// Block sizes: "2,1" for every axis, or "2,1;1,1;2,2" per axis.
        #[arg(long)]
        blocks: String,
        /// Certificate of the whole tensor; computed by search when absent.
        #[arg(long)]
        certificate: Option<PathBuf>,
        /// Pivot option per axis, e.g. "first,first,second" or "FFS".
        #[arg(long, conflicts_with = "one_sided")]
        options: Option<String>,
        /// Use the one-sided support condition instead of a direct-sum assumption.
        #[arg(long, alias = "theorem2")]
        one_sided: bool,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Block-diagonal sum of two tensors over the same field and order.
    DirectSum {
        /// Exactly two tensor files.
        #[arg(short, long, num_args = 1, required = true)]
        input: Vec<PathBuf>,
    },
    /// Named constructions.
    Demo {
        #[command(subcommand)]
        demo: Demo,
    },
    /// σ(T1 ⊕ T2) against σ(T1) + σ(T2) on seeded random pairs.
    Additivity {
        /// Shape of each summand, e.g. "2,2,2".
        #[arg(long)]
        shape: String,
        #[arg(long)]
        prime: u32,
        #[arg(long, default_value_t = 1)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// σ(T) against the diagonal block ranks of block upper triangular tensors.
    Triangular {
        /// Check this tensor instead of random ones.
        #[arg(short, long)]
        input: Option<PathBuf>,
        /// Block sizes: "1,1,1" for every axis, or per axis separated by ";".
        #[arg(long)]
        blocks: String,
        /// Order of the random tensors.
        #[arg(long, default_value_t = 3)]
        order: usize,
        #[arg(long)]
        prime: Option<u32>,
        #[arg(long, default_value_t = 1)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Triangular normal form of an order-3 decomposition.
    NormalizeD3 {
        #[arg(short, long)]
        input: PathBuf,
        /// Decomposition of the input; a minimal one is computed when absent.
        #[arg(long)]
        decomposition: Option<PathBuf>,
        #[command(flatten)]
        search: SearchArgs,
    },
}

#[derive(Subcommand)]
enum Demo {
    /// The 3×3×3 Levi-Civita symbol.
    LeviCivita {
        #[arg(long)]
        prime: u32,
    },
    /// An order-3 diagonal tensor with the first `ones` diagonal entries set to 1.
    Diagonal {
        #[arg(long)]
        prime: u32,
        #[arg(long)]
        size: usize,
        #[arg(long)]
        ones: usize,
        #[arg(long, default_value_t = 3)]
        order: usize,
    },
    /// Bounds on m copies of the Levi-Civita symbol from a contracted matrix.
    Obstruction {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        prime: u32,
        /// Contraction vector, comma separated; a few-zeros kernel vector by default.
        #[arg(long)]
        h: Option<String>,
    },
}

#[derive(Debug)]
enum CliError {
    Core(Error),
    Io(PathBuf, std::io::Error),
    Usage(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn status(&self) -> u8 {
        match self {
            CliError::Io(..) | CliError::Usage(_) => exit::INPUT,
            CliError::Core(e) => match e {
                Error::LimitExceeded { .. } => exit::LIMIT,
                Error::CertificateRejected => exit::VERIFY,
                Error::OptionConstraint
                | Error::SupportCondition(_)
                | Error::NotTriangular(_)
                | Error::SpanContainment(_)
                | Error::Biorthogonality
                | Error::CoverNotExact => exit::PRECONDITION,
                _ => exit::INPUT,
            },
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(p, e) => write!(f, "{}: {e}", p.display()),
            CliError::Usage(s) => write!(f, "{s}"),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

fn read_tensor(path: &Path) -> CliResult<Tensor> {
    Ok(json::parse_tensor(&read(path)?)?)
}

fn read_certificate(path: &Path, t: &Tensor) -> CliResult<DualCertificate> {
    Ok(json::parse_certificate(&read(path)?, t.field())?)
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> CliResult<Vec<T>> {
    s.split(',')
        .filter(|x| !x.trim().is_empty())
        .map(|x| {
            x.trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("bad {what} entry {x:?} in {s:?}")))
        })
        .collect()
}

fn parse_blocks(s: &str, order: usize) -> CliResult<BlockStructure> {
    let axes: Vec<&str> = s.split(';').collect();
    let sizes = if axes.len() == 1 {
        vec![parse_list(axes[0], "block size")?; order]
    } else {
        axes.iter()
            .map(|a| parse_list(a, "block size"))
            .collect::<CliResult<Vec<Vec<usize>>>>()?
    };
    Ok(BlockStructure::new(sizes)?)
}

fn parse_options(s: &str) -> CliResult<OptionChoice> {
    let words: Vec<&str> = if s.contains(',') {
        s.split(',').map(str::trim).collect()
    } else {
        s.split("").filter(|x| !x.is_empty()).collect()
    };
    words
        .iter()
        .map(|w| match w.to_ascii_lowercase().as_str() {
            "first" | "f" | "1" => Ok(PivotOption::First),
            "second" | "s" | "2" => Ok(PivotOption::Second),
            _ => Err(CliError::Usage(format!("unknown pivot option {w:?}"))),
        })
        .collect::<CliResult<Vec<_>>>()
        .map(OptionChoice)
}

fn field(p: u32) -> CliResult<PrimeField> {
    Ok(PrimeField::new(p)?)
}

/// Independent, reproducible stream per trial.
fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(trial as u64);
    r
}

fn minimal_certificate(t: &Tensor, search: &SearchArgs) -> CliResult<DualCertificate> {
    let outcome = dual_search(t, &search.config())?;
    Ok(outcome.exact().expect("no budget").certificate)
}

struct Output {
    text: String,
    status: u8,
}

impl Output {
    fn json<T: Serialize>(value: &T, status: u8) -> Self {
        Output {
            text: json::to_string(value),
            status,
        }
    }
}

#[derive(Serialize)]
struct BudgetJson {
    exceeds_budget: usize,
}

#[derive(Serialize)]
struct Trial<T> {
    trial: usize,
    #[serde(flatten)]
    report: T,
}

#[derive(Serialize)]
struct SplitOutput {
    #[serde(flatten)]
    trace: SplitTraceJson,
    verified_block1: bool,
    verified_block2: bool,
}

fn cmd_rank(input: &Path, budget: Option<usize>, method: MethodArg, search: &SearchArgs) -> CliResult<Output> {
    let t = read_tensor(input)?;
    let mut config = search.config();
    config.budget = budget;
    let result = match method {
        MethodArg::DualSearch => match dual_search(&t, &config)? {
            RankOutcome::Exact(r) => r,
            RankOutcome::ExceedsBudget { budget } => {
                return Ok(Output::json(&BudgetJson { exceeds_budget: budget }, exit::BUDGET))
            }
        },
        MethodArg::Cover => cover_rank_result(&t)?,
        MethodArg::Matrix => matrix_rank_result(&t)?,
    };
    if let Some(b) = budget {
        if result.sigma > b {
            return Ok(Output::json(&BudgetJson { exceeds_budget: b }, exit::BUDGET));
        }
    }
    Ok(Output::json(&RankResultJson::from_result(&result), exit::OK))
}

fn cmd_verify(input: &Path, certificate: Option<&Path>, decomposition: Option<&Path>) -> CliResult<Output> {
    let t = read_tensor(input)?;
    let ok = if let Some(c) = certificate {
        let c = read_certificate(c, &t)?;
        let ok = verify_certificate(&t, &c)?;
        if !ok {
            eprintln!(
                "certificate with bound {} does not annihilate the tensor: some basis tuple pairs to a nonzero value",
                c.bound()
            );
        }
        ok
    } else {
        let path = decomposition.expect("clap requires one of the two");
        let dec = json::parse_decomposition(&read(path)?, t.field(), t.shape())?;
        let value = dec.evaluate()?;
        let mismatch = value
            .indices()
            .zip(value.data().iter().zip(t.data()))
            .find(|(_, (a, b))| a != b);
        if let Some((idx, (got, want))) = &mismatch {
            let one_based: Vec<usize> = idx.iter().map(|x| x + 1).collect();
            eprintln!("decomposition evaluates to {got} at {one_based:?}, tensor has {want}");
        }
        mismatch.is_none()
    };
    Ok(Output {
        text: if ok { "pass\n".into() } else { "fail\n".into() },
        status: if ok { exit::OK } else { exit::VERIFY },
    })
}

fn cmd_split(
    input: &Path,
    blocks: &str,
    certificate: Option<&Path>,
    options: Option<&str>,
    one_sided: bool,
    search: &SearchArgs,
) -> CliResult<Output> {
    let t = read_tensor(input)?;
    let blocks = parse_blocks(blocks, t.order())?;
    blocks.check_shape(t.shape())?;
    let c = match certificate {
        Some(p) => read_certificate(p, &t)?,
        None => minimal_certificate(&t, search)?,
    };
    if !verify_certificate(&t, &c)? {
        return Err(Error::CertificateRejected.into());
    }
    let trace = if one_sided {
        split_certificate_theorem2(&t, &c, &blocks)?
    } else {
        let choices = match options {
            Some(s) => parse_options(s)?,
            None => OptionChoice::default_for(t.order()),
        };
        let bad: Vec<Vec<usize>> = slicerank::tensor::nonzero_blocks(&t, &blocks)?
            .into_iter()
            .filter(|a| a.iter().any(|&x| x != a[0]))
            .collect();
        if let Some(a) = bad.into_iter().next() {
            return Err(Error::SupportCondition(a).into());
        }
        split_certificate(&c, &blocks, &choices)?
    };
    let (a, b) = verify_split(&t, &blocks, &trace)?;
    if !(a && b) {
        eprintln!("derived certificates verify: block 1 {a}, block 2 {b}");
    }
    Ok(Output::json(
        &SplitOutput {
            trace: SplitTraceJson::from_trace(&trace),
            verified_block1: a,
            verified_block2: b,
        },
        if a && b { exit::OK } else { exit::VERIFY },
    ))
}

fn cmd_direct_sum(inputs: &[PathBuf]) -> CliResult<Output> {
    if inputs.len() != 2 {
        return Err(CliError::Usage(format!("direct-sum takes 2 inputs, got {}", inputs.len())));
    }
    let a = read_tensor(&inputs[0])?;
    let b = read_tensor(&inputs[1])?;
    let (sum, blocks) = a.direct_sum(&b)?;
    let spec: Vec<String> = blocks
        .sizes()
        .iter()
        .map(|s| s.iter().map(usize::to_string).collect::<Vec<_>>().join(","))
        .collect();
    eprintln!("blocks: {}", spec.join(";"));
    Ok(Output::json(&TensorJson::from_array(&sum), exit::OK))
}

fn cmd_demo(demo: &Demo) -> CliResult<Output> {
    match demo {
        Demo::LeviCivita { prime } => Ok(Output::json(
            &TensorJson::from_array(&Tensor::levi_civita(field(*prime)?)),
            exit::OK,
        )),
        Demo::Diagonal {
            prime,
            size,
            ones,
            order,
        } => {
            if ones > size {
                return Err(CliError::Usage(format!("--ones {ones} exceeds --size {size}")));
            }
            let mut values = vec![0; *size];
            values[..*ones].iter_mut().for_each(|x| *x = 1);
            let t = Tensor::diagonal(field(*prime)?, *order, &values)?;
            Ok(Output::json(&TensorJson::from_array(&t), exit::OK))
        }
        Demo::Obstruction { m, prime, h } => {
            let h = h.as_deref().map(|s| parse_list(s, "h")).transpose()?;
            let report = levi_civita_obstruction_demo(*m, field(*prime)?, h)?;
            let status = if report.antisymmetric && report.contraction_rank <= 2 * report.surviving_copies {
                exit::OK
            } else {
                exit::VERIFY
            };
            Ok(Output::json(&report, status))
        }
    }
}

fn cmd_additivity(shape: &str, prime: u32, trials: usize, seed: u64, search: &SearchArgs) -> CliResult<Output> {
    let f = field(prime)?;
    let shape: Vec<usize> = parse_list(shape, "shape")?;
    let config = search.config();
    let reports = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut r = trial_rng(seed, trial);
            let t1 = generate::random_tensor(&mut r, f, shape.clone())?;
            let t2 = generate::random_tensor(&mut r, f, shape.clone())?;
            let report = check_additivity(&t1, &t2, &config)?;
            Ok(Trial {
                trial,
                report: RankReportJson::from_report(&report),
            })
        })
        .collect::<slicerank::Result<Vec<_>>>()?;
    let violated = reports.iter().any(|t| t.report.status == Status::Violation);
    Ok(Output::json(&reports, if violated { exit::VERIFY } else { exit::OK }))
}

#[allow(clippy::too_many_arguments)]
fn cmd_triangular(
    input: Option<&Path>,
    blocks: &str,
    order: usize,
    prime: Option<u32>,
    trials: usize,
    seed: u64,
    search: &SearchArgs,
) -> CliResult<Output> {
    let config = search.config();
    let reports = if let Some(path) = input {
        let t = read_tensor(path)?;
        let blocks = parse_blocks(blocks, t.order())?;
        vec![Trial {
            trial: 0,
            report: TriangularReportJson::from_report(&check_triangular(&t, &blocks, &config)?),
        }]
    } else {
        let p = prime.ok_or_else(|| CliError::Usage("--prime is required without --input".into()))?;
        let f = field(p)?;
        let blocks = parse_blocks(blocks, order)?;
        (0..trials)
            .into_par_iter()
            .map(|trial| {
                let mut r = trial_rng(seed, trial);
                let t = generate::random_upper_triangular(&mut r, f, &blocks)?;
                Ok(Trial {
                    trial,
                    report: TriangularReportJson::from_report(&check_triangular(&t, &blocks, &config)?),
                })
            })
            .collect::<slicerank::Result<Vec<_>>>()?
    };
    let violated = reports.iter().any(|t| t.report.report.status == Status::Violation);
    Ok(Output::json(&reports, if violated { exit::VERIFY } else { exit::OK }))
}

fn cmd_normalize(input: &Path, decomposition: Option<&Path>, search: &SearchArgs) -> CliResult<Output> {
    let t = read_tensor(input)?;
    let dec = match decomposition {
        Some(p) => json::parse_decomposition(&read(p)?, t.field(), t.shape())?,
        None => decomposition_from_certificate(&t, &minimal_certificate(&t, search)?)?,
    };
    if dec.evaluate()? != t {
        eprintln!("decomposition does not evaluate to the input tensor");
        return Ok(Output {
            text: String::new(),
            status: exit::VERIFY,
        });
    }
    let n = triangular_normalize(&dec)?;
    let ok = n.ledger_complete() && n.decomposition.evaluate()? == t;
    Ok(Output::json(
        &NormalizedJson::from_normalized(&n),
        if ok { exit::OK } else { exit::VERIFY },
    ))
}

fn run(cli: &Cli) -> CliResult<Output> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    }
    match &cli.command {
        Command::Rank {
            input,
            budget,
            method,
            search,
        } => cmd_rank(input, *budget, *method, search),
        Command::Verify {
            input,
            certificate,
            decomposition,
        } => cmd_verify(input, certificate.as_deref(), decomposition.as_deref()),
        Command::Split {
            input,
            blocks,
            certificate,
            options,
            one_sided,
            search,
        } => cmd_split(input, blocks, certificate.as_deref(), options.as_deref(), *one_sided, search),
        Command::DirectSum { input } => cmd_direct_sum(input),
        Command::Demo { demo } => cmd_demo(demo),
        Command::Additivity {
            shape,
            prime,
            trials,
            seed,
            search,
        } => cmd_additivity(shape, *prime, *trials, *seed, search),
        Command::Triangular {
            input,
            blocks,
            order,
            prime,
            trials,
            seed,
            search,
        } => cmd_triangular(input.as_deref(), blocks, *order, *prime, *trials, *seed, search),
        Command::NormalizeD3 {
            input,
            decomposition,
            search,
        } => cmd_normalize(input, decomposition.as_deref(), search),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let written = match &cli.output {
                Some(p) => fs::write(p, &out.text).map_err(|e| CliError::Io(p.clone(), e)),
                None => std::io::stdout()
                    .write_all(out.text.as_bytes())
                    .map_err(|e| CliError::Io("<stdout>".into(), e)),
            };
            match written {
                Ok(()) => ExitCode::from(out.status),
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(e.status())
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.status())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn block_and_option_parsing() {
        let b = parse_blocks("2,1", 3).unwrap();
        assert_eq!(b.sizes(), &[vec![2, 1], vec![2, 1], vec![2, 1]]);
        let b = parse_blocks("1,1;2,0", 2).unwrap();
        assert_eq!(b.sizes(), &[vec![1, 1], vec![2, 0]]);
        assert_eq!(
            parse_options("FFS").unwrap(),
            OptionChoice(vec![PivotOption::First, PivotOption::First, PivotOption::Second])
        );
        assert_eq!(parse_options("first, second").unwrap().0.len(), 2);
        assert!(parse_options("x").is_err());
    }

    #[test]
    fn trial_streams_differ() {
        use rand_chacha::rand_core::RngCore;
        assert_ne!(trial_rng(1, 0).next_u64(), trial_rng(1, 1).next_u64());
        assert_eq!(trial_rng(1, 3).next_u64(), trial_rng(1, 3).next_u64());
    }
}
