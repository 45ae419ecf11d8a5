use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use dimers::asymptotics::{catalan_constant, finite_size_entropy};
use dimers::codec::{decode, encode, TilingCode};
use dimers::kasteleyn::{count_rectangle_det, torus_determinants, TorusMode};
use dimers::oracle::{
    count_overtilings, count_with_boundary, enumerate_matchings, BoundaryConfiguration, Direction, EnumerationLimits,
    Stub,
};
use dimers::spectral::{count_rectangle_spectral, count_torus_spectral, default_precision};
use dimers::{BigCount, DimerError, GridSpec};

mod output;
mod tiling_text;
mod verify;

use output::{emit_error, ErrorRecord, Printer, ResultRecord};

#[derive(Parser)]
#[command(name = "dimers", version, about = "Exact domino tiling counts for rectangles and tori")]
struct Cli {
    /// Worker threads for the parallel parts (default: all cores).
    #[arg(long, global = true, env = "DIMERS_THREADS")]
    threads: Option<usize>,

    /// Render a table instead of JSON lines.
    #[arg(long, global = true)]
    pretty: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Enumerate,
    Determinant,
    Spectral,
    /// Run every method and require identical answers.
    All,
}

#[derive(clap::Args)]
struct Board {
    #[arg(long, short = 'm')]
    rows: usize,
    #[arg(long, short = 'n')]
    cols: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Count tilings of a rectangle.
    Count {
        #[command(flatten)]
        board: Board,
        #[arg(long, value_enum, default_value = "determinant")]
        method: Method,
        /// Working precision of the spectral method (default: rows * cols + 64).
        #[arg(long)]
        precision_bits: Option<u32>,
        /// Largest board the enumeration method accepts.
        #[arg(long, default_value_t = 36)]
        max_cells: usize,
    },
    /// Count tilings of a torus.
    Torus {
        #[command(flatten)]
        board: Board,
        #[arg(long, value_enum, default_value = "determinant")]
        method: Method,
        /// Accept even sides that are not multiples of 4.
        #[arg(long)]
        experimental: bool,
        #[arg(long)]
        precision_bits: Option<u32>,
        #[arg(long, default_value_t = 32)]
        max_cells: usize,
    },
    /// Count overtilings, where dominoes may straddle the boundary.
    Overtilings {
        #[command(flatten)]
        board: Board,
        #[arg(long, default_value_t = 16)]
        max_cells: usize,
    },
    /// Count overtilings with a fixed set of boundary stubs, each given as
    /// `x,y,direction` (1-based column and row; left, right, up or down).
    Boundary {
        #[command(flatten)]
        board: Board,
        stubs: Vec<String>,
        #[arg(long, default_value_t = 16)]
        max_cells: usize,
    },
    /// Encode a text tiling (rows of L/R/U/D) into the binary code format.
    Encode {
        #[arg(long, short)]
        input: PathBuf,
        #[arg(long, short)]
        output: PathBuf,
    },
    /// Decode a binary tiling code; writes the text tiling if `--output` is set.
    Decode {
        #[arg(long, short)]
        input: PathBuf,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Per-site entropy (1/n^2) log N(n, n) for even n up to `--max-n`.
    Entropy {
        #[arg(long, default_value_t = 64)]
        max_n: usize,
        #[arg(long, default_value_t = 128)]
        precision_bits: u32,
    },
    /// Catalan's constant.
    Catalan {
        #[arg(long, default_value_t = 128)]
        precision_bits: u32,
    },
    /// Run the invariant suite; one line per passed invariant.
    Verify {
        #[arg(long, default_value_t = 36)]
        max_cells: usize,
    },
}

enum Failure {
    Usage(String),
    Compute(DimerError),
    Mismatch(String),
}

impl From<DimerError> for Failure {
    fn from(e: DimerError) -> Self {
        Failure::Compute(e)
    }
}

impl Failure {
    fn kind(&self) -> &'static str {
        match self {
            Failure::Usage(_) => "usage",
            Failure::Mismatch(_) => "method-mismatch",
            Failure::Compute(e) => match e {
                DimerError::InvalidDimensions { .. } => "invalid-dimensions",
                DimerError::InvalidSignClass(_) => "invalid-sign-class",
                DimerError::InexactDivision => "inexact-division",
                DimerError::SignCalibrationFailure(_) => "sign-calibration",
                DimerError::PrecisionExhausted { .. } => "precision-exhausted",
                DimerError::SizeLimitExceeded { .. } => "size-limit",
                DimerError::InvalidBoundary(_) => "invalid-boundary",
                DimerError::InvalidCode { .. } => "invalid-code",
                DimerError::ToleranceNotMet { .. } => "tolerance-not-met",
            },
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Mismatch(_) => 2,
            Failure::Compute(e) => match e {
                DimerError::InvalidDimensions { .. }
                | DimerError::InvalidSignClass(_)
                | DimerError::SizeLimitExceeded { .. }
                | DimerError::InvalidBoundary(_)
                | DimerError::InvalidCode { .. } => 1,
                _ => 2,
            },
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Usage(m) | Failure::Mismatch(m) => m.clone(),
            Failure::Compute(e) => e.to_string(),
        }
    }
}

type Outcome = Result<(), Failure>;

fn limits(max_cells: usize) -> EnumerationLimits {
    EnumerationLimits {
        rectangle_cells: max_cells,
        torus_cells: max_cells,
        overtiling_cells: max_cells,
    }
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Enumerate => "enumerate",
        Method::Determinant => "determinant",
        Method::Spectral => "spectral",
        Method::All => "all",
    }
}

/// Runs the selected methods and insists they agree.
fn run_methods<F>(method: Method, mut count: F) -> Result<(BigCount, String), Failure>
where
    F: FnMut(Method) -> Result<(BigCount, String), Failure>,
{
    if method != Method::All {
        return count(method);
    }
    let mut results = Vec::new();
    for m in [Method::Enumerate, Method::Determinant, Method::Spectral] {
        results.push(count(m)?);
    }
    let first = results[0].0.clone();
    if let Some((other, name)) = results.iter().find(|(v, _)| *v != first) {
        return Err(Failure::Mismatch(format!("{name} gives {other}, enumerate gives {first}")));
    }
    let names: Vec<String> = results.into_iter().map(|(_, n)| n).collect();
    Ok((first, names.join("=")))
}

fn board_params(record: ResultRecord, board: &Board) -> ResultRecord {
    record.param("rows", board.rows).param("cols", board.cols)
}

fn read(path: &PathBuf) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &PathBuf, data: &[u8]) -> Outcome {
    fs::write(path, data).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
}

fn parse_stub(s: &str) -> Result<Stub, Failure> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let bad = || Failure::Usage(format!("stub {s:?} is not x,y,direction"));
    let [x, y, d] = parts.as_slice() else {
        return Err(bad());
    };
    Ok(Stub {
        x: x.parse().map_err(|_| bad())?,
        y: y.parse().map_err(|_| bad())?,
        direction: Direction::parse(d).ok_or_else(bad)?,
    })
}

fn run(command: Command, out: &mut Printer) -> Outcome {
    let start = Instant::now();
    let finish = |out: &mut Printer, mut record: ResultRecord| {
        record.elapsed_ms = start.elapsed().as_millis() as u64;
        out.emit(&record);
    };
    match command {
        Command::Count {
            board,
            method,
            precision_bits,
            max_cells,
        } => {
            let (m, n) = (board.rows, board.cols);
            let precision = precision_bits.unwrap_or_else(|| default_precision(m, n));
            let lim = limits(max_cells);
            let (value, how) = run_methods(method, |which| {
                let v = match which {
                    Method::Enumerate => enumerate_matchings(GridSpec::rectangle(m, n), &lim)?,
                    Method::Determinant => count_rectangle_det(m, n)?,
                    Method::Spectral => count_rectangle_spectral(m, n, precision)?,
                    Method::All => unreachable!(),
                };
                Ok((v, method_name(which).to_string()))
            })?;
            let mut record = board_params(ResultRecord::new("count", how, value.to_string()), &board);
            if matches!(method, Method::Spectral | Method::All) {
                record = record.param("precision_bits", precision);
            }
            finish(out, record);
        }
        Command::Torus {
            board,
            method,
            experimental,
            precision_bits,
            max_cells,
        } => {
            let (m, n) = (board.rows, board.cols);
            let mode = if experimental {
                TorusMode::Experimental
            } else {
                TorusMode::Validated
            };
            let precision = precision_bits.unwrap_or_else(|| default_precision(m, n));
            let lim = limits(max_cells);
            let (value, how) = run_methods(method, |which| match which {
                Method::Enumerate => Ok((enumerate_matchings(GridSpec::torus(m, n), &lim)?, "enumerate".into())),
                Method::Determinant => {
                    let t = torus_determinants(m, n, mode, &lim)?;
                    let how = match (mode, t.oracle_verified) {
                        (TorusMode::Experimental, Some(true)) => "determinant (experimental, oracle-checked)",
                        (TorusMode::Experimental, _) => "determinant (experimental, unchecked)",
                        _ => "determinant",
                    };
                    Ok((t.count, how.into()))
                }
                Method::Spectral => Ok((count_torus_spectral(m, n, mode, precision)?, "spectral".into())),
                Method::All => unreachable!(),
            })?;
            let mut record = board_params(ResultRecord::new("torus", how, value.to_string()), &board)
                .param("experimental", experimental);
            if matches!(method, Method::Spectral | Method::All) {
                record = record.param("precision_bits", precision);
            }
            finish(out, record);
        }
        Command::Overtilings { board, max_cells } => {
            let value = count_overtilings(board.rows, board.cols, &limits(max_cells))?;
            finish(out, board_params(ResultRecord::new("overtilings", "enumerate", value.to_string()), &board));
        }
        Command::Boundary {
            board,
            stubs,
            max_cells,
        } => {
            let parsed = stubs.iter().map(|s| parse_stub(s)).collect::<Result<Vec<_>, _>>()?;
            let config = BoundaryConfiguration::new(parsed);
            let value = count_with_boundary(board.rows, board.cols, &config, &limits(max_cells))?;
            let listed: Vec<String> = config
                .stubs
                .iter()
                .map(|s| format!("{},{},{}", s.x, s.y, s.direction))
                .collect();
            let record = board_params(ResultRecord::new("boundary", "enumerate", value.to_string()), &board)
                .param("stubs", listed);
            finish(out, record);
        }
        Command::Encode { input, output } => {
            let text = String::from_utf8(read(&input)?)
                .map_err(|_| Failure::Usage(format!("{} is not UTF-8 text", input.display())))?;
            let matching = tiling_text::parse(&text).map_err(Failure::Usage)?;
            let code = encode(&matching)?;
            write(&output, &code.to_bytes())?;
            let record = ResultRecord::new("encode", "row-major scan", code.to_bit_string())
                .param("rows", code.rows)
                .param("cols", code.cols)
                .param("output", output.display().to_string());
            finish(out, record);
        }
        Command::Decode { input, output } => {
            let code = TilingCode::from_bytes(&read(&input)?)?;
            let matching = decode(&code)?;
            let rows = tiling_text::render(&matching);
            let mut record = ResultRecord::new("decode", "row-major scan", rows.join("/"))
                .param("rows", code.rows)
                .param("cols", code.cols);
            if let Some(path) = output {
                write(&path, (rows.join("\n") + "\n").as_bytes())?;
                record = record.param("output", path.display().to_string());
            }
            finish(out, record);
        }
        Command::Entropy { max_n, precision_bits } => {
            let reports = finite_size_entropy(max_n, precision_bits)?;
            for r in reports {
                let record = ResultRecord::new("entropy", "spectral double sum", r.per_site_log.to_decimal(20))
                    .param("n", r.n)
                    .param("precision_bits", precision_bits)
                    .param("target", r.target.to_decimal(20))
                    .param("gap", r.gap.to_decimal(20));
                finish(out, record);
            }
        }
        Command::Catalan { precision_bits } => {
            if precision_bits < 16 {
                return Err(Failure::Usage("--precision-bits must be at least 16".into()));
            }
            let g = catalan_constant(precision_bits);
            let digits = (precision_bits as f64 * std::f64::consts::LOG10_2).floor() as usize;
            let record = ResultRecord::new("catalan", "accelerated alternating series", g.to_decimal(digits))
                .param("precision_bits", precision_bits);
            finish(out, record);
        }
        Command::Verify { max_cells } => {
            let lim = EnumerationLimits {
                rectangle_cells: max_cells,
                torus_cells: max_cells.max(16),
                overtiling_cells: 16,
            };
            let mut failures = Vec::new();
            for inv in verify::suite() {
                let t = Instant::now();
                match (inv.run)(&lim) {
                    Ok(detail) => {
                        let mut record = ResultRecord::new("verify", detail, "pass")
                            .param("invariant", inv.name)
                            .param("max_cells", max_cells);
                        record.elapsed_ms = t.elapsed().as_millis() as u64;
                        out.emit(&record);
                    }
                    Err(why) => {
                        emit_error(&ErrorRecord {
                            command: "verify",
                            error: "invariant-failed",
                            message: format!("{}: {why}", inv.name),
                        });
                        failures.push(inv.name);
                    }
                }
            }
            if !failures.is_empty() {
                return Err(Failure::Mismatch(format!("failed invariants: {}", failures.join(", "))));
            }
        }
    }
    Ok(())
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Count { .. } => "count",
        Command::Torus { .. } => "torus",
        Command::Overtilings { .. } => "overtilings",
        Command::Boundary { .. } => "boundary",
        Command::Encode { .. } => "encode",
        Command::Decode { .. } => "decode",
        Command::Entropy { .. } => "entropy",
        Command::Catalan { .. } => "catalan",
        Command::Verify { .. } => "verify",
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            emit_error(&ErrorRecord {
                command: "",
                error: "usage",
                message: e.render().to_string().trim_end().to_string(),
            });
            return ExitCode::from(1);
        }
    };
    if let Some(threads) = cli.threads {
        if threads == 0 {
            emit_error(&ErrorRecord {
                command: command_name(&cli.command),
                error: "usage",
                message: "--threads must be positive".into(),
            });
            return ExitCode::from(1);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .expect("thread pool is configured once");
    }
    let name = command_name(&cli.command);
    let mut printer = Printer::new(cli.pretty);
    match run(cli.command, &mut printer) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            emit_error(&ErrorRecord {
                command: name,
                error: f.kind(),
                message: f.message(),
            });
            ExitCode::from(f.exit_code())
        }
    }
}
