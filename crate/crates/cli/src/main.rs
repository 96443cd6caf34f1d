//! `stable-pieces`: enumerate pieces, check identities, print the completion
//! atlas and cross-check against the finite-field model.
//!
//! Exit status is 0 on success, 1 when a check fails or an internal invariant
//! breaks, 2 on bad input (including runs refused by the size guard).

mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use stable_pieces::glmodel::{self, Config, GlError, DEFAULT_GUARD};
use stable_pieces::pieces::{self, PieceError, TwistedPair};
use stable_pieces::wonderful::{self, WonderfulError};
use stable_pieces::{weyl, NodeSubset, WeylDatum, WeylError};

const GUARD_VAR: &str = "STABLE_PIECES_GUARD";

#[derive(Parser)]
#[command(name = "stable-pieces", version, about = "G-stable pieces from Weyl group combinatorics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate the pieces of one pair (J, y), of every y for J, or of every pair.
    Pieces(PiecesArgs),
    /// Check the Poincare and point-count identities for every valid pair.
    Verify {
        #[command(flatten)]
        datum: DatumArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Print the pieces of the wonderful completion (adjoint torus rank).
    Wonderful {
        #[command(flatten)]
        datum: DatumArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Exhaustive check of the GL_d model over F_q.
    Glcheck(GlArgs),
}

#[derive(Args)]
struct DatumArgs {
    /// Cartan type such as A2, B3, G2 or A1xA1.
    #[arg(long = "type")]
    type_spec: String,
    /// Diagram automorphism as 1-based node images, e.g. 2,1.
    #[arg(long)]
    delta: Option<String>,
    /// Rank of the maximal torus; defaults to the semisimple rank (adjoint).
    #[arg(long)]
    torus_rank: Option<usize>,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    #[arg(long)]
    csv: bool,
    /// Write to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PiecesArgs {
    #[command(flatten)]
    datum: DatumArgs,
    /// Subset J as 1-based labels, e.g. "1,3"; "" is the empty set.
    #[arg(long = "J")]
    j: Option<String>,
    /// y as a reduced word such as "s1 s2", or "e".
    #[arg(long)]
    y: Option<String>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    /// A line against a line.
    #[value(name = "10.2", alias = "line-pair")]
    LinePair,
    /// A line against a hyperplane.
    #[value(name = "10.3", alias = "line-hyperplane")]
    LineHyperplane,
    /// Every block shape and matching, or the one given by --blocks/--sigma.
    Full,
}

#[derive(Args)]
struct GlArgs {
    #[arg(long)]
    d: usize,
    #[arg(long)]
    q: u32,
    #[arg(long, value_enum)]
    mode: Mode,
    /// Block dimensions of V for --mode full, e.g. 1,2.
    #[arg(long, requires = "sigma")]
    blocks: Option<String>,
    /// 1-based block matching for --mode full, e.g. 2,1.
    #[arg(long, requires = "blocks")]
    sigma: Option<String>,
    #[arg(long)]
    json: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Check(String),
}

impl From<WeylError> for Failure {
    fn from(e: WeylError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<PieceError> for Failure {
    fn from(e: PieceError) -> Self {
        match e {
            PieceError::InvalidPair(_) | PieceError::InadmissibleChoice { .. } => {
                Failure::Usage(e.to_string())
            }
            PieceError::Weyl(w) => w.into(),
            other => Failure::Check(other.to_string()),
        }
    }
}

impl From<GlError> for Failure {
    fn from(e: GlError) -> Self {
        match e {
            GlError::Piece(p) => p.into(),
            GlError::Weyl(w) => w.into(),
            GlError::NoStabilization { .. } => Failure::Check(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<WonderfulError> for Failure {
    fn from(e: WonderfulError) -> Self {
        match e {
            WonderfulError::Piece(p) => p.into(),
            other => Failure::Usage(other.to_string()),
        }
    }
}

type Outcome = Result<bool, Failure>;

fn parse_list(text: &str, what: &str) -> Result<Vec<usize>, Failure> {
    text.trim_matches(|c| c == '{' || c == '}' || c == '[' || c == ']')
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| Failure::Usage(format!("bad {what}: {text:?}"))))
        .collect()
}

fn one_based(list: Vec<usize>, bound: usize, what: &str) -> Result<Vec<usize>, Failure> {
    if list.iter().any(|&x| x == 0 || x > bound) {
        return Err(Failure::Usage(format!("{what} entries must lie in 1..={bound}")));
    }
    Ok(list.into_iter().map(|x| x - 1).collect())
}

fn build_datum(args: &DatumArgs) -> Result<WeylDatum, Failure> {
    let rank = weyl::parse_type(&args.type_spec)?.len();
    let delta = match &args.delta {
        Some(text) => Some(one_based(parse_list(text, "delta")?, rank, "delta")?),
        None => None,
    };
    let torus_rank = args.torus_rank.unwrap_or(rank);
    Ok(WeylDatum::from_type(&args.type_spec, delta.as_deref(), torus_rank)?)
}

fn emit(text: String, out: &Option<PathBuf>) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize") + "\n"
}

fn csv_text(r: Result<String, csv::Error>) -> Result<String, Failure> {
    r.map_err(|e| Failure::Usage(format!("csv output failed: {e}")))
}

fn guard() -> Result<u128, Failure> {
    match std::env::var(GUARD_VAR) {
        Ok(v) => v.trim().parse().map_err(|_| Failure::Usage(format!("{GUARD_VAR} must be an integer"))),
        Err(_) => Ok(DEFAULT_GUARD),
    }
}

fn run_pieces(args: &PiecesArgs) -> Outcome {
    let w = build_datum(&args.datum)?;
    let subsets: Vec<NodeSubset> = match &args.j {
        Some(text) => {
            let labels = parse_list(text, "J")?;
            vec![NodeSubset::from_nodes(one_based(labels, w.rank(), "J")?)]
        }
        None => NodeSubset::all(w.rank()).collect(),
    };
    let pairs: Vec<TwistedPair> = match &args.y {
        Some(word) => {
            if args.j.is_none() {
                return Err(Failure::Usage("--y needs --J".into()));
            }
            vec![TwistedPair::new(&w, subsets[0], w.parse_word(word)?)?]
        }
        None => subsets.iter().flat_map(|&j| TwistedPair::all_for(&w, j)).collect(),
    };
    let groups = pairs
        .into_iter()
        .map(|tp| Ok((tp, pieces::enumerate(&w, &tp)?)))
        .collect::<Result<Vec<_>, PieceError>>()?;
    let text = if args.output.json {
        pretty(&report::pieces_json(&w, &groups))
    } else if args.output.csv {
        csv_text(report::pieces_csv(&w, &groups))?
    } else {
        report::pieces_text(&w, &groups)
    };
    emit(text, &args.output.out)?;
    Ok(true)
}

fn run_verify(datum: &DatumArgs, output: &OutputArgs) -> Outcome {
    if output.csv {
        return Err(Failure::Usage("verify has no csv output".into()));
    }
    let w = build_datum(datum)?;
    let checks = TwistedPair::all(&w)
        .into_iter()
        .map(|tp| Ok((tp, pieces::verify_sum(&w, &tp)?)))
        .collect::<Result<Vec<_>, PieceError>>()?;
    let ok = checks.iter().all(|(_, c)| c.holds());
    let text = if output.json {
        pretty(&report::verify_json(&w, &checks))
    } else {
        report::verify_text(&w, &checks)
    };
    emit(text, &output.out)?;
    Ok(ok)
}

fn run_wonderful(datum: &DatumArgs, output: &OutputArgs) -> Outcome {
    let w = build_datum(datum)?;
    let atlas = wonderful::build_atlas(&w)?;
    let text = if output.json {
        pretty(&report::atlas_json(&w, &atlas))
    } else if output.csv {
        csv_text(report::atlas_csv(&w, &atlas))?
    } else {
        report::atlas_text(&w, &atlas)
    };
    emit(text, &output.out)?;
    Ok(true)
}

fn run_glcheck(args: &GlArgs) -> Outcome {
    let w = glmodel::gl_datum(args.d)?;
    let limit = guard()?;
    let configs = match (args.mode, &args.blocks, &args.sigma) {
        (Mode::LinePair, None, None) => vec![Config::LinePair],
        (Mode::LineHyperplane, None, None) => vec![Config::LineHyperplane],
        (Mode::Full, Some(b), Some(s)) => {
            let blocks = parse_list(b, "blocks")?;
            let sigma = one_based(parse_list(s, "sigma")?, blocks.len(), "sigma")?;
            vec![Config::Full { blocks, sigma }]
        }
        (Mode::Full, None, None) => Config::all_full(args.d),
        _ => return Err(Failure::Usage("--blocks and --sigma only apply to --mode full".into())),
    };
    let mut total: u128 = 0;
    for c in &configs {
        total += c.size(args.d, args.q as u64)?;
    }
    if total > limit {
        return Err(GlError::TooLarge { size: total, limit }.into());
    }
    let reports = configs
        .iter()
        .map(|c| glmodel::brute_force_partition(&w, args.q, c, limit))
        .collect::<Result<Vec<_>, GlError>>()?;
    let ok = reports.iter().all(|r| r.holds());
    let text = if args.json {
        let value = if let [single] = reports.as_slice() {
            report::glcheck_json(&w, single)
        } else {
            serde_json::json!({
                "d": args.d,
                "q": args.q,
                "runs": reports.iter().map(|r| report::glcheck_json(&w, r)).collect::<Vec<_>>(),
                "verdict": report::verdict(ok),
            })
        };
        pretty(&value)
    } else {
        let mut s: String = reports.iter().map(|r| report::glcheck_text(&w, r)).collect();
        if reports.len() > 1 {
            s += &format!("overall verdict: {}\n", report::verdict(ok));
        }
        s
    };
    emit(text, &args.out)?;
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Pieces(args) => run_pieces(args),
        Command::Verify { datum, output } => run_verify(datum, output),
        Command::Wonderful { datum, output } => run_wonderful(datum, output),
        Command::Glcheck(args) => run_glcheck(args),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
