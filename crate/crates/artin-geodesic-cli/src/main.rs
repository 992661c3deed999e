//! Command-line front end: reduction to geodesic form, word-problem queries,
//! diagram validation, search traces, exhaustive enumeration, and benchmarks.
//!
//! Exit codes are a stable contract: 0 success, 1 usage or parse errors,
//! 2 presentation fails the diagram hypothesis.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use artin_geodesic::oracle::{enumerate_rrs, optimal_rrs_exhaustive, ENUMERATION_BOUND};
use artin_geodesic::rrs::{
    apply_rrs, find_optimal_rrs, find_optimal_rrs_traced, reduce, ReducerState, SearchMode,
};
use artin_geodesic::{equal, is_geodesic, parse_presentation, Letter, Presentation, Word};

/// Default seed for the benchmark's random words; printable and overridable
/// so runs are reproducible.
const DEFAULT_BENCH_SEED: u64 = 0x9e3779b97f4a7c15;

#[derive(Parser)]
#[command(
    name = "artin-geodesic",
    version,
    about = "Geodesic reduction and the word problem \
    in Artin groups whose Coxeter diagram has no A3 or B3 subdiagram"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reduce a word to its geodesic representative.
    Reduce {
        /// Presentation file.
        #[arg(short, long)]
        presentation: PathBuf,
        /// The word to reduce, in word text syntax (e.g. "a b^-2 c").
        word: String,
        /// Use the unmemoized reference search instead of the default
        /// memoized one.
        #[arg(long)]
        reference_mode: bool,
    },
    /// Reduce a word, printing one search-trace block per applied sequence.
    Trace {
        #[arg(short, long)]
        presentation: PathBuf,
        word: String,
        /// Re-validate every applied sequence against the exhaustive
        /// enumeration oracle (words up to 14 letters).
        #[arg(long)]
        oracle_check: bool,
    },
    /// Decide whether two words represent the same group element.
    Equal {
        #[arg(short, long)]
        presentation: PathBuf,
        left: String,
        right: String,
    },
    /// Decide whether a word is geodesic.
    Geodesic {
        #[arg(short, long)]
        presentation: PathBuf,
        word: String,
    },
    /// List the A3/B3 subdiagram violations of a presentation.
    CheckDiagram { presentation: PathBuf },
    /// Search for the optimal reducing sequence of a word whose final letter
    /// plays the role of the cancelled suffix.
    FindRrs {
        #[arg(short, long)]
        presentation: PathBuf,
        word: String,
        /// Run even when the presentation violates the diagram hypothesis
        /// (the search is then no longer guaranteed complete or optimal).
        #[arg(long)]
        bypass_diagram_check: bool,
    },
    /// Exhaustively enumerate every reducing sequence of a short word.
    EnumerateRrs {
        #[arg(short, long)]
        presentation: PathBuf,
        word: String,
        /// Maximum number of chain words per sequence.
        #[arg(long, default_value_t = ENUMERATION_BOUND)]
        max_len: usize,
        #[arg(long)]
        bypass_diagram_check: bool,
    },
    /// Time reductions of random words at several lengths, in both search
    /// modes.
    Bench {
        #[arg(short, long)]
        presentation: PathBuf,
        /// Comma-separated word lengths.
        #[arg(long, value_delimiter = ',', default_value = "64,128,256,512")]
        lengths: Vec<usize>,
        /// Seed for the random words.
        #[arg(long, default_value_t = DEFAULT_BENCH_SEED)]
        seed: u64,
        /// Random words per length.
        #[arg(long, default_value_t = 5)]
        samples: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Keep clap's rendered help/usage text but our exit contract.
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn load_presentation(path: &PathBuf) -> Result<Presentation> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading presentation file {}", path.display()))?;
    parse_presentation(&text).map_err(|e| anyhow!("parsing {}: {e}", path.display()))
}

/// Print the hypothesis violations of a presentation and report whether any
/// exist.
fn report_violations(pres: &Presentation) -> bool {
    let violations = pres.validate_a3b3_free();
    for [x, y, z] in &violations {
        eprintln!(
            "diagram violation: {{{}, {}, {}}} admits an excluded labeling",
            pres.name(*x),
            pres.name(*y),
            pres.name(*z)
        );
    }
    !violations.is_empty()
}

/// Load a presentation and refuse (exit 2) if it violates the hypothesis.
fn load_validated(path: &PathBuf) -> Result<Result<Presentation, ExitCode>> {
    let pres = load_presentation(path)?;
    if report_violations(&pres) {
        return Ok(Err(ExitCode::from(2)));
    }
    Ok(Ok(pres))
}

fn parse_word(text: &str, pres: &Presentation) -> Result<Word> {
    Word::parse(text, pres).map_err(|e| anyhow!("parsing word `{text}`: {e}"))
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Reduce {
            presentation,
            word,
            reference_mode,
        } => {
            let pres = match load_validated(&presentation)? {
                Ok(p) => p,
                Err(code) => return Ok(code),
            };
            let w = parse_word(&word, &pres)?;
            let mode = if reference_mode {
                SearchMode::Reference
            } else {
                SearchMode::Memoized
            };
            let reduced = artin_geodesic::rrs::reduce_with_mode(&w, &pres, mode);
            println!("{}", reduced.format(&pres));
            Ok(ExitCode::SUCCESS)
        }
        Command::Trace {
            presentation,
            word,
            oracle_check,
        } => {
            let pres = match load_validated(&presentation)? {
                Ok(p) => p,
                Err(code) => return Ok(code),
            };
            let w = parse_word(&word, &pres)?;
            let reduced = trace_reduction(&w, &pres, oracle_check)?;
            println!("result: {}", reduced.format(&pres));
            Ok(ExitCode::SUCCESS)
        }
        Command::Equal {
            presentation,
            left,
            right,
        } => {
            let pres = match load_validated(&presentation)? {
                Ok(p) => p,
                Err(code) => return Ok(code),
            };
            let u = parse_word(&left, &pres)?;
            let v = parse_word(&right, &pres)?;
            println!("{}", equal(&u, &v, &pres));
            Ok(ExitCode::SUCCESS)
        }
        Command::Geodesic { presentation, word } => {
            let pres = match load_validated(&presentation)? {
                Ok(p) => p,
                Err(code) => return Ok(code),
            };
            let w = parse_word(&word, &pres)?;
            println!("{}", is_geodesic(&w, &pres));
            Ok(ExitCode::SUCCESS)
        }
        Command::CheckDiagram { presentation } => {
            let pres = load_presentation(&presentation)?;
            if report_violations(&pres) {
                Ok(ExitCode::from(2))
            } else {
                println!("ok: no A3 or B3 subdiagram");
                Ok(ExitCode::SUCCESS)
            }
        }
        Command::FindRrs {
            presentation,
            word,
            bypass_diagram_check,
        } => {
            let pres = load_presentation(&presentation)?;
            if !bypass_diagram_check && report_violations(&pres) {
                return Ok(ExitCode::from(2));
            }
            let host = parse_word(&word, &pres)?;
            let x = host
                .last()
                .ok_or_else(|| anyhow!("the word must be nonempty"))?;
            let prefix = Word(host.letters()[..host.len() - 1].to_vec());
            match find_optimal_rrs(&prefix, x, &pres) {
                Some(rrs) => {
                    print_rrs(&host, &rrs, &pres);
                }
                None => println!("none: the word admits no reducing sequence"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::EnumerateRrs {
            presentation,
            word,
            max_len,
            bypass_diagram_check,
        } => {
            let pres = load_presentation(&presentation)?;
            if !bypass_diagram_check && report_violations(&pres) {
                return Ok(ExitCode::from(2));
            }
            let host = parse_word(&word, &pres)?;
            let found = enumerate_rrs(&host, &pres, max_len)?;
            println!("{} sequence(s)", found.len());
            for rrs in &found {
                print_rrs(&host, rrs, &pres);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Bench {
            presentation,
            lengths,
            seed,
            samples,
        } => {
            let pres = match load_validated(&presentation)? {
                Ok(p) => p,
                Err(code) => return Ok(code),
            };
            bench(&pres, &lengths, seed, samples);
            Ok(ExitCode::SUCCESS)
        }
    }
}

/// Reduce letter by letter, printing a trace block for every appended letter
/// that triggered a reducing sequence.
fn trace_reduction(w: &Word, pres: &Presentation, oracle_check: bool) -> Result<Word> {
    let mut current = Word::empty();
    for (i, &x) in w.letters().iter().enumerate() {
        let mut trace = Vec::new();
        match find_optimal_rrs_traced(&current, x, pres, SearchMode::Memoized, &mut trace) {
            Some(rrs) => {
                let host = Word::concat(&[current.letters(), &[x]]);
                println!(
                    "# letter {i} ({}): sequence of length {}",
                    Word(vec![x]).format(pres),
                    rrs.decomposition.m()
                );
                for record in &trace {
                    println!("{record}");
                }
                print_rrs(&host, &rrs, pres);
                if oracle_check {
                    oracle_check_rrs(&host, &rrs, pres)?;
                }
                current = apply_rrs(&host, &rrs);
            }
            None => current.0.push(x),
        }
    }
    Ok(current)
}

/// Confirm an engine-produced sequence against exhaustive enumeration.
fn oracle_check_rrs(host: &Word, rrs: &artin_geodesic::Rrs, pres: &Presentation) -> Result<()> {
    if host.len() > ENUMERATION_BOUND {
        println!(
            "oracle: skipped ({} letters exceeds the exhaustive bound)",
            host.len()
        );
        return Ok(());
    }
    let best = optimal_rrs_exhaustive(host, pres)?;
    let found = best.iter().any(|r| r.decomposition == rrs.decomposition);
    if !found {
        return Err(anyhow!(
            "oracle disagreement: the engine's sequence is not among the {} optimal one(s)",
            best.len()
        ));
    }
    println!(
        "oracle: confirmed against {} optimal sequence(s)",
        best.len()
    );
    Ok(())
}

fn print_rrs(host: &Word, rrs: &artin_geodesic::Rrs, pres: &Presentation) {
    let type_names: Vec<String> = rrs
        .types
        .iter()
        .map(|t| match t {
            artin_geodesic::CritType::P2g { pair: (a, b) } => {
                format!("p2g{{{},{}}}", pres.name(*a), pres.name(*b))
            }
            artin_geodesic::CritType::P3g { abc: (a, b, c) } => {
                format!("p3g({},{},{})", pres.name(*a), pres.name(*b), pres.name(*c))
            }
        })
        .collect();
    println!(
        "decomposition: cuts={:?} gamma={} types=[{}] applied={}",
        rrs.decomposition.starts,
        rrs.decomposition.gamma_start,
        type_names.join(" "),
        apply_rrs(host, rrs).format(pres)
    );
}

fn random_word(len: usize, pres: &Presentation, rng: &mut impl Rng) -> Word {
    let gens: Vec<_> = pres.generators().collect();
    Word(
        (0..len)
            .map(|_| Letter {
                name: gens[rng.gen_range(0..gens.len())],
                sign: if rng.gen_bool(0.5) { 1 } else { -1 },
            })
            .collect(),
    )
}

fn bench(pres: &Presentation, lengths: &[usize], seed: u64, samples: usize) {
    println!("seed: {seed}");
    println!(
        "{:>8} {:>10} {:>12} {:>10} {:>10}",
        "length", "mode", "mean_ms", "rrs", "tau_moves"
    );
    for &len in lengths {
        for (mode, label) in [
            (SearchMode::Reference, "reference"),
            (SearchMode::Memoized, "memoized"),
        ] {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut total = std::time::Duration::ZERO;
            let mut rrs_count = 0u64;
            let mut tau_count = 0u64;
            for _ in 0..samples {
                let w = random_word(len, pres, &mut rng);
                let start = Instant::now();
                let mut state = ReducerState::with_mode(pres, mode);
                for &l in w.letters() {
                    state.append_reduce(l);
                }
                total += start.elapsed();
                rrs_count += state.stats().rrs_applications;
                tau_count += state.stats().tau_moves;
            }
            println!(
                "{:>8} {:>10} {:>12.3} {:>10} {:>10}",
                len,
                label,
                total.as_secs_f64() * 1000.0 / samples as f64,
                rrs_count / samples as u64,
                tau_count / samples as u64
            );
        }
    }
    // Anchor the table against a plain reduction so the two paths cannot
    // silently diverge.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w = random_word(*lengths.last().unwrap_or(&64), pres, &mut rng);
    let a = artin_geodesic::rrs::reduce_with_mode(&w, pres, SearchMode::Reference);
    let b = reduce(&w, pres);
    assert_eq!(a, b, "search modes disagree on a random word");
}
