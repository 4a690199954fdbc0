use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qfold_core::cartan::{fold_cartan, CartanDatum, DiagramAut};
use qfold_core::folding::{compare_reduced_words, FoldingContext};
use qfold_core::uqfull::UqAlgebra;

#[derive(Parser)]
#[command(name = "qfold", version, about = "Exact computer algebra for quantized enveloping algebras and their foldings")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a Cartan datum, optionally folded along a diagram automorphism.
    Cartan {
        /// Datum name: A<n>, D4 (triality star), fork<n> (two tines and a chain)
        #[arg(long = "type")]
        kind: String,
        /// Diagram automorphism in cycle notation over node labels
        #[arg(long)]
        aut: Option<String>,
    },
    /// Modified PBW generators of the positive part along a reduced word.
    Pbw {
        #[arg(long = "type")]
        kind: String,
        /// Comma-separated node labels; defaults to a longest word
        #[arg(long)]
        word: Option<String>,
    },
    /// Hat-PBW elements of a folding, their sigma-fixedness, monomial
    /// images, and change-of-word comparisons.
    Fold {
        #[arg(long = "type")]
        kind: String,
        /// Diagram automorphism in cycle notation over node labels
        #[arg(long)]
        aut: String,
        /// Comma-separated folded node labels; defaults to a longest word
        #[arg(long)]
        word: Option<String>,
        /// Second reduced word; certify the hat-PBW change of basis
        #[arg(long)]
        compare: Option<String>,
        /// Comma-separated exponents; print the folded monomial's image
        #[arg(long)]
        iota: Option<String>,
    },
}

enum CliError {
    /// Bad invocation: unknown datum, unparsable word. Exit 2.
    Usage(String),
    /// The requested computation failed or refuted. Exit 1.
    Failed(String),
}

impl CliError {
    fn report(self) -> ExitCode {
        match self {
            CliError::Usage(m) => {
                eprintln!("usage error: {m}");
                ExitCode::from(2)
            }
            CliError::Failed(m) => {
                eprintln!("error: {m}");
                ExitCode::from(1)
            }
        }
    }
}

fn parse_datum(kind: &str) -> Result<CartanDatum, CliError> {
    if kind == "D4" {
        return Ok(CartanDatum::d4_star());
    }
    if let Some(n) = kind.strip_prefix('A') {
        let n: usize = n
            .parse()
            .map_err(|_| CliError::Usage(format!("bad rank in --type {kind}")))?;
        return Ok(CartanDatum::type_a(n));
    }
    if let Some(n) = kind.strip_prefix("fork") {
        let n: usize = n
            .parse()
            .map_err(|_| CliError::Usage(format!("bad rank in --type {kind}")))?;
        return CartanDatum::type_d_fork(n)
            .map_err(|e| CliError::Usage(format!("--type {kind}: {e}")));
    }
    Err(CliError::Usage(format!(
        "unknown --type {kind} (expected A<n>, D4, or fork<n>)"
    )))
}

fn print_datum(datum: &CartanDatum, heading: &str) {
    println!("{heading}: nodes [{}]", datum.labels().join(", "));
    println!("  symmetrizers: {:?}", datum.symmetrizers());
    for row in datum.matrix() {
        println!("  {row:?}");
    }
}

fn cmd_cartan(kind: &str, aut: Option<&str>) -> Result<(), CliError> {
    let datum = parse_datum(kind)?;
    print_datum(&datum, "cartan");
    let Some(aut) = aut else { return Ok(()) };
    let aut = DiagramAut::parse(&datum, aut)
        .map_err(|e| CliError::Usage(format!("--aut: {e}")))?;
    let orbits: Vec<String> = aut
        .orbits()
        .iter()
        .map(|o| {
            let labels: Vec<&str> = o.iter().map(|&i| datum.label(i)).collect();
            format!("{{{}}}", labels.join(" "))
        })
        .collect();
    println!("orbits: {}", orbits.join(" "));
    let folding = fold_cartan(&datum, &aut)
        .map_err(|e| CliError::Failed(format!("folding rejected: {e}")))?;
    print_datum(&folding.folded, "folded");
    Ok(())
}

fn parse_word(datum: &CartanDatum, word: &str) -> Result<Vec<usize>, CliError> {
    word.split(',')
        .map(|lab| {
            let lab = lab.trim();
            datum
                .index_of_label(lab)
                .map_err(|e| CliError::Usage(e.to_string()))
        })
        .collect()
}

fn cmd_pbw(kind: &str, word: Option<&str>) -> Result<(), CliError> {
    let datum = parse_datum(kind)?;
    let word = match word {
        Some(w) => parse_word(&datum, w)?,
        None => datum
            .longest_word()
            .map_err(|e| CliError::Failed(format!("longest word: {e}")))?,
    };
    let labels: Vec<&str> = word.iter().map(|&i| datum.label(i)).collect();
    println!("word: {}", labels.join(","));
    let roots = datum.root_sequence(&word);
    let alg = UqAlgebra::new(datum).map_err(|e| CliError::Failed(e.to_string()))?;
    let xs = alg
        .pbw_elements(&word)
        .map_err(|e| CliError::Failed(e.to_string()))?;
    for (k, (x, root)) in xs.iter().zip(&roots).enumerate() {
        println!("X_{} (root {:?}): {}", k + 1, root, x);
    }
    Ok(())
}

fn cmd_fold(
    kind: &str,
    aut: &str,
    word: Option<&str>,
    compare: Option<&str>,
    iota: Option<&str>,
) -> Result<(), CliError> {
    let datum = parse_datum(kind)?;
    let aut = DiagramAut::parse(&datum, aut)
        .map_err(|e| CliError::Usage(format!("--aut: {e}")))?;
    let fold = fold_cartan(&datum, &aut)
        .map_err(|e| CliError::Failed(format!("folding rejected: {e}")))?;
    let word = match word {
        Some(w) => parse_word(&fold.folded, w)?,
        None => fold
            .folded
            .longest_word()
            .map_err(|e| CliError::Failed(format!("longest word: {e}")))?,
    };
    let ctx = FoldingContext::new(&datum, &aut, &word)
        .map_err(|e| CliError::Failed(e.to_string()))?;
    let hat_labels: Vec<&str> = ctx
        .hat_word()
        .iter()
        .map(|&i| ctx.ambient().datum().label(i))
        .collect();
    println!("lifted word: {}", hat_labels.join(","));
    let xs = ctx.hat_pbw().map_err(|e| CliError::Failed(e.to_string()))?;
    for (k, x) in xs.iter().enumerate() {
        println!("X^_{} (sigma-fixed): {}", k + 1, x);
    }
    if let Some(exps) = iota {
        let exps: Vec<u32> = exps
            .split(',')
            .map(|s| {
                s.trim()
                    .parse()
                    .map_err(|_| CliError::Usage(format!("bad exponent {s}")))
            })
            .collect::<Result<_, _>>()?;
        let image = ctx
            .iota(&exps)
            .map_err(|e| CliError::Failed(e.to_string()))?;
        println!("iota({exps:?}) = {image}");
    }
    if let Some(other) = compare {
        let other = parse_word(&fold.folded, other)?;
        let ctx2 = FoldingContext::new(&datum, &aut, &other)
            .map_err(|e| CliError::Failed(e.to_string()))?;
        let report = compare_reduced_words(&ctx, &ctx2)
            .map_err(|e| CliError::Failed(e.to_string()))?;
        print!("{report}");
        if !report.verified() {
            return Err(CliError::Failed("comparison identities refuted".into()));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.cmd {
        Command::Cartan { kind, aut } => cmd_cartan(kind, aut.as_deref()),
        Command::Pbw { kind, word } => cmd_pbw(kind, word.as_deref()),
        Command::Fold { kind, aut, word, compare, iota } => cmd_fold(
            kind,
            aut,
            word.as_deref(),
            compare.as_deref(),
            iota.as_deref(),
        ),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => e.report(),
    }
}
