mod render;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use entroplex::bounds::{degree_scan, is_acyclic, is_simple, logbound, BoundMethod};
use entroplex::dsl::{parse_inequality, print_inequality};
use entroplex::formats::{
    parse_conditional_names, parse_constraints, parse_distribution_csv, parse_function_table,
    parse_graph, parse_monsat, parse_partition, parse_relation_csv,
};
use entroplex::reductions::{from_3coloring, from_3dmonsat, from_partition};
use entroplex::validity::check_monotone_fixpoint_report;
use entroplex::{
    check, entropic_from_distribution, format_rational, Error, InequalityExpr, Semantics,
    VariableUniverse,
};

/// Exact validity checks for linear information inequalities and
/// entropy-based output-size bounds for conjunctive queries.
#[derive(Parser)]
#[command(name = "entroplex", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Class {
    Modular,
    Normal,
    Step,
    Entropic,
    Polymatroid,
    Monotone,
    Auto,
}

impl From<Class> for Semantics {
    fn from(c: Class) -> Self {
        match c {
            Class::Modular => Semantics::Modular,
            Class::Normal => Semantics::Normal,
            Class::Step => Semantics::Step,
            Class::Entropic => Semantics::Entropic,
            Class::Polymatroid => Semantics::Polymatroid,
            Class::Monotone => Semantics::Monotone,
            Class::Auto => Semantics::Auto,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Algorithm {
    Lp,
    Fixpoint,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Modular,
    Simple,
    Polymatroid,
    Step,
    Auto,
}

impl From<Method> for BoundMethod {
    fn from(m: Method) -> Self {
        match m {
            Method::Modular => BoundMethod::Modular,
            Method::Simple => BoundMethod::SimpleEntropic,
            Method::Polymatroid => BoundMethod::Polymatroid,
            Method::Step => BoundMethod::Step,
            Method::Auto => BoundMethod::Auto,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    /// Monotone 3-SAT clause list.
    Monsat,
    /// Graph edge list.
    Coloring,
    /// Whitespace-separated positive integers.
    Partition,
}

#[derive(Subcommand)]
enum Command {
    /// Decide an inequality over a class of functions.
    /// Exit status: 0 valid, 1 invalid, 2 error.
    Check {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        class: Class,
        /// Monotone checker to use.
        #[arg(long, value_enum, default_value = "lp")]
        algorithm: Algorithm,
        /// Print the axiom decomposition of a valid inequality.
        #[arg(long)]
        certificate: bool,
        /// Print the value table of a refuting function.
        #[arg(long)]
        witness: bool,
        #[arg(long)]
        json: bool,
    },
    /// Log-space output-size bound for a constraint file.
    Bound {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        method: Method,
        #[arg(long)]
        json: bool,
    },
    /// Translate a problem instance into an inequality file.
    Reduce {
        #[arg(value_enum)]
        kind: Kind,
        file: PathBuf,
        /// Write here instead of standard output.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Evaluate an inequality (left minus right side) on a function table,
    /// or on the entropy of a distribution given as CSV with a `prob` column.
    Eval {
        inequality: PathBuf,
        function: PathBuf,
    },
    /// Maximum degree `deg(V | U)` in a relation CSV; the relation takes the
    /// file stem as its name.
    Degscan {
        csv: PathBuf,
        /// `V|U`, e.g. `B|A` or `B,C|A`; `V` alone gives the projection size.
        conditional: String,
    },
}

#[derive(Debug)]
enum CliError {
    Io(PathBuf, std::io::Error),
    Core(Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Io(p, e) => write!(f, "{}: {e}", p.display()),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

/// Moves `expr` onto `target`, matching variables by name.
fn relabel(expr: &InequalityExpr, target: &VariableUniverse) -> Result<InequalityExpr, Error> {
    let source = expr.universe();
    let mut out = InequalityExpr::zero(target);
    for (set, c) in expr.terms() {
        let names: Vec<&str> = set.iter().map(|i| source.name(i)).collect();
        let mapped = target.set(&names).map_err(|_| {
            let missing = names.iter().find(|n| target.index_of(n).is_none());
            Error::UnknownIdentifier(missing.map(|n| n.to_string()).unwrap_or_default())
        })?;
        out.add_term(mapped, c.clone())?;
    }
    Ok(out)
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Check {
            file,
            class,
            algorithm,
            certificate,
            witness,
            json,
        } => {
            let expr = parse_inequality(&read(&file)?)?;
            let semantics = Semantics::from(class);
            let report = match (semantics, algorithm) {
                (Semantics::Monotone, Algorithm::Fixpoint) => {
                    check_monotone_fixpoint_report(&expr)?
                }
                _ => check(&expr, semantics)?,
            };
            if json {
                println!("{}", render::check_json(&file, semantics, &expr, &report));
            } else {
                print!(
                    "{}",
                    render::check_text(&expr, &report, certificate, witness)
                );
            }
            Ok(if report.verdict.is_valid() { 0 } else { 1 })
        }
        Command::Bound { file, method, json } => {
            let (query, sigma) = parse_constraints(&read(&file)?)?;
            let conds = sigma.conditionals();
            let mut warning = None;
            if matches!(method, Method::Auto) && !is_simple(&conds) && !is_acyclic(&conds) {
                warning = Some(format!(
                    "constraints are neither simple nor acyclic; solving the polymatroid \
                     program over {} variables (exponential in the number of variables)",
                    query.universe().len()
                ));
            }
            let result = logbound(&query, &sigma, method.into())?;
            if json {
                println!(
                    "{}",
                    render::bound_json(&file, &query, &sigma, &result, warning.as_deref())
                );
            } else {
                if let Some(w) = &warning {
                    eprintln!("warning: {w}");
                }
                print!("{}", render::bound_text(&query, &sigma, &result));
            }
            Ok(0)
        }
        Command::Reduce { kind, file, output } => {
            let text = read(&file)?;
            let expr = match kind {
                Kind::Monsat => from_3dmonsat(&parse_monsat(&text)?)?,
                Kind::Coloring => from_3coloring(&parse_graph(&text)?)?,
                Kind::Partition => from_partition(&parse_partition(&text)?)?,
            };
            let out = print_inequality(&expr);
            match output {
                Some(p) => fs::write(&p, out).map_err(|e| CliError::Io(p, e))?,
                None => print!("{out}"),
            }
            Ok(0)
        }
        Command::Eval {
            inequality,
            function,
        } => {
            let expr = parse_inequality(&read(&inequality)?)?;
            let text = read(&function)?;
            let is_csv = function
                .extension()
                .is_some_and(|e| e.eq_ignore_ascii_case("csv"));
            if is_csv {
                let h = entropic_from_distribution(&parse_distribution_csv(&text)?)?;
                let value = h.evaluate(&relabel(&expr, h.universe())?)?;
                println!("{value:?}");
            } else {
                let h = parse_function_table(&text)?;
                let value = relabel(&expr, h.universe())?.evaluate(&h)?;
                println!("{}", format_rational(&value));
            }
            Ok(0)
        }
        Command::Degscan { csv, conditional } => {
            let name = csv
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "R".into());
            let relation = parse_relation_csv(&name, &read(&csv)?)?;
            let (target, given) = parse_conditional_names(&conditional)?;
            println!("{}", degree_scan(&relation, &target, &given)?);
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
