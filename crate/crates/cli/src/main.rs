//! `ordfix`: analyze finite posets, run verification suites, generate
//! examples and emit Hasse diagrams.
//!
//! Exit codes: 0 success, 1 failures found, 2 budget exceeded, 3 input error.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use ordfix::analyze::analyze;
use ordfix::convex::bidom_leq;
use ordfix::dot::{Target, emit_dot};
use ordfix::selection::{SelectionMap, verify_selection};
use ordfix::suite::{SUITES, SuiteParams, run_suite};
use ordfix::text::{Document, format_set, parse, write_poset};
use ordfix::zoo::{KEYS, generate};
use ordfix::{Budget, CanonicalForm, Error, Poset, subset};

const EXIT_FAILURES: u8 = 1;
const EXIT_BUDGET: u8 = 2;
const EXIT_INPUT: u8 = 3;

const OPEN_PROBLEMS: &str = "\
Two questions about convex sublattice fixed points remain open for infinite
lattices. Neither can be settled by a search over finite lattices.

1. Is the fixed point property for maps into convex sublattices preserved
   under finite products?
   Every finite lattice already has this property: choosing the least
   element of each convex sublattice is an order-preserving selection, and
   composing it with a multivalued map gives a single-valued one whose
   Tarski fixed point lies in its own image set. Products of finite lattices
   are finite lattices, so no finite counterexample exists. Run
   `ordfix verify clfpp-finite` to check the finite statement.

2. Is every quotient of a lattice with that property a retract of it? Is
   every quotient of a lattice whose convex sublattices form a complete
   lattice a retract of it?
   For finite lattices both hypotheses always hold, and every congruence
   quotient is a retract through an explicit coretraction built from a
   selection. Run `ordfix verify quotient-retract` to check this. A
   counterexample would have to be infinite.
";

#[derive(Parser)]
#[command(name = "ordfix", version, about = "Fixed point and selection properties of finite posets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report order, fixed point and selection properties of a poset.
    Analyze {
        /// Poset file in the text format.
        #[arg(required_unless_present = "canonical")]
        file: Option<PathBuf>,
        /// Analyze the poset with this canonical form (hex) instead.
        #[arg(long, conflicts_with = "file")]
        canonical: Option<String>,
        /// Skip shortcut criteria and decide by exhaustive search.
        #[arg(long)]
        no_fast_path: bool,
    },
    /// Check a property family on every poset or lattice up to a size.
    Verify {
        suite: String,
        #[arg(long)]
        max_n: usize,
        /// Boolean rank used by the embedding suites.
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long)]
        no_fast_path: bool,
    },
    /// Write a named example in the text format.
    Zoo {
        key: String,
        params: Vec<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit a Hasse diagram in Graphviz dot syntax.
    Dot {
        file: PathBuf,
        #[arg(long, value_enum)]
        target: DotTarget,
    },
    /// Print background notes.
    Note { topic: NoteTopic },
}

#[derive(Clone, Copy, ValueEnum)]
enum DotTarget {
    #[value(name = "P")]
    P,
    #[value(name = "CP")]
    Cp,
    #[value(name = "CL")]
    Cl,
}

#[derive(Clone, Copy, ValueEnum)]
enum NoteTopic {
    OpenProblems,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_INPUT) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::BudgetExceeded { .. } => EXIT_BUDGET,
                _ => EXIT_INPUT,
            })
        }
    }
}

fn read_document(path: &PathBuf) -> ordfix::Result<Document> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Parse { line: 0, msg: format!("cannot read {}: {e}", path.display()) })?;
    parse(&text)
}

fn run(command: Command) -> ordfix::Result<u8> {
    let budget = Budget::from_env();
    match command {
        Command::Analyze { file, canonical, no_fast_path } => {
            let doc = match (file, canonical) {
                (Some(path), _) => read_document(&path)?,
                (None, Some(hex)) => {
                    let poset = Poset::from_canonical(&CanonicalForm::from_hex(&hex)?)?;
                    let labels = (0..poset.len()).map(|i| i.to_string()).collect();
                    Document { poset, labels, sets: Vec::new(), selection: Vec::new(), map: Vec::new() }
                }
                (None, None) => unreachable!("clap requires one input"),
            };
            let report = analyze(&doc.poset, &doc.labels, &budget, no_fast_path)?;
            print!("{report}");
            for line in attachments(&doc) {
                println!("{line}");
            }
            Ok(if report.budget_exceeded { EXIT_BUDGET } else { 0 })
        }
        Command::Verify { suite, max_n, k, no_fast_path } => {
            if !SUITES.contains(&suite.as_str()) {
                return Err(Error::UnknownSuite(format!("{suite} (known: {})", SUITES.join(", "))));
            }
            let params = SuiteParams { max_n, k, no_fast_path, budget };
            let report = run_suite(&suite, &params)?;
            println!(
                "suite {}: {} instances, {} failures ({:.2} s)",
                report.suite,
                report.instances,
                report.failures.len(),
                report.elapsed_secs
            );
            for f in &report.failures {
                println!("FAIL {} {}: {}", f.instance, f.property, f.witness);
            }
            Ok(if report.passed() { 0 } else { EXIT_FAILURES })
        }
        Command::Zoo { key, params, out } => {
            if !KEYS.contains(&key.as_str()) {
                return Err(Error::UnknownKey(format!("{key} (known: {})", KEYS.join(", "))));
            }
            let ex = generate(&key, &params)?;
            let text = write_poset(&ex.poset, &ex.labels);
            match out {
                Some(path) => fs::write(&path, text)
                    .map_err(|e| Error::Parse { line: 0, msg: format!("cannot write {}: {e}", path.display()) })?,
                None => print!("{text}"),
            }
            Ok(0)
        }
        Command::Dot { file, target } => {
            let doc = read_document(&file)?;
            let target = match target {
                DotTarget::P => Target::P,
                DotTarget::Cp => Target::CP,
                DotTarget::Cl => Target::CL,
            };
            print!("{}", emit_dot(&doc.poset, &doc.labels, target, &budget)?);
            Ok(0)
        }
        Command::Note { topic: NoteTopic::OpenProblems } => {
            print!("{OPEN_PROBLEMS}");
            Ok(0)
        }
    }
}

/// Checks the selection and multivalued map attached to a document, if any.
fn attachments(doc: &Document) -> Vec<String> {
    let p = &doc.poset;
    let labels = &doc.labels;
    let mut out = Vec::new();
    if !doc.selection.is_empty() {
        let m = SelectionMap {
            sets: doc.selection.iter().map(|&(id, _)| doc.sets[id]).collect(),
            values: doc.selection.iter().map(|&(_, x)| x).collect(),
        };
        out.push(match verify_selection(p, &m) {
            Ok(()) => "selection: valid".to_string(),
            Err(v) => format!("selection: invalid ({v})"),
        });
    }
    if !doc.map.is_empty() {
        let mut f = vec![0; p.len()];
        for &(x, s) in &doc.map {
            f[x] = s;
        }
        let line = if let Some(x) = (0..p.len()).find(|&x| f[x] == 0) {
            format!("map: invalid (no value at {})", labels[x])
        } else if let Some((x, y)) =
            (0..p.len()).flat_map(|x| p.up_row(x).ones().map(move |y| (x, y))).find(|&(x, y)| !bidom_leq(p, f[x], f[y]))
        {
            format!("map: invalid (not order preserving at {} <= {})", labels[x], labels[y])
        } else {
            let fixed: Vec<&str> = (0..p.len()).filter(|&x| subset::contains(f[x], x)).map(|x| labels[x].as_str()).collect();
            if fixed.is_empty() {
                let images: Vec<String> = (0..p.len()).map(|x| format!("{}->{}", labels[x], format_set(f[x], labels))).collect();
                format!("map: order preserving, fixed-point-free ({})", images.join(" "))
            } else {
                format!("map: order preserving, fixed points {{{}}}", fixed.join(","))
            }
        };
        out.push(line);
    }
    out
}
