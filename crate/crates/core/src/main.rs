use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use heegaard::analysis::{analyze, Limits};
use heegaard::bigraph::DEFAULT_EDGE_LIMIT;
use heegaard::classify::{self, ClassifyError, SearchReport};
use heegaard::diagram::{DiagramError, HeegaardDiagram};
use heegaard::intmat::DEFAULT_PERMANENT_LIMIT;
use heegaard::template::{template_diagram, template_report, TemplateError, TemplateParams};

const EDGE_LIMIT_VAR: &str = "HEEGAARD_MAX_EDGES";

/// Analyze Heegaard diagrams, build template diagrams and run the
/// classification searches.
#[derive(Parser)]
#[command(name = "heegaard", version)]
struct Cli {
    /// Print machine-readable JSON instead of a table.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for the parallel searches.
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,
    /// Largest matrix size whose permanent is computed.
    #[arg(long, global = true, value_name = "SIZE", default_value_t = DEFAULT_PERMANENT_LIMIT)]
    limit: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report the invariants of a diagram file.
    Analyze {
        path: PathBuf,
        /// Also write the intersection graph in DOT format.
        #[arg(long, value_name = "PATH")]
        dot: Option<PathBuf>,
    },
    /// Build the genus-2 diagram H(a1, a2, a3, a4) from four slopes p/q.
    Template {
        #[arg(num_args = 4, value_names = ["A1", "A2", "A3", "A4"], allow_negative_numbers = true)]
        slopes: Vec<String>,
        /// Write the diagram file here.
        #[arg(long, value_name = "PATH")]
        emit: Option<PathBuf>,
    },
    /// Run one of the exhaustive searches.
    Classify {
        #[command(subcommand)]
        search: Search,
    },
}

#[derive(Subcommand)]
enum Search {
    /// The three genus-3 permanents and the domination sweep.
    Genus3,
    /// 2x2 matrices with entries in 4Z and |det| = 16.
    Borromean {
        #[arg(long, default_value_t = 16)]
        bound: i64,
    },
    /// Pólya matrices without a zero entry.
    PolyaZero {
        #[arg(long, default_value_t = 3)]
        g: usize,
        #[arg(long, default_value_t = 3)]
        bound: i64,
    },
    /// Fewest perfect matchings of a cubic bipartite multigraph.
    CubicMin {
        #[arg(long)]
        g: usize,
    },
    /// Vertex and edge bounds for graphs with at most d matchings.
    Bounds {
        #[arg(long)]
        d: u64,
    },
    /// Matching counts of every 1-extendible graph within the bounds for d.
    MatchingBound {
        #[arg(long, default_value_t = 8)]
        d: u64,
    },
    /// The genus-4 and genus-5 structural checks.
    Genus45,
    /// Split a diagram with upper-triangular matrix into genus-1 pieces.
    UpperTriangular { path: PathBuf },
}

/// A failure with its exit status: 2 input, 3 validation, 4 resource limit.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }
    fn validation(message: impl Into<String>) -> Self {
        Failure { code: 3, message: message.into() }
    }
    fn resource(message: impl Into<String>) -> Self {
        Failure { code: 4, message: message.into() }
    }
}

impl From<DiagramError> for Failure {
    fn from(e: DiagramError) -> Self {
        match e {
            DiagramError::ParseError(_) => Failure::input(e.to_string()),
            _ => Failure::validation(e.to_string()),
        }
    }
}

impl From<TemplateError> for Failure {
    fn from(e: TemplateError) -> Self {
        match e {
            TemplateError::SlopeParse(_) => Failure::input(e.to_string()),
            _ => Failure::validation(e.to_string()),
        }
    }
}

impl From<ClassifyError> for Failure {
    fn from(e: ClassifyError) -> Self {
        match e {
            ClassifyError::SizeLimitExceeded { .. } => Failure::resource(e.to_string()),
            _ => Failure::input(e.to_string()),
        }
    }
}

fn edge_limit() -> Result<usize, Failure> {
    match std::env::var(EDGE_LIMIT_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::input(format!("{EDGE_LIMIT_VAR} must be a non-negative integer, got {v:?}"))),
        Err(_) => Ok(DEFAULT_EDGE_LIMIT),
    }
}

fn read_diagram(path: &Path) -> Result<HeegaardDiagram, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
    Ok(HeegaardDiagram::from_json(&text)?)
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display())))
}

fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("reports serialize"));
}

fn print_search(r: &SearchReport, json: bool) {
    if json {
        print_json(r);
        return;
    }
    println!("search     {}", r.search);
    println!("examined   {}", r.examined_count);
    println!("verdict    {}", if r.verdict { "holds" } else { "fails" });
    for (k, v) in &r.findings {
        println!("{k:<10} {v}");
    }
    println!("witnesses  {}", r.witnesses.len());
    for w in r.witnesses.iter().take(8) {
        println!("  {w:?}");
    }
    println!("{}", r.summary);
}

fn homology(invariants: &[num_bigint::BigInt]) -> String {
    let parts: Vec<String> = invariants
        .iter()
        .filter(|x| **x != 1.into())
        .map(|x| if *x == 0.into() { "Z".to_string() } else { format!("Z/{x}") })
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::input(format!("cannot start {n} threads: {e}")))?;
    }
    let limits = Limits {
        permanent: cli.limit,
        edges: edge_limit()?,
    };
    match cli.command {
        Command::Analyze { path, dot } => {
            let h = read_diagram(&path)?;
            let report = analyze(&h, limits).map_err(|e| Failure::resource(e.to_string()))?;
            if let Some(dot) = dot {
                write_file(&dot, &h.intersection_graph().to_dot())?;
            }
            if cli.json {
                print_json(&report);
            } else {
                print!("{}", report.to_table());
            }
        }
        Command::Template { slopes, emit } => {
            let refs: Vec<&str> = slopes.iter().map(String::as_str).collect();
            let t = TemplateParams::parse(&refs)?;
            let report = template_report(&t)?;
            if let Some(emit) = emit {
                write_file(&emit, &template_diagram(&t)?.to_json())?;
            }
            if cli.json {
                print_json(&report);
            } else {
                println!("matrix       {:?}", report.matrix);
                println!("det          {}", report.det);
                println!("generators   {}", report.generator_count);
                println!("strong       {}", report.strong);
                println!("alternating  {}", report.alternating);
                println!("homology     {}", homology(&report.homology_invariants));
                match &report.reducible_witness {
                    Some(w) => println!("reducible    split at alpha {w:?}; connected sum of lens spaces"),
                    None => println!("reducible    no"),
                }
            }
        }
        Command::Classify { search } => {
            let report = match search {
                Search::Genus3 => classify::verify_genus3_case(),
                Search::Borromean { bound } => classify::borromean_search(bound)?,
                Search::PolyaZero { g, bound } => classify::polya_zero_search(g, bound)?,
                Search::CubicMin { g } => classify::cubic_min_search(g)?,
                Search::Bounds { d } => {
                    let (n_max, m_max) = classify::finiteness_bounds(d)?;
                    if cli.json {
                        print_json(&json!({ "d": d, "n_max": n_max, "m_max": m_max }));
                    } else {
                        println!("d = {d}: at most {n_max} vertices and {m_max} edges");
                    }
                    return Ok(());
                }
                Search::MatchingBound { d } => classify::matching_bound_search(d)?,
                Search::Genus45 => classify::genus45_structural_check(),
                Search::UpperTriangular { path } => {
                    let h = read_diagram(&path)?;
                    classify::upper_triangular_reduction_check(&h.intersection_graph())?
                }
            };
            print_search(&report, cli.json);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
