use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hgd_core::augment::{solve_ghd, GhdMode, GhdOptions};
use hgd_core::decomp::validate;
use hgd_core::fhd::{solve_fhd, CChoice, FhdOptions};
use hgd_core::hardness::{self, parse_assignment, reduce_3sat, witness_ghd, CnfFormula};
use hgd_core::hd::solve_hd;
use hgd_core::properties::{self, AnalyzeOptions};
use hgd_core::{approx, io, rational, DecompKind, DecompositionTree, Error, Hypergraph, Rational};

const ACCEPT: u8 = 0;
const REJECT: u8 = 1;
const INPUT: u8 = 2;
const BUDGET: u8 = 3;

#[derive(Parser)]
#[command(name = "hgd", version, about = "Hypertree, generalized and fractional hypertree decompositions")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Hd,
    Ghd,
    Fhd,
}

impl From<Kind> for DecompKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Hd => DecompKind::Hd,
            Kind::Ghd => DecompKind::Ghd,
            Kind::Fhd => DecompKind::Fhd,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Bagwise,
    Degree,
}

#[derive(Subcommand)]
enum Command {
    /// Structural properties of hypergraph files, one CSV row per file.
    Analyze {
        /// Values of c for the c-multi-intersection width.
        #[arg(long = "c", value_delimiter = ',', default_value = "3,4")]
        cs: Vec<usize>,
        /// Per-file CSV rows (the default output).
        #[arg(long)]
        csv: bool,
        /// Print the bucket histogram instead of per-file rows.
        #[arg(long)]
        summary: bool,
        #[arg(long, env = "HGD_VC_CAP", default_value_t = properties::DEFAULT_VC_CAP)]
        vc_cap: usize,
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Decide width <= k and print a witness decomposition.
    Solve {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(short, value_parser = parse_rational)]
        k: Rational,
        /// Subedge rule for GHDs: `bip` or `bmip:C`.
        #[arg(long, default_value = "bip", value_parser = parse_mode)]
        mode: GhdMode,
        /// Intersection bound assumed by the caller; a reject above it is flagged.
        #[arg(long)]
        assume_bound: Option<usize>,
        /// Fractional-part bound for FHDs: a number or `auto`.
        #[arg(long = "c", default_value = "auto", value_parser = parse_c)]
        c: CChoice,
        #[arg(long)]
        rank_mode: bool,
        /// Restrict non-integral bag vertices to the component being decomposed.
        #[arg(long)]
        strict: bool,
        #[arg(long, env = "HGD_BUDGET_SUBEDGES")]
        budget: Option<usize>,
        /// Write the decomposition here instead of stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
        file: PathBuf,
    },
    /// Check a decomposition file against a hypergraph.
    Validate {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(short, value_parser = parse_rational)]
        k: Rational,
        hypergraph: PathBuf,
        decomposition: PathBuf,
    },
    /// Build the width-2 reduction hypergraph of a 3CNF formula.
    #[command(name = "gen-3sat")]
    Gen3sat {
        #[arg(long, conflicts_with = "formula", required_unless_present = "formula")]
        dimacs: Option<PathBuf>,
        /// Formula such as "(x1 | !x2 | x3) & (!x1 | x2 | !x3)".
        #[arg(long)]
        formula: Option<String>,
        /// Truth values, e.g. `TFF` or `x1=1,x2=0,x3=0`.
        #[arg(long)]
        assignment: Option<String>,
        /// Also write the width-2 GHD for the assignment (or a found model).
        #[arg(long)]
        emit_witness: bool,
        /// Write PREFIX.hg, PREFIX.layout and PREFIX.hgd instead of printing.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print the three-clique gadget over M1 and M2.
    #[command(name = "gen-gadget")]
    GenGadget {
        #[arg(long, value_delimiter = ',')]
        m1: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        m2: Vec<String>,
    },
    /// Raise the width by l (q = 0) or by l/q.
    Pad {
        #[arg(long)]
        l: usize,
        #[arg(long, default_value_t = 0)]
        q: usize,
        file: PathBuf,
    },
    /// Turn an FHD into a GHD.
    Approx {
        #[arg(long, value_enum)]
        method: Method,
        hypergraph: PathBuf,
        fhd: PathBuf,
    },
    /// Report the quantities behind the FHD-to-GHD bounds.
    Bounds {
        #[arg(short, value_parser = parse_rational)]
        k: Rational,
        #[arg(long)]
        csv: bool,
        #[arg(long, env = "HGD_VC_CAP", default_value_t = properties::DEFAULT_VC_CAP)]
        vc_cap: usize,
        file: PathBuf,
    },
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    rational::parse(s).map_err(|e| e.to_string())
}

fn parse_mode(s: &str) -> Result<GhdMode, String> {
    match s.split_once(':') {
        None if s == "bip" => Ok(GhdMode::Bip),
        Some(("bmip", c)) => c
            .parse()
            .ok()
            .filter(|&c| c >= 2)
            .map(|c| GhdMode::Bmip { c })
            .ok_or_else(|| format!("bad BMIP arity {c:?} (need an integer >= 2)")),
        _ => Err(format!("expected bip or bmip:C, got {s:?}")),
    }
}

fn parse_c(s: &str) -> Result<CChoice, String> {
    if s == "auto" {
        return Ok(CChoice::Auto);
    }
    s.parse().map(CChoice::Explicit).map_err(|_| format!("expected a number or auto, got {s:?}"))
}

/// A failed command: exit code and message.
struct Fail(u8, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Budget(_) | Error::TooManyVertices { .. } => BUDGET,
            _ => INPUT,
        };
        Fail(code, e.to_string())
    }
}

type Run = Result<u8, Fail>;

fn read(path: &Path) -> Result<String, Fail> {
    fs::read_to_string(path).map_err(|e| Fail(INPUT, format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Hypergraph, Fail> {
    let h = io::parse_hypergraph(&read(path)?).map_err(|e| Fail(INPUT, format!("{}: {e}", path.display())))?;
    let odd = io::non_ascii_identifiers(&h);
    if !odd.is_empty() {
        eprintln!("warning: non-ASCII identifiers: {}", odd.join(", "));
    }
    Ok(h)
}

fn load_decomposition(h: &Hypergraph, path: &Path) -> Result<DecompositionTree, Fail> {
    let parsed = io::parse_decomposition(h, &read(path)?).map_err(|e| Fail(INPUT, format!("{}: {e}", path.display())))?;
    for w in &parsed.warnings {
        eprintln!("warning: {w}");
    }
    Ok(parsed.tree)
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), Fail> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Fail(INPUT, format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            std::io::stdout().flush().map_err(|e| Fail(INPUT, e.to_string()))
        }
    }
}

fn integral_k(k: &Rational, kind: &str) -> Result<usize, Fail> {
    if !k.is_integer() || *k < rational::one() {
        return Err(Fail(INPUT, format!("{kind} width must be a positive integer, got {}", rational::display(k))));
    }
    Ok(rational::floor_usize(k))
}

fn solve(cmd: Command) -> Run {
    let Command::Solve {
        kind,
        k,
        mode,
        assume_bound,
        c,
        rank_mode,
        strict,
        budget,
        output,
        file,
    } = cmd
    else {
        unreachable!()
    };
    let h = load(&file)?;
    let d = match kind {
        Kind::Hd => solve_hd(&h, integral_k(&k, "HD")?)?,
        Kind::Ghd => {
            let opts = GhdOptions {
                budget,
                arity: None,
                assumed_bound: assume_bound,
            };
            let out = solve_ghd(&h, integral_k(&k, "GHD")?, mode, &opts)?;
            eprintln!("subedges: {}, measured intersection width: {}", out.subedges, out.measured);
            if out.unsound_if {
                eprintln!(
                    "warning: UNSOUND-IF reject: measured width {} exceeds the assumed bound {}",
                    out.measured,
                    assume_bound.unwrap_or_default()
                );
            }
            out.decomposition
        }
        Kind::Fhd => {
            let opts = FhdOptions {
                c,
                rank_mode,
                strict,
                budget,
            };
            let out = solve_fhd(&h, &k, &opts)?;
            eprintln!(
                "c: {}, iwidth: {}, degree: {}, rank: {}, subproblems: {}",
                out.c, out.iwidth, out.degree, out.rank, out.stats.subproblems
            );
            out.decomposition
        }
    };
    match d {
        Some(d) => {
            write_out(output.as_deref(), &io::write_decomposition(&h, &d))?;
            eprintln!("accept: width {}", rational::display(&d.width()));
            Ok(ACCEPT)
        }
        None => {
            eprintln!("reject: no {} of width <= {}", DecompKind::from(kind), rational::display(&k));
            Ok(REJECT)
        }
    }
}

fn run(cmd: Command) -> Run {
    match cmd {
        Command::Analyze {
            cs,
            csv: _,
            summary,
            vc_cap,
            files,
        } => {
            let opts = AnalyzeOptions {
                miwidth_cs: cs,
                vc_cap,
                ..Default::default()
            };
            let report = properties::analyze_corpus(&files, &opts);
            for (name, err) in &report.errors {
                eprintln!("error: {name}: {err}");
            }
            if report.rows.is_empty() {
                return Err(Fail(INPUT, "no hypergraph could be read".into()));
            }
            if summary {
                print!("{}", report.table());
            } else {
                print!("{}", report.csv());
            }
            Ok(if report.errors.is_empty() { ACCEPT } else { INPUT })
        }
        cmd @ Command::Solve { .. } => solve(cmd),
        Command::Validate {
            kind,
            k,
            hypergraph,
            decomposition,
        } => {
            let h = load(&hypergraph)?;
            let d = load_decomposition(&h, &decomposition)?.with_kind(kind.into());
            let violations = validate(&h, &d, &k)?;
            if violations.is_empty() {
                println!("valid {} of width {}", d.kind, rational::display(&d.width()));
                Ok(ACCEPT)
            } else {
                for v in &violations {
                    println!("violation: {}", v.describe(&h));
                }
                Ok(REJECT)
            }
        }
        Command::Gen3sat {
            dimacs,
            formula,
            assignment,
            emit_witness,
            output,
        } => {
            let phi = match (dimacs, formula) {
                (Some(p), _) => CnfFormula::parse_dimacs(&read(&p)?)?,
                (None, Some(f)) => CnfFormula::parse(&f)?,
                (None, None) => unreachable!("clap requires one source"),
            };
            let (h, lay) = reduce_3sat(&phi)?;
            let sigma = match &assignment {
                Some(s) => Some(parse_assignment(s, phi.vars)?),
                None if emit_witness => Some(
                    (phi.vars <= 24)
                        .then(|| phi.find_model())
                        .flatten()
                        .ok_or_else(|| Fail(INPUT, "no assignment given and no model found".into()))?,
                ),
                None => None,
            };
            let witness = match &sigma {
                Some(s) => Some(witness_ghd(&h, &lay, s)?),
                None => None,
            };
            eprintln!(
                "vertices: {}, edges: {}, status: {}",
                h.num_vertices(),
                h.num_edges(),
                lay.status()
            );
            match output {
                Some(prefix) => {
                    let with = |ext: &str| PathBuf::from(format!("{}.{ext}", prefix.display()));
                    write_out(Some(&with("hg")), &io::write_hypergraph(&h))?;
                    write_out(Some(&with("layout")), &lay.to_text())?;
                    if let Some(d) = &witness {
                        if emit_witness {
                            write_out(Some(&with("hgd")), &io::write_decomposition(&h, d))?;
                        }
                    }
                }
                None => {
                    write_out(None, &io::write_hypergraph(&h))?;
                    if let (Some(d), true) = (&witness, emit_witness) {
                        write_out(None, &io::write_decomposition(&h, d))?;
                    }
                }
            }
            Ok(ACCEPT)
        }
        Command::GenGadget { m1, m2 } => {
            let h = hardness::gadget_h0(&m1, &m2)?;
            write_out(None, &io::write_hypergraph(&h))?;
            Ok(ACCEPT)
        }
        Command::Pad { l, q, file } => {
            let h = load(&file)?;
            write_out(None, &io::write_hypergraph(&hardness::pad_width(&h, l, q)?))?;
            Ok(ACCEPT)
        }
        Command::Approx { method, hypergraph, fhd } => {
            let h = load(&hypergraph)?;
            let f = load_decomposition(&h, &fhd)?;
            let g = match method {
                Method::Bagwise => approx::fhd_to_ghd_bagwise(&h, &f)?,
                Method::Degree => approx::fhd_to_ghd_degree(&h, &f)?,
            };
            write_out(None, &io::write_decomposition(&h, &g))?;
            eprintln!(
                "FHD width {} -> GHD width {}",
                rational::display(&f.width()),
                rational::display(&g.width())
            );
            Ok(ACCEPT)
        }
        Command::Bounds { k, csv, vc_cap, file } => {
            let h = load(&file)?;
            let r = approx::bound_report(&h, &k, vc_cap)?;
            if csv {
                println!("{}", approx::BoundReport::CSV_HEADER);
                println!("{}", r.csv_row());
            } else {
                print!("{}", r.to_text());
            }
            Ok(ACCEPT)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { INPUT } else { ACCEPT });
        }
    };
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("warning: --jobs ignored: {e}");
        }
    }
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(Fail(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
