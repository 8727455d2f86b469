use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use okh::algebra::Ring;
use okh::bracket::{bracket_state_sum, jones_via_kauffman};
use okh::complex::{r1_chain_maps, ChainComplex, Fault};
use okh::corpus::{self, CorpusEntry};
use okh::diagram::{parse_pd, random_moves, DiagramError, DiagramJson, LinkDiagram, Move, R1Side};
use okh::homology::{homology, lee_canonical_classes, lee_homology, spectral_report, Homology};
use okh::Sign;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const EXIT_IO: u8 = 1;
const EXIT_PARSE: u8 = 3;
const EXIT_INVALID: u8 = 4;
const EXIT_VERIFY: u8 = 5;

#[derive(Parser)]
#[command(name = "okh", version, about = "Oriented Khovanov homology of link diagrams")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Print the bracket polynomial.
    Jones {
        #[command(flatten)]
        input: Input,
        /// Also evaluate the Kauffman bracket oracle and compare.
        #[arg(long)]
        oracle: bool,
    },
    /// Print bigraded homology.
    Homology {
        #[command(flatten)]
        input: Input,
    },
    /// Print Lee homology over Z[1/2] and the canonical classes.
    Lee {
        #[command(flatten)]
        input: Input,
    },
    /// Run the verification suite on a corpus or diagram.
    Verify {
        #[command(flatten)]
        input: Input,
        /// Random Reidemeister moves applied per diagram.
        #[arg(long, default_value_t = 10)]
        moves: usize,
        #[arg(long, default_value_t = corpus::DEFAULT_SEED)]
        seed: u64,
        /// Corrupt the differential on purpose (negative control).
        #[arg(long, value_enum, hide = true)]
        fault: Option<FaultArg>,
    },
    /// Print the chain complex.
    DumpComplex {
        #[command(flatten)]
        input: Input,
    },
}

#[derive(Args)]
struct Input {
    /// Inline PD code, e.g. "X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]".
    #[arg(long, conflicts_with = "file")]
    pd: Option<String>,
    /// File with PD codes (one per line), a diagram JSON object or a corpus array.
    #[arg(long)]
    file: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = RingArg::Graded)]
    ring: RingArg,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum RingArg {
    Graded,
    Lee,
}

impl From<RingArg> for Ring {
    fn from(r: RingArg) -> Ring {
        match r {
            RingArg::Graded => Ring::Graded,
            RingArg::Lee => Ring::Lee,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Structured,
    Poincare,
}

#[derive(Clone, Copy, ValueEnum)]
enum FaultArg {
    DropTwistSigns,
}

#[derive(Debug)]
enum Failure {
    Io(String),
    Parse(String),
    Invalid(String),
    Verify(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Io(_) => EXIT_IO,
            Failure::Parse(_) => EXIT_PARSE,
            Failure::Invalid(_) => EXIT_INVALID,
            Failure::Verify(_) => EXIT_VERIFY,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Io(m) | Failure::Parse(m) | Failure::Invalid(m) | Failure::Verify(m) => m,
        }
    }
}

impl From<DiagramError> for Failure {
    fn from(e: DiagramError) -> Self {
        match e {
            DiagramError::Malformed { .. } | DiagramError::Json(_) => Failure::Parse(e.to_string()),
            _ => Failure::Invalid(e.to_string()),
        }
    }
}

struct Named {
    name: String,
    link: String,
    diagram: LinkDiagram,
}

fn read_input(input: &Input) -> Result<Vec<Named>, Failure> {
    let text = match (&input.pd, &input.file) {
        (Some(pd), _) => pd.clone(),
        (None, Some(path)) => std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?,
        (None, None) => return Err(Failure::Io("no input: pass --pd or --file".into())),
    };
    let trimmed = text.trim_start();
    if trimmed.starts_with('[') && !trimmed.starts_with("[X") {
        let entries = corpus::from_json(&text)?;
        return entries
            .into_iter()
            .map(|e| Ok(Named { diagram: e.diagram()?, name: e.name, link: e.link }))
            .collect();
    }
    if trimmed.starts_with('{') {
        let j = DiagramJson::parse(&text)?;
        let name = j.name.clone().unwrap_or_else(|| "diagram".into());
        return Ok(vec![Named { diagram: j.to_diagram()?, link: name.clone(), name }]);
    }
    let lines: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).collect();
    let lines = if lines.is_empty() { vec![""] } else { lines };
    lines
        .iter()
        .enumerate()
        .map(|(i, l)| {
            let name = if input.pd.is_some() { "diagram".to_string() } else { format!("line-{}", i + 1) };
            Ok(Named { diagram: parse_pd(l)?, link: name.clone(), name })
        })
        .collect()
}

fn emit(format: Format, many: bool, name: &str, table: String, poincare: String) {
    if many {
        println!("# {name}");
    }
    match format {
        Format::Poincare => println!("{poincare}"),
        _ => print!("{table}"),
    }
}

fn cmd_jones(input: &Input, oracle: bool) -> Result<(), Failure> {
    let ds = read_input(input)?;
    let mut out = Vec::new();
    let mut mismatch = false;
    for n in &ds {
        let b = bracket_state_sum(&n.diagram);
        let o = oracle.then(|| jones_via_kauffman(&n.diagram));
        mismatch |= o.as_ref().is_some_and(|o| *o != b);
        if input.format == Format::Structured {
            let mut v = json!({ "name": n.name, "bracket": b.to_string(), "terms": b.terms().collect::<Vec<_>>() });
            if let Some(o) = &o {
                v["oracle"] = json!(o.to_string());
                v["match"] = json!(*o == b);
            }
            out.push(v);
            continue;
        }
        let mut text = format!("{b}\n");
        if let Some(o) = &o {
            text.push_str(&format!("oracle: {o} ({})\n", if *o == b { "match" } else { "MISMATCH" }));
        }
        emit(input.format, ds.len() > 1, &n.name, text.clone(), text.trim_end().to_string());
    }
    if input.format == Format::Structured {
        println!("{}", serde_json::to_string_pretty(&Value::Array(out)).unwrap());
    }
    if mismatch {
        return Err(Failure::Verify("bracket differs from the Kauffman oracle".into()));
    }
    Ok(())
}

fn build_checked(d: &LinkDiagram, ring: Ring) -> Result<ChainComplex, Failure> {
    let k = ChainComplex::build(d, ring);
    let r = k.verify_d_squared(d);
    match r.failure {
        None => Ok(k),
        Some(f) => Err(Failure::Verify(format!(
            "d^2 != 0 at height {} from state {:#b} around crossings {:?} (entry {})",
            f.height, f.state, f.crossings, f.entry
        ))),
    }
}

fn homology_json(h: &Homology) -> Value {
    serde_json::to_value(h).unwrap()
}

fn cmd_homology(input: &Input) -> Result<(), Failure> {
    let ds = read_input(input)?;
    let ring: Ring = input.ring.into();
    let mut out = Vec::new();
    for n in &ds {
        let k = build_checked(&n.diagram, ring)?;
        let h = match ring {
            Ring::Graded => homology(&k),
            Ring::Lee => lee_homology(&k),
        }
        .map_err(|e| Failure::Verify(e.to_string()))?;
        let bracket = bracket_state_sum(&n.diagram);
        let euler = h.euler_characteristic();
        if input.format == Format::Structured {
            let mut v = json!({ "name": n.name, "homology": homology_json(&h), "total_rank": h.total_rank() });
            if ring == Ring::Graded {
                v["euler"] = json!(euler.to_string());
                v["bracket"] = json!(bracket.to_string());
            }
            out.push(v);
            continue;
        }
        let mut table = h.table();
        table.push_str(&format!("poincare: {}\n", h.poincare().replace('\n', "\n  ")));
        match ring {
            Ring::Graded => table.push_str(&format!(
                "euler: {euler} (bracket {bracket}, {})\n",
                if euler == bracket { "match" } else { "MISMATCH" }
            )),
            Ring::Lee => table.push_str(&format!("rank over Z[1/2]: {}\n", h.total_rank())),
        }
        emit(input.format, ds.len() > 1, &n.name, table, h.poincare());
    }
    if input.format == Format::Structured {
        println!("{}", serde_json::to_string_pretty(&Value::Array(out)).unwrap());
    }
    Ok(())
}

fn cmd_lee(input: &Input) -> Result<(), Failure> {
    let ds = read_input(input)?;
    let mut out = Vec::new();
    for n in &ds {
        let k = build_checked(&n.diagram, Ring::Lee)?;
        let h = lee_homology(&k).map_err(|e| Failure::Verify(e.to_string()))?;
        let classes = lee_canonical_classes(&n.diagram, &k).map_err(|e| Failure::Verify(e.to_string()))?;
        let kh = homology(&build_checked(&n.diagram, Ring::Graded)?).map_err(|e| Failure::Verify(e.to_string()))?;
        let ss = spectral_report(&kh, &h);
        if input.format == Format::Structured {
            out.push(json!({
                "name": n.name,
                "homology": homology_json(&h),
                "total_rank": h.total_rank(),
                "classes": classes,
                "spectral": ss,
            }));
            continue;
        }
        let mut table = h.table();
        table.push_str(&format!("rank over Z[1/2]: {}\n", h.total_rank()));
        for c in &classes.classes {
            let eps: Vec<&str> = c.epsilon.iter().map(|&e| if e > 0 { "+" } else { "-" }).collect();
            table.push_str(&format!(
                "class [{}] at height {}: {}\n",
                eps.join(""),
                c.height,
                if c.cycle { "cycle" } else { "NOT A CYCLE" }
            ));
        }
        table.push_str(&format!(
            "classes independent: {}, span over Z[1/2]: {}\n",
            classes.independent, classes.spans
        ));
        table.push_str(&format!(
            "E2 total {}, E_inf total {}, deficit {}\n",
            ss.e2_total, ss.e_inf_total, ss.deficit
        ));
        emit(input.format, ds.len() > 1, &n.name, table, h.poincare());
    }
    if input.format == Format::Structured {
        println!("{}", serde_json::to_string_pretty(&Value::Array(out)).unwrap());
    }
    Ok(())
}

fn cmd_dump(input: &Input) -> Result<(), Failure> {
    let ds = read_input(input)?;
    let ring: Ring = input.ring.into();
    let mut out = Vec::new();
    for n in &ds {
        let k = ChainComplex::build(&n.diagram, ring);
        if input.format == Format::Structured {
            let heights: Vec<Value> = k
                .heights()
                .map(|h| {
                    let d = k.differential(h).unwrap();
                    json!({
                        "height": h,
                        "summands": k.group(h).unwrap(),
                        "differential": { "rows": d.rows, "cols": d.cols, "entries": d.triplets().collect::<Vec<_>>() },
                    })
                })
                .collect();
            out.push(json!({ "name": n.name, "ring": ring, "heights": heights }));
            continue;
        }
        let mut text = String::new();
        for h in k.heights() {
            let d = k.differential(h).unwrap();
            text.push_str(&format!("height {h}: rank {}, d nonzeros {}\n", k.dim(h), d.nnz()));
            for sm in k.group(h).unwrap() {
                text.push_str(&format!(
                    "  state {:0width$b}  circles {}  q-shift {}  twist {:?}\n",
                    sm.state,
                    sm.circles,
                    sm.q_shift,
                    sm.twist_basis,
                    width = n.diagram.crossing_count().max(1)
                ));
            }
        }
        let poly = k.euler_characteristic().to_string();
        emit(input.format, ds.len() > 1, &n.name, text, poly);
    }
    if input.format == Format::Structured {
        println!("{}", serde_json::to_string_pretty(&Value::Array(out)).unwrap());
    }
    Ok(())
}

/// Checks on one diagram; returns the failed check names.
fn verify_one(n: &Named, moves: usize, seed: u64, fault: Fault) -> Vec<String> {
    let d = &n.diagram;
    let mut failed = Vec::new();
    let mut check = |name: &str, ok: bool| {
        if !ok {
            failed.push(name.to_string());
        }
    };
    let bracket = bracket_state_sum(d);
    check("bracket=oracle", bracket == jones_via_kauffman(d));
    let mut graded = None;
    for ring in [Ring::Graded, Ring::Lee] {
        let k = ChainComplex::build_with(d, ring, fault);
        let r = k.verify_d_squared(d);
        check(&format!("d^2=0 ({ring:?})"), r.ok);
        if !r.ok {
            continue;
        }
        match ring {
            Ring::Graded => {
                check("euler=bracket", k.euler_characteristic() == bracket);
                graded = homology(&k).ok();
                check("homology", graded.is_some());
            }
            Ring::Lee => {
                let ok = lee_homology(&k).is_ok_and(|h| h.total_rank() == 1 << d.component_count() && !h.has_torsion());
                check("lee rank", ok);
                if d.crossing_count() <= 8 {
                    let ok = lee_canonical_classes(d, &k).is_ok_and(|r| r.all_cycles && r.independent && r.spans);
                    check("lee classes", ok);
                }
            }
        }
    }
    if let Some(kh) = &graded {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cap = d.crossing_count().max(corpus::CAP - 2) + 2;
        let (moved, _) = random_moves(d, moves, cap, &mut rng);
        let same = homology(&ChainComplex::build(&moved, Ring::Graded)).is_ok_and(|h| h == *kh);
        check("reidemeister", same);
    }
    if d.crossing_count() < 9 {
        let arc = d.arcs().next().map(|(a, _)| a);
        for sign in [Sign::Positive, Sign::Negative] {
            let ok = Move::R1Add { arc, sign, side: R1Side::Left }
                .apply(d)
                .ok()
                .and_then(|c| r1_chain_maps(&c).ok())
                .is_some_and(|r| r.all());
            check(&format!("r1 ({sign:?})"), ok);
        }
    }
    failed
}

fn cmd_verify(input: &Input, moves: usize, seed: u64, fault: Option<FaultArg>) -> Result<(), Failure> {
    let ds = if input.pd.is_none() && input.file.is_none() {
        corpus::generate(corpus::DEFAULT_SEED)
            .into_iter()
            .map(|e: CorpusEntry| Ok(Named { diagram: e.diagram()?, name: e.name, link: e.link }))
            .collect::<Result<Vec<_>, Failure>>()?
    } else {
        read_input(input)?
    };
    let fault = match fault {
        Some(FaultArg::DropTwistSigns) => Fault::DropTwistSigns,
        None => Fault::None,
    };
    use rayon::prelude::*;
    let results: Vec<Vec<String>> = ds
        .par_iter()
        .enumerate()
        .map(|(i, n)| verify_one(n, moves, seed.wrapping_add(i as u64), fault))
        .collect();
    // diagrams presenting the same link must have equal homology
    let mut families: std::collections::BTreeMap<&str, Homology> = Default::default();
    let mut bad = 0;
    let mut report = Vec::new();
    for (n, mut failed) in ds.iter().zip(results) {
        if fault == Fault::None {
            if let Ok(h) = homology(&ChainComplex::build(&n.diagram, Ring::Graded)) {
                let prev = families.entry(n.link.as_str()).or_insert_with(|| h.clone());
                if *prev != h {
                    failed.push(format!("differs from {}", n.link));
                }
            }
        }
        bad += usize::from(!failed.is_empty());
        if input.format == Format::Structured {
            report.push(json!({ "name": n.name, "pass": failed.is_empty(), "failed": failed }));
        } else if failed.is_empty() {
            println!("PASS {}", n.name);
        } else {
            println!("FAIL {}: {}", n.name, failed.join(", "));
        }
    }
    if input.format == Format::Structured {
        println!("{}", serde_json::to_string_pretty(&Value::Array(report)).unwrap());
    } else {
        println!("{} of {} diagrams passed", ds.len() - bad, ds.len());
    }
    if bad > 0 {
        return Err(Failure::Verify(format!("{bad} diagram(s) failed verification")));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        // only fails if a pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(j).build_global();
    }
    let result = match &cli.command {
        Command::Jones { input, oracle } => cmd_jones(input, *oracle),
        Command::Homology { input } => cmd_homology(input),
        Command::Lee { input } => cmd_lee(input),
        Command::Verify { input, moves, seed, fault } => cmd_verify(input, *moves, *seed, *fault),
        Command::DumpComplex { input } => cmd_dump(input),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
