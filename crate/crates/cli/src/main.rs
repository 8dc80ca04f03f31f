//! `swb`: validate, generate, amalgamate and analyze switchboards.
//!
//! Exit status: 0 success, 1 violation or failing verdict, 2 usage, parse
//! or format error. Data goes to stdout, diagnostics to stderr.

mod check;

use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use switchboard::amalg::{amalgamate_along, free_amalgam_one_point};
use switchboard::apsearch::{search_failures, ApCertificate};
use switchboard::format::{parse_document, write_labeled, Document, Structure};
use switchboard::generic::{random_labeled, witness_down, witness_up, TwoTypeSpec};
use switchboard::labeling::{enumerate_labelings, EnumerationCap};
use switchboard::order::{edge_poset, parse_formula, parse_poset, phi_poset};
use switchboard::types::{build_core_sequence, check_core_conclusions, two_stage_symmetry};
use switchboard::{label_canonical, Edge, Element, Error, LabeledSwitchboard};

#[derive(Parser)]
#[command(name = "swb", version, about = "Finite switchboards and labeled switchboards")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Direction {
    Up,
    Down,
}

#[derive(Subcommand)]
enum Command {
    /// Check every axiom and list the violations.
    Validate { file: PathBuf },
    /// Canonical labeling of an unlabeled switchboard.
    Label { file: PathBuf },
    /// Count (and optionally list) all labelings of a switchboard.
    Labelings {
        file: PathBuf,
        #[arg(long)]
        list: bool,
    },
    /// Amalgamate two structures over a common base. Sections
    /// `%embedding base` in the left/right files give the base embeddings;
    /// otherwise the base sits on the first ids.
    Amalgamate {
        #[arg(long)]
        base: PathBuf,
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
    },
    /// Free amalgam of two one-point extensions of a base.
    FreeAmalgam {
        #[arg(long)]
        base: PathBuf,
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
    },
    /// Add a point w with {x,w} < e (up) or {x,w} > e (down).
    Witness {
        #[arg(long, value_enum)]
        dir: Direction,
        #[arg(long)]
        x: Element,
        /// `i,j`
        #[arg(long, value_parser = parse_edge)]
        edge: Edge,
        file: PathBuf,
    },
    /// Height of the edge order of a switchboard, or of a poset file.
    Height {
        #[arg(long, conflicts_with = "poset", required_unless_present = "poset")]
        edges: Option<PathBuf>,
        #[arg(long)]
        poset: Option<PathBuf>,
        /// Also print `hgt <key> <height>` for every key.
        #[arg(long)]
        each: bool,
    },
    /// Poset of the sets defined by a formula as its parameters vary.
    Eval {
        #[arg(long)]
        formula: String,
        /// Comma-separated object variables.
        #[arg(long, value_delimiter = ',')]
        obj: Vec<String>,
        /// Comma-separated parameter variables.
        #[arg(long, value_delimiter = ',', default_value = "")]
        param: Vec<String>,
        file: PathBuf,
    },
    /// Seeded random labeled switchboard.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// A number in [0,1], as a decimal or `p/q`.
        #[arg(long, value_parser = parse_density, default_value = "0.3")]
        density: f64,
    },
    /// Build a sequence from a two-type (file with a `pair s t` line).
    Sequence {
        #[arg(long)]
        q: PathBuf,
        #[arg(long)]
        length: usize,
        /// Also check the distinguished/symmetric conclusions.
        #[arg(long)]
        check: bool,
        /// Print the constructed structure.
        #[arg(long)]
        emit: bool,
    },
    /// Two sequences: the second from the type of (c0, c_|B|) of the first.
    TwoStage {
        #[arg(long)]
        q: PathBuf,
        #[arg(long)]
        k1: usize,
        #[arg(long)]
        k2: usize,
    },
    /// Search for unlabeled switchboards A ⊂ B, C with no amalgam.
    ApFailure {
        /// Largest pushout carrier size.
        #[arg(long)]
        max_n: usize,
        #[arg(long, default_value_t = 1)]
        limit: usize,
    },
    /// Re-run the exhaustion recorded in an AP-failure certificate.
    ApReplay { file: PathBuf },
    /// Run the property suites.
    Check {
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

fn parse_edge(s: &str) -> Result<Edge, String> {
    let (a, b) = s.split_once(',').ok_or("expected `i,j`")?;
    let a: Element = a.trim().parse().map_err(|_| format!("bad element `{a}`"))?;
    let b: Element = b.trim().parse().map_err(|_| format!("bad element `{b}`"))?;
    Edge::new(a, b).map_err(|e| e.to_string())
}

fn parse_density(s: &str) -> Result<f64, String> {
    let v = match s.split_once('/') {
        Some((p, q)) => {
            let p: f64 = p.trim().parse().map_err(|_| format!("bad numerator `{p}`"))?;
            let q: f64 = q.trim().parse().map_err(|_| format!("bad denominator `{q}`"))?;
            p / q
        }
        None => s.trim().parse().map_err(|_| format!("bad density `{s}`"))?,
    };
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(format!("density {v} is outside [0,1]"))
    }
}

/// A failure with its exit status.
struct Fail {
    code: u8,
    msg: String,
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Invalid(_) | Error::Triangle { .. } => 1,
            _ => 2,
        };
        Fail { code, msg: e.to_string() }
    }
}

fn usage(msg: impl Into<String>) -> Fail {
    Fail { code: 2, msg: msg.into() }
}

fn read(path: &Path) -> Result<String, Fail> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| usage(format!("stdin: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Document, Fail> {
    parse_document(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_labeled(path: &Path) -> Result<(LabeledSwitchboard, Document), Fail> {
    let doc = load(path)?;
    let l = doc.clone().labeled().map_err(|e| usage(format!("{}: {e}", path.display())))?;
    Ok((l, doc))
}

/// `SWB_SIZE_CAP=<elements>[:<nodes>]` overrides the enumeration cap.
fn enumeration_cap() -> Result<EnumerationCap, Fail> {
    let mut cap = EnumerationCap::default();
    if let Ok(v) = std::env::var("SWB_SIZE_CAP") {
        let bad = || usage(format!("SWB_SIZE_CAP must be <elements>[:<nodes>], found `{v}`"));
        let (el, nodes) = match v.split_once(':') {
            Some((a, b)) => (a, Some(b)),
            None => (v.as_str(), None),
        };
        cap.max_elements = el.trim().parse().map_err(|_| bad())?;
        if let Some(nodes) = nodes {
            cap.max_nodes = nodes.trim().parse().map_err(|_| bad())?;
        }
    }
    Ok(cap)
}

fn embedding(doc: &Document, base_n: usize) -> Result<Vec<Element>, Fail> {
    match doc.embeddings.iter().find(|(name, _)| name == "base") {
        None => Ok((0..base_n).collect()),
        Some((_, pairs)) => {
            let mut map = vec![None; base_n];
            for &(from, to) in pairs {
                let slot = map.get_mut(from).ok_or_else(|| usage(format!("embedding maps {from}, outside the base")))?;
                *slot = Some(to);
            }
            map.into_iter()
                .enumerate()
                .map(|(i, t)| t.ok_or_else(|| usage(format!("embedding leaves base element {i} unmapped"))))
                .collect()
        }
    }
}

fn two_type(path: &Path) -> Result<TwoTypeSpec, Fail> {
    let (l, doc) = load_labeled(path)?;
    let (s, t) = doc.pair.ok_or_else(|| usage(format!("{}: missing `pair s t` line", path.display())))?;
    Ok(TwoTypeSpec::new(l, s, t)?)
}

fn run(cli: Cli, out: &mut impl Write) -> Result<u8, Fail> {
    let mut emit = |s: &str| out.write_all(s.as_bytes()).map_err(|e| usage(format!("stdout: {e}")));
    match cli.command {
        Command::Validate { file } => {
            let report = match load(&file)?.structure {
                Structure::Plain(s) => s.validate(),
                Structure::Labeled(l) => l.validate(),
            };
            emit(&format!("{report}\n"))?;
            Ok(if report.is_valid() { 0 } else { 1 })
        }
        Command::Label { file } => match load(&file)?.structure {
            Structure::Plain(s) => {
                emit(&write_labeled(&label_canonical(&s)?))?;
                Ok(0)
            }
            Structure::Labeled(_) => Err(usage("`label` takes an unlabeled switchboard (%sb)")),
        },
        Command::Labelings { file, list } => {
            let s = match load(&file)?.structure {
                Structure::Plain(s) => s,
                Structure::Labeled(l) => l.into_base(),
            };
            let all = enumerate_labelings(&s, enumeration_cap()?)?;
            emit(&format!("{}\n", all.len()))?;
            if list {
                for l in &all {
                    emit(&write_labeled(l))?;
                }
            }
            Ok(0)
        }
        Command::Amalgamate { base, left, right } => {
            let (b, _) = load_labeled(&base)?;
            let (l, ldoc) = load_labeled(&left)?;
            let (r, rdoc) = load_labeled(&right)?;
            let lm = embedding(&ldoc, b.n())?;
            let rm = embedding(&rdoc, b.n())?;
            emit(&amalgamate_along(&b, &l, &lm, &r, &rm)?.to_text())?;
            Ok(0)
        }
        Command::FreeAmalgam { base, left, right } => {
            let (s, _) = load_labeled(&base)?;
            let (a1, _) = load_labeled(&left)?;
            let (a2, _) = load_labeled(&right)?;
            let m = free_amalgam_one_point(&s, &a1, &a2)?;
            emit(&write_labeled(&m))?;
            emit(&format!("pair {} {}\n", s.n(), s.n() + 1))?;
            Ok(0)
        }
        Command::Witness { dir, x, edge, file } => {
            let (m, _) = load_labeled(&file)?;
            let (ext, w) = match dir {
                Direction::Up => witness_up(&m, x, edge)?,
                Direction::Down => witness_down(&m, x, edge)?,
            };
            emit(&write_labeled(&ext))?;
            emit(&format!("point {w}\n"))?;
            Ok(0)
        }
        Command::Height { edges, poset, each } => {
            let mut text = String::new();
            let height = if let Some(path) = edges {
                let s = match load(&path)?.structure {
                    Structure::Plain(s) => s,
                    Structure::Labeled(l) => l.into_base(),
                };
                s.ensure_valid()?;
                let h = edge_poset(&s)?.heights()?;
                if each {
                    h.of.iter().for_each(|(k, v)| text.push_str(&format!("hgt {k} {v}\n")));
                }
                h.height
            } else {
                let path = poset.expect("clap requires one of the inputs");
                let p = parse_poset(&read(&path)?).map_err(|e| usage(format!("{}: {e}", path.display())))?;
                let h = p.heights()?;
                if each {
                    h.of.iter().for_each(|(k, v)| text.push_str(&format!("hgt {k} {v}\n")));
                }
                h.height
            };
            emit(&format!("{height}\n{text}"))?;
            Ok(0)
        }
        Command::Eval { formula, obj, param, file } => {
            let (m, _) = load_labeled(&file)?;
            m.ensure_valid()?;
            let f = parse_formula(&formula).map_err(|e| usage(format!("formula: {e}")))?;
            let obj: Vec<&str> = obj.iter().map(String::as_str).filter(|s| !s.is_empty()).collect();
            let param: Vec<&str> = param.iter().map(String::as_str).filter(|s| !s.is_empty()).collect();
            let p = phi_poset(&m, &f, &obj, &param)?;
            emit(&p.poset.to_text())?;
            emit(&format!("height {}\n", p.poset.heights()?.height))?;
            Ok(0)
        }
        Command::Gen { n, seed, density } => {
            emit(&write_labeled(&random_labeled(n, seed, density)))?;
            Ok(0)
        }
        Command::Sequence { q, length, check, emit: show } => {
            let q = two_type(&q)?;
            let report = build_core_sequence(&q, length)?;
            let ids: Vec<String> = report.sequence.iter().map(|c| c.to_string()).collect();
            emit(&format!("sequence {}\n", ids.join(" ")))?;
            if show {
                emit(&write_labeled(&report.structure))?;
            }
            let mut verdict = report.construction_verdict();
            if check {
                let v = check_core_conclusions(&report)?;
                verdict.lines.extend(v.lines);
                verdict.notes.extend(v.notes);
            }
            emit(&verdict.to_text())?;
            verdict.notes.iter().for_each(|n| eprintln!("{n}"));
            Ok(if verdict.pass() { 0 } else { 1 })
        }
        Command::TwoStage { q, k1, k2 } => {
            let q = two_type(&q)?;
            let trace = two_stage_symmetry(&q, k1, k2)?;
            emit(&trace.verdict.to_text())?;
            trace.verdict.notes.iter().for_each(|n| eprintln!("{n}"));
            Ok(if trace.verdict.pass() { 0 } else { 1 })
        }
        Command::ApFailure { max_n, limit } => {
            let found = search_failures(max_n, limit)?;
            for cert in &found {
                emit(&cert.to_text())?;
            }
            if found.is_empty() {
                eprintln!("no amalgamation failure with at most {max_n} points");
                Ok(1)
            } else {
                Ok(0)
            }
        }
        Command::ApReplay { file } => {
            let cert = ApCertificate::parse(&read(&file)?).map_err(|e| usage(format!("{}: {e}", file.display())))?;
            let ok = cert.replay()? && cert.is_failure();
            emit(&format!("{}\n", if ok { "PASS" } else { "FAIL" }))?;
            Ok(if ok { 0 } else { 1 })
        }
        Command::Check { seed } => {
            let results = check::run_all(seed);
            for r in &results {
                emit(&format!("{} {}\n", r.name, if r.pass { "PASS" } else { "FAIL" }))?;
                if let Some(d) = &r.detail {
                    eprintln!("{}: {d}", r.name);
                }
            }
            Ok(if results.iter().all(|r| r.pass) { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let code = match run(cli, &mut out) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("swb: {}", f.msg);
            f.code
        }
    };
    if let Err(e) = out.flush() {
        eprintln!("swb: stdout: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}
