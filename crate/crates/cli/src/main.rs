//! `linedyn`: analyse maps on line windows from JSON specs and verify the
//! classification theorems exhaustively on small windows.
//!
//! Every command prints a JSON report on stdout. Exit codes: 0 for a true
//! verdict or a clean run, 1 for a false verdict or violations, 2 for usage
//! and input errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use linedyn::complex::{face_poset, SimplicialComplex};
use linedyn::dot::{hasse_dot, transition_dot};
use linedyn::format::{description, parse_multimap, parse_poset, parse_selfmap};
use linedyn::homology::{homology, is_acyclic, rational_betti_numbers};
use linedyn::line::{label, LineWindow};
use linedyn::multi::{
    classify_invariant_sets, fixed_points, graph_poset, is_vietoris_like_multimap, lefschetz_number,
    orbit_stream, periodic_orbits, MultiMap, SelectionPolicy, TransitionGraph,
};
use linedyn::poset::Poset;
use linedyn::single::{check_continuity, classify_dynamics, periodic_points};
use linedyn::verify::{run_suite, windows_up_to, Theorem};
use linedyn::Error;

/// Orbits listed per period before a table is marked truncated.
const ORBITS_PER_PERIOD: usize = 10;
const DEFAULT_MAX_PERIOD: usize = 5;
const DEFAULT_ORBIT_STEPS: usize = 20;

#[derive(Parser, Debug)]
#[command(name = "linedyn", version, about = "Combinatorial dynamics on the line model")]
struct Cli {
    /// Also write the report to this file.
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Omit timing so reports are byte-identical across runs.
    #[arg(long, global = true)]
    no_timing: bool,
    /// Worker threads for exhaustive suites.
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Summarise the window [x_LO, x_HI].
    Window {
        #[arg(allow_negative_numbers = true)]
        lo: i64,
        #[arg(allow_negative_numbers = true)]
        hi: i64,
        /// Write the Hasse diagram as DOT.
        #[arg(long, value_name = "PATH")]
        dot: Option<PathBuf>,
    },
    /// Check continuity of a self-map, or the Vietoris-like condition of a multimap.
    CheckMap {
        spec: PathBuf,
        #[arg(long)]
        multi: bool,
    },
    /// Periodic orbits, an orbit sample and invariant sets of a multimap.
    Orbits {
        spec: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        start: Option<i64>,
        #[arg(long, default_value_t = DEFAULT_MAX_PERIOD)]
        max_period: usize,
        #[arg(long, default_value_t = DEFAULT_ORBIT_STEPS)]
        steps: usize,
        /// Pick successors at random with this seed instead of least index first.
        #[arg(long)]
        seed: Option<u64>,
        /// Write the transition graph as DOT.
        #[arg(long, value_name = "PATH")]
        dot: Option<PathBuf>,
    },
    /// Run an exhaustive suite on [x_-N, x_N] (the Lefschetz suite covers
    /// every window of at most 2N+1 elements starting at -N or -N+1).
    Verify {
        #[arg(long, value_name = "N")]
        window: u32,
        #[arg(long, value_parser = parse_theorem)]
        theorem: Theorem,
        /// Override the enumeration size guard.
        #[arg(long)]
        force: bool,
    },
    /// Homology of a poset: window:LO:HI, interval:N, minimal-circle, point,
    /// chain:N, antichain:N, or a poset spec file.
    Homology { input: String },
}

fn parse_theorem(s: &str) -> Result<Theorem, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug)]
enum Failure {
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

struct Outcome {
    results: Value,
    /// Bytes identifying the input; hashed into the report.
    input: Vec<u8>,
    ok: bool,
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn labels(xs: impl IntoIterator<Item = i64>) -> Vec<String> {
    xs.into_iter().map(label).collect()
}

fn poset_summary(p: &Poset) -> Value {
    json!({
        "elements": p.len(),
        "covers": p.covers().len(),
        "height": p.height_of(),
        "minimal": p.minimal_elements().iter().map(|&a| p.label(a)).collect::<Vec<_>>(),
        "maximal": p.maximal_elements().iter().map(|&a| p.label(a)).collect::<Vec<_>>(),
    })
}

fn cmd_window(lo: i64, hi: i64, dot: Option<&Path>) -> Result<Outcome, Failure> {
    let w = LineWindow::new(lo, hi)?;
    let diagram = hasse_dot(w.poset());
    if let Some(path) = dot {
        write(path, &diagram)?;
    }
    let results = json!({
        "window": [lo, hi],
        "poset": poset_summary(w.poset()),
        "acyclic": is_acyclic(w.poset()),
    });
    Ok(Outcome {
        results,
        input: format!("window:{lo}:{hi}").into_bytes(),
        ok: true,
    })
}

/// Multimap spec, or a self-map spec read as a singleton-valued multimap.
fn load_multimap(text: &str) -> Result<MultiMap, Failure> {
    match parse_multimap(text) {
        Ok(m) => Ok(m),
        Err(multi_err) => match parse_selfmap(text) {
            Ok(f) => Ok(MultiMap::from_selfmap(&f)?),
            Err(_) => Err(multi_err.into()),
        },
    }
}

fn cmd_check_map(spec: &Path, multi: bool) -> Result<Outcome, Failure> {
    let text = read(spec)?;
    let mut results = json!({ "spec": spec.display().to_string(), "description": description(&text) });
    let ok = if multi {
        let m = load_multimap(&text)?;
        let v = is_vietoris_like_multimap(&m);
        results["multi"] = json!(true);
        results["vietoris"] = json!(v.vietoris);
        results["witness_chain"] = json!(v.witness_chain.map(labels));
        results["witness_preimage"] = json!(v.witness_preimage.map(|ps| ps
            .iter()
            .map(|&(x, y)| format!("({},{})", label(x), label(y)))
            .collect::<Vec<_>>()));
        v.vietoris
    } else {
        let f = parse_selfmap(&text)?;
        let violation = check_continuity(&f);
        results["multi"] = json!(false);
        results["continuous"] = json!(violation.is_none());
        results["witness"] =
            json!(violation.map(|v| json!({ "lower": label(v.lower), "upper": label(v.upper) })));
        if violation.is_none() {
            results["dynamics"] = match classify_dynamics(&f) {
                Ok(c) => json!(c),
                Err(e) => json!({ "undecided": e.to_string() }),
            };
        }
        violation.is_none()
    };
    Ok(Outcome {
        results,
        input: text.into_bytes(),
        ok,
    })
}

fn cmd_orbits(
    spec: &Path,
    start: Option<i64>,
    max_period: usize,
    steps: usize,
    seed: Option<u64>,
    dot: Option<&Path>,
) -> Result<Outcome, Failure> {
    let text = read(spec)?;
    let m = load_multimap(&text)?;
    let w = m.window();
    let start = start.unwrap_or(w.lo());
    let policy = seed.map_or(SelectionPolicy::LeastIndex, SelectionPolicy::Seeded);
    let orbit = orbit_stream(&m, start, policy, 1, steps)?;
    let table = periodic_orbits(&m, max_period, ORBITS_PER_PERIOD);
    let sets = classify_invariant_sets(&m);
    if let Some(path) = dot {
        write(path, &transition_dot(&TransitionGraph::of(&m), Some(&sets)))?;
    }
    let lefschetz = match lefschetz_number(&m) {
        Ok(r) => json!(r),
        Err(e) => json!({ "undefined": e.to_string() }),
    };
    let mut results = json!({
        "spec": spec.display().to_string(),
        "description": description(&text),
        "window": [w.lo(), w.hi()],
        "graph_elements": graph_poset(&m).poset.len(),
        "fixed_points": labels(fixed_points(&m)),
        "max_period": max_period.min(w.len()),
        "spectrum": table.spectrum,
        "orbits": table.orbits.iter().map(|(p, os)| (p.to_string(), json!(os.iter().map(|o| labels(o.iter().copied())).collect::<Vec<_>>()))).collect::<serde_json::Map<_, _>>(),
        "orbits_truncated": table.truncated,
        "orbit_sample": { "start": label(start), "points": labels(orbit) },
        "invariant_sets": sets,
        "lefschetz": lefschetz,
    });
    if let Ok(f) = parse_selfmap(&text) {
        let minimal = periodic_points(&f, w.len());
        results["single_valued_periods"] = json!(minimal
            .iter()
            .map(|(p, pts)| (p.to_string(), json!(labels(pts.iter().copied()))))
            .collect::<serde_json::Map<_, _>>());
    }
    Ok(Outcome {
        results,
        input: text.into_bytes(),
        ok: true,
    })
}

fn cmd_verify(n: u32, theorem: Theorem, force: bool) -> Result<Outcome, Failure> {
    let windows = match theorem {
        Theorem::Lefschetz => windows_up_to(2 * n as usize + 1, -(n as i64)),
        _ => vec![LineWindow::symmetric(n)],
    };
    let report = run_suite(theorem, &windows, force)?;
    let ok = report.passed();
    Ok(Outcome {
        results: json!(report),
        input: format!("verify:{theorem}:{n}").into_bytes(),
        ok,
    })
}

fn parse_count(s: &str) -> Result<usize, Failure> {
    s.parse()
        .map_err(|_| Failure::Input(format!("{s:?} is not a count")))
}

fn parse_index(s: &str) -> Result<i64, Failure> {
    s.parse()
        .map_err(|_| Failure::Input(format!("{s:?} is not an index")))
}

fn builtin_poset(input: &str) -> Result<Option<Poset>, Failure> {
    let parts: Vec<&str> = input.split(':').collect();
    let p = match parts.as_slice() {
        ["point"] => Poset::singleton("p"),
        ["minimal-circle"] => Poset::minimal_circle(),
        ["window", lo, hi] => LineWindow::new(parse_index(lo)?, parse_index(hi)?)?
            .poset()
            .clone(),
        ["interval", n] => face_poset(&SimplicialComplex::interval_triangulation(parse_count(n)?)).poset,
        ["chain", n] => Poset::chain(parse_count(n)?),
        ["antichain", n] => Poset::antichain(parse_count(n)?),
        _ => return Ok(None),
    };
    Ok(Some(p))
}

fn cmd_homology(input: &str) -> Result<Outcome, Failure> {
    let (p, bytes) = match builtin_poset(input)? {
        Some(p) => (p, input.as_bytes().to_vec()),
        None => {
            let text = read(Path::new(input))?;
            (parse_poset(&text)?, text.into_bytes())
        }
    };
    let k = linedyn::complex::order_complex(&p);
    let results = json!({
        "input": input,
        "poset": poset_summary(&p),
        "simplices": k.len(),
        "reduced": homology(&k, true),
        "unreduced": homology(&k, false),
        "rational_betti": rational_betti_numbers(&p),
        "acyclic": is_acyclic(&p),
    });
    Ok(Outcome {
        results,
        input: bytes,
        ok: true,
    })
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Window { lo, hi, dot } => cmd_window(*lo, *hi, dot.as_deref()),
        Command::CheckMap { spec, multi } => cmd_check_map(spec, *multi),
        Command::Orbits {
            spec,
            start,
            max_period,
            steps,
            seed,
            dot,
        } => cmd_orbits(spec, *start, *max_period, *steps, *seed, dot.as_deref()),
        Command::Verify {
            window,
            theorem,
            force,
        } => cmd_verify(*window, *theorem, *force),
        Command::Homology { input } => cmd_homology(input),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let started = Instant::now();
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let command: Vec<String> = std::env::args().skip(1).collect();
    let timing = (!cli.no_timing).then(|| json!({ "elapsed_ms": started.elapsed().as_millis() as u64 }));
    let report = json!({
        "command": command,
        "input_digest": format!("{:x}", Sha256::digest(&outcome.input)),
        "results": outcome.results,
        "timing": timing,
        "version": env!("CARGO_PKG_VERSION"),
    });
    let text = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
    print!("{text}");
    if let Some(path) = &cli.json {
        if let Err(Failure::Input(msg)) = write(path, &text) {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    }
    if outcome.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
