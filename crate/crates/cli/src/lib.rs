//! The `petrisynth` command line.
//!
//! [`run`] parses arguments, executes one subcommand and returns the exit
//! code: 0 for yes/success, 1 for no, 2 for errors and inconclusive oracle
//! runs. With `--json` every subcommand prints a single JSON object on
//! stdout:
//!
//! ```text
//! { "command": "check", "answer": "yes" | "no" | "error" | "inconclusive",
//!   "warnings": [..], ...command specific fields }
//! ```

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use petrisynth_core::io::{parse_formula, parse_net, parse_ts, serialize_net, serialize_ts, serialize_witness};
use petrisynth_core::net_type::{Family, NetType};
use petrisynth_core::oracle::{oracle_decide, Budget, OracleError};
use petrisynth_core::petri::DEFAULT_CAP;
use petrisynth_core::polysynth::{decide_essp_rzpt, decide_ssp, synthesize_rzpt, Synthesis};
use petrisynth_core::reduction::{brute_model, build_union, ppt_essp_witness, alpha_region, Variant};
use petrisynth_core::region::{Decision, Problem, Region};
use petrisynth_core::ts::{Carrier, SeparationAtom, TransitionSystem};

#[derive(Parser, Debug)]
#[command(name = "petrisynth", version, about = "Region-based synthesis of bounded Petri nets")]
struct Cli {
    /// Print one JSON report instead of text
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide a separation property, with a polynomial decider where one exists
    Check(CheckArgs),
    /// Synthesize an rzpt net and verify its reachability graph
    Synthesize {
        #[arg(long)]
        b: u32,
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// Reachability graph of a net
    Reachability {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// Isomorphism of two transition systems
    Iso { a: PathBuf, b: PathBuf },
    /// Decide a separation property by exhaustive enumeration
    Oracle(OracleArgs),
    /// Build a hardness instance from a one-in-three formula
    Reduce {
        #[arg(long)]
        variant: Variant,
        #[arg(long)]
        b: u32,
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Also write `OUTPUT.witness` with the regions for a model
        #[arg(long, requires = "output")]
        emit_witness: bool,
    },
}

#[derive(Args, Debug)]
struct Target {
    #[arg(long)]
    family: Family,
    #[arg(long)]
    b: u32,
    #[arg(long)]
    problem: Problem,
    input: PathBuf,
    /// Write the witness regions here when the answer is yes
    #[arg(long)]
    witness: Option<PathBuf>,
    /// Oracle budget in search nodes (default: $PETRISYNTH_BUDGET or 10^7)
    #[arg(long)]
    budget: Option<u64>,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[command(flatten)]
    target: Target,
    /// Fall back to the oracle for pt and ppt
    #[arg(long)]
    allow_oracle: bool,
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[command(flatten)]
    target: Target,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Answer {
    Yes,
    No,
    Inconclusive,
    Error,
}

impl Answer {
    fn code(self) -> i32 {
        match self {
            Answer::Yes => 0,
            Answer::No => 1,
            Answer::Inconclusive | Answer::Error => 2,
        }
    }
    fn tag(self) -> &'static str {
        match self {
            Answer::Yes => "yes",
            Answer::No => "no",
            Answer::Inconclusive => "inconclusive",
            Answer::Error => "error",
        }
    }
}

/// What a subcommand produced: an answer, human-readable lines, and the
/// fields of the JSON report.
struct Outcome {
    answer: Answer,
    lines: Vec<String>,
    fields: Map<String, Value>,
    warnings: Vec<String>,
}

impl Outcome {
    fn new(answer: Answer) -> Self {
        Outcome { answer, lines: Vec::new(), fields: Map::new(), warnings: Vec::new() }
    }
    fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }
    fn field(&mut self, k: &str, v: impl Into<Value>) {
        self.fields.insert(k.to_string(), v.into());
    }
}

type CmdResult = Result<Outcome, String>;

/// Runs the command line and returns its exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let name = command_name(&cli.command);
    let outcome = match execute(cli.command) {
        Ok(o) => o,
        Err(msg) => {
            let mut o = Outcome::new(Answer::Error);
            o.field("error", msg.clone());
            o.line(format!("error: {msg}"));
            o
        }
    };
    if cli.json {
        let mut obj = Map::new();
        obj.insert("command".into(), name.into());
        obj.insert("answer".into(), outcome.answer.tag().into());
        obj.insert("warnings".into(), json!(outcome.warnings));
        obj.extend(outcome.fields);
        let _ = writeln!(out, "{}", Value::Object(obj));
    } else {
        for w in &outcome.warnings {
            let _ = writeln!(err, "warning: {w}");
        }
        for l in &outcome.lines {
            if outcome.answer == Answer::Error {
                let _ = writeln!(err, "{l}");
            } else {
                let _ = writeln!(out, "{l}");
            }
        }
    }
    outcome.answer.code()
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Check(_) => "check",
        Command::Synthesize { .. } => "synthesize",
        Command::Reachability { .. } => "reachability",
        Command::Iso { .. } => "iso",
        Command::Oracle(_) => "oracle",
        Command::Reduce { .. } => "reduce",
    }
}

fn execute(c: Command) -> CmdResult {
    match c {
        Command::Check(a) => check(a.target, a.allow_oracle),
        Command::Oracle(a) => oracle(a.target),
        Command::Synthesize { b, input, output, cap } => synthesize(b, &input, output.as_deref(), cap),
        Command::Reachability { input, output, cap } => reachability(&input, output.as_deref(), cap),
        Command::Iso { a, b } => iso(&a, &b),
        Command::Reduce { variant, b, input, output, emit_witness } => {
            reduce(variant, b, &input, output.as_deref(), emit_witness)
        }
    }
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<(), String> {
    fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_ts(path: &Path) -> Result<TransitionSystem, String> {
    parse_ts(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn net_type(family: Family, b: u32) -> Result<NetType, String> {
    NetType::new(family, b).map_err(|e| e.to_string())
}

fn budget(n: Option<u64>) -> Budget {
    n.map(Budget::candidates).unwrap_or_else(Budget::from_env)
}

fn check(t: Target, allow_oracle: bool) -> CmdResult {
    let ts = load_ts(&t.input)?;
    let ty = net_type(t.family, t.b)?;
    let mut warnings = Vec::new();
    let poly = match (t.family, t.problem) {
        (Family::Zpt | Family::Zppt | Family::Rzpt, Problem::Ssp) => {
            Some(decide_ssp(&ts, &ty).map_err(|e| e.to_string())?)
        }
        (Family::Rzpt, Problem::Essp) => Some(decide_essp_rzpt(&ts, t.b)),
        (Family::Rzpt, Problem::Solvability) => {
            let ssp = decide_ssp(&ts, &ty).map_err(|e| e.to_string())?;
            Some(if ssp.holds { merge(ssp, decide_essp_rzpt(&ts, t.b)) } else { ssp })
        }
        (Family::Zpt | Family::Zppt, _) => {
            warnings.push(format!("{} for {} is NP-complete; using the exhaustive oracle", t.problem, t.family));
            None
        }
        (Family::Pt | Family::Ppt, _) => {
            if !allow_oracle {
                return Err(format!(
                    "no polynomial decider for {} {}; pass --allow-oracle to use exhaustive search",
                    t.family, t.problem
                ));
            }
            warnings.push(format!("{} for {} is decided by the exhaustive oracle", t.problem, t.family));
            None
        }
    };
    let mut o = match poly {
        Some(d) => report(&ts, &ty, &t, d, "poly")?,
        None => run_oracle(&ts, &ty, &t)?,
    };
    o.warnings.splice(0..0, warnings);
    Ok(o)
}

fn oracle(t: Target) -> CmdResult {
    let ts = load_ts(&t.input)?;
    let ty = net_type(t.family, t.b)?;
    run_oracle(&ts, &ty, &t)
}

fn run_oracle(ts: &TransitionSystem, ty: &NetType, t: &Target) -> CmdResult {
    match oracle_decide(ts, ty, t.problem, budget(t.budget)) {
        Ok(d) => report(ts, ty, t, d, "oracle"),
        Err(e) => {
            let mut o = Outcome::new(Answer::Inconclusive);
            let (examined, found) = match e {
                OracleError::BudgetExhausted { examined, found } | OracleError::TimeExhausted { examined, found } => {
                    (examined, found)
                }
            };
            o.field("decider", "oracle");
            o.field("examined", examined);
            o.field("regions", found);
            o.line(format!("inconclusive: {e}"));
            Ok(o)
        }
    }
}

/// Concatenates two decisions over the same system.
fn merge(mut a: Decision, b: Decision) -> Decision {
    let off = a.regions.len();
    a.holds &= b.holds;
    a.regions.extend(b.regions);
    a.coverage.extend(b.coverage.into_iter().map(|(x, i)| (x, i + off)));
    a.unsolvable.extend(b.unsolvable);
    a
}

fn report(ts: &TransitionSystem, ty: &NetType, t: &Target, d: Decision, decider: &str) -> CmdResult {
    let mut o = Outcome::new(if d.holds { Answer::Yes } else { Answer::No });
    let unsolved: Vec<String> = d.unsolvable.iter().map(|a| ts.atom_label(a)).collect();
    o.field("decider", decider);
    o.field("family", t.family.tag());
    o.field("b", t.b);
    o.field("problem", t.problem.to_string());
    o.field("regions", d.regions.len());
    o.field("atoms", d.coverage.len() + d.unsolvable.len());
    o.field("unsolvable", json!(unsolved));
    if d.holds {
        o.line(format!("yes: {} {} holds for {ty} ({} regions, {decider})", ts.name(), t.problem, d.regions.len()));
        if let Some(path) = &t.witness {
            write(path, &witness_text(ts, ty, &d))?;
            o.field("witness", path.display().to_string());
        }
    } else {
        o.line(format!("no: {} {} fails for {ty} ({decider})", ts.name(), t.problem));
        for u in &unsolved {
            o.line(format!("unsolvable atom {u}"));
        }
    }
    Ok(o)
}

/// Each region labelled with the first atom it was assigned.
fn witness_text<C: Carrier + ?Sized>(c: &C, ty: &NetType, d: &Decision) -> String {
    let list: Vec<(Region, Option<SeparationAtom>)> = d
        .regions
        .iter()
        .enumerate()
        .map(|(i, r)| (r.clone(), d.coverage.iter().find(|(_, k)| *k == i).map(|(a, _)| *a)))
        .collect();
    serialize_witness(c, ty, &list)
}

fn synthesize(b: u32, input: &Path, output: Option<&Path>, cap: usize) -> CmdResult {
    let ts = load_ts(input)?;
    net_type(Family::Rzpt, b)?;
    match synthesize_rzpt(&ts, b, cap).map_err(|e| e.to_string())? {
        Synthesis::Unsolvable { problem, atom } => {
            let mut o = Outcome::new(Answer::No);
            let label = ts.atom_label(&atom);
            o.field("problem", problem.to_string());
            o.field("unsolvable", label.clone());
            o.line(format!("no: {} is not rzpt^{b}-solvable, {problem} fails at {label}", ts.name()));
            Ok(o)
        }
        Synthesis::Net { net, place_atoms, iso } => {
            let mut o = Outcome::new(Answer::Yes);
            let rg = net.reachability_graph(cap).map_err(|e| e.to_string())?;
            let text = serialize_net(&net);
            let mut bij = Map::new();
            for (s, &m) in iso.iter().enumerate() {
                bij.insert(ts.states()[s].clone(), rg.ts.states()[m].clone().into());
            }
            let places: Map<String, Value> = net
                .places()
                .iter()
                .zip(&place_atoms)
                .map(|(p, a)| (p.name.clone(), ts.atom_label(a).into()))
                .collect();
            o.field("places", places);
            o.field("isomorphism", bij.clone());
            match output {
                Some(path) => {
                    write(path, &text)?;
                    o.field("output", path.display().to_string());
                    o.line(format!("yes: wrote {} ({} place(s))", path.display(), net.places().len()));
                }
                None => o.lines.extend(text.lines().map(String::from)),
            }
            o.field("net", text);
            if output.is_some() {
                for (s, m) in &bij {
                    o.line(format!("{s} -> {}", m.as_str().unwrap_or_default()));
                }
            }
            Ok(o)
        }
    }
}

fn reachability(input: &Path, output: Option<&Path>, cap: usize) -> CmdResult {
    let net = parse_net(&read(input)?).map_err(|e| format!("{}: {e}", input.display()))?;
    let rg = net.reachability_graph(cap).map_err(|e| e.to_string())?;
    let mut o = Outcome::new(Answer::Yes);
    o.warnings = rg.warnings.clone();
    let text = serialize_ts(&rg.ts);
    o.field("states", rg.ts.num_states());
    o.field("events", rg.ts.num_events());
    match output {
        Some(path) => {
            write(path, &text)?;
            o.field("output", path.display().to_string());
            o.line(format!("wrote {} ({} states)", path.display(), rg.ts.num_states()));
        }
        None => o.lines.extend(text.lines().map(String::from)),
    }
    o.field("ts", text);
    Ok(o)
}

fn iso(a: &Path, b: &Path) -> CmdResult {
    let (x, y) = (load_ts(a)?, load_ts(b)?);
    match x.isomorphism(&y) {
        Some(f) => {
            let mut o = Outcome::new(Answer::Yes);
            let mut bij = Map::new();
            o.line("isomorphic");
            for (s, &t) in f.iter().enumerate() {
                o.line(format!("{} -> {}", x.states()[s], y.states()[t]));
                bij.insert(x.states()[s].clone(), y.states()[t].clone().into());
            }
            o.field("bijection", bij);
            Ok(o)
        }
        None => {
            let mut o = Outcome::new(Answer::No);
            o.line("not isomorphic");
            Ok(o)
        }
    }
}

fn reduce(variant: Variant, b: u32, input: &Path, output: Option<&Path>, emit_witness: bool) -> CmdResult {
    let phi = parse_formula(&read(input)?).map_err(|e| format!("{}: {e}", input.display()))?;
    let gu = build_union(&phi, variant, b).map_err(|e| e.to_string())?;
    let j = gu.join().map_err(|e| e.to_string())?;
    let mut o = Outcome::new(Answer::Yes);
    o.warnings = j.warnings.clone();
    let text = serialize_ts(&j.ts);
    o.field("variant", variant.tag());
    o.field("b", b);
    o.field("states", j.ts.num_states());
    o.field("events", j.ts.num_events());
    o.field("alpha", gu.alpha_label());
    o.field("linear", j.ts.is_linear());
    o.field("grade", j.ts.grade());
    match output {
        Some(path) => {
            write(path, &text)?;
            o.field("output", path.display().to_string());
            o.line(format!(
                "wrote {} ({} states, {} events, alpha {})",
                path.display(),
                j.ts.num_states(),
                j.ts.num_events(),
                gu.alpha_label()
            ));
        }
        None => o.lines.extend(text.lines().map(String::from)),
    }
    if !emit_witness {
        return Ok(o);
    }
    let path = witness_path(output.expect("clap requires --output with --emit-witness"));
    let Some(model) = brute_model(&phi).map_err(|e| e.to_string())? else {
        o.answer = Answer::No;
        o.field("model", Value::Null);
        o.line("no: the formula has no one-in-three model, so alpha is unsolvable");
        return Ok(o);
    };
    o.field("model", json!(model));
    let ty = gu.net_type();
    let (regions, complete) = if variant == Variant::PptEssp {
        let w = ppt_essp_witness(&gu, &model).map_err(|e| e.to_string())?;
        let list: Vec<(Region, Option<SeparationAtom>)> = w.regions.iter().map(|(r, a)| (r.clone(), Some(*a))).collect();
        (list, w.is_complete())
    } else {
        let r = alpha_region(&gu, &model).map_err(|e| e.to_string())?;
        (vec![(gu.extend_to_join(&j, &r), Some(gu.alpha))], false)
    };
    write(&path, &serialize_witness(&j.ts, &ty, &regions))?;
    o.field("witness", path.display().to_string());
    o.field("witness_regions", regions.len());
    o.field("witness_complete", complete);
    o.line(format!(
        "model {:?}; wrote {} ({} regions{})",
        model,
        path.display(),
        regions.len(),
        if complete { ", every event/state atom solved" } else { ", alpha only" }
    ));
    Ok(o)
}

fn witness_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".witness");
    PathBuf::from(s)
}
