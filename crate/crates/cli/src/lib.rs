//! Command dispatch for the `eltas` binary.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use serde::Serialize;
use thiserror::Error;

use eltas_core::encoder::{encode_all, EncodeError, EncodeOptions, Provenance, TranslatedTheory};
use eltas_core::normalizer::normalize_kb;
use eltas_core::queries::{executability, projection, QueryError, QueryOptions, QueryResult, Verdict};
use eltas_core::solver::{SearchOptions, SolveError, Solver, Trace};
use eltas_core::syntax::{
    parse_adl, parse_ground_actions, parse_ground_literal, parse_kb, print_kb, ParseError,
};
use eltas_core::theory::{check_well_defined, DomainDescription, GroundLiteral, Pred, RepairChoice, State};

pub const EXIT_OK: u8 = 0;
pub const EXIT_NO: u8 = 1;
/// `notExecutable`, or a description that fails validation.
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_ERROR: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "eltas", version, about = "Temporal action theories over EL⊥ knowledge bases")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the knowledge base with its TBox in normal form.
    Normalize {
        #[arg(long)]
        kb: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Check that a description is well defined and encodes.
    Check(Common),
    /// Print the translated theory grouped by provenance.
    Encode(Common),
    /// Enumerate extensions up to a horizon.
    Solve {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1)]
        horizon: usize,
        /// Only traces executing exactly these actions (comma-separated).
        #[arg(long)]
        actions: Option<String>,
        /// Include traces shorter than the horizon.
        #[arg(long)]
        prefixes: bool,
    },
    #[command(subcommand)]
    Query(Query),
}

#[derive(Debug, Subcommand)]
pub enum Query {
    /// Is the action sequence executable from an initial state?
    Exec {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        actions: String,
    },
    /// Does the goal hold after every execution of the sequence?
    Project {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        actions: String,
        /// A ground literal, e.g. `-alive` or `teacher(john)`.
        #[arg(long, allow_hyphen_values = true)]
        goal: String,
        /// Require the goal in every state of the execution.
        #[arg(long)]
        along: bool,
    },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// TBox axioms are state constraints.
    #[default]
    Strict,
    /// TBox axioms become repair causal laws.
    Repair,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    #[arg(long)]
    pub kb: Option<PathBuf>,
    #[arg(long)]
    pub adl: PathBuf,
    #[arg(long, value_enum, default_value_t = Mode::Strict)]
    pub mode: Mode,
    /// Repair choice for a normalized axiom, as `index=choice`.
    #[arg(long = "repair", value_parser = parse_repair)]
    pub repairs: Vec<(usize, RepairChoice)>,
    /// Instantiate existential laws for every role and base concept.
    #[arg(long)]
    pub full_exists: bool,
    /// Accept `until` obligations still pending at the horizon.
    #[arg(long)]
    pub weak_horizon: bool,
    #[arg(long)]
    pub json: bool,
    #[arg(long, default_value_t = 3)]
    pub max_witnesses: usize,
    /// Shuffle the ground laws with this seed before solving.
    #[arg(long)]
    pub seed: Option<u64>,
}

fn parse_repair(s: &str) -> Result<(usize, RepairChoice), String> {
    let (i, c) = s.split_once('=').ok_or("expected index=choice")?;
    let i = i.trim().parse().map_err(|_| format!("bad axiom index `{i}`"))?;
    let c = RepairChoice::from_keyword(c.trim())
        .ok_or_else(|| format!("unknown choice `{c}`; expected dropA, dropB, dropRole, dropFiller or both"))?;
    Ok((i, c))
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}:{source}")]
    Parse { path: PathBuf, source: ParseError },
    #[error("--{flag}: {source}")]
    Argument { flag: &'static str, source: ParseError },
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Query(#[from] QueryError),
    #[error("writing output: {0}")]
    Output(#[from] std::io::Error),
}

/// A parsed invocation.
#[derive(Debug)]
pub struct RunConfig {
    pub command: Command,
}

impl RunConfig {
    pub fn from_args<I, T>(args: I) -> Result<Self, clap::Error>
    where
        I: IntoIterator<Item = T>,
        T: Into<std::ffi::OsString> + Clone,
    {
        Ok(RunConfig {
            command: Cli::try_parse_from(args)?.command,
        })
    }
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.clone(),
        source,
    })
}

fn load(c: &Common) -> Result<DomainDescription, CliError> {
    let mut d = parse_adl(&read(&c.adl)?).map_err(|source| CliError::Parse {
        path: c.adl.clone(),
        source,
    })?;
    if let Some(kb) = &c.kb {
        d.kb = parse_kb(&read(kb)?).map_err(|source| CliError::Parse {
            path: kb.clone(),
            source,
        })?;
    }
    Ok(d)
}

fn options(c: &Common) -> EncodeOptions {
    let mut opts = match c.mode {
        Mode::Strict => EncodeOptions::strict(),
        Mode::Repair => EncodeOptions::repair(),
    };
    opts.full_exists = c.full_exists;
    opts.repairs = c.repairs.iter().copied().collect();
    opts
}

fn theory(c: &Common) -> Result<TranslatedTheory, CliError> {
    let mut t = encode_all(&load(c)?, &options(c))?;
    if let Some(seed) = c.seed {
        t.laws.shuffle(&mut StdRng::seed_from_u64(seed));
    }
    Ok(t)
}

fn actions(flag: &'static str, text: &str) -> Result<Vec<eltas_core::theory::GroundAction>, CliError> {
    parse_ground_actions(text).map_err(|source| CliError::Argument { flag, source })
}

/// Literals shown to the user: everything but the derived auxiliaries.
fn shown(w: &State) -> Vec<String> {
    w.iter()
        .filter(|l| !matches!(l.atom.pred, Pred::ExistsAux(..)))
        .map(GroundLiteral::to_string)
        .collect()
}

#[derive(Serialize)]
struct TraceJson {
    actions: Vec<String>,
    states: Vec<Vec<String>>,
}

impl From<&Trace> for TraceJson {
    fn from(t: &Trace) -> Self {
        TraceJson {
            actions: t.actions.iter().map(ToString::to_string).collect(),
            states: t.states.iter().map(shown).collect(),
        }
    }
}

fn write_trace(out: &mut String, t: &Trace) {
    let acts: Vec<String> = t.actions.iter().map(ToString::to_string).collect();
    let _ = writeln!(out, "actions: {}", if acts.is_empty() { "(none)".into() } else { acts.join(", ") });
    for (k, w) in t.states.iter().enumerate() {
        let _ = writeln!(out, "  w{k}: {{{}}}", shown(w).join(", "));
    }
}

fn json(v: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("plain data serializes");
    s.push('\n');
    s
}

/// Runs one command, writing its report to `out`, and returns the exit
/// status.
pub fn run(config: &RunConfig, out: &mut impl Write) -> Result<u8, CliError> {
    let (text, code) = match &config.command {
        Command::Normalize { kb, json: as_json } => normalize_cmd(kb, *as_json)?,
        Command::Check(c) => check_cmd(c)?,
        Command::Encode(c) => encode_cmd(c)?,
        Command::Solve {
            common,
            horizon,
            actions: seq,
            prefixes,
        } => solve_cmd(common, *horizon, seq.as_deref(), *prefixes)?,
        Command::Query(Query::Exec { common, actions: seq }) => {
            let solver = Solver::new(&theory(common)?);
            let r = executability(&solver, &actions("actions", seq)?, &query_options(common))?;
            query_report(common, &r)
        }
        Command::Query(Query::Project {
            common,
            actions: seq,
            goal,
            along,
        }) => {
            let goal = parse_ground_literal(goal).map_err(|source| CliError::Argument { flag: "goal", source })?;
            let solver = Solver::new(&theory(common)?);
            let r = projection(&solver, &actions("actions", seq)?, &goal, *along, &query_options(common))?;
            query_report(common, &r)
        }
    };
    out.write_all(text.as_bytes())?;
    Ok(code)
}

fn query_options(c: &Common) -> QueryOptions {
    QueryOptions {
        max_witnesses: Some(c.max_witnesses),
        weak_horizon: c.weak_horizon,
    }
}

fn verdict_code(v: Verdict) -> u8 {
    match v {
        Verdict::Yes => EXIT_OK,
        Verdict::No => EXIT_NO,
        Verdict::NotExecutable => EXIT_INVALID,
    }
}

#[derive(Serialize)]
struct QueryJson {
    verdict: &'static str,
    witnesses: Vec<TraceJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    countermodel: Option<TraceJson>,
}

fn query_report(c: &Common, r: &QueryResult) -> (String, u8) {
    let text = if c.json {
        json(&QueryJson {
            verdict: r.verdict.keyword(),
            witnesses: r.witnesses.iter().map(TraceJson::from).collect(),
            countermodel: r.countermodel.as_ref().map(TraceJson::from),
        })
    } else {
        let mut s = format!("{}\n", r.verdict.keyword());
        if let Some(cm) = &r.countermodel {
            s.push_str("countermodel:\n");
            write_trace(&mut s, cm);
        }
        for (i, w) in r.witnesses.iter().enumerate() {
            let _ = writeln!(s, "witness {}:", i + 1);
            write_trace(&mut s, w);
        }
        s
    };
    (text, verdict_code(r.verdict))
}

#[derive(Serialize)]
struct NormalizeJson {
    axioms: Vec<String>,
    assertions: Vec<String>,
    fresh: BTreeMap<String, String>,
}

fn normalize_cmd(path: &PathBuf, as_json: bool) -> Result<(String, u8), CliError> {
    let kb = parse_kb(&read(path)?).map_err(|source| CliError::Parse {
        path: path.clone(),
        source,
    })?;
    let n = normalize_kb(&kb);
    let text = if as_json {
        json(&NormalizeJson {
            axioms: n.tbox.iter().map(ToString::to_string).collect(),
            assertions: n.abox.iter().map(ToString::to_string).collect(),
            fresh: n.fresh.iter().map(|(f, c)| (f.to_string(), c.to_string())).collect(),
        })
    } else {
        let mut s = String::new();
        for (f, c) in &n.fresh {
            let _ = writeln!(s, "% {f} stands for {c}");
        }
        for (i, ax) in n.tbox.iter().enumerate() {
            let _ = writeln!(s, "{ax}.  % {i}");
        }
        let mut abox = n.to_kb();
        abox.tbox.clear();
        abox.declared = Default::default();
        s.push_str(&print_kb(&abox));
        s
    };
    Ok((text, EXIT_OK))
}

#[derive(Serialize)]
struct CheckJson {
    ok: bool,
    violations: Vec<String>,
}

fn check_cmd(c: &Common) -> Result<(String, u8), CliError> {
    let d = load(c)?;
    let report = check_well_defined(&d);
    if !report.is_ok() {
        let violations: Vec<String> = report.violations.iter().map(ToString::to_string).collect();
        let text = if c.json {
            json(&CheckJson { ok: false, violations })
        } else {
            violations.iter().map(|v| format!("{v}\n")).collect()
        };
        return Ok((text, EXIT_INVALID));
    }
    let t = match encode_all(&d, &options(c)) {
        Ok(t) => t,
        Err(e @ (EncodeError::RepairIndex { .. } | EncodeError::RepairChoice { .. } | EncodeError::UnknownNominal(_))) => {
            let text = if c.json {
                json(&CheckJson {
                    ok: false,
                    violations: vec![e.to_string()],
                })
            } else {
                format!("{e}\n")
            };
            return Ok((text, EXIT_INVALID));
        }
        Err(e) => return Err(e.into()),
    };
    let text = if c.json {
        json(&CheckJson {
            ok: true,
            violations: vec![],
        })
    } else {
        format!(
            "ok: {} laws, {} constraints, {} actions, {} constants\n",
            t.laws.len(),
            t.constraints.len(),
            t.actions.len(),
            t.universe.len()
        )
    };
    Ok((text, EXIT_OK))
}

#[derive(Serialize)]
struct LawJson {
    provenance: String,
    law: String,
}

#[derive(Serialize)]
struct EncodeJson {
    universe: Vec<String>,
    actions: Vec<String>,
    counts: BTreeMap<String, usize>,
    laws: Vec<LawJson>,
    constraints: Vec<String>,
}

fn encode_cmd(c: &Common) -> Result<(String, u8), CliError> {
    let t = encode_all(&load(c)?, &options(c))?;
    let mut groups: BTreeMap<Provenance, Vec<String>> = BTreeMap::new();
    for (p, r) in &t.laws {
        groups.entry(*p).or_default().push(r.to_string());
    }
    let text = if c.json {
        json(&EncodeJson {
            universe: t.universe.iter().map(ToString::to_string).collect(),
            actions: t.actions.iter().map(ToString::to_string).collect(),
            counts: groups.iter().map(|(p, ls)| (p.tag(), ls.len())).collect(),
            laws: t
                .laws
                .iter()
                .map(|(p, r)| LawJson {
                    provenance: p.tag(),
                    law: r.to_string(),
                })
                .collect(),
            constraints: t.constraints.iter().map(ToString::to_string).collect(),
        })
    } else {
        let mut s = String::new();
        for (p, ls) in &groups {
            let _ = writeln!(s, "% {p} ({})", ls.len());
            for l in ls {
                let _ = writeln!(s, "{l}");
            }
            s.push('\n');
        }
        if !t.constraints.is_empty() {
            let _ = writeln!(s, "% constraints ({})", t.constraints.len());
            for f in &t.constraints {
                let _ = writeln!(s, "constraint {f}.");
            }
        }
        s
    };
    Ok((text, EXIT_OK))
}

#[derive(Serialize)]
struct SolveJson {
    count: usize,
    extensions: Vec<TraceJson>,
}

fn solve_cmd(c: &Common, horizon: usize, seq: Option<&str>, prefixes: bool) -> Result<(String, u8), CliError> {
    let solver = Solver::new(&theory(c)?);
    let mut opts = match seq {
        Some(s) => SearchOptions::along(actions("actions", s)?),
        None => SearchOptions::new(horizon),
    };
    opts.exact_length = !prefixes;
    opts.weak_horizon = c.weak_horizon;
    let res = solver.extensions(&opts)?;
    let text = if c.json {
        json(&SolveJson {
            count: res.extensions.len(),
            extensions: res.extensions.iter().map(TraceJson::from).collect(),
        })
    } else {
        let mut s = format!("{} extensions\n", res.extensions.len());
        for (i, t) in res.extensions.iter().enumerate() {
            let _ = writeln!(s, "extension {}:", i + 1);
            write_trace(&mut s, t);
        }
        s
    };
    let code = if res.extensions.is_empty() { EXIT_NO } else { EXIT_OK };
    Ok((text, code))
}
