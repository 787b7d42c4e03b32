//! Command-line front end: evaluate expressions, check and search law
//! files, replay demonstrations, and run the self-test suite.
//!
//! Exit codes: 0 success, 1 a check found a counterexample or a find came up
//! empty, 2 usage or type errors, 3 resource limits.

use std::collections::HashMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use multirel::demos;
use multirel::error::{Error, Result};
use multirel::finsets::{ObjType, Universe};
use multirel::lawlab::{
    eval_term, parse_law_file, parse_term, run_law, typecheck_term, CheckOptions, Mode,
    SearchGoal, Verdict, DEFAULT_MAX_SPACE,
};
use multirel::mrcore;
use multirel::relcore::Relation;
use multirel::suite;

#[derive(Parser)]
#[command(name = "multirel", version, about = "finite multirelation calculator")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Sample,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate an expression against bound relations
    Eval {
        /// Base set cardinalities, e.g. "X=2,Y=2"
        #[arg(long)]
        sets: String,
        /// Relation bindings, e.g. 'R={(a,{a}),(a,{b})}' or
        /// 'R : X <-> P(Y) = {(a,{b})}'; repeatable
        #[arg(long)]
        bind: Vec<String>,
        /// Expression to evaluate
        #[arg(long)]
        expr: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Check every law in a file, hunting for counterexamples
    Check(SearchArgs),
    /// Search every law in a file for witnesses
    Find(SearchArgs),
    /// Replay a scripted demonstration
    Demo {
        /// Demo name, or "list" to enumerate
        name: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Run the built-in acceptance criteria
    Selftest {
        /// Only criteria whose name (or number) matches
        #[arg(long)]
        filter: Option<String>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Corrupt a core constant first; the suite must then fail
        #[arg(long, hide = true)]
        mutate: bool,
    },
}

#[derive(clap::Args)]
struct SearchArgs {
    /// Law file to run
    file: PathBuf,
    #[arg(long, value_enum, default_value = "exhaustive")]
    mode: ModeArg,
    /// Sample count in sample mode
    #[arg(long, default_value_t = 10_000)]
    samples: u64,
    /// RNG seed in sample mode
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads (0 = all cores)
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Only laws whose text contains this substring
    #[arg(long)]
    filter: Option<String>,
    /// Assignment space cap as a bit count
    #[arg(long, default_value_t = 24)]
    max_space: u32,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::SpaceTooLarge(_) | Error::CardinalityLimit(_) | Error::ResultTooLarge(_) => {
                    ExitCode::from(3)
                }
                _ => ExitCode::from(2),
            }
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Eval {
            sets,
            bind,
            expr,
            format,
        } => cmd_eval(&sets, &bind, &expr, format),
        Cmd::Check(args) => cmd_search(args, SearchGoal::Check),
        Cmd::Find(args) => cmd_search(args, SearchGoal::Find),
        Cmd::Demo { name, format } => cmd_demo(&name, format),
        Cmd::Selftest {
            filter,
            format,
            mutate,
        } => cmd_selftest(filter.as_deref(), format, mutate),
    }
}

// ---------------------------------------------------------------------- eval

fn parse_sets(spec: &str) -> Result<Vec<(String, usize)>> {
    let mut sets = Vec::new();
    for part in spec.split(',') {
        let part = part.trim();
        let (name, card) = part.split_once('=').ok_or_else(|| {
            Error::TypeError(format!("set declaration {part:?} is not NAME=CARD"))
        })?;
        let card: usize = card
            .trim()
            .parse()
            .map_err(|_| Error::TypeError(format!("bad cardinality in {part:?}")))?;
        sets.push((name.trim().to_string(), card));
    }
    Ok(sets)
}

/// Splits on commas that are not nested inside braces or parentheses.
fn split_top_level(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' | '{' => depth += 1,
            ')' | '}' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    if start < s.len() || !parts.is_empty() {
        parts.push(&s[start..]);
    }
    parts.into_iter().map(str::trim).filter(|p| !p.is_empty()).collect()
}

fn parse_element(universe: &Universe, t: &ObjType, s: &str) -> Result<usize> {
    let s = s.trim();
    match t {
        ObjType::Base(_) => universe.element_from_name(t, s),
        ObjType::Pow(inner) => {
            if s == "∅" || s == "{}" {
                return Ok(0);
            }
            let body = s
                .strip_prefix('{')
                .and_then(|s| s.strip_suffix('}'))
                .ok_or_else(|| {
                    Error::TypeError(format!("element {s:?} does not fit type {t}"))
                })?;
            let mut mask = 0usize;
            for item in split_top_level(body) {
                mask |= 1 << parse_element(universe, inner, item)?;
            }
            Ok(mask)
        }
    }
}

fn literal_pairs(literal: &str) -> Result<Vec<(String, String)>> {
    let body = literal
        .trim()
        .strip_prefix('{')
        .and_then(|s| s.strip_suffix('}'))
        .ok_or_else(|| Error::TypeError(format!("binding {literal:?} is not a set of pairs")))?;
    let mut out = Vec::new();
    for item in split_top_level(body) {
        let inner = item
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| Error::TypeError(format!("{item:?} is not a pair")))?;
        let parts = split_top_level(inner);
        if parts.len() != 2 {
            return Err(Error::TypeError(format!("{item:?} is not a pair")));
        }
        out.push((parts[0].to_string(), parts[1].to_string()));
    }
    Ok(out)
}

/// Picks the first declared base set whose elements cover every name in
/// `names`; `as_pow` wraps candidates in a powerset first.
fn infer_side(
    universe: &Universe,
    sets: &[(String, usize)],
    names: &[String],
    as_pow: bool,
) -> Result<ObjType> {
    for (name, _) in sets {
        let cand = if as_pow {
            ObjType::pow(ObjType::base(name))
        } else {
            ObjType::base(name)
        };
        if names
            .iter()
            .all(|n| parse_element(universe, &cand, n).is_ok())
        {
            return Ok(cand);
        }
    }
    Err(Error::TypeError(format!(
        "no declared set covers the elements {names:?}; bind with an explicit type"
    )))
}

fn parse_binding(
    universe: &Universe,
    sets: &[(String, usize)],
    binding: &str,
) -> Result<(String, Relation)> {
    let (head, literal) = binding.split_once('=').ok_or_else(|| {
        Error::TypeError(format!("binding {binding:?} is not NAME=LITERAL"))
    })?;
    let head = head.trim();
    let (name, typing) = match head.split_once(':') {
        None => (head, None),
        Some((n, t)) => (n.trim(), Some(t.trim())),
    };
    let pairs = literal_pairs(literal)?;
    let (src, tgt) = match typing {
        Some(t) => {
            let (s, g) = t.split_once("<->").ok_or_else(|| {
                Error::TypeError(format!("typing {t:?} is not SRC <-> TGT"))
            })?;
            (
                multirel::relcore::parse_objtype_name(s.trim())?,
                multirel::relcore::parse_objtype_name(g.trim())?,
            )
        }
        None => {
            let lefts: Vec<String> = pairs.iter().map(|(a, _)| a.clone()).collect();
            let rights: Vec<String> = pairs.iter().map(|(_, b)| b.clone()).collect();
            let src = infer_side(universe, sets, &lefts, false)?;
            let pow_like = rights
                .iter()
                .all(|r| r.starts_with('{') || r == "∅");
            let tgt = infer_side(universe, sets, &rights, pow_like)?;
            (src, tgt)
        }
    };
    let idx_pairs: Vec<(usize, usize)> = pairs
        .iter()
        .map(|(a, b)| {
            Ok((
                parse_element(universe, &src, a)?,
                parse_element(universe, &tgt, b)?,
            ))
        })
        .collect::<Result<_>>()?;
    Ok((
        name.to_string(),
        Relation::new(universe, src, tgt, idx_pairs)?,
    ))
}

fn cmd_eval(sets: &str, bindings: &[String], expr: &str, format: Format) -> Result<ExitCode> {
    let sets = parse_sets(sets)?;
    let spec: Vec<(&str, usize)> = sets.iter().map(|(n, k)| (n.as_str(), *k)).collect();
    let universe = Universe::declare(&spec)?;
    let mut env = HashMap::new();
    let mut vars = Vec::new();
    for b in bindings {
        let (name, rel) = parse_binding(&universe, &sets, b)?;
        vars.push((name.clone(), rel.src().clone(), rel.tgt().clone()));
        env.insert(name, rel);
    }
    let term = parse_term(expr)?;
    let (typed, _, _) = typecheck_term(&sets, &vars, &term)?;
    let value = eval_term(&universe, &typed, &env)?;
    match format {
        Format::Text => println!("{}", value.render(&universe)?),
        Format::Json => println!(
            "{}",
            json!({
                "expr": expr,
                "type": format!("{} <-> {}", value.src(), value.tgt()),
                "value": value.to_json(&universe)?,
            })
        ),
    }
    Ok(ExitCode::SUCCESS)
}

// -------------------------------------------------------------- check / find

fn cmd_search(args: SearchArgs, goal: SearchGoal) -> Result<ExitCode> {
    let src = std::fs::read_to_string(&args.file).map_err(|e| {
        Error::TypeError(format!("cannot read {}: {e}", args.file.display()))
    })?;
    let file = parse_law_file(&src)?;
    let spec: Vec<(&str, usize)> = file.sets.iter().map(|(n, k)| (n.as_str(), *k)).collect();
    let universe = Universe::declare(&spec)?;
    if args.max_space >= 128 {
        return Err(Error::SpaceTooLarge(format!(
            "space cap 2^{} exceeds the supported range",
            args.max_space
        )));
    }
    let opts = CheckOptions {
        mode: match args.mode {
            ModeArg::Exhaustive => Mode::Exhaustive,
            ModeArg::Sample => Mode::Sample {
                samples: args.samples,
                seed: args.seed,
            },
        },
        jobs: args.jobs,
        max_space: 1u128 << args.max_space,
    };
    let mut hit = false; // counterexample found / no witness found
    let mut ran = 0usize;
    for law in &file.laws {
        if let Some(f) = &args.filter {
            if !law.text.contains(f.as_str()) {
                continue;
            }
        }
        ran += 1;
        let report = run_law(&universe, &file, law, goal, &opts)?;
        match report.verdict {
            Verdict::Counterexample | Verdict::NoneFound => hit = true,
            Verdict::Valid | Verdict::Witness | Verdict::SampledPass => {}
        }
        match args.format {
            Format::Text => println!("{}", report.to_text(&universe)?),
            Format::Json => println!("{}", report.to_json(&universe)?),
        }
    }
    if ran == 0 {
        return Err(Error::TypeError("no law matched the filter".into()));
    }
    Ok(if hit {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

// ---------------------------------------------------------------------- demo

fn cmd_demo(name: &str, format: Format) -> Result<ExitCode> {
    if name == "list" {
        for n in demos::DEMO_NAMES {
            println!("{n}");
        }
        return Ok(ExitCode::SUCCESS);
    }
    let report = demos::run_demo(name)?;
    match format {
        Format::Text => {
            println!("{}: {}", report.name, if report.pass { "pass" } else { "FAIL" });
            for line in &report.lines {
                println!("  {line}");
            }
        }
        Format::Json => println!("{}", report.to_json()),
    }
    Ok(if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

// ------------------------------------------------------------------ selftest

fn cmd_selftest(filter: Option<&str>, format: Format, mutate: bool) -> Result<ExitCode> {
    if mutate {
        mrcore::set_mutation_hook(true);
    }
    let reports = suite::run_suite(filter);
    if reports.is_empty() {
        return Err(Error::TypeError("no criterion matched the filter".into()));
    }
    let all_pass = reports.iter().all(|r| r.pass);
    match format {
        Format::Text => {
            for r in &reports {
                println!("{}", r.to_text());
            }
            println!(
                "{} of {} criteria passed",
                reports.iter().filter(|r| r.pass).count(),
                reports.len()
            );
        }
        Format::Json => {
            for r in &reports {
                println!("{}", r.to_json());
            }
        }
    }
    Ok(if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

// keep the engine's default cap referenced so the CLI and library agree
const _: () = assert!(DEFAULT_MAX_SPACE == 1 << 24);
