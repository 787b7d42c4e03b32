//! Exhaustive and sampled search over assignment spaces, with deterministic
//! chunked parallelism: chunks are scanned in order, evaluated in parallel,
//! and the canonically smallest finding in the earliest hitting chunk wins,
//! so reports are identical for any worker count.

use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::finsets::{ObjType, Universe};
use crate::lawlab::ast::{Law, LawFile};
use crate::lawlab::eval::{eval_formula, Env};
use crate::lawlab::typecheck::{typecheck_formula, TFormula};
use crate::relcore::Relation;

pub const DEFAULT_MAX_SPACE: u128 = 1 << 24;
const CHUNK: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exhaustive,
    Sample { samples: u64, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchGoal {
    /// Universal check: hunt for a falsifying assignment.
    Check,
    /// Existential search: hunt for a satisfying assignment.
    Find,
}

#[derive(Debug, Clone, Copy)]
pub struct CheckOptions {
    pub mode: Mode,
    pub jobs: usize,
    pub max_space: u128,
}

impl Default for CheckOptions {
    fn default() -> CheckOptions {
        CheckOptions {
            mode: Mode::Exhaustive,
            jobs: 0,
            max_space: DEFAULT_MAX_SPACE,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    Counterexample,
    Witness,
    NoneFound,
    SampledPass,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Valid => "valid",
            Verdict::Counterexample => "counterexample",
            Verdict::Witness => "witness",
            Verdict::NoneFound => "none_found",
            Verdict::SampledPass => "sampled_pass",
        }
    }
}

#[derive(Debug, Clone)]
pub struct LawReport {
    pub law: String,
    pub verdict: Verdict,
    pub space: u128,
    pub checked: u64,
    pub binding: Option<Vec<(String, Relation)>>,
    pub seed: Option<u64>,
    pub elapsed_ms: u128,
}

impl LawReport {
    pub fn to_json(&self, universe: &Universe) -> Result<Value> {
        let binding = match &self.binding {
            None => Value::Null,
            Some(pairs) => {
                let mut map = serde_json::Map::new();
                for (name, r) in pairs {
                    map.insert(name.clone(), r.to_json(universe)?);
                }
                Value::Object(map)
            }
        };
        let mut doc = json!({
            "law": self.law,
            "verdict": self.verdict.name(),
            "space": self.space as u64,
            "checked": self.checked,
            "binding": binding,
            "elapsed_ms": self.elapsed_ms as u64,
        });
        if let Some(seed) = self.seed {
            doc["seed"] = json!(seed);
        }
        Ok(doc)
    }

    pub fn to_text(&self, universe: &Universe) -> Result<String> {
        let mut out = format!(
            "{}: {} (space {}, checked {})",
            self.law,
            self.verdict.name(),
            self.space,
            self.checked
        );
        if let Some(binding) = &self.binding {
            for (name, r) in binding {
                out.push_str(&format!("\n  {name} = {}", r.render(universe)?));
            }
        }
        Ok(out)
    }
}

struct SearchVar {
    name: String,
    src: ObjType,
    tgt: ObjType,
    bits: u32,
}

/// Product over variables of 2^(|src|·|tgt|).
pub fn estimate_space(
    universe: &Universe,
    vars: &[(String, ObjType, ObjType)],
) -> Result<u128> {
    let mut space: u128 = 1;
    for (name, src, tgt) in vars {
        let bits = (universe.card(src)? * universe.card(tgt)?) as u32;
        if bits > 63 {
            return Err(Error::SpaceTooLarge(format!(
                "variable {name} alone ranges over 2^{bits} relations"
            )));
        }
        space = space.checked_mul(1u128 << bits).ok_or_else(|| {
            Error::SpaceTooLarge("assignment space exceeds 2^127".into())
        })?;
    }
    Ok(space)
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::SpaceTooLarge(format!("cannot build thread pool: {e}")))
}

/// Decodes a global index into an environment. The first declared variable
/// occupies the most significant bits, so ascending indices enumerate
/// bindings lexicographically by declaration order and relation encoding.
fn decode(
    universe: &Universe,
    vars: &[SearchVar],
    mut index: u128,
    base_env: &Env,
) -> Result<Env> {
    let mut env = base_env.clone();
    for v in vars.iter().rev() {
        let radix = 1u128 << v.bits;
        let code = (index % radix) as u128;
        index /= radix;
        env.insert(
            v.name.clone(),
            Relation::from_encoding(universe, v.src.clone(), v.tgt.clone(), code)?,
        );
    }
    Ok(env)
}

fn eval_at(
    universe: &Universe,
    vars: &[SearchVar],
    body: &TFormula,
    index: u128,
    base_env: &Env,
) -> Result<bool> {
    let mut env = decode(universe, vars, index, base_env)?;
    eval_formula(universe, body, &mut env)
}

/// Scans `indices` (an ordered list of global indices) chunk by chunk and
/// returns the first index at which the body evaluates to `target`.
fn scan<I>(
    universe: &Universe,
    vars: &[SearchVar],
    body: &TFormula,
    target: bool,
    base_env: &Env,
    indices: I,
    jobs: usize,
) -> Result<(Option<u128>, u64)>
where
    I: Iterator<Item = u128>,
{
    use rayon::prelude::*;
    let pool = pool(jobs)?;
    let mut checked: u64 = 0;
    let mut chunk = Vec::with_capacity(CHUNK);
    let mut iter = indices.peekable();
    while iter.peek().is_some() {
        chunk.clear();
        chunk.extend(iter.by_ref().take(CHUNK));
        let results: Vec<Result<bool>> = pool.install(|| {
            chunk
                .par_iter()
                .map(|&idx| eval_at(universe, vars, body, idx, base_env))
                .collect()
        });
        for (offset, res) in results.into_iter().enumerate() {
            checked += 1;
            if res? == target {
                return Ok((Some(chunk[offset]), checked));
            }
        }
    }
    Ok((None, checked))
}

/// Runs one law. `goal` selects counterexample search (check) or witness
/// search (find). Leading existential quantifiers become search variables in
/// find mode; remaining free variables are search variables in both modes.
pub fn run_law(
    universe: &Universe,
    file: &LawFile,
    law: &Law,
    goal: SearchGoal,
    opts: &CheckOptions,
) -> Result<LawReport> {
    let start = Instant::now();
    let (typed, free) = typecheck_formula(&file.sets, &file.vars, &law.formula)?;
    // In find mode leading existential binders become search variables and
    // precede the free variables in the search order.
    let (binders, body) = match goal {
        SearchGoal::Find => typed.strip_leading_exists(),
        SearchGoal::Check => (Vec::new(), typed),
    };
    let mut search_vars_raw = binders;
    search_vars_raw.extend(free);

    let mut vars = Vec::with_capacity(search_vars_raw.len());
    for (name, src, tgt) in &search_vars_raw {
        let bits = (universe.card(src)? * universe.card(tgt)?) as u32;
        if bits > 63 {
            return Err(Error::SpaceTooLarge(format!(
                "variable {name} alone ranges over 2^{bits} relations"
            )));
        }
        vars.push(SearchVar {
            name: name.clone(),
            src: src.clone(),
            tgt: tgt.clone(),
            bits,
        });
    }
    let space = estimate_space(universe, &search_vars_raw)?;
    let target = match goal {
        SearchGoal::Check => false,
        SearchGoal::Find => true,
    };
    let base_env = Env::new();

    let (found, checked, seed) = match opts.mode {
        Mode::Exhaustive => {
            if space > opts.max_space {
                return Err(Error::SpaceTooLarge(format!(
                    "assignment space {space} exceeds cap {}; try sample mode",
                    opts.max_space
                )));
            }
            let (found, checked) = scan(
                universe,
                &vars,
                &body,
                target,
                &base_env,
                0..space,
                opts.jobs,
            )?;
            (found, checked, None)
        }
        Mode::Sample { samples, seed } => {
            // indices pregenerated sequentially so results are independent
            // of worker count
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let picks: Vec<u128> = (0..samples)
                .map(|_| {
                    let mut idx: u128 = 0;
                    for v in &vars {
                        let code = rng.gen_range(0..1u64 << v.bits) as u128;
                        idx = (idx << v.bits) | code;
                    }
                    idx
                })
                .collect();
            let (found, checked) = scan(
                universe,
                &vars,
                &body,
                target,
                &base_env,
                picks.into_iter(),
                opts.jobs,
            )?;
            (found, checked, Some(seed))
        }
    };

    let binding = match found {
        None => None,
        Some(idx) => {
            let env = decode(universe, &vars, idx, &base_env)?;
            // soundness: the reported binding must reproduce the verdict
            let mut env_check = env.clone();
            debug_assert_eq!(eval_formula(universe, &body, &mut env_check)?, target);
            Some(
                vars.iter()
                    .map(|v| (v.name.clone(), env[&v.name].clone()))
                    .collect::<Vec<_>>(),
            )
        }
    };
    let verdict = match (goal, &binding, opts.mode) {
        (SearchGoal::Check, Some(_), _) => Verdict::Counterexample,
        (SearchGoal::Check, None, Mode::Exhaustive) => Verdict::Valid,
        (SearchGoal::Check, None, Mode::Sample { .. }) => Verdict::SampledPass,
        (SearchGoal::Find, Some(_), _) => Verdict::Witness,
        (SearchGoal::Find, None, _) => Verdict::NoneFound,
    };
    Ok(LawReport {
        law: law.text.clone(),
        verdict,
        space,
        checked,
        binding,
        seed,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lawlab::parser::parse_law_file;

    fn check_file(src: &str, goal: SearchGoal, opts: &CheckOptions) -> Vec<LawReport> {
        let file = parse_law_file(src).unwrap();
        let sets: Vec<(&str, usize)> = file
            .sets
            .iter()
            .map(|(n, c)| (n.as_str(), *c))
            .collect();
        let universe = Universe::declare(&sets).unwrap();
        file.laws
            .iter()
            .map(|law| run_law(&universe, &file, law, goal, opts).unwrap())
            .collect()
    }

    #[test]
    fn exhaustive_check_valid_and_counterexample() {
        let src = "\
set X = 1 set Y = 2
var R : X <-> P(Y) var S : X <-> P(Y)
law (R icup S)^i = R^i icap S^i
law R icup R = R
";
        let reports = check_file(src, SearchGoal::Check, &CheckOptions::default());
        assert_eq!(reports[0].verdict, Verdict::Valid);
        assert_eq!(reports[0].space, 256);
        assert_eq!(reports[0].checked, 256);
        assert_eq!(reports[1].verdict, Verdict::Counterexample);
        // canonically smallest counterexample
        let (name, witness) = &reports[1].binding.as_ref().unwrap()[0];
        assert_eq!(name, "R");
        assert_eq!(witness.pairs(), &[(0, 1), (0, 2)]);
    }

    #[test]
    fn find_witness() {
        let src = "\
set X = 1 set Y = 2
var R : X <-> P(Y)
law not (R icup R = R)
law R != R
";
        let reports = check_file(src, SearchGoal::Find, &CheckOptions::default());
        assert_eq!(reports[0].verdict, Verdict::Witness);
        let (_, witness) = &reports[0].binding.as_ref().unwrap()[0];
        assert_eq!(witness.pairs(), &[(0, 1), (0, 2)]);
        assert_eq!(reports[1].verdict, Verdict::NoneFound);
        assert_eq!(reports[1].checked, 16);

        // leading existentials become search variables
        let src = "\
set X = 1 set Y = 2
law exists R : X <-> P(Y) . R icap R != R
";
        let reports = check_file(src, SearchGoal::Find, &CheckOptions::default());
        assert_eq!(reports[0].verdict, Verdict::Witness);
        assert_eq!(reports[0].space, 16);
        let (_, witness) = &reports[0].binding.as_ref().unwrap()[0];
        assert_eq!(witness.pairs(), &[(0, 1), (0, 2)]);
    }

    #[test]
    fn peleg_weak_associativity() {
        let src = "\
set X = 1
var R : X <-> P(X) var S : X <-> P(X) var T : X <-> P(X)
law (R * S) * T <= R * (S * T)
";
        let reports = check_file(src, SearchGoal::Check, &CheckOptions::default());
        assert_eq!(reports[0].verdict, Verdict::Valid);
        assert_eq!(reports[0].space, 64);
    }

    #[test]
    fn space_cap_and_sampling() {
        let src = "\
set X = 2
var R : X <-> P(X) var S : X <-> P(X) var T : X <-> P(X)
law (R * S) * T <= R * (S * T)
";
        let file = parse_law_file(src).unwrap();
        let universe = Universe::declare(&[("X", 2)]).unwrap();
        let opts = CheckOptions {
            max_space: 1 << 20,
            ..CheckOptions::default()
        };
        assert!(matches!(
            run_law(&universe, &file, &file.laws[0], SearchGoal::Check, &opts),
            Err(Error::SpaceTooLarge(_))
        ));
        let opts = CheckOptions {
            mode: Mode::Sample {
                samples: 500,
                seed: 11,
            },
            ..CheckOptions::default()
        };
        let rep = run_law(&universe, &file, &file.laws[0], SearchGoal::Check, &opts).unwrap();
        assert_eq!(rep.verdict, Verdict::SampledPass);
        assert_eq!(rep.checked, 500);
        assert_eq!(rep.seed, Some(11));
    }

    #[test]
    fn deterministic_across_jobs() {
        let src = "\
set X = 2
var R : X <-> P(X) var S : X <-> P(X)
law up(R icap S) = up(R) icap up(S)
law R * S = S * R
";
        let file = parse_law_file(src).unwrap();
        let universe = Universe::declare(&[("X", 2)]).unwrap();
        for law in &file.laws {
            let mut reports = Vec::new();
            for jobs in [1, 8] {
                let opts = CheckOptions {
                    jobs,
                    ..CheckOptions::default()
                };
                let mut rep =
                    run_law(&universe, &file, law, SearchGoal::Check, &opts).unwrap();
                rep.elapsed_ms = 0;
                reports.push(
                    serde_json::to_string(&rep.to_json(&universe).unwrap()).unwrap(),
                );
            }
            assert_eq!(reports[0], reports[1]);
        }
    }
}
