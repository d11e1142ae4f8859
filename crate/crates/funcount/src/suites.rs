//! Verification suites: each instance evaluates both sides of an exact
//! identity. Instances run in parallel and are reported in index order.

use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use funcount_core::circuit::structure_to_circuit;
use funcount_core::formula::{classify_fragment, Term};
use funcount_core::model::{string_structure_with, Builtin};
use funcount_core::transforms::{
    build_dnf_structure, check_claim, cnf_to_dnf_count, count_dnf_by_logic, denest_functions, deskolemize,
    dnf_reduction_report, relations_to_functions, skolemize, succ_formula, to_pi1, Pass, TransformReport,
};
use funcount_core::{
    apply_interpretation, circuit_from_prenex, count_functional, count_skolem, models, parity_interpretation,
    sigma0_closed_form, Assignment, BigCount, BitString, FunctionTable, Query, Structure, Vocabulary,
};
use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::corpus;
use crate::formats::{print_cnf, print_dnf, print_structure};
use crate::gen::{all_structures, instance_rng, random_cnf, random_dnf, random_prenex_sentence, random_structure};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    FoEqPi1,
    RelEqFunc,
    SkolemEqPrefix,
    SkolemEqProoftrees,
    Sigma0ClosedForm,
    SuccUnique,
    DnfExample,
    DnfFuncReduction,
    CnfDnfReduction,
    L1Skolem,
    Parity,
}

impl Suite {
    pub const ALL: [Suite; 11] = [
        Suite::FoEqPi1,
        Suite::RelEqFunc,
        Suite::SkolemEqPrefix,
        Suite::SkolemEqProoftrees,
        Suite::Sigma0ClosedForm,
        Suite::SuccUnique,
        Suite::DnfExample,
        Suite::DnfFuncReduction,
        Suite::CnfDnfReduction,
        Suite::L1Skolem,
        Suite::Parity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::FoEqPi1 => "fo-eq-pi1",
            Suite::RelEqFunc => "rel-eq-func",
            Suite::SkolemEqPrefix => "skolem-eq-prefix",
            Suite::SkolemEqProoftrees => "skolem-eq-prooftrees",
            Suite::Sigma0ClosedForm => "sigma0-closed-form",
            Suite::SuccUnique => "succ-unique",
            Suite::DnfExample => "dnf-example",
            Suite::DnfFuncReduction => "dnf-func-reduction",
            Suite::CnfDnfReduction => "cnf-dnf-reduction",
            Suite::L1Skolem => "l1-skolem",
            Suite::Parity => "parity",
        }
    }

    /// Universe sizes, or variable counts for the propositional suites.
    pub fn default_sizes(self) -> RangeInclusive<usize> {
        match self {
            Suite::FoEqPi1 | Suite::Sigma0ClosedForm => 1..=3,
            Suite::RelEqFunc | Suite::SkolemEqPrefix | Suite::SkolemEqProoftrees | Suite::L1Skolem => 2..=3,
            Suite::SuccUnique => 1..=5,
            Suite::DnfExample | Suite::CnfDnfReduction => 1..=4,
            Suite::DnfFuncReduction => 2..=2,
            Suite::Parity => 2..=5,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Usage(format!("unknown suite `{s}`")))
    }
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub sizes: RangeInclusive<usize>,
    pub seed: u64,
    pub budget: u64,
}

/// One checked identity. Sweeps over all structures of a size report the
/// per-structure counts comma-separated, in encoding order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Instance {
    pub index: usize,
    pub label: String,
    pub lhs: String,
    pub rhs: String,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(skip)]
    witness: Option<Counterexample>,
}

/// The first failing case of an instance, in full.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub instance: usize,
    pub structure: String,
    pub formula: String,
    pub lhs: String,
    pub rhs: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub sizes: String,
    pub seed: u64,
    pub checked: usize,
    pub failed: usize,
    pub instances: Vec<Instance>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

type Job<'a> = Box<dyn Fn() -> Result<Instance> + Send + Sync + 'a>;

struct Case {
    structure: String,
    formula: String,
    lhs: BigCount,
    rhs: BigCount,
    note: Option<String>,
}

impl Case {
    fn holds(&self) -> bool {
        self.lhs == self.rhs && self.note.is_none()
    }
}

fn single(label: String, case: Case) -> Instance {
    sweep(label, vec![case])
}

fn sweep(label: String, cases: Vec<Case>) -> Instance {
    let join = |f: fn(&Case) -> &BigCount| cases.iter().map(|c| f(c).to_string()).collect::<Vec<_>>().join(",");
    let failing = cases.iter().find(|c| !c.holds());
    Instance {
        index: 0,
        label,
        lhs: join(|c| &c.lhs),
        rhs: join(|c| &c.rhs),
        holds: failing.is_none(),
        note: failing.and_then(|c| c.note.clone()),
        witness: failing.map(|c| Counterexample {
            instance: 0,
            structure: c.structure.clone(),
            formula: c.formula.clone(),
            lhs: c.lhs.to_string(),
            rhs: c.rhs.to_string(),
            note: c.note.clone(),
        }),
    }
}

pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Result<SuiteReport> {
    if cfg.sizes.is_empty() || *cfg.sizes.start() == 0 {
        return Err(Error::Usage(format!(
            "sizes {}..{} must be a non-empty range of positive numbers",
            cfg.sizes.start(),
            cfg.sizes.end()
        )));
    }
    let jobs = match suite {
        Suite::FoEqPi1 => fo_eq_pi1(cfg),
        Suite::RelEqFunc => rel_eq_func(cfg),
        Suite::SkolemEqPrefix => skolem_suite(cfg, false),
        Suite::SkolemEqProoftrees => skolem_suite(cfg, true),
        Suite::Sigma0ClosedForm => sigma0(cfg),
        Suite::SuccUnique => succ_unique(cfg),
        Suite::DnfExample => dnf_example(cfg),
        Suite::DnfFuncReduction => dnf_func_reduction(cfg),
        Suite::CnfDnfReduction => cnf_dnf_reduction(cfg),
        Suite::L1Skolem => l1_skolem(cfg),
        Suite::Parity => parity(cfg),
    };
    let mut instances = jobs.par_iter().map(|job| job()).collect::<Result<Vec<_>>>()?;
    for (i, inst) in instances.iter_mut().enumerate() {
        inst.index = i;
        if let Some(w) = &mut inst.witness {
            w.instance = i;
        }
    }
    let counterexample = instances.iter().find_map(|i| i.witness.clone());
    Ok(SuiteReport {
        suite: suite.name().to_string(),
        sizes: format!("{}..{}", cfg.sizes.start(), cfg.sizes.end()),
        seed: cfg.seed,
        checked: instances.len(),
        failed: instances.iter().filter(|i| !i.holds).count(),
        instances,
        counterexample,
    })
}

fn claim_sweep(
    cfg: &SuiteConfig,
    sources: &'static [&'static str],
    vocab: Vocabulary,
    pass: fn(&Query) -> funcount_core::Result<TransformReport>,
) -> Vec<Job<'static>> {
    let budget = cfg.budget;
    let mut jobs: Vec<Job> = Vec::new();
    for (k, q) in corpus::parse_all(sources, &vocab).into_iter().enumerate() {
        for n in cfg.sizes.clone() {
            let (q, vocab) = (q.clone(), vocab.clone());
            jobs.push(Box::new(move || {
                let report = pass(&q)?;
                let names = report.input.names();
                let note = if let Some(d) = report.fresh.iter().find(|d| names.contains(&d.name)) {
                    Some(format!("fresh symbol `{}` collides with the input", d.name))
                } else if report.pass == Pass::ToPi1 && !classify_fragment(&report.output.body).alternation.within_pi(1) {
                    Some("output is not Pi1".to_string())
                } else {
                    None
                };
                let mut cases = Vec::new();
                for a in all_structures(&vocab, n) {
                    let check = check_claim(&report, &a, budget)?;
                    cases.push(Case {
                        structure: print_structure(&a),
                        formula: report.input.to_string(),
                        lhs: check.lhs,
                        rhs: check.rhs,
                        note: note.clone(),
                    });
                }
                Ok(sweep(format!("{} formula {k}, n={n}: {}", report.pass, q.body), cases))
            }));
        }
    }
    jobs
}

fn fo_eq_pi1(cfg: &SuiteConfig) -> Vec<Job<'static>> {
    let mut jobs = claim_sweep(cfg, &corpus::FO_UNARY, corpus::unary_vocabulary(), to_pi1);
    jobs.extend(claim_sweep(cfg, &corpus::FO_GRAPH, corpus::graph_vocabulary(), to_pi1));
    jobs
}

fn rel_eq_func(cfg: &SuiteConfig) -> Vec<Job<'static>> {
    let mut jobs = claim_sweep(cfg, &corpus::REL_UNARY, corpus::unary_vocabulary(), relations_to_functions);
    jobs.extend(claim_sweep(cfg, &corpus::REL_GRAPH, corpus::graph_vocabulary(), relations_to_functions));
    jobs
}

/// Instances per size for the random prenex suites.
pub const PRENEX_PER_SIZE: usize = 100;

fn skolem_suite(cfg: &SuiteConfig, circuits: bool) -> Vec<Job<'static>> {
    let (seed, budget) = (cfg.seed, cfg.budget);
    let vocab = corpus::mixed_vocabulary();
    let mut jobs: Vec<Job> = Vec::new();
    for (s, n) in cfg.sizes.clone().enumerate() {
        for j in 0..PRENEX_PER_SIZE {
            let vocab = vocab.clone();
            let index = (s * PRENEX_PER_SIZE + j) as u64;
            jobs.push(Box::new(move || {
                let mut rng = instance_rng(seed, index);
                let a = random_structure(&mut rng, &vocab, n);
                let q = random_prenex_sentence(&mut rng, &vocab, 3);
                let lhs = count_skolem(&a, &q, budget)?;
                let (rhs, note) = if circuits {
                    let c = circuit_from_prenex(&a, &q)?;
                    (c.count_proof_trees(), None)
                } else {
                    let r = skolemize(&q)?;
                    let rhs = count_functional(&a, &r.output, budget)?;
                    let back = deskolemize(&r.output)?;
                    let mut note = None;
                    if !classify_fragment(&r.output.body).prefix_restricted {
                        note = Some("skolemized output is not prefix-restricted".to_string());
                    } else if back.output.canonical().body != q.canonical().body {
                        note = Some(format!("round trip gave {}", back.output.body));
                    } else if count_skolem(&a, &back.output, budget)? != rhs {
                        note = Some("deskolemized count differs".to_string());
                    }
                    (rhs, note)
                };
                Ok(single(
                    format!("n={n} #{j}: {}", q.body),
                    Case {
                        structure: print_structure(&a),
                        formula: q.to_string(),
                        lhs,
                        rhs,
                        note,
                    },
                ))
            }));
        }
    }
    jobs
}

/// `n` raised to the number of table entries no application can reach:
/// `Σ_F max(0, n^arity(F) − m_F)` with `m_F` the distinct applications of `F`.
pub fn divisibility_unit(q: &Query, n: usize) -> BigCount {
    let mut exponent = 0;
    for d in &q.sig.funvars {
        let mut seen: Vec<&Term> = Vec::new();
        q.body.for_each_term(&mut |t| {
            if matches!(t, Term::App(f, _) if *f == d.name) && !seen.contains(&t) {
                seen.push(t);
            }
        });
        exponent += n.pow(d.arity as u32).saturating_sub(seen.len());
    }
    BigUint::from(n).pow(exponent as u32)
}

fn sigma0(cfg: &SuiteConfig) -> Vec<Job<'static>> {
    let budget = cfg.budget;
    let vocab = corpus::unary_vocabulary();
    let mut jobs: Vec<Job> = Vec::new();
    for (k, q) in corpus::parse_all(&corpus::SIGMA0, &vocab).into_iter().enumerate() {
        for n in cfg.sizes.clone() {
            let (q, vocab) = (q.clone(), vocab.clone());
            jobs.push(Box::new(move || {
                let flat = denest_functions(&q)?.output;
                let unit = divisibility_unit(&flat, n);
                let mut cases = Vec::new();
                for a in all_structures(&vocab, n) {
                    let lhs = count_functional(&a, &q, budget)?;
                    let rhs = sigma0_closed_form(&a, &flat, budget)?;
                    let zero = BigUint::from(0u32);
                    let note = (lhs != zero && &lhs % &unit != zero).then(|| format!("{lhs} is not divisible by {unit}"));
                    cases.push(Case {
                        structure: print_structure(&a),
                        formula: q.to_string(),
                        lhs,
                        rhs,
                        note,
                    });
                }
                Ok(sweep(format!("sigma0 formula {k}, n={n}, unit {unit}: {}", q.body), cases))
            }));
        }
    }
    jobs
}

fn succ_unique(cfg: &SuiteConfig) -> Vec<Job<'static>> {
    let budget = cfg.budget;
    cfg.sizes
        .clone()
        .map(|n| -> Job {
            Box::new(move || {
                let vocab = Vocabulary::new().with_builtins([Builtin::Lt, Builtin::Min, Builtin::Max]);
                let a = Structure::empty(vocab.clone(), n)?;
                let f = succ_formula(&vocab)?;
                let lhs = count_functional(&a, &f, budget)?;
                let s = (0..n).map(|e| (e + 1).min(n - 1)).collect();
                let p = (0..n).map(|e| e.saturating_sub(1)).collect();
                let alpha = Assignment::new()
                    .function("s", FunctionTable::new(1, s))
                    .function("p", FunctionTable::new(1, p));
                let note = (!models(&a, &f, &alpha)?).then(|| "successor and predecessor do not satisfy the formula".to_string());
                Ok(single(
                    format!("n={n}"),
                    Case {
                        structure: print_structure(&a),
                        formula: f.to_string(),
                        lhs,
                        rhs: 1u32.into(),
                        note,
                    },
                ))
            })
        })
        .collect()
}

/// Instance counts of the propositional suites.
pub const DNF_INSTANCES: usize = 20;
pub const REDUCTION_INSTANCES: usize = 10;
pub const CNF_INSTANCES: usize = 20;

fn dnf_example(cfg: &SuiteConfig) -> Vec<Job<'static>> {
    let (seed, budget, sizes) = (cfg.seed, cfg.budget, cfg.sizes.clone());
    (0..DNF_INSTANCES)
        .map(|i| -> Job {
            let sizes = sizes.clone();
            Box::new(move || {
                let mut rng = instance_rng(seed, i as u64);
                let vars = rng.gen_range(sizes.clone());
                let d = random_dnf(&mut rng, vars, 5);
                let lhs = count_dnf_by_logic(&d, budget)?;
                Ok(single(
                    format!("dnf #{i} over {} variables", d.vars),
                    Case {
                        structure: print_structure(&build_dnf_structure(&d)?),
                        formula: print_dnf(&d),
                        lhs,
                        rhs: d.count_models().into(),
                        note: None,
                    },
                ))
            })
        })
        .collect()
}

fn dnf_func_reduction(cfg: &SuiteConfig) -> Vec<Job<'static>> {
    let (seed, budget, sizes) = (cfg.seed, cfg.budget, cfg.sizes.clone());
    (0..REDUCTION_INSTANCES)
        .map(|i| -> Job {
            let sizes = sizes.clone();
            Box::new(move || {
                let mut rng = instance_rng(seed, i as u64);
                let vars = rng.gen_range(sizes.clone());
                let d = random_dnf(&mut rng, vars, 4);
                let a = build_dnf_structure(&d)?;
                let check = check_claim(&dnf_reduction_report(), &a, budget)?;
                Ok(single(
                    format!("dnf #{i} over {} variables, {} models", d.vars, d.count_models()),
                    Case {
                        structure: print_structure(&a),
                        formula: print_dnf(&d),
                        lhs: check.lhs,
                        rhs: check.rhs,
                        note: None,
                    },
                ))
            })
        })
        .collect()
}

fn cnf_dnf_reduction(cfg: &SuiteConfig) -> Vec<Job<'static>> {
    let (seed, budget, sizes) = (cfg.seed, cfg.budget, cfg.sizes.clone());
    (0..CNF_INSTANCES)
        .map(|i| -> Job {
            let sizes = sizes.clone();
            Box::new(move || {
                let mut rng = instance_rng(seed, i as u64);
                let vars = rng.gen_range(sizes.clone());
                let c = random_cnf(&mut rng, vars, 5);
                let lhs = cnf_to_dnf_count(&c, |d| count_dnf_by_logic(d, budget))?;
                Ok(single(
                    format!("cnf #{i} over {} variables", c.vars),
                    Case {
                        structure: print_structure(&build_dnf_structure(&c.negate())?),
                        formula: print_cnf(&c),
                        lhs,
                        rhs: c.count_models().into(),
                        note: None,
                    },
                ))
            })
        })
        .collect()
}

/// Largest edge count swept by the l1 suite.
pub const L1_MAX_EDGES: usize = 4;

/// The l1 fixture: `c = 0`, `d = 1` and `edges` chosen by `rng`.
pub fn l1_structure(rng: &mut impl Rng, n: usize, edges: usize) -> Result<Structure> {
    let mut pairs: Vec<[usize; 2]> = (0..n).flat_map(|x| (0..n).map(move |y| [x, y])).collect();
    pairs.shuffle(rng);
    let mut a = Structure::empty(corpus::l1_vocabulary(), n)?;
    for p in &pairs[..edges] {
        a.insert("E", p)?;
    }
    a.set_constant("c", 0)?;
    a.set_constant("d", 1)?;
    Ok(a)
}

fn l1_skolem(cfg: &SuiteConfig) -> Vec<Job<'static>> {
    let (seed, budget) = (cfg.seed, cfg.budget);
    let mut jobs: Vec<Job> = Vec::new();
    for n in cfg.sizes.clone() {
        for edges in (0..=L1_MAX_EDGES).filter(|&k| k <= n * n) {
            let index = jobs.len() as u64;
            jobs.push(Box::new(move || {
                if n < 2 {
                    return Err(Error::Usage("l1 needs c and d distinct, so n >= 2".into()));
                }
                let a = l1_structure(&mut instance_rng(seed, index), n, edges)?;
                let q = corpus::l1_formula();
                let lhs = count_skolem(&a, &q, budget)?;
                let trees = circuit_from_prenex(&a, &q)?.count_proof_trees();
                let note = (trees != lhs).then(|| format!("circuit has {trees} proof trees"));
                Ok(single(
                    format!("n={n} |E|={edges}"),
                    Case {
                        structure: print_structure(&a),
                        formula: q.to_string(),
                        lhs,
                        rhs: BigUint::from(2u32).pow(edges as u32),
                        note,
                    },
                ))
            }));
        }
    }
    jobs
}

fn parity(cfg: &SuiteConfig) -> Vec<Job<'static>> {
    let seed = cfg.seed;
    cfg.sizes
        .clone()
        .map(|n| -> Job {
            Box::new(move || {
                let mut rng = instance_rng(seed, n as u64);
                let w = BitString((0..n).map(|_| rng.gen_bool(0.5)).collect());
                let i = parity_interpretation();
                let a = string_structure_with(&w, i.source().builtins().iter().copied())?;
                let b = apply_interpretation(&i, &a)?;
                let lhs = structure_to_circuit(&b)?.count_proof_trees();
                Ok(single(
                    format!("w={w}"),
                    Case {
                        structure: print_structure(&b),
                        formula: crate::formats::print_interpretation(&i),
                        lhs,
                        rhs: u32::from(n % 2 == 0).into(),
                        note: None,
                    },
                ))
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(sizes: RangeInclusive<usize>) -> SuiteConfig {
        SuiteConfig {
            sizes,
            seed: 0,
            budget: funcount_core::DEFAULT_BUDGET,
        }
    }

    #[test]
    fn names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn small_suites_pass() {
        for s in [Suite::SuccUnique, Suite::DnfExample, Suite::Parity, Suite::L1Skolem] {
            let r = run_suite(s, &cfg(s.default_sizes())).unwrap();
            assert!(r.passed(), "{s}: {r:?}");
        }
    }

    #[test]
    fn parity_values() {
        let r = run_suite(Suite::Parity, &cfg(2..=5)).unwrap();
        let counts: Vec<&str> = r.instances.iter().map(|i| i.lhs.as_str()).collect();
        assert_eq!(counts, ["1", "0", "1", "0"]);
    }

    #[test]
    fn divisibility_unit_counts_unused_cells() {
        let q = funcount_core::parse_query("funvar F/1; F(min) = F(max)", None).unwrap();
        assert_eq!(divisibility_unit(&q, 3), 3u32.into());
        assert_eq!(divisibility_unit(&q, 1), 1u32.into());
    }

    #[test]
    fn rejects_empty_sizes() {
        assert!(run_suite(Suite::Parity, &cfg(0..=2)).is_err());
        #[allow(clippy::reversed_empty_ranges)]
        let empty = 3..=2;
        assert!(run_suite(Suite::Parity, &cfg(empty)).is_err());
    }
}
