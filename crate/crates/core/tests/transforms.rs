mod common;

use common::{naive_models, unary_structures, Choices, Pool};
use funcount_core::formula::{classify_fragment, prefix_of, Alternation, Formula, Quantifier};
use funcount_core::prop::{Cnf, Dnf, Literal};
use funcount_core::transforms::{
    build_dnf_structure, check_claim, cnf_to_dnf_count, count_dnf_by_logic, deskolemize, dnf_reduction_report, skolemize,
    to_pi1, unique_witness, Pass, TransformReport,
};
use funcount_core::{
    circuit_from_prenex, count_functional, count_skolem, Assignment, Error, Query, Structure, DEFAULT_BUDGET,
};
use proptest::prelude::*;

fn choices() -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(any::<u32>(), 1..96)
}

fn sentence_pool() -> Pool {
    Pool {
        rels: vec![("P", 1), ("E", 2)],
        free: vec![],
        quantifiers: false,
        depth: 3,
        ..Pool::standard()
    }
}

/// A prenex sentence with a random prefix of one to three quantifiers.
fn prenex_sentence(ch: &mut Choices) -> Query {
    let pool = sentence_pool();
    let len = 1 + ch.pick(3);
    let mut scope = Vec::new();
    let mut prefix = String::new();
    for v in &common::BINDERS[..len] {
        let q = if ch.flip() { "forall" } else { "exists" };
        prefix += &format!("{q} {v} ");
        scope.push(*v);
    }
    let matrix = pool.formula(ch, &mut scope, pool.depth);
    pool.parse(&format!("{prefix}({matrix})"))
}

fn assert_fresh(r: &TransformReport) {
    let names = r.input.names();
    for d in &r.fresh {
        assert!(!names.contains(&d.name), "{} reuses `{}`", r.pass, d.name);
    }
}

fn check_small(r: &TransformReport, a: &Structure) -> Result<bool, TestCaseError> {
    match check_claim(r, a, 2_000_000) {
        Ok(c) => Ok(c.holds()),
        Err(Error::Budget { .. }) => Ok(true),
        Err(e) => Err(TestCaseError::fail(e.to_string())),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn skolem_claims_hold(data in choices(), n in 1usize..=3) {
        let mut ch = Choices::new(&data);
        let q = prenex_sentence(&mut ch);
        let a = sentence_pool().structure(&mut ch, n);
        let r = skolemize(&q).unwrap();
        assert_fresh(&r);
        prop_assert!(check_small(&r, &a)?, "{}", q.body);
        let back = deskolemize(&r.output).unwrap();
        prop_assert_eq!(back.output.canonical().body, q.canonical().body);
        prop_assert!(check_small(&back, &a)?);
    }

    #[test]
    fn proof_trees_count_skolem_functions(data in choices(), n in 1usize..=3) {
        let mut ch = Choices::new(&data);
        let q = prenex_sentence(&mut ch);
        let a = sentence_pool().structure(&mut ch, n);
        let c = circuit_from_prenex(&a, &q).unwrap();
        prop_assert_eq!(c.count_proof_trees(), count_skolem(&a, &q, DEFAULT_BUDGET).unwrap());
        prop_assert_eq!(c.evaluate(), naive_models(&a, &q.body, &Assignment::new()));
        let prefix = prefix_of(&q.body).0;
        let blocks = prefix.windows(2).filter(|w| w[0].0 != w[1].0).count() + 1;
        prop_assert_eq!(c.depth(), blocks + 1);
        let first = prefix.iter().take_while(|(quant, _)| *quant == prefix[0].0).count();
        prop_assert_eq!(c.gates()[c.root()].children.len(), n.pow(first as u32));
    }

    #[test]
    fn unique_witness_preserves_counts(data in choices(), n in 1usize..=3) {
        let mut ch = Choices::new(&data);
        let pool = Pool { funs: vec![("F", 1)], depth: 4, ..Pool::standard() };
        let q = pool.query(&mut ch);
        let a = pool.structure(&mut ch, n);
        let r = unique_witness(&q).unwrap();
        assert_fresh(&r);
        prop_assert!(check_small(&r, &a)?);
        let alpha = pool.assignment(&mut ch, n);
        prop_assert_eq!(naive_models(&a, &r.output.body, &alpha), naive_models(&a, &q.body, &alpha));
        let twice = unique_witness(&r.output).unwrap();
        prop_assert_eq!(
            count_functional(&a, &twice.output, DEFAULT_BUDGET).unwrap(),
            count_functional(&a, &q, DEFAULT_BUDGET).unwrap()
        );
    }

    #[test]
    fn witnesses_become_unique(data in choices(), n in 1usize..=3) {
        let mut ch = Choices::new(&data);
        let pool = Pool { free: vec![], quantifiers: true, depth: 3, ..sentence_pool() };
        let matrix = pool.formula(&mut ch, &mut vec!["y"], pool.depth);
        let q = pool.parse(&format!("exists y ({matrix})"));
        let a = pool.structure(&mut ch, n);
        let out = unique_witness(&q).unwrap().output;
        let Formula::Quant(Quantifier::Exists, y, body) = &out.body else { panic!("{}", out.body) };
        let witnesses = (0..n).filter(|&e| naive_models(&a, body, &Assignment::new().individual(y, e))).count();
        let satisfiable = naive_models(&a, &q.body, &Assignment::new());
        prop_assert_eq!(witnesses, usize::from(satisfiable));
    }

    #[test]
    fn to_pi1_output_is_universal(data in choices(), n in 1usize..=2) {
        let mut ch = Choices::new(&data);
        let pool = Pool { free: vec![], funs: vec![("F", 1)], depth: 4, ..Pool::standard() };
        let q = pool.query(&mut ch);
        let a = pool.structure(&mut ch, n);
        let r = to_pi1(&q).unwrap();
        assert_fresh(&r);
        let info = classify_fragment(&r.output.body);
        prop_assert!(info.alternation.within_pi(1), "{}", r.output.body);
        prop_assert!(check_small(&r, &a)?, "{}", q.body);
    }

    #[test]
    fn dnf_count_matches_truth_table(vars in 1usize..=5, raw in prop::collection::vec(prop::collection::vec((0usize..5, any::<bool>()), 1..=3), 1..6)) {
        let terms: Vec<Vec<Literal>> = raw.iter()
            .map(|t| t.iter().map(|&(v, positive)| Literal { var: v % vars, positive }).collect())
            .collect();
        let dnf = Dnf::new(vars, terms.clone()).unwrap();
        prop_assert_eq!(count_dnf_by_logic(&dnf, DEFAULT_BUDGET).unwrap(), dnf.count_models().into());
        let cnf = Cnf::new(vars, terms).unwrap();
        let via = cnf_to_dnf_count(&cnf, |d| count_dnf_by_logic(d, DEFAULT_BUDGET)).unwrap();
        prop_assert_eq!(via, cnf.count_models().into());
    }

    #[test]
    fn dnf_reduction_scales(vars in 1usize..=3, raw in prop::collection::vec(prop::collection::vec((0usize..3, any::<bool>()), 1..=3), 1..4)) {
        let terms: Vec<Vec<Literal>> = raw.iter()
            .map(|t| t.iter().map(|&(v, positive)| Literal { var: v % vars, positive }).collect())
            .collect();
        let a = build_dnf_structure(&Dnf::new(vars, terms).unwrap()).unwrap();
        prop_assert!(check_claim(&dnf_reduction_report(), &a, DEFAULT_BUDGET).unwrap().holds());
    }
}

#[test]
fn every_formula_pass_rejects_or_reports() {
    let q = sentence_pool().parse("forall x exists y E(x, y)");
    for pass in Pass::ALL {
        match pass.apply(&q) {
            Ok(r) => {
                assert_eq!(r.pass, pass);
                assert_fresh(&r);
            }
            Err(Error::Precondition(_)) => {}
            Err(e) => panic!("{pass}: {e}"),
        }
    }
}

#[test]
fn to_pi1_corpus() {
    let pool = Pool { free: vec![], ..sentence_pool() };
    let corpus = [
        "exists y forall x E(x, y)",
        "forall x exists y (E(x, y) /\\ P(y))",
        "exists x exists y forall z (E(x, z) -> E(y, z))",
        "forall x exists y forall z (E(x, y) /\\ (E(y, z) -> P(z)))",
        "(exists x P(x)) -> forall y E(y, y)",
        "~forall x exists y E(y, x)",
    ];
    for src in corpus {
        let q = pool.parse(src);
        let r = to_pi1(&q).unwrap();
        assert!(
            classify_fragment(&r.output.body).alternation.within_pi(1),
            "{src}: {}",
            r.output.body
        );
        for n in 1..=3 {
            for a in unary_structures(n) {
                let a = Structure::empty(pool.vocabulary(), n)
                    .map(|mut b| {
                        for t in a.tuples("P").unwrap() {
                            b.insert("P", &t).unwrap();
                        }
                        for e in 0..n.saturating_sub(1) {
                            b.insert("E", &[e, e + 1]).unwrap();
                        }
                        b
                    })
                    .unwrap();
                let c = check_claim(&r, &a, DEFAULT_BUDGET).unwrap();
                assert!(c.holds(), "{src} n={n}: {} vs {}", c.lhs, c.rhs);
            }
        }
    }
}

#[test]
fn skolem_output_shape() {
    let q = sentence_pool().parse("forall x exists y forall z exists w (E(x, y) /\\ E(z, w))");
    let r = skolemize(&q).unwrap();
    let info = classify_fragment(&r.output.body);
    assert_eq!(info.alternation, Alternation::Pi(1));
    assert!(info.prefix_restricted);
    let arities: Vec<usize> = r.fresh.iter().map(|d| d.arity).collect();
    assert_eq!(arities, vec![1, 2]);
}
