use gensem::algebra::{jt_iso_check, ultrafilter_frame, ultrafilters, ModalAlgebra};
use gensem::assignment::{eval_ga, translate_guarded, GAModel, GaModelSpec};
use gensem::fixpoint::{path_oracle, transitive_closure_fp, BinaryRelation};
use gensem::henkin::{check_ext, check_fullness, eval_mso, to_two_sorted, HenkinModel, MsoEnv};
use gensem::modal::{is_descriptive, WorldSet};
use gensem::syntax::{is_guarded, FoFormula, MsoFormula};
use proptest::prelude::*;
use std::collections::{BTreeMap, BTreeSet};

fn vars() -> Vec<String> {
    vec!["x".into(), "y".into()]
}

fn fo_formula() -> impl Strategy<Value = FoFormula> {
    let v = || prop::sample::select(vec!["x", "y"]).prop_map(String::from);
    let leaf = prop_oneof![
        v().prop_map(|x| FoFormula::Pred("P".into(), vec![x])),
        (v(), v()).prop_map(|(x, y)| FoFormula::Pred("R".into(), vec![x, y])),
        (v(), v()).prop_map(|(x, y)| FoFormula::Eq(x, y)),
    ];
    leaf.prop_recursive(4, 24, 2, move |inner| {
        prop_oneof![
            inner.clone().prop_map(FoFormula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| FoFormula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| FoFormula::or(a, b)),
            (v(), inner.clone()).prop_map(|(x, f)| FoFormula::Exists(x, Box::new(f))),
            (v(), inner.clone()).prop_map(|(x, f)| FoFormula::Forall(x, Box::new(f))),
            inner
                .clone()
                .prop_map(|f| FoFormula::PolyExists(vec!["x".into(), "y".into()], Box::new(f))),
        ]
    })
}

/// A GA model on `{a, b, c}` with unary `P`, binary `R` and a non-empty `V`.
fn ga_model() -> impl Strategy<Value = GAModel> {
    let tuples: Vec<Vec<usize>> = (0..3).flat_map(|i| (0..3).map(move |j| vec![i, j])).collect();
    (
        prop::sample::subsequence(tuples.clone(), 1..=9),
        prop::sample::subsequence(vec![0usize, 1, 2], 0..=3),
        prop::sample::subsequence(tuples, 0..=9),
    )
        .prop_map(|(v, p, r)| {
            let names = ["a", "b", "c"];
            let spec = serde_json::json!({
                "domain": names,
                "predicates": {
                    "P": {"arity": 1, "tuples": p.iter().map(|&i| vec![names[i]]).collect::<Vec<_>>()},
                    "R": {"arity": 2, "tuples": r.iter().map(|t| vec![names[t[0]], names[t[1]]]).collect::<Vec<_>>()},
                },
                "variables": ["x", "y"],
                "assignments": v.iter().map(|t| vec![names[t[0]], names[t[1]]]).collect::<Vec<_>>(),
            });
            GAModel::from_spec(&serde_json::from_value::<GaModelSpec>(spec).unwrap()).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn singleton_polyadic_is_plain_exists(m in ga_model(), f in fo_formula(), x in prop::sample::select(vec!["x", "y"])) {
        let poly = FoFormula::PolyExists(vec![x.to_string()], Box::new(f.clone()));
        let plain = FoFormula::Exists(x.to_string(), Box::new(f));
        for s in m.assignments() {
            prop_assert_eq!(eval_ga(&m, &poly, s).unwrap(), eval_ga(&m, &plain, s).unwrap());
        }
    }

    #[test]
    fn guarded_translation_is_guarded(f in fo_formula()) {
        let t = translate_guarded(&f, &vars()).unwrap();
        prop_assert_eq!(&t.guard, "G");
        prop_assert!(is_guarded(&t.formula, &BTreeSet::from(["G".to_string()])));
    }

    #[test]
    fn ext_is_antitone_in_v(m in ga_model(), f in fo_formula(), keep in prop::collection::vec(any::<bool>(), 9)) {
        // Shrinking V to V0 keeps every superset of V a superset of V0.
        let ext = FoFormula::Ext(Box::new(f));
        let v: Vec<Vec<usize>> = m.assignments().iter().cloned().collect();
        for s in &v {
            let smaller: BTreeSet<Vec<usize>> = v
                .iter()
                .enumerate()
                .filter(|(i, t)| keep[*i] || *t == s)
                .map(|(_, t)| t.clone())
                .collect();
            let m0 = m.with_assignments(smaller).unwrap();
            if eval_ga(&m, &ext, s).unwrap() {
                prop_assert!(eval_ga(&m0, &ext, s).unwrap());
            }
        }
    }

    #[test]
    fn ultrafilters_match_atoms(diamond in prop::collection::vec(0u64..16, 4)) {
        let alg = ModalAlgebra::powerset(4, &diamond).unwrap();
        prop_assert_eq!(ultrafilters(&alg).len(), alg.atoms().len());
        prop_assert!(jt_iso_check(&alg).isomorphic);
        prop_assert!(is_descriptive(&ultrafilter_frame(&alg)).descriptive());
    }

    #[test]
    fn two_sorted_encodings_are_extensional(family in prop::collection::btree_set(0u64..8, 1..=8)) {
        let m = HenkinModel::new(
            vec!["a".into(), "b".into(), "c".into()],
            BTreeMap::new(),
            family.into_iter().map(WorldSet),
        ).unwrap();
        prop_assert!(check_ext(&to_two_sorted(&m)).holds);
    }

    #[test]
    fn growing_the_family_preserves_existential_truths(
        f in positive_existential(),
        small in prop::collection::btree_set(0u64..8, 1..=4),
        extra in prop::collection::btree_set(0u64..8, 0..=4),
        x in 0usize..3,
        y in 0usize..3,
    ) {
        let domain: Vec<String> = vec!["a".into(), "b".into(), "c".into()];
        let v = HenkinModel::new(domain.clone(), BTreeMap::new(), small.iter().copied().map(WorldSet)).unwrap();
        let w = HenkinModel::new(domain, BTreeMap::new(), small.union(&extra).copied().map(WorldSet)).unwrap();
        let env = MsoEnv {
            objects: BTreeMap::from([("x".to_string(), x), ("y".to_string(), y)]),
            sets: BTreeMap::new(),
        };
        if eval_mso(&v, &f, &env).unwrap() {
            prop_assert!(eval_mso(&w, &f, &env).unwrap(), "{}", f);
        }
    }

    #[test]
    fn closure_matches_paths(n in 1usize..=8, bits in prop::collection::vec(any::<bool>(), 64)) {
        let pairs = (0..n * n).filter(|&k| bits[k]).map(|k| (k / n, k % n));
        let r = BinaryRelation::on_indices(n, pairs).unwrap();
        let (tc, _) = transitive_closure_fp(&r);
        for x in 0..n {
            for y in 0..n {
                prop_assert_eq!(tc.pairs().contains(&(x, y)), path_oracle(&r, x, y));
            }
        }
    }
}

/// Built from atoms with `exists2`, `&` and `|` only.
fn positive_existential() -> impl Strategy<Value = MsoFormula> {
    let leaf = prop_oneof![
        Just(MsoFormula::member("X", "x")),
        Just(MsoFormula::member("X", "y")),
        Just(MsoFormula::not(MsoFormula::member("X", "y"))),
        Just(MsoFormula::eq("x", "y")),
    ];
    leaf.prop_recursive(4, 16, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| MsoFormula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| MsoFormula::or(a, b)),
        ]
    })
    .prop_map(|f| MsoFormula::exists_set("X", f))
}

#[test]
fn powerset_families_are_full() {
    for n in 1..=3 {
        let m = HenkinModel::full((0..n).map(|i| format!("d{i}")).collect(), BTreeMap::new()).unwrap();
        assert!(check_fullness(&to_two_sorted(&m)).0);
    }
}

#[test]
fn closure_is_least_transitive_extension() {
    for n in 1..=3 {
        let all: Vec<BinaryRelation> = (0u32..1 << (n * n))
            .map(|bits| {
                BinaryRelation::on_indices(n, (0..n * n).filter(|k| bits >> k & 1 == 1).map(|k| (k / n, k % n)))
                    .unwrap()
            })
            .collect();
        let transitive: Vec<&BinaryRelation> = all.iter().filter(|t| t.is_transitive()).collect();
        for r in &all {
            let (tc, _) = transitive_closure_fp(r);
            assert!(tc.is_transitive());
            assert!(r.pairs().is_subset(tc.pairs()));
            for t in transitive.iter().filter(|t| r.pairs().is_subset(t.pairs())) {
                assert!(tc.pairs().is_subset(t.pairs()), "{r}");
            }
        }
    }
}
