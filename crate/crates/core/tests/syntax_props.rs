use gensem::assignment::translate_guarded;
use gensem::syntax::rename::{rename_modal, rename_mso, rename_two_sorted};
use gensem::syntax::{
    check_positivity, is_guarded, parse_fol, parse_modal, parse_mso, parse_two_sorted, FoFormula, ModalFormula,
    MsoFormula, Sort, TwoSortedFormula,
};
use proptest::prelude::*;
use std::collections::BTreeSet;

fn bx<T>(t: T) -> Box<T> {
    Box::new(t)
}

fn modal() -> impl Strategy<Value = ModalFormula> {
    let leaf = prop_oneof![
        Just(ModalFormula::True),
        Just(ModalFormula::False),
        prop::sample::select(vec!["p", "q"]).prop_map(ModalFormula::letter),
        prop::sample::select(vec!["X", "Y"]).prop_map(ModalFormula::var),
    ];
    leaf.prop_recursive(6, 48, 2, |inner| {
        let var = prop::sample::select(vec!["X", "Y"]);
        prop_oneof![
            inner.clone().prop_map(ModalFormula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| ModalFormula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| ModalFormula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| ModalFormula::implies(a, b)),
            inner.clone().prop_map(ModalFormula::diamond),
            inner.clone().prop_map(ModalFormula::boxed),
            (var.clone(), inner.clone()).prop_map(|(x, f)| ModalFormula::mu(x, f)),
            (var, inner).prop_map(|(x, f)| ModalFormula::nu(x, f)),
        ]
    })
}

fn objects() -> impl Strategy<Value = String> {
    prop::sample::select(vec!["x", "y", "z"]).prop_map(String::from)
}

fn fol() -> impl Strategy<Value = FoFormula> {
    let leaf = prop_oneof![
        Just(FoFormula::True),
        Just(FoFormula::False),
        objects().prop_map(|x| FoFormula::Pred("P".into(), vec![x])),
        (objects(), objects()).prop_map(|(x, y)| FoFormula::Pred("R".into(), vec![x, y])),
        (objects(), objects()).prop_map(|(x, y)| FoFormula::Eq(x, y)),
    ];
    leaf.prop_recursive(6, 48, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(FoFormula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| FoFormula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| FoFormula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| FoFormula::implies(a, b)),
            (objects(), inner.clone()).prop_map(|(x, f)| FoFormula::Exists(x, bx(f))),
            (objects(), inner.clone()).prop_map(|(x, f)| FoFormula::Forall(x, bx(f))),
            (prop::sample::subsequence(vec!["x", "y", "z"], 2..=3), inner.clone())
                .prop_map(|(xs, f)| FoFormula::PolyExists(xs.into_iter().map(String::from).collect(), bx(f))),
            inner.prop_map(|f| FoFormula::Ext(bx(f))),
        ]
    })
}

fn mso() -> impl Strategy<Value = MsoFormula> {
    let sets = || prop::sample::select(vec!["X", "Y"]).prop_map(String::from);
    let leaf = prop_oneof![
        Just(MsoFormula::True),
        (objects(), objects()).prop_map(|(x, y)| MsoFormula::Eq(x, y)),
        (objects(), objects()).prop_map(|(x, y)| MsoFormula::Pred("R".into(), vec![x, y])),
        (sets(), objects()).prop_map(|(s, x)| MsoFormula::SetAtom(s, x)),
    ];
    leaf.prop_recursive(6, 48, 2, move |inner| {
        prop_oneof![
            inner.clone().prop_map(MsoFormula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| MsoFormula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| MsoFormula::implies(a, b)),
            (objects(), inner.clone()).prop_map(|(x, f)| MsoFormula::Exists(x, bx(f))),
            (objects(), inner.clone()).prop_map(|(x, f)| MsoFormula::Forall(x, bx(f))),
            (sets(), inner.clone()).prop_map(|(x, f)| MsoFormula::ExistsSet(x, bx(f))),
            (sets(), inner).prop_map(|(x, f)| MsoFormula::ForallSet(x, bx(f))),
        ]
    })
    .prop_map(|f| classify(&f, &mut Vec::new()))
}

/// An uppercase unary atom reads as a set atom exactly when a set binder of
/// that name is in scope.
fn classify(f: &MsoFormula, scope: &mut Vec<String>) -> MsoFormula {
    use MsoFormula::*;
    let under = |x: &String, g: &MsoFormula, scope: &mut Vec<String>| {
        scope.push(x.clone());
        let r = classify(g, scope);
        scope.pop();
        bx(r)
    };
    match f {
        SetAtom(s, x) if !scope.contains(s) => Pred(s.clone(), vec![x.clone()]),
        True | False | Pred(..) | Eq(..) | SetAtom(..) => f.clone(),
        Not(a) => Not(bx(classify(a, scope))),
        And(a, b) => And(bx(classify(a, scope)), bx(classify(b, scope))),
        Or(a, b) => Or(bx(classify(a, scope)), bx(classify(b, scope))),
        Implies(a, b) => Implies(bx(classify(a, scope)), bx(classify(b, scope))),
        Exists(x, a) => Exists(x.clone(), bx(classify(a, scope))),
        Forall(x, a) => Forall(x.clone(), bx(classify(a, scope))),
        ExistsSet(x, a) => ExistsSet(x.clone(), under(x, a, scope)),
        ForallSet(x, a) => ForallSet(x.clone(), under(x, a, scope)),
    }
}

fn two_sorted() -> impl Strategy<Value = TwoSortedFormula> {
    let points = || prop::sample::select(vec!["P", "P1"]).prop_map(String::from);
    let leaf = prop_oneof![
        Just(TwoSortedFormula::True),
        (objects(), points()).prop_map(|(x, p)| TwoSortedFormula::Member(x, p)),
        (objects(), objects()).prop_map(|(x, y)| TwoSortedFormula::Eq(Sort::Object, x, y)),
        (points(), points()).prop_map(|(x, y)| TwoSortedFormula::Eq(Sort::Predicate, x, y)),
        objects().prop_map(|x| TwoSortedFormula::Pred("R".into(), vec![x])),
    ];
    leaf.prop_recursive(6, 48, 2, move |inner| {
        prop_oneof![
            inner.clone().prop_map(TwoSortedFormula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| TwoSortedFormula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| TwoSortedFormula::and(a, b)),
            (objects(), inner.clone()).prop_map(|(x, f)| TwoSortedFormula::Exists(Sort::Object, x, bx(f))),
            (points(), inner.clone()).prop_map(|(x, f)| TwoSortedFormula::Exists(Sort::Predicate, x, bx(f))),
            (points(), inner).prop_map(|(x, f)| TwoSortedFormula::Forall(Sort::Predicate, x, bx(f))),
        ]
    })
}

fn fo_subformulas(f: &FoFormula, out: &mut Vec<FoFormula>) {
    use FoFormula::*;
    out.push(f.clone());
    match f {
        True | False | Pred(..) | Eq(..) => {}
        Not(a) | Exists(_, a) | Forall(_, a) | PolyExists(_, a) | Ext(a) => fo_subformulas(a, out),
        And(a, b) | Or(a, b) | Implies(a, b) => {
            fo_subformulas(a, out);
            fo_subformulas(b, out);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn modal_round_trip(f in modal().prop_filter("positive", |f| check_positivity(f).is_ok())) {
        let canonical = rename_modal(&f);
        prop_assert_eq!(parse_modal(&f.to_string()).unwrap(), canonical.clone());
        prop_assert_eq!(parse_modal(&canonical.to_string()).unwrap(), canonical.clone());
        prop_assert_eq!(rename_modal(&canonical), canonical);
    }

    #[test]
    fn fol_round_trip(f in fol()) {
        prop_assert_eq!(parse_fol(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn mso_round_trip(f in mso()) {
        let canonical = rename_mso(&f);
        prop_assert_eq!(parse_mso(&f.to_string()).unwrap(), canonical.clone());
        prop_assert_eq!(rename_mso(&canonical), canonical);
    }

    #[test]
    fn two_sorted_round_trip(f in two_sorted()) {
        let canonical = rename_two_sorted(&f);
        prop_assert_eq!(parse_two_sorted(&f.to_string()).unwrap(), canonical.clone());
        prop_assert_eq!(rename_two_sorted(&canonical), canonical);
    }

    #[test]
    fn json_round_trip(f in fol()) {
        let text = serde_json::to_string(&f).unwrap();
        prop_assert_eq!(serde_json::from_str::<FoFormula>(&text).unwrap(), f);
    }

    #[test]
    fn guarded_bodies_are_guarded(f in fol().prop_filter("no ext", |f| !f.to_string().contains("ext"))) {
        let vars = vec!["x".to_string(), "y".to_string(), "z".to_string()];
        let t = translate_guarded(&f, &vars).unwrap();
        let guards = BTreeSet::from([t.guard.clone()]);
        prop_assert!(is_guarded(&t.formula, &guards));
        let f = t.formula;
        {
            let mut subs = Vec::new();
            fo_subformulas(&f, &mut subs);
            for g in subs {
                if let FoFormula::Exists(_, body) | FoFormula::Forall(_, body) | FoFormula::PolyExists(_, body) = &g {
                    prop_assert!(is_guarded(body, &guards), "{} inside {}", body, f);
                }
            }
        }
    }
}

#[test]
fn renaming_separates_shadowed_binders() {
    let f = parse_modal("mu X. (<>X & mu X. []X)").unwrap();
    assert_eq!(f.to_string(), "mu X. (<>X & mu X1. []X1)");
}
