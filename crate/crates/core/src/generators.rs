//! Exhaustive enumeration of small formulas and models for the oracle
//! suites. Formula grammars are layered: a formula of depth `d` is a unary
//! constructor applied to one of depth `d - 1`, or a binary connective
//! joining one of depth `d - 1` with an atom.

use crate::assignment::{GAModel, GaModelSpec, PredicateSpec};
use crate::henkin::HenkinModel;
use crate::io::Name;
use crate::modal::{KripkeFrame, WorldSet};
use crate::syntax::{check_positivity, FoFormula, ModalFormula, MsoFormula};
use std::collections::BTreeMap;

trait Connectives: Clone {
    fn and(a: Self, b: Self) -> Self;
    fn or(a: Self, b: Self) -> Self;
    fn implies(a: Self, b: Self) -> Self;
}

macro_rules! connectives {
    ($($ty:ty),*) => {$(
        impl Connectives for $ty {
            fn and(a: Self, b: Self) -> Self {
                <$ty>::and(a, b)
            }
            fn or(a: Self, b: Self) -> Self {
                <$ty>::or(a, b)
            }
            fn implies(a: Self, b: Self) -> Self {
                <$ty>::implies(a, b)
            }
        }
    )*};
}

connectives!(FoFormula, MsoFormula, ModalFormula);

fn layered<F: Connectives>(atoms: &[F], depth: usize, unary: &dyn Fn(&F) -> Vec<F>) -> Vec<F> {
    let mut all = atoms.to_vec();
    let mut frontier = atoms.to_vec();
    for _ in 0..depth {
        let mut next = Vec::new();
        for f in &frontier {
            next.extend(unary(f));
            for a in atoms {
                next.push(F::and(f.clone(), a.clone()));
                next.push(F::or(f.clone(), a.clone()));
                next.push(F::implies(f.clone(), a.clone()));
                next.push(F::implies(a.clone(), f.clone()));
            }
        }
        all.extend(next.iter().cloned());
        frontier = next;
    }
    all
}

/// First-order formulas over `vars` with atoms `P(v)` and `v = w`, and the
/// quantifiers `exists v`, `forall v`, and (for two or more variables) the
/// polyadic `exists (vars)`.
pub fn fo_formulas(vars: &[&str], depth: usize) -> Vec<FoFormula> {
    let mut atoms: Vec<FoFormula> = vars.iter().map(|v| FoFormula::pred("P", &[v])).collect();
    atoms.push(FoFormula::eq(vars[0], vars[vars.len() - 1]));
    let vars: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
    layered(&atoms, depth, &|f| {
        let mut out = vec![FoFormula::not(f.clone())];
        for v in &vars {
            out.push(FoFormula::Exists(v.clone(), Box::new(f.clone())));
            out.push(FoFormula::Forall(v.clone(), Box::new(f.clone())));
        }
        if vars.len() > 1 {
            out.push(FoFormula::PolyExists(vars.clone(), Box::new(f.clone())));
        }
        out
    })
}

/// Monadic second-order formulas with object variables `x, y` and the set
/// variable `X`.
pub fn mso_formulas(depth: usize) -> Vec<MsoFormula> {
    let atoms = vec![
        MsoFormula::member("X", "x"),
        MsoFormula::member("X", "y"),
        MsoFormula::eq("x", "y"),
    ];
    layered(&atoms, depth, &|f| {
        let b = || Box::new(f.clone());
        vec![
            MsoFormula::Not(b()),
            MsoFormula::Exists("x".into(), b()),
            MsoFormula::Exists("y".into(), b()),
            MsoFormula::Forall("x".into(), b()),
            MsoFormula::Forall("y".into(), b()),
            MsoFormula::ExistsSet("X".into(), b()),
            MsoFormula::ForallSet("X".into(), b()),
        ]
    })
}

/// Closed-in-`X`, positive modal formulas over the letter `p` and the
/// fixpoint variable `X`.
pub fn modal_formulas(depth: usize) -> Vec<ModalFormula> {
    let atoms = vec![ModalFormula::letter("p"), ModalFormula::var("X")];
    layered(&atoms, depth, &|f| {
        vec![
            ModalFormula::not(f.clone()),
            ModalFormula::diamond(f.clone()),
            ModalFormula::boxed(f.clone()),
            ModalFormula::mu("X", f.clone()),
            ModalFormula::nu("X", f.clone()),
        ]
    })
    .into_iter()
    .filter(|f| f.free_variables().fixvars.is_empty() && check_positivity(f).is_ok())
    .collect()
}

fn names(prefix: &str, n: usize) -> Vec<Name> {
    (0..n).map(|i| Name(format!("{prefix}{i}"))).collect()
}

fn subsets<T: Clone>(items: &[T]) -> impl Iterator<Item = Vec<T>> + '_ {
    (0u64..1 << items.len()).map(move |mask| {
        (0..items.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| items[i].clone())
            .collect()
    })
}

/// Every GA model with domain `d0..`, variables `vars`, a unary predicate
/// `P`, and a non-empty assignment set.
pub fn ga_models(domain: usize, vars: &[&str]) -> Vec<GAModel> {
    let dom = names("d", domain);
    let tuples: Vec<Vec<Name>> = crate::assignment::all_tuples(domain, vars.len())
        .map(|t| t.iter().map(|&i| dom[i].clone()).collect())
        .collect();
    let mut out = Vec::new();
    for v in subsets(&tuples).filter(|v| !v.is_empty()) {
        for p in subsets(&dom) {
            let spec = GaModelSpec {
                domain: dom.clone(),
                predicates: BTreeMap::from([(
                    "P".to_string(),
                    PredicateSpec {
                        arity: 1,
                        tuples: p.into_iter().map(|d| vec![d]).collect(),
                    },
                )]),
                variables: vars.iter().map(|s| s.to_string()).collect(),
                assignments: v.clone(),
            };
            out.push(GAModel::from_spec(&spec).expect("generated model is valid"));
        }
    }
    out
}

/// Every Henkin model on `domain` elements with no predicate constants and
/// a family of between 1 and `max_family` distinct sets.
pub fn henkin_models(domain: usize, max_family: usize) -> Vec<HenkinModel> {
    let dom: Vec<String> = (0..domain).map(|i| format!("d{i}")).collect();
    let sets: Vec<WorldSet> = WorldSet::all_subsets(domain).collect();
    subsets(&sets)
        .filter(|f| !f.is_empty() && f.len() <= max_family)
        .map(|f| HenkinModel::new(dom.clone(), BTreeMap::new(), f).expect("generated model is valid"))
        .collect()
}

/// Every frame on `n` worlds with every valuation of `p`.
pub fn modal_instances(n: usize) -> impl Iterator<Item = (KripkeFrame, WorldSet)> {
    KripkeFrame::enumerate(n).flat_map(move |frame| WorldSet::all_subsets(n).map(move |p| (frame.clone(), p)))
}
