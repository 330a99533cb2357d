//! Renaming binders apart. Only second-order names (fixpoint variables,
//! set variables, predicate variables) are renamed; object variables
//! double as coordinates of admissible assignments and keep their names.

use super::ast::*;
use std::collections::{BTreeMap, BTreeSet};

struct Renamer {
    /// Names already claimed by a binder or a free occurrence.
    taken: BTreeSet<String>,
    /// Every name in the formula, so fresh names never collide.
    all: BTreeSet<String>,
}

impl Renamer {
    fn new(free: BTreeSet<String>, all: BTreeSet<String>) -> Self {
        Renamer { taken: free, all }
    }

    fn claim(&mut self, x: &str) -> String {
        if self.taken.insert(x.to_string()) {
            return x.to_string();
        }
        let fresh = (1..)
            .map(|i| format!("{x}{i}"))
            .find(|c| !self.all.contains(c) && !self.taken.contains(c))
            .unwrap();
        self.taken.insert(fresh.clone());
        self.all.insert(fresh.clone());
        fresh
    }
}

fn lookup(env: &BTreeMap<String, String>, x: &str) -> String {
    env.get(x).cloned().unwrap_or_else(|| x.to_string())
}

pub fn rename_modal(f: &ModalFormula) -> ModalFormula {
    fn names(f: &ModalFormula, out: &mut BTreeSet<String>) {
        use ModalFormula::*;
        match f {
            True | False => {}
            Letter(s) | FixVar(s) => {
                out.insert(s.clone());
            }
            Not(a) | Diamond(a) | Box(a) => names(a, out),
            And(a, b) | Or(a, b) | Implies(a, b) => {
                names(a, out);
                names(b, out);
            }
            Mu(x, a) | Nu(x, a) => {
                out.insert(x.clone());
                names(a, out);
            }
        }
    }
    fn go(f: &ModalFormula, env: &mut BTreeMap<String, String>, r: &mut Renamer) -> ModalFormula {
        use ModalFormula::*;
        match f {
            True | False | Letter(_) => f.clone(),
            FixVar(x) => FixVar(lookup(env, x)),
            Not(a) => ModalFormula::not(go(a, env, r)),
            Diamond(a) => ModalFormula::diamond(go(a, env, r)),
            Box(a) => ModalFormula::boxed(go(a, env, r)),
            And(a, b) => ModalFormula::and(go(a, env, r), go(b, env, r)),
            Or(a, b) => ModalFormula::or(go(a, env, r), go(b, env, r)),
            Implies(a, b) => ModalFormula::implies(go(a, env, r), go(b, env, r)),
            Mu(x, a) | Nu(x, a) => {
                let new = r.claim(x);
                let saved = env.insert(x.clone(), new.clone());
                let body = std::boxed::Box::new(go(a, env, r));
                restore(env, x, saved);
                if matches!(f, Mu(..)) {
                    Mu(new, body)
                } else {
                    Nu(new, body)
                }
            }
        }
    }
    let mut all = BTreeSet::new();
    names(f, &mut all);
    let mut r = Renamer::new(f.free_variables().fixvars, all);
    go(f, &mut BTreeMap::new(), &mut r)
}

fn restore(env: &mut BTreeMap<String, String>, x: &str, saved: Option<String>) {
    match saved {
        Some(v) => env.insert(x.to_string(), v),
        None => env.remove(x),
    };
}

pub fn rename_mso(f: &MsoFormula) -> MsoFormula {
    fn names(f: &MsoFormula, out: &mut BTreeSet<String>) {
        use MsoFormula::*;
        match f {
            True | False | Eq(..) => {}
            Pred(p, _) => {
                out.insert(p.clone());
            }
            SetAtom(s, _) | ExistsSet(s, _) | ForallSet(s, _) => {
                out.insert(s.clone());
                if let ExistsSet(_, a) | ForallSet(_, a) = f {
                    names(a, out);
                }
            }
            Not(a) | Exists(_, a) | Forall(_, a) => names(a, out),
            And(a, b) | Or(a, b) | Implies(a, b) => {
                names(a, out);
                names(b, out);
            }
        }
    }
    fn go(f: &MsoFormula, env: &mut BTreeMap<String, String>, r: &mut Renamer) -> MsoFormula {
        use MsoFormula::*;
        match f {
            True | False | Pred(..) | Eq(..) => f.clone(),
            SetAtom(s, x) => SetAtom(lookup(env, s), x.clone()),
            Not(a) => MsoFormula::not(go(a, env, r)),
            And(a, b) => MsoFormula::and(go(a, env, r), go(b, env, r)),
            Or(a, b) => MsoFormula::or(go(a, env, r), go(b, env, r)),
            Implies(a, b) => MsoFormula::implies(go(a, env, r), go(b, env, r)),
            Exists(x, a) => Exists(x.clone(), Box::new(go(a, env, r))),
            Forall(x, a) => Forall(x.clone(), Box::new(go(a, env, r))),
            ExistsSet(s, a) | ForallSet(s, a) => {
                let new = r.claim(s);
                let saved = env.insert(s.clone(), new.clone());
                let body = std::boxed::Box::new(go(a, env, r));
                restore(env, s, saved);
                if matches!(f, ExistsSet(..)) {
                    ExistsSet(new, body)
                } else {
                    ForallSet(new, body)
                }
            }
        }
    }
    let mut all = BTreeSet::new();
    names(f, &mut all);
    let mut r = Renamer::new(f.free_variables().sets, all);
    go(f, &mut BTreeMap::new(), &mut r)
}

pub fn rename_two_sorted(f: &TwoSortedFormula) -> TwoSortedFormula {
    fn names(f: &TwoSortedFormula, out: &mut BTreeSet<String>) {
        use TwoSortedFormula::*;
        match f {
            True | False | Pred(..) => {}
            Eq(Sort::Predicate, x, y) => {
                out.insert(x.clone());
                out.insert(y.clone());
            }
            Eq(..) => {}
            Member(_, p) => {
                out.insert(p.clone());
            }
            Not(a) => names(a, out),
            And(a, b) | Or(a, b) | Implies(a, b) => {
                names(a, out);
                names(b, out);
            }
            Exists(s, x, a) | Forall(s, x, a) => {
                if *s == Sort::Predicate {
                    out.insert(x.clone());
                }
                names(a, out);
            }
        }
    }
    fn go(f: &TwoSortedFormula, env: &mut BTreeMap<String, String>, r: &mut Renamer) -> TwoSortedFormula {
        use TwoSortedFormula::*;
        match f {
            True | False | Pred(..) => f.clone(),
            Eq(Sort::Predicate, x, y) => Eq(Sort::Predicate, lookup(env, x), lookup(env, y)),
            Eq(..) => f.clone(),
            Member(x, p) => Member(x.clone(), lookup(env, p)),
            Not(a) => TwoSortedFormula::not(go(a, env, r)),
            And(a, b) => TwoSortedFormula::and(go(a, env, r), go(b, env, r)),
            Or(a, b) => TwoSortedFormula::or(go(a, env, r), go(b, env, r)),
            Implies(a, b) => TwoSortedFormula::implies(go(a, env, r), go(b, env, r)),
            Exists(Sort::Object, x, a) => Exists(Sort::Object, x.clone(), Box::new(go(a, env, r))),
            Forall(Sort::Object, x, a) => Forall(Sort::Object, x.clone(), Box::new(go(a, env, r))),
            Exists(Sort::Predicate, x, a) | Forall(Sort::Predicate, x, a) => {
                let new = r.claim(x);
                let saved = env.insert(x.clone(), new.clone());
                let body = std::boxed::Box::new(go(a, env, r));
                restore(env, x, saved);
                if matches!(f, Exists(..)) {
                    Exists(Sort::Predicate, new, body)
                } else {
                    Forall(Sort::Predicate, new, body)
                }
            }
        }
    }
    let mut all = BTreeSet::new();
    names(f, &mut all);
    let mut r = Renamer::new(f.free_variables().predicates, all);
    go(f, &mut BTreeMap::new(), &mut r)
}
