//! Abstract syntax for the four object languages.
//!
//! All trees serialize to a canonical JSON form `{"kind": ..., "args": [...]}`.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// Modal μ-calculus formulas. Lowercase names are proposition letters,
/// uppercase names are fixpoint variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "args", rename_all = "snake_case")]
pub enum ModalFormula {
    True,
    False,
    Letter(String),
    FixVar(String),
    Not(Box<ModalFormula>),
    And(Box<ModalFormula>, Box<ModalFormula>),
    Or(Box<ModalFormula>, Box<ModalFormula>),
    Implies(Box<ModalFormula>, Box<ModalFormula>),
    Diamond(Box<ModalFormula>),
    Box(Box<ModalFormula>),
    Mu(String, Box<ModalFormula>),
    Nu(String, Box<ModalFormula>),
}

/// First-order formulas with polyadic existentials and the extension modality.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "args", rename_all = "snake_case")]
pub enum FoFormula {
    True,
    False,
    Pred(String, Vec<String>),
    Eq(String, String),
    Not(Box<FoFormula>),
    And(Box<FoFormula>, Box<FoFormula>),
    Or(Box<FoFormula>, Box<FoFormula>),
    Implies(Box<FoFormula>, Box<FoFormula>),
    Exists(String, Box<FoFormula>),
    Forall(String, Box<FoFormula>),
    PolyExists(Vec<String>, Box<FoFormula>),
    Ext(Box<FoFormula>),
}

/// Monadic second-order formulas. Set variables are uppercase and only
/// ever applied to a single object variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "args", rename_all = "snake_case")]
pub enum MsoFormula {
    True,
    False,
    Pred(String, Vec<String>),
    Eq(String, String),
    /// `X(y)`: object `y` belongs to set `X`.
    SetAtom(String, String),
    Not(Box<MsoFormula>),
    And(Box<MsoFormula>, Box<MsoFormula>),
    Or(Box<MsoFormula>, Box<MsoFormula>),
    Implies(Box<MsoFormula>, Box<MsoFormula>),
    Exists(String, Box<MsoFormula>),
    Forall(String, Box<MsoFormula>),
    ExistsSet(String, Box<MsoFormula>),
    ForallSet(String, Box<MsoFormula>),
}

/// Sorts of the two-sorted first-order language.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sort {
    Object,
    Predicate,
}

impl Sort {
    /// Sort of a variable name: lowercase names are objects, names
    /// starting with `P` are predicates.
    pub fn of(name: &str) -> Option<Sort> {
        let c = name.chars().next()?;
        if c.is_ascii_lowercase() {
            Some(Sort::Object)
        } else if c == 'P' {
            Some(Sort::Predicate)
        } else {
            None
        }
    }
}

/// Two-sorted first-order formulas with the membership atom `E(x,P)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "args", rename_all = "snake_case")]
pub enum TwoSortedFormula {
    True,
    False,
    Pred(String, Vec<String>),
    Eq(Sort, String, String),
    /// `E(x,P)`: object `x` is in the extension of predicate point `P`.
    Member(String, String),
    Not(Box<TwoSortedFormula>),
    And(Box<TwoSortedFormula>, Box<TwoSortedFormula>),
    Or(Box<TwoSortedFormula>, Box<TwoSortedFormula>),
    Implies(Box<TwoSortedFormula>, Box<TwoSortedFormula>),
    Exists(Sort, String, Box<TwoSortedFormula>),
    Forall(Sort, String, Box<TwoSortedFormula>),
}

/// Any formula, tagged with its language.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "language", content = "formula", rename_all = "snake_case")]
pub enum Formula {
    Modal(ModalFormula),
    Fol(FoFormula),
    Mso(MsoFormula),
    TwoSorted(TwoSortedFormula),
}

/// Free variables of a formula, split by namespace.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct FreeVars {
    pub objects: BTreeSet<String>,
    pub sets: BTreeSet<String>,
    pub predicates: BTreeSet<String>,
    pub fixvars: BTreeSet<String>,
    pub letters: BTreeSet<String>,
}

macro_rules! connective_ctors {
    ($ty:ident) => {
        impl $ty {
            pub fn not(f: $ty) -> $ty {
                $ty::Not(Box::new(f))
            }
            pub fn and(a: $ty, b: $ty) -> $ty {
                $ty::And(Box::new(a), Box::new(b))
            }
            pub fn or(a: $ty, b: $ty) -> $ty {
                $ty::Or(Box::new(a), Box::new(b))
            }
            pub fn implies(a: $ty, b: $ty) -> $ty {
                $ty::Implies(Box::new(a), Box::new(b))
            }
            /// `a <-> b`, expanded into two implications.
            pub fn iff(a: $ty, b: $ty) -> $ty {
                $ty::and($ty::implies(a.clone(), b.clone()), $ty::implies(b, a))
            }
        }
    };
}

connective_ctors!(ModalFormula);
connective_ctors!(FoFormula);
connective_ctors!(MsoFormula);
connective_ctors!(TwoSortedFormula);

impl ModalFormula {
    pub fn letter(name: &str) -> Self {
        ModalFormula::Letter(name.to_string())
    }
    pub fn var(name: &str) -> Self {
        ModalFormula::FixVar(name.to_string())
    }
    pub fn diamond(f: Self) -> Self {
        ModalFormula::Diamond(Box::new(f))
    }
    pub fn boxed(f: Self) -> Self {
        ModalFormula::Box(Box::new(f))
    }
    pub fn mu(var: &str, f: Self) -> Self {
        ModalFormula::Mu(var.to_string(), Box::new(f))
    }
    pub fn nu(var: &str, f: Self) -> Self {
        ModalFormula::Nu(var.to_string(), Box::new(f))
    }

    pub fn depth(&self) -> usize {
        use ModalFormula::*;
        match self {
            True | False | Letter(_) | FixVar(_) => 0,
            Not(a) | Diamond(a) | Box(a) | Mu(_, a) | Nu(_, a) => 1 + a.depth(),
            And(a, b) | Or(a, b) | Implies(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    pub fn is_mu_free(&self) -> bool {
        use ModalFormula::*;
        match self {
            True | False | Letter(_) | FixVar(_) => true,
            Not(a) | Diamond(a) | Box(a) => a.is_mu_free(),
            And(a, b) | Or(a, b) | Implies(a, b) => a.is_mu_free() && b.is_mu_free(),
            Mu(..) | Nu(..) => false,
        }
    }

    /// Whether every free occurrence of `var` sits under an even number of
    /// negations (the antecedent of an implication counts as one).
    pub fn is_positive_in(&self, var: &str) -> bool {
        self.polarity_ok(var, true)
    }

    fn polarity_ok(&self, var: &str, positive: bool) -> bool {
        use ModalFormula::*;
        match self {
            FixVar(x) => x != var || positive,
            True | False | Letter(_) => true,
            Not(a) => a.polarity_ok(var, !positive),
            Diamond(a) | Box(a) => a.polarity_ok(var, positive),
            And(a, b) | Or(a, b) => a.polarity_ok(var, positive) && b.polarity_ok(var, positive),
            Implies(a, b) => a.polarity_ok(var, !positive) && b.polarity_ok(var, positive),
            Mu(x, a) | Nu(x, a) => x == var || a.polarity_ok(var, positive),
        }
    }

    pub fn free_variables(&self) -> FreeVars {
        let mut fv = FreeVars::default();
        self.collect_free(&mut Vec::new(), &mut fv);
        fv
    }

    fn collect_free(&self, bound: &mut Vec<String>, fv: &mut FreeVars) {
        use ModalFormula::*;
        match self {
            True | False => {}
            Letter(p) => {
                fv.letters.insert(p.clone());
            }
            FixVar(x) => {
                if !bound.contains(x) {
                    fv.fixvars.insert(x.clone());
                }
            }
            Not(a) | Diamond(a) | Box(a) => a.collect_free(bound, fv),
            And(a, b) | Or(a, b) | Implies(a, b) => {
                a.collect_free(bound, fv);
                b.collect_free(bound, fv);
            }
            Mu(x, a) | Nu(x, a) => {
                bound.push(x.clone());
                a.collect_free(bound, fv);
                bound.pop();
            }
        }
    }
}

impl FoFormula {
    pub fn pred(name: &str, args: &[&str]) -> Self {
        FoFormula::Pred(name.to_string(), args.iter().map(|s| s.to_string()).collect())
    }
    pub fn eq(x: &str, y: &str) -> Self {
        FoFormula::Eq(x.to_string(), y.to_string())
    }
    pub fn exists(x: &str, f: Self) -> Self {
        FoFormula::Exists(x.to_string(), Box::new(f))
    }
    pub fn forall(x: &str, f: Self) -> Self {
        FoFormula::Forall(x.to_string(), Box::new(f))
    }
    pub fn poly_exists(xs: &[&str], f: Self) -> Self {
        FoFormula::PolyExists(xs.iter().map(|s| s.to_string()).collect(), Box::new(f))
    }
    pub fn ext(f: Self) -> Self {
        FoFormula::Ext(Box::new(f))
    }

    pub fn depth(&self) -> usize {
        use FoFormula::*;
        match self {
            True | False | Pred(..) | Eq(..) => 0,
            Not(a) | Exists(_, a) | Forall(_, a) | PolyExists(_, a) | Ext(a) => 1 + a.depth(),
            And(a, b) | Or(a, b) | Implies(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    /// Every variable name occurring in the formula, bound or free.
    pub fn variables(&self) -> BTreeSet<String> {
        use FoFormula::*;
        let mut out = BTreeSet::new();
        let mut stack = vec![self];
        while let Some(f) = stack.pop() {
            match f {
                True | False => {}
                Pred(_, args) => out.extend(args.iter().cloned()),
                Eq(x, y) => {
                    out.insert(x.clone());
                    out.insert(y.clone());
                }
                Not(a) | Ext(a) => stack.push(a),
                And(a, b) | Or(a, b) | Implies(a, b) => {
                    stack.push(a);
                    stack.push(b);
                }
                Exists(x, a) | Forall(x, a) => {
                    out.insert(x.clone());
                    stack.push(a);
                }
                PolyExists(xs, a) => {
                    out.extend(xs.iter().cloned());
                    stack.push(a);
                }
            }
        }
        out
    }

    /// Names of predicate symbols used in the formula.
    pub fn predicates(&self) -> BTreeSet<String> {
        use FoFormula::*;
        let mut out = BTreeSet::new();
        let mut stack = vec![self];
        while let Some(f) = stack.pop() {
            match f {
                Pred(p, _) => {
                    out.insert(p.clone());
                }
                True | False | Eq(..) => {}
                Not(a) | Ext(a) | Exists(_, a) | Forall(_, a) | PolyExists(_, a) => stack.push(a),
                And(a, b) | Or(a, b) | Implies(a, b) => {
                    stack.push(a);
                    stack.push(b);
                }
            }
        }
        out
    }

    pub fn free_variables(&self) -> FreeVars {
        FreeVars {
            objects: self.free_objects(),
            ..FreeVars::default()
        }
    }

    pub fn free_objects(&self) -> BTreeSet<String> {
        use FoFormula::*;
        match self {
            True | False => BTreeSet::new(),
            Pred(_, args) => args.iter().cloned().collect(),
            Eq(x, y) => [x.clone(), y.clone()].into_iter().collect(),
            Not(a) | Ext(a) => a.free_objects(),
            And(a, b) | Or(a, b) | Implies(a, b) => {
                let mut s = a.free_objects();
                s.extend(b.free_objects());
                s
            }
            Exists(x, a) | Forall(x, a) => {
                let mut s = a.free_objects();
                s.remove(x);
                s
            }
            PolyExists(xs, a) => {
                let mut s = a.free_objects();
                for x in xs {
                    s.remove(x);
                }
                s
            }
        }
    }
}

impl MsoFormula {
    pub fn pred(name: &str, args: &[&str]) -> Self {
        MsoFormula::Pred(name.to_string(), args.iter().map(|s| s.to_string()).collect())
    }
    pub fn eq(x: &str, y: &str) -> Self {
        MsoFormula::Eq(x.to_string(), y.to_string())
    }
    pub fn member(set: &str, obj: &str) -> Self {
        MsoFormula::SetAtom(set.to_string(), obj.to_string())
    }
    pub fn exists(x: &str, f: Self) -> Self {
        MsoFormula::Exists(x.to_string(), Box::new(f))
    }
    pub fn forall(x: &str, f: Self) -> Self {
        MsoFormula::Forall(x.to_string(), Box::new(f))
    }
    pub fn exists_set(x: &str, f: Self) -> Self {
        MsoFormula::ExistsSet(x.to_string(), Box::new(f))
    }
    pub fn forall_set(x: &str, f: Self) -> Self {
        MsoFormula::ForallSet(x.to_string(), Box::new(f))
    }

    pub fn depth(&self) -> usize {
        use MsoFormula::*;
        match self {
            True | False | Pred(..) | Eq(..) | SetAtom(..) => 0,
            Not(a) | Exists(_, a) | Forall(_, a) | ExistsSet(_, a) | ForallSet(_, a) => 1 + a.depth(),
            And(a, b) | Or(a, b) | Implies(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    pub fn free_variables(&self) -> FreeVars {
        let mut fv = FreeVars::default();
        self.collect_free(&mut Vec::new(), &mut Vec::new(), &mut fv);
        fv
    }

    fn collect_free(&self, objs: &mut Vec<String>, sets: &mut Vec<String>, fv: &mut FreeVars) {
        use MsoFormula::*;
        let obj = |x: &String, fv: &mut FreeVars| {
            if !objs.contains(x) {
                fv.objects.insert(x.clone());
            }
        };
        match self {
            True | False => {}
            Pred(_, args) => args.iter().for_each(|x| obj(x, fv)),
            Eq(x, y) => {
                obj(x, fv);
                obj(y, fv);
            }
            SetAtom(s, x) => {
                obj(x, fv);
                if !sets.contains(s) {
                    fv.sets.insert(s.clone());
                }
            }
            Not(a) => a.collect_free(objs, sets, fv),
            And(a, b) | Or(a, b) | Implies(a, b) => {
                a.collect_free(objs, sets, fv);
                b.collect_free(objs, sets, fv);
            }
            Exists(x, a) | Forall(x, a) => {
                objs.push(x.clone());
                a.collect_free(objs, sets, fv);
                objs.pop();
            }
            ExistsSet(x, a) | ForallSet(x, a) => {
                sets.push(x.clone());
                a.collect_free(objs, sets, fv);
                sets.pop();
            }
        }
    }
}

impl TwoSortedFormula {
    pub fn free_variables(&self) -> FreeVars {
        let mut fv = FreeVars::default();
        self.collect_free(&mut Vec::new(), &mut fv);
        fv
    }

    fn collect_free(&self, bound: &mut Vec<(Sort, String)>, fv: &mut FreeVars) {
        use TwoSortedFormula::*;
        let var = |sort: Sort, x: &String, fv: &mut FreeVars| {
            if !bound.iter().any(|(s, y)| *s == sort && y == x) {
                match sort {
                    Sort::Object => fv.objects.insert(x.clone()),
                    Sort::Predicate => fv.predicates.insert(x.clone()),
                };
            }
        };
        match self {
            True | False => {}
            Pred(_, args) => args.iter().for_each(|x| var(Sort::Object, x, fv)),
            Eq(sort, x, y) => {
                var(*sort, x, fv);
                var(*sort, y, fv);
            }
            Member(x, p) => {
                var(Sort::Object, x, fv);
                var(Sort::Predicate, p, fv);
            }
            Not(a) => a.collect_free(bound, fv),
            And(a, b) | Or(a, b) | Implies(a, b) => {
                a.collect_free(bound, fv);
                b.collect_free(bound, fv);
            }
            Exists(sort, x, a) | Forall(sort, x, a) => {
                bound.push((*sort, x.clone()));
                a.collect_free(bound, fv);
                bound.pop();
            }
        }
    }
}

impl Formula {
    pub fn free_variables(&self) -> FreeVars {
        match self {
            Formula::Modal(f) => f.free_variables(),
            Formula::Fol(f) => f.free_variables(),
            Formula::Mso(f) => f.free_variables(),
            Formula::TwoSorted(f) => f.free_variables(),
        }
    }
}
