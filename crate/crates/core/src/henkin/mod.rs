//! Henkin general models for monadic second-order logic and their
//! two-sorted first-order reading.

mod two_sorted;

pub use two_sorted::{
    check_ext, check_fullness, check_individuality, eval_two_sorted, to_two_sorted, PairReport, TwoSortedEnv,
    TwoSortedSpec, TwoSortedStructure,
};

use crate::assignment::{Predicate, PredicateSpec};
use crate::io::Name;
use crate::modal::WorldSet;
use crate::syntax::{MsoFormula, Sort, TwoSortedFormula};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use thiserror::Error;

/// Largest domain whose full powerset we are willing to enumerate.
pub const MAX_POWERSET_DOMAIN: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HenkinError {
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("value of set variable `{0}` is not in the family")]
    SetValueNotInFamily(String),
    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),
    #[error("predicate `{name}` has arity {expected} but is applied to {found} arguments")]
    ArityMismatch {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("variable `{0}` has no value")]
    UnboundVariable(String),
    #[error("`{0}` is not in the domain")]
    UnknownElement(String),
    #[error("{what} is {size}, above the cap of {cap}")]
    CapExceeded { what: String, size: usize, cap: usize },
}

/// A finite first-order model with a family of subsets: the range of the
/// set quantifiers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HenkinModel {
    domain: Vec<String>,
    predicates: BTreeMap<String, Predicate>,
    family: Vec<WorldSet>,
}

/// `"full"` or an explicit list of sets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FamilySpec {
    Keyword(String),
    Sets(Vec<Vec<Name>>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HenkinSpec {
    pub domain: Vec<Name>,
    #[serde(default)]
    pub predicates: BTreeMap<String, PredicateSpec>,
    pub family: FamilySpec,
}

pub(crate) fn domain_index(domain: &[Name]) -> Result<HashMap<&str, usize>, HenkinError> {
    let mut index = HashMap::new();
    for (i, d) in domain.iter().enumerate() {
        if index.insert(d.as_str(), i).is_some() {
            return Err(HenkinError::InvalidModel(format!("`{d}` listed twice")));
        }
    }
    Ok(index)
}

pub(crate) fn build_predicates(
    index: &HashMap<&str, usize>,
    specs: &BTreeMap<String, PredicateSpec>,
) -> Result<BTreeMap<String, Predicate>, HenkinError> {
    let mut out = BTreeMap::new();
    for (name, p) in specs {
        let mut tuples = BTreeSet::new();
        for t in &p.tuples {
            if t.len() != p.arity {
                return Err(HenkinError::ArityMismatch {
                    name: name.clone(),
                    expected: p.arity,
                    found: t.len(),
                });
            }
            let t = t
                .iter()
                .map(|d| {
                    index
                        .get(d.as_str())
                        .copied()
                        .ok_or_else(|| HenkinError::UnknownElement(d.0.clone()))
                })
                .collect::<Result<Vec<_>, _>>()?;
            tuples.insert(t);
        }
        out.insert(name.clone(), Predicate { arity: p.arity, tuples });
    }
    Ok(out)
}

pub(crate) fn predicate_specs(
    domain: &[String],
    preds: &BTreeMap<String, Predicate>,
) -> BTreeMap<String, PredicateSpec> {
    preds
        .iter()
        .map(|(k, p)| {
            let tuples = p
                .tuples
                .iter()
                .map(|t| t.iter().map(|&i| Name(domain[i].clone())).collect())
                .collect();
            (k.clone(), PredicateSpec { arity: p.arity, tuples })
        })
        .collect()
}

impl HenkinModel {
    pub fn new(
        domain: Vec<String>,
        predicates: BTreeMap<String, Predicate>,
        family: impl IntoIterator<Item = WorldSet>,
    ) -> Result<Self, HenkinError> {
        if domain.is_empty() || domain.len() > 64 {
            return Err(HenkinError::InvalidModel("domain must have 1 to 64 elements".into()));
        }
        let all = WorldSet::full(domain.len());
        let mut family: Vec<WorldSet> = family.into_iter().collect();
        family.sort();
        family.dedup();
        if family.is_empty() {
            return Err(HenkinError::InvalidModel("empty family".into()));
        }
        if family.iter().any(|s| !s.is_subset(all)) {
            return Err(HenkinError::InvalidModel("family member outside the domain".into()));
        }
        for (name, p) in &predicates {
            if p.tuples
                .iter()
                .any(|t| t.len() != p.arity || t.iter().any(|&d| d >= domain.len()))
            {
                return Err(HenkinError::InvalidModel(format!("bad tuples for `{name}`")));
            }
        }
        Ok(HenkinModel {
            domain,
            predicates,
            family,
        })
    }

    /// The model whose family is every subset of the domain.
    pub fn full(domain: Vec<String>, predicates: BTreeMap<String, Predicate>) -> Result<Self, HenkinError> {
        if domain.len() > MAX_POWERSET_DOMAIN {
            return Err(HenkinError::CapExceeded {
                what: "domain size".into(),
                size: domain.len(),
                cap: MAX_POWERSET_DOMAIN,
            });
        }
        let n = domain.len();
        Self::new(domain, predicates, WorldSet::all_subsets(n))
    }

    pub fn from_spec(spec: &HenkinSpec) -> Result<Self, HenkinError> {
        let index = domain_index(&spec.domain)?;
        let predicates = build_predicates(&index, &spec.predicates)?;
        let domain = spec.domain.iter().map(|d| d.0.clone()).collect();
        match &spec.family {
            FamilySpec::Keyword(k) if k == "full" => Self::full(domain, predicates),
            FamilySpec::Keyword(k) => Err(HenkinError::InvalidModel(format!(
                "family must be a list of sets or \"full\", not \"{k}\""
            ))),
            FamilySpec::Sets(sets) => {
                let sets = sets
                    .iter()
                    .map(|s| {
                        s.iter()
                            .map(|d| {
                                index
                                    .get(d.as_str())
                                    .copied()
                                    .ok_or_else(|| HenkinError::UnknownElement(d.0.clone()))
                            })
                            .collect::<Result<Vec<_>, _>>()
                            .map(WorldSet::from_indices)
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Self::new(domain, predicates, sets)
            }
        }
    }

    pub fn to_spec(&self) -> HenkinSpec {
        HenkinSpec {
            domain: self.domain.iter().map(|d| Name(d.clone())).collect(),
            predicates: predicate_specs(&self.domain, &self.predicates),
            family: FamilySpec::Sets(
                self.family
                    .iter()
                    .map(|s| s.iter().map(|i| Name(self.domain[i].clone())).collect())
                    .collect(),
            ),
        }
    }

    pub fn domain(&self) -> &[String] {
        &self.domain
    }

    pub fn predicates(&self) -> &BTreeMap<String, Predicate> {
        &self.predicates
    }

    /// Family members, sorted and without duplicates.
    pub fn family(&self) -> &[WorldSet] {
        &self.family
    }

    pub fn in_family(&self, s: WorldSet) -> bool {
        self.family.binary_search(&s).is_ok()
    }

    pub fn is_full(&self) -> bool {
        self.domain.len() < 64 && self.family.len() == 1 << self.domain.len()
    }

    pub fn element(&self, name: &str) -> Result<usize, HenkinError> {
        self.domain
            .iter()
            .position(|d| d == name)
            .ok_or_else(|| HenkinError::UnknownElement(name.to_string()))
    }

    pub fn set(&self, names: &[&str]) -> Result<WorldSet, HenkinError> {
        names
            .iter()
            .map(|n| self.element(n))
            .collect::<Result<Vec<_>, _>>()
            .map(WorldSet::from_indices)
    }

    pub fn show_set(&self, s: WorldSet) -> String {
        let parts: Vec<&str> = s.iter().map(|i| self.domain[i].as_str()).collect();
        format!("{{{}}}", parts.join(","))
    }
}

/// Values of free object and set variables.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MsoEnv {
    pub objects: BTreeMap<String, usize>,
    pub sets: BTreeMap<String, WorldSet>,
}

struct MsoEval<'a> {
    model: &'a HenkinModel,
    range: Vec<WorldSet>,
}

impl MsoEval<'_> {
    fn obj(&self, env: &MsoEnv, x: &str) -> Result<usize, HenkinError> {
        env.objects
            .get(x)
            .copied()
            .ok_or_else(|| HenkinError::UnboundVariable(x.to_string()))
    }

    fn eval(&self, f: &MsoFormula, env: &mut MsoEnv) -> Result<bool, HenkinError> {
        use MsoFormula::*;
        Ok(match f {
            True => true,
            False => false,
            Pred(name, args) => {
                let p = self
                    .model
                    .predicates
                    .get(name)
                    .ok_or_else(|| HenkinError::UnknownPredicate(name.clone()))?;
                if p.arity != args.len() {
                    return Err(HenkinError::ArityMismatch {
                        name: name.clone(),
                        expected: p.arity,
                        found: args.len(),
                    });
                }
                let t = args.iter().map(|x| self.obj(env, x)).collect::<Result<Vec<_>, _>>()?;
                p.tuples.contains(&t)
            }
            Eq(x, y) => self.obj(env, x)? == self.obj(env, y)?,
            SetAtom(s, x) => {
                let set = env
                    .sets
                    .get(s)
                    .copied()
                    .ok_or_else(|| HenkinError::UnboundVariable(s.clone()))?;
                set.contains(self.obj(env, x)?)
            }
            Not(a) => !self.eval(a, env)?,
            And(a, b) => self.eval(a, env)? && self.eval(b, env)?,
            Or(a, b) => self.eval(a, env)? || self.eval(b, env)?,
            Implies(a, b) => !self.eval(a, env)? || self.eval(b, env)?,
            Exists(x, a) | Forall(x, a) => {
                let want = matches!(f, Exists(..));
                let saved = env.objects.get(x).copied();
                let mut found = false;
                for d in 0..self.model.domain.len() {
                    env.objects.insert(x.clone(), d);
                    if self.eval(a, env)? == want {
                        found = true;
                        break;
                    }
                }
                restore(&mut env.objects, x, saved);
                found == want
            }
            ExistsSet(x, a) | ForallSet(x, a) => {
                let want = matches!(f, ExistsSet(..));
                let saved = env.sets.get(x).copied();
                let mut found = false;
                for &s in &self.range {
                    env.sets.insert(x.clone(), s);
                    if self.eval(a, env)? == want {
                        found = true;
                        break;
                    }
                }
                restore(&mut env.sets, x, saved);
                found == want
            }
        })
    }
}

fn restore<V>(map: &mut BTreeMap<String, V>, key: &str, saved: Option<V>) {
    match saved {
        Some(v) => map.insert(key.to_string(), v),
        None => map.remove(key),
    };
}

/// General (Henkin) semantics: set quantifiers range over the family.
pub fn eval_mso(model: &HenkinModel, f: &MsoFormula, env: &MsoEnv) -> Result<bool, HenkinError> {
    if let Some((x, _)) = env.sets.iter().find(|(_, &s)| !model.in_family(s)) {
        return Err(HenkinError::SetValueNotInFamily(x.clone()));
    }
    MsoEval {
        model,
        range: model.family.clone(),
    }
    .eval(f, &mut env.clone())
}

/// Standard semantics: set quantifiers range over every subset.
pub fn eval_mso_standard(model: &HenkinModel, f: &MsoFormula, env: &MsoEnv) -> Result<bool, HenkinError> {
    let n = model.domain.len();
    if n > MAX_POWERSET_DOMAIN {
        return Err(HenkinError::CapExceeded {
            what: "domain size".into(),
            size: n,
            cap: MAX_POWERSET_DOMAIN,
        });
    }
    if let Some((x, _)) = env.sets.iter().find(|(_, s)| !s.is_subset(WorldSet::full(n))) {
        return Err(HenkinError::InvalidModel(format!(
            "value of `{x}` is not a subset of the domain"
        )));
    }
    MsoEval {
        model,
        range: WorldSet::all_subsets(n).collect(),
    }
    .eval(f, &mut env.clone())
}

/// The τ-translation, also returning the predicate-sort name chosen for
/// each set variable. `X(y)` becomes `E(y,P)`; set quantifiers become
/// predicate-sort quantifiers. Names are `P`, `P1`, `P2`, ... in order of
/// first occurrence, skipping predicate constants.
pub fn tau_translate_with_map(f: &MsoFormula) -> (TwoSortedFormula, BTreeMap<String, String>) {
    let mut constants = BTreeSet::new();
    collect_constants(f, &mut constants);
    let fresh = std::iter::once("P".to_string())
        .chain((1..).map(|i| format!("P{i}")))
        .filter(move |p| !constants.contains(p));
    let mut tau = Tau {
        map: BTreeMap::new(),
        fresh: Box::new(fresh),
    };
    let out = tau.translate(f);
    (out, tau.map)
}

pub fn tau_translate(f: &MsoFormula) -> TwoSortedFormula {
    tau_translate_with_map(f).0
}

fn collect_constants(f: &MsoFormula, out: &mut BTreeSet<String>) {
    use MsoFormula::*;
    match f {
        Pred(p, _) => {
            out.insert(p.clone());
        }
        True | False | Eq(..) | SetAtom(..) => {}
        Not(a) | Exists(_, a) | Forall(_, a) | ExistsSet(_, a) | ForallSet(_, a) => collect_constants(a, out),
        And(a, b) | Or(a, b) | Implies(a, b) => {
            collect_constants(a, out);
            collect_constants(b, out);
        }
    }
}

struct Tau {
    map: BTreeMap<String, String>,
    fresh: Box<dyn Iterator<Item = String>>,
}

impl Tau {
    fn name(&mut self, x: &str) -> String {
        if let Some(p) = self.map.get(x) {
            return p.clone();
        }
        let p = self.fresh.next().expect("unbounded supply of names");
        self.map.insert(x.to_string(), p.clone());
        p
    }

    fn sub(&mut self, f: &MsoFormula) -> Box<TwoSortedFormula> {
        Box::new(self.translate(f))
    }

    fn translate(&mut self, f: &MsoFormula) -> TwoSortedFormula {
        use TwoSortedFormula as T;
        match f {
            MsoFormula::True => T::True,
            MsoFormula::False => T::False,
            MsoFormula::Pred(p, args) => T::Pred(p.clone(), args.clone()),
            MsoFormula::Eq(x, y) => T::Eq(Sort::Object, x.clone(), y.clone()),
            MsoFormula::SetAtom(s, x) => T::Member(x.clone(), self.name(s)),
            MsoFormula::Not(a) => T::Not(self.sub(a)),
            MsoFormula::And(x, y) => T::And(self.sub(x), self.sub(y)),
            MsoFormula::Or(x, y) => T::Or(self.sub(x), self.sub(y)),
            MsoFormula::Implies(x, y) => T::Implies(self.sub(x), self.sub(y)),
            MsoFormula::Exists(x, a) => T::Exists(Sort::Object, x.clone(), self.sub(a)),
            MsoFormula::Forall(x, a) => T::Forall(Sort::Object, x.clone(), self.sub(a)),
            MsoFormula::ExistsSet(x, a) => {
                let p = self.name(x);
                T::Exists(Sort::Predicate, p, self.sub(a))
            }
            MsoFormula::ForallSet(x, a) => {
                let p = self.name(x);
                T::Forall(Sort::Predicate, p, self.sub(a))
            }
        }
    }
}

/// One comprehension instance whose defined set is missing from the family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComprehensionFailure {
    pub formula: String,
    pub parameters: BTreeMap<String, String>,
    pub defined: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComprehensionReport {
    pub instances: usize,
    pub failures: Vec<ComprehensionFailure>,
}

impl ComprehensionReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Most parameter assignments tried per formula.
pub const MAX_COMPREHENSION_INSTANCES: usize = 1 << 16;

/// For each formula and each assignment of its parameters (free variables
/// other than `y`), checks that `{d : φ[y:=d]}` is in the family.
pub fn comprehension_check(
    model: &HenkinModel,
    formulas: &[MsoFormula],
    y: &str,
) -> Result<ComprehensionReport, HenkinError> {
    let mut report = ComprehensionReport {
        instances: 0,
        failures: Vec::new(),
    };
    let n = model.domain.len();
    for f in formulas {
        let fv = f.free_variables();
        let objs: Vec<&String> = fv.objects.iter().filter(|x| x.as_str() != y).collect();
        let sets: Vec<&String> = fv.sets.iter().collect();
        let count = (n as u128).pow(objs.len() as u32) * (model.family.len() as u128).pow(sets.len() as u32);
        if count > MAX_COMPREHENSION_INSTANCES as u128 {
            return Err(HenkinError::CapExceeded {
                what: "number of parameter assignments".into(),
                size: usize::try_from(count).unwrap_or(usize::MAX),
                cap: MAX_COMPREHENSION_INSTANCES,
            });
        }
        for k in 0..count as usize {
            let mut env = MsoEnv::default();
            let mut rest = k;
            for x in &objs {
                env.objects.insert((*x).clone(), rest % n);
                rest /= n;
            }
            for x in &sets {
                env.sets.insert((*x).clone(), model.family[rest % model.family.len()]);
                rest /= model.family.len();
            }
            let mut defined = WorldSet::EMPTY;
            for d in 0..n {
                env.objects.insert(y.to_string(), d);
                if eval_mso(model, f, &env)? {
                    defined.insert(d);
                }
            }
            report.instances += 1;
            if !model.in_family(defined) {
                let mut parameters: BTreeMap<String, String> = objs
                    .iter()
                    .map(|x| ((*x).clone(), model.domain[env.objects[*x]].clone()))
                    .collect();
                parameters.extend(sets.iter().map(|x| ((*x).clone(), model.show_set(env.sets[*x]))));
                report.failures.push(ComprehensionFailure {
                    formula: f.to_string(),
                    parameters,
                    defined: model.show_set(defined),
                });
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::syntax::parse_mso;

    pub(crate) fn model(domain: &[&str], family: &[&[&str]]) -> HenkinModel {
        let domain: Vec<String> = domain.iter().map(|s| s.to_string()).collect();
        let sets: Vec<WorldSet> = family
            .iter()
            .map(|s| WorldSet::from_indices(s.iter().map(|x| domain.iter().position(|d| d == x).unwrap())))
            .collect();
        HenkinModel::new(domain, BTreeMap::new(), sets).unwrap()
    }

    fn env(m: &HenkinModel, objs: &[(&str, &str)]) -> MsoEnv {
        MsoEnv {
            objects: objs
                .iter()
                .map(|(x, d)| (x.to_string(), m.element(d).unwrap()))
                .collect(),
            sets: BTreeMap::new(),
        }
    }

    #[test]
    fn set_quantifier_ranges_over_family() {
        let f = parse_mso("exists2 X. X(y)").unwrap();
        let full = model(&["a"], &[&["a"]]);
        assert!(eval_mso(&full, &f, &env(&full, &[("y", "a")])).unwrap());
        let empty = model(&["a"], &[&[]]);
        assert!(!eval_mso(&empty, &f, &env(&empty, &[("y", "a")])).unwrap());
        assert!(eval_mso_standard(&empty, &f, &env(&empty, &[("y", "a")])).unwrap());
    }

    #[test]
    fn standard_examples() {
        let m = model(&["a", "b"], &[&[]]);
        let e = env(&m, &[("x", "a"), ("y", "b")]);
        let t = parse_mso("forall2 X. (X(y) | ~X(y))").unwrap();
        assert!(eval_mso_standard(&m, &t, &e).unwrap());
        let leibniz = parse_mso("forall2 X. (X(x) <-> X(y))").unwrap();
        assert!(!eval_mso_standard(&m, &leibniz, &e).unwrap());
        assert!(eval_mso(&m, &leibniz, &e).unwrap());
    }

    #[test]
    fn set_values_must_be_admissible() {
        let m = model(&["a", "b"], &[&[]]);
        let mut e = env(&m, &[("y", "a")]);
        e.sets.insert("X".into(), m.set(&["a"]).unwrap());
        assert_eq!(
            eval_mso(&m, &MsoFormula::member("X", "y"), &e),
            Err(HenkinError::SetValueNotInFamily("X".into()))
        );
    }

    #[test]
    fn tau_examples() {
        let cases = [
            ("exists2 X. X(y)", "existsP P. E(y,P)"),
            ("forall x. R(x,y)", "forall x. R(x,y)"),
            ("forall2 X. (X(x) -> X(y))", "forallP P. (E(x,P) -> E(y,P))"),
            (
                "exists2 X. exists2 Y. (X(y) & Y(y) & P(y))",
                "existsP P1. existsP P2. ((E(y,P1) & E(y,P2)) & P(y))",
            ),
        ];
        for (src, want) in cases {
            assert_eq!(tau_translate(&parse_mso(src).unwrap()).to_string(), want, "{src}");
        }
    }

    #[test]
    fn comprehension_examples() {
        let m = model(&["a", "b"], &[&["a", "b"]]);
        let formulas = [parse_mso("y = y").unwrap(), parse_mso("~(y = y)").unwrap()];
        let report = comprehension_check(&m, &formulas, "y").unwrap();
        assert_eq!(report.instances, 2);
        assert_eq!(report.failures.len(), 1);
        assert_eq!(report.failures[0].defined, "{}");
        let full = HenkinModel::full(vec!["a".into(), "b".into()], BTreeMap::new()).unwrap();
        let params = [
            parse_mso("y = z").unwrap(),
            parse_mso("exists2 X. (X(y) & ~X(z))").unwrap(),
        ];
        let report = comprehension_check(&full, &params, "y").unwrap();
        assert_eq!(report.instances, 4);
        assert!(report.passed());
    }

    #[test]
    fn json_forms() {
        let spec: HenkinSpec = serde_json::from_str(r#"{"domain":["a","b"],"family":"full"}"#).unwrap();
        assert_eq!(HenkinModel::from_spec(&spec).unwrap().family().len(), 4);
        let spec: HenkinSpec = serde_json::from_str(r#"{"domain":[1,2],"family":[[1],[1],[]]}"#).unwrap();
        let m = HenkinModel::from_spec(&spec).unwrap();
        assert_eq!(m.family().len(), 2);
        assert_eq!(HenkinModel::from_spec(&m.to_spec()).unwrap(), m);
        let bad: HenkinSpec = serde_json::from_str(r#"{"domain":["a"],"family":"some"}"#).unwrap();
        assert!(HenkinModel::from_spec(&bad).is_err());
    }
}
