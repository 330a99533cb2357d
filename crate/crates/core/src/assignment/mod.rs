//! First-order logic over general assignment models: only the assignments
//! in `V` are available, and `exists x` moves within `V`.

mod confluence;
mod guarded;

pub use confluence::{
    assignment_frame, axiom_counterexample, check_confluence, correspondence_experiment, AbstractAssignmentFrame,
    AbstractFrameSpec, ConfluenceReport, CorrespondenceReport, Mismatch,
};
pub use guarded::{ext_embedding, translate_guarded, with_guard, GuardedTranslation};

use crate::io::Name;
use crate::syntax::FoFormula;
use serde::{Deserialize, Serialize};
use std::borrow::Cow;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use thiserror::Error;

/// Most tuples the extension modality may range over (`4^3`).
pub const DEFAULT_TUPLE_CAP: usize = 64;
/// Most tuples missing from `V` when enumerating its supersets.
pub const DEFAULT_MISSING_CAP: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GaError {
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("assignment {0} is not admissible")]
    AssignmentNotAdmissible(String),
    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),
    #[error("predicate `{name}` has arity {expected} but is applied to {found} arguments")]
    ArityMismatch {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("variable `{0}` is not in the variable universe")]
    VariableOutsideUniverse(String),
    #[error("{what} is {size}, above the cap of {cap}")]
    CapExceeded { what: String, size: usize, cap: usize },
    #[error("the extension modality cannot be translated")]
    UnsupportedExt,
    #[error("predicate `{0}` already exists in the model")]
    PredicateClash(String),
    #[error("confluence needs two distinct known variables, got `{0}` and `{1}`")]
    BadVariables(String, String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Predicate {
    pub arity: usize,
    pub tuples: BTreeSet<Vec<usize>>,
}

/// A finite first-order model together with a set of admissible
/// assignments, each a tuple over the variable universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GAModel {
    domain: Vec<String>,
    predicates: BTreeMap<String, Predicate>,
    variables: Vec<String>,
    assignments: BTreeSet<Vec<usize>>,
}

/// JSON form of a [`GAModel`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaModelSpec {
    pub domain: Vec<Name>,
    #[serde(default)]
    pub predicates: BTreeMap<String, PredicateSpec>,
    pub variables: Vec<String>,
    pub assignments: Vec<Vec<Name>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PredicateSpec {
    pub arity: usize,
    pub tuples: Vec<Vec<Name>>,
}

fn lookup(index: &HashMap<&str, usize>, name: &str) -> Result<usize, GaError> {
    index
        .get(name)
        .copied()
        .ok_or_else(|| GaError::InvalidModel(format!("`{name}` is not in the domain")))
}

impl GAModel {
    pub fn from_spec(spec: &GaModelSpec) -> Result<Self, GaError> {
        if spec.domain.is_empty() {
            return Err(GaError::InvalidModel("empty domain".into()));
        }
        let mut index = HashMap::new();
        for (i, d) in spec.domain.iter().enumerate() {
            if index.insert(d.as_str(), i).is_some() {
                return Err(GaError::InvalidModel(format!("`{d}` listed twice in the domain")));
            }
        }
        let mut seen = BTreeSet::new();
        if let Some(x) = spec.variables.iter().find(|x| !seen.insert(*x)) {
            return Err(GaError::InvalidModel(format!("variable `{x}` listed twice")));
        }
        if let Some(x) = spec
            .variables
            .iter()
            .find(|x| crate::syntax::Sort::of(x) != Some(crate::syntax::Sort::Object))
        {
            return Err(GaError::InvalidModel(format!("`{x}` is not a lowercase variable name")));
        }
        let tuple = |t: &[Name]| {
            t.iter()
                .map(|d| lookup(&index, d.as_str()))
                .collect::<Result<Vec<_>, _>>()
        };
        let mut predicates = BTreeMap::new();
        for (name, p) in &spec.predicates {
            let mut tuples = BTreeSet::new();
            for t in &p.tuples {
                if t.len() != p.arity {
                    return Err(GaError::ArityMismatch {
                        name: name.clone(),
                        expected: p.arity,
                        found: t.len(),
                    });
                }
                tuples.insert(tuple(t)?);
            }
            predicates.insert(name.clone(), Predicate { arity: p.arity, tuples });
        }
        let n = spec.variables.len();
        let mut assignments = BTreeSet::new();
        for a in &spec.assignments {
            if a.len() != n {
                return Err(GaError::InvalidModel(format!(
                    "assignment of length {} over {n} variables",
                    a.len()
                )));
            }
            assignments.insert(tuple(a)?);
        }
        if assignments.is_empty() {
            return Err(GaError::InvalidModel("no admissible assignments".into()));
        }
        Ok(GAModel {
            domain: spec.domain.iter().map(|d| d.0.clone()).collect(),
            predicates,
            variables: spec.variables.clone(),
            assignments,
        })
    }

    pub fn to_spec(&self) -> GaModelSpec {
        let names = |t: &Vec<usize>| t.iter().map(|&i| Name(self.domain[i].clone())).collect();
        GaModelSpec {
            domain: self.domain.iter().map(|d| Name(d.clone())).collect(),
            predicates: self
                .predicates
                .iter()
                .map(|(k, p)| {
                    (
                        k.clone(),
                        PredicateSpec {
                            arity: p.arity,
                            tuples: p.tuples.iter().map(names).collect(),
                        },
                    )
                })
                .collect(),
            variables: self.variables.clone(),
            assignments: self.assignments.iter().map(names).collect(),
        }
    }

    pub fn domain(&self) -> &[String] {
        &self.domain
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn predicates(&self) -> &BTreeMap<String, Predicate> {
        &self.predicates
    }

    pub fn assignments(&self) -> &BTreeSet<Vec<usize>> {
        &self.assignments
    }

    /// The same first-order model with a different assignment set.
    pub fn with_assignments(&self, assignments: BTreeSet<Vec<usize>>) -> Result<Self, GaError> {
        let n = self.variables.len();
        if assignments.is_empty()
            || assignments
                .iter()
                .any(|a| a.len() != n || a.iter().any(|&d| d >= self.domain.len()))
        {
            return Err(GaError::InvalidModel("bad assignment set".into()));
        }
        Ok(GAModel {
            assignments,
            ..self.clone()
        })
    }

    pub(crate) fn insert_predicate(&mut self, name: &str, p: Predicate) {
        self.predicates.insert(name.to_string(), p);
    }

    /// Every tuple over the variable universe.
    pub fn full_space(&self) -> BTreeSet<Vec<usize>> {
        all_tuples(self.domain.len(), self.variables.len()).collect()
    }

    pub fn is_full(&self) -> bool {
        self.assignments.len() == self.domain.len().pow(self.variables.len() as u32)
    }

    /// Parses a tuple of element names into an assignment.
    pub fn assignment(&self, names: &[&str]) -> Result<Vec<usize>, GaError> {
        if names.len() != self.variables.len() {
            return Err(GaError::InvalidModel(format!(
                "assignment needs {} values",
                self.variables.len()
            )));
        }
        names
            .iter()
            .map(|n| {
                self.domain
                    .iter()
                    .position(|d| d == n)
                    .ok_or_else(|| GaError::InvalidModel(format!("`{n}` is not in the domain")))
            })
            .collect()
    }

    pub fn show(&self, s: &[usize]) -> String {
        let parts: Vec<&str> = s.iter().map(|&i| self.domain[i].as_str()).collect();
        format!("({})", parts.join(","))
    }

    fn var(&self, x: &str) -> Result<usize, GaError> {
        self.variables
            .iter()
            .position(|v| v == x)
            .ok_or_else(|| GaError::VariableOutsideUniverse(x.to_string()))
    }
}

pub(crate) fn all_tuples(domain: usize, n: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = domain.checked_pow(n as u32).expect("tuple space too large");
    (0..total).map(move |mut k| {
        let mut t = vec![0; n];
        for slot in t.iter_mut().rev() {
            *slot = k % domain;
            k /= domain;
        }
        t
    })
}

/// Caps on the superset search of the extension modality.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExtCaps {
    pub tuples: usize,
    pub missing: usize,
}

impl Default for ExtCaps {
    fn default() -> Self {
        ExtCaps {
            tuples: DEFAULT_TUPLE_CAP,
            missing: DEFAULT_MISSING_CAP,
        }
    }
}

enum Space<'a> {
    Full,
    Set(Cow<'a, BTreeSet<Vec<usize>>>),
}

impl Space<'_> {
    fn contains(&self, s: &[usize]) -> bool {
        match self {
            Space::Full => true,
            Space::Set(v) => v.contains(s),
        }
    }
}

struct Evaluator<'a> {
    model: &'a GAModel,
    caps: ExtCaps,
}

impl Evaluator<'_> {
    fn eval(&self, f: &FoFormula, space: &Space, s: &mut Vec<usize>) -> Result<bool, GaError> {
        use FoFormula::*;
        Ok(match f {
            True => true,
            False => false,
            Pred(name, args) => {
                let p = self
                    .model
                    .predicates
                    .get(name)
                    .ok_or_else(|| GaError::UnknownPredicate(name.clone()))?;
                if p.arity != args.len() {
                    return Err(GaError::ArityMismatch {
                        name: name.clone(),
                        expected: p.arity,
                        found: args.len(),
                    });
                }
                let t = args
                    .iter()
                    .map(|x| self.model.var(x).map(|i| s[i]))
                    .collect::<Result<Vec<_>, _>>()?;
                p.tuples.contains(&t)
            }
            Eq(x, y) => s[self.model.var(x)?] == s[self.model.var(y)?],
            Not(a) => !self.eval(a, space, s)?,
            And(a, b) => self.eval(a, space, s)? && self.eval(b, space, s)?,
            Or(a, b) => self.eval(a, space, s)? || self.eval(b, space, s)?,
            Implies(a, b) => !self.eval(a, space, s)? || self.eval(b, space, s)?,
            Exists(x, a) => self.some_variant(std::slice::from_ref(x), a, space, s, true)?,
            Forall(x, a) => !self.some_variant(std::slice::from_ref(x), a, space, s, false)?,
            PolyExists(xs, a) => self.some_variant(xs, a, space, s, true)?,
            Ext(a) => self.ext(a, space, s)?,
        })
    }

    /// Whether some admissible variant of `s` off `xs` makes `a` come out
    /// as `want`.
    fn some_variant(
        &self,
        xs: &[String],
        a: &FoFormula,
        space: &Space,
        s: &mut Vec<usize>,
        want: bool,
    ) -> Result<bool, GaError> {
        let idx = xs.iter().map(|x| self.model.var(x)).collect::<Result<Vec<_>, _>>()?;
        let saved = s.clone();
        let mut found = false;
        for values in all_tuples(self.model.domain.len(), idx.len()) {
            for (&i, &d) in idx.iter().zip(&values) {
                s[i] = d;
            }
            if space.contains(s) && self.eval(a, space, s)? == want {
                found = true;
                break;
            }
        }
        s.copy_from_slice(&saved);
        Ok(found)
    }

    fn ext(&self, a: &FoFormula, space: &Space, s: &mut Vec<usize>) -> Result<bool, GaError> {
        let current = match space {
            Space::Full => return self.eval(a, space, s),
            Space::Set(v) => v,
        };
        let total = self.model.domain.len().checked_pow(self.model.variables.len() as u32);
        let total = total.filter(|&t| t <= self.caps.tuples).ok_or(GaError::CapExceeded {
            what: "tuple space".into(),
            size: total.unwrap_or(usize::MAX),
            cap: self.caps.tuples,
        })?;
        let missing: Vec<Vec<usize>> = all_tuples(self.model.domain.len(), self.model.variables.len())
            .filter(|t| !current.contains(t))
            .collect();
        if missing.len() > self.caps.missing {
            return Err(GaError::CapExceeded {
                what: "number of tuples outside V".into(),
                size: missing.len(),
                cap: self.caps.missing,
            });
        }
        for mask in 0u64..1 << missing.len() {
            let mut bigger = current.as_ref().clone();
            bigger.extend(
                missing
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, t)| t.clone()),
            );
            let space = if bigger.len() == total {
                Space::Full
            } else {
                Space::Set(Cow::Owned(bigger))
            };
            if self.eval(a, &space, s)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

fn check_universe(model: &GAModel, f: &FoFormula) -> Result<(), GaError> {
    match f.variables().into_iter().find(|x| !model.variables.contains(x)) {
        Some(x) => Err(GaError::VariableOutsideUniverse(x)),
        None => Ok(()),
    }
}

/// Truth of `f` at the admissible assignment `s`. The extension modality
/// is evaluated with the default caps.
pub fn eval_ga(model: &GAModel, f: &FoFormula, s: &[usize]) -> Result<bool, GaError> {
    eval_extension_modality(model, f, s, ExtCaps::default())
}

/// Truth of `f` at `s`, where `ext φ` holds iff `φ` holds at `s` for some
/// assignment set `V' ⊇ V`.
pub fn eval_extension_modality(model: &GAModel, f: &FoFormula, s: &[usize], caps: ExtCaps) -> Result<bool, GaError> {
    check_universe(model, f)?;
    if !model.assignments.contains(s) {
        return Err(GaError::AssignmentNotAdmissible(show_raw(model, s)));
    }
    let space = if model.is_full() {
        Space::Full
    } else {
        Space::Set(Cow::Borrowed(&model.assignments))
    };
    Evaluator { model, caps }.eval(f, &space, &mut s.to_vec())
}

/// Classical evaluation over the full assignment space; `V` is ignored.
pub fn eval_standard_fol(model: &GAModel, f: &FoFormula, s: &[usize]) -> Result<bool, GaError> {
    check_universe(model, f)?;
    if s.len() != model.variables.len() || s.iter().any(|&d| d >= model.domain.len()) {
        return Err(GaError::InvalidModel(format!(
            "{} is not an assignment",
            show_raw(model, s)
        )));
    }
    Evaluator {
        model,
        caps: ExtCaps::default(),
    }
    .eval(f, &Space::Full, &mut s.to_vec())
}

fn show_raw(model: &GAModel, s: &[usize]) -> String {
    if s.iter().all(|&d| d < model.domain.len()) {
        model.show(s)
    } else {
        format!("{s:?}")
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::io::names;
    use crate::syntax::parse_fol;

    pub(crate) fn model(domain: &[&str], preds: &[(&str, &[&[&str]])], vars: &[&str], v: &[&[&str]]) -> GAModel {
        GAModel::from_spec(&GaModelSpec {
            domain: names(domain),
            predicates: preds
                .iter()
                .map(|(n, ts)| {
                    (
                        n.to_string(),
                        PredicateSpec {
                            arity: ts.first().map_or(1, |t| t.len()),
                            tuples: ts.iter().map(|t| names(t)).collect(),
                        },
                    )
                })
                .collect(),
            variables: vars.iter().map(|s| s.to_string()).collect(),
            assignments: v.iter().map(|t| names(t)).collect(),
        })
        .unwrap()
    }

    pub(crate) fn basic() -> GAModel {
        model(
            &["a", "b"],
            &[("P", &[&["b"]])],
            &["x", "y"],
            &[&["a", "a"], &["a", "b"]],
        )
    }

    fn holds(m: &GAModel, f: &str, s: &[&str]) -> bool {
        eval_ga(m, &parse_fol(f).unwrap(), &m.assignment(s).unwrap()).unwrap()
    }

    #[test]
    fn quantifiers_move_within_v() {
        let m = basic();
        assert!(!holds(&m, "exists x. P(x)", &["a", "a"]));
        assert!(holds(&m, "exists y. P(y)", &["a", "a"]));
        let s = m.assignment(&["a", "a"]).unwrap();
        assert!(eval_standard_fol(&m, &parse_fol("exists x. P(x)").unwrap(), &s).unwrap());
    }

    #[test]
    fn polyadic_differs_from_stepwise() {
        let m = model(
            &["a", "b"],
            &[("P", &[&["b"]]), ("Q", &[&["b"]])],
            &["x", "y"],
            &[&["a", "a"], &["b", "b"]],
        );
        assert!(holds(&m, "exists (x,y). (P(x) & Q(y))", &["a", "a"]));
        assert!(!holds(&m, "exists x. exists y. (P(x) & Q(y))", &["a", "a"]));
    }

    #[test]
    fn standard_examples() {
        let m = model(&["a", "b"], &[("R", &[&["a", "b"]])], &["x", "y"], &[&["a", "a"]]);
        let s = m.assignment(&["a", "a"]).unwrap();
        for f in ["forall x. x = x", "exists x. exists y. R(x,y)"] {
            assert!(eval_standard_fol(&m, &parse_fol(f).unwrap(), &s).unwrap(), "{f}");
        }
    }

    #[test]
    fn errors() {
        let m = basic();
        let bb = m.assignment(&["b", "b"]).unwrap();
        assert!(matches!(
            eval_ga(&m, &parse_fol("true").unwrap(), &bb),
            Err(GaError::AssignmentNotAdmissible(_))
        ));
        let aa = m.assignment(&["a", "a"]).unwrap();
        assert_eq!(
            eval_ga(&m, &parse_fol("Q(x)").unwrap(), &aa),
            Err(GaError::UnknownPredicate("Q".into()))
        );
        assert_eq!(
            eval_ga(&m, &parse_fol("exists z. P(z)").unwrap(), &aa),
            Err(GaError::VariableOutsideUniverse("z".into()))
        );
    }

    #[test]
    fn extension_modality() {
        let m = basic();
        assert!(holds(&m, "ext true", &["a", "a"]));
        assert!(holds(&m, "ext exists x. P(x)", &["a", "a"]));
        assert!(!holds(&m, "ext ~exists y. P(y)", &["a", "a"]));
        let wide = model(&["a", "b", "c", "d", "e"], &[], &["x", "y", "z"], &[&["a", "a", "a"]]);
        let s = wide.assignment(&["a", "a", "a"]).unwrap();
        assert!(matches!(
            eval_ga(&wide, &parse_fol("ext true").unwrap(), &s),
            Err(GaError::CapExceeded { .. })
        ));
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"domain":["a","b"],"predicates":{"R":{"arity":2,"tuples":[["a","b"]]}},
            "variables":["x","y"],"assignments":[["a","a"],["a","b"]]}"#;
        let spec: GaModelSpec = serde_json::from_str(text).unwrap();
        let m = GAModel::from_spec(&spec).unwrap();
        assert_eq!(m.to_spec(), spec);
        let bad = r#"{"domain":[0,1],"variables":["x"],"assignments":[]}"#;
        assert!(GAModel::from_spec(&serde_json::from_str(bad).unwrap()).is_err());
    }
}
