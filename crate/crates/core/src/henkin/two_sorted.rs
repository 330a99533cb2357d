use super::{build_predicates, domain_index, predicate_specs, HenkinError, HenkinModel};
use crate::assignment::{Predicate, PredicateSpec};
use crate::io::Name;
use crate::modal::WorldSet;
use crate::syntax::{Sort, TwoSortedFormula};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap, HashSet};

/// Objects, predicate points, and the membership relation `E` between
/// them, stored as the extension of each point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoSortedStructure {
    objects: Vec<String>,
    points: Vec<String>,
    ext: Vec<WorldSet>,
    predicates: BTreeMap<String, Predicate>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwoSortedSpec {
    pub objects: Vec<Name>,
    #[serde(rename = "predPoints")]
    pub pred_points: Vec<Name>,
    #[serde(rename = "E")]
    pub e: Vec<(Name, Name)>,
    #[serde(default)]
    pub predicates: BTreeMap<String, PredicateSpec>,
}

impl TwoSortedStructure {
    pub fn new(
        objects: Vec<String>,
        points: Vec<String>,
        ext: Vec<WorldSet>,
        predicates: BTreeMap<String, Predicate>,
    ) -> Result<Self, HenkinError> {
        if objects.is_empty() || objects.len() > 64 {
            return Err(HenkinError::InvalidModel("need 1 to 64 objects".into()));
        }
        if points.len() != ext.len() || ext.iter().any(|s| !s.is_subset(WorldSet::full(objects.len()))) {
            return Err(HenkinError::InvalidModel("E relates unknown objects".into()));
        }
        let mut seen = HashSet::new();
        if let Some(p) = points.iter().find(|p| !seen.insert(*p)) {
            return Err(HenkinError::InvalidModel(format!("predicate point `{p}` listed twice")));
        }
        Ok(TwoSortedStructure {
            objects,
            points,
            ext,
            predicates,
        })
    }

    pub fn from_spec(spec: &TwoSortedSpec) -> Result<Self, HenkinError> {
        let index = domain_index(&spec.objects)?;
        let pindex: HashMap<&str, usize> = spec
            .pred_points
            .iter()
            .enumerate()
            .map(|(i, p)| (p.as_str(), i))
            .collect();
        let mut ext = vec![WorldSet::EMPTY; spec.pred_points.len()];
        for (o, p) in &spec.e {
            let o = *index
                .get(o.as_str())
                .ok_or_else(|| HenkinError::UnknownElement(o.0.clone()))?;
            let p = *pindex
                .get(p.as_str())
                .ok_or_else(|| HenkinError::InvalidModel(format!("unknown predicate point `{p}`")))?;
            ext[p].insert(o);
        }
        Self::new(
            spec.objects.iter().map(|o| o.0.clone()).collect(),
            spec.pred_points.iter().map(|p| p.0.clone()).collect(),
            ext,
            build_predicates(&index, &spec.predicates)?,
        )
    }

    pub fn to_spec(&self) -> TwoSortedSpec {
        TwoSortedSpec {
            objects: self.objects.iter().map(|o| Name(o.clone())).collect(),
            pred_points: self.points.iter().map(|p| Name(p.clone())).collect(),
            e: self
                .ext
                .iter()
                .enumerate()
                .flat_map(|(p, s)| s.iter().map(move |o| (o, p)))
                .map(|(o, p)| (Name(self.objects[o].clone()), Name(self.points[p].clone())))
                .collect(),
            predicates: predicate_specs(&self.objects, &self.predicates),
        }
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    /// Objects `E`-related to predicate point `p`.
    pub fn extension(&self, p: usize) -> WorldSet {
        self.ext[p]
    }

    /// First predicate point whose extension is `s`.
    pub fn point_of(&self, s: WorldSet) -> Option<usize> {
        self.ext.iter().position(|&e| e == s)
    }
}

/// One predicate point per family member, `E` as membership.
pub fn to_two_sorted(model: &HenkinModel) -> TwoSortedStructure {
    TwoSortedStructure::new(
        model.domain().to_vec(),
        model.family().iter().map(|&s| model.show_set(s)).collect(),
        model.family().to_vec(),
        model.predicates().clone(),
    )
    .expect("family members are distinct subsets of the domain")
}

/// Values of free variables of both sorts.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TwoSortedEnv {
    pub objects: BTreeMap<String, usize>,
    pub points: BTreeMap<String, usize>,
}

/// Classical evaluation; predicate-sort quantifiers range over the points.
pub fn eval_two_sorted(st: &TwoSortedStructure, f: &TwoSortedFormula, env: &TwoSortedEnv) -> Result<bool, HenkinError> {
    eval(st, f, &mut env.clone())
}

fn get(map: &BTreeMap<String, usize>, x: &str) -> Result<usize, HenkinError> {
    map.get(x)
        .copied()
        .ok_or_else(|| HenkinError::UnboundVariable(x.to_string()))
}

fn eval(st: &TwoSortedStructure, f: &TwoSortedFormula, env: &mut TwoSortedEnv) -> Result<bool, HenkinError> {
    use TwoSortedFormula::*;
    Ok(match f {
        True => true,
        False => false,
        Pred(name, args) => {
            let p = st
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
            let t = args
                .iter()
                .map(|x| get(&env.objects, x))
                .collect::<Result<Vec<_>, _>>()?;
            p.tuples.contains(&t)
        }
        Eq(Sort::Object, x, y) => get(&env.objects, x)? == get(&env.objects, y)?,
        Eq(Sort::Predicate, p, q) => get(&env.points, p)? == get(&env.points, q)?,
        Member(x, p) => st.ext[get(&env.points, p)?].contains(get(&env.objects, x)?),
        Not(a) => !eval(st, a, env)?,
        And(a, b) => eval(st, a, env)? && eval(st, b, env)?,
        Or(a, b) => eval(st, a, env)? || eval(st, b, env)?,
        Implies(a, b) => !eval(st, a, env)? || eval(st, b, env)?,
        Exists(sort, x, a) | Forall(sort, x, a) => {
            let want = matches!(f, Exists(..));
            let size = match sort {
                Sort::Object => st.objects.len(),
                Sort::Predicate => st.points.len(),
            };
            fn slot(env: &mut TwoSortedEnv, sort: Sort) -> &mut BTreeMap<String, usize> {
                match sort {
                    Sort::Object => &mut env.objects,
                    Sort::Predicate => &mut env.points,
                }
            }
            let saved = slot(env, *sort).get(x).copied();
            let mut found = false;
            for v in 0..size {
                slot(env, *sort).insert(x.clone(), v);
                if eval(st, a, env)? == want {
                    found = true;
                    break;
                }
            }
            match saved {
                Some(v) => slot(env, *sort).insert(x.clone(), v),
                None => slot(env, *sort).remove(x),
            };
            found == want
        }
    })
}

/// Result of a structural check, with a violating pair when it fails.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairReport {
    pub holds: bool,
    pub witness: Option<(String, String)>,
}

impl PairReport {
    fn from(witness: Option<(String, String)>) -> Self {
        PairReport {
            holds: witness.is_none(),
            witness,
        }
    }
}

/// Extensionality: distinct predicate points have distinct extensions.
pub fn check_ext(st: &TwoSortedStructure) -> PairReport {
    let n = st.points.len();
    PairReport::from(
        (0..n)
            .flat_map(|p| (p + 1..n).map(move |q| (p, q)))
            .find(|&(p, q)| st.ext[p] == st.ext[q])
            .map(|(p, q)| (st.points[p].clone(), st.points[q].clone())),
    )
}

/// Individuality: distinct objects are told apart by some predicate point.
pub fn check_individuality(st: &TwoSortedStructure) -> PairReport {
    let n = st.objects.len();
    PairReport::from(
        (0..n)
            .flat_map(|x| (x + 1..n).map(move |y| (x, y)))
            .find(|&(x, y)| st.ext.iter().all(|e| e.contains(x) == e.contains(y)))
            .map(|(x, y)| (st.objects[x].clone(), st.objects[y].clone())),
    )
}

/// Fullness: every set of objects is the extension of some point. The
/// witness, if any, is an unrepresented set.
pub fn check_fullness(st: &TwoSortedStructure) -> (bool, Option<String>) {
    let exts: HashSet<WorldSet> = st.ext.iter().copied().collect();
    let n = st.objects.len();
    // Subsets are visited in order, so a missing one turns up within
    // |exts| + 1 steps.
    let missing = (0..=exts.len() as u64)
        .map(WorldSet)
        .take_while(|s| n >= 64 || s.0 < 1 << n)
        .find(|s| !exts.contains(s));
    match missing {
        None => (true, None),
        Some(s) => {
            let names: Vec<&str> = s.iter().map(|i| st.objects[i].as_str()).collect();
            (false, Some(format!("{{{}}}", names.join(","))))
        }
    }
}
