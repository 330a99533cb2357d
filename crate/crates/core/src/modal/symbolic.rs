//! The infinite frame on `ℕ ∪ {∞}` with `n+1 → n` and a reflexive `∞`,
//! whose admissible sets are the finite subsets of `ℕ` and the cofinite
//! sets containing `∞`.
//!
//! Sets are kept symbolically. General-frame μ is computed by a bounded
//! search: the admissible sets whose finite part (elements or excluded
//! points) lies in `0..=B` form a finite lattice `W_B` closed under
//! intersection, so the least pre-fixed point inside `W_B` exists and is
//! reached by iterating `X ↦ cl_B(X ∪ F(X))` from `∅`, where `cl_B(T)` is
//! the least member of `W_B` above `T`. The answer is accepted only when
//! bounds `B` and `2B` agree.

use super::eval::{evaluate, Lattice};
use super::ModalError;
use crate::syntax::{check_positivity, ModalFormula};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

pub const DEFAULT_BOUND: u64 = 64;

/// The part of a set inside `ℕ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum NatPart {
    Finite(BTreeSet<u64>),
    /// All naturals except the listed ones.
    Cofinite(BTreeSet<u64>),
}

/// A subset of `ℕ ∪ {∞}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymSet {
    pub naturals: NatPart,
    pub infinity: bool,
}

impl SymSet {
    pub fn empty() -> Self {
        SymSet {
            naturals: NatPart::Finite(BTreeSet::new()),
            infinity: false,
        }
    }

    pub fn everything() -> Self {
        SymSet {
            naturals: NatPart::Cofinite(BTreeSet::new()),
            infinity: true,
        }
    }

    /// Admissible finite set.
    pub fn finite(items: impl IntoIterator<Item = u64>) -> Self {
        SymSet {
            naturals: NatPart::Finite(items.into_iter().collect()),
            infinity: false,
        }
    }

    /// Admissible cofinite set containing `∞`.
    pub fn cofinite(excluded: impl IntoIterator<Item = u64>) -> Self {
        SymSet {
            naturals: NatPart::Cofinite(excluded.into_iter().collect()),
            infinity: true,
        }
    }

    /// `ℕ` itself, without the point at infinity.
    pub fn naturals() -> Self {
        SymSet {
            naturals: NatPart::Cofinite(BTreeSet::new()),
            infinity: false,
        }
    }

    pub fn is_admissible(&self) -> bool {
        matches!(
            (&self.naturals, self.infinity),
            (NatPart::Finite(_), false) | (NatPart::Cofinite(_), true)
        )
    }

    pub fn contains(&self, n: u64) -> bool {
        match &self.naturals {
            NatPart::Finite(a) => a.contains(&n),
            NatPart::Cofinite(e) => !e.contains(&n),
        }
    }

    pub fn union(&self, other: &SymSet) -> SymSet {
        use NatPart::*;
        let naturals = match (&self.naturals, &other.naturals) {
            (Finite(a), Finite(b)) => Finite(a | b),
            (Finite(a), Cofinite(e)) | (Cofinite(e), Finite(a)) => Cofinite(e - a),
            (Cofinite(e), Cofinite(f)) => Cofinite(e & f),
        };
        SymSet {
            naturals,
            infinity: self.infinity || other.infinity,
        }
    }

    pub fn intersection(&self, other: &SymSet) -> SymSet {
        use NatPart::*;
        let naturals = match (&self.naturals, &other.naturals) {
            (Finite(a), Finite(b)) => Finite(a & b),
            (Finite(a), Cofinite(e)) | (Cofinite(e), Finite(a)) => Finite(a - e),
            (Cofinite(e), Cofinite(f)) => Cofinite(e | f),
        };
        SymSet {
            naturals,
            infinity: self.infinity && other.infinity,
        }
    }

    pub fn complement(&self) -> SymSet {
        SymSet {
            naturals: match &self.naturals {
                NatPart::Finite(a) => NatPart::Cofinite(a.clone()),
                NatPart::Cofinite(e) => NatPart::Finite(e.clone()),
            },
            infinity: !self.infinity,
        }
    }

    /// Points with a successor in the set: `n+1` for each `n` in it, and `∞`
    /// if `∞` is in it.
    pub fn diamond(&self) -> SymSet {
        let naturals = match &self.naturals {
            NatPart::Finite(a) => NatPart::Finite(a.iter().map(|n| n + 1).collect()),
            NatPart::Cofinite(e) => NatPart::Cofinite(std::iter::once(0).chain(e.iter().map(|n| n + 1)).collect()),
        };
        SymSet {
            naturals,
            infinity: self.infinity,
        }
    }

    pub fn is_subset(&self, other: &SymSet) -> bool {
        self.intersection(other) == *self
    }

    /// Largest natural number mentioned by the representation.
    pub fn support_max(&self) -> Option<u64> {
        match &self.naturals {
            NatPart::Finite(a) | NatPart::Cofinite(a) => a.iter().next_back().copied(),
        }
    }

    /// Least admissible set in the window `W_bound` containing `self`.
    fn window_closure(&self, bound: u64) -> SymSet {
        match &self.naturals {
            NatPart::Finite(a) if !self.infinity && a.iter().all(|&n| n <= bound) => self.clone(),
            NatPart::Finite(a) => SymSet::cofinite((0..=bound).filter(|n| !a.contains(n))),
            NatPart::Cofinite(e) => SymSet::cofinite(e.iter().copied().filter(|&n| n <= bound)),
        }
    }
}

fn list(items: &BTreeSet<u64>) -> String {
    items.iter().map(u64::to_string).collect::<Vec<_>>().join(", ")
}

impl fmt::Display for SymSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let nat = match &self.naturals {
            NatPart::Finite(a) if a.is_empty() => None,
            NatPart::Finite(a) => Some(format!("{{{}}}", list(a))),
            NatPart::Cofinite(e) if e.is_empty() => Some("N".to_string()),
            NatPart::Cofinite(e) => Some(format!("N \\ {{{}}}", list(e))),
        };
        match (nat, self.infinity) {
            (None, false) => f.write_str("∅"),
            (None, true) => f.write_str("{∞}"),
            (Some(s), false) => f.write_str(&s),
            (Some(s), true) => write!(f, "{s} ∪ {{∞}}"),
        }
    }
}

/// JSON form: `{"kind":"finite","elements":[..]}` or
/// `{"kind":"cofinite","excluded":[..]}`. The `infinity` field appears only
/// when it differs from the admissible default (absent for finite sets,
/// present for cofinite ones).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SymSetJson {
    Finite {
        elements: Vec<u64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        infinity: Option<bool>,
    },
    Cofinite {
        excluded: Vec<u64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        infinity: Option<bool>,
    },
}

impl From<&SymSet> for SymSetJson {
    fn from(s: &SymSet) -> Self {
        match &s.naturals {
            NatPart::Finite(a) => SymSetJson::Finite {
                elements: a.iter().copied().collect(),
                infinity: s.infinity.then_some(true),
            },
            NatPart::Cofinite(e) => SymSetJson::Cofinite {
                excluded: e.iter().copied().collect(),
                infinity: (!s.infinity).then_some(false),
            },
        }
    }
}

impl From<SymSetJson> for SymSet {
    fn from(j: SymSetJson) -> Self {
        match j {
            SymSetJson::Finite { elements, infinity } => SymSet {
                naturals: NatPart::Finite(elements.into_iter().collect()),
                infinity: infinity.unwrap_or(false),
            },
            SymSetJson::Cofinite { excluded, infinity } => SymSet {
                naturals: NatPart::Cofinite(excluded.into_iter().collect()),
                infinity: infinity.unwrap_or(true),
            },
        }
    }
}

impl Serialize for SymSet {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        SymSetJson::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SymSet {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        SymSetJson::deserialize(deserializer).map(SymSet::from)
    }
}

/// Outcome of Kleene iteration on the infinite frame.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum StandardLfp {
    Converged {
        set: SymSet,
        iterations: usize,
    },
    /// No fixed point after `iterations` steps. `limit` is the extrapolated
    /// union of the chain (everything past the last iterate's frontier
    /// added), present only when it checks out as a fixed point.
    Divergent {
        iterations: usize,
        prefix: SymSet,
        limit: Option<SymSet>,
        limit_admissible: bool,
    },
}

impl StandardLfp {
    pub fn value(&self) -> Option<&SymSet> {
        match self {
            StandardLfp::Converged { set, .. } => Some(set),
            StandardLfp::Divergent { limit, .. } => limit.as_ref(),
        }
    }
}

/// Kleene iteration from `∅` for up to `bound` steps.
pub fn lfp_standard(
    bound: u64,
    op: &mut dyn FnMut(&SymSet) -> Result<SymSet, ModalError>,
) -> Result<StandardLfp, ModalError> {
    let mut current = SymSet::empty();
    for step in 1..=bound.max(1) as usize {
        let next = op(&current)?;
        if next == current {
            return Ok(StandardLfp::Converged {
                set: current,
                iterations: step,
            });
        }
        current = next;
    }
    let limit = match &current.naturals {
        NatPart::Finite(a) => {
            let frontier = a.iter().next_back().copied().unwrap_or(0);
            let guess = SymSet {
                naturals: NatPart::Cofinite((0..=frontier).filter(|n| !a.contains(n)).collect()),
                infinity: current.infinity,
            };
            (op(&guess)? == guess && current.is_subset(&guess)).then_some(guess)
        }
        NatPart::Cofinite(_) => None,
    };
    Ok(StandardLfp::Divergent {
        iterations: bound as usize,
        limit_admissible: limit.as_ref().is_some_and(SymSet::is_admissible),
        prefix: current,
        limit,
    })
}

/// Least admissible pre-fixed point inside `W_bound`, with the iteration count.
fn window_lfp(
    bound: u64,
    op: &mut dyn FnMut(&SymSet) -> Result<SymSet, ModalError>,
) -> Result<(SymSet, usize), ModalError> {
    let mut current = SymSet::empty();
    let limit = 2 * (bound as usize + 1) + 2;
    for step in 1..=limit {
        let image = op(&current)?;
        if !image.is_admissible() {
            return Err(ModalError::NotAdmissible { set: image.to_string() });
        }
        let next = current.union(&image).window_closure(bound);
        if next == current {
            return Ok((current, step));
        }
        current = next;
    }
    unreachable!("window chain of length {limit} cannot grow further")
}

/// General-frame least fixed point: the intersection of admissible
/// pre-fixed points, searched with window bounds `bound` and `2*bound`.
pub fn lfp_general(
    bound: u64,
    op: &mut dyn FnMut(&SymSet) -> Result<SymSet, ModalError>,
) -> Result<SymSet, ModalError> {
    let (small, _) = window_lfp(bound, op)?;
    let (large, _) = window_lfp(2 * bound, op)?;
    if small == large {
        Ok(small)
    } else {
        Err(ModalError::BoundExceeded { bound })
    }
}

/// A model on the infinite frame: an admissible valuation and a search bound.
#[derive(Debug, Clone)]
pub struct SymbolicModel {
    bound: u64,
    valuation: BTreeMap<String, SymSet>,
}

impl SymbolicModel {
    pub fn new(bound: u64, valuation: BTreeMap<String, SymSet>) -> Result<Self, ModalError> {
        if bound == 0 {
            return Err(ModalError::InvalidFrame("symbolic bound must be positive".into()));
        }
        if let Some((letter, _)) = valuation.iter().find(|(_, s)| !s.is_admissible()) {
            return Err(ModalError::ValuationNotAdmissible { letter: letter.clone() });
        }
        Ok(SymbolicModel { bound, valuation })
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn valuation(&self) -> &BTreeMap<String, SymSet> {
        &self.valuation
    }

    fn letter(&self, name: &str) -> Result<SymSet, ModalError> {
        self.valuation
            .get(name)
            .cloned()
            .ok_or_else(|| ModalError::UnknownLetter(name.to_string()))
    }

    /// General-frame extension of a formula.
    pub fn extension(&self, formula: &ModalFormula) -> Result<SymSet, ModalError> {
        check_positivity(formula)?;
        evaluate(&General(self), formula, &BTreeMap::new())
    }

    /// Standard extension. Fails with `Divergent` when some μ-iteration has
    /// no verified limit within the bound.
    pub fn extension_standard(&self, formula: &ModalFormula) -> Result<SymSet, ModalError> {
        check_positivity(formula)?;
        evaluate(&Standard(self), formula, &BTreeMap::new())
    }

    /// Kleene iteration for a top-level `mu X. body`, reporting divergence
    /// instead of failing on it.
    pub fn standard_iteration(&self, formula: &ModalFormula) -> Result<StandardLfp, ModalError> {
        check_positivity(formula)?;
        let ModalFormula::Mu(x, body) = formula else {
            return Err(ModalError::NotAFixpoint(formula.to_string()));
        };
        let mut env = BTreeMap::new();
        lfp_standard(self.bound, &mut |s| {
            env.insert(x.clone(), s.clone());
            evaluate(&Standard(self), body, &env)
        })
    }
}

struct General<'a>(&'a SymbolicModel);
struct Standard<'a>(&'a SymbolicModel);

macro_rules! symbolic_ops {
    () => {
        type Set = SymSet;
        fn bottom(&self) -> SymSet {
            SymSet::empty()
        }
        fn top(&self) -> SymSet {
            SymSet::everything()
        }
        fn join(&self, a: &SymSet, b: &SymSet) -> SymSet {
            a.union(b)
        }
        fn meet(&self, a: &SymSet, b: &SymSet) -> SymSet {
            a.intersection(b)
        }
        fn complement(&self, a: &SymSet) -> SymSet {
            a.complement()
        }
        fn diamond(&self, a: &SymSet) -> SymSet {
            a.diamond()
        }
        fn letter(&self, name: &str) -> Result<SymSet, ModalError> {
            self.0.letter(name)
        }
    };
}

impl Lattice for General<'_> {
    symbolic_ops!();

    fn least_fixpoint(&self, op: &mut dyn FnMut(&SymSet) -> Result<SymSet, ModalError>) -> Result<SymSet, ModalError> {
        lfp_general(self.0.bound, op)
    }
}

impl Lattice for Standard<'_> {
    symbolic_ops!();

    fn least_fixpoint(&self, op: &mut dyn FnMut(&SymSet) -> Result<SymSet, ModalError>) -> Result<SymSet, ModalError> {
        match lfp_standard(self.0.bound, op)? {
            StandardLfp::Converged { set, .. } => Ok(set),
            StandardLfp::Divergent { limit: Some(l), .. } => Ok(l),
            StandardLfp::Divergent { iterations, prefix, .. } => Err(ModalError::Divergent {
                iterations,
                prefix: prefix.to_string(),
            }),
        }
    }
}
