//! Kripke frames, general frames with admissible families, and modal /
//! μ-calculus evaluation under standard and general-frame semantics.

mod eval;
mod frame;
pub mod symbolic;

pub use eval::{evaluate, lfp_general, lfp_standard, ExplicitGeneral, ExplicitStandard, Lattice};
pub use frame::{DisplaySet, KripkeFrame, WorldSet, MAX_WORLDS};
pub use symbolic::{NatPart, SymSet};

use crate::syntax::{check_positivity, ModalFormula, SyntaxError};
use serde::Serialize;
use std::collections::{BTreeMap, HashSet};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModalError {
    #[error("invalid frame: {0}")]
    InvalidFrame(String),
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("admissible family is not closed: {0}")]
    ClosureViolation(ClosureReport),
    #[error("valuation of `{letter}` is not an admissible set")]
    ValuationNotAdmissible { letter: String },
    #[error("unknown proposition letter `{0}`")]
    UnknownLetter(String),
    #[error("fixpoint variable `{0}` is not bound")]
    UnboundVariable(String),
    #[error("value {set} of an intermediate fixpoint step is not admissible")]
    NotAdmissible { set: String },
    #[error("not a general mu-frame: intersection {intersection} of admissible pre-fixed points is not admissible")]
    NotGeneralMuFrame { intersection: String },
    #[error("symbolic fixpoint search is inconclusive at bound {bound}")]
    BoundExceeded { bound: u64 },
    #[error("formula is not a least fixed point `mu X. ...`: {0}")]
    NotAFixpoint(String),
    #[error("standard fixpoint iteration did not stabilize after {iterations} steps (last iterate {prefix})")]
    Divergent { iterations: usize, prefix: String },
}

/// Which fixpoint semantics to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Semantics {
    Standard,
    General,
}

/// An explicit admissible family of world-sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplicitFamily {
    sets: Vec<WorldSet>,
    members: HashSet<WorldSet>,
}

impl ExplicitFamily {
    /// Deduplicates and sorts; closure is not checked here.
    pub fn new(sets: impl IntoIterator<Item = WorldSet>) -> Self {
        let mut sets: Vec<_> = sets.into_iter().collect();
        sets.sort();
        sets.dedup();
        let members = sets.iter().copied().collect();
        ExplicitFamily { sets, members }
    }

    pub fn powerset(n: usize) -> Self {
        Self::new(WorldSet::all_subsets(n))
    }

    pub fn contains(&self, s: WorldSet) -> bool {
        self.members.contains(&s)
    }

    pub fn sets(&self) -> &[WorldSet] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }
}

/// The admissible sets of a general frame on an explicit Kripke frame.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    /// Every subset of the worlds.
    Full,
    Explicit(ExplicitFamily),
}

/// A Kripke frame with a validated admissible family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralFrame {
    frame: KripkeFrame,
    family: Family,
}

impl GeneralFrame {
    pub fn full(frame: KripkeFrame) -> Self {
        GeneralFrame {
            frame,
            family: Family::Full,
        }
    }

    /// Checks the family is a Boolean subalgebra closed under the diamond.
    pub fn new(frame: KripkeFrame, family: ExplicitFamily) -> Result<Self, ModalError> {
        let report = validate_general_frame(&frame, &family);
        if !report.ok() {
            return Err(ModalError::ClosureViolation(report));
        }
        Ok(GeneralFrame {
            frame,
            family: Family::Explicit(family),
        })
    }

    pub fn frame(&self) -> &KripkeFrame {
        &self.frame
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn is_admissible(&self, s: WorldSet) -> bool {
        match &self.family {
            Family::Full => s.is_subset(self.frame.all_worlds()),
            Family::Explicit(f) => f.contains(s),
        }
    }

    /// Admissible sets as an explicit list (enumerates the powerset for `Full`).
    pub fn admissible_sets(&self) -> ExplicitFamily {
        match &self.family {
            Family::Full => ExplicitFamily::powerset(self.frame.size()),
            Family::Explicit(f) => f.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosureKind {
    Empty,
    OutOfRange,
    Complement,
    Intersection,
    Union,
    Diamond,
}

/// One missing closure: applying `kind` to `witnesses` yields `missing`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClosureViolation {
    pub kind: ClosureKind,
    pub witnesses: Vec<Vec<usize>>,
    pub missing: Vec<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ClosureReport {
    pub violations: Vec<ClosureViolation>,
}

impl ClosureReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ClosureReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok() {
            return f.write_str("closed");
        }
        let parts: Vec<String> = self
            .violations
            .iter()
            .map(|v| format!("{:?} of {:?} gives {:?}", v.kind, v.witnesses, v.missing))
            .collect();
        f.write_str(&parts.join("; "))
    }
}

fn indices(s: WorldSet) -> Vec<usize> {
    s.iter().collect()
}

/// Reports every closure failure of `family` (complement, binary
/// intersection and union, diamond image), one witness per missing set.
pub fn validate_general_frame(frame: &KripkeFrame, family: &ExplicitFamily) -> ClosureReport {
    let n = frame.size();
    let mut report = ClosureReport::default();
    let mut reported = HashSet::new();
    let mut miss = |kind: ClosureKind, witnesses: &[WorldSet], missing: WorldSet, report: &mut ClosureReport| {
        if !family.contains(missing) && reported.insert((kind as u8, missing)) {
            report.violations.push(ClosureViolation {
                kind,
                witnesses: witnesses.iter().map(|w| indices(*w)).collect(),
                missing: indices(missing),
            });
        }
    };
    if family.is_empty() {
        report.violations.push(ClosureViolation {
            kind: ClosureKind::Empty,
            witnesses: vec![],
            missing: vec![],
        });
        return report;
    }
    for &s in family.sets() {
        if !s.is_subset(frame.all_worlds()) {
            report.violations.push(ClosureViolation {
                kind: ClosureKind::OutOfRange,
                witnesses: vec![indices(s)],
                missing: indices(s.difference(frame.all_worlds())),
            });
        }
    }
    for &s in family.sets() {
        miss(ClosureKind::Complement, &[s], s.complement(n), &mut report);
        miss(ClosureKind::Diamond, &[s], frame.diamond_image(s), &mut report);
    }
    for (i, &s) in family.sets().iter().enumerate() {
        for &t in &family.sets()[i + 1..] {
            miss(ClosureKind::Intersection, &[s, t], s.intersection(t), &mut report);
            miss(ClosureKind::Union, &[s, t], s.union(t), &mut report);
        }
    }
    report
}

/// Differentiation, tightness and compactness of a general frame.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DescriptiveReport {
    pub differentiated: bool,
    pub tight: bool,
    pub compact: bool,
    /// Worlds `(u, v)` not separated by any admissible set.
    pub undifferentiated_pair: Option<(usize, usize)>,
    /// Non-edge `(u, v)` with no admissible witness.
    pub untight_pair: Option<(usize, usize)>,
    pub note: String,
}

impl DescriptiveReport {
    pub fn descriptive(&self) -> bool {
        self.differentiated && self.tight && self.compact
    }
}

pub fn is_descriptive(gf: &GeneralFrame) -> DescriptiveReport {
    let frame = gf.frame();
    let family = gf.admissible_sets();
    let n = frame.size();
    let undifferentiated_pair = (0..n)
        .flat_map(|u| (0..n).map(move |v| (u, v)))
        .filter(|(u, v)| u != v)
        .find(|&(u, v)| !family.sets().iter().any(|s| s.contains(u) && !s.contains(v)));
    let untight_pair = (0..n)
        .flat_map(|u| (0..n).map(move |v| (u, v)))
        .filter(|&(u, v)| !frame.related(u, v))
        .find(|&(u, v)| {
            !family
                .sets()
                .iter()
                .any(|&s| s.contains(v) && !frame.diamond_image(s).contains(u))
        });
    DescriptiveReport {
        differentiated: undifferentiated_pair.is_none(),
        tight: untight_pair.is_none(),
        compact: true,
        undifferentiated_pair,
        untight_pair,
        note: "finite frames are compact".into(),
    }
}

/// A general frame with an admissible valuation.
#[derive(Debug, Clone)]
pub struct ModalModel {
    frame: GeneralFrame,
    valuation: BTreeMap<String, WorldSet>,
}

impl ModalModel {
    pub fn new(frame: GeneralFrame, valuation: BTreeMap<String, WorldSet>) -> Result<Self, ModalError> {
        if let Some((letter, _)) = valuation.iter().find(|(_, &s)| !frame.is_admissible(s)) {
            return Err(ModalError::ValuationNotAdmissible { letter: letter.clone() });
        }
        Ok(ModalModel { frame, valuation })
    }

    pub fn general_frame(&self) -> &GeneralFrame {
        &self.frame
    }

    pub fn frame(&self) -> &KripkeFrame {
        self.frame.frame()
    }

    pub fn valuation(&self) -> &BTreeMap<String, WorldSet> {
        &self.valuation
    }

    fn letter(&self, name: &str) -> Result<WorldSet, ModalError> {
        self.valuation
            .get(name)
            .copied()
            .ok_or_else(|| ModalError::UnknownLetter(name.to_string()))
    }
}

/// Extension of `formula` in `model` under general-frame semantics: μ is the
/// intersection of admissible pre-fixed points (the Kleene least fixed point
/// when the family is the full powerset).
pub fn extension(
    model: &ModalModel,
    formula: &ModalFormula,
    env: &BTreeMap<String, WorldSet>,
) -> Result<WorldSet, ModalError> {
    extension_with(model, formula, env, Semantics::General)
}

pub fn extension_with(
    model: &ModalModel,
    formula: &ModalFormula,
    env: &BTreeMap<String, WorldSet>,
    semantics: Semantics,
) -> Result<WorldSet, ModalError> {
    check_positivity(formula)?;
    match (semantics, model.frame.family()) {
        (Semantics::Standard, _) | (Semantics::General, Family::Full) => evaluate(
            &ExplicitStandard::new(model.frame(), &|p| model.letter(p)),
            formula,
            env,
        ),
        (Semantics::General, Family::Explicit(family)) => {
            if let Some((x, _)) = env.iter().find(|(_, &s)| !family.contains(s)) {
                return Err(ModalError::NotAdmissible {
                    set: format!("{x} := {}", DisplaySet(model.frame(), env[x])),
                });
            }
            evaluate(
                &ExplicitGeneral::new(model.frame(), family, &|p| model.letter(p)),
                formula,
                env,
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_modal;

    fn ws(items: &[usize]) -> WorldSet {
        WorldSet::from_indices(items.iter().copied())
    }

    #[test]
    fn trivial_family_is_closed() {
        let frame = KripkeFrame::new(2, &[]).unwrap();
        let fam = ExplicitFamily::new([ws(&[]), ws(&[0, 1])]);
        assert!(validate_general_frame(&frame, &fam).ok());
    }

    #[test]
    fn missing_complement_is_reported() {
        let frame = KripkeFrame::new(2, &[]).unwrap();
        let fam = ExplicitFamily::new([ws(&[]), ws(&[1]), ws(&[0, 1])]);
        let report = validate_general_frame(&frame, &fam);
        assert!(!report.ok());
        let v = &report.violations[0];
        assert_eq!(v.kind, ClosureKind::Complement);
        assert_eq!(v.witnesses, vec![vec![1]]);
        assert_eq!(v.missing, vec![0]);
        assert!(GeneralFrame::new(frame, fam).is_err());
    }

    #[test]
    fn full_powerset_on_single_edge_is_closed() {
        let frame = KripkeFrame::new(2, &[(0, 1)]).unwrap();
        assert!(validate_general_frame(&frame, &ExplicitFamily::powerset(2)).ok());
    }

    #[test]
    fn diamond_closure_violation() {
        // Boolean closure holds, but <>{w1,w2} = {w0,w2} is not in the family.
        let frame = KripkeFrame::new(3, &[(0, 1), (2, 2)]).unwrap();
        let fam = ExplicitFamily::new([ws(&[]), ws(&[1, 2]), ws(&[0]), ws(&[0, 1, 2])]);
        let report = validate_general_frame(&frame, &fam);
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].kind, ClosureKind::Diamond);
        assert_eq!(report.violations[0].missing, vec![0, 2]);
    }

    #[test]
    fn valuations_must_be_admissible() {
        let frame = KripkeFrame::new(2, &[]).unwrap();
        let gf = GeneralFrame::new(frame, ExplicitFamily::new([ws(&[]), ws(&[0, 1])])).unwrap();
        let val = BTreeMap::from([("p".to_string(), ws(&[0]))]);
        assert_eq!(
            ModalModel::new(gf, val).unwrap_err(),
            ModalError::ValuationNotAdmissible { letter: "p".into() }
        );
    }

    #[test]
    fn descriptive_examples() {
        let k2 = KripkeFrame::new(2, &[(0, 1)]).unwrap();
        let report = is_descriptive(&GeneralFrame::full(k2));
        assert!(report.descriptive());
        let frame = KripkeFrame::new(2, &[]).unwrap();
        let gf = GeneralFrame::new(frame, ExplicitFamily::new([ws(&[]), ws(&[0, 1])])).unwrap();
        let report = is_descriptive(&gf);
        assert!(!report.differentiated);
        assert_eq!(report.undifferentiated_pair, Some((0, 1)));
        assert!(report.compact);
    }

    #[test]
    fn extension_examples() {
        let k2 = KripkeFrame::new(2, &[(0, 1)]).unwrap();
        let model = ModalModel::new(GeneralFrame::full(k2), BTreeMap::from([("p".into(), ws(&[1]))])).unwrap();
        let f = parse_modal("<>p").unwrap();
        assert_eq!(extension(&model, &f, &BTreeMap::new()).unwrap(), ws(&[0]));

        // chain 2 -> 1 -> 0 with p at 0
        let chain = KripkeFrame::new(3, &[(2, 1), (1, 0)]).unwrap();
        let model = ModalModel::new(GeneralFrame::full(chain), BTreeMap::from([("p".into(), ws(&[0]))])).unwrap();
        let f = parse_modal("mu X. (p | <>X)").unwrap();
        assert_eq!(extension(&model, &f, &BTreeMap::new()).unwrap(), ws(&[0, 1, 2]));
    }

    #[test]
    fn general_mu_on_a_coarse_family() {
        // Atoms {w0,w1} and {w2}; w0 -> w2, w1 -> w2, w2 -> w2.
        let frame = KripkeFrame::new(3, &[(0, 2), (1, 2), (2, 2)]).unwrap();
        let fam = ExplicitFamily::new([ws(&[]), ws(&[0, 1]), ws(&[2]), ws(&[0, 1, 2])]);
        let gf = GeneralFrame::new(frame, fam).unwrap();
        let model = ModalModel::new(gf, BTreeMap::from([("p".into(), ws(&[2]))])).unwrap();
        let env = BTreeMap::new();
        for (text, expected) in [
            ("mu X. <>X", ws(&[])),
            ("mu X. (p | <>X)", ws(&[0, 1, 2])),
            ("nu X. (~p & []X)", ws(&[])),
            ("mu X. (~p & <>p)", ws(&[0, 1])),
        ] {
            let f = parse_modal(text).unwrap();
            assert_eq!(extension(&model, &f, &env).unwrap(), expected, "{text}");
            assert_eq!(
                extension_with(&model, &f, &env, Semantics::Standard).unwrap(),
                expected,
                "{text}"
            );
        }
    }

    #[test]
    fn fixpoint_variables_in_env_must_be_admissible() {
        let frame = KripkeFrame::new(2, &[]).unwrap();
        let gf = GeneralFrame::new(frame, ExplicitFamily::new([ws(&[]), ws(&[0, 1])])).unwrap();
        let model = ModalModel::new(gf, BTreeMap::new()).unwrap();
        let env = BTreeMap::from([("X".to_string(), ws(&[0]))]);
        let err = extension(&model, &parse_modal("X").unwrap(), &env).unwrap_err();
        assert!(matches!(err, ModalError::NotAdmissible { .. }));
    }
}
