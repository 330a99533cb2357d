use super::{DisplaySet, ExplicitFamily, KripkeFrame, ModalError, WorldSet};
use crate::syntax::ModalFormula;
use std::collections::BTreeMap;

/// A complete-enough lattice of denotations with a normal diamond. Each
/// semantics (standard, general, symbolic, algebraic) supplies its own
/// least-fixpoint strategy; `evaluate` is shared.
pub trait Lattice {
    type Set: Clone + PartialEq + std::fmt::Debug;

    fn bottom(&self) -> Self::Set;
    fn top(&self) -> Self::Set;
    fn join(&self, a: &Self::Set, b: &Self::Set) -> Self::Set;
    fn meet(&self, a: &Self::Set, b: &Self::Set) -> Self::Set;
    fn complement(&self, a: &Self::Set) -> Self::Set;
    fn diamond(&self, a: &Self::Set) -> Self::Set;
    fn letter(&self, name: &str) -> Result<Self::Set, ModalError>;
    /// Least fixed point of a monotone operator in this semantics.
    fn least_fixpoint(
        &self,
        op: &mut dyn FnMut(&Self::Set) -> Result<Self::Set, ModalError>,
    ) -> Result<Self::Set, ModalError>;
}

/// Compositional evaluation. `nu X. f` is computed as `~mu X. ~f[~X/X]`.
pub fn evaluate<L: Lattice>(
    lat: &L,
    formula: &ModalFormula,
    env: &BTreeMap<String, L::Set>,
) -> Result<L::Set, ModalError> {
    use ModalFormula::*;
    Ok(match formula {
        True => lat.top(),
        False => lat.bottom(),
        Letter(p) => lat.letter(p)?,
        FixVar(x) => env
            .get(x)
            .cloned()
            .ok_or_else(|| ModalError::UnboundVariable(x.clone()))?,
        Not(a) => lat.complement(&evaluate(lat, a, env)?),
        And(a, b) => lat.meet(&evaluate(lat, a, env)?, &evaluate(lat, b, env)?),
        Or(a, b) => lat.join(&evaluate(lat, a, env)?, &evaluate(lat, b, env)?),
        Implies(a, b) => lat.join(&lat.complement(&evaluate(lat, a, env)?), &evaluate(lat, b, env)?),
        Diamond(a) => lat.diamond(&evaluate(lat, a, env)?),
        Box(a) => lat.complement(&lat.diamond(&lat.complement(&evaluate(lat, a, env)?))),
        Mu(x, body) => {
            let mut env = env.clone();
            lat.least_fixpoint(&mut |s| {
                env.insert(x.clone(), s.clone());
                evaluate(lat, body, &env)
            })?
        }
        Nu(x, body) => {
            let mut env = env.clone();
            let dual = lat.least_fixpoint(&mut |s| {
                env.insert(x.clone(), lat.complement(s));
                Ok(lat.complement(&evaluate(lat, body, &env)?))
            })?;
            lat.complement(&dual)
        }
    })
}

/// Kleene iteration from the empty set. Returns the fixed point and the
/// number of operator applications; at most `|worlds| + 1` are needed for
/// a monotone operator.
pub fn lfp_standard(frame: &KripkeFrame, mut op: impl FnMut(WorldSet) -> WorldSet) -> (WorldSet, usize) {
    let mut current = WorldSet::EMPTY;
    let mut steps = 0;
    loop {
        let next = op(current);
        steps += 1;
        if next == current {
            return (current, steps);
        }
        assert!(
            steps <= frame.size() + 1,
            "Kleene iteration exceeded |worlds|+1 steps; operator is not monotone"
        );
        current = next;
    }
}

/// Intersection of the admissible pre-fixed points of `op`; an error when
/// that intersection is not itself admissible.
pub fn lfp_general(
    frame: &KripkeFrame,
    family: &ExplicitFamily,
    mut op: impl FnMut(WorldSet) -> Result<WorldSet, ModalError>,
) -> Result<WorldSet, ModalError> {
    let mut meet = frame.all_worlds();
    for &s in family.sets() {
        if op(s)?.is_subset(s) {
            meet = meet.intersection(s);
        }
    }
    if family.contains(meet) {
        Ok(meet)
    } else {
        Err(ModalError::NotGeneralMuFrame {
            intersection: DisplaySet(frame, meet).to_string(),
        })
    }
}

type LetterFn<'a, S> = &'a dyn Fn(&str) -> Result<S, ModalError>;

/// Standard semantics over the full powerset of an explicit frame.
pub struct ExplicitStandard<'a> {
    frame: &'a KripkeFrame,
    letters: LetterFn<'a, WorldSet>,
}

impl<'a> ExplicitStandard<'a> {
    pub fn new(frame: &'a KripkeFrame, letters: LetterFn<'a, WorldSet>) -> Self {
        ExplicitStandard { frame, letters }
    }
}

/// General-frame semantics over an explicit admissible family.
pub struct ExplicitGeneral<'a> {
    frame: &'a KripkeFrame,
    family: &'a ExplicitFamily,
    letters: LetterFn<'a, WorldSet>,
}

impl<'a> ExplicitGeneral<'a> {
    pub fn new(frame: &'a KripkeFrame, family: &'a ExplicitFamily, letters: LetterFn<'a, WorldSet>) -> Self {
        ExplicitGeneral { frame, family, letters }
    }
}

macro_rules! explicit_lattice_ops {
    () => {
        type Set = WorldSet;
        fn bottom(&self) -> WorldSet {
            WorldSet::EMPTY
        }
        fn top(&self) -> WorldSet {
            self.frame.all_worlds()
        }
        fn join(&self, a: &WorldSet, b: &WorldSet) -> WorldSet {
            a.union(*b)
        }
        fn meet(&self, a: &WorldSet, b: &WorldSet) -> WorldSet {
            a.intersection(*b)
        }
        fn complement(&self, a: &WorldSet) -> WorldSet {
            a.complement(self.frame.size())
        }
        fn diamond(&self, a: &WorldSet) -> WorldSet {
            self.frame.diamond_image(*a)
        }
        fn letter(&self, name: &str) -> Result<WorldSet, ModalError> {
            (self.letters)(name)
        }
    };
}

impl Lattice for ExplicitStandard<'_> {
    explicit_lattice_ops!();

    fn least_fixpoint(
        &self,
        op: &mut dyn FnMut(&WorldSet) -> Result<WorldSet, ModalError>,
    ) -> Result<WorldSet, ModalError> {
        let mut err = None;
        let (fix, _) = lfp_standard(self.frame, |s| match op(&s) {
            Ok(t) => t,
            Err(e) => {
                err.get_or_insert(e);
                s
            }
        });
        match err {
            Some(e) => Err(e),
            None => Ok(fix),
        }
    }
}

impl Lattice for ExplicitGeneral<'_> {
    explicit_lattice_ops!();

    fn least_fixpoint(
        &self,
        op: &mut dyn FnMut(&WorldSet) -> Result<WorldSet, ModalError>,
    ) -> Result<WorldSet, ModalError> {
        lfp_general(self.frame, self.family, |s| op(&s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain() -> KripkeFrame {
        KripkeFrame::new(3, &[(2, 1), (1, 0)]).unwrap()
    }

    #[test]
    fn kleene_on_chain() {
        let frame = chain();
        let (fix, steps) = lfp_standard(&frame, |s| WorldSet::singleton(0).union(frame.diamond_image(s)));
        assert_eq!(fix, WorldSet::full(3));
        assert_eq!(steps, 4);
    }

    #[test]
    fn identity_has_empty_lfp() {
        let frame = chain();
        assert_eq!(lfp_standard(&frame, |s| s).0, WorldSet::EMPTY);
    }

    #[test]
    fn general_lfp_on_trivial_family() {
        let k2 = KripkeFrame::new(2, &[(0, 1)]).unwrap();
        let fam = ExplicitFamily::new([WorldSet::EMPTY, WorldSet::full(2)]);
        let got = lfp_general(&k2, &fam, |s| Ok(k2.diamond_image(s))).unwrap();
        assert_eq!(got, WorldSet::EMPTY);
    }

    #[test]
    fn general_lfp_on_full_family_matches_kleene() {
        let frame = chain();
        let fam = ExplicitFamily::powerset(3);
        let op = |s: WorldSet| WorldSet::singleton(0).union(frame.diamond_image(s));
        assert_eq!(
            lfp_general(&frame, &fam, |s| Ok(op(s))).unwrap(),
            lfp_standard(&frame, op).0
        );
    }

    #[test]
    fn non_admissible_intersection_is_an_error() {
        // Not closed under intersection: every set is pre-fixed for the
        // identity, and they meet in {w0}.
        let frame = KripkeFrame::new(3, &[]).unwrap();
        let fam = ExplicitFamily::new([0b011u64, 0b101, 0b111].map(WorldSet));
        let err = lfp_general(&frame, &fam, Ok).unwrap_err();
        assert_eq!(
            err,
            ModalError::NotGeneralMuFrame {
                intersection: "{w0}".into()
            }
        );
    }
}
