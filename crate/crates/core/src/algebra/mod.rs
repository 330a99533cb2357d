//! Finite modal algebras, complex algebras of frames and the ultrafilter
//! representation.

use crate::modal::{
    evaluate, validate_general_frame, ClosureReport, DisplaySet, ExplicitFamily, Family, GeneralFrame, KripkeFrame,
    Lattice, ModalError, WorldSet, MAX_WORLDS,
};
use crate::syntax::{check_positivity, ModalFormula};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use thiserror::Error;

/// Largest frame `complex_algebra` accepts by default (carrier `2^10`).
pub const DEFAULT_WORLD_CAP: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("not a modal algebra: {0}")]
    InvalidAlgebra(AxiomViolation),
    #[error("{worlds} worlds exceed the cap of {cap}")]
    CapExceeded { worlds: usize, cap: usize },
    #[error("admissible family is not closed: {0}")]
    ClosureViolation(ClosureReport),
    #[error("unknown letter `{0}`")]
    UnknownLetter(String),
    #[error(transparent)]
    Modal(#[from] ModalError),
}

/// Raw operation tables, indexed by carrier position.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraTables {
    pub carrier: Vec<String>,
    pub join: Vec<Vec<usize>>,
    pub meet: Vec<Vec<usize>>,
    pub neg: Vec<usize>,
    pub bot: usize,
    pub top: usize,
    pub diamond: Vec<usize>,
}

/// The first axiom that fails, with the carrier elements that witness it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomViolation {
    pub axiom: String,
    pub witnesses: Vec<String>,
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.witnesses.is_empty() {
            write!(f, "{} fails", self.axiom)
        } else {
            write!(f, "{} fails at {}", self.axiom, self.witnesses.join(", "))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlgebraReport {
    pub ok: bool,
    pub violation: Option<AxiomViolation>,
}

/// Checks every Boolean axiom and normality of the diamond by brute force.
pub fn validate_modal_algebra(candidate: &AlgebraTables) -> AlgebraReport {
    match first_violation(candidate) {
        None => AlgebraReport {
            ok: true,
            violation: None,
        },
        Some(v) => AlgebraReport {
            ok: false,
            violation: Some(v),
        },
    }
}

fn first_violation(t: &AlgebraTables) -> Option<AxiomViolation> {
    let n = t.carrier.len();
    let fail = |axiom: &str, w: &[usize]| {
        Some(AxiomViolation {
            axiom: axiom.to_string(),
            witnesses: w.iter().map(|&i| t.carrier[i].clone()).collect(),
        })
    };
    let square = |tab: &Vec<Vec<usize>>| tab.len() == n && tab.iter().all(|r| r.len() == n && r.iter().all(|&x| x < n));
    let total = n > 0
        && square(&t.join)
        && square(&t.meet)
        && t.neg.len() == n
        && t.diamond.len() == n
        && t.neg.iter().chain(&t.diamond).all(|&x| x < n)
        && t.bot < n
        && t.top < n;
    if !total {
        return Some(AxiomViolation {
            axiom: "tables total over the carrier".into(),
            witnesses: vec![],
        });
    }
    let mut seen = std::collections::HashSet::new();
    if let Some(dup) = (0..n).find(|&i| !seen.insert(&t.carrier[i])) {
        return fail("carrier elements distinct", &[dup]);
    }
    let (j, m, neg) = (&t.join, &t.meet, &t.neg);
    for a in 0..n {
        if j[a][t.bot] != a {
            return fail("a∨0 = a", &[a]);
        }
        if m[a][t.top] != a {
            return fail("a∧1 = a", &[a]);
        }
        if j[a][neg[a]] != t.top {
            return fail("a∨¬a = 1", &[a]);
        }
        if m[a][neg[a]] != t.bot {
            return fail("a∧¬a = 0", &[a]);
        }
        for b in 0..n {
            if j[a][b] != j[b][a] {
                return fail("a∨b = b∨a", &[a, b]);
            }
            if m[a][b] != m[b][a] {
                return fail("a∧b = b∧a", &[a, b]);
            }
            if j[a][m[a][b]] != a {
                return fail("a∨(a∧b) = a", &[a, b]);
            }
            if m[a][j[a][b]] != a {
                return fail("a∧(a∨b) = a", &[a, b]);
            }
            for c in 0..n {
                if j[a][j[b][c]] != j[j[a][b]][c] {
                    return fail("a∨(b∨c) = (a∨b)∨c", &[a, b, c]);
                }
                if m[a][m[b][c]] != m[m[a][b]][c] {
                    return fail("a∧(b∧c) = (a∧b)∧c", &[a, b, c]);
                }
                if m[a][j[b][c]] != j[m[a][b]][m[a][c]] {
                    return fail("a∧(b∨c) = (a∧b)∨(a∧c)", &[a, b, c]);
                }
                if j[a][m[b][c]] != m[j[a][b]][j[a][c]] {
                    return fail("a∨(b∧c) = (a∨b)∧(a∨c)", &[a, b, c]);
                }
            }
        }
    }
    let d = &t.diamond;
    if d[t.bot] != t.bot {
        return fail("◊0 = 0", &[t.bot]);
    }
    for a in 0..n {
        for b in 0..n {
            if d[j[a][b]] != j[d[a]][d[b]] {
                return fail("◊(a∨b) = ◊a∨◊b", &[a, b]);
            }
        }
    }
    None
}

/// A finite modal algebra whose tables have passed validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModalAlgebra {
    t: AlgebraTables,
}

impl ModalAlgebra {
    pub fn from_tables(tables: AlgebraTables) -> Result<Self, AlgebraError> {
        match first_violation(&tables) {
            None => Ok(ModalAlgebra { t: tables }),
            Some(v) => Err(AlgebraError::InvalidAlgebra(v)),
        }
    }

    /// Powerset algebra on `atoms` elements; `diamond_on_atoms[i]` is the
    /// bitmask of ◊ applied to atom `i`, extended additively.
    pub fn powerset(atoms: usize, diamond_on_atoms: &[u64]) -> Result<Self, AlgebraError> {
        assert!(atoms < 16, "powerset algebra too large");
        assert_eq!(diamond_on_atoms.len(), atoms);
        let size = 1usize << atoms;
        let name = |mask: usize| {
            let items: Vec<String> = (0..atoms)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| ((b'a' + i as u8) as char).to_string())
                .collect();
            format!("{{{}}}", items.join(","))
        };
        let diamond = (0..size)
            .map(|mask| {
                (0..atoms)
                    .filter(|i| mask >> i & 1 == 1)
                    .fold(0u64, |acc, i| acc | diamond_on_atoms[i]) as usize
            })
            .collect();
        Self::from_tables(AlgebraTables {
            carrier: (0..size).map(name).collect(),
            join: (0..size).map(|a| (0..size).map(|b| a | b).collect()).collect(),
            meet: (0..size).map(|a| (0..size).map(|b| a & b).collect()).collect(),
            neg: (0..size).map(|a| !a & (size - 1)).collect(),
            bot: 0,
            top: size - 1,
            diamond,
        })
    }

    pub fn tables(&self) -> &AlgebraTables {
        &self.t
    }

    pub fn size(&self) -> usize {
        self.t.carrier.len()
    }

    pub fn name(&self, a: usize) -> &str {
        &self.t.carrier[a]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.t.carrier.iter().position(|c| c == name)
    }

    pub fn bot(&self) -> usize {
        self.t.bot
    }

    pub fn top(&self) -> usize {
        self.t.top
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.t.join[a][b]
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.t.meet[a][b]
    }

    pub fn neg(&self, a: usize) -> usize {
        self.t.neg[a]
    }

    pub fn diamond(&self, a: usize) -> usize {
        self.t.diamond[a]
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.meet(a, b) == a
    }

    /// Minimal non-bottom elements.
    pub fn atoms(&self) -> Vec<usize> {
        (0..self.size())
            .filter(|&a| a != self.bot() && (0..self.size()).all(|b| [self.bot(), a].contains(&self.meet(a, b))))
            .collect()
    }
}

/// Complex algebra of a frame: all world-sets with set operations and the
/// diamond image.
pub fn complex_algebra(frame: &KripkeFrame, cap: usize) -> Result<ModalAlgebra, AlgebraError> {
    if frame.size() > cap.min(MAX_WORLDS - 1) {
        return Err(AlgebraError::CapExceeded {
            worlds: frame.size(),
            cap,
        });
    }
    let sets: Vec<WorldSet> = WorldSet::all_subsets(frame.size()).collect();
    Ok(subalgebra(frame, &sets))
}

/// The algebra of admissible sets of a general frame.
pub fn algebra_of_general_frame(gf: &GeneralFrame) -> Result<ModalAlgebra, AlgebraError> {
    match gf.family() {
        Family::Full => complex_algebra(gf.frame(), DEFAULT_WORLD_CAP),
        Family::Explicit(family) => algebra_of_family(gf.frame(), family),
    }
}

/// Like `algebra_of_general_frame` for a family that has not been validated.
pub fn algebra_of_family(frame: &KripkeFrame, family: &ExplicitFamily) -> Result<ModalAlgebra, AlgebraError> {
    let report = validate_general_frame(frame, family);
    if !report.ok() {
        return Err(AlgebraError::ClosureViolation(report));
    }
    Ok(subalgebra(frame, family.sets()))
}

// `sets` must be closed under the Boolean operations and the diamond.
fn subalgebra(frame: &KripkeFrame, sets: &[WorldSet]) -> ModalAlgebra {
    let pos: HashMap<WorldSet, usize> = sets.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let n = frame.size();
    let at = |s: WorldSet| pos[&s];
    let t = AlgebraTables {
        carrier: sets.iter().map(|&s| DisplaySet(frame, s).to_string()).collect(),
        join: sets
            .iter()
            .map(|&a| sets.iter().map(|&b| at(a.union(b))).collect())
            .collect(),
        meet: sets
            .iter()
            .map(|&a| sets.iter().map(|&b| at(a.intersection(b))).collect())
            .collect(),
        neg: sets.iter().map(|&a| at(a.complement(n))).collect(),
        bot: at(WorldSet::EMPTY),
        top: at(frame.all_worlds()),
        diamond: sets.iter().map(|&a| at(frame.diamond_image(a))).collect(),
    };
    debug_assert!(first_violation(&t).is_none());
    ModalAlgebra { t }
}

/// A principal ultrafilter of a finite algebra.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Ultrafilter {
    pub atom: usize,
    pub members: Vec<usize>,
}

impl Ultrafilter {
    pub fn contains(&self, a: usize) -> bool {
        self.members.binary_search(&a).is_ok()
    }
}

/// One ultrafilter per atom, `{b : atom ≤ b}`, in carrier order of atoms.
pub fn ultrafilters(alg: &ModalAlgebra) -> Vec<Ultrafilter> {
    alg.atoms()
        .into_iter()
        .map(|atom| Ultrafilter {
            atom,
            members: (0..alg.size()).filter(|&b| alg.leq(atom, b)).collect(),
        })
        .collect()
}

/// The ultrafilter representation: points are ultrafilters, `x R y` iff
/// `a ∈ y` implies `◊a ∈ x`, and the admissible sets are `φ(a)`.
pub fn ultrafilter_frame(alg: &ModalAlgebra) -> GeneralFrame {
    let ufs = ultrafilters(alg);
    let mut pairs = Vec::new();
    for (x, ux) in ufs.iter().enumerate() {
        for (y, uy) in ufs.iter().enumerate() {
            if uy.members.iter().all(|&a| ux.contains(alg.diamond(a))) {
                pairs.push((x, y));
            }
        }
    }
    let names = ufs.iter().map(|u| format!("u{}", alg.name(u.atom))).collect();
    let frame = KripkeFrame::named(names, &pairs).expect("one point per atom");
    let family = ExplicitFamily::new((0..alg.size()).map(|a| phi(&ufs, a)));
    GeneralFrame::new(frame, family).expect("images of a modal algebra form a closed family")
}

fn phi(ufs: &[Ultrafilter], a: usize) -> WorldSet {
    WorldSet::from_indices(ufs.iter().enumerate().filter(|(_, u)| u.contains(a)).map(|(i, _)| i))
}

/// Outcome of checking that `a ↦ φ(a)` is an isomorphism onto the algebra
/// of the ultrafilter frame.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsoReport {
    pub isomorphic: bool,
    /// Each carrier element with its image, as a set of ultrafilter names.
    pub map: Vec<(String, String)>,
    pub counterexample: Option<String>,
}

pub fn jt_iso_check(alg: &ModalAlgebra) -> IsoReport {
    let ufs = ultrafilters(alg);
    let gf = ultrafilter_frame(alg);
    let frame = gf.frame();
    let images: Vec<WorldSet> = (0..alg.size()).map(|a| phi(&ufs, a)).collect();
    let map = (0..alg.size())
        .map(|a| (alg.name(a).to_string(), DisplaySet(frame, images[a]).to_string()))
        .collect();
    let counterexample = iso_counterexample(alg, &gf, &images);
    IsoReport {
        isomorphic: counterexample.is_none(),
        map,
        counterexample,
    }
}

fn iso_counterexample(alg: &ModalAlgebra, gf: &GeneralFrame, images: &[WorldSet]) -> Option<String> {
    let target = match algebra_of_general_frame(gf) {
        Ok(t) => t,
        Err(e) => return Some(format!("target algebra: {e}")),
    };
    let frame = gf.frame();
    let index: HashMap<String, usize> = (0..target.size()).map(|i| (target.name(i).to_string(), i)).collect();
    let mut img = Vec::with_capacity(images.len());
    for (a, &s) in images.iter().enumerate() {
        match index.get(&DisplaySet(frame, s).to_string()) {
            Some(&i) => img.push(i),
            None => return Some(format!("φ({}) is not admissible", alg.name(a))),
        }
    }
    let mut hit = vec![false; target.size()];
    for (a, &i) in img.iter().enumerate() {
        if std::mem::replace(&mut hit[i], true) {
            return Some(format!("φ is not injective at {}", alg.name(a)));
        }
    }
    if let Some(i) = hit.iter().position(|h| !h) {
        return Some(format!("{} has no preimage", target.name(i)));
    }
    if img[alg.bot()] != target.bot() || img[alg.top()] != target.top() {
        return Some("φ does not preserve 0 and 1".into());
    }
    for a in 0..alg.size() {
        if img[alg.neg(a)] != target.neg(img[a]) {
            return Some(format!("φ(¬{0}) ≠ ¬φ({0})", alg.name(a)));
        }
        if img[alg.diamond(a)] != target.diamond(img[a]) {
            return Some(format!("φ(◊{0}) ≠ ◊φ({0})", alg.name(a)));
        }
        for b in 0..alg.size() {
            if img[alg.join(a, b)] != target.join(img[a], img[b]) {
                return Some(format!("φ({0}∨{1}) ≠ φ({0})∪φ({1})", alg.name(a), alg.name(b)));
            }
            if img[alg.meet(a, b)] != target.meet(img[a], img[b]) {
                return Some(format!("φ({0}∧{1}) ≠ φ({0})∩φ({1})", alg.name(a), alg.name(b)));
            }
        }
    }
    None
}

struct AlgebraLattice<'a> {
    alg: &'a ModalAlgebra,
    valuation: &'a BTreeMap<String, usize>,
}

impl Lattice for AlgebraLattice<'_> {
    type Set = usize;

    fn bottom(&self) -> usize {
        self.alg.bot()
    }
    fn top(&self) -> usize {
        self.alg.top()
    }
    fn join(&self, a: &usize, b: &usize) -> usize {
        self.alg.join(*a, *b)
    }
    fn meet(&self, a: &usize, b: &usize) -> usize {
        self.alg.meet(*a, *b)
    }
    fn complement(&self, a: &usize) -> usize {
        self.alg.neg(*a)
    }
    fn diamond(&self, a: &usize) -> usize {
        self.alg.diamond(*a)
    }
    fn letter(&self, name: &str) -> Result<usize, ModalError> {
        self.valuation
            .get(name)
            .copied()
            .ok_or_else(|| ModalError::UnknownLetter(name.to_string()))
    }

    fn least_fixpoint(&self, op: &mut dyn FnMut(&usize) -> Result<usize, ModalError>) -> Result<usize, ModalError> {
        let mut acc = self.alg.top();
        for a in 0..self.alg.size() {
            if self.alg.leq(op(&a)?, a) {
                acc = self.alg.meet(acc, a);
            }
        }
        Ok(acc)
    }
}

/// Denotation of `formula` in the algebra, with μ as the meet of all
/// pre-fixed points. Letters map to carrier indices.
pub fn algebraic_mu(
    alg: &ModalAlgebra,
    formula: &ModalFormula,
    valuation: &BTreeMap<String, usize>,
) -> Result<usize, AlgebraError> {
    check_positivity(formula).map_err(ModalError::from)?;
    if let Some((p, _)) = valuation.iter().find(|(_, &a)| a >= alg.size()) {
        return Err(AlgebraError::UnknownLetter(p.clone()));
    }
    Ok(evaluate(&AlgebraLattice { alg, valuation }, formula, &BTreeMap::new())?)
}

/// Every powerset algebra on `atoms` atoms with a normal diamond; there are
/// `2^(atoms²)` of them.
pub fn normal_diamond_algebras(atoms: usize) -> impl Iterator<Item = ModalAlgebra> {
    assert!(atoms * atoms < 32, "too many diamond tables to enumerate");
    (0u32..1 << (atoms * atoms)).map(move |bits| {
        let table: Vec<u64> = (0..atoms)
            .map(|i| (bits >> (i * atoms) & ((1 << atoms) - 1)) as u64)
            .collect();
        ModalAlgebra::powerset(atoms, &table).expect("additive diamond on atoms is normal")
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_modal;

    fn two(diamond: [usize; 2]) -> AlgebraTables {
        AlgebraTables {
            carrier: vec!["0".into(), "1".into()],
            join: vec![vec![0, 1], vec![1, 1]],
            meet: vec![vec![0, 0], vec![0, 1]],
            neg: vec![1, 0],
            bot: 0,
            top: 1,
            diamond: diamond.to_vec(),
        }
    }

    #[test]
    fn validation_examples() {
        assert!(validate_modal_algebra(&two([0, 1])).ok);
        let bad = validate_modal_algebra(&two([1, 1]));
        assert_eq!(bad.violation.unwrap().axiom, "◊0 = 0");
        assert!(ModalAlgebra::powerset(2, &[0b01, 0b10]).is_ok());
    }

    #[test]
    fn broken_boolean_tables_are_caught() {
        let mut t = two([0, 1]);
        t.neg = vec![0, 1];
        assert!(!validate_modal_algebra(&t).ok);
        let mut t = two([0, 1]);
        t.join[0][1] = 0;
        assert!(!validate_modal_algebra(&t).ok);
        let mut t = two([0, 1]);
        t.diamond = vec![0, 2];
        assert_eq!(
            validate_modal_algebra(&t).violation.unwrap().axiom,
            "tables total over the carrier"
        );
    }

    #[test]
    fn complex_algebra_examples() {
        let irr = complex_algebra(&KripkeFrame::new(1, &[]).unwrap(), DEFAULT_WORLD_CAP).unwrap();
        assert_eq!(irr.size(), 2);
        assert_eq!(irr.diamond(irr.top()), irr.bot());
        let refl = complex_algebra(&KripkeFrame::new(1, &[(0, 0)]).unwrap(), DEFAULT_WORLD_CAP).unwrap();
        assert_eq!(refl.diamond(refl.top()), refl.top());
        let k2 = complex_algebra(&KripkeFrame::new(2, &[(0, 1)]).unwrap(), DEFAULT_WORLD_CAP).unwrap();
        assert_eq!(k2.size(), 4);
        let w1 = k2.index_of("{w1}").unwrap();
        let w0 = k2.index_of("{w0}").unwrap();
        assert_eq!(k2.diamond(w1), w0);
        assert_eq!(k2.diamond(w0), k2.bot());
        let big = KripkeFrame::new(11, &[]).unwrap();
        assert_eq!(
            complex_algebra(&big, DEFAULT_WORLD_CAP).unwrap_err(),
            AlgebraError::CapExceeded { worlds: 11, cap: 10 }
        );
    }

    #[test]
    fn algebra_of_general_frame_examples() {
        let k2 = KripkeFrame::new(2, &[(0, 1)]).unwrap();
        let full = algebra_of_general_frame(&GeneralFrame::full(k2.clone())).unwrap();
        assert_eq!(full, complex_algebra(&k2, DEFAULT_WORLD_CAP).unwrap());
        let serial = KripkeFrame::new(2, &[(0, 1), (1, 0)]).unwrap();
        let trivial = ExplicitFamily::new([WorldSet::EMPTY, WorldSet::full(2)]);
        assert_eq!(algebra_of_family(&serial, &trivial).unwrap().size(), 2);
        assert!(matches!(
            algebra_of_family(&k2, &trivial),
            Err(AlgebraError::ClosureViolation(_))
        ));
    }

    #[test]
    fn ultrafilter_counts() {
        assert_eq!(ultrafilters(&ModalAlgebra::from_tables(two([0, 1])).unwrap()).len(), 1);
        assert_eq!(ultrafilters(&ModalAlgebra::powerset(2, &[1, 2]).unwrap()).len(), 2);
        assert_eq!(ultrafilters(&ModalAlgebra::powerset(3, &[0, 0, 0]).unwrap()).len(), 3);
    }

    #[test]
    fn ultrafilters_are_ultra() {
        for alg in normal_diamond_algebras(2) {
            for u in ultrafilters(&alg) {
                for a in 0..alg.size() {
                    assert!(u.contains(a) != u.contains(alg.neg(a)));
                    for b in 0..alg.size() {
                        if u.contains(a) && alg.leq(a, b) {
                            assert!(u.contains(b));
                        }
                        if u.contains(a) && u.contains(b) {
                            assert!(u.contains(alg.meet(a, b)));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn ultrafilter_frame_examples() {
        let id = ultrafilter_frame(&ModalAlgebra::powerset(2, &[0b01, 0b10]).unwrap());
        assert_eq!(id.frame().pairs(), vec![(0, 0), (1, 1)]);
        assert_eq!(id.admissible_sets().len(), 4);
        let dead = ultrafilter_frame(&ModalAlgebra::from_tables(two([0, 0])).unwrap());
        assert_eq!(dead.frame().size(), 1);
        assert!(dead.frame().pairs().is_empty());
        let k2 = KripkeFrame::new(2, &[(0, 1)]).unwrap();
        let back = ultrafilter_frame(&complex_algebra(&k2, DEFAULT_WORLD_CAP).unwrap());
        assert_eq!(back.frame().pairs(), vec![(0, 1)]);
    }

    #[test]
    fn representation_on_small_algebras() {
        assert!(jt_iso_check(&ModalAlgebra::from_tables(two([0, 1])).unwrap()).isomorphic);
        for atoms in 1..=2 {
            for alg in normal_diamond_algebras(atoms) {
                let report = jt_iso_check(&alg);
                assert!(report.isomorphic, "{:?}", report.counterexample);
                let gf = ultrafilter_frame(&alg);
                assert!(crate::modal::is_descriptive(&gf).descriptive());
            }
        }
        assert_eq!(normal_diamond_algebras(2).count(), 16);
    }

    #[test]
    fn algebraic_mu_examples() {
        let two = ModalAlgebra::from_tables(two([0, 1])).unwrap();
        let f = parse_modal("mu X. X").unwrap();
        assert_eq!(algebraic_mu(&two, &f, &BTreeMap::new()).unwrap(), two.bot());

        let chain = KripkeFrame::new(3, &[(2, 1), (1, 0)]).unwrap();
        let alg = complex_algebra(&chain, DEFAULT_WORLD_CAP).unwrap();
        let p = alg.index_of("{w0}").unwrap();
        let val = BTreeMap::from([("p".to_string(), p)]);
        let f = parse_modal("mu X. (p | <>X)").unwrap();
        assert_eq!(alg.name(algebraic_mu(&alg, &f, &val).unwrap()), "{w0, w1, w2}");
        let f = parse_modal("mu X. p").unwrap();
        assert_eq!(algebraic_mu(&alg, &f, &val).unwrap(), p);
        assert!(matches!(
            algebraic_mu(&alg, &parse_modal("q").unwrap(), &val),
            Err(AlgebraError::Modal(ModalError::UnknownLetter(_)))
        ));
    }
}
