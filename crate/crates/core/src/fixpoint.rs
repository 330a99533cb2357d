//! Knaster–Tarski iteration on finite powersets, and transitive closure as
//! the least fixed point of `F(X) = R ∪ (X∘R)`.

use crate::io::Name;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FixpointError {
    #[error("operator is not monotone: step {step} lost elements")]
    NonMonotoneDetected { step: usize },
    #[error("operator left the universe at step {step}")]
    OutsideUniverse { step: usize },
    #[error("invalid relation: {0}")]
    InvalidRelation(String),
    #[error("universe of {size} elements is too large to enumerate (cap {cap})")]
    TooLarge { size: usize, cap: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KtResult<T> {
    pub set: BTreeSet<T>,
    /// Operator applications, the last one confirming the fixed point.
    pub iterations: usize,
}

/// Least fixed point by iteration from the empty set. A monotone operator
/// stabilizes within `|universe| + 1` applications; a step that loses
/// elements is reported instead of looping.
pub fn kt_lfp<T: Ord + Clone>(
    universe: &BTreeSet<T>,
    mut op: impl FnMut(&BTreeSet<T>) -> BTreeSet<T>,
) -> Result<KtResult<T>, FixpointError> {
    let mut current = BTreeSet::new();
    let mut iterations = 0;
    loop {
        let next = op(&current);
        iterations += 1;
        if !next.is_subset(universe) {
            return Err(FixpointError::OutsideUniverse { step: iterations });
        }
        if !current.is_subset(&next) {
            return Err(FixpointError::NonMonotoneDetected { step: iterations });
        }
        if next == current {
            assert!(iterations <= universe.len() + 1);
            return Ok(KtResult {
                set: current,
                iterations,
            });
        }
        current = next;
    }
}

/// Largest universe for which [`prefixed_meet`] enumerates all subsets.
pub const MAX_ENUMERATION: usize = 16;

/// Intersection of every pre-fixed point `op(S) ⊆ S`, by enumerating all
/// subsets of the universe.
pub fn prefixed_meet<T: Ord + Clone>(
    universe: &BTreeSet<T>,
    mut op: impl FnMut(&BTreeSet<T>) -> BTreeSet<T>,
) -> Result<BTreeSet<T>, FixpointError> {
    let items: Vec<&T> = universe.iter().collect();
    if items.len() > MAX_ENUMERATION {
        return Err(FixpointError::TooLarge {
            size: items.len(),
            cap: MAX_ENUMERATION,
        });
    }
    let mut meet = universe.clone();
    for mask in 0u32..1 << items.len() {
        let s: BTreeSet<T> = (0..items.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| items[i].clone())
            .collect();
        if op(&s).is_subset(&s) {
            meet = meet.intersection(&s).cloned().collect();
        }
    }
    Ok(meet)
}

/// A relation over a finite universe, with pairs as index pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryRelation {
    universe: Vec<String>,
    pairs: BTreeSet<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationSpec {
    pub universe: Vec<Name>,
    pub pairs: Vec<(Name, Name)>,
}

impl BinaryRelation {
    pub fn new(universe: Vec<String>, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, FixpointError> {
        let mut seen = BTreeSet::new();
        if let Some(u) = universe.iter().find(|u| !seen.insert(*u)) {
            return Err(FixpointError::InvalidRelation(format!("`{u}` listed twice")));
        }
        let pairs: BTreeSet<(usize, usize)> = pairs.into_iter().collect();
        if let Some((u, v)) = pairs.iter().find(|(u, v)| *u >= universe.len() || *v >= universe.len()) {
            return Err(FixpointError::InvalidRelation(format!(
                "pair ({u},{v}) leaves the universe"
            )));
        }
        Ok(BinaryRelation { universe, pairs })
    }

    /// Relation on `0..n` named by their indices.
    pub fn on_indices(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, FixpointError> {
        Self::new((0..n).map(|i| i.to_string()).collect(), pairs)
    }

    pub fn from_spec(spec: &RelationSpec) -> Result<Self, FixpointError> {
        let index: HashMap<&str, usize> = spec.universe.iter().enumerate().map(|(i, u)| (u.as_str(), i)).collect();
        let find = |u: &Name| {
            index
                .get(u.as_str())
                .copied()
                .ok_or_else(|| FixpointError::InvalidRelation(format!("`{u}` is not in the universe")))
        };
        let pairs = spec
            .pairs
            .iter()
            .map(|(u, v)| Ok((find(u)?, find(v)?)))
            .collect::<Result<Vec<_>, FixpointError>>()?;
        Self::new(spec.universe.iter().map(|u| u.0.clone()).collect(), pairs)
    }

    pub fn to_spec(&self) -> RelationSpec {
        RelationSpec {
            universe: self.universe.iter().map(|u| Name(u.clone())).collect(),
            pairs: self
                .pairs
                .iter()
                .map(|&(u, v)| (Name(self.universe[u].clone()), Name(self.universe[v].clone())))
                .collect(),
        }
    }

    pub fn universe(&self) -> &[String] {
        &self.universe
    }

    pub fn pairs(&self) -> &BTreeSet<(usize, usize)> {
        &self.pairs
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.universe.iter().position(|u| u == name)
    }

    fn with_pairs(&self, pairs: BTreeSet<(usize, usize)>) -> BinaryRelation {
        BinaryRelation {
            universe: self.universe.clone(),
            pairs,
        }
    }

    pub fn is_transitive(&self) -> bool {
        self.pairs.iter().all(|&(x, y)| {
            self.pairs
                .range((y, 0)..(y + 1, 0))
                .all(|&(_, z)| self.pairs.contains(&(x, z)))
        })
    }
}

impl fmt::Display for BinaryRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .pairs
            .iter()
            .map(|&(u, v)| format!("({},{})", self.universe[u], self.universe[v]))
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// `X∘R`: pairs `(x, z)` with `x X y` and `y R z`.
fn compose(x: &BTreeSet<(usize, usize)>, r: &BTreeSet<(usize, usize)>) -> BTreeSet<(usize, usize)> {
    x.iter()
        .flat_map(|&(a, b)| r.range((b, 0)..(b + 1, 0)).map(move |&(_, c)| (a, c)))
        .collect()
}

/// The least fixed point of `F(X) = R ∪ (X∘R)` over subrelations of
/// `U × U`, with the number of iterations used.
pub fn transitive_closure_fp(r: &BinaryRelation) -> (BinaryRelation, usize) {
    let n = r.universe.len();
    let square: BTreeSet<(usize, usize)> = (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).collect();
    let result = kt_lfp(&square, |x| {
        let mut next = r.pairs.clone();
        next.extend(compose(x, &r.pairs));
        next
    })
    .expect("F is monotone and stays inside U × U");
    (r.with_pairs(result.set), result.iterations)
}

/// Whether an `R`-path with at least one edge leads from `x` to `y`.
pub fn path_oracle(r: &BinaryRelation, x: usize, y: usize) -> bool {
    let n = r.universe.len();
    let mut seen = vec![false; n];
    let mut queue: VecDeque<usize> = r.pairs.range((x, 0)..(x + 1, 0)).map(|&(_, v)| v).collect();
    while let Some(u) = queue.pop_front() {
        if u == y {
            return true;
        }
        if std::mem::replace(&mut seen[u], true) {
            continue;
        }
        queue.extend(r.pairs.range((u, 0)..(u + 1, 0)).map(|&(_, v)| v));
    }
    false
}

/// All pairs joined by a path, computed with [`path_oracle`].
pub fn path_closure(r: &BinaryRelation) -> BinaryRelation {
    let n = r.universe.len();
    r.with_pairs(
        (0..n)
            .flat_map(|x| (0..n).map(move |y| (x, y)))
            .filter(|&(x, y)| path_oracle(r, x, y))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn universe(n: usize) -> BTreeSet<usize> {
        (0..n).collect()
    }

    #[test]
    fn kt_examples() {
        let u = universe(3);
        assert!(kt_lfp(&u, |s| s.clone()).unwrap().set.is_empty());
        let constant = kt_lfp(&u, |_| u.clone()).unwrap();
        assert_eq!((constant.set, constant.iterations), (u.clone(), 2));
        // chain 2 -> 1 -> 0: S ↦ {0} ∪ ◊S
        let chain = kt_lfp(&u, |s| {
            let mut next = BTreeSet::from([0]);
            next.extend(s.iter().map(|&i| i + 1).filter(|&i| i < 3));
            next
        })
        .unwrap();
        assert_eq!(chain.set, u);
        assert_eq!(chain.iterations, 4);
    }

    #[test]
    fn kt_rejects_shrinking_steps() {
        let u = universe(2);
        let flip = |s: &BTreeSet<usize>| if s.is_empty() { u.clone() } else { BTreeSet::new() };
        assert_eq!(kt_lfp(&u, flip), Err(FixpointError::NonMonotoneDetected { step: 2 }));
        assert_eq!(
            kt_lfp(&u, |_| BTreeSet::from([5])),
            Err(FixpointError::OutsideUniverse { step: 1 })
        );
    }

    #[test]
    fn kt_matches_prefixed_meet() {
        let u = universe(4);
        let ops: Vec<Box<dyn Fn(&BTreeSet<usize>) -> BTreeSet<usize>>> = vec![
            Box::new(|s| s.clone()),
            Box::new(|s| s.iter().map(|&i| (i + 1) % 4).chain([2]).collect()),
            Box::new(|s| {
                if s.contains(&1) {
                    universe(4)
                } else {
                    BTreeSet::from([1])
                }
            }),
        ];
        for op in &ops {
            assert_eq!(kt_lfp(&u, op).unwrap().set, prefixed_meet(&u, op).unwrap());
        }
    }

    #[test]
    fn closure_examples() {
        let r = BinaryRelation::new(vec!["1".into(), "2".into(), "3".into()], [(0, 1), (1, 2)]).unwrap();
        let (tc, _) = transitive_closure_fp(&r);
        assert_eq!(tc.to_string(), "{(1,2), (1,3), (2,3)}");
        assert!(path_oracle(&r, 0, 2));
        assert!(!path_oracle(&r, 1, 0));
        assert!(!path_oracle(&r, 0, 0));
        let empty = BinaryRelation::on_indices(2, []).unwrap();
        assert!(transitive_closure_fp(&empty).0.pairs().is_empty());
        let loop1 = BinaryRelation::on_indices(1, [(0, 0)]).unwrap();
        assert_eq!(transitive_closure_fp(&loop1).0, loop1);
    }

    #[test]
    fn closure_matches_paths_on_all_small_relations() {
        for n in 1..=3 {
            for bits in 0u32..1 << (n * n) {
                let pairs = (0..n * n).filter(|k| bits >> k & 1 == 1).map(|k| (k / n, k % n));
                let r = BinaryRelation::on_indices(n, pairs).unwrap();
                let (tc, iterations) = transitive_closure_fp(&r);
                assert!(iterations <= n * n + 1);
                assert_eq!(tc, path_closure(&r));
                assert!(tc.is_transitive() && r.pairs().is_subset(tc.pairs()));
            }
        }
    }

    #[test]
    fn relation_json() {
        let spec: RelationSpec = serde_json::from_str(r#"{"universe":[1,2,3],"pairs":[[1,2],[2,3]]}"#).unwrap();
        let r = BinaryRelation::from_spec(&spec).unwrap();
        assert_eq!(r.to_spec(), spec);
        let bad: RelationSpec = serde_json::from_str(r#"{"universe":[1],"pairs":[[1,2]]}"#).unwrap();
        assert!(BinaryRelation::from_spec(&bad).is_err());
    }
}
