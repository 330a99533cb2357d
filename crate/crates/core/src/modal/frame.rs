use std::collections::HashSet;
use std::fmt;

use super::ModalError;

/// Most worlds an explicit frame may have; world-sets are 64-bit masks.
pub const MAX_WORLDS: usize = 64;

/// A set of worlds of an explicit frame, as a bitmask over world indices.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct WorldSet(pub u64);

impl WorldSet {
    pub const EMPTY: WorldSet = WorldSet(0);

    pub fn full(n: usize) -> WorldSet {
        if n >= 64 {
            WorldSet(u64::MAX)
        } else {
            WorldSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> WorldSet {
        WorldSet(1 << i)
    }

    pub fn from_indices(items: impl IntoIterator<Item = usize>) -> WorldSet {
        WorldSet(items.into_iter().fold(0, |acc, i| acc | (1 << i)))
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1 << i;
    }

    pub fn union(self, other: WorldSet) -> WorldSet {
        WorldSet(self.0 | other.0)
    }

    pub fn intersection(self, other: WorldSet) -> WorldSet {
        WorldSet(self.0 & other.0)
    }

    pub fn difference(self, other: WorldSet) -> WorldSet {
        WorldSet(self.0 & !other.0)
    }

    /// Complement relative to the first `n` worlds.
    pub fn complement(self, n: usize) -> WorldSet {
        WorldSet(!self.0 & WorldSet::full(n).0)
    }

    pub fn is_subset(self, other: WorldSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..64).filter(move |i| bits >> i & 1 == 1)
    }

    /// All subsets of the first `n` worlds, in mask order.
    pub fn all_subsets(n: usize) -> impl Iterator<Item = WorldSet> {
        assert!(n < 64, "cannot enumerate subsets of {n} worlds");
        (0..1u64 << n).map(WorldSet)
    }
}

impl fmt::Debug for WorldSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A finite Kripke frame. Worlds are indexed `0..n` and carry display names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KripkeFrame {
    worlds: Vec<String>,
    succ: Vec<WorldSet>,
}

impl KripkeFrame {
    /// Frame on worlds `w0..w{n-1}` with the given index pairs.
    pub fn new(n: usize, pairs: &[(usize, usize)]) -> Result<Self, ModalError> {
        Self::named((0..n).map(|i| format!("w{i}")).collect(), pairs)
    }

    pub fn named(worlds: Vec<String>, pairs: &[(usize, usize)]) -> Result<Self, ModalError> {
        if worlds.is_empty() {
            return Err(ModalError::InvalidFrame("frame has no worlds".into()));
        }
        if worlds.len() > MAX_WORLDS {
            return Err(ModalError::InvalidFrame(format!(
                "{} worlds exceed the limit of {MAX_WORLDS}",
                worlds.len()
            )));
        }
        let mut seen = HashSet::new();
        if let Some(dup) = worlds.iter().find(|w| !seen.insert(*w)) {
            return Err(ModalError::InvalidFrame(format!("world `{dup}` listed twice")));
        }
        let mut succ = vec![WorldSet::EMPTY; worlds.len()];
        for &(u, v) in pairs {
            if u >= worlds.len() || v >= worlds.len() {
                return Err(ModalError::InvalidFrame(format!("edge ({u},{v}) leaves the frame")));
            }
            succ[u].insert(v);
        }
        Ok(KripkeFrame { worlds, succ })
    }

    pub fn size(&self) -> usize {
        self.worlds.len()
    }

    pub fn world_names(&self) -> &[String] {
        &self.worlds
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.worlds.iter().position(|w| w == name)
    }

    pub fn successors(&self, u: usize) -> WorldSet {
        self.succ[u]
    }

    pub fn related(&self, u: usize, v: usize) -> bool {
        self.succ[u].contains(v)
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.size())
            .flat_map(|u| self.succ[u].iter().map(move |v| (u, v)))
            .collect()
    }

    pub fn all_worlds(&self) -> WorldSet {
        WorldSet::full(self.size())
    }

    /// Worlds with at least one successor in `s`.
    pub fn diamond_image(&self, s: WorldSet) -> WorldSet {
        WorldSet::from_indices((0..self.size()).filter(|&u| !self.succ[u].intersection(s).is_empty()))
    }

    /// Worlds all of whose successors lie in `s`.
    pub fn box_image(&self, s: WorldSet) -> WorldSet {
        let n = self.size();
        self.diamond_image(s.complement(n)).complement(n)
    }

    pub fn names_of(&self, s: WorldSet) -> Vec<String> {
        s.iter().map(|i| self.worlds[i].clone()).collect()
    }

    /// Every frame on `n` worlds, one per relation (`2^(n*n)` of them).
    pub fn enumerate(n: usize) -> impl Iterator<Item = KripkeFrame> {
        assert!(n * n < 32, "too many relations to enumerate");
        (0u32..1 << (n * n)).map(move |bits| {
            let pairs: Vec<_> = (0..n * n)
                .filter(|k| bits >> k & 1 == 1)
                .map(|k| (k / n, k % n))
                .collect();
            KripkeFrame::new(n, &pairs).expect("enumerated frame is valid")
        })
    }
}

/// Renders a world-set with the frame's world names, e.g. `{w0, w2}`.
pub struct DisplaySet<'a>(pub &'a KripkeFrame, pub WorldSet);

impl fmt::Display for DisplaySet<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.0.names_of(self.1).join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diamond_of_single_edge() {
        let k2 = KripkeFrame::new(2, &[(0, 1)]).unwrap();
        assert_eq!(k2.diamond_image(WorldSet::singleton(1)), WorldSet::singleton(0));
        assert_eq!(k2.diamond_image(WorldSet::EMPTY), WorldSet::EMPTY);
        assert_eq!(k2.box_image(WorldSet::EMPTY), WorldSet::singleton(1));
    }

    #[test]
    fn rejects_bad_frames() {
        assert!(KripkeFrame::new(0, &[]).is_err());
        assert!(KripkeFrame::new(2, &[(0, 2)]).is_err());
        assert!(KripkeFrame::named(vec!["a".into(), "a".into()], &[]).is_err());
    }

    #[test]
    fn diamond_is_normal_on_small_frames() {
        for n in 1..=3 {
            for frame in KripkeFrame::enumerate(n) {
                assert_eq!(frame.diamond_image(WorldSet::EMPTY), WorldSet::EMPTY);
                for s in WorldSet::all_subsets(n) {
                    for t in WorldSet::all_subsets(n) {
                        assert_eq!(
                            frame.diamond_image(s.union(t)),
                            frame.diamond_image(s).union(frame.diamond_image(t))
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(KripkeFrame::enumerate(1).count(), 2);
        assert_eq!(KripkeFrame::enumerate(2).count(), 16);
        assert_eq!(KripkeFrame::enumerate(3).count(), 512);
    }
}
