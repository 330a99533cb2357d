use super::{all_tuples, GAModel, GaError};
use crate::io::Name;
use crate::modal::{WorldSet, MAX_WORLDS};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use std::fmt;

/// States with one transition relation per variable, read modally: `<x>φ`
/// holds at `s` iff `φ` holds at some `x`-successor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbstractAssignmentFrame {
    states: Vec<String>,
    transitions: BTreeMap<String, Vec<WorldSet>>,
    valuations: BTreeMap<String, WorldSet>,
}

/// JSON form: `{"states":[..], "transitions":{"x":[["s","t"]]}, "valuations":{"S":["s"]}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AbstractFrameSpec {
    pub states: Vec<Name>,
    #[serde(default)]
    pub transitions: BTreeMap<String, Vec<(Name, Name)>>,
    #[serde(default)]
    pub valuations: BTreeMap<String, Vec<Name>>,
}

impl AbstractAssignmentFrame {
    pub fn new(states: Vec<String>, transitions: BTreeMap<String, Vec<(usize, usize)>>) -> Result<Self, GaError> {
        if states.is_empty() || states.len() > MAX_WORLDS {
            return Err(GaError::InvalidModel(format!(
                "a frame needs between 1 and {MAX_WORLDS} states"
            )));
        }
        let n = states.len();
        let mut rels = BTreeMap::new();
        for (x, pairs) in transitions {
            let mut succ = vec![WorldSet::EMPTY; n];
            for (s, t) in pairs {
                if s >= n || t >= n {
                    return Err(GaError::InvalidModel(format!("transition ({s},{t}) leaves the frame")));
                }
                succ[s].insert(t);
            }
            rels.insert(x, succ);
        }
        Ok(AbstractAssignmentFrame {
            states,
            transitions: rels,
            valuations: BTreeMap::new(),
        })
    }

    pub fn from_spec(spec: &AbstractFrameSpec) -> Result<Self, GaError> {
        let index: HashMap<&str, usize> = spec.states.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        if index.len() != spec.states.len() {
            return Err(GaError::InvalidModel("state listed twice".into()));
        }
        let find = |s: &Name| {
            index
                .get(s.as_str())
                .copied()
                .ok_or_else(|| GaError::InvalidModel(format!("unknown state `{s}`")))
        };
        let mut transitions = BTreeMap::new();
        for (x, pairs) in &spec.transitions {
            let pairs = pairs
                .iter()
                .map(|(s, t)| Ok((find(s)?, find(t)?)))
                .collect::<Result<Vec<_>, GaError>>()?;
            transitions.insert(x.clone(), pairs);
        }
        let mut frame = Self::new(spec.states.iter().map(|s| s.0.clone()).collect(), transitions)?;
        for (p, members) in &spec.valuations {
            let set = members.iter().map(find).collect::<Result<Vec<_>, _>>()?;
            frame.valuations.insert(p.clone(), WorldSet::from_indices(set));
        }
        Ok(frame)
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn relation(&self, x: &str) -> Option<&[WorldSet]> {
        self.transitions.get(x).map(Vec::as_slice)
    }

    pub fn valuations(&self) -> &BTreeMap<String, WorldSet> {
        &self.valuations
    }
}

/// The frame whose states are the admissible assignments, with
/// `s R_x t` iff `t = s[x:=d]` for some element `d`.
pub fn assignment_frame(model: &GAModel) -> Result<AbstractAssignmentFrame, GaError> {
    let states: Vec<&Vec<usize>> = model.assignments().iter().collect();
    if states.len() > MAX_WORLDS {
        return Err(GaError::CapExceeded {
            what: "number of assignments".into(),
            size: states.len(),
            cap: MAX_WORLDS,
        });
    }
    let index: HashMap<&Vec<usize>, usize> = states.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let mut transitions = BTreeMap::new();
    for (xi, x) in model.variables().iter().enumerate() {
        let mut pairs = Vec::new();
        for (i, &s) in states.iter().enumerate() {
            for d in all_tuples(model.domain().len(), 1) {
                let mut t = s.clone();
                t[xi] = d[0];
                if let Some(&j) = index.get(&t) {
                    pairs.push((i, j));
                }
            }
        }
        transitions.insert(x.clone(), pairs);
    }
    AbstractAssignmentFrame::new(states.iter().map(|s| model.show(s)).collect(), transitions)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConfluenceReport {
    pub confluent: bool,
    /// States `(s, t, u)` with `s R_x t` and `s R_y u` and no common
    /// `v` with `t R_y v` and `u R_x v`.
    pub witness: Option<(String, String, String)>,
}

impl fmt::Display for ConfluenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.witness {
            None => write!(f, "confluent: {}", self.confluent),
            Some((s, t, u)) => write!(f, "confluent: {}, witness ({s},{t},{u})", self.confluent),
        }
    }
}

fn relations<'a>(
    frame: &'a AbstractAssignmentFrame,
    x: &str,
    y: &str,
) -> Result<(&'a [WorldSet], &'a [WorldSet]), GaError> {
    let bad = || GaError::BadVariables(x.to_string(), y.to_string());
    if x == y {
        return Err(bad());
    }
    Ok((frame.relation(x).ok_or_else(bad)?, frame.relation(y).ok_or_else(bad)?))
}

pub fn check_confluence(frame: &AbstractAssignmentFrame, x: &str, y: &str) -> Result<ConfluenceReport, GaError> {
    let (rx, ry) = relations(frame, x, y)?;
    let witness = confluence_witness(rx, ry).map(|(s, t, u)| {
        let name = |i: usize| frame.states[i].clone();
        (name(s), name(t), name(u))
    });
    Ok(ConfluenceReport {
        confluent: witness.is_none(),
        witness,
    })
}

fn confluence_witness(rx: &[WorldSet], ry: &[WorldSet]) -> Option<(usize, usize, usize)> {
    let n = rx.len();
    for s in 0..n {
        for t in rx[s].iter() {
            for u in ry[s].iter() {
                if !(0..n).any(|v| ry[t].contains(v) && rx[u].contains(v)) {
                    return Some((s, t, u));
                }
            }
        }
    }
    None
}

fn diamond(r: &[WorldSet], a: WorldSet) -> WorldSet {
    WorldSet::from_indices((0..r.len()).filter(|&s| !r[s].intersection(a).is_empty()))
}

fn boxed(r: &[WorldSet], a: WorldSet) -> WorldSet {
    WorldSet::from_indices((0..r.len()).filter(|&s| r[s].is_subset(a)))
}

/// A valuation of `S` and a state refuting `<x>[y]S -> [y]<x>S`, if any.
pub fn axiom_counterexample(
    frame: &AbstractAssignmentFrame,
    x: &str,
    y: &str,
) -> Result<Option<(Vec<String>, String)>, GaError> {
    let (rx, ry) = relations(frame, x, y)?;
    Ok(axiom_refutation(rx, ry).map(|(val, s)| {
        (
            val.iter().map(|i| frame.states[i].clone()).collect(),
            frame.states[s].clone(),
        )
    }))
}

fn axiom_refutation(rx: &[WorldSet], ry: &[WorldSet]) -> Option<(WorldSet, usize)> {
    let n = rx.len();
    WorldSet::all_subsets(n).find_map(|val| {
        let lhs = diamond(rx, boxed(ry, val));
        let rhs = boxed(ry, diamond(rx, val));
        lhs.difference(rhs).iter().next().map(|s| (val, s))
    })
}

/// A frame where axiom validity and confluence disagree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub states: usize,
    pub rx: Vec<(usize, usize)>,
    pub ry: Vec<(usize, usize)>,
    pub confluent: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorrespondenceReport {
    pub max_states: usize,
    pub frames: usize,
    pub confluent_frames: usize,
    pub mismatches: Vec<Mismatch>,
}

impl fmt::Display for CorrespondenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "frames up to {} states: {}, confluent: {}, mismatches: {}",
            self.max_states,
            self.frames,
            self.confluent_frames,
            self.mismatches.len()
        )
    }
}

/// Checks, on every frame with two relations and at most `max_states`
/// states, that the axiom is valid under all valuations exactly when the
/// frame is confluent.
pub fn correspondence_experiment(max_states: usize) -> Result<CorrespondenceReport, GaError> {
    if max_states > 3 {
        return Err(GaError::CapExceeded {
            what: "number of states".into(),
            size: max_states,
            cap: 3,
        });
    }
    let mut report = CorrespondenceReport {
        max_states,
        frames: 0,
        confluent_frames: 0,
        mismatches: Vec::new(),
    };
    for n in 1..=max_states {
        let relations: Vec<Vec<WorldSet>> = (0u32..1 << (n * n))
            .map(|bits| {
                (0..n)
                    .map(|s| WorldSet(u64::from(bits >> (s * n)) & ((1 << n) - 1)))
                    .collect()
            })
            .collect();
        for rx in &relations {
            for ry in &relations {
                report.frames += 1;
                let confluent = confluence_witness(rx, ry).is_none();
                let valid = axiom_refutation(rx, ry).is_none();
                report.confluent_frames += usize::from(confluent);
                if confluent != valid {
                    let pairs = |r: &[WorldSet]| (0..n).flat_map(|s| r[s].iter().map(move |t| (s, t))).collect();
                    report.mismatches.push(Mismatch {
                        states: n,
                        rx: pairs(rx),
                        ry: pairs(ry),
                        confluent,
                    });
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assignment::tests::model;

    fn stu(rx: &[(usize, usize)], ry: &[(usize, usize)]) -> AbstractAssignmentFrame {
        let states = ["s", "t", "u"].map(String::from).to_vec();
        AbstractAssignmentFrame::new(
            states,
            BTreeMap::from([("x".to_string(), rx.to_vec()), ("y".to_string(), ry.to_vec())]),
        )
        .unwrap()
    }

    #[test]
    fn fork_is_not_confluent() {
        let frame = stu(&[(0, 1)], &[(0, 2)]);
        let report = check_confluence(&frame, "x", "y").unwrap();
        assert_eq!(report.to_string(), "confluent: false, witness (s,t,u)");
        assert!(axiom_counterexample(&frame, "x", "y").unwrap().is_some());
        let id = [(0, 0), (1, 1), (2, 2)];
        assert!(check_confluence(&stu(&id, &id), "x", "y").unwrap().confluent);
        assert!(check_confluence(&frame, "x", "x").is_err());
    }

    #[test]
    fn full_assignment_space_is_confluent() {
        let full = model(
            &["a", "b"],
            &[],
            &["x", "y"],
            &[&["a", "a"], &["a", "b"], &["b", "a"], &["b", "b"]],
        );
        let frame = assignment_frame(&full).unwrap();
        assert_eq!(frame.states().len(), 4);
        assert!(check_confluence(&frame, "x", "y").unwrap().confluent);
        let gappy = model(&["a", "b"], &[], &["x", "y"], &[&["a", "a"], &["a", "b"], &["b", "a"]]);
        let frame = assignment_frame(&gappy).unwrap();
        assert!(!check_confluence(&frame, "x", "y").unwrap().confluent);
    }

    #[test]
    fn correspondence_on_small_frames() {
        let one = correspondence_experiment(1).unwrap();
        assert_eq!((one.frames, one.mismatches.len()), (4, 0));
        let two = correspondence_experiment(2).unwrap();
        assert_eq!((two.frames, two.mismatches.len()), (4 + 256, 0));
        assert!(correspondence_experiment(4).is_err());
    }

    #[test]
    fn frame_json() {
        let spec: AbstractFrameSpec = serde_json::from_str(
            r#"{"states":["s","t","u"],"transitions":{"x":[["s","t"]],"y":[["s","u"]]},"valuations":{"S":["t"]}}"#,
        )
        .unwrap();
        let frame = AbstractAssignmentFrame::from_spec(&spec).unwrap();
        assert_eq!(frame, {
            let mut f = stu(&[(0, 1)], &[(0, 2)]);
            f.valuations.insert("S".into(), WorldSet::singleton(1));
            f
        });
    }
}
