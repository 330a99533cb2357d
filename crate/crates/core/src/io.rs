//! JSON input helpers shared by the model formats.

use crate::algebra::AlgebraTables;
use crate::modal::symbolic::{SymbolicModel, DEFAULT_BOUND};
use crate::modal::{
    DisplaySet, ExplicitFamily, Family, GeneralFrame, KripkeFrame, ModalError, ModalModel, SymSet, WorldSet,
};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unknown {kind} `{name}`")]
    UnknownName { kind: &'static str, name: String },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Modal(#[from] ModalError),
}

/// An identifier in a JSON model. Worlds, elements and carrier entries may
/// be written as strings or as integers; both are kept as strings.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Name(pub String);

impl Name {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Name {
    fn from(s: &str) -> Self {
        Name(s.to_string())
    }
}

impl From<String> for Name {
    fn from(s: String) -> Self {
        Name(s)
    }
}

impl Serialize for Name {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Name {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Int(i64),
        }
        Ok(match Raw::deserialize(d)? {
            Raw::Text(s) => Name(s),
            Raw::Int(n) => Name(n.to_string()),
        })
    }
}

pub fn names(items: &[&str]) -> Vec<Name> {
    items.iter().map(|&s| Name::from(s)).collect()
}

/// Modal model JSON: `{"worlds", "rel", "family", "valuation"}`. The family
/// is `"full"`, a list of world lists, or
/// `{"symbolic": "finite-cofinite", "bound": B}`; in the symbolic case
/// `worlds` and `rel` are ignored and valuations are symbolic sets.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModalModelSpec {
    #[serde(default)]
    pub worlds: Vec<Name>,
    #[serde(default)]
    pub rel: Vec<(Name, Name)>,
    #[serde(default = "full_family")]
    pub family: FamilySpec,
    #[serde(default)]
    pub valuation: BTreeMap<String, Value>,
}

fn full_family() -> FamilySpec {
    FamilySpec::Keyword("full".into())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FamilySpec {
    Keyword(String),
    Sets(Vec<Vec<Name>>),
    Symbolic { symbolic: String, bound: Option<u64> },
}

#[derive(Debug, Clone)]
pub enum LoadedModel {
    Explicit(ModalModel),
    Symbolic(SymbolicModel),
}

/// Builds a model from its JSON form. `bound` overrides the file's
/// symbolic search bound.
pub fn load_modal_model(text: &str, bound: Option<u64>) -> Result<LoadedModel, IoError> {
    let spec: ModalModelSpec = serde_json::from_str(text)?;
    modal_model_from_spec(spec, bound)
}

pub fn modal_model_from_spec(spec: ModalModelSpec, bound: Option<u64>) -> Result<LoadedModel, IoError> {
    let ModalModelSpec {
        worlds,
        rel,
        family,
        valuation,
    } = spec;
    if let FamilySpec::Symbolic { symbolic, bound: b } = &family {
        if symbolic != "finite-cofinite" {
            return Err(IoError::Invalid(format!("unknown symbolic family `{symbolic}`")));
        }
        let valuation = valuation
            .into_iter()
            .map(|(p, v)| symbolic_set(&v).map(|s| (p, s)))
            .collect::<Result<_, _>>()?;
        let bound = bound.or(*b).unwrap_or(DEFAULT_BOUND);
        return Ok(LoadedModel::Symbolic(SymbolicModel::new(bound, valuation)?));
    }
    let parts = explicit_parts(ModalModelSpec {
        worlds,
        rel,
        family,
        valuation,
    })?;
    let gf = match parts.family {
        None => GeneralFrame::full(parts.frame),
        Some(f) => GeneralFrame::new(parts.frame, f)?,
    };
    Ok(LoadedModel::Explicit(ModalModel::new(gf, parts.valuation)?))
}

/// An explicit model before the family is checked for closure.
#[derive(Debug, Clone)]
pub struct ExplicitParts {
    pub frame: KripkeFrame,
    /// `None` for the full powerset.
    pub family: Option<ExplicitFamily>,
    pub valuation: BTreeMap<String, WorldSet>,
}

pub fn explicit_parts(spec: ModalModelSpec) -> Result<ExplicitParts, IoError> {
    let ModalModelSpec {
        worlds,
        rel,
        family,
        valuation,
    } = spec;
    let world_names: Vec<String> = worlds.into_iter().map(|w| w.0).collect();
    let index = |w: &Name| {
        world_names
            .iter()
            .position(|x| x == w.as_str())
            .ok_or_else(|| IoError::UnknownName {
                kind: "world",
                name: w.0.clone(),
            })
    };
    let set = |ws: &[Name]| -> Result<WorldSet, IoError> {
        ws.iter()
            .map(index)
            .collect::<Result<Vec<_>, _>>()
            .map(WorldSet::from_indices)
    };
    let pairs = rel
        .iter()
        .map(|(u, v)| Ok((index(u)?, index(v)?)))
        .collect::<Result<Vec<_>, IoError>>()?;
    let mut val = BTreeMap::new();
    for (p, v) in &valuation {
        let ws: Vec<Name> = serde_json::from_value(v.clone())
            .map_err(|_| IoError::Invalid(format!("valuation of `{p}` must be a list of worlds")))?;
        val.insert(p.clone(), set(&ws)?);
    }
    let family = match family {
        FamilySpec::Keyword(k) if k == "full" => None,
        FamilySpec::Keyword(k) => return Err(IoError::Invalid(format!("unknown family keyword `{k}`"))),
        FamilySpec::Sets(sets) => Some(ExplicitFamily::new(
            sets.iter().map(|s| set(s)).collect::<Result<Vec<_>, _>>()?,
        )),
        FamilySpec::Symbolic { .. } => return Err(IoError::Invalid("expected an explicit frame".into())),
    };
    Ok(ExplicitParts {
        frame: KripkeFrame::named(world_names.clone(), &pairs)?,
        family,
        valuation: val,
    })
}

/// A symbolic set: the tagged form, or a plain list of naturals.
fn symbolic_set(v: &Value) -> Result<SymSet, IoError> {
    if let Ok(items) = serde_json::from_value::<Vec<u64>>(v.clone()) {
        return Ok(SymSet::finite(items));
    }
    Ok(serde_json::from_value(v.clone())?)
}

/// JSON form of a general frame (with an empty valuation).
pub fn general_frame_spec(gf: &GeneralFrame) -> ModalModelSpec {
    let frame = gf.frame();
    let named = |s: WorldSet| frame.names_of(s).into_iter().map(Name).collect::<Vec<_>>();
    ModalModelSpec {
        worlds: frame.world_names().iter().cloned().map(Name).collect(),
        rel: frame
            .pairs()
            .into_iter()
            .map(|(u, v)| {
                (
                    Name(frame.world_names()[u].clone()),
                    Name(frame.world_names()[v].clone()),
                )
            })
            .collect(),
        family: match gf.family() {
            Family::Full => full_family(),
            Family::Explicit(f) => FamilySpec::Sets(f.sets().iter().map(|&s| named(s)).collect()),
        },
        valuation: BTreeMap::new(),
    }
}

/// Text form of an explicit extension, e.g. `{w0, w2}`.
pub fn show_worlds(frame: &KripkeFrame, s: WorldSet) -> String {
    DisplaySet(frame, s).to_string()
}

#[derive(Deserialize)]
struct AlgebraJson {
    carrier: Vec<Name>,
    join: Vec<Vec<Name>>,
    meet: Vec<Vec<Name>>,
    neg: Vec<Name>,
    bot: Name,
    top: Name,
    diamond: Vec<Name>,
}

/// Algebra JSON. Table entries may be carrier names or carrier indices;
/// a name match takes precedence.
pub fn load_algebra(text: &str) -> Result<AlgebraTables, IoError> {
    let raw: AlgebraJson = serde_json::from_str(text)?;
    let carrier: Vec<String> = raw.carrier.into_iter().map(|n| n.0).collect();
    let resolve = |n: &Name| -> Result<usize, IoError> {
        carrier
            .iter()
            .position(|c| c == n.as_str())
            .or_else(|| n.as_str().parse::<usize>().ok().filter(|&i| i < carrier.len()))
            .ok_or_else(|| IoError::UnknownName {
                kind: "carrier element",
                name: n.0.clone(),
            })
    };
    let row = |r: &[Name]| r.iter().map(resolve).collect::<Result<Vec<_>, _>>();
    let table = |t: &[Vec<Name>]| t.iter().map(|r| row(r)).collect::<Result<Vec<_>, _>>();
    Ok(AlgebraTables {
        join: table(&raw.join)?,
        meet: table(&raw.meet)?,
        neg: row(&raw.neg)?,
        bot: resolve(&raw.bot)?,
        top: resolve(&raw.top)?,
        diamond: row(&raw.diamond)?,
        carrier,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_and_strings_are_names() {
        let v: Vec<Name> = serde_json::from_str(r#"[0, "a", 12]"#).unwrap();
        assert_eq!(v, names(&["0", "a", "12"]));
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"["0","a","12"]"#);
    }

    #[test]
    fn explicit_model() {
        let text = r#"{"worlds":["a","b"],"rel":[["a","b"]],"family":"full","valuation":{"p":["b"]}}"#;
        let LoadedModel::Explicit(m) = load_modal_model(text, None).unwrap() else {
            panic!()
        };
        assert_eq!(m.valuation()["p"], WorldSet::singleton(1));
        assert!(m.frame().related(0, 1));
        let text = r#"{"worlds":[0,1],"rel":[],"family":[[0]],"valuation":{}}"#;
        assert!(matches!(
            load_modal_model(text, None),
            Err(IoError::Modal(ModalError::ClosureViolation(_)))
        ));
        let text = r#"{"worlds":["a"],"rel":[["a","z"]]}"#;
        assert!(matches!(load_modal_model(text, None), Err(IoError::UnknownName { .. })));
    }

    #[test]
    fn symbolic_model() {
        let text = r#"{"family":{"symbolic":"finite-cofinite","bound":32},"valuation":{"p":[0]}}"#;
        let LoadedModel::Symbolic(m) = load_modal_model(text, None).unwrap() else {
            panic!()
        };
        assert_eq!(m.bound(), 32);
        assert_eq!(m.valuation()["p"], SymSet::finite([0]));
        let text = r#"{"family":{"symbolic":"finite-cofinite"},"valuation":{"p":{"kind":"cofinite","excluded":[1]}}}"#;
        let LoadedModel::Symbolic(m) = load_modal_model(text, Some(8)).unwrap() else {
            panic!()
        };
        assert_eq!(m.bound(), 8);
        assert_eq!(m.valuation()["p"], SymSet::cofinite([1]));
    }

    #[test]
    fn frame_spec_round_trip() {
        let text = r#"{"worlds":["a","b"],"rel":[["a","a"],["b","b"]],"family":[[],["a","b"]]}"#;
        let LoadedModel::Explicit(m) = load_modal_model(text, None).unwrap() else {
            panic!()
        };
        let back = serde_json::to_string(&general_frame_spec(m.general_frame())).unwrap();
        let LoadedModel::Explicit(m2) = load_modal_model(&back, None).unwrap() else {
            panic!()
        };
        assert_eq!(m.general_frame(), m2.general_frame());
    }

    #[test]
    fn algebra_by_name_or_index() {
        let text = r#"{"carrier":["0","1"],"join":[[0,1],[1,1]],"meet":[["0","0"],["0","1"]],
            "neg":[1,0],"bot":0,"top":"1","diamond":[0,1]}"#;
        let t = load_algebra(text).unwrap();
        assert_eq!(t.meet, vec![vec![0, 0], vec![0, 1]]);
        assert_eq!(t.top, 1);
        assert!(crate::algebra::validate_modal_algebra(&t).ok);
    }
}
