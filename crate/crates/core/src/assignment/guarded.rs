use super::{GAModel, GaError, Predicate};
use crate::syntax::FoFormula;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GuardedTranslation {
    pub formula: FoFormula,
    /// Name of the fresh guard predicate, of arity `|vars|`.
    pub guard: String,
}

/// Relativizes every quantifier to the guard `G(x1..xn)`, read as "the
/// current assignment is admissible". Over the model extended by
/// [`with_guard`], the result evaluated classically agrees with the input
/// evaluated over the assignment set.
pub fn translate_guarded(f: &FoFormula, vars: &[String]) -> Result<GuardedTranslation, GaError> {
    if let Some(x) = f.variables().into_iter().find(|x| !vars.contains(x)) {
        return Err(GaError::VariableOutsideUniverse(x));
    }
    let used = f.predicates();
    let guard = std::iter::once("G".to_string())
        .chain((1..).map(|i| format!("G{i}")))
        .find(|g| !used.contains(g))
        .expect("unbounded supply of names");
    let atom = FoFormula::Pred(guard.clone(), vars.to_vec());
    Ok(GuardedTranslation {
        formula: relativize(f, &atom)?,
        guard,
    })
}

fn relativize(f: &FoFormula, g: &FoFormula) -> Result<FoFormula, GaError> {
    use FoFormula::*;
    let b = |a: &FoFormula| relativize(a, g).map(Box::new);
    Ok(match f {
        True | False | Pred(..) | Eq(..) => f.clone(),
        Not(a) => Not(b(a)?),
        And(x, y) => And(b(x)?, b(y)?),
        Or(x, y) => Or(b(x)?, b(y)?),
        Implies(x, y) => Implies(b(x)?, b(y)?),
        Exists(x, a) => Exists(x.clone(), Box::new(FoFormula::and(g.clone(), relativize(a, g)?))),
        Forall(x, a) => Forall(x.clone(), Box::new(FoFormula::implies(g.clone(), relativize(a, g)?))),
        PolyExists(xs, a) => {
            let body = FoFormula::and(g.clone(), relativize(a, g)?);
            xs.iter().rev().fold(body, |acc, x| Exists(x.clone(), Box::new(acc)))
        }
        Ext(_) => return Err(GaError::UnsupportedExt),
    })
}

/// The model with `guard` interpreted as the admissible assignments.
pub fn with_guard(model: &GAModel, guard: &str) -> Result<GAModel, GaError> {
    if model.predicates().contains_key(guard) {
        return Err(GaError::PredicateClash(guard.to_string()));
    }
    let mut extended = model.clone();
    extended.insert_predicate(
        guard,
        Predicate {
            arity: model.variables().len(),
            tuples: model.assignments().clone(),
        },
    );
    Ok(extended)
}

/// Replaces each quantifier by its extension-modality reading: `exists x`
/// becomes `ext exists x`, and `forall x` becomes `~ext exists x. ~`.
pub fn ext_embedding(f: &FoFormula) -> FoFormula {
    use FoFormula::*;
    let b = |a: &FoFormula| Box::new(ext_embedding(a));
    match f {
        True | False | Pred(..) | Eq(..) => f.clone(),
        Not(a) => Not(b(a)),
        And(x, y) => And(b(x), b(y)),
        Or(x, y) => Or(b(x), b(y)),
        Implies(x, y) => Implies(b(x), b(y)),
        Exists(x, a) => Ext(Box::new(Exists(x.clone(), b(a)))),
        Forall(x, a) => FoFormula::not(Ext(Box::new(Exists(
            x.clone(),
            Box::new(FoFormula::not(ext_embedding(a))),
        )))),
        PolyExists(xs, a) => Ext(Box::new(PolyExists(xs.clone(), b(a)))),
        Ext(a) => Ext(b(a)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assignment::tests::basic;
    use crate::assignment::{eval_ga, eval_standard_fol};
    use crate::syntax::{is_guarded, parse_fol};
    use std::collections::BTreeSet;

    fn vars(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn translation_examples() {
        let t = translate_guarded(&parse_fol("exists x. R(x,y)").unwrap(), &vars(&["x", "y"])).unwrap();
        assert_eq!(t.formula.to_string(), "exists x. (G(x,y) & R(x,y))");
        let t = translate_guarded(&parse_fol("forall x. P(x)").unwrap(), &vars(&["x"])).unwrap();
        assert_eq!(t.formula.to_string(), "forall x. (G(x) -> P(x))");
        let t = translate_guarded(&parse_fol("exists (x,y). G(x,y)").unwrap(), &vars(&["x", "y"])).unwrap();
        assert_eq!(t.guard, "G1");
        assert_eq!(t.formula.to_string(), "exists x. exists y. (G1(x,y) & G(x,y))");
        assert!(is_guarded(&t.formula, &BTreeSet::from(["G1".to_string()])));
        assert_eq!(
            translate_guarded(&parse_fol("exists z. P(z)").unwrap(), &vars(&["x"])),
            Err(GaError::VariableOutsideUniverse("z".into()))
        );
        assert_eq!(
            translate_guarded(&parse_fol("ext true").unwrap(), &vars(&["x"])),
            Err(GaError::UnsupportedExt)
        );
    }

    #[test]
    fn translation_is_faithful_on_examples() {
        let m = basic();
        for text in [
            "exists x. P(x)",
            "exists y. P(y)",
            "forall x. ~P(x)",
            "exists (x,y). (P(x) | P(y))",
            "exists x. exists y. x = y",
            "forall y. exists x. ~P(y)",
        ] {
            let f = parse_fol(text).unwrap();
            let t = translate_guarded(&f, m.variables()).unwrap();
            let plus = with_guard(&m, &t.guard).unwrap();
            for s in m.assignments() {
                assert_eq!(
                    eval_ga(&m, &f, s).unwrap(),
                    eval_standard_fol(&plus, &t.formula, s).unwrap(),
                    "{text} at {}",
                    m.show(s)
                );
            }
        }
    }

    #[test]
    fn embedding_recovers_standard_quantifiers() {
        let m = basic();
        for text in [
            "exists x. P(x)",
            "forall y. P(y)",
            "~exists x. ~P(x)",
            "exists x. forall y. x = y",
        ] {
            let f = parse_fol(text).unwrap();
            for s in m.assignments() {
                assert_eq!(
                    eval_standard_fol(&m, &f, s).unwrap(),
                    eval_ga(&m, &ext_embedding(&f), s).unwrap(),
                    "{text}"
                );
            }
        }
    }
}
