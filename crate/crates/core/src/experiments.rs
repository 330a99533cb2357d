//! Exhaustive and randomized checks of the correspondence claims, shared by
//! the `demo`/`experiment` commands and the acceptance tests.

use crate::algebra::{
    algebraic_mu, complex_algebra, jt_iso_check, normal_diamond_algebras, ultrafilter_frame, ModalAlgebra,
    DEFAULT_WORLD_CAP,
};
use crate::assignment::{
    correspondence_experiment, eval_ga, eval_standard_fol, ext_embedding, translate_guarded, with_guard, GAModel,
};
use crate::fixpoint::{path_closure, transitive_closure_fp, BinaryRelation};
use crate::generators::{fo_formulas, ga_models, henkin_models, modal_formulas, modal_instances, mso_formulas};
use crate::henkin::{
    check_ext, check_fullness, eval_mso, eval_mso_standard, eval_two_sorted, tau_translate_with_map, to_two_sorted,
    HenkinModel, MsoEnv, TwoSortedEnv,
};
use crate::modal::symbolic::{StandardLfp, SymbolicModel};
use crate::modal::{
    extension_with, is_descriptive, ExplicitFamily, GeneralFrame, KripkeFrame, ModalModel, Semantics, SymSet, WorldSet,
};
use crate::syntax::{is_guarded, parse_fol, parse_modal, FoFormula, ModalFormula};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::time::Instant;

/// One checked claim: how many instances were examined and how many failed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Claim {
    pub name: String,
    pub checked: usize,
    pub failures: usize,
    pub detail: String,
}

impl Claim {
    fn new(name: &str) -> Self {
        Claim {
            name: name.to_string(),
            checked: 0,
            failures: 0,
            detail: String::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0 && self.checked > 0
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            if self.failures == 0 {
                self.detail = format!("first failure: {}", what());
            }
            self.failures += 1;
        }
    }

    fn note(mut self, detail: impl Into<String>) -> Self {
        if self.failures == 0 {
            self.detail = detail.into();
        }
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub claims: Vec<Claim>,
    pub seconds: f64,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.claims.iter().all(Claim::passed)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.claims {
            let status = if c.passed() { "PASS" } else { "FAIL" };
            write!(f, "{status} {}: {} checked, {} failed", c.name, c.checked, c.failures)?;
            if !c.detail.is_empty() {
                write!(f, " ({})", c.detail)?;
            }
            writeln!(f)?;
        }
        write!(
            f,
            "{} {} in {:.2}s",
            if self.passed() { "PASS" } else { "FAIL" },
            self.suite,
            self.seconds
        )
    }
}

fn timed(suite: &str, run: impl FnOnce() -> Vec<Claim>) -> SuiteReport {
    let start = Instant::now();
    let claims = run();
    SuiteReport {
        suite: suite.to_string(),
        claims,
        seconds: start.elapsed().as_secs_f64(),
    }
}

/// The infinite chain with `p = {0}`: general μ gives `N ∪ {∞}` while
/// standard iteration climbs to the non-admissible `N`.
pub fn figure1(bound: u64) -> SuiteReport {
    timed("figure1", || {
        let model = SymbolicModel::new(bound, BTreeMap::from([("p".to_string(), SymSet::finite([0]))]))
            .expect("bound is positive");
        let f = parse_modal("mu X. (p | <>X)").expect("fixed formula parses");
        let mut general = Claim::new("general least fixed point is N ∪ {∞}");
        match model.extension(&f) {
            Ok(s) => {
                let shown = s.to_string();
                general.check(s == SymSet::everything(), || format!("got {shown}"));
                general = general.note(format!("got {shown}"));
            }
            Err(e) => general.check(false, || e.to_string()),
        }
        let mut standard = Claim::new("standard iteration reported as the non-admissible N");
        match model.standard_iteration(&f) {
            Ok(StandardLfp::Divergent {
                limit: Some(limit),
                limit_admissible,
                iterations,
                ..
            }) => {
                let shown = limit.to_string();
                standard.check(limit == SymSet::naturals() && !limit_admissible, || {
                    format!("limit {shown}")
                });
                standard = standard.note(format!(
                    "diverges after {iterations} steps towards {shown}, not admissible"
                ));
            }
            other => standard.check(false, || format!("{other:?}")),
        }
        vec![general, standard]
    })
}

/// Representation round trip on complex algebras of every frame with at
/// most `max_worlds` worlds and every normal powerset algebra with at most
/// `max_atoms` atoms.
pub fn jt_roundtrip(max_worlds: usize, max_atoms: usize) -> SuiteReport {
    timed("jt_roundtrip", || {
        let mut complex = Claim::new("complex algebras isomorphic to their double duals");
        for n in 1..=max_worlds {
            for frame in KripkeFrame::enumerate(n) {
                let alg = complex_algebra(&frame, DEFAULT_WORLD_CAP).expect("small frame");
                let report = jt_iso_check(&alg);
                complex.check(report.isomorphic, || {
                    format!("{:?}: {:?}", frame.pairs(), report.counterexample)
                });
            }
        }
        let mut normal = Claim::new("normal powerset algebras isomorphic to their double duals");
        let mut descriptive = Claim::new("ultrafilter frames are descriptive");
        let mut atoms = Claim::new("ultrafilters correspond to atoms");
        for k in 1..=max_atoms {
            for alg in normal_diamond_algebras(k) {
                let report = jt_iso_check(&alg);
                normal.check(report.isomorphic, || format!("{:?}", report.counterexample));
                let gf = ultrafilter_frame(&alg);
                descriptive.check(is_descriptive(&gf).descriptive(), || {
                    format!("{:?}", alg.tables().diamond)
                });
                atoms.check(gf.frame().size() == k, || {
                    format!("{} points for {k} atoms", gf.frame().size())
                });
            }
        }
        vec![complex, normal, descriptive, atoms]
    })
}

/// Frame-by-frame equivalence of axiom validity and confluence.
pub fn confluence(max_states: usize) -> SuiteReport {
    timed("confluence", || {
        let mut claim = Claim::new("axiom valid under all valuations iff confluent");
        match correspondence_experiment(max_states) {
            Ok(report) => {
                for m in &report.mismatches {
                    claim.check(false, || format!("{m:?}"));
                }
                claim.checked = report.frames;
                claim = claim.note(format!(
                    "{} frames up to {max_states} states, {} confluent",
                    report.frames, report.confluent_frames
                ));
            }
            Err(e) => claim.check(false, || e.to_string()),
        }
        vec![claim]
    })
}

const VARIABLE_SETS: [&[&str]; 2] = [&["x"], &["x", "y"]];

/// Guarded translation faithfulness over every small GA model and every
/// formula of the generated grammar up to `depth`.
pub fn guarded_faithfulness(depth: usize) -> SuiteReport {
    timed("guarded_faithfulness", || {
        let mut faithful = Claim::new("GA truth equals standard truth of the guarded translation");
        let mut guarded = Claim::new("translations are guarded");
        for vars in VARIABLE_SETS {
            let formulas = fo_formulas(vars, depth);
            let universe: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
            let translated: Vec<(FoFormula, String)> = formulas
                .iter()
                .map(|f| {
                    let t = translate_guarded(f, &universe).expect("generated formulas stay in the universe");
                    (t.formula, t.guard)
                })
                .collect();
            for (t, g) in &translated {
                guarded.check(is_guarded(t, &BTreeSet::from([g.clone()])), || t.to_string());
            }
            for domain in 1..=2 {
                for model in ga_models(domain, vars) {
                    let plus = with_guard(&model, "G").expect("generated models have no G");
                    for (f, (t, _)) in formulas.iter().zip(&translated) {
                        for s in model.assignments() {
                            let lhs = eval_ga(&model, f, s);
                            let rhs = eval_standard_fol(&plus, t, s);
                            faithful.check(lhs.is_ok() && lhs == rhs, || describe(&model, f, s));
                        }
                    }
                }
            }
        }
        vec![faithful, guarded]
    })
}

fn describe(model: &GAModel, f: &FoFormula, s: &[usize]) -> String {
    format!("{f} at {} with V = {:?}", model.show(s), model.to_spec().assignments)
}

/// τ-correspondence over every Henkin model with `|D| ≤ 2` and at most
/// `max_family` sets, and the standard-model agreement on full families.
pub fn tau_correspondence(depth: usize, max_family: usize) -> SuiteReport {
    timed("tau_correspondence", || {
        let formulas = mso_formulas(depth);
        let translated: Vec<_> = formulas.iter().map(tau_translate_with_map).collect();
        let mut tau = Claim::new("Henkin truth equals two-sorted truth of the translation");
        let mut ext = Claim::new("encodings are extensional");
        let mut full = Claim::new("full families satisfy fullness and agree with standard semantics");
        for domain in 1..=2 {
            for model in henkin_models(domain, max_family) {
                let st = to_two_sorted(&model);
                ext.check(check_ext(&st).holds, || model.show_set(model.family()[0]));
                let is_full = model.is_full();
                if is_full {
                    full.check(check_fullness(&st).0, || format!("domain {domain}"));
                }
                for (f, (t, map)) in formulas.iter().zip(&translated) {
                    for env in mso_envs(&model) {
                        let lhs = eval_mso(&model, f, &env);
                        let points = env
                            .sets
                            .iter()
                            .filter_map(|(x, &s)| Some((map.get(x)?.clone(), st.point_of(s)?)))
                            .collect();
                        let two = TwoSortedEnv {
                            objects: env.objects.clone(),
                            points,
                        };
                        let rhs = eval_two_sorted(&st, t, &two);
                        tau.check(lhs.is_ok() && lhs == rhs, || {
                            format!("{f} in family {:?}", model.family())
                        });
                        if is_full {
                            let std = eval_mso_standard(&model, f, &env);
                            full.check(std.is_ok() && std == lhs, || format!("{f} on domain {domain}"));
                        }
                    }
                }
            }
        }
        vec![tau, ext, full]
    })
}

/// Every assignment of `x`, `y` to elements and `X` to a family member.
fn mso_envs(model: &HenkinModel) -> Vec<MsoEnv> {
    let n = model.domain().len();
    let mut out = Vec::new();
    for x in 0..n {
        for y in 0..n {
            for &s in model.family() {
                out.push(MsoEnv {
                    objects: BTreeMap::from([("x".to_string(), x), ("y".to_string(), y)]),
                    sets: BTreeMap::from([("X".to_string(), s)]),
                });
            }
        }
    }
    out
}

/// The polyadic quantifier is not its stepwise iteration.
pub fn polyadic() -> SuiteReport {
    timed("polyadic", || {
        let spec = serde_json::json!({
            "domain": ["a", "b"],
            "predicates": {"P": {"arity": 1, "tuples": [["b"]]}, "Q": {"arity": 1, "tuples": [["b"]]}},
            "variables": ["x", "y"],
            "assignments": [["a", "a"], ["b", "b"]]
        });
        let model = GAModel::from_spec(&serde_json::from_value(spec).expect("fixed model")).expect("valid model");
        let s = model.assignment(&["a", "a"]).expect("admissible");
        let poly = parse_fol("exists (x,y). (P(x) & Q(y))").expect("parses");
        let stepwise = parse_fol("exists x. exists y. (P(x) & Q(y))").expect("parses");
        let mut claim = Claim::new("polyadic true where the iterated quantifier is false");
        let (a, b) = (eval_ga(&model, &poly, &s), eval_ga(&model, &stepwise, &s));
        claim.check(a == Ok(true) && b == Ok(false), || format!("{a:?} vs {b:?}"));
        vec![claim.note("at (a,a) with V = {(a,a),(b,b)}")]
    })
}

/// Standard truth equals GA truth of the extension-modality embedding.
pub fn ext_embedding_suite(depth: usize) -> SuiteReport {
    timed("ext_embedding", || {
        let mut claim = Claim::new("standard truth equals truth of the ext-embedding");
        let vars = ["x", "y"];
        let formulas = fo_formulas(&vars, depth);
        let embedded: Vec<FoFormula> = formulas.iter().map(ext_embedding).collect();
        for model in ga_models(2, &vars) {
            for (f, e) in formulas.iter().zip(&embedded) {
                for s in model.assignments() {
                    let lhs = eval_standard_fol(&model, f, s);
                    let rhs = eval_ga(&model, e, s);
                    claim.check(lhs.is_ok() && lhs == rhs, || describe(&model, f, s));
                }
            }
        }
        vec![claim]
    })
}

/// A random digraph on `1..=max_nodes` nodes.
pub fn random_relation(rng: &mut StdRng, max_nodes: usize) -> BinaryRelation {
    let n = rng.gen_range(1..=max_nodes);
    let density: f64 = rng.gen_range(0.05..0.6);
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (0..n).map(move |v| (u, v)))
        .filter(|_| rng.gen_bool(density))
        .collect();
    BinaryRelation::on_indices(n, pairs).expect("pairs are in range")
}

/// Least fixed point of `R ∪ (X∘R)` against path search.
pub fn transitive_closure(seed: u64, random: usize, max_nodes: usize) -> SuiteReport {
    timed("transitive_closure", || {
        let mut exhaustive = Claim::new("fixpoint closure equals path closure on all digraphs with ≤ 3 nodes");
        let mut sampled = Claim::new(&format!(
            "fixpoint closure equals path closure on {random} random digraphs"
        ));
        let mut bound = Claim::new("iteration count within |U|+1");
        let check = |r: &BinaryRelation, claim: &mut Claim, bound: &mut Claim| {
            let (tc, iterations) = transitive_closure_fp(r);
            let square = r.universe().len().pow(2);
            bound.check(iterations <= square + 1, || format!("{iterations} iterations on {r}"));
            claim.check(tc == path_closure(r), || r.to_string());
        };
        for n in 1..=3 {
            for bits in 0u32..1 << (n * n) {
                let pairs = (0..n * n).filter(|k| bits >> k & 1 == 1).map(|k| (k / n, k % n));
                let r = BinaryRelation::on_indices(n, pairs).expect("pairs are in range");
                check(&r, &mut exhaustive, &mut bound);
            }
        }
        let mut rng = StdRng::seed_from_u64(seed);
        for _ in 0..random {
            let r = random_relation(&mut rng, max_nodes);
            check(&r, &mut sampled, &mut bound);
        }
        vec![exhaustive, sampled.note(format!("seed {seed}")), bound]
    })
}

/// Generalized evaluators with full families agree with the standard ones.
pub fn conservativity(depth: usize) -> SuiteReport {
    timed("conservativity", || {
        let mut ga = Claim::new("GA evaluation with full V equals standard evaluation");
        for vars in VARIABLE_SETS {
            let formulas = fo_formulas(vars, depth);
            for domain in 1..=2 {
                for model in ga_models(domain, vars).into_iter().filter(GAModel::is_full) {
                    for f in &formulas {
                        for s in model.assignments() {
                            let (a, b) = (eval_ga(&model, f, s), eval_standard_fol(&model, f, s));
                            ga.check(a.is_ok() && a == b, || describe(&model, f, s));
                        }
                    }
                }
            }
        }
        let mut henkin = Claim::new("Henkin evaluation with the full family equals standard evaluation");
        let formulas = mso_formulas(depth);
        for domain in 1..=2 {
            let model = HenkinModel::full((0..domain).map(|i| format!("d{i}")).collect(), BTreeMap::new())
                .expect("small domain");
            for f in &formulas {
                for env in mso_envs(&model) {
                    let (a, b) = (eval_mso(&model, f, &env), eval_mso_standard(&model, f, &env));
                    henkin.check(a.is_ok() && a == b, || f.to_string());
                }
            }
        }
        let mut modal = Claim::new("general μ over the full powerset equals Kleene iteration");
        let mut algebraic = Claim::new("algebraic μ on complex algebras equals Kleene iteration");
        let deep = modal_formulas(depth);
        let shallow = modal_formulas(depth.min(2));
        for n in 1..=3 {
            let formulas = if n <= 2 { &deep } else { &shallow };
            for (frame, p) in modal_instances(n) {
                check_modal(&frame, p, formulas, &mut modal, &mut algebraic);
            }
        }
        vec![ga, henkin, modal, algebraic]
    })
}

fn check_modal(frame: &KripkeFrame, p: WorldSet, formulas: &[ModalFormula], modal: &mut Claim, algebraic: &mut Claim) {
    let valuation = BTreeMap::from([("p".to_string(), p)]);
    let explicit =
        GeneralFrame::new(frame.clone(), ExplicitFamily::powerset(frame.size())).expect("powerset is closed");
    let general = ModalModel::new(explicit, valuation.clone()).expect("valuation admissible");
    let alg: ModalAlgebra = complex_algebra(frame, DEFAULT_WORLD_CAP).expect("small frame");
    let name = crate::modal::DisplaySet(frame, p).to_string();
    let pa = alg.index_of(&name).expect("every set is in the complex algebra");
    let alg_val = BTreeMap::from([("p".to_string(), pa)]);
    let env = BTreeMap::new();
    for f in formulas {
        let std = extension_with(&general, f, &env, Semantics::Standard);
        let gen = extension_with(&general, f, &env, Semantics::General);
        modal.check(std.is_ok() && std == gen, || format!("{f} on {:?}", frame.pairs()));
        let a = algebraic_mu(&alg, f, &alg_val).map(|i| alg.name(i).to_string());
        let expected = std.as_ref().map(|s| crate::modal::DisplaySet(frame, *s).to_string());
        algebraic.check(a.is_ok() && a.ok() == expected.ok(), || {
            format!("{f} on {:?}", frame.pairs())
        });
    }
}

/// Names accepted by `demo`.
pub const DEMOS: [&str; 5] = [
    "figure1",
    "jt_roundtrip",
    "confluence",
    "guarded_faithfulness",
    "tau_correspondence",
];

pub fn demo(name: &str, bound: u64) -> Option<SuiteReport> {
    Some(match name {
        "figure1" => figure1(bound),
        "jt_roundtrip" => jt_roundtrip(3, 3),
        "confluence" => confluence(3),
        "guarded_faithfulness" => guarded_faithfulness(3),
        "tau_correspondence" => tau_correspondence(3, 4),
        _ => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suites_pass() {
        assert!(figure1(16).passed());
        assert!(polyadic().passed());
        assert!(jt_roundtrip(2, 2).passed());
        assert!(confluence(2).passed());
        assert!(guarded_faithfulness(1).passed());
        assert!(tau_correspondence(1, 2).passed());
        assert!(ext_embedding_suite(1).passed());
        assert!(transitive_closure(7, 10, 5).passed());
        assert!(conservativity(1).passed());
    }

    #[test]
    fn report_text() {
        let text = polyadic().to_string();
        assert!(text.starts_with("PASS polyadic true where the iterated quantifier is false: 1 checked, 0 failed"));
        assert!(demo("nope", 8).is_none());
    }
}
