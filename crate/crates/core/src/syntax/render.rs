//! Concrete-syntax rendering. `parse(render(f)) == f` for every renamed-apart
//! tree: binary children and binder bodies that are binary get parentheses,
//! and a left operand whose right spine ends in a binder is parenthesized.

use super::ast::*;
use std::fmt;

enum View<'a, F> {
    Leaf(String),
    /// Prefix operator; `spaced` puts a blank between operator and operand.
    Unary(&'static str, bool, &'a F),
    Binary(&'static str, &'a F, &'a F),
    Binder(String, &'a F),
}

trait Shape: Sized {
    fn view(&self) -> View<'_, Self>;
}

fn is_binary<F: Shape>(f: &F) -> bool {
    matches!(f.view(), View::Binary(..))
}

fn ends_open<F: Shape>(f: &F) -> bool {
    match f.view() {
        View::Binder(..) => true,
        View::Unary(_, _, a) => ends_open(a),
        _ => false,
    }
}

fn write_formula<F: Shape>(f: &F, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    match f.view() {
        View::Leaf(s) => out.write_str(&s),
        View::Unary(op, spaced, a) => {
            out.write_str(op)?;
            if spaced {
                out.write_str(" ")?;
            }
            write_operand(a, is_binary(a), out)
        }
        View::Binary(op, a, b) => {
            write_operand(a, is_binary(a) || ends_open(a), out)?;
            write!(out, " {op} ")?;
            write_operand(b, is_binary(b), out)
        }
        View::Binder(head, a) => {
            write!(out, "{head}. ")?;
            write_operand(a, is_binary(a), out)
        }
    }
}

fn write_operand<F: Shape>(f: &F, parens: bool, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    if parens {
        out.write_str("(")?;
        write_formula(f, out)?;
        out.write_str(")")
    } else {
        write_formula(f, out)
    }
}

fn app(name: &str, args: &[String]) -> String {
    format!("{name}({})", args.join(","))
}

impl Shape for ModalFormula {
    fn view(&self) -> View<'_, Self> {
        use ModalFormula::*;
        match self {
            True => View::Leaf("true".into()),
            False => View::Leaf("false".into()),
            Letter(s) | FixVar(s) => View::Leaf(s.clone()),
            Not(a) => View::Unary("~", false, a),
            Diamond(a) => View::Unary("<>", false, a),
            Box(a) => View::Unary("[]", false, a),
            And(a, b) => View::Binary("&", a, b),
            Or(a, b) => View::Binary("|", a, b),
            Implies(a, b) => View::Binary("->", a, b),
            Mu(x, a) => View::Binder(format!("mu {x}"), a),
            Nu(x, a) => View::Binder(format!("nu {x}"), a),
        }
    }
}

impl Shape for FoFormula {
    fn view(&self) -> View<'_, Self> {
        use FoFormula::*;
        match self {
            True => View::Leaf("true".into()),
            False => View::Leaf("false".into()),
            Pred(p, args) => View::Leaf(app(p, args)),
            Eq(x, y) => View::Leaf(format!("{x} = {y}")),
            Not(a) => View::Unary("~", false, a),
            Ext(a) => View::Unary("ext", true, a),
            And(a, b) => View::Binary("&", a, b),
            Or(a, b) => View::Binary("|", a, b),
            Implies(a, b) => View::Binary("->", a, b),
            Exists(x, a) => View::Binder(format!("exists {x}"), a),
            Forall(x, a) => View::Binder(format!("forall {x}"), a),
            PolyExists(xs, a) => View::Binder(format!("exists ({})", xs.join(",")), a),
        }
    }
}

impl Shape for MsoFormula {
    fn view(&self) -> View<'_, Self> {
        use MsoFormula::*;
        match self {
            True => View::Leaf("true".into()),
            False => View::Leaf("false".into()),
            Pred(p, args) => View::Leaf(app(p, args)),
            Eq(x, y) => View::Leaf(format!("{x} = {y}")),
            SetAtom(s, x) => View::Leaf(format!("{s}({x})")),
            Not(a) => View::Unary("~", false, a),
            And(a, b) => View::Binary("&", a, b),
            Or(a, b) => View::Binary("|", a, b),
            Implies(a, b) => View::Binary("->", a, b),
            Exists(x, a) => View::Binder(format!("exists {x}"), a),
            Forall(x, a) => View::Binder(format!("forall {x}"), a),
            ExistsSet(x, a) => View::Binder(format!("exists2 {x}"), a),
            ForallSet(x, a) => View::Binder(format!("forall2 {x}"), a),
        }
    }
}

impl Shape for TwoSortedFormula {
    fn view(&self) -> View<'_, Self> {
        use TwoSortedFormula::*;
        let q = |kw: &str, sort: &Sort, x: &str| match sort {
            Sort::Object => format!("{kw} {x}"),
            Sort::Predicate => format!("{kw}P {x}"),
        };
        match self {
            True => View::Leaf("true".into()),
            False => View::Leaf("false".into()),
            Pred(p, args) => View::Leaf(app(p, args)),
            Eq(_, x, y) => View::Leaf(format!("{x} = {y}")),
            Member(x, p) => View::Leaf(format!("E({x},{p})")),
            Not(a) => View::Unary("~", false, a),
            And(a, b) => View::Binary("&", a, b),
            Or(a, b) => View::Binary("|", a, b),
            Implies(a, b) => View::Binary("->", a, b),
            Exists(s, x, a) => View::Binder(q("exists", s, x), a),
            Forall(s, x, a) => View::Binder(q("forall", s, x), a),
        }
    }
}

macro_rules! display_via_shape {
    ($($ty:ty),*) => {$(
        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write_formula(self, f)
            }
        }
    )*};
}

display_via_shape!(ModalFormula, FoFormula, MsoFormula, TwoSortedFormula);

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Modal(x) => x.fmt(f),
            Formula::Fol(x) => x.fmt(f),
            Formula::Mso(x) => x.fmt(f),
            Formula::TwoSorted(x) => x.fmt(f),
        }
    }
}

/// Concrete syntax of any formula.
pub fn render(formula: &Formula) -> String {
    formula.to_string()
}
