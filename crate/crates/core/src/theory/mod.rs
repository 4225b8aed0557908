//! Temporal domain descriptions: fluent literals, laws, frame declarations
//! and constraints, plus grounding and validation.

mod check;
mod formula;
mod ground;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::el::{Base, KnowledgeBase};
use crate::name::Name;

pub use check::{
    check_well_defined, classify_rule, fluent_arities, validate_rule, RuleError, RuleKind, Violation,
    WellDefinedReport,
};
pub use formula::{Formula, Program};
pub use ground::{ground_program, ground_rule, universe, GroundError};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Const(Name),
    Var(Name),
}

impl Term {
    pub fn as_var(&self) -> Option<&Name> {
        match self {
            Term::Var(v) => Some(v),
            Term::Const(_) => None,
        }
    }
}

/// The predicate of a fluent atom.
///
/// Concept names, role names and plain fluents share the `Named` namespace.
/// `Exists` is the assertion predicate `∃r.B`; `ExistsAux` is the derived
/// auxiliary `exists_r_B`, which only ever occurs positively.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pred {
    Named(Name),
    Nominal(Name),
    Top,
    Bot,
    Exists(Name, Base),
    ExistsAux(Name, Base),
}

impl Pred {
    /// Simple fluents are the ones subject to frame, non-frame and
    /// completion laws.
    pub fn is_simple(&self) -> bool {
        !matches!(self, Pred::Exists(..) | Pred::ExistsAux(..))
    }

    pub fn from_base(b: &Base) -> Pred {
        match b {
            Base::Top => Pred::Top,
            Base::Name(n) => Pred::Named(n.clone()),
            Base::Nominal(a) => Pred::Nominal(a.clone()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom<T> {
    pub pred: Pred,
    pub args: Vec<T>,
}

impl<T> Atom<T> {
    pub fn new(pred: Pred, args: Vec<T>) -> Self {
        Atom { pred, args }
    }

    pub fn map<U>(&self, f: &mut impl FnMut(&T) -> U) -> Atom<U> {
        Atom {
            pred: self.pred.clone(),
            args: self.args.iter().map(f).collect(),
        }
    }
}

/// A simple fluent literal; `negated` is explicit negation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal<T> {
    pub atom: Atom<T>,
    pub negated: bool,
}

impl<T: Clone> Literal<T> {
    pub fn pos(atom: Atom<T>) -> Self {
        Literal { atom, negated: false }
    }

    pub fn neg(atom: Atom<T>) -> Self {
        Literal { atom, negated: true }
    }

    pub fn complement(&self) -> Self {
        Literal {
            atom: self.atom.clone(),
            negated: !self.negated,
        }
    }

    pub fn map<U>(&self, f: &mut impl FnMut(&T) -> U) -> Literal<U> {
        Literal {
            atom: self.atom.map(f),
            negated: self.negated,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Action<T> {
    Named { name: Name, args: Vec<T> },
    /// `φ?`: executable exactly when `φ` holds, with no effects.
    Test(Literal<T>),
}

impl<T: Clone> Action<T> {
    pub fn named(name: impl Into<Name>, args: Vec<T>) -> Self {
        Action::Named {
            name: name.into(),
            args,
        }
    }

    pub fn map<U>(&self, f: &mut impl FnMut(&T) -> U) -> Action<U> {
        match self {
            Action::Named { name, args } => Action::Named {
                name: name.clone(),
                args: args.iter().map(f).collect(),
            },
            Action::Test(l) => Action::Test(l.map(f)),
        }
    }
}

/// A body element: a simple literal, `[a]l`, or `◯l`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BodyLit<T> {
    Simple(Literal<T>),
    After(Action<T>, Literal<T>),
    Next(Literal<T>),
}

impl<T: Clone> BodyLit<T> {
    pub fn is_temporal(&self) -> bool {
        !matches!(self, BodyLit::Simple(_))
    }

    pub fn map<U>(&self, f: &mut impl FnMut(&T) -> U) -> BodyLit<U> {
        match self {
            BodyLit::Simple(l) => BodyLit::Simple(l.map(f)),
            BodyLit::After(a, l) => BodyLit::After(a.map(f), l.map(f)),
            BodyLit::Next(l) => BodyLit::Next(l.map(f)),
        }
    }

    pub fn literal(&self) -> &Literal<T> {
        match self {
            BodyLit::Simple(l) | BodyLit::After(_, l) | BodyLit::Next(l) => l,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Head<T> {
    Bot,
    Lit(Literal<T>),
    After(Action<T>, Literal<T>),
    /// `[a]⊥`: a precondition law.
    AfterBot(Action<T>),
    Next(Literal<T>),
}

impl<T: Clone> Head<T> {
    pub fn map<U>(&self, f: &mut impl FnMut(&T) -> U) -> Head<U> {
        match self {
            Head::Bot => Head::Bot,
            Head::Lit(l) => Head::Lit(l.map(f)),
            Head::After(a, l) => Head::After(a.map(f), l.map(f)),
            Head::AfterBot(a) => Head::AfterBot(a.map(f)),
            Head::Next(l) => Head::Next(l.map(f)),
        }
    }

    pub fn is_temporal(&self) -> bool {
        matches!(self, Head::After(..) | Head::AfterBot(_) | Head::Next(_))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Scope {
    /// `□`-prefixed: applies in every state.
    Always,
    /// Applies to the initial state only.
    Initial,
}

/// `head ← pos, not neg`.
///
/// `sorts` optionally restricts a variable to an explicit set of constants;
/// sorted variables need not occur in the positive body.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rule<T> {
    pub head: Head<T>,
    pub pos: Vec<BodyLit<T>>,
    pub neg: Vec<BodyLit<T>>,
    pub scope: Scope,
    pub sorts: BTreeMap<Name, BTreeSet<Name>>,
}

impl<T: Clone> Rule<T> {
    pub fn new(head: Head<T>, pos: Vec<BodyLit<T>>, neg: Vec<BodyLit<T>>, scope: Scope) -> Self {
        Rule {
            head,
            pos,
            neg,
            scope,
            sorts: BTreeMap::new(),
        }
    }

    /// A `□`-scoped rule with only simple literals in its body.
    pub fn always(head: Head<T>, pos: Vec<Literal<T>>, neg: Vec<Literal<T>>) -> Self {
        Rule::new(
            head,
            pos.into_iter().map(BodyLit::Simple).collect(),
            neg.into_iter().map(BodyLit::Simple).collect(),
            Scope::Always,
        )
    }

    pub fn initial(head: Head<T>, pos: Vec<Literal<T>>, neg: Vec<Literal<T>>) -> Self {
        Rule::new(
            head,
            pos.into_iter().map(BodyLit::Simple).collect(),
            neg.into_iter().map(BodyLit::Simple).collect(),
            Scope::Initial,
        )
    }

    pub fn map<U>(&self, f: &mut impl FnMut(&T) -> U) -> Rule<U> {
        Rule {
            head: self.head.map(f),
            pos: self.pos.iter().map(|b| b.map(f)).collect(),
            neg: self.neg.iter().map(|b| b.map(f)).collect(),
            scope: self.scope,
            sorts: BTreeMap::new(),
        }
    }
}

pub type GroundAtom = Atom<Name>;
pub type GroundLiteral = Literal<Name>;
pub type GroundAction = Action<Name>;
pub type GroundRule = Rule<Name>;

/// A state: a set of ground literals.
pub type State = BTreeSet<GroundLiteral>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum FrameStatus {
    Frame,
    NonFrame,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionDecl {
    pub name: Name,
    pub params: Vec<Name>,
}

/// Per-axiom choice among the contrapositive repair laws.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum RepairChoice {
    DropA,
    DropB,
    DropRole,
    DropFiller,
    Both,
}

impl RepairChoice {
    pub fn keyword(self) -> &'static str {
        match self {
            RepairChoice::DropA => "dropA",
            RepairChoice::DropB => "dropB",
            RepairChoice::DropRole => "dropRole",
            RepairChoice::DropFiller => "dropFiller",
            RepairChoice::Both => "both",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Self> {
        Some(match s.to_ascii_lowercase().as_str() {
            "dropa" => RepairChoice::DropA,
            "dropb" => RepairChoice::DropB,
            "droprole" => RepairChoice::DropRole,
            "dropfiller" => RepairChoice::DropFiller,
            "both" => RepairChoice::Both,
            _ => return None,
        })
    }
}

impl fmt::Display for RepairChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// An extended action theory `(K, Π, C)` together with its declarations.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DomainDescription {
    pub kb: KnowledgeBase,
    pub actions: Vec<ActionDecl>,
    /// Declared frame status, keyed by `Pred::Named` or `Pred::Nominal`.
    pub frames: BTreeMap<Pred, FrameStatus>,
    pub laws: Vec<Rule<Term>>,
    pub constraints: Vec<Formula>,
    pub repairs: BTreeMap<usize, RepairChoice>,
}

// Display in .adl surface syntax.

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Const(c) | Term::Var(c) => write!(f, "{c}"),
        }
    }
}

fn write_args<T: fmt::Display>(f: &mut fmt::Formatter<'_>, args: &[T]) -> fmt::Result {
    f.write_str("(")?;
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{a}")?;
    }
    f.write_str(")")
}

impl<T: fmt::Display> fmt::Display for Atom<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.pred {
            Pred::Named(p) => write!(f, "{p}")?,
            Pred::Nominal(a) => write!(f, "{{{a}}}")?,
            Pred::Top => f.write_str("top")?,
            Pred::Bot => f.write_str("bot")?,
            Pred::Exists(r, b) => write!(f, "({r} some {b})")?,
            Pred::ExistsAux(r, b) => write!(f, "_exists({r} some {b})")?,
        }
        if self.args.is_empty() {
            return Ok(());
        }
        write_args(f, &self.args)
    }
}

impl<T: fmt::Display> fmt::Display for Literal<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            f.write_str("-")?;
        }
        write!(f, "{}", self.atom)
    }
}

impl<T: fmt::Display> fmt::Display for Action<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Action::Named { name, args } => {
                write!(f, "{name}")?;
                if args.is_empty() {
                    Ok(())
                } else {
                    write_args(f, args)
                }
            }
            Action::Test(l) => write!(f, "({l})?"),
        }
    }
}

impl<T: fmt::Display> fmt::Display for BodyLit<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BodyLit::Simple(l) => write!(f, "{l}"),
            BodyLit::After(a, l) => write!(f, "[{a}] {l}"),
            BodyLit::Next(l) => write!(f, "next {l}"),
        }
    }
}

impl<T: fmt::Display> fmt::Display for Rule<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.head, self.scope) {
            (Head::Bot, Scope::Initial) => f.write_str("init false")?,
            (Head::Lit(l), Scope::Initial) => write!(f, "init {l}")?,
            (Head::Bot, Scope::Always) => f.write_str("caused false")?,
            (Head::Lit(l), Scope::Always) => write!(f, "caused {l}")?,
            (Head::After(a, l), _) => write!(f, "law [{a}] {l}")?,
            (Head::AfterBot(a), _) => write!(f, "nonexec [{a}]")?,
            (Head::Next(l), _) => write!(f, "caused next {l}")?,
        }
        let body = self
            .pos
            .iter()
            .map(|b| b.to_string())
            .chain(self.neg.iter().map(|b| format!("not {b}")))
            .collect::<Vec<_>>();
        if !body.is_empty() {
            write!(f, " <- {}", body.join(", "))?;
        }
        f.write_str(".")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> Term {
        Term::Const(s.into())
    }

    fn v(s: &str) -> Term {
        Term::Var(s.into())
    }

    #[test]
    fn literal_display() {
        let l = Literal::neg(Atom::new(Pred::Named("teaches".into()), vec![c("john"), c("cs1")]));
        assert_eq!(l.to_string(), "-teaches(john,cs1)");
        let e = Literal::pos(Atom::new(
            Pred::Exists("teaches".into(), Base::Name("course".into())),
            vec![c("john")],
        ));
        assert_eq!(e.to_string(), "(teaches some course)(john)");
        let n = Literal::pos(Atom::new(Pred::Nominal("a".into()), vec![c("b")]));
        assert_eq!(n.to_string(), "{a}(b)");
        let p: Literal<Term> = Literal::pos(Atom::new(Pred::Named("alive".into()), vec![]));
        assert_eq!(p.to_string(), "alive");
    }

    #[test]
    fn rule_display() {
        let loaded = Literal::pos(Atom::new(Pred::Named("loaded".into()), vec![]));
        let alive = Literal::pos(Atom::new(Pred::Named("alive".into()), vec![]));
        let shoot: Action<Term> = Action::named("shoot", vec![]);
        let r = Rule::new(
            Head::After(shoot.clone(), alive.complement()),
            vec![BodyLit::Simple(loaded.clone())],
            vec![],
            Scope::Always,
        );
        assert_eq!(r.to_string(), "law [shoot] -alive <- loaded.");
        let pre = Rule::new(
            Head::AfterBot(Action::named("load", vec![])),
            vec![BodyLit::Simple(loaded.clone())],
            vec![],
            Scope::Always,
        );
        assert_eq!(pre.to_string(), "nonexec [load] <- loaded.");
        let init: Rule<Term> = Rule::initial(Head::Lit(alive), vec![], vec![]);
        assert_eq!(init.to_string(), "init alive.");
        let teach = Literal::pos(Atom::new(Pred::Named("teaches".into()), vec![v("X"), v("C")]));
        let dynamic = Rule::new(
            Head::Next(teach.clone()),
            vec![],
            vec![BodyLit::Next(teach.complement())],
            Scope::Always,
        );
        assert_eq!(dynamic.to_string(), "caused next teaches(X,C) <- not next -teaches(X,C).");
    }

    #[test]
    fn complement_is_involutive() {
        let l: GroundLiteral = Literal::pos(Atom::new(Pred::Top, vec!["a".into()]));
        assert_eq!(l.complement().complement(), l);
        assert!(l.complement().negated);
    }
}
