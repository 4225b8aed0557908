use std::collections::BTreeSet;
use std::fmt;

use crate::name::Name;

/// An EL⊥ concept. There is no complement, disjunction or universal
/// restriction.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Concept {
    Top,
    Bot,
    Name(Name),
    Nominal(Name),
    And(Box<Concept>, Box<Concept>),
    Exists(Name, Box<Concept>),
}

impl Concept {
    pub fn name(n: impl Into<Name>) -> Self {
        Concept::Name(n.into())
    }

    pub fn nominal(n: impl Into<Name>) -> Self {
        Concept::Nominal(n.into())
    }

    pub fn and(l: Concept, r: Concept) -> Self {
        Concept::And(Box::new(l), Box::new(r))
    }

    pub fn exists(role: impl Into<Name>, filler: Concept) -> Self {
        Concept::Exists(role.into(), Box::new(filler))
    }

    /// `⊤`, a concept name, or a nominal.
    pub fn as_base(&self) -> Option<Base> {
        match self {
            Concept::Top => Some(Base::Top),
            Concept::Name(n) => Some(Base::Name(n.clone())),
            Concept::Nominal(a) => Some(Base::Nominal(a.clone())),
            _ => None,
        }
    }

    pub fn is_complex(&self) -> bool {
        matches!(self, Concept::And(..) | Concept::Exists(..))
    }

    /// True when the concept denotes the empty set in every interpretation
    /// for purely syntactic reasons (`⊥`, a conjunct that is, or an
    /// existential whose filler is).
    pub fn is_syntactically_bottom(&self) -> bool {
        match self {
            Concept::Bot => true,
            Concept::And(l, r) => l.is_syntactically_bottom() || r.is_syntactically_bottom(),
            Concept::Exists(_, c) => c.is_syntactically_bottom(),
            _ => false,
        }
    }

    /// Number of subconcept occurrences, counting the concept itself.
    pub fn size(&self) -> usize {
        match self {
            Concept::And(l, r) => 1 + l.size() + r.size(),
            Concept::Exists(_, c) => 1 + c.size(),
            _ => 1,
        }
    }

    pub(crate) fn collect_names(&self, sig: &mut Signature) {
        match self {
            Concept::Top | Concept::Bot => {}
            Concept::Name(n) => {
                sig.concepts.insert(n.clone());
            }
            Concept::Nominal(a) => {
                sig.individuals.insert(a.clone());
            }
            Concept::And(l, r) => {
                l.collect_names(sig);
                r.collect_names(sig);
            }
            Concept::Exists(r, c) => {
                sig.roles.insert(r.clone());
                c.collect_names(sig);
            }
        }
    }
}

/// A base concept: `⊤`, a concept name or a nominal `{a}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Base {
    Top,
    Name(Name),
    Nominal(Name),
}

impl Base {
    pub fn to_concept(&self) -> Concept {
        match self {
            Base::Top => Concept::Top,
            Base::Name(n) => Concept::Name(n.clone()),
            Base::Nominal(a) => Concept::Nominal(a.clone()),
        }
    }
}

impl From<Base> for Concept {
    fn from(b: Base) -> Self {
        b.to_concept()
    }
}

/// A concept inclusion `lhs ⊑ rhs`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Axiom {
    pub lhs: Concept,
    pub rhs: Concept,
}

impl Axiom {
    pub fn new(lhs: Concept, rhs: Concept) -> Self {
        Axiom { lhs, rhs }
    }

    pub fn size(&self) -> usize {
        self.lhs.size() + self.rhs.size()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Assertion {
    Concept(Concept, Name),
    Role(Name, Name, Name),
}

/// A knowledge base `(T, A)`.
///
/// Declared names (from `concept`/`role`/`individual` declarations) are part
/// of the signature even when no axiom or assertion mentions them.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KnowledgeBase {
    pub tbox: Vec<Axiom>,
    pub abox: Vec<Assertion>,
    pub declared: Signature,
}

/// The names occurring in a knowledge base: `N_C,K`, `N_R,K`, `N_I,K`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    pub concepts: BTreeSet<Name>,
    pub roles: BTreeSet<Name>,
    pub individuals: BTreeSet<Name>,
}

impl Signature {
    pub fn is_empty(&self) -> bool {
        self.concepts.is_empty() && self.roles.is_empty() && self.individuals.is_empty()
    }

    pub fn extend(&mut self, other: &Signature) {
        self.concepts.extend(other.concepts.iter().cloned());
        self.roles.extend(other.roles.iter().cloned());
        self.individuals.extend(other.individuals.iter().cloned());
    }

    /// `BC_K`: `⊤`, every concept name and every nominal.
    pub fn base_concepts(&self) -> BTreeSet<Base> {
        let mut out = BTreeSet::new();
        out.insert(Base::Top);
        out.extend(self.concepts.iter().cloned().map(Base::Name));
        out.extend(self.individuals.iter().cloned().map(Base::Nominal));
        out
    }
}

impl KnowledgeBase {
    pub fn new(tbox: Vec<Axiom>, abox: Vec<Assertion>) -> Self {
        KnowledgeBase {
            tbox,
            abox,
            declared: Signature::default(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.tbox.is_empty() && self.abox.is_empty() && self.declared.is_empty()
    }

    pub fn signature(&self) -> Signature {
        let mut sig = self.declared.clone();
        for ax in &self.tbox {
            ax.lhs.collect_names(&mut sig);
            ax.rhs.collect_names(&mut sig);
        }
        for a in &self.abox {
            match a {
                Assertion::Concept(c, ind) => {
                    c.collect_names(&mut sig);
                    sig.individuals.insert(ind.clone());
                }
                Assertion::Role(r, x, y) => {
                    sig.roles.insert(r.clone());
                    sig.individuals.insert(x.clone());
                    sig.individuals.insert(y.clone());
                }
            }
        }
        sig
    }

    pub fn base_concepts(&self) -> BTreeSet<Base> {
        self.signature().base_concepts()
    }
}

/// Signature of a TBox alone.
pub fn tbox_signature(tbox: &[Axiom]) -> Signature {
    let mut sig = Signature::default();
    for ax in tbox {
        ax.lhs.collect_names(&mut sig);
        ax.rhs.collect_names(&mut sig);
    }
    sig
}

// Printing follows the .kb surface syntax: `and` is left-associative and
// binds looser than `some`.

impl fmt::Display for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Concept::Top => f.write_str("top"),
            Concept::Bot => f.write_str("bot"),
            Concept::Name(n) => write!(f, "{n}"),
            Concept::Nominal(a) => write!(f, "{{{a}}}"),
            Concept::And(l, r) => {
                write!(f, "{l} and ")?;
                if matches!(**r, Concept::And(..)) {
                    write!(f, "({r})")
                } else {
                    write!(f, "{r}")
                }
            }
            Concept::Exists(r, c) => {
                if matches!(**c, Concept::And(..)) {
                    write!(f, "{r} some ({c})")
                } else {
                    write!(f, "{r} some {c}")
                }
            }
        }
    }
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_concept().fmt(f)
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // The left side is parenthesized when complex so that the output is
        // readable; the grammar would accept it either way.
        if self.lhs.is_complex() {
            write!(f, "({}) sub {}", self.lhs, self.rhs)
        } else {
            write!(f, "{} sub {}", self.lhs, self.rhs)
        }
    }
}

impl fmt::Display for Assertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Assertion::Concept(c, a) if c.is_complex() => write!(f, "({c})({a})"),
            Assertion::Concept(c, a) => write!(f, "{c}({a})"),
            Assertion::Role(r, a, b) => write!(f, "{r}({a},{b})"),
        }
    }
}
