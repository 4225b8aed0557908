use std::fmt;

use super::{GroundAction, GroundLiteral};

/// A regular program over actions.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Program {
    Atomic(GroundAction),
    /// Any single action; used to express `next`, `eventually` and `always`
    /// as `until` formulas.
    Any,
    Seq(Box<Program>, Box<Program>),
    Choice(Box<Program>, Box<Program>),
    Star(Box<Program>),
}

impl Program {
    pub fn seq(a: Program, b: Program) -> Self {
        Program::Seq(Box::new(a), Box::new(b))
    }

    pub fn choice(a: Program, b: Program) -> Self {
        Program::Choice(Box::new(a), Box::new(b))
    }

    pub fn star(a: Program) -> Self {
        Program::Star(Box::new(a))
    }

    pub fn actions(&self, out: &mut Vec<GroundAction>) {
        match self {
            Program::Atomic(a) => out.push(a.clone()),
            Program::Any => {}
            Program::Seq(a, b) | Program::Choice(a, b) => {
                a.actions(out);
                b.actions(out);
            }
            Program::Star(a) => a.actions(out),
        }
    }
}

/// A ground DLTL constraint over finite traces.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    True,
    False,
    Lit(GroundLiteral),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Until(Box<Formula>, Program, Box<Formula>),
    Diamond(Program, Box<Formula>),
    Box(Program, Box<Formula>),
    Next(Box<Formula>),
    Eventually(Box<Formula>),
    Always(Box<Formula>),
}

impl Formula {
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn until(a: Formula, p: Program, b: Formula) -> Self {
        Formula::Until(Box::new(a), p, Box::new(b))
    }

    /// Rewrites every derived modality into `until`, negation and the
    /// boolean connectives:
    /// `⟨π⟩α ≡ ⊤ U^π α`, `[π]α ≡ ¬⟨π⟩¬α`, `◯α ≡ ⟨any⟩α`,
    /// `◇α ≡ ⊤ U^{any*} α`, `□α ≡ ¬◇¬α`.
    pub fn expand(&self) -> Formula {
        use Formula as F;
        match self {
            F::True | F::False | F::Lit(_) => self.clone(),
            F::Not(a) => F::not(a.expand()),
            F::And(a, b) => F::and(a.expand(), b.expand()),
            F::Or(a, b) => F::or(a.expand(), b.expand()),
            F::Until(a, p, b) => F::until(a.expand(), p.clone(), b.expand()),
            F::Diamond(p, a) => F::until(F::True, p.clone(), a.expand()),
            F::Box(p, a) => F::not(F::until(F::True, p.clone(), F::not(a.expand()))),
            F::Next(a) => F::until(F::True, Program::Any, a.expand()),
            F::Eventually(a) => F::until(F::True, Program::star(Program::Any), a.expand()),
            F::Always(a) => F::not(F::until(
                F::True,
                Program::star(Program::Any),
                F::not(a.expand()),
            )),
        }
    }

    pub fn actions(&self, out: &mut Vec<GroundAction>) {
        use Formula as F;
        match self {
            F::True | F::False | F::Lit(_) => {}
            F::Not(a) | F::Next(a) | F::Eventually(a) | F::Always(a) => a.actions(out),
            F::And(a, b) | F::Or(a, b) => {
                a.actions(out);
                b.actions(out);
            }
            F::Until(a, p, b) => {
                a.actions(out);
                p.actions(out);
                b.actions(out);
            }
            F::Diamond(p, a) | F::Box(p, a) => {
                p.actions(out);
                a.actions(out);
            }
        }
    }

    pub fn literals(&self, out: &mut Vec<GroundLiteral>) {
        use Formula as F;
        match self {
            F::True | F::False => {}
            F::Lit(l) => out.push(l.clone()),
            F::Not(a) | F::Next(a) | F::Eventually(a) | F::Always(a) => a.literals(out),
            F::And(a, b) | F::Or(a, b) | F::Until(a, _, b) => {
                a.literals(out);
                b.literals(out);
            }
            F::Diamond(_, a) | F::Box(_, a) => a.literals(out),
        }
    }
}

// Printing: `+` binds loosest, then `;`, then postfix `*`. Binary formula
// operands are parenthesized unless atomic, so printing is unambiguous
// without precedence bookkeeping.

impl Program {
    fn prec(&self) -> u8 {
        match self {
            Program::Choice(..) => 0,
            Program::Seq(..) => 1,
            Program::Star(_) => 2,
            _ => 3,
        }
    }

    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.prec() < min {
            f.write_str("(")?;
            self.fmt_at(f, 0)?;
            return f.write_str(")");
        }
        match self {
            Program::Atomic(a) => write!(f, "{a}"),
            Program::Any => f.write_str("any"),
            Program::Seq(a, b) => {
                a.fmt_at(f, 1)?;
                f.write_str("; ")?;
                b.fmt_at(f, 2)
            }
            Program::Choice(a, b) => {
                a.fmt_at(f, 0)?;
                f.write_str(" + ")?;
                b.fmt_at(f, 1)
            }
            Program::Star(a) => {
                a.fmt_at(f, 3)?;
                f.write_str("*")
            }
        }
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, 0)
    }
}

impl Formula {
    fn is_atomic(&self) -> bool {
        matches!(self, Formula::True | Formula::False | Formula::Lit(_))
    }

    fn fmt_operand(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_atomic() {
            write!(f, "{self}")
        } else {
            write!(f, "({self})")
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Formula as F;
        match self {
            F::True => f.write_str("true"),
            F::False => f.write_str("false"),
            F::Lit(l) => write!(f, "{l}"),
            F::Not(a) => {
                f.write_str("not ")?;
                a.fmt_operand(f)
            }
            F::And(a, b) => {
                a.fmt_operand(f)?;
                f.write_str(" and ")?;
                b.fmt_operand(f)
            }
            F::Or(a, b) => {
                a.fmt_operand(f)?;
                f.write_str(" or ")?;
                b.fmt_operand(f)
            }
            F::Until(a, p, b) => {
                a.fmt_operand(f)?;
                write!(f, " until<{p}> ")?;
                b.fmt_operand(f)
            }
            F::Diamond(p, a) => {
                write!(f, "<{p}> ")?;
                a.fmt_operand(f)
            }
            F::Box(p, a) => {
                write!(f, "[{p}] ")?;
                a.fmt_operand(f)
            }
            F::Next(a) => {
                f.write_str("next ")?;
                a.fmt_operand(f)
            }
            F::Eventually(a) => {
                f.write_str("eventually ")?;
                a.fmt_operand(f)
            }
            F::Always(a) => {
                f.write_str("always ")?;
                a.fmt_operand(f)
            }
        }
    }
}
