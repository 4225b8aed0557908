use std::fmt::Write;

use super::kb;
use super::lexer::{Cursor, Tok};
use super::ParseError;
use crate::el::Base;
use crate::name::Name;
use crate::theory::{
    Action, ActionDecl, Atom, BodyLit, DomainDescription, FrameStatus, Formula, Head, Literal,
    Pred, Program, RepairChoice, Rule, Scope, Term,
};

const KEYWORDS: &[&str] = &[
    "not", "next", "top", "bot", "true", "false", "and", "or", "until", "always", "eventually",
    "any", "some",
];

/// A fluent or action name, lowercased.
fn ident(c: &mut Cursor, what: &str) -> Result<Name, ParseError> {
    let raw = c.raw_ident(what)?;
    let lower = raw.to_lowercase();
    if KEYWORDS.contains(&lower.as_str()) {
        c.pos -= 1;
        return Err(c.unexpected(what));
    }
    Ok(Name::new(lower))
}

/// Uppercase-initial identifiers are variables; everything else is a
/// constant.
fn term(c: &mut Cursor) -> Result<Term, ParseError> {
    let raw = c.raw_ident("a term")?;
    if raw.starts_with(|ch: char| ch.is_uppercase()) {
        Ok(Term::Var(Name::new(raw)))
    } else {
        Ok(Term::Const(Name::new(raw.to_lowercase())))
    }
}

fn args(c: &mut Cursor) -> Result<Vec<Term>, ParseError> {
    let mut out = Vec::new();
    if c.eat(&Tok::LParen) {
        loop {
            out.push(term(c)?);
            if !c.eat(&Tok::Comma) {
                break;
            }
        }
        c.expect(&Tok::RParen)?;
    }
    Ok(out)
}

fn unary_arg(c: &mut Cursor) -> Result<Vec<Term>, ParseError> {
    c.expect(&Tok::LParen)?;
    let t = term(c)?;
    c.expect(&Tok::RParen)?;
    Ok(vec![t])
}

fn base(c: &mut Cursor) -> Result<Base, ParseError> {
    if c.eat_keyword("top") {
        return Ok(Base::Top);
    }
    if c.eat(&Tok::LBrace) {
        let a = kb::name(c, "an individual name")?;
        c.expect(&Tok::RBrace)?;
        return Ok(Base::Nominal(a));
    }
    Ok(Base::Name(kb::name(c, "a base concept")?))
}

fn atom(c: &mut Cursor) -> Result<Atom<Term>, ParseError> {
    if c.eat_keyword("top") {
        return Ok(Atom::new(Pred::Top, unary_arg(c)?));
    }
    if c.eat_keyword("bot") {
        return Ok(Atom::new(Pred::Bot, unary_arg(c)?));
    }
    if c.eat(&Tok::LBrace) {
        let a = kb::name(c, "an individual name")?;
        c.expect(&Tok::RBrace)?;
        return Ok(Atom::new(Pred::Nominal(a), unary_arg(c)?));
    }
    if c.eat(&Tok::LParen) {
        let r = kb::name(c, "a role name")?;
        c.expect_keyword("some")?;
        let b = base(c)?;
        c.expect(&Tok::RParen)?;
        return Ok(Atom::new(Pred::Exists(r, b), unary_arg(c)?));
    }
    let p = ident(c, "a fluent")?;
    Ok(Atom::new(Pred::Named(p), args(c)?))
}

fn literal(c: &mut Cursor) -> Result<Literal<Term>, ParseError> {
    let negated = c.eat(&Tok::Minus);
    Ok(Literal {
        atom: atom(c)?,
        negated,
    })
}

fn action(c: &mut Cursor) -> Result<Action<Term>, ParseError> {
    if c.eat(&Tok::LParen) {
        let l = literal(c)?;
        c.expect(&Tok::RParen)?;
        c.expect(&Tok::Question)?;
        return Ok(Action::Test(l));
    }
    let name = ident(c, "an action")?;
    Ok(Action::Named {
        name,
        args: args(c)?,
    })
}

fn bracketed_action(c: &mut Cursor) -> Result<Action<Term>, ParseError> {
    c.expect(&Tok::LBracket)?;
    let a = action(c)?;
    c.expect(&Tok::RBracket)?;
    Ok(a)
}

fn body_lit(c: &mut Cursor) -> Result<BodyLit<Term>, ParseError> {
    if c.peek() == Some(&Tok::LBracket) {
        let a = bracketed_action(c)?;
        return Ok(BodyLit::After(a, literal(c)?));
    }
    if c.eat_keyword("next") {
        return Ok(BodyLit::Next(literal(c)?));
    }
    Ok(BodyLit::Simple(literal(c)?))
}

type Body = (Vec<BodyLit<Term>>, Vec<BodyLit<Term>>);

/// `['<-' lit (',' lit)*] '.'`
fn body(c: &mut Cursor) -> Result<Body, ParseError> {
    let (mut pos, mut neg) = (Vec::new(), Vec::new());
    if c.eat(&Tok::Arrow) && c.peek() != Some(&Tok::Dot) {
        loop {
            if c.eat_keyword("not") {
                neg.push(body_lit(c)?);
            } else {
                pos.push(body_lit(c)?);
            }
            if !c.eat(&Tok::Comma) {
                break;
            }
        }
    }
    c.expect(&Tok::Dot)?;
    Ok((pos, neg))
}

fn rule(head: Head<Term>, (pos, neg): Body, scope: Scope) -> Rule<Term> {
    Rule::new(head, pos, neg, scope)
}

fn ground(c: &Cursor, t: &Term) -> Result<Name, ParseError> {
    match t {
        Term::Const(n) => Ok(n.clone()),
        Term::Var(v) => Err(c.error(format!("constraints must be ground, found variable {v}"))),
    }
}

fn ground_literal(c: &mut Cursor) -> Result<Literal<Name>, ParseError> {
    let l = literal(c)?;
    let mut err = None;
    let g = l.map(&mut |t| {
        ground(c, t).unwrap_or_else(|e| {
            err.get_or_insert(e);
            Name::new("")
        })
    });
    err.map_or(Ok(g), Err)
}

/// `program := seq ('+' seq)*`
fn program(c: &mut Cursor) -> Result<Program, ParseError> {
    let mut left = seq(c)?;
    while c.eat(&Tok::Plus) {
        left = Program::choice(left, seq(c)?);
    }
    Ok(left)
}

fn seq(c: &mut Cursor) -> Result<Program, ParseError> {
    let mut left = starred(c)?;
    while c.eat(&Tok::Semi) {
        left = Program::seq(left, starred(c)?);
    }
    Ok(left)
}

fn starred(c: &mut Cursor) -> Result<Program, ParseError> {
    let mut p = program_atom(c)?;
    while c.eat(&Tok::Star) {
        p = Program::star(p);
    }
    Ok(p)
}

fn program_atom(c: &mut Cursor) -> Result<Program, ParseError> {
    if c.eat_keyword("any") {
        return Ok(Program::Any);
    }
    if c.peek() == Some(&Tok::LParen) {
        // Either a test `(lit)?` or a parenthesized program.
        let save = c.pos;
        c.pos += 1;
        if let Ok(l) = ground_literal(c) {
            if c.eat(&Tok::RParen) && c.eat(&Tok::Question) {
                return Ok(Program::Atomic(Action::Test(l)));
            }
        }
        c.pos = save + 1;
        let p = program(c)?;
        c.expect(&Tok::RParen)?;
        return Ok(p);
    }
    let name = ident(c, "an action")?;
    let mut gargs = Vec::new();
    for t in args(c)? {
        gargs.push(ground(c, &t)?);
    }
    Ok(Program::Atomic(Action::Named { name, args: gargs }))
}

/// `formula := and ('or' and)*`
fn formula(c: &mut Cursor) -> Result<Formula, ParseError> {
    let mut left = conjunction(c)?;
    while c.eat_keyword("or") {
        left = Formula::or(left, conjunction(c)?);
    }
    Ok(left)
}

fn conjunction(c: &mut Cursor) -> Result<Formula, ParseError> {
    let mut left = until(c)?;
    while c.eat_keyword("and") {
        left = Formula::and(left, until(c)?);
    }
    Ok(left)
}

fn until(c: &mut Cursor) -> Result<Formula, ParseError> {
    let left = unary(c)?;
    if c.eat_keyword("until") {
        let p = if c.eat(&Tok::Lt) {
            let p = program(c)?;
            c.expect(&Tok::Gt)?;
            p
        } else {
            Program::star(Program::Any)
        };
        return Ok(Formula::until(left, p, unary(c)?));
    }
    Ok(left)
}

fn unary(c: &mut Cursor) -> Result<Formula, ParseError> {
    if c.eat_keyword("not") {
        return Ok(Formula::not(unary(c)?));
    }
    if c.eat_keyword("always") {
        return Ok(Formula::Always(Box::new(unary(c)?)));
    }
    if c.eat_keyword("eventually") {
        return Ok(Formula::Eventually(Box::new(unary(c)?)));
    }
    if c.eat_keyword("next") {
        return Ok(Formula::Next(Box::new(unary(c)?)));
    }
    if c.eat(&Tok::Lt) {
        let p = program(c)?;
        c.expect(&Tok::Gt)?;
        return Ok(Formula::Diamond(p, Box::new(unary(c)?)));
    }
    if c.eat(&Tok::LBracket) {
        let p = program(c)?;
        c.expect(&Tok::RBracket)?;
        return Ok(Formula::Box(p, Box::new(unary(c)?)));
    }
    if c.eat_keyword("true") {
        return Ok(Formula::True);
    }
    if c.eat_keyword("false") {
        return Ok(Formula::False);
    }
    // `(r some b)(x)` is a literal; any other parenthesis groups a formula.
    if c.peek() == Some(&Tok::LParen) && !c.is_keyword_at(2, "some") {
        c.pos += 1;
        let f = formula(c)?;
        c.expect(&Tok::RParen)?;
        return Ok(f);
    }
    Ok(Formula::Lit(ground_literal(c)?))
}

fn frame_pred(c: &mut Cursor) -> Result<Pred, ParseError> {
    if c.eat_keyword("top") {
        return Ok(Pred::Top);
    }
    if c.eat_keyword("bot") {
        return Ok(Pred::Bot);
    }
    if c.eat(&Tok::LBrace) {
        let a = kb::name(c, "an individual name")?;
        c.expect(&Tok::RBrace)?;
        return Ok(Pred::Nominal(a));
    }
    Ok(Pred::Named(ident(c, "a fluent name")?))
}

fn statement(c: &mut Cursor, d: &mut DomainDescription) -> Result<(), ParseError> {
    if c.eat_keyword("action") {
        let name = ident(c, "an action name")?;
        let mut params = Vec::new();
        for t in args(c)? {
            match t {
                Term::Var(v) => params.push(v),
                Term::Const(k) => {
                    return Err(c.error(format!("action parameters must be variables, found `{k}`")))
                }
            }
        }
        c.expect(&Tok::Dot)?;
        if d.actions.iter().any(|a| a.name == name) {
            return Err(c.error(format!("action `{name}` declared twice")));
        }
        d.actions.push(ActionDecl { name, params });
        return Ok(());
    }
    for (kw, status) in [("frame", FrameStatus::Frame), ("nonframe", FrameStatus::NonFrame)] {
        if c.eat_keyword(kw) {
            let p = frame_pred(c)?;
            c.expect(&Tok::Dot)?;
            if let Some(old) = d.frames.insert(p.clone(), status) {
                if old != status {
                    let shown = Atom::<Term>::new(p, vec![]).to_string();
                    return Err(c.error(format!("`{shown}` declared both frame and nonframe")));
                }
            }
            return Ok(());
        }
    }
    if c.eat_keyword("law") {
        let a = bracketed_action(c)?;
        let l = literal(c)?;
        d.laws.push(rule(Head::After(a, l), body(c)?, Scope::Always));
        return Ok(());
    }
    if c.eat_keyword("caused") {
        let head = if c.eat_keyword("false") {
            Head::Bot
        } else if c.eat_keyword("next") {
            Head::Next(literal(c)?)
        } else {
            Head::Lit(literal(c)?)
        };
        d.laws.push(rule(head, body(c)?, Scope::Always));
        return Ok(());
    }
    if c.eat_keyword("nonexec") {
        let a = bracketed_action(c)?;
        d.laws.push(rule(Head::AfterBot(a), body(c)?, Scope::Always));
        return Ok(());
    }
    if c.eat_keyword("init") {
        let head = if c.eat_keyword("false") {
            Head::Bot
        } else {
            Head::Lit(literal(c)?)
        };
        d.laws.push(rule(head, body(c)?, Scope::Initial));
        return Ok(());
    }
    if c.eat_keyword("constraint") {
        let f = formula(c)?;
        c.expect(&Tok::Dot)?;
        d.constraints.push(f);
        return Ok(());
    }
    if c.eat_keyword("repair") {
        let raw = c.raw_ident("an axiom index")?;
        let idx: usize = raw
            .parse()
            .map_err(|_| c.error(format!("expected an axiom index, found `{raw}`")))?;
        let kw = c.raw_ident("a repair choice")?;
        let choice = RepairChoice::from_keyword(&kw)
            .ok_or_else(|| c.error(format!("unknown repair choice `{kw}`")))?;
        c.expect(&Tok::Dot)?;
        d.repairs.insert(idx, choice);
        return Ok(());
    }
    Err(c.unexpected("a statement"))
}

/// Parses the `.adl` format. The knowledge base of the result is empty.
pub fn parse_adl(text: &str) -> Result<DomainDescription, ParseError> {
    let mut c = Cursor::new(text)?;
    let mut d = DomainDescription::default();
    while !c.at_end() {
        statement(&mut c, &mut d)?;
    }
    Ok(d)
}

/// Parses a comma-separated list of ground actions, such as
/// `load, shoot` or `(in_sight)?, assign(cs1,john)`.
pub fn parse_ground_actions(text: &str) -> Result<Vec<Action<Name>>, ParseError> {
    let mut c = Cursor::new(text)?;
    let mut out = Vec::new();
    while !c.at_end() {
        let a = action(&mut c)?;
        let mut err = None;
        let g = a.map(&mut |t| {
            ground(&c, t).unwrap_or_else(|e| {
                err.get_or_insert(e);
                Name::new("")
            })
        });
        if let Some(e) = err {
            return Err(e);
        }
        out.push(g);
        if !c.at_end() {
            c.expect(&Tok::Comma)?;
        }
    }
    Ok(out)
}

/// Parses one ground literal such as `-alive` or `teaches(john,cs1)`.
pub fn parse_ground_literal(text: &str) -> Result<Literal<Name>, ParseError> {
    let mut c = Cursor::new(text)?;
    let l = ground_literal(&mut c)?;
    if !c.at_end() {
        return Err(c.unexpected("the end of the literal"));
    }
    Ok(l)
}

/// Prints the non-ontology part of a description so that
/// `parse_adl(print_adl(d))` returns it unchanged.
pub fn print_adl(d: &DomainDescription) -> String {
    let mut out = String::new();
    for a in &d.actions {
        if a.params.is_empty() {
            let _ = writeln!(out, "action {}.", a.name);
        } else {
            let params: Vec<&str> = a.params.iter().map(Name::as_str).collect();
            let _ = writeln!(out, "action {}({}).", a.name, params.join(","));
        }
    }
    for (p, status) in &d.frames {
        let kw = match status {
            FrameStatus::Frame => "frame",
            FrameStatus::NonFrame => "nonframe",
        };
        let _ = writeln!(out, "{kw} {}.", Atom::<Term>::new(p.clone(), vec![]));
    }
    for r in &d.laws {
        let _ = writeln!(out, "{r}");
    }
    for f in &d.constraints {
        let _ = writeln!(out, "constraint {f}.");
    }
    for (i, choice) in &d.repairs {
        let _ = writeln!(out, "repair {i} {choice}.");
    }
    out
}
