use std::fmt::Write;

use super::lexer::{Cursor, Tok};
use super::ParseError;
use crate::el::{Assertion, Axiom, Concept, KnowledgeBase};
use crate::name::Name;

const KEYWORDS: &[&str] = &["top", "bot", "and", "some", "sub"];

pub(crate) fn name(c: &mut Cursor, what: &str) -> Result<Name, ParseError> {
    let raw = c.raw_ident(what)?;
    let lower = raw.to_lowercase();
    if KEYWORDS.contains(&lower.as_str()) {
        c.pos -= 1;
        return Err(c.unexpected(what));
    }
    Ok(Name::new(lower))
}

/// `concept := exist ('and' exist)*`
pub(crate) fn concept(c: &mut Cursor) -> Result<Concept, ParseError> {
    let mut left = exist(c)?;
    while c.eat_keyword("and") {
        let right = exist(c)?;
        left = Concept::and(left, right);
    }
    Ok(left)
}

/// `exist := NAME 'some' exist | primary`
fn exist(c: &mut Cursor) -> Result<Concept, ParseError> {
    if matches!(c.peek(), Some(Tok::Ident(_))) && c.is_keyword_at(1, "some") {
        let role = name(c, "a role name")?;
        c.expect_keyword("some")?;
        return Ok(Concept::Exists(role, Box::new(exist(c)?)));
    }
    primary(c)
}

fn primary(c: &mut Cursor) -> Result<Concept, ParseError> {
    if c.eat_keyword("top") {
        return Ok(Concept::Top);
    }
    if c.eat_keyword("bot") {
        return Ok(Concept::Bot);
    }
    if c.eat(&Tok::LBrace) {
        let a = name(c, "an individual name")?;
        c.expect(&Tok::RBrace)?;
        return Ok(Concept::Nominal(a));
    }
    if c.eat(&Tok::LParen) {
        let inner = concept(c)?;
        c.expect(&Tok::RParen)?;
        return Ok(inner);
    }
    Ok(Concept::Name(name(c, "a concept")?))
}

fn statement(c: &mut Cursor, kb: &mut KnowledgeBase) -> Result<(), ParseError> {
    for (kw, field) in [("concept", 0), ("role", 1), ("individual", 2)] {
        if c.is_keyword(kw) && matches!(c.peek_at(1), Some(Tok::Ident(_))) && c.peek_at(2) == Some(&Tok::Dot) {
            c.pos += 1;
            let n = name(c, "a name")?;
            c.expect(&Tok::Dot)?;
            let set = match field {
                0 => &mut kb.declared.concepts,
                1 => &mut kb.declared.roles,
                _ => &mut kb.declared.individuals,
            };
            set.insert(n);
            return Ok(());
        }
    }
    let lhs = concept(c)?;
    if c.eat_keyword("sub") {
        let rhs = concept(c)?;
        c.expect(&Tok::Dot)?;
        kb.tbox.push(Axiom::new(lhs, rhs));
        return Ok(());
    }
    c.expect(&Tok::LParen)?;
    let a = name(c, "an individual name")?;
    if c.eat(&Tok::Comma) {
        let Concept::Name(r) = lhs else {
            return Err(c.error("a role assertion needs a role name"));
        };
        let b = name(c, "an individual name")?;
        c.expect(&Tok::RParen)?;
        c.expect(&Tok::Dot)?;
        kb.abox.push(Assertion::Role(r, a, b));
        return Ok(());
    }
    c.expect(&Tok::RParen)?;
    c.expect(&Tok::Dot)?;
    kb.abox.push(Assertion::Concept(lhs, a));
    Ok(())
}

/// Parses the `.kb` format.
pub fn parse_kb(text: &str) -> Result<KnowledgeBase, ParseError> {
    let mut c = Cursor::new(text)?;
    let mut kb = KnowledgeBase::default();
    while !c.at_end() {
        statement(&mut c, &mut kb)?;
    }
    Ok(kb)
}

/// Prints a knowledge base so that `parse_kb(print_kb(kb)) == kb`.
pub fn print_kb(kb: &KnowledgeBase) -> String {
    let mut out = String::new();
    for n in &kb.declared.concepts {
        let _ = writeln!(out, "concept {n}.");
    }
    for n in &kb.declared.roles {
        let _ = writeln!(out, "role {n}.");
    }
    for n in &kb.declared.individuals {
        let _ = writeln!(out, "individual {n}.");
    }
    for ax in &kb.tbox {
        let _ = writeln!(out, "{ax}.");
    }
    for a in &kb.abox {
        let _ = writeln!(out, "{a}.");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn example1_axiom() {
        let kb = parse_kb("(Teaches some Course) sub Teacher.").unwrap();
        assert_eq!(
            kb.tbox,
            vec![Axiom::new(
                Concept::exists("teaches", Concept::name("course")),
                Concept::name("teacher")
            )]
        );
    }

    #[test]
    fn top_sub_top() {
        let kb = parse_kb("top sub top.").unwrap();
        assert_eq!(kb.tbox, vec![Axiom::new(Concept::Top, Concept::Top)]);
    }

    #[test]
    fn conjunction_on_the_right() {
        let kb = parse_kb("A sub B and C.").unwrap();
        assert_eq!(
            kb.tbox[0].rhs,
            Concept::and(Concept::name("b"), Concept::name("c"))
        );
    }

    #[test]
    fn precedence_some_binds_tighter() {
        let kb = parse_kb("r some a and b sub c.").unwrap();
        assert_eq!(
            kb.tbox[0].lhs,
            Concept::and(Concept::exists("r", Concept::name("a")), Concept::name("b"))
        );
    }

    #[test]
    fn assertions_and_declarations() {
        let text = "% people\nconcept Spare.\nrole knows.\nindividual Bob.\nPerson(John).\nteaches(john, cs1).\n(r some {b})(a).\n{a}(b).";
        let kb = parse_kb(text).unwrap();
        assert!(kb.declared.concepts.contains("spare"));
        assert!(kb.declared.individuals.contains("bob"));
        assert_eq!(kb.abox.len(), 4);
        assert_eq!(
            kb.abox[1],
            Assertion::Role("teaches".into(), "john".into(), "cs1".into())
        );
        assert_eq!(
            kb.abox[2],
            Assertion::Concept(Concept::exists("r", Concept::nominal("b")), "a".into())
        );
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse_kb("a sub b.\nc sub .").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { line: 2, col: 7, .. }), "{err}");
        assert!(matches!(parse_kb("_n1 sub a."), Err(ParseError::Reserved { .. })));
        assert!(parse_kb("a sub b").is_err());
        assert!(parse_kb("a sub b # c.").is_err());
    }

    fn arb_concept() -> impl Strategy<Value = Concept> {
        let leaf = prop_oneof![
            Just(Concept::Top),
            Just(Concept::Bot),
            prop_oneof![Just("a"), Just("b")].prop_map(Concept::name),
            Just(Concept::nominal("x")),
        ];
        leaf.prop_recursive(4, 16, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(l, r)| Concept::and(l, r)),
                inner.prop_map(|c| Concept::exists("r", c)),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(
            axioms in proptest::collection::vec((arb_concept(), arb_concept()), 0..4),
            assertions in proptest::collection::vec(arb_concept(), 0..3),
        ) {
            let kb = KnowledgeBase::new(
                axioms.into_iter().map(|(l, r)| Axiom::new(l, r)).collect(),
                assertions
                    .into_iter()
                    .map(|c| Assertion::Concept(c, "y".into()))
                    .chain([Assertion::Role("r".into(), "x".into(), "y".into())])
                    .collect(),
            );
            let printed = print_kb(&kb);
            prop_assert_eq!(parse_kb(&printed).unwrap(), kb, "{}", printed);
        }
    }
}
