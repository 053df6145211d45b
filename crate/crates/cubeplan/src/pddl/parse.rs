//! Recursive-descent parser for the grounded STRIPS fragment this crate
//! emits: zero-ary predicates, negative preconditions, and when-effects.
//! Keywords are case-insensitive; `;` starts a line comment. See
//! `docs/pddl-fragment.md` for the grammar.

use crate::bits::BitState;
use crate::strips::{ActionSchema, CondEffect, Condition, Literal};

use super::PddlError;

#[derive(Clone, Debug, PartialEq)]
enum Token {
    LParen,
    RParen,
    Symbol(String),
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct Pos {
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<(Token, Pos)>, PddlError> {
    let mut tokens = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let pos = Pos { line, col };
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            ';' => {
                for c in chars.by_ref() {
                    if c == '\n' {
                        line += 1;
                        col = 1;
                        break;
                    }
                }
            }
            c if c.is_whitespace() => {
                chars.next();
                col += 1;
            }
            '(' => {
                chars.next();
                col += 1;
                tokens.push((Token::LParen, pos));
            }
            ')' => {
                chars.next();
                col += 1;
                tokens.push((Token::RParen, pos));
            }
            _ => {
                let mut symbol = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' || c == ';' {
                        break;
                    }
                    symbol.push(c.to_ascii_lowercase());
                    chars.next();
                    col += 1;
                }
                tokens.push((Token::Symbol(symbol), pos));
            }
        }
    }
    Ok(tokens)
}

#[derive(Clone, Debug)]
enum Sexp {
    Atom(String, Pos),
    List(Vec<Sexp>, Pos),
}

impl Sexp {
    fn pos(&self) -> Pos {
        match self {
            Sexp::Atom(_, p) | Sexp::List(_, p) => *p,
        }
    }

    fn atom(&self) -> Option<&str> {
        match self {
            Sexp::Atom(s, _) => Some(s),
            Sexp::List(..) => None,
        }
    }

    fn head(&self) -> Option<&str> {
        match self {
            Sexp::List(items, _) => items.first().and_then(Sexp::atom),
            Sexp::Atom(..) => None,
        }
    }
}

fn syntax(pos: Pos, message: impl Into<String>) -> PddlError {
    PddlError::Syntax { line: pos.line, col: pos.col, message: message.into() }
}

fn unsupported(pos: Pos, construct: impl Into<String>) -> PddlError {
    PddlError::Unsupported { line: pos.line, col: pos.col, construct: construct.into() }
}

fn semantic(pos: Pos, message: impl Into<String>) -> PddlError {
    PddlError::Semantic { line: pos.line, col: pos.col, message: message.into() }
}

fn parse_sexp(text: &str) -> Result<Sexp, PddlError> {
    let tokens = lex(text)?;
    let mut index = 0;
    let root = parse_one(&tokens, &mut index)?;
    if index != tokens.len() {
        let (_, pos) = tokens[index];
        return Err(syntax(pos, "trailing tokens after top-level form"));
    }
    Ok(root)
}

fn parse_one(tokens: &[(Token, Pos)], index: &mut usize) -> Result<Sexp, PddlError> {
    let Some((token, pos)) = tokens.get(*index) else {
        return Err(syntax(Pos { line: 0, col: 0 }, "unexpected end of input"));
    };
    *index += 1;
    match token {
        Token::Symbol(s) => Ok(Sexp::Atom(s.clone(), *pos)),
        Token::RParen => Err(syntax(*pos, "unexpected ')'")),
        Token::LParen => {
            let mut items = Vec::new();
            loop {
                match tokens.get(*index) {
                    None => return Err(syntax(*pos, "unbalanced '(': missing ')'")),
                    Some((Token::RParen, _)) => {
                        *index += 1;
                        return Ok(Sexp::List(items, *pos));
                    }
                    Some(_) => items.push(parse_one(tokens, index)?),
                }
            }
        }
    }
}

/// A parsed grounded domain: predicate names in declaration order plus the
/// actions, with proposition indices referring to that order.
#[derive(Clone, Debug, PartialEq)]
pub struct ParsedDomain {
    pub name: String,
    pub predicates: Vec<String>,
    pub actions: Vec<ActionSchema>,
}

impl ParsedDomain {
    pub fn num_props(&self) -> usize {
        self.predicates.len()
    }

    fn prop_index(&self, name: &str, pos: Pos) -> Result<usize, PddlError> {
        self.predicates
            .iter()
            .position(|p| p == name)
            .ok_or_else(|| semantic(pos, format!("undeclared predicate {name:?}")))
    }
}

/// The init/goal fragment of a parsed problem.
#[derive(Clone, Debug, PartialEq)]
pub struct ParsedProblem {
    pub name: String,
    pub domain: String,
    pub init: BitState,
    pub goal: Condition,
}

const KNOWN_REQUIREMENTS: [&str; 3] = [":strips", ":negative-preconditions", ":conditional-effects"];

pub fn parse_domain(text: &str) -> Result<ParsedDomain, PddlError> {
    let root = parse_sexp(text)?;
    let Sexp::List(items, pos) = &root else {
        return Err(syntax(root.pos(), "expected (define ...)"));
    };
    if root.head() != Some("define") {
        return Err(syntax(*pos, "expected (define ...)"));
    }
    let mut name = None;
    let mut predicates: Vec<String> = Vec::new();
    let mut raw_actions: Vec<&Sexp> = Vec::new();
    for item in &items[1..] {
        match item.head() {
            Some("domain") => {
                let Sexp::List(parts, p) = item else { unreachable!() };
                let atom = parts.get(1).and_then(Sexp::atom);
                name = Some(atom.ok_or_else(|| syntax(*p, "expected (domain <name>)"))?.to_string());
            }
            Some(":requirements") => {
                let Sexp::List(parts, _) = item else { unreachable!() };
                for req in &parts[1..] {
                    let text = req.atom().ok_or_else(|| syntax(req.pos(), "expected a requirement flag"))?;
                    if !KNOWN_REQUIREMENTS.contains(&text) {
                        return Err(unsupported(req.pos(), format!("requirement {text}")));
                    }
                }
            }
            Some(":predicates") => {
                let Sexp::List(parts, _) = item else { unreachable!() };
                for pred in &parts[1..] {
                    let Sexp::List(inner, p) = pred else {
                        return Err(syntax(pred.pos(), "expected (name) predicate declaration"));
                    };
                    if inner.len() != 1 {
                        return Err(unsupported(*p, "predicate with parameters (only zero-ary supported)"));
                    }
                    let pred_name = inner[0]
                        .atom()
                        .ok_or_else(|| syntax(*p, "expected a predicate name"))?
                        .to_string();
                    if predicates.contains(&pred_name) {
                        return Err(semantic(*p, format!("duplicate predicate {pred_name:?}")));
                    }
                    predicates.push(pred_name);
                }
            }
            Some(":action") => raw_actions.push(item),
            Some(other) => return Err(unsupported(item.pos(), format!("section {other}"))),
            None => return Err(syntax(item.pos(), "expected a (keyword ...) section")),
        }
    }
    let mut domain = ParsedDomain {
        name: name.ok_or_else(|| syntax(*pos, "missing (domain <name>)"))?,
        predicates,
        actions: Vec::new(),
    };
    for (id, raw) in raw_actions.iter().enumerate() {
        let action = parse_action(&domain, id, raw)?;
        domain.actions.push(action);
    }
    Ok(domain)
}

fn parse_action(domain: &ParsedDomain, id: usize, sexp: &Sexp) -> Result<ActionSchema, PddlError> {
    let Sexp::List(items, pos) = sexp else { unreachable!() };
    let name = items
        .get(1)
        .and_then(Sexp::atom)
        .ok_or_else(|| syntax(*pos, "expected (:action <name> ...)"))?
        .to_string();
    let mut precondition = Condition::empty(domain.num_props());
    let mut add = BitState::zeros(domain.num_props());
    let mut del = BitState::zeros(domain.num_props());
    let mut cond_effects = Vec::new();
    let mut index = 2;
    while index < items.len() {
        let key = items[index]
            .atom()
            .ok_or_else(|| syntax(items[index].pos(), "expected :parameters/:precondition/:effect"))?;
        let value = items
            .get(index + 1)
            .ok_or_else(|| syntax(items[index].pos(), format!("{key} is missing its value")))?;
        match key {
            ":parameters" => match value {
                Sexp::List(inner, _) if inner.is_empty() => {}
                _ => return Err(unsupported(value.pos(), "action parameters (only grounded actions supported)")),
            },
            ":precondition" => precondition = parse_condition(domain, value)?,
            ":effect" => parse_effect(domain, value, &mut add, &mut del, &mut cond_effects)?,
            other => return Err(syntax(items[index].pos(), format!("unknown action key {other}"))),
        }
        index += 2;
    }
    let schema = ActionSchema::new(id, name, precondition, add, del)
        .map_err(|e| semantic(*pos, e.to_string()))?;
    Ok(schema.with_cond_effects(cond_effects))
}

fn parse_literal(domain: &ParsedDomain, sexp: &Sexp) -> Result<Literal, PddlError> {
    let Sexp::List(items, pos) = sexp else {
        return Err(syntax(sexp.pos(), "expected a literal"));
    };
    match items.first().and_then(Sexp::atom) {
        Some("not") => {
            if items.len() != 2 {
                return Err(syntax(*pos, "expected (not (<pred>))"));
            }
            let inner = parse_literal(domain, &items[1])?;
            if !inner.positive {
                return Err(syntax(*pos, "double negation"));
            }
            Ok(Literal::neg(inner.prop))
        }
        Some(head) if head.starts_with(':') || head == "and" || head == "when" => {
            Err(syntax(*pos, format!("expected a literal, found {head}")))
        }
        Some(op @ ("or" | "imply" | "forall" | "exists")) => {
            Err(unsupported(*pos, format!("{op} where a literal was expected")))
        }
        Some(name) => {
            if items.len() != 1 {
                return Err(unsupported(*pos, "predicate with arguments (only zero-ary supported)"));
            }
            Ok(Literal::pos(domain.prop_index(name, *pos)?))
        }
        None => Err(syntax(*pos, "empty literal")),
    }
}

/// Conditions are a single literal or an `(and ...)` of literals; nested
/// `and`s are flattened. Disjunctions and quantifiers are out of fragment.
fn parse_condition(domain: &ParsedDomain, sexp: &Sexp) -> Result<Condition, PddlError> {
    let mut literals = Vec::new();
    collect_condition(domain, sexp, &mut literals)?;
    Condition::from_literals(domain.num_props(), &literals)
        .map_err(|e| semantic(sexp.pos(), e.to_string()))
}

fn collect_condition(
    domain: &ParsedDomain,
    sexp: &Sexp,
    out: &mut Vec<Literal>,
) -> Result<(), PddlError> {
    match sexp.head() {
        Some("and") => {
            let Sexp::List(items, _) = sexp else { unreachable!() };
            for item in &items[1..] {
                collect_condition(domain, item, out)?;
            }
            Ok(())
        }
        Some(op @ ("or" | "imply" | "forall" | "exists")) => {
            Err(unsupported(sexp.pos(), format!("{op} in a condition (disjunctive precondition)")))
        }
        _ => {
            out.push(parse_literal(domain, sexp)?);
            Ok(())
        }
    }
}

fn parse_effect(
    domain: &ParsedDomain,
    sexp: &Sexp,
    add: &mut BitState,
    del: &mut BitState,
    cond_effects: &mut Vec<CondEffect>,
) -> Result<(), PddlError> {
    match sexp.head() {
        Some("and") => {
            let Sexp::List(items, _) = sexp else { unreachable!() };
            for item in &items[1..] {
                parse_effect(domain, item, add, del, cond_effects)?;
            }
            Ok(())
        }
        Some("when") => {
            let Sexp::List(items, pos) = sexp else { unreachable!() };
            if items.len() != 3 {
                return Err(syntax(*pos, "expected (when <condition> <effect>)"));
            }
            let condition = parse_condition(domain, &items[1])?;
            let mut ce_add = BitState::zeros(domain.num_props());
            let mut ce_del = BitState::zeros(domain.num_props());
            let mut nested = Vec::new();
            parse_effect(domain, &items[2], &mut ce_add, &mut ce_del, &mut nested)?;
            if !nested.is_empty() {
                return Err(unsupported(*pos, "nested when-effect"));
            }
            cond_effects.push(
                CondEffect::new(condition, ce_add, ce_del).map_err(|e| semantic(*pos, e.to_string()))?,
            );
            Ok(())
        }
        Some(op @ ("or" | "imply" | "forall" | "exists")) => {
            Err(unsupported(sexp.pos(), format!("{op} in an effect")))
        }
        _ => {
            let lit = parse_literal(domain, sexp)?;
            if lit.positive {
                add.set(lit.prop, true);
            } else {
                del.set(lit.prop, true);
            }
            Ok(())
        }
    }
}

pub fn parse_problem(text: &str, domain: &ParsedDomain) -> Result<ParsedProblem, PddlError> {
    let root = parse_sexp(text)?;
    let Sexp::List(items, pos) = &root else {
        return Err(syntax(root.pos(), "expected (define ...)"));
    };
    if root.head() != Some("define") {
        return Err(syntax(*pos, "expected (define ...)"));
    }
    let mut name = None;
    let mut domain_name = None;
    let mut init = BitState::zeros(domain.num_props());
    let mut goal = Condition::empty(domain.num_props());
    for item in &items[1..] {
        match item.head() {
            Some("problem") => {
                let Sexp::List(parts, p) = item else { unreachable!() };
                let atom = parts.get(1).and_then(Sexp::atom);
                name = Some(atom.ok_or_else(|| syntax(*p, "expected (problem <name>)"))?.to_string());
            }
            Some(":domain") => {
                let Sexp::List(parts, p) = item else { unreachable!() };
                let atom = parts.get(1).and_then(Sexp::atom);
                domain_name =
                    Some(atom.ok_or_else(|| syntax(*p, "expected (:domain <name>)"))?.to_string());
            }
            Some(":init") => {
                let Sexp::List(parts, _) = item else { unreachable!() };
                for fact in &parts[1..] {
                    let lit = parse_literal(domain, fact)?;
                    if !lit.positive {
                        return Err(unsupported(fact.pos(), "negated init fact"));
                    }
                    init.set(lit.prop, true);
                }
            }
            Some(":goal") => {
                let Sexp::List(parts, p) = item else { unreachable!() };
                if parts.len() != 2 {
                    return Err(syntax(*p, "expected (:goal <condition>)"));
                }
                goal = parse_condition(domain, &parts[1])?;
            }
            Some(other) => return Err(unsupported(item.pos(), format!("section {other}"))),
            None => return Err(syntax(item.pos(), "expected a (keyword ...) section")),
        }
    }
    Ok(ParsedProblem {
        name: name.ok_or_else(|| syntax(*pos, "missing (problem <name>)"))?,
        domain: domain_name.ok_or_else(|| syntax(*pos, "missing (:domain <name>)"))?,
        init,
        goal,
    })
}
