//! Text format for frameworks.
//!
//! ```text
//! #mode classical.          % or `#mode asp.`, must precede rc lines
//! arg(a). arg(b).
//! att(a,b).
//! rc(b): ~a | p.            % classical: a formula
//! rc(b): x | y :- a, not p. % asp: a rule; `:- body.` is a constraint
//! constraint: a & ~b.       % constrained frameworks only
//! ```

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::model::{Af, Caf, Condition, Formula, Mode, Raf, Rule};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Colon,
    If,
    Tilde,
    Amp,
    Pipe,
    Arrow,
    Iff,
    Hash,
}

impl Tok {
    fn show(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Colon => "`:`".into(),
            Tok::If => "`:-`".into(),
            Tok::Tilde => "`~`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Pipe => "`|`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Iff => "`<->`".into(),
            Tok::Hash => "`#`".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn tokenize(text: &str) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let (line, col) = (ln + 1, i + 1);
            let push = |out: &mut Vec<Spanned>, tok| out.push(Spanned { tok, line, col });
            if c == '%' {
                break;
            }
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            if c.is_ascii_alphanumeric() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                if word.starts_with(|c: char| c.is_ascii_digit()) {
                    return Err(Error::Syntax { line, col, msg: format!("identifier `{word}` starts with a digit") });
                }
                push(&mut out, Tok::Ident(word));
                continue;
            }
            let next = chars.get(i + 1).copied();
            let (tok, len) = match (c, next) {
                (':', Some('-')) => (Tok::If, 2),
                ('-', Some('>')) => (Tok::Arrow, 2),
                ('<', Some('-')) if chars.get(i + 2) == Some(&'>') => (Tok::Iff, 3),
                ('(', _) => (Tok::LParen, 1),
                (')', _) => (Tok::RParen, 1),
                (',', _) => (Tok::Comma, 1),
                ('.', _) => (Tok::Dot, 1),
                (':', _) => (Tok::Colon, 1),
                ('~', _) => (Tok::Tilde, 1),
                ('&', _) => (Tok::Amp, 1),
                ('|', _) => (Tok::Pipe, 1),
                ('#', _) => (Tok::Hash, 1),
                _ => return Err(Error::Syntax { line, col, msg: format!("unexpected character `{c}`") }),
            };
            push(&mut out, tok);
            i += len;
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    fn new(text: &str) -> Result<Parser> {
        let toks = tokenize(text)?;
        let lines = text.lines().count().max(1);
        let last_len = text.lines().last().map_or(0, |l| l.chars().count());
        Ok(Parser { toks, pos: 0, end: (lines, last_len + 1) })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|s| &s.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks.get(self.pos).map_or(self.end, |s| (s.line, s.col))
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T> {
        let (line, col) = self.here();
        Err(Error::Syntax { line, col, msg: msg.into() })
    }

    fn unexpected<T>(&self, wanted: &str) -> Result<T> {
        match self.peek() {
            Some(t) => self.error(format!("expected {wanted}, found {}", t.show())),
            None => self.error(format!("expected {wanted}, found end of input")),
        }
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok) -> Result<()> {
        if self.eat(&t) {
            Ok(())
        } else {
            self.unexpected(&t.show())
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.unexpected("an identifier"),
        }
    }

    fn name(&mut self) -> Result<String> {
        let at = self.here();
        let s = self.ident()?;
        if crate::model::RESERVED.contains(&s.as_str()) {
            return Err(Error::Syntax { line: at.0, col: at.1, msg: format!("`{s}` is reserved") });
        }
        Ok(s)
    }

    fn keyword(&self, k: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == k)
    }

    // iff < implies < or < and < not
    fn formula(&mut self) -> Result<Formula> {
        let mut lhs = self.implication()?;
        while self.eat(&Tok::Iff) {
            let rhs = self.implication()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Formula> {
        let lhs = self.disjunction()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut items = vec![self.conjunction()?];
        while self.eat(&Tok::Pipe) {
            items.push(self.conjunction()?);
        }
        Ok(if items.len() == 1 { items.pop().unwrap() } else { Formula::Or(items) })
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut items = vec![self.unary()?];
        while self.eat(&Tok::Amp) {
            items.push(self.unary()?);
        }
        Ok(if items.len() == 1 { items.pop().unwrap() } else { Formula::And(items) })
    }

    fn unary(&mut self) -> Result<Formula> {
        if self.eat(&Tok::Tilde) {
            return Ok(Formula::not(self.unary()?));
        }
        if self.eat(&Tok::LParen) {
            let f = self.formula()?;
            self.expect(Tok::RParen)?;
            return Ok(f);
        }
        if self.keyword("true") {
            self.pos += 1;
            return Ok(Formula::True);
        }
        if self.keyword("false") {
            self.pos += 1;
            return Ok(Formula::False);
        }
        match self.peek() {
            Some(Tok::Ident(_)) => Ok(Formula::Atom(self.name()?)),
            _ => self.unexpected("a formula"),
        }
    }

    fn rule(&mut self) -> Result<Rule> {
        let mut r = Rule::default();
        if !matches!(self.peek(), Some(Tok::If)) {
            r.head.insert(self.name()?);
            while self.eat(&Tok::Pipe) {
                r.head.insert(self.name()?);
            }
        }
        if self.eat(&Tok::If) {
            if self.peek() == Some(&Tok::Dot) {
                return Ok(r);
            }
            loop {
                let negated = self.keyword("not") && matches!(self.peek_at(1), Some(Tok::Ident(_)));
                if negated {
                    self.pos += 1;
                    r.neg.insert(self.name()?);
                } else {
                    r.pos.insert(self.name()?);
                }
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
        } else if r.head.is_empty() {
            return self.unexpected("a rule");
        }
        Ok(r)
    }
}

/// One positioned rc line, kept until all arguments are known.
struct RcLine {
    arg: String,
    at: (usize, usize),
    cond: Condition,
}

struct Document {
    af_names: Vec<String>,
    attacks: Vec<(String, String, (usize, usize))>,
    mode: Mode,
    rc: Vec<RcLine>,
    constraint: Option<(Formula, (usize, usize))>,
}

fn parse_document(text: &str) -> Result<Document> {
    let mut p = Parser::new(text)?;
    let mut doc = Document { af_names: Vec::new(), attacks: Vec::new(), mode: Mode::Classical, rc: Vec::new(), constraint: None };
    let mut mode_set = false;
    while p.peek().is_some() {
        let at = p.here();
        if p.eat(&Tok::Hash) {
            if !p.keyword("mode") {
                return p.unexpected("`mode`");
            }
            p.pos += 1;
            let m = p.ident()?;
            let mode = match m.as_str() {
                "classical" => Mode::Classical,
                "asp" => Mode::Asp,
                _ => return Err(Error::Syntax { line: at.0, col: at.1, msg: format!("unknown mode `{m}`") }),
            };
            if mode_set {
                return Err(Error::MixedModes(format!("second mode directive at line {}", at.0)));
            }
            if !doc.rc.is_empty() {
                return Err(Error::MixedModes(format!("mode directive at line {} follows rc lines", at.0)));
            }
            mode_set = true;
            doc.mode = mode;
            p.expect(Tok::Dot)?;
            continue;
        }
        let kw = p.ident()?;
        match kw.as_str() {
            "arg" => {
                p.expect(Tok::LParen)?;
                let n = p.name()?;
                p.expect(Tok::RParen)?;
                doc.af_names.push(n);
            }
            "att" => {
                p.expect(Tok::LParen)?;
                let a = p.name()?;
                p.expect(Tok::Comma)?;
                let b = p.name()?;
                p.expect(Tok::RParen)?;
                doc.attacks.push((a, b, at));
            }
            "rc" => {
                p.expect(Tok::LParen)?;
                let arg = p.name()?;
                p.expect(Tok::RParen)?;
                p.expect(Tok::Colon)?;
                let cond = match doc.mode {
                    Mode::Classical => Condition::Formula(p.formula()?),
                    Mode::Asp => Condition::Rule(p.rule()?),
                };
                doc.rc.push(RcLine { arg, at, cond });
            }
            "constraint" => {
                p.expect(Tok::Colon)?;
                let f = p.formula()?;
                if doc.constraint.is_some() {
                    return Err(Error::Syntax { line: at.0, col: at.1, msg: "second constraint line".into() });
                }
                doc.constraint = Some((f, at));
            }
            _ => {
                return Err(Error::Syntax {
                    line: at.0,
                    col: at.1,
                    msg: format!("unknown statement `{kw}`"),
                })
            }
        }
        p.expect(Tok::Dot)?;
    }
    Ok(doc)
}

fn undeclared(name: &str, at: (usize, usize)) -> Error {
    Error::UndeclaredArgument(format!("{name} (line {}, column {})", at.0, at.1))
}

fn build_af(doc: &Document) -> Result<Af> {
    let mut af = Af::new(doc.af_names.iter().cloned())?;
    for (a, b, at) in &doc.attacks {
        if !af.contains(a) {
            return Err(undeclared(a, *at));
        }
        if !af.contains(b) {
            return Err(undeclared(b, *at));
        }
        af.add_attack(a, b)?;
    }
    Ok(af)
}

/// Parses a rejection-augmented framework.
pub fn parse_raf(text: &str) -> Result<Raf> {
    let doc = parse_document(text)?;
    if let Some((_, at)) = doc.constraint {
        return Err(Error::Syntax { line: at.0, col: at.1, msg: "constraint lines belong to constrained frameworks".into() });
    }
    let af = build_af(&doc)?;
    let mut raf = Raf::new(af, doc.mode);
    for line in doc.rc {
        let i = raf.af.index_of(&line.arg).ok_or_else(|| undeclared(&line.arg, line.at))?;
        raf.add_condition(i, line.cond)?;
    }
    raf.validate()?;
    Ok(raf)
}

/// Parses a constrained framework; a missing constraint line means ⊤.
pub fn parse_caf(text: &str) -> Result<Caf> {
    let doc = parse_document(text)?;
    if let Some(line) = doc.rc.first() {
        return Err(Error::Syntax { line: line.at.0, col: line.at.1, msg: "rc lines are not allowed here".into() });
    }
    let af = build_af(&doc)?;
    let (constraint, at) = doc.constraint.unwrap_or((Formula::True, (1, 1)));
    if let Some(v) = constraint.vars().into_iter().find(|v| !af.contains(v)) {
        return Err(undeclared(&v, at));
    }
    Caf::new(af, constraint)
}

/// Parses a plain framework (rc and constraint lines are rejected).
pub fn parse_af(text: &str) -> Result<Af> {
    let raf = parse_raf(text)?;
    if raf.af.names().iter().enumerate().any(|(i, _)| !raf.conditions(i).is_empty()) {
        return Err(Error::Invalid("rc lines are not allowed in a plain framework".into()));
    }
    Ok(raf.af)
}

/// Parses a single formula.
pub fn parse_formula(text: &str) -> Result<Formula> {
    let mut p = Parser::new(text)?;
    let f = p.formula()?;
    if p.peek().is_some() {
        return p.unexpected("end of formula");
    }
    Ok(f)
}

/// Parses a single rule without the final dot.
pub fn parse_rule(text: &str) -> Result<Rule> {
    let mut p = Parser::new(text)?;
    let r = p.rule()?;
    p.eat(&Tok::Dot);
    if p.peek().is_some() {
        return p.unexpected("end of rule");
    }
    Ok(r)
}

fn prec(f: &Formula) -> u8 {
    match f {
        Formula::Iff(..) => 1,
        Formula::Implies(..) => 2,
        Formula::Or(_) => 3,
        Formula::And(_) => 4,
        Formula::Not(_) => 5,
        _ => 6,
    }
}

fn write_formula(out: &mut String, f: &Formula, min: u8) {
    let p = prec(f);
    let paren = p < min;
    if paren {
        out.push('(');
    }
    match f {
        Formula::True => out.push_str("true"),
        Formula::False => out.push_str("false"),
        Formula::Atom(a) => out.push_str(a),
        Formula::Not(g) => {
            out.push('~');
            write_formula(out, g, 5);
        }
        Formula::And(fs) | Formula::Or(fs) => {
            let sep = if matches!(f, Formula::And(_)) { " & " } else { " | " };
            for (k, g) in fs.iter().enumerate() {
                if k > 0 {
                    out.push_str(sep);
                }
                // a same-level child must stay grouped to survive a round trip
                write_formula(out, g, p + 1);
            }
            if fs.len() < 2 {
                // degenerate n-ary nodes have no surface syntax; fall back
                if fs.is_empty() {
                    out.push_str(if matches!(f, Formula::And(_)) { "true" } else { "false" });
                }
            }
        }
        Formula::Implies(a, b) => {
            write_formula(out, a, 3);
            out.push_str(" -> ");
            write_formula(out, b, 2);
        }
        Formula::Iff(a, b) => {
            write_formula(out, a, 1);
            out.push_str(" <-> ");
            write_formula(out, b, 2);
        }
    }
    if paren {
        out.push(')');
    }
}

/// Surface syntax of a formula; `parse_formula(&render_formula(f)) == f`
/// for formulas without degenerate (0- or 1-ary) connectives.
pub fn render_formula(f: &Formula) -> String {
    let mut s = String::new();
    write_formula(&mut s, f, 0);
    s
}

pub fn render_rule(r: &Rule) -> String {
    let mut s = r.head.iter().cloned().collect::<Vec<_>>().join(" | ");
    let body: Vec<String> =
        r.pos.iter().cloned().chain(r.neg.iter().map(|n| format!("not {n}"))).collect();
    if !body.is_empty() || r.head.is_empty() {
        if !s.is_empty() {
            s.push(' ');
        }
        s.push_str(":-");
        if !body.is_empty() {
            s.push(' ');
            s.push_str(&body.join(", "));
        }
    }
    s
}

fn render_af_lines(out: &mut String, af: &Af) {
    for n in af.names() {
        let _ = writeln!(out, "arg({n}).");
    }
    for (a, b) in af.attacks() {
        let _ = writeln!(out, "att({},{}).", af.name(a), af.name(b));
    }
}

/// Canonical text of a framework.
pub fn render_raf(raf: &Raf) -> String {
    let mut out = format!("#mode {}.\n", raf.mode);
    render_af_lines(&mut out, &raf.af);
    for (i, n) in raf.af.names().iter().enumerate() {
        for c in raf.conditions(i) {
            let body = match c {
                Condition::Formula(f) => render_formula(f),
                Condition::Rule(r) => render_rule(r),
            };
            let _ = writeln!(out, "rc({n}): {body}.");
        }
    }
    out
}

pub fn render_af(af: &Af) -> String {
    let mut out = String::new();
    render_af_lines(&mut out, af);
    out
}

pub fn render_caf(caf: &Caf) -> String {
    let mut out = render_af(&caf.af);
    let _ = writeln!(out, "constraint: {}.", render_formula(&caf.constraint));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::RcClass;

    const FIG2: &str = include_str!("../../../instances/fig2.raf");
    const FIG4: &str = include_str!("../../../instances/fig4.raf");

    #[test]
    fn plain_document_has_empty_conditions() {
        let raf = parse_raf("arg(a). arg(b). att(a,b).").unwrap();
        assert_eq!(raf.af.len(), 2);
        assert!(raf.conditions(0).is_empty() && raf.conditions(1).is_empty());
        assert_eq!(raf.classify(), RcClass::Simple);
    }

    #[test]
    fn research_example_parses() {
        let raf = parse_raf(FIG2).unwrap();
        let w = raf.af.index_of("W").unwrap();
        let vars: Vec<String> = raf.conditions(w).iter().flat_map(|c| c.vars()).collect();
        assert!(vars.contains(&"p_hw".to_string()) && vars.contains(&"p_dl".to_string()));
        assert!(vars.iter().all(|v| v == "p_hw" || v == "p_dl"));
        assert_eq!(raf.classify(), RcClass::Propositional);
        assert_eq!(raf.af.num_attacks(), 5);
    }

    #[test]
    fn program_example_parses() {
        let raf = parse_raf(FIG4).unwrap();
        assert_eq!(raf.mode, Mode::Asp);
        assert_eq!(raf.classify(), RcClass::Tight);
    }

    #[test]
    fn undeclared_attack_endpoint() {
        let e = parse_raf("arg(b). att(a,b).").unwrap_err();
        assert!(matches!(e, Error::UndeclaredArgument(ref s) if s.starts_with("a ")), "{e:?}");
    }

    #[test]
    fn duplicate_declaration() {
        assert_eq!(parse_raf("arg(a). arg(a).").unwrap_err(), Error::DuplicateArgument("a".into()));
    }

    #[test]
    fn syntax_error_has_position() {
        match parse_raf("arg(a).\narg(b) att(a,b).") {
            Err(Error::Syntax { line, col, .. }) => assert_eq!((line, col), (2, 8)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn mode_after_rc_is_rejected() {
        let e = parse_raf("arg(a). rc(a): false. #mode asp.").unwrap_err();
        assert!(matches!(e, Error::MixedModes(_)));
    }

    #[test]
    fn self_loop_rule_is_normal() {
        let raf = parse_raf("#mode asp. arg(a). rc(a): x :- x.").unwrap();
        assert_eq!(raf.classify(), RcClass::Normal);
        let raf = parse_raf("#mode asp. arg(a). rc(a): x | y :- x.").unwrap();
        assert_eq!(raf.classify(), RcClass::Disjunctive);
    }

    #[test]
    fn rule_forms() {
        assert_eq!(parse_rule(":- .").unwrap(), Rule::default());
        assert_eq!(parse_rule("a.").unwrap(), Rule::fact("a"));
        let r = parse_rule("a | b :- c, not d").unwrap();
        assert_eq!(r, Rule::new(&["a", "b"], &["c"], &["d"]));
        assert_eq!(render_rule(&r), "a | b :- c, not d");
        assert_eq!(render_rule(&Rule::default()), ":-");
    }

    #[test]
    fn precedence() {
        let f = parse_formula("a | b & ~c -> d <-> e").unwrap();
        let expect = Formula::iff(
            Formula::implies(
                Formula::Or(vec![
                    Formula::atom("a"),
                    Formula::And(vec![Formula::atom("b"), Formula::not(Formula::atom("c"))]),
                ]),
                Formula::atom("d"),
            ),
            Formula::atom("e"),
        );
        assert_eq!(f, expect);
        assert_eq!(parse_formula("a -> b -> c").unwrap(), parse_formula("a -> (b -> c)").unwrap());
    }

    #[test]
    fn render_round_trip_examples() {
        for text in [FIG2, FIG4] {
            let raf = parse_raf(text).unwrap();
            assert_eq!(parse_raf(&render_raf(&raf)).unwrap(), raf);
        }
        let f = parse_formula("(a | b) | ~(c & d) & (e -> f) -> g").unwrap();
        assert_eq!(parse_formula(&render_formula(&f)).unwrap(), f);
    }

    #[test]
    fn caf_document() {
        let caf = parse_caf("arg(a). arg(b). att(a,b). constraint: a & ~b.").unwrap();
        assert_eq!(caf.constraint.vars().len(), 2);
        assert!(parse_caf("arg(a). constraint: z.").is_err());
        assert!(parse_caf("arg(a). rc(a): false.").is_err());
    }
}
