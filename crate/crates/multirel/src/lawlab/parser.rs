//! Tokenizer and recursive-descent parser for law files, formulas and terms.
//! Parenthesized subformulas vs. subterms are disambiguated by backtracking.

use crate::error::{Error, Result};
use crate::finsets::ObjType;
use crate::lawlab::ast::{
    BinaryOp, CmpOp, ConstName, Formula, Law, LawFile, PredName, Term, UnaryOp,
};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(usize),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Colon,
    Dot,
    Semi,
    Star,
    At,
    Slash,
    Backslash,
    Tilde,
    Minus,
    Caret,
    CaretI,
    CaretD,
    Eq,
    EqH,
    EqS,
    EqEM,
    Ne,
    Le,
    LeH,
    LeS,
    LeEM,
    Arrow,     // ->
    TypeArrow, // <->
}

struct Lexer<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col: usize,
    src: &'a str,
}

type Spanned = (Tok, usize, usize);

impl<'a> Lexer<'a> {
    fn new(src: &'a str, line: usize) -> Lexer<'a> {
        Lexer {
            chars: src.chars().collect(),
            pos: 0,
            line,
            col: 1,
            src,
        }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::SyntaxError {
            line: self.line,
            col: self.col,
            msg: msg.into(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn word_char(c: char) -> bool {
        c.is_alphanumeric() || c == '_'
    }

    /// Consumes `suffix` if it appears immediately and is not the prefix of a
    /// longer word (so `=H` in `=Hx` stays `=` `Hx`).
    fn take_suffix(&mut self, suffix: &str) -> bool {
        let end = self.pos + suffix.len();
        if self.chars.len() < end {
            return false;
        }
        if !self.chars[self.pos..end].iter().copied().eq(suffix.chars()) {
            return false;
        }
        if self.chars.get(end).copied().is_some_and(Self::word_char) {
            return false;
        }
        for _ in 0..suffix.len() {
            self.bump();
        }
        true
    }

    fn tokenize(mut self) -> Result<Vec<Spanned>> {
        let mut out = Vec::new();
        while let Some(c) = self.peek() {
            let (line, col) = (self.line, self.col);
            if c.is_whitespace() {
                self.bump();
                continue;
            }
            if c == '#' {
                while self.peek().is_some_and(|c| c != '\n') {
                    self.bump();
                }
                continue;
            }
            let tok = match c {
                '(' => {
                    self.bump();
                    Tok::LParen
                }
                ')' => {
                    self.bump();
                    Tok::RParen
                }
                '[' => {
                    self.bump();
                    Tok::LBracket
                }
                ']' => {
                    self.bump();
                    Tok::RBracket
                }
                ',' => {
                    self.bump();
                    Tok::Comma
                }
                ':' => {
                    self.bump();
                    Tok::Colon
                }
                '.' => {
                    self.bump();
                    Tok::Dot
                }
                ';' => {
                    self.bump();
                    Tok::Semi
                }
                '*' => {
                    self.bump();
                    Tok::Star
                }
                '@' => {
                    self.bump();
                    Tok::At
                }
                '/' => {
                    self.bump();
                    Tok::Slash
                }
                '\\' => {
                    self.bump();
                    Tok::Backslash
                }
                '~' => {
                    self.bump();
                    Tok::Tilde
                }
                '-' => {
                    self.bump();
                    if self.peek() == Some('>') {
                        self.bump();
                        Tok::Arrow
                    } else {
                        Tok::Minus
                    }
                }
                '^' => {
                    self.bump();
                    if self.take_suffix("i") {
                        Tok::CaretI
                    } else if self.take_suffix("d") {
                        Tok::CaretD
                    } else {
                        Tok::Caret
                    }
                }
                '=' => {
                    self.bump();
                    if self.take_suffix("H") {
                        Tok::EqH
                    } else if self.take_suffix("S") {
                        Tok::EqS
                    } else if self.take_suffix("EM") {
                        Tok::EqEM
                    } else {
                        Tok::Eq
                    }
                }
                '!' => {
                    self.bump();
                    if self.peek() == Some('=') {
                        self.bump();
                        Tok::Ne
                    } else {
                        return Err(self.err("expected '=' after '!'"));
                    }
                }
                '<' => {
                    self.bump();
                    match self.peek() {
                        Some('-') => {
                            self.bump();
                            if self.peek() == Some('>') {
                                self.bump();
                                Tok::TypeArrow
                            } else {
                                return Err(self.err("expected '>' after '<-'"));
                            }
                        }
                        Some('=') => {
                            self.bump();
                            if self.take_suffix("H") {
                                Tok::LeH
                            } else if self.take_suffix("S") {
                                Tok::LeS
                            } else if self.take_suffix("EM") {
                                Tok::LeEM
                            } else {
                                Tok::Le
                            }
                        }
                        _ => return Err(self.err("expected '->' or '=' after '<'")),
                    }
                }
                c if c.is_ascii_digit() => {
                    let mut n = 0usize;
                    while let Some(d) = self.peek().and_then(|c| c.to_digit(10)) {
                        n = n * 10 + d as usize;
                        self.bump();
                    }
                    if self.peek().is_some_and(Self::word_char) {
                        return Err(self.err("malformed number"));
                    }
                    Tok::Int(n)
                }
                c if c.is_alphabetic() || c == '_' => {
                    let mut word = String::new();
                    while self.peek().is_some_and(Self::word_char) {
                        word.push(self.bump().expect("peeked"));
                    }
                    Tok::Ident(word)
                }
                other => {
                    return Err(self.err(format!("unexpected character '{other}'")));
                }
            };
            out.push((tok, line, col));
        }
        let _ = self.src;
        Ok(out)
    }
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    fn new(toks: Vec<Spanned>, line: usize) -> Parser {
        let end = toks
            .last()
            .map(|&(_, l, c)| (l, c + 1))
            .unwrap_or((line, 1));
        Parser { toks, pos: 0, end }
    }

    fn err_here(&self, msg: impl Into<String>) -> Error {
        let (line, col) = self
            .toks
            .get(self.pos)
            .map(|&(_, l, c)| (l, c))
            .unwrap_or(self.end);
        Error::SyntaxError {
            line,
            col,
            msg: msg.into(),
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _, _)| t)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.peek().cloned()?;
        self.pos += 1;
        Some(t)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Tok, what: &str) -> Result<()> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(self.err_here(format!("expected {what}")))
        }
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Ident(w)) if w == kw) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn peek_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(w)) if w == kw)
    }

    fn ident(&mut self, what: &str) -> Result<String> {
        match self.bump() {
            Some(Tok::Ident(w)) => Ok(w),
            _ => {
                self.pos = self.pos.saturating_sub(1);
                Err(self.err_here(format!("expected {what}")))
            }
        }
    }

    // ---- object types: Name | P(Objtype) ----
    fn objtype(&mut self) -> Result<ObjType> {
        let name = self.ident("object type")?;
        if name == "P" {
            self.expect(&Tok::LParen, "'(' after P")?;
            let inner = self.objtype()?;
            self.expect(&Tok::RParen, "')'")?;
            Ok(ObjType::pow(inner))
        } else {
            Ok(ObjType::Base(name))
        }
    }

    // ---- terms ----
    fn term(&mut self) -> Result<Term> {
        self.diff_term()
    }

    fn diff_term(&mut self) -> Result<Term> {
        let mut t = self.cup_term()?;
        while self.eat(&Tok::Minus) {
            let rhs = self.cup_term()?;
            t = Term::Binary(BinaryOp::Diff, Box::new(t), Box::new(rhs));
        }
        Ok(t)
    }

    fn cup_term(&mut self) -> Result<Term> {
        let mut t = self.cap_term()?;
        loop {
            let op = if self.eat_keyword("cup") {
                BinaryOp::Cup
            } else if self.eat_keyword("icup") {
                BinaryOp::Icup
            } else {
                return Ok(t);
            };
            let rhs = self.cap_term()?;
            t = Term::Binary(op, Box::new(t), Box::new(rhs));
        }
    }

    fn cap_term(&mut self) -> Result<Term> {
        let mut t = self.star_term()?;
        loop {
            let op = if self.eat_keyword("cap") {
                BinaryOp::Cap
            } else if self.eat_keyword("icap") {
                BinaryOp::Icap
            } else {
                return Ok(t);
            };
            let rhs = self.star_term()?;
            t = Term::Binary(op, Box::new(t), Box::new(rhs));
        }
    }

    fn star_term(&mut self) -> Result<Term> {
        let mut t = self.comp_term()?;
        loop {
            let op = if self.eat(&Tok::Star) {
                BinaryOp::Peleg
            } else if self.eat(&Tok::At) {
                BinaryOp::CoComp
            } else {
                return Ok(t);
            };
            let rhs = self.comp_term()?;
            t = Term::Binary(op, Box::new(t), Box::new(rhs));
        }
    }

    fn comp_term(&mut self) -> Result<Term> {
        let mut t = self.prefix_term()?;
        loop {
            let op = if self.eat(&Tok::Semi) {
                BinaryOp::Comp
            } else if self.eat(&Tok::Slash) {
                BinaryOp::LeftRes
            } else if self.eat(&Tok::Backslash) {
                BinaryOp::RightRes
            } else {
                return Ok(t);
            };
            let rhs = self.prefix_term()?;
            t = Term::Binary(op, Box::new(t), Box::new(rhs));
        }
    }

    fn prefix_term(&mut self) -> Result<Term> {
        if self.eat(&Tok::Tilde) {
            let inner = self.prefix_term()?;
            return Ok(Term::Unary(UnaryOp::Complement, Box::new(inner)));
        }
        self.postfix_term()
    }

    fn postfix_term(&mut self) -> Result<Term> {
        let mut t = self.primary_term()?;
        loop {
            let op = if self.eat(&Tok::Caret) {
                UnaryOp::Converse
            } else if self.eat(&Tok::CaretI) {
                UnaryOp::InnerCompl
            } else if self.eat(&Tok::CaretD) {
                UnaryOp::Dual
            } else {
                return Ok(t);
            };
            t = Term::Unary(op, Box::new(t));
        }
    }

    fn const_args(&mut self) -> Result<Vec<ObjType>> {
        let mut args = Vec::new();
        if self.eat(&Tok::LBracket) {
            loop {
                args.push(self.objtype()?);
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
            self.expect(&Tok::RBracket, "']'")?;
        }
        Ok(args)
    }

    fn primary_term(&mut self) -> Result<Term> {
        if self.eat(&Tok::LParen) {
            let t = self.term()?;
            self.expect(&Tok::RParen, "')'")?;
            return Ok(t);
        }
        if let Some(Tok::Int(0)) = self.peek() {
            self.bump();
            let args = self.const_args()?;
            return self.constant(ConstName::Zero, args);
        }
        let unary_fns: &[(&str, UnaryOp)] = &[
            ("up", UnaryOp::Up),
            ("down", UnaryOp::Down),
            ("conv", UnaryOp::Conv),
            ("dom", UnaryOp::Dom),
            ("plift", UnaryOp::Plift),
            ("klift", UnaryOp::Klift),
        ];
        for &(kw, op) in unary_fns {
            if self.peek_keyword(kw) {
                self.bump();
                self.expect(&Tok::LParen, &format!("'(' after {kw}"))?;
                let inner = self.term()?;
                self.expect(&Tok::RParen, "')'")?;
                return Ok(Term::Unary(op, Box::new(inner)));
            }
        }
        if self.peek_keyword("syq") {
            self.bump();
            self.expect(&Tok::LParen, "'(' after syq")?;
            let a = self.term()?;
            self.expect(&Tok::Comma, "','")?;
            let b = self.term()?;
            self.expect(&Tok::RParen, "')'")?;
            return Ok(Term::Binary(BinaryOp::Syq, Box::new(a), Box::new(b)));
        }
        let consts: &[(&str, ConstName)] = &[
            ("U", ConstName::Univ),
            ("Id", ConstName::Id),
            ("one", ConstName::One),
            ("lu", ConstName::Lu),
            ("li", ConstName::Li),
            ("eps", ConstName::Eps),
            ("Om", ConstName::Om),
            ("Cr", ConstName::Cr),
            ("Au", ConstName::Au),
            ("Ai", ConstName::Ai),
        ];
        for &(kw, c) in consts {
            if self.peek_keyword(kw) {
                self.bump();
                let args = self.const_args()?;
                return self.constant(c, args);
            }
        }
        let name = self.ident("term")?;
        Ok(Term::Var(name))
    }

    fn constant(&mut self, c: ConstName, args: Vec<ObjType>) -> Result<Term> {
        if !args.is_empty() && args.len() != c.arity() {
            return Err(self.err_here(format!(
                "constant {} takes {} type argument(s), got {}",
                c.spelling(),
                c.arity(),
                args.len()
            )));
        }
        Ok(Term::Const(c, args))
    }

    // ---- formulas ----
    fn formula(&mut self) -> Result<Formula> {
        let lhs = self.or_formula()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.formula()?; // right associative
            return Ok(Formula::Implies(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn or_formula(&mut self) -> Result<Formula> {
        let mut f = self.and_formula()?;
        while self.eat_keyword("or") {
            let rhs = self.and_formula()?;
            f = Formula::Or(Box::new(f), Box::new(rhs));
        }
        Ok(f)
    }

    fn and_formula(&mut self) -> Result<Formula> {
        let mut f = self.not_formula()?;
        while self.eat_keyword("and") {
            let rhs = self.not_formula()?;
            f = Formula::And(Box::new(f), Box::new(rhs));
        }
        Ok(f)
    }

    fn not_formula(&mut self) -> Result<Formula> {
        if self.eat_keyword("not") {
            let inner = self.not_formula()?;
            return Ok(Formula::Not(Box::new(inner)));
        }
        self.atom_formula()
    }

    fn binders(&mut self) -> Result<Vec<(String, ObjType, ObjType)>> {
        let mut vars = Vec::new();
        loop {
            let name = self.ident("variable name")?;
            self.expect(&Tok::Colon, "':' after variable name")?;
            let src = self.objtype()?;
            self.expect(&Tok::TypeArrow, "'<->'")?;
            let tgt = self.objtype()?;
            vars.push((name, src, tgt));
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        Ok(vars)
    }

    fn atom_formula(&mut self) -> Result<Formula> {
        if self.eat_keyword("forall") {
            let vars = self.binders()?;
            self.expect(&Tok::Dot, "'.' after binders")?;
            let body = self.formula()?;
            return Ok(Formula::Quant {
                exists: false,
                vars,
                body: Box::new(body),
            });
        }
        if self.eat_keyword("exists") {
            let vars = self.binders()?;
            self.expect(&Tok::Dot, "'.' after binders")?;
            let body = self.formula()?;
            return Ok(Formula::Quant {
                exists: true,
                vars,
                body: Box::new(body),
            });
        }
        let preds: &[(&str, PredName)] = &[
            ("univalent", PredName::Univalent),
            ("total", PredName::Total),
            ("deterministic", PredName::Deterministic),
            ("inner_univalent", PredName::InnerUnivalent),
            ("inner_total", PredName::InnerTotal),
            ("inner_deterministic", PredName::InnerDeterministic),
            ("union_closed", PredName::UnionClosed),
            ("intersection_closed", PredName::IntersectionClosed),
            ("up_closed", PredName::UpClosed),
            ("down_closed", PredName::DownClosed),
            ("convex_closed", PredName::ConvexClosed),
        ];
        for &(kw, p) in preds {
            if self.peek_keyword(kw) {
                self.bump();
                self.expect(&Tok::LParen, &format!("'(' after {kw}"))?;
                let t = self.term()?;
                self.expect(&Tok::RParen, "')'")?;
                return Ok(Formula::Pred(p, t));
            }
        }
        // '(' may open a parenthesized formula or a parenthesized term of a
        // comparison; try the comparison first and backtrack.
        let save = self.pos;
        match self.comparison() {
            Ok(f) => Ok(f),
            Err(cmp_err) => {
                self.pos = save;
                if self.eat(&Tok::LParen) {
                    if let Ok(f) = self.formula() {
                        if self.eat(&Tok::RParen) {
                            return Ok(f);
                        }
                    }
                }
                self.pos = save;
                Err(cmp_err)
            }
        }
    }

    fn comparison(&mut self) -> Result<Formula> {
        let lhs = self.term()?;
        let op = match self.bump() {
            Some(Tok::Eq) => CmpOp::Eq,
            Some(Tok::Ne) => CmpOp::Ne,
            Some(Tok::Le) => CmpOp::Subset,
            Some(Tok::LeH) => CmpOp::LeqH,
            Some(Tok::LeS) => CmpOp::LeqS,
            Some(Tok::LeEM) => CmpOp::LeqEM,
            Some(Tok::EqH) => CmpOp::EqH,
            Some(Tok::EqS) => CmpOp::EqS,
            Some(Tok::EqEM) => CmpOp::EqEM,
            _ => {
                self.pos = self.pos.saturating_sub(1);
                return Err(self.err_here("expected a comparison operator"));
            }
        };
        let rhs = self.term()?;
        Ok(Formula::Cmp(op, lhs, rhs))
    }

    fn at_end(&self) -> bool {
        self.pos == self.toks.len()
    }
}

fn parser_for(src: &str, line: usize) -> Result<Parser> {
    Ok(Parser::new(Lexer::new(src, line).tokenize()?, line))
}

/// Parses a standalone term (the CLI `--expr` input).
pub fn parse_term(src: &str) -> Result<Term> {
    let mut p = parser_for(src, 1)?;
    let t = p.term()?;
    if !p.at_end() {
        return Err(p.err_here("trailing input after term"));
    }
    Ok(t)
}

/// Parses a standalone formula.
pub fn parse_formula(src: &str) -> Result<Formula> {
    let mut p = parser_for(src, 1)?;
    let f = p.formula()?;
    if !p.at_end() {
        return Err(p.err_here("trailing input after formula"));
    }
    Ok(f)
}

/// Parses a law file: `set` / `var` / `law` statements, line-oriented except
/// that a `law` body extends to the end of its line.
pub fn parse_law_file(src: &str) -> Result<LawFile> {
    let mut file = LawFile::default();
    for (i, raw_line) in src.lines().enumerate() {
        let lineno = i + 1;
        let line = match raw_line.find('#') {
            Some(pos) => &raw_line[..pos],
            None => raw_line,
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut p = parser_for(line, lineno)?;
        if p.eat_keyword("set") {
            // allow several `set` clauses on one line: set X = 1 set Y = 2
            loop {
                let name = p.ident("set name")?;
                p.expect(&Tok::Eq, "'='")?;
                let card = match p.bump() {
                    Some(Tok::Int(n)) => n,
                    _ => return Err(p.err_here("expected a cardinality")),
                };
                file.sets.push((name, card));
                if !p.eat_keyword("set") {
                    break;
                }
            }
            // a trailing `var`/`law` on the same line is also accepted
            if p.at_end() {
                continue;
            }
        }
        if p.eat_keyword("var") {
            loop {
                let mut vars = p.binders()?;
                file.vars.append(&mut vars);
                if !p.eat_keyword("var") {
                    break;
                }
            }
            if p.at_end() {
                continue;
            }
        }
        if p.eat_keyword("law") {
            let start = p.toks.get(p.pos).map(|&(_, _, c)| c - 1).unwrap_or(0);
            let f = p.formula()?;
            if !p.at_end() {
                return Err(p.err_here("trailing input after law"));
            }
            let text = line[start.min(line.len())..].trim().to_string();
            file.laws.push(Law { text, formula: f });
            continue;
        }
        if !p.at_end() {
            return Err(p.err_here("expected 'set', 'var' or 'law'"));
        }
    }
    Ok(file)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_terms() {
        let t = parse_term("R icup R").unwrap();
        assert_eq!(
            t,
            Term::Binary(
                BinaryOp::Icup,
                Box::new(Term::Var("R".into())),
                Box::new(Term::Var("R".into()))
            )
        );
        // precedence: postfix > ; > * > icap > icup > -
        let t = parse_term("R ; S^ * T icap V icup W - Q").unwrap();
        let expect = parse_term("((((R ; (S^)) * T) icap V) icup W) - Q").unwrap();
        assert_eq!(t, expect);
        assert!(matches!(t, Term::Binary(BinaryOp::Diff, _, _)));
        let t = parse_term("one[X] * R").unwrap();
        assert_eq!(
            t,
            Term::Binary(
                BinaryOp::Peleg,
                Box::new(Term::Const(ConstName::One, vec![ObjType::base("X")])),
                Box::new(Term::Var("R".into()))
            )
        );
        assert!(parse_term("one[X,Y]").is_err());
        let t = parse_term("0[X,P(Y)] * R").unwrap();
        match t {
            Term::Binary(BinaryOp::Peleg, lhs, _) => assert_eq!(
                *lhs,
                Term::Const(
                    ConstName::Zero,
                    vec![ObjType::base("X"), ObjType::pow(ObjType::base("Y"))]
                )
            ),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parses_formulas() {
        let f = parse_formula("R icup R = R").unwrap();
        assert!(matches!(f, Formula::Cmp(CmpOp::Eq, _, _)));
        let f = parse_formula("not (R = S) and R <=H S -> exists T : X <-> P(Y) . T != R").unwrap();
        assert!(matches!(f, Formula::Implies(_, _)));
        let f = parse_formula("(R = S)").unwrap();
        assert!(matches!(f, Formula::Cmp(CmpOp::Eq, _, _)));
        let f = parse_formula("(R ; S) = T").unwrap();
        assert!(matches!(f, Formula::Cmp(CmpOp::Eq, _, _)));
        assert!(parse_formula("R = ").is_err());
        let f = parse_formula("up_closed(R) -> R =S up(R)").unwrap();
        assert!(matches!(f, Formula::Implies(_, _)));
    }

    #[test]
    fn parses_law_files() {
        let src = "set X=1 set Y=2\nvar R:X<->P(Y)\nlaw R icup R = R\n";
        let file = parse_law_file(src).unwrap();
        assert_eq!(file.sets, vec![("X".into(), 1), ("Y".into(), 2)]);
        assert_eq!(file.vars.len(), 1);
        assert_eq!(file.laws.len(), 1);
        assert_eq!(file.laws[0].text, "R icup R = R");
        assert_eq!(file.laws[0].formula.free_vars(), vec!["R".to_string()]);

        // single-line form from the grammar example
        let file = parse_law_file("set X=1 set Y=2 var R:X<->P(Y) law R icup R = R").unwrap();
        assert_eq!(file.sets.len(), 2);
        assert_eq!(file.laws.len(), 1);

        // comments and blank lines
        let file = parse_law_file("# nothing\n\nset X = 2 # trailing\n").unwrap();
        assert_eq!(file.sets, vec![("X".into(), 2)]);

        assert!(matches!(
            parse_law_file("sety X = 1"),
            Err(Error::SyntaxError { line: 1, .. })
        ));
    }

    #[test]
    fn render_round_trip() {
        for src in [
            "R icup R = R",
            "(R * S) * T <= R * (S * T)",
            "forall R : X <-> P(Y) . R icup lu[X,Y] = R",
            "exists R : X <-> P(Y), S : X <-> P(Y) . not (R icap S = S icap R)",
            "~(R cup S) = ~R cap ~S",
            "syq(eps[Y],~eps[Y]) = Cr[Y]",
            "dom(R) ; R = R and (R^)^ = R",
            "up(R) =S R or down(R) =H R or conv(R) =EM R",
            "R \\ S = ((S^) / (R^))^",
            "plift(down(one[Y])) = Om[Y]^",
            "R @ li[X,Y] != 0 -> inner_total(R)",
        ] {
            let f = parse_formula(src).unwrap();
            let rendered = f.to_string();
            let reparsed = parse_formula(&rendered)
                .unwrap_or_else(|e| panic!("rendered {rendered:?} failed: {e}"));
            assert_eq!(reparsed, f, "round trip of {src:?} via {rendered:?}");
        }
    }
}
