//! Untyped ASTs for the law DSL, plus renderers. `Display` output parses
//! back to the same AST, which the tests rely on.

use std::fmt;

use crate::finsets::ObjType;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstName {
    Zero,
    Univ,
    Id,
    One,
    Lu,
    Li,
    Eps,
    Om,
    Cr,
    Au,
    Ai,
}

impl ConstName {
    pub fn spelling(self) -> &'static str {
        match self {
            ConstName::Zero => "0",
            ConstName::Univ => "U",
            ConstName::Id => "Id",
            ConstName::One => "one",
            ConstName::Lu => "lu",
            ConstName::Li => "li",
            ConstName::Eps => "eps",
            ConstName::Om => "Om",
            ConstName::Cr => "Cr",
            ConstName::Au => "Au",
            ConstName::Ai => "Ai",
        }
    }

    /// Number of explicit type arguments accepted (besides zero).
    pub fn arity(self) -> usize {
        match self {
            ConstName::Zero | ConstName::Univ => 2,
            ConstName::Id | ConstName::One | ConstName::Eps | ConstName::Om | ConstName::Cr => 1,
            ConstName::Lu | ConstName::Li | ConstName::Au | ConstName::Ai => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnaryOp {
    Complement, // ~R
    Converse,   // R^
    InnerCompl, // R^i
    Dual,       // R^d
    Up,
    Down,
    Conv, // convex closure
    Dom,
    Plift,
    Klift,
}

impl UnaryOp {
    pub fn function_name(self) -> Option<&'static str> {
        match self {
            UnaryOp::Up => Some("up"),
            UnaryOp::Down => Some("down"),
            UnaryOp::Conv => Some("conv"),
            UnaryOp::Dom => Some("dom"),
            UnaryOp::Plift => Some("plift"),
            UnaryOp::Klift => Some("klift"),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinaryOp {
    Comp,     // ;
    Peleg,    // *
    CoComp,   // @
    Cup,
    Cap,
    Diff,     // -
    Icup,
    Icap,
    LeftRes,  // /
    RightRes, // \
    Syq,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term {
    Var(String),
    Const(ConstName, Vec<ObjType>),
    Unary(UnaryOp, Box<Term>),
    Binary(BinaryOp, Box<Term>, Box<Term>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmpOp {
    Eq,
    Ne,
    Subset, // <=
    LeqH,   // <=H
    LeqS,   // <=S
    LeqEM,  // <=EM
    EqH,    // =H
    EqS,    // =S
    EqEM,   // =EM
}

impl CmpOp {
    pub fn spelling(self) -> &'static str {
        match self {
            CmpOp::Eq => "=",
            CmpOp::Ne => "!=",
            CmpOp::Subset => "<=",
            CmpOp::LeqH => "<=H",
            CmpOp::LeqS => "<=S",
            CmpOp::LeqEM => "<=EM",
            CmpOp::EqH => "=H",
            CmpOp::EqS => "=S",
            CmpOp::EqEM => "=EM",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PredName {
    Univalent,
    Total,
    Deterministic,
    InnerUnivalent,
    InnerTotal,
    InnerDeterministic,
    UnionClosed,
    IntersectionClosed,
    UpClosed,
    DownClosed,
    ConvexClosed,
}

impl PredName {
    pub fn spelling(self) -> &'static str {
        match self {
            PredName::Univalent => "univalent",
            PredName::Total => "total",
            PredName::Deterministic => "deterministic",
            PredName::InnerUnivalent => "inner_univalent",
            PredName::InnerTotal => "inner_total",
            PredName::InnerDeterministic => "inner_deterministic",
            PredName::UnionClosed => "union_closed",
            PredName::IntersectionClosed => "intersection_closed",
            PredName::UpClosed => "up_closed",
            PredName::DownClosed => "down_closed",
            PredName::ConvexClosed => "convex_closed",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    Cmp(CmpOp, Term, Term),
    Pred(PredName, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Quant {
        exists: bool,
        vars: Vec<(String, ObjType, ObjType)>,
        body: Box<Formula>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Law {
    /// Source text, as written in the law file.
    pub text: String,
    pub formula: Formula,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LawFile {
    pub sets: Vec<(String, usize)>,
    pub vars: Vec<(String, ObjType, ObjType)>,
    pub laws: Vec<Law>,
}

// Rendering: parenthesize by precedence so parse(render(x)) == x.
// Precedence levels (loosest to tightest): diff 1, cup/icup 2, cap/icap 3,
// peleg/cocomp 4, comp/residuals 5, prefix ~ 6, postfix 7, atoms 8.

fn prec(op: BinaryOp) -> u8 {
    match op {
        BinaryOp::Diff => 1,
        BinaryOp::Cup | BinaryOp::Icup => 2,
        BinaryOp::Cap | BinaryOp::Icap => 3,
        BinaryOp::Peleg | BinaryOp::CoComp => 4,
        BinaryOp::Comp | BinaryOp::LeftRes | BinaryOp::RightRes => 5,
        BinaryOp::Syq => 8,
    }
}

fn fmt_term(t: &Term, parent: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match t {
        Term::Var(name) => write!(f, "{name}"),
        Term::Const(c, args) => {
            write!(f, "{}", c.spelling())?;
            if !args.is_empty() {
                write!(f, "[")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, "]")?;
            }
            Ok(())
        }
        Term::Unary(op, inner) => match op {
            UnaryOp::Complement => {
                write!(f, "~")?;
                fmt_term(inner, 6, f)
            }
            UnaryOp::Converse | UnaryOp::InnerCompl | UnaryOp::Dual => {
                fmt_term(inner, 7, f)?;
                write!(
                    f,
                    "{}",
                    match op {
                        UnaryOp::Converse => "^",
                        UnaryOp::InnerCompl => "^i",
                        _ => "^d",
                    }
                )
            }
            _ => {
                write!(f, "{}(", op.function_name().expect("named unary"))?;
                fmt_term(inner, 0, f)?;
                write!(f, ")")
            }
        },
        Term::Binary(BinaryOp::Syq, a, b) => {
            write!(f, "syq(")?;
            fmt_term(a, 0, f)?;
            write!(f, ",")?;
            fmt_term(b, 0, f)?;
            write!(f, ")")
        }
        Term::Binary(op, a, b) => {
            let p = prec(*op);
            if parent > p {
                write!(f, "(")?;
            }
            // all binary operators are rendered left-associative
            fmt_term(a, p, f)?;
            let sym = match op {
                BinaryOp::Comp => " ; ",
                BinaryOp::Peleg => " * ",
                BinaryOp::CoComp => " @ ",
                BinaryOp::Cup => " cup ",
                BinaryOp::Cap => " cap ",
                BinaryOp::Diff => " - ",
                BinaryOp::Icup => " icup ",
                BinaryOp::Icap => " icap ",
                BinaryOp::LeftRes => " / ",
                BinaryOp::RightRes => " \\ ",
                BinaryOp::Syq => unreachable!(),
            };
            write!(f, "{sym}")?;
            fmt_term(b, p + 1, f)?;
            if parent > p {
                write!(f, ")")?;
            }
            Ok(())
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_term(self, 0, f)
    }
}

// Formula precedence: -> 1 (right), or 2, and 3, not 4, atoms 5.
fn fmt_formula(x: &Formula, parent: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match x {
        Formula::Cmp(op, a, b) => {
            if parent > 4 {
                write!(f, "(")?;
            }
            write!(f, "{a} {} {b}", op.spelling())?;
            if parent > 4 {
                write!(f, ")")?;
            }
            Ok(())
        }
        Formula::Pred(p, t) => write!(f, "{}({t})", p.spelling()),
        Formula::Not(inner) => {
            write!(f, "not ")?;
            fmt_formula(inner, 4, f)
        }
        Formula::And(a, b) => {
            if parent > 3 {
                write!(f, "(")?;
            }
            fmt_formula(a, 3, f)?;
            write!(f, " and ")?;
            fmt_formula(b, 4, f)?;
            if parent > 3 {
                write!(f, ")")?;
            }
            Ok(())
        }
        Formula::Or(a, b) => {
            if parent > 2 {
                write!(f, "(")?;
            }
            fmt_formula(a, 2, f)?;
            write!(f, " or ")?;
            fmt_formula(b, 3, f)?;
            if parent > 2 {
                write!(f, ")")?;
            }
            Ok(())
        }
        Formula::Implies(a, b) => {
            if parent > 1 {
                write!(f, "(")?;
            }
            fmt_formula(a, 2, f)?;
            write!(f, " -> ")?;
            fmt_formula(b, 1, f)?;
            if parent > 1 {
                write!(f, ")")?;
            }
            Ok(())
        }
        Formula::Quant { exists, vars, body } => {
            if parent > 1 {
                write!(f, "(")?;
            }
            write!(f, "{}", if *exists { "exists " } else { "forall " })?;
            for (i, (name, src, tgt)) in vars.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{name} : {src} <-> {tgt}")?;
            }
            write!(f, " . ")?;
            fmt_formula(body, 1, f)?;
            if parent > 1 {
                write!(f, ")")?;
            }
            Ok(())
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_formula(self, 0, f)
    }
}

impl Formula {
    /// Free variables in first-occurrence order.
    pub fn free_vars(&self) -> Vec<String> {
        fn term_vars(t: &Term, bound: &[String], out: &mut Vec<String>) {
            match t {
                Term::Var(name) => {
                    if !bound.contains(name) && !out.contains(name) {
                        out.push(name.clone());
                    }
                }
                Term::Const(..) => {}
                Term::Unary(_, a) => term_vars(a, bound, out),
                Term::Binary(_, a, b) => {
                    term_vars(a, bound, out);
                    term_vars(b, bound, out);
                }
            }
        }
        fn go(f: &Formula, bound: &mut Vec<String>, out: &mut Vec<String>) {
            match f {
                Formula::Cmp(_, a, b) => {
                    term_vars(a, bound, out);
                    term_vars(b, bound, out);
                }
                Formula::Pred(_, t) => term_vars(t, bound, out),
                Formula::Not(a) => go(a, bound, out),
                Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                    go(a, bound, out);
                    go(b, bound, out);
                }
                Formula::Quant { vars, body, .. } => {
                    let n = bound.len();
                    bound.extend(vars.iter().map(|(name, _, _)| name.clone()));
                    go(body, bound, out);
                    bound.truncate(n);
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }
}
