//! Unification-based type inference for the law DSL. Every term node ends up
//! with a concrete relation typing; underconstrained constants are reported
//! as ambiguity errors.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::finsets::ObjType;
use crate::lawlab::ast::{BinaryOp, CmpOp, ConstName, Formula, PredName, Term, UnaryOp};

/// Type expressions during inference: object types with metavariables.
#[derive(Debug, Clone, PartialEq, Eq)]
enum TE {
    Var(usize),
    Base(String),
    Pow(Box<TE>),
}

impl TE {
    fn from_obj(t: &ObjType) -> TE {
        match t {
            ObjType::Base(name) => TE::Base(name.clone()),
            ObjType::Pow(inner) => TE::Pow(Box::new(TE::from_obj(inner))),
        }
    }
}

struct Unifier {
    subst: Vec<Option<TE>>,
}

impl Unifier {
    fn new() -> Unifier {
        Unifier { subst: Vec::new() }
    }

    fn fresh(&mut self) -> TE {
        self.subst.push(None);
        TE::Var(self.subst.len() - 1)
    }

    fn shorten(&self, t: &TE) -> TE {
        match t {
            TE::Var(i) => match &self.subst[*i] {
                Some(bound) => self.shorten(bound),
                None => t.clone(),
            },
            _ => t.clone(),
        }
    }

    fn occurs(&self, i: usize, t: &TE) -> bool {
        match self.shorten(t) {
            TE::Var(j) => i == j,
            TE::Base(_) => false,
            TE::Pow(inner) => self.occurs(i, &inner),
        }
    }

    fn unify(&mut self, a: &TE, b: &TE) -> Result<()> {
        let a = self.shorten(a);
        let b = self.shorten(b);
        match (&a, &b) {
            (TE::Var(i), TE::Var(j)) if i == j => Ok(()),
            (TE::Var(i), other) | (other, TE::Var(i)) => {
                if self.occurs(*i, other) {
                    return Err(Error::TypeError("cyclic type constraint".into()));
                }
                self.subst[*i] = Some(other.clone());
                Ok(())
            }
            (TE::Base(x), TE::Base(y)) => {
                if x == y {
                    Ok(())
                } else {
                    Err(Error::TypeError(format!(
                        "mismatched object types {x} and {y}"
                    )))
                }
            }
            (TE::Pow(x), TE::Pow(y)) => self.unify(x, y),
            _ => Err(Error::TypeError(format!(
                "cannot unify {} with {}",
                self.describe(&a),
                self.describe(&b)
            ))),
        }
    }

    fn describe(&self, t: &TE) -> String {
        match self.shorten(t) {
            TE::Var(i) => format!("?{i}"),
            TE::Base(name) => name,
            TE::Pow(inner) => format!("P({})", self.describe(&inner)),
        }
    }

    fn resolve(&self, t: &TE) -> Result<ObjType> {
        match self.shorten(t) {
            TE::Var(_) => Err(Error::TypeError(
                "ambiguous typing: add explicit type arguments".into(),
            )),
            TE::Base(name) => Ok(ObjType::Base(name)),
            TE::Pow(inner) => Ok(ObjType::pow(self.resolve(&inner)?)),
        }
    }
}

/// A term with resolved constant types; variables are looked up in the
/// evaluation environment by name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TTerm {
    Var(String),
    Const(ConstName, ObjType, ObjType),
    Unary(UnaryOp, Box<TTerm>),
    Binary(BinaryOp, Box<TTerm>, Box<TTerm>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TFormula {
    Cmp(CmpOp, TTerm, TTerm),
    Pred(PredName, TTerm),
    Not(Box<TFormula>),
    And(Box<TFormula>, Box<TFormula>),
    Or(Box<TFormula>, Box<TFormula>),
    Implies(Box<TFormula>, Box<TFormula>),
    Quant {
        exists: bool,
        vars: Vec<(String, ObjType, ObjType)>,
        body: Box<TFormula>,
    },
}

impl TFormula {
    /// Strips leading existential quantifiers, returning their binders; used
    /// by witness search.
    pub fn strip_leading_exists(self) -> (Vec<(String, ObjType, ObjType)>, TFormula) {
        let mut binders = Vec::new();
        let mut f = self;
        while let TFormula::Quant {
            exists: true,
            vars,
            body,
        } = f
        {
            binders.extend(vars);
            f = *body;
        }
        (binders, f)
    }
}

// Inference-time mirrors carrying TE before resolution.
enum ITerm {
    Var(String),
    Const(ConstName, TE, TE),
    Unary(UnaryOp, Box<ITerm>),
    Binary(BinaryOp, Box<ITerm>, Box<ITerm>),
}

enum IFormula {
    Cmp(CmpOp, ITerm, ITerm),
    Pred(PredName, ITerm),
    Not(Box<IFormula>),
    And(Box<IFormula>, Box<IFormula>),
    Or(Box<IFormula>, Box<IFormula>),
    Implies(Box<IFormula>, Box<IFormula>),
    Quant {
        exists: bool,
        vars: Vec<(String, ObjType, ObjType)>,
        body: Box<IFormula>,
    },
}

struct Checker<'a> {
    uni: Unifier,
    known_sets: &'a [(String, usize)],
}

type Ctx = HashMap<String, (TE, TE)>;

impl<'a> Checker<'a> {
    fn check_bases(&self, t: &ObjType) -> Result<()> {
        match t {
            ObjType::Base(name) => {
                if self.known_sets.iter().any(|(n, _)| n == name) {
                    Ok(())
                } else {
                    Err(Error::TypeError(format!("undeclared set {name}")))
                }
            }
            ObjType::Pow(inner) => self.check_bases(inner),
        }
    }

    fn const_type(&mut self, c: ConstName, args: &[ObjType]) -> Result<(TE, TE)> {
        for a in args {
            self.check_bases(a)?;
        }
        let arg = |i: usize, me: &mut Self| -> TE {
            args.get(i).map(TE::from_obj).unwrap_or_else(|| me.fresh_te())
        };
        Ok(match c {
            ConstName::Zero | ConstName::Univ => (arg(0, self), arg(1, self)),
            ConstName::Id => {
                let t = arg(0, self);
                (t.clone(), t)
            }
            ConstName::One => {
                let x = arg(0, self);
                (x.clone(), TE::Pow(Box::new(x)))
            }
            ConstName::Lu | ConstName::Li | ConstName::Au | ConstName::Ai => {
                let x = arg(0, self);
                let y = arg(1, self);
                (x, TE::Pow(Box::new(y)))
            }
            ConstName::Eps => {
                let y = arg(0, self);
                (y.clone(), TE::Pow(Box::new(y)))
            }
            ConstName::Om | ConstName::Cr => {
                let y = arg(0, self);
                let py = TE::Pow(Box::new(y));
                (py.clone(), py)
            }
        })
    }

    fn fresh_te(&mut self) -> TE {
        self.uni.fresh()
    }

    fn pow_fresh(&mut self) -> TE {
        let y = self.fresh_te();
        TE::Pow(Box::new(y))
    }

    fn infer_term(&mut self, t: &Term, ctx: &Ctx) -> Result<(ITerm, TE, TE)> {
        match t {
            Term::Var(name) => {
                let (src, tgt) = ctx
                    .get(name)
                    .cloned()
                    .ok_or_else(|| Error::TypeError(format!("undeclared variable {name}")))?;
                Ok((ITerm::Var(name.clone()), src, tgt))
            }
            Term::Const(c, args) => {
                let (src, tgt) = self.const_type(*c, args)?;
                Ok((
                    ITerm::Const(*c, src.clone(), tgt.clone()),
                    src,
                    tgt,
                ))
            }
            Term::Unary(op, inner) => {
                let (it, src, tgt) = self.infer_term(inner, ctx)?;
                let boxed = Box::new(it);
                let (rs, rt) = match op {
                    UnaryOp::Complement => (src, tgt),
                    UnaryOp::Converse => (tgt, src),
                    UnaryOp::InnerCompl
                    | UnaryOp::Dual
                    | UnaryOp::Up
                    | UnaryOp::Down
                    | UnaryOp::Conv => {
                        let p = self.pow_fresh();
                        self.uni.unify(&tgt, &p)?;
                        (src, tgt)
                    }
                    UnaryOp::Dom => (src.clone(), src),
                    UnaryOp::Plift | UnaryOp::Klift => {
                        let p = self.pow_fresh();
                        self.uni.unify(&tgt, &p)?;
                        (TE::Pow(Box::new(src)), tgt)
                    }
                };
                Ok((ITerm::Unary(*op, boxed), rs, rt))
            }
            Term::Binary(op, a, b) => {
                let (ia, asrc, atgt) = self.infer_term(a, ctx)?;
                let (ib, bsrc, btgt) = self.infer_term(b, ctx)?;
                let node = |ia, ib| ITerm::Binary(*op, Box::new(ia), Box::new(ib));
                let (rs, rt) = match op {
                    BinaryOp::Comp => {
                        self.uni.unify(&atgt, &bsrc)?;
                        (asrc, btgt)
                    }
                    BinaryOp::Peleg | BinaryOp::CoComp => {
                        // a : X <-> P(Y), b : Y <-> P(Z)
                        self.uni.unify(&atgt, &TE::Pow(Box::new(bsrc.clone())))?;
                        let p = self.pow_fresh();
                        self.uni.unify(&btgt, &p)?;
                        (asrc, btgt)
                    }
                    BinaryOp::Cup | BinaryOp::Cap | BinaryOp::Diff => {
                        self.uni.unify(&asrc, &bsrc)?;
                        self.uni.unify(&atgt, &btgt)?;
                        (asrc, atgt)
                    }
                    BinaryOp::Icup | BinaryOp::Icap => {
                        self.uni.unify(&asrc, &bsrc)?;
                        self.uni.unify(&atgt, &btgt)?;
                        let p = self.pow_fresh();
                        self.uni.unify(&atgt, &p)?;
                        (asrc, atgt)
                    }
                    BinaryOp::LeftRes => {
                        // a : X <-> Z, b : Y <-> Z, result X <-> Y
                        self.uni.unify(&atgt, &btgt)?;
                        (asrc, bsrc)
                    }
                    BinaryOp::RightRes | BinaryOp::Syq => {
                        // a : Z <-> X, b : Z <-> Y, result X <-> Y
                        self.uni.unify(&asrc, &bsrc)?;
                        (atgt, btgt)
                    }
                };
                Ok((node(ia, ib), rs, rt))
            }
        }
    }

    fn infer_formula(&mut self, f: &Formula, ctx: &Ctx) -> Result<IFormula> {
        match f {
            Formula::Cmp(op, a, b) => {
                let (ia, asrc, atgt) = self.infer_term(a, ctx)?;
                let (ib, bsrc, btgt) = self.infer_term(b, ctx)?;
                self.uni.unify(&asrc, &bsrc)?;
                self.uni.unify(&atgt, &btgt)?;
                if matches!(
                    op,
                    CmpOp::LeqH
                        | CmpOp::LeqS
                        | CmpOp::LeqEM
                        | CmpOp::EqH
                        | CmpOp::EqS
                        | CmpOp::EqEM
                ) {
                    let p = self.pow_fresh();
                    self.uni.unify(&atgt, &p)?;
                }
                Ok(IFormula::Cmp(*op, ia, ib))
            }
            Formula::Pred(p, t) => {
                let (it, _src, tgt) = self.infer_term(t, ctx)?;
                if matches!(
                    p,
                    PredName::InnerUnivalent
                        | PredName::InnerTotal
                        | PredName::InnerDeterministic
                        | PredName::UnionClosed
                        | PredName::IntersectionClosed
                        | PredName::UpClosed
                        | PredName::DownClosed
                        | PredName::ConvexClosed
                ) {
                    let pw = self.pow_fresh();
                    self.uni.unify(&tgt, &pw)?;
                }
                Ok(IFormula::Pred(*p, it))
            }
            Formula::Not(a) => Ok(IFormula::Not(Box::new(self.infer_formula(a, ctx)?))),
            Formula::And(a, b) => Ok(IFormula::And(
                Box::new(self.infer_formula(a, ctx)?),
                Box::new(self.infer_formula(b, ctx)?),
            )),
            Formula::Or(a, b) => Ok(IFormula::Or(
                Box::new(self.infer_formula(a, ctx)?),
                Box::new(self.infer_formula(b, ctx)?),
            )),
            Formula::Implies(a, b) => Ok(IFormula::Implies(
                Box::new(self.infer_formula(a, ctx)?),
                Box::new(self.infer_formula(b, ctx)?),
            )),
            Formula::Quant { exists, vars, body } => {
                let mut inner = ctx.clone();
                for (name, src, tgt) in vars {
                    self.check_bases(src)?;
                    self.check_bases(tgt)?;
                    inner.insert(name.clone(), (TE::from_obj(src), TE::from_obj(tgt)));
                }
                let ib = self.infer_formula(body, &inner)?;
                Ok(IFormula::Quant {
                    exists: *exists,
                    vars: vars.clone(),
                    body: Box::new(ib),
                })
            }
        }
    }

    fn finish_term(&self, t: &ITerm) -> Result<TTerm> {
        Ok(match t {
            ITerm::Var(name) => TTerm::Var(name.clone()),
            ITerm::Const(c, src, tgt) => {
                TTerm::Const(*c, self.uni.resolve(src)?, self.uni.resolve(tgt)?)
            }
            ITerm::Unary(op, a) => TTerm::Unary(*op, Box::new(self.finish_term(a)?)),
            ITerm::Binary(op, a, b) => TTerm::Binary(
                *op,
                Box::new(self.finish_term(a)?),
                Box::new(self.finish_term(b)?),
            ),
        })
    }

    fn finish_formula(&self, f: &IFormula) -> Result<TFormula> {
        Ok(match f {
            IFormula::Cmp(op, a, b) => {
                TFormula::Cmp(*op, self.finish_term(a)?, self.finish_term(b)?)
            }
            IFormula::Pred(p, t) => TFormula::Pred(*p, self.finish_term(t)?),
            IFormula::Not(a) => TFormula::Not(Box::new(self.finish_formula(a)?)),
            IFormula::And(a, b) => TFormula::And(
                Box::new(self.finish_formula(a)?),
                Box::new(self.finish_formula(b)?),
            ),
            IFormula::Or(a, b) => TFormula::Or(
                Box::new(self.finish_formula(a)?),
                Box::new(self.finish_formula(b)?),
            ),
            IFormula::Implies(a, b) => TFormula::Implies(
                Box::new(self.finish_formula(a)?),
                Box::new(self.finish_formula(b)?),
            ),
            IFormula::Quant { exists, vars, body } => TFormula::Quant {
                exists: *exists,
                vars: vars.clone(),
                body: Box::new(self.finish_formula(body)?),
            },
        })
    }
}

fn build_ctx(checker: &Checker, vars: &[(String, ObjType, ObjType)]) -> Result<Ctx> {
    let mut ctx = Ctx::new();
    for (name, src, tgt) in vars {
        checker.check_bases(src)?;
        checker.check_bases(tgt)?;
        ctx.insert(name.clone(), (TE::from_obj(src), TE::from_obj(tgt)));
    }
    Ok(ctx)
}

/// Typechecks a formula against declared sets and variables. Returns the
/// typed formula plus the typings of its free variables in first-occurrence
/// order (the search variables for check/find).
pub fn typecheck_formula(
    sets: &[(String, usize)],
    vars: &[(String, ObjType, ObjType)],
    f: &Formula,
) -> Result<(TFormula, Vec<(String, ObjType, ObjType)>)> {
    let mut checker = Checker {
        uni: Unifier::new(),
        known_sets: sets,
    };
    let ctx = build_ctx(&checker, vars)?;
    let inferred = checker.infer_formula(f, &ctx)?;
    let typed = checker.finish_formula(&inferred)?;
    let free = f.free_vars();
    let free_typed = free
        .into_iter()
        .map(|name| {
            vars.iter()
                .find(|(n, _, _)| *n == name)
                .cloned()
                .ok_or_else(|| Error::TypeError(format!("undeclared variable {name}")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((typed, free_typed))
}

/// Typechecks a standalone term (the CLI eval path).
pub fn typecheck_term(
    sets: &[(String, usize)],
    vars: &[(String, ObjType, ObjType)],
    t: &Term,
) -> Result<(TTerm, ObjType, ObjType)> {
    let mut checker = Checker {
        uni: Unifier::new(),
        known_sets: sets,
    };
    let ctx = build_ctx(&checker, vars)?;
    let (it, src, tgt) = checker.infer_term(t, &ctx)?;
    let typed = checker.finish_term(&it)?;
    Ok((
        typed,
        checker.uni.resolve(&src)?,
        checker.uni.resolve(&tgt)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lawlab::parser::{parse_formula, parse_term};

    fn sets() -> Vec<(String, usize)> {
        vec![("X".into(), 1), ("Y".into(), 2)]
    }

    fn vars() -> Vec<(String, ObjType, ObjType)> {
        vec![
            (
                "R".into(),
                ObjType::base("X"),
                ObjType::pow(ObjType::base("Y")),
            ),
            (
                "S".into(),
                ObjType::base("X"),
                ObjType::pow(ObjType::base("Y")),
            ),
        ]
    }

    #[test]
    fn infers_constant_types() {
        let (t, src, tgt) =
            typecheck_term(&sets(), &vars(), &parse_term("R icup lu").unwrap()).unwrap();
        assert_eq!(src, ObjType::base("X"));
        assert_eq!(tgt, ObjType::pow(ObjType::base("Y")));
        match t {
            TTerm::Binary(BinaryOp::Icup, _, rhs) => {
                assert_eq!(
                    *rhs,
                    TTerm::Const(
                        ConstName::Lu,
                        ObjType::base("X"),
                        ObjType::pow(ObjType::base("Y"))
                    )
                );
            }
            other => panic!("unexpected {other:?}"),
        }
        // one[X] * R : X <-> P(Y)
        let (_, src, tgt) =
            typecheck_term(&sets(), &vars(), &parse_term("one[X] * R").unwrap()).unwrap();
        assert_eq!(src, ObjType::base("X"));
        assert_eq!(tgt, ObjType::pow(ObjType::base("Y")));
    }

    #[test]
    fn rejects_ill_typed() {
        // R ; S : P(Y) must match X
        assert!(matches!(
            typecheck_term(&sets(), &vars(), &parse_term("R ; S").unwrap()),
            Err(Error::TypeError(_))
        ));
        // converse then Peleg breaks the powerset requirement
        assert!(typecheck_term(&sets(), &vars(), &parse_term("R^ * R").unwrap()).is_err());
        // icup on a non-powerset target
        assert!(typecheck_term(&sets(), &vars(), &parse_term("dom(R) icup dom(R)").unwrap()).is_err());
        // undeclared set in annotation
        assert!(matches!(
            typecheck_term(&sets(), &vars(), &parse_term("one[Z]").unwrap()),
            Err(Error::TypeError(_))
        ));
        // ambiguous: bare eps with nothing to pin Y
        assert!(matches!(
            typecheck_term(&sets(), &vars(), &parse_term("eps").unwrap()),
            Err(Error::TypeError(_))
        ));
    }

    #[test]
    fn formula_level_constraints() {
        let (tf, free) =
            typecheck_formula(&sets(), &vars(), &parse_formula("R <=H S").unwrap()).unwrap();
        assert!(matches!(tf, TFormula::Cmp(CmpOp::LeqH, _, _)));
        assert_eq!(free.len(), 2);
        // <=H on plain relations (after dom) is ill-typed
        assert!(typecheck_formula(&sets(), &vars(), &parse_formula("dom(R) <=H dom(S)").unwrap())
            .is_err());
        // quantified variable shadows and leaves no free occurrence
        let f = parse_formula("exists T : X <-> P(Y) . T icup R = T").unwrap();
        let (_, free) = typecheck_formula(&sets(), &vars(), &f).unwrap();
        assert_eq!(free.len(), 1);
        assert_eq!(free[0].0, "R");
    }

    #[test]
    fn eps_pinned_through_unification() {
        // eps * up(R): eps : Y <-> P(Y) forced by R's source? here eps must
        // have inner type equal to R's source X
        let src_formula = parse_formula("eps * up(R) = up(R)").unwrap();
        // eps : ? <-> P(X) composed with R : X <-> P(Y) -- pins eps = eps[X]
        let (tf, _) = typecheck_formula(&sets(), &vars(), &src_formula).unwrap();
        fn find_eps(t: &TTerm) -> Option<(ObjType, ObjType)> {
            match t {
                TTerm::Const(ConstName::Eps, s, g) => Some((s.clone(), g.clone())),
                TTerm::Var(_) | TTerm::Const(..) => None,
                TTerm::Unary(_, a) => find_eps(a),
                TTerm::Binary(_, a, b) => find_eps(a).or_else(|| find_eps(b)),
            }
        }
        let eps_typing = match &tf {
            TFormula::Cmp(_, lhs, _) => find_eps(lhs).expect("eps in lhs"),
            other => panic!("unexpected {other:?}"),
        };
        assert_eq!(eps_typing.0, ObjType::base("X"));
        assert_eq!(eps_typing.1, ObjType::pow(ObjType::base("X")));
    }
}
