//! Evaluation of typed terms and formulas against a universe and an
//! environment of relation bindings.

use std::collections::HashMap;

use crate::closures::{self, ClosureKind, PreorderKind};
use crate::error::{Error, Result};
use crate::finsets::Universe;
use crate::lawlab::ast::{BinaryOp, CmpOp, ConstName, PredName, UnaryOp};
use crate::lawlab::typecheck::{TFormula, TTerm};
use crate::mrcore::{self, ClosureProperty, InnerProperty, SpecialKind};
use crate::relcore::{
    self, boolean_op, const_relation, residual, BoolKind, ConstKind, Relation, RelProperty,
    ResidualKind,
};

pub type Env = HashMap<String, Relation>;

/// Quantifier enumeration bound: one bound variable may range over at most
/// 2^24 relations.
const QUANT_MAX_BITS: u32 = 24;

pub fn eval_term(universe: &Universe, t: &TTerm, env: &Env) -> Result<Relation> {
    match t {
        TTerm::Var(name) => env
            .get(name)
            .cloned()
            .ok_or_else(|| Error::TypeError(format!("unbound variable {name}"))),
        TTerm::Const(c, src, tgt) => {
            let inner = tgt.inner();
            match c {
                ConstName::Zero => const_relation(ConstKind::Empty, universe, src.clone(), tgt.clone()),
                ConstName::Univ => {
                    const_relation(ConstKind::Universal, universe, src.clone(), tgt.clone())
                }
                ConstName::Id => {
                    const_relation(ConstKind::Identity, universe, src.clone(), tgt.clone())
                }
                ConstName::One => mrcore::special_constant(SpecialKind::Unit, universe, Some(src), None),
                ConstName::Lu => {
                    mrcore::special_constant(SpecialKind::InnerUnitU, universe, Some(src), inner)
                }
                ConstName::Li => {
                    mrcore::special_constant(SpecialKind::InnerUnitI, universe, Some(src), inner)
                }
                ConstName::Eps => {
                    mrcore::special_constant(SpecialKind::Membership, universe, None, Some(src))
                }
                ConstName::Om => {
                    mrcore::special_constant(SpecialKind::Omega, universe, None, src.inner())
                }
                ConstName::Cr => {
                    mrcore::special_constant(SpecialKind::CompRel, universe, None, src.inner())
                }
                ConstName::Au => {
                    mrcore::special_constant(SpecialKind::Atoms, universe, Some(src), inner)
                }
                ConstName::Ai => {
                    mrcore::special_constant(SpecialKind::CoAtoms, universe, Some(src), inner)
                }
            }
        }
        TTerm::Unary(op, a) => {
            let r = eval_term(universe, a, env)?;
            match op {
                UnaryOp::Complement => Ok(relcore::complement(&r)),
                UnaryOp::Converse => Ok(relcore::converse(&r)),
                UnaryOp::InnerCompl => mrcore::inner_complement(&r),
                UnaryOp::Dual => mrcore::dual(&r),
                UnaryOp::Up => closures::closure(universe, ClosureKind::Up, &r),
                UnaryOp::Down => closures::closure(universe, ClosureKind::Down, &r),
                UnaryOp::Conv => closures::closure(universe, ClosureKind::Convex, &r),
                UnaryOp::Dom => Ok(relcore::domain(&r)),
                UnaryOp::Plift => mrcore::peleg_lift(universe, &r),
                UnaryOp::Klift => mrcore::kleisli_lift(universe, &r),
            }
        }
        TTerm::Binary(op, a, b) => {
            let ra = eval_term(universe, a, env)?;
            let rb = eval_term(universe, b, env)?;
            match op {
                BinaryOp::Comp => relcore::compose(&ra, &rb),
                BinaryOp::Peleg => mrcore::peleg_compose(universe, &ra, &rb),
                BinaryOp::CoComp => mrcore::co_compose(universe, &ra, &rb),
                BinaryOp::Cup => boolean_op(BoolKind::Union, &ra, Some(&rb)),
                BinaryOp::Cap => boolean_op(BoolKind::Intersection, &ra, Some(&rb)),
                BinaryOp::Diff => boolean_op(BoolKind::Difference, &ra, Some(&rb)),
                BinaryOp::Icup => mrcore::inner_union(&ra, &rb),
                BinaryOp::Icap => mrcore::inner_intersection(&ra, &rb),
                BinaryOp::LeftRes => residual(ResidualKind::Left, &ra, &rb),
                BinaryOp::RightRes => residual(ResidualKind::Right, &ra, &rb),
                BinaryOp::Syq => relcore::syq(&ra, &rb),
            }
        }
    }
}

pub fn eval_formula(universe: &Universe, f: &TFormula, env: &mut Env) -> Result<bool> {
    match f {
        TFormula::Cmp(op, a, b) => {
            let ra = eval_term(universe, a, env)?;
            let rb = eval_term(universe, b, env)?;
            Ok(match op {
                CmpOp::Eq => ra == rb,
                CmpOp::Ne => ra != rb,
                CmpOp::Subset => relcore::is_subset(&ra, &rb)?,
                CmpOp::LeqH => closures::preorder_leq(universe, PreorderKind::Hoare, &ra, &rb)?,
                CmpOp::LeqS => closures::preorder_leq(universe, PreorderKind::Smyth, &ra, &rb)?,
                CmpOp::LeqEM => {
                    closures::preorder_leq(universe, PreorderKind::EgliMilner, &ra, &rb)?
                }
                CmpOp::EqH => closures::equiv(universe, PreorderKind::Hoare, &ra, &rb)?,
                CmpOp::EqS => closures::equiv(universe, PreorderKind::Smyth, &ra, &rb)?,
                CmpOp::EqEM => closures::equiv(universe, PreorderKind::EgliMilner, &ra, &rb)?,
            })
        }
        TFormula::Pred(p, t) => {
            let r = eval_term(universe, t, env)?;
            Ok(match p {
                PredName::Univalent => relcore::rel_property(RelProperty::Univalent, &r),
                PredName::Total => relcore::rel_property(RelProperty::Total, &r),
                PredName::Deterministic => {
                    relcore::rel_property(RelProperty::Deterministic, &r)
                }
                PredName::InnerUnivalent => {
                    mrcore::inner_property(universe, InnerProperty::InnerUnivalent, &r)?
                }
                PredName::InnerTotal => {
                    mrcore::inner_property(universe, InnerProperty::InnerTotal, &r)?
                }
                PredName::InnerDeterministic => {
                    mrcore::inner_property(universe, InnerProperty::InnerDeterministic, &r)?
                }
                PredName::UnionClosed => {
                    mrcore::closure_property(universe, ClosureProperty::UnionClosed, &r)?
                }
                PredName::IntersectionClosed => {
                    mrcore::closure_property(universe, ClosureProperty::IntersectionClosed, &r)?
                }
                PredName::UpClosed => closures::closed_check(universe, ClosureKind::Up, &r)?,
                PredName::DownClosed => {
                    closures::closed_check(universe, ClosureKind::Down, &r)?
                }
                PredName::ConvexClosed => {
                    closures::closed_check(universe, ClosureKind::Convex, &r)?
                }
            })
        }
        TFormula::Not(a) => Ok(!eval_formula(universe, a, env)?),
        TFormula::And(a, b) => {
            Ok(eval_formula(universe, a, env)? && eval_formula(universe, b, env)?)
        }
        TFormula::Or(a, b) => {
            Ok(eval_formula(universe, a, env)? || eval_formula(universe, b, env)?)
        }
        TFormula::Implies(a, b) => {
            Ok(!eval_formula(universe, a, env)? || eval_formula(universe, b, env)?)
        }
        TFormula::Quant { exists, vars, body } => {
            eval_quant(universe, *exists, vars, body, env)
        }
    }
}

fn eval_quant(
    universe: &Universe,
    exists: bool,
    vars: &[(String, crate::finsets::ObjType, crate::finsets::ObjType)],
    body: &TFormula,
    env: &mut Env,
) -> Result<bool> {
    let Some(((name, src, tgt), rest)) = vars.split_first() else {
        return eval_formula(universe, body, env);
    };
    let saved = env.get(name).cloned();
    let mut result = !exists;
    for r in relcore::all_relations(universe, src, tgt, QUANT_MAX_BITS)? {
        env.insert(name.clone(), r);
        let inner = eval_quant(universe, exists, rest, body, env)?;
        if inner == exists {
            result = exists;
            break;
        }
    }
    match saved {
        Some(old) => {
            env.insert(name.clone(), old);
        }
        None => {
            env.remove(name);
        }
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finsets::ObjType;
    use crate::lawlab::parser::{parse_formula, parse_term};
    use crate::lawlab::typecheck::{typecheck_formula, typecheck_term};

    fn setup() -> (Universe, Vec<(String, usize)>, Vec<(String, ObjType, ObjType)>) {
        let sets = vec![("X".to_string(), 1), ("Y".to_string(), 2)];
        let u = Universe::declare(&[("X", 1), ("Y", 2)]).unwrap();
        let vars = vec![(
            "R".to_string(),
            ObjType::base("X"),
            ObjType::pow(ObjType::base("Y")),
        )];
        (u, sets, vars)
    }

    fn example_r(u: &Universe) -> Relation {
        Relation::new(
            u,
            ObjType::base("X"),
            ObjType::pow(ObjType::base("Y")),
            vec![(0, 1), (0, 2)],
        )
        .unwrap()
    }

    #[test]
    fn eval_term_examples() {
        let (u, sets, vars) = setup();
        let mut env = Env::new();
        env.insert("R".into(), example_r(&u));
        let (t, _, _) = typecheck_term(&sets, &vars, &parse_term("R icup R").unwrap()).unwrap();
        let got = eval_term(&u, &t, &env).unwrap();
        assert_eq!(got.pairs(), &[(0, 1), (0, 2), (0, 3)]);

        let (t, _, _) =
            typecheck_term(&sets, &vars, &parse_term("plift(down(one[Y]))").unwrap()).unwrap();
        let got = eval_term(&u, &t, &env).unwrap();
        let om = mrcore::omega(&u, &ObjType::base("Y")).unwrap();
        assert_eq!(got, relcore::converse(&om));

        let (t, _, _) =
            typecheck_term(&sets, &vars, &parse_term("0[X,P(X)] * R").unwrap()).unwrap();
        assert!(eval_term(&u, &t, &env).unwrap().is_empty());

        let (t, _, _) = typecheck_term(&sets, &vars, &parse_term("down(R)").unwrap()).unwrap();
        let got = eval_term(&u, &t, &env).unwrap();
        assert_eq!(got.pairs(), &[(0, 0), (0, 1), (0, 2)]);
    }

    #[test]
    fn eval_formula_examples() {
        let (u, sets, vars) = setup();
        let mut env = Env::new();
        env.insert("R".into(), example_r(&u));
        for (src, expect) in [
            ("R icup R = R", false),
            ("R <= R icup R", true),
            ("inner_total(R)", true),
            ("univalent(R)", false),
            ("R =H down(R)", true),
            ("forall S : X <-> P(Y) . S icup lu = S", true),
            ("exists S : X <-> P(Y) . S icup S != S", true),
            ("exists S : X <-> P(Y) . S != S", false),
        ] {
            let (tf, _) = typecheck_formula(&sets, &vars, &parse_formula(src).unwrap()).unwrap();
            assert_eq!(
                eval_formula(&u, &tf, &mut env).unwrap(),
                expect,
                "formula {src}"
            );
        }
        // environment is restored after quantification
        assert_eq!(env.len(), 1);
        assert!(env.contains_key("R"));
    }
}
