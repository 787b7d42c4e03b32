//! Scripted demonstrations. Each demo builds small concrete multirelations,
//! prints the computed values, and checks them against the expected
//! (in)equalities, so a `pass` is a bit-exact reproduction.

use serde_json::{json, Value};

use crate::closures::{self, ClosureKind, PreorderKind};
use crate::error::{Error, Result};
use crate::finsets::{ObjType, Universe};
use crate::mrcore::{
    inner_intersection, inner_union, inner_unit_i, inner_unit_u, peleg_compose, unit,
};
use crate::relcore::{
    complement, const_relation, intersection, is_subset, union, ConstKind, Relation,
};

#[derive(Debug, Clone)]
pub struct DemoReport {
    pub name: String,
    pub lines: Vec<String>,
    pub pass: bool,
}

impl DemoReport {
    pub fn to_json(&self) -> Value {
        json!({
            "demo": self.name,
            "steps": self.lines,
            "pass": self.pass,
        })
    }
}

pub const DEMO_NAMES: [&str; 8] = [
    "example-3-3",
    "example-4-4",
    "up-comp-fail",
    "example-4-9",
    "example-5-11",
    "natural-order-fail",
    "preorder-incomparable",
    "hoare-not-subset",
];

struct Demo<'a> {
    universe: &'a Universe,
    lines: Vec<String>,
    pass: bool,
}

impl<'a> Demo<'a> {
    fn new(universe: &'a Universe) -> Demo<'a> {
        Demo {
            universe,
            lines: Vec::new(),
            pass: true,
        }
    }

    fn show(&mut self, label: &str, r: &Relation) -> Result<()> {
        self.lines.push(format!("{label} = {}", r.render(self.universe)?));
        Ok(())
    }

    fn claim(&mut self, label: &str, holds: bool) {
        self.lines
            .push(format!("{label}: {}", if holds { "ok" } else { "VIOLATED" }));
        self.pass &= holds;
    }

    fn finish(self, name: &str) -> DemoReport {
        DemoReport {
            name: name.to_string(),
            lines: self.lines,
            pass: self.pass,
        }
    }
}

fn mr(u: &Universe, src: &str, inner: &str, pairs: &[(usize, usize)]) -> Result<Relation> {
    Relation::new(
        u,
        ObjType::base(src),
        ObjType::pow(ObjType::base(inner)),
        pairs.to_vec(),
    )
}

/// Inner union and intersection are not idempotent: R over X={a}, Y={a,b}
/// with images {a} and {b} gains {a,b} under ⋓ and ∅ under ⋒.
fn example_3_3() -> Result<DemoReport> {
    let u = Universe::declare(&[("X", 1), ("Y", 2)])?;
    let mut d = Demo::new(&u);
    let r = mr(&u, "X", "Y", &[(0, 1), (0, 2)])?;
    d.show("R", &r)?;
    let iu = inner_union(&r, &r)?;
    let ii = inner_intersection(&r, &r)?;
    d.show("R icup R", &iu)?;
    d.show("R icap R", &ii)?;
    let with_ab = union(&r, &mr(&u, "X", "Y", &[(0, 3)])?)?;
    let with_empty = union(&r, &mr(&u, "X", "Y", &[(0, 0)])?)?;
    d.claim("R icup R = R + {(a,{a,b})}", iu == with_ab);
    d.claim("R icap R = R + {(a,0)}", ii == with_empty);
    d.claim("R <= R icup R", is_subset(&r, &iu)?);
    d.claim("R <= R icap R", is_subset(&r, &ii)?);
    d.claim("R icup R != R", iu != r);
    d.claim("R icap R != R", ii != r);
    Ok(d.finish("example-3-3"))
}

/// Even after closing, the inner operations need not be idempotent: the
/// down-closure of the previous R grows under ⋓, and on X = {a,b} the
/// up-closure of R grows under ⋒.
fn example_4_4() -> Result<DemoReport> {
    let u = Universe::declare(&[("X", 1), ("Y", 2)])?;
    let mut d = Demo::new(&u);
    let r = mr(&u, "X", "Y", &[(0, 1), (0, 2)])?;
    let down = closures::closure(&u, ClosureKind::Down, &r)?;
    d.show("down R", &down)?;
    let expect = mr(&u, "X", "Y", &[(0, 0), (0, 1), (0, 2)])?;
    d.claim("down R = {(a,0),(a,{a}),(a,{b})}", down == expect);
    let dd = inner_union(&down, &down)?;
    d.show("down R icup down R", &dd)?;
    d.claim(
        "down R icup down R = down R + {(a,{a,b})}",
        dd == union(&down, &mr(&u, "X", "Y", &[(0, 3)])?)?,
    );
    d.claim("down R proper subset", is_subset(&down, &dd)? && down != dd);

    // dually on X = {a,b}: up R = R icup R, and icap adds (a,∅)
    let u2 = Universe::declare(&[("X", 2)])?;
    let mut lines2 = {
        let mut d2 = Demo::new(&u2);
        let r2 = mr(&u2, "X", "X", &[(0, 1), (0, 2)])?;
        let up = closures::closure(&u2, ClosureKind::Up, &r2)?;
        d2.show("up R (X={a,b})", &up)?;
        d2.claim("up R = R icup R", up == inner_union(&r2, &r2)?);
        let uu = inner_intersection(&up, &up)?;
        d2.show("up R icap up R", &uu)?;
        d2.claim(
            "up R icap up R = up R + {(a,0)}",
            uu == union(&up, &mr(&u2, "X", "X", &[(0, 0)])?)?,
        );
        d2.claim("up R proper subset", is_subset(&up, &uu)? && up != uu);
        d.pass &= d2.pass;
        d2.lines
    };
    d.lines.append(&mut lines2);
    Ok(d.finish("example-4-4"))
}

/// Peleg composition of up-closed multirelations need not be up-closed:
/// up(1⋓) ∗ up(1⋒) = 1⋓ ∪ 1⋒ ⊂ U on X = {a,b}.
fn up_comp_fail() -> Result<DemoReport> {
    let u = Universe::declare(&[("X", 2)])?;
    let mut d = Demo::new(&u);
    let x = ObjType::base("X");
    let lu = inner_unit_u(&u, &x, &x)?;
    let li = inner_unit_i(&u, &x, &x)?;
    let up_lu = closures::closure(&u, ClosureKind::Up, &lu)?;
    let up_li = closures::closure(&u, ClosureKind::Up, &li)?;
    let univ = const_relation(ConstKind::Universal, &u, x.clone(), ObjType::pow(x.clone()))?;
    d.claim("up lu = U", up_lu == univ);
    d.claim("up li = li", up_li == li);
    let composite = peleg_compose(&u, &up_lu, &up_li)?;
    d.show("up lu * up li", &composite)?;
    d.claim("composite = lu + li", composite == union(&lu, &li)?);
    d.claim(
        "composite proper subset of U",
        is_subset(&composite, &univ)? && composite != univ,
    );
    d.claim(
        "composite not up-closed",
        !closures::closed_check(&u, ClosureKind::Up, &composite)?,
    );
    let peleg = peleg_compose(&u, &lu, &li)?;
    d.claim(
        "up(lu * li) = U",
        closures::closure(&u, ClosureKind::Up, &peleg)? == univ,
    );
    Ok(d.finish("up-comp-fail"))
}

/// up-distribution over composition for inner deterministic arguments does
/// not translate to down-closure: down(1 ∗ ∅) = ∅ ⊂ 1⋓ = down(1) ∗ down(∅).
fn example_4_9() -> Result<DemoReport> {
    let u = Universe::declare(&[("X", 1)])?;
    let mut d = Demo::new(&u);
    let x = ObjType::base("X");
    let one = unit(&u, &x)?;
    let empty = const_relation(ConstKind::Empty, &u, x.clone(), ObjType::pow(x.clone()))?;
    let comp = peleg_compose(&u, &one, &empty)?;
    d.show("1 * 0", &comp)?;
    let lhs = closures::closure(&u, ClosureKind::Down, &comp)?;
    d.show("down(1 * 0)", &lhs)?;
    d.claim("down(1 * 0) = 0", lhs == empty);
    let down_one = closures::closure(&u, ClosureKind::Down, &one)?;
    let down_empty = closures::closure(&u, ClosureKind::Down, &empty)?;
    let rhs = peleg_compose(&u, &down_one, &down_empty)?;
    d.show("down(1) * down(0)", &rhs)?;
    let lu = inner_unit_u(&u, &x, &x)?;
    d.claim("down(1) * down(0) = lu", rhs == lu);
    d.claim("proper inclusion", is_subset(&lhs, &rhs)? && lhs != rhs);
    Ok(d.finish("example-4-9"))
}

/// Hoare and Smyth equivalence without equality on X = {a,b,c}:
/// R = {(a,{a}),(a,{a,b,c})} and S = R ∪ {(a,{a,b})} agree under both
/// closures; the one-element variants 1 =↓ U and -1 =↑ U also differ.
fn example_5_11() -> Result<DemoReport> {
    let u = Universe::declare(&[("X", 3)])?;
    let mut d = Demo::new(&u);
    let r = mr(&u, "X", "X", &[(0, 0b001), (0, 0b111)])?;
    let s = union(&r, &mr(&u, "X", "X", &[(0, 0b011)])?)?;
    d.show("R", &r)?;
    d.show("S", &s)?;
    d.claim("R =H S", closures::equiv(&u, PreorderKind::Hoare, &r, &s)?);
    d.claim("R =S S", closures::equiv(&u, PreorderKind::Smyth, &r, &s)?);
    d.claim(
        "R =EM S",
        closures::equiv(&u, PreorderKind::EgliMilner, &r, &s)?,
    );
    d.claim("R != S", r != s);

    let u1 = Universe::declare(&[("X", 1)])?;
    let x1 = ObjType::base("X");
    let one = unit(&u1, &x1)?;
    let univ = const_relation(ConstKind::Universal, &u1, x1.clone(), ObjType::pow(x1))?;
    let neg_one = complement(&one);
    let mut d1 = Demo::new(&u1);
    d1.claim(
        "1 =H U on one element",
        closures::equiv(&u1, PreorderKind::Hoare, &one, &univ)?,
    );
    d1.claim(
        "-1 =S U on one element",
        closures::equiv(&u1, PreorderKind::Smyth, &neg_one, &univ)?,
    );
    d1.claim("1 != U != -1", one != univ && neg_one != univ);
    d.pass &= d1.pass;
    d.lines.extend(d1.lines);
    Ok(d.finish("example-5-11"))
}

/// The preorders are not induced by ⋒/⋓ the way natural semilattice orders
/// would be: S ⊑↓ T with S ⋒ T = T ≠ S, and T ⊑↑ R with T ⋓ R = T ≠ R.
fn natural_order_fail() -> Result<DemoReport> {
    let u = Universe::declare(&[("X", 1)])?;
    let mut d = Demo::new(&u);
    let r = mr(&u, "X", "X", &[(0, 0)])?;
    let s = mr(&u, "X", "X", &[(0, 1)])?;
    let t = union(&r, &s)?;
    d.show("R", &r)?;
    d.show("S", &s)?;
    d.show("T", &t)?;
    d.claim("S <=H T", closures::preorder_leq(&u, PreorderKind::Hoare, &s, &t)?);
    let st = inner_intersection(&s, &t)?;
    d.show("S icap T", &st)?;
    d.claim("S icap T = T", st == t);
    d.claim("S icap T != S", st != s);
    d.claim("T <=S R", closures::preorder_leq(&u, PreorderKind::Smyth, &t, &r)?);
    let tr = inner_union(&t, &r)?;
    d.show("T icup R", &tr)?;
    d.claim("T icup R = T", tr == t);
    d.claim("T icup R != R", tr != r);
    Ok(d.finish("natural-order-fail"))
}

/// The Hoare and Smyth preorders are incomparable: ∅ ⊑↓ 1 and 1 ⊑↑ ∅ hold
/// while the crossed variants fail, and similarly for the total
/// multirelations 1, 1⋓ ∪ 1, 1⋓.
fn preorder_incomparable() -> Result<DemoReport> {
    let u = Universe::declare(&[("X", 2)])?;
    let mut d = Demo::new(&u);
    let x = ObjType::base("X");
    let one = unit(&u, &x)?;
    let empty = const_relation(ConstKind::Empty, &u, x.clone(), ObjType::pow(x.clone()))?;
    let lu = inner_unit_u(&u, &x, &x)?;
    d.claim("0 <=H 1", closures::preorder_leq(&u, PreorderKind::Hoare, &empty, &one)?);
    d.claim("1 <=S 0", closures::preorder_leq(&u, PreorderKind::Smyth, &one, &empty)?);
    d.claim(
        "not 0 <=S 1",
        !closures::preorder_leq(&u, PreorderKind::Smyth, &empty, &one)?,
    );
    d.claim(
        "not 1 <=H 0",
        !closures::preorder_leq(&u, PreorderKind::Hoare, &one, &empty)?,
    );
    let lu_one = union(&lu, &one)?;
    d.claim(
        "1 <=H lu+1",
        closures::preorder_leq(&u, PreorderKind::Hoare, &one, &lu_one)?,
    );
    d.claim(
        "lu+1 <=S lu",
        closures::preorder_leq(&u, PreorderKind::Smyth, &lu_one, &lu)?,
    );
    d.claim(
        "not 1 <=S lu+1",
        !closures::preorder_leq(&u, PreorderKind::Smyth, &one, &lu_one)?,
    );
    d.claim(
        "not lu+1 <=H lu",
        !closures::preorder_leq(&u, PreorderKind::Hoare, &lu_one, &lu)?,
    );
    Ok(d.finish("preorder-incomparable"))
}

/// ⊑↓ does not refine ⊆ even for deterministic multirelations:
/// {(a,∅)} ⊑↓ {(a,{a})} though the two are disjoint.
fn hoare_not_subset() -> Result<DemoReport> {
    let u = Universe::declare(&[("X", 1)])?;
    let mut d = Demo::new(&u);
    let r = mr(&u, "X", "X", &[(0, 0)])?;
    let s = mr(&u, "X", "X", &[(0, 1)])?;
    d.show("R", &r)?;
    d.show("S", &s)?;
    d.claim("R <=H S", closures::preorder_leq(&u, PreorderKind::Hoare, &r, &s)?);
    d.claim("R and S disjoint", intersection(&r, &s)?.is_empty());
    d.claim("not R <= S", !is_subset(&r, &s)?);
    Ok(d.finish("hoare-not-subset"))
}

pub fn run_demo(name: &str) -> Result<DemoReport> {
    match name {
        "example-3-3" => example_3_3(),
        "example-4-4" => example_4_4(),
        "up-comp-fail" => up_comp_fail(),
        "example-4-9" => example_4_9(),
        "example-5-11" => example_5_11(),
        "natural-order-fail" => natural_order_fail(),
        "preorder-incomparable" => preorder_incomparable(),
        "hoare-not-subset" => hoare_not_subset(),
        other => Err(Error::UnknownDemo(other.to_string())),
    }
}

pub fn run_all_demos() -> Result<Vec<DemoReport>> {
    DEMO_NAMES.iter().map(|name| run_demo(name)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_demos_pass() {
        for report in run_all_demos().unwrap() {
            assert!(report.pass, "demo {} failed: {:?}", report.name, report.lines);
        }
    }

    #[test]
    fn unknown_demo_is_an_error() {
        assert!(matches!(run_demo("nope"), Err(Error::UnknownDemo(_))));
    }

    #[test]
    fn dual_demo_value_spot_check() {
        // unrelated micro-check that dual on a one-element carrier fixes
        // {(a,{a})}, used by example-5-11's narrative
        let u = Universe::declare(&[("X", 1)]).unwrap();
        let s = mr(&u, "X", "X", &[(0, 1)]).unwrap();
        assert_eq!(crate::mrcore::dual(&s).unwrap(), s);
    }
}
