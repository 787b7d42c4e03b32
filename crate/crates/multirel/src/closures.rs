//! Up-, down- and convex closures, the Smyth/Hoare/Egli-Milner preorders and
//! equivalences, quotient structures and the special-class order and
//! decomposition results.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::finsets::{ObjType, Universe};
use crate::mrcore::{self, inner_intersection, inner_union};
use crate::relcore::{
    self, compose, const_relation, intersection, is_subset, rel_property, union, ConstKind,
    Relation, RelProperty,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosureKind {
    Up,
    Down,
    Convex,
}

/// `↑R = R ⋓ U`, `↓R = R ⋒ U`, `⇕R = ↑R ∩ ↓R`. The inner-operation form is
/// cross-checked against the composition form `RΩ` / `RΩ^` in debug runs.
pub fn closure(universe: &Universe, kind: ClosureKind, r: &Relation) -> Result<Relation> {
    let univ = const_relation(
        ConstKind::Universal,
        universe,
        r.src().clone(),
        r.tgt().clone(),
    )?;
    let result = match kind {
        ClosureKind::Up => inner_union(r, &univ)?,
        ClosureKind::Down => inner_intersection(r, &univ)?,
        ClosureKind::Convex => intersection(
            &closure(universe, ClosureKind::Up, r)?,
            &closure(universe, ClosureKind::Down, r)?,
        )?,
    };
    if cfg!(debug_assertions) && !matches!(kind, ClosureKind::Convex) {
        let y = mrcore::inner_type(r)?.clone();
        let om = mrcore::omega(universe, &y)?;
        let alt = match kind {
            ClosureKind::Up => compose(r, &om)?,
            ClosureKind::Down => compose(r, &relcore::converse(&om))?,
            ClosureKind::Convex => unreachable!(),
        };
        assert_eq!(result, alt, "closure forms disagree");
    }
    Ok(result)
}

pub fn closed_check(universe: &Universe, kind: ClosureKind, r: &Relation) -> Result<bool> {
    Ok(&closure(universe, kind, r)? == r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PreorderKind {
    Smyth,
    Hoare,
    EgliMilner,
}

impl PreorderKind {
    pub fn name(self) -> &'static str {
        match self {
            PreorderKind::Smyth => "smyth",
            PreorderKind::Hoare => "hoare",
            PreorderKind::EgliMilner => "egli-milner",
        }
    }
}

/// Smyth `R ⊑↑ S iff S ⊆ ↑R`, Hoare `R ⊑↓ S iff R ⊆ ↓S`, Egli-Milner is
/// their conjunction.
pub fn preorder_leq(
    universe: &Universe,
    kind: PreorderKind,
    r: &Relation,
    s: &Relation,
) -> Result<bool> {
    match kind {
        PreorderKind::Smyth => is_subset(s, &closure(universe, ClosureKind::Up, r)?),
        PreorderKind::Hoare => is_subset(r, &closure(universe, ClosureKind::Down, s)?),
        PreorderKind::EgliMilner => Ok(preorder_leq(universe, PreorderKind::Smyth, r, s)?
            && preorder_leq(universe, PreorderKind::Hoare, r, s)?),
    }
}

/// The equivalence induced by a preorder; coincides with equality of the
/// corresponding closures, which is how it is decided.
pub fn equiv(
    universe: &Universe,
    kind: PreorderKind,
    r: &Relation,
    s: &Relation,
) -> Result<bool> {
    let closure_kind = match kind {
        PreorderKind::Smyth => ClosureKind::Up,
        PreorderKind::Hoare => ClosureKind::Down,
        PreorderKind::EgliMilner => ClosureKind::Convex,
    };
    let by_closure = closure(universe, closure_kind, r)? == closure(universe, closure_kind, s)?;
    debug_assert_eq!(
        by_closure,
        preorder_leq(universe, kind, r, s)? && preorder_leq(universe, kind, s, r)?,
        "equivalence characterizations disagree"
    );
    Ok(by_closure)
}

/// One equivalence class of a quotient: the canonical representative is the
/// closure itself, and every member maps to it.
#[derive(Debug, Clone)]
pub struct QuotientClass {
    pub representative: Relation,
    pub members: Vec<Relation>,
}

#[derive(Debug, Clone)]
pub struct QuotientStructure {
    pub kind: PreorderKind,
    pub classes: Vec<QuotientClass>,
}

impl QuotientStructure {
    pub fn to_json(&self, universe: &Universe) -> Result<Value> {
        let classes: Vec<Value> = self
            .classes
            .iter()
            .map(|c| {
                Ok(json!({
                    "representative": c.representative.render(universe)?,
                    "size": c.members.len(),
                }))
            })
            .collect::<Result<_>>()?;
        Ok(json!({
            "preorder": self.kind.name(),
            "classes": classes.len(),
            "detail": classes,
        }))
    }
}

/// Partitions all multirelations of a typing into equivalence classes of the
/// given preorder. Classes are keyed by the closure, so representatives are
/// exactly the closed multirelations, in ascending encoding order.
pub fn quotient(
    universe: &Universe,
    kind: PreorderKind,
    src: &ObjType,
    inner: &ObjType,
    max_bits: u32,
) -> Result<QuotientStructure> {
    let closure_kind = match kind {
        PreorderKind::Smyth => ClosureKind::Up,
        PreorderKind::Hoare => ClosureKind::Down,
        PreorderKind::EgliMilner => ClosureKind::Convex,
    };
    let tgt = ObjType::pow(inner.clone());
    let mut classes: Vec<QuotientClass> = Vec::new();
    for r in relcore::all_relations(universe, src, &tgt, max_bits)? {
        let rep = closure(universe, closure_kind, &r)?;
        match classes.iter_mut().find(|c| c.representative == rep) {
            Some(c) => c.members.push(r),
            None => classes.push(QuotientClass {
                representative: rep,
                members: vec![r],
            }),
        }
    }
    classes.sort_by_key(|c| c.representative.encoding());
    Ok(QuotientStructure {
        kind,
        classes,
    })
}

/// Checks whether the preorder is antisymmetric (hence a partial order) on a
/// list of multirelations, returning the first violating pair if any.
pub fn antisymmetric_on(
    universe: &Universe,
    kind: PreorderKind,
    mrs: &[Relation],
) -> Result<Option<(Relation, Relation)>> {
    for r in mrs {
        for s in mrs {
            if r != s
                && preorder_leq(universe, kind, r, s)?
                && preorder_leq(universe, kind, s, r)?
            {
                return Ok(Some((r.clone(), s.clone())));
            }
        }
    }
    Ok(None)
}

/// On a special class (e.g. the outer-deterministic multirelations) checks
/// that all three preorders coincide with each other on the class and that
/// the lattice absorption laws hold for ⋒/⋓ as meet/join there.
pub fn class_order_report(
    universe: &Universe,
    mrs: &[Relation],
) -> Result<ClassOrderReport> {
    let mut coincide = true;
    let mut absorption = true;
    for r in mrs {
        for s in mrs {
            let h = preorder_leq(universe, PreorderKind::Hoare, r, s)?;
            let sm = preorder_leq(universe, PreorderKind::Smyth, r, s)?;
            let em = preorder_leq(universe, PreorderKind::EgliMilner, r, s)?;
            if h != sm || h != em {
                coincide = false;
            }
            // R ⋓ (R ⋒ S) = R = R ⋒ (R ⋓ S)
            let join_meet = inner_union(r, &inner_intersection(r, s)?)?;
            let meet_join = inner_intersection(r, &inner_union(r, s)?)?;
            if &join_meet != r || &meet_join != r {
                absorption = false;
            }
        }
    }
    let antisym = antisymmetric_on(universe, PreorderKind::Hoare, mrs)?.is_none();
    Ok(ClassOrderReport {
        coincide,
        absorption,
        antisymmetric: antisym,
    })
}

#[derive(Debug, Clone, Copy)]
pub struct ClassOrderReport {
    pub coincide: bool,
    pub absorption: bool,
    pub antisymmetric: bool,
}

/// All `S ⊑↓d R`: univalent multirelations below `R` in the pointwise
/// singleton sense — for each `a` with `R(a) ⊄ {∅}` a choice of one point
/// `b ∈ ⋃R(a)` with `{b}` below some member of `R(a)`; enumerated over
/// `dom(R − 1⋓)`. With `strict_members` the candidate `{b}` must itself be
/// a member of `R(a)` (the off-by-default stricter variant).
pub fn down_d_subfunctions(
    universe: &Universe,
    r: &Relation,
    strict_members: bool,
) -> Result<Vec<Relation>> {
    mrcore::inner_type(r)?;
    // per-source candidate singleton masks
    let mut choices: Vec<(usize, Vec<usize>)> = Vec::new();
    for a in 0..r.src_card() {
        let images = r.images_of(a);
        if images.iter().all(|&b| b == 0) {
            continue; // R(a) ⊆ {∅}: no pair contributed at a
        }
        let mut cands: Vec<usize> = Vec::new();
        for bit in 0..r.tgt_card().trailing_zeros() as usize {
            let singleton = 1usize << bit;
            let ok = if strict_members {
                images.contains(&singleton)
            } else {
                images.iter().any(|&b| b & singleton != 0)
            };
            if ok {
                cands.push(singleton);
            }
        }
        if cands.is_empty() {
            // stricter variant may have no singleton members at a point
            return Ok(Vec::new());
        }
        choices.push((a, cands));
    }
    let mut result = Vec::new();
    let mut odometer = vec![0usize; choices.len()];
    loop {
        let pairs: Vec<(usize, usize)> = choices
            .iter()
            .zip(&odometer)
            .map(|(&(a, ref cands), &i)| (a, cands[i]))
            .collect();
        result.push(Relation::new(
            universe,
            r.src().clone(),
            r.tgt().clone(),
            pairs,
        )?);
        let mut pos = choices.len();
        loop {
            if pos == 0 {
                return Ok(result);
            }
            pos -= 1;
            odometer[pos] += 1;
            if odometer[pos] < choices[pos].1.len() {
                break;
            }
            odometer[pos] = 0;
        }
    }
}

/// Decomposes an outer-univalent multirelation as
/// `R = dom(R) ; (⨆ {S | S ⊑↓d R} ∪ E)` where `E` re-adds the `(a,∅)` pairs
/// at points whose entire image family is `{∅}`; those points contribute the
/// empty inner set because every choice function is undefined there.
pub fn decompose_univalent(universe: &Universe, r: &Relation) -> Result<Vec<Relation>> {
    if !rel_property(RelProperty::Univalent, r) {
        return Err(Error::NotUnivalent(format!("{:?}", r.pairs())));
    }
    down_d_subfunctions(universe, r, false)
}

/// Reconstructs `R` from [`decompose_univalent`] parts; the round trip is the
/// content of the decomposition theorem for univalent multirelations.
pub fn reconstruct_univalent(universe: &Universe, r: &Relation) -> Result<Relation> {
    let family = decompose_univalent(universe, r)?;
    let mut body = if family.is_empty() {
        const_relation(ConstKind::Empty, universe, r.src().clone(), r.tgt().clone())?
    } else {
        mrcore::big_inner_union(&family)?
    };
    // points of dom(R) whose images are all ∅ survive as (a,∅)
    for a in 0..r.src_card() {
        let images = r.images_of(a);
        if !images.is_empty() && images.iter().all(|&b| b == 0) {
            body = union(
                &body,
                &Relation::new(universe, r.src().clone(), r.tgt().clone(), vec![(a, 0)])?,
            )?;
        }
    }
    compose(&relcore::domain(r), &body)
}

/// For every univalent `S ⊆ R` checks the reconstruction round trip; the
/// universal statement behind [`reconstruct_univalent`].
pub fn decompose_full(universe: &Universe, r: &Relation) -> Result<bool> {
    mrcore::inner_type(r)?;
    let n = r.pairs().len();
    if n > 16 {
        return Err(Error::ResultTooLarge(format!(
            "2^{n} subrelations in full decomposition sweep"
        )));
    }
    for sub in 0u32..1 << n {
        let pairs: Vec<(usize, usize)> = r
            .pairs()
            .iter()
            .enumerate()
            .filter(|(i, _)| sub >> i & 1 == 1)
            .map(|(_, &p)| p)
            .collect();
        let s = Relation::new(universe, r.src().clone(), r.tgt().clone(), pairs)?;
        if !rel_property(RelProperty::Univalent, &s) {
            continue;
        }
        if reconstruct_univalent(universe, &s)? != s {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mrcore::{atoms, inner_complement, inner_unit_i, inner_unit_u, peleg_compose, unit};
    use crate::relcore::all_relations;

    fn u12() -> Universe {
        Universe::declare(&[("X", 1), ("Y", 2)]).unwrap()
    }

    fn x() -> ObjType {
        ObjType::base("X")
    }

    fn y() -> ObjType {
        ObjType::base("Y")
    }

    fn py() -> ObjType {
        ObjType::pow(y())
    }

    #[test]
    fn closure_axioms_exhaustive() {
        let u = Universe::declare(&[("X", 2), ("Y", 2)]).unwrap();
        let xb = ObjType::base("X");
        for kind in [ClosureKind::Up, ClosureKind::Down, ClosureKind::Convex] {
            for r in all_relations(&u, &xb, &py(), 16).unwrap() {
                let c = closure(&u, kind, &r).unwrap();
                // extensive, idempotent, monotone (spot-checked via union)
                assert!(is_subset(&r, &c).unwrap());
                assert_eq!(closure(&u, kind, &c).unwrap(), c);
                let bigger = union(&r, &atoms(&u, &xb, &y()).unwrap()).unwrap();
                assert!(is_subset(&c, &closure(&u, kind, &bigger).unwrap()).unwrap());
            }
        }
    }

    #[test]
    fn closure_duality_and_distribution() {
        // ↑(R^i) = (↓R)^i; ↓(R⋓S) = ↓R⋓↓S; ↑(R⋒S) = ↑R⋒↑S; ↓1⋒ = U; ↑1⋓ = U
        let u = Universe::declare(&[("X", 2), ("Y", 2)]).unwrap();
        let xb = ObjType::base("X");
        let univ = const_relation(ConstKind::Universal, &u, xb.clone(), py()).unwrap();
        assert_eq!(
            closure(&u, ClosureKind::Down, &inner_unit_i(&u, &xb, &y()).unwrap()).unwrap(),
            univ
        );
        assert_eq!(
            closure(&u, ClosureKind::Up, &inner_unit_u(&u, &xb, &y()).unwrap()).unwrap(),
            univ
        );
        for r in all_relations(&u, &xb, &py(), 16).unwrap() {
            assert_eq!(
                closure(&u, ClosureKind::Up, &inner_complement(&r).unwrap()).unwrap(),
                inner_complement(&closure(&u, ClosureKind::Down, &r).unwrap()).unwrap()
            );
            for s in [
                atoms(&u, &xb, &y()).unwrap(),
                inner_unit_u(&u, &xb, &y()).unwrap(),
                unit(&u, &xb).unwrap(),
            ] {
                let s = if s.tgt() == r.tgt() { s } else { continue };
                assert_eq!(
                    closure(&u, ClosureKind::Down, &inner_union(&r, &s).unwrap()).unwrap(),
                    inner_union(
                        &closure(&u, ClosureKind::Down, &r).unwrap(),
                        &closure(&u, ClosureKind::Down, &s).unwrap()
                    )
                    .unwrap()
                );
                assert_eq!(
                    closure(&u, ClosureKind::Up, &inner_intersection(&r, &s).unwrap()).unwrap(),
                    inner_intersection(
                        &closure(&u, ClosureKind::Up, &r).unwrap(),
                        &closure(&u, ClosureKind::Up, &s).unwrap()
                    )
                    .unwrap()
                );
            }
        }
    }

    #[test]
    fn closed_sets_as_intersections() {
        // up-closed: ⋓ = ∩; down-closed: ⋒ = ∩
        let u = u12();
        for r in all_relations(&u, &x(), &py(), 16).unwrap() {
            for s in all_relations(&u, &x(), &py(), 16).unwrap() {
                if closed_check(&u, ClosureKind::Up, &r).unwrap()
                    && closed_check(&u, ClosureKind::Up, &s).unwrap()
                {
                    assert_eq!(
                        inner_union(&r, &s).unwrap(),
                        intersection(&r, &s).unwrap()
                    );
                }
                if closed_check(&u, ClosureKind::Down, &r).unwrap()
                    && closed_check(&u, ClosureKind::Down, &s).unwrap()
                {
                    assert_eq!(
                        inner_intersection(&r, &s).unwrap(),
                        intersection(&r, &s).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn closure_peleg_interaction() {
        // ↓R = R ∗ ↓1 and plift(↓1) = Ω^
        let u = u12();
        let one_y = unit(&u, &y()).unwrap();
        let down_one = closure(&u, ClosureKind::Down, &one_y).unwrap();
        for r in all_relations(&u, &x(), &py(), 16).unwrap() {
            assert_eq!(
                closure(&u, ClosureKind::Down, &r).unwrap(),
                peleg_compose(&u, &r, &down_one).unwrap()
            );
        }
        for card in 1..=3usize {
            let uy = Universe::declare(&[("Y", card)]).unwrap();
            let yb = ObjType::base("Y");
            let one = unit(&uy, &yb).unwrap();
            let down_one = closure(&uy, ClosureKind::Down, &one).unwrap();
            let om = mrcore::omega(&uy, &yb).unwrap();
            assert_eq!(
                mrcore::peleg_lift(&uy, &down_one).unwrap(),
                relcore::converse(&om)
            );
        }
    }

    #[test]
    fn preorder_examples() {
        let u = u12();
        // {(a,∅)} ⊑↓ {(a,{a})} though disjoint
        let r = Relation::new(&u, x(), py(), vec![(0, 0)]).unwrap();
        let s = Relation::new(&u, x(), py(), vec![(0, 1)]).unwrap();
        assert!(preorder_leq(&u, PreorderKind::Hoare, &r, &s).unwrap());
        assert!(intersection(&r, &s).unwrap().is_empty());
        // preorders are reflexive and transitive, exhaustively
        let all: Vec<Relation> = all_relations(&u, &x(), &py(), 16).unwrap().collect();
        for kind in [
            PreorderKind::Smyth,
            PreorderKind::Hoare,
            PreorderKind::EgliMilner,
        ] {
            for a in &all {
                assert!(preorder_leq(&u, kind, a, a).unwrap());
                for b in &all {
                    if !preorder_leq(&u, kind, a, b).unwrap() {
                        continue;
                    }
                    for c in &all {
                        if preorder_leq(&u, kind, b, c).unwrap() {
                            assert!(preorder_leq(&u, kind, a, c).unwrap());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn natural_order_failure_witnesses() {
        // S ⊑↓ T yet S ⋒ T ≠ S; T ⊑↑ R yet T ⋓ R ≠ R (X = {a} = Y)
        let u = Universe::declare(&[("X", 1)]).unwrap();
        let xb = ObjType::base("X");
        let px = ObjType::pow(xb.clone());
        let r = Relation::new(&u, xb.clone(), px.clone(), vec![(0, 0)]).unwrap();
        let s = Relation::new(&u, xb.clone(), px.clone(), vec![(0, 1)]).unwrap();
        let t = union(&r, &s).unwrap();
        assert!(preorder_leq(&u, PreorderKind::Hoare, &s, &t).unwrap());
        assert_eq!(inner_intersection(&s, &t).unwrap(), t);
        assert_ne!(inner_intersection(&s, &t).unwrap(), s);
        assert!(preorder_leq(&u, PreorderKind::Smyth, &r, &t).unwrap());
        assert_eq!(inner_union(&t, &r).unwrap(), t);
        assert_ne!(inner_union(&t, &r).unwrap(), r);
    }

    #[test]
    fn incomparable_example() {
        // R = {(a,{a}),(a,{a,b,c})}, S = R ∪ {(a,{a,b})} over X = Y = {a,b,c}:
        // equivalent in both Hoare and Smyth senses but distinct
        let u = Universe::declare(&[("X", 3)]).unwrap();
        let xb = ObjType::base("X");
        let px = ObjType::pow(xb.clone());
        let r = Relation::new(&u, xb.clone(), px.clone(), vec![(0, 0b001), (0, 0b111)]).unwrap();
        let s = union(
            &r,
            &Relation::new(&u, xb.clone(), px.clone(), vec![(0, 0b011)]).unwrap(),
        )
        .unwrap();
        assert_ne!(r, s);
        assert!(equiv(&u, PreorderKind::Hoare, &r, &s).unwrap());
        assert!(equiv(&u, PreorderKind::Smyth, &r, &s).unwrap());
        assert!(equiv(&u, PreorderKind::EgliMilner, &r, &s).unwrap());
    }

    #[test]
    fn quotient_structure() {
        let u = u12();
        let q = quotient(&u, PreorderKind::Hoare, &x(), &y(), 16).unwrap();
        // representatives are exactly the down-closed multirelations
        let down_closed: Vec<Relation> = all_relations(&u, &x(), &py(), 16)
            .unwrap()
            .filter(|r| closed_check(&u, ClosureKind::Down, r).unwrap())
            .collect();
        assert_eq!(q.classes.len(), down_closed.len());
        assert_eq!(q.classes.len(), 6);
        let mut total = 0;
        for c in &q.classes {
            assert!(down_closed.contains(&c.representative));
            for m in &c.members {
                assert!(equiv(&u, PreorderKind::Hoare, m, &c.representative).unwrap());
            }
            total += c.members.len();
        }
        assert_eq!(total, 16);
        // convex classes = Egli-Milner classes
        let qc = quotient(&u, PreorderKind::EgliMilner, &x(), &y(), 16).unwrap();
        let convex = all_relations(&u, &x(), &py(), 16)
            .unwrap()
            .filter(|r| closed_check(&u, ClosureKind::Convex, r).unwrap())
            .count();
        assert_eq!(qc.classes.len(), convex);
    }

    #[test]
    fn down_d_and_decomposition() {
        let u = Universe::declare(&[("X", 2), ("Y", 2)]).unwrap();
        let xb = ObjType::base("X");
        // R = {(a,{a,b})}: candidates {a},{b}; strict variant finds none
        let r = Relation::new(&u, xb.clone(), py(), vec![(0, 3)]).unwrap();
        let subs = down_d_subfunctions(&u, &r, false).unwrap();
        assert_eq!(subs.len(), 2);
        assert!(down_d_subfunctions(&u, &r, true).unwrap().is_empty());
        // 1⋓ has no contributing points: the single empty choice
        let lu = inner_unit_u(&u, &xb, &y()).unwrap();
        let subs = down_d_subfunctions(&u, &lu, false).unwrap();
        assert_eq!(subs.len(), 1);
        assert!(subs[0].is_empty());
        // reconstruction round-trips on every univalent mr, and the full
        // sweep passes for every mr at 2x2
        for q in all_relations(&u, &xb, &py(), 16).unwrap() {
            if rel_property(RelProperty::Univalent, &q) {
                assert_eq!(reconstruct_univalent(&u, &q).unwrap(), q);
            }
            assert!(decompose_full(&u, &q).unwrap());
        }
        let wide = Relation::new(&u, xb, py(), vec![(0, 1), (0, 2)]).unwrap();
        assert!(matches!(
            reconstruct_univalent(&u, &wide),
            Err(Error::NotUnivalent(_))
        ));
    }

    #[test]
    fn outer_deterministic_class() {
        let u = Universe::declare(&[("X", 2), ("Y", 2)]).unwrap();
        let xb = ObjType::base("X");
        let dets: Vec<Relation> = all_relations(&u, &xb, &py(), 16)
            .unwrap()
            .filter(|r| rel_property(RelProperty::Deterministic, r))
            .collect();
        assert_eq!(dets.len(), 16);
        let rep = class_order_report(&u, &dets).unwrap();
        assert!(rep.coincide && rep.absorption && rep.antisymmetric);
        // the three preorders are not antisymmetric on all multirelations
        let all: Vec<Relation> = all_relations(&u, &xb, &py(), 16).unwrap().collect();
        assert!(antisymmetric_on(&u, PreorderKind::Hoare, &all)
            .unwrap()
            .is_some());
    }
}
