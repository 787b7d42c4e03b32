//! The multirelational layer: special constants, inner operations and their
//! duality, Kleisli and Peleg liftings, Peleg composition, co-composition,
//! big inner operations, union/intersection-closure and the inner property
//! predicates.
//!
//! A multirelation is a [`Relation`] whose target is a powerset type. Because
//! powerset elements are ordered by ascending bit-mask value, the target
//! index of a pair *is* the inner set it denotes, so inner operations reduce
//! to bit arithmetic on indices.

use std::sync::atomic::{AtomicBool, Ordering};

use crate::error::{Error, Result};
use crate::finsets::{Mask, ObjType, Universe};
use crate::relcore::{
    self, complement, compose, const_relation, is_subset, union, BoolKind, ConstKind, Relation,
};

/// Checks that a relation is a multirelation and returns its inner type.
pub fn inner_type(r: &Relation) -> Result<&ObjType> {
    r.tgt().inner().ok_or_else(|| {
        Error::NotMultirelation(format!("target type {} is not a powerset", r.tgt()))
    })
}

fn full_inner(r: &Relation) -> usize {
    r.tgt_card() - 1
}

fn check_same_mr_typing(r: &Relation, s: &Relation) -> Result<()> {
    inner_type(r)?;
    if !r.same_typing(s) {
        return Err(Error::TypeMismatch(format!(
            "multirelations typed {} <-> {} and {} <-> {}",
            r.src(),
            r.tgt(),
            s.src(),
            s.tgt()
        )));
    }
    Ok(())
}

// Test-only corruption switch used by the CLI selftest to prove the
// acceptance suite notices broken constants.
static MUTATE_UNIT: AtomicBool = AtomicBool::new(false);

pub fn set_mutation_hook(enabled: bool) {
    MUTATE_UNIT.store(enabled, Ordering::SeqCst);
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpecialKind {
    Membership,
    Omega,
    CompRel,
    Unit,
    InnerUnitU,
    InnerUnitI,
    Atoms,
    CoAtoms,
}

/// The membership relation `∈_Y : Y <-> P(Y)`.
pub fn membership(universe: &Universe, y: &ObjType) -> Result<Relation> {
    Relation::from_fn(universe, y.clone(), ObjType::pow(y.clone()), |a, set| {
        set >> a & 1 == 1
    })
}

/// The subset relation `Ω_Y = {(A,B) | A ⊆ B} : P(Y) <-> P(Y)`.
pub fn omega(universe: &Universe, y: &ObjType) -> Result<Relation> {
    let py = ObjType::pow(y.clone());
    Relation::from_fn(universe, py.clone(), py, |a, b| a & !b == 0)
}

/// The complementation relation `C = {(A,-A)} : P(Y) <-> P(Y)`.
pub fn comp_rel(universe: &Universe, y: &ObjType) -> Result<Relation> {
    let py = ObjType::pow(y.clone());
    let full = universe.card(&py)? - 1;
    Relation::from_fn(universe, py.clone(), py, move |a, b| b == full ^ a)
}

/// The Peleg unit `1_X = {(a,{a})} : X <-> P(X)`.
pub fn unit(universe: &Universe, x: &ObjType) -> Result<Relation> {
    let r = Relation::from_fn(universe, x.clone(), ObjType::pow(x.clone()), |a, set| {
        set == 1 << a
    })?;
    if MUTATE_UNIT.load(Ordering::SeqCst) && !r.is_empty() {
        let pairs = r.pairs()[1..].to_vec();
        return Relation::new(universe, x.clone(), ObjType::pow(x.clone()), pairs);
    }
    Ok(r)
}

/// The inner-union unit `1⋓ = {(a,∅)} : X <-> P(Y)`.
pub fn inner_unit_u(universe: &Universe, x: &ObjType, y: &ObjType) -> Result<Relation> {
    Relation::from_fn(universe, x.clone(), ObjType::pow(y.clone()), |_, set| set == 0)
}

/// The inner-intersection unit `1⋒ = {(a,Y)} : X <-> P(Y)`.
pub fn inner_unit_i(universe: &Universe, x: &ObjType, y: &ObjType) -> Result<Relation> {
    let py = ObjType::pow(y.clone());
    let full = universe.card(&py)? - 1;
    Relation::from_fn(universe, x.clone(), py, move |_, set| set == full)
}

/// All multirelational atoms `A⋓ = U 1 = {(a,{b})}`.
pub fn atoms(universe: &Universe, x: &ObjType, y: &ObjType) -> Result<Relation> {
    Relation::from_fn(universe, x.clone(), ObjType::pow(y.clone()), |_, set| {
        set.count_ones() == 1
    })
}

/// All co-atoms `A⋒ = {(a,Y-{b})}`.
pub fn co_atoms(universe: &Universe, x: &ObjType, y: &ObjType) -> Result<Relation> {
    let py = ObjType::pow(y.clone());
    let full = universe.card(&py)? - 1;
    Relation::from_fn(universe, x.clone(), py, move |_, set| {
        (full ^ set).count_ones() == 1
    })
}

pub fn special_constant(
    kind: SpecialKind,
    universe: &Universe,
    x: Option<&ObjType>,
    y: Option<&ObjType>,
) -> Result<Relation> {
    fn need<'a>(t: Option<&'a ObjType>, which: &str) -> Result<&'a ObjType> {
        t.ok_or_else(|| Error::TypeMismatch(format!("constant needs base type {which}")))
    }
    match kind {
        SpecialKind::Membership => membership(universe, need(y, "Y")?),
        SpecialKind::Omega => omega(universe, need(y, "Y")?),
        SpecialKind::CompRel => comp_rel(universe, need(y, "Y")?),
        SpecialKind::Unit => unit(universe, need(x, "X")?),
        SpecialKind::InnerUnitU => inner_unit_u(universe, need(x, "X")?, need(y, "Y")?),
        SpecialKind::InnerUnitI => inner_unit_i(universe, need(x, "X")?, need(y, "Y")?),
        SpecialKind::Atoms => atoms(universe, need(x, "X")?, need(y, "Y")?),
        SpecialKind::CoAtoms => co_atoms(universe, need(x, "X")?, need(y, "Y")?),
    }
}

fn inner_binary(
    r: &Relation,
    s: &Relation,
    op: impl Fn(usize, usize) -> usize,
) -> Result<Relation> {
    check_same_mr_typing(r, s)?;
    let mut pairs = Vec::new();
    for a in 0..r.src_card() {
        for &x in &r.images_of(a) {
            for &y in &s.images_of(a) {
                pairs.push((a, op(x, y)));
            }
        }
    }
    pairs.sort_unstable();
    pairs.dedup();
    rebuild(r, s.tgt().clone(), pairs)
}

// Rebuilds a relation with the src typing of `like` and the given target.
fn rebuild(like: &Relation, tgt: ObjType, pairs: Vec<(usize, usize)>) -> Result<Relation> {
    // All indices come from existing relations of the same typing, so the
    // unchecked constructor path via from_fn is unnecessary; reuse new()
    // through a throwaway universe-free path is not available, so sort and
    // trust the caller's ranges.
    debug_assert!(pairs.windows(2).all(|w| w[0] <= w[1]));
    Ok(Relation::raw(
        like.src().clone(),
        tgt,
        like.src_card(),
        like.tgt_card(),
        pairs,
    ))
}

/// Inner union `R ⋓ S = {(a, A ∪ B) | R(a,A), S(a,B)}`.
pub fn inner_union(r: &Relation, s: &Relation) -> Result<Relation> {
    inner_binary(r, s, |x, y| x | y)
}

/// Inner intersection `R ⋒ S = {(a, A ∩ B) | R(a,A), S(a,B)}`.
pub fn inner_intersection(r: &Relation, s: &Relation) -> Result<Relation> {
    inner_binary(r, s, |x, y| x & y)
}

/// Inner complementation `R^i = {(a,-A) | R(a,A)} = RC`.
pub fn inner_complement(r: &Relation) -> Result<Relation> {
    inner_type(r)?;
    let full = full_inner(r);
    let mut pairs: Vec<(usize, usize)> =
        r.pairs().iter().map(|&(a, b)| (a, full ^ b)).collect();
    pairs.sort_unstable();
    rebuild(r, r.tgt().clone(), pairs)
}

/// The dual `R^d = -(R^i)`.
pub fn dual(r: &Relation) -> Result<Relation> {
    Ok(complement(&inner_complement(r)?))
}

/// `⨆ R_i = {(a, ⋃ A_i) | ∀i. (a,A_i) ∈ R_i}` for a nonempty finite family,
/// computed by a pairwise fold with per-step deduplication.
pub fn big_inner_union(family: &[Relation]) -> Result<Relation> {
    big_inner(family, |x, y| x | y)
}

/// `⨅ R_i`, the inner-intersection analogue of [`big_inner_union`].
pub fn big_inner_intersection(family: &[Relation]) -> Result<Relation> {
    big_inner(family, |x, y| x & y)
}

fn big_inner(family: &[Relation], op: impl Fn(usize, usize) -> usize + Copy) -> Result<Relation> {
    let (first, rest) = family.split_first().ok_or(Error::EmptyFamily)?;
    inner_type(first)?;
    let mut acc = first.clone();
    for r in rest {
        acc = inner_binary(&acc, r, op)?;
    }
    Ok(acc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosureProperty {
    UnionClosed,
    IntersectionClosed,
}

/// Decides union-/intersection-closure via closure under the binary inner
/// operation; for small relations the relation-algebraic characterization
/// `dom(S)(syq(∈S^, ∈)) ⊆ R` for all `S ⊆ R` is evaluated as a cross-check
/// and must agree.
pub fn closure_property(
    universe: &Universe,
    kind: ClosureProperty,
    r: &Relation,
) -> Result<bool> {
    inner_type(r)?;
    let closed = match kind {
        ClosureProperty::UnionClosed => is_subset(&inner_union(r, r)?, r)?,
        ClosureProperty::IntersectionClosed => is_subset(&inner_intersection(r, r)?, r)?,
    };
    if r.pairs().len() <= 12 {
        let alt = match kind {
            ClosureProperty::UnionClosed => union_closed_algebraic(universe, r)?,
            ClosureProperty::IntersectionClosed => {
                union_closed_algebraic(universe, &inner_complement(r)?)?
            }
        };
        assert_eq!(closed, alt, "closure characterizations disagree");
    }
    Ok(closed)
}

fn union_closed_algebraic(universe: &Universe, r: &Relation) -> Result<bool> {
    let y = inner_type(r)?.clone();
    let eps = membership(universe, &y)?;
    let n = r.pairs().len();
    for sub in 1u64..1 << n {
        let pairs: Vec<(usize, usize)> = r
            .pairs()
            .iter()
            .enumerate()
            .filter(|(i, _)| sub >> i & 1 == 1)
            .map(|(_, &p)| p)
            .collect();
        let s = Relation::new(universe, r.src().clone(), r.tgt().clone(), pairs)?;
        let t = relcore::syq(&compose(&eps, &relcore::converse(&s))?, &eps)?;
        let lifted = compose(&relcore::domain(&s), &t)?;
        if !is_subset(&lifted, r)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Kleisli lifting `R_P = {(A,B) | B = ⋃R(A)} : P(X) <-> P(Y)`.
pub fn kleisli_lift(universe: &Universe, r: &Relation) -> Result<Relation> {
    inner_type(r)?;
    let psrc = ObjType::pow(r.src().clone());
    let n_sets = universe.card(&psrc)?;
    let rows = r.rows();
    let mut pairs = Vec::with_capacity(n_sets);
    for a_set in 0..n_sets {
        let mut b = 0usize;
        for a in 0..r.src_card() {
            if a_set >> a & 1 == 1 {
                for img in rows[a].iter_ones() {
                    b |= img;
                }
            }
        }
        pairs.push((a_set, b));
    }
    Relation::new(universe, psrc, r.tgt().clone(), pairs)
}

/// Peleg lifting `R_* = {(A,B) | ∃f. f|_A ⊆ R ∧ B = ⋃f(A)}`, computed by
/// folding per-element image families with pairwise union and per-step
/// deduplication instead of enumerating all functions `f`.
pub fn peleg_lift(universe: &Universe, r: &Relation) -> Result<Relation> {
    inner_type(r)?;
    let psrc = ObjType::pow(r.src().clone());
    let n_sets = universe.card(&psrc)?;
    let images: Vec<Vec<usize>> = (0..r.src_card()).map(|a| r.images_of(a)).collect();
    let mut pairs = Vec::new();
    for a_set in 0..n_sets {
        if (0..r.src_card()).any(|a| a_set >> a & 1 == 1 && images[a].is_empty()) {
            continue;
        }
        let mut combos = Mask::zeros(r.tgt_card());
        combos.set(0, true);
        for a in 0..r.src_card() {
            if a_set >> a & 1 == 0 {
                continue;
            }
            let mut next = Mask::zeros(r.tgt_card());
            for x in combos.iter_ones() {
                for &y in &images[a] {
                    next.set(x | y, true);
                }
            }
            combos = next;
        }
        pairs.extend(combos.iter_ones().map(|b| (a_set, b)));
    }
    Relation::new(universe, psrc, r.tgt().clone(), pairs)
}

/// Peleg composition `R ∗ S = R S_*`.
pub fn peleg_compose(universe: &Universe, r: &Relation, s: &Relation) -> Result<Relation> {
    let it = inner_type(r)?;
    if it != s.src() {
        return Err(Error::TypeMismatch(format!(
            "Peleg composition needs inner type {} to match source {}",
            it,
            s.src()
        )));
    }
    compose(r, &peleg_lift(universe, s)?)
}

/// Co-composition `R ⊙ S = (R ∗ S^i)^i`.
pub fn co_compose(universe: &Universe, r: &Relation, s: &Relation) -> Result<Relation> {
    inner_complement(&peleg_compose(universe, r, &inner_complement(s)?)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InnerProperty {
    InnerUnivalent,
    InnerTotal,
    InnerDeterministic,
}

/// Decides the inner property predicates via the subset definitions
/// `R ⊆ A⋓ ∪ 1⋓`, `R ⊆ -1⋓` and their conjunction.
pub fn inner_property(
    universe: &Universe,
    kind: InnerProperty,
    r: &Relation,
) -> Result<bool> {
    let y = inner_type(r)?.clone();
    let x = r.src().clone();
    let lu = inner_unit_u(universe, &x, &y)?;
    match kind {
        InnerProperty::InnerUnivalent => {
            let au = atoms(universe, &x, &y)?;
            is_subset(r, &union(&au, &lu)?)
        }
        InnerProperty::InnerTotal => is_subset(r, &complement(&lu)),
        InnerProperty::InnerDeterministic => Ok(inner_property(
            universe,
            InnerProperty::InnerUnivalent,
            r,
        )? && inner_property(universe, InnerProperty::InnerTotal, r)?),
    }
}

/// Up-closure `↑R = R ⋓ U`, used locally by the Parikh composition; the
/// closures module re-exports the full closure family.
pub(crate) fn up_via_inner_union(universe: &Universe, r: &Relation) -> Result<Relation> {
    let univ = const_relation(
        ConstKind::Universal,
        universe,
        r.src().clone(),
        r.tgt().clone(),
    )?;
    inner_union(r, &univ)
}

pub(crate) fn is_up_closed(universe: &Universe, r: &Relation) -> Result<bool> {
    Ok(&up_via_inner_union(universe, r)? == r)
}

/// Parikh composition `↑(R ∗ S)` of up-closed multirelations. Non-up-closed
/// arguments are rejected rather than silently closed.
pub fn parikh_compose(universe: &Universe, r: &Relation, s: &Relation) -> Result<Relation> {
    if !is_up_closed(universe, r)? {
        return Err(Error::NotUpClosed(format!("first argument {:?}", r.pairs())));
    }
    if !is_up_closed(universe, s)? {
        return Err(Error::NotUpClosed(format!("second argument {:?}", s.pairs())));
    }
    up_via_inner_union(universe, &peleg_compose(universe, r, s)?)
}

/// Outer boolean operation re-export for symmetry at the multirelational
/// layer.
pub fn outer_op(kind: BoolKind, r: &Relation, s: Option<&Relation>) -> Result<Relation> {
    relcore::boolean_op(kind, r, s)
}
