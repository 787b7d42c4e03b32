//! Heterogeneous binary relation algebra over finite typed universes:
//! constants, boolean structure, composition, converse, domain, residuals,
//! symmetric quotient, property predicates, restriction/image and the
//! decomposition of a relation into partial functions.

use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::finsets::{Mask, ObjType, Subset, Universe};

/// A typed binary relation, stored as a canonically sorted pair list.
///
/// Structural equality coincides with extensional equality because the pair
/// list is sorted and deduplicated at construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Relation {
    src: ObjType,
    tgt: ObjType,
    src_card: usize,
    tgt_card: usize,
    pairs: Vec<(usize, usize)>,
}

impl Relation {
    pub fn new(
        universe: &Universe,
        src: ObjType,
        tgt: ObjType,
        mut pairs: Vec<(usize, usize)>,
    ) -> Result<Relation> {
        let src_card = universe.card(&src)?;
        let tgt_card = universe.card(&tgt)?;
        for &(a, b) in &pairs {
            if a >= src_card || b >= tgt_card {
                return Err(Error::TypeMismatch(format!(
                    "pair ({a},{b}) out of range for {src} <-> {tgt}"
                )));
            }
        }
        pairs.sort_unstable();
        pairs.dedup();
        Ok(Relation {
            src,
            tgt,
            src_card,
            tgt_card,
            pairs,
        })
    }

    /// Builds the relation of all pairs satisfying a predicate.
    pub fn from_fn(
        universe: &Universe,
        src: ObjType,
        tgt: ObjType,
        mut pred: impl FnMut(usize, usize) -> bool,
    ) -> Result<Relation> {
        let src_card = universe.card(&src)?;
        let tgt_card = universe.card(&tgt)?;
        let mut pairs = Vec::new();
        for a in 0..src_card {
            for b in 0..tgt_card {
                if pred(a, b) {
                    pairs.push((a, b));
                }
            }
        }
        Ok(Relation {
            src,
            tgt,
            src_card,
            tgt_card,
            pairs,
        })
    }

    /// Crate-internal constructor for pair lists whose indices are already
    /// known to be in range (they come from relations of the same typing).
    pub(crate) fn raw(
        src: ObjType,
        tgt: ObjType,
        src_card: usize,
        tgt_card: usize,
        mut pairs: Vec<(usize, usize)>,
    ) -> Relation {
        pairs.sort_unstable();
        pairs.dedup();
        Relation {
            src,
            tgt,
            src_card,
            tgt_card,
            pairs,
        }
    }

    pub fn src(&self) -> &ObjType {
        &self.src
    }

    pub fn tgt(&self) -> &ObjType {
        &self.tgt
    }

    pub fn src_card(&self) -> usize {
        self.src_card
    }

    pub fn tgt_card(&self) -> usize {
        self.tgt_card
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.pairs.binary_search(&(a, b)).is_ok()
    }

    pub fn same_typing(&self, other: &Relation) -> bool {
        self.src == other.src && self.tgt == other.tgt
    }

    /// Per-source target masks, the auxiliary index used by composition and
    /// image computations.
    pub fn rows(&self) -> Vec<Mask> {
        let mut rows = vec![Mask::zeros(self.tgt_card); self.src_card];
        for &(a, b) in &self.pairs {
            rows[a].set(b, true);
        }
        rows
    }

    /// Target indices related to a given source index, ascending.
    pub fn images_of(&self, a: usize) -> Vec<usize> {
        let lo = self.pairs.partition_point(|&(x, _)| x < a);
        let hi = self.pairs.partition_point(|&(x, _)| x <= a);
        self.pairs[lo..hi].iter().map(|&(_, b)| b).collect()
    }

    /// Canonical integer encoding: bit `a * |tgt| + b` set iff `(a,b)` is a
    /// pair. Only defined for relations with at most 128 pair slots.
    pub fn encoding(&self) -> u128 {
        assert!(self.src_card * self.tgt_card <= 128);
        let mut code = 0u128;
        for &(a, b) in &self.pairs {
            code |= 1 << (a * self.tgt_card + b);
        }
        code
    }

    pub fn from_encoding(
        universe: &Universe,
        src: ObjType,
        tgt: ObjType,
        code: u128,
    ) -> Result<Relation> {
        let src_card = universe.card(&src)?;
        let tgt_card = universe.card(&tgt)?;
        let slots = src_card * tgt_card;
        if slots > 128 || (slots < 128 && code >> slots != 0) {
            return Err(Error::TypeMismatch(format!(
                "encoding {code} out of range for {src} <-> {tgt}"
            )));
        }
        let pairs = (0..slots)
            .filter(|i| code >> i & 1 == 1)
            .map(|i| (i / tgt_card, i % tgt_card))
            .collect();
        Relation::new(universe, src, tgt, pairs)
    }

    /// Renders the relation in set notation, e.g. `{(a,{a}),(a,{b})}`.
    pub fn render(&self, universe: &Universe) -> Result<String> {
        let mut out = String::from("{");
        for (i, &(a, b)) in self.pairs.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            write!(
                out,
                "({},{})",
                universe.element_name(&self.src, a)?,
                universe.element_name(&self.tgt, b)?
            )
            .expect("write to string");
        }
        out.push('}');
        Ok(out)
    }

    /// JSON value form: `{"src": "X", "tgt": "P(Y)", "pairs": [...]}` with
    /// pairs in canonical order.
    pub fn to_json(&self, universe: &Universe) -> Result<Value> {
        let pairs: Vec<Value> = self
            .pairs
            .iter()
            .map(|&(a, b)| {
                Ok(Value::Array(vec![
                    universe.element_json(&self.src, a)?,
                    universe.element_json(&self.tgt, b)?,
                ]))
            })
            .collect::<Result<_>>()?;
        Ok(json!({
            "src": self.src.to_string(),
            "tgt": self.tgt.to_string(),
            "pairs": pairs,
        }))
    }

    pub fn from_json(universe: &Universe, v: &Value) -> Result<Relation> {
        let src = parse_objtype_name(
            v.get("src")
                .and_then(Value::as_str)
                .ok_or_else(|| Error::TypeMismatch("relation JSON lacks src".into()))?,
        )?;
        let tgt = parse_objtype_name(
            v.get("tgt")
                .and_then(Value::as_str)
                .ok_or_else(|| Error::TypeMismatch("relation JSON lacks tgt".into()))?,
        )?;
        let raw = v
            .get("pairs")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::TypeMismatch("relation JSON lacks pairs".into()))?;
        let mut pairs = Vec::with_capacity(raw.len());
        for item in raw {
            let pair = item
                .as_array()
                .filter(|p| p.len() == 2)
                .ok_or_else(|| Error::TypeMismatch("relation JSON pair is not a 2-array".into()))?;
            pairs.push((
                universe.element_from_json(&src, &pair[0])?,
                universe.element_from_json(&tgt, &pair[1])?,
            ));
        }
        Relation::new(universe, src, tgt, pairs)
    }
}

/// Parses an object type written as `X` or `P(Y)` (arbitrarily nested).
pub fn parse_objtype_name(s: &str) -> Result<ObjType> {
    let s = s.trim();
    if let Some(rest) = s.strip_prefix("P(") {
        let inner = rest.strip_suffix(')').ok_or_else(|| {
            Error::TypeMismatch(format!("malformed object type {s}"))
        })?;
        Ok(ObjType::pow(parse_objtype_name(inner)?))
    } else if !s.is_empty() && s.chars().all(|c| c.is_alphanumeric() || c == '_') {
        Ok(ObjType::Base(s.to_string()))
    } else {
        Err(Error::TypeMismatch(format!("malformed object type {s}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstKind {
    Empty,
    Universal,
    Identity,
}

pub fn const_relation(
    kind: ConstKind,
    universe: &Universe,
    src: ObjType,
    tgt: ObjType,
) -> Result<Relation> {
    match kind {
        ConstKind::Empty => Relation::new(universe, src, tgt, vec![]),
        ConstKind::Universal => Relation::from_fn(universe, src, tgt, |_, _| true),
        ConstKind::Identity => {
            if src != tgt {
                return Err(Error::TypeMismatch(format!(
                    "identity requires src = tgt, got {src} and {tgt}"
                )));
            }
            Relation::from_fn(universe, src, tgt, |a, b| a == b)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoolKind {
    Union,
    Intersection,
    Complement,
    Difference,
}

pub fn boolean_op(kind: BoolKind, r: &Relation, s: Option<&Relation>) -> Result<Relation> {
    fn check<'a>(r: &Relation, s: Option<&'a Relation>) -> Result<&'a Relation> {
        let s = s.ok_or_else(|| {
            Error::TypeMismatch("binary boolean operation needs two operands".into())
        })?;
        if !r.same_typing(s) {
            return Err(Error::TypeMismatch(format!(
                "operands typed {} <-> {} and {} <-> {}",
                r.src, r.tgt, s.src, s.tgt
            )));
        }
        Ok(s)
    }
    let pairs = match kind {
        BoolKind::Union => {
            let s = check(r, s)?;
            let mut p = r.pairs.clone();
            p.extend_from_slice(&s.pairs);
            p
        }
        BoolKind::Intersection => {
            let s = check(r, s)?;
            r.pairs.iter().copied().filter(|&(a, b)| s.contains(a, b)).collect()
        }
        BoolKind::Difference => {
            let s = check(r, s)?;
            r.pairs.iter().copied().filter(|&(a, b)| !s.contains(a, b)).collect()
        }
        BoolKind::Complement => {
            let mut p = Vec::new();
            for a in 0..r.src_card {
                for b in 0..r.tgt_card {
                    if !r.contains(a, b) {
                        p.push((a, b));
                    }
                }
            }
            p
        }
    };
    let mut pairs = pairs;
    pairs.sort_unstable();
    pairs.dedup();
    Ok(Relation {
        src: r.src.clone(),
        tgt: r.tgt.clone(),
        src_card: r.src_card,
        tgt_card: r.tgt_card,
        pairs,
    })
}

pub fn union(r: &Relation, s: &Relation) -> Result<Relation> {
    boolean_op(BoolKind::Union, r, Some(s))
}

pub fn intersection(r: &Relation, s: &Relation) -> Result<Relation> {
    boolean_op(BoolKind::Intersection, r, Some(s))
}

pub fn difference(r: &Relation, s: &Relation) -> Result<Relation> {
    boolean_op(BoolKind::Difference, r, Some(s))
}

pub fn complement(r: &Relation) -> Relation {
    boolean_op(BoolKind::Complement, r, None).expect("complement is total")
}

pub fn is_subset(r: &Relation, s: &Relation) -> Result<bool> {
    if !r.same_typing(s) {
        return Err(Error::TypeMismatch(format!(
            "inclusion operands typed {} <-> {} and {} <-> {}",
            r.src, r.tgt, s.src, s.tgt
        )));
    }
    Ok(r.pairs.iter().all(|&(a, b)| s.contains(a, b)))
}

/// Relational composition `RS = {(a,b) | exists c. R(a,c) and S(c,b)}`.
pub fn compose(r: &Relation, s: &Relation) -> Result<Relation> {
    if r.tgt != s.src {
        return Err(Error::TypeMismatch(format!(
            "cannot compose {} <-> {} with {} <-> {}",
            r.src, r.tgt, s.src, s.tgt
        )));
    }
    let s_rows = s.rows();
    let mut rows = vec![Mask::zeros(s.tgt_card); r.src_card];
    for &(a, c) in &r.pairs {
        rows[a] = rows[a].union(&s_rows[c]);
    }
    let mut pairs = Vec::new();
    for (a, row) in rows.iter().enumerate() {
        pairs.extend(row.iter_ones().map(|b| (a, b)));
    }
    Ok(Relation {
        src: r.src.clone(),
        tgt: s.tgt.clone(),
        src_card: r.src_card,
        tgt_card: s.tgt_card,
        pairs,
    })
}

pub fn converse(r: &Relation) -> Relation {
    let mut pairs: Vec<(usize, usize)> = r.pairs.iter().map(|&(a, b)| (b, a)).collect();
    pairs.sort_unstable();
    Relation {
        src: r.tgt.clone(),
        tgt: r.src.clone(),
        src_card: r.tgt_card,
        tgt_card: r.src_card,
        pairs,
    }
}

/// The domain test `dom(R) = {(a,a) | exists b. R(a,b)}` on the source type.
pub fn domain(r: &Relation) -> Relation {
    let mut pairs: Vec<(usize, usize)> = r.pairs.iter().map(|&(a, _)| (a, a)).collect();
    pairs.sort_unstable();
    pairs.dedup();
    Relation {
        src: r.src.clone(),
        tgt: r.src.clone(),
        src_card: r.src_card,
        tgt_card: r.src_card,
        pairs,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResidualKind {
    Left,
    Right,
}

/// Residuals of composition, computed by the complement formula
/// `T/S = -(-T ; S^)` and `T\S = (S^ / T^)^`.
pub fn residual(kind: ResidualKind, t: &Relation, s: &Relation) -> Result<Relation> {
    match kind {
        ResidualKind::Left => {
            // T : X <-> Z, S : Y <-> Z, result X <-> Y
            if t.tgt != s.tgt {
                return Err(Error::TypeMismatch(format!(
                    "left residual needs matching targets, got {} and {}",
                    t.tgt, s.tgt
                )));
            }
            Ok(complement(&compose(&complement(t), &converse(s))?))
        }
        ResidualKind::Right => {
            // T : Z <-> X, S : Z <-> Y, result X <-> Y
            if t.src != s.src {
                return Err(Error::TypeMismatch(format!(
                    "right residual needs matching sources, got {} and {}",
                    t.src, s.src
                )));
            }
            Ok(converse(&residual(ResidualKind::Left, &converse(s), &converse(t))?))
        }
    }
}

/// Symmetric quotient `syq(T,S) = (T \ S) ∩ (T^ / S^)`.
pub fn syq(t: &Relation, s: &Relation) -> Result<Relation> {
    if t.src != s.src {
        return Err(Error::TypeMismatch(format!(
            "symmetric quotient needs matching sources, got {} and {}",
            t.src, s.src
        )));
    }
    let left = residual(ResidualKind::Right, t, s)?;
    let right = residual(ResidualKind::Left, &converse(t), &converse(s))?;
    intersection(&left, &right)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelProperty {
    Total,
    Univalent,
    Deterministic,
    Test,
}

pub fn rel_property(kind: RelProperty, r: &Relation) -> bool {
    match kind {
        RelProperty::Total => {
            // dom(R) = Id
            domain(r).pairs.len() == r.src_card
        }
        RelProperty::Univalent => {
            // R^ R subseteq Id: no source maps to two targets
            r.rows().iter().all(|row| row.count_ones() <= 1)
        }
        RelProperty::Deterministic => {
            rel_property(RelProperty::Total, r) && rel_property(RelProperty::Univalent, r)
        }
        RelProperty::Test => r.src == r.tgt && r.pairs.iter().all(|&(a, b)| a == b),
    }
}

/// Restriction `R|_A` and relational image `R(A)` in one pass.
pub fn restrict_image(universe: &Universe, r: &Relation, a: &Subset) -> Result<(Relation, Subset)> {
    if a.objtype != r.src {
        return Err(Error::TypeMismatch(format!(
            "restriction subset typed {} but relation source is {}",
            a.objtype, r.src
        )));
    }
    let pairs: Vec<(usize, usize)> = r
        .pairs
        .iter()
        .copied()
        .filter(|&(x, _)| a.mask.get(x))
        .collect();
    let mut image = Mask::zeros(r.tgt_card);
    for &(_, b) in &pairs {
        image.set(b, true);
    }
    let restricted = Relation {
        src: r.src.clone(),
        tgt: r.tgt.clone(),
        src_card: r.src_card,
        tgt_card: r.tgt_card,
        pairs,
    };
    Ok((restricted, Subset::new(universe, r.tgt.clone(), image)?))
}

pub const D_SUBFUNCTIONS_CAP: usize = 1 << 20;

/// All `S` with `S ⊆_d R`: univalent, `dom(S) = dom(R)` and `S ⊆ R`,
/// enumerated as the cartesian product of per-domain-point choices in
/// lexicographic order. Their union is `R`.
pub fn d_subfunctions(r: &Relation) -> Result<Vec<Relation>> {
    d_subfunctions_capped(r, D_SUBFUNCTIONS_CAP)
}

pub fn d_subfunctions_capped(r: &Relation, cap: usize) -> Result<Vec<Relation>> {
    let choices: Vec<(usize, Vec<usize>)> = (0..r.src_card)
        .filter_map(|a| {
            let imgs = r.images_of(a);
            if imgs.is_empty() {
                None
            } else {
                Some((a, imgs))
            }
        })
        .collect();
    let mut count = 1usize;
    for (_, imgs) in &choices {
        count = count
            .checked_mul(imgs.len())
            .filter(|&c| c <= cap)
            .ok_or_else(|| {
                Error::ResultTooLarge(format!("more than {cap} d-subfunctions"))
            })?;
    }
    let mut result = Vec::with_capacity(count);
    let mut odometer = vec![0usize; choices.len()];
    loop {
        let pairs: Vec<(usize, usize)> = choices
            .iter()
            .zip(&odometer)
            .map(|(&(a, ref imgs), &i)| (a, imgs[i]))
            .collect();
        result.push(Relation {
            src: r.src.clone(),
            tgt: r.tgt.clone(),
            src_card: r.src_card,
            tgt_card: r.tgt_card,
            pairs,
        });
        // advance odometer, least significant position last
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

/// Iterates every relation of a given typing in ascending canonical
/// encoding. Fails if the pair-slot count exceeds `max_bits`.
pub fn all_relations(
    universe: &Universe,
    src: &ObjType,
    tgt: &ObjType,
    max_bits: u32,
) -> Result<impl Iterator<Item = Relation>> {
    let src_card = universe.card(src)?;
    let tgt_card = universe.card(tgt)?;
    let bits = src_card * tgt_card;
    if bits > max_bits as usize || bits >= 64 {
        return Err(Error::SpaceTooLarge(format!(
            "2^{bits} relations of type {src} <-> {tgt}"
        )));
    }
    let universe = universe.clone();
    let src = src.clone();
    let tgt = tgt.clone();
    Ok((0..1u64 << bits).map(move |code| {
        Relation::from_encoding(&universe, src.clone(), tgt.clone(), code as u128)
            .expect("enumeration stays in range")
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finsets::SubsetOp;

    fn u2() -> Universe {
        Universe::declare(&[("X", 2), ("Y", 2), ("Z", 2)]).unwrap()
    }

    fn x() -> ObjType {
        ObjType::base("X")
    }

    fn y() -> ObjType {
        ObjType::base("Y")
    }

    fn rel(u: &Universe, src: ObjType, tgt: ObjType, pairs: &[(usize, usize)]) -> Relation {
        Relation::new(u, src, tgt, pairs.to_vec()).unwrap()
    }

    #[test]
    fn constants() {
        let u = u2();
        let id = const_relation(ConstKind::Identity, &u, x(), x()).unwrap();
        assert_eq!(id.pairs(), &[(0, 0), (1, 1)]);
        let empty = const_relation(ConstKind::Empty, &u, x(), x()).unwrap();
        assert!(empty.is_empty());
        let univ = const_relation(ConstKind::Universal, &u, x(), x()).unwrap();
        assert_eq!(univ.pairs().len(), 4);
        assert!(matches!(
            const_relation(ConstKind::Identity, &u, x(), y()),
            Err(Error::TypeMismatch(_))
        ));
    }

    #[test]
    fn boolean_ops() {
        let u = u2();
        let a = rel(&u, x(), x(), &[(0, 0)]);
        let b = rel(&u, x(), x(), &[(0, 1)]);
        assert_eq!(union(&a, &b).unwrap().pairs(), &[(0, 0), (0, 1)]);
        let empty = const_relation(ConstKind::Empty, &u, x(), x()).unwrap();
        let univ = const_relation(ConstKind::Universal, &u, x(), x()).unwrap();
        assert_eq!(complement(&empty), univ);

        let u1 = Universe::declare(&[("W", 1)]).unwrap();
        let w = ObjType::base("W");
        let uni1 = const_relation(ConstKind::Universal, &u1, w.clone(), w.clone()).unwrap();
        let id1 = const_relation(ConstKind::Identity, &u1, w.clone(), w).unwrap();
        assert!(difference(&uni1, &id1).unwrap().is_empty());
    }

    #[test]
    fn composition() {
        let u = u2();
        let id = const_relation(ConstKind::Identity, &u, x(), x()).unwrap();
        let empty = const_relation(ConstKind::Empty, &u, x(), x()).unwrap();
        let r = rel(&u, x(), x(), &[(0, 1), (1, 0)]);
        assert_eq!(compose(&id, &r).unwrap(), r);
        assert_eq!(compose(&r, &empty).unwrap(), empty);
        // {(a,b)};{(b,a)} = {(a,a)}
        let ab = rel(&u, x(), x(), &[(0, 1)]);
        let ba = rel(&u, x(), x(), &[(1, 0)]);
        assert_eq!(compose(&ab, &ba).unwrap().pairs(), &[(0, 0)]);
        assert!(compose(&ab, &rel(&u, y(), y(), &[])).is_err());
    }

    #[test]
    fn converse_and_domain() {
        let u = u2();
        let ab = rel(&u, x(), y(), &[(0, 1)]);
        assert_eq!(converse(&ab).pairs(), &[(1, 0)]);
        let id = const_relation(ConstKind::Identity, &u, x(), x()).unwrap();
        assert_eq!(converse(&id), id);
        assert_eq!(domain(&ab).pairs(), &[(0, 0)]);
        assert!(domain(&const_relation(ConstKind::Empty, &u, x(), y()).unwrap()).is_empty());

        // exhaustive: converse involutive and dom(R) = Id ∩ RR^ = Id ∩ RU
        let univ = const_relation(ConstKind::Universal, &u, y(), x()).unwrap();
        for r in all_relations(&u, &x(), &y(), 16).unwrap() {
            assert_eq!(converse(&converse(&r)), r);
            let via_conv =
                intersection(&id, &compose(&r, &converse(&r)).unwrap()).unwrap();
            let via_univ = intersection(&id, &compose(&r, &univ).unwrap()).unwrap();
            assert_eq!(domain(&r), via_conv);
            assert_eq!(domain(&r), via_univ);
        }
    }

    /// Brute-force oracle: greatest R with R;S subseteq T.
    fn left_residual_oracle(u: &Universe, t: &Relation, s: &Relation) -> Relation {
        let mut best = const_relation(ConstKind::Empty, u, t.src().clone(), s.src().clone()).unwrap();
        for r in all_relations(u, t.src(), s.src(), 16).unwrap() {
            if is_subset(&compose(&r, s).unwrap(), t).unwrap() {
                best = union(&best, &r).unwrap();
            }
        }
        best
    }

    #[test]
    fn residual_examples() {
        let u = u2();
        let univ = const_relation(ConstKind::Universal, &u, x(), x()).unwrap();
        let id = const_relation(ConstKind::Identity, &u, x(), x()).unwrap();
        let s = rel(&u, x(), x(), &[(0, 0), (1, 0)]);
        assert_eq!(residual(ResidualKind::Left, &univ, &s).unwrap(), univ);
        let t = rel(&u, x(), x(), &[(0, 0), (0, 1)]);
        assert_eq!(residual(ResidualKind::Left, &t, &id).unwrap(), t);
        // left({(a,a)}, {(a,a),(b,a)}) = {(a,a),(a,b)}
        let taa = rel(&u, x(), x(), &[(0, 0)]);
        let got = residual(ResidualKind::Left, &taa, &s).unwrap();
        assert_eq!(got.pairs(), &[(0, 0), (0, 1)]);
        assert_eq!(got, left_residual_oracle(&u, &taa, &s));
    }

    #[test]
    fn residual_adjunction_exhaustive() {
        let u = u2();
        let z = ObjType::base("Z");
        for t in all_relations(&u, &x(), &z, 16).unwrap() {
            for s in all_relations(&u, &y(), &z, 16).unwrap() {
                let left = residual(ResidualKind::Left, &t, &s).unwrap();
                assert_eq!(left, left_residual_oracle(&u, &t, &s));
                for r in all_relations(&u, &x(), &y(), 16).unwrap() {
                    let rs_in_t = is_subset(&compose(&r, &s).unwrap(), &t).unwrap();
                    assert_eq!(rs_in_t, is_subset(&r, &left).unwrap());
                    // S subseteq R \ T
                    let right = residual(ResidualKind::Right, &r, &t).unwrap();
                    assert_eq!(rs_in_t, is_subset(&s, &right).unwrap());
                }
            }
        }
    }

    fn membership(u: &Universe, base: &ObjType) -> Relation {
        Relation::from_fn(u, base.clone(), ObjType::pow(base.clone()), |a, set| {
            set >> a & 1 == 1
        })
        .unwrap()
    }

    #[test]
    fn syq_examples() {
        // syq(∈,∈) = Id on P(Y) for |Y| <= 3
        for card in 1..=3usize {
            let u = Universe::declare(&[("Y", card)]).unwrap();
            let yb = ObjType::base("Y");
            let py = ObjType::pow(yb.clone());
            let eps = membership(&u, &yb);
            let id_p = const_relation(ConstKind::Identity, &u, py.clone(), py.clone()).unwrap();
            assert_eq!(syq(&eps, &eps).unwrap(), id_p);
            // syq(∈,-∈) = complementation relation
            let c = syq(&eps, &complement(&eps)).unwrap();
            let n = 1usize << card;
            let full = n - 1;
            let expected = Relation::from_fn(&u, py.clone(), py.clone(), |a, b| b == full ^ a).unwrap();
            assert_eq!(c, expected);
        }
        // syq(∅,∅) = U
        let u = u2();
        let empty = const_relation(ConstKind::Empty, &u, x(), y()).unwrap();
        let univ = const_relation(ConstKind::Universal, &u, y(), y()).unwrap();
        assert_eq!(syq(&empty, &rel(&u, x(), y(), &[])).unwrap(), univ);
    }

    #[test]
    fn properties() {
        let u = u2();
        let id = const_relation(ConstKind::Identity, &u, x(), x()).unwrap();
        assert!(rel_property(RelProperty::Univalent, &id));
        assert!(rel_property(RelProperty::Deterministic, &id));
        assert!(rel_property(RelProperty::Test, &rel(&u, x(), x(), &[(0, 0)])));
        let empty = const_relation(ConstKind::Empty, &u, x(), y()).unwrap();
        assert!(!rel_property(RelProperty::Total, &empty));
        assert!(!rel_property(
            RelProperty::Deterministic,
            &rel(&u, x(), x(), &[(0, 0), (0, 1)])
        ));
    }

    #[test]
    fn univalent_modular_law_exhaustive() {
        // PQ ∩ S = (P ∩ SQ^)Q for univalent Q, at size 2
        let u = u2();
        let z = ObjType::base("Z");
        for q in all_relations(&u, &y(), &z, 16).unwrap() {
            if !rel_property(RelProperty::Univalent, &q) {
                continue;
            }
            for p in all_relations(&u, &x(), &y(), 16).unwrap() {
                for s in all_relations(&u, &x(), &z, 16).unwrap() {
                    let lhs = intersection(&compose(&p, &q).unwrap(), &s).unwrap();
                    let rhs = compose(
                        &intersection(&p, &compose(&s, &converse(&q)).unwrap()).unwrap(),
                        &q,
                    )
                    .unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn restriction_and_image() {
        let u = u2();
        let r = rel(&u, x(), x(), &[(0, 1), (1, 0)]);
        let a = Subset::new(&u, x(), Mask::from_bits(2, 0b01)).unwrap();
        let (restr, img) = restrict_image(&u, &r, &a).unwrap();
        assert_eq!(restr.pairs(), &[(0, 1)]);
        assert_eq!(img.mask, Mask::from_bits(2, 0b10));
        // R|_∅ = ∅ and Id(A) = A
        let none = Subset::empty(&u, x()).unwrap();
        assert!(restrict_image(&u, &r, &none).unwrap().0.is_empty());
        let id = const_relation(ConstKind::Identity, &u, x(), x()).unwrap();
        assert_eq!(restrict_image(&u, &id, &a).unwrap().1, a);
        let wrong = Subset::empty(&u, y()).unwrap();
        assert!(restrict_image(&u, &r, &wrong).is_err());
    }

    #[test]
    fn d_subfunctions_examples() {
        let u = u2();
        let r = rel(&u, x(), x(), &[(0, 0), (0, 1)]);
        let subs = d_subfunctions(&r).unwrap();
        assert_eq!(subs.len(), 2);
        assert_eq!(subs[0].pairs(), &[(0, 0)]);
        assert_eq!(subs[1].pairs(), &[(0, 1)]);
        let empty = const_relation(ConstKind::Empty, &u, x(), x()).unwrap();
        assert_eq!(d_subfunctions(&empty).unwrap(), vec![empty]);
        let id = const_relation(ConstKind::Identity, &u, x(), x()).unwrap();
        assert_eq!(d_subfunctions(&id).unwrap(), vec![id]);
        assert!(matches!(
            d_subfunctions_capped(&r, 1),
            Err(Error::ResultTooLarge(_))
        ));
    }

    #[test]
    fn sub_d_decomposition_exhaustive() {
        // Lemma: R = union of its d-subfunctions, all 16 relations at 2x2.
        let u = u2();
        for r in all_relations(&u, &x(), &y(), 16).unwrap() {
            let mut acc = const_relation(ConstKind::Empty, &u, x(), y()).unwrap();
            for s in d_subfunctions(&r).unwrap() {
                assert!(rel_property(RelProperty::Univalent, &s));
                assert_eq!(domain(&s), domain(&r));
                assert!(is_subset(&s, &r).unwrap());
                acc = union(&acc, &s).unwrap();
            }
            assert_eq!(acc, r);
        }
    }

    #[test]
    fn compose_preserves_unions() {
        use rand::{Rng, SeedableRng};
        let u = u2();
        // families of size <= 2, exhaustive
        for r1 in all_relations(&u, &x(), &y(), 16).unwrap() {
            for r2 in all_relations(&u, &x(), &y(), 16).unwrap() {
                let s = rel(&u, y(), y(), &[(0, 0), (1, 0)]);
                let lhs = compose(&union(&r1, &r2).unwrap(), &s).unwrap();
                let rhs = union(&compose(&r1, &s).unwrap(), &compose(&r2, &s).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
        // 1000 random families, both arguments
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let k = rng.gen_range(1..=4);
            let fam: Vec<Relation> = (0..k)
                .map(|_| {
                    Relation::from_encoding(&u, x(), y(), rng.gen_range(0..16) as u128).unwrap()
                })
                .collect();
            let s = Relation::from_encoding(&u, y(), y(), rng.gen_range(0..16) as u128).unwrap();
            let mut big = const_relation(ConstKind::Empty, &u, x(), y()).unwrap();
            let mut parts = const_relation(ConstKind::Empty, &u, x(), y()).unwrap();
            for r in &fam {
                big = union(&big, r).unwrap();
                parts = union(&parts, &compose(r, &s).unwrap()).unwrap();
            }
            assert_eq!(compose(&big, &s).unwrap(), parts);
            // second argument
            let r = Relation::from_encoding(&u, y(), x(), rng.gen_range(0..16) as u128).unwrap();
            let mut big2 = const_relation(ConstKind::Empty, &u, x(), y()).unwrap();
            let mut parts2 = const_relation(ConstKind::Empty, &u, y(), y()).unwrap();
            for f in &fam {
                big2 = union(&big2, f).unwrap();
                parts2 = union(&parts2, &compose(&r, f).unwrap()).unwrap();
            }
            assert_eq!(compose(&r, &big2).unwrap(), parts2);
        }
    }

    #[test]
    fn json_round_trip() {
        let u = Universe::declare(&[("X", 1), ("Y", 2)]).unwrap();
        let py = ObjType::pow(y());
        let r = rel(&u, x(), py, &[(0, 1), (0, 2)]);
        let v = r.to_json(&u).unwrap();
        assert_eq!(v["src"], "X");
        assert_eq!(v["tgt"], "P(Y)");
        assert_eq!(Relation::from_json(&u, &v).unwrap(), r);
    }

    #[test]
    fn subset_op_sanity() {
        // ensure finsets re-exports used here stay wired
        let u = u2();
        let a = Subset::full(&u, x()).unwrap();
        let c = crate::finsets::subset_algebra(SubsetOp::Complement, &a, None).unwrap();
        assert!(c.mask.is_empty());
    }
}
