//! Finite typed universes: named base sets, lazily materialized powerset
//! object types, canonical element ordering and subset arithmetic.
//!
//! Element order is fixed once and for all: `Base(n)` enumerates indices
//! `0..n`, and `Pow(T)` enumerates subsets of `T` by ascending bit-mask
//! value over `T`'s element order. Consequently the element index of a
//! powerset type *is* the subset mask it denotes, which the multirelation
//! layer exploits throughout.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde_json::Value;

use crate::error::{Error, Result};

/// An object type: a named base set or a powerset of another object type.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ObjType {
    Base(String),
    Pow(Box<ObjType>),
}

impl ObjType {
    pub fn base(name: &str) -> Self {
        ObjType::Base(name.to_string())
    }

    pub fn pow(inner: ObjType) -> Self {
        ObjType::Pow(Box::new(inner))
    }

    pub fn is_pow(&self) -> bool {
        matches!(self, ObjType::Pow(_))
    }

    /// The inner type of a powerset type, if any.
    pub fn inner(&self) -> Option<&ObjType> {
        match self {
            ObjType::Pow(t) => Some(t),
            ObjType::Base(_) => None,
        }
    }
}

impl fmt::Display for ObjType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ObjType::Base(name) => write!(f, "{name}"),
            ObjType::Pow(t) => write!(f, "P({t})"),
        }
    }
}

/// Size limits guarding materialization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Limits {
    /// Largest allowed cardinality of a declared base set.
    pub max_base_card: usize,
    /// Largest number of elements any materialized object type may have.
    pub max_object_size: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_base_card: 4,
            max_object_size: 256,
        }
    }
}

/// A finite typed universe of named base sets.
///
/// Immutable after construction; all queries are pure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Universe {
    base_sets: BTreeMap<String, usize>,
    limits: Limits,
}

impl Universe {
    /// Declares a universe from a name-to-cardinality map with default limits.
    pub fn declare(spec: &[(&str, usize)]) -> Result<Universe> {
        Universe::declare_with_limits(spec, Limits::default())
    }

    pub fn declare_with_limits(spec: &[(&str, usize)], limits: Limits) -> Result<Universe> {
        let mut base_sets = BTreeMap::new();
        for (name, card) in spec {
            if *card == 0 {
                return Err(Error::CardinalityLimit(format!(
                    "base set {name} must have cardinality >= 1"
                )));
            }
            if *card > limits.max_base_card {
                return Err(Error::CardinalityLimit(format!(
                    "base set {name} has cardinality {card} > {}",
                    limits.max_base_card
                )));
            }
            base_sets.insert(name.to_string(), *card);
        }
        Ok(Universe { base_sets, limits })
    }

    pub fn limits(&self) -> &Limits {
        &self.limits
    }

    pub fn base_names(&self) -> impl Iterator<Item = &str> {
        self.base_sets.keys().map(|s| s.as_str())
    }

    pub fn has_base(&self, name: &str) -> bool {
        self.base_sets.contains_key(name)
    }

    /// Cardinality of an object type, materializing powersets lazily.
    pub fn card(&self, t: &ObjType) -> Result<usize> {
        match t {
            ObjType::Base(name) => self
                .base_sets
                .get(name)
                .copied()
                .ok_or_else(|| Error::TypeMismatch(format!("unknown base set {name}"))),
            ObjType::Pow(inner) => {
                let n = self.card(inner)?;
                if n >= usize::BITS as usize {
                    return Err(Error::CardinalityLimit(format!(
                        "P({inner}) has 2^{n} elements"
                    )));
                }
                let size = 1usize << n;
                if size > self.limits.max_object_size {
                    return Err(Error::CardinalityLimit(format!(
                        "P({inner}) has {size} > {} elements",
                        self.limits.max_object_size
                    )));
                }
                Ok(size)
            }
        }
    }

    /// Renders element `idx` of object type `t`.
    ///
    /// Base elements 0,1,2,... become a,b,c,... for cardinalities up to 26;
    /// powerset elements are rendered as sets of their inner elements, with
    /// the empty set shown as `∅`.
    pub fn element_name(&self, t: &ObjType, idx: usize) -> Result<String> {
        let card = self.card(t)?;
        if idx >= card {
            return Err(Error::TypeMismatch(format!(
                "element index {idx} out of range for {t} (cardinality {card})"
            )));
        }
        match t {
            ObjType::Base(_) => {
                if card <= 26 {
                    Ok(((b'a' + idx as u8) as char).to_string())
                } else {
                    Ok(format!("e{idx}"))
                }
            }
            ObjType::Pow(inner) => {
                let inner_card = self.card(inner)?;
                let names: Vec<String> = (0..inner_card)
                    .filter(|b| idx >> b & 1 == 1)
                    .map(|b| self.element_name(inner, b))
                    .collect::<Result<_>>()?;
                if names.is_empty() {
                    Ok("∅".to_string())
                } else {
                    Ok(format!("{{{}}}", names.join(",")))
                }
            }
        }
    }

    /// JSON form of an element: a string for base elements, an array for
    /// powerset elements.
    pub fn element_json(&self, t: &ObjType, idx: usize) -> Result<Value> {
        match t {
            ObjType::Base(_) => Ok(Value::String(self.element_name(t, idx)?)),
            ObjType::Pow(inner) => {
                let inner_card = self.card(inner)?;
                let items: Vec<Value> = (0..inner_card)
                    .filter(|b| idx >> b & 1 == 1)
                    .map(|b| self.element_json(inner, b))
                    .collect::<Result<_>>()?;
                Ok(Value::Array(items))
            }
        }
    }

    /// Inverse of [`element_json`](Self::element_json).
    pub fn element_from_json(&self, t: &ObjType, v: &Value) -> Result<usize> {
        match (t, v) {
            (ObjType::Base(_), Value::String(s)) => self.element_from_name(t, s),
            (ObjType::Pow(inner), Value::Array(items)) => {
                let mut mask = 0usize;
                for item in items {
                    mask |= 1 << self.element_from_json(inner, item)?;
                }
                if mask >= self.card(t)? {
                    return Err(Error::TypeMismatch(format!("element out of range for {t}")));
                }
                Ok(mask)
            }
            _ => Err(Error::TypeMismatch(format!(
                "JSON value {v} does not fit element shape of {t}"
            ))),
        }
    }

    /// Parses a base element name like `a` back to its index.
    pub fn element_from_name(&self, t: &ObjType, name: &str) -> Result<usize> {
        let card = self.card(t)?;
        let idx = if card <= 26 {
            let mut chars = name.chars();
            match (chars.next(), chars.next()) {
                (Some(c), None) if c.is_ascii_lowercase() => (c as u8 - b'a') as usize,
                _ => {
                    return Err(Error::TypeMismatch(format!(
                        "bad element name {name} for {t}"
                    )))
                }
            }
        } else {
            name.strip_prefix('e')
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::TypeMismatch(format!("bad element name {name} for {t}")))?
        };
        if idx >= card {
            return Err(Error::TypeMismatch(format!(
                "element {name} out of range for {t}"
            )));
        }
        Ok(idx)
    }
}

/// A bit mask over an arbitrary number of bits, numeric order.
///
/// Unused high bits of the last block are always zero, so structural
/// equality and hashing coincide with set equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mask {
    nbits: usize,
    blocks: Vec<u64>,
}

fn nblocks(nbits: usize) -> usize {
    nbits.div_ceil(64).max(1)
}

impl Mask {
    pub fn zeros(nbits: usize) -> Mask {
        Mask {
            nbits,
            blocks: vec![0; nblocks(nbits)],
        }
    }

    pub fn full(nbits: usize) -> Mask {
        let mut m = Mask::zeros(nbits);
        for i in 0..nbits {
            m.set(i, true);
        }
        m
    }

    pub fn from_indices(nbits: usize, indices: &[usize]) -> Mask {
        let mut m = Mask::zeros(nbits);
        for &i in indices {
            m.set(i, true);
        }
        m
    }

    /// Builds a mask from the low bits of a machine word.
    pub fn from_bits(nbits: usize, bits: u64) -> Mask {
        debug_assert!(nbits >= 64 || bits < (1u64 << nbits));
        let mut m = Mask::zeros(nbits);
        m.blocks[0] = bits;
        m
    }

    pub fn len(&self) -> usize {
        self.nbits
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.iter().all(|&b| b == 0)
    }

    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.nbits);
        self.blocks[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.nbits);
        if value {
            self.blocks[i / 64] |= 1 << (i % 64);
        } else {
            self.blocks[i / 64] &= !(1 << (i % 64));
        }
    }

    pub fn count_ones(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn union(&self, other: &Mask) -> Mask {
        debug_assert_eq!(self.nbits, other.nbits);
        Mask {
            nbits: self.nbits,
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a | b)
                .collect(),
        }
    }

    pub fn intersection(&self, other: &Mask) -> Mask {
        debug_assert_eq!(self.nbits, other.nbits);
        Mask {
            nbits: self.nbits,
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    pub fn difference(&self, other: &Mask) -> Mask {
        debug_assert_eq!(self.nbits, other.nbits);
        Mask {
            nbits: self.nbits,
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a & !b)
                .collect(),
        }
    }

    pub fn complement(&self) -> Mask {
        Mask::full(self.nbits).difference(self)
    }

    pub fn is_subset(&self, other: &Mask) -> bool {
        debug_assert_eq!(self.nbits, other.nbits);
        self.blocks
            .iter()
            .zip(&other.blocks)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.nbits).filter(|&i| self.get(i))
    }
}

impl PartialOrd for Mask {
    fn partial_cmp(&self, other: &Mask) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Mask {
    /// Numeric order on the mask value.
    fn cmp(&self, other: &Mask) -> Ordering {
        debug_assert_eq!(self.nbits, other.nbits);
        for (a, b) in self.blocks.iter().rev().zip(other.blocks.iter().rev()) {
            match a.cmp(b) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        Ordering::Equal
    }
}

/// A canonical subset of an object type's element list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset {
    pub objtype: ObjType,
    pub mask: Mask,
}

impl Subset {
    pub fn new(universe: &Universe, objtype: ObjType, mask: Mask) -> Result<Subset> {
        let card = universe.card(&objtype)?;
        if mask.len() != card {
            return Err(Error::TypeMismatch(format!(
                "mask width {} does not match |{objtype}| = {card}",
                mask.len()
            )));
        }
        Ok(Subset { objtype, mask })
    }

    pub fn empty(universe: &Universe, objtype: ObjType) -> Result<Subset> {
        let card = universe.card(&objtype)?;
        Ok(Subset {
            objtype,
            mask: Mask::zeros(card),
        })
    }

    pub fn full(universe: &Universe, objtype: ObjType) -> Result<Subset> {
        let card = universe.card(&objtype)?;
        Ok(Subset {
            objtype,
            mask: Mask::full(card),
        })
    }
}

/// The boolean operation selector for [`subset_algebra`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubsetOp {
    Union,
    Intersection,
    Complement,
}

/// Element-level boolean arithmetic on subsets of a common object type.
pub fn subset_algebra(op: SubsetOp, a: &Subset, b: Option<&Subset>) -> Result<Subset> {
    match op {
        SubsetOp::Complement => Ok(Subset {
            objtype: a.objtype.clone(),
            mask: a.mask.complement(),
        }),
        SubsetOp::Union | SubsetOp::Intersection => {
            let b = b.ok_or_else(|| {
                Error::TypeMismatch("binary subset operation needs two operands".to_string())
            })?;
            if a.objtype != b.objtype {
                return Err(Error::TypeMismatch(format!(
                    "subset operands have distinct object types {} and {}",
                    a.objtype, b.objtype
                )));
            }
            let mask = match op {
                SubsetOp::Union => a.mask.union(&b.mask),
                SubsetOp::Intersection => a.mask.intersection(&b.mask),
                SubsetOp::Complement => unreachable!(),
            };
            Ok(Subset {
                objtype: a.objtype.clone(),
                mask,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn universe_xy() -> Universe {
        Universe::declare(&[("X", 1), ("Y", 2)]).unwrap()
    }

    #[test]
    fn powerset_cardinalities() {
        let u = universe_xy();
        assert_eq!(u.card(&ObjType::base("X")).unwrap(), 1);
        assert_eq!(u.card(&ObjType::pow(ObjType::base("Y"))).unwrap(), 4);

        let u3 = Universe::declare(&[("Y", 3)]).unwrap();
        let ppy = ObjType::pow(ObjType::pow(ObjType::base("Y")));
        assert_eq!(u3.card(&ppy).unwrap(), 256);
    }

    #[test]
    fn cardinality_limit() {
        // {Y:9}: Pow(Y) would have 512 > 256 elements; rejected at declare
        // already because 9 exceeds the base-set cap.
        assert!(matches!(
            Universe::declare(&[("Y", 9)]),
            Err(Error::CardinalityLimit(_))
        ));
        // A base within the cap whose double powerset overflows fails lazily.
        let u = Universe::declare(&[("Y", 4)]).unwrap();
        let ppy = ObjType::pow(ObjType::pow(ObjType::base("Y")));
        assert!(matches!(u.card(&ppy), Err(Error::CardinalityLimit(_))));
    }

    #[test]
    fn zero_cardinality_rejected() {
        assert!(matches!(
            Universe::declare(&[("X", 0)]),
            Err(Error::CardinalityLimit(_))
        ));
    }

    #[test]
    fn element_names() {
        let u = universe_xy();
        let y = ObjType::base("Y");
        let py = ObjType::pow(y.clone());
        assert_eq!(u.element_name(&y, 0).unwrap(), "a");
        assert_eq!(u.element_name(&y, 1).unwrap(), "b");
        assert_eq!(u.element_name(&py, 0).unwrap(), "∅");
        assert_eq!(u.element_name(&py, 3).unwrap(), "{a,b}");
        assert!(u.element_name(&py, 4).is_err());
    }

    #[test]
    fn subset_algebra_examples() {
        let u = universe_xy();
        let y = ObjType::base("Y");
        let a = Subset::new(&u, y.clone(), Mask::from_bits(2, 0b01)).unwrap();
        let b = Subset::new(&u, y.clone(), Mask::from_bits(2, 0b10)).unwrap();
        let ab = subset_algebra(SubsetOp::Union, &a, Some(&b)).unwrap();
        assert_eq!(ab.mask, Mask::from_bits(2, 0b11));
        let ca = subset_algebra(SubsetOp::Complement, &a, None).unwrap();
        assert_eq!(ca.mask, b.mask);
        let meet = subset_algebra(SubsetOp::Intersection, &a, Some(&b)).unwrap();
        assert!(meet.mask.is_empty());
    }

    #[test]
    fn subset_type_mismatch() {
        let u = universe_xy();
        let a = Subset::empty(&u, ObjType::base("X")).unwrap();
        let b = Subset::empty(&u, ObjType::base("Y")).unwrap();
        assert!(matches!(
            subset_algebra(SubsetOp::Union, &a, Some(&b)),
            Err(Error::TypeMismatch(_))
        ));
    }

    // Boolean-algebra axioms, exhaustive for every base size <= 4.
    #[test]
    fn boolean_algebra_exhaustive() {
        for card in 1..=4usize {
            let u = Universe::declare(&[("Z", card)]).unwrap();
            let _z = ObjType::base("Z");
            let masks: Vec<Mask> = (0..1u64 << card).map(|m| Mask::from_bits(card, m)).collect();
            let full = Mask::full(card);
            let empty = Mask::zeros(card);
            for a in &masks {
                assert_eq!(a.union(&a.complement()), full);
                assert_eq!(a.intersection(&a.complement()), empty);
                assert_eq!(&a.complement().complement(), a);
                for b in &masks {
                    assert_eq!(a.union(b), b.union(a));
                    assert_eq!(a.intersection(b), b.intersection(a));
                    // De Morgan
                    assert_eq!(
                        a.union(b).complement(),
                        a.complement().intersection(&b.complement())
                    );
                    for c in &masks {
                        assert_eq!(a.union(&b.union(c)), a.union(b).union(c));
                        assert_eq!(
                            a.intersection(&b.union(c)),
                            a.intersection(b).union(&a.intersection(c))
                        );
                    }
                }
            }
            let _ = u;
        }
    }

    #[test]
    fn mask_numeric_order_is_stable() {
        let masks: Vec<Mask> = (0..16u64).map(|m| Mask::from_bits(4, m)).collect();
        for (i, a) in masks.iter().enumerate() {
            for (j, b) in masks.iter().enumerate() {
                assert_eq!(a.cmp(b), i.cmp(&j));
            }
        }
    }
}
