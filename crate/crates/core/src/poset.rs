//! Index values and down-sets.
//!
//! An [`IndexValue`] is a point of the index poset: a fixed-length vector of
//! levels compared componentwise. Discrete instantiations use capped natural
//! levels (usually a single coordinate), the metric evaluators use exact
//! rationals in `[0, 1]`. A [`DownSet`] is the downward closure of a finite
//! set of index values, stored by its antichain of maximal generators.

use std::fmt;

use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Rational = Ratio<i64>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IndexValue {
    /// Natural levels bounded by `cap`.
    Nat { cap: u64, coords: Vec<u64> },
    /// Rational levels in `[0, 1]`.
    Rat(Vec<Rational>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LevelKind {
    Nat { cap: u64 },
    Rational,
}

impl IndexValue {
    pub fn nat(cap: u64, coords: Vec<u64>) -> Result<Self> {
        if let Some(c) = coords.iter().find(|&&c| c > cap) {
            return Err(Error::Invalid(format!("level {c} exceeds cap {cap}")));
        }
        Ok(IndexValue::Nat { cap, coords })
    }

    /// Single-coordinate natural level; `value` must not exceed `cap`.
    pub fn level(value: u64, cap: u64) -> Self {
        assert!(value <= cap, "level {value} exceeds cap {cap}");
        IndexValue::Nat {
            cap,
            coords: vec![value],
        }
    }

    pub fn rat(coords: Vec<Rational>) -> Result<Self> {
        if let Some(c) = coords.iter().find(|c| **c < Rational::zero() || **c > Rational::one()) {
            return Err(Error::Invalid(format!("rational level {c} outside [0,1]")));
        }
        Ok(IndexValue::Rat(coords))
    }

    pub fn len(&self) -> usize {
        match self {
            IndexValue::Nat { coords, .. } => coords.len(),
            IndexValue::Rat(coords) => coords.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn kind(&self) -> LevelKind {
        match self {
            IndexValue::Nat { cap, .. } => LevelKind::Nat { cap: *cap },
            IndexValue::Rat(_) => LevelKind::Rational,
        }
    }

    fn check_shape(&self, other: &IndexValue) -> Result<()> {
        if self.len() != other.len() || self.kind() != other.kind() {
            return Err(Error::Shape(format!(
                "index values {self} and {other} differ in length or level kind"
            )));
        }
        Ok(())
    }

    /// Componentwise order.
    pub fn leq(&self, other: &IndexValue) -> Result<bool> {
        self.check_shape(other)?;
        Ok(match (self, other) {
            (IndexValue::Nat { coords: x, .. }, IndexValue::Nat { coords: y, .. }) => {
                x.iter().zip(y).all(|(a, b)| a <= b)
            }
            (IndexValue::Rat(x), IndexValue::Rat(y)) => x.iter().zip(y).all(|(a, b)| a <= b),
            _ => unreachable!("shape checked"),
        })
    }

    pub fn is_zero(&self) -> bool {
        match self {
            IndexValue::Nat { coords, .. } => coords.iter().all(|&c| c == 0),
            IndexValue::Rat(coords) => coords.iter().all(Zero::is_zero),
        }
    }
}

impl fmt::Display for IndexValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        match self {
            IndexValue::Nat { coords, .. } => {
                for (i, c) in coords.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
            }
            IndexValue::Rat(coords) => {
                for (i, c) in coords.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
            }
        }
        write!(f, ")")
    }
}

/// Downward closure of finitely many index values, kept as a sorted antichain.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DownSet {
    generators: Vec<IndexValue>,
}

impl DownSet {
    pub fn generators(&self) -> &[IndexValue] {
        &self.generators
    }

    pub fn contains(&self, value: &IndexValue) -> Result<bool> {
        for g in &self.generators {
            if value.leq(g)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    pub fn is_subset(&self, other: &DownSet) -> Result<bool> {
        for g in &self.generators {
            if !other.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl fmt::Display for DownSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, "}}")
    }
}

pub fn leq(xi: &IndexValue, zeta: &IndexValue) -> Result<bool> {
    xi.leq(zeta)
}

/// The down-set generated by `values`; its generators are the maximal inputs.
pub fn downset_of(values: &[IndexValue]) -> Result<DownSet> {
    let first = values
        .first()
        .ok_or(Error::Empty("down-set needs at least one value"))?;
    for v in values {
        first.check_shape(v)?;
    }
    let mut distinct: Vec<IndexValue> = values.to_vec();
    distinct.sort();
    distinct.dedup();
    let mut generators = Vec::with_capacity(distinct.len());
    for (i, v) in distinct.iter().enumerate() {
        let dominated = distinct
            .iter()
            .enumerate()
            .any(|(j, w)| i != j && v.leq(w).unwrap_or(false));
        if !dominated {
            generators.push(v.clone());
        }
    }
    Ok(DownSet { generators })
}

/// `D ⊊ E` as down-sets.
pub fn strictly_below(d: &DownSet, e: &DownSet) -> Result<bool> {
    Ok(d.is_subset(e)? && !e.is_subset(d)?)
}

/// Indices of `values` that are maximal in `d`. Every value must lie in `d`.
pub fn maximal_in(d: &DownSet, values: &[IndexValue]) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for (i, v) in values.iter().enumerate() {
        if !d.contains(v)? {
            return Err(Error::Contract(format!("value {v} lies outside down-set {d}")));
        }
        if d.generators.contains(v) {
            out.push(i);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn n(coords: &[u64]) -> IndexValue {
        IndexValue::nat(9, coords.to_vec()).unwrap()
    }

    #[test]
    fn leq_examples() {
        assert!(leq(&n(&[0]), &n(&[0])).unwrap());
        assert!(!leq(&n(&[1, 0]), &n(&[0, 1])).unwrap());
        assert!(!leq(&n(&[0, 1]), &n(&[1, 0])).unwrap());
        assert!(leq(&n(&[2]), &n(&[5])).unwrap());
    }

    #[test]
    fn leq_rejects_mismatched_shapes() {
        assert!(matches!(leq(&n(&[0]), &n(&[0, 0])), Err(Error::Shape(_))));
        let r = IndexValue::rat(vec![Rational::zero()]).unwrap();
        assert!(matches!(leq(&n(&[0]), &r), Err(Error::Shape(_))));
        let other_cap = IndexValue::level(0, 3);
        assert!(leq(&n(&[0]), &other_cap).is_err());
    }

    #[test]
    fn levels_are_range_checked() {
        assert!(IndexValue::nat(2, vec![3]).is_err());
        assert!(IndexValue::rat(vec![Rational::new(3, 2)]).is_err());
        assert!(IndexValue::rat(vec![Rational::new(-1, 2)]).is_err());
        assert!(IndexValue::rat(vec![Rational::new(1, 2)]).is_ok());
    }

    #[test]
    fn downset_examples() {
        let d = downset_of(&[n(&[0]), n(&[2]), n(&[1])]).unwrap();
        assert_eq!(d.generators(), &[n(&[2])]);
        let d = downset_of(&[n(&[1, 0]), n(&[0, 1]), n(&[0, 0])]).unwrap();
        assert_eq!(d.generators(), &[n(&[0, 1]), n(&[1, 0])]);
        let d = downset_of(&[n(&[3]), n(&[3])]).unwrap();
        assert_eq!(d.generators(), &[n(&[3])]);
        assert_eq!(downset_of(&[]), Err(Error::Empty("down-set needs at least one value")));
        assert!(downset_of(&[n(&[1]), n(&[1, 1])]).is_err());
    }

    #[test]
    fn strictly_below_examples() {
        let one = downset_of(&[n(&[1])]).unwrap();
        let two = downset_of(&[n(&[2])]).unwrap();
        assert!(strictly_below(&one, &two).unwrap());
        assert!(!strictly_below(&two, &two).unwrap());
        let a = downset_of(&[n(&[1, 0])]).unwrap();
        let b = downset_of(&[n(&[1, 0]), n(&[0, 1])]).unwrap();
        assert!(strictly_below(&a, &b).unwrap());
        assert!(!strictly_below(&b, &a).unwrap());
    }

    // Expand down-sets on the 2x2 grid point by point.
    #[test]
    fn strictly_below_matches_grid_expansion() {
        let grid: Vec<IndexValue> = (0..2).flat_map(|x| (0..2).map(move |y| n(&[x, y]))).collect();
        let expand = |d: &DownSet| -> Vec<bool> { grid.iter().map(|p| d.contains(p).unwrap()).collect() };
        let a = downset_of(&[n(&[1, 0])]).unwrap();
        let b = downset_of(&[n(&[1, 0]), n(&[0, 1])]).unwrap();
        let (ea, eb) = (expand(&a), expand(&b));
        assert!(ea.iter().zip(&eb).all(|(x, y)| !x || *y));
        assert_ne!(ea, eb);
    }

    #[test]
    fn maximal_in_examples() {
        let d = downset_of(&[n(&[2])]).unwrap();
        assert_eq!(maximal_in(&d, &[n(&[2]), n(&[1]), n(&[2])]).unwrap(), vec![0, 2]);
        let d = downset_of(&[n(&[1, 0]), n(&[0, 1])]).unwrap();
        assert_eq!(
            maximal_in(&d, &[n(&[1, 0]), n(&[0, 0]), n(&[0, 1])]).unwrap(),
            vec![0, 2]
        );
        let d = downset_of(&[n(&[0])]).unwrap();
        assert_eq!(maximal_in(&d, &[n(&[0])]).unwrap(), vec![0]);
        assert!(matches!(maximal_in(&d, &[n(&[1])]), Err(Error::Contract(_))));
    }

    fn small_values() -> impl Strategy<Value = Vec<IndexValue>> {
        prop::collection::vec(prop::collection::vec(0u64..4, 2), 1..6)
            .prop_map(|vs| vs.into_iter().map(|c| n(&c)).collect())
    }

    proptest! {
        #[test]
        fn downset_of_is_idempotent(values in small_values()) {
            let d = downset_of(&values).unwrap();
            let again = downset_of(d.generators()).unwrap();
            prop_assert_eq!(&d, &again);
            for v in &values {
                prop_assert!(d.contains(v).unwrap());
            }
        }

        #[test]
        fn strictly_below_is_a_strict_order(a in small_values(), b in small_values(), c in small_values()) {
            let (a, b, c) = (downset_of(&a).unwrap(), downset_of(&b).unwrap(), downset_of(&c).unwrap());
            prop_assert!(!strictly_below(&a, &a).unwrap());
            if strictly_below(&a, &b).unwrap() && strictly_below(&b, &c).unwrap() {
                prop_assert!(strictly_below(&a, &c).unwrap());
            }
            if strictly_below(&a, &b).unwrap() {
                prop_assert!(!strictly_below(&b, &a).unwrap());
            }
        }

        #[test]
        fn chain_downsets_have_one_generator(values in prop::collection::vec(0u64..9, 1..8)) {
            let vals: Vec<IndexValue> = values.iter().map(|&v| n(&[v])).collect();
            let d = downset_of(&vals).unwrap();
            prop_assert_eq!(d.generators(), &[n(&[*values.iter().max().unwrap()])]);
        }
    }
}
