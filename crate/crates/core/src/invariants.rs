//! Neighboring numbers and weighted musical invariants.
//!
//! All weights the constructions need are half-integers, so values are held
//! exactly as a count of halves. Nothing here touches floating point.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Mul};
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::assignment::MusicalIcosahedron;
use crate::error::{Error, Result};
use crate::tones::Scale;

/// An exact multiple of 1/2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct HalfInteger {
    halves: i64,
}

pub type InvariantValue = HalfInteger;
pub type Weight = HalfInteger;

impl HalfInteger {
    pub const ZERO: HalfInteger = HalfInteger { halves: 0 };
    pub const HALF: HalfInteger = HalfInteger { halves: 1 };
    pub const ONE: HalfInteger = HalfInteger { halves: 2 };

    pub const fn from_int(n: i64) -> Self {
        HalfInteger { halves: 2 * n }
    }

    pub const fn from_halves(halves: i64) -> Self {
        HalfInteger { halves }
    }

    /// `num / den`, provided it is a multiple of 1/2.
    pub fn from_ratio(num: i64, den: i64) -> Result<Self> {
        if den == 0 || (2 * num) % den != 0 {
            return Err(Error::InvariantSpec(format!(
                "{num}/{den} is not a multiple of 1/2"
            )));
        }
        Ok(HalfInteger {
            halves: 2 * num / den,
        })
    }

    pub fn halves(self) -> i64 {
        self.halves
    }

    pub fn is_integer(self) -> bool {
        self.halves % 2 == 0
    }
}

impl Add for HalfInteger {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        HalfInteger {
            halves: self.halves + rhs.halves,
        }
    }
}

impl Mul<i64> for HalfInteger {
    type Output = Self;
    fn mul(self, rhs: i64) -> Self {
        HalfInteger {
            halves: self.halves * rhs,
        }
    }
}

impl Sum for HalfInteger {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(HalfInteger::ZERO, Add::add)
    }
}

impl From<i64> for HalfInteger {
    fn from(n: i64) -> Self {
        HalfInteger::from_int(n)
    }
}

impl fmt::Display for HalfInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.halves / 2)
        } else {
            write!(f, "{}/2", self.halves)
        }
    }
}

impl FromStr for HalfInteger {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvariantSpec(format!("cannot parse weight `{s}`"));
        match s.split_once('/') {
            Some((n, d)) => {
                let n = n.trim().parse().map_err(|_| bad())?;
                let d = d.trim().parse().map_err(|_| bad())?;
                HalfInteger::from_ratio(n, d)
            }
            None => Ok(HalfInteger::from_int(s.trim().parse().map_err(|_| bad())?)),
        }
    }
}

impl Serialize for HalfInteger {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Number of cyclic neighbor pairs of `scale` whose tones sit on adjacent
/// vertices of `x`. Equals `scale.len()` exactly when `x` satisfies the
/// neighboring condition for the scale (for scales of two or more tones).
pub fn neighboring_number(scale: &Scale, x: &MusicalIcosahedron) -> usize {
    scale
        .neighbor_pairs()
        .filter(|&(a, b)| x.tones_adjacent(a, b))
        .count()
}

/// A weighted list of scales.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantSpec {
    terms: Vec<(Scale, Weight)>,
}

impl InvariantSpec {
    pub fn new(terms: Vec<(Scale, Weight)>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvariantSpec("at least one term is required".into()));
        }
        if let Some((scale, _)) = terms.iter().find(|(_, w)| *w == HalfInteger::ZERO) {
            return Err(Error::InvariantSpec(format!("zero weight on [{scale}]")));
        }
        Ok(InvariantSpec { terms })
    }

    pub fn terms(&self) -> &[(Scale, Weight)] {
        &self.terms
    }
}

pub fn musical_invariant(spec: &InvariantSpec, x: &MusicalIcosahedron) -> InvariantValue {
    spec.terms
        .iter()
        .map(|(scale, w)| *w * neighboring_number(scale, x) as i64)
        .sum()
}

/// `chain + hexagon/2 + star/2`, using the scales induced by `base`.
pub fn family_invariant_spec(base: &MusicalIcosahedron) -> InvariantSpec {
    InvariantSpec::new(vec![
        (base.induced_chain_scale(), HalfInteger::ONE),
        (base.induced_hexagon_scale(), HalfInteger::HALF),
        (base.induced_star_scale(), HalfInteger::HALF),
    ])
    .expect("three nonzero terms")
}

pub fn family_invariant(base: &MusicalIcosahedron, x: &MusicalIcosahedron) -> InvariantValue {
    musical_invariant(&family_invariant_spec(base), x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assignment::{named_type, type1};
    use crate::icosahedron::{canonical_automorphisms, InterMask};
    use crate::tones::catalog;

    fn spec(terms: &[(&str, HalfInteger)]) -> InvariantSpec {
        InvariantSpec::new(
            terms
                .iter()
                .map(|(k, w)| (catalog(k).unwrap(), *w))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn type1_neighboring_numbers() {
        let t1 = type1();
        assert_eq!(neighboring_number(&catalog("chromatic").unwrap(), &t1), 12);
        assert_eq!(neighboring_number(&catalog("W1").unwrap(), &t1), 6);
        assert_eq!(neighboring_number(&catalog("W2").unwrap(), &t1), 0);
        assert_eq!(neighboring_number(&catalog("pythagorean").unwrap(), &t1), 0);
    }

    #[test]
    fn single_swap_neighboring_numbers() {
        let x = type1().apply_inter(InterMask::from_slots([0]));
        assert_eq!(neighboring_number(&catalog("chromatic").unwrap(), &x), 11);
        assert_eq!(neighboring_number(&catalog("W1").unwrap(), &x), 6);
        assert_eq!(neighboring_number(&catalog("W2").unwrap(), &x), 2);
    }

    #[test]
    fn invariant_examples() {
        let h = HalfInteger::HALF;
        let one = HalfInteger::ONE;
        assert_eq!(
            musical_invariant(&spec(&[("chromatic", one), ("W1", h), ("W2", h)]), &type1()),
            HalfInteger::from_int(15)
        );
        assert_eq!(
            musical_invariant(&spec(&[("chromatic", one), ("pythagorean", one)]), &type1()),
            HalfInteger::from_int(12)
        );
        assert_eq!(
            musical_invariant(
                &spec(&[("chromatic_A", one), ("W1", h), ("wholetone_A2", h)]),
                &named_type("RA").unwrap()
            ),
            HalfInteger::from_int(15)
        );
    }

    #[test]
    fn family_invariant_specialises() {
        let t1 = type1();
        assert_eq!(
            family_invariant_spec(&t1),
            spec(&[
                ("chromatic", HalfInteger::ONE),
                ("W1", HalfInteger::HALF),
                ("W2", HalfInteger::HALF)
            ])
        );
    }

    #[test]
    fn neighboring_number_is_automorphism_invariant() {
        let t1 = type1();
        let scales: Vec<_> = ["chromatic", "W1", "W2", "pythagorean", "c_major"]
            .iter()
            .map(|k| catalog(k).unwrap())
            .collect();
        let x = t1.apply_inter(InterMask::from_slots([1, 4]));
        for a in canonical_automorphisms() {
            let y = x.transform(a);
            for s in &scales {
                assert_eq!(neighboring_number(s, &x), neighboring_number(s, &y));
            }
        }
    }

    #[test]
    fn half_integer_arithmetic() {
        assert_eq!(HalfInteger::from_ratio(1, 2).unwrap(), HalfInteger::HALF);
        assert_eq!(
            HalfInteger::from_ratio(3, 1).unwrap(),
            HalfInteger::from_int(3)
        );
        assert!(HalfInteger::from_ratio(1, 3).is_err());
        assert!(HalfInteger::from_ratio(1, 0).is_err());
        assert_eq!("1/2".parse::<HalfInteger>().unwrap(), HalfInteger::HALF);
        assert_eq!(HalfInteger::from_halves(31).to_string(), "31/2");
        assert_eq!(HalfInteger::from_int(15).to_string(), "15");
    }

    #[test]
    fn spec_validation() {
        assert!(InvariantSpec::new(vec![]).is_err());
        assert!(InvariantSpec::new(vec![(catalog("W1").unwrap(), HalfInteger::ZERO)]).is_err());
    }
}
