use std::fmt;
use std::ops::{Add, Sub};

use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

use crate::rational::{self, Rational};

/// Certified rational interval `[lo, hi]` bounding a real quantity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Enclosure {
    pub lo: Rational,
    pub hi: Rational,
}

impl Enclosure {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        assert!(lo <= hi, "enclosure with lo > hi: {lo} > {hi}");
        Self { lo, hi }
    }

    pub fn exact(value: Rational) -> Self {
        Self { lo: value.clone(), hi: value }
    }

    pub fn zero() -> Self {
        Self::exact(Rational::zero())
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    /// The exact value, when the enclosure has collapsed to a point.
    pub fn value(&self) -> Option<&Rational> {
        self.is_exact().then_some(&self.lo)
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, q: &Rational) -> bool {
        self.lo <= *q && *q <= self.hi
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / rational::int(2)
    }

    /// Scales by a nonnegative rational.
    pub fn scale(&self, k: &Rational) -> Self {
        assert!(!k.is_negative());
        Self { lo: &self.lo * k, hi: &self.hi * k }
    }

    /// Intersection with `[0, inf)`, for quantities known to be nonnegative.
    pub fn clamp_nonneg(self) -> Self {
        let zero = Rational::zero();
        Self { lo: rational::max(&self.lo, &zero), hi: rational::max(&self.hi, &zero) }
    }

    /// Hull of two enclosures.
    pub fn hull(&self, other: &Self) -> Self {
        Self { lo: rational::min(&self.lo, &other.lo), hi: rational::max(&self.hi, &other.hi) }
    }

    pub fn sum<'a>(items: impl IntoIterator<Item = &'a Enclosure>) -> Self {
        items.into_iter().fold(Self::zero(), |acc, e| &acc + e)
    }
}

impl Add<&Enclosure> for &Enclosure {
    type Output = Enclosure;
    fn add(self, rhs: &Enclosure) -> Enclosure {
        Enclosure { lo: &self.lo + &rhs.lo, hi: &self.hi + &rhs.hi }
    }
}

impl Sub<&Enclosure> for &Enclosure {
    type Output = Enclosure;
    fn sub(self, rhs: &Enclosure) -> Enclosure {
        Enclosure { lo: &self.lo - &rhs.hi, hi: &self.hi - &rhs.lo }
    }
}

impl Add for Enclosure {
    type Output = Enclosure;
    fn add(self, rhs: Enclosure) -> Enclosure {
        &self + &rhs
    }
}

impl Sub for Enclosure {
    type Output = Enclosure;
    fn sub(self, rhs: Enclosure) -> Enclosure {
        &self - &rhs
    }
}

impl fmt::Display for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_exact() {
            write!(f, "{}", self.lo)
        } else {
            write!(f, "[{}, {}]", self.lo, self.hi)
        }
    }
}

impl Serialize for Enclosure {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Enclosure", 3)?;
        st.serialize_field("lo", &self.lo.to_string())?;
        st.serialize_field("hi", &self.hi.to_string())?;
        st.serialize_field("exact", &self.is_exact())?;
        st.end()
    }
}
