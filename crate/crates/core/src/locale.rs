//! Interval locales, their opposites and finite products.
//!
//! An [`IntervalLocale`] is a closed rational interval `[lo, hi]` read either
//! in the numeric order or in the reversed one. Elements of the augmented
//! locale `L_+` are [`LocaleElement`]s: a value of the interval or the
//! adjoined bottom, which sits strictly below the initial element of `L`.
//!
//! All comparisons are exact; an opposite interval simply swaps the
//! arguments of the numeric comparison.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{format_rational, int, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Standard,
    Opposite,
}

/// A closed interval `[lo, hi]` with `lo < hi`, ordered numerically
/// (`Standard`) or in reverse (`Opposite`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntervalLocale {
    lo: Rational,
    hi: Rational,
    orientation: Orientation,
}

/// An element of `L_+`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LocaleElement {
    /// The adjoined initial element `0` of `L_+`.
    Bottom,
    Value(Rational),
}

impl LocaleElement {
    pub fn value(&self) -> Option<&Rational> {
        match self {
            LocaleElement::Bottom => None,
            LocaleElement::Value(v) => Some(v),
        }
    }

    pub fn is_bottom(&self) -> bool {
        matches!(self, LocaleElement::Bottom)
    }
}

impl From<Rational> for LocaleElement {
    fn from(v: Rational) -> Self {
        LocaleElement::Value(v)
    }
}

impl fmt::Display for LocaleElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LocaleElement::Bottom => f.write_str("bottom"),
            LocaleElement::Value(v) => f.write_str(&format_rational(v)),
        }
    }
}

impl IntervalLocale {
    pub fn new(lo: Rational, hi: Rational, orientation: Orientation) -> Result<Self> {
        if lo >= hi {
            return Err(Error::Domain(format!(
                "degenerate interval [{}, {}]",
                format_rational(&lo),
                format_rational(&hi)
            )));
        }
        Ok(IntervalLocale { lo, hi, orientation })
    }

    /// `[0, 1]` with the numeric order.
    pub fn unit() -> Self {
        IntervalLocale { lo: int(0), hi: int(1), orientation: Orientation::Standard }
    }

    /// `[0, r]^op`, the parameter locale of a Vietoris-Rips system.
    pub fn opposite_from_zero(r: Rational) -> Result<Self> {
        IntervalLocale::new(int(0), r, Orientation::Opposite)
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn contains(&self, v: &Rational) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn check_value(&self, v: &Rational) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "{} lies outside [{}, {}]",
                format_rational(v),
                format_rational(&self.lo),
                format_rational(&self.hi)
            )))
        }
    }

    pub fn check(&self, a: &LocaleElement) -> Result<()> {
        match a {
            LocaleElement::Bottom => Ok(()),
            LocaleElement::Value(v) => self.check_value(v),
        }
    }

    /// Terminal element of `L`.
    pub fn top_value(&self) -> &Rational {
        match self.orientation {
            Orientation::Standard => &self.hi,
            Orientation::Opposite => &self.lo,
        }
    }

    /// Initial element `i` of `L` (not the adjoined bottom of `L_+`).
    pub fn initial_value(&self) -> &Rational {
        match self.orientation {
            Orientation::Standard => &self.lo,
            Orientation::Opposite => &self.hi,
        }
    }

    pub fn top(&self) -> LocaleElement {
        LocaleElement::Value(self.top_value().clone())
    }

    pub fn initial(&self) -> LocaleElement {
        LocaleElement::Value(self.initial_value().clone())
    }

    /// Order of two interval values, unchecked against the bounds.
    pub fn cmp_values(&self, a: &Rational, b: &Rational) -> Ordering {
        match self.orientation {
            Orientation::Standard => a.cmp(b),
            Orientation::Opposite => b.cmp(a),
        }
    }

    pub fn value_leq(&self, a: &Rational, b: &Rational) -> bool {
        self.cmp_values(a, b) != Ordering::Greater
    }

    pub fn value_lt(&self, a: &Rational, b: &Rational) -> bool {
        self.cmp_values(a, b) == Ordering::Less
    }

    /// Order on `L_+`, unchecked.
    pub fn cmp_elements(&self, a: &LocaleElement, b: &LocaleElement) -> Ordering {
        match (a, b) {
            (LocaleElement::Bottom, LocaleElement::Bottom) => Ordering::Equal,
            (LocaleElement::Bottom, _) => Ordering::Less,
            (_, LocaleElement::Bottom) => Ordering::Greater,
            (LocaleElement::Value(x), LocaleElement::Value(y)) => self.cmp_values(x, y),
        }
    }

    pub fn compare(&self, a: &LocaleElement, b: &LocaleElement) -> Result<Ordering> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.cmp_elements(a, b))
    }

    pub fn leq(&self, a: &LocaleElement, b: &LocaleElement) -> Result<bool> {
        Ok(self.compare(a, b)? != Ordering::Greater)
    }

    pub fn lt(&self, a: &LocaleElement, b: &LocaleElement) -> Result<bool> {
        Ok(self.compare(a, b)? == Ordering::Less)
    }

    /// Greatest lower bound of a nonempty finite set.
    pub fn meet<'a, I>(&self, elements: I) -> Result<LocaleElement>
    where
        I: IntoIterator<Item = &'a LocaleElement>,
    {
        self.extremum(elements, Ordering::Less, "meet")
    }

    /// Least upper bound of a nonempty finite set.
    pub fn join<'a, I>(&self, elements: I) -> Result<LocaleElement>
    where
        I: IntoIterator<Item = &'a LocaleElement>,
    {
        self.extremum(elements, Ordering::Greater, "join")
    }

    fn extremum<'a, I>(&self, elements: I, keep: Ordering, what: &str) -> Result<LocaleElement>
    where
        I: IntoIterator<Item = &'a LocaleElement>,
    {
        let mut best: Option<&LocaleElement> = None;
        for e in elements {
            self.check(e)?;
            best = match best {
                Some(b) if self.cmp_elements(e, b) != keep => Some(b),
                _ => Some(e),
            };
        }
        best.cloned()
            .ok_or_else(|| Error::Precondition(format!("{what} of an empty set; use top/initial")))
    }

    /// Meet of interval values, `None` for an empty input.
    pub fn meet_values<'a, I>(&self, values: I) -> Option<Rational>
    where
        I: IntoIterator<Item = &'a Rational>,
    {
        values
            .into_iter()
            .min_by(|a, b| self.cmp_values(a, b))
            .cloned()
    }

    pub fn join_values<'a, I>(&self, values: I) -> Option<Rational>
    where
        I: IntoIterator<Item = &'a Rational>,
    {
        values
            .into_iter()
            .max_by(|a, b| self.cmp_values(a, b))
            .cloned()
    }

    /// A witness of density: the arithmetic midpoint, strictly between
    /// `a <_L b`.
    pub fn between(&self, a: &LocaleElement, b: &LocaleElement) -> Result<LocaleElement> {
        let (x, y) = match (a, b) {
            (LocaleElement::Value(x), LocaleElement::Value(y)) => (x, y),
            _ => return Err(Error::Precondition("between() takes elements of L, not bottom".into())),
        };
        Ok(LocaleElement::Value(self.between_values(x, y)?))
    }

    pub fn between_values(&self, a: &Rational, b: &Rational) -> Result<Rational> {
        self.check_value(a)?;
        self.check_value(b)?;
        if !self.value_lt(a, b) {
            return Err(Error::Precondition(format!(
                "between() needs {} < {} in the locale order",
                format_rational(a),
                format_rational(b)
            )));
        }
        Ok((a + b) / int(2))
    }

    /// Pseudo-complement in `L_+`: bottom for every non-bottom element, top for bottom.
    pub fn neg(&self, x: &LocaleElement) -> Result<LocaleElement> {
        self.check(x)?;
        Ok(match x {
            LocaleElement::Bottom => self.top(),
            LocaleElement::Value(_) => LocaleElement::Bottom,
        })
    }

    /// Trace on `sample` of the imbedding `y -> L_{<y}` into the power set of
    /// `L - {top}`.
    pub fn omega(&self, y: &LocaleElement, sample: &[Rational]) -> Result<Vec<Rational>> {
        self.check(y)?;
        for s in sample {
            self.check_value(s)?;
            if s == self.top_value() {
                return Err(Error::Precondition("omega sample must exclude the top element".into()));
            }
        }
        Ok(sample
            .iter()
            .filter(|s| self.cmp_elements(&LocaleElement::Value((*s).clone()), y) == Ordering::Less)
            .cloned()
            .collect())
    }

    /// Sorts values ascending in the locale order and removes duplicates.
    pub fn sort_values(&self, values: &mut Vec<Rational>) {
        values.sort_by(|a, b| self.cmp_values(a, b));
        values.dedup();
    }
}

impl fmt::Display for IntervalLocale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", format_rational(&self.lo), format_rational(&self.hi))?;
        if self.orientation == Orientation::Opposite {
            f.write_str("^op")?;
        }
        Ok(())
    }
}

/// Finite product of interval locales with the componentwise order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductLocale {
    factors: Vec<IntervalLocale>,
}

impl ProductLocale {
    pub fn new(factors: Vec<IntervalLocale>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Precondition("product locale needs at least one factor".into()));
        }
        Ok(ProductLocale { factors })
    }

    pub fn factors(&self) -> &[IntervalLocale] {
        &self.factors
    }

    pub fn arity(&self) -> usize {
        self.factors.len()
    }

    pub fn check(&self, tuple: &[Rational]) -> Result<()> {
        if tuple.len() != self.arity() {
            return Err(Error::Arity { expected: self.arity(), got: tuple.len() });
        }
        for (l, v) in self.factors.iter().zip(tuple) {
            l.check_value(v)?;
        }
        Ok(())
    }

    pub fn leq(&self, a: &[Rational], b: &[Rational]) -> Result<bool> {
        self.check(a)?;
        self.check(b)?;
        Ok(self
            .factors
            .iter()
            .zip(a.iter().zip(b))
            .all(|(l, (x, y))| l.value_leq(x, y)))
    }

    pub fn meet(&self, tuples: &[Vec<Rational>]) -> Result<Vec<Rational>> {
        self.componentwise(tuples, true)
    }

    pub fn join(&self, tuples: &[Vec<Rational>]) -> Result<Vec<Rational>> {
        self.componentwise(tuples, false)
    }

    fn componentwise(&self, tuples: &[Vec<Rational>], meet: bool) -> Result<Vec<Rational>> {
        if tuples.is_empty() {
            return Err(Error::Precondition("componentwise meet/join of an empty set".into()));
        }
        for t in tuples {
            self.check(t)?;
        }
        Ok(self
            .factors
            .iter()
            .enumerate()
            .map(|(k, l)| {
                let column = tuples.iter().map(|t| &t[k]);
                let v = if meet { l.meet_values(column) } else { l.join_values(column) };
                v.expect("nonempty")
            })
            .collect())
    }

    pub fn top(&self) -> Vec<Rational> {
        self.factors.iter().map(|l| l.top_value().clone()).collect()
    }

    pub fn initial(&self) -> Vec<Rational> {
        self.factors.iter().map(|l| l.initial_value().clone()).collect()
    }
}
