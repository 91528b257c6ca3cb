//! Presheaves of monomorphisms on `L_+` in finite presentation.
//!
//! On an interval the membership set `{a : x in F(a)}` of a generic-fibre
//! element is down-closed, so it is either `L_{<=g}` or `L_{<g}` for a single
//! grade `g`. A [`MonoPresheaf`] therefore stores a grade and an attainment
//! flag per element; the sheaves are exactly the all-attained presheaves.
//!
//! A [`StepPresheaf`] is an arbitrary presheaf whose sections change at
//! finitely many cut points. It is the input of the image functor.
//!
//! `F(0)` is the one-point set for every presheaf here. It is never stored:
//! [`Sections::Point`] is returned at the adjoined bottom.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::fuzzy::{FuzzySet, POINT};
use crate::locale::{IntervalLocale, LocaleElement};
use crate::rational::{format_rational, Rational};

/// A set of sections. `Point` is the one-point set `F(0)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sections {
    Point,
    Set(BTreeSet<String>),
}

impl Sections {
    pub fn as_set(&self) -> Option<&BTreeSet<String>> {
        match self {
            Sections::Point => None,
            Sections::Set(s) => Some(s),
        }
    }

    pub fn into_set(self) -> Option<BTreeSet<String>> {
        match self {
            Sections::Point => None,
            Sections::Set(s) => Some(s),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Sections::Point => 1,
            Sections::Set(s) => s.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonoEntry {
    pub grade: Rational,
    pub attained: bool,
}

impl MonoEntry {
    /// Whether every section set containing `self` also contains `other`.
    pub fn sections_within(&self, other: &MonoEntry, locale: &IntervalLocale) -> bool {
        match locale.cmp_values(&self.grade, &other.grade) {
            std::cmp::Ordering::Less => true,
            std::cmp::Ordering::Equal => !self.attained || other.attained,
            std::cmp::Ordering::Greater => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonoPresheaf {
    locale: IntervalLocale,
    entries: BTreeMap<String, MonoEntry>,
}

impl MonoPresheaf {
    /// Builds a presheaf from `(id, grade, attained)` triples.
    ///
    /// An element graded at the initial element must be attained: otherwise
    /// it would be a generic-fibre section lying in no `F(a)`.
    pub fn new<I, S>(locale: IntervalLocale, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, Rational, bool)>,
        S: Into<String>,
    {
        let mut map = BTreeMap::new();
        for (id, grade, attained) in entries {
            let id = id.into();
            locale.check_value(&grade)?;
            if !attained && &grade == locale.initial_value() {
                return Err(Error::Domain(format!(
                    "element {id:?} graded at the initial element must be attained"
                )));
            }
            if map.insert(id.clone(), MonoEntry { grade, attained }).is_some() {
                return Err(Error::Domain(format!("duplicate element id {id:?}")));
            }
        }
        Ok(MonoPresheaf { locale, entries: map })
    }

    pub fn locale(&self) -> &IntervalLocale {
        &self.locale
    }

    pub fn entries(&self) -> &BTreeMap<String, MonoEntry> {
        &self.entries
    }

    pub fn entry(&self, id: &str) -> Option<&MonoEntry> {
        self.entries.get(id)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The generic fibre `F(i)`.
    pub fn generic_fibre(&self) -> BTreeSet<String> {
        self.entries.keys().cloned().collect()
    }

    fn member(&self, e: &MonoEntry, a: &Rational) -> bool {
        match self.locale.cmp_values(a, &e.grade) {
            std::cmp::Ordering::Less => true,
            std::cmp::Ordering::Equal => e.attained,
            std::cmp::Ordering::Greater => false,
        }
    }

    /// Whether `x` is a section over `a` (for `a` in `L`).
    pub fn is_section(&self, x: &str, a: &Rational) -> bool {
        self.entries.get(x).is_some_and(|e| self.member(e, a))
    }

    /// `F(a)` for `a` in `L`, unchecked against the bounds.
    pub fn sections_at(&self, a: &Rational) -> BTreeSet<String> {
        self.entries
            .iter()
            .filter(|(_, e)| self.member(e, a))
            .map(|(id, _)| id.clone())
            .collect()
    }

    pub fn sections(&self, a: &LocaleElement) -> Result<Sections> {
        self.locale.check(a)?;
        Ok(match a {
            LocaleElement::Bottom => Sections::Point,
            LocaleElement::Value(v) => Sections::Set(self.sections_at(v)),
        })
    }

    pub fn is_sheaf(&self) -> bool {
        self.entries.values().all(|e| e.attained)
    }

    pub fn grades(&self) -> impl Iterator<Item = &Rational> {
        self.entries.values().map(|e| &e.grade)
    }
}

/// A presheaf that is constant between finitely many cut points.
///
/// With cuts `a_1 < ... < a_n = top`, the sections over `s` are `X_k` for the
/// largest `k` with `a_k <= s`, and `X_0` (the generic fibre) when there is
/// none. Restriction `X_k -> X_{k-1}` is an arbitrary function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepPresheaf {
    locale: IntervalLocale,
    cuts: Vec<Rational>,
    levels: Vec<BTreeSet<String>>,
    restrictions: Vec<BTreeMap<String, String>>,
}

impl StepPresheaf {
    pub fn new(
        locale: IntervalLocale,
        cuts: Vec<Rational>,
        levels: Vec<BTreeSet<String>>,
        restrictions: Vec<BTreeMap<String, String>>,
    ) -> Result<Self> {
        if cuts.is_empty() {
            return Err(Error::Domain("a step presheaf needs at least the cut at top".into()));
        }
        for c in &cuts {
            locale.check_value(c)?;
        }
        if !locale.value_lt(locale.initial_value(), &cuts[0]) {
            return Err(Error::Domain("cuts must lie strictly above the initial element".into()));
        }
        if cuts.windows(2).any(|w| !locale.value_lt(&w[0], &w[1])) {
            return Err(Error::Domain("cuts must be strictly ascending in the locale order".into()));
        }
        if cuts.last() != Some(locale.top_value()) {
            return Err(Error::Domain("the last cut must be the top element".into()));
        }
        if levels.len() != cuts.len() + 1 {
            return Err(Error::Arity { expected: cuts.len() + 1, got: levels.len() });
        }
        if restrictions.len() != cuts.len() {
            return Err(Error::Arity { expected: cuts.len(), got: restrictions.len() });
        }
        for (k, rho) in restrictions.iter().enumerate() {
            let (upper, lower) = (&levels[k + 1], &levels[k]);
            for x in upper {
                match rho.get(x) {
                    Some(y) if lower.contains(y) => {}
                    Some(y) => {
                        return Err(Error::Domain(format!(
                            "restriction {} sends {x:?} to {y:?}, outside level {k}",
                            k + 1
                        )))
                    }
                    None => {
                        return Err(Error::Domain(format!(
                            "restriction {} is not defined at {x:?}",
                            k + 1
                        )))
                    }
                }
            }
            if let Some(extra) = rho.keys().find(|x| !upper.contains(*x)) {
                return Err(Error::Domain(format!(
                    "restriction {} is defined at {extra:?}, outside level {}",
                    k + 1,
                    k + 1
                )));
            }
        }
        Ok(StepPresheaf { locale, cuts, levels, restrictions })
    }

    pub fn locale(&self) -> &IntervalLocale {
        &self.locale
    }

    pub fn cuts(&self) -> &[Rational] {
        &self.cuts
    }

    pub fn levels(&self) -> &[BTreeSet<String>] {
        &self.levels
    }

    pub fn restrictions(&self) -> &[BTreeMap<String, String>] {
        &self.restrictions
    }

    /// Index `k` of the level holding the sections over `a`.
    pub fn level_index(&self, a: &Rational) -> usize {
        self.cuts.iter().take_while(|c| self.locale.value_leq(c, a)).count()
    }

    pub fn sections_at(&self, a: &Rational) -> &BTreeSet<String> {
        &self.levels[self.level_index(a)]
    }

    pub fn sections(&self, a: &LocaleElement) -> Result<Sections> {
        self.locale.check(a)?;
        Ok(match a {
            LocaleElement::Bottom => Sections::Point,
            LocaleElement::Value(v) => Sections::Set(self.sections_at(v).clone()),
        })
    }

    /// Image of a level-`k` section in the generic fibre.
    pub fn to_generic(&self, k: usize, x: &str) -> String {
        let mut cur = x.to_string();
        for j in (0..k).rev() {
            cur = self.restrictions[j][&cur].clone();
        }
        cur
    }

    /// Restriction `E(b) -> E(a)` for `a <= b`.
    pub fn restrict(&self, x: &str, from: &Rational, to: &Rational) -> String {
        let (hi, lo) = (self.level_index(from), self.level_index(to));
        let mut cur = x.to_string();
        for j in (lo..hi).rev() {
            cur = self.restrictions[j][&cur].clone();
        }
        cur
    }

    /// Cuts, midpoints between consecutive cuts, and the initial element.
    pub fn sample_points(&self) -> Vec<Rational> {
        sample_points(&self.locale, self.cuts.iter())
    }
}

/// Parameters at which a step function with jumps at `grades` takes all its
/// values: the grades, the initial and top elements, and a midpoint between
/// each consecutive pair.
pub fn sample_points<'a, I>(locale: &IntervalLocale, grades: I) -> Vec<Rational>
where
    I: IntoIterator<Item = &'a Rational>,
{
    let mut pts: Vec<Rational> = grades.into_iter().cloned().collect();
    pts.push(locale.initial_value().clone());
    pts.push(locale.top_value().clone());
    locale.sort_values(&mut pts);
    let mids: Vec<Rational> = pts
        .windows(2)
        .map(|w| locale.between_values(&w[0], &w[1]).expect("sorted distinct"))
        .collect();
    pts.extend(mids);
    locale.sort_values(&mut pts);
    pts
}

/// Sample points covering every jump of the given presheaves.
pub fn presheaf_samples(locale: &IntervalLocale, presheaves: &[&MonoPresheaf]) -> Vec<Rational> {
    sample_points(locale, presheaves.iter().flat_map(|p| p.grades()))
}

/// The level-cut functor `T`: `T(psi)(a) = {x : psi(x) >= a}`.
pub fn level_cut(psi: &FuzzySet) -> MonoPresheaf {
    let entries = psi
        .iter()
        .map(|(id, g)| (id.clone(), MonoEntry { grade: g.clone(), attained: true }))
        .collect();
    MonoPresheaf { locale: psi.locale().clone(), entries }
}

/// The inverse functor on sheaves: `x -> sup {b : x in F(b)}`.
pub fn psi_of(sheaf: &MonoPresheaf) -> Result<FuzzySet> {
    if let Some((id, _)) = sheaf.entries.iter().find(|(_, e)| !e.attained) {
        return Err(Error::NotSheaf(format!("the supremum for {id:?} is not attained")));
    }
    FuzzySet::new(sheaf.locale.clone(), sheaf.entries.iter().map(|(id, e)| (id.clone(), e.grade.clone())))
}

pub fn is_sheaf(presheaf: &MonoPresheaf) -> bool {
    presheaf.is_sheaf()
}

/// Associated sheaf of a presheaf of monomorphisms on an interval:
/// `LF(a) = lim_{b < a} F(b)`, which attains every supremum.
pub fn sheafify(presheaf: &MonoPresheaf) -> MonoPresheaf {
    let entries = presheaf
        .entries
        .iter()
        .map(|(id, e)| (id.clone(), MonoEntry { grade: e.grade.clone(), attained: true }))
        .collect();
    MonoPresheaf { locale: presheaf.locale.clone(), entries }
}

/// The image functor: replaces each set of sections by its image in the
/// generic fibre.
///
/// An element of `X_0` hit from level `K` but not from level `K + 1` lies in
/// `Im(E)(s)` exactly for `s < a_{K+1}`; hit from the top level, it lies in
/// every section.
pub fn image(step: &StepPresheaf) -> MonoPresheaf {
    let n = step.cuts.len();
    // depth[x] = largest k whose level maps onto x in X_0.
    let mut depth: BTreeMap<&String, usize> = step.levels[0].iter().map(|x| (x, 0)).collect();
    for k in 1..=n {
        for x in &step.levels[k] {
            let g = step.to_generic(k, x);
            let d = depth.get_mut(&g).expect("restrictions land in X_0");
            *d = (*d).max(k);
        }
    }
    let entries = depth
        .into_iter()
        .map(|(x, k)| {
            let entry = if k == n {
                MonoEntry { grade: step.locale.top_value().clone(), attained: true }
            } else {
                MonoEntry { grade: step.cuts[k].clone(), attained: false }
            };
            (x.clone(), entry)
        })
        .collect();
    MonoPresheaf { locale: step.locale.clone(), entries }
}

/// The representable sheaf `hom(-, s)`: one section over every `t <= s`.
pub fn representable(locale: &IntervalLocale, s: &LocaleElement) -> Result<MonoPresheaf> {
    let s = s
        .value()
        .ok_or_else(|| Error::Precondition("hom(-, 0) is excluded; pass an element of L".into()))?;
    MonoPresheaf::new(locale.clone(), [(POINT, s.clone(), true)])
}

/// The constant one-point sheaf, represented by the top element.
pub fn terminal_sheaf(locale: &IntervalLocale) -> MonoPresheaf {
    MonoPresheaf {
        locale: locale.clone(),
        entries: BTreeMap::from([(
            POINT.to_string(),
            MonoEntry { grade: locale.top_value().clone(), attained: true },
        )]),
    }
}

/// Whether `map` (on generic fibres) restricts to every section set.
pub fn is_presheaf_map(
    source: &MonoPresheaf,
    target: &MonoPresheaf,
    map: &BTreeMap<String, String>,
) -> Result<bool> {
    if source.locale != target.locale {
        return Err(Error::LocaleMismatch(format!("{} vs {}", source.locale, target.locale)));
    }
    Ok(source.entries.iter().all(|(x, e)| {
        map.get(x)
            .and_then(|y| target.entries.get(y))
            .is_some_and(|f| e.sections_within(f, &source.locale))
    }))
}

/// All presheaf maps `F -> G`, as functions on generic fibres, in
/// lexicographic order. Exponential in the carrier size.
pub fn mono_hom(source: &MonoPresheaf, target: &MonoPresheaf) -> Result<Vec<BTreeMap<String, String>>> {
    if source.locale != target.locale {
        return Err(Error::LocaleMismatch(format!("{} vs {}", source.locale, target.locale)));
    }
    let mut options: Vec<(&String, Vec<&String>)> = Vec::new();
    for (x, e) in &source.entries {
        let candidates: Vec<&String> = target
            .entries
            .iter()
            .filter(|(_, f)| e.sections_within(f, &source.locale))
            .map(|(y, _)| y)
            .collect();
        if candidates.is_empty() {
            return Ok(Vec::new());
        }
        options.push((x, candidates));
    }
    let mut out = Vec::new();
    let mut choice = vec![0usize; options.len()];
    loop {
        out.push(
            options
                .iter()
                .zip(&choice)
                .map(|((x, ys), &c)| ((*x).clone(), ys[c].clone()))
                .collect(),
        );
        // odometer increment, last position fastest
        let mut pos = options.len();
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            choice[pos] += 1;
            if choice[pos] < options[pos].1.len() {
                break;
            }
            choice[pos] = 0;
        }
    }
}

/// Human-readable form of an entry, for diagnostics.
pub fn describe_entry(e: &MonoEntry) -> String {
    format!("{}{}", format_rational(&e.grade), if e.attained { "" } else { " (not attained)" })
}
