//! Stalks on an interval and stalkwise verdicts for maps of sheaves.
//!
//! For `x` below top the stalk `F_x = colim_{x < s} F(s)` of a presheaf of
//! monomorphisms is the strict level cut `{y : grade(y) > x}`. Density makes
//! it independent of attainment flags. The stalk at the adjoined bottom is
//! the generic fibre.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::locale::{IntervalLocale, LocaleElement, ProductLocale};
use crate::rational::{format_rational, Rational};
use crate::sheaf::{is_presheaf_map, sheafify, MonoEntry, MonoPresheaf};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum StalkPoint {
    Bottom,
    Point(Rational),
}

impl fmt::Display for StalkPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StalkPoint::Bottom => f.write_str("bottom"),
            StalkPoint::Point(x) => f.write_str(&format_rational(x)),
        }
    }
}

impl From<&StalkPoint> for LocaleElement {
    fn from(p: &StalkPoint) -> Self {
        match p {
            StalkPoint::Bottom => LocaleElement::Bottom,
            StalkPoint::Point(x) => LocaleElement::Value(x.clone()),
        }
    }
}

fn check_point(locale: &IntervalLocale, p: &StalkPoint) -> Result<()> {
    if let StalkPoint::Point(x) = p {
        locale.check_value(x)?;
        if x == locale.top_value() {
            return Err(Error::Domain("stalks are indexed by L - {top}".into()));
        }
    }
    Ok(())
}

/// `F_p`: elements graded strictly above `p`, or the generic fibre at bottom.
pub fn stalk(presheaf: &MonoPresheaf, p: &StalkPoint) -> Result<BTreeSet<String>> {
    let locale = presheaf.locale();
    check_point(locale, p)?;
    Ok(match p {
        StalkPoint::Bottom => presheaf.generic_fibre(),
        StalkPoint::Point(x) => presheaf
            .entries()
            .iter()
            .filter(|(_, e)| locale.value_lt(x, &e.grade))
            .map(|(id, _)| id.clone())
            .collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Probe {
    point: StalkPoint,
    /// Midpoint of two consecutive grades, interior to a constancy interval.
    interior: bool,
}

fn probes(first: &MonoPresheaf, second: &MonoPresheaf) -> Result<Vec<Probe>> {
    let locale = first.locale();
    if locale != second.locale() {
        return Err(Error::LocaleMismatch(format!("{locale} vs {}", second.locale())));
    }
    let top = locale.top_value();
    let mut grades: Vec<Rational> = first
        .grades()
        .chain(second.grades())
        .filter(|g| *g != top)
        .cloned()
        .collect();
    locale.sort_values(&mut grades);
    let mut values: Vec<Probe> = grades
        .windows(2)
        .map(|w| Probe {
            point: StalkPoint::Point(locale.between_values(&w[0], &w[1]).expect("distinct")),
            interior: true,
        })
        .collect();
    if grades.first() != Some(locale.initial_value()) {
        values.push(Probe { point: StalkPoint::Point(locale.initial_value().clone()), interior: false });
    }
    values.extend(grades.into_iter().map(|g| Probe { point: StalkPoint::Point(g), interior: false }));
    values.sort_by(|a, b| match (&a.point, &b.point) {
        (StalkPoint::Point(x), StalkPoint::Point(y)) => locale.cmp_values(x, y),
        _ => unreachable!("only values here"),
    });
    let mut out = vec![Probe { point: StalkPoint::Bottom, interior: false }];
    out.extend(values);
    Ok(out)
}

/// Bottom, the initial element, every grade below top and a midpoint of each
/// consecutive pair of grades, ascending. Stalk functions of both arguments
/// take all their values on this list.
pub fn stalk_points(first: &MonoPresheaf, second: &MonoPresheaf) -> Result<Vec<StalkPoint>> {
    Ok(probes(first, second)?.into_iter().map(|p| p.point).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StalkMode {
    Mono,
    Epi,
    Iso,
}

impl std::str::FromStr for StalkMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mono" => Ok(StalkMode::Mono),
            "epi" => Ok(StalkMode::Epi),
            "iso" => Ok(StalkMode::Iso),
            other => Err(Error::Parse(format!("unknown mode {other:?}; expected mono|epi|iso"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FailureReason {
    NotInjective,
    NotSurjective,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub point: StalkPoint,
    pub element: String,
    pub reason: FailureReason,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub mode: StalkMode,
    pub ok: bool,
    pub witness: Option<Witness>,
    /// On success, whether the matching sheaf-level property was confirmed
    /// at every sampled parameter: injective sections for `Mono`, bijective
    /// sections for `Iso`, a surjective generic fibre for `Epi`.
    pub sectionwise: Option<bool>,
}

/// Injectivity, surjectivity or bijectivity of the stalk maps induced by
/// `map: E -> F` at every point of [`stalk_points`].
///
/// A failing verdict reports the first failing point (bottom first, then
/// ascending). When that point is a grade whose constancy interval has an
/// interior midpoint, the midpoint is reported instead: it sees the same
/// stalks and is also a parameter where the section map visibly fails.
///
/// Stalks shrink as the point rises, so a collision of two elements shows
/// up at bottom if anywhere, and a target element `y` is missed exactly at
/// the points in `[m, grade(y))`, `m` the best grade of a preimage.
pub fn stalkwise_check(
    source: &MonoPresheaf,
    target: &MonoPresheaf,
    map: &BTreeMap<String, String>,
    mode: StalkMode,
) -> Result<Verdict> {
    if !source.is_sheaf() || !target.is_sheaf() {
        return Err(Error::NotSheaf("stalkwise checks take maps of sheaves".into()));
    }
    if !is_presheaf_map(source, target, map)? {
        return Err(Error::InvalidMorphism("map does not restrict to sections".into()));
    }
    let locale = source.locale();
    let fail = |point: StalkPoint, element: &String, reason| {
        Ok(Verdict {
            mode,
            ok: false,
            witness: Some(Witness { point, element: element.clone(), reason }),
            sectionwise: None,
        })
    };

    if mode != StalkMode::Epi {
        let mut seen: HashSet<&String> = HashSet::with_capacity(source.len());
        if let Some(x) = source.entries().keys().find(|x| !seen.insert(&map[*x])) {
            return fail(StalkPoint::Bottom, x, FailureReason::NotInjective);
        }
    }

    let mut best: HashMap<&String, &Rational> = HashMap::with_capacity(source.len());
    for (x, e) in source.entries() {
        let slot = best.entry(&map[x]).or_insert(&e.grade);
        if locale.value_lt(slot, &e.grade) {
            *slot = &e.grade;
        }
    }
    if mode != StalkMode::Mono {
        // the first point where some target element is missed
        let mut first: Option<StalkPoint> = None;
        for (y, f) in target.entries() {
            match best.get(y) {
                None => {
                    first = Some(StalkPoint::Bottom);
                    break;
                }
                Some(m) if locale.value_lt(m, &f.grade) => {
                    let earlier = match &first {
                        Some(StalkPoint::Point(p)) => locale.value_lt(m, p),
                        Some(StalkPoint::Bottom) => false,
                        None => true,
                    };
                    if earlier {
                        first = Some(StalkPoint::Point((*m).clone()));
                    }
                }
                Some(_) => {}
            }
        }
        if let Some(p) = first {
            let missed = |y: &String, f: &MonoEntry| match (&p, best.get(y)) {
                (_, None) => true,
                (StalkPoint::Bottom, Some(_)) => false,
                (StalkPoint::Point(x), Some(m)) => locale.value_lt(x, &f.grade) && !locale.value_lt(x, m),
            };
            let y = target.entries().iter().find(|(y, f)| missed(y, f)).map(|(y, _)| y).expect("a missed element");
            let point = match &p {
                StalkPoint::Bottom => p.clone(),
                StalkPoint::Point(_) => {
                    let probes = probes(source, target)?;
                    let k = probes.iter().position(|q| q.point == p).expect("grades below top are probes");
                    match probes.get(k + 1) {
                        Some(next) if next.interior => next.point.clone(),
                        _ => p.clone(),
                    }
                }
            };
            return fail(point, y, FailureReason::NotSurjective);
        }
    }

    // sections are injective everywhere iff on the generic fibre, and onto
    // everywhere iff each target element has a preimage of its own grade
    let sectionwise = match mode {
        StalkMode::Mono => true,
        StalkMode::Epi => target.entries().keys().all(|y| best.contains_key(y)),
        StalkMode::Iso => target.entries().iter().all(|(y, f)| best.get(y) == Some(&&f.grade)),
    };
    Ok(Verdict { mode, ok: true, witness: None, sectionwise: Some(sectionwise) })
}

/// Whether the unit `F -> L^2 F` induces equal stalks at every stalk point.
pub fn eta_stalk_invariance(presheaf: &MonoPresheaf) -> Result<bool> {
    let sheaf = sheafify(presheaf);
    for p in stalk_points(presheaf, &sheaf)? {
        if stalk(presheaf, &p)? != stalk(&sheaf, &p)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A sheaf of monomorphisms on a finite product of intervals, presented by
/// generators: `x` is a section over `a` iff `a <= g` for one of its
/// generators `g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductMonoSheaf {
    product: ProductLocale,
    generators: BTreeMap<String, Vec<Vec<Rational>>>,
}

impl ProductMonoSheaf {
    pub fn new(product: ProductLocale, generators: BTreeMap<String, Vec<Vec<Rational>>>) -> Result<Self> {
        for (id, gens) in &generators {
            if gens.is_empty() {
                return Err(Error::Domain(format!("element {id:?} needs at least one generator")));
            }
            for g in gens {
                product.check(g)?;
            }
        }
        Ok(ProductMonoSheaf { product, generators })
    }

    pub fn product(&self) -> &ProductLocale {
        &self.product
    }

    pub fn sections(&self, a: &[Rational]) -> Result<BTreeSet<String>> {
        self.product.check(a)?;
        Ok(self
            .generators
            .iter()
            .filter(|(_, gens)| gens.iter().any(|g| self.product.leq(a, g).unwrap_or(false)))
            .map(|(id, _)| id.clone())
            .collect())
    }

    /// Restriction along `s -> (s, i_2, ..., i_k)`, a sheaf on the first factor.
    pub fn axis_restriction(&self) -> MonoPresheaf {
        let axis = &self.product.factors()[0];
        MonoPresheaf::new(
            axis.clone(),
            self.generators.iter().map(|(id, gens)| {
                let grade = axis.join_values(gens.iter().map(|g| &g[0])).expect("nonempty generators");
                (id.clone(), grade, true)
            }),
        )
        .expect("generators already validated")
    }
}

/// Stalk at a point of the first factor, computed on the axis restriction.
pub fn product_stalk(sheaf: &ProductMonoSheaf, p: &StalkPoint) -> Result<BTreeSet<String>> {
    stalk(&sheaf.axis_restriction(), p)
}
