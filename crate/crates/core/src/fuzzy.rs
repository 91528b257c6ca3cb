//! The category of fuzzy sets over an interval locale.
//!
//! A fuzzy set is a finite carrier of string identifiers together with a
//! grade in `L` for every element. A morphism is a function on carriers
//! satisfying the homotopy condition `grade(x) <= grade(f(x))`. Finite limits
//! take meets of grades over compatible families; finite colimits take joins
//! of grades over each class of the set-level colimit.

use std::collections::{BTreeMap, BTreeSet};

use petgraph::unionfind::UnionFind;

use crate::error::{Error, Result};
use crate::locale::{IntervalLocale, LocaleElement};
use crate::rational::{format_rational, Rational};

/// Identifier of the single element of a terminal object.
pub const POINT: &str = "*";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FuzzySet {
    locale: IntervalLocale,
    grades: BTreeMap<String, Rational>,
}

impl FuzzySet {
    pub fn new<I, S>(locale: IntervalLocale, grades: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, Rational)>,
        S: Into<String>,
    {
        let mut map = BTreeMap::new();
        for (id, grade) in grades {
            let id = id.into();
            locale.check_value(&grade)?;
            if map.insert(id.clone(), grade).is_some() {
                return Err(Error::Domain(format!("duplicate element id {id:?}")));
            }
        }
        Ok(FuzzySet { locale, grades: map })
    }

    pub fn empty(locale: IntervalLocale) -> Self {
        FuzzySet { locale, grades: BTreeMap::new() }
    }

    /// The terminal fuzzy set `* -> top`.
    pub fn terminal(locale: IntervalLocale) -> Self {
        let top = locale.top_value().clone();
        FuzzySet { locale, grades: BTreeMap::from([(POINT.to_string(), top)]) }
    }

    pub fn locale(&self) -> &IntervalLocale {
        &self.locale
    }

    pub fn grade(&self, id: &str) -> Option<&Rational> {
        self.grades.get(id)
    }

    pub fn grades(&self) -> &BTreeMap<String, Rational> {
        &self.grades
    }

    pub fn contains(&self, id: &str) -> bool {
        self.grades.contains_key(id)
    }

    pub fn carrier(&self) -> impl Iterator<Item = &String> {
        self.grades.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Rational)> {
        self.grades.iter()
    }

    pub fn len(&self) -> usize {
        self.grades.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grades.is_empty()
    }

    /// Elements whose grade is at least `a`; the whole set at bottom.
    pub fn at_least(&self, a: &LocaleElement) -> BTreeSet<String> {
        match a {
            LocaleElement::Bottom => self.grades.keys().cloned().collect(),
            LocaleElement::Value(a) => self
                .grades
                .iter()
                .filter(|(_, g)| self.locale.value_leq(a, g))
                .map(|(id, _)| id.clone())
                .collect(),
        }
    }
}

/// A function between carriers, meant to satisfy the homotopy condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FuzzyMorphism {
    source: FuzzySet,
    target: FuzzySet,
    map: BTreeMap<String, String>,
}

/// Outcome of [`validate_morphism`]: the elements breaking the homotopy condition.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MorphismCheck {
    pub violations: Vec<String>,
}

impl MorphismCheck {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl FuzzyMorphism {
    /// Builds a morphism without checking it; see [`validate_morphism`].
    pub fn from_parts(source: FuzzySet, target: FuzzySet, map: BTreeMap<String, String>) -> Self {
        FuzzyMorphism { source, target, map }
    }

    /// Builds a morphism and rejects it unless it is total and satisfies the
    /// homotopy condition.
    pub fn new(source: FuzzySet, target: FuzzySet, map: BTreeMap<String, String>) -> Result<Self> {
        let m = FuzzyMorphism { source, target, map };
        let check = validate_morphism(&m)?;
        if !check.is_valid() {
            return Err(Error::InvalidMorphism(format!(
                "homotopy condition fails at {:?}",
                check.violations
            )));
        }
        Ok(m)
    }

    pub fn identity(set: &FuzzySet) -> Self {
        let map = set.carrier().map(|x| (x.clone(), x.clone())).collect();
        FuzzyMorphism { source: set.clone(), target: set.clone(), map }
    }

    pub fn source(&self) -> &FuzzySet {
        &self.source
    }

    pub fn target(&self) -> &FuzzySet {
        &self.target
    }

    pub fn map(&self) -> &BTreeMap<String, String> {
        &self.map
    }

    pub fn apply(&self, x: &str) -> Option<&String> {
        self.map.get(x)
    }
}

/// Checks totality and `source.grade(x) <= target.grade(f(x))` for every `x`.
pub fn validate_morphism(m: &FuzzyMorphism) -> Result<MorphismCheck> {
    check_map(&m.source, &m.target, &m.map)
}

fn check_map(
    source: &FuzzySet,
    target: &FuzzySet,
    map: &BTreeMap<String, String>,
) -> Result<MorphismCheck> {
    if source.locale != target.locale {
        return Err(Error::LocaleMismatch(format!("{} vs {}", source.locale, target.locale)));
    }
    for key in map.keys() {
        if !source.contains(key) {
            return Err(Error::InvalidMorphism(format!("map defined on unknown element {key:?}")));
        }
    }
    let mut violations = Vec::new();
    for (x, gx) in source.iter() {
        let y = map
            .get(x)
            .ok_or_else(|| Error::InvalidMorphism(format!("map is not defined at {x:?}")))?;
        let gy = target
            .grade(y)
            .ok_or_else(|| Error::InvalidMorphism(format!("{x:?} maps to unknown element {y:?}")))?;
        if !source.locale.value_leq(gx, gy) {
            violations.push(x.clone());
        }
    }
    Ok(MorphismCheck { violations })
}

/// Composite `g . m`.
pub fn compose(g: &FuzzyMorphism, m: &FuzzyMorphism) -> Result<FuzzyMorphism> {
    if m.target != g.source {
        return Err(Error::InvalidMorphism("morphisms are not composable".into()));
    }
    let map = m
        .map
        .iter()
        .map(|(x, y)| {
            let z = g.map.get(y).ok_or_else(|| {
                Error::InvalidMorphism(format!("second map is not defined at {y:?}"))
            })?;
            Ok((x.clone(), z.clone()))
        })
        .collect::<Result<_>>()?;
    Ok(FuzzyMorphism { source: m.source.clone(), target: g.target.clone(), map })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrow {
    pub from: String,
    pub to: String,
    pub map: BTreeMap<String, String>,
}

/// A finite diagram of fuzzy sets over one locale, indexed by node labels
/// and generating arrows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagram {
    locale: IntervalLocale,
    nodes: BTreeMap<String, FuzzySet>,
    arrows: Vec<Arrow>,
}

impl Diagram {
    pub fn new(
        locale: IntervalLocale,
        nodes: BTreeMap<String, FuzzySet>,
        arrows: Vec<Arrow>,
    ) -> Result<Self> {
        for (label, set) in &nodes {
            if set.locale != locale {
                return Err(Error::LocaleMismatch(format!(
                    "node {label:?} lives over {} but the diagram over {locale}",
                    set.locale
                )));
            }
        }
        for (k, arrow) in arrows.iter().enumerate() {
            let src = nodes.get(&arrow.from).ok_or_else(|| {
                Error::InvalidDiagram(format!("arrow {k} starts at unknown node {:?}", arrow.from))
            })?;
            let dst = nodes.get(&arrow.to).ok_or_else(|| {
                Error::InvalidDiagram(format!("arrow {k} ends at unknown node {:?}", arrow.to))
            })?;
            let check = check_map(src, dst, &arrow.map)
                .map_err(|e| Error::InvalidDiagram(format!("arrow {k} ({} -> {}): {e}", arrow.from, arrow.to)))?;
            if !check.is_valid() {
                return Err(Error::InvalidDiagram(format!(
                    "arrow {k} ({} -> {}) breaks the homotopy condition at {:?}",
                    arrow.from, arrow.to, check.violations
                )));
            }
        }
        Ok(Diagram { locale, nodes, arrows })
    }

    pub fn locale(&self) -> &IntervalLocale {
        &self.locale
    }

    pub fn nodes(&self) -> &BTreeMap<String, FuzzySet> {
        &self.nodes
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow_morphism(&self, k: usize) -> FuzzyMorphism {
        let a = &self.arrows[k];
        FuzzyMorphism::from_parts(self.nodes[&a.from].clone(), self.nodes[&a.to].clone(), a.map.clone())
    }
}

/// A limit cone or colimit cocone: the universal object and its legs, keyed
/// by node label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cone {
    pub apex: FuzzySet,
    pub legs: BTreeMap<String, FuzzyMorphism>,
}

/// Arrow `(source, target, map)` by node positions.
type Check<'a> = (usize, usize, &'a BTreeMap<String, String>);

/// Canonical identifier of a compatible family `(x_1,...,x_n)`, listed in
/// node-label order.
pub fn family_id<S: AsRef<str>>(members: &[S]) -> String {
    let parts: Vec<&str> = members.iter().map(AsRef::as_ref).collect();
    format!("({})", parts.join(","))
}

/// Identifier of a colimit class, named after its least `(node, element)` member.
pub fn class_id(node: &str, element: &str) -> String {
    format!("{node}:{element}")
}

/// Limit of a finite diagram. Its carrier is the set of compatible families
/// and each family is graded by the meet of its members' grades.
pub fn limit(diagram: &Diagram) -> Result<Cone> {
    let locale = diagram.locale.clone();
    if diagram.nodes.is_empty() {
        return Ok(Cone { apex: FuzzySet::terminal(locale), legs: BTreeMap::new() });
    }
    let labels: Vec<&String> = diagram.nodes.keys().collect();
    let position: BTreeMap<&String, usize> = labels.iter().enumerate().map(|(i, l)| (*l, i)).collect();
    // Arrows grouped by the later of their two endpoints, checked once both are assigned.
    let mut checks: Vec<Vec<Check>> = vec![Vec::new(); labels.len()];
    for a in &diagram.arrows {
        let (s, t) = (position[&a.from], position[&a.to]);
        checks[s.max(t)].push((s, t, &a.map));
    }
    let carriers: Vec<Vec<&String>> = labels.iter().map(|l| diagram.nodes[*l].carrier().collect()).collect();

    let mut families: Vec<Vec<&String>> = Vec::new();
    let mut current: Vec<&String> = Vec::with_capacity(labels.len());
    extend_families(&carriers, &checks, &mut current, &mut families);

    let mut grades = BTreeMap::new();
    let mut projections: Vec<BTreeMap<String, String>> = vec![BTreeMap::new(); labels.len()];
    for fam in &families {
        let id = family_id(fam);
        let grade = locale
            .meet_values(fam.iter().zip(&labels).map(|(x, l)| &diagram.nodes[*l].grades[*x]))
            .expect("nonempty family");
        for (j, x) in fam.iter().enumerate() {
            projections[j].insert(id.clone(), (*x).clone());
        }
        grades.insert(id, grade);
    }
    let apex = FuzzySet { locale, grades };
    let legs = labels
        .iter()
        .zip(projections)
        .map(|(l, map)| {
            ((*l).clone(), FuzzyMorphism::from_parts(apex.clone(), diagram.nodes[*l].clone(), map))
        })
        .collect();
    Ok(Cone { apex, legs })
}

fn extend_families<'a>(
    carriers: &[Vec<&'a String>],
    checks: &[Vec<Check>],
    current: &mut Vec<&'a String>,
    out: &mut Vec<Vec<&'a String>>,
) {
    let depth = current.len();
    if depth == carriers.len() {
        out.push(current.clone());
        return;
    }
    for x in &carriers[depth] {
        current.push(x);
        let compatible = checks[depth]
            .iter()
            .all(|(s, t, map)| map.get(current[*s]) == Some(current[*t]));
        if compatible {
            extend_families(carriers, checks, current, out);
        }
        current.pop();
    }
}

/// Underlying set-level colimit: class index of every `(node, element)` pair
/// and the least member of every class.
pub struct SetColimit {
    pub members: Vec<(String, String)>,
    pub class_of: Vec<usize>,
    pub representative: BTreeMap<usize, usize>,
}

impl SetColimit {
    /// Union-find over the disjoint union, glued along every arrow.
    pub fn compute(diagram: &Diagram) -> SetColimit {
        let members: Vec<(String, String)> = diagram
            .nodes
            .iter()
            .flat_map(|(l, set)| set.carrier().map(move |x| (l.clone(), x.clone())))
            .collect();
        let index: BTreeMap<(&str, &str), usize> = members
            .iter()
            .enumerate()
            .map(|(i, (l, x))| ((l.as_str(), x.as_str()), i))
            .collect();
        let mut uf = UnionFind::<usize>::new(members.len());
        for a in &diagram.arrows {
            for (x, y) in &a.map {
                uf.union(index[&(a.from.as_str(), x.as_str())], index[&(a.to.as_str(), y.as_str())]);
            }
        }
        let roots: Vec<usize> = (0..members.len()).map(|i| uf.find(i)).collect();
        // Members are sorted by (label, id), so the first index seen per root is the least.
        let mut least: BTreeMap<usize, usize> = BTreeMap::new();
        for (i, r) in roots.iter().enumerate() {
            least.entry(*r).or_insert(i);
        }
        let class_of: Vec<usize> = roots.iter().map(|r| least[r]).collect();
        let representative = least.values().map(|&i| (i, i)).collect();
        SetColimit { members, class_of, representative }
    }

    pub fn class_name(&self, class: usize) -> String {
        let (l, x) = &self.members[class];
        class_id(l, x)
    }
}

/// Colimit of a finite diagram: the set-level colimit, each class graded by
/// the join of the grades of all its members.
pub fn colimit(diagram: &Diagram) -> Result<Cone> {
    let locale = diagram.locale.clone();
    let set = SetColimit::compute(diagram);
    let mut class_grades: BTreeMap<usize, Vec<&Rational>> = BTreeMap::new();
    for (i, (l, x)) in set.members.iter().enumerate() {
        class_grades.entry(set.class_of[i]).or_default().push(&diagram.nodes[l].grades[x]);
    }
    let grades: BTreeMap<String, Rational> = class_grades
        .iter()
        .map(|(c, gs)| {
            let g = locale.join_values(gs.iter().copied()).ok_or_else(|| {
                Error::Domain(format!("colimit class {} has no members", set.class_name(*c)))
            })?;
            Ok((set.class_name(*c), g))
        })
        .collect::<Result<_>>()?;
    let apex = FuzzySet { locale, grades };

    let mut injections: BTreeMap<&String, BTreeMap<String, String>> =
        diagram.nodes.keys().map(|l| (l, BTreeMap::new())).collect();
    for (i, (l, x)) in set.members.iter().enumerate() {
        injections.get_mut(l).expect("known node").insert(x.clone(), set.class_name(set.class_of[i]));
    }
    let legs = injections
        .into_iter()
        .map(|(l, map)| {
            (l.clone(), FuzzyMorphism::from_parts(diagram.nodes[l].clone(), apex.clone(), map))
        })
        .collect();
    Ok(Cone { apex, legs })
}

/// Checks that `sub` is a subobject of `ambient`: a subset of the carrier
/// with grades below the ambient ones.
pub fn check_subobject(ambient: &FuzzySet, sub: &FuzzySet) -> Result<()> {
    if ambient.locale != sub.locale {
        return Err(Error::LocaleMismatch(format!("{} vs {}", ambient.locale, sub.locale)));
    }
    for (x, g) in sub.iter() {
        match ambient.grade(x) {
            None => {
                return Err(Error::Precondition(format!("{x:?} is not in the ambient carrier")))
            }
            Some(h) if !ambient.locale.value_leq(g, h) => {
                return Err(Error::Precondition(format!(
                    "grade {} of {x:?} exceeds ambient grade {}",
                    format_rational(g),
                    format_rational(h)
                )))
            }
            Some(_) => {}
        }
    }
    Ok(())
}

/// Union of two subobjects: carriers united, grades joined.
pub fn subobject_union(ambient: &FuzzySet, a: &FuzzySet, b: &FuzzySet) -> Result<FuzzySet> {
    check_subobject(ambient, a)?;
    check_subobject(ambient, b)?;
    let locale = &ambient.locale;
    let mut grades = a.grades.clone();
    for (x, g) in b.iter() {
        grades
            .entry(x.clone())
            .and_modify(|h| *h = locale.join_values([&*h, g]).expect("two values"))
            .or_insert_with(|| g.clone());
    }
    Ok(FuzzySet { locale: locale.clone(), grades })
}

/// Intersection of two subobjects: common elements, grades met.
pub fn subobject_meet(ambient: &FuzzySet, a: &FuzzySet, b: &FuzzySet) -> Result<FuzzySet> {
    check_subobject(ambient, a)?;
    check_subobject(ambient, b)?;
    let locale = &ambient.locale;
    let grades = a
        .iter()
        .filter_map(|(x, g)| {
            b.grade(x).map(|h| (x.clone(), locale.meet_values([g, h]).expect("two values")))
        })
        .collect();
    Ok(FuzzySet { locale: locale.clone(), grades })
}
