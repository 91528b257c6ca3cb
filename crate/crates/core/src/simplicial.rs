//! Simplicial fuzzy sets in nondegenerate encoding.
//!
//! A simplex is a strictly increasing tuple of vertex indices. Degenerate
//! simplices (weakly increasing tuples with repeats) are never stored; they
//! carry the grade of the simplex obtained by collapsing repeats.

use std::collections::{BTreeMap, BTreeSet};

use petgraph::unionfind::UnionFind;

use crate::error::{Error, Result};
use crate::fuzzy::FuzzySet;
use crate::locale::{IntervalLocale, LocaleElement};
use crate::rational::{format_rational, Rational};
use crate::sheaf::{presheaf_samples, MonoPresheaf};
use crate::stalks::StalkPoint;

pub type Simplex = Vec<usize>;

/// Identifier used when a simplex becomes a carrier element: `"0,1,2"`.
pub fn simplex_id(simplex: &[usize]) -> String {
    simplex.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

pub fn parse_simplex_id(id: &str) -> Result<Simplex> {
    id.split(',')
        .map(|v| v.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad simplex id {id:?}"))))
        .collect()
}

/// Face map `d_i`: drop the `i`-th vertex.
pub fn face(simplex: &[usize], i: usize) -> Simplex {
    let mut out = simplex.to_vec();
    out.remove(i);
    out
}

/// Degeneracy map `s_i`: repeat the `i`-th vertex.
pub fn degeneracy(simplex: &[usize], i: usize) -> Simplex {
    let mut out = simplex.to_vec();
    out.insert(i, simplex[i]);
    out
}

/// Nondegenerate simplex underlying a weakly increasing tuple.
pub fn collapse(simplex: &[usize]) -> Simplex {
    let mut out = simplex.to_vec();
    out.dedup();
    out
}

fn strictly_increasing(simplex: &[usize]) -> bool {
    simplex.windows(2).all(|w| w[0] < w[1])
}

/// All `(k+1)`-element subsets of `0..n`, lexicographically.
pub fn combinations(n: usize, k_plus_one: usize) -> Vec<Simplex> {
    let mut out = Vec::new();
    if k_plus_one == 0 || k_plus_one > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k_plus_one).collect();
    loop {
        out.push(cur.clone());
        let mut i = k_plus_one;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - k_plus_one + i {
                cur[i] += 1;
                for j in i + 1..k_plus_one {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// A finite ordered simplicial complex given by its nondegenerate simplices,
/// face-closed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderedComplex {
    levels: Vec<BTreeSet<Simplex>>,
}

impl OrderedComplex {
    pub fn new<I: IntoIterator<Item = Simplex>>(simplices: I) -> Result<Self> {
        let mut levels: Vec<BTreeSet<Simplex>> = Vec::new();
        for s in simplices {
            if s.is_empty() || !strictly_increasing(&s) {
                return Err(Error::Domain(format!("{s:?} is not a strictly increasing vertex tuple")));
            }
            let k = s.len() - 1;
            if levels.len() <= k {
                levels.resize(k + 1, BTreeSet::new());
            }
            levels[k].insert(s);
        }
        for k in 1..levels.len() {
            for s in &levels[k] {
                for i in 0..=k {
                    if !levels[k - 1].contains(&face(s, i)) {
                        return Err(Error::Domain(format!("face {:?} of {s:?} is missing", face(s, i))));
                    }
                }
            }
        }
        Ok(OrderedComplex { levels })
    }

    pub fn point() -> Self {
        OrderedComplex { levels: vec![BTreeSet::from([vec![0]])] }
    }

    pub fn edge() -> Self {
        OrderedComplex { levels: vec![BTreeSet::from([vec![0], vec![1]]), BTreeSet::from([vec![0, 1]])] }
    }

    pub fn levels(&self) -> &[BTreeSet<Simplex>] {
        &self.levels
    }

    pub fn vertices(&self) -> Vec<usize> {
        self.levels.first().map(|l| l.iter().map(|s| s[0]).collect()).unwrap_or_default()
    }

    pub fn truncated(&self, dim_cap: usize) -> Self {
        OrderedComplex { levels: self.levels.iter().take(dim_cap + 1).cloned().collect() }
    }

    pub fn simplices(&self) -> impl Iterator<Item = &Simplex> {
        self.levels.iter().flatten()
    }
}

/// A simplicial object in fuzzy sets, truncated at `levels.len() - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialFuzzySet {
    locale: IntervalLocale,
    levels: Vec<BTreeMap<Simplex, Rational>>,
}

impl SimplicialFuzzySet {
    pub fn new(locale: IntervalLocale, levels: Vec<BTreeMap<Simplex, Rational>>) -> Result<Self> {
        for level in &levels {
            for g in level.values() {
                locale.check_value(g)?;
            }
        }
        Ok(SimplicialFuzzySet { locale, levels })
    }

    pub fn empty(locale: IntervalLocale) -> Self {
        SimplicialFuzzySet { locale, levels: Vec::new() }
    }

    pub fn locale(&self) -> &IntervalLocale {
        &self.locale
    }

    pub fn levels(&self) -> &[BTreeMap<Simplex, Rational>] {
        &self.levels
    }

    pub fn levels_mut(&mut self) -> &mut Vec<BTreeMap<Simplex, Rational>> {
        &mut self.levels
    }

    /// Grade of a possibly degenerate simplex.
    pub fn grade(&self, simplex: &[usize]) -> Option<&Rational> {
        let s = collapse(simplex);
        self.levels.get(s.len().checked_sub(1)?)?.get(&s)
    }

    /// Level `k` as a fuzzy set with [`simplex_id`] identifiers.
    pub fn level(&self, k: usize) -> FuzzySet {
        let grades = self
            .levels
            .get(k)
            .map(|l| l.iter().map(|(s, g)| (simplex_id(s), g.clone())).collect::<Vec<_>>())
            .unwrap_or_default();
        FuzzySet::new(self.locale.clone(), grades).expect("grades validated at construction")
    }

    /// Level `k` as a sheaf of monomorphisms.
    pub fn level_sheaf(&self, k: usize) -> MonoPresheaf {
        crate::sheaf::level_cut(&self.level(k))
    }

    /// Simplices with grade at least `a`, per level.
    pub fn sections_at(&self, a: &Rational) -> Vec<Vec<Simplex>> {
        self.levels
            .iter()
            .map(|l| l.iter().filter(|(_, g)| self.locale.value_leq(a, g)).map(|(s, _)| s.clone()).collect())
            .collect()
    }

    /// Stalk per level: simplices graded strictly above `p`, all at bottom.
    pub fn stalk(&self, p: &StalkPoint) -> Result<Vec<Vec<Simplex>>> {
        let x = match p {
            StalkPoint::Bottom => return Ok(self.levels.iter().map(|l| l.keys().cloned().collect()).collect()),
            StalkPoint::Point(x) => x,
        };
        self.locale.check_value(x)?;
        if x == self.locale.top_value() {
            return Err(Error::Domain("stalks are indexed by L - {top}".into()));
        }
        Ok(self
            .levels
            .iter()
            .map(|l| l.iter().filter(|(_, g)| self.locale.value_lt(x, g)).map(|(s, _)| s.clone()).collect())
            .collect())
    }
}

/// Outcome of [`simplicial_validate`].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SimplicialCheck {
    pub violations: Vec<String>,
}

impl SimplicialCheck {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks encoding, face closure, the simplicial identities on every stored
/// simplex and the homotopy condition `grade(d_i s) >= grade(s)`.
pub fn simplicial_validate(z: &SimplicialFuzzySet) -> SimplicialCheck {
    let mut violations = Vec::new();
    let locale = &z.locale;
    for (k, level) in z.levels.iter().enumerate() {
        for (s, g) in level {
            if s.len() != k + 1 || !strictly_increasing(s) {
                violations.push(format!("level {k}: {s:?} is not a nondegenerate {k}-simplex"));
                continue;
            }
            for i in 0..=k {
                for j in i + 1..=k {
                    if k >= 2 && face(&face(s, j), i) != face(&face(s, i), j - 1) {
                        violations.push(format!("d_{i} d_{j} != d_{} d_{i} on {s:?}", j - 1));
                    }
                }
                let sj = degeneracy(s, i);
                if face(&sj, i) != *s || face(&sj, i + 1) != *s {
                    violations.push(format!("d s_{i} != id on {s:?}"));
                }
                if z.grade(&sj) != Some(g) {
                    violations.push(format!("degeneracy s_{i} of {s:?} changes the grade"));
                }
            }
            if k == 0 {
                continue;
            }
            for i in 0..=k {
                let f = face(s, i);
                match z.levels[k - 1].get(&f) {
                    None => violations.push(format!("face {f:?} of {s:?} is missing")),
                    Some(h) if !locale.value_leq(g, h) => violations.push(format!(
                        "grade {} of face {f:?} is below grade {} of {s:?}",
                        format_rational(h),
                        format_rational(g)
                    )),
                    Some(_) => {}
                }
            }
        }
    }
    SimplicialCheck { violations }
}

/// Connected components of the 1-skeleton of a face-closed simplex family,
/// each sorted, listed by least vertex.
pub fn pi0(levels: &[Vec<Simplex>]) -> Vec<Vec<usize>> {
    let vertices: Vec<usize> = levels.first().map(|l| l.iter().map(|s| s[0]).collect()).unwrap_or_default();
    let position: BTreeMap<usize, usize> = vertices.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let mut uf = UnionFind::<usize>::new(vertices.len());
    if let Some(edges) = levels.get(1) {
        for e in edges {
            if let (Some(&a), Some(&b)) = (position.get(&e[0]), position.get(&e[1])) {
                uf.union(a, b);
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, v) in vertices.iter().enumerate() {
        groups.entry(uf.find(i)).or_default().push(*v);
    }
    let mut comps: Vec<Vec<usize>> = groups
        .into_values()
        .map(|mut c| {
            c.sort_unstable();
            c
        })
        .collect();
    comps.sort();
    comps
}

/// A levelwise presheaf of monomorphisms, one [`MonoPresheaf`] per dimension
/// with [`simplex_id`] carriers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialPresheaf {
    pub levels: Vec<MonoPresheaf>,
}

impl SimplicialPresheaf {
    pub fn sections_at(&self, a: &Rational) -> Vec<BTreeSet<String>> {
        self.levels.iter().map(|l| l.sections_at(a)).collect()
    }

    /// Whether the collapsed simplex `simplex` is a section over `a`.
    pub fn is_section(&self, simplex: &[usize], a: &Rational) -> bool {
        let s = collapse(simplex);
        self.levels.get(s.len() - 1).is_some_and(|l| l.is_section(&simplex_id(&s), a))
    }
}

/// `L_s(K) = hom(-, s) x K`: every simplex of `K` graded `s`, attained.
pub fn ls_construction(
    locale: &IntervalLocale,
    s: &LocaleElement,
    complex: &OrderedComplex,
    dim_cap: usize,
) -> Result<SimplicialPresheaf> {
    let s = s
        .value()
        .ok_or_else(|| Error::Precondition("L_s(K) needs s in L, not bottom".into()))?;
    locale.check_value(s)?;
    let levels = complex
        .truncated(dim_cap)
        .levels
        .iter()
        .map(|l| MonoPresheaf::new(locale.clone(), l.iter().map(|x| (simplex_id(x), s.clone(), true))))
        .collect::<Result<_>>()?;
    Ok(SimplicialPresheaf { levels })
}

/// Vertex maps `K -> {0..n}` that are weakly order preserving on every
/// simplex of `K`, i.e. the simplicial maps `K -> Delta^n`. Indexed by the
/// vertices of `K` in ascending order.
pub fn order_preserving_vertex_maps(complex: &OrderedComplex, n: usize) -> Vec<Vec<usize>> {
    let verts = complex.vertices();
    let position: BTreeMap<usize, usize> = verts.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let mut out = Vec::new();
    let mut cur = vec![0usize; verts.len()];
    if n == 0 && !verts.is_empty() {
        return out;
    }
    loop {
        let ok = complex.simplices().all(|s| s.windows(2).all(|w| cur[position[&w[0]]] <= cur[position[&w[1]]]));
        if ok {
            out.push(cur.clone());
        }
        let mut i = verts.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] < n {
                break;
            }
            cur[i] = 0;
        }
    }
}

/// Maps of simplicial presheaves `source -> target` whose generic-fibre map
/// is induced by a vertex map, enumerated through sections at every sample
/// parameter of both sides.
pub fn simplicial_presheaf_maps(
    complex: &OrderedComplex,
    source: &SimplicialPresheaf,
    target: &SimplicialPresheaf,
    target_vertices: usize,
) -> Result<Vec<Vec<usize>>> {
    let locale = match source.levels.first().or(target.levels.first()) {
        Some(l) => l.locale().clone(),
        None => return Ok(Vec::new()),
    };
    let all: Vec<&MonoPresheaf> = source.levels.iter().chain(&target.levels).collect();
    if all.iter().any(|l| l.locale() != &locale) {
        return Err(Error::LocaleMismatch("simplicial presheaves over different locales".into()));
    }
    let samples = presheaf_samples(&locale, &all);
    let verts = complex.vertices();
    let position: BTreeMap<usize, usize> = verts.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    Ok(order_preserving_vertex_maps(complex, target_vertices)
        .into_iter()
        .filter(|f| {
            source.levels.iter().enumerate().all(|(k, level)| {
                complex.levels().get(k).into_iter().flatten().all(|s| {
                    let image: Simplex = s.iter().map(|v| f[position[v]]).collect();
                    let id = simplex_id(s);
                    samples.iter().all(|a| !level.is_section(&id, a) || target.is_section(&image, a))
                })
            })
        })
        .collect())
}
