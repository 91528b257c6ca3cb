//! Vietoris-Rips systems of finite point clouds.
//!
//! A cloud `X` listed as `0..=N` grades every simplex of `Delta^X` by its
//! diameter in the locale `[0, R]^op`, with `R` above every pairwise
//! distance. In the default [`Metric::Squared`] mode grades, `R` and every
//! locale value are squared distances, which keeps all comparisons exact;
//! the query functions below still take parameters in distance units and
//! square them. [`Metric::Euclidean`] grades by distances rounded to a fixed
//! number of decimal digits instead.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::locale::IntervalLocale;
use crate::rational::{format_rational, int, ratio, rationalize, sqrt_rounded, Rational, DEFAULT_PRECISION};
use crate::simplicial::{combinations, pi0, simplex_id, Simplex, SimplicialFuzzySet};
use crate::stalks::{stalkwise_check, StalkMode, StalkPoint, Witness};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointCloud {
    points: Vec<Vec<Rational>>,
}

impl PointCloud {
    pub fn new(points: Vec<Vec<Rational>>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Domain("a point cloud needs at least one point".into()));
        }
        let arity = points[0].len();
        if let Some(p) = points.iter().position(|p| p.len() != arity) {
            return Err(Error::Arity { expected: arity, got: points[p].len() });
        }
        for i in 0..points.len() {
            for j in 0..i {
                if points[i] == points[j] {
                    return Err(Error::Domain(format!("points {j} and {i} coincide")));
                }
            }
        }
        Ok(PointCloud { points })
    }

    /// Rationalizes float coordinates to `digits` decimal places.
    pub fn from_f64(points: &[Vec<f64>], digits: u32) -> Result<Self> {
        let pts = points
            .iter()
            .map(|p| p.iter().map(|x| rationalize(*x, digits)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        PointCloud::new(pts)
    }

    pub fn points(&self) -> &[Vec<Rational>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.points[0].len()
    }

    pub fn squared_distance(&self, i: usize, j: usize) -> Rational {
        self.points[i]
            .iter()
            .zip(&self.points[j])
            .map(|(a, b)| {
                let d = a - b;
                &d * &d
            })
            .fold(Rational::zero(), |acc, x| acc + x)
    }

    pub fn index_of(&self, point: &[Rational]) -> Option<usize> {
        self.points.iter().position(|p| p.as_slice() == point)
    }

    /// Same points, listed in the order given by `order` (a permutation).
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        PointCloud::new(order.iter().map(|&i| self.points[i].clone()).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Metric {
    /// Grades are exact squared diameters.
    #[default]
    Squared,
    /// Grades are diameters rounded to `digits` decimal places.
    Euclidean { digits: u32 },
}

impl Metric {
    pub fn euclidean() -> Self {
        Metric::Euclidean { digits: DEFAULT_PRECISION }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Metric::Squared => "squared",
            Metric::Euclidean { .. } => "euclidean",
        }
    }

    fn grade_of_squared(&self, sq: &Rational) -> Rational {
        match self {
            Metric::Squared => sq.clone(),
            Metric::Euclidean { digits } => sqrt_rounded(sq, *digits).expect("squared distances are non-negative"),
        }
    }

    /// Locale value of a parameter given in distance units.
    pub fn to_locale(&self, s: &Rational) -> Rational {
        match self {
            Metric::Squared => s * s,
            Metric::Euclidean { .. } => s.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VrOptions {
    /// Upper bound `R` in distance units; defaults to `9/8` of the diameter.
    pub r: Option<Rational>,
    pub dim_cap: usize,
    pub metric: Metric,
}

impl Default for VrOptions {
    fn default() -> Self {
        VrOptions { r: None, dim_cap: 2, metric: Metric::Squared }
    }
}

/// The Vietoris-Rips simplicial fuzzy set of a cloud over `[0, R]^op`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VrSystem {
    cloud: PointCloud,
    metric: Metric,
    dim_cap: usize,
    /// `R` as a locale value (squared in `Squared` mode).
    r_locale: Rational,
    r_defaulted: bool,
    complex: SimplicialFuzzySet,
}

impl VrSystem {
    pub fn cloud(&self) -> &PointCloud {
        &self.cloud
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn dim_cap(&self) -> usize {
        self.dim_cap
    }

    pub fn r_locale(&self) -> &Rational {
        &self.r_locale
    }

    pub fn r_defaulted(&self) -> bool {
        self.r_defaulted
    }

    pub fn locale(&self) -> &IntervalLocale {
        self.complex.locale()
    }

    pub fn complex(&self) -> &SimplicialFuzzySet {
        &self.complex
    }

    pub fn grade(&self, simplex: &[usize]) -> Option<&Rational> {
        self.complex.grade(simplex)
    }

    /// Locale value of a distance-unit parameter, checked against `[0, R]`.
    pub fn parameter(&self, s: &Rational) -> Result<Rational> {
        if s < &int(0) {
            return Err(Error::Domain(format!("negative parameter {}", format_rational(s))));
        }
        let a = self.metric.to_locale(s);
        self.locale().check_value(&a)?;
        Ok(a)
    }

    /// Per-level simplex counts.
    pub fn counts(&self) -> Vec<usize> {
        self.complex.levels().iter().map(|l| l.len()).collect()
    }
}

fn default_r_locale(metric: Metric, max_grade: &Rational) -> Rational {
    if max_grade.is_zero() {
        return int(1);
    }
    match metric {
        Metric::Squared => max_grade * ratio(81, 64),
        Metric::Euclidean { .. } => max_grade * ratio(9, 8),
    }
}

fn build(cloud: &PointCloud, opts: &VrOptions, r_override: Option<Rational>, pad: bool) -> Result<VrSystem> {
    let n = cloud.len();
    if !pad && opts.dim_cap >= n {
        return Err(Error::Domain(format!(
            "dim_cap {} exceeds N = {} for a cloud of {n} points",
            opts.dim_cap,
            n - 1
        )));
    }
    let mut pair: Vec<Vec<Rational>> = vec![vec![Rational::zero(); n]; n];
    let mut max_grade = Rational::zero();
    for i in 0..n {
        for j in 0..i {
            let g = opts.metric.grade_of_squared(&cloud.squared_distance(i, j));
            if g > max_grade {
                max_grade = g.clone();
            }
            pair[i][j] = g.clone();
            pair[j][i] = g;
        }
    }
    let (r_locale, r_defaulted) = match (r_override, &opts.r) {
        (Some(r), _) => (r, false),
        (None, Some(r)) => (opts.metric.to_locale(r), false),
        (None, None) => (default_r_locale(opts.metric, &max_grade), true),
    };
    if r_locale <= max_grade {
        return Err(Error::Precondition(format!(
            "R must exceed every pairwise distance (locale value {} <= {})",
            format_rational(&r_locale),
            format_rational(&max_grade)
        )));
    }
    let locale = IntervalLocale::opposite_from_zero(r_locale.clone())?;
    let levels: Vec<BTreeMap<Simplex, Rational>> = (0..=opts.dim_cap)
        .map(|k| {
            combinations(n, k + 1)
                .into_iter()
                .map(|s| {
                    let mut g = Rational::zero();
                    for (a, &u) in s.iter().enumerate() {
                        for &v in &s[a + 1..] {
                            if pair[u][v] > g {
                                g = pair[u][v].clone();
                            }
                        }
                    }
                    (s, g)
                })
                .collect()
        })
        .collect();
    let complex = SimplicialFuzzySet::new(locale, levels)?;
    Ok(VrSystem { cloud: cloud.clone(), metric: opts.metric, dim_cap: opts.dim_cap, r_locale, r_defaulted, complex })
}

/// Builds the VR system of `cloud` up to dimension `opts.dim_cap`.
pub fn vr_build(cloud: &PointCloud, opts: &VrOptions) -> Result<VrSystem> {
    build(cloud, opts, None, false)
}

/// Simplices of `V_s(X)` per level: diameter at most `s` (distance units).
pub fn vr_sections(v: &VrSystem, s: &Rational) -> Result<Vec<Vec<Simplex>>> {
    let a = v.parameter(s)?;
    Ok(v.complex.sections_at(&a))
}

/// Stalk at `t` per level: diameter strictly below `t` (distance units), or
/// all of `Delta^X` at bottom.
pub fn vr_stalk(v: &VrSystem, t: &StalkPoint) -> Result<Vec<Vec<Simplex>>> {
    let p = match t {
        StalkPoint::Bottom => StalkPoint::Bottom,
        StalkPoint::Point(t) => {
            if t.is_zero() {
                return Err(Error::Domain("t = 0 is the top of [0,R]^op and has no stalk".into()));
            }
            StalkPoint::Point(v.parameter(t)?)
        }
    };
    v.complex.stalk(&p)
}

/// Graphviz rendering of the 1-skeleton of `V_s(X)`.
pub fn to_dot(v: &VrSystem, s: &Rational) -> Result<String> {
    let levels = vr_sections(v, s)?;
    let mut out = String::from("graph vr {\n");
    for vertex in levels.first().into_iter().flatten() {
        writeln!(out, "  {};", vertex[0]).expect("write to string");
    }
    for edge in levels.get(1).into_iter().flatten() {
        let g = v.grade(edge).expect("stored edge");
        writeln!(out, "  {} -- {} [label=\"{}\"];", edge[0], edge[1], format_rational(g)).expect("write to string");
    }
    out.push_str("}\n");
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompareFailure {
    pub level: usize,
    pub witness: Witness,
}

/// Result of comparing `V(X) -> V(Y)` for an inclusion `X ⊆ Y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompareReport {
    /// Every level passed the stalkwise isomorphism check.
    pub equivalent: bool,
    pub failure: Option<CompareFailure>,
    /// A stalk parameter (locale value) below every positive grade of `Y`,
    /// where both stalks are discrete; `None` when `Y` is a single point.
    pub small_t: Option<Rational>,
    /// Component counts of the two stalks at `small_t`.
    pub pi0_small_t: Option<(usize, usize)>,
    /// Index in `Y` of every point of `X`.
    pub inclusion: Vec<usize>,
}

fn inclusion_map(x: &PointCloud, y: &PointCloud) -> Result<Vec<usize>> {
    x.points()
        .iter()
        .enumerate()
        .map(|(i, p)| {
            y.index_of(p)
                .ok_or_else(|| Error::Precondition(format!("point {i} of X is not a point of Y")))
        })
        .collect()
}

/// Compares the VR systems of `x ⊆ y` under shared `R` (taken from `y`) and
/// dimension cap. Levels of `x` above its own dimension are empty.
pub fn vr_compare(x: &PointCloud, y: &PointCloud, opts: &VrOptions) -> Result<CompareReport> {
    let inclusion = inclusion_map(x, y)?;
    let vy = vr_build(y, opts)?;
    let vx = build(x, opts, Some(vy.r_locale.clone()), true)?;
    compare_built(&vx, &vy, inclusion)
}

/// Same as [`vr_compare`] for systems built beforehand over the same locale.
pub fn vr_compare_systems(vx: &VrSystem, vy: &VrSystem) -> Result<CompareReport> {
    if vx.locale() != vy.locale() || vx.metric != vy.metric {
        return Err(Error::LocaleMismatch("VR systems must share R and metric".into()));
    }
    if vx.dim_cap != vy.dim_cap {
        return Err(Error::Precondition("VR systems must share dim_cap".into()));
    }
    let inclusion = inclusion_map(&vx.cloud, &vy.cloud)?;
    compare_built(vx, vy, inclusion)
}

fn compare_built(vx: &VrSystem, vy: &VrSystem, inclusion: Vec<usize>) -> Result<CompareReport> {
    let mut failure = None;
    for k in 0..=vy.dim_cap {
        let e = vx.complex.level_sheaf(k);
        let f = vy.complex.level_sheaf(k);
        let map: BTreeMap<String, String> = vx.complex.levels()[k]
            .keys()
            .map(|s| {
                let mut image: Simplex = s.iter().map(|&v| inclusion[v]).collect();
                image.sort_unstable();
                (simplex_id(s), simplex_id(&image))
            })
            .collect();
        let verdict = stalkwise_check(&e, &f, &map, StalkMode::Iso)?;
        if let Some(witness) = verdict.witness {
            failure = Some(CompareFailure { level: k, witness });
            break;
        }
    }

    let small_t = vy
        .complex
        .levels()
        .get(1)
        .and_then(|edges| edges.values().min().cloned());
    let pi0_small_t = match &small_t {
        Some(t) => {
            let p = StalkPoint::Point(t.clone());
            Some((pi0(&vx.complex.stalk(&p)?).len(), pi0(&vy.complex.stalk(&p)?).len()))
        }
        None => None,
    };
    Ok(CompareReport { equivalent: failure.is_none(), failure, small_t, pi0_small_t, inclusion })
}
