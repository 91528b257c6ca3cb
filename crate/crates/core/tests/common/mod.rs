//! Random instances and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use fuzzsheaf::fuzzy::{Arrow, Diagram, FuzzySet};
use fuzzsheaf::rational::{int, ratio};
use fuzzsheaf::sheaf::{MonoPresheaf, StepPresheaf};
use fuzzsheaf::vr::PointCloud;
use fuzzsheaf::{IntervalLocale, Orientation, Rational};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const GRID: i64 = 20;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn unit() -> IntervalLocale {
    IntervalLocale::unit()
}

pub fn opposite() -> IntervalLocale {
    IntervalLocale::opposite_from_zero(int(5)).unwrap()
}

/// The two test locales, alternating with `i`.
pub fn locale_for(i: usize) -> IntervalLocale {
    if i % 2 == 0 {
        unit()
    } else {
        opposite()
    }
}

/// `lo + (hi - lo) * k / GRID`.
pub fn grid_point(l: &IntervalLocale, k: i64) -> Rational {
    l.lo() + (l.hi() - l.lo()) * ratio(k, GRID)
}

pub fn random_value<R: Rng>(rng: &mut R, l: &IntervalLocale) -> Rational {
    grid_point(l, rng.gen_range(0..=GRID))
}

/// `a <= b` in the locale, from the raw numeric order.
pub fn leq(l: &IntervalLocale, a: &Rational, b: &Rational) -> bool {
    match l.orientation() {
        Orientation::Standard => a <= b,
        Orientation::Opposite => a >= b,
    }
}

pub fn lt(l: &IntervalLocale, a: &Rational, b: &Rational) -> bool {
    leq(l, a, b) && a != b
}

pub fn top(l: &IntervalLocale) -> Rational {
    match l.orientation() {
        Orientation::Standard => l.hi().clone(),
        Orientation::Opposite => l.lo().clone(),
    }
}

pub fn initial(l: &IntervalLocale) -> Rational {
    match l.orientation() {
        Orientation::Standard => l.lo().clone(),
        Orientation::Opposite => l.hi().clone(),
    }
}

/// A random value below `bound` in the locale order, on the grid.
pub fn random_below<R: Rng>(rng: &mut R, l: &IntervalLocale, bound: &Rational) -> Rational {
    let options: Vec<Rational> = (0..=GRID).map(|k| grid_point(l, k)).filter(|v| leq(l, v, bound)).collect();
    options.choose(rng).unwrap().clone()
}

/// Every grid point and every midpoint between neighbours: a superset of
/// the sample points of any grid-valued input.
pub fn fine_grid(l: &IntervalLocale) -> Vec<Rational> {
    (0..=2 * GRID).map(|k| l.lo() + (l.hi() - l.lo()) * ratio(k, 2 * GRID)).collect()
}

pub fn random_fuzzy<R: Rng>(rng: &mut R, l: &IntervalLocale, max_len: usize) -> FuzzySet {
    let n = rng.gen_range(0..=max_len);
    FuzzySet::new(l.clone(), (0..n).map(|i| (format!("e{i}"), random_value(rng, l)))).unwrap()
}

pub fn random_mono<R: Rng>(rng: &mut R, l: &IntervalLocale, max_len: usize) -> MonoPresheaf {
    let n = rng.gen_range(0..=max_len);
    let entries: Vec<(String, Rational, bool)> = (0..n)
        .map(|i| {
            let g = random_value(rng, l);
            let attained = g == initial(l) || rng.gen_bool(0.5);
            (format!("e{i}"), g, attained)
        })
        .collect();
    MonoPresheaf::new(l.clone(), entries).unwrap()
}

pub fn random_sheaf<R: Rng>(rng: &mut R, l: &IntervalLocale, max_len: usize) -> MonoPresheaf {
    let set = random_fuzzy(rng, l, max_len);
    MonoPresheaf::new(l.clone(), set.iter().map(|(k, g)| (k.clone(), g.clone(), true))).unwrap()
}

/// Sections by direct comparison of grades.
pub fn sections_oracle(p: &MonoPresheaf, a: &Rational) -> BTreeSet<String> {
    let l = p.locale();
    p.entries()
        .iter()
        .filter(|(_, e)| if e.attained { leq(l, a, &e.grade) } else { lt(l, a, &e.grade) })
        .map(|(k, _)| k.clone())
        .collect()
}

/// A random diagram whose arrows all point from lower to higher node
/// index. Grades are drawn from the sinks backwards so that every arrow
/// satisfies the homotopy condition.
pub fn random_diagram<R: Rng>(
    rng: &mut R,
    l: &IntervalLocale,
    nodes: usize,
    max_arrows: usize,
    max_carrier: usize,
) -> Diagram {
    let labels: Vec<String> = (0..nodes).map(|i| format!("N{i}")).collect();
    let sizes: Vec<usize> = (0..nodes).map(|_| rng.gen_range(1..=max_carrier)).collect();
    let mut arrows: Vec<(usize, usize, Vec<usize>)> = Vec::new();
    if nodes >= 2 {
        for _ in 0..rng.gen_range(0..=max_arrows) {
            let from = rng.gen_range(0..nodes - 1);
            let to = rng.gen_range(from + 1..nodes);
            let map = (0..sizes[from]).map(|_| rng.gen_range(0..sizes[to])).collect();
            arrows.push((from, to, map));
        }
    }
    let mut grades: Vec<Vec<Rational>> = vec![Vec::new(); nodes];
    for node in (0..nodes).rev() {
        grades[node] = (0..sizes[node])
            .map(|x| {
                let mut bound = top(l);
                for (from, to, map) in &arrows {
                    if *from == node {
                        let g = &grades[*to][map[x]];
                        if leq(l, g, &bound) {
                            bound = g.clone();
                        }
                    }
                }
                random_below(rng, l, &bound)
            })
            .collect();
    }
    let node_sets: BTreeMap<String, FuzzySet> = (0..nodes)
        .map(|i| {
            let set = FuzzySet::new(l.clone(), grades[i].iter().enumerate().map(|(x, g)| (format!("x{x}"), g.clone())))
                .unwrap();
            (labels[i].clone(), set)
        })
        .collect();
    let arrows = arrows
        .into_iter()
        .map(|(from, to, map)| Arrow {
            from: labels[from].clone(),
            to: labels[to].clone(),
            map: map.iter().enumerate().map(|(x, y)| (format!("x{x}"), format!("x{y}"))).collect(),
        })
        .collect();
    Diagram::new(l.clone(), node_sets, arrows).unwrap()
}

/// A cospan `X -> Z <- Y`.
pub fn random_pullback<R: Rng>(rng: &mut R, l: &IntervalLocale) -> Diagram {
    let z = rng.gen_range(1..=3);
    let sizes = [rng.gen_range(1..=4), rng.gen_range(1..=4)];
    let z_grades: Vec<Rational> = (0..z).map(|_| random_value(rng, l)).collect();
    let mut nodes = BTreeMap::new();
    let mut arrows = Vec::new();
    for (label, n) in ["X", "Y"].into_iter().zip(sizes) {
        let map: Vec<usize> = (0..n).map(|_| rng.gen_range(0..z)).collect();
        let set = FuzzySet::new(
            l.clone(),
            map.iter().enumerate().map(|(x, &y)| (format!("{label}{x}"), random_below(rng, l, &z_grades[y]))),
        )
        .unwrap();
        nodes.insert(label.to_string(), set);
        arrows.push(Arrow {
            from: label.into(),
            to: "Z".into(),
            map: map.iter().enumerate().map(|(x, y)| (format!("{label}{x}"), format!("z{y}"))).collect(),
        });
    }
    let zset = FuzzySet::new(l.clone(), z_grades.iter().enumerate().map(|(i, g)| (format!("z{i}"), g.clone()))).unwrap();
    nodes.insert("Z".into(), zset);
    Diagram::new(l.clone(), nodes, arrows).unwrap()
}

/// Compatible families of plain sets, brute force over the product.
pub fn set_limit(
    nodes: &BTreeMap<String, BTreeSet<String>>,
    arrows: &[Arrow],
) -> BTreeSet<BTreeMap<String, String>> {
    let mut families: Vec<BTreeMap<String, String>> = vec![BTreeMap::new()];
    for (label, set) in nodes {
        families = families
            .into_iter()
            .flat_map(|f| {
                set.iter().map(move |x| {
                    let mut g = f.clone();
                    g.insert(label.clone(), x.clone());
                    g
                })
            })
            .collect();
    }
    families
        .into_iter()
        .filter(|f| arrows.iter().all(|a| a.map.get(&f[&a.from]) == Some(&f[&a.to])))
        .collect()
}

/// Classes of the set colimit: the partition of `(node, element)` pairs
/// generated by the arrows, by repeated relabelling.
pub fn set_colimit(
    nodes: &BTreeMap<String, BTreeSet<String>>,
    arrows: &[Arrow],
) -> BTreeMap<(String, String), usize> {
    let mut label: BTreeMap<(String, String), usize> = BTreeMap::new();
    for (node, set) in nodes {
        for x in set {
            let n = label.len();
            label.insert((node.clone(), x.clone()), n);
        }
    }
    loop {
        let mut changed = false;
        for a in arrows {
            for x in &nodes[&a.from] {
                let Some(y) = a.map.get(x) else { continue };
                let (p, q) = ((a.from.clone(), x.clone()), (a.to.clone(), y.clone()));
                let (Some(&lp), Some(&lq)) = (label.get(&p), label.get(&q)) else { continue };
                if lp != lq {
                    let (keep, drop) = (lp.min(lq), lp.max(lq));
                    for v in label.values_mut() {
                        if *v == drop {
                            *v = keep;
                        }
                    }
                    changed = true;
                }
            }
        }
        if !changed {
            return label;
        }
    }
}

/// Squared Euclidean distance, recomputed from coordinates.
pub fn sq_dist(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).fold(int(0), |acc, v| acc + v)
}

/// A cloud of `n` distinct points with coordinates in quarter steps.
pub fn random_cloud<R: Rng>(rng: &mut R, n: usize, dim: usize) -> PointCloud {
    let mut pts: Vec<Vec<Rational>> = Vec::new();
    while pts.len() < n {
        let p: Vec<Rational> = (0..dim).map(|_| ratio(rng.gen_range(-12..=12), 4)).collect();
        if !pts.contains(&p) {
            pts.push(p);
        }
    }
    PointCloud::new(pts).unwrap()
}

/// A step presheaf with up to `max_cuts` cuts and levels of at most
/// `max_level` elements, restrictions drawn at random.
pub fn random_step<R: Rng>(rng: &mut R, l: &IntervalLocale, max_cuts: usize, max_level: usize) -> StepPresheaf {
    let mut inner: Vec<i64> = (1..GRID).collect();
    inner.shuffle(rng);
    let mut ks: Vec<i64> = inner[..rng.gen_range(0..max_cuts)].to_vec();
    ks.sort_unstable();
    let mut cuts: Vec<Rational> = ks.iter().map(|&k| grid_point(l, k)).collect();
    cuts.push(top(l));
    l.sort_values(&mut cuts);
    let sizes: Vec<usize> = (0..=cuts.len()).map(|_| rng.gen_range(1..=max_level)).collect();
    let levels: Vec<BTreeSet<String>> =
        sizes.iter().enumerate().map(|(k, &n)| (0..n).map(|i| format!("l{k}_{i}")).collect()).collect();
    let restrictions = (0..cuts.len())
        .map(|k| {
            levels[k + 1]
                .iter()
                .map(|x| (x.clone(), format!("l{k}_{}", rng.gen_range(0..sizes[k]))))
                .collect()
        })
        .collect();
    StepPresheaf::new(l.clone(), cuts, levels, restrictions).unwrap()
}
