//! Seeded inputs for the benchmarks.

use std::collections::BTreeMap;

use fuzzsheaf::fuzzy::{Arrow, Diagram, FuzzySet};
use fuzzsheaf::rational::ratio;
use fuzzsheaf::sheaf::MonoPresheaf;
use fuzzsheaf::vr::PointCloud;
use fuzzsheaf::{IntervalLocale, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn unit_value<R: Rng>(rng: &mut R) -> Rational {
    ratio(rng.gen_range(0..=1000), 1000)
}

/// `n` distinct points in the plane with coordinates in hundredths.
pub fn cloud(n: usize, seed: u64) -> PointCloud {
    let mut r = rng(seed);
    let mut pts: Vec<Vec<Rational>> = Vec::new();
    while pts.len() < n {
        let p = vec![ratio(r.gen_range(0..=1000), 100), ratio(r.gen_range(0..=1000), 100)];
        if !pts.contains(&p) {
            pts.push(p);
        }
    }
    PointCloud::new(pts).expect("distinct points")
}

pub fn fuzzy_set(n: usize, seed: u64) -> FuzzySet {
    let mut r = rng(seed);
    FuzzySet::new(IntervalLocale::unit(), (0..n).map(|i| (format!("x{i}"), unit_value(&mut r)))).expect("unit grades")
}

/// A sheaf on `[0,1]` and a subsheaf of it, with the inclusion.
pub fn inclusion(n: usize, seed: u64) -> (MonoPresheaf, MonoPresheaf, BTreeMap<String, String>) {
    let mut r = rng(seed);
    let big: Vec<(String, Rational)> = (0..n).map(|i| (format!("x{i}"), unit_value(&mut r))).collect();
    let mut small: Vec<(String, Rational)> = Vec::new();
    for (k, g) in &big {
        if r.gen_bool(0.8) {
            small.push((k.clone(), g * ratio(r.gen_range(1..=4), 4)));
        }
    }
    let map = small.iter().map(|(k, _)| (k.clone(), k.clone())).collect();
    let sheaf = |v: Vec<(String, Rational)>| {
        MonoPresheaf::new(IntervalLocale::unit(), v.into_iter().map(|(k, g)| (k, g, true))).expect("unit grades")
    };
    (sheaf(small), sheaf(big), map)
}

/// A chain `N0 -> N1 -> ... -> N{len-1}` of fuzzy sets with `width`
/// elements each, grades rising along the arrows.
pub fn chain(len: usize, width: usize, seed: u64) -> Diagram {
    let mut r = rng(seed);
    let l = IntervalLocale::unit();
    let mut grades: Vec<Rational> = (0..width).map(|_| ratio(r.gen_range(0..=100), 1000)).collect();
    let mut nodes = BTreeMap::new();
    let mut arrows = Vec::new();
    for k in 0..len {
        let set = FuzzySet::new(l.clone(), grades.iter().enumerate().map(|(i, g)| (format!("x{i}"), g.clone())))
            .expect("unit grades");
        nodes.insert(format!("N{k}"), set);
        if k + 1 < len {
            let map = (0..width).map(|i| (format!("x{i}"), format!("x{}", r.gen_range(0..width)))).collect();
            arrows.push(Arrow { from: format!("N{k}"), to: format!("N{}", k + 1), map });
            // each target must sit above everything mapped onto it
            let top = grades.iter().max().cloned().unwrap_or_else(|| ratio(0, 1));
            grades = (0..width).map(|_| (&top + ratio(r.gen_range(0..=100), 1000)).min(ratio(1, 1))).collect();
        }
    }
    Diagram::new(l, nodes, arrows).expect("grades rise along arrows")
}
