//! Seeded random generators for spaces, maps, test functions and windows.
//!
//! Everything here is driven by an explicit `Rng`, so identical seeds give
//! identical samples.

use rand::Rng;

use crate::hm::SpaceMap;
use crate::rat::Rat;
use crate::space::{FiniteSpace, Point, TestFn, Window};

fn rat(num: i64, den: i64) -> Rat {
    Rat::new(num, den).expect("nonzero denominator")
}

/// A space of `1..=max_points` points. Half the time discrete; otherwise
/// distinct points sit at distances drawn from `[1/2, 1]`, which satisfies
/// the triangle inequality automatically.
pub fn random_space<R: Rng + ?Sized>(rng: &mut R, max_points: usize) -> FiniteSpace {
    let n = rng.gen_range(1..=max_points.max(1));
    let labels: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    if rng.gen_bool(0.5) {
        return FiniteSpace::discrete_with_labels(labels).expect("distinct labels");
    }
    let mut dist = vec![Rat::zero(); n * n];
    for i in 0..n {
        for j in i + 1..n {
            let d = rat(rng.gen_range(6..=12), 12);
            dist[i * n + j] = d.clone();
            dist[j * n + i] = d;
        }
    }
    FiniteSpace::new(labels, dist).expect("distances in [1/2, 1] form a metric")
}

pub fn random_point<R: Rng + ?Sized>(rng: &mut R, space: &FiniteSpace) -> Point {
    Point(rng.gen_range(0..space.len()))
}

pub fn random_map<R: Rng + ?Sized>(
    rng: &mut R,
    source: &FiniteSpace,
    target: &FiniteSpace,
) -> SpaceMap {
    let assignment = source.points().map(|_| random_point(rng, target)).collect();
    SpaceMap::new(source, target, assignment).expect("images lie in the target")
}

/// Small rational in `[-2, 2]` with denominator dividing 12.
pub fn random_rat<R: Rng + ?Sized>(rng: &mut R) -> Rat {
    rat(rng.gen_range(-24..=24), rng.gen_range(1..=12))
}

pub fn random_testfn<R: Rng + ?Sized>(rng: &mut R, space: &FiniteSpace) -> TestFn {
    let values = space.points().map(|_| random_rat(rng)).collect();
    TestFn::new(space, values).expect("one value per point")
}

/// A test function with values in `[0, 1]`.
pub fn random_unit_testfn<R: Rng + ?Sized>(rng: &mut R, space: &FiniteSpace) -> TestFn {
    let values = space
        .points()
        .map(|_| rat(rng.gen_range(0..=12), 12))
        .collect();
    TestFn::new(space, values).expect("one value per point")
}

/// A window with endpoints on `(1/grid)ℤ`.
pub fn random_window<R: Rng + ?Sized>(rng: &mut R, grid: usize) -> Window {
    let m = grid.max(1) as i64;
    let a = rng.gen_range(0..m);
    let b = rng.gen_range(a + 1..=m);
    Window::new(rat(a, m), rat(b, m)).expect("0 <= a < b <= 1")
}
