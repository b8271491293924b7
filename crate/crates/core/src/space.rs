//! Finite compacta with exact metrics, real-valued test functions on them, and
//! averaging windows inside `[0,1]`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::rat::Rat;

/// A point of a [`FiniteSpace`], addressed by index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point(pub usize);

/// A finite metric space with distances in `[0,1]`.
///
/// Cheap to clone; the point table is shared. Two spaces compare equal when
/// their labels, distance tables and product structure agree.
#[derive(Clone)]
pub struct FiniteSpace(Arc<SpaceData>);

#[derive(PartialEq, Eq)]
struct SpaceData {
    labels: Vec<String>,
    // row-major n*n
    dist: Vec<Rat>,
    factors: Option<(FiniteSpace, FiniteSpace)>,
}

impl PartialEq for FiniteSpace {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for FiniteSpace {}

impl fmt::Debug for FiniteSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteSpace")
            .field("labels", &self.0.labels)
            .finish_non_exhaustive()
    }
}

fn check_label(label: &str) -> Result<()> {
    if label.is_empty()
        || label
            .chars()
            .any(|c| c.is_whitespace() || c == '[' || c == ']')
    {
        return Err(Error::InvalidSpace(format!("bad point label {label:?}")));
    }
    Ok(())
}

impl FiniteSpace {
    /// Builds a space from labels and a row-major distance table, checking
    /// every metric axiom.
    pub fn new(labels: Vec<String>, dist: Vec<Rat>) -> Result<Self> {
        Self::build(labels, dist, None, true)
    }

    // `check_metric` is off only for tables that are metrics by construction.
    fn build(
        labels: Vec<String>,
        dist: Vec<Rat>,
        factors: Option<(FiniteSpace, FiniteSpace)>,
        check_metric: bool,
    ) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::InvalidSpace(
                "a space needs at least one point".into(),
            ));
        }
        for (i, label) in labels.iter().enumerate() {
            check_label(label)?;
            if labels[..i].contains(label) {
                return Err(Error::InvalidSpace(format!("duplicate label {label:?}")));
            }
        }
        if dist.len() != n * n {
            return Err(Error::InvalidSpace(format!(
                "distance table has {} entries, expected {}",
                dist.len(),
                n * n
            )));
        }
        if check_metric {
            validate_metric(n, |i, j| &dist[i * n + j])?;
        }
        Ok(FiniteSpace(Arc::new(SpaceData {
            labels,
            dist,
            factors,
        })))
    }

    /// `K_n`: points labelled `1..=n`, all distinct points at distance 1.
    pub fn discrete(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSpace("K_0 is empty".into()));
        }
        Self::discrete_with_labels((1..=n).map(|i| i.to_string()).collect())
    }

    pub fn discrete_with_labels(labels: Vec<String>) -> Result<Self> {
        let n = labels.len();
        let dist = (0..n * n)
            .map(|k| {
                if k / n == k % n {
                    Rat::zero()
                } else {
                    Rat::one()
                }
            })
            .collect();
        Self::build(labels, dist, None, false)
    }

    /// The two-point discrete space `D = {0, 1}`.
    pub fn two_point() -> Self {
        Self::discrete_with_labels(vec!["0".into(), "1".into()]).expect("valid")
    }

    /// `X × Y` with the max metric. Point `(x, y)` has index `x * |Y| + y` and
    /// label `(x;y)`.
    pub fn product(x: &FiniteSpace, y: &FiniteSpace) -> Self {
        let (nx, ny) = (x.len(), y.len());
        let mut labels = Vec::with_capacity(nx * ny);
        for a in x.points() {
            for b in y.points() {
                labels.push(format!("({};{})", x.label(a), y.label(b)));
            }
        }
        let n = nx * ny;
        let mut dist = Vec::with_capacity(n * n);
        for p in 0..n {
            for q in 0..n {
                let dx = x.dist(Point(p / ny), Point(q / ny));
                let dy = y.dist(Point(p % ny), Point(q % ny));
                dist.push(dx.max_of(dy));
            }
        }
        Self::build(labels, dist, Some((x.clone(), y.clone())), false)
            .expect("max metric of metrics")
    }

    pub fn len(&self) -> usize {
        self.0.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.labels.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = Point> + Clone {
        (0..self.len()).map(Point)
    }

    pub fn contains(&self, p: Point) -> bool {
        p.0 < self.len()
    }

    pub fn check_point(&self, p: Point) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::UnknownPoint(p.0))
        }
    }

    pub fn labels(&self) -> &[String] {
        &self.0.labels
    }

    pub fn label(&self, p: Point) -> &str {
        &self.0.labels[p.0]
    }

    pub fn point(&self, label: &str) -> Option<Point> {
        self.0.labels.iter().position(|l| l == label).map(Point)
    }

    pub fn dist(&self, p: Point, q: Point) -> &Rat {
        &self.0.dist[p.0 * self.len() + q.0]
    }

    /// Factor spaces when this space was built by [`FiniteSpace::product`].
    pub fn factors(&self) -> Option<(&FiniteSpace, &FiniteSpace)> {
        self.0.factors.as_ref().map(|(a, b)| (a, b))
    }

    /// The point `(x, y)` of a product space.
    pub fn pair(&self, x: Point, y: Point) -> Result<Point> {
        let (fx, fy) = self
            .factors()
            .ok_or_else(|| Error::InvalidSpace("not a product space".into()))?;
        fx.check_point(x)?;
        fy.check_point(y)?;
        Ok(Point(x.0 * fy.len() + y.0))
    }

    /// Coordinates of a point of a product space.
    pub fn split(&self, p: Point) -> Result<(Point, Point)> {
        let (_, fy) = self
            .factors()
            .ok_or_else(|| Error::InvalidSpace("not a product space".into()))?;
        self.check_point(p)?;
        Ok((Point(p.0 / fy.len()), Point(p.0 % fy.len())))
    }
}

/// Exhaustively checks symmetry, identity of indiscernibles, the bound
/// `0 <= d <= 1` and the triangle inequality over all triples.
pub fn validate_metric<'a>(n: usize, d: impl Fn(usize, usize) -> &'a Rat) -> Result<()> {
    let one = Rat::one();
    for i in 0..n {
        if !d(i, i).is_zero() {
            return Err(Error::InvalidMetric(format!(
                "d({i},{i}) = {} != 0",
                d(i, i)
            )));
        }
        for j in 0..n {
            let dij = d(i, j);
            if dij.is_negative() || *dij > one {
                return Err(Error::InvalidMetric(format!(
                    "d({i},{j}) = {dij} outside [0,1]"
                )));
            }
            if i != j && dij.is_zero() {
                return Err(Error::InvalidMetric(format!(
                    "d({i},{j}) = 0 for distinct points"
                )));
            }
            if dij != d(j, i) {
                return Err(Error::InvalidMetric(format!("d({i},{j}) != d({j},{i})")));
            }
            for k in 0..n {
                if *dij > d(i, k) + d(k, j) {
                    return Err(Error::InvalidMetric(format!(
                        "triangle inequality fails for ({i},{k},{j})"
                    )));
                }
            }
        }
    }
    Ok(())
}

/// A function `X -> Q`. On a finite discrete space every such function is
/// continuous, so these stand in for `C(X)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TestFn {
    space: FiniteSpace,
    values: Vec<Rat>,
}

impl TestFn {
    pub fn new(space: &FiniteSpace, values: Vec<Rat>) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::InvalidArgument(format!(
                "test function has {} values for a space of {} points",
                values.len(),
                space.len()
            )));
        }
        Ok(TestFn {
            space: space.clone(),
            values,
        })
    }

    pub fn constant(space: &FiniteSpace, c: Rat) -> Self {
        TestFn {
            space: space.clone(),
            values: vec![c; space.len()],
        }
    }

    /// Indicator of a single point.
    pub fn indicator(space: &FiniteSpace, p: Point) -> Result<Self> {
        space.check_point(p)?;
        let values = space
            .points()
            .map(|q| if q == p { Rat::one() } else { Rat::zero() })
            .collect();
        Ok(TestFn {
            space: space.clone(),
            values,
        })
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn values(&self) -> &[Rat] {
        &self.values
    }

    pub fn at(&self, p: Point) -> &Rat {
        &self.values[p.0]
    }

    /// `l1·f1 + l2·f2`.
    pub fn linear_combination(l1: &Rat, f1: &TestFn, l2: &Rat, f2: &TestFn) -> Result<Self> {
        if f1.space != f2.space {
            return Err(Error::SpaceMismatch);
        }
        let values = f1
            .values
            .iter()
            .zip(&f2.values)
            .map(|(a, b)| l1 * a + l2 * b)
            .collect();
        Ok(TestFn {
            space: f1.space.clone(),
            values,
        })
    }

    pub fn abs(&self) -> Self {
        TestFn {
            space: self.space.clone(),
            values: self.values.iter().map(Rat::abs).collect(),
        }
    }

    /// Pointwise `self <= other`.
    pub fn le(&self, other: &TestFn) -> bool {
        self.space == other.space && self.values.iter().zip(&other.values).all(|(a, b)| a <= b)
    }

    pub fn min_value(&self) -> &Rat {
        self.values.iter().min().expect("nonempty space")
    }

    pub fn max_value(&self) -> &Rat {
        self.values.iter().max().expect("nonempty space")
    }
}

/// An averaging window `(a, b)` with `0 <= a < b <= 1`. The closed endpoints
/// 0 and 1 are admitted.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Window {
    a: Rat,
    b: Rat,
}

impl Window {
    pub fn new(a: Rat, b: Rat) -> Result<Self> {
        if a.is_negative() || a >= b || b > Rat::one() {
            return Err(Error::InvalidWindow(a.to_string(), b.to_string()));
        }
        Ok(Window { a, b })
    }

    pub fn full() -> Self {
        Window {
            a: Rat::zero(),
            b: Rat::one(),
        }
    }

    pub fn a(&self) -> &Rat {
        &self.a
    }

    pub fn b(&self) -> &Rat {
        &self.b
    }

    pub fn length(&self) -> Rat {
        &self.b - &self.a
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(n, d).unwrap()
    }

    #[test]
    fn discrete_spaces() {
        let k1 = FiniteSpace::discrete(1).unwrap();
        assert_eq!(k1.len(), 1);
        assert_eq!(*k1.dist(Point(0), Point(0)), Rat::zero());

        let k2 = FiniteSpace::discrete(2).unwrap();
        assert_eq!(*k2.dist(Point(0), Point(1)), Rat::one());

        let k3 = FiniteSpace::discrete(3).unwrap();
        for p in k3.points() {
            for q in k3.points() {
                let expected = if p == q { Rat::zero() } else { Rat::one() };
                assert_eq!(*k3.dist(p, q), expected);
            }
        }
        assert!(FiniteSpace::discrete(0).is_err());

        let d = FiniteSpace::two_point();
        assert_eq!(d.labels(), ["0", "1"]);
        assert_eq!(*d.dist(Point(0), Point(1)), Rat::one());
    }

    #[test]
    fn product_of_discrete_spaces() {
        let k2 = FiniteSpace::discrete(2).unwrap();
        let kk = FiniteSpace::product(&k2, &k2);
        assert_eq!(kk.len(), 4);
        let p11 = kk.pair(Point(0), Point(0)).unwrap();
        let p12 = kk.pair(Point(0), Point(1)).unwrap();
        assert_eq!(kk.label(p12), "(1;2)");
        assert_eq!(*kk.dist(p11, p12), Rat::one());
        assert_eq!(*kk.dist(p12, p12), Rat::zero());

        let k3 = FiniteSpace::discrete(3).unwrap();
        let kk3 = FiniteSpace::product(&k3, &k3);
        let p23 = kk3.point("(2;3)").unwrap();
        assert_eq!(kk3.split(p23).unwrap(), (Point(1), Point(2)));
        assert!(k3.split(Point(0)).is_err());
    }

    #[test]
    fn product_metric_is_max() {
        let x = FiniteSpace::new(
            vec!["a".into(), "b".into()],
            vec![Rat::zero(), r(1, 3), r(1, 3), Rat::zero()],
        )
        .unwrap();
        let y = FiniteSpace::new(
            vec!["u".into(), "v".into()],
            vec![Rat::zero(), r(3, 4), r(3, 4), Rat::zero()],
        )
        .unwrap();
        let xy = FiniteSpace::product(&x, &y);
        let p = xy.pair(Point(0), Point(0)).unwrap();
        let q = xy.pair(Point(1), Point(0)).unwrap();
        let s = xy.pair(Point(1), Point(1)).unwrap();
        assert_eq!(*xy.dist(p, q), r(1, 3));
        assert_eq!(*xy.dist(p, s), r(3, 4));
    }

    #[test]
    fn rejects_bad_metrics() {
        let labels = || vec!["a".to_string(), "b".to_string(), "c".to_string()];
        let z = Rat::zero;
        // triangle: d(a,c) = 1 > 1/4 + 1/4
        let tri = vec![
            z(),
            r(1, 4),
            Rat::one(),
            r(1, 4),
            z(),
            r(1, 4),
            Rat::one(),
            r(1, 4),
            z(),
        ];
        assert!(matches!(
            FiniteSpace::new(labels(), tri),
            Err(Error::InvalidMetric(_))
        ));
        let asym = vec![
            z(),
            r(1, 2),
            r(1, 2),
            r(2, 3),
            z(),
            r(1, 2),
            r(1, 2),
            r(1, 2),
            z(),
        ];
        assert!(FiniteSpace::new(labels(), asym).is_err());
        let big = vec![
            z(),
            r(3, 2),
            Rat::one(),
            r(3, 2),
            z(),
            Rat::one(),
            Rat::one(),
            Rat::one(),
            z(),
        ];
        assert!(FiniteSpace::new(labels(), big).is_err());
        let degenerate = vec![
            z(),
            z(),
            Rat::one(),
            z(),
            z(),
            Rat::one(),
            Rat::one(),
            Rat::one(),
            z(),
        ];
        assert!(FiniteSpace::new(labels(), degenerate).is_err());
        assert!(FiniteSpace::discrete_with_labels(vec!["a".into(), "a".into()]).is_err());
        assert!(FiniteSpace::discrete_with_labels(vec!["a b".into()]).is_err());
    }

    #[test]
    fn windows() {
        assert!(Window::new(Rat::zero(), Rat::one()).is_ok());
        assert!(Window::new(r(1, 2), r(1, 2)).is_err());
        assert!(Window::new(r(-1, 2), r(1, 2)).is_err());
        assert!(Window::new(r(1, 2), r(3, 2)).is_err());
        assert_eq!(Window::new(r(1, 4), r(3, 4)).unwrap().length(), r(1, 2));
    }

    #[test]
    fn test_function_algebra() {
        let k3 = FiniteSpace::discrete(3).unwrap();
        let e = TestFn::indicator(&k3, Point(1)).unwrap();
        let c = TestFn::constant(&k3, r(1, 2));
        let lc = TestFn::linear_combination(&r(2, 1), &e, &r(-1, 1), &c).unwrap();
        assert_eq!(lc.values(), [r(-1, 2), r(3, 2), r(-1, 2)]);
        assert!(e.le(&TestFn::constant(&k3, Rat::one())));
        assert!(!e.le(&c));
        assert!(TestFn::new(&k3, vec![Rat::one()]).is_err());
    }
}
