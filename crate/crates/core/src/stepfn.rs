//! Piecewise-constant functions on `[0,1)` with rational breakpoints.
//!
//! A [`StepFn`] is always stored in canonical form: strictly increasing
//! breakpoints from 0 to 1 and no two adjacent pieces carrying the same value.
//! Each almost-everywhere class therefore has exactly one representation, and
//! `==` on step functions is a.e.-equality.

use rand::Rng;

use crate::error::{Error, Result};
use crate::rat::Rat;
use crate::space::Window;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StepFn<V> {
    // breaks[0] = 0 < breaks[1] < ... < breaks[k] = 1
    breaks: Vec<Rat>,
    // values[i] holds on [breaks[i], breaks[i+1])
    values: Vec<V>,
}

/// One piece `[lo, hi)` of a step function.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Piece<'a, V> {
    pub lo: &'a Rat,
    pub hi: &'a Rat,
    pub value: &'a V,
}

impl<V> Piece<'_, V> {
    pub fn length(&self) -> Rat {
        self.hi - self.lo
    }
}

/// A cell of a common refinement: both functions are constant on `[lo, hi)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell<'a, V, W> {
    pub lo: Rat,
    pub hi: Rat,
    pub left: &'a V,
    pub right: &'a W,
}

impl<V, W> Cell<'_, V, W> {
    pub fn length(&self) -> Rat {
        &self.hi - &self.lo
    }
}

/// Drops zero-length pieces and merges equal neighbours.
///
/// `breaks` must be non-decreasing, start at 0, end at 1, and have exactly one
/// more entry than `values`.
pub fn canonicalize<V: Eq>(breaks: Vec<Rat>, values: Vec<V>) -> Result<StepFn<V>> {
    if values.is_empty() {
        return Err(Error::InvalidBreakpoints("no pieces".into()));
    }
    if breaks.len() != values.len() + 1 {
        return Err(Error::InvalidBreakpoints(format!(
            "{} breakpoints for {} pieces",
            breaks.len(),
            values.len()
        )));
    }
    if !breaks[0].is_zero() || breaks[breaks.len() - 1] != Rat::one() {
        return Err(Error::InvalidBreakpoints(format!(
            "partition must run from 0 to 1, got {} .. {}",
            breaks[0],
            breaks[breaks.len() - 1]
        )));
    }
    if let Some(w) = breaks.windows(2).find(|w| w[0] > w[1]) {
        return Err(Error::InvalidBreakpoints(format!(
            "unsorted: {} > {}",
            w[0], w[1]
        )));
    }

    let mut out_breaks: Vec<Rat> = Vec::with_capacity(breaks.len());
    let mut out_values: Vec<V> = Vec::with_capacity(values.len());
    out_breaks.push(Rat::zero());
    let mut breaks = breaks.into_iter().skip(1);
    for value in values {
        let hi = breaks.next().expect("length checked");
        if hi == *out_breaks.last().expect("nonempty") {
            continue;
        }
        if out_values.last() == Some(&value) {
            *out_breaks.last_mut().expect("nonempty") = hi;
        } else {
            out_values.push(value);
            out_breaks.push(hi);
        }
    }
    Ok(StepFn {
        breaks: out_breaks,
        values: out_values,
    })
}

impl<V> StepFn<V> {
    pub fn constant(value: V) -> Self {
        StepFn {
            breaks: vec![Rat::zero(), Rat::one()],
            values: vec![value],
        }
    }

    pub fn breakpoints(&self) -> &[Rat] {
        &self.breaks
    }

    pub fn values(&self) -> &[V] {
        &self.values
    }

    /// Number of pieces of the canonical form.
    pub fn pieces(&self) -> usize {
        self.values.len()
    }

    pub fn is_constant(&self) -> bool {
        self.values.len() == 1
    }

    pub fn iter(&self) -> impl Iterator<Item = Piece<'_, V>> + '_ {
        self.values.iter().enumerate().map(move |(i, value)| Piece {
            lo: &self.breaks[i],
            hi: &self.breaks[i + 1],
            value,
        })
    }

    /// Value at `t`, using the right-hand piece at a breakpoint.
    pub fn evaluate(&self, t: &Rat) -> Result<&V> {
        if t.is_negative() || *t >= Rat::one() {
            return Err(Error::OutOfDomain(t.to_string()));
        }
        // first breakpoint strictly greater than t closes t's piece
        let idx = self.breaks.partition_point(|b| b <= t);
        Ok(&self.values[idx - 1])
    }

    /// The pieces clipped to `[lo, hi)`, skipping empty overlaps.
    pub fn clipped<'a>(
        &'a self,
        lo: &'a Rat,
        hi: &'a Rat,
    ) -> impl Iterator<Item = (Rat, Rat, &'a V)> + 'a {
        let start = self.breaks.partition_point(|b| b <= lo).saturating_sub(1);
        self.iter()
            .skip(start)
            .take_while(move |p| p.lo < hi)
            .filter_map(move |p| {
                let a = p.lo.max_of(lo);
                let b = p.hi.min_of(hi);
                (a < b).then_some((a, b, p.value))
            })
    }

    /// `∫_a^b weight(f(t)) dt` over the window.
    pub fn integrate(&self, window: &Window, mut weight: impl FnMut(&V) -> Rat) -> Rat {
        self.clipped(window.a(), window.b())
            .map(|(a, b, v)| (b - a) * weight(v))
            .sum()
    }

    /// Lebesgue measure of `{t ∈ (a, b) : pred(f(t))}`.
    pub fn measure_where(&self, window: &Window, mut pred: impl FnMut(&V) -> bool) -> Rat {
        self.clipped(window.a(), window.b())
            .filter(|(_, _, v)| pred(v))
            .map(|(a, b, _)| b - a)
            .sum()
    }
}

impl<V: Eq> StepFn<V> {
    pub fn from_pieces(breaks: Vec<Rat>, values: Vec<V>) -> Result<Self> {
        canonicalize(breaks, values)
    }

    /// Function taking `cells[i]` on `[i/m, (i+1)/m)`.
    pub fn from_grid(cells: Vec<V>) -> Result<Self> {
        let m = cells.len();
        if m == 0 {
            return Err(Error::InvalidBreakpoints("empty grid".into()));
        }
        canonicalize(grid_points(m), cells)
    }

    /// Measure of the preimage of `set` inside the window.
    pub fn measure_preimage(&self, set: &[V], window: &Window) -> Rat {
        self.measure_where(window, |v| set.contains(v))
    }

    /// Post-composition with `h`, re-canonicalized.
    pub fn map<W: Eq>(&self, mut h: impl FnMut(&V) -> W) -> StepFn<W> {
        self.try_map(|v| Ok(h(v))).expect("infallible")
    }

    pub fn try_map<W: Eq>(&self, h: impl FnMut(&V) -> Result<W>) -> Result<StepFn<W>> {
        let values = self.values.iter().map(h).collect::<Result<Vec<_>>>()?;
        canonicalize(self.breaks.clone(), values)
    }
}

/// `0, 1/m, ..., 1`.
pub fn grid_points(m: usize) -> Vec<Rat> {
    let m = m as i64;
    (0..=m).map(|i| Rat::new(i, m).expect("m > 0")).collect()
}

/// Every cell of the coarsest partition refining both `f` and `g`. Cell
/// lengths sum to 1 and there are at most `pieces(f) + pieces(g) - 1` cells.
pub fn common_refinement<'a, V, W>(f: &'a StepFn<V>, g: &'a StepFn<W>) -> Vec<Cell<'a, V, W>> {
    let mut cells = Vec::with_capacity(f.pieces() + g.pieces() - 1);
    let (mut i, mut j) = (0, 0);
    let mut lo = Rat::zero();
    while i < f.pieces() && j < g.pieces() {
        let fh = &f.breaks[i + 1];
        let gh = &g.breaks[j + 1];
        let hi = fh.min_of(gh);
        cells.push(Cell {
            lo,
            hi: hi.clone(),
            left: &f.values[i],
            right: &g.values[j],
        });
        if *fh == hi {
            i += 1;
        }
        if *gh == hi {
            j += 1;
        }
        lo = hi;
    }
    cells
}

/// Random canonical step function with breakpoints on the grid `(1/grid)ℤ`.
///
/// Each interior grid point is a breakpoint with probability 1/2 and each piece
/// draws its value from `sample`.
pub fn random_stepfn<V: Eq, R: Rng + ?Sized>(
    rng: &mut R,
    grid: usize,
    mut sample: impl FnMut(&mut R) -> V,
) -> StepFn<V> {
    assert!(grid >= 1, "grid denominator must be positive");
    let points = grid_points(grid);
    let last = points.len() - 1;
    let mut breaks = vec![Rat::zero()];
    for (k, p) in points.into_iter().enumerate().skip(1) {
        if k == last || rng.gen_bool(0.5) {
            breaks.push(p);
        }
    }
    let values = (1..breaks.len()).map(|_| sample(rng)).collect();
    canonicalize(breaks, values).expect("grid partition is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(n, d).unwrap()
    }

    fn staircase(n: usize) -> StepFn<usize> {
        StepFn::from_grid((1..=n).collect()).unwrap()
    }

    #[test]
    fn merges_equal_neighbours() {
        let f = StepFn::from_pieces(vec![r(0, 1), r(1, 2), r(1, 1)], vec![1, 1]).unwrap();
        assert_eq!(f, StepFn::constant(1));
        assert_eq!(f.breakpoints(), [Rat::zero(), Rat::one()]);
    }

    #[test]
    fn drops_zero_length_pieces() {
        let f =
            StepFn::from_pieces(vec![r(0, 1), r(1, 3), r(1, 3), r(1, 1)], vec![1, 9, 2]).unwrap();
        assert_eq!(f.values(), [1, 2]);
        assert_eq!(f.breakpoints(), [r(0, 1), r(1, 3), r(1, 1)]);

        // a zero-length piece between equal values lets them merge
        let g =
            StepFn::from_pieces(vec![r(0, 1), r(1, 3), r(1, 3), r(1, 1)], vec![1, 9, 1]).unwrap();
        assert_eq!(g, StepFn::constant(1));
    }

    #[test]
    fn canonical_input_unchanged() {
        let f = staircase(4);
        let again = canonicalize(f.breakpoints().to_vec(), f.values().to_vec()).unwrap();
        assert_eq!(again, f);
    }

    #[test]
    fn rejects_malformed_partitions() {
        assert!(
            StepFn::from_pieces(vec![r(0, 1), r(2, 3), r(1, 3), r(1, 1)], vec![1, 2, 3]).is_err()
        );
        assert!(StepFn::from_pieces(vec![r(-1, 3), r(1, 1)], vec![1]).is_err());
        assert!(StepFn::from_pieces(vec![r(0, 1), r(3, 2)], vec![1]).is_err());
        assert!(StepFn::from_pieces(vec![r(0, 1), r(1, 1)], vec![1, 2]).is_err());
        assert!(StepFn::<u8>::from_pieces(vec![r(0, 1)], vec![]).is_err());
    }

    #[test]
    fn refinement_of_halves_and_thirds() {
        let f = StepFn::from_pieces(vec![r(0, 1), r(1, 2), r(1, 1)], vec![1, 2]).unwrap();
        let g = StepFn::from_pieces(vec![r(0, 1), r(1, 3), r(1, 1)], vec!['a', 'b']).unwrap();
        let lengths: Vec<Rat> = common_refinement(&f, &g).iter().map(Cell::length).collect();
        assert_eq!(lengths, [r(1, 3), r(1, 6), r(1, 2)]);

        let c = StepFn::constant(7);
        let cells = common_refinement(&c, &c);
        assert_eq!(cells.len(), 1);
        assert_eq!(cells[0].length(), Rat::one());
    }

    #[test]
    fn evaluation_is_half_open() {
        let b2 = staircase(2);
        assert_eq!(*b2.evaluate(&r(1, 2)).unwrap(), 2);
        assert_eq!(*b2.evaluate(&r(0, 1)).unwrap(), 1);
        let b3 = staircase(3);
        assert_eq!(*b3.evaluate(&r(1, 3)).unwrap(), 2);
        assert_eq!(*b3.evaluate(&r(2, 3)).unwrap(), 3);
        assert_eq!(*StepFn::constant(5).evaluate(&r(7, 9)).unwrap(), 5);
        assert!(b3.evaluate(&Rat::one()).is_err());
        assert!(b3.evaluate(&r(-1, 9)).is_err());
    }

    #[test]
    fn preimage_measures() {
        let b4 = staircase(4);
        assert_eq!(b4.measure_preimage(&[2], &Window::full()), r(1, 4));
        let w = Window::new(r(1, 8), r(5, 8)).unwrap();
        assert_eq!(b4.measure_preimage(&[1, 2, 3, 4], &w), r(1, 2));
        assert_eq!(b4.measure_preimage(&[1], &w), r(1, 8));
        assert_eq!(b4.measure_preimage(&[4], &w), Rat::zero());
    }

    #[test]
    fn random_generation() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let f = random_stepfn(&mut rng, 1, |r| r.gen_range(0..5u8));
            assert!(f.is_constant());
        }
        for _ in 0..50 {
            let f = random_stepfn(&mut rng, 4, |r| r.gen_range(0..2u8));
            assert!(f.pieces() <= 4);
        }
        let a = random_stepfn(&mut ChaCha8Rng::seed_from_u64(9), 12, |r| {
            r.gen_range(0..3u8)
        });
        let b = random_stepfn(&mut ChaCha8Rng::seed_from_u64(9), 12, |r| {
            r.gen_range(0..3u8)
        });
        assert_eq!(a, b);
    }

    /// Raw, possibly non-canonical pieces on a small grid.
    fn arb_raw(max_pieces: usize) -> impl Strategy<Value = (Vec<Rat>, Vec<u8>)> {
        (1usize..=max_pieces, 1i64..=12).prop_flat_map(|(k, m)| {
            (
                proptest::collection::vec(0..=m, k - 1),
                proptest::collection::vec(0u8..3, k),
                Just(m),
            )
                .prop_map(|(mut cuts, vals, m)| {
                    cuts.sort();
                    let mut breaks = vec![Rat::zero()];
                    breaks.extend(cuts.into_iter().map(|c| Rat::new(c, m).unwrap()));
                    breaks.push(Rat::one());
                    (breaks, vals)
                })
        })
    }

    fn arb_step() -> impl Strategy<Value = StepFn<u8>> {
        arb_raw(8).prop_map(|(b, v)| canonicalize(b, v).unwrap())
    }

    fn arb_window() -> impl Strategy<Value = Window> {
        (0i64..12, 1i64..=12).prop_filter_map("nonempty", |(a, b)| {
            Window::new(Rat::new(a, 12).unwrap(), Rat::new(b, 12).unwrap()).ok()
        })
    }

    proptest! {
        #[test]
        fn canonicalize_is_idempotent((b, v) in arb_raw(10)) {
            let f = canonicalize(b, v).unwrap();
            let g = canonicalize(f.breakpoints().to_vec(), f.values().to_vec()).unwrap();
            prop_assert_eq!(&f, &g);
            prop_assert!(f.breakpoints().windows(2).all(|w| w[0] < w[1]));
            prop_assert!(f.values().windows(2).all(|w| w[0] != w[1]));
        }

        #[test]
        fn canonical_form_preserves_pointwise_values((b, v) in arb_raw(10)) {
            let f = canonicalize(b.clone(), v.clone()).unwrap();
            // sample at midpoints of the raw nonempty pieces
            for (i, val) in v.iter().enumerate() {
                if b[i] < b[i + 1] {
                    let mid = (&b[i] + &b[i + 1]) * Rat::new(1, 2).unwrap();
                    prop_assert_eq!(f.evaluate(&mid).unwrap(), val);
                }
            }
        }

        #[test]
        fn refinement_partitions_unit_interval(f in arb_step(), g in arb_step()) {
            let cells = common_refinement(&f, &g);
            let total: Rat = cells.iter().map(Cell::length).sum();
            prop_assert_eq!(total, Rat::one());
            prop_assert!(cells.len() < f.pieces() + g.pieces());
            prop_assert!(cells.iter().all(|c| c.lo < c.hi));
            for c in &cells {
                prop_assert_eq!(f.evaluate(&c.lo).unwrap(), c.left);
                prop_assert_eq!(g.evaluate(&c.lo).unwrap(), c.right);
            }
            // a.e.-equality via refinement scan agrees with representational equality
            let ae_equal = cells.iter().all(|c| c.left == c.right);
            prop_assert_eq!(ae_equal, f == g);
        }

        #[test]
        fn preimage_matches_cell_scan(f in arb_step(), w in arb_window(), set in proptest::collection::vec(0u8..3, 0..3)) {
            // oracle: scan the refinement against the window's indicator
            let window_fn = StepFn::from_pieces(
                vec![Rat::zero(), w.a().clone(), w.b().clone(), Rat::one()],
                vec![false, true, false],
            ).unwrap();
            let oracle: Rat = common_refinement(&f, &window_fn)
                .iter()
                .filter(|c| *c.right && set.contains(c.left))
                .map(Cell::length)
                .sum();
            prop_assert_eq!(f.measure_preimage(&set, &w), oracle);
        }

        #[test]
        fn preimage_is_additive(f in arb_step(), w in arb_window()) {
            let all = f.measure_preimage(&[0, 1, 2], &w);
            prop_assert_eq!(&all, &w.length());
            let split = f.measure_preimage(&[0], &w) + f.measure_preimage(&[1, 2], &w);
            prop_assert_eq!(all, split);
        }
    }
}
