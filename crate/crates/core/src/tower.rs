//! Second and third Hartman-Mycielski levels: step functions whose values are
//! step functions. Provides `Hη`, `ηH`, `H²` on maps, the iterated metric and
//! coordinates, and candidate multiplications `μ: H² -> H`.

use std::collections::HashMap;
use std::fmt;

use rand::Rng;

use crate::error::Result;
use crate::hm::{integral_distance, same_space, window_average, HmFn, SpaceMap};
use crate::rat::Rat;
use crate::space::{FiniteSpace, Point, TestFn, Window};
use crate::stepfn::{canonicalize, common_refinement, random_stepfn, StepFn};
use crate::text;

pub type Steps1 = StepFn<Point>;
pub type Steps2 = StepFn<Steps1>;
pub type Steps3 = StepFn<Steps2>;

/// An element of the dense part `HM(HM X)` of `H² X`.
#[derive(Clone, PartialEq, Eq)]
pub struct HmFn2 {
    space: FiniteSpace,
    steps: Steps2,
}

/// An element of `HM(HM(HM X))`, used for associativity checks.
#[derive(Clone, PartialEq, Eq)]
pub struct HmFn3 {
    space: FiniteSpace,
    steps: Steps3,
}

fn random_steps1<R: Rng + ?Sized>(rng: &mut R, n: usize, grid: usize) -> Steps1 {
    random_stepfn(rng, grid, |r| Point(r.gen_range(0..n)))
}

fn random_steps2<R: Rng + ?Sized>(rng: &mut R, n: usize, grid: usize) -> Steps2 {
    random_stepfn(rng, grid, |r| random_steps1(r, n, grid))
}

impl HmFn2 {
    pub fn new(space: &FiniteSpace, steps: Steps2) -> Result<Self> {
        for inner in steps.values() {
            for &p in inner.values() {
                space.check_point(p)?;
            }
        }
        Ok(HmFn2 {
            space: space.clone(),
            steps,
        })
    }

    /// Outer pieces given by `breaks`, with inner values taken from `inner`.
    pub fn from_inner(breaks: Vec<Rat>, inner: Vec<HmFn>) -> Result<Self> {
        let space = inner
            .first()
            .map(|f| f.space().clone())
            .ok_or_else(|| crate::Error::InvalidArgument("no inner values".into()))?;
        let mut values = Vec::with_capacity(inner.len());
        for f in inner {
            same_space(&space, f.space())?;
            values.push(f.into_steps());
        }
        Ok(HmFn2 {
            space,
            steps: canonicalize(breaks, values)?,
        })
    }

    /// Inner value `cells[i]` on `[i/m, (i+1)/m)`.
    pub fn from_grid(inner: Vec<HmFn>) -> Result<Self> {
        let m = inner.len().max(1);
        Self::from_inner(crate::stepfn::grid_points(m), inner)
    }

    pub fn random<R: Rng + ?Sized>(space: &FiniteSpace, grid: usize, rng: &mut R) -> Self {
        HmFn2 {
            space: space.clone(),
            steps: random_steps2(rng, space.len(), grid),
        }
    }

    pub fn constant(inner: HmFn) -> Self {
        HmFn2 {
            space: inner.space().clone(),
            steps: StepFn::constant(inner.into_steps()),
        }
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn steps(&self) -> &Steps2 {
        &self.steps
    }

    pub fn outer_pieces(&self) -> usize {
        self.steps.pieces()
    }

    /// Inner values, one per outer piece.
    pub fn inner(&self) -> Vec<HmFn> {
        self.steps
            .values()
            .iter()
            .map(|g| HmFn::from_parts_unchecked(self.space.clone(), g.clone()))
            .collect()
    }

    pub fn evaluate(&self, s: &Rat) -> Result<HmFn> {
        let g = self.steps.evaluate(s)?;
        Ok(HmFn::from_parts_unchecked(self.space.clone(), g.clone()))
    }

    pub fn to_text(&self) -> String {
        text::encode(&self.steps, &self.space)
    }

    pub fn parse(space: &FiniteSpace, s: &str) -> Result<Self> {
        HmFn2::new(space, text::decode(space, s)?)
    }
}

impl HmFn3 {
    pub fn new(space: &FiniteSpace, steps: Steps3) -> Result<Self> {
        for middle in steps.values() {
            HmFn2::new(space, middle.clone())?;
        }
        Ok(HmFn3 {
            space: space.clone(),
            steps,
        })
    }

    pub fn random<R: Rng + ?Sized>(space: &FiniteSpace, grid: usize, rng: &mut R) -> Self {
        let n = space.len();
        HmFn3 {
            space: space.clone(),
            steps: random_stepfn(rng, grid, |r| random_steps2(r, n, grid)),
        }
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn steps(&self) -> &Steps3 {
        &self.steps
    }

    pub fn to_text(&self) -> String {
        text::encode(&self.steps, &self.space)
    }

    pub fn parse(space: &FiniteSpace, s: &str) -> Result<Self> {
        HmFn3::new(space, text::decode(space, s)?)
    }
}

impl fmt::Debug for HmFn2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HmFn2[{}]", self.to_text())
    }
}

impl fmt::Display for HmFn2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for HmFn3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HmFn3[{}]", self.to_text())
    }
}

/// `H(η X)(f)`: `s ↦ η(f(s))`.
pub fn h_eta(f: &HmFn) -> HmFn2 {
    HmFn2 {
        space: f.space().clone(),
        steps: f.steps().map(|&p| StepFn::constant(p)),
    }
}

/// `η(H X)(f)`: the constant outer function at `f`.
pub fn eta_h(f: &HmFn) -> HmFn2 {
    HmFn2::constant(f.clone())
}

/// `H²h`: applies `HM h` to every inner value.
pub fn h2_map(h: &SpaceMap, f: &HmFn2) -> Result<HmFn2> {
    same_space(h.source(), &f.space)?;
    Ok(HmFn2 {
        space: h.target().clone(),
        steps: f.steps.map(|g| g.map(|&p| h.apply(p))),
    })
}

/// `s ↦ F(s)(s)` for any nested step function.
pub fn diagonal<V: Clone + Eq>(f: &StepFn<StepFn<V>>) -> StepFn<V> {
    let mut breaks = vec![Rat::zero()];
    let mut values = Vec::new();
    for piece in f.iter() {
        for (_, hi, v) in piece.value.clipped(piece.lo, piece.hi) {
            breaks.push(hi);
            values.push(v.clone());
        }
    }
    canonicalize(breaks, values).expect("refinement of a partition")
}

pub fn diagonal_flatten(f: &HmFn2) -> HmFn {
    HmFn::from_parts_unchecked(f.space.clone(), diagonal(&f.steps))
}

/// `∫₀¹ d_HM(F(s), G(s)) ds`.
pub fn d_hm2(f: &HmFn2, g: &HmFn2) -> Result<Rat> {
    same_space(&f.space, &g.space)?;
    Ok(common_refinement(&f.steps, &g.steps)
        .into_iter()
        .filter(|c| c.left != c.right)
        .map(|c| c.length() * integral_distance(&f.space, c.left, c.right))
        .sum())
}

/// `(1/(d-c)) ∫_c^d p_φ(a,b)(F(s)) ds` with `(a,b)` the inner window and
/// `(c,d)` the outer one.
pub fn iterated_functional_eval(
    phi: &TestFn,
    inner: &Window,
    outer: &Window,
    f: &HmFn2,
) -> Result<Rat> {
    same_space(phi.space(), &f.space)?;
    let total = f.steps.integrate(outer, |g| window_average(phi, inner, g));
    total.checked_div(&outer.length())
}

/// A candidate multiplication `μ X: H² X -> H X`, given on the dense
/// step-function part. Implementations must be deterministic and exact.
pub trait MuCandidate: Send + Sync {
    fn name(&self) -> &str;

    fn apply(&self, f: &HmFn2) -> Result<HmFn>;
}

/// `H(μ X)`: applies the candidate to every outer value of `F`.
pub fn mu_inside(mu: &dyn MuCandidate, f: &HmFn3) -> Result<HmFn2> {
    let steps = f.steps.try_map(|middle| {
        let g = HmFn2 {
            space: f.space.clone(),
            steps: middle.clone(),
        };
        Ok(mu.apply(&g)?.into_steps())
    })?;
    Ok(HmFn2 {
        space: f.space.clone(),
        steps,
    })
}

/// `μ(H X)`: the candidate at the level of `H X`.
///
/// The inner `HM X` values occurring in `F` form a finite subspace `Y` of
/// `HM X` under `d_HM`. `F` is re-encoded as an element of `H² Y`, the
/// candidate runs on `Y`, and the result is decoded back into `HM² X`.
pub fn mu_outside(mu: &dyn MuCandidate, f: &HmFn3) -> Result<HmFn2> {
    let mut elems: Vec<&Steps1> = Vec::new();
    let mut index: HashMap<&Steps1, usize> = HashMap::new();
    for middle in f.steps.values() {
        for g in middle.values() {
            index.entry(g).or_insert_with(|| {
                elems.push(g);
                elems.len() - 1
            });
        }
    }
    let k = elems.len();
    let labels = (0..k).map(|i| format!("y{i}")).collect();
    let mut dist = Vec::with_capacity(k * k);
    for a in &elems {
        for b in &elems {
            dist.push(integral_distance(&f.space, a, b));
        }
    }
    let y = FiniteSpace::new(labels, dist)?;
    let encoded = HmFn2 {
        space: y,
        steps: f.steps.map(|middle| middle.map(|g| Point(index[g]))),
    };
    let flat = mu.apply(&encoded)?;
    Ok(HmFn2 {
        space: f.space.clone(),
        steps: flat.steps().map(|p| elems[p.0].clone()),
    })
}

/// `F ↦ (s ↦ F(s)(s))`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Diagonal;

impl MuCandidate for Diagonal {
    fn name(&self) -> &str {
        "diagonal"
    }

    fn apply(&self, f: &HmFn2) -> Result<HmFn> {
        Ok(diagonal_flatten(f))
    }
}

/// `F ↦ F(0)`. Satisfies `μ∘ηH = 1` but not `μ∘Hη = 1`.
#[derive(Clone, Copy, Debug, Default)]
pub struct ConstantLeft;

impl MuCandidate for ConstantLeft {
    fn name(&self) -> &str {
        "constant-left"
    }

    fn apply(&self, f: &HmFn2) -> Result<HmFn> {
        f.evaluate(&Rat::zero())
    }
}

/// The diagonal flatten with its last piece moved to the first point of the
/// space. Not natural: the pinned point is not preserved by maps.
#[derive(Clone, Copy, Debug, Default)]
pub struct PinnedLast;

impl MuCandidate for PinnedLast {
    fn name(&self) -> &str {
        "pinned-last"
    }

    fn apply(&self, f: &HmFn2) -> Result<HmFn> {
        let flat = diagonal(&f.steps);
        let mut values = flat.values().to_vec();
        *values.last_mut().expect("nonempty") = Point(0);
        HmFn::from_pieces(&f.space, flat.breakpoints().to_vec(), values)
    }
}

pub const CANDIDATE_NAMES: [&str; 3] = ["diagonal", "constant-left", "pinned-last"];

pub fn candidate_by_name(name: &str) -> Option<Box<dyn MuCandidate>> {
    match name {
        "diagonal" => Some(Box::new(Diagonal)),
        "constant-left" => Some(Box::new(ConstantLeft)),
        "pinned-last" => Some(Box::new(PinnedLast)),
        _ => None,
    }
}
