//! The Hartman-Mycielski layer over a finite space: elements of `HM X`, the
//! integral metric, window-average coordinates, the functor action on maps,
//! the unit, and support.

use std::collections::BTreeSet;
use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::rat::Rat;
use crate::space::{FiniteSpace, Point, TestFn, Window};
use crate::stepfn::{common_refinement, random_stepfn, StepFn};
use crate::text;

/// An element of `HM X`: a canonical step function `[0,1) -> X`.
#[derive(Clone, PartialEq, Eq)]
pub struct HmFn {
    space: FiniteSpace,
    steps: StepFn<Point>,
}

impl HmFn {
    pub fn new(space: &FiniteSpace, steps: StepFn<Point>) -> Result<Self> {
        for &p in steps.values() {
            space.check_point(p)?;
        }
        Ok(HmFn {
            space: space.clone(),
            steps,
        })
    }

    pub fn from_pieces(space: &FiniteSpace, breaks: Vec<Rat>, values: Vec<Point>) -> Result<Self> {
        Self::new(space, StepFn::from_pieces(breaks, values)?)
    }

    /// Value `cells[i]` on `[i/m, (i+1)/m)`.
    pub fn from_grid(space: &FiniteSpace, cells: Vec<Point>) -> Result<Self> {
        Self::new(space, StepFn::from_grid(cells)?)
    }

    pub fn random<R: Rng + ?Sized>(space: &FiniteSpace, grid: usize, rng: &mut R) -> Self {
        let n = space.len();
        let steps = random_stepfn(rng, grid, |r| Point(r.gen_range(0..n)));
        HmFn {
            space: space.clone(),
            steps,
        }
    }

    pub(crate) fn from_parts_unchecked(space: FiniteSpace, steps: StepFn<Point>) -> Self {
        HmFn { space, steps }
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn steps(&self) -> &StepFn<Point> {
        &self.steps
    }

    pub fn into_steps(self) -> StepFn<Point> {
        self.steps
    }

    pub fn pieces(&self) -> usize {
        self.steps.pieces()
    }

    pub fn evaluate(&self, t: &Rat) -> Result<Point> {
        self.steps.evaluate(t).copied()
    }

    pub fn to_text(&self) -> String {
        text::encode_hm(self)
    }

    pub fn parse(space: &FiniteSpace, s: &str) -> Result<Self> {
        text::decode_hm(space, s)
    }
}

impl fmt::Debug for HmFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HmFn[{}]", self.to_text())
    }
}

impl fmt::Display for HmFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

pub(crate) fn same_space(a: &FiniteSpace, b: &FiniteSpace) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::SpaceMismatch)
    }
}

/// `∫₀¹ d(f(t), g(t)) dt` for raw step functions over `space`.
pub(crate) fn integral_distance(space: &FiniteSpace, f: &StepFn<Point>, g: &StepFn<Point>) -> Rat {
    common_refinement(f, g)
        .into_iter()
        .filter(|c| c.left != c.right)
        .map(|c| c.length() * space.dist(*c.left, *c.right))
        .sum()
}

/// The Hartman-Mycielski metric `d_HM(f,g) = ∫₀¹ d(f(t), g(t)) dt`.
pub fn d_hm(f: &HmFn, g: &HmFn) -> Result<Rat> {
    same_space(&f.space, &g.space)?;
    Ok(integral_distance(&f.space, &f.steps, &g.steps))
}

/// Window average `(1/(b-a)) ∫_a^b φ(f(t)) dt` of a raw step function.
pub(crate) fn window_average(phi: &TestFn, window: &Window, f: &StepFn<Point>) -> Rat {
    f.integrate(window, |p| phi.at(*p).clone())
        .checked_div(&window.length())
        .expect("windows have positive length")
}

/// A functional coordinate `φ_(a,b)` on `HM X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Functional {
    phi: TestFn,
    window: Window,
}

impl Functional {
    pub fn new(phi: TestFn, window: Window) -> Self {
        Functional { phi, window }
    }

    pub fn phi(&self) -> &TestFn {
        &self.phi
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn space(&self) -> &FiniteSpace {
        self.phi.space()
    }

    pub fn eval(&self, f: &HmFn) -> Result<Rat> {
        functional_eval(self, f)
    }
}

pub fn functional_eval(functional: &Functional, f: &HmFn) -> Result<Rat> {
    same_space(functional.space(), &f.space)?;
    Ok(window_average(
        &functional.phi,
        &functional.window,
        &f.steps,
    ))
}

/// `ρ(f,g) = max_i |φ_i(f) - φ_i(g)|` over a nonempty list of coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pseudometric {
    functionals: Vec<Functional>,
}

impl Pseudometric {
    pub fn new(functionals: Vec<Functional>) -> Result<Self> {
        let first = functionals
            .first()
            .ok_or_else(|| Error::InvalidArgument("pseudometric needs a functional".into()))?;
        for f in &functionals[1..] {
            same_space(first.space(), f.space())?;
        }
        Ok(Pseudometric { functionals })
    }

    pub fn functionals(&self) -> &[Functional] {
        &self.functionals
    }

    pub fn eval(&self, f: &HmFn, g: &HmFn) -> Result<Rat> {
        pseudometric_eval(self, f, g)
    }
}

pub fn pseudometric_eval(rho: &Pseudometric, f: &HmFn, g: &HmFn) -> Result<Rat> {
    let mut best = Rat::zero();
    for functional in &rho.functionals {
        let gap = (functional_eval(functional, f)? - functional_eval(functional, g)?).abs();
        best = best.max_of(&gap);
    }
    Ok(best)
}

/// A map of finite spaces. Every such map is continuous.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceMap {
    source: FiniteSpace,
    target: FiniteSpace,
    assignment: Vec<Point>,
}

impl SpaceMap {
    pub fn new(source: &FiniteSpace, target: &FiniteSpace, assignment: Vec<Point>) -> Result<Self> {
        if assignment.len() != source.len() {
            return Err(Error::InvalidArgument(format!(
                "map assigns {} images for {} source points",
                assignment.len(),
                source.len()
            )));
        }
        for &p in &assignment {
            target.check_point(p)?;
        }
        Ok(SpaceMap {
            source: source.clone(),
            target: target.clone(),
            assignment,
        })
    }

    pub fn identity(space: &FiniteSpace) -> Self {
        SpaceMap {
            source: space.clone(),
            target: space.clone(),
            assignment: space.points().collect(),
        }
    }

    /// `pr_1` (`which = 1`) or `pr_2` (`which = 2`) of a product space.
    pub fn projection(product: &FiniteSpace, which: u8) -> Result<Self> {
        let (x, y) = product
            .factors()
            .ok_or_else(|| Error::InvalidSpace("not a product space".into()))?;
        let target = match which {
            1 => x,
            2 => y,
            _ => return Err(Error::InvalidArgument(format!("no projection pr_{which}"))),
        };
        let assignment = product
            .points()
            .map(|p| {
                let (a, b) = product.split(p).expect("point of product");
                if which == 1 {
                    a
                } else {
                    b
                }
            })
            .collect();
        SpaceMap::new(product, target, assignment)
    }

    pub fn source(&self) -> &FiniteSpace {
        &self.source
    }

    pub fn target(&self) -> &FiniteSpace {
        &self.target
    }

    pub fn assignment(&self) -> &[Point] {
        &self.assignment
    }

    pub fn apply(&self, p: Point) -> Point {
        self.assignment[p.0]
    }

    /// `outer ∘ self`.
    pub fn then(&self, outer: &SpaceMap) -> Result<SpaceMap> {
        same_space(&self.target, &outer.source)?;
        Ok(SpaceMap {
            source: self.source.clone(),
            target: outer.target.clone(),
            assignment: self.assignment.iter().map(|&p| outer.apply(p)).collect(),
        })
    }

    /// `d(h(x), h(y)) <= d(x, y)` for all pairs.
    pub fn is_nonexpanding(&self) -> bool {
        self.source.points().all(|p| {
            self.source
                .points()
                .all(|q| self.target.dist(self.apply(p), self.apply(q)) <= self.source.dist(p, q))
        })
    }

    /// Pulls a test function on the target back to `φ ∘ h` on the source.
    pub fn pull_back(&self, phi: &TestFn) -> Result<TestFn> {
        same_space(&self.target, phi.space())?;
        TestFn::new(
            &self.source,
            self.assignment.iter().map(|&p| phi.at(p).clone()).collect(),
        )
    }
}

/// `HM h (f) = h ∘ f`.
pub fn hm_map(h: &SpaceMap, f: &HmFn) -> Result<HmFn> {
    same_space(&h.source, &f.space)?;
    Ok(HmFn {
        space: h.target.clone(),
        steps: f.steps.map(|&p| h.apply(p)),
    })
}

/// `η X (x)`: the constant function at `x`.
pub fn unit(space: &FiniteSpace, x: Point) -> Result<HmFn> {
    space.check_point(x)?;
    Ok(HmFn {
        space: space.clone(),
        steps: StepFn::constant(x),
    })
}

/// Points attained on a set of positive measure. Every canonical piece has
/// positive length, so this is just the set of piece values.
pub fn support(f: &HmFn) -> BTreeSet<Point> {
    f.steps.values().iter().copied().collect()
}

/// Decides `f ∈ H B` through coordinates: every indicator of a point outside
/// `B` must average to zero on every window spanned by the breakpoints of `f`.
pub fn support_criterion_check(f: &HmFn, b: &BTreeSet<Point>) -> bool {
    let breaks = f.steps.breakpoints();
    let mut windows = Vec::new();
    for (i, lo) in breaks.iter().enumerate() {
        for hi in &breaks[i + 1..] {
            windows.push(Window::new(lo.clone(), hi.clone()).expect("increasing breakpoints"));
        }
    }
    f.space.points().filter(|p| !b.contains(p)).all(|p| {
        let phi = TestFn::indicator(&f.space, p).expect("point of the space");
        windows
            .iter()
            .all(|w| window_average(&phi, w, &f.steps).is_zero())
    })
}

/// Decides `x ∈ supp f` through coordinates. In a finite discrete space the
/// smallest neighbourhood of `x` is `{x}` and the indicator of `x` is the
/// pointwise least `[0,1]`-valued test function equal to 1 there, so
/// `p_ψ(0,1)(f) >= a` for every admissible ψ as soon as it holds for the
/// indicator. Returns the witness `a` (the measure of `f^{-1}(x)`) when `x` is
/// in the support.
pub fn support_membership_check(f: &HmFn, x: Point) -> Result<Option<Rat>> {
    f.space.check_point(x)?;
    let a = f.steps.measure_preimage(&[x], &Window::full());
    if !a.is_positive() {
        return Ok(None);
    }
    let psi = TestFn::indicator(&f.space, x)?;
    let coord = window_average(&psi, &Window::full(), &f.steps);
    Ok((coord >= a).then_some(a))
}

/// The least `n` with `f ∈ HM_n`.
pub fn hm_n_membership(f: &HmFn) -> usize {
    f.steps.pieces()
}
