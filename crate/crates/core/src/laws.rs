//! Verification harness.
//!
//! Law checkers run a candidate multiplication against the unit,
//! associativity and naturality equations on seeded random inputs. The
//! staircase witnesses, the fiber oracle, the forcing chain and the
//! discontinuity probe reproduce the obstruction: any `μ` satisfying the unit
//! laws and naturality must send `ℬ_n` to `η D(1)` for every `n`, while `ℬ_n`
//! converges to `η HD(η D(0))`, whose image is `η D(0)`.
//!
//! Only the dense step-function part of `H` is represented. Every object in
//! the forcing argument is a step function, so the gap is witnessed there
//! exactly. Convergence is measured in iterated functional coordinates;
//! `d_hm2` is reported next to it.

use std::collections::BTreeSet;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gen;
use crate::hm::{
    d_hm, functional_eval, hm_map, support, support_criterion_check, support_membership_check,
    unit, Functional, HmFn, SpaceMap,
};
use crate::par::{filter_map_indices, map_indices, sample_rng, Exec};
use crate::rat::Rat;
use crate::space::{FiniteSpace, Point, TestFn, Window};
use crate::stepfn::grid_points;
use crate::tower::{
    d_hm2, eta_h, h2_map, h_eta, iterated_functional_eval, mu_inside, mu_outside, HmFn2, HmFn3,
    MuCandidate,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Failure {
    pub input: String,
    pub expected: String,
    pub actual: String,
}

impl Failure {
    pub fn new(input: impl Into<String>, expected: impl ToString, actual: impl ToString) -> Self {
        Failure {
            input: input.into(),
            expected: expected.to_string(),
            actual: actual.to_string(),
        }
    }
}

/// Outcome of one law over a batch of samples. `verdict` is `pass` exactly
/// when `failures` is empty; failures are sorted so reports do not depend on
/// scheduling.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LawReport {
    pub candidate: Option<String>,
    pub law: String,
    pub samples: u64,
    pub failures: Vec<Failure>,
    pub verdict: Verdict,
}

impl LawReport {
    pub fn new(
        candidate: Option<&str>,
        law: impl Into<String>,
        samples: u64,
        mut failures: Vec<Failure>,
    ) -> Self {
        failures.sort();
        let verdict = if failures.is_empty() {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        LawReport {
            candidate: candidate.map(str::to_owned),
            law: law.into(),
            samples,
            failures,
            verdict,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// How many random cases to draw, from which seed, and the largest grid
/// denominator for breakpoints (each case picks its own in `1..=grid`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Sampling {
    pub samples: u64,
    pub seed: u64,
    pub grid: usize,
    pub max_points: usize,
    pub exec: Exec,
}

impl Sampling {
    pub fn new(samples: u64, seed: u64) -> Self {
        Sampling {
            samples,
            seed,
            grid: 12,
            max_points: 5,
            exec: Exec::default(),
        }
    }

    pub fn with_grid(self, grid: usize) -> Self {
        Sampling { grid, ..self }
    }

    pub fn with_exec(self, exec: Exec) -> Self {
        Sampling { exec, ..self }
    }

    fn check(&self) -> Result<()> {
        if self.samples == 0 || self.grid == 0 || self.max_points == 0 {
            return Err(Error::InvalidArgument(
                "samples, grid and point count must be positive".into(),
            ));
        }
        Ok(())
    }

    /// Runs `case` on every sample index and gathers the failures.
    fn run<F>(&self, case: F) -> Vec<Failure>
    where
        F: Fn(&mut rand_chacha::ChaCha8Rng, usize) -> Vec<Failure> + Sync + Send,
    {
        let seed = self.seed;
        let grid = self.grid;
        map_indices(self.exec, self.samples, |i| {
            let mut rng = sample_rng(seed, i);
            let g = rng.gen_range(1..=grid);
            case(&mut rng, g)
        })
        .into_iter()
        .flatten()
        .collect()
    }
}

fn err_failure(input: &str, e: Error) -> Vec<Failure> {
    vec![Failure::new(input, "no error", e)]
}

// ----------------------------------------------------------------------------
// Coordinate lemmas and metric axioms

/// `p_(λ₁φ₁+λ₂φ₂)(a,b)(f) = λ₁ p_φ₁(a,b)(f) + λ₂ p_φ₂(a,b)(f)`.
pub fn check_linearity(sampling: &Sampling) -> Result<LawReport> {
    sampling.check()?;
    let max_points = sampling.max_points;
    let failures = sampling.run(|rng, grid| {
        let x = gen::random_space(rng, max_points);
        let (phi1, phi2) = (gen::random_testfn(rng, &x), gen::random_testfn(rng, &x));
        let (l1, l2) = (gen::random_rat(rng), gen::random_rat(rng));
        let w = gen::random_window(rng, grid);
        let f = HmFn::random(&x, grid, rng);
        let combo = TestFn::linear_combination(&l1, &phi1, &l2, &phi2).expect("same space");
        let lhs = Functional::new(combo, w.clone())
            .eval(&f)
            .expect("same space");
        let rhs = l1
            * Functional::new(phi1, w.clone())
                .eval(&f)
                .expect("same space")
            + l2 * Functional::new(phi2, w.clone())
                .eval(&f)
                .expect("same space");
        if lhs == rhs {
            vec![]
        } else {
            vec![Failure::new(format!("f={f} window={w}"), rhs, lhs)]
        }
    });
    Ok(LawReport::new(
        None,
        "coordinate-linearity",
        sampling.samples,
        failures,
    ))
}

/// `φ₁ <= φ₂` implies `p_φ₁(a,b)(f) <= p_φ₂(a,b)(f)`.
pub fn check_monotonicity(sampling: &Sampling) -> Result<LawReport> {
    sampling.check()?;
    let max_points = sampling.max_points;
    let failures = sampling.run(|rng, grid| {
        let x = gen::random_space(rng, max_points);
        let phi1 = gen::random_testfn(rng, &x);
        let bump = TestFn::new(&x, x.points().map(|_| gen::random_rat(rng).abs()).collect())
            .expect("one value per point");
        let phi2 =
            TestFn::linear_combination(&Rat::one(), &phi1, &Rat::one(), &bump).expect("same space");
        debug_assert!(phi1.le(&phi2));
        let w = gen::random_window(rng, grid);
        let f = HmFn::random(&x, grid, rng);
        let lo = Functional::new(phi1, w.clone())
            .eval(&f)
            .expect("same space");
        let hi = Functional::new(phi2, w.clone())
            .eval(&f)
            .expect("same space");
        if lo <= hi {
            vec![]
        } else {
            vec![Failure::new(
                format!("f={f} window={w}"),
                format!("<= {hi}"),
                lo,
            )]
        }
    });
    Ok(LawReport::new(
        None,
        "coordinate-monotonicity",
        sampling.samples,
        failures,
    ))
}

/// `p_φ(a,b)(HM h (f)) = p_(φ∘h)(a,b)(f)`.
pub fn check_coordinate_naturality(sampling: &Sampling) -> Result<LawReport> {
    sampling.check()?;
    let max_points = sampling.max_points;
    let failures = sampling.run(|rng, grid| {
        let x = gen::random_space(rng, max_points);
        let y = gen::random_space(rng, max_points);
        let h = gen::random_map(rng, &x, &y);
        let phi = gen::random_testfn(rng, &y);
        let w = gen::random_window(rng, grid);
        let f = HmFn::random(&x, grid, rng);
        let lhs = functional_eval(
            &Functional::new(phi.clone(), w.clone()),
            &hm_map(&h, &f).expect("map from x"),
        )
        .expect("same space");
        let pulled = h.pull_back(&phi).expect("phi on target");
        let rhs = functional_eval(&Functional::new(pulled, w.clone()), &f).expect("same space");
        if lhs == rhs {
            vec![]
        } else {
            vec![Failure::new(format!("f={f} window={w}"), rhs, lhs)]
        }
    });
    Ok(LawReport::new(
        None,
        "coordinate-naturality",
        sampling.samples,
        failures,
    ))
}

/// `p_φ(a,b)(η X (x)) = φ(x)`.
pub fn check_unit_coordinate(sampling: &Sampling) -> Result<LawReport> {
    sampling.check()?;
    let max_points = sampling.max_points;
    let failures = sampling.run(|rng, grid| {
        let x = gen::random_space(rng, max_points);
        let phi = gen::random_testfn(rng, &x);
        let w = gen::random_window(rng, grid);
        let p = gen::random_point(rng, &x);
        let e = unit(&x, p).expect("point of x");
        let got = Functional::new(phi.clone(), w.clone())
            .eval(&e)
            .expect("same space");
        if got == *phi.at(p) {
            vec![]
        } else {
            vec![Failure::new(
                format!("x={} window={w}", x.label(p)),
                phi.at(p),
                got,
            )]
        }
    });
    Ok(LawReport::new(
        None,
        "unit-coordinate",
        sampling.samples,
        failures,
    ))
}

fn metric_failures(
    input: String,
    fg: &Rat,
    gf: &Rat,
    fh: &Rat,
    hg: &Rat,
    equal: bool,
) -> Vec<Failure> {
    let mut out = Vec::new();
    if fg.is_negative() || *fg > Rat::one() {
        out.push(Failure::new(format!("range {input}"), "in [0,1]", fg));
    }
    if fg.is_zero() != equal {
        out.push(Failure::new(
            format!("indiscernibles {input}"),
            format!("zero iff equal ({equal})"),
            fg,
        ));
    }
    if fg != gf {
        out.push(Failure::new(format!("symmetry {input}"), fg, gf));
    }
    if *fg > fh + hg {
        out.push(Failure::new(
            format!("triangle {input}"),
            format!("<= {}", fh + hg),
            fg,
        ));
    }
    out
}

/// Metric axioms for `d_HM` on random triples.
pub fn check_d_hm_metric(sampling: &Sampling) -> Result<LawReport> {
    sampling.check()?;
    let max_points = sampling.max_points;
    let failures = sampling.run(|rng, grid| {
        let x = gen::random_space(rng, max_points);
        let f = HmFn::random(&x, grid, rng);
        // reuse f half the time so the zero case is exercised
        let g = if rng.gen_bool(0.25) {
            f.clone()
        } else {
            HmFn::random(&x, grid, rng)
        };
        let h = HmFn::random(&x, grid, rng);
        let d = |a: &HmFn, b: &HmFn| d_hm(a, b).expect("same space");
        metric_failures(
            format!("f={f} g={g} h={h}"),
            &d(&f, &g),
            &d(&g, &f),
            &d(&f, &h),
            &d(&h, &g),
            f == g,
        )
    });
    Ok(LawReport::new(
        None,
        "d_hm-metric",
        sampling.samples,
        failures,
    ))
}

/// Metric axioms for `d_hm2` on random triples.
pub fn check_d_hm2_metric(sampling: &Sampling) -> Result<LawReport> {
    sampling.check()?;
    let max_points = sampling.max_points.min(4);
    let failures = sampling.run(|rng, grid| {
        let grid = grid.min(6);
        let x = gen::random_space(rng, max_points);
        let f = HmFn2::random(&x, grid, rng);
        let g = if rng.gen_bool(0.25) {
            f.clone()
        } else {
            HmFn2::random(&x, grid, rng)
        };
        let h = HmFn2::random(&x, grid, rng);
        let d = |a: &HmFn2, b: &HmFn2| d_hm2(a, b).expect("same space");
        metric_failures(
            format!("F={f} G={g} H={h}"),
            &d(&f, &g),
            &d(&g, &f),
            &d(&f, &h),
            &d(&h, &g),
            f == g,
        )
    });
    Ok(LawReport::new(
        None,
        "d_hm2-metric",
        sampling.samples,
        failures,
    ))
}

/// The coordinate criteria for `f ∈ H B` agree with the piece scan. When the
/// support lies in `B`, test functions agreeing on `B` also give equal
/// coordinates.
pub fn check_support_criterion(sampling: &Sampling) -> Result<LawReport> {
    sampling.check()?;
    let max_points = sampling.max_points;
    let failures = sampling.run(|rng, grid| {
        let x = gen::random_space(rng, max_points);
        let f = HmFn::random(&x, grid, rng);
        let b: BTreeSet<Point> = x.points().filter(|_| rng.gen_bool(0.6)).collect();
        let scan = support(&f).is_subset(&b);
        let criterion = support_criterion_check(&f, &b);
        let input = || {
            let labels: Vec<&str> = b.iter().map(|&p| x.label(p)).collect();
            format!("f={f} B={{{}}}", labels.join(","))
        };
        let mut out = Vec::new();
        if scan != criterion {
            out.push(Failure::new(input(), scan, criterion));
        }
        if scan {
            // φ₁, φ₂ agree on B and are arbitrary off B
            let phi1 = gen::random_testfn(rng, &x);
            let values = x
                .points()
                .map(|p| {
                    if b.contains(&p) {
                        phi1.at(p).clone()
                    } else {
                        gen::random_rat(rng)
                    }
                })
                .collect();
            let phi2 = TestFn::new(&x, values).expect("one value per point");
            let w = gen::random_window(rng, grid);
            let v1 = Functional::new(phi1, w.clone())
                .eval(&f)
                .expect("same space");
            let v2 = Functional::new(phi2, w.clone())
                .eval(&f)
                .expect("same space");
            if v1 != v2 {
                out.push(Failure::new(format!("{} window={w}", input()), v1, v2));
            }
        }
        out
    });
    Ok(LawReport::new(
        None,
        "support-criterion",
        sampling.samples,
        failures,
    ))
}

/// The neighbourhood criterion for `x ∈ supp f` agrees with the piece scan.
pub fn check_support_membership(sampling: &Sampling) -> Result<LawReport> {
    sampling.check()?;
    let max_points = sampling.max_points;
    let failures = sampling.run(|rng, grid| {
        let x = gen::random_space(rng, max_points);
        let f = HmFn::random(&x, grid, rng);
        let p = gen::random_point(rng, &x);
        let scan = support(&f).contains(&p);
        match support_membership_check(&f, p) {
            Ok(w) if w.is_some() == scan => vec![],
            Ok(w) => vec![Failure::new(
                format!("f={f} x={}", x.label(p)),
                scan,
                format!("{w:?}"),
            )],
            Err(e) => err_failure(&format!("f={f}"), e),
        }
    });
    Ok(LawReport::new(
        None,
        "support-membership",
        sampling.samples,
        failures,
    ))
}

// ----------------------------------------------------------------------------
// Monad laws for a candidate

fn pick_space<'a, R: Rng>(rng: &mut R, spaces: &'a [FiniteSpace]) -> &'a FiniteSpace {
    &spaces[rng.gen_range(0..spaces.len())]
}

fn check_spaces(spaces: &[FiniteSpace]) -> Result<()> {
    if spaces.is_empty() {
        return Err(Error::InvalidArgument("no spaces to sample from".into()));
    }
    Ok(())
}

/// The spaces used by default for candidate law checks.
pub fn default_spaces() -> Vec<FiniteSpace> {
    let k2 = FiniteSpace::discrete(2).expect("n > 0");
    vec![
        FiniteSpace::discrete(1).expect("n > 0"),
        k2.clone(),
        FiniteSpace::discrete(3).expect("n > 0"),
        FiniteSpace::product(&k2, &k2),
    ]
}

/// `μ ∘ Hη = 1` and `μ ∘ ηH = 1` on random `f`.
pub fn check_unit_laws(
    mu: &dyn MuCandidate,
    spaces: &[FiniteSpace],
    sampling: &Sampling,
) -> Result<LawReport> {
    sampling.check()?;
    check_spaces(spaces)?;
    let failures = sampling.run(|rng, grid| {
        let x = pick_space(rng, spaces);
        let f = HmFn::random(x, grid, rng);
        let mut out = Vec::new();
        for (side, lifted) in [("mu.H(eta)", h_eta(&f)), ("mu.eta(H)", eta_h(&f))] {
            match mu.apply(&lifted) {
                Ok(got) if got == f => {}
                Ok(got) => out.push(Failure::new(format!("{side} f={f}"), &f, got)),
                Err(e) => out.extend(err_failure(&format!("{side} f={f}"), e)),
            }
        }
        out
    });
    Ok(LawReport::new(
        Some(mu.name()),
        "unit",
        sampling.samples,
        failures,
    ))
}

/// `μ ∘ μH = μ ∘ Hμ` on random elements of `HM³ X`.
pub fn check_associativity(
    mu: &dyn MuCandidate,
    spaces: &[FiniteSpace],
    sampling: &Sampling,
) -> Result<LawReport> {
    sampling.check()?;
    check_spaces(spaces)?;
    let failures = sampling.run(|rng, grid| {
        let x = pick_space(rng, spaces);
        let f = HmFn3::random(x, grid.min(4), rng);
        let both = mu_outside(mu, &f)
            .and_then(|g| mu.apply(&g))
            .and_then(|lhs| Ok((lhs, mu.apply(&mu_inside(mu, &f)?)?)));
        match both {
            Ok((lhs, rhs)) if lhs == rhs => vec![],
            Ok((lhs, rhs)) => vec![Failure::new(format!("F={}", f.to_text()), lhs, rhs)],
            Err(e) => err_failure(&format!("F={}", f.to_text()), e),
        }
    });
    Ok(LawReport::new(
        Some(mu.name()),
        "associativity",
        sampling.samples,
        failures,
    ))
}

/// `μ Y ∘ H²h = Hh ∘ μ X` for random maps `h: X -> Y` and random `F`.
pub fn check_naturality(mu: &dyn MuCandidate, sampling: &Sampling) -> Result<LawReport> {
    sampling.check()?;
    let max_points = sampling.max_points.min(4);
    let failures = sampling.run(|rng, grid| {
        let x = gen::random_space(rng, max_points);
        let y = gen::random_space(rng, max_points);
        let h = gen::random_map(rng, &x, &y);
        let f = HmFn2::random(&x, grid.min(8), rng);
        let sides = h2_map(&h, &f)
            .and_then(|g| mu.apply(&g))
            .and_then(|lhs| Ok((lhs, hm_map(&h, &mu.apply(&f)?)?)));
        let input = || {
            let images: Vec<&str> = h.assignment().iter().map(|&p| y.label(p)).collect();
            format!("h=[{}] F={f}", images.join(","))
        };
        match sides {
            Ok((lhs, rhs)) if lhs == rhs => vec![],
            Ok((lhs, rhs)) => vec![Failure::new(input(), rhs, lhs)],
            Err(e) => err_failure(&input(), e),
        }
    });
    Ok(LawReport::new(
        Some(mu.name()),
        "naturality",
        sampling.samples,
        failures,
    ))
}

// ----------------------------------------------------------------------------
// Staircase witnesses

/// The step functions of the obstruction for a fixed `n`.
///
/// Points of `K_n` are labelled `1..=n` and indexed `0..n`; block `i` is
/// `[(i-1)/n, i/n)`.
#[derive(Clone, Debug)]
pub struct Witnesses {
    pub n: usize,
    pub kn: FiniteSpace,
    pub kn2: FiniteSpace,
    pub d: FiniteSpace,
    /// `α(s) = (i;i)` on block `i`.
    pub alpha: HmFn,
    /// `β(s) = i` on block `i`.
    pub beta: HmFn,
    /// `α_i(s) = (i;j)` on block `j`.
    pub alpha_i: Vec<HmFn>,
    /// `𝒜_n(s) = α_i` on block `i`.
    pub a_n: HmFn2,
    /// `γ_i` is 1 on block `i` and 0 elsewhere.
    pub gamma: Vec<HmFn>,
    /// `ℬ_n(s) = γ_i` on block `i`.
    pub b_n: HmFn2,
    /// `f(i;j) = 1` iff `i = j`.
    pub collapse: SpaceMap,
    pub pr1: SpaceMap,
    pub pr2: SpaceMap,
}

/// `γ_1..γ_n` and `ℬ_n` over `D`.
fn block_indicators(kn: &FiniteSpace, d: &FiniteSpace) -> Result<(Vec<HmFn>, HmFn2)> {
    let gamma = kn
        .points()
        .map(|i| HmFn::from_grid(d, kn.points().map(|j| Point(usize::from(i == j))).collect()))
        .collect::<Result<Vec<_>>>()?;
    let b_n = HmFn2::from_grid(gamma.clone())?;
    Ok((gamma, b_n))
}

pub fn build_witnesses(n: usize) -> Result<Witnesses> {
    let kn = FiniteSpace::discrete(n)?;
    let kn2 = FiniteSpace::product(&kn, &kn);
    let d = FiniteSpace::two_point();
    let pair = |i: Point, j: Point| kn2.pair(i, j).expect("points of K_n");

    let alpha = HmFn::from_grid(&kn2, kn.points().map(|i| pair(i, i)).collect())?;
    let beta = HmFn::from_grid(&kn, kn.points().collect())?;
    let alpha_i = kn
        .points()
        .map(|i| HmFn::from_grid(&kn2, kn.points().map(|j| pair(i, j)).collect()))
        .collect::<Result<Vec<_>>>()?;
    let a_n = HmFn2::from_grid(alpha_i.clone())?;
    let (gamma, b_n) = block_indicators(&kn, &d)?;
    let collapse = SpaceMap::new(
        &kn2,
        &d,
        kn2.points()
            .map(|p| {
                let (i, j) = kn2.split(p).expect("point of product");
                Point(usize::from(i == j))
            })
            .collect(),
    )?;
    let pr1 = SpaceMap::projection(&kn2, 1)?;
    let pr2 = SpaceMap::projection(&kn2, 2)?;
    Ok(Witnesses {
        n,
        kn,
        kn2,
        d,
        alpha,
        beta,
        alpha_i,
        a_n,
        gamma,
        b_n,
        collapse,
        pr1,
        pr2,
    })
}

impl Witnesses {
    /// `𝒞₁ = H(η K_n)(β)`.
    pub fn c1(&self) -> HmFn2 {
        h_eta(&self.beta)
    }

    /// `𝒞₂ = η(H K_n)(β)`.
    pub fn c2(&self) -> HmFn2 {
        eta_h(&self.beta)
    }

    /// `η HD(η D(0))`, the limit of `ℬ_n`.
    pub fn limit(&self) -> HmFn2 {
        eta_h(&unit(&self.d, Point(0)).expect("0 ∈ D"))
    }
}

// ----------------------------------------------------------------------------
// Fiber oracle

pub const DEFAULT_FIBER_BUDGET: u64 = 20_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberOutcome {
    pub n: usize,
    pub grid: usize,
    pub enumerated: u64,
    /// `α` itself lies in the fiber.
    pub alpha_found: bool,
    /// Solutions other than `α`, as text.
    pub witnesses: Vec<String>,
    pub unique: bool,
}

/// Enumerates every step function `γ: [0,1) -> K_n × K_n` with breakpoints in
/// `(1/(n·m))ℤ` and keeps those with `HM pr_1 (γ) = HM pr_2 (γ) = β`.
/// Unique iff the only one is `α`. Refuses, rather than truncates, when the
/// `(n²)^(n·m)` assignments exceed `budget`.
pub fn fiber_uniqueness(n: usize, m: usize) -> Result<FiberOutcome> {
    fiber_uniqueness_with(n, m, DEFAULT_FIBER_BUDGET, Exec::default())
}

pub fn fiber_uniqueness_with(n: usize, m: usize, budget: u64, exec: Exec) -> Result<FiberOutcome> {
    if n == 0 || m == 0 {
        return Err(Error::InvalidArgument("n and m must be positive".into()));
    }
    let w = build_witnesses(n)?;
    let points = (n * n) as u64;
    let cells = n * m;
    let total = u32::try_from(cells)
        .ok()
        .and_then(|c| points.checked_pow(c))
        .filter(|&t| t <= budget)
        .ok_or_else(|| Error::BudgetExceeded {
            required: format!("{}^{}", points, cells),
            budget,
        })?;

    let partition = grid_points(cells);
    let solutions = filter_map_indices(exec, total, |mut idx| {
        let mut values = Vec::with_capacity(cells);
        for _ in 0..cells {
            values.push(Point((idx % points) as usize));
            idx /= points;
        }
        let gamma = HmFn::from_pieces(&w.kn2, partition.clone(), values).expect("grid partition");
        let p1 = hm_map(&w.pr1, &gamma).expect("map from K_n×K_n");
        if p1 != w.beta {
            return None;
        }
        let p2 = hm_map(&w.pr2, &gamma).expect("map from K_n×K_n");
        (p2 == w.beta).then_some(gamma)
    });

    let alpha_found = solutions.contains(&w.alpha);
    let mut witnesses: Vec<String> = solutions
        .iter()
        .filter(|g| **g != w.alpha)
        .map(HmFn::to_text)
        .collect();
    witnesses.sort();
    Ok(FiberOutcome {
        n,
        grid: m,
        enumerated: total,
        alpha_found,
        unique: alpha_found && witnesses.is_empty(),
        witnesses,
    })
}

impl FiberOutcome {
    pub fn to_report(&self) -> LawReport {
        let mut failures: Vec<Failure> = self
            .witnesses
            .iter()
            .map(|g| Failure::new(format!("gamma={g}"), "alpha only", "extra fiber element"))
            .collect();
        if !self.alpha_found {
            failures.push(Failure::new("alpha", "in fiber", "missing"));
        }
        LawReport::new(
            None,
            format!("fiber-uniqueness n={} m={}", self.n, self.grid),
            self.enumerated,
            failures,
        )
    }
}

// ----------------------------------------------------------------------------
// Forcing chain and discontinuity probe

/// Walks the forcing argument for `μ` at level `n`:
///
/// 1. `μ(𝒞₁) = μ(𝒞₂) = β` (unit laws);
/// 2. `HM pr_l (μ(𝒜_n)) = μ(H²pr_l (𝒜_n)) = β` (naturality along `pr_l`);
/// 3. `μ(𝒜_n) = α` (the fiber over `(β, β)` is `{α}`);
/// 4. `μ(ℬ_n) = HM f (μ(𝒜_n)) = η D(1)` (naturality along `f`).
///
/// Failures are tagged with the step they belong to.
pub fn forced_value_chain(n: usize, mu: &dyn MuCandidate) -> Result<LawReport> {
    let w = build_witnesses(n)?;
    let mut failures = Vec::new();
    let mut check =
        |step: &str, expected: Result<String>, actual: Result<String>| match (expected, actual) {
            (Ok(e), Ok(a)) if e == a => {}
            (Ok(e), Ok(a)) => failures.push(Failure::new(step, e, a)),
            (Err(e), _) | (_, Err(e)) => failures.push(Failure::new(step, "no error", e)),
        };
    let text = |r: Result<HmFn>| r.map(|f| f.to_text());

    // 1
    let beta = w.beta.to_text();
    check(
        "step 1: mu(C1) = beta",
        Ok(beta.clone()),
        text(mu.apply(&w.c1())),
    );
    check(
        "step 1: mu(C2) = beta",
        Ok(beta.clone()),
        text(mu.apply(&w.c2())),
    );

    // 2
    let mu_a = mu.apply(&w.a_n);
    for (l, pr) in [(1, &w.pr1), (2, &w.pr2)] {
        let projected = mu_a.clone().and_then(|a| hm_map(pr, &a));
        let via_square = h2_map(pr, &w.a_n).and_then(|c| mu.apply(&c));
        check(
            &format!("step 2: naturality along pr_{l} at A_n"),
            text(via_square),
            text(projected.clone()),
        );
        check(
            &format!("step 2: pr_{l}(mu(A_n)) = beta"),
            Ok(beta.clone()),
            text(projected),
        );
    }

    // 3: a step function in the fiber over (β, β) agrees with (β, β) = α a.e.
    check(
        "step 3: mu(A_n) = alpha",
        Ok(w.alpha.to_text()),
        text(mu_a.clone()),
    );
    if let Ok(outcome) = fiber_uniqueness_with(n, 1, 10_000, Exec::Sequential) {
        if !outcome.unique {
            check(
                "step 3: fiber over (beta, beta)",
                Ok("{alpha}".into()),
                Ok(outcome.witnesses.join("; ")),
            );
        }
    }

    // 4
    let mu_b = mu.apply(&w.b_n);
    let pushed = mu_a.and_then(|a| hm_map(&w.collapse, &a));
    check(
        "step 4: naturality along f at A_n",
        text(pushed),
        text(mu_b.clone()),
    );
    check(
        "step 4: mu(B_n) = eta_D(1)",
        Ok(unit(&w.d, Point(1))?.to_text()),
        text(mu_b),
    );

    Ok(LawReport::new(
        Some(mu.name()),
        format!("forced-value-chain n={n}"),
        4,
        failures,
    ))
}

/// One row of the discontinuity table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeRow {
    pub n: usize,
    /// `|Φ(ℬ_n) - Φ(L)|` for `Φ` the iterated coordinate of `id_D` over
    /// `(0,1)` inside and out.
    pub coordinate_distance: Rat,
    pub metric_distance: Rat,
    /// `d_HM(μ(ℬ_n), μ(L))`.
    pub image_gap: Rat,
}

pub fn discontinuity_probe(mu: &dyn MuCandidate, n_max: usize) -> Result<Vec<ProbeRow>> {
    probe_rows(mu, 1, n_max)
}

pub fn probe_rows(mu: &dyn MuCandidate, low: usize, high: usize) -> Result<Vec<ProbeRow>> {
    if low == 0 || low > high {
        return Err(Error::InvalidArgument(format!("bad n range {low}:{high}")));
    }
    let d = FiniteSpace::two_point();
    let id = TestFn::new(&d, vec![Rat::zero(), Rat::one()])?;
    let full = Window::full();
    let limit = eta_h(&unit(&d, Point(0))?);
    let limit_coord = iterated_functional_eval(&id, &full, &full, &limit)?;
    let mu_limit = mu.apply(&limit)?;
    (low..=high)
        .map(|n| {
            let (_, b_n) = block_indicators(&FiniteSpace::discrete(n)?, &d)?;
            let coord = iterated_functional_eval(&id, &full, &full, &b_n)?;
            Ok(ProbeRow {
                n,
                coordinate_distance: (coord - &limit_coord).abs(),
                metric_distance: d_hm2(&b_n, &limit)?,
                image_gap: d_hm(&mu.apply(&b_n)?, &mu_limit)?,
            })
        })
        .collect()
}

/// The probe's pass condition: `metric_distance = coordinate_distance = 1/n`
/// and `image_gap = 1` on every row.
pub fn probe_report(candidate: &str, rows: &[ProbeRow]) -> LawReport {
    let mut failures = Vec::new();
    for row in rows {
        let inv = Rat::new(1, row.n as i64).expect("n > 0");
        let input = format!("n={}", row.n);
        if row.metric_distance != inv {
            failures.push(Failure::new(
                format!("{input} metric_distance"),
                &inv,
                &row.metric_distance,
            ));
        }
        if row.coordinate_distance != inv {
            failures.push(Failure::new(
                format!("{input} coordinate_distance"),
                &inv,
                &row.coordinate_distance,
            ));
        }
        if row.image_gap != Rat::one() {
            failures.push(Failure::new(
                format!("{input} image_gap"),
                1,
                &row.image_gap,
            ));
        }
    }
    LawReport::new(
        Some(candidate),
        "discontinuity-probe",
        rows.len() as u64,
        failures,
    )
}

/// Convergence of `ℬ_n` to `η HD(η D(0))` in iterated coordinates: for both
/// point indicators on `D` and every pair of grid windows `(a,b)`, `(c,d)`,
/// the coordinate gap is at most `1/(n(b-a))`, which tends to 0 as `n` grows.
pub fn check_probe_convergence(low: usize, high: usize, grid: usize) -> Result<LawReport> {
    if low == 0 || low > high || grid == 0 {
        return Err(Error::InvalidArgument("bad convergence range".into()));
    }
    let d = FiniteSpace::two_point();
    let g = grid_points(grid);
    let mut windows = Vec::new();
    for (i, a) in g.iter().enumerate() {
        for b in &g[i + 1..] {
            windows.push(Window::new(a.clone(), b.clone())?);
        }
    }
    let indicators = [
        TestFn::indicator(&d, Point(0))?,
        TestFn::indicator(&d, Point(1))?,
    ];
    let limit = eta_h(&unit(&d, Point(0))?);
    let mut failures = Vec::new();
    let mut checked = 0u64;
    for n in low..=high {
        let (_, b_n) = block_indicators(&FiniteSpace::discrete(n)?, &d)?;
        for phi in &indicators {
            for inner in &windows {
                let bound = Rat::one().checked_div(&(Rat::from_int(n as i64) * inner.length()))?;
                for outer in &windows {
                    checked += 1;
                    let gap = (iterated_functional_eval(phi, inner, outer, &b_n)?
                        - iterated_functional_eval(phi, inner, outer, &limit)?)
                    .abs();
                    if gap > bound {
                        failures.push(Failure::new(
                            format!("n={n} phi={:?} inner={inner} outer={outer}", phi.values()),
                            format!("<= {bound}"),
                            gap,
                        ));
                    }
                }
            }
        }
    }
    Ok(LawReport::new(None, "probe-convergence", checked, failures))
}
