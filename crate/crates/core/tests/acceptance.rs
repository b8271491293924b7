//! Acceptance criteria, one line each. Runs without the libtest harness so the
//! lines show up on every `cargo test`.

use std::process::{Command as Proc, ExitCode};
use std::time::{Duration, Instant};

use hmcheck::cli::{emit_report, execute, Command, Format, RunConfig};
use hmcheck::laws::{self, LawReport, Sampling};
use hmcheck::rat::Rat;
use hmcheck::tower::{ConstantLeft, Diagonal};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn all_pass(reports: &[LawReport]) -> Outcome {
    let bad: Vec<_> = reports.iter().filter(|r| !r.passed()).collect();
    if bad.is_empty() {
        let names: Vec<_> = reports
            .iter()
            .map(|r| format!("{}x{}", r.law, r.samples))
            .collect();
        Ok(names.join(", "))
    } else {
        Err(bad
            .iter()
            .map(|r| format!("{}: {:?}", r.law, r.failures.first()))
            .collect::<Vec<_>>()
            .join("; "))
    }
}

fn within(limit: Duration, elapsed: Duration) -> Outcome {
    if elapsed <= limit {
        Ok(String::new())
    } else {
        Err(format!("took {elapsed:?}, limit {limit:?}"))
    }
}

fn probe() -> Outcome {
    let start = Instant::now();
    let rows = laws::discontinuity_probe(&Diagonal, 32).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    if rows.len() != 32 {
        return Err(format!("{} rows", rows.len()));
    }
    for row in &rows {
        let inv = Rat::new(1, row.n as i64).unwrap();
        if row.metric_distance != inv
            || row.coordinate_distance != inv
            || row.image_gap != Rat::one()
        {
            return Err(format!(
                "n={}: metric {} coordinate {} gap {}",
                row.n, row.metric_distance, row.coordinate_distance, row.image_gap
            ));
        }
    }
    within(Duration::from_secs(1), elapsed)?;
    Ok(format!("32 rows exact in {elapsed:?}"))
}

fn forced_chain() -> Outcome {
    let start = Instant::now();
    let mut reports = Vec::new();
    for n in 1..=16 {
        reports.push(laws::forced_value_chain(n, &Diagonal).map_err(|e| e.to_string())?);
    }
    let elapsed = start.elapsed();
    all_pass(&reports)?;
    within(Duration::from_secs(5), elapsed)?;
    Ok(format!("n=1..16 all steps in {elapsed:?}"))
}

fn fiber() -> Outcome {
    let start = Instant::now();
    let mut seen = Vec::new();
    for (n, m) in [(1, 1), (2, 2), (2, 3), (3, 2)] {
        let out = laws::fiber_uniqueness(n, m).map_err(|e| e.to_string())?;
        if !out.unique || !out.alpha_found {
            return Err(format!("(n={n}, m={m}) witnesses {:?}", out.witnesses));
        }
        seen.push(format!("({n},{m}):{}", out.enumerated));
    }
    let elapsed = start.elapsed();
    within(Duration::from_secs(30), elapsed)?;
    Ok(format!("unique for {} in {elapsed:?}", seen.join(" ")))
}

fn linearity_monotonicity() -> Outcome {
    let s = Sampling::new(1000, 4);
    all_pass(&[
        laws::check_linearity(&s).map_err(|e| e.to_string())?,
        laws::check_monotonicity(&s).map_err(|e| e.to_string())?,
    ])
}

fn coordinates() -> Outcome {
    let s = Sampling::new(1000, 5);
    all_pass(&[
        laws::check_coordinate_naturality(&s).map_err(|e| e.to_string())?,
        laws::check_unit_coordinate(&s).map_err(|e| e.to_string())?,
    ])
}

fn candidate_laws() -> Outcome {
    let spaces = laws::default_spaces();
    let e = |e: hmcheck::Error| e.to_string();
    let diag = [
        laws::check_unit_laws(&Diagonal, &spaces, &Sampling::new(500, 6)).map_err(e)?,
        laws::check_associativity(&Diagonal, &spaces, &Sampling::new(200, 6)).map_err(e)?,
        laws::check_naturality(&Diagonal, &Sampling::new(500, 6)).map_err(e)?,
    ];
    let ok = all_pass(&diag)?;
    let left = [
        laws::check_unit_laws(&ConstantLeft, &spaces, &Sampling::new(500, 6)).map_err(e)?,
        laws::check_associativity(&ConstantLeft, &spaces, &Sampling::new(200, 6)).map_err(e)?,
        laws::check_naturality(&ConstantLeft, &Sampling::new(500, 6)).map_err(e)?,
    ];
    let caught = left
        .iter()
        .find(|r| !r.passed())
        .ok_or("constant-left passed every law")?;
    let witness = &caught.failures[0];
    Ok(format!(
        "diagonal {ok}; constant-left fails {} at {} (expected {}, got {})",
        caught.law, witness.input, witness.expected, witness.actual
    ))
}

fn metrics() -> Outcome {
    let s = Sampling::new(500, 7);
    all_pass(&[
        laws::check_d_hm_metric(&s).map_err(|e| e.to_string())?,
        laws::check_d_hm2_metric(&s).map_err(|e| e.to_string())?,
    ])
}

fn support() -> Outcome {
    let s = Sampling::new(500, 8);
    all_pass(&[
        laws::check_support_criterion(&s).map_err(|e| e.to_string())?,
        laws::check_support_membership(&s).map_err(|e| e.to_string())?,
    ])
}

fn determinism() -> Outcome {
    let config = RunConfig {
        command: Command::All,
        n_range: (1, 4),
        samples: 50,
        seed: 42,
        ..RunConfig::default()
    };
    let a = emit_report(&execute(&config).map_err(|e| e.to_string())?, Format::Json);
    let b = emit_report(&execute(&config).map_err(|e| e.to_string())?, Format::Json);
    if a != b {
        return Err("library reports differ".into());
    }

    let bin = env!("CARGO_BIN_EXE_hmcheck");
    let args = ["all", "--n-range", "1:4", "--samples", "50", "--seed", "42"];
    let first = Proc::new(bin)
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    let second = Proc::new(bin)
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if first.status.code() != Some(0) {
        return Err(format!("hmcheck exited {:?}", first.status.code()));
    }
    if first.stdout != second.stdout {
        return Err("binary reports differ".into());
    }
    Ok(format!("{} identical bytes", first.stdout.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("discontinuity probe", probe),
        ("forced value chain", forced_chain),
        ("fiber uniqueness", fiber),
        ("linearity and monotonicity", linearity_monotonicity),
        ("coordinate naturality and unit", coordinates),
        ("candidate laws", candidate_laws),
        ("metric axioms", metrics),
        ("support", support),
        ("seeded determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {} PASS {name} ({secs:.2}s) {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} FAIL {name} ({secs:.2}s) {detail}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
