//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use biphase::pgs::{solve, solve_with_observer, SolverConfig};
use biphase::regularized::{minmax_residual_norm, solve_regularized, RegularizationConfig};
use biphase::verification::{default_threshold, random_problem, RandomProblemOptions};
use biphase::{
    example1, example2, extract_free_boundary, laplacian, max_error, minmax_residual,
    oracle_minimize, Dim, Grid, Phase, SampledProblem,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn timed<R>(f: impl FnOnce() -> R) -> (R, Duration) {
    let start = Instant::now();
    let r = f();
    (r, start.elapsed())
}

fn ex1(n: usize) -> SampledProblem<f64> {
    example1()
        .sample(&Grid::<f64>::new(Dim::One, n).unwrap())
        .unwrap()
}

fn table_converged_errors() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for (n, target, tol) in [(20, 0.0668629, 2e-4), (65, 0.0022977, 5e-5)] {
        let grid = Grid::<f64>::new(Dim::One, n).unwrap();
        let prob = ex1(n);
        let cfg = SolverConfig {
            update_tol: 1e-12,
            residual_tol: 0.0,
            ..SolverConfig::default()
        };
        let (rep, t) = timed(|| solve(&prob, &cfg).unwrap());
        let err = max_error(&rep.u, &example1(), &grid).unwrap().max_error;
        let hit = (err - target).abs() <= tol && rep.converged() && t < Duration::from_secs(1);
        ok &= hit;
        notes.push(format!(
            "N={n}: error {err:.7e} (target {target} ± {tol:e}), {} sweeps, {t:.2?}",
            rep.sweeps
        ));
    }
    let msg = notes.join("; ");
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn table_monotone_in_sweeps() -> Outcome {
    let spec = example1::<f64>();
    let mults = [2usize, 4, 6, 8, 10];
    let mut notes = Vec::new();
    for n in [20usize, 65, 120, 175, 230] {
        let grid = Grid::<f64>::new(Dim::One, n).unwrap();
        let prob = ex1(n);
        let mut row = Vec::new();
        solve_with_observer(
            &prob,
            &SolverConfig::fixed_sweeps(10 * n),
            |sweep, tilde| {
                if sweep % n == 0 && mults.contains(&(sweep / n)) {
                    let u = prob.lift(tilde);
                    row.push(max_error(&u, &spec, &grid).unwrap().max_error);
                }
            },
        )
        .unwrap();
        if row.len() != mults.len() {
            return Err(format!(
                "N={n}: observed {} of {} checkpoints",
                row.len(),
                mults.len()
            ));
        }
        if let Some(w) = row.windows(2).find(|w| w[1] > w[0]) {
            return Err(format!("N={n}: error rose from {} to {}", w[0], w[1]));
        }
        notes.push(format!("N={n}: {:.4e}..{:.4e}", row[0], row[row.len() - 1]));
    }
    Ok(notes.join("; "))
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(20240601);
    let mut shapes: Vec<(Dim, usize)> = (2..=8).map(|n| (Dim::One, n)).collect();
    shapes.extend([(Dim::Two, 3), (Dim::Two, 4)]);
    let cfg = SolverConfig {
        update_tol: 1e-15,
        residual_tol: 1e-13,
        ..SolverConfig::default()
    };
    let (res, t) = timed(|| {
        let mut worst: f64 = 0.0;
        let mut trials = 0;
        for round in 0..12 {
            for &(dim, n) in &shapes {
                let grid = Grid::<f64>::new(dim, n).unwrap();
                let prob =
                    random_problem(grid, &mut rng, &RandomProblemOptions::default()).unwrap();
                let rep = solve(&prob, &cfg).unwrap();
                if !rep.converged() {
                    return Err(format!("round {round}: {dim:?} n={n} did not converge"));
                }
                let oracle = oracle_minimize(&prob).unwrap();
                worst = worst.max(rep.u.max_diff(&oracle).unwrap());
                trials += 1;
            }
        }
        Ok((worst, trials))
    });
    let (worst, trials) = res?;
    let msg = format!("{trials} problems, max discrepancy {worst:.3e}, {t:.2?}");
    if trials >= 100 && worst <= 1e-8 && t < Duration::from_secs(30) {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn energy_monotonicity() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    let cases = [
        ("example1 n=20", ex1(20)),
        (
            "example2 n=30",
            example2()
                .sample(&Grid::<f64>::new(Dim::Two, 30).unwrap())
                .unwrap(),
        ),
    ];
    for (name, prob) in cases {
        let rep = solve(&prob, &SolverConfig::default().with_record_energy(true)).unwrap();
        let audit = rep.energy_audit.unwrap();
        let good = audit.max_increase <= 1e-12 && audit.min_gap_slack >= -1e-12;
        ok &= good;
        notes.push(format!(
            "{name}: {} updates, max increase {:.3e}, min gap slack {:.3e}",
            audit.updates, audit.max_increase, audit.min_gap_slack
        ));
    }
    let msg = notes.join("; ");
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn residual_band() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut cases = vec![
        ex1(20),
        ex1(65),
        example2()
            .sample(&Grid::<f64>::new(Dim::Two, 30).unwrap())
            .unwrap(),
    ];
    for (dim, n) in [(Dim::One, 40), (Dim::Two, 12), (Dim::Two, 20)] {
        cases.push(
            random_problem(
                Grid::<f64>::new(dim, n).unwrap(),
                &mut rng,
                &RandomProblemOptions::default(),
            )
            .unwrap(),
        );
    }
    let mut worst_ratio: f64 = 0.0;
    for prob in &cases {
        let bound = 1e-10 * (1.0 + prob.max_lambda_sum());
        let cfg = SolverConfig {
            update_tol: 0.0,
            residual_tol: bound,
            ..SolverConfig::default()
        };
        let rep = solve(prob, &cfg).unwrap();
        if !rep.converged() {
            return Err(format!("{} did not reach the residual bound", prob.name()));
        }
        let res = minmax_residual(&rep.u, prob).unwrap().max_norm();
        worst_ratio = worst_ratio.max(res / bound);
        if res > bound {
            return Err(format!("{}: residual {res:e} above {bound:e}", prob.name()));
        }
        for k in prob.grid().interior() {
            let l = laplacian(&rep.u, k).unwrap();
            if l < -prob.lambda_minus()[k] - 1e-8 || l > prob.lambda_plus()[k] + 1e-8 {
                return Err(format!(
                    "{}: L_h u = {l} outside band at node {k}",
                    prob.name()
                ));
            }
        }
    }
    Ok(format!(
        "{} solutions, worst residual/bound {worst_ratio:.3}",
        cases.len()
    ))
}

fn regularization_bounds() -> Outcome {
    let prob = ex1(100);
    let (res, t) = timed(|| {
        let exact = solve(
            &prob,
            &SolverConfig {
                update_tol: 1e-15,
                residual_tol: 1e-14,
                ..SolverConfig::default()
            },
        )
        .unwrap()
        .u;
        let mut notes = Vec::new();
        let mut ok = true;
        for eps in [1e-2, 1e-3] {
            let reg = solve_regularized(&prob, &RegularizationConfig::new(eps)).unwrap();
            let diff = reg.u.max_diff(&exact).unwrap();
            let res = minmax_residual_norm(&reg.u, &prob);
            ok &= reg.converged() && diff <= eps + 1e-6 && res <= eps + 1e-8;
            notes.push(format!(
                "eps={eps:e}: diff {diff:.3e}, residual {res:.3e}, {} sweeps",
                reg.sweeps
            ));
        }
        (ok, notes.join("; "))
    });
    let (ok, notes) = res;
    let msg = format!("{notes}, {t:.2?}");
    if ok && t < Duration::from_secs(5) {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn free_boundary_location() -> Outcome {
    let mut notes = Vec::new();
    for n in [20usize, 65, 120] {
        let grid = Grid::<f64>::new(Dim::One, n).unwrap();
        let rep = solve(&ex1(n), &SolverConfig::default()).unwrap();
        let fb = extract_free_boundary(&rep.u, grid.h2());
        let h = grid.h();
        let far =
            |pts: &[[f64; 2]], at: f64| pts.iter().map(|p| (p[0] - at).abs()).fold(0.0, f64::max);
        let (dp, dm) = (
            far(&fb.positive_interface, 0.5),
            far(&fb.negative_interface, -0.5),
        );
        if fb.positive_interface.is_empty() || fb.negative_interface.is_empty() || dp > h || dm > h
        {
            return Err(format!(
                "n={n}: interfaces at distance {dp:e} / {dm:e}, h = {h}"
            ));
        }
        notes.push(format!("n={n}: {dp:.2e}/{dm:.2e} (h={h:.3e})"));
    }
    Ok(notes.join("; "))
}

fn example2_reproduction() -> Outcome {
    let grid = Grid::<f64>::new(Dim::Two, 100).unwrap();
    let prob = example2().sample(&grid).unwrap();
    let (rep, t) = timed(|| solve(&prob, &SolverConfig::fixed_sweeps(400)).unwrap());
    let mut bad = None;
    for (i, w) in rep.trace.residual.windows(2).enumerate() {
        // equal or near-equal consecutive values count as a plateau
        if w[1] - w[0] > 1e-14 {
            bad = Some((i + 2, w[0], w[1]));
            break;
        }
    }
    let fb = extract_free_boundary(&rep.u, default_threshold(&prob));
    let zero = fb.count(Phase::Zero, grid.interior());
    let last = rep.final_residual().unwrap();
    let msg = format!(
        "{} sweeps in {t:.2?}, final residual {last:.3e}, {zero} phase-0 nodes",
        rep.sweeps
    );
    match bad {
        Some((sweep, a, b)) => Err(format!(
            "{msg}; residual rose at sweep {sweep}: {a:e} -> {b:e}"
        )),
        None if zero == 0 || t >= Duration::from_secs(10) => Err(msg),
        None => Ok(msg),
    }
}

fn one_phase_degeneration() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut lowest = f64::INFINITY;
    for i in 0..20 {
        let (dim, n) = if i % 2 == 0 {
            (Dim::One, 10 + 3 * i)
        } else {
            (Dim::Two, 4 + i / 2)
        };
        let prob = random_problem(
            Grid::<f64>::new(dim, n).unwrap(),
            &mut rng,
            &RandomProblemOptions::nonnegative_boundary(),
        )
        .unwrap();
        let rep = solve(&prob, &SolverConfig::default()).unwrap();
        if !rep.converged() {
            return Err(format!("problem {i} did not converge"));
        }
        lowest = lowest.min(rep.u.values().iter().cloned().fold(f64::INFINITY, f64::min));
    }
    let msg = format!("20 problems, minimum value {lowest:e}");
    if lowest >= -1e-9 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("table converged errors", table_converged_errors),
        ("table monotone in sweeps", table_monotone_in_sweeps),
        ("oracle equivalence", oracle_equivalence),
        ("energy monotonicity", energy_monotonicity),
        ("residual band", residual_band),
        ("regularization bounds", regularization_bounds),
        ("free boundary location", free_boundary_location),
        ("example 2 reproduction", example2_reproduction),
        ("one-phase degeneration", one_phase_degeneration),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {detail}", i + 1);
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
