use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context, Result};
use biphase::pgs::{solve_with_observer, SolverConfig};
use biphase::regularized::{minmax_residual_norm, solve_regularized};
use biphase::verification::{
    default_threshold, random_problem, RandomProblemOptions, ORACLE_MAX_INTERIOR,
};
use biphase::{
    difference_bound, example1, example2, extract_free_boundary, max_error, oracle_minimize, pgs,
    residual_bound, Dim, Grid64, ProblemConfig, ProblemSpec64, RegularizationConfig,
    SolverConfig64,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use crate::manifest::RunManifest;
use crate::output::{Cell, Format, Table};
use crate::{
    CompareArgs, OracleArgs, ProblemArgs, SolveArgs, TableArgs, EXIT_CHECK_FAILED, EXIT_OK,
    EXIT_SWEEP_LIMIT,
};

const AGREEMENT_TOL: f64 = 1e-8;

fn load_problem(args: &ProblemArgs) -> Result<(String, ProblemSpec64)> {
    match (args.example, &args.config) {
        (Some(1), _) => Ok(("example1".into(), example1())),
        (Some(2), _) => Ok(("example2".into(), example2())),
        (Some(other), _) => bail!("unknown example {other}"),
        (None, Some(path)) => {
            let text =
                fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let cfg = ProblemConfig::parse(&text)
                .with_context(|| format!("parsing {}", path.display()))?;
            let name = path.display().to_string();
            Ok((name.clone(), cfg.to_spec(name)))
        }
        (None, None) => bail!("one of --example or --config is required"),
    }
}

fn grid_for(spec: &ProblemSpec64, n: usize) -> Result<Grid64> {
    Ok(Grid64::new(spec.dim(), n)?)
}

fn tight_config() -> SolverConfig64 {
    SolverConfig {
        update_tol: 1e-15,
        residual_tol: 1e-14,
        ..SolverConfig::default()
    }
}

pub fn solve(args: &SolveArgs) -> Result<i32> {
    let (name, spec) = load_problem(&args.problem)?;
    let grid = grid_for(&spec, args.n)?;
    let prob = spec.sample(&grid)?;
    let cfg = match args.fixed_iters {
        Some(m) => SolverConfig::fixed_sweeps(m),
        None => SolverConfig {
            max_sweeps: args.max_sweeps,
            update_tol: args.tol,
            ..SolverConfig::default()
        },
    }
    .with_record_energy(true);
    let rep = pgs::solve(&prob, &cfg)?;

    fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    let ext = args.format.extension();
    let path = |stem: &str| args.out.join(format!("{stem}.{ext}"));

    let mut field = Table::new(&["i", "j", "x", "y", "u"]);
    for k in 0..grid.node_count() {
        let [i, j] = grid.multi(k);
        let [x, y] = grid.position(k);
        field.push(vec![
            i.into(),
            j.into(),
            x.into(),
            y.into(),
            rep.u.get(k).into(),
        ]);
    }
    let mut trace = Table::new(&["sweep", "max_update", "residual", "energy"]);
    for s in 0..rep.sweeps {
        trace.push(vec![
            (s + 1).into(),
            rep.trace.max_update[s].into(),
            rep.trace.residual[s].into(),
            rep.trace.energy.get(s).copied().into(),
        ]);
    }
    let tau = default_threshold(&prob);
    let fb = extract_free_boundary(&rep.u, tau);
    let mut interfaces = Table::new(&["interface", "x", "y"]);
    for (label, pts) in [
        ("positive", &fb.positive_interface),
        ("negative", &fb.negative_interface),
    ] {
        for p in pts {
            interfaces.push(vec![label.into(), p[0].into(), p[1].into()]);
        }
    }

    let files = [
        ("field", &field),
        ("trace", &trace),
        ("free_boundary", &interfaces),
    ];
    let mut manifest = RunManifest::new(
        "solve",
        &name,
        vec![args.n],
        json!({
            "max_sweeps": cfg.max_sweeps,
            "update_tol": cfg.update_tol,
            "residual_tol": cfg.residual_tol,
            "fixed_iters": args.fixed_iters,
            "initial_guess": "zero-interior",
            "threshold": tau,
            "format": ext,
        }),
    );
    for (stem, table) in files {
        let p = path(stem);
        table.write(&p, args.format)?;
        manifest.outputs.push(p);
    }
    manifest.write(&args.out.join("manifest.json"))?;

    println!(
        "{}: n={} {} after {} sweeps, residual {:e}",
        name,
        args.n,
        rep.termination.as_str(),
        rep.sweeps,
        rep.final_residual().unwrap_or(0.0)
    );
    Ok(if args.fixed_iters.is_some() || rep.converged() {
        EXIT_OK
    } else {
        EXIT_SWEEP_LIMIT
    })
}

fn emit(table: &Table, out: Option<&Path>, format: Format, manifest: RunManifest) -> Result<()> {
    match out {
        Some(p) => {
            table.write(p, format)?;
            let mut manifest = manifest;
            manifest.outputs.push(p.to_path_buf());
            manifest.write(&manifest_path(p))?;
        }
        None => print!("{}", table.render(format)),
    }
    Ok(())
}

fn manifest_path(p: &Path) -> PathBuf {
    let mut s = p.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

pub fn table(args: &TableArgs) -> Result<i32> {
    let (name, spec) = load_problem(&args.problem)?;
    ensure!(spec.has_exact(), "problem {name} has no exact solution");
    ensure!(!args.n_list.is_empty(), "--n-list is empty");
    ensure!(
        args.iter_mults.iter().all(|&m| m > 0),
        "--iter-mults must be positive"
    );
    let max_mult = args.iter_mults.iter().copied().max().unwrap_or(0);

    let columns: Vec<(Vec<f64>, Option<f64>)> = args
        .n_list
        .par_iter()
        .map(|&n| -> Result<_> {
            let grid = grid_for(&spec, n)?;
            let prob = spec.sample(&grid)?;
            let mut at_sweep = vec![f64::NAN; max_mult * n + 1];
            solve_with_observer(
                &prob,
                &SolverConfig::fixed_sweeps(max_mult * n),
                |s, tilde| {
                    if s % n == 0 && args.iter_mults.contains(&(s / n)) {
                        at_sweep[s] = max_error(&prob.lift(tilde), &spec, &grid)
                            .unwrap()
                            .max_error;
                    }
                },
            )?;
            let row = args.iter_mults.iter().map(|&m| at_sweep[m * n]).collect();
            let converged = if args.converged {
                let cfg = SolverConfig {
                    update_tol: 1e-12,
                    residual_tol: 0.0,
                    ..SolverConfig::default()
                };
                let rep = pgs::solve(&prob, &cfg)?;
                Some(max_error(&rep.u, &spec, &grid)?.max_error)
            } else {
                None
            };
            Ok((row, converged))
        })
        .collect::<Result<_>>()?;

    let mut header = vec!["sweeps".to_string()];
    header.extend(args.n_list.iter().map(|n| format!("N={n}")));
    let mut out = Table {
        header,
        rows: Vec::new(),
    };
    for (r, m) in args.iter_mults.iter().enumerate() {
        let mut row = vec![Cell::Text(format!("{m}N"))];
        row.extend(columns.iter().map(|c| Cell::Num(c.0[r])));
        out.push(row);
    }
    if args.converged {
        let mut row = vec![Cell::Text("converged".into())];
        row.extend(columns.iter().map(|c| Cell::from(c.1)));
        out.push(row);
    }
    let manifest = RunManifest::new(
        "table",
        &name,
        args.n_list.clone(),
        json!({
            "iter_mults": args.iter_mults,
            "converged": args.converged,
            "converged_update_tol": 1e-12,
            "initial_guess": "zero-interior",
        }),
    );
    emit(&out, args.out.as_deref(), args.format, manifest)?;
    Ok(EXIT_OK)
}

pub fn compare_regularized(args: &CompareArgs) -> Result<i32> {
    let (name, spec) = load_problem(&args.problem)?;
    ensure!(!args.eps.is_empty(), "--eps is empty");
    let grid = grid_for(&spec, args.n)?;
    let prob = spec.sample(&grid)?;
    let reference = pgs::solve(&prob, &tight_config())?;
    ensure!(reference.converged(), "PGS reference did not converge");

    let mut table = Table::new(&[
        "eps",
        "max_diff",
        "diff_bound",
        "max_residual",
        "residual_bound",
        "within",
    ]);
    let mut violated = false;
    for &eps in &args.eps {
        let cfg = RegularizationConfig::new(eps);
        let reg = solve_regularized(&prob, &cfg)?;
        ensure!(
            reg.converged(),
            "regularized solve did not converge for eps = {eps}"
        );
        let diff = reg.u.max_diff(&reference.u)?;
        let res = minmax_residual_norm(&reg.u, &prob);
        let (db, rb) = (difference_bound(&cfg), residual_bound(eps));
        let within = diff <= db && res <= rb;
        violated |= !within;
        table.push(vec![
            eps.into(),
            diff.into(),
            db.into(),
            res.into(),
            rb.into(),
            if within { "yes" } else { "no" }.into(),
        ]);
    }
    let manifest = RunManifest::new(
        "compare-regularized",
        &name,
        vec![args.n],
        json!({ "eps": args.eps, "reference_update_tol": 1e-15, "regularized_tol": 1e-13 }),
    );
    emit(&table, args.out.as_deref(), args.format, manifest)?;
    if violated {
        eprintln!("error: ε-bound violated");
        return Ok(EXIT_CHECK_FAILED);
    }
    Ok(EXIT_OK)
}

pub fn oracle_check(args: &OracleArgs) -> Result<i32> {
    let dim = Dim::from_usize(args.dim)?;
    let grid = Grid64::new(dim, args.n)?;
    ensure!(
        grid.interior_count() <= ORACLE_MAX_INTERIOR,
        "grid has {} interior nodes; the oracle handles at most {ORACLE_MAX_INTERIOR}",
        grid.interior_count()
    );
    if args.trials == 0 {
        eprintln!("warning: --trials 0, nothing checked");
        println!("trials=0 max_discrepancy=0");
        return Ok(EXIT_OK);
    }
    let worst = (0..args.trials)
        .into_par_iter()
        .map(|t| -> Result<f64> {
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            rng.set_stream(t as u64);
            let prob = random_problem(grid, &mut rng, &RandomProblemOptions::default())?;
            let rep = pgs::solve(&prob, &tight_config())?;
            ensure!(rep.converged(), "trial {t}: PGS did not converge");
            Ok(rep.u.max_diff(&oracle_minimize(&prob)?)?)
        })
        .try_reduce(|| 0.0, |a, b| Ok(a.max(b)))?;
    println!("trials={} max_discrepancy={worst:e}", args.trials);
    if worst <= AGREEMENT_TOL {
        Ok(EXIT_OK)
    } else {
        eprintln!("error: discrepancy {worst:e} exceeds {AGREEMENT_TOL:e}");
        Ok(EXIT_CHECK_FAILED)
    }
}
