use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde_json::json;
use unravel::bounds::{
    f_bar, f_factor, g_factor, phi_min_verify, renyi_uncertainty_check, tsallis_uncertainty_check,
    FactorKind, PhiProblem, Povm,
};
use unravel::channels::{effect_probabilities, extremal_unraveling, gram_matrix, GramMatrix, Unraveling};
use unravel::demos::{angle_momentum_demo, dft_uncertainty_demo, AngleState};
use unravel::ensembles::{
    ensemble_from_state, mixed_ensemble_bounds_check, pure_ensemble_bounds_check,
    random_mixed_ensemble, Mixing,
};
use unravel::entropy::{conjugate_order, entropy, EntropyKind, EntropyOrder, ProbVector};
use unravel::linalg::{
    haar_unitary_with, random_density_with, random_state_vector, seeded_rng, ComplexVector,
    SeededRng, C64,
};

use crate::instance::{matrix_to_json, InstanceFile};
use crate::report::{Parameters, ReportRow};
use crate::{
    AngleArgs, Cli, CliError, Command, DemoCommand, DftArgs, EnsembleArgs, ExtremalArgs,
    PhiMinArgs, SweepArgs, UncertaintyArgs,
};

type Rows = Result<Vec<ReportRow>, CliError>;

pub(crate) fn dispatch(cli: &Cli) -> Rows {
    match &cli.command {
        Command::Extremal(a) => extremal(a, cli.timing),
        Command::Uncertainty(a) => uncertainty(a, cli.timing),
        Command::Sweep(a) => sweep(a, cli.timing),
        Command::Demo(DemoCommand::Dft(a)) => demo_dft(a, cli.timing),
        Command::Demo(DemoCommand::Angle(a)) => demo_angle(a, cli.timing),
        Command::Ensemble(a) => ensemble(a, cli.timing),
        Command::PhiMin(a) => phi_min(a, cli.timing),
    }
}

pub(crate) fn trial_seed(seed: u64, trial: usize) -> u64 {
    seed ^ (trial as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

fn stamp(mut rows: Vec<ReportRow>, start: Instant, timing: bool) -> Vec<ReportRow> {
    if timing {
        let ms = start.elapsed().as_secs_f64() * 1e3;
        for r in &mut rows {
            r.wall_time_ms = Some(ms);
        }
    }
    rows
}

fn run_trials(trials: usize, timing: bool, f: impl Fn(usize) -> Rows + Sync) -> Rows {
    let per_trial: Vec<Rows> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let start = Instant::now();
            Ok(stamp(f(t)?, start, timing))
        })
        .collect();
    let mut rows = Vec::new();
    for r in per_trial {
        rows.extend(r?);
    }
    Ok(rows)
}

fn kind_name(kind: EntropyKind) -> &'static str {
    match kind {
        EntropyKind::Tsallis => "tsallis",
        EntropyKind::Renyi => "renyi",
    }
}

/// Kinds for which the Gram-diagonal unraveling is guaranteed minimal.
fn minimal_kinds(order: EntropyOrder) -> Vec<EntropyKind> {
    if order.value() <= 1.0 || order.is_shannon() {
        vec![EntropyKind::Tsallis, EntropyKind::Renyi]
    } else {
        vec![EntropyKind::Tsallis]
    }
}

fn remix_distributions(pi: &GramMatrix, n: usize, count: usize, rng: &mut SeededRng) -> Result<Vec<ProbVector>, CliError> {
    (0..count)
        .map(|_| {
            let u = haar_unitary_with(n, rng)?;
            Ok(ProbVector::from_spectrum(&pi.remixed_diagonal(u.matrix()))?)
        })
        .collect()
}

fn extremal_minimality_rows(
    alphas: &[f64],
    lambdas: &ProbVector,
    remixes: &[ProbVector],
    input: &ProbVector,
    d: usize,
) -> Rows {
    let mut rows = Vec::new();
    for &alpha in alphas {
        let order = EntropyOrder::new(alpha)?;
        for kind in minimal_kinds(order) {
            let ex = entropy(lambdas, order, kind);
            let min_remix = remixes
                .iter()
                .chain(std::iter::once(input))
                .map(|p| entropy(p, order, kind))
                .fold(f64::INFINITY, f64::min);
            rows.push(ReportRow::new(
                &format!("extremal_minimality_{}", kind_name(kind)),
                Parameters::alpha(alpha, d),
                min_remix,
                ex,
            ));
        }
    }
    Ok(rows)
}

fn extremal(args: &ExtremalArgs, timing: bool) -> Rows {
    let start = Instant::now();
    let inst = InstanceFile::load(&args.input)?;
    let a = inst.unraveling()?;
    let rho = inst.density()?;
    let seed = args.seed.or(inst.seed).unwrap_or(0);
    let ex = extremal_unraveling(&a, &rho)?;
    let pi = gram_matrix(&a, &rho)?;
    let trace: f64 = pi.diagonal().iter().sum();
    let dim_only = Parameters {
        d: Some(inst.dim),
        ..Parameters::default()
    };
    let spectrum = ReportRow::new("gram_trace", dim_only, trace, 1.0)
        .seed(seed)
        .details(json!({
            "lambdas": ex.lambdas.as_slice(),
            "gram": matrix_to_json(pi.matrix()),
            "extremal_kraus": ex.extremal.ops().iter().map(matrix_to_json).collect::<Vec<_>>(),
        }));
    let mut rng = seeded_rng(seed);
    let remixes = remix_distributions(&pi, a.len(), args.remixes, &mut rng)?;
    let input = effect_probabilities(&a, &rho)?;
    let mut rows = vec![spectrum];
    rows.extend(
        extremal_minimality_rows(&args.alpha_grid, &ex.lambdas, &remixes, &input, inst.dim)?
            .into_iter()
            .map(|r| r.seed(seed)),
    );
    Ok(stamp(rows, start, timing))
}

fn uncertainty(args: &UncertaintyArgs, timing: bool) -> Rows {
    let start = Instant::now();
    let inst = InstanceFile::load(&args.input)?;
    let (m, n) = inst.povm_pair()?;
    let rho = inst.density()?;
    let orders = conjugate_order(args.alpha)?;
    let report = match args.kind {
        EntropyKind::Tsallis => tsallis_uncertainty_check(&m, &n, &rho, &orders, args.factor)?,
        EntropyKind::Renyi => renyi_uncertainty_check(&m, &n, &rho, &orders, args.factor)?,
    };
    let mut row = ReportRow::from_bound(&format!("uncertainty_{}", kind_name(args.kind)), &report, inst.dim);
    row.seed = inst.seed;
    Ok(stamp(vec![row], start, timing))
}

fn factor_chain_rows(m: &Povm, n: &Povm, rho: &unravel::linalg::DensityMatrix, label: &str, d: usize) -> Rows {
    let g = g_factor(m, n, rho)?;
    let f = f_factor(m, n, rho)?;
    let fb = f_bar(m, n)?;
    let p = || Parameters {
        d: Some(d),
        ..Parameters::default()
    };
    Ok(vec![
        ReportRow::new(&format!("factor_f_ge_g_{label}"), p(), f, g),
        ReportRow::new(&format!("factor_fbar_ge_f_{label}"), p(), fb, f),
        ReportRow::new(&format!("factor_one_ge_fbar_{label}"), p(), 1.0, fb),
    ])
}

fn sweep_trial(args: &SweepArgs, t: usize) -> Rows {
    let seed = trial_seed(args.seed, t);
    let mut rng = seeded_rng(seed);
    let d = args.dim;
    let n_ops = rng.random_range(2..=4);
    let a = Unraveling::random_with(d, d, n_ops, &mut rng)?;
    let rho = random_density_with(d, d, &mut rng)?;
    let ex = extremal_unraveling(&a, &rho)?;
    let pi = gram_matrix(&a, &rho)?;
    let remixes = remix_distributions(&pi, n_ops, args.remixes, &mut rng)?;
    let input = effect_probabilities(&a, &rho)?;
    let mut rows = extremal_minimality_rows(&args.alpha_grid, &ex.lambdas, &remixes, &input, d)?;

    let pairs = [
        ("projective", Povm::random_projective_with(d, &mut rng)?, Povm::random_projective_with(d, &mut rng)?),
        ("general", Povm::random_with(d, d + 1, &mut rng)?, Povm::random_with(d, d + 1, &mut rng)?),
    ];
    for (label, m, n) in &pairs {
        rows.extend(factor_chain_rows(m, n, &rho, label, d)?);
        for &alpha in args.alpha_grid.iter().filter(|&&a| a > 0.5) {
            let orders = conjugate_order(alpha)?;
            let ts = tsallis_uncertainty_check(m, n, &rho, &orders, FactorKind::G)?;
            rows.push(ReportRow::from_bound(&format!("tsallis_relation_{label}"), &ts, d));
            let re = renyi_uncertainty_check(m, n, &rho, &orders, FactorKind::G)?;
            rows.push(ReportRow::from_bound(&format!("renyi_relation_{label}"), &re, d));
        }
    }
    Ok(rows.into_iter().map(|r| r.trial(t, seed)).collect())
}

fn sweep(args: &SweepArgs, timing: bool) -> Rows {
    if args.dim == 0 {
        return Err(unravel::Error::Dimension("dim must be positive".into()).into());
    }
    for &alpha in &args.alpha_grid {
        EntropyOrder::new(alpha)?;
    }
    run_trials(args.trials, timing, |t| sweep_trial(args, t))
}

fn demo_dft(args: &DftArgs, timing: bool) -> Rows {
    if args.dim == 0 {
        return Err(unravel::Error::Dimension("dim must be positive".into()).into());
    }
    let orders = conjugate_order(args.alpha)?;
    let start = Instant::now();
    let mut basis = ComplexVector::zeros(args.dim);
    basis[0] = C64::new(1.0, 0.0);
    let first = ReportRow::from_bound("dft_basis", &dft_uncertainty_demo(&basis, &orders)?, args.dim);
    let mut rows = stamp(vec![first], start, timing);
    rows.extend(run_trials(args.trials, timing, |t| {
        let seed = trial_seed(args.seed, t);
        let state = random_state_vector(args.dim, &mut seeded_rng(seed));
        let r = dft_uncertainty_demo(&state, &orders)?;
        Ok(vec![ReportRow::from_bound("dft_random", &r, args.dim).trial(t, seed)])
    })?);
    Ok(rows)
}

fn demo_angle(args: &AngleArgs, timing: bool) -> Rows {
    let start = Instant::now();
    let orders = conjugate_order(args.alpha)?;
    let packet = AngleState::gaussian(args.truncation, args.width, args.nbins)?;
    let uniform = AngleState::momentum_eigenstate(args.truncation, 0, args.nbins)?;
    let mut rows = Vec::new();
    for (name, state) in [("angle_gaussian", &packet), ("angle_uniform", &uniform)] {
        let r = angle_momentum_demo(state, &orders, args.quad_points)?;
        rows.push(ReportRow::from_bound(name, &r, args.nbins).details(json!({
            "truncation": args.truncation,
            "tail_weight": state.tail_weight(),
            "quad_points": args.quad_points,
        })));
    }
    Ok(stamp(rows, start, timing))
}

fn ensemble(args: &EnsembleArgs, timing: bool) -> Rows {
    if args.dim == 0 || args.members == 0 {
        return Err(unravel::Error::Dimension("dim and members must be positive".into()).into());
    }
    let order = EntropyOrder::new(args.alpha)?;
    run_trials(args.trials, timing, |t| {
        let seed = trial_seed(args.seed, t);
        let mut rng = seeded_rng(seed);
        let d = args.dim;
        let rho = random_density_with(d, d.min(args.members), &mut rng)?;
        let generated = ensemble_from_state(&rho, args.members, Mixing::Haar(rng.random()))?;
        let mut rows = Vec::new();
        let kinds = if args.alpha < 1.0 {
            vec![EntropyKind::Tsallis, EntropyKind::Renyi]
        } else {
            vec![EntropyKind::Tsallis]
        };
        for kind in kinds {
            let b = pure_ensemble_bounds_check(&generated.ensemble, order, kind)?;
            rows.push(ReportRow::new(
                &format!("pure_ensemble_{}", kind_name(kind)),
                Parameters::alpha(args.alpha, d),
                b.ensemble_entropy,
                b.state_entropy,
            ));
        }
        let mixed = random_mixed_ensemble(d, args.members, &mut rng)?;
        let s = mixed_ensemble_bounds_check(&mixed, order, EntropyKind::Tsallis)?;
        rows.push(ReportRow::new("mixed_ensemble_lower", Parameters::alpha(args.alpha, d), s.mid, s.lower));
        rows.push(ReportRow::new("mixed_ensemble_upper", Parameters::alpha(args.alpha, d), s.upper, s.mid));
        Ok(rows.into_iter().map(|r| r.trial(t, seed)).collect())
    })
}

fn phi_min(args: &PhiMinArgs, timing: bool) -> Rows {
    let start = Instant::now();
    let problem = PhiProblem::new(args.gamma, args.alpha)?;
    let r = phi_min_verify(&problem, args.grid)?;
    let orders = conjugate_order(args.alpha)?;
    let parameters = Parameters {
        d: None,
        ..Parameters::orders(&orders, 0)
    };
    let row = ReportRow::new("phi_min", parameters, r.numeric_min, r.analytic_min).details(json!({
        "gamma": args.gamma,
        "xi0": problem.xi0(),
        "analytic_min": r.analytic_min,
        "numeric_min": r.numeric_min,
        "argmin": [r.argmin.0, r.argmin.1],
        "feasible_points": r.feasible_points,
    }));
    Ok(stamp(vec![row], start, timing))
}
