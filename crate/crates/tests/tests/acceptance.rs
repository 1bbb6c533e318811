//! Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any FAIL.

use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use voi_core::cases::ashp::{build_ashp_problem, AshpParams};
use voi_core::cases::gshp::{
    build_cost_surface, build_gshp_problem_with, dispatch, synthesize_load, GshpParams, GshpProblem,
};
use voi_core::cases::ventilation::{build_ventilation_problem, ventilation_energy_cost, VentilationParams};
use voi_core::{
    solve_exact, Action, DecisionProblem, Execution, FnProblem, MonteCarlo, Sense, TabularProblem, VoiEstimate,
};

type Outcome = Result<String, String>;

struct Gate {
    failed: usize,
}

impl Gate {
    fn check(&mut self, label: &str, outcome: Outcome) {
        match outcome {
            Ok(detail) => println!("PASS  {label}: {detail}"),
            Err(detail) => {
                self.failed += 1;
                println!("FAIL  {label}: {detail}");
            }
        }
    }
}

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn two_by_two() -> TabularProblem {
    TabularProblem::new(
        vec![Action::new("a", "a"), Action::new("b", "b")],
        vec!["s1".into(), "s2".into()],
        vec![0.5, 0.5],
        vec![vec![1.0, 0.0], vec![0.0, 0.6]],
        Sense::Maximize,
    )
    .unwrap()
}

fn random_tabular(rng: &mut ChaCha8Rng) -> TabularProblem {
    let n_actions = rng.random_range(1..=5);
    let n_states = rng.random_range(1..=8);
    let weights: Vec<f64> = (0..n_states).map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = weights.iter().sum();
    let mut probabilities: Vec<f64> = weights.iter().map(|w| w / total).collect();
    let head: f64 = probabilities[..n_states - 1].iter().sum();
    probabilities[n_states - 1] = 1.0 - head;
    let utilities = (0..n_actions).map(|_| (0..n_states).map(|_| rng.random_range(-10.0..10.0)).collect()).collect();
    let sense = if rng.random_bool(0.5) { Sense::Maximize } else { Sense::Minimize };
    TabularProblem::new(
        (0..n_actions).map(|i| Action::new(format!("a{i}"), format!("a{i}"))).collect(),
        (0..n_states).map(|i| format!("s{i}")).collect(),
        probabilities,
        utilities,
        sense,
    )
    .unwrap()
}

fn criterion_1() -> Outcome {
    let p = VentilationParams::default();
    let expected = [(1.0, 5.98), (3.0, 17.94), (5.0, 29.91), (10.0, 59.81)];
    let got: Vec<f64> =
        expected.iter().map(|(ach, _)| (ventilation_energy_cost(*ach, &p).unwrap() * 100.0).round() / 100.0).collect();
    let ok = expected.iter().zip(&got).all(|((_, want), g)| (want - g).abs() < 1e-9);
    ensure(ok, format!("£/day at 1/3/5/10 ACH = {got:?}, published = [5.98, 17.94, 29.91, 59.81]"))
}

fn criterion_2(gate: &mut Gate) {
    let started = Instant::now();
    let problem = build_ashp_problem(&AshpParams::default()).unwrap();
    let est = MonteCarlo::new(1_000_000, 0).voi(&problem).unwrap();
    let secs = started.elapsed().as_secs_f64();
    let rel = (est.prior_value - 263_120.0) / 263_120.0;
    gate.check(
        "C2a ASHP prior action and value",
        ensure(
            est.prior_action == "2" && rel.abs() <= 0.03 && secs < 30.0,
            format!(
                "action {} (want 2), prior £{:.2}/yr ({:+.2}% vs £263,120, limit ±3%), {secs:.1} s",
                est.prior_action,
                est.prior_value,
                100.0 * rel
            ),
        ),
    );
    gate.check(
        "C2b ASHP EVPI band",
        ensure(
            (130.0..=330.0).contains(&est.evpi),
            format!(
                "evpi £{:.2} ± {:.2}/yr, band [£130, £330] (reference £220); exact value of the capped model is £78.60",
                est.evpi, est.se_evpi
            ),
        ),
    );
    for cap in [0.99, 0.9999] {
        let p = AshpParams { alpha_cap: cap, ..Default::default() };
        let e = MonteCarlo::new(1_000_000, 0).voi(&build_ashp_problem(&p).unwrap()).unwrap();
        println!(
            "      note: alpha_cap {cap}: evpi £{:.2} ± {:.2}/yr, prior action {}",
            e.evpi, e.se_evpi, e.prior_action
        );
    }
}

fn criterion_3() -> Outcome {
    let problem = build_ventilation_problem(&VentilationParams::default()).unwrap();
    let est = MonteCarlo::new(1_000_000, 0).voi(&problem).unwrap();
    ensure(
        est.prior_action == "5" && (4.0..=15.0).contains(&est.evpi),
        format!(
            "action {} ACH (want 5), prior £{:.2}/day, evpi £{:.2}/day in [£4, £15] (reference £72.57 / £9.42)",
            est.prior_action, est.prior_value, est.evpi
        ),
    )
}

fn criterion_4(params: &GshpParams, problem: &GshpProblem, surface_secs: f64) -> Outcome {
    let started = Instant::now();
    let est = MonteCarlo::new(1_000_000, 0).voi(problem).unwrap();
    let mc_secs = started.elapsed().as_secs_f64();
    let ids: Vec<&str> = problem.actions().iter().map(|a| a.id.as_str()).collect();
    let interior = est.prior_action != ids[0] && est.prior_action != ids[ids.len() - 1];

    let load = synthesize_load(&params.load).unwrap();
    let mut grid_ok = true;
    for lambda in [1.6, 1.8, 2.0, 2.2, 2.4] {
        for length in [140.0, 155.0, 170.0, 185.0, 200.0] {
            let r = dispatch(&load, lambda, length, params).unwrap();
            for t in 0..load.values().len() {
                grid_ok &= (load.values()[t] - r.gshp[t] - r.aux[t]).abs() < 1e-9
                    && r.aux[t] >= 0.0
                    && (params.fluid_min..=params.fluid_max).contains(&r.fluid_temp[t]);
            }
        }
    }
    ensure(
        est.evpi >= 0.0
            && interior
            && (300_000.0..=900_000.0).contains(&est.prior_value)
            && est.evpi < 20_000.0
            && grid_ok
            && surface_secs < 120.0
            && mc_secs < 10.0,
        format!(
            "action {} m (interior: {interior}), prior £{:.0} (reference £537,400), evpi £{:.0} ± {:.0} (reference £4,200), \
             5x5 balance/bounds ok: {grid_ok}, surface {surface_secs:.1} s, MC {mc_secs:.1} s",
            est.prior_action, est.prior_value, est.evpi, est.se_evpi
        ),
    )
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut within = 0;
    for case in 0..25u64 {
        let problem = random_tabular(&mut rng);
        let exact = solve_exact(&problem);
        let mc = MonteCarlo::new(100_000, case).voi(&problem).unwrap();
        let gap = (mc.evpi - exact.evpi).abs();
        if gap <= 4.0 * mc.se_evpi || gap < 1e-12 {
            within += 1;
        }
    }
    ensure(within >= 24, format!("{within}/25 randomized tables within 4 se of exact EVPI (need 24)"))
}

fn min_evpi<P: DecisionProblem>(problem: &P) -> (f64, usize) {
    let mut worst = f64::INFINITY;
    let mut violations = 0;
    for seed in 0..100 {
        let evpi = MonteCarlo::new(1_000, seed).voi(problem).unwrap().evpi;
        worst = worst.min(evpi);
        violations += usize::from(evpi < 0.0);
    }
    (worst, violations)
}

fn criterion_6(gshp: &GshpProblem) -> Outcome {
    let mut report = Vec::new();
    let mut violations = 0;
    let mut tally = |name: &str, (worst, v): (f64, usize)| {
        violations += v;
        report.push(format!("{name} min {worst:.3e}"));
    };
    tally("2x2", min_evpi(&two_by_two()));
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut tab_worst = (f64::INFINITY, 0);
    for _ in 0..25 {
        let (w, v) = min_evpi(&random_tabular(&mut rng));
        tab_worst = (tab_worst.0.min(w), tab_worst.1 + v);
    }
    tally("25 random tables", tab_worst);
    tally("ventilation", min_evpi(&build_ventilation_problem(&VentilationParams::default()).unwrap()));
    tally("ashp", min_evpi(&build_ashp_problem(&AshpParams::default()).unwrap()));
    tally("gshp", min_evpi(gshp));
    ensure(violations == 0, format!("{violations} negative estimates over 100 seeds at n=1e3; {}", report.join(", ")))
}

fn bits(e: &VoiEstimate) -> String {
    serde_json::to_string(e).unwrap()
}

fn same_across_workers<P: DecisionProblem>(problem: &P, n: usize) -> bool {
    let reference = bits(&MonteCarlo::new(n, 42).voi(problem).unwrap());
    [2, 3, 4].iter().all(|&w| bits(&MonteCarlo::new(n, 42).with_workers(w).voi(problem).unwrap()) == reference)
        && bits(&MonteCarlo::new(n, 42).voi(problem).unwrap()) == reference
}

fn criterion_7(params: &GshpParams, gshp: &GshpProblem) -> Outcome {
    let load = synthesize_load(&params.load).unwrap();
    let small = GshpParams { surface_points: 21, ..params.clone() };
    let serial = build_cost_surface(&load, &small, Execution::Serial).unwrap();
    let parallel = build_cost_surface(&load, &small, Execution::Parallel { workers: 3 }).unwrap();
    let results = [
        ("2x2", same_across_workers(&two_by_two(), 100_003)),
        (
            "ventilation",
            same_across_workers(&build_ventilation_problem(&VentilationParams::default()).unwrap(), 200_000),
        ),
        ("ashp", same_across_workers(&build_ashp_problem(&AshpParams::default()).unwrap(), 200_000)),
        ("gshp", same_across_workers(gshp, 200_000)),
        ("gshp surface", serial == parallel),
    ];
    let ok = results.iter().all(|(_, r)| *r);
    let detail: Vec<String> =
        results.iter().map(|(n, r)| format!("{n} {}", if *r { "identical" } else { "DIFFERS" })).collect();
    ensure(ok, format!("workers 1/2/3/4: {}", detail.join(", ")))
}

fn criterion_8(params: &GshpParams) -> Outcome {
    let ashp = build_ashp_problem(&AshpParams { alpha_sigma: 1e-12, ..Default::default() }).unwrap();
    let load = synthesize_load(&params.load).unwrap();
    let tight = GshpParams { lambda_sigma: 1e-12, surface_points: 11, ..params.clone() };
    let gshp = build_gshp_problem_with(&tight, &load, Execution::Serial).unwrap();
    let vent = build_ventilation_problem(&VentilationParams { max_occupancy: 0, ..Default::default() }).unwrap();
    let constant = FnProblem::new(
        vec![Action::new("x", "x"), Action::new("y", "y"), Action::new("z", "z")],
        Sense::Maximize,
        |seed, index| voi_core::sample_index_rng(seed, index).random::<f64>(),
        |_, _: &f64| 3.25,
    )
    .unwrap();
    let mc = MonteCarlo::new(100_000, 0);
    let values = [
        ("alpha_sigma->0", mc.voi(&ashp).unwrap().evpi),
        ("lambda_sigma->0", mc.voi(&gshp).unwrap().evpi),
        ("max_occupancy=0", mc.voi(&vent).unwrap().evpi),
        ("constant utility", mc.voi(&constant).unwrap().evpi),
    ];
    let ok = values.iter().all(|(_, v)| *v == 0.0);
    let detail: Vec<String> = values.iter().map(|(n, v)| format!("{n} evpi {v:e}")).collect();
    ensure(ok, detail.join(", "))
}

fn main() -> ExitCode {
    let mut gate = Gate { failed: 0 };
    gate.check("C1 fan energy cost table", criterion_1());
    criterion_2(&mut gate);
    gate.check("C3 ventilation regression", criterion_3());

    let params = GshpParams::default();
    let started = Instant::now();
    let load = synthesize_load(&params.load).unwrap();
    let gshp = build_gshp_problem_with(&params, &load, Execution::Serial).unwrap();
    let surface_secs = started.elapsed().as_secs_f64();
    gate.check("C4 GSHP properties", criterion_4(&params, &gshp, surface_secs));
    gate.check("C5 oracle equivalence", criterion_5());
    gate.check("C6 EVPI non-negativity", criterion_6(&gshp));
    gate.check("C7 determinism across workers", criterion_7(&params, &gshp));
    gate.check("C8 trivial limits", criterion_8(&params));

    if gate.failed == 0 {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {} check(s) failed", gate.failed);
        ExitCode::FAILURE
    }
}
