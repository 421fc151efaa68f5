//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use flood_core::analytics::{digraph_analysis, predict_pm, predict_pn};
use flood_core::experiment::{run_comparison, run_sweep, write_csv};
use flood_core::graph::{generate_er, largest_component};
use flood_core::seed::child_rng;
use flood_core::sim::{run_flood_traced, sample_instances};
use flood_core::{DegreeModel, FloodRule, ModelFamily, SweepConfig, SweepRow};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

const N: usize = 10_000;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn fail<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn six_rules() -> Vec<FloodRule> {
    vec![
        FloodRule::Probabilistic { p: 0.3 },
        FloodRule::Probabilistic { p: 0.6 },
        FloodRule::Probabilistic { p: 0.9 },
        FloodRule::Heuristic { alpha: 0.9 },
        FloodRule::Heuristic { alpha: 0.95 },
        FloodRule::Heuristic { alpha: 0.99 },
    ]
}

fn desk(family: ModelFamily, grid: Vec<f64>, rules: Vec<FloodRule>, seed: u64) -> SweepConfig {
    SweepConfig {
        family,
        grid,
        rules,
        seed,
        ..SweepConfig::default()
    }
}

fn sim(row: &SweepRow) -> Result<(f64, f64), String> {
    match (row.pn_sim, row.pm_sim) {
        (Some(pn), Some(pm)) => Ok((pn, pm)),
        _ => Err(format!(
            "{} at {}: {}",
            row.rule,
            row.param,
            row.error.clone().unwrap_or_default()
        )),
    }
}

fn uninformed_degeneracy() -> Outcome {
    let mut models = Vec::new();
    for z in [2.0, 4.0, 8.0] {
        models.push(DegreeModel::poisson(z, N - 1).map_err(fail)?);
    }
    for tau in [2.2, 2.8] {
        models.push(DegreeModel::power_law(tau, N - 1).map_err(fail)?);
    }
    let mut worst = 0.0f64;
    for m in &models {
        let a = digraph_analysis(m, FloodRule::Uninformed, N).map_err(fail)?;
        let l_gout = a.l_gout.ok_or("missing L_gout")?;
        let l_gcc = a.gcc.l_gcc.ok_or("missing L_gcc")?;
        for (x, y) in [
            (a.theta_in, a.gcc.theta_g),
            (a.theta_out, a.gcc.theta_g),
            (a.z_gout, a.gcc.z_gcc),
            (l_gout, l_gcc),
        ] {
            worst = worst.max((x - y).abs());
        }
    }
    ensure(worst <= 1e-6, format!("max deviation {worst:.2e}"))?;
    Ok(format!("max deviation {worst:.2e} over 5 models"))
}

fn poisson_thresholds() -> Outcome {
    let pn = |z: f64, p: f64| -> Result<f64, String> {
        predict_pn(
            &DegreeModel::poisson(z, N - 1).map_err(fail)?,
            FloodRule::Probabilistic { p },
        )
        .map_err(fail)
    };
    let (a, b, c) = (pn(5.0, 0.9)?, pn(9.0, 0.6)?, pn(4.0, 0.9)?);
    ensure(a >= 0.99 && b >= 0.99 && c < 0.99, format!("{a:.4} {b:.4} {c:.4}"))?;
    Ok(format!("P_n(5,.9)={a:.4} P_n(9,.6)={b:.4} P_n(4,.9)={c:.4}"))
}

fn heuristic_plateau() -> Outcome {
    let model = DegreeModel::poisson(10.0, N - 1).map_err(fail)?;
    let targets = [(0.99, 0.99), (0.95, 0.94), (0.90, 0.86)];
    let rules: Vec<FloodRule> = targets
        .iter()
        .map(|&(alpha, _)| FloodRule::Heuristic { alpha })
        .collect();
    let rows = run_sweep(&desk(ModelFamily::Poisson, vec![10.0], rules.clone(), 31)).map_err(fail)?;
    let mut detail = Vec::new();
    for ((rule, &(_, target)), row) in rules.iter().zip(&targets).zip(&rows) {
        let pred = predict_pn(&model, *rule).map_err(fail)?;
        let (pn, _) = sim(row)?;
        ensure(
            (pred - target).abs() <= 0.015 && (pn - target).abs() <= 0.03,
            format!("{rule}: pred {pred:.4} sim {pn:.4} target {target}"),
        )?;
        detail.push(format!("{rule} pred {pred:.3} sim {pn:.3}"));
    }
    Ok(detail.join(", "))
}

fn message_plateau() -> Outcome {
    let model = DegreeModel::poisson(10.0, N - 1).map_err(fail)?;
    let ps = [0.6, 0.9];
    let rules: Vec<FloodRule> = ps.iter().map(|&p| FloodRule::Probabilistic { p }).collect();
    let rows = run_sweep(&desk(ModelFamily::Poisson, vec![10.0], rules.clone(), 41)).map_err(fail)?;
    let mut detail = Vec::new();
    for ((rule, &p), row) in rules.iter().zip(&ps).zip(&rows) {
        let pred = predict_pm(&model, *rule).map_err(fail)?;
        let (_, pm) = sim(row)?;
        ensure(
            (pred - p).abs() <= 0.03 && (pm - p).abs() <= 0.03,
            format!("p={p}: pred {pred:.4} sim {pm:.4}"),
        )?;
        detail.push(format!("p={p} pred {pred:.3} sim {pm:.3}"));
    }
    Ok(detail.join(", "))
}

fn power_law_reach() -> Outcome {
    let config = SweepConfig {
        n: N,
        graphs: 30,
        instances: 300,
        ..desk(
            ModelFamily::PowerLaw,
            vec![2.0, 3.0],
            vec![FloodRule::Probabilistic { p: 0.9 }],
            51,
        )
    };
    let rows = run_sweep(&config).map_err(fail)?;
    let mut detail = Vec::new();
    for (row, target) in rows.iter().zip([0.87, 0.60]) {
        let (pn, _) = sim(row)?;
        ensure(
            (pn - target).abs() <= 0.05,
            format!("tau={}: sim {pn:.4} target {target}", row.param),
        )?;
        detail.push(format!("tau={} sim {pn:.3}", row.param));
    }
    Ok(detail.join(", "))
}

/// Waiting ratios are compared only where the predicted reach is at least this.
const PT_MIN_PREDICTED_REACH: f64 = 0.8;

fn theory_matches_simulation() -> Outcome {
    let grid: Vec<f64> = (3..=10).map(f64::from).collect();
    let rows = run_sweep(&desk(ModelFamily::Poisson, grid, six_rules(), 61)).map_err(fail)?;
    let (mut dn, mut dm, mut dt, mut dt_all) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut compared = 0;
    for row in &rows {
        let (pn, pm) = sim(row)?;
        let (pn_pred, pm_pred) = match (row.pn_pred, row.pm_pred) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(format!("no prediction for {} at z={}", row.rule, row.param)),
        };
        dn = dn.max((pn - pn_pred).abs());
        dm = dm.max((pm - pm_pred).abs());
        if let (Some(t), Some(t_pred)) = (row.pt_sim, row.pt_pred) {
            dt_all = dt_all.max((t - t_pred).abs());
            if pn_pred >= PT_MIN_PREDICTED_REACH {
                dt = dt.max((t - t_pred).abs());
                compared += 1;
            }
        }
    }
    let detail = format!(
        "max |dP_n|={dn:.4} |dP_m|={dm:.4} over {} rows; |dP_t|={dt:.4} over {compared} rows with P_n>={PT_MIN_PREDICTED_REACH} (all rows {dt_all:.4})",
        rows.len()
    );
    ensure(dn <= 0.03 && dm <= 0.03 && dt <= 0.15, detail.clone())?;
    Ok(detail)
}

fn calibration_closure() -> Outcome {
    let config = desk(
        ModelFamily::Poisson,
        vec![3.0, 6.0, 9.0],
        vec![FloodRule::Heuristic { alpha: 0.99 }],
        71,
    );
    let pairs = run_comparison(&config).map_err(fail)?;
    let mut detail = Vec::new();
    for pair in &pairs {
        let z = pair.heuristic.param;
        let (hn, hm) = sim(&pair.heuristic)?;
        let (pn, pm) = sim(&pair.probabilistic)?;
        ensure(
            (hn - pn).abs() < 0.03,
            format!("z={z}: reach gap {:.4}", (hn - pn).abs()),
        )?;
        if z >= 6.0 {
            let (ht, pt) = match (pair.heuristic.pt_sim, pair.probabilistic.pt_sim) {
                (Some(a), Some(b)) => (a, b),
                _ => return Err(format!("z={z}: missing waiting ratio")),
            };
            ensure(
                pm > hm && ht > pt,
                format!("z={z}: P_m {pm:.3}/{hm:.3} P_t {ht:.3}/{pt:.3}"),
            )?;
        }
        detail.push(format!(
            "z={z} p={:.3} gap {:.4}",
            pair.calibrated_p.unwrap_or(f64::NAN),
            (hn - pn).abs()
        ));
    }
    Ok(detail.join(", "))
}

fn property_suite() -> Outcome {
    let graph = generate_er(2000, 5.0, &mut child_rng(81, &[0])).map_err(fail)?;
    let comp = largest_component(&graph);

    let a = sample_instances(&graph, &comp, FloodRule::Uninformed, 200, 82).map_err(fail)?;
    let b = sample_instances(&graph, &comp, FloodRule::Probabilistic { p: 1.0 }, 200, 82).map_err(fail)?;
    ensure(
        a.iter()
            .zip(&b)
            .all(|(x, y)| x.originator == y.originator && x.outcome == y.outcome),
        "p=1 differs from uninformed",
    )?;

    let ps = [0.1, 0.3, 0.5, 0.7, 0.9, 1.0];
    for i in 0..50u64 {
        let origin = comp.largest_nodes()[(i as usize * 37) % comp.largest_size()];
        let mut prev: Option<Vec<u32>> = None;
        for &p in &ps {
            let trace = run_flood_traced(
                &graph,
                &comp,
                origin,
                FloodRule::Probabilistic { p },
                &mut child_rng(83, &[i]),
            )
            .map_err(fail)?;
            if let Some(prev) = &prev {
                let lost = prev
                    .iter()
                    .zip(&trace.first_receipt)
                    .any(|(&x, &y)| x != u32::MAX && y == u32::MAX);
                ensure(!lost, format!("coupling broken at p={p}, instance {i}"))?;
            }
            prev = Some(trace.first_receipt);
        }
    }

    let config = SweepConfig {
        n: 500,
        graphs: 3,
        instances: 50,
        ..desk(ModelFamily::Poisson, vec![4.0, 7.0], six_rules(), 84)
    };
    let csv = |threads: usize| -> Result<Vec<u8>, String> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(fail)?;
        let rows = pool.install(|| run_sweep(&config)).map_err(fail)?;
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).map_err(fail)?;
        Ok(buf)
    };
    ensure(csv(1)? == csv(4)?, "sweep output depends on thread count")?;

    let mut worst_residual = 0.0f64;
    for model in [
        DegreeModel::poisson(3.0, N - 1).map_err(fail)?,
        DegreeModel::poisson(8.0, N - 1).map_err(fail)?,
        DegreeModel::power_law(2.2, N - 1).map_err(fail)?,
    ] {
        for rule in six_rules() {
            let a = digraph_analysis(&model, rule, N).map_err(fail)?;
            worst_residual = worst_residual.max(a.residual_in).max(a.residual_out);
        }
    }
    ensure(worst_residual < 1e-12, format!("residual {worst_residual:.2e}"))?;

    let model = DegreeModel::poisson(5.0, N - 1).map_err(fail)?;
    let mut last = -1.0;
    for i in 0..20 {
        let p = 0.025 + 0.05 * f64::from(i);
        let pn = predict_pn(&model, FloodRule::Probabilistic { p }).map_err(fail)?;
        ensure(pn >= last - 1e-12, format!("P_n decreases at p={p}"))?;
        last = pn;
    }
    Ok(format!(
        "coupling, determinism, monotone P_n ok; max residual {worst_residual:.1e}"
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("uninformed degeneracy", uninformed_degeneracy, Duration::from_secs(60)),
        ("poisson reach thresholds", poisson_thresholds, Duration::from_secs(30)),
        ("heuristic reach plateau", heuristic_plateau, Duration::from_secs(300)),
        ("message ratio plateau", message_plateau, Duration::from_secs(300)),
        (
            "power-law probabilistic reach",
            power_law_reach,
            Duration::from_secs(900),
        ),
        (
            "theory vs simulation sweep",
            theory_matches_simulation,
            Duration::from_secs(600),
        ),
        ("calibrated comparison", calibration_closure, Duration::from_secs(600)),
        ("property suite", property_suite, Duration::from_secs(120)),
    ];
    let mut failures = 0;
    for (i, (name, check, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let result = result.and_then(|d| {
            if elapsed > *budget {
                Err(format!("{d} (over time budget {budget:?})"))
            } else {
                Ok(d)
            }
        });
        match result {
            Ok(detail) => println!(
                "criterion {} {name}: PASS ({:.1}s) {detail}",
                i + 1,
                elapsed.as_secs_f64()
            ),
            Err(detail) => {
                failures += 1;
                println!(
                    "criterion {} {name}: FAIL ({:.1}s) {detail}",
                    i + 1,
                    elapsed.as_secs_f64()
                );
            }
        }
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
