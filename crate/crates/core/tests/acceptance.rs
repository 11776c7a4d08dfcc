//! Acceptance suite: one PASS/FAIL line per criterion, with runtime.
//!
//! Runs without the libtest harness so every line is printed even when all
//! criteria pass; the process fails if any criterion fails.

use std::time::{Duration, Instant};

use nalgebra::Vector3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use abmd::coeffs::CoefficientTable;
use abmd::driver::{classic_correct, correct, predict};
use abmd::experiments::{delayed_compare, max_error, roundtrip, Direction, Model, ModelKind};
use abmd::fixtures::Thresholds;
use abmd::history::DifferenceTable;
use abmd::models::lunar::{inertia_tensor, spin_shape, tidal_shape, LunarParams};
use abmd::models::ManufacturedDde;
use abmd::testkit::{horner, rational_adams, recursive_differences};
use abmd::{integrate, FnSystem, InitialValue, IntegratorConfig, Retrieval, SampleKind, Trajectory};

type Outcome = Result<String, String>;

fn ulps(a: f64, b: f64) -> u64 {
    if a == b {
        return 0;
    }
    let key = |x: f64| {
        let bits = x.to_bits() as i64;
        if bits < 0 {
            i64::MIN - bits
        } else {
            bits
        }
    };
    key(a).abs_diff(key(b))
}

fn coefficient_exactness() -> Outcome {
    let table = CoefficientTable::new(13);
    let (c, gamma) = rational_adams(13);
    let mut worst = 0;
    for j in 0..=13 {
        worst = worst.max(ulps(table.c()[j], c[j].to_f64()));
        worst = worst.max(ulps(table.gamma()[j], gamma[j].to_f64()));
    }
    let spot_c = [1.0, -1.0 / 2.0, -1.0 / 12.0, -1.0 / 24.0];
    let spot_g = [1.0, 1.0 / 2.0, 5.0 / 12.0, 3.0 / 8.0, 251.0 / 720.0];
    let spots = spot_c.iter().enumerate().all(|(j, v)| table.c()[j] == *v)
        && spot_g.iter().enumerate().all(|(j, v)| table.gamma()[j] == *v);
    let detail = format!("max {worst} ulp over j <= 13, spot values {}", if spots { "exact" } else { "wrong" });
    if worst <= 2 && spots {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn corrector_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let table = CoefficientTable::new(13);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let k = rng.gen_range(1..=13);
        let dim = rng.gen_range(1..=6);
        let h = rng.gen_range(1e-3..1.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let x_n: Vec<f64> = (0..dim).map(|_| rng.gen_range(-10.0..10.0)).collect();
        let fs: Vec<Vec<f64>> = (0..=k).map(|_| (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
        let at_n = DifferenceTable::from_history(k, &fs[..k]);
        let at_n1 = at_n.extended(&fs[k]);
        let x_p = predict(&x_n, h, table.gamma(), at_n.columns(), k);
        let modified = correct(&x_p, h, table.gamma()[k], &at_n1[k]);
        let classic = classic_correct(&x_n, h, table.c(), &at_n1, k);
        for i in 0..dim {
            let scale = x_n[i].abs()
                + h.abs() * (0..=k).map(|j| (table.c()[j] * at_n1[j][i]).abs()).sum::<f64>();
            worst = worst.max((modified[i] - classic[i]).abs() / scale);
        }
    }
    let detail = format!("max relative difference {worst:.2e} over 1000 instances");
    if worst <= 1e-13 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn difference_table_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let depth = 13;
    let dim = 3;
    let mut table = DifferenceTable::new(depth);
    let mut window: Vec<Vec<f64>> = Vec::new();
    let mut worst = 0;
    let mut pushes = 0;
    while pushes < 10_000 {
        let f: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0) * 10f64.powi(rng.gen_range(-3..3))).collect();
        if !window.is_empty() && rng.gen_bool(0.3) {
            table.replace_newest(&f);
            *window.last_mut().unwrap() = f;
        } else {
            table.push(&f);
            window.push(f);
            if window.len() > depth + 1 {
                window.remove(0);
            }
            pushes += 1;
        }
        let direct = recursive_differences(&window, depth);
        if direct.len() != table.columns().len() {
            return Err(format!("column count {} vs {}", table.columns().len(), direct.len()));
        }
        for (a, b) in table.columns().iter().zip(&direct) {
            for (x, y) in a.iter().zip(b) {
                worst = worst.max(ulps(*x, *y));
            }
        }
    }
    let detail = format!("max {worst} ulp over 10^4 pushes with replacements, depth 13");
    if worst <= 4 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

#[allow(clippy::needless_range_loop)]
fn interpolation_exactness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut by_p = [0.0f64; 13];
    for p in 1..=12usize {
        let nodes = p + 1;
        for d in 0..=p {
            let h = rng.gen_range(0.01..0.2);
            let t0 = rng.gen_range(-5.0..5.0);
            let width = nodes as f64 * h;
            let mid = t0 + 0.5 * (nodes - 1) as f64 * h;
            let coeffs: Vec<f64> = (0..=d).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let poly = |t: f64| horner(&coeffs, (t - mid) / width);
            let mut traj = Trajectory::new(t0, h, 1, 0).map_err(|e| e.to_string())?;
            for i in 0..nodes {
                let t = t0 + i as f64 * h;
                traj.push(&[poly(t)], &[0.0]).map_err(|e| e.to_string())?;
            }
            // on nodes, between nodes, before the start and one stencil width past the end
            let mut probes: Vec<f64> = (0..nodes).map(|i| t0 + i as f64 * h).collect();
            probes.extend((0..4 * nodes).map(|_| rng.gen_range(t0..t0 + (nodes - 1) as f64 * h)));
            probes.extend((0..nodes).map(|_| t0 - rng.gen_range(0.0..width)));
            let end = t0 + (nodes - 1) as f64 * h;
            probes.extend((0..nodes).map(|_| end + rng.gen_range(0.0..width)));
            probes.push(end + width);
            let node_scale = (0..nodes).map(|i| poly(t0 + i as f64 * h).abs()).fold(0.0, f64::max);
            for t in probes {
                let got = traj.sample(t, SampleKind::State, nodes, f64::INFINITY).map_err(|e| e.to_string())?;
                let exact = poly(t);
                let rel = (got.value[0] - exact).abs() / exact.abs().max(node_scale);
                by_p[p] = by_p[p].max(rel);
            }
        }
    }
    let worst = by_p.iter().copied().fold(0.0, f64::max);
    let over: Vec<String> = (1..=12)
        .filter(|&p| by_p[p] > 1e-11)
        .map(|p| format!("{} nodes {:.1e}", p + 1, by_p[p]))
        .collect();
    let detail = format!(
        "max relative error {worst:.2e} over stencils of 2..=13 nodes, degree <= nodes - 1; above 1e-11: {}",
        if over.is_empty() { "none".to_string() } else { over.join(", ") }
    );
    if worst <= 1e-11 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn decay_error(k: usize, h: f64) -> Result<f64, String> {
    let sys = FnSystem::new(1, vec![], |_, x, _| Ok(vec![-x[0]]));
    let cfg = IntegratorConfig::default().with_order(k).with_step(h);
    let traj = integrate(&sys, &InitialValue::new(0.0, vec![1.0]), 2.0, &cfg).map_err(|e| e.to_string())?;
    let exact = (-2f64).exp();
    Ok(((traj.last_state().unwrap()[0] - exact) / exact).abs())
}

fn ode_order_check() -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    for k in [2usize, 4, 8] {
        let hs: Vec<f64> = (0..4).map(|j| 0.25 / f64::powi(2.0, j)).collect();
        let errs: Vec<f64> = hs.iter().map(|&h| decay_error(k, h)).collect::<Result<_, _>>()?;
        // least-squares slope of log2(error) against halving index
        let ys: Vec<f64> = errs.iter().map(|e| e.log2()).collect();
        let slope = -(0..4).map(|i| (i as f64 - 1.5) * (ys[i] - ys.iter().sum::<f64>() / 4.0)).sum::<f64>() / 5.0;
        let pass = (slope - k as f64).abs() <= 0.5;
        ok &= pass;
        lines.push(format!("k={k}: order {slope:.2}"));
    }
    let e8 = decay_error(8, 1.0 / 32.0)?;
    ok &= e8 <= 1e-11;
    lines.push(format!("k=8 endpoint error {e8:.1e} at h=1/32"));
    let detail = lines.join(", ");
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn manufactured_errors(m: &ManufacturedDde, sign: f64) -> Result<(f64, f64), String> {
    let model = Model::from(m.clone());
    let mut errs = Vec::new();
    for h in [m.tau / 4.0, m.tau / 8.0] {
        let cfg = IntegratorConfig::default().with_order(8).with_step(sign * h);
        let traj = integrate(m, &m.initial_value(0.0), sign * 30.0 * m.tau, &cfg).map_err(|e| e.to_string())?;
        errs.push(max_error(&model, &traj).unwrap());
    }
    Ok((errs[0], errs[1]))
}

fn manufactured_dde(thresholds: &Thresholds) -> Outcome {
    let m = ManufacturedDde::default();
    let mut ok = true;
    let mut lines = Vec::new();
    for (name, sign) in [("forward", 1.0), ("backward", -1.0)] {
        let limit = thresholds.get(&format!("manufactured_{name}_k8")).map_err(|e| e.to_string())?;
        let (coarse, fine) = manufactured_errors(&m, sign)?;
        let ratio = coarse / fine;
        let pass = coarse <= limit && ratio >= 128.0 / 4.0;
        ok &= pass;
        lines.push(format!("{name}: max error {coarse:.2e} (limit {limit:.1e}), halving ratio {ratio:.0}"));
    }
    let detail = lines.join("; ");
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// Each of ten bins by distance from the turnaround reaches at least a tenth
/// of the largest difference seen closer to the turnaround.
fn grows_within_envelope(rows: &[(f64, f64)], t_turn: f64) -> (bool, Vec<f64>) {
    let span = rows.iter().map(|(t, _)| (t_turn - t).abs()).fold(0.0, f64::max);
    let mut bins = vec![0.0f64; 10];
    for &(t, d) in rows {
        let b = (((t_turn - t).abs() / span) * 10.0).floor().min(9.0) as usize;
        bins[b] = bins[b].max(d);
    }
    let mut running: f64 = 0.0;
    let mut ok = true;
    for &b in &bins {
        ok &= b >= running / 10.0;
        running = running.max(b);
    }
    (ok, bins)
}

fn lunar_roundtrip() -> Outcome {
    let model = Model::load(ModelKind::Lunar, None).map_err(|e| e.to_string())?;
    let cfg = IntegratorConfig::default().with_order(13).with_step(1.0 / 16.0);
    let rt = roundtrip(&model, 0.0, 730.5, &cfg).map_err(|e| e.to_string())?;
    let closure = rt.closure();
    let t_turn = rt.rows.last().unwrap().t;
    let turnaround_zero = rt.rows.last().unwrap().state_diff == 0.0;
    let rows: Vec<(f64, f64)> = rt.rows.iter().map(|r| (r.t, r.state_diff)).collect();
    let (monotone, bins) = grows_within_envelope(&rows, t_turn);
    let surface = rt.rows[0].surface_diff.unwrap_or(f64::NAN);
    let detail = format!(
        "closure {closure:.2e}, surface difference at epoch {surface:.2e} km, bin maxima {}..{} ({})",
        format_args!("{:.1e}", bins[0]),
        format_args!("{:.1e}", bins[9]),
        if monotone { "monotone within x10" } else { "not monotone" }
    );
    if closure <= 1e-8 && monotone && turnaround_zero {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn delayed_ratios(model: &Model, span: f64) -> Result<(f64, f64), String> {
    let dc = delayed_compare(model, 0.0, span, &IntegratorConfig::default()).map_err(|e| e.to_string())?;
    let med = |d, r| dc.median(d, r).ok_or_else(|| format!("no {:?} {:?} queries", d, r));
    let fwd = med(Direction::Forward, Retrieval::Nested)? / med(Direction::Forward, Retrieval::Interpolated)?;
    let bwd = med(Direction::Backward, Retrieval::Nested)? / med(Direction::Backward, Retrieval::Extrapolated)?;
    Ok((fwd, bwd))
}

fn delayed_value_comparison() -> Outcome {
    let manufactured = Model::from(ManufacturedDde::short_delay());
    let lunar = Model::load(ModelKind::Lunar, None).map_err(|e| e.to_string())?;
    let mut ok = true;
    let mut lines = Vec::new();
    for (name, model, span) in [("manufactured", &manufactured, 10.0), ("lunar", &lunar, 365.25)] {
        let (fwd, bwd) = delayed_ratios(model, span)?;
        ok &= fwd >= 10.0 && bwd >= 3.0;
        lines.push(format!("{name}: nested/interpolated {fwd:.1e}, nested/extrapolated {bwd:.1e}"));
    }
    let detail = lines.join("; ");
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn inertia_structure() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let p = LunarParams::default();
    let mut asym = 0;
    let mut trace: f64 = 0.0;
    for _ in 0..10_000 {
        let dir = Vector3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let r = dir.normalize() * rng.gen_range(3.5e5..4.1e5);
        let w = Vector3::new(rng.gen_range(-0.05..0.05), rng.gen_range(-0.05..0.05), rng.gen_range(0.1..0.4));
        let i = inertia_tensor(&r, &w, &p).map_err(|e| e.to_string())?;
        for (a, b) in [(0, 1), (0, 2), (1, 2)] {
            asym = asym.max(ulps(i[(a, b)], i[(b, a)]));
        }
        let t = tidal_shape(&r).map_err(|e| e.to_string())?;
        let s = spin_shape(&w, p.n);
        trace = trace.max(t.trace().abs() / t.abs().max()).max(s.trace().abs() / s.abs().max());
    }
    let detail = format!("asymmetry {asym} ulp, relative trace {trace:.1e} over 10^4 inputs");
    if asym <= 1 && trace <= 1e-12 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

type Criterion = (&'static str, Duration, Box<dyn Fn() -> Outcome>);

fn main() {
    let thresholds = Thresholds::load().expect("fixture thresholds");
    let criteria: Vec<Criterion> = vec![
        ("coefficient exactness", Duration::from_secs(1), Box::new(coefficient_exactness)),
        ("corrector identity", Duration::from_secs(1), Box::new(corrector_identity)),
        ("difference-table equivalence", Duration::from_secs(5), Box::new(difference_table_equivalence)),
        ("interpolation exactness", Duration::from_secs(1), Box::new(interpolation_exactness)),
        ("ODE order check", Duration::from_secs(5), Box::new(ode_order_check)),
        ("manufactured neutral DDE", Duration::from_secs(10), Box::new(move || manufactured_dde(&thresholds))),
        ("forward-backward round trip", Duration::from_secs(60), Box::new(lunar_roundtrip)),
        ("delayed-value comparison", Duration::from_secs(60), Box::new(delayed_value_comparison)),
        ("inertia tensor structure", Duration::from_secs(1), Box::new(inertia_structure)),
    ];
    let mut failed = 0;
    for (name, limit, run) in &criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let (pass, detail) = match outcome {
            Ok(d) if elapsed <= *limit => (true, d),
            Ok(d) => (false, format!("{d}; too slow")),
            Err(d) => (false, d),
        };
        failed += usize::from(!pass);
        println!(
            "{} {name}: {detail} [{:.2} s, limit {} s]",
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            limit.as_secs()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
