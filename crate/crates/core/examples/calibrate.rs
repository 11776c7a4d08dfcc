//! Measures the manufactured-solution errors against the testkit reference and
//! prints fixture thresholds (twice the measured value, two digits, rounded
//! up). Pass `--write` to store them in the fixture directory.

use abmd::experiments::{roundtrip, Model};
use abmd::fixtures::{fixture_dir, Thresholds};
use abmd::models::ManufacturedDde;
use abmd::testkit::reference_solution;
use abmd::{integrate, IntegratorConfig};

fn max_deviation(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    a.iter()
        .zip(b)
        .flat_map(|(x, y)| x.iter().zip(y).map(|(p, q)| (p - q).abs()))
        .fold(0.0, f64::max)
}

fn threshold(measured: f64) -> f64 {
    let v = 2.0 * measured;
    let scale = 10f64.powi(v.log10().floor() as i32 - 1);
    (v / scale).ceil() * scale
}

fn main() -> abmd::Result<()> {
    let m = ManufacturedDde::default();
    let mut t = Thresholds::default();
    for (name, sign) in [("manufactured_forward_k8", 1.0), ("manufactured_backward_k8", -1.0)] {
        let h = sign * m.tau / 4.0;
        let cfg = IntegratorConfig::default().with_order(8).with_step(h);
        let traj = integrate(&m, &m.initial_value(0.0), 30.0 * m.tau * sign, &cfg)?;
        let reference = reference_solution(&m, 0.0, h, traj.len() - 1)?;
        let err = max_deviation(traj.states(), &reference);
        println!("{name}: measured {err:e}");
        t.set(name, threshold(err));
    }

    let model = Model::from(m.clone());
    let rt = roundtrip(&model, 0.0, 30.0 * m.tau, &IntegratorConfig::default())?;
    let diff = rt.rows.iter().map(|r| r.state_diff).fold(0.0, f64::max);
    println!("manufactured_roundtrip: measured {diff:e}");
    t.set("manufactured_roundtrip", threshold(diff));

    print!("{}", t.to_text());
    if std::env::args().any(|a| a == "--write") {
        let path = fixture_dir().join(abmd::fixtures::THRESHOLDS_FILE);
        std::fs::write(&path, t.to_text())?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
