//! Integrating a delay equation backward in time. The delayed arguments then
//! lie ahead of the computed solution, so every step extrapolates. Strong
//! coupling to the delayed derivative makes this unstable, which the second
//! half shows.

use abmd::models::ManufacturedDde;
use abmd::{integrate, IntegratorConfig};

fn max_error(m: &ManufacturedDde, h: f64) -> abmd::Result<f64> {
    let cfg = IntegratorConfig::default().with_order(8).with_step(h);
    let traj = integrate(m, &m.initial_value(0.0), -30.0 * m.tau, &cfg)?;
    Ok(traj
        .times()
        .zip(traj.states())
        .flat_map(|(t, x)| x.iter().zip(m.exact(t)).map(|(a, b)| (a - b).abs()).collect::<Vec<_>>())
        .fold(0.0, f64::max))
}

fn main() -> abmd::Result<()> {
    let m = ManufacturedDde::default();
    for h in [-m.tau / 4.0, -m.tau / 8.0] {
        println!("backward, h = {h:.5}: max error {:.3e}", max_error(&m, h)?);
    }
    for beta in [1e-6, 1e-5, 1e-4] {
        let strong = m.clone().with_coupling(m.alpha, beta, m.gamma);
        match max_error(&strong, -m.tau / 8.0) {
            Ok(e) => println!("beta = {beta:.0e}: max error {e:.3e}"),
            Err(e) => println!("beta = {beta:.0e}: {e}"),
        }
    }
    Ok(())
}
