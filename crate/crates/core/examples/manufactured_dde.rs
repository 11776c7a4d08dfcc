//! A neutral delay equation with a known solution, integrated at several
//! orders. The error is measured against the closed form.

use abmd::models::ManufacturedDde;
use abmd::{integrate, IntegratorConfig};

fn main() -> abmd::Result<()> {
    let m = ManufacturedDde::default();
    let t_end = 30.0 * m.tau;
    println!("tau = {}, coupling alpha = {}, beta = {}, gamma = {}", m.tau, m.alpha, m.beta, m.gamma);
    for order in [4, 8, 13] {
        for h in [m.tau / 2.0, m.tau / 4.0, m.tau / 8.0] {
            let cfg = IntegratorConfig::default().with_order(order).with_step(h);
            let traj = integrate(&m, &m.initial_value(0.0), t_end, &cfg)?;
            let err = traj
                .times()
                .zip(traj.states())
                .flat_map(|(t, x)| x.iter().zip(m.exact(t)).map(|(a, b)| (a - b).abs()).collect::<Vec<_>>())
                .fold(0.0, f64::max);
            println!("order {order:>2}, h = {h:.5}: {:>5} nodes, max error {err:.3e}", traj.len());
        }
    }
    Ok(())
}
