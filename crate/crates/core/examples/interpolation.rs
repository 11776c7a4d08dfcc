//! Delayed-value retrieval from an equidistant history: interpolation inside
//! the computed span and extrapolation past it, with the error growth that
//! comes with distance from the nodes.

use abmd::{SampleKind, Trajectory};

fn main() -> abmd::Result<()> {
    let h = 1.0 / 16.0;
    let mut traj = Trajectory::new(0.0, h, 1, 0)?;
    for i in 0..40 {
        let t = traj.time(i);
        traj.push(&[t.sin()], &[t.cos()])?;
    }
    let end = traj.time(traj.len() - 1);
    println!("history on [0, {end}] with h = {h}");
    println!("{:>8}  {:>7}  {:>12}  {:>12}", "t", "stencil", "state error", "deriv error");
    for stencil in [4, 8, 13] {
        for t in [1.03, 2.0 + h / 3.0, end + 0.5 * h, end + 4.0 * h, end + 12.0 * h] {
            let x = traj.sample(t, SampleKind::State, stencil, f64::INFINITY)?;
            let d = traj.sample(t, SampleKind::Derivative, stencil, f64::INFINITY)?;
            println!(
                "{t:>8.4}  {stencil:>7}  {:>12.3e}  {:>12.3e}{}",
                (x.value[0] - t.sin()).abs(),
                (d.value[0] - t.cos()).abs(),
                if x.extrapolated { "  (extrapolated)" } else { "" }
            );
        }
    }
    Ok(())
}
