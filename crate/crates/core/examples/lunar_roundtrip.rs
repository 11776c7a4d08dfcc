//! Forward-backward test of the lunar rotation model: integrate two years
//! forward, come back to the epoch and report how far the two legs disagree.

use abmd::experiments::{roundtrip, Model, ModelKind};
use abmd::IntegratorConfig;

fn main() -> abmd::Result<()> {
    let model = Model::load(ModelKind::Lunar, None)?;
    let cfg = IntegratorConfig::default();
    let span = std::env::args().nth(1).map_or(Ok(730.5), |s| s.parse()).expect("span in days");
    let rt = roundtrip(&model, 0.0, span, &cfg)?;
    println!("{} nodes per leg, relative closure {:.3e}", rt.forward.len(), rt.closure());
    let every = (rt.rows.len() / 12).max(1);
    println!("{:>9}  {:>12}  {:>14}", "t (days)", "state diff", "surface (mm)");
    for row in rt.rows.iter().step_by(every) {
        println!("{:>9.2}  {:>12.3e}  {:>14.3e}", row.t, row.state_diff, row.surface_diff.unwrap_or(0.0) * 1e6);
    }
    Ok(())
}
