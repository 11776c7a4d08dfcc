//! Delayed values used during integration compared with the final solution,
//! grouped by how they were obtained.

use abmd::experiments::{delayed_compare, Direction, Model};
use abmd::models::ManufacturedDde;
use abmd::{IntegratorConfig, Retrieval};

fn main() -> abmd::Result<()> {
    let model = Model::from(ManufacturedDde::short_delay());
    let dc = delayed_compare(&model, 0.0, 10.0, &IntegratorConfig::default())?;
    println!("{} queries compared, {} beyond the final solution", dc.rows.len(), dc.skipped);
    for direction in [Direction::Forward, Direction::Backward] {
        for retrieval in [Retrieval::Nested, Retrieval::Interpolated, Retrieval::Extrapolated] {
            let count = dc
                .rows
                .iter()
                .filter(|r| r.direction == direction && r.query.retrieval == retrieval)
                .count();
            if let Some(med) = dc.median(direction, retrieval) {
                println!("{:>8} {:>12}: {count:>5} queries, median error {med:.3e}", direction.as_str(), retrieval.as_str());
            }
        }
    }
    Ok(())
}
