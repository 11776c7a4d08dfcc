//! Observed convergence order on the manufactured equation under successive
//! step halvings, for a few orders.

use abmd::experiments::{convergence, Model};
use abmd::models::ManufacturedDde;
use abmd::IntegratorConfig;

fn main() -> abmd::Result<()> {
    let m = ManufacturedDde::default();
    let model = Model::from(m.clone());
    for order in [2, 4, 6] {
        let cfg = IntegratorConfig::default().with_order(order).with_step(m.tau / 2.0);
        println!("order {order}");
        for row in convergence(&model, 0.0, 30.0 * m.tau, &cfg, 3)? {
            let order = if row.order.is_nan() { "-".to_string() } else { format!("{:.2}", row.order) };
            println!("  h = {:.5}  max error {:.3e}  observed order {order}", row.h, row.max_error);
        }
    }
    Ok(())
}
