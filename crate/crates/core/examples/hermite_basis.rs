//! Hermite basis functions and their Gram matrix under the equilibrium weight.
//!
//! cargo run --example hermite_basis

use bgkmix::spectral::HermiteBasis;
use bgkmix::VelocityGrid;

fn main() {
    let order = 20;
    for mass in [1.0, 3.0] {
        let grid = VelocityGrid::gauss_hermite(128, mass).unwrap();
        let b = HermiteBasis::new(mass, 1.0, order);
        let mut worst: f64 = 0.0;
        for i in 0..=order {
            for j in 0..=order {
                let vals: Vec<f64> = grid
                    .nodes()
                    .iter()
                    .map(|&v| {
                        let g = b.eval_all(v);
                        g[i] * g[j] / b.weight(v)
                    })
                    .collect();
                worst = worst.max((grid.integrate(&vals) - if i == j { 1.0 } else { 0.0 }).abs());
            }
        }
        println!("mass {mass}: max |G - I| over orders <= {order} = {worst:.2e}");
        let v = 0.7;
        let g = b.eval_all(v);
        println!("  g_0..g_3 at v = {v}: {:.6} {:.6} {:.6} {:.6}", g[0], g[1], g[2], g[3]);
    }
}
