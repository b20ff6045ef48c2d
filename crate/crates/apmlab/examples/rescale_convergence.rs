//! Convergence of the rescaled return maps to the conservative Henon limit.
//!
//! Conjugates T_k by the rescaling chain and measures the sup-norm residual
//! against X' = Y, Y' = M - nu1 X - Y^2 + cubic on a ball of radius 2; the
//! residual should decay like k |lambda|^k.
//!
//! Run with: cargo run --example rescale_convergence

use apmlab::models;
use apmlab::rescale::rescaled_tk;

fn main() {
    let model = models::reference_symplectic(0.2);
    println!("reference symplectic model with f03 = 0.2, ball radius 2\n");
    println!(
        "{:>3} {:>5} {:>5} {:>10} {:>12} {:>14} {:>12}",
        "k", "nu1", "nu2", "M", "residual", "residual/(k l^k)", "xy-fit"
    );
    for k in 6..=14 {
        let r = rescaled_tk(&model, k, 2.0).expect("rescale");
        let unit = k as f64 * 0.5_f64.powi(k as i32);
        println!(
            "{k:>3} {:>5} {:>5} {:>10.6} {:>12.3e} {:>14.4} {:>12.2e}",
            r.nu1,
            r.nu2,
            r.m,
            r.residual_bound,
            r.residual_bound / unit,
            r.xy_fit_coeff
        );
    }

    println!("\nsign dictionary across orientation cases (k = 6 and 7):");
    for (name, model) in [
        ("symplectic            ", models::reference_symplectic(0.0)),
        ("globally non-orientable", models::globally_nonorientable(0.3)),
        ("locally non-orientable ", models::locally_nonorientable_h331(0.0, 1.0)),
    ] {
        for k in [6, 7] {
            let r = rescaled_tk(&model, k, 1.5).expect("rescale");
            println!("  {name} k={k}: nu1 = {:+}, nu2 = {:+}", r.nu1, r.nu2);
        }
    }
}
