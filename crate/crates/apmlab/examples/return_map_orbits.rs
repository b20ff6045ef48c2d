//! First-return maps T_k = T1 T0^k and their periodic points.
//!
//! Locates the elliptic fixed point of T_k for a model at the global
//! resonance and prints its multiplier data as k grows, together with the
//! strip geometry it lives in.
//!
//! Run with: cargo run --example return_map_orbits

use apmlab::models;
use apmlab::rescale::{mu_to_m, RescaleChain};
use apmlab::retmap::ReturnMap;
use apmlab::semilocal::strip_geometry;

fn main() {
    let model = models::reference_symplectic(0.0); // s0 = -1, tau = 0, mu = 0
    println!("model: lambda=1/2, c=d=1, b=-1, x+=y-=1, sigma=1  =>  s0 = -1, M -> 1");
    let henon_trace = 2.0 * (1.0 - 2.0_f64.sqrt());
    println!("Henon-limit trace 2(1 - sqrt 2) = {henon_trace:.10}\n");

    println!(
        "{:>3} {:>12} {:>22} {:>14} {:>12} {:>10}",
        "k", "M", "fixed point", "trace", "|dev|", "rotation"
    );
    for k in 6..=16 {
        let chain = RescaleChain::new(&model, k).expect("chain");
        let rm = ReturnMap::new(&model, k);
        let seed = chain
            .from_rescaled(&model, apmlab::geom::Point::new(-1.0 + 2.0_f64.sqrt(), -1.0 + 2.0_f64.sqrt()))
            .expect("seed");
        match rm.find_fixed_point(seed) {
            Ok(rec) => println!(
                "{k:>3} {:>12.6} ({:>9.6}, {:>9.3e}) {:>14.9} {:>12.3e} {:>10.6}",
                mu_to_m(&model, k),
                rec.point.x,
                rec.point.y,
                rec.trace,
                (rec.trace - henon_trace).abs(),
                rec.rotation.unwrap_or(f64::NAN),
            ),
            Err(e) => println!("{k:>3}  no fixed point: {e}"),
        }
    }

    println!("\nstrip carriers (first few):");
    for k in 6..=9 {
        let g = strip_geometry(&model, k).expect("strips");
        println!(
            "  sigma_{k}^0: y in [{:.6e}, {:.6e}]   sigma_{k}^1: x in [{:.6e}, {:.6e}]",
            g.sigma0.y_lo, g.sigma0.y_hi, g.sigma1.x_lo, g.sigma1.x_hi
        );
    }
}
