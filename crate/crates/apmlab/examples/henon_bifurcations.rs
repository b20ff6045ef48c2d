//! Closed-form bifurcation analysis of the limit conservative Henon maps.
//!
//! Sweeps the parameter M through the orientable family (fixed points) and
//! the non-orientable family (2-cycles), printing multipliers and stability
//! tags, including the parabolic boundaries and the strong resonances.
//!
//! Run with: cargo run --example henon_bifurcations

use apmlab::henon::{analyze_nonorientable, analyze_orientable, resonance_m_values};

fn main() {
    println!("orientable family: x' = y, y' = M - x - y^2");
    println!("{:>8} {:>10} {:>10} {:>20} {:>10}", "M", "x", "trace", "stability", "psi");
    for i in 0..=20 {
        let m = -1.25 + 4.5 * i as f64 / 20.0;
        let a = analyze_orientable(m);
        for fp in &a.fixed_points {
            println!(
                "{:8.3} {:10.5} {:10.5} {:>20} {:>10}",
                m,
                fp.point.x,
                fp.trace,
                fp.stability.as_str(),
                fp.psi.map(|p| format!("{p:.4}")).unwrap_or_default()
            );
        }
    }

    println!("\nnon-orientable family: x' = y, y' = M + x - y^2 (2-cycles)");
    println!("{:>8} {:>10} {:>10} {:>20} {:>10}", "M", "x1", "trace", "stability", "psi");
    for i in 0..=12 {
        let m = -0.1 + 1.3 * i as f64 / 12.0;
        let a = analyze_nonorientable(m);
        for c in &a.two_cycles {
            println!(
                "{:8.3} {:10.5} {:10.5} {:>20} {:>10}",
                m,
                c.points[0].x,
                c.trace,
                c.stability.as_str(),
                c.psi.map(|p| format!("{p:.4}")).unwrap_or_default()
            );
        }
    }

    println!("\nstrong-resonance M values (excluded by the genericity conditions):");
    println!("  orientable fixed points: {:?}", resonance_m_values(true));
    println!("  non-orientable 2-cycles: {:?}", resonance_m_values(false));
}
