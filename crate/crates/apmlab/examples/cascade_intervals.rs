//! One-parameter cascade of elliptic intervals.
//!
//! Scans mu for each k: the interval e_k between the parabolic endpoints
//! carries an elliptic fixed point of T_k. Detected endpoints are compared
//! with the asymptotic formula predictions, and the strong-resonance values
//! inside each interval are located.
//!
//! Run with: cargo run --example cascade_intervals

use apmlab::bif::cascade_scan;
use apmlab::models;

fn main() {
    let model = models::reference_with_alpha(0.2, 0.2);
    println!("reference model with alpha = 0.2 (intervals accumulate to mu = 0)\n");
    let ks: Vec<usize> = (6..=13).collect();
    let scan = cascade_scan(&model, &ks, None);
    println!(
        "{:>3} {:>7} {:>14} {:>14} {:>11} {:>11}",
        "k", "kind", "mu- (detected)", "mu+ (detected)", "|err-|", "|err+|"
    );
    for iv in &scan {
        let (em, ep) = (
            (iv.mu_minus_detected.unwrap() - iv.mu_minus_formula).abs(),
            (iv.mu_plus_detected.unwrap() - iv.mu_plus_formula).abs(),
        );
        println!(
            "{:>3} {:>7} {:>14.6e} {:>14.6e} {:>11.2e} {:>11.2e}",
            iv.k,
            iv.kind.as_str(),
            iv.mu_minus_detected.unwrap(),
            iv.mu_plus_detected.unwrap(),
            em,
            ep
        );
    }

    println!("\nstrong resonances inside e_9:");
    let iv = scan.iter().find(|iv| iv.k == 9).unwrap();
    let (lo, hi) = iv.detected_bounds().unwrap();
    println!("  interval [{lo:.8e}, {hi:.8e}]");
    for r in &iv.resonances {
        println!(
            "  psi = {:>10}: mu = {:.8e} (interior: {})",
            r.tag.as_str(),
            r.mu_detected.unwrap(),
            r.mu_detected.map(|m| m > lo && m < hi).unwrap_or(false)
        );
    }
}
