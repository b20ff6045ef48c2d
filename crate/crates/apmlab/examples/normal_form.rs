//! Birkhoff normal-form reduction of saddle jets.
//!
//! Builds a degree-9 unit-Jacobian germ by scrambling a product-form saddle
//! with canonical changes, reduces it back, and prints the recovered
//! Birkhoff coefficients next to the planted ones, with the residual of the
//! non-resonant part and the round-trip reconstruction error.
//!
//! Run with: cargo run --example normal_form

use apmlab::jets::{
    apply_generating, birkhoff_moser_jet, jet_compose, jet_invert, non_resonant_residual,
    normal_form_reduce, Jet2,
};

fn main() {
    let order = 9;
    let lambda = 0.55;
    let planted = [0.42, -0.17, 0.08, 0.23];
    let mut germ = birkhoff_moser_jet(lambda, 1.0 / lambda, &planted, order);

    // hide the normal form behind two canonical conjugations
    let coeffs = [0.031, -0.044, 0.027, 0.012, -0.035, 0.046, -0.019, 0.022];
    let mut idx = 0;
    for _ in 0..2 {
        let mut v = Jet2::zero(order + 1);
        v.set(1, 1, 1.0);
        for p in 0..=4 {
            for q in 0..=4 {
                if (3..=5).contains(&(p + q)) {
                    v.add_to(p, q, coeffs[idx % coeffs.len()]);
                    idx += 1;
                }
            }
        }
        germ = apply_generating(&germ, &v).expect("conjugation");
    }

    let result = normal_form_reduce(&germ, 4).expect("reduction");
    println!("planted betas    recovered betas   |difference|");
    for (b, r) in planted.iter().zip(result.betas.iter()) {
        println!("{b:13.8}  {r:16.12}   {:.2e}", (b - r).abs());
    }
    println!("\ntilde betas: {:?}", result.tilde_betas);
    println!(
        "tilde_beta1 + beta1 = {:.2e} (should vanish)",
        result.tilde_betas[0] + result.betas[0]
    );
    println!(
        "non-resonant residual up to degree 9: {:.3e}",
        non_resonant_residual(&result.reduced, 4)
    );

    let inv = jet_invert(&result.change).expect("inverse change");
    let back = jet_compose(&inv, &jet_compose(&result.reduced, &result.change));
    println!("round-trip reconstruction error: {:.3e}", back.max_coeff_diff(&germ));
}
