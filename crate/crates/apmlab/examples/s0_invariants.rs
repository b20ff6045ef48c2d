//! The invariants tau and s0 under homoclinic pair shifts.
//!
//! Recomputes s0 after moving the homoclinic base points along the orbit
//! (the global map picks up local-map factors): at tau = 0 the orientable
//! shifts preserve s0 exactly, away from tau = 0 the stable-side shift
//! picks up the predicted beta1-defect, and the non-orientable double
//! shifts (needed-type pairs) preserve s0.
//!
//! Run with: cargo run --example s0_invariants

use apmlab::bif::{s0_pair_invariance, PairVariant};
use apmlab::models;
use apmlab::saddle::{Orientation, SaddleNormalForm};

fn main() {
    // orientable saddle with beta1 = 0.3, tau = 0 model
    let saddle = SaddleNormalForm::new(0.5, Orientation::Preserving, vec![0.3]).unwrap();
    let tangency = models::reference_symplectic(0.0);
    let coeffs = tangency.global.taylor();
    println!("orientable shifts at tau = 0 (c x+ = y-):");
    for (name, variant) in [
        ("M+ -> T0(M+)   ", PairVariant::OrientableShiftOnMPlus),
        ("M- -> T0^-1(M-)", PairVariant::OrientableShiftOnMMinus),
    ] {
        let r = s0_pair_invariance(&coeffs, &saddle, variant, 1).unwrap();
        println!(
            "  {name}: s0 = {:+.12}  s0' = {:+.12}  |diff| = {:.2e}",
            r.s0,
            r.s0_transformed,
            (r.s0 - r.s0_transformed).abs()
        );
    }

    // away from tau = 0 the M- shift carries a predicted defect
    let skew = models::reference_with_alpha(0.35, 0.0);
    let coeffs = skew.global.taylor();
    let r = s0_pair_invariance(&coeffs, &saddle, PairVariant::OrientableShiftOnMMinus, 1).unwrap();
    println!("\nsame shift at alpha = 0.35:");
    println!(
        "  s0' - s0 = {:+.10}, predicted defect d beta1 x+ y- (c x+ - y-) = {:+.10}",
        r.s0_transformed - r.s0,
        r.predicted_defect.unwrap()
    );

    // locally non-orientable: double shifts between needed-type pairs
    let lnor = models::locally_nonorientable_h331(0.0, 1.0);
    let coeffs = lnor.global.taylor();
    println!("\nnon-orientable saddle, needed-type double shifts:");
    for (name, variant) in [
        ("(T0^2(M+), M-)        ", PairVariant::ReversingDoubleOnMPlus),
        ("(M+, T0^-2(M-))       ", PairVariant::ReversingDoubleOnMMinus),
        ("(T0(M+), T0^-1(M-))   ", PairVariant::ReversingMixed),
    ] {
        let r = s0_pair_invariance(&coeffs, &lnor.saddle, variant, 1).unwrap();
        println!(
            "  {name}: s0'' = {:+.12}  |s0'' - s0| = {:.2e}",
            r.s0_transformed,
            (r.s0 - r.s0_transformed).abs()
        );
    }
    let r = s0_pair_invariance(&coeffs, &lnor.saddle, PairVariant::ReversingSingleStep, 1).unwrap();
    println!(
        "  single step (not needed-type): s0' = {:+.12} (first summand of s0 is shift-invariant)",
        r.s0_transformed
    );
}
