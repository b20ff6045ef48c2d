//! Tangency classes and strip/horseshoe intersection structure.
//!
//! Prints the invariants (tau, alpha, s0) and class tags for one model per
//! class cell, then the margin-based verdict grid for two illustrative
//! models, cross-checked against the brute-force geometric oracle.
//!
//! Run with: cargo run --example horseshoe_classes

use apmlab::models;
use apmlab::semilocal::{
    compute_profile, geometric_intersection, intersection_classify, GeomVerdict, Verdict,
};

fn verdict_char(v: Verdict) -> char {
    match v {
        Verdict::Regular => 'R',
        Verdict::Empty => '.',
        Verdict::Borderline => '?',
    }
}

fn geom_char(v: GeomVerdict) -> char {
    match v {
        GeomVerdict::Regular => 'R',
        GeomVerdict::Empty => '.',
        GeomVerdict::Irregular => '?',
    }
}

fn main() {
    println!("class table (one specimen per cell):");
    for (name, model) in [
        ("class 1 ", models::class1()),
        ("class 2 ", models::class2()),
        ("H3_1    ", models::h3_1(0.5)),
        ("H3_3_1  ", models::locally_nonorientable_h331(-3.5, 0.4)),
        ("H3_3_2  ", models::locally_nonorientable_h332(0.3)),
    ] {
        let p = compute_profile(&model).expect("profile");
        println!(
            "  {name} -> {:8}  tau = {:+.3}  alpha = {:+.3}  s0 = {:+.3}  kbar = {}",
            p.class_tag.as_str(),
            p.tau,
            p.alpha,
            p.s0,
            p.kbar
        );
    }

    for (name, model) in [("H3_1 with tau = +0.5", models::h3_1(0.5)), ("H3_1 with tau = -0.7", models::h3_1(-0.7))] {
        let p = compute_profile(&model).expect("profile");
        let kbar = p.kbar;
        println!("\n{name}: classifier (left) vs geometric oracle (right), i down, j across");
        print!("      ");
        for j in kbar..kbar + 6 {
            print!("{j:>3}");
        }
        println!();
        for i in kbar..kbar + 6 {
            print!("i={i:>3} ");
            for j in kbar..kbar + 6 {
                let v = intersection_classify(&model, i, j, 1.0, kbar).verdict;
                print!("  {}", verdict_char(v));
            }
            print!("   |");
            for j in kbar..kbar + 6 {
                let (g, _) = geometric_intersection(&model, i, j);
                print!("  {}", geom_char(g));
            }
            println!();
        }
    }
    println!("\nR = regular intersection, . = empty, ? = borderline/irregular");
}
