//! Symbolic codes: admissibility rules against orbit shooting.
//!
//! For a second-class model every code is admissible and every code is
//! realized by a periodic orbit; for H3_1 with tau = 0.5 the gap rule
//! k_s - k_{s+1} + [tau] + 1/2 > 0 decides, and multi-shooting confirms
//! presence/absence block pair by block pair.
//!
//! Run with: cargo run --example symbolic_orbits

use apmlab::models;
use apmlab::semilocal::{admissible_code, code_to_orbit, compute_profile, Leg, OrbitOutcome, SymbolCode};

fn describe(outcome: &OrbitOutcome) -> String {
    match outcome {
        OrbitOutcome::Found(o) => format!("orbit found, period {}, residual {:.1e}", o.period, o.residual),
        OrbitOutcome::Absent { seeds_tried } => format!("certified absent ({seeds_tried} seeds)"),
        OrbitOutcome::Inconclusive { seeds_tried, best_residual } => {
            format!("inconclusive ({seeds_tried} seeds, best residual {best_residual:.1e})")
        }
    }
}

fn main() {
    let model = models::class2();
    let profile = compute_profile(&model).expect("profile");
    let kbar = profile.kbar;
    println!("second-class model (kbar = {kbar}): single-block codes\n");
    for k in kbar..kbar + 3 {
        for leg in [Leg::One, Leg::Two] {
            let code = SymbolCode::with_legs(&[k], &[leg]);
            let adm = admissible_code(&profile, &code, kbar).unwrap();
            let out = code_to_orbit(&model, &code).unwrap();
            println!("  code ({k}:{leg:?}) admissible={adm}: {}", describe(&out));
        }
    }

    let model = models::h3_1(0.5);
    let profile = compute_profile(&model).expect("profile");
    let kbar = profile.kbar;
    println!("\nH3_1 with tau = 0.5 (kbar = {kbar}): two-block codes\n");
    for k1 in kbar..kbar + 3 {
        for k2 in kbar..kbar + 3 {
            let code = SymbolCode::with_legs(&[k1, k2], &[Leg::One, Leg::Two]);
            let adm = admissible_code(&profile, &code, kbar).unwrap();
            let out = code_to_orbit(&model, &code).unwrap();
            println!("  code ({k1},{k2}) admissible={adm}: {}", describe(&out));
        }
    }

    let model = models::locally_nonorientable_h331(-3.5, 0.4);
    let profile = compute_profile(&model).expect("profile");
    let kbar = profile.kbar;
    println!("\nH3_3_1 (odd blocks only; kbar = {kbar}):\n");
    for ks in [[kbar + 1, kbar + 1], [kbar + 1, kbar + 3], [kbar, kbar + 1], [kbar + 2, kbar + 2]] {
        let ks = [if ks[0] % 2 == 0 { ks[0] + 1 } else { ks[0] }, ks[1]];
        let code = SymbolCode::with_legs(&ks, &[Leg::One, Leg::Two]);
        let adm = admissible_code(&profile, &code, kbar).unwrap();
        let out = code_to_orbit(&model, &code).unwrap();
        println!("  code {:?} admissible={adm}: {}", (ks[0], ks[1]), describe(&out));
    }
}
