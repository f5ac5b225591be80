//! A nodal cubic over F_3 as a difference of smooth curves, and the
//! certificate checked again from scratch.

use cycle_sieve::field::make_field;
use cycle_sieve::poly::MPoly;
use cycle_sieve::smoothing::{smooth_p2, verify_certificate, SmoothingOptions, Witness};

fn main() -> cycle_sieve::Result<()> {
    let f3 = make_field(3, 1)?;
    let z = MPoly::parse(&f3, 3, "x1^2*x2 - x0^3 - x0^2*x2")?;
    let cert = smooth_p2(&z, 4, &SmoothingOptions::default())?;
    if let Witness::Plane { beta, sigma_prime, .. } = &cert.witness {
        println!("d = {:?}", cert.degrees);
        println!("Z2 = div({beta})");
        println!("Z1 = div({sigma_prime})");
    }
    let log = verify_certificate(&cert, 6)?;
    for c in &log.clauses {
        println!("({}) {:<12} {}", c.clause, c.name, if c.passed { "pass" } else { "FAIL" });
    }
    Ok(())
}
