//! Point counts, closed points and inverse zeta values.

use cycle_sieve::field::make_field;
use cycle_sieve::geometry::point_counts;
use cycle_sieve::poly::MPoly;
use cycle_sieve::zeta::{mobius_invert, pn_point_counts, to_f64, zeta_inv_pn, zeta_inv_truncated};
use cycle_sieve::Budget;

fn main() -> cycle_sieve::Result<()> {
    let f2 = make_field(2, 1)?;
    let budget = Budget::default();

    let pn = pn_point_counts(2, 2, 6);
    println!("#P^2(F_2^e), e = 1..6: {pn:?}");
    println!("closed points by degree: {:?}", mobius_invert(&pn)?);

    let cubic = MPoly::parse(&f2, 3, "x1^2*x2 + x0^3 + x0^2*x2")?;
    let counts = point_counts(&f2, 3, std::slice::from_ref(&cubic), 6, &budget)?;
    println!("nodal cubic over F_2^e: {counts:?}");

    let exact = zeta_inv_pn(2, 2, 3)?;
    println!("zeta_P2(3)^-1 = {exact}");
    let closed = mobius_invert(&pn)?;
    for r in [2usize, 4, 6] {
        let t = zeta_inv_truncated(&closed, 2, 3, r)?;
        println!("  truncated at {r}: {:.6}", to_f64(&t));
    }
    Ok(())
}
