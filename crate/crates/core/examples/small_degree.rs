//! Exact count of plane quintics over F_2 that are smooth at every
//! rational point, against (1 - 2^-3)^7, then with [1:0:0] avoided.

use std::time::Instant;

use cycle_sieve::density::{exact_small_degree_check, DensityConfig};
use cycle_sieve::field::make_field;
use cycle_sieve::geometry::{ClosedPoint, ProjPoint};

fn main() -> cycle_sieve::Result<()> {
    let f2 = make_field(2, 1)?;
    let mut cfg = DensityConfig::new(&f2, 2, 5);
    let t = Instant::now();
    let rep = exact_small_degree_check(&cfg, 1)?;
    println!(
        "{} of {} sections: {:?} vs {:?}, equal = {} ({:.1?})",
        rep.counted,
        rep.total,
        rep.lhs,
        rep.rhs,
        rep.equal,
        t.elapsed()
    );

    let e1 = f2.extension(1)?;
    let x = ProjPoint::normalize(&e1, &[1, 0, 0]).unwrap();
    cfg.avoid = vec![ClosedPoint::from_point(&f2, &x)?];
    let rep = exact_small_degree_check(&cfg, 1)?;
    println!("avoiding [1:0:0]: {:?} vs {:?}, equal = {}", rep.lhs, rep.rhs, rep.equal);
    Ok(())
}
