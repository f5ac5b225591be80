//! Per-point singular proportions and the medium-degree tail.

use cycle_sieve::density::{singular_at_point_proportion, tail_measurement, DensityConfig};
use cycle_sieve::field::make_field;
use cycle_sieve::geometry::{ClosedPoint, ProjPoint};

fn main() -> cycle_sieve::Result<()> {
    let f2 = make_field(2, 1)?;
    let e1 = f2.extension(1)?;
    let rational = ClosedPoint::from_point(&f2, &ProjPoint::normalize(&e1, &[1, 0, 0]).unwrap())?;
    let rep = singular_at_point_proportion(&rational, &DensityConfig::new(&f2, 2, 3))?;
    println!("rational point, d = 3: predicted {:?}, counted {:?}", rep.predicted, rep.empirical);

    let e2 = f2.extension(2)?;
    let quadratic = ClosedPoint::from_point(&f2, &ProjPoint::normalize(&e2, &[1, 2, 0]).unwrap())?;
    let rep = singular_at_point_proportion(&quadratic, &DensityConfig::new(&f2, 2, 9))?;
    println!("degree-2 point, d = 9: rank-based {:?}", rep.rank_based);

    let tail = tail_measurement(&DensityConfig::new(&f2, 1, 12), &[1, 2, 3, 4, 5, 6, 7, 8])?;
    print!("{}", tail.to_csv());
    println!("fitted C = {:.3}", tail.fitted_c.0);
    Ok(())
}
