//! Plane quintics over F_2 through a rational point: smooth away from the
//! point with density near 9/32.

use cycle_sieve::density::{containment_density, DensityConfig};
use cycle_sieve::field::make_field;
use cycle_sieve::geometry::specfile::parse_spec;

fn main() -> cycle_sieve::Result<()> {
    let spec = parse_spec("2 1 2\n[Z]\nlabel: P\npoint: 0, 0, 1\n")?;
    let z = spec.z.unwrap();
    let f2 = make_field(2, 1)?;
    let rep = containment_density(&z, &DensityConfig::new(&f2, 2, 3), &[3, 4, 5])?;
    for run in &rep.runs {
        println!(
            "d = {}: dim H0(I_Z(d)) = {}, empirical {:.6}",
            run.d,
            run.system.dim,
            run.empirical_value()
        );
    }
    println!("limit {:?}", rep.predicted_limit);
    Ok(())
}
