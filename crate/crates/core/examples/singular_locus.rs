//! The Jacobian criterion on a few plane curves and a space curve.

use cycle_sieve::field::make_field;
use cycle_sieve::geometry::singular_closed_points;
use cycle_sieve::poly::MPoly;
use cycle_sieve::Budget;

fn main() -> cycle_sieve::Result<()> {
    let budget = Budget::default();
    for p in [2, 3, 5] {
        let f = make_field(p, 1)?;
        let nodal = MPoly::parse(&f, 3, "x1^2*x2 - x0^3 - x0^2*x2")?;
        let cusp = MPoly::parse(&f, 3, "x1^2*x2 - x0^3")?;
        for (name, g) in [("nodal", &nodal), ("cuspidal", &cusp)] {
            let sing = singular_closed_points(&f, std::slice::from_ref(g), 1, 4, &budget)?;
            let shown: Vec<String> = sing.iter().map(|x| x.format(&f)).collect();
            println!("F_{p} {name:>8} cubic: singular at {shown:?}");
        }
    }

    let f2 = make_field(2, 1)?;
    let gens = vec![MPoly::parse(&f2, 4, "x0")?, MPoly::parse(&f2, 4, "x1*x2")?];
    let sing = singular_closed_points(&f2, &gens, 2, 4, &budget)?;
    println!("V(x0, x1*x2) in P^3 is singular at {:?}", sing.iter().map(|x| x.format(&f2)).collect::<Vec<_>>());
    Ok(())
}
