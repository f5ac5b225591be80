//! Forms vanishing on a subscheme, jet maps and the surjectivity onset.

use cycle_sieve::field::make_field;
use cycle_sieve::geometry::specfile::parse_spec;
use cycle_sieve::sections::{finite_length, graded_ideal_piece, surjectivity_onset, twist_constant, vanishing_system};
use cycle_sieve::Budget;

const SPEC: &str = "\
2 1 2
[Z]
label: two lines
gen: x0*x1
[S]
jet: 1, 0, 0
jet: 0, 1, 0
point@2: [0,1], 1, 0
";

fn main() -> cycle_sieve::Result<()> {
    let spec = parse_spec(SPEC)?;
    let f2 = make_field(2, 1)?;
    let z = spec.z.as_ref().unwrap();
    for d in 1..=4 {
        let ideal = graded_ideal_piece(&z.generators, d)?;
        let vanishing = vanishing_system(&f2, z, d, None, &Budget::default())?;
        println!(
            "d = {d}: dim I_Z(d) = {}, forms vanishing at the points of Z = {} (certified: {})",
            ideal.dim(),
            vanishing.system.dim(),
            vanishing.certified
        );
    }

    let s = &spec.s.as_ref().unwrap().points;
    let h0 = finite_length(s);
    let c = twist_constant(2, 0);
    let onset = surjectivity_onset(&f2, 2, s, 0, 10)?;
    println!("h0(S) = {h0}, bound c + h0 = {}, measured onset = {onset:?}", c as u64 + h0);
    Ok(())
}
