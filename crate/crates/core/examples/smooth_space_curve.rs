//! Two crossing lines in P^3 linked to a smooth residual curve, for a few
//! sampling seeds.

use cycle_sieve::field::make_field;
use cycle_sieve::geometry::SubschemeSpec;
use cycle_sieve::poly::MPoly;
use cycle_sieve::smoothing::{smooth_p3, verify_certificate, SearchMode, SmoothingOptions, Witness};

fn main() -> cycle_sieve::Result<()> {
    let f2 = make_field(2, 1)?;
    let gens = ["x0", "x1*x2"]
        .iter()
        .map(|g| MPoly::parse(&f2, 4, g))
        .collect::<cycle_sieve::Result<Vec<_>>>()?;
    let z = SubschemeSpec::new("two lines", 4, gens)?;
    for seed in 0..3 {
        let opts = SmoothingOptions {
            mode: SearchMode::Sample,
            seed,
            ..Default::default()
        };
        let cert = smooth_p3(&z, 4, 4, &opts)?;
        let Witness::Space { sigma, sigma_prime } = &cert.witness else {
            unreachable!()
        };
        let ok = verify_certificate(&cert, 4)?.passed;
        println!("seed {seed}: degrees {:?}", cert.degrees);
        println!("  V({}) = Z + Z2", sigma.join(", "));
        println!("  Z1 = V({})  verified: {ok}", sigma_prime.join(", "));
    }
    Ok(())
}
